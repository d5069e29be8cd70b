//! Learning nearly Pauli-sparse unitaries from Choi-state queries.
//!
//! This crate is `no_std` (it needs `alloc`). It contains exact dense
//! simulation of the query model together with the learning pipeline:
//!
//! - [`pauli`]: Pauli strings in symplectic form, sparse coefficient maps,
//!   Pauli norms and the dense decomposition / synthesis transforms.
//! - [`sim`]: dense states, Choi-state preparation, Bell-basis and
//!   computational-basis sampling.
//! - [`clifford`]: Clifford tableaux, exact uniform sampling and gate synthesis.
//! - [`shadows`]: classical shadows with random Clifford measurements and
//!   median-of-means aggregation of Bell-basis observables.
//! - [`learner`]: support recovery, coefficient estimation, truncation and the
//!   bounded-l1 variant.
//! - [`lcu`]: prepare/select block encodings and oblivious amplitude
//!   amplification.
//! - [`metrics`]: diamond, restricted-diamond and phase-aligned distances.
//! - [`zoo`]: example unitary families with analytic certificates.
//! - [`harness`]: brute-force oracles and repeated-trial statistics.
//!
//! Qubit 0 is the leftmost character of a Pauli string and the most
//! significant bit of a computational basis index.
#![no_std]

extern crate alloc;

pub mod clifford;
pub mod error;
pub mod harness;
pub mod lcu;
pub mod learner;
pub mod linalg;
pub mod metrics;
pub mod pauli;
pub mod rng;
pub mod shadows;
pub mod sim;
pub mod zoo;

use core::sync::atomic::{AtomicUsize, Ordering};

pub use error::{Error, Result};
pub use linalg::{DenseOperator, C64};
pub use pauli::{PauliMap, PauliString};
pub use sim::{DenseState, QueryCounter};

/// Default limit on the number of qubits of any dense state.
///
/// Operators on `n` qubits are only accepted when their Choi state fits,
/// i.e. when `2n` is within the cap.
pub const DEFAULT_DENSE_CAP: usize = 12;

static DENSE_CAP: AtomicUsize = AtomicUsize::new(DEFAULT_DENSE_CAP);

/// Current dense-state qubit cap.
pub fn dense_cap() -> usize {
    DENSE_CAP.load(Ordering::Relaxed)
}

/// Override the dense-state qubit cap (for machines with more memory).
pub fn set_dense_cap(qubits: usize) {
    DENSE_CAP.store(qubits.min(pauli::MAX_QUBITS), Ordering::Relaxed);
}

pub(crate) fn check_state_cap(qubits: usize) -> Result<()> {
    let cap = dense_cap();
    if qubits > cap {
        return Err(Error::ExceedsCap { qubits, cap });
    }
    Ok(())
}

pub(crate) fn check_operator_cap(qubits: usize) -> Result<()> {
    let cap = dense_cap();
    if 2 * qubits > cap {
        return Err(Error::ExceedsCap {
            qubits: 2 * qubits,
            cap,
        });
    }
    Ok(())
}
