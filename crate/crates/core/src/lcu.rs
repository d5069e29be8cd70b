//! Prepare/select block encodings of a sparse Pauli expansion.
//!
//! With ancilla register first, `W = (A†⊗I) V (A⊗I)` has `Û/a` as its
//! top-left `N×N` block, where `A` prepares `Σ √(|α̂_s|/a) |s>` and `V`
//! applies `(α̂_s/|α̂_s|) σ^s` controlled on `|s>`.

use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{DenseOperator, C64};
use crate::pauli::{PauliMap, PauliString};

/// Relative slack accepted when comparing a subnormalization with `‖α̂‖_{1,P}`.
const SUBNORM_TOL: f64 = 1e-12;

/// One ancilla slot of the select register.
#[derive(Clone, Debug, PartialEq)]
struct Slot {
    pauli: PauliString,
    phase: C64,
    weight: f64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct LcuSpec {
    pub coeffs: PauliMap,
    /// Subnormalization. At least `‖coeffs‖_{1,P}`.
    pub a: f64,
    /// Ancilla qubits.
    pub m: usize,
    /// Known `ℓ1,P` distance to a unitary.
    pub gamma: Option<f64>,
    slots: Vec<Slot>,
}

impl LcuSpec {
    /// Spec with `a = ‖coeffs‖_{1,P}`. Every stored coefficient must be nonzero.
    pub fn new(coeffs: PauliMap) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(Error::EmptyInput);
        }
        let mut slots = Vec::with_capacity(coeffs.len());
        for (p, c) in coeffs.iter() {
            let w = c.norm();
            if w == 0.0 {
                return Err(Error::ZeroCoefficient);
            }
            slots.push(Slot {
                pauli: p,
                phase: c / w,
                weight: w,
            });
        }
        let a = coeffs.norms().l1;
        let m = ancillas_for(slots.len());
        let spec = Self {
            coeffs,
            a,
            m,
            gamma: None,
            slots,
        };
        crate::check_operator_cap(spec.m + spec.n())?;
        Ok(spec)
    }

    /// Spec for a learned map: exact zeros are dropped first.
    pub fn from_learned(coeffs: PauliMap) -> Result<Self> {
        Self::new(coeffs.pruned(0.0))
    }

    /// Raise the subnormalization to `a`.
    ///
    /// The surplus `a - ‖α̂‖_{1,P}` is split over two extra slots selecting
    /// `+I` and `-I`, which cancel in the block.
    pub fn with_subnormalization(mut self, a: f64) -> Result<Self> {
        let l1 = self.coeffs.norms().l1;
        if !(a.is_finite() && a >= l1 * (1.0 - SUBNORM_TOL)) {
            return Err(Error::InvalidParameter(alloc::format!(
                "subnormalization {a} below l1 norm {l1}"
            )));
        }
        self.slots.truncate(self.coeffs.len());
        let surplus = a - l1;
        if surplus > l1 * SUBNORM_TOL {
            let id = PauliString::identity(self.n());
            for sign in [1.0, -1.0] {
                self.slots.push(Slot {
                    pauli: id,
                    phase: C64::new(sign, 0.0),
                    weight: surplus / 2.0,
                });
            }
        }
        self.a = a;
        self.m = ancillas_for(self.slots.len());
        crate::check_operator_cap(self.m + self.n())?;
        Ok(self)
    }

    pub fn with_gamma(mut self, gamma: f64) -> Self {
        self.gamma = Some(gamma);
        self
    }

    pub fn n(&self) -> usize {
        self.coeffs.n()
    }

    /// Slots in use, including padding.
    pub fn slot_count(&self) -> usize {
        self.slots.len()
    }

    fn total_qubits(&self) -> usize {
        self.m + self.n()
    }
}

fn ancillas_for(slots: usize) -> usize {
    let mut m = 0;
    while (1usize << m) < slots {
        m += 1;
    }
    m
}

/// Householder reflection taking `|0^m>` to the amplitude column.
pub fn build_prepare(spec: &LcuSpec) -> Result<DenseOperator> {
    let dim = 1usize << spec.m;
    let mut v = vec![0.0; dim];
    for (i, s) in spec.slots.iter().enumerate() {
        v[i] = (s.weight / spec.a).sqrt();
    }
    let nrm = v.iter().map(|x| x * x).sum::<f64>().sqrt();
    if nrm == 0.0 {
        return Err(Error::ZeroCoefficient);
    }
    for x in &mut v {
        *x /= nrm;
    }
    let mut out = DenseOperator::identity(spec.m);
    // u = e0 - v; H = I - 2uu†/(u†u) maps e0 to v.
    let mut u = v.iter().map(|x| -x).collect::<Vec<_>>();
    u[0] += 1.0;
    let uu = u.iter().map(|x| x * x).sum::<f64>();
    if uu > 1e-30 {
        for r in 0..dim {
            for c in 0..dim {
                let val = out.get(r, c).re - 2.0 * u[r] * u[c] / uu;
                out.set(r, c, C64::new(val, 0.0));
            }
        }
    }
    Ok(out)
}

/// Block-diagonal select: slot `i` applies `phase_i σ_i`, unused slots identity.
pub fn build_select(spec: &LcuSpec) -> Result<DenseOperator> {
    let n = spec.n();
    let big = 1usize << n;
    let mut out = DenseOperator::zeros(spec.total_qubits());
    for slot in 0..(1usize << spec.m) {
        let base = slot * big;
        match spec.slots.get(slot) {
            Some(s) => {
                if s.weight == 0.0 {
                    return Err(Error::ZeroCoefficient);
                }
                for c in 0..big {
                    let (ph, r) = s.pauli.apply_to_basis(c as u64);
                    out.set(base + r as usize, base + c, ph * s.phase);
                }
            }
            None => {
                for c in 0..big {
                    out.set(base + c, base + c, C64::new(1.0, 0.0));
                }
            }
        }
    }
    Ok(out)
}

/// `W = (A†⊗I) V (A⊗I)` on ancillas then system.
pub fn build_w(spec: &LcuSpec) -> Result<DenseOperator> {
    let a = build_prepare(spec)?;
    let id = DenseOperator::identity(spec.n());
    let v = build_select(spec)?;
    a.adjoint().kron(&id).matmul(&v)?.matmul(&a.kron(&id))
}

/// Top-left `N×N` block of an operator on ancillas then system.
pub fn top_left_block(op: &DenseOperator, n: usize) -> Result<DenseOperator> {
    let big = 1usize << n;
    if op.dim() < big {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: op.qubits(),
        });
    }
    let mut out = DenseOperator::zeros(n);
    for r in 0..big {
        for c in 0..big {
            out.set(r, c, op.get(r, c));
        }
    }
    Ok(out)
}

/// `(<0^m|⊗I) W (|0^m>⊗I)`, equal to `Û/a`.
pub fn effective_block(spec: &LcuSpec) -> Result<DenseOperator> {
    top_left_block(&build_w(spec)?, spec.n())
}

/// Apply the amplification iterate `G = -W R W† R` (with `R = 2Π - I`,
/// `Π = |0^m><0^m|⊗I`) `rounds` times to `W`.
///
/// One round maps the block `B` to `3B - 4BB†B`.
pub fn amplify(spec: &LcuSpec, rounds: usize) -> Result<DenseOperator> {
    let gamma = spec.gamma.unwrap_or(0.0);
    if 1.0 + gamma > spec.a * (1.0 + SUBNORM_TOL) {
        return Err(Error::Precondition(alloc::format!(
            "amplification needs 1 + gamma <= a (gamma {gamma}, a {})",
            spec.a
        )));
    }
    let w = build_w(spec)?;
    if rounds == 0 {
        return Ok(w);
    }
    let big = 1usize << spec.n();
    let mut r = DenseOperator::identity(spec.total_qubits()).scale(C64::new(-1.0, 0.0));
    for i in 0..big {
        r.set(i, i, C64::new(1.0, 0.0));
    }
    let g = w
        .matmul(&r)?
        .matmul(&w.adjoint())?
        .matmul(&r)?
        .scale(C64::new(-1.0, 0.0));
    let mut out = w;
    for _ in 0..rounds {
        out = g.matmul(&out)?;
    }
    Ok(out)
}

/// Rounds bringing `sin((2t+1) asin(1/a))` closest to 1.
pub fn oaa_rounds(a: f64) -> usize {
    if a <= 1.0 {
        return 0;
    }
    let theta = (1.0 / a).asin();
    (PI / (4.0 * theta) - 0.5).round().max(0.0) as usize
}

/// Smallest round count `t` and subnormalization `a' ≥ a` with
/// `(2t+1) asin(1/a') = π/2`, which makes amplification exact for unitary `Û`.
pub fn exact_schedule(a: f64) -> (usize, f64) {
    if a <= 1.0 {
        return (0, 1.0);
    }
    let theta = (1.0 / a).asin();
    let t = (PI / (4.0 * theta) - 0.5 - 1e-12).ceil().max(0.0) as usize;
    let padded = 1.0 / (PI / (2.0 * (2 * t + 1) as f64)).sin();
    (t, padded.max(a))
}

/// Amplified block after padding to the exact schedule.
#[derive(Clone, Debug, PartialEq)]
pub struct Amplified {
    pub block: DenseOperator,
    pub rounds: usize,
    /// Subnormalization after padding.
    pub a: f64,
}

/// Pad `a` up to at least `1 + γ` and then to the exact schedule, amplify,
/// and return the block.
pub fn amplified_block(spec: &LcuSpec) -> Result<Amplified> {
    let gamma = spec.gamma;
    let (rounds, padded) = exact_schedule(spec.a.max(1.0 + gamma.unwrap_or(0.0)));
    let mut spec = spec.clone().with_subnormalization(padded)?;
    spec.gamma = gamma;
    Ok(Amplified {
        block: top_left_block(&amplify(&spec, rounds)?, spec.n())?,
        rounds,
        a: padded,
    })
}

/// Post-selection probability averaged over system inputs: `‖B‖_F² / N`.
pub fn success_probability(spec: &LcuSpec) -> Result<f64> {
    let b = effective_block(spec)?;
    Ok(b.frobenius_norm().powi(2) / b.dim() as f64)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct GateEstimate {
    /// Rotations for a generic `m`-qubit state preparation.
    pub prepare: usize,
    /// Controlled single-qubit Paulis plus one phase per slot.
    pub select: usize,
}

/// Structural gate counts for one use of `W` (`A`, `V`, `A†`).
pub fn gate_estimate(spec: &LcuSpec) -> GateEstimate {
    let select = spec.slots.iter().map(|s| s.pauli.weight() as usize + 1).sum();
    GateEstimate {
        prepare: 2 * ((1usize << spec.m) - 1),
        select,
    }
}
