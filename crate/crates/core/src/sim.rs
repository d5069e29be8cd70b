//! Dense statevector engine and the query model.
//!
//! Choi states use the block layout `[A | R]`: system qubits `0..n` followed by
//! reference qubits `n..2n`, so amplitude `a·N + r` of `|J(U)>` is
//! `U[a][r] / √N`. Bell pairs are `(i, n + i)`.

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{norm2, DenseOperator, C64, ZERO};
use crate::pauli::PauliString;

/// Tolerance for normalization and unitarity checks.
pub const NORM_TOL: f64 = 1e-10;

#[derive(Clone, Debug, PartialEq)]
pub struct DenseState {
    qubits: usize,
    amps: Vec<C64>,
}

impl DenseState {
    /// `|0…0>` on `qubits` qubits.
    pub fn zero(qubits: usize) -> Result<Self> {
        crate::check_state_cap(qubits)?;
        let mut amps = vec![ZERO; 1 << qubits];
        amps[0] = C64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    pub fn basis(qubits: usize, index: usize) -> Result<Self> {
        crate::check_state_cap(qubits)?;
        if index >= 1 << qubits {
            return Err(Error::InvalidParameter("basis index out of range".to_string()));
        }
        let mut amps = vec![ZERO; 1 << qubits];
        amps[index] = C64::new(1.0, 0.0);
        Ok(Self { qubits, amps })
    }

    /// Normalized amplitudes of length `2^k`.
    pub fn from_amplitudes(amps: Vec<C64>) -> Result<Self> {
        let s = Self::from_amplitudes_unnormalized(amps)?;
        let nrm = s.norm();
        if (nrm - 1.0).abs() > NORM_TOL {
            return Err(Error::InvalidParameter(alloc::format!("state norm {nrm} is not 1")));
        }
        Ok(s)
    }

    /// Any vector of length `2^k`; used for images under non-unitary maps.
    pub fn from_amplitudes_unnormalized(amps: Vec<C64>) -> Result<Self> {
        let qubits = crate::linalg::qubits_for_dim(amps.len())?;
        crate::check_state_cap(qubits)?;
        Ok(Self { qubits, amps })
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        self.amps.len()
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm(&self) -> f64 {
        norm2(&self.amps)
    }

    pub fn inner(&self, other: &Self) -> C64 {
        crate::linalg::inner(&self.amps, &other.amps)
    }

    #[inline]
    fn bit(&self, q: usize) -> usize {
        1 << (self.qubits - 1 - q)
    }

    /// Apply `op` (on `targets.len()` qubits) to the listed qubits.
    ///
    /// `targets[0]` is the most significant qubit of `op`'s index.
    pub fn apply(&mut self, op: &DenseOperator, targets: &[usize]) -> Result<()> {
        let m = targets.len();
        if op.qubits() != m {
            return Err(Error::BadTargets(alloc::format!(
                "operator acts on {} qubits but {m} targets given",
                op.qubits()
            )));
        }
        for (i, &t) in targets.iter().enumerate() {
            if t >= self.qubits {
                return Err(Error::BadTargets(alloc::format!("qubit {t} out of range")));
            }
            if targets[..i].contains(&t) {
                return Err(Error::BadTargets(alloc::format!("qubit {t} repeated")));
            }
        }
        let bits: Vec<usize> = targets.iter().map(|&t| self.bit(t)).collect();
        let tmask: usize = bits.iter().sum();
        let sub = 1usize << m;
        let offsets: Vec<usize> = (0..sub)
            .map(|j| {
                (0..m)
                    .filter(|&i| j >> (m - 1 - i) & 1 == 1)
                    .map(|i| bits[i])
                    .sum()
            })
            .collect();
        let mut gathered = vec![ZERO; sub];
        for base in 0..self.dim() {
            if base & tmask != 0 {
                continue;
            }
            for (g, off) in gathered.iter_mut().zip(&offsets) {
                *g = self.amps[base | off];
            }
            for (r, off) in offsets.iter().enumerate() {
                let mut acc = ZERO;
                for (c, g) in gathered.iter().enumerate() {
                    acc += op.get(r, c) * g;
                }
                self.amps[base | off] = acc;
            }
        }
        Ok(())
    }

    /// Full-register operator application.
    pub fn apply_full(&mut self, op: &DenseOperator) -> Result<()> {
        if op.qubits() != self.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.qubits,
                found: op.qubits(),
            });
        }
        self.amps = op.matvec(&self.amps);
        Ok(())
    }

    pub fn apply_h(&mut self, q: usize) {
        let b = self.bit(q);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        for i in 0..self.dim() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = (a0 + a1) * r;
                self.amps[i | b] = (a0 - a1) * r;
            }
        }
    }

    pub fn apply_s(&mut self, q: usize) {
        let b = self.bit(q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & b != 0 {
                *a = C64::new(-a.im, a.re);
            }
        }
    }

    pub fn apply_cnot(&mut self, control: usize, target: usize) {
        let (cb, tb) = (self.bit(control), self.bit(target));
        for i in 0..self.dim() {
            if i & cb != 0 && i & tb == 0 {
                self.amps.swap(i, i | tb);
            }
        }
    }

    pub fn apply_x(&mut self, q: usize) {
        let b = self.bit(q);
        for i in 0..self.dim() {
            if i & b == 0 {
                self.amps.swap(i, i | b);
            }
        }
    }

    /// `Y = [[0, -i], [i, 0]]`.
    pub fn apply_y(&mut self, q: usize) {
        let b = self.bit(q);
        for i in 0..self.dim() {
            if i & b == 0 {
                let (a0, a1) = (self.amps[i], self.amps[i | b]);
                self.amps[i] = C64::new(a1.im, -a1.re);
                self.amps[i | b] = C64::new(-a0.im, a0.re);
            }
        }
    }

    pub fn apply_z(&mut self, q: usize) {
        let b = self.bit(q);
        for (i, a) in self.amps.iter_mut().enumerate() {
            if i & b != 0 {
                *a = -*a;
            }
        }
    }

    /// Apply a (phase-carrying) Pauli string.
    pub fn apply_pauli(&mut self, p: &PauliString) {
        let mut out = vec![ZERO; self.dim()];
        for (b, a) in self.amps.iter().enumerate() {
            let (amp, to) = p.apply_to_basis(b as u64);
            out[to as usize] = amp * a;
        }
        self.amps = out;
    }

    /// Outcome probabilities `|amplitude_b|^2`.
    pub fn probabilities(&self) -> Vec<f64> {
        self.amps.iter().map(|a| a.norm_sqr()).collect()
    }
}

/// Counts applications of the black-box unitary. Never decreases.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct QueryCounter {
    count: u64,
}

impl QueryCounter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn count(&self) -> u64 {
        self.count
    }

    pub(crate) fn record(&mut self, queries: u64) {
        self.count += queries;
    }
}

/// `|J(U)> = (U ⊗ I)|EPR>^{⊗n}`; one query.
pub fn prepare_choi(u: &DenseOperator, counter: &mut QueryCounter) -> Result<DenseState> {
    crate::check_operator_cap(u.qubits())?;
    u.ensure_unitary(NORM_TOL)?;
    counter.record(1);
    Ok(choi_of(u))
}

/// Choi vector of any operator, without checks or query accounting.
pub(crate) fn choi_of(u: &DenseOperator) -> DenseState {
    let scale = 1.0 / (u.dim() as f64).sqrt();
    DenseState {
        qubits: 2 * u.qubits(),
        amps: u.as_slice().iter().map(|v| v * scale).collect(),
    }
}

/// Black-box access to a hidden unitary; every Choi-state copy is one query.
#[derive(Clone, Debug)]
pub struct UnitaryOracle {
    n: usize,
    choi: DenseState,
    counter: QueryCounter,
}

impl UnitaryOracle {
    pub fn new(u: &DenseOperator) -> Result<Self> {
        let mut scratch = QueryCounter::new();
        let choi = prepare_choi(u, &mut scratch)?;
        Ok(Self {
            n: u.qubits(),
            choi,
            counter: QueryCounter::new(),
        })
    }

    pub fn qubits(&self) -> usize {
        self.n
    }

    pub fn queries(&self) -> u64 {
        self.counter.count()
    }

    pub fn counter(&self) -> QueryCounter {
        self.counter
    }

    /// Prepare `copies` fresh Choi states.
    ///
    /// All copies are identical, so the simulator hands back one
    /// representative; callers must consume it `copies` times at most.
    pub fn prepare_copies(&mut self, copies: u64) -> DenseState {
        self.counter.record(copies);
        self.choi.clone()
    }
}

/// Outcome distribution of a per-pair Bell-basis measurement.
///
/// Each pair `(i, n+i)` is rotated by CNOT(i → n+i) followed by H(i), mapping
/// `(σ^d ⊗ I)|EPR>` to `|a r>` with `(a, r) = (z, x)` of digit `d`. The result is
/// indexed by base-4 Pauli index.
pub fn bell_distribution(state: &DenseState) -> Result<Vec<f64>> {
    let k = state.qubits();
    if k % 2 != 0 {
        return Err(Error::OddQubitCount(k));
    }
    let n = k / 2;
    let mut rotated = state.clone();
    for i in 0..n {
        rotated.apply_cnot(i, n + i);
        rotated.apply_h(i);
    }
    let mut table = vec![0.0; 1 << (2 * n)];
    for (b, a) in rotated.amps.iter().enumerate() {
        let z = (b >> n) as u64;
        let x = (b & ((1 << n) - 1)) as u64;
        let p = PauliString::from_masks(n, x, z)?;
        table[p.index() as usize] += a.norm_sqr();
    }
    Ok(table)
}

/// Inverse-CDF sampler over a finite distribution.
pub(crate) struct Categorical {
    cdf: Vec<f64>,
}

impl Categorical {
    pub(crate) fn new(weights: &[f64]) -> Self {
        let mut acc = 0.0;
        let cdf = weights
            .iter()
            .map(|w| {
                acc += w;
                acc
            })
            .collect();
        Self { cdf }
    }

    pub(crate) fn sample<R: Rng + ?Sized>(&self, rng: &mut R) -> usize {
        let total = *self.cdf.last().expect("non-empty");
        let u = rng.gen::<f64>() * total;
        let i = self.cdf.partition_point(|c| *c <= u);
        // skip zero-weight tail entries reached through rounding
        let mut i = i.min(self.cdf.len() - 1);
        while i > 0 && self.cdf[i] == self.cdf[i - 1] {
            i -= 1;
        }
        i
    }
}

/// `shots` i.i.d. Bell-basis outcomes, one per fresh copy of `state`.
pub fn bell_sample<R: Rng + ?Sized>(state: &DenseState, rng: &mut R, shots: usize) -> Result<Vec<PauliString>> {
    let n = state.qubits() / 2;
    let dist = bell_distribution(state)?;
    let sampler = Categorical::new(&dist);
    (0..shots)
        .map(|_| PauliString::from_index(n, sampler.sample(rng) as u64))
        .collect()
}

/// One computational-basis measurement.
pub fn measure_computational<R: Rng + ?Sized>(state: &DenseState, rng: &mut R) -> u64 {
    let u = rng.gen::<f64>() * state.norm().powi(2);
    let mut acc = 0.0;
    let mut last_nonzero = 0;
    for (b, a) in state.amps.iter().enumerate() {
        let p = a.norm_sqr();
        if p > 0.0 {
            last_nonzero = b;
        }
        acc += p;
        if u < acc {
            return b as u64;
        }
    }
    last_nonzero as u64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ONE;
    use crate::pauli::decompose;
    use crate::rng::stream;

    fn x_gate() -> DenseOperator {
        PauliString::single(1, 0, 1).unwrap().dense()
    }

    fn hadamard() -> DenseOperator {
        let r = core::f64::consts::FRAC_1_SQRT_2;
        DenseOperator::from_rows(&[
            vec![C64::new(r, 0.0), C64::new(r, 0.0)],
            vec![C64::new(r, 0.0), C64::new(-r, 0.0)],
        ])
        .unwrap()
    }

    #[test]
    fn choi_of_identity_and_x() {
        let mut c = QueryCounter::new();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let close = |a: &[C64], b: [f64; 4]| a.iter().zip(b).all(|(x, y)| (x - y).norm() < 1e-15);
        let j = prepare_choi(&DenseOperator::identity(1), &mut c).unwrap();
        assert!(close(j.amplitudes(), [r, 0.0, 0.0, r]));
        let j = prepare_choi(&x_gate(), &mut c).unwrap();
        // (|10> + |01>)/√2
        assert!(close(j.amplitudes(), [0.0, r, r, 0.0]));
        assert_eq!(c.count(), 2);
    }

    #[test]
    fn choi_rejects_non_unitary() {
        let mut c = QueryCounter::new();
        let m = DenseOperator::identity(1).scale(C64::new(0.5, 0.0));
        assert!(matches!(prepare_choi(&m, &mut c), Err(Error::NotUnitary(_))));
        assert_eq!(c.count(), 0);
    }

    #[test]
    fn bell_distribution_of_pauli_z_is_a_point_mass() {
        let mut c = QueryCounter::new();
        let z = PauliString::single(1, 0, 3).unwrap().dense();
        let j = prepare_choi(&z, &mut c).unwrap();
        let mut rng = stream(1, "sim-test", 0);
        let shots = bell_sample(&j, &mut rng, 200).unwrap();
        assert!(shots.iter().all(|s| s.label() == "Z"));
    }

    #[test]
    fn bell_distribution_equals_squared_coefficients() {
        let mut rng = stream(2, "sim-test", 0);
        for n in 1..=3 {
            let u = DenseOperator::random_unitary(n, &mut rng);
            let j = choi_of(&u);
            let dist = bell_distribution(&j).unwrap();
            let coeffs = decompose(&u).unwrap();
            for (idx, p) in dist.iter().enumerate() {
                let s = PauliString::from_index(n, idx as u64).unwrap();
                assert!((p - coeffs.get(&s).norm_sqr()).abs() < 1e-10);
            }
        }
    }

    #[test]
    fn hadamard_choi_overlaps() {
        let j = choi_of(&hadamard());
        let dist = bell_distribution(&j).unwrap();
        assert!((dist[1] - 0.5).abs() < 1e-12 && (dist[3] - 0.5).abs() < 1e-12);
    }

    #[test]
    fn bell_sample_rejects_odd_registers() {
        let s = DenseState::zero(3).unwrap();
        let mut rng = stream(3, "sim-test", 0);
        assert!(matches!(bell_sample(&s, &mut rng, 1), Err(Error::OddQubitCount(3))));
    }

    #[test]
    fn apply_gates_on_basis_states() {
        let mut s = DenseState::zero(2).unwrap();
        s.apply(&x_gate(), &[0]).unwrap();
        assert_eq!(s.amplitudes()[0b10], ONE);
        let cnot = DenseOperator::from_rows(&[
            vec![ONE, ZERO, ZERO, ZERO],
            vec![ZERO, ONE, ZERO, ZERO],
            vec![ZERO, ZERO, ZERO, ONE],
            vec![ZERO, ZERO, ONE, ZERO],
        ])
        .unwrap();
        s.apply(&cnot, &[0, 1]).unwrap();
        assert_eq!(s.amplitudes()[0b11], ONE);
        // reversed targets: control is qubit 1
        let mut t = DenseState::basis(2, 0b01).unwrap();
        t.apply(&cnot, &[1, 0]).unwrap();
        assert_eq!(t.amplitudes()[0b11], ONE);
    }

    #[test]
    fn apply_rejects_bad_targets() {
        let mut s = DenseState::zero(2).unwrap();
        assert!(s.apply(&x_gate(), &[2]).is_err());
        assert!(s.apply(&DenseOperator::identity(2), &[0, 0]).is_err());
        assert!(s.apply(&DenseOperator::identity(2), &[0]).is_err());
    }

    #[test]
    fn apply_then_inverse_restores_state() {
        let mut rng = stream(4, "sim-test", 0);
        let u = DenseOperator::random_unitary(2, &mut rng);
        let psi = DenseState::from_amplitudes(
            DenseOperator::random_unitary(3, &mut rng).column(0),
        )
        .unwrap();
        let mut s = psi.clone();
        s.apply(&u, &[2, 0]).unwrap();
        assert!((s.norm() - 1.0).abs() < 1e-12);
        s.apply(&u.adjoint(), &[2, 0]).unwrap();
        let diff: f64 = s.amplitudes().iter().zip(psi.amplitudes()).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-12);
    }

    #[test]
    fn computational_measurement_of_zero_state() {
        let s = DenseState::zero(3).unwrap();
        let mut rng = stream(5, "sim-test", 0);
        assert!((0..100).all(|_| measure_computational(&s, &mut rng) == 0));
    }

    #[test]
    fn oracle_counts_copies() {
        let mut o = UnitaryOracle::new(&hadamard()).unwrap();
        let _ = o.prepare_copies(10);
        let _ = o.prepare_copies(5);
        assert_eq!(o.queries(), 15);
    }

    #[test]
    fn single_qubit_paulis_match_string_action() {
        let mut rng = stream(9, "sim-test", 3);
        let u = DenseOperator::random_unitary(2, &mut rng);
        let psi = DenseState::from_amplitudes(u.column(1)).unwrap();
        for q in 0..2 {
            for d in 1..=3u8 {
                let mut a = psi.clone();
                match d {
                    1 => a.apply_x(q),
                    2 => a.apply_y(q),
                    _ => a.apply_z(q),
                }
                let mut b = psi.clone();
                b.apply_pauli(&PauliString::single(2, q, d).unwrap());
                assert!(a.amplitudes().iter().zip(b.amplitudes()).all(|(x, y)| (x - y).norm() < 1e-15));
            }
        }
    }
}
