//! Classical shadows with random Clifford measurements.
//!
//! Snapshots of a Choi state live on `k = 2n` qubits, so the shadow dimension
//! is `D = 2^{2n}` and a single snapshot estimates `Tr(O ρ)` by
//! `(D + 1)<b|V O V†|b> - Tr(O)`.
//!
//! The observables are built from Bell vectors `|φ_u> = (σ^u ⊗ I)|EPR>`:
//! `M_s = |φ_s><φ_s|`, `R_{t,s} = (|φ_t><φ_s| + |φ_s><φ_t|)/2` and
//! `I_{t,s} = (-i|φ_t><φ_s| + i|φ_s><φ_t|)/2`. With `ψ = V†|b>` and
//! `c_u = <φ_u|ψ>` the snapshot overlaps are `|c_s|^2`, `Re(c_s c_t*)` and
//! `Im(c_s c_t*)`.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec::Vec;
use core::ops::Range;

#[allow(unused_imports)]
use num_traits::Float;

use crate::clifford::{apply_gates, inverse_gates, sample_gates, CliffordTableau, Gate};
use crate::error::{Error, Result};
use crate::linalg::{i_pow, DenseOperator, C64, ZERO};
use crate::pauli::PauliString;
use crate::rng;
use crate::sim::{measure_computational, DenseState};

/// Default constant `C` in `m = C ln(M/δ)/ε²`.
pub const DEFAULT_SHADOW_C: f64 = 34.0;

#[derive(Clone, Debug)]
pub struct Snapshot {
    pub tableau: CliffordTableau,
    pub outcome: u64,
    /// Stream the tableau and outcome were drawn from.
    pub stream_id: u64,
    /// Gates (time order) realizing `tableau` up to phase.
    gates: Vec<Gate>,
}

impl PartialEq for Snapshot {
    fn eq(&self, other: &Self) -> bool {
        self.tableau == other.tableau && self.outcome == other.outcome && self.stream_id == other.stream_id
    }
}

impl Eq for Snapshot {}

impl Snapshot {
    pub fn new(tableau: CliffordTableau, outcome: u64, stream_id: u64) -> Result<Self> {
        let k = tableau.k();
        if k < 64 && outcome >> k != 0 {
            return Err(Error::InvalidParameter("outcome wider than tableau".to_string()));
        }
        let gates = tableau.to_gates();
        Ok(Self {
            tableau,
            outcome,
            stream_id,
            gates,
        })
    }

    /// `V†|b>`.
    pub fn back_propagated(&self) -> Result<DenseState> {
        back_propagate(&self.gates, self.tableau.k(), self.outcome)
    }
}

fn back_propagate(gates: &[Gate], k: usize, outcome: u64) -> Result<DenseState> {
    let mut s = DenseState::basis(k, outcome as usize)?;
    for g in inverse_gates(gates) {
        g.apply(&mut s);
    }
    Ok(s)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum ObservableKind {
    M,
    R,
    I,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct BellObservable {
    pub kind: ObservableKind,
    pub s: PauliString,
    /// Anchor; equal to `s` and unused for `M`.
    pub t: PauliString,
}

impl BellObservable {
    pub fn m(s: PauliString) -> Self {
        let s = s.phase_free();
        Self {
            kind: ObservableKind::M,
            s,
            t: s,
        }
    }

    pub fn r(t: PauliString, s: PauliString) -> Self {
        Self {
            kind: ObservableKind::R,
            s: s.phase_free(),
            t: t.phase_free(),
        }
    }

    pub fn i(t: PauliString, s: PauliString) -> Self {
        Self {
            kind: ObservableKind::I,
            s: s.phase_free(),
            t: t.phase_free(),
        }
    }

    /// System qubits `n` (the observable acts on `2n`).
    pub fn n(&self) -> usize {
        self.s.n()
    }

    pub fn trace(&self) -> f64 {
        match self.kind {
            ObservableKind::M => 1.0,
            ObservableKind::R if self.s == self.t => 1.0,
            _ => 0.0,
        }
    }

    /// `<ψ|O|ψ>` from the Bell overlaps `c_s`, `c_t`.
    fn from_overlaps(&self, cs: C64, ct: C64) -> f64 {
        match self.kind {
            ObservableKind::M => cs.norm_sqr(),
            ObservableKind::R => (cs * ct.conj()).re,
            ObservableKind::I => (cs * ct.conj()).im,
        }
    }

    /// `<ψ|O|ψ>` for an arbitrary `2n`-qubit vector.
    pub fn expectation(&self, psi: &DenseState) -> Result<f64> {
        self.check(psi.qubits())?;
        let cs = bell_overlap(psi, &self.s);
        let ct = if self.kind == ObservableKind::M {
            cs
        } else {
            bell_overlap(psi, &self.t)
        };
        Ok(self.from_overlaps(cs, ct))
    }

    /// Dense `2n`-qubit matrix.
    pub fn dense(&self) -> Result<DenseOperator> {
        let n = self.n();
        crate::check_operator_cap(n)?;
        let phi_s = crate::sim::choi_of(&self.s.dense());
        let phi_t = crate::sim::choi_of(&self.t.dense());
        let (a, b) = (phi_s.amplitudes(), phi_t.amplitudes());
        let mut m = DenseOperator::zeros(2 * n);
        let half = C64::new(0.5, 0.0);
        let i = C64::new(0.0, 1.0);
        for r in 0..a.len() {
            for c in 0..a.len() {
                let v = match self.kind {
                    ObservableKind::M => a[r] * a[c].conj(),
                    ObservableKind::R => half * (b[r] * a[c].conj() + a[r] * b[c].conj()),
                    ObservableKind::I => half * (-i * b[r] * a[c].conj() + i * a[r] * b[c].conj()),
                };
                m.set(r, c, v);
            }
        }
        Ok(m)
    }

    fn check(&self, qubits: usize) -> Result<()> {
        if self.t.n() != self.s.n() || 2 * self.n() != qubits {
            return Err(Error::DimensionMismatch {
                expected: qubits,
                found: 2 * self.n(),
            });
        }
        Ok(())
    }
}

/// `c_u = <φ_u|ψ>` in `O(2^{2n})`.
pub fn bell_overlap(psi: &DenseState, u: &PauliString) -> C64 {
    let n = u.n();
    let big_n = 1usize << n;
    let amps = psi.amplitudes();
    let (x, z) = (u.x_mask() as usize, u.z_mask() as usize);
    // σ^u[a][r] = i^{|x&z|} (-1)^{|z&r|} when a = r ⊕ x.
    let global = i_pow((x & z).count_ones()).conj();
    let mut acc = ZERO;
    for r in 0..big_n {
        let a = amps[(r ^ x) * big_n + r];
        if (z & r).count_ones() % 2 == 0 {
            acc += a;
        } else {
            acc -= a;
        }
    }
    global * acc / (big_n as f64).sqrt()
}

/// Single-snapshot estimate `(D+1)<b|V O V†|b> - Tr(O)`.
pub fn eval_snapshot(snap: &Snapshot, obs: &BellObservable) -> Result<f64> {
    let psi = snap.back_propagated()?;
    let d = psi.dim() as f64;
    Ok((d + 1.0) * obs.expectation(&psi)? - obs.trace())
}

/// Distinct Bell vectors needed by `observables`, and each observable's
/// `(s, t)` positions in that list.
struct OverlapPlan {
    paulis: Vec<PauliString>,
    slots: Vec<(usize, usize)>,
}

impl OverlapPlan {
    fn new(observables: &[BellObservable], qubits: usize) -> Result<Self> {
        let mut index: BTreeMap<u64, usize> = BTreeMap::new();
        let mut paulis = Vec::new();
        let mut slot = |p: &PauliString| {
            *index.entry(p.index()).or_insert_with(|| {
                paulis.push(*p);
                paulis.len() - 1
            })
        };
        let mut slots = Vec::with_capacity(observables.len());
        for o in observables {
            o.check(qubits)?;
            slots.push((slot(&o.s), slot(&o.t)));
        }
        Ok(Self { paulis, slots })
    }

    /// Append one snapshot estimate per observable.
    fn push(&self, observables: &[BellObservable], psi: &DenseState, scratch: &mut Vec<C64>, out: &mut [Vec<f64>]) {
        scratch.clear();
        scratch.extend(self.paulis.iter().map(|p| bell_overlap(psi, p)));
        let d = psi.dim() as f64;
        for ((o, &(i, j)), col) in observables.iter().zip(&self.slots).zip(out.iter_mut()) {
            col.push((d + 1.0) * o.from_overlaps(scratch[i], scratch[j]) - o.trace());
        }
    }
}

/// Snapshot estimates for every observable: `out[o][j]` for snapshot `j`.
///
/// Each snapshot is back-propagated once and each Bell overlap computed once.
pub fn evaluate(snapshots: &[Snapshot], observables: &[BellObservable]) -> Result<Vec<Vec<f64>>> {
    let mut out: Vec<Vec<f64>> = observables.iter().map(|_| Vec::with_capacity(snapshots.len())).collect();
    if observables.is_empty() || snapshots.is_empty() {
        return Ok(out);
    }
    let plan = OverlapPlan::new(observables, snapshots[0].tableau.k())?;
    let mut scratch = Vec::new();
    for snap in snapshots {
        let psi = snap.back_propagated()?;
        if psi.qubits() != snapshots[0].tableau.k() {
            return Err(Error::DimensionMismatch {
                expected: snapshots[0].tableau.k(),
                found: psi.qubits(),
            });
        }
        plan.push(observables, &psi, &mut scratch, &mut out);
    }
    Ok(out)
}

/// Median of `batches` contiguous group means; the remainder is discarded.
///
/// For an even number of groups the lower-middle mean is returned.
pub fn median_of_means(values: &[f64], batches: usize) -> Result<f64> {
    if values.is_empty() {
        return Err(Error::EmptyInput);
    }
    if batches == 0 || batches > values.len() {
        return Err(Error::InvalidParameter(alloc::format!(
            "{batches} batches for {} values",
            values.len()
        )));
    }
    let size = values.len() / batches;
    let mut means: Vec<f64> = values
        .chunks_exact(size)
        .take(batches)
        .map(|c| c.iter().sum::<f64>() / size as f64)
        .collect();
    means.sort_by(|a, b| a.total_cmp(b));
    Ok(means[(batches - 1) / 2])
}

/// `K = ⌈8 ln(2M/δ)⌉` median-of-means groups for `M` observables.
pub fn mom_batches(delta: f64, observables: usize) -> usize {
    let m = observables.max(1) as f64;
    (8.0 * (2.0 * m / delta).ln()).ceil().max(1.0) as usize
}

/// `m = ⌈C ln(M/δ)/ε²⌉` snapshots for `M` observables.
pub fn shadow_budget(c: f64, observables: usize, epsilon: f64, delta: f64) -> u64 {
    let m = observables.max(1) as f64;
    (c * (m / delta).ln() / (epsilon * epsilon)).ceil().max(1.0) as u64
}

/// Rotate a copy of `state` by `tableau` and measure it in the computational basis.
pub fn measure_with<R: rand::Rng + ?Sized>(state: &DenseState, tableau: &CliffordTableau, rng: &mut R) -> Result<u64> {
    let rotated = tableau.apply_to_state(state)?;
    Ok(measure_computational(&rotated, rng))
}

/// Random gates and outcome for stream `(seed, name, index)`.
fn draw(state: &DenseState, seed: u64, name: &str, index: u64) -> (Vec<Gate>, u64) {
    let mut r = rng::stream(seed, name, index);
    let gates = sample_gates(state.qubits(), &mut r);
    let rotated = apply_gates(&gates, state);
    (gates, measure_computational(&rotated, &mut r))
}

/// One snapshot drawn from stream `(seed, name, index)`.
pub fn snapshot_at(state: &DenseState, seed: u64, name: &str, index: u64) -> Snapshot {
    let (gates, outcome) = draw(state, seed, name, index);
    Snapshot {
        tableau: CliffordTableau::from_gates(state.qubits(), &gates).expect("gates in range"),
        outcome,
        stream_id: rng::stream_id(name, index),
        gates,
    }
}

/// Snapshots with indices in `range`; each index has its own stream.
pub fn collect_range(state: &DenseState, range: Range<u64>, seed: u64, name: &str) -> Vec<Snapshot> {
    range.map(|j| snapshot_at(state, seed, name, j)).collect()
}

/// `m` snapshots of `state`. Each snapshot stands for one fresh copy.
pub fn collect(state: &DenseState, m: usize, seed: u64, name: &str) -> Vec<Snapshot> {
    collect_range(state, 0..m as u64, seed, name)
}

/// Median-of-means estimates from existing snapshots.
pub fn estimate_from_snapshots(snapshots: &[Snapshot], observables: &[BellObservable], delta: f64) -> Result<Vec<f64>> {
    if observables.is_empty() {
        return Ok(Vec::new());
    }
    let k = mom_batches(delta, observables.len());
    if snapshots.len() < k {
        return Err(Error::InvalidParameter(alloc::format!(
            "{} snapshots is fewer than {k} median-of-means groups",
            snapshots.len()
        )));
    }
    evaluate(snapshots, observables)?
        .iter()
        .map(|v| median_of_means(v, k))
        .collect()
}

/// Draw `m` snapshots and estimate every observable.
///
/// Snapshots are evaluated as they are drawn and not kept; the result equals
/// `estimate_from_snapshots(&collect(state, m, seed, name), ..)`.
pub fn estimate_all(
    state: &DenseState,
    observables: &[BellObservable],
    m: usize,
    delta: f64,
    seed: u64,
    name: &str,
) -> Result<Vec<f64>> {
    if observables.is_empty() {
        return Ok(Vec::new());
    }
    let k = mom_batches(delta, observables.len());
    if m < k {
        return Err(Error::InvalidParameter(alloc::format!(
            "{m} snapshots is fewer than {k} median-of-means groups"
        )));
    }
    let values = evaluate_range(state, observables, 0..m as u64, seed, name)?;
    values.iter().map(|v| median_of_means(v, k)).collect()
}

/// Snapshot estimates for indices in `range` without storing the snapshots.
pub fn evaluate_range(
    state: &DenseState,
    observables: &[BellObservable],
    range: Range<u64>,
    seed: u64,
    name: &str,
) -> Result<Vec<Vec<f64>>> {
    let plan = OverlapPlan::new(observables, state.qubits())?;
    let len = (range.end.saturating_sub(range.start)) as usize;
    let mut out: Vec<Vec<f64>> = observables.iter().map(|_| Vec::with_capacity(len)).collect();
    let mut scratch = Vec::new();
    for j in range {
        let (gates, outcome) = draw(state, seed, name, j);
        let psi = back_propagate(&gates, state.qubits(), outcome)?;
        plan.push(observables, &psi, &mut scratch, &mut out);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sim::{choi_of, prepare_choi};
    use crate::QueryCounter;
    use alloc::vec;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn median_of_means_examples() {
        let v: Vec<f64> = (1..=9).map(f64::from).collect();
        assert_eq!(median_of_means(&v, 3).unwrap(), 5.0);
        assert_eq!(median_of_means(&[2.5; 10], 4).unwrap(), 2.5);
        let mut w = vec![1.0; 12];
        w[8..12].copy_from_slice(&[1e9; 4]);
        assert_eq!(median_of_means(&w, 3).unwrap(), 1.0);
        // even group count: lower middle
        assert_eq!(median_of_means(&[1.0, 2.0, 3.0, 4.0], 4).unwrap(), 2.0);
        assert_eq!(median_of_means(&[], 1), Err(Error::EmptyInput));
        assert!(median_of_means(&[1.0], 2).is_err());
    }

    #[test]
    fn budgets() {
        assert_eq!(mom_batches(0.05, 2), (8.0 * 80f64.ln()).ceil() as usize);
        assert_eq!(shadow_budget(34.0, 2, 0.05, 0.05), (34.0 * 40f64.ln() / 0.0025).ceil() as u64);
    }

    #[test]
    fn overlap_of_bell_vectors_is_kronecker() {
        for a in 0..16 {
            let phi = choi_of(&PauliString::from_index(2, a).unwrap().dense());
            for b in 0..16 {
                let c = bell_overlap(&phi, &PauliString::from_index(2, b).unwrap());
                let want = if a == b { 1.0 } else { 0.0 };
                assert!((c - want).norm() < 1e-12);
            }
        }
    }

    #[test]
    fn observables_have_unit_operator_norm_and_right_trace() {
        let (s, t) = (p("XZ"), p("YI"));
        for o in [BellObservable::m(s), BellObservable::r(t, s), BellObservable::i(t, s)] {
            let d = o.dense().unwrap();
            assert!(d.is_hermitian(1e-14));
            assert!(d.spectral_norm() <= 1.0 + 1e-12);
            assert!((d.trace().re - o.trace()).abs() < 1e-12);
        }
    }

    #[test]
    fn expectation_matches_dense_on_choi_state() {
        let mut c = QueryCounter::new();
        let u = PauliString::single(1, 0, 1).unwrap().dense();
        let j = prepare_choi(&u, &mut c).unwrap();
        let o = BellObservable::m(p("X"));
        assert!((o.expectation(&j).unwrap() - 1.0).abs() < 1e-12);
    }

    #[test]
    fn collect_zero_is_empty() {
        let j = choi_of(&DenseOperator::identity(1));
        assert!(collect(&j, 0, 1, "s").is_empty());
        let snaps = collect(&j, 100, 1, "s");
        assert_eq!(snaps.len(), 100);
        assert!(snaps.iter().all(|s| s.outcome < 4 && s.tableau.k() == 2));
        assert!(estimate_all(&j, &[], 10, 0.1, 1, "s").unwrap().is_empty());
    }
}
