//! Clifford tableaux, exact uniform sampling and gate synthesis.
//!
//! A tableau stores the images of the generators under conjugation:
//! row `j` is `C X_j C†` and row `k + j` is `C Z_j C†`, each a Hermitian Pauli
//! string whose phase is `0` (plus) or `2` (minus).

use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::DenseOperator;
use crate::pauli::{PauliString, MAX_QUBITS};
use crate::sim::DenseState;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Gate {
    H(usize),
    S(usize),
    Cnot { control: usize, target: usize },
    X(usize),
    Y(usize),
    Z(usize),
}

impl Gate {
    pub fn name(&self) -> &'static str {
        match self {
            Gate::H(_) => "H",
            Gate::S(_) => "S",
            Gate::Cnot { .. } => "CNOT",
            Gate::X(_) => "X",
            Gate::Y(_) => "Y",
            Gate::Z(_) => "Z",
        }
    }

    pub fn targets(&self) -> Vec<usize> {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => vec![q],
            Gate::Cnot { control, target } => vec![control, target],
        }
    }

    /// Build from a name and target list (the inverse of `name`/`targets`).
    pub fn from_parts(name: &str, targets: &[usize]) -> Result<Self> {
        let one = || match targets {
            [q] => Ok(*q),
            _ => Err(Error::BadTargets(alloc::format!("{name} takes one target"))),
        };
        match name {
            "H" => Ok(Gate::H(one()?)),
            "S" => Ok(Gate::S(one()?)),
            "X" => Ok(Gate::X(one()?)),
            "Y" => Ok(Gate::Y(one()?)),
            "Z" => Ok(Gate::Z(one()?)),
            "CNOT" => match targets {
                [c, t] if c != t => Ok(Gate::Cnot {
                    control: *c,
                    target: *t,
                }),
                _ => Err(Error::BadTargets("CNOT takes two distinct targets".to_string())),
            },
            _ => Err(Error::InvalidParameter(alloc::format!("unknown gate {name}"))),
        }
    }

    fn max_qubit(&self) -> usize {
        match *self {
            Gate::H(q) | Gate::S(q) | Gate::X(q) | Gate::Y(q) | Gate::Z(q) => q,
            Gate::Cnot { control, target } => control.max(target),
        }
    }

    /// `G P G†` for a Pauli string with sign-only phase.
    pub fn conjugate(&self, p: &PauliString) -> PauliString {
        let n = p.n();
        let (mut x, mut z, mut ph) = (p.x_mask(), p.z_mask(), p.phase_exp());
        let b = |q: usize| n - 1 - q;
        match *self {
            Gate::H(q) => {
                let (xb, zb) = (x >> b(q) & 1, z >> b(q) & 1);
                if xb & zb == 1 {
                    ph ^= 2;
                }
                x = (x & !(1 << b(q))) | (zb << b(q));
                z = (z & !(1 << b(q))) | (xb << b(q));
            }
            Gate::S(q) => {
                let (xb, zb) = (x >> b(q) & 1, z >> b(q) & 1);
                if xb & zb == 1 {
                    ph ^= 2;
                }
                z ^= xb << b(q);
            }
            Gate::Cnot { control, target } => {
                let (xc, zc) = (x >> b(control) & 1, z >> b(control) & 1);
                let (xt, zt) = (x >> b(target) & 1, z >> b(target) & 1);
                if xc & zt & (xt ^ zc ^ 1) == 1 {
                    ph ^= 2;
                }
                x ^= xc << b(target);
                z ^= zt << b(control);
            }
            Gate::X(q) => {
                if z >> b(q) & 1 == 1 {
                    ph ^= 2;
                }
            }
            Gate::Z(q) => {
                if x >> b(q) & 1 == 1 {
                    ph ^= 2;
                }
            }
            Gate::Y(q) => {
                if (x ^ z) >> b(q) & 1 == 1 {
                    ph ^= 2;
                }
            }
        }
        PauliString::from_masks(n, x, z).expect("masks stay in range").with_phase(ph)
    }

    /// Apply to dense amplitudes.
    pub fn apply(&self, state: &mut DenseState) {
        match *self {
            Gate::H(q) => state.apply_h(q),
            Gate::S(q) => state.apply_s(q),
            Gate::Cnot { control, target } => state.apply_cnot(control, target),
            Gate::X(q) => state.apply_x(q),
            Gate::Y(q) => state.apply_y(q),
            Gate::Z(q) => state.apply_z(q),
        }
    }
}

/// Gates undoing `gates` (time order), up to global phase.
pub fn inverse_gates(gates: &[Gate]) -> Vec<Gate> {
    let mut out = Vec::with_capacity(gates.len());
    for g in gates.iter().rev() {
        if let Gate::S(q) = *g {
            // S† = S·Z
            out.push(Gate::Z(q));
            out.push(Gate::S(q));
        } else {
            out.push(*g);
        }
    }
    out
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct CliffordTableau {
    k: usize,
    rows: Vec<PauliString>,
}

impl CliffordTableau {
    pub fn identity(k: usize) -> Self {
        assert!(k <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        let mut rows = Vec::with_capacity(2 * k);
        for d in [1u8, 3] {
            for j in 0..k {
                rows.push(PauliString::single(k, j, d).expect("in range"));
            }
        }
        Self { k, rows }
    }

    /// Tableau of a gate sequence in time order.
    pub fn from_gates(k: usize, gates: &[Gate]) -> Result<Self> {
        let mut t = Self::identity(k);
        for g in gates {
            t.apply_gate(g)?;
        }
        Ok(t)
    }

    /// Build from generator images (`X_0..X_{k-1}`, then `Z_0..Z_{k-1}`).
    pub fn from_rows(rows: Vec<PauliString>) -> Result<Self> {
        if rows.len() % 2 != 0 {
            return Err(Error::InvalidParameter("odd number of tableau rows".to_string()));
        }
        let k = rows.len() / 2;
        let t = Self { k, rows };
        if !t.is_valid() {
            return Err(Error::InvalidParameter("rows do not form a Clifford tableau".to_string()));
        }
        Ok(t)
    }

    /// Build from the binary form returned by [`symplectic_matrix`](Self::symplectic_matrix)
    /// and [`phases`](Self::phases).
    pub fn from_symplectic(matrix: &[Vec<bool>], phases: &[bool]) -> Result<Self> {
        let m = matrix.len();
        if m % 2 != 0 || phases.len() != m || matrix.iter().any(|r| r.len() != m) {
            return Err(Error::InvalidParameter("tableau must be 2k x 2k with 2k phases".to_string()));
        }
        let k = m / 2;
        let rows = matrix
            .iter()
            .zip(phases)
            .map(|(r, &neg)| {
                let (mut x, mut z) = (0u64, 0u64);
                for j in 0..k {
                    x |= u64::from(r[j]) << (k - 1 - j);
                    z |= u64::from(r[k + j]) << (k - 1 - j);
                }
                PauliString::from_masks(k, x, z).map(|p| p.with_phase(if neg { 2 } else { 0 }))
            })
            .collect::<Result<Vec<_>>>()?;
        Self::from_rows(rows)
    }

    #[inline]
    pub fn k(&self) -> usize {
        self.k
    }

    pub fn rows(&self) -> &[PauliString] {
        &self.rows
    }

    /// Image of `X_j`.
    pub fn x_image(&self, j: usize) -> &PauliString {
        &self.rows[j]
    }

    /// Image of `Z_j`.
    pub fn z_image(&self, j: usize) -> &PauliString {
        &self.rows[self.k + j]
    }

    /// Row-major `2k x 2k` bits; columns are the X part then the Z part.
    pub fn symplectic_matrix(&self) -> Vec<Vec<bool>> {
        let k = self.k;
        self.rows
            .iter()
            .map(|p| {
                let mut r = vec![false; 2 * k];
                for j in 0..k {
                    r[j] = p.x_mask() >> (k - 1 - j) & 1 == 1;
                    r[k + j] = p.z_mask() >> (k - 1 - j) & 1 == 1;
                }
                r
            })
            .collect()
    }

    /// Sign bits: `true` for a negative image.
    pub fn phases(&self) -> Vec<bool> {
        self.rows.iter().map(|p| p.phase_exp() == 2).collect()
    }

    /// Symplectic form, real signs and `k <= MAX_QUBITS`.
    pub fn is_valid(&self) -> bool {
        let k = self.k;
        if k > MAX_QUBITS || self.rows.len() != 2 * k {
            return false;
        }
        if self.rows.iter().any(|p| p.n() != k || p.phase_exp() % 2 != 0) {
            return false;
        }
        for a in 0..2 * k {
            for b in a + 1..2 * k {
                let should_anticommute = b == a + k;
                if self.rows[a].commutes_with(&self.rows[b]) == should_anticommute {
                    return false;
                }
            }
        }
        true
    }

    /// Append a gate (time order): the tableau becomes `G C`.
    pub fn apply_gate(&mut self, g: &Gate) -> Result<()> {
        if g.max_qubit() >= self.k {
            return Err(Error::BadTargets(alloc::format!("gate {g:?} outside {} qubits", self.k)));
        }
        for r in &mut self.rows {
            *r = g.conjugate(r);
        }
        Ok(())
    }

    /// `self` followed by `other`, i.e. the Clifford `other · self`.
    pub fn then(&self, other: &Self) -> Result<Self> {
        if self.k != other.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: other.k,
            });
        }
        let rows = self.rows.iter().map(|r| other.conjugate_unchecked(r)).collect();
        Ok(Self { k: self.k, rows })
    }

    /// Operator product `self · other` (apply `other` first).
    pub fn compose(&self, other: &Self) -> Result<Self> {
        other.then(self)
    }

    pub fn inverse(&self) -> Self {
        let gates = inverse_gates(&self.to_gates());
        Self::from_gates(self.k, &gates).expect("gates are in range")
    }

    /// `C P C†`. A Hermitian input gives a Hermitian output with sign phase.
    pub fn conjugate_pauli(&self, p: &PauliString) -> Result<PauliString> {
        if p.n() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: p.n(),
            });
        }
        Ok(self.conjugate_unchecked(p))
    }

    fn conjugate_unchecked(&self, p: &PauliString) -> PauliString {
        let k = self.k;
        // P = i^{phase + |x&z|} Π_j X_j^{x_j} Z_j^{z_j}
        let e = u32::from(p.phase_exp()) + (p.x_mask() & p.z_mask()).count_ones();
        let mut acc = PauliString::identity(k).with_phase((e & 3) as u8);
        for j in 0..k {
            let b = k - 1 - j;
            if p.x_mask() >> b & 1 == 1 {
                acc = acc.mul_unchecked(&self.rows[j]);
            }
            if p.z_mask() >> b & 1 == 1 {
                acc = acc.mul_unchecked(&self.rows[k + j]);
            }
        }
        acc
    }

    /// Gate sequence (time order) implementing this tableau up to global phase.
    ///
    /// Uses `O(k^2)` gates from `{H, S, CNOT}` plus a Pauli layer.
    pub fn to_gates(&self) -> Vec<Gate> {
        let k = self.k;
        let mut work = self.clone();
        let mut reduce = Vec::new();
        for i in 0..k {
            let gates = reduction_gates(work.rows[i], work.rows[k + i], i);
            for g in &gates {
                work.apply_gate(g).expect("in range");
            }
            reduce.extend(gates);
        }
        // Now reduce · C = P for a Pauli P; C = reduce^{-1} · P.
        let mut out = Vec::new();
        for j in 0..k {
            let flip_x = work.rows[j].phase_exp() == 2;
            let flip_z = work.rows[k + j].phase_exp() == 2;
            match (flip_x, flip_z) {
                (true, true) => out.push(Gate::Y(j)),
                (true, false) => out.push(Gate::Z(j)),
                (false, true) => out.push(Gate::X(j)),
                (false, false) => {}
            }
        }
        out.extend(inverse_gates(&reduce));
        out
    }

    /// Dense unitary (up to global phase), built column by column from the gates.
    pub fn dense(&self) -> Result<DenseOperator> {
        crate::check_state_cap(self.k)?;
        let d = 1usize << self.k;
        let gates = self.to_gates();
        let mut m = DenseOperator::zeros(self.k);
        for c in 0..d {
            let mut s = DenseState::basis(self.k, c)?;
            for g in &gates {
                g.apply(&mut s);
            }
            for (r, a) in s.amplitudes().iter().enumerate() {
                m.set(r, c, *a);
            }
        }
        Ok(m)
    }

    pub fn apply_to_state(&self, state: &DenseState) -> Result<DenseState> {
        self.check_state(state)?;
        Ok(apply_gates(&self.to_gates(), state))
    }

    pub fn apply_inverse_to_state(&self, state: &DenseState) -> Result<DenseState> {
        self.check_state(state)?;
        Ok(apply_gates(&inverse_gates(&self.to_gates()), state))
    }

    fn check_state(&self, state: &DenseState) -> Result<()> {
        if state.qubits() != self.k {
            return Err(Error::DimensionMismatch {
                expected: self.k,
                found: state.qubits(),
            });
        }
        Ok(())
    }

    /// Exactly uniform element of the `k`-qubit Clifford group modulo phase.
    pub fn sample_uniform<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Self {
        sample_with_gates(k, rng).0
    }
}

/// Apply a gate list (time order) to a copy of `state`.
pub fn apply_gates(gates: &[Gate], state: &DenseState) -> DenseState {
    let mut s = state.clone();
    for g in gates {
        g.apply(&mut s);
    }
    s
}

/// Gates on qubits `i..` mapping `(a, b)` to `(±X_i, ±Z_i)`.
///
/// `a` and `b` must anticommute and act trivially on qubits before `i`.
fn reduction_gates(mut a: PauliString, mut b: PauliString, i: usize) -> Vec<Gate> {
    let k = a.n();
    let mut gates = Vec::new();
    let mut push = |g: Gate, a: &mut PauliString, b: &mut PauliString| {
        *a = g.conjugate(a);
        *b = g.conjugate(b);
        gates.push(g);
    };
    for j in i..k {
        match a.digit(j) {
            2 => push(Gate::S(j), &mut a, &mut b),
            3 => push(Gate::H(j), &mut a, &mut b),
            _ => {}
        }
    }
    let xs: Vec<usize> = (i..k).filter(|&j| a.digit(j) == 1).collect();
    let j0 = xs[0];
    for &j in &xs[1..] {
        push(
            Gate::Cnot {
                control: j0,
                target: j,
            },
            &mut a,
            &mut b,
        );
    }
    if j0 != i {
        for (c, t) in [(i, j0), (j0, i), (i, j0)] {
            push(Gate::Cnot { control: c, target: t }, &mut a, &mut b);
        }
    }
    let b_is_zi = b.digit(i) == 3 && (i + 1..k).all(|j| b.digit(j) == 0);
    if !b_is_zi {
        push(Gate::H(i), &mut a, &mut b);
        for j in i + 1..k {
            match b.digit(j) {
                2 => push(Gate::S(j), &mut a, &mut b),
                3 => push(Gate::H(j), &mut a, &mut b),
                _ => {}
            }
        }
        for j in i + 1..k {
            if b.digit(j) == 1 {
                push(Gate::Cnot { control: i, target: j }, &mut a, &mut b);
            }
        }
        if b.digit(i) == 2 {
            push(Gate::S(i), &mut a, &mut b);
        }
        push(Gate::H(i), &mut a, &mut b);
    }
    debug_assert!(a.phase_free() == PauliString::single(k, i, 1).unwrap());
    debug_assert!(b.phase_free() == PauliString::single(k, i, 3).unwrap());
    gates
}

/// Gate sequence (time order) of a uniformly random Clifford.
///
/// For each qubit `i` a uniformly random anticommuting pair on qubits `i..k`
/// fixes the coset; a random Pauli layer fixes the signs. Every group element
/// arises from exactly one choice sequence.
pub fn sample_gates<R: Rng + ?Sized>(k: usize, rng: &mut R) -> Vec<Gate> {
    let mut layers: Vec<Vec<Gate>> = Vec::with_capacity(k);
    for i in 0..k {
        let m = k - i;
        let full = 1u64 << m;
        let (a, b) = loop {
            let (ax, az) = (rng.gen_range(0..full), rng.gen_range(0..full));
            if ax | az == 0 {
                continue;
            }
            let (bx, bz) = (rng.gen_range(0..full), rng.gen_range(0..full));
            let a = PauliString::from_masks(k, ax, az).expect("in range");
            let b = PauliString::from_masks(k, bx, bz).expect("in range");
            if !a.commutes_with(&b) {
                break (a, b);
            }
        };
        layers.push(inverse_gates(&reduction_gates(a, b, i)));
    }
    let mut gates = Vec::new();
    for j in 0..k {
        match rng.gen_range(0..4u8) {
            1 => gates.push(Gate::X(j)),
            2 => gates.push(Gate::Y(j)),
            3 => gates.push(Gate::Z(j)),
            _ => {}
        }
    }
    for layer in layers.into_iter().rev() {
        gates.extend(layer);
    }
    gates
}

/// Uniform Clifford together with a gate sequence implementing it.
pub fn sample_with_gates<R: Rng + ?Sized>(k: usize, rng: &mut R) -> (CliffordTableau, Vec<Gate>) {
    let gates = sample_gates(k, rng);
    let t = CliffordTableau::from_gates(k, &gates).expect("in range");
    (t, gates)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::decompose;
    use crate::rng::stream;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    #[test]
    fn hadamard_and_phase_conjugation() {
        let h = CliffordTableau::from_gates(1, &[Gate::H(0)]).unwrap();
        assert_eq!(h.conjugate_pauli(&p("X")).unwrap(), p("Z"));
        assert_eq!(h.conjugate_pauli(&p("Z")).unwrap(), p("X"));
        assert_eq!(h.conjugate_pauli(&p("Y")).unwrap(), p("-Y"));
        let s = CliffordTableau::from_gates(1, &[Gate::S(0)]).unwrap();
        assert_eq!(s.conjugate_pauli(&p("X")).unwrap(), p("Y"));
        assert_eq!(s.conjugate_pauli(&p("Y")).unwrap(), p("-X"));
    }

    #[test]
    fn identity_has_no_gates() {
        assert!(CliffordTableau::identity(5).to_gates().is_empty());
    }

    #[test]
    fn h_tableau_on_zero_gives_plus() {
        let h = CliffordTableau::from_gates(1, &[Gate::H(0)]).unwrap();
        let out = h.apply_to_state(&DenseState::zero(1).unwrap()).unwrap();
        let r = core::f64::consts::FRAC_1_SQRT_2;
        for a in out.amplitudes() {
            assert!((a.re.abs() - r).abs() < 1e-15 && a.im.abs() < 1e-15);
        }
    }

    #[test]
    fn gate_conjugation_matches_dense() {
        let gates = [
            Gate::H(1),
            Gate::S(0),
            Gate::Cnot { control: 0, target: 2 },
            Gate::Cnot { control: 2, target: 1 },
            Gate::X(1),
            Gate::Y(2),
            Gate::Z(0),
        ];
        for g in gates {
            let mut u = DenseOperator::zeros(3);
            for c in 0..8 {
                let out = apply_gates(&[g], &DenseState::basis(3, c).unwrap());
                for (r, a) in out.amplitudes().iter().enumerate() {
                    u.set(r, c, *a);
                }
            }
            for idx in 0..64 {
                let q = PauliString::from_index(3, idx).unwrap();
                let want = u.matmul(&q.dense()).unwrap().matmul(&u.adjoint()).unwrap();
                let got = g.conjugate(&q);
                let m = decompose(&want).unwrap();
                assert_eq!(m.len(), 1);
                let (term, c) = m.iter().next().unwrap();
                assert_eq!(term, got.phase_free(), "{g:?} on {q}");
                let sign = if got.phase_exp() == 2 { -1.0 } else { 1.0 };
                assert!((c.re - sign).abs() < 1e-12 && c.im.abs() < 1e-12);
            }
        }
    }

    #[test]
    fn sampled_tableaux_round_trip_through_gates() {
        let mut rng = stream(11, "clifford-test", 0);
        for k in 1..=5 {
            for _ in 0..20 {
                let (t, gates) = sample_with_gates(k, &mut rng);
                assert!(t.is_valid());
                let back = CliffordTableau::from_gates(k, &t.to_gates()).unwrap();
                assert_eq!(back, t);
                assert_eq!(CliffordTableau::from_gates(k, &gates).unwrap(), t);
                let inv = t.inverse();
                assert_eq!(t.then(&inv).unwrap(), CliffordTableau::identity(k));
            }
        }
    }

    #[test]
    fn symplectic_round_trip() {
        let mut rng = stream(3, "clifford-test", 1);
        let t = CliffordTableau::sample_uniform(4, &mut rng);
        let back = CliffordTableau::from_symplectic(&t.symplectic_matrix(), &t.phases()).unwrap();
        assert_eq!(back, t);
    }

    #[test]
    fn rejects_invalid_rows() {
        assert!(CliffordTableau::from_rows(vec![p("X"), p("X")]).is_err());
        assert!(Gate::from_parts("CNOT", &[1, 1]).is_err());
        assert_eq!(Gate::from_parts("S", &[2]).unwrap(), Gate::S(2));
    }
}
