//! Pauli strings, sparse Pauli coefficient maps and the dense transforms.
//!
//! A string is stored in symplectic form: bit `n - 1 - j` of `x` / `z` holds
//! the X / Z part of qubit `j`, so the X mask acts on a computational basis
//! index by XOR. The base-4 index uses digits `I=0, X=1, Y=2, Z=3` with qubit 0
//! as the most significant digit.

use alloc::collections::BTreeMap;
use alloc::string::{String, ToString};
use alloc::vec;
use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::{i_pow, DenseOperator, C64, ZERO};

/// Widest supported Pauli string (base-4 index must fit in 64 bits).
pub const MAX_QUBITS: usize = 32;

/// Entries of `decompose` below this magnitude are dropped.
pub const PRUNE_TOL: f64 = 1e-12;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct PauliString {
    n: u8,
    x: u64,
    z: u64,
    /// Power of `i` multiplying the Hermitian string.
    phase: u8,
}

impl PauliString {
    pub fn identity(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self {
            n: n as u8,
            x: 0,
            z: 0,
            phase: 0,
        }
    }

    fn mask(n: usize) -> u64 {
        if n == 64 {
            u64::MAX
        } else {
            (1u64 << n) - 1
        }
    }

    pub fn from_masks(n: usize, x: u64, z: u64) -> Result<Self> {
        if n > MAX_QUBITS {
            return Err(Error::InvalidPauli(alloc::format!("{n} qubits exceeds {MAX_QUBITS}")));
        }
        let m = Self::mask(n);
        if x & !m != 0 || z & !m != 0 {
            return Err(Error::InvalidPauli("mask wider than qubit count".to_string()));
        }
        Ok(Self {
            n: n as u8,
            x,
            z,
            phase: 0,
        })
    }

    pub fn from_index(n: usize, index: u64) -> Result<Self> {
        if n > MAX_QUBITS || (n < MAX_QUBITS && index >> (2 * n) != 0) {
            return Err(Error::InvalidPauli(alloc::format!("index {index} out of range for {n} qubits")));
        }
        let (mut x, mut z) = (0u64, 0u64);
        for p in 0..n {
            let (xb, zb) = digit_bits(((index >> (2 * p)) & 3) as u8);
            x |= u64::from(xb) << p;
            z |= u64::from(zb) << p;
        }
        Ok(Self {
            n: n as u8,
            x,
            z,
            phase: 0,
        })
    }

    /// Single-qubit Pauli `digit` (0..=3) on qubit `q` of an `n`-qubit register.
    pub fn single(n: usize, q: usize, digit: u8) -> Result<Self> {
        if q >= n {
            return Err(Error::BadTargets(alloc::format!("qubit {q} out of range for {n}")));
        }
        let mut p = Self::identity(n);
        p.set_digit(q, digit);
        Ok(p)
    }

    #[inline]
    pub fn n(&self) -> usize {
        self.n as usize
    }

    #[inline]
    pub fn x_mask(&self) -> u64 {
        self.x
    }

    #[inline]
    pub fn z_mask(&self) -> u64 {
        self.z
    }

    #[inline]
    pub fn phase_exp(&self) -> u8 {
        self.phase
    }

    pub fn with_phase(mut self, phase: u8) -> Self {
        self.phase = phase & 3;
        self
    }

    pub fn phase_free(mut self) -> Self {
        self.phase = 0;
        self
    }

    #[inline]
    fn bit(&self, q: usize) -> usize {
        self.n() - 1 - q
    }

    /// Base-4 digit of qubit `q`.
    pub fn digit(&self, q: usize) -> u8 {
        let b = self.bit(q);
        bits_digit(self.x >> b & 1 == 1, self.z >> b & 1 == 1)
    }

    pub fn set_digit(&mut self, q: usize, digit: u8) {
        let b = self.bit(q);
        let (xb, zb) = digit_bits(digit);
        self.x = (self.x & !(1 << b)) | (u64::from(xb) << b);
        self.z = (self.z & !(1 << b)) | (u64::from(zb) << b);
    }

    pub fn index(&self) -> u64 {
        let mut idx = 0u64;
        for p in (0..self.n()).rev() {
            let d = bits_digit(self.x >> p & 1 == 1, self.z >> p & 1 == 1);
            idx = (idx << 2) | u64::from(d);
        }
        idx
    }

    pub fn weight(&self) -> u32 {
        (self.x | self.z).count_ones()
    }

    pub fn is_identity(&self) -> bool {
        self.x == 0 && self.z == 0
    }

    pub fn commutes_with(&self, other: &Self) -> bool {
        ((self.x & other.z).count_ones() + (self.z & other.x).count_ones()) % 2 == 0
    }

    /// Product `self · other` with the `i`-power tracked in the phase.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n(),
                found: other.n(),
            });
        }
        Ok(self.mul_unchecked(other))
    }

    pub(crate) fn mul_unchecked(&self, other: &Self) -> Self {
        let (x1, z1, x2, z2) = (self.x, self.z, other.x, other.z);
        let y1 = x1 & z1;
        let xo = x1 & !z1;
        let zo = !x1 & z1;
        let plus = (y1 & z2 & !x2).count_ones() + (xo & x2 & z2).count_ones() + (zo & x2 & !z2).count_ones();
        let minus = (y1 & x2 & !z2).count_ones() + (xo & !x2 & z2).count_ones() + (zo & x2 & z2).count_ones();
        let e = u32::from(self.phase) + u32::from(other.phase) + plus + 3 * minus;
        Self {
            n: self.n,
            x: x1 ^ x2,
            z: z1 ^ z2,
            phase: (e & 3) as u8,
        }
    }

    /// Action on a basis state: `P|b> = amp |b'>`.
    #[inline]
    pub fn apply_to_basis(&self, b: u64) -> (C64, u64) {
        let e = u32::from(self.phase) + (self.x & self.z).count_ones() + 2 * (self.z & b).count_ones();
        (i_pow(e), b ^ self.x)
    }

    pub fn dense(&self) -> DenseOperator {
        let mut m = DenseOperator::zeros(self.n());
        for b in 0..(1u64 << self.n) {
            let (amp, out) = self.apply_to_basis(b);
            m.set(out as usize, b as usize, amp);
        }
        m
    }

    /// Plain `IXYZ` text, without the phase.
    pub fn label(&self) -> String {
        (0..self.n())
            .map(|q| ['I', 'X', 'Y', 'Z'][self.digit(q) as usize])
            .collect()
    }
}

#[inline]
fn digit_bits(d: u8) -> (bool, bool) {
    match d & 3 {
        0 => (false, false),
        1 => (true, false),
        2 => (true, true),
        _ => (false, true),
    }
}

#[inline]
fn bits_digit(x: bool, z: bool) -> u8 {
    match (x, z) {
        (false, false) => 0,
        (true, false) => 1,
        (true, true) => 2,
        (false, true) => 3,
    }
}

impl fmt::Display for PauliString {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let prefix = ["", "i", "-", "-i"][self.phase as usize];
        write!(f, "{prefix}{}", self.label())
    }
}

impl FromStr for PauliString {
    type Err = Error;

    /// Parses `[+|-][i]` followed by letters from `IXYZ`.
    fn from_str(s: &str) -> Result<Self> {
        let mut rest = s.trim();
        let mut phase = 0u8;
        if let Some(r) = rest.strip_prefix('+') {
            rest = r;
        } else if let Some(r) = rest.strip_prefix('-') {
            phase = 2;
            rest = r;
        }
        if let Some(r) = rest.strip_prefix('i') {
            phase = (phase + 1) & 3;
            rest = r;
        }
        let n = rest.chars().count();
        if n == 0 || n > MAX_QUBITS {
            return Err(Error::InvalidPauli(s.to_string()));
        }
        let mut p = PauliString::identity(n);
        for (q, c) in rest.chars().enumerate() {
            let d = match c {
                'I' => 0,
                'X' => 1,
                'Y' => 2,
                'Z' => 3,
                _ => return Err(Error::InvalidPauli(s.to_string())),
            };
            p.set_digit(q, d);
        }
        Ok(p.with_phase(phase))
    }
}

/// The three Pauli vector norms of a coefficient map.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PauliNorms {
    pub l1: f64,
    pub l2: f64,
    pub linf: f64,
}

/// Sparse Pauli expansion `Σ_s α_s σ^s` keyed by phase-free strings.
///
/// Entries are kept in ascending base-4 index order and exact zeros are never
/// stored.
#[derive(Clone, Debug, PartialEq)]
pub struct PauliMap {
    n: usize,
    entries: BTreeMap<u64, C64>,
}

impl PauliMap {
    pub fn new(n: usize) -> Self {
        assert!(n <= MAX_QUBITS, "at most {MAX_QUBITS} qubits");
        Self {
            n,
            entries: BTreeMap::new(),
        }
    }

    /// Identity operator `{I: 1}`.
    pub fn identity(n: usize) -> Self {
        let mut m = Self::new(n);
        m.add_term(&PauliString::identity(n), C64::new(1.0, 0.0));
        m
    }

    pub fn from_terms<'a, I>(n: usize, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (&'a PauliString, C64)>,
    {
        let mut m = Self::new(n);
        for (p, c) in terms {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n(),
                });
            }
            m.add_term(p, c);
        }
        Ok(m)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Add `c · p`; a phase on `p` is folded into the coefficient.
    pub fn add_term(&mut self, p: &PauliString, c: C64) {
        debug_assert_eq!(p.n(), self.n);
        let c = c * i_pow(u32::from(p.phase_exp()));
        let key = p.index();
        let v = self.entries.entry(key).or_insert(ZERO);
        *v += c;
        if *v == ZERO {
            self.entries.remove(&key);
        }
    }

    /// Overwrite the coefficient of a phase-free string (zero removes it).
    pub fn set(&mut self, p: &PauliString, c: C64) {
        let key = p.index();
        if c == ZERO {
            self.entries.remove(&key);
        } else {
            self.entries.insert(key, c);
        }
    }

    pub fn get(&self, p: &PauliString) -> C64 {
        self.entries.get(&p.index()).copied().unwrap_or(ZERO)
    }

    pub fn get_index(&self, index: u64) -> C64 {
        self.entries.get(&index).copied().unwrap_or(ZERO)
    }

    pub fn contains(&self, p: &PauliString) -> bool {
        self.entries.contains_key(&p.index())
    }

    pub fn iter(&self) -> impl Iterator<Item = (PauliString, C64)> + '_ {
        let n = self.n;
        self.entries
            .iter()
            .map(move |(k, v)| (PauliString::from_index(n, *k).expect("stored index"), *v))
    }

    pub fn support(&self) -> Vec<PauliString> {
        self.iter().map(|(p, _)| p).collect()
    }

    pub fn norms(&self) -> PauliNorms {
        let mut l1 = 0.0;
        let mut l2 = 0.0;
        let mut linf = 0.0f64;
        for v in self.entries.values() {
            let a = v.norm();
            l1 += a;
            l2 += a * a;
            linf = linf.max(a);
        }
        PauliNorms {
            l1,
            l2: l2.sqrt(),
            linf,
        }
    }

    /// Drop entries with magnitude below `tol`.
    pub fn pruned(mut self, tol: f64) -> Self {
        self.entries.retain(|_, v| v.norm() >= tol && *v != ZERO);
        self
    }

    pub fn scale(&self, c: C64) -> Self {
        let mut out = Self::new(self.n);
        for (k, v) in &self.entries {
            let w = v * c;
            if w != ZERO {
                out.entries.insert(*k, w);
            }
        }
        out
    }

    fn combine(&self, other: &Self, sign: f64) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = self.clone();
        for (k, v) in &other.entries {
            let e = out.entries.entry(*k).or_insert(ZERO);
            *e += v * sign;
            if *e == ZERO {
                out.entries.remove(k);
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.combine(other, 1.0)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.combine(other, -1.0)
    }

    /// Operator product, computed term by term with phase tracking.
    pub fn mul(&self, other: &Self) -> Result<Self> {
        if self.n != other.n {
            return Err(Error::DimensionMismatch {
                expected: self.n,
                found: other.n,
            });
        }
        let mut out = Self::new(self.n);
        for (pa, ca) in self.iter() {
            for (pb, cb) in other.iter() {
                let prod = pa.mul_unchecked(&pb);
                out.add_term(&prod, ca * cb);
            }
        }
        Ok(out)
    }

    /// Keep only the given strings.
    pub fn restricted_to(&self, keep: &[PauliString]) -> Self {
        let mut out = Self::new(self.n);
        for p in keep {
            let v = self.get(p);
            if v != ZERO {
                out.entries.insert(p.index(), v);
            }
        }
        out
    }

    /// Largest-`s` support and the l1 mass outside it.
    ///
    /// Ties in magnitude go to the smaller base-4 index. `residual_l1` is the
    /// smallest `ε` for which the map is nearly `(s, ε)`-sparse.
    pub fn nearly_sparse_certificate(&self, s: usize) -> SparseCertificate {
        let mut ranked: Vec<(u64, f64)> = self.entries.iter().map(|(k, v)| (*k, v.norm())).collect();
        ranked.sort_by(|a, b| b.1.total_cmp(&a.1).then(a.0.cmp(&b.0)));
        let residual_l1 = ranked.iter().skip(s).map(|(_, a)| a).sum();
        let mut keep: Vec<u64> = ranked.iter().take(s).map(|(k, _)| *k).collect();
        keep.sort_unstable();
        SparseCertificate {
            support: keep
                .into_iter()
                .map(|k| PauliString::from_index(self.n, k).expect("stored index"))
                .collect(),
            residual_l1,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SparseCertificate {
    /// Ascending base-4 index order.
    pub support: Vec<PauliString>,
    pub residual_l1: f64,
}

/// In-place Walsh-Hadamard transform `F[z] = Σ_b f[b] (-1)^{z·b}`.
fn walsh_hadamard(f: &mut [C64]) {
    let len = f.len();
    let mut h = 1;
    while h < len {
        for i in (0..len).step_by(2 * h) {
            for j in i..i + h {
                let (a, b) = (f[j], f[j + h]);
                f[j] = a + b;
                f[j + h] = a - b;
            }
        }
        h *= 2;
    }
}

/// Full Pauli decomposition `α_s = 2^{-n} Tr(A σ^s)`.
///
/// For each X mask the diagonal `b ↦ A[b][b⊕x]` is gathered and all Z masks
/// are obtained at once with a Walsh-Hadamard transform, so the cost is
/// `O(4^n · n)`. Operators are limited by the dense cap (`2n ≤ cap`).
pub fn decompose(op: &DenseOperator) -> Result<PauliMap> {
    let n = op.qubits();
    crate::check_operator_cap(n)?;
    let d = op.dim();
    let inv = 1.0 / d as f64;
    let mut map = PauliMap::new(n);
    let mut f = vec![ZERO; d];
    for x in 0..d {
        for (b, slot) in f.iter_mut().enumerate() {
            *slot = op.get(b, b ^ x);
        }
        walsh_hadamard(&mut f);
        for (z, val) in f.iter().enumerate() {
            let c = *val * i_pow((x & z).count_ones()) * inv;
            if c.norm() >= PRUNE_TOL {
                let p = PauliString::from_masks(n, x as u64, z as u64)?;
                map.entries.insert(p.index(), c);
            }
        }
    }
    Ok(map)
}

/// Dense matrix `Σ_s α_s σ^s`.
pub fn synthesize(coeffs: &PauliMap) -> Result<DenseOperator> {
    let n = coeffs.n();
    crate::check_operator_cap(n)?;
    let mut m = DenseOperator::zeros(n);
    for (p, c) in coeffs.iter() {
        for b in 0..(1u64 << n) {
            let (amp, out) = p.apply_to_basis(b);
            let cur = m.get(out as usize, b as usize);
            m.set(out as usize, b as usize, cur + c * amp);
        }
    }
    Ok(m)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::{I, ONE};
    use crate::rng::stream;
    use rand::Rng;

    fn p(s: &str) -> PauliString {
        s.parse().unwrap()
    }

    /// `2^{-n} Tr(A σ^s)` by explicit matrix product.
    fn naive_coefficient(a: &DenseOperator, s: &PauliString) -> C64 {
        a.matmul(&s.dense()).unwrap().trace() / a.dim() as f64
    }

    #[test]
    fn single_qubit_products() {
        let xz = p("X").mul(&p("Z")).unwrap();
        assert_eq!(xz.label(), "Y");
        assert_eq!(xz.phase_exp(), 3);
        let zx = p("Z").mul(&p("X")).unwrap();
        assert_eq!((zx.label().as_str(), zx.phase_exp()), ("Y", 1));
        let xy = p("X").mul(&p("Y")).unwrap();
        assert_eq!((xy.label().as_str(), xy.phase_exp()), ("Z", 1));
        let disjoint = p("XI").mul(&p("IZ")).unwrap();
        assert_eq!((disjoint.label().as_str(), disjoint.phase_exp()), ("XZ", 0));
    }

    #[test]
    fn involution() {
        for idx in 0..64 {
            let s = PauliString::from_index(3, idx).unwrap();
            let sq = s.mul(&s).unwrap();
            assert!(sq.is_identity());
            assert_eq!(sq.phase_exp(), 0);
        }
    }

    #[test]
    fn mul_dimension_mismatch() {
        assert!(matches!(p("X").mul(&p("XX")), Err(Error::DimensionMismatch { .. })));
    }

    #[test]
    fn product_matches_dense_for_all_pairs() {
        for a in 0..16 {
            for b in 0..16 {
                let pa = PauliString::from_index(2, a).unwrap();
                let pb = PauliString::from_index(2, b).unwrap();
                let prod = pa.mul(&pb).unwrap();
                let dense = pa.dense().matmul(&pb.dense()).unwrap();
                assert!(prod.dense().max_abs_diff(&dense) < 1e-15, "{pa} {pb}");
            }
        }
    }

    #[test]
    fn index_and_text_round_trip() {
        for idx in 0..256 {
            let s = PauliString::from_index(4, idx).unwrap();
            assert_eq!(s.index(), idx);
            let back: PauliString = s.label().parse().unwrap();
            assert_eq!(back, s);
        }
        assert_eq!(p("XIZ").index(), 1 * 16 + 0 * 4 + 3);
        assert_eq!(p("-iY").phase_exp(), 3);
        assert!("XQ".parse::<PauliString>().is_err());
        assert!("".parse::<PauliString>().is_err());
    }

    #[test]
    fn dense_paulis_are_hermitian_unitary_traceless() {
        for idx in 0..16 {
            let s = PauliString::from_index(2, idx).unwrap();
            let m = s.dense();
            assert!(m.is_unitary(1e-15));
            assert!(m.is_hermitian(1e-15));
            if idx != 0 {
                assert!(m.trace().norm() < 1e-15);
            }
        }
    }

    #[test]
    fn hadamard_and_rotation_decompositions() {
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let h = DenseOperator::from_rows(&[
            vec![C64::new(r, 0.0), C64::new(r, 0.0)],
            vec![C64::new(r, 0.0), C64::new(-r, 0.0)],
        ])
        .unwrap();
        let m = decompose(&h).unwrap();
        assert_eq!(m.len(), 2);
        assert!((m.get(&p("X")) - r).norm() < 1e-15);
        assert!((m.get(&p("Z")) - r).norm() < 1e-15);

        let theta = 0.37;
        let rz = DenseOperator::diagonal(&[C64::from_polar(1.0, -theta), C64::from_polar(1.0, theta)]).unwrap();
        let m = decompose(&rz).unwrap();
        assert!((m.get(&p("I")) - theta.cos()).norm() < 1e-15);
        assert!((m.get(&p("Z")) - (-I * theta.sin())).norm() < 1e-15);
    }

    #[test]
    fn fast_decompose_matches_trace_formula() {
        let mut rng = stream(11, "pauli-test", 0);
        let u = DenseOperator::random_unitary(3, &mut rng);
        let m = decompose(&u).unwrap();
        for idx in 0..64 {
            let s = PauliString::from_index(3, idx).unwrap();
            assert!((m.get(&s) - naive_coefficient(&u, &s)).norm() < 1e-13);
        }
    }

    #[test]
    fn synthesize_examples() {
        assert_eq!(synthesize(&PauliMap::identity(2)).unwrap(), DenseOperator::identity(2));
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let mut m = PauliMap::new(1);
        m.add_term(&p("X"), C64::new(r, 0.0));
        m.add_term(&p("Z"), C64::new(r, 0.0));
        let h = synthesize(&m).unwrap();
        assert!((h.get(1, 1) + r).norm() < 1e-15);
        assert!((h.get(0, 1) - r).norm() < 1e-15);
    }

    #[test]
    fn random_sparse_round_trip() {
        let mut rng = stream(12, "pauli-test", 0);
        let mut m = PauliMap::new(3);
        while m.len() < 6 {
            let idx = rng.gen_range(0..64);
            m.set(
                &PauliString::from_index(3, idx).unwrap(),
                C64::new(rng.gen_range(-1.0..1.0), rng.gen_range(-1.0..1.0)),
            );
        }
        let back = decompose(&synthesize(&m).unwrap()).unwrap();
        assert_eq!(back.len(), 6);
        for (s, c) in m.iter() {
            assert!((back.get(&s) - c).norm() < 1e-12);
        }
    }

    #[test]
    fn norms_example() {
        let mut m = PauliMap::new(1);
        m.add_term(&p("X"), C64::new(0.6, 0.0));
        m.add_term(&p("Y"), C64::new(0.0, 0.8));
        let nrm = m.norms();
        assert!((nrm.l1 - 1.4).abs() < 1e-15);
        assert!((nrm.l2 - 1.0).abs() < 1e-15);
        assert!((nrm.linf - 0.8).abs() < 1e-15);
    }

    #[test]
    fn zero_terms_are_pruned() {
        let mut m = PauliMap::new(1);
        m.add_term(&p("X"), ONE);
        m.add_term(&p("X"), -ONE);
        assert!(m.is_empty());
        // phase folded into the coefficient
        m.add_term(&p("iZ"), ONE);
        assert_eq!(m.get(&p("Z")), I);
    }

    #[test]
    fn certificate_examples() {
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let mut h = PauliMap::new(1);
        h.add_term(&p("X"), C64::new(r, 0.0));
        h.add_term(&p("Z"), C64::new(r, 0.0));
        let c = h.nearly_sparse_certificate(1);
        // exact tie: smaller index (X) wins
        assert_eq!(c.support, vec![p("X")]);
        assert!((c.residual_l1 - r).abs() < 1e-15);
        let c3 = h.nearly_sparse_certificate(3);
        assert_eq!(c3.residual_l1, 0.0);
        assert_eq!(h.nearly_sparse_certificate(0).residual_l1, 2.0 * r);
    }

    #[test]
    fn decompose_rejects_over_cap() {
        let big = DenseOperator::identity(7);
        assert!(matches!(decompose(&big), Err(Error::ExceedsCap { .. })));
    }
}
