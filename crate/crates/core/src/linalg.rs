//! Dense complex matrices and the few factorizations the learner needs.

use alloc::vec;
use alloc::vec::Vec;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};

pub type C64 = Complex64;

pub(crate) const ZERO: C64 = C64::new(0.0, 0.0);
pub(crate) const ONE: C64 = C64::new(1.0, 0.0);
pub(crate) const I: C64 = C64::new(0.0, 1.0);

/// `i^e` for an exponent taken mod 4.
#[inline]
pub fn i_pow(e: u32) -> C64 {
    match e & 3 {
        0 => ONE,
        1 => I,
        2 => -ONE,
        _ => -I,
    }
}

pub(crate) fn qubits_for_dim(dim: usize) -> Result<usize> {
    if dim == 0 || !dim.is_power_of_two() {
        return Err(Error::NotPowerOfTwo(dim));
    }
    Ok(dim.trailing_zeros() as usize)
}

/// A `2^k x 2^k` complex matrix stored row-major.
#[derive(Clone, Debug, PartialEq)]
pub struct DenseOperator {
    qubits: usize,
    data: Vec<C64>,
}

impl DenseOperator {
    pub fn zeros(qubits: usize) -> Self {
        let d = 1usize << qubits;
        Self {
            qubits,
            data: vec![ZERO; d * d],
        }
    }

    pub fn identity(qubits: usize) -> Self {
        let mut m = Self::zeros(qubits);
        let d = m.dim();
        for i in 0..d {
            m.data[i * d + i] = ONE;
        }
        m
    }

    /// Build from row-major data of length `dim * dim`.
    pub fn from_row_major(dim: usize, data: Vec<C64>) -> Result<Self> {
        let qubits = qubits_for_dim(dim)?;
        if data.len() != dim * dim {
            return Err(Error::DimensionMismatch {
                expected: dim * dim,
                found: data.len(),
            });
        }
        Ok(Self { qubits, data })
    }

    /// Build from nested rows; rejects ragged or non-square input.
    pub fn from_rows(rows: &[Vec<C64>]) -> Result<Self> {
        let d = rows.len();
        let mut data = Vec::with_capacity(d * d);
        for r in rows {
            if r.len() != d {
                return Err(Error::NotSquare {
                    rows: d,
                    cols: r.len(),
                });
            }
            data.extend_from_slice(r);
        }
        Self::from_row_major(d, data)
    }

    pub fn diagonal(values: &[C64]) -> Result<Self> {
        let qubits = qubits_for_dim(values.len())?;
        let mut m = Self::zeros(qubits);
        for (i, v) in values.iter().enumerate() {
            m.set(i, i, *v);
        }
        Ok(m)
    }

    #[inline]
    pub fn qubits(&self) -> usize {
        self.qubits
    }

    #[inline]
    pub fn dim(&self) -> usize {
        1 << self.qubits
    }

    #[inline]
    pub fn get(&self, r: usize, c: usize) -> C64 {
        self.data[r * self.dim() + c]
    }

    #[inline]
    pub fn set(&mut self, r: usize, c: usize, v: C64) {
        let d = self.dim();
        self.data[r * d + c] = v;
    }

    pub fn as_slice(&self) -> &[C64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [C64] {
        &mut self.data
    }

    pub fn into_vec(self) -> Vec<C64> {
        self.data
    }

    pub fn column(&self, c: usize) -> Vec<C64> {
        (0..self.dim()).map(|r| self.get(r, c)).collect()
    }

    fn check_same_dim(&self, other: &Self) -> Result<()> {
        if self.qubits != other.qubits {
            return Err(Error::DimensionMismatch {
                expected: self.dim(),
                found: other.dim(),
            });
        }
        Ok(())
    }

    pub fn matmul(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            let row = &mut out[i * d..(i + 1) * d];
            for k in 0..d {
                let a = self.data[i * d + k];
                if a == ZERO {
                    continue;
                }
                let brow = &other.data[k * d..(k + 1) * d];
                for (o, b) in row.iter_mut().zip(brow) {
                    *o += a * b;
                }
            }
        }
        Ok(Self {
            qubits: self.qubits,
            data: out,
        })
    }

    pub fn adjoint(&self) -> Self {
        let d = self.dim();
        let mut out = vec![ZERO; d * d];
        for i in 0..d {
            for j in 0..d {
                out[j * d + i] = self.data[i * d + j].conj();
            }
        }
        Self {
            qubits: self.qubits,
            data: out,
        }
    }

    /// Kronecker product `self ⊗ other` (self on the most significant qubits).
    pub fn kron(&self, other: &Self) -> Self {
        let (da, db) = (self.dim(), other.dim());
        let d = da * db;
        let mut out = vec![ZERO; d * d];
        for i in 0..da {
            for j in 0..da {
                let a = self.data[i * da + j];
                if a == ZERO {
                    continue;
                }
                for k in 0..db {
                    for l in 0..db {
                        out[(i * db + k) * d + j * db + l] = a * other.data[k * db + l];
                    }
                }
            }
        }
        Self {
            qubits: self.qubits + other.qubits,
            data: out,
        }
    }

    pub fn scale(&self, c: C64) -> Self {
        Self {
            qubits: self.qubits,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            qubits: self.qubits,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        })
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_same_dim(other)?;
        Ok(Self {
            qubits: self.qubits,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        })
    }

    pub fn trace(&self) -> C64 {
        (0..self.dim()).map(|i| self.get(i, i)).sum()
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entrywise modulus of `self - other`.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        if self.qubits != other.qubits {
            return f64::INFINITY;
        }
        self.data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max)
    }

    /// `max |(M†M - I)_{ij}|`.
    pub fn unitarity_deviation(&self) -> f64 {
        let d = self.dim();
        let mut worst = 0.0f64;
        for i in 0..d {
            for j in i..d {
                let mut acc = ZERO;
                for k in 0..d {
                    acc += self.data[k * d + i].conj() * self.data[k * d + j];
                }
                if i == j {
                    acc -= ONE;
                }
                worst = worst.max(acc.norm());
            }
        }
        worst
    }

    pub fn is_unitary(&self, tol: f64) -> bool {
        self.unitarity_deviation() <= tol
    }

    pub fn ensure_unitary(&self, tol: f64) -> Result<()> {
        let dev = self.unitarity_deviation();
        if dev > tol {
            return Err(Error::NotUnitary(dev));
        }
        Ok(())
    }

    pub fn is_hermitian(&self, tol: f64) -> bool {
        let d = self.dim();
        (0..d).all(|i| (i..d).all(|j| (self.get(i, j) - self.get(j, i).conj()).norm() <= tol))
    }

    pub fn matvec(&self, v: &[C64]) -> Vec<C64> {
        let d = self.dim();
        (0..d)
            .map(|i| {
                self.data[i * d..(i + 1) * d]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Largest singular value.
    pub fn spectral_norm(&self) -> f64 {
        let gram = self.adjoint().matmul(self).expect("same dimension");
        let (vals, _) = hermitian_eigen(&gram);
        vals.iter().cloned().fold(0.0, f64::max).max(0.0).sqrt()
    }

    /// Haar-random unitary via Gram-Schmidt on a complex Ginibre matrix.
    pub fn random_unitary<R: Rng + ?Sized>(qubits: usize, rng: &mut R) -> Self {
        let d = 1usize << qubits;
        let cols: Vec<Vec<C64>> = (0..d)
            .map(|_| (0..d).map(|_| complex_normal(rng)).collect())
            .collect();
        let q = gram_schmidt(cols);
        let mut m = Self::zeros(qubits);
        for (c, col) in q.iter().enumerate() {
            for (r, v) in col.iter().enumerate() {
                m.set(r, c, *v);
            }
        }
        m
    }

    /// `exp(-i t H)` for Hermitian `H`.
    pub fn expm_hermitian(h: &Self, t: f64) -> Self {
        let (vals, vecs) = hermitian_eigen(h);
        let d = h.dim();
        let mut out = Self::zeros(h.qubits);
        for (k, lambda) in vals.iter().enumerate() {
            let phase = C64::from_polar(1.0, -t * lambda);
            for i in 0..d {
                let vi = vecs.get(i, k) * phase;
                for j in 0..d {
                    let cur = out.get(i, j);
                    out.set(i, j, cur + vi * vecs.get(j, k).conj());
                }
            }
        }
        out
    }
}

/// Standard complex Gaussian with `E|z|^2 = 1`.
pub fn complex_normal<R: Rng + ?Sized>(rng: &mut R) -> C64 {
    // Box-Muller
    let u1: f64 = 1.0 - rng.gen::<f64>();
    let u2: f64 = rng.gen::<f64>();
    let r = (-u1.ln()).sqrt();
    let a = core::f64::consts::TAU * u2;
    C64::new(r * a.cos(), r * a.sin())
}

pub(crate) fn inner(a: &[C64], b: &[C64]) -> C64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

pub(crate) fn norm2(a: &[C64]) -> f64 {
    a.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt()
}

/// Modified Gram-Schmidt; columns must be linearly independent.
pub(crate) fn gram_schmidt(mut cols: Vec<Vec<C64>>) -> Vec<Vec<C64>> {
    for i in 0..cols.len() {
        for j in 0..i {
            let (done, rest) = cols.split_at_mut(i);
            let proj = inner(&done[j], &rest[0]);
            for (x, q) in rest[0].iter_mut().zip(&done[j]) {
                *x -= proj * q;
            }
        }
        let nrm = norm2(&cols[i]);
        for x in cols[i].iter_mut() {
            *x /= nrm;
        }
    }
    cols
}

/// Eigen-decomposition of a Hermitian matrix by cyclic complex Jacobi rotations.
///
/// Returns eigenvalues in ascending order and the unitary whose columns are the
/// matching eigenvectors. Only the Hermitian part of the input is used.
pub fn hermitian_eigen(m: &DenseOperator) -> (Vec<f64>, DenseOperator) {
    let d = m.dim();
    let mut a = m.clone();
    // symmetrize
    for i in 0..d {
        for j in i..d {
            let v = (a.get(i, j) + a.get(j, i).conj()) * 0.5;
            a.set(i, j, v);
            a.set(j, i, v.conj());
        }
    }
    let mut v = DenseOperator::identity(m.qubits());
    let scale = a.frobenius_norm().max(f64::MIN_POSITIVE);
    for _sweep in 0..100 {
        let mut off = 0.0;
        for i in 0..d {
            for j in (i + 1)..d {
                off += a.get(i, j).norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..d {
            for q in (p + 1)..d {
                let apq = a.get(p, q);
                let g = apq.norm();
                if g <= 1e-300 {
                    continue;
                }
                let e = apq / g;
                let app = a.get(p, p).re;
                let aqq = a.get(q, q).re;
                let tau = (aqq - app) / (2.0 * g);
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // J = diag(1, conj(e)) * [[c, s], [-s, c]]
                let jpp = C64::new(c, 0.0);
                let jpq = C64::new(s, 0.0);
                let jqp = -e.conj() * s;
                let jqq = e.conj() * c;
                for r in 0..d {
                    let arp = a.get(r, p);
                    let arq = a.get(r, q);
                    a.set(r, p, arp * jpp + arq * jqp);
                    a.set(r, q, arp * jpq + arq * jqq);
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, vrp * jpp + vrq * jqp);
                    v.set(r, q, vrp * jpq + vrq * jqq);
                }
                for col in 0..d {
                    let apc = a.get(p, col);
                    let aqc = a.get(q, col);
                    a.set(p, col, jpp.conj() * apc + jqp.conj() * aqc);
                    a.set(q, col, jpq.conj() * apc + jqq.conj() * aqc);
                }
                a.set(p, q, ZERO);
                a.set(q, p, ZERO);
                let (np, nq) = (a.get(p, p).re, a.get(q, q).re);
                a.set(p, p, C64::new(np, 0.0));
                a.set(q, q, C64::new(nq, 0.0));
            }
        }
    }
    let mut order: Vec<usize> = (0..d).collect();
    order.sort_by(|&x, &y| a.get(x, x).re.total_cmp(&a.get(y, y).re));
    let vals = order.iter().map(|&k| a.get(k, k).re).collect();
    let mut vecs = DenseOperator::zeros(m.qubits());
    for (new_c, &old_c) in order.iter().enumerate() {
        for r in 0..d {
            vecs.set(r, new_c, v.get(r, old_c));
        }
    }
    (vals, vecs)
}

/// Eigenvalues of a normal matrix (e.g. a unitary).
///
/// Diagonalizes a generic Hermitian combination of the Hermitian and
/// anti-Hermitian parts, which share eigenvectors with `m`, then reads the
/// eigenvalues off as Rayleigh quotients. Two combinations are tried and the
/// one with the smaller residual is kept.
pub fn normal_eigenvalues(m: &DenseOperator) -> Vec<C64> {
    let adj = m.adjoint();
    let herm = m.add(&adj).expect("same dim").scale(C64::new(0.5, 0.0));
    let anti = m.sub(&adj).expect("same dim").scale(C64::new(0.0, -0.5));
    let mut best: Option<(f64, Vec<C64>)> = None;
    for beta in [0.618_033_988_749_895_f64, 2.236_067_977_499_79] {
        let h = herm
            .scale(C64::new(beta.cos(), 0.0))
            .add(&anti.scale(C64::new(beta.sin(), 0.0)))
            .expect("same dim");
        let (_, vecs) = hermitian_eigen(&h);
        let mut lambdas = Vec::with_capacity(m.dim());
        let mut resid = 0.0f64;
        for k in 0..m.dim() {
            let v = vecs.column(k);
            let mv = m.matvec(&v);
            let lambda = inner(&v, &mv);
            let r: f64 = mv
                .iter()
                .zip(&v)
                .map(|(a, b)| (a - lambda * b).norm_sqr())
                .sum::<f64>()
                .sqrt();
            resid = resid.max(r);
            lambdas.push(lambda);
        }
        if best.as_ref().map_or(true, |(r, _)| resid < *r) {
            best = Some((resid, lambdas));
        }
    }
    best.expect("two attempts").1
}

/// Sum of absolute eigenvalues of a Hermitian matrix.
pub fn hermitian_trace_norm(m: &DenseOperator) -> f64 {
    hermitian_eigen(m).0.iter().map(|v| v.abs()).sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::stream;

    #[test]
    fn random_unitary_is_unitary() {
        let mut rng = stream(1, "linalg-test", 0);
        for k in 1..=4 {
            let u = DenseOperator::random_unitary(k, &mut rng);
            assert!(u.is_unitary(1e-12), "k={k}");
        }
    }

    #[test]
    fn jacobi_reconstructs_hermitian() {
        let mut rng = stream(2, "linalg-test", 0);
        let a = DenseOperator::random_unitary(3, &mut rng);
        let h = a.add(&a.adjoint()).unwrap();
        let (vals, vecs) = hermitian_eigen(&h);
        assert!(vecs.is_unitary(1e-12));
        let diag = DenseOperator::diagonal(&vals.iter().map(|v| C64::new(*v, 0.0)).collect::<Vec<_>>()).unwrap();
        let back = vecs.matmul(&diag).unwrap().matmul(&vecs.adjoint()).unwrap();
        assert!(back.max_abs_diff(&h) < 1e-12);
        assert!(vals.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn spectral_norm_of_diagonal() {
        let d = DenseOperator::diagonal(&[C64::new(0.5, 0.0), C64::new(0.0, -2.0)]).unwrap();
        assert!((d.spectral_norm() - 2.0).abs() < 1e-12);
    }

    #[test]
    fn expm_of_pauli_z() {
        let z = DenseOperator::diagonal(&[ONE, -ONE]).unwrap();
        let u = DenseOperator::expm_hermitian(&z, 0.3);
        assert!((u.get(0, 0) - C64::from_polar(1.0, -0.3)).norm() < 1e-14);
        assert!((u.get(1, 1) - C64::from_polar(1.0, 0.3)).norm() < 1e-14);
    }

    #[test]
    fn normal_eigenvalues_of_random_unitary_lie_on_circle() {
        let mut rng = stream(3, "linalg-test", 0);
        let u = DenseOperator::random_unitary(3, &mut rng);
        let ev = normal_eigenvalues(&u);
        let tr: C64 = ev.iter().sum();
        assert!((tr - u.trace()).norm() < 1e-10);
        assert!(ev.iter().all(|l| (l.norm() - 1.0).abs() < 1e-10));
    }

    #[test]
    fn kron_orders_most_significant_first() {
        let x = DenseOperator::from_rows(&[vec![ZERO, ONE], vec![ONE, ZERO]]).unwrap();
        let id = DenseOperator::identity(1);
        let xi = x.kron(&id);
        // X on qubit 0 maps |00> (0) to |10> (2)
        assert_eq!(xi.get(2, 0), ONE);
    }
}
