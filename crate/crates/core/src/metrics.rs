//! Distances between an operator and a unitary reference.
//!
//! All channel quantities use the maximally entangled input
//! `|Φ> = N^{-1/2} Σ_r |r>|r>` when a restricted (mixed-marginal) variant is
//! meant, matching the Choi layout of [`crate::sim`].

use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;
use rand::Rng;

use crate::error::{Error, Result};
use crate::linalg::{complex_normal, gram_schmidt, inner, normal_eigenvalues, DenseOperator, C64};
use crate::pauli::{decompose, PauliMap};
use crate::sim::{choi_of, NORM_TOL};

const GRID: usize = 512;
const L1_GRID: usize = 256;
const GOLDEN_TOL: f64 = 1e-8;

fn same_dims(u: &DenseOperator, v: &DenseOperator) -> Result<()> {
    if u.dim() != v.dim() {
        return Err(Error::DimensionMismatch {
            expected: u.qubits(),
            found: v.qubits(),
        });
    }
    Ok(())
}

/// Minimize `f` on `[0, 2π)`: uniform grid, then golden-section search in the
/// bracket around the best grid point. Returns `(argmin, min)`.
fn minimize_on_circle<F: FnMut(f64) -> f64>(mut f: F, grid: usize) -> (f64, f64) {
    let step = 2.0 * PI / grid as f64;
    let (mut best_x, mut best_f) = (0.0, f(0.0));
    for i in 1..grid {
        let x = i as f64 * step;
        let y = f(x);
        if y < best_f {
            best_x = x;
            best_f = y;
        }
    }
    let g = (5f64.sqrt() - 1.0) / 2.0;
    let (mut a, mut b) = (best_x - step, best_x + step);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    while b - a > GOLDEN_TOL {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    let x = 0.5 * (a + b);
    let y = f(x);
    if y < best_f {
        (x.rem_euclid(2.0 * PI), y)
    } else {
        (best_x, best_f)
    }
}

/// `min_θ ‖u - e^{iθ} v‖_op`.
///
/// Returns the value and `φ* = -θ_min mod 2π`, so `v ≈ e^{iφ*} u` when the
/// value is small.
pub fn d_optphase(u: &DenseOperator, v: &DenseOperator) -> Result<(f64, f64)> {
    same_dims(u, v)?;
    let (theta, value) = minimize_on_circle(
        |t| u.sub(&v.scale(C64::from_polar(1.0, t))).expect("same dim").spectral_norm(),
        GRID,
    );
    // Adding 0.0 turns -0.0 into 0.0.
    Ok((value, (-theta).rem_euclid(2.0 * PI) + 0.0))
}

/// `min_φ ‖a - e^{iφ} b‖_{1,P}` and the minimizing `φ`.
pub fn min_phase_l1(a: &PauliMap, b: &PauliMap) -> Result<(f64, f64)> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let mut pairs: Vec<(C64, C64)> = a.iter().map(|(p, x)| (x, b.get(&p))).collect();
    pairs.extend(b.iter().filter(|(p, _)| !a.contains(p)).map(|(_, y)| (C64::new(0.0, 0.0), y)));
    let (phi, value) = minimize_on_circle(
        |t| {
            let r = C64::from_polar(1.0, t);
            pairs.iter().map(|(x, y)| (x - r * y).norm()).sum()
        },
        L1_GRID,
    );
    Ok((value, phi))
}

/// `min_φ ‖a - e^{iφ} b‖_{2,P}` in closed form, with the minimizing `φ`.
pub fn min_phase_l2(a: &PauliMap, b: &PauliMap) -> Result<(f64, f64)> {
    if a.n() != b.n() {
        return Err(Error::DimensionMismatch {
            expected: a.n(),
            found: b.n(),
        });
    }
    let mut cross = C64::new(0.0, 0.0);
    for (p, x) in a.iter() {
        cross += x.conj() * b.get(&p);
    }
    let (na, nb) = (a.norms().l2, b.norms().l2);
    let value = (na * na + nb * nb - 2.0 * cross.norm()).max(0.0).sqrt();
    // |a - e^{iφ}b|² is smallest when e^{iφ} <a|b> is real and positive.
    let phi = (-cross.arg()).rem_euclid(2.0 * PI);
    Ok((value, phi))
}

/// Upper bound on the diamond distance between the channels of `u` and `v`.
///
/// The smaller of `min_φ (2x + x²)` with `x = ‖u - e^{iφ}v‖_{1,P}` and
/// `(‖u‖_op + ‖v‖_op) d_optphase(u, v)`.
pub fn diamond_upper(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    same_dims(u, v)?;
    u.ensure_unitary(NORM_TOL)?;
    let (x, _) = min_phase_l1(&decompose(u)?, &decompose(v)?)?;
    let (d, _) = d_optphase(u, v)?;
    let lemma = (u.spectral_norm() + v.spectral_norm()) * d;
    Ok((2.0 * x + x * x).min(lemma))
}

/// Diamond distance between two unitary channels.
///
/// `2√(1 - r²)` with `r` the distance from 0 to the convex hull of the
/// eigenvalues of `u†v`. The eigenvalues lie on the unit circle, so the hull
/// misses 0 exactly when they fit in an arc of length `L < π`, and then
/// `r = cos(L/2)`.
pub fn diamond_exact_unitary(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    same_dims(u, v)?;
    u.ensure_unitary(NORM_TOL)?;
    v.ensure_unitary(NORM_TOL)?;
    let w = u.adjoint().matmul(v)?;
    let mut angles: Vec<f64> = normal_eigenvalues(&w).iter().map(|z| z.arg().rem_euclid(2.0 * PI)).collect();
    angles.sort_by(|a, b| a.total_cmp(b));
    let mut max_gap = 2.0 * PI - (angles[angles.len() - 1] - angles[0]);
    for pair in angles.windows(2) {
        max_gap = max_gap.max(pair[1] - pair[0]);
    }
    let arc = 2.0 * PI - max_gap;
    if arc >= PI {
        return Ok(2.0);
    }
    Ok(2.0 * (arc / 2.0).sin())
}

/// Exact restricted diamond distance at the maximally mixed marginal:
/// `‖ |a><a| - |b><b| ‖_1` with `a = J(u)`, `b = J(v)`.
///
/// The difference has rank at most 2, so its trace norm is
/// `√((<a|a> + <b|b>)² - 4|<a|b>|²)`.
pub fn restricted_diamond_mm(u: &DenseOperator, v: &DenseOperator) -> Result<f64> {
    same_dims(u, v)?;
    crate::check_operator_cap(u.qubits())?;
    u.ensure_unitary(NORM_TOL)?;
    let a = choi_of(u);
    let b = choi_of(v);
    let (aa, bb) = (a.norm().powi(2), b.norm().powi(2));
    let ab = a.inner(&b).norm_sqr();
    Ok(((aa + bb).powi(2) - 4.0 * ab).max(0.0).sqrt())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct L2BoundCheck {
    /// `‖u - v‖_{2,P}`.
    pub nu: f64,
    /// `2ν + ν²`.
    pub bound: f64,
    /// Restricted diamond distance.
    pub actual: f64,
}

impl L2BoundCheck {
    pub fn holds(&self) -> bool {
        self.actual <= self.bound + 1e-9
    }
}

/// Compare the restricted diamond distance with `2ν + ν²`.
pub fn l2_bound_check(u: &DenseOperator, v: &DenseOperator) -> Result<L2BoundCheck> {
    same_dims(u, v)?;
    let nu = u.sub(v)?.frobenius_norm() / (u.dim() as f64).sqrt();
    let actual = restricted_diamond_mm(u, v)?;
    Ok(L2BoundCheck {
        nu,
        bound: 2.0 * nu + nu * nu,
        actual,
    })
}

/// Largest total-variation distance between the outcome distributions of
/// random two-outcome projective measurements on `J(u)` and `J(v)`.
///
/// Half the samples are rank-1 projectors near the positive eigenvector of
/// `|a><a| - |b><b|` (the optimal measurement), the rest Haar-random
/// projectors of random rank.
pub fn tv_contractivity_check<R: Rng + ?Sized>(
    u: &DenseOperator,
    v: &DenseOperator,
    povm_samples: usize,
    rng: &mut R,
) -> Result<f64> {
    same_dims(u, v)?;
    crate::check_operator_cap(u.qubits())?;
    let a = choi_of(u);
    let b = choi_of(v);
    let (av, bv) = (a.amplitudes(), b.amplitudes());
    let d = av.len();
    let helstrom = helstrom_vector(av, bv);
    let mut best = 0.0f64;
    for i in 0..povm_samples {
        let basis: Vec<Vec<C64>> = if i % 2 == 0 {
            let eta = rng.gen::<f64>() * 0.5;
            let w: Vec<C64> = match &helstrom {
                Some(h) => h.iter().map(|x| x + complex_normal(rng) * eta / (d as f64).sqrt()).collect(),
                None => (0..d).map(|_| complex_normal(rng)).collect(),
            };
            gram_schmidt(alloc::vec![w])
        } else {
            let rank = rng.gen_range(1..d.max(2));
            let cols = (0..rank).map(|_| (0..d).map(|_| complex_normal(rng)).collect()).collect();
            gram_schmidt(cols)
        };
        let weight = |x: &[C64]| -> f64 { basis.iter().map(|e| inner(e, x).norm_sqr()).sum() };
        let (pa, pb) = (weight(av), weight(bv));
        let (na, nb) = (a.norm().powi(2), b.norm().powi(2));
        let tv = 0.5 * ((pa - pb).abs() + ((na - pa) - (nb - pb)).abs());
        best = best.max(tv);
    }
    Ok(best)
}

/// Unit eigenvector of `|a><a| - |b><b|` for its positive eigenvalue.
fn helstrom_vector(a: &[C64], b: &[C64]) -> Option<Vec<C64>> {
    let aa = inner(a, a).re;
    let bb = inner(b, b).re;
    let ab = inner(a, b);
    // On span{a, b}: (c1, c2) -> (aa c1 + ab c2, -conj(ab) c1 - bb c2).
    let tr = aa - bb;
    let det = -aa * bb + ab.norm_sqr();
    let disc = (tr * tr - 4.0 * det).max(0.0).sqrt();
    if disc < 1e-14 {
        return None;
    }
    let lambda = (tr + disc) / 2.0;
    let (c1, c2) = if ab.norm() > 1e-14 {
        (ab, C64::new(lambda - aa, 0.0))
    } else if aa >= bb {
        (C64::new(1.0, 0.0), C64::new(0.0, 0.0))
    } else {
        (C64::new(0.0, 0.0), C64::new(1.0, 0.0))
    };
    let w: Vec<C64> = a.iter().zip(b).map(|(x, y)| c1 * x + c2 * y).collect();
    let n = inner(&w, &w).re.sqrt();
    if n < 1e-14 {
        return None;
    }
    Some(w.iter().map(|x| x / n).collect())
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DistanceReport {
    pub d_optphase: f64,
    pub phi_star: f64,
    /// Present when both operators are unitary.
    pub d_diamond_exact: Option<f64>,
    pub d_diamond_upper: f64,
    pub d_restricted_mm: f64,
    pub l1p_aligned: f64,
    pub l2p_aligned: f64,
}

/// Every distance between a unitary `u` and an operator `v`.
pub fn distance_report(u: &DenseOperator, v: &DenseOperator) -> Result<DistanceReport> {
    same_dims(u, v)?;
    u.ensure_unitary(NORM_TOL)?;
    let (au, av) = (decompose(u)?, decompose(v)?);
    let (d, phi_star) = d_optphase(u, v)?;
    let exact = if v.is_unitary(NORM_TOL) {
        Some(diamond_exact_unitary(u, v)?)
    } else {
        None
    };
    Ok(DistanceReport {
        d_optphase: d,
        phi_star,
        d_diamond_exact: exact,
        d_diamond_upper: diamond_upper(u, v)?,
        d_restricted_mm: restricted_diamond_mm(u, v)?,
        l1p_aligned: min_phase_l1(&au, &av)?.0,
        l2p_aligned: min_phase_l2(&au, &av)?.0,
    })
}
