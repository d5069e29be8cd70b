//! Support recovery, coefficient estimation and truncation.
//!
//! A run has two stages. Bell sampling of `m₁` Choi copies collects every
//! Pauli string whose coefficient is at least `θ` in magnitude (with
//! probability `1 - δ`). Two shadow rounds of `m₂` copies each then estimate
//! `|α_s|²` for the candidates, fix the largest as anchor `t`, and recover
//! `α_s e^{-i arg α_t}` from the anchor cross terms.

use alloc::string::ToString;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::{Error, Result};
use crate::linalg::C64;
use crate::pauli::{PauliMap, PauliString};
use crate::rng;
use crate::shadows::{estimate_all, BellObservable, DEFAULT_SHADOW_C};
use crate::sim::{bell_sample, UnitaryOracle};

/// Query budget applied when a config does not set one.
pub const DEFAULT_MAX_QUERIES: u64 = 200_000_000;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Constants {
    pub c_m1: f64,
    pub c_m2: f64,
    pub c_acc: f64,
}

impl Default for Constants {
    fn default() -> Self {
        Self {
            c_m1: 1.0,
            c_m2: DEFAULT_SHADOW_C,
            c_acc: 1.0 / 144.0,
        }
    }
}

/// How `θ`, the inner shadow accuracy `ε'` and truncation are chosen.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Mode {
    /// Explicit threshold and shadow accuracy; requires `ε ≤ θ²/16`. No truncation.
    Estimate { theta: f64, epsilon: f64 },
    /// Nearly `(s, ε)`-sparse target: `θ = ε/√s`, `ε' = c_acc ε²/s³`, truncation at `2ε₂`.
    NearlySparse { s: usize, epsilon: f64 },
    /// Preset for the dominant-coefficient and bounded-norm corollaries:
    /// as `NearlySparse` but with `ε' = c_acc (ε/s)²`.
    Corollary { s: usize, epsilon: f64 },
    /// `‖U‖_{1,P} ≤ L`: `θ = ε²/(12L)`, `ε' = ε⁴/(144L²)`. No truncation.
    L1Bounded { l1: f64, epsilon: f64 },
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LearnConfig {
    pub mode: Mode,
    pub delta: f64,
    pub constants: Constants,
    /// Abort before querying when `m₁ + 2m₂` would exceed this.
    pub max_queries: Option<u64>,
}

impl LearnConfig {
    pub fn new(mode: Mode, delta: f64) -> Self {
        Self {
            mode,
            delta,
            constants: Constants::default(),
            max_queries: Some(DEFAULT_MAX_QUERIES),
        }
    }

    pub fn estimate(theta: f64, epsilon: f64, delta: f64) -> Self {
        Self::new(Mode::Estimate { theta, epsilon }, delta)
    }

    pub fn nearly_sparse(s: usize, epsilon: f64, delta: f64) -> Self {
        Self::new(Mode::NearlySparse { s, epsilon }, delta)
    }

    pub fn corollary(s: usize, epsilon: f64, delta: f64) -> Self {
        Self::new(Mode::Corollary { s, epsilon }, delta)
    }

    pub fn l1_bounded(l1: f64, epsilon: f64, delta: f64) -> Self {
        Self::new(Mode::L1Bounded { l1, epsilon }, delta)
    }

    pub fn with_constants(mut self, constants: Constants) -> Self {
        self.constants = constants;
        self
    }

    pub fn with_max_queries(mut self, max_queries: Option<u64>) -> Self {
        self.max_queries = max_queries;
        self
    }

    /// Support threshold `θ`.
    pub fn theta(&self) -> f64 {
        match self.mode {
            Mode::Estimate { theta, .. } => theta,
            Mode::NearlySparse { s, epsilon } | Mode::Corollary { s, epsilon } => epsilon / (s as f64).sqrt(),
            Mode::L1Bounded { l1, epsilon } => epsilon * epsilon / (12.0 * l1),
        }
    }

    /// Shadow accuracy `ε'` handed to coefficient estimation.
    pub fn inner_epsilon(&self) -> f64 {
        let c = self.constants.c_acc;
        match self.mode {
            Mode::Estimate { epsilon, .. } => epsilon,
            Mode::NearlySparse { s, epsilon } => c * epsilon * epsilon / (s as f64).powi(3),
            Mode::Corollary { s, epsilon } => c * (epsilon / s as f64).powi(2),
            Mode::L1Bounded { l1, epsilon } => epsilon.powi(4) / (144.0 * l1 * l1),
        }
    }

    pub fn truncates(&self) -> bool {
        matches!(self.mode, Mode::NearlySparse { .. } | Mode::Corollary { .. })
    }

    /// Accuracy promised by the mode: `2ε` in `‖·‖_{1,P}` for the sparse modes,
    /// `ε` in `‖·‖_{2,P}` for the bounded-l1 mode, `None` for `Estimate`.
    pub fn target_error(&self) -> Option<f64> {
        match self.mode {
            Mode::Estimate { .. } => None,
            Mode::NearlySparse { epsilon, .. } | Mode::Corollary { epsilon, .. } => Some(2.0 * epsilon),
            Mode::L1Bounded { epsilon, .. } => Some(epsilon),
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidParameter(m.to_string()));
        if !(self.delta > 0.0 && self.delta < 1.0) {
            return bad("delta must lie in (0, 1)");
        }
        match self.mode {
            Mode::Estimate { theta, epsilon } => {
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return bad("epsilon must lie in (0, 1)");
                }
                if epsilon > theta * theta / 16.0 {
                    return bad("epsilon must not exceed theta^2/16");
                }
            }
            Mode::NearlySparse { s, epsilon } | Mode::Corollary { s, epsilon } => {
                if s == 0 {
                    return bad("sparsity must be at least 1");
                }
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return bad("epsilon must lie in (0, 1)");
                }
            }
            Mode::L1Bounded { l1, epsilon } => {
                if !(l1 >= 1.0) {
                    return bad("l1 bound must be at least 1 for a unitary");
                }
                if !(epsilon > 0.0 && epsilon < 1.0) {
                    return bad("epsilon must lie in (0, 1)");
                }
            }
        }
        let c = self.constants;
        if !(c.c_m1 > 0.0 && c.c_m2 > 0.0 && c.c_acc > 0.0) {
            return bad("constants must be positive");
        }
        check_theta(self.theta())
    }
}

fn check_theta(theta: f64) -> Result<()> {
    if !(theta > 0.0 && theta <= 1.0) {
        return Err(Error::InvalidParameter(alloc::format!("theta {theta} outside (0, 1]")));
    }
    Ok(())
}

/// `m₁ = ⌈c_m1 (ln(1/θ²) + ln(1/δ)) / θ²⌉`.
pub fn m1(theta: f64, delta: f64, c_m1: f64) -> u64 {
    let t2 = theta * theta;
    (c_m1 * ((1.0 / t2).ln() + (1.0 / delta).ln()) / t2).ceil().max(1.0) as u64
}

/// `m₂ = ⌈c_m2 ln(|X|/δ) / ε²⌉`.
pub fn m2(support: usize, epsilon: f64, delta: f64, c_m2: f64) -> u64 {
    (c_m2 * (support.max(1) as f64 / delta).ln() / (epsilon * epsilon)).ceil().max(1.0) as u64
}

/// Coefficient error bound `ε₂ = 3√ε / (|α_t| - √ε)`.
pub fn epsilon2(epsilon: f64, anchor_mag: f64) -> f64 {
    let r = epsilon.sqrt();
    if anchor_mag <= r {
        f64::INFINITY
    } else {
        3.0 * r / (anchor_mag - r)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Budget {
    pub m1: u64,
    pub m2: u64,
    pub total: u64,
}

/// Query counts for a config once the candidate set has `support` elements.
pub fn plan(cfg: &LearnConfig, support: usize) -> Budget {
    let a = m1(cfg.theta(), cfg.delta, cfg.constants.c_m1);
    let b = m2(support, cfg.inner_epsilon(), cfg.delta, cfg.constants.c_m2);
    Budget {
        m1: a,
        m2: b,
        total: a.saturating_add(b.saturating_mul(2)),
    }
}

fn check_budget(cfg: &LearnConfig, planned: u64) -> Result<()> {
    match cfg.max_queries {
        Some(budget) if planned > budget => Err(Error::BudgetExceeded { planned, budget }),
        _ => Ok(()),
    }
}

/// Bell-sample `m₁` copies; returns the distinct outcomes in ascending index order.
pub fn find_support(oracle: &mut UnitaryOracle, theta: f64, delta: f64, c_m1: f64, seed: u64) -> Result<Vec<PauliString>> {
    check_theta(theta)?;
    if !(delta > 0.0 && delta < 1.0) {
        return Err(Error::InvalidParameter("delta must lie in (0, 1)".to_string()));
    }
    let shots = m1(theta, delta, c_m1);
    let state = oracle.prepare_copies(shots);
    let mut r = rng::stream(seed, "learn-bell", 0);
    let mut found: Vec<PauliString> = bell_sample(&state, &mut r, shots as usize)?;
    found.sort_by_key(|p| p.index());
    found.dedup();
    Ok(found)
}

#[derive(Clone, Debug, PartialEq)]
pub struct CoefficientEstimate {
    /// Estimates for every candidate, relative to the anchor phase.
    pub alpha_hat: PauliMap,
    pub anchor: PauliString,
    /// `√max(M̃_t, 0)`.
    pub anchor_mag: f64,
    /// `M̃_s` for every candidate, in candidate order.
    pub m_tilde: Vec<f64>,
    pub m2: u64,
}

/// Two shadow rounds of `m₂` copies each over the candidate set.
pub fn estimate_coefficients(
    oracle: &mut UnitaryOracle,
    support: &[PauliString],
    epsilon: f64,
    delta: f64,
    c_m2: f64,
    seed: u64,
) -> Result<CoefficientEstimate> {
    if support.is_empty() {
        return Err(Error::EmptyInput);
    }
    let n = oracle.qubits();
    if let Some(p) = support.iter().find(|p| p.n() != n) {
        return Err(Error::DimensionMismatch {
            expected: n,
            found: p.n(),
        });
    }
    let copies = m2(support.len(), epsilon, delta, c_m2);

    let state = oracle.prepare_copies(copies);
    let observables: Vec<BellObservable> = support.iter().map(|s| BellObservable::m(*s)).collect();
    let m_tilde = estimate_all(&state, &observables, copies as usize, delta, seed, "learn-round1")?;
    let mut best = 0;
    for (i, v) in m_tilde.iter().enumerate() {
        if *v > m_tilde[best] {
            best = i;
        }
    }
    let anchor = support[best].phase_free();
    if m_tilde[best] <= epsilon {
        return Err(Error::AnchorTooSmall {
            anchor: m_tilde[best],
            epsilon,
        });
    }
    let anchor_mag = m_tilde[best].max(0.0).sqrt();

    let state = oracle.prepare_copies(copies);
    let others: Vec<PauliString> = support.iter().map(|p| p.phase_free()).filter(|p| *p != anchor).collect();
    let mut pair = Vec::with_capacity(2 * others.len());
    for s in &others {
        pair.push(BellObservable::r(anchor, *s));
        pair.push(BellObservable::i(anchor, *s));
    }
    let cross = estimate_all(&state, &pair, copies as usize, delta, seed, "learn-round2")?;

    let mut alpha_hat = PauliMap::new(n);
    alpha_hat.set(&anchor, C64::new(anchor_mag, 0.0));
    for (s, ri) in others.iter().zip(cross.chunks_exact(2)) {
        alpha_hat.set(s, C64::new(ri[0], ri[1]) / anchor_mag);
    }
    Ok(CoefficientEstimate {
        alpha_hat,
        anchor,
        anchor_mag,
        m_tilde,
        m2: copies,
    })
}

#[derive(Clone, Debug, PartialEq)]
pub struct LearnReport {
    pub config: LearnConfig,
    pub seed: u64,
    /// Candidate set from Bell sampling, ascending.
    pub support: Vec<PauliString>,
    /// Estimates before truncation.
    pub estimates: PauliMap,
    /// Final coefficients (after truncation when the mode truncates).
    pub alpha_hat: PauliMap,
    pub anchor: PauliString,
    pub anchor_mag: f64,
    pub theta: f64,
    pub inner_epsilon: f64,
    /// Per-coefficient error bound `ε₂` from the anchor estimate.
    pub epsilon2: f64,
    /// Magnitude cut `2ε₂` (0 when the mode does not truncate).
    pub truncation_threshold: f64,
    pub m1: u64,
    pub m2: u64,
    pub total_queries: u64,
}

/// Full pipeline for any mode.
pub fn learn(oracle: &mut UnitaryOracle, cfg: &LearnConfig, seed: u64) -> Result<LearnReport> {
    cfg.validate()?;
    let theta = cfg.theta();
    let inner = cfg.inner_epsilon();
    let start = oracle.queries();
    let shots = m1(theta, cfg.delta, cfg.constants.c_m1);
    check_budget(cfg, shots)?;
    let support = find_support(oracle, theta, cfg.delta, cfg.constants.c_m1, seed)?;
    let budget = plan(cfg, support.len());
    check_budget(cfg, budget.total)?;
    let est = estimate_coefficients(oracle, &support, inner, cfg.delta, cfg.constants.c_m2, seed)?;
    let eps2 = epsilon2(inner, est.anchor_mag);
    let (alpha_hat, cut) = if cfg.truncates() {
        let cut = 2.0 * eps2;
        let mut kept = PauliMap::new(oracle.qubits());
        for (p, c) in est.alpha_hat.iter() {
            if c.norm() >= cut {
                kept.set(&p, c);
            }
        }
        (kept, cut)
    } else {
        (est.alpha_hat.clone(), 0.0)
    };
    let total = oracle.queries() - start;
    debug_assert_eq!(total, budget.total);
    Ok(LearnReport {
        config: *cfg,
        seed,
        support,
        estimates: est.alpha_hat,
        alpha_hat,
        anchor: est.anchor,
        anchor_mag: est.anchor_mag,
        theta,
        inner_epsilon: inner,
        epsilon2: eps2,
        truncation_threshold: cut,
        m1: budget.m1,
        m2: est.m2,
        total_queries: total,
    })
}

pub fn learn_nearly_sparse(oracle: &mut UnitaryOracle, s: usize, epsilon: f64, delta: f64, seed: u64) -> Result<LearnReport> {
    learn(oracle, &LearnConfig::nearly_sparse(s, epsilon, delta), seed)
}

pub fn learn_l1_bounded(oracle: &mut UnitaryOracle, l1: f64, epsilon: f64, delta: f64, seed: u64) -> Result<LearnReport> {
    learn(oracle, &LearnConfig::l1_bounded(l1, epsilon, delta), seed)
}

/// Least-squares global phase between an estimate and the truth.
///
/// Returns `φ = arg Σ α_s conj(α̂_s)` in `[0, 2π)` and
/// `max_s |α̂_s - e^{-iφ} α_s|` over the union of both supports.
pub fn align_phase(alpha_hat: &PauliMap, alpha_true: &PauliMap) -> Result<(f64, f64)> {
    if alpha_hat.n() != alpha_true.n() {
        return Err(Error::DimensionMismatch {
            expected: alpha_true.n(),
            found: alpha_hat.n(),
        });
    }
    let mut overlap = C64::new(0.0, 0.0);
    for (p, a) in alpha_true.iter() {
        overlap += a * alpha_hat.get(&p).conj();
    }
    if overlap.norm() == 0.0 {
        return Err(Error::NoOverlap);
    }
    let phi = overlap.arg().rem_euclid(2.0 * core::f64::consts::PI);
    let rot = C64::from_polar(1.0, -phi);
    let mut max_err = 0.0f64;
    for (p, a) in alpha_true.iter() {
        max_err = max_err.max((alpha_hat.get(&p) - rot * a).norm());
    }
    for (p, h) in alpha_hat.iter() {
        if !alpha_true.contains(&p) {
            max_err = max_err.max(h.norm());
        }
    }
    Ok((phi, max_err))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::decompose;
    use crate::DenseOperator;

    #[test]
    fn m1_example() {
        assert_eq!(m1(0.1, 0.01, 1.0), 922);
    }

    #[test]
    fn presets() {
        let c = LearnConfig::nearly_sparse(4, 0.05, 0.1);
        assert!((c.theta() - 0.025).abs() < 1e-15);
        assert!((c.inner_epsilon() - 0.0025 / 144.0 / 64.0).abs() < 1e-18);
        let c = LearnConfig::l1_bounded(2.0, 0.3, 0.1);
        assert!((c.theta() - 0.09 / 24.0).abs() < 1e-15);
        assert!((c.inner_epsilon() - 0.0081 / 576.0).abs() < 1e-18);
        let c = LearnConfig::corollary(4, 0.05, 0.1);
        assert!((c.inner_epsilon() - (0.0125f64).powi(2) / 144.0).abs() < 1e-18);
        assert!(LearnConfig::estimate(0.5, 0.02, 0.1).validate().is_err());
        assert!(LearnConfig::estimate(1.5, 0.01, 0.1).validate().is_err());
        assert!(LearnConfig::estimate(0.5, 0.01, 0.1).validate().is_ok());
    }

    #[test]
    fn align_phase_examples() {
        let u = DenseOperator::random_unitary(1, &mut rng::stream(1, "t", 0));
        let a = decompose(&u).unwrap();
        let (phi, err) = align_phase(&a, &a).unwrap();
        assert!(phi.abs() < 1e-12 || (phi - 2.0 * core::f64::consts::PI).abs() < 1e-12);
        assert!(err < 1e-12);
        let third = core::f64::consts::PI / 3.0;
        let rotated = a.scale(C64::from_polar(1.0, -third));
        let (phi, err) = align_phase(&rotated, &a).unwrap();
        assert!((phi - third).abs() < 1e-12);
        assert!(err < 1e-12);
        assert_eq!(align_phase(&PauliMap::new(1), &a), Err(Error::NoOverlap));
    }

    #[test]
    fn pauli_target_gives_single_candidate() {
        let z = PauliString::single(1, 0, 3).unwrap();
        let mut o = UnitaryOracle::new(&z.dense()).unwrap();
        let x = find_support(&mut o, 0.5, 0.05, 1.0, 3).unwrap();
        assert_eq!(x, alloc::vec![z]);
        assert_eq!(o.queries(), m1(0.5, 0.05, 1.0));
    }

    #[test]
    fn budget_guard_fires_before_shadow_rounds() {
        let id = DenseOperator::identity(1);
        let mut o = UnitaryOracle::new(&id).unwrap();
        let cfg = LearnConfig::nearly_sparse(4, 0.05, 0.1).with_max_queries(Some(1_000_000));
        match learn(&mut o, &cfg, 1) {
            Err(Error::BudgetExceeded { planned, budget }) => {
                assert_eq!(budget, 1_000_000);
                assert_eq!(planned, plan(&cfg, 1).total);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(o.queries(), plan(&cfg, 1).m1);
    }
}
