//! Brute-force oracles and repeated-trial statistics.

use alloc::string::String;
use alloc::vec::Vec;

#[allow(unused_imports)]
use num_traits::Float;

use crate::error::Result;
use crate::linalg::DenseOperator;
use crate::pauli::PauliString;
use crate::rng::derive_seed;
use crate::shadows::bell_overlap;
use crate::sim::{prepare_choi, QueryCounter};

/// `P_s = |<φ_s|J(U)>|²` over all `4^n` strings (base-4 index order), from
/// explicit Bell overlaps.
pub fn exact_bell_distribution(u: &DenseOperator) -> Result<Vec<f64>> {
    let n = u.qubits();
    let psi = prepare_choi(u, &mut QueryCounter::new())?;
    let mut out = Vec::with_capacity(1 << (2 * n));
    for idx in 0..(1u64 << (2 * n)) {
        let s = PauliString::from_index(n, idx)?;
        out.push(bell_overlap(&psi, &s).norm_sqr());
    }
    Ok(out)
}

/// `floor(np - 3√(np(1-p)))`, clamped to `[0, n]`.
pub fn binomial_threshold(p: f64, trials: u64) -> u64 {
    let n = trials as f64;
    let mean = n * p;
    let slack = 3.0 * (mean * (1.0 - p)).max(0.0).sqrt();
    (mean - slack).floor().clamp(0.0, n) as u64
}

#[derive(Clone, Debug, PartialEq)]
pub struct TrialSummary {
    pub criterion: String,
    pub trials: u64,
    pub passes: u64,
    /// Declared success probability of a single trial.
    pub success_probability: f64,
    pub threshold: u64,
}

impl TrialSummary {
    pub fn new(criterion: &str, success_probability: f64) -> Self {
        Self {
            criterion: String::from(criterion),
            trials: 0,
            passes: 0,
            success_probability,
            threshold: 0,
        }
    }

    pub fn record(&mut self, pass: bool) {
        self.trials += 1;
        self.passes += u64::from(pass);
        self.threshold = binomial_threshold(self.success_probability, self.trials);
    }

    /// Sum of two partial summaries of the same criterion.
    pub fn merge(&self, other: &Self) -> Self {
        let trials = self.trials + other.trials;
        Self {
            criterion: self.criterion.clone(),
            trials,
            passes: self.passes + other.passes,
            success_probability: self.success_probability,
            threshold: binomial_threshold(self.success_probability, trials),
        }
    }

    pub fn passed(&self) -> bool {
        self.passes >= self.threshold
    }
}

/// Trial seed `i` of a criterion.
pub fn trial_seed(seed: u64, criterion: &str, i: u64) -> u64 {
    derive_seed(seed, criterion, i)
}

/// Run `trial` on `trials` derived seeds and count passes.
pub fn repeated_trial<F>(criterion: &str, trials: u64, success_probability: f64, seed: u64, mut trial: F) -> TrialSummary
where
    F: FnMut(u64) -> bool,
{
    let mut summary = TrialSummary::new(criterion, success_probability);
    for i in 0..trials {
        summary.record(trial(trial_seed(seed, criterion, i)));
    }
    summary
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::pauli::decompose;

    #[test]
    fn thresholds() {
        assert_eq!(binomial_threshold(0.9, 50), 38);
        assert_eq!(binomial_threshold(1.0, 50), 50);
        assert_eq!(binomial_threshold(0.95, 20), 16);
    }

    #[test]
    fn repeated_trial_counts() {
        let all = repeated_trial("always", 50, 1.0, 1, |_| true);
        assert_eq!((all.passes, all.threshold), (50, 50));
        assert!(all.passed());
        let none = repeated_trial("never", 50, 0.9, 1, |_| false);
        assert_eq!(none.passes, 0);
        assert!(!none.passed());
        let merged = all.merge(&all);
        assert_eq!((merged.trials, merged.passes), (100, 100));
    }

    #[test]
    fn identity_and_hadamard() {
        let d = exact_bell_distribution(&DenseOperator::identity(1)).unwrap();
        assert!((d[0] - 1.0).abs() < 1e-12);
        let r = core::f64::consts::FRAC_1_SQRT_2;
        let h = DenseOperator::from_row_major(
            2,
            alloc::vec![
                crate::C64::new(r, 0.0),
                crate::C64::new(r, 0.0),
                crate::C64::new(r, 0.0),
                crate::C64::new(-r, 0.0)
            ],
        )
        .unwrap();
        let d = exact_bell_distribution(&h).unwrap();
        let alpha = decompose(&h).unwrap();
        for (i, p) in d.iter().enumerate() {
            assert!((p - alpha.get_index(i as u64).norm_sqr()).abs() < 1e-12);
        }
        assert!((d[1] - 0.5).abs() < 1e-12 && (d[3] - 0.5).abs() < 1e-12);
    }
}
