//! The twelve acceptance criteria, shared by `verify` and the acceptance test.

use std::collections::HashMap;
use std::time::{Duration, Instant};

use num_complex::Complex64 as C64;
use paulilearn::clifford::{apply_gates, sample_with_gates, CliffordTableau};
use paulilearn::harness::{binomial_threshold, exact_bell_distribution, trial_seed, TrialSummary};
use paulilearn::lcu::{amplified_block, effective_block, LcuSpec};
use paulilearn::learner::{align_phase, epsilon2, estimate_coefficients, find_support, learn, LearnConfig};
use paulilearn::linalg::complex_normal;
use paulilearn::metrics::{
    d_optphase, diamond_exact_unitary, l2_bound_check, min_phase_l1, restricted_diamond_mm,
};
use paulilearn::pauli::{decompose, synthesize};
use paulilearn::rng::{stream, StreamRng};
use paulilearn::shadows::{estimate_all, shadow_budget, BellObservable, DEFAULT_SHADOW_C};
use paulilearn::sim::{bell_sample, prepare_choi, UnitaryOracle};
use paulilearn::zoo::{
    standard_members, stabilizer_projector, subset_tail_bound, subset_tail_residual, taylor_tail_bound,
    taylor_tail_residual, Family, RotationProduct, SparseHamiltonian,
};
use paulilearn::{DenseOperator, Error, PauliMap, PauliString, QueryCounter};
use rand::Rng;
use rayon::prelude::*;
use serde::Serialize;
use statrs::distribution::{ChiSquared, ContinuousCDF};

#[derive(Clone, Debug, Serialize)]
pub struct CriterionResult {
    pub id: u32,
    pub name: &'static str,
    pub passed: bool,
    /// The run could not be attempted within the query budget.
    pub infeasible: bool,
    pub detail: String,
    pub elapsed_secs: f64,
    pub time_limit_secs: f64,
}

impl CriterionResult {
    /// One human-readable line.
    pub fn line(&self) -> String {
        let status = if self.passed { "PASS" } else { "FAIL" };
        format!(
            "[{status}] criterion {:>2} {:<28} {:>8.2}s  {}",
            self.id, self.name, self.elapsed_secs, self.detail
        )
    }
}

/// Outcome of a criterion body before timing is applied.
struct Outcome {
    ok: bool,
    infeasible: bool,
    detail: String,
}

impl Outcome {
    fn new(ok: bool, detail: String) -> Self {
        Self { ok, infeasible: false, detail }
    }
}

type Body = fn(u64) -> anyhow::Result<Outcome>;

pub struct Criterion {
    pub id: u32,
    pub name: &'static str,
    pub time_limit: Duration,
    body: Body,
}

pub fn all() -> Vec<Criterion> {
    let c = |id, name, secs, body| Criterion {
        id,
        name,
        time_limit: Duration::from_secs(secs),
        body,
    };
    vec![
        c(1, "pauli-round-trip", 10, pauli_round_trip as Body),
        c(2, "bell-sampling-law", 120, bell_sampling_law),
        c(3, "closed-form-norms", 5, closed_form_norms),
        c(4, "tail-bounds", 60, tail_bounds),
        c(5, "shadow-unbiasedness", 300, shadow_unbiasedness),
        c(6, "support-recovery", 300, support_recovery),
        c(7, "coefficient-error", 300, coefficient_error),
        c(8, "nearly-sparse-learning", 900, nearly_sparse_learning),
        c(9, "lcu-contract", 120, lcu_contract),
        c(10, "metric-chain", 120, metric_chain),
        c(11, "clifford-uniformity", 120, clifford_uniformity),
        c(12, "bounded-l1-learning", 900, bounded_l1_learning),
    ]
}

impl Criterion {
    pub fn run(&self, seed: u64) -> CriterionResult {
        let start = Instant::now();
        let outcome = (self.body)(seed).unwrap_or_else(|e| Outcome::new(false, format!("error: {e:#}")));
        let elapsed = start.elapsed();
        let in_time = elapsed <= self.time_limit;
        let mut detail = outcome.detail;
        if !in_time {
            detail.push_str(&format!("; exceeded time limit of {}s", self.time_limit.as_secs()));
        }
        CriterionResult {
            id: self.id,
            name: self.name,
            passed: outcome.ok && in_time,
            infeasible: outcome.infeasible,
            detail,
            elapsed_secs: elapsed.as_secs_f64(),
            time_limit_secs: self.time_limit.as_secs_f64(),
        }
    }
}

/// Run `trial` on derived seeds in the current rayon pool.
fn parallel_trials<F>(name: &str, trials: u64, p: f64, seed: u64, trial: F) -> anyhow::Result<TrialSummary>
where
    F: Fn(u64) -> anyhow::Result<bool> + Sync,
{
    let results: Vec<bool> = (0..trials)
        .into_par_iter()
        .map(|i| trial(trial_seed(seed, name, i)))
        .collect::<anyhow::Result<_>>()?;
    let mut summary = TrialSummary::new(name, p);
    for r in results {
        summary.record(r);
    }
    Ok(summary)
}

fn rng(seed: u64, name: &str) -> StreamRng {
    stream(seed, name, 0)
}

fn p(label: &str) -> PauliString {
    label.parse().expect("valid label")
}

fn random_map(n: usize, terms: usize, rng: &mut StreamRng) -> PauliMap {
    let mut m = PauliMap::new(n);
    let terms = terms.min(1 << (2 * n));
    while m.len() < terms {
        let s = PauliString::from_index(n, rng.gen_range(0..1u64 << (2 * n))).expect("in range");
        m.set(&s, complex_normal(rng));
    }
    m
}

fn hadamard() -> DenseOperator {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_rows(&[vec![C64::new(r, 0.0), C64::new(r, 0.0)], vec![C64::new(r, 0.0), C64::new(-r, 0.0)]])
        .expect("2x2")
}

fn rotation(n: usize, factors: &[(f64, &str)]) -> anyhow::Result<RotationProduct> {
    Ok(RotationProduct::new(n, factors.iter().map(|(t, s)| (*t, p(s))).collect())?)
}

/// `e^{-iθ(X⊗I⊗I)} e^{-iθ(I⊗X⊗I)} e^{-iθ(I⊗I⊗X)}`.
fn rotprod3(theta: f64) -> anyhow::Result<RotationProduct> {
    rotation(3, &[(theta, "XII"), (theta, "IXI"), (theta, "IIX")])
}

fn pauli_round_trip(seed: u64) -> anyhow::Result<Outcome> {
    let mut r = rng(seed, "c1-round-trip");
    let mut worst: f64 = 0.0;
    for i in 0..50 {
        let n = 1 + i % 3;
        let u = DenseOperator::random_unitary(n, &mut r);
        worst = worst.max(synthesize(&decompose(&u)?)?.max_abs_diff(&u));
        let map = random_map(n, 1 + r.gen_range(0..(1usize << (2 * n))), &mut r);
        let back = decompose(&synthesize(&map)?)?;
        worst = worst.max(back.sub(&map)?.norms().linf);
    }
    Ok(Outcome::new(worst <= 1e-10, format!("max deviation {worst:.2e} over 50 instances")))
}

fn bell_sampling_law(seed: u64) -> anyhow::Result<Outcome> {
    let members = standard_members(3);
    let mut exact_err: f64 = 0.0;
    for fam in &members {
        let u = fam.build()?;
        let dist = exact_bell_distribution(&u)?;
        let alpha = decompose(&u)?;
        let total: f64 = dist.iter().sum();
        exact_err = exact_err.max((total - 1.0).abs());
        for (i, q) in dist.iter().enumerate() {
            exact_err = exact_err.max((q - alpha.get_index(i as u64).norm_sqr()).abs());
        }
    }
    let shots = 200_000usize;
    let tvs: Vec<f64> = (0..5u64)
        .into_par_iter()
        .map(|i| -> anyhow::Result<f64> {
            let mut r = stream(seed, "c2-bell", i);
            let u = DenseOperator::random_unitary(2, &mut r);
            let alpha = decompose(&u)?;
            let psi = prepare_choi(&u, &mut QueryCounter::new())?;
            let mut counts = vec![0u64; 16];
            for s in bell_sample(&psi, &mut r, shots)? {
                counts[s.index() as usize] += 1;
            }
            let tv = counts
                .iter()
                .enumerate()
                .map(|(k, c)| (*c as f64 / shots as f64 - alpha.get_index(k as u64).norm_sqr()).abs())
                .sum::<f64>()
                / 2.0;
            Ok(tv)
        })
        .collect::<anyhow::Result<_>>()?;
    let max_tv = tvs.iter().cloned().fold(0.0, f64::max);
    Ok(Outcome::new(
        exact_err <= 1e-10 && max_tv <= 0.03,
        format!(
            "exact law error {exact_err:.2e} over {} members; max TV {max_tv:.4} at {shots} shots",
            members.len()
        ),
    ))
}

fn closed_form_norms(_seed: u64) -> anyhow::Result<Outcome> {
    let mut worst: f64 = 0.0;
    for n in 2..=4 {
        let l1 = decompose(&Family::Grover { n }.build()?)?.norms().l1;
        worst = worst.max((l1 - (3.0 - 2f64.powi(2 - n as i32))).abs());
    }
    for n in 2..=3usize {
        for x in 0..(1u64 << n) {
            let l1 = decompose(&Family::PhaseOracle { n, x }.build()?)?.norms().l1;
            worst = worst.max((l1 - (3.0 - 4.0 / (1u64 << n) as f64)).abs());
        }
    }
    let sets: [&[&str]; 4] = [&["Z"], &["XX", "ZZ"], &["ZZI", "IZZ"], &["XXX", "ZZI", "IZZ"]];
    for gens in sets {
        let gens: Vec<PauliString> = gens.iter().map(|s| p(s)).collect();
        let proj = stabilizer_projector(gens[0].n(), &gens)?;
        worst = worst.max((proj.norms().l1 - 1.0).abs());
    }
    Ok(Outcome::new(worst <= 1e-12, format!("max deviation {worst:.2e}")))
}

fn random_string(n: usize, r: &mut StreamRng) -> PauliString {
    PauliString::from_index(n, r.gen_range(1..1u64 << (2 * n))).expect("in range")
}

fn tail_bounds(seed: u64) -> anyhow::Result<Outcome> {
    let mut r = rng(seed, "c4-tails");
    let mut violations = 0;
    let mut checks = 0;
    for _ in 0..20 {
        let n = r.gen_range(1..=3);
        let m = r.gen_range(1..=5);
        let factors = (0..m).map(|_| (r.gen_range(-0.6..0.6), random_string(n, &mut r))).collect();
        let rp = RotationProduct::new(n, factors)?;
        for k in 0..=m {
            checks += 1;
            if subset_tail_residual(&rp, k) > subset_tail_bound(&rp, k).1 + 1e-12 {
                violations += 1;
            }
        }
    }
    for _ in 0..20 {
        let n = r.gen_range(1..=3);
        let want = r.gen_range(1..=4usize).min((1 << (2 * n)) - 1);
        let mut terms: Vec<(f64, PauliString)> = Vec::new();
        while terms.len() < want {
            let s = random_string(n, &mut r);
            if terms.iter().all(|(_, q)| *q != s) {
                terms.push((r.gen_range(-0.5..0.5), s));
            }
        }
        let h = SparseHamiltonian::new(n, terms)?;
        let t = r.gen_range(-2.0..2.0);
        for k in 0..5 {
            checks += 1;
            let tail = taylor_tail_bound(&h, t, k);
            if taylor_tail_residual(&h, t, k)? > tail.eps_bound + 1e-12
                || tail.truncation.len() as u64 > tail.support_bound
            {
                violations += 1;
            }
        }
    }
    Ok(Outcome::new(violations == 0, format!("{violations} violations in {checks} checks")))
}

fn shadow_unbiasedness(seed: u64) -> anyhow::Result<Outcome> {
    let (eps, delta) = (0.05, 0.05);
    let rz = DenseOperator::diagonal(&[C64::from_polar(1.0, -0.3), C64::from_polar(1.0, 0.3)])?;
    let cases = [
        ("H(x)I", hadamard().kron(&DenseOperator::identity(1)), p("XI"), p("ZI")),
        ("Rz(0.6)(x)I", rz.kron(&DenseOperator::identity(1)), p("II"), p("ZI")),
    ];
    let mut lines = Vec::new();
    let mut ok = true;
    for (label, u, t, s) in cases {
        let obs = [BellObservable::m(t), BellObservable::m(s), BellObservable::r(t, s), BellObservable::i(t, s)];
        let m = shadow_budget(DEFAULT_SHADOW_C, obs.len(), eps, delta);
        let psi = prepare_choi(&u, &mut QueryCounter::new())?;
        let alpha = decompose(&u)?;
        let (at, as_) = (alpha.get(&t), alpha.get(&s));
        let cross = as_ * at.conj();
        let exact = [at.norm_sqr(), as_.norm_sqr(), cross.re, cross.im];
        for (o, e) in obs.iter().zip(exact) {
            if (o.expectation(&psi)? - e).abs() > 1e-10 {
                anyhow::bail!("exact expectation of {:?} disagrees with coefficient products", o.kind);
            }
        }
        let name = format!("c5-{label}");
        let summary = parallel_trials(&name, 20, 1.0 - delta, seed, |ts| {
            let est = estimate_all(&psi, &obs, m as usize, delta, ts, "c5-shadow")?;
            Ok(est.iter().zip(exact).all(|(a, b)| (a - b).abs() <= eps))
        })?;
        ok &= summary.passes >= 18;
        lines.push(format!("{label}: {}/20 at m2={m}", summary.passes));
    }
    Ok(Outcome::new(ok, lines.join(", ")))
}

fn support_recovery(seed: u64) -> anyhow::Result<Outcome> {
    let (theta, delta) = (0.3, 0.1);
    let targets: Vec<(&str, DenseOperator)> = vec![
        ("hadamard", hadamard()),
        ("cz", Family::Cz.build()?),
        ("ry(0.8)", rotation(1, &[(0.4, "Y")])?.dense()?),
        ("grover2", Family::Grover { n: 2 }.build()?),
        ("rotprod2", rotation(2, &[(0.3, "XZ"), (-0.5, "YI")])?.dense()?),
    ];
    let threshold = binomial_threshold(1.0 - delta, 50);
    let mut ok = true;
    let mut lines = Vec::new();
    for (label, u) in targets {
        let heavy: Vec<PauliString> =
            decompose(&u)?.iter().filter(|(_, c)| c.norm() >= theta).map(|(s, _)| s).collect();
        let summary = parallel_trials(&format!("c6-{label}"), 50, 1.0 - delta, seed, |ts| {
            let mut oracle = UnitaryOracle::new(&u)?;
            let found = find_support(&mut oracle, theta, delta, 1.0, ts)?;
            Ok(heavy.iter().all(|s| found.contains(s)))
        })?;
        ok &= summary.passes >= threshold;
        lines.push(format!("{label} {}/50", summary.passes));
    }
    Ok(Outcome::new(ok, format!("{} (need >= {threshold} each)", lines.join(", "))))
}

fn coefficient_error(seed: u64) -> anyhow::Result<Outcome> {
    let (eps, delta) = (0.02, 0.1);
    let targets = [
        ("ry(0.8)", rotation(1, &[(0.4, "Y")])?.dense()?, vec![p("I"), p("Y")]),
        ("hadamard", hadamard(), vec![p("X"), p("Z")]),
    ];
    let need = ((1.0 - delta) * 20.0f64).ceil() as u64;
    let mut ok = true;
    let mut lines = Vec::new();
    for (label, u, support) in targets {
        let truth = decompose(&u)?;
        let anchor = support.iter().map(|s| truth.get(s).norm()).fold(0.0, f64::max);
        let bound = epsilon2(eps, anchor);
        let summary = parallel_trials(&format!("c7-{label}"), 20, 1.0 - delta, seed, |ts| {
            let mut oracle = UnitaryOracle::new(&u)?;
            let est = estimate_coefficients(&mut oracle, &support, eps, delta, DEFAULT_SHADOW_C, ts)?;
            let (_, max_err) = align_phase(&est.alpha_hat, &truth.restricted_to(&support))?;
            Ok(max_err <= bound)
        })?;
        ok &= summary.passes >= need;
        lines.push(format!("{label} {}/20 (bound {bound:.3})", summary.passes));
    }
    Ok(Outcome::new(ok, format!("{} (need >= {need})", lines.join(", "))))
}

/// Learn every target in 20 trials, or report the first budget refusal.
fn learning_trials(
    seed: u64,
    tag: &str,
    targets: &[(&str, DenseOperator, LearnConfig)],
    check: fn(&DenseOperator, &paulilearn::learner::LearnReport) -> anyhow::Result<bool>,
) -> anyhow::Result<Outcome> {
    let mut lines = Vec::new();
    let mut ok = true;
    for (label, u, cfg) in targets {
        let mut probe = UnitaryOracle::new(u)?;
        match learn(&mut probe, cfg, trial_seed(seed, tag, 0)) {
            Err(Error::BudgetExceeded { planned, budget }) => {
                return Ok(Outcome {
                    ok: false,
                    infeasible: true,
                    detail: format!(
                        "{label}: planned {planned:.3e} queries (eps' = {:.2e}) exceeds the budget of {budget:.1e}",
                        cfg.inner_epsilon()
                    ),
                });
            }
            Err(e) => return Err(e.into()),
            Ok(_) => {}
        }
        let summary = parallel_trials(&format!("{tag}-{label}"), 20, 0.9, seed, |ts| {
            let mut oracle = UnitaryOracle::new(u)?;
            let report = learn(&mut oracle, cfg, ts)?;
            let accounted = report.total_queries == report.m1 + 2 * report.m2;
            Ok(accounted && check(u, &report)?)
        })?;
        ok &= summary.passes >= 18;
        lines.push(format!("{label} {}/20", summary.passes));
    }
    Ok(Outcome::new(ok, lines.join(", ")))
}

fn nearly_sparse_learning(seed: u64) -> anyhow::Result<Outcome> {
    let eps = 0.05;
    let targets = [
        ("cz", Family::Cz.build()?, LearnConfig::nearly_sparse(4, eps, 0.1)),
        ("rotprod3", rotprod3(0.06)?.dense()?, LearnConfig::nearly_sparse(8, eps, 0.1)),
    ];
    learning_trials(seed, "c8", &targets, |u, report| {
        let (l1, _) = min_phase_l1(&report.alpha_hat, &decompose(u)?)?;
        Ok(l1 <= 2.0 * 0.05)
    })
}

fn lcu_contract(seed: u64) -> anyhow::Result<Outcome> {
    let mut r = rng(seed, "c9-lcu");
    let mut block_err: f64 = 0.0;
    for i in 0..30 {
        let n = 1 + i % 2;
        let terms = 1 + r.gen_range(0..6usize);
        let spec = LcuSpec::new(random_map(n, terms, &mut r))?;
        let target = synthesize(&spec.coeffs)?.scale(C64::new(1.0 / spec.a, 0.0));
        block_err = block_err.max(effective_block(&spec)?.max_abs_diff(&target));
    }
    // Learned expansions: support at θ = 0.05, shadows at ε' = 0.02.
    let targets = [("cz", Family::Cz.build()?), ("rotprod3", rotprod3(0.06)?.dense()?)];
    let mut ok = block_err <= 1e-10;
    let mut lines = vec![format!("block error {block_err:.2e} on 30 specs")];
    for (label, u) in targets {
        let mut oracle = UnitaryOracle::new(&u)?;
        let ts = trial_seed(seed, "c9-learned", 0);
        let support = find_support(&mut oracle, 0.05, 0.1, 1.0, ts)?;
        let est = estimate_coefficients(&mut oracle, &support, 0.02, 0.1, DEFAULT_SHADOW_C, ts)?;
        let (gamma, _) = min_phase_l1(&est.alpha_hat, &decompose(&u)?)?;
        let spec = LcuSpec::from_learned(est.alpha_hat)?.with_gamma(gamma);
        let amp = amplified_block(&spec)?;
        let (d, _) = d_optphase(&u, &amp.block)?;
        let bound = 10.0 * amp.a * gamma.sqrt();
        ok &= d <= bound;
        lines.push(format!("{label}: d {d:.4} <= {bound:.4} (gamma {gamma:.4}, a' {:.3})", amp.a));
    }
    Ok(Outcome::new(ok, lines.join("; ")))
}

fn metric_chain(seed: u64) -> anyhow::Result<Outcome> {
    let mut r = rng(seed, "c10-metrics");
    let mut chain_violations = 0;
    let mut formula_err: f64 = 0.0;
    for i in 0..30 {
        let n = 1 + i % 3;
        let u = DenseOperator::random_unitary(n, &mut r);
        let v = if i % 2 == 0 {
            DenseOperator::random_unitary(n, &mut r)
        } else {
            let g = DenseOperator::random_unitary(n, &mut r);
            let h = g.add(&g.adjoint())?.scale(C64::new(0.5, 0.0));
            u.matmul(&DenseOperator::expm_hermitian(&h, 0.1 * r.gen::<f64>()))?
        };
        let restricted = restricted_diamond_mm(&u, &v)?;
        let exact = diamond_exact_unitary(&u, &v)?;
        let (d, _) = d_optphase(&u, &v)?;
        let (l1, _) = min_phase_l1(&decompose(&u)?, &decompose(&v)?)?;
        let tol = 1e-9;
        if restricted > exact + tol || exact > 2.0 * d + tol || d > l1 + tol {
            chain_violations += 1;
        }
        let tr = u.adjoint().matmul(&v)?.trace().norm() / u.dim() as f64;
        formula_err = formula_err.max((restricted - 2.0 * (1.0 - tr * tr).max(0.0).sqrt()).abs());
    }
    let mut l2_violations = 0;
    for i in 0..20 {
        let n = 1 + i % 3;
        let u = DenseOperator::random_unitary(n, &mut r);
        let scale = 0.3 * r.gen::<f64>() / u.dim() as f64;
        let mut v = u.clone();
        for x in v.as_mut_slice() {
            *x += complex_normal(&mut r) * scale;
        }
        if !l2_bound_check(&u, &v)?.holds() {
            l2_violations += 1;
        }
    }
    Ok(Outcome::new(
        chain_violations == 0 && formula_err <= 1e-8 && l2_violations == 0,
        format!(
            "chain violations {chain_violations}/30, restricted formula error {formula_err:.2e}, l2 bound violations {l2_violations}/20"
        ),
    ))
}

fn clifford_uniformity(seed: u64) -> anyhow::Result<Outcome> {
    let mut r = rng(seed, "c11-uniform");
    let samples = 24_000u64;
    let mut counts: HashMap<Vec<(u64, u8)>, u64> = HashMap::new();
    for _ in 0..samples {
        let t = CliffordTableau::sample_uniform(1, &mut r);
        let key = t.rows().iter().map(|q| (q.phase_free().index(), q.phase_exp())).collect();
        *counts.entry(key).or_insert(0) += 1;
    }
    let classes = 24usize;
    let e = samples as f64 / classes as f64;
    let stat: f64 = counts.values().map(|v| (*v as f64 - e).powi(2) / e).sum::<f64>()
        + classes.saturating_sub(counts.len()) as f64 * e;
    let pval = 1.0 - ChiSquared::new((classes - 1) as f64)?.cdf(stat);
    let mut conj_err: f64 = 0.0;
    for i in 0..100 {
        let k = 1 + i % 3;
        let (t, gates) = sample_with_gates(k, &mut r);
        // Dense unitary column by column from the gate list.
        let d = 1usize << k;
        let mut cols = vec![vec![C64::new(0.0, 0.0); d]; d];
        for (c, col) in cols.iter_mut().enumerate() {
            let out = apply_gates(&gates, &paulilearn::DenseState::basis(k, c)?);
            for (row, a) in out.amplitudes().iter().enumerate() {
                col[row] = *a;
            }
        }
        let rows: Vec<Vec<C64>> = (0..d).map(|row| (0..d).map(|c| cols[c][row]).collect()).collect();
        let u = DenseOperator::from_rows(&rows)?;
        let s = random_string(k, &mut r);
        let image = t.conjugate_pauli(&s)?;
        let dense = u.matmul(&s.dense())?.matmul(&u.adjoint())?;
        conj_err = conj_err.max(dense.max_abs_diff(&image.dense()));
    }
    Ok(Outcome::new(
        counts.len() == classes && pval > 1e-3 && conj_err <= 1e-12,
        format!("{} classes, chi2 p = {pval:.3}, conjugation error {conj_err:.2e}", counts.len()),
    ))
}

fn bounded_l1_learning(seed: u64) -> anyhow::Result<Outcome> {
    let eps = 0.3;
    let targets = [
        ("grover2", Family::Grover { n: 2 }.build()?, LearnConfig::l1_bounded(2.0, eps, 0.1)),
        ("phase-oracle2", Family::PhaseOracle { n: 2, x: 3 }.build()?, LearnConfig::l1_bounded(2.0, eps, 0.1)),
    ];
    learning_trials(seed, "c12", &targets, |u, report| {
        let v = synthesize(&report.alpha_hat)?;
        let check = l2_bound_check(u, &v)?;
        let (l2, _) = paulilearn::metrics::min_phase_l2(&report.alpha_hat, &decompose(u)?)?;
        Ok(l2 <= 0.3 && check.actual <= 2.0 * 0.3 + 0.09)
    })
}

/// Run the selected criteria (all when `only` is empty) in order.
pub fn run_selected(seed: u64, only: &[u32]) -> Vec<CriterionResult> {
    all()
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
        .map(|c| c.run(seed))
        .collect()
}
