use num_complex::Complex64 as C64;
use paulilearn::clifford::CliffordTableau;
use paulilearn::pauli::decompose;
use paulilearn::rng::stream;
use paulilearn::shadows::{
    collect, estimate_all, eval_snapshot, evaluate, measure_with, mom_batches, shadow_budget, BellObservable,
    Snapshot, DEFAULT_SHADOW_C,
};
use paulilearn::sim::prepare_choi;
use paulilearn::{DenseOperator, DenseState, PauliString, QueryCounter};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn p(s: &str) -> PauliString {
    s.parse().unwrap()
}

fn hadamard() -> DenseOperator {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_rows(&[vec![C64::new(r, 0.0), C64::new(r, 0.0)], vec![C64::new(r, 0.0), C64::new(-r, 0.0)]])
        .unwrap()
}

fn rz(theta: f64) -> DenseOperator {
    DenseOperator::diagonal(&[C64::from_polar(1.0, -theta), C64::from_polar(1.0, theta)]).unwrap()
}

fn choi(u: &DenseOperator) -> DenseState {
    prepare_choi(u, &mut QueryCounter::new()).unwrap()
}

/// `<ψ|O|ψ>` through explicit matrices.
fn dense_expectation(o: &DenseOperator, psi: &[C64]) -> f64 {
    let v = o.matvec(psi);
    psi.iter().zip(&v).map(|(a, b)| a.conj() * b).sum::<C64>().re
}

fn mean_and_sem(v: &[f64]) -> (f64, f64) {
    let n = v.len() as f64;
    let mean = v.iter().sum::<f64>() / n;
    let var = v.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
    (mean, (var / n).sqrt())
}

#[test]
fn identity_anchor_mean_is_one() {
    let j = choi(&DenseOperator::identity(1));
    let snaps = collect(&j, 10_000, 1, "shadow-test");
    let vals = evaluate(&snaps, &[BellObservable::m(p("I"))]).unwrap();
    let (mean, _) = mean_and_sem(&vals[0]);
    assert!((mean - 1.0).abs() < 0.05, "{mean}");
}

#[test]
fn hadamard_cross_term_mean_is_half() {
    let j = choi(&hadamard());
    let alpha = decompose(&hadamard()).unwrap();
    let want = (alpha.get(&p("Z")) * alpha.get(&p("X")).conj()).re;
    assert!((want - 0.5).abs() < 1e-12);
    let snaps = collect(&j, 20_000, 2, "shadow-test");
    let vals = evaluate(&snaps, &[BellObservable::r(p("X"), p("Z"))]).unwrap();
    let (mean, _) = mean_and_sem(&vals[0]);
    assert!((mean - want).abs() < 0.05, "{mean}");
}

#[test]
fn single_snapshot_estimator_is_unbiased() {
    let mut rng = stream(3, "shadow-unbiased", 0);
    let u = DenseOperator::random_unitary(1, &mut rng);
    let j = choi(&u);
    let observables = [
        BellObservable::m(p("X")),
        BellObservable::m(p("I")),
        BellObservable::r(p("I"), p("Y")),
        BellObservable::i(p("I"), p("Y")),
        BellObservable::r(p("Z"), p("X")),
        BellObservable::i(p("Z"), p("X")),
    ];
    let snaps = collect(&j, 50_000, 4, "shadow-unbiased");
    let vals = evaluate(&snaps, &observables).unwrap();
    for (o, v) in observables.iter().zip(&vals) {
        let exact = dense_expectation(&o.dense().unwrap(), j.amplitudes());
        let (mean, sem) = mean_and_sem(v);
        assert!((mean - exact).abs() < 3.0 * sem, "{o:?}: {mean} vs {exact} (sem {sem})");
    }
}

#[test]
fn exact_targets_are_coefficient_products() {
    // Tr(M_s ρ) = |α_s|², Tr(R ρ) = Re(α_s α_t*), Tr(I ρ) = Im(α_s α_t*).
    let mut rng = stream(5, "shadow-targets", 0);
    let u = DenseOperator::random_unitary(2, &mut rng);
    let alpha = decompose(&u).unwrap();
    let j = choi(&u);
    for (s, t) in [("XZ", "IY"), ("ZZ", "II"), ("YX", "XY")] {
        let (s, t) = (p(s), p(t));
        let z = alpha.get(&s) * alpha.get(&t).conj();
        let m = dense_expectation(&BellObservable::m(s).dense().unwrap(), j.amplitudes());
        let r = dense_expectation(&BellObservable::r(t, s).dense().unwrap(), j.amplitudes());
        let i = dense_expectation(&BellObservable::i(t, s).dense().unwrap(), j.amplitudes());
        assert!((m - alpha.get(&s).norm_sqr()).abs() < 1e-12);
        assert!((r - z.re).abs() < 1e-12);
        assert!((i - z.im).abs() < 1e-12);
    }
}

#[test]
fn low_rank_evaluation_matches_dense() {
    let mut rng = stream(6, "shadow-lowrank", 0);
    for trial in 0..20u64 {
        let t = CliffordTableau::sample_uniform(4, &mut rng);
        let b = trial % 16;
        let snap = Snapshot::new(t.clone(), b, 0).unwrap();
        let v = t.dense().unwrap();
        let mut ket_b = vec![C64::new(0.0, 0.0); 16];
        ket_b[b as usize] = C64::new(1.0, 0.0);
        let back = v.adjoint().matvec(&ket_b);
        let (s, u) = (
            PauliString::from_index(2, (trial * 7) % 16).unwrap(),
            PauliString::from_index(2, (trial * 5 + 3) % 16).unwrap(),
        );
        for o in [BellObservable::m(s), BellObservable::r(u, s), BellObservable::i(u, s)] {
            let dense = dense_expectation(&o.dense().unwrap(), &back);
            let got = eval_snapshot(&snap, &o).unwrap();
            assert!((got - (17.0 * dense - o.trace())).abs() < 1e-10);
        }
    }
}

#[test]
fn outcomes_follow_born_rule_for_fixed_tableau() {
    let mut rng = stream(7, "shadow-born", 0);
    let j = choi(&DenseOperator::random_unitary(1, &mut rng));
    let t = CliffordTableau::sample_uniform(2, &mut rng);
    let probs = t.dense().unwrap().matvec(j.amplitudes()).iter().map(|a| a.norm_sqr()).collect::<Vec<_>>();
    let shots = 20_000;
    let mut counts = [0u64; 4];
    for _ in 0..shots {
        counts[measure_with(&j, &t, &mut rng).unwrap() as usize] += 1;
    }
    let mut stat = 0.0;
    let mut dof = 0;
    for (c, q) in counts.iter().zip(&probs) {
        let e = q * shots as f64;
        if e > 0.0 {
            stat += (*c as f64 - e).powi(2) / e;
            dof += 1;
        } else {
            assert_eq!(*c, 0);
        }
    }
    let pval = 1.0 - ChiSquared::new((dof - 1) as f64).unwrap().cdf(stat);
    assert!(pval > 1e-3, "p = {pval}");
}

#[test]
fn anchor_family_on_hadamard_meets_accuracy() {
    let (eps, delta) = (0.05, 0.05);
    let obs = [BellObservable::m(p("X")), BellObservable::m(p("Z"))];
    let m = shadow_budget(DEFAULT_SHADOW_C, obs.len(), eps, delta) as usize;
    assert!(m >= mom_batches(delta, obs.len()));
    let j = choi(&hadamard());
    let mut good = 0;
    for trial in 0..20u64 {
        let est = estimate_all(&j, &obs, m, delta, trial, "shadow-mom").unwrap();
        if est.iter().all(|e| (e - 0.5).abs() <= eps) {
            good += 1;
        }
    }
    assert!(good >= 18, "{good}/20");
}

#[test]
fn cross_pair_reconstructs_rotation_product() {
    let (eps, delta) = (0.05, 0.05);
    let obs = [BellObservable::r(p("I"), p("Z")), BellObservable::i(p("I"), p("Z"))];
    let m = shadow_budget(DEFAULT_SHADOW_C, obs.len(), eps, delta) as usize;
    let j = choi(&rz(0.3));
    let est = estimate_all(&j, &obs, m, delta, 11, "shadow-cross").unwrap();
    let got = C64::new(est[0], est[1]);
    let want = C64::new(0.0, -(0.3f64).sin()) * (0.3f64).cos();
    assert!((got - want).norm() <= eps, "{got} vs {want}");
}

#[test]
fn streaming_estimates_equal_stored_snapshot_estimates() {
    let j = choi(&hadamard());
    let obs = [BellObservable::m(p("X")), BellObservable::r(p("X"), p("Z")), BellObservable::i(p("X"), p("Y"))];
    let streamed = estimate_all(&j, &obs, 500, 0.1, 21, "shadow-eq").unwrap();
    let snaps = collect(&j, 500, 21, "shadow-eq");
    let stored = paulilearn::shadows::estimate_from_snapshots(&snaps, &obs, 0.1).unwrap();
    assert_eq!(streamed, stored);
}
