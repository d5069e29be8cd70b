use num_complex::Complex64 as C64;
use paulilearn::lcu::{
    amplified_block, build_prepare, build_select, build_w, effective_block, success_probability, LcuSpec,
};
use paulilearn::linalg::complex_normal;
use paulilearn::metrics::d_optphase;
use paulilearn::pauli::{decompose, synthesize};
use paulilearn::rng::{stream, StreamRng};
use paulilearn::zoo::Family;
use paulilearn::{DenseOperator, DenseState, PauliMap, PauliString};
use rand::Rng;

fn random_map(n: usize, terms: usize, rng: &mut StreamRng) -> PauliMap {
    let mut m = PauliMap::new(n);
    while m.len() < terms {
        let p = PauliString::from_index(n, rng.gen_range(0..1u64 << (2 * n))).unwrap();
        m.set(&p, complex_normal(rng));
    }
    m
}

#[test]
fn prepare_column_for_random_spec() {
    let mut rng = stream(1, "lcu-prepare", 0);
    let spec = LcuSpec::new(random_map(2, 5, &mut rng)).unwrap();
    assert_eq!(spec.m, 3);
    let a = build_prepare(&spec).unwrap();
    assert!(a.is_unitary(1e-12));
    let col = a.column(0);
    for (i, (_, c)) in spec.coeffs.iter().enumerate() {
        assert!((col[i] - C64::new((c.norm() / spec.a).sqrt(), 0.0)).norm() < 1e-12);
    }
    for x in &col[5..] {
        assert!(x.norm() < 1e-12);
    }
}

#[test]
fn select_acts_blockwise() {
    let mut rng = stream(2, "lcu-select", 0);
    let spec = LcuSpec::new(random_map(2, 4, &mut rng)).unwrap();
    let v = build_select(&spec).unwrap();
    assert!(v.is_unitary(1e-12));
    let terms: Vec<_> = spec.coeffs.iter().collect();
    for (slot, (s, c)) in terms.iter().enumerate() {
        let psi: Vec<C64> = (0..4).map(|_| complex_normal(&mut rng)).collect();
        let mut input = vec![C64::new(0.0, 0.0); 16];
        input[slot * 4..slot * 4 + 4].copy_from_slice(&psi);
        let out = v.matvec(&input);
        let want = s.dense().scale(c / c.norm()).matvec(&psi);
        for (r, w) in want.iter().enumerate() {
            assert!((out[slot * 4 + r] - w).norm() < 1e-12);
        }
        assert!(out.iter().enumerate().all(|(i, x)| i / 4 == slot || x.norm() < 1e-12));
    }
}

#[test]
fn block_identity_on_random_specs() {
    let mut rng = stream(3, "lcu-block", 0);
    for _ in 0..30 {
        let n = rng.gen_range(1..=3);
        let terms = rng.gen_range(1..=8usize.min(1 << (2 * n)));
        let spec = LcuSpec::new(random_map(n, terms, &mut rng)).unwrap();
        let w = build_w(&spec).unwrap();
        assert!(w.is_unitary(1e-10));
        assert!(build_prepare(&spec).unwrap().is_unitary(1e-10));
        assert!(build_select(&spec).unwrap().is_unitary(1e-10));
        let block = effective_block(&spec).unwrap().scale(C64::new(spec.a, 0.0));
        assert!(block.max_abs_diff(&synthesize(&spec.coeffs).unwrap()) < 1e-10);
    }
}

#[test]
fn success_probability_matches_frobenius_and_inverse_square() {
    let mut rng = stream(4, "lcu-success", 0);
    let m = random_map(2, 6, &mut rng);
    let spec = LcuSpec::new(m.clone()).unwrap();
    let want = synthesize(&m).unwrap().frobenius_norm().powi(2) / (spec.a * spec.a * 4.0);
    assert!((success_probability(&spec).unwrap() - want).abs() < 1e-12);

    // Post-selection frequency averaged over basis inputs.
    let w = build_w(&spec).unwrap();
    let mut avg = 0.0;
    for b in 0..4 {
        let out = w.matvec(DenseState::basis(spec.m + 2, b).unwrap().amplitudes());
        avg += out[..4].iter().map(|x| x.norm_sqr()).sum::<f64>() / 4.0;
    }
    assert!((avg - want).abs() < 1e-12);

    let u = Family::Grover { n: 2 }.build().unwrap();
    let spec = LcuSpec::new(decompose(&u).unwrap()).unwrap();
    assert!((success_probability(&spec).unwrap() - 1.0 / (spec.a * spec.a)).abs() < 1e-12);
}

#[test]
fn padded_subnormalization_halves_block() {
    let u = Family::Cz.build().unwrap();
    let spec = LcuSpec::new(decompose(&u).unwrap()).unwrap().with_subnormalization(2.5).unwrap();
    let block = effective_block(&spec).unwrap();
    assert!(block.max_abs_diff(&u.scale(C64::new(0.4, 0.0))) < 1e-12);
    assert!((success_probability(&spec).unwrap() - 0.16).abs() < 1e-12);
}

/// Distance after amplification of a `γ`-perturbed expansion of `u`.
fn amplified_distance(u: &DenseOperator, gamma: f64, rng: &mut StreamRng) -> (f64, f64) {
    let alpha = decompose(u).unwrap();
    let mut noise = random_map(u.qubits(), 3, rng);
    let scale = gamma / noise.norms().l1;
    noise = noise.scale(C64::new(scale, 0.0));
    let hat = alpha.add(&noise).unwrap();
    let spec = LcuSpec::new(hat).unwrap().with_gamma(gamma);
    let amp = amplified_block(&spec).unwrap();
    let (d, _) = d_optphase(u, &amp.block).unwrap();
    (d, 10.0 * amp.a * gamma.sqrt())
}

#[test]
fn amplified_error_contract_on_zoo() {
    let mut rng = stream(5, "lcu-contract", 0);
    for fam in paulilearn::zoo::standard_members(2) {
        let u = fam.build().unwrap();
        for gamma in [1e-4, 1e-3, 0.02, 0.1] {
            let (d, bound) = amplified_distance(&u, gamma, &mut rng);
            assert!(d <= bound, "{}: {d} > {bound} at gamma {gamma}", fam.name());
        }
    }
}

#[test]
fn exact_unitary_is_recovered_by_amplification() {
    for fam in paulilearn::zoo::standard_members(2) {
        let u = fam.build().unwrap();
        let spec = LcuSpec::new(decompose(&u).unwrap()).unwrap();
        let amp = amplified_block(&spec).unwrap();
        assert!(amp.block.max_abs_diff(&u) < 1e-9, "{}", fam.name());
    }
}
