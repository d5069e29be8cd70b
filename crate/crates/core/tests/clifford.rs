use std::collections::{HashMap, HashSet, VecDeque};

use num_complex::Complex64 as C64;
use paulilearn::clifford::{apply_gates, sample_with_gates, CliffordTableau, Gate};
use paulilearn::pauli::decompose;
use paulilearn::rng::stream;
use paulilearn::{DenseOperator, DenseState, PauliString};
use statrs::distribution::{ChiSquared, ContinuousCDF};

fn h() -> DenseOperator {
    let r = std::f64::consts::FRAC_1_SQRT_2;
    DenseOperator::from_rows(&[vec![C64::new(r, 0.0), C64::new(r, 0.0)], vec![C64::new(r, 0.0), C64::new(-r, 0.0)]])
        .unwrap()
}

fn s() -> DenseOperator {
    DenseOperator::diagonal(&[C64::new(1.0, 0.0), C64::new(0.0, 1.0)]).unwrap()
}

fn cnot() -> DenseOperator {
    let o = C64::new(1.0, 0.0);
    let z = C64::new(0.0, 0.0);
    DenseOperator::from_rows(&[vec![o, z, z, z], vec![z, o, z, z], vec![z, z, z, o], vec![z, z, o, z]]).unwrap()
}

/// Matrix with the global phase removed, rounded to a hashable key.
fn phase_key(u: &DenseOperator) -> Vec<(i64, i64)> {
    let pivot = u.as_slice().iter().find(|a| a.norm() > 1e-9).unwrap();
    let ph = pivot / pivot.norm();
    u.as_slice()
        .iter()
        .map(|a| {
            let b = a / ph;
            ((b.re * 1e6).round() as i64, (b.im * 1e6).round() as i64)
        })
        .collect()
}

/// Generator images read off from a dense unitary by Pauli decomposition.
fn tableau_of_dense(u: &DenseOperator) -> Vec<(u64, bool)> {
    let k = u.qubits();
    let mut rows = Vec::new();
    for d in [1u8, 3] {
        for j in 0..k {
            let g = PauliString::single(k, j, d).unwrap().dense();
            let img = u.matmul(&g).unwrap().matmul(&u.adjoint()).unwrap();
            let m = decompose(&img).unwrap();
            assert_eq!(m.len(), 1);
            let (p, c) = m.iter().next().unwrap();
            assert!(c.im.abs() < 1e-9 && (c.re.abs() - 1.0).abs() < 1e-9);
            rows.push((p.index(), c.re < 0.0));
        }
    }
    rows
}

fn tableau_key(t: &CliffordTableau) -> Vec<(u64, bool)> {
    t.rows().iter().map(|p| (p.phase_free().index(), p.phase_exp() == 2)).collect()
}

/// All Cliffords on `k` qubits by closure over dense generators, as tableau keys.
fn enumerate_group(k: usize) -> HashSet<Vec<(u64, bool)>> {
    let id1 = DenseOperator::identity(1);
    let embed = |op: &DenseOperator, q: usize| -> DenseOperator {
        let mut m = DenseOperator::identity(0);
        let mut j = 0;
        while j < k {
            if j == q {
                m = m.kron(op);
                j += op.qubits();
            } else {
                m = m.kron(&id1);
                j += 1;
            }
        }
        m
    };
    let mut gens = Vec::new();
    for q in 0..k {
        gens.push(embed(&h(), q));
        gens.push(embed(&s(), q));
    }
    for q in 0..k.saturating_sub(1) {
        gens.push(embed(&cnot(), q));
    }
    let start = DenseOperator::identity(k);
    let mut seen = HashSet::new();
    seen.insert(phase_key(&start));
    let mut queue = VecDeque::from([start]);
    let mut tableaux = HashSet::new();
    while let Some(u) = queue.pop_front() {
        tableaux.insert(tableau_of_dense(&u));
        for g in &gens {
            let v = g.matmul(&u).unwrap();
            if seen.insert(phase_key(&v)) {
                queue.push_back(v);
            }
        }
    }
    assert_eq!(seen.len(), tableaux.len());
    tableaux
}

fn chi_square_p(counts: &HashMap<Vec<(u64, bool)>, u64>, classes: usize, samples: u64) -> f64 {
    let e = samples as f64 / classes as f64;
    let mut stat = 0.0;
    for v in counts.values() {
        stat += (*v as f64 - e).powi(2) / e;
    }
    stat += (classes - counts.len()) as f64 * e;
    1.0 - ChiSquared::new((classes - 1) as f64).unwrap().cdf(stat)
}

#[test]
fn one_qubit_sampling_is_uniform_over_24_classes() {
    let group = enumerate_group(1);
    assert_eq!(group.len(), 24);
    let mut rng = stream(2024, "clifford-uniform", 1);
    let mut counts = HashMap::new();
    let samples = 24_000;
    for _ in 0..samples {
        let key = tableau_key(&CliffordTableau::sample_uniform(1, &mut rng));
        assert!(group.contains(&key));
        *counts.entry(key).or_insert(0u64) += 1;
    }
    let e = samples as f64 / 24.0;
    let sigma = (e * (1.0 - 1.0 / 24.0)).sqrt();
    for v in counts.values() {
        assert!((*v as f64 - e).abs() < 3.5 * sigma, "count {v}");
    }
    let p = chi_square_p(&counts, 24, samples);
    assert!(p > 1e-3, "p = {p}");
}

#[test]
fn two_qubit_sampling_is_uniform_over_11520_classes() {
    let group = enumerate_group(2);
    assert_eq!(group.len(), 11520);
    let mut rng = stream(2024, "clifford-uniform", 2);
    let mut counts = HashMap::new();
    let samples = 200_000;
    for _ in 0..samples {
        let key = tableau_key(&CliffordTableau::sample_uniform(2, &mut rng));
        assert!(group.contains(&key));
        *counts.entry(key).or_insert(0u64) += 1;
    }
    let p = chi_square_p(&counts, 11520, samples);
    assert!(p > 1e-4, "p = {p}");
}

#[test]
fn conjugation_matches_dense_at_three_qubits() {
    let mut rng = stream(5, "clifford-conj", 0);
    for _ in 0..10 {
        let t = CliffordTableau::sample_uniform(3, &mut rng);
        let v = t.dense().unwrap();
        for idx in 0..64 {
            let p = PauliString::from_index(3, idx).unwrap();
            let img = t.conjugate_pauli(&p).unwrap();
            assert_eq!(img.phase_exp() % 2, 0);
            assert!(img.mul(&img).unwrap().is_identity());
            let dense = v.matmul(&p.dense()).unwrap().matmul(&v.adjoint()).unwrap();
            assert!(dense.max_abs_diff(&img.dense()) < 1e-12);
        }
    }
}

#[test]
fn synthesized_gates_reproduce_generators_at_four_qubits() {
    let mut rng = stream(6, "clifford-synth", 0);
    for _ in 0..10 {
        let t = CliffordTableau::sample_uniform(4, &mut rng);
        let gates = t.to_gates();
        assert!(gates.len() <= 4 * 4 * 8);
        let mut u = DenseOperator::zeros(4);
        for c in 0..16 {
            let out = apply_gates(&gates, &DenseState::basis(4, c).unwrap());
            for (r, a) in out.amplitudes().iter().enumerate() {
                u.set(r, c, *a);
            }
        }
        assert_eq!(tableau_of_dense(&u), tableau_key(&t));
    }
}

#[test]
fn state_application_matches_dense_at_six_qubits() {
    let mut rng = stream(7, "clifford-apply", 0);
    for _ in 0..3 {
        let t = CliffordTableau::sample_uniform(6, &mut rng);
        let v = t.dense().unwrap();
        assert!(v.is_unitary(1e-10));
        let amps: Vec<C64> = (0..64).map(|_| paulilearn::linalg::complex_normal(&mut rng)).collect();
        let nrm = amps.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt();
        let psi = DenseState::from_amplitudes(amps.iter().map(|a| a / nrm).collect()).unwrap();
        let got = t.apply_to_state(&psi).unwrap();
        let want = v.matvec(psi.amplitudes());
        let diff = got.amplitudes().iter().zip(&want).map(|(a, b)| (a - b).norm()).fold(0.0, f64::max);
        assert!(diff < 1e-9);
        let back = t.apply_inverse_to_state(&got).unwrap();
        assert!(back.inner(&psi).norm() > 1.0 - 1e-10);
    }
}

#[test]
fn composition_matches_dense_products() {
    let mut rng = stream(8, "clifford-compose", 0);
    for _ in 0..10 {
        let a = CliffordTableau::sample_uniform(3, &mut rng);
        let b = CliffordTableau::sample_uniform(3, &mut rng);
        let ab = a.compose(&b).unwrap();
        assert!(ab.is_valid());
        let dense = a.dense().unwrap().matmul(&b.dense().unwrap()).unwrap();
        assert_eq!(phase_key(&dense), phase_key(&ab.dense().unwrap()));
    }
}

#[test]
fn conjugated_paulis_average_out() {
    // 1-design: E_V <0|V P V†|0> = 0 for P ≠ I.
    let k = 3;
    let mut rng = stream(9, "clifford-design", 0);
    let samples = 20_000;
    for label in ["XII", "ZZI", "YXZ", "IIZ"] {
        let p: PauliString = label.parse().unwrap();
        let mut sum = 0.0;
        for _ in 0..samples {
            let (t, _) = sample_with_gates(k, &mut rng);
            let img = t.conjugate_pauli(&p).unwrap();
            if img.x_mask() == 0 {
                sum += if img.phase_exp() == 2 { -1.0 } else { 1.0 };
            }
        }
        let mean = sum / samples as f64;
        assert!(mean.abs() < 3.0 / (samples as f64).sqrt(), "{label}: {mean}");
    }
}

#[test]
fn gate_names_round_trip() {
    for g in [Gate::H(0), Gate::S(1), Gate::Cnot { control: 2, target: 0 }, Gate::X(1), Gate::Y(0), Gate::Z(2)] {
        assert_eq!(Gate::from_parts(g.name(), &g.targets()).unwrap(), g);
    }
}
