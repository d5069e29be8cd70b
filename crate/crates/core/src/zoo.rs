//! Example unitary families with analytic Pauli certificates.

use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;
use core::f64::consts::PI;

#[allow(unused_imports)]
use num_traits::Float;

use crate::clifford::CliffordTableau;
use crate::error::{Error, Result};
use crate::linalg::{DenseOperator, C64};
use crate::pauli::{decompose, synthesize, PauliMap, PauliString};
use crate::sim::NORM_TOL;

/// `H = Σ_j h_j σ^{s_j}` with distinct strings.
#[derive(Clone, Debug, PartialEq)]
pub struct SparseHamiltonian {
    n: usize,
    terms: Vec<(f64, PauliString)>,
}

impl SparseHamiltonian {
    pub fn new(n: usize, terms: Vec<(f64, PauliString)>) -> Result<Self> {
        for (i, (h, p)) in terms.iter().enumerate() {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n(),
                });
            }
            if !h.is_finite() {
                return Err(Error::InvalidParameter(alloc::format!("coefficient {h}")));
            }
            if terms[..i].iter().any(|(_, q)| q.phase_free() == p.phase_free()) {
                return Err(Error::InvalidPauli(alloc::format!("repeated term {}", p.label())));
            }
            if p.phase_exp() != 0 {
                return Err(Error::InvalidPauli(alloc::format!("phased term {}", p.label())));
            }
        }
        Ok(Self { n, terms })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &[(f64, PauliString)] {
        &self.terms
    }

    /// `L = Σ|h_j|`.
    pub fn l(&self) -> f64 {
        self.terms.iter().map(|(h, _)| h.abs()).sum()
    }

    pub fn to_map(&self) -> PauliMap {
        let mut m = PauliMap::new(self.n);
        for (h, p) in &self.terms {
            m.add_term(p, C64::new(*h, 0.0));
        }
        m
    }

    pub fn dense(&self) -> Result<DenseOperator> {
        synthesize(&self.to_map())
    }

    /// `e^{-itH}` by dense diagonalization.
    pub fn evolution(&self, t: f64) -> Result<DenseOperator> {
        crate::check_operator_cap(self.n)?;
        Ok(DenseOperator::expm_hermitian(&self.dense()?, t))
    }
}

/// `U = Π_j e^{-iθ_j P_j}`, first factor leftmost.
#[derive(Clone, Debug, PartialEq)]
pub struct RotationProduct {
    n: usize,
    factors: Vec<(f64, PauliString)>,
}

impl RotationProduct {
    pub fn new(n: usize, factors: Vec<(f64, PauliString)>) -> Result<Self> {
        for (theta, p) in &factors {
            if p.n() != n {
                return Err(Error::DimensionMismatch {
                    expected: n,
                    found: p.n(),
                });
            }
            if !(theta.abs() < PI / 2.0) {
                return Err(Error::InvalidParameter(alloc::format!("angle {theta} outside (-pi/2, pi/2)")));
            }
            if p.phase_exp() != 0 {
                return Err(Error::InvalidPauli(alloc::format!("phased factor {}", p.label())));
            }
        }
        Ok(Self { n, factors })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn factors(&self) -> &[(f64, PauliString)] {
        &self.factors
    }

    /// `A = Σ|tan θ_j|`.
    pub fn a(&self) -> f64 {
        self.factors.iter().map(|(t, _)| t.tan().abs()).sum()
    }

    /// Exact coefficients by sparse multiplication of `cos θ I - i sin θ P`.
    pub fn to_map(&self) -> PauliMap {
        let mut acc = PauliMap::identity(self.n);
        for (theta, p) in &self.factors {
            let mut f = PauliMap::new(self.n);
            f.add_term(&PauliString::identity(self.n), C64::new(theta.cos(), 0.0));
            f.add_term(p, C64::new(0.0, -theta.sin()));
            acc = acc.mul(&f).expect("same n");
        }
        acc
    }

    pub fn dense(&self) -> Result<DenseOperator> {
        synthesize(&self.to_map())
    }

    /// Strings reachable as products of at most `k` factors, phases dropped.
    pub fn reachable(&self, k: usize) -> Vec<PauliString> {
        let m = self.factors.len();
        let mut out: Vec<PauliString> = vec![PauliString::identity(self.n)];
        let mut frontier: Vec<(usize, PauliString)> = vec![(0, PauliString::identity(self.n))];
        for _ in 0..k.min(m) {
            let mut next = Vec::new();
            for (start, p) in &frontier {
                for j in *start..m {
                    let q = p.mul(&self.factors[j].1).expect("same n").phase_free();
                    next.push((j + 1, q));
                    out.push(q);
                }
            }
            frontier = next;
        }
        out.sort_by_key(|p| p.index());
        out.dedup();
        out
    }
}

fn binomial(m: usize, r: usize) -> u64 {
    let mut c = 1u64;
    for i in 0..r {
        c = c * (m - i) as u64 / (i + 1) as u64;
    }
    c
}

fn factorial(k: usize) -> f64 {
    (1..=k).map(|i| i as f64).product()
}

/// `(Σ_{r≤k} C(m,r), e^A A^{k+1}/(k+1)!)`.
pub fn subset_tail_bound(rp: &RotationProduct, k: usize) -> (u64, f64) {
    let m = rp.factors.len();
    let s = (0..=k.min(m)).map(|r| binomial(m, r)).sum();
    let a = rp.a();
    (s, a.exp() * a.powi(k as i32 + 1) / factorial(k + 1))
}

/// True `ℓ1,P` mass of the product outside the reachable set `S_k`.
pub fn subset_tail_residual(rp: &RotationProduct, k: usize) -> f64 {
    let keep = rp.reachable(k);
    let map = rp.to_map();
    map.iter()
        .filter(|(p, _)| keep.binary_search_by_key(&p.index(), |q| q.index()).is_err())
        .map(|(_, c)| c.norm())
        .sum()
}

#[derive(Clone, Debug, PartialEq)]
pub struct TaylorTail {
    /// `Σ_{ℓ≤k} m^ℓ`.
    pub support_bound: u64,
    /// `e^{|t|L} (|t|L)^{k+1}/(k+1)!`.
    pub eps_bound: f64,
    /// Pauli map of `Σ_{ℓ≤k} (-it)^ℓ H^ℓ/ℓ!`.
    pub truncation: PauliMap,
}

pub fn taylor_tail_bound(h: &SparseHamiltonian, t: f64, k: usize) -> TaylorTail {
    let m = h.terms.len() as u64;
    let support_bound = (0..=k as u32).map(|l| m.saturating_pow(l)).fold(0u64, |a, b| a.saturating_add(b));
    let x = t.abs() * h.l();
    let eps_bound = x.exp() * x.powi(k as i32 + 1) / factorial(k + 1);
    let hm = h.to_map();
    let mut truncation = PauliMap::identity(h.n);
    let mut power = PauliMap::identity(h.n);
    for l in 1..=k {
        power = power.mul(&hm).expect("same n").scale(C64::new(0.0, -t / l as f64));
        truncation = truncation.add(&power).expect("same n");
    }
    TaylorTail {
        support_bound,
        eps_bound,
        truncation,
    }
}

/// `‖e^{-itH} - U_{≤k}‖_{1,P}` through a dense exponential.
pub fn taylor_tail_residual(h: &SparseHamiltonian, t: f64, k: usize) -> Result<f64> {
    let exact = decompose(&h.evolution(t)?)?;
    let tail = taylor_tail_bound(h, t, k);
    Ok(exact.sub(&tail.truncation)?.norms().l1)
}

/// `(‖e^{iH}‖_{1,P}, e^L)`.
pub fn l1_propagation_check(h: &SparseHamiltonian) -> Result<(f64, f64)> {
    let u = h.evolution(-1.0)?;
    Ok((decompose(&u)?.norms().l1, h.l().exp()))
}

/// `C U C†`.
pub fn clifford_conjugate_family(u: &DenseOperator, c: &CliffordTableau) -> Result<DenseOperator> {
    if u.qubits() != c.k() {
        return Err(Error::DimensionMismatch {
            expected: c.k(),
            found: u.qubits(),
        });
    }
    let v = c.dense()?;
    v.matmul(u)?.matmul(&v.adjoint())
}

/// `Π = Π_g (I + g)/2` for commuting, independent Hermitian generators.
pub fn stabilizer_projector(n: usize, generators: &[PauliString]) -> Result<PauliMap> {
    check_generators(n, generators)?;
    let mut acc = PauliMap::identity(n);
    for g in generators {
        let mut f = PauliMap::new(n);
        f.add_term(&PauliString::identity(n), C64::new(0.5, 0.0));
        f.add_term(g, C64::new(0.5, 0.0));
        acc = acc.mul(&f)?;
    }
    Ok(acc.pruned(0.0))
}

fn check_generators(n: usize, generators: &[PauliString]) -> Result<()> {
    let mut rows: Vec<u128> = Vec::new();
    for (i, g) in generators.iter().enumerate() {
        if g.n() != n {
            return Err(Error::DimensionMismatch {
                expected: n,
                found: g.n(),
            });
        }
        if g.phase_exp() % 2 != 0 {
            return Err(Error::InvalidPauli(alloc::format!("non-Hermitian generator {}", g.label())));
        }
        if generators[..i].iter().any(|h| !h.commutes_with(g)) {
            return Err(Error::InvalidPauli(alloc::format!("generator {} does not commute", g.label())));
        }
        rows.push(((g.x_mask() as u128) << 64) | g.z_mask() as u128);
    }
    // GF(2) rank of the symplectic vectors.
    let mut basis: Vec<u128> = Vec::new();
    for mut r in rows {
        for b in &basis {
            r = r.min(r ^ b);
        }
        if r == 0 {
            return Err(Error::InvalidPauli(String::from("dependent generators")));
        }
        basis.push(r);
        basis.sort_unstable_by(|a, b| b.cmp(a));
    }
    Ok(())
}

/// The catalog of families.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Identity { n: usize },
    Pauli(PauliString),
    /// Controlled-Z on two qubits.
    Cz,
    /// Phase `e^{iφ}` on `|1^k>`.
    MultiControlledPhase { k: usize, phi: f64 },
    /// `D = 2|+><+|^{⊗n} - I`.
    Grover { n: usize },
    /// `I - 2|x><x|`.
    PhaseOracle { n: usize, x: u64 },
    /// `I + (e^{iφ} - 1) Π` for the stabilizer projector `Π`.
    StabilizerPhase { n: usize, generators: Vec<PauliString>, phi: f64 },
    RotationProduct(RotationProduct),
    /// `e^{-itH}`.
    Evolution { h: SparseHamiltonian, t: f64 },
}

impl Family {
    pub fn name(&self) -> &'static str {
        match self {
            Family::Identity { .. } => "identity",
            Family::Pauli(_) => "pauli",
            Family::Cz => "cz",
            Family::MultiControlledPhase { .. } => "mcphase",
            Family::Grover { .. } => "grover",
            Family::PhaseOracle { .. } => "phase-oracle",
            Family::StabilizerPhase { .. } => "stabilizer-phase",
            Family::RotationProduct(_) => "rotprod",
            Family::Evolution { .. } => "evolution",
        }
    }

    pub fn n(&self) -> usize {
        match self {
            Family::Identity { n } | Family::Grover { n } | Family::PhaseOracle { n, .. } => *n,
            Family::StabilizerPhase { n, .. } => *n,
            Family::Pauli(p) => p.n(),
            Family::Cz => 2,
            Family::MultiControlledPhase { k, .. } => *k,
            Family::RotationProduct(rp) => rp.n(),
            Family::Evolution { h, .. } => h.n(),
        }
    }

    /// Pauli coefficients, exact where a sparse formula exists.
    pub fn coefficients(&self) -> Result<PauliMap> {
        let map = match self {
            Family::Identity { n } => PauliMap::identity(*n),
            Family::Pauli(p) => {
                let mut m = PauliMap::new(p.n());
                m.add_term(&p.phase_free(), crate::linalg::i_pow(p.phase_exp() as u32));
                m
            }
            Family::Cz => projector_phase(&ones_projector(2), PI),
            Family::MultiControlledPhase { k, phi } => {
                if *k == 0 {
                    return Err(Error::InvalidParameter(String::from("k must be positive")));
                }
                projector_phase(&ones_projector(*k), *phi)
            }
            Family::Grover { n } => {
                if *n == 0 {
                    return Err(Error::InvalidParameter(String::from("n must be positive")));
                }
                // Π₊ = Π_q (I + X_q)/2.
                let mut plus = PauliMap::identity(*n);
                for q in 0..*n {
                    let mut f = PauliMap::new(*n);
                    f.add_term(&PauliString::identity(*n), C64::new(0.5, 0.0));
                    f.add_term(&PauliString::single(*n, q, 1)?, C64::new(0.5, 0.0));
                    plus = plus.mul(&f)?;
                }
                plus.scale(C64::new(2.0, 0.0)).sub(&PauliMap::identity(*n))?
            }
            Family::PhaseOracle { n, x } => {
                if *n == 0 || *x >= 1u64 << n {
                    return Err(Error::InvalidParameter(alloc::format!("x = {x} outside {n} qubits")));
                }
                projector_phase(&basis_projector(*n, *x), PI)
            }
            Family::StabilizerPhase { n, generators, phi } => projector_phase(&stabilizer_projector(*n, generators)?, *phi),
            Family::RotationProduct(rp) => rp.to_map(),
            Family::Evolution { h, t } => decompose(&h.evolution(*t)?)?,
        };
        Ok(map.pruned(0.0))
    }

    /// Dense unitary, checked to `1e-10`.
    pub fn build(&self) -> Result<DenseOperator> {
        let u = match self {
            Family::Evolution { h, t } => h.evolution(*t)?,
            _ => {
                crate::check_operator_cap(self.n())?;
                synthesize(&self.coefficients()?)?
            }
        };
        u.ensure_unitary(NORM_TOL)?;
        Ok(u)
    }

    /// Closed-form `‖U‖_{1,P}` where one is known.
    pub fn l1_closed_form(&self) -> Option<f64> {
        match self {
            Family::Identity { .. } | Family::Pauli(_) => Some(1.0),
            Family::Cz => Some(mcphase_l1(2, PI)),
            Family::MultiControlledPhase { k, phi } => Some(mcphase_l1(*k, *phi)),
            Family::Grover { n } => Some(3.0 - 2f64.powi(2 - *n as i32)),
            Family::PhaseOracle { n, .. } => Some(3.0 - 4.0 / 2f64.powi(*n as i32)),
            _ => None,
        }
    }
}

/// `|1 + (e^{iφ}-1)/2^k| + (2^k - 1)|e^{iφ}-1|/2^k`.
pub fn mcphase_l1(k: usize, phi: f64) -> f64 {
    let d = C64::from_polar(1.0, phi) - 1.0;
    let w = 2f64.powi(k as i32);
    (1.0 + d / w).norm() + (w - 1.0) * d.norm() / w
}

/// `|1^k><1^k| = Π_q (I - Z_q)/2`.
fn ones_projector(k: usize) -> PauliMap {
    basis_projector(k, (1u64 << k) - 1)
}

/// `|x><x| = Π_q (I + (-1)^{x_q} Z_q)/2`.
fn basis_projector(n: usize, x: u64) -> PauliMap {
    let mut acc = PauliMap::identity(n);
    for q in 0..n {
        let bit = (x >> (n - 1 - q)) & 1;
        let sign = if bit == 1 { -0.5 } else { 0.5 };
        let mut f = PauliMap::new(n);
        f.add_term(&PauliString::identity(n), C64::new(0.5, 0.0));
        f.add_term(&PauliString::single(n, q, 3).expect("valid qubit"), C64::new(sign, 0.0));
        acc = acc.mul(&f).expect("same n");
    }
    acc
}

/// `I + (e^{iφ} - 1) Π`.
fn projector_phase(proj: &PauliMap, phi: f64) -> PauliMap {
    let d = C64::from_polar(1.0, phi) - 1.0;
    PauliMap::identity(proj.n()).add(&proj.scale(d)).expect("same n")
}

/// Representative members of every family on at most `max_n` qubits.
pub fn standard_members(max_n: usize) -> Vec<Family> {
    let mut out = Vec::new();
    let p = |s: &str| -> PauliString { s.parse().expect("valid label") };
    for n in 1..=max_n {
        out.push(Family::Identity { n });
        out.push(Family::Grover { n });
        out.push(Family::PhaseOracle { n, x: (1u64 << n) - 1 - (n as u64 % 2) });
        out.push(Family::MultiControlledPhase { k: n, phi: 0.7 });
    }
    if max_n >= 1 {
        out.push(Family::Pauli(p("Y")));
        out.push(Family::RotationProduct(
            RotationProduct::new(1, vec![(0.4, p("Y"))]).expect("valid"),
        ));
        out.push(Family::Evolution {
            h: SparseHamiltonian::new(1, vec![(0.3, p("Z")), (0.5, p("X"))]).expect("valid"),
            t: 1.0,
        });
    }
    if max_n >= 2 {
        out.push(Family::Cz);
        out.push(Family::StabilizerPhase {
            n: 2,
            generators: vec![p("XX"), p("ZZ")],
            phi: PI / 3.0,
        });
        out.push(Family::RotationProduct(
            RotationProduct::new(2, vec![(0.3, p("XZ")), (-0.2, p("YI"))]).expect("valid"),
        ));
        out.push(Family::Evolution {
            h: SparseHamiltonian::new(2, vec![(0.3, p("ZI")), (0.2, p("IX"))]).expect("valid"),
            t: 1.0,
        });
    }
    if max_n >= 3 {
        out.push(Family::StabilizerPhase {
            n: 3,
            generators: vec![p("ZZI"), p("IZZ")],
            phi: 1.1,
        });
        out.push(Family::RotationProduct(
            RotationProduct::new(3, vec![(0.2, p("XXI")), (0.15, p("IZZ")), (0.1, p("YIY"))]).expect("valid"),
        ));
        out.push(Family::Evolution {
            h: SparseHamiltonian::new(3, vec![(0.4, p("XYZ")), (-0.3, p("ZIZ")), (0.1, p("IXI"))]).expect("valid"),
            t: 0.8,
        });
    }
    out
}
