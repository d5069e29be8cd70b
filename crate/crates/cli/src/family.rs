//! Operand parsing: built-in families, Pauli strings and coefficient files.

use std::collections::BTreeMap;
use std::f64::consts::PI;
use std::path::Path;

use paulilearn::pauli::synthesize;
use paulilearn::zoo::{Family, RotationProduct, SparseHamiltonian};
use paulilearn::{DenseOperator, PauliMap, PauliString};

use crate::error::UsageError;
use crate::formats::read_coefficients_file;

pub type Params = BTreeMap<String, String>;

/// `(name, parameters, description)` for every family.
pub const CATALOG: &[(&str, &str, &str)] = &[
    ("identity", "n", "identity on n qubits (alias: id)"),
    ("pauli", "label", "a single Pauli string, e.g. pauli:XZ"),
    ("cz", "", "controlled-Z on two qubits"),
    ("mcphase", "n (or k), phi", "phase e^{i phi} on |1^k>"),
    ("grover", "n", "Grover diffusion 2|+><+| - I"),
    ("phase-oracle", "n, x", "I - 2|x><x|, x as a bit string or integer"),
    ("stabilizer-phase", "n, generators, phi", "I + (e^{i phi} - 1) P for the stabilizer projector P"),
    ("rotprod", "n, factors or theta", "product of e^{-i theta P}; default: theta on X of every qubit"),
    ("evolution", "n, terms, t", "e^{-itH} for H given as coefficient:pauli terms (alias: hamiltonian)"),
];

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Float with `pi`, `pi/d` and `c*pi` forms.
pub fn parse_angle(text: &str) -> anyhow::Result<f64> {
    let t = text.trim().to_ascii_lowercase();
    if let Some(rest) = t.strip_prefix("pi") {
        if rest.is_empty() {
            return Ok(PI);
        }
        if let Some(d) = rest.strip_prefix('/') {
            let d: f64 = d.parse().map_err(|_| usage(format!("bad angle \"{text}\"")))?;
            return Ok(PI / d);
        }
    }
    if let Some(c) = t.strip_suffix("*pi").or_else(|| t.strip_suffix("pi")) {
        let c: f64 = c.parse().map_err(|_| usage(format!("bad angle \"{text}\"")))?;
        return Ok(c * PI);
    }
    t.parse().map_err(|_| usage(format!("bad number \"{text}\"")))
}

fn pauli(text: &str) -> anyhow::Result<PauliString> {
    let p: PauliString = text.trim().parse().map_err(|e| usage(format!("{e}")))?;
    if p.phase_exp() != 0 {
        return Err(usage(format!("\"{text}\" must not carry a phase here")));
    }
    Ok(p)
}

/// `"0.3:ZI,0.2:IX"` into `(coefficient, string)` pairs.
fn weighted_list(text: &str) -> anyhow::Result<Vec<(f64, PauliString)>> {
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let (c, p) = item
                .split_once(':')
                .ok_or_else(|| usage(format!("expected coefficient:pauli, got \"{item}\"")))?;
            Ok((parse_angle(c)?, pauli(p)?))
        })
        .collect()
}

struct Lookup<'a> {
    name: &'a str,
    n: Option<usize>,
    params: &'a Params,
}

impl Lookup<'_> {
    fn get(&self, key: &str) -> Option<&str> {
        self.params.get(key).map(String::as_str)
    }

    fn n(&self) -> anyhow::Result<usize> {
        if let Some(v) = self.get("n") {
            return v.parse().map_err(|_| usage(format!("bad qubit count \"{v}\"")));
        }
        self.n.ok_or_else(|| usage(format!("family {} needs --n", self.name)))
    }

    fn float(&self, key: &str, default: Option<f64>) -> anyhow::Result<f64> {
        match self.get(key) {
            Some(v) => parse_angle(v),
            None => default.ok_or_else(|| usage(format!("family {} needs parameter {key}", self.name))),
        }
    }
}

/// Build a family from its name, an optional inline argument (`pauli:XZ`),
/// the global `--n` and `key=value` parameters.
pub fn parse_family(spec: &str, n: Option<usize>, params: &Params) -> anyhow::Result<Family> {
    let (name, inline) = match spec.split_once(':') {
        Some((a, b)) => (a, Some(b)),
        None => (spec, None),
    };
    let q = Lookup { name, n, params };
    let fam = match name {
        "identity" | "id" => Family::Identity { n: q.n()? },
        "pauli" => {
            let label = inline.or(q.get("label")).ok_or_else(|| usage("pauli needs a label, e.g. pauli:XZ"))?;
            let p = pauli(label)?;
            if let Some(n) = n {
                if n != p.n() {
                    return Err(usage(format!("pauli:{label} has {} qubits but --n is {n}", p.n())));
                }
            }
            Family::Pauli(p)
        }
        "cz" => Family::Cz,
        "mcphase" => {
            let k = match q.get("k") {
                Some(v) => v.parse().map_err(|_| usage(format!("bad k \"{v}\"")))?,
                None => q.n()?,
            };
            Family::MultiControlledPhase { k, phi: q.float("phi", Some(PI))? }
        }
        "grover" => Family::Grover { n: q.n()? },
        "phase-oracle" => {
            let n = q.n()?;
            let text = inline.or(q.get("x")).unwrap_or("0");
            let x = if text.len() == n && text.chars().all(|c| c == '0' || c == '1') {
                u64::from_str_radix(text, 2)?
            } else {
                text.parse().map_err(|_| usage(format!("bad basis label \"{text}\"")))?
            };
            Family::PhaseOracle { n, x }
        }
        "stabilizer-phase" => {
            let n = q.n()?;
            let gens = q
                .get("generators")
                .ok_or_else(|| usage("stabilizer-phase needs generators=XX,ZZ"))?
                .split(',')
                .map(pauli)
                .collect::<anyhow::Result<Vec<_>>>()?;
            Family::StabilizerPhase { n, generators: gens, phi: q.float("phi", Some(PI))? }
        }
        "rotprod" => {
            let n = q.n()?;
            let factors = match q.get("factors") {
                Some(text) => weighted_list(text)?,
                None => {
                    let theta = q.float("theta", Some(0.06))?;
                    (0..n)
                        .map(|j| Ok((theta, PauliString::single(n, j, 1)?)))
                        .collect::<anyhow::Result<Vec<_>>>()?
                }
            };
            Family::RotationProduct(RotationProduct::new(n, factors)?)
        }
        "evolution" | "hamiltonian" => {
            let n = q.n()?;
            let terms = weighted_list(q.get("terms").ok_or_else(|| usage("evolution needs terms=0.3:ZI,..."))?)?;
            Family::Evolution { h: SparseHamiltonian::new(n, terms)?, t: q.float("t", Some(1.0))? }
        }
        other => return Err(usage(format!("unknown family \"{other}\""))),
    };
    if let Some(n) = n {
        if fam.n() != n && !matches!(fam, Family::Pauli(_)) {
            return Err(usage(format!("{} acts on {} qubits but --n is {n}", fam.name(), fam.n())));
        }
    }
    Ok(fam)
}

/// A resolved operand.
pub struct Operand {
    pub label: String,
    pub op: DenseOperator,
    pub coefficients: PauliMap,
}

/// `file:path`, a `.jsonl` path, or a family spec.
pub fn resolve_operand(spec: &str, n: Option<usize>, params: &Params) -> anyhow::Result<Operand> {
    let path = spec.strip_prefix("file:").or_else(|| spec.ends_with(".jsonl").then_some(spec));
    if let Some(path) = path {
        let (map, _) = read_coefficients_file(Path::new(path))?;
        if let Some(n) = n {
            if map.n() != n {
                return Err(usage(format!("{path} has n = {} but --n is {n}", map.n())));
            }
        }
        return Ok(Operand { label: spec.to_string(), op: synthesize(&map)?, coefficients: map });
    }
    let fam = parse_family(spec, n, params)?;
    Ok(Operand { label: spec.to_string(), op: fam.build()?, coefficients: fam.coefficients()? })
}

/// `key=value` pairs into a map.
pub fn parse_params(items: &[String]) -> anyhow::Result<Params> {
    let mut out = Params::new();
    for item in items {
        let (k, v) = item.split_once('=').ok_or_else(|| usage(format!("expected key=value, got \"{item}\"")))?;
        out.insert(k.trim().to_string(), v.trim().to_string());
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn angles() {
        assert_eq!(parse_angle("pi").unwrap(), PI);
        assert_eq!(parse_angle("pi/3").unwrap(), PI / 3.0);
        assert_eq!(parse_angle("0.5pi").unwrap(), 0.5 * PI);
        assert_eq!(parse_angle("0.25").unwrap(), 0.25);
        assert!(parse_angle("x").is_err());
    }

    #[test]
    fn families_parse() {
        let p = Params::new();
        assert_eq!(parse_family("grover", Some(3), &p).unwrap(), Family::Grover { n: 3 });
        assert_eq!(parse_family("pauli:Z", Some(1), &p).unwrap(), Family::Pauli("Z".parse().unwrap()));
        let x = parse_family("phase-oracle:101", Some(3), &p).unwrap();
        assert_eq!(x, Family::PhaseOracle { n: 3, x: 5 });
        assert!(parse_family("grover", None, &p).is_err());
        assert!(parse_family("cz", Some(3), &p).is_err());
        let params = parse_params(&["factors=0.1:XI,0.2:IZ".to_string()]).unwrap();
        match parse_family("rotprod", Some(2), &params).unwrap() {
            Family::RotationProduct(rp) => assert_eq!(rp.factors().len(), 2),
            other => panic!("{other:?}"),
        }
    }
}
