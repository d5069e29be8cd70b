//! On-disk formats.
//!
//! - Coefficient files: JSON lines, a header `{"n": N, ...}` then one
//!   `{"pauli": "XIZ", "re": .., "im": ..}` record per entry.
//! - Shot logs: JSON lines, a header then `{"shot": i, "outcome": "XZ"}`.
//! - Snapshot archives: JSON lines, a header then one serialized snapshot per line.
//! - Tableaux: `{"k", "matrix", "phases"}` with a row-major 0/1 matrix.
//! - Gate sequences: arrays of `{"gate", "targets"}`.

use std::collections::BTreeSet;
use std::io::{BufRead, Write};

use num_complex::Complex64 as C64;
use paulilearn::clifford::{CliffordTableau, Gate};
use paulilearn::shadows::Snapshot;
use paulilearn::{DenseOperator, PauliMap, PauliString};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};

#[derive(Debug, thiserror::Error)]
pub enum FormatError {
    #[error("{source_name}:{line}: {message}")]
    Line {
        source_name: String,
        line: usize,
        message: String,
    },
    #[error("{0}")]
    Other(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

fn at(source_name: &str, line: usize, message: impl Into<String>) -> FormatError {
    FormatError::Line {
        source_name: source_name.to_string(),
        line,
        message: message.into(),
    }
}

/// Non-empty lines with 1-based line numbers.
fn numbered_lines<R: BufRead>(reader: R) -> impl Iterator<Item = (usize, std::io::Result<String>)> {
    reader
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| l.as_ref().map_or(true, |s| !s.trim().is_empty()))
}

fn parse_object(source_name: &str, line: usize, text: &str) -> Result<Map<String, Value>, FormatError> {
    match serde_json::from_str::<Value>(text) {
        Ok(Value::Object(m)) => Ok(m),
        Ok(_) => Err(at(source_name, line, "expected a JSON object")),
        Err(e) => Err(at(source_name, line, e.to_string())),
    }
}

/// Header fields other than `n`.
pub type Header = Map<String, Value>;

pub fn write_coefficients<W: Write>(mut w: W, map: &PauliMap, meta: &Header) -> Result<(), FormatError> {
    let mut header = Map::new();
    header.insert("n".into(), json!(map.n()));
    for (k, v) in meta {
        if k != "n" {
            header.insert(k.clone(), v.clone());
        }
    }
    writeln!(w, "{}", Value::Object(header))?;
    for (p, c) in map.iter() {
        writeln!(w, "{}", json!({"pauli": p.label(), "re": c.re, "im": c.im}))?;
    }
    Ok(())
}

pub fn read_coefficients<R: BufRead>(reader: R, source_name: &str) -> Result<(PauliMap, Header), FormatError> {
    let mut map: Option<PauliMap> = None;
    let mut header = Map::new();
    let mut seen = BTreeSet::new();
    for (line, text) in numbered_lines(reader) {
        let obj = parse_object(source_name, line, &text?)?;
        match &mut map {
            None => {
                let n = obj
                    .get("n")
                    .and_then(Value::as_u64)
                    .ok_or_else(|| at(source_name, line, "first record must be a header with integer \"n\""))?;
                if n as usize > paulilearn::pauli::MAX_QUBITS {
                    return Err(at(source_name, line, format!("n = {n} is too large")));
                }
                header = obj;
                header.remove("n");
                map = Some(PauliMap::new(n as usize));
            }
            Some(m) => {
                let label = obj
                    .get("pauli")
                    .and_then(Value::as_str)
                    .ok_or_else(|| at(source_name, line, "missing string field \"pauli\""))?;
                let p: PauliString = label.parse().map_err(|e| at(source_name, line, format!("{e}")))?;
                if p.n() != m.n() || p.phase_exp() != 0 {
                    return Err(at(source_name, line, format!("\"{label}\" is not a {}-qubit Pauli string", m.n())));
                }
                let num = |key: &str| -> Result<f64, FormatError> {
                    match obj.get(key) {
                        None => Ok(0.0),
                        Some(v) => v
                            .as_f64()
                            .ok_or_else(|| at(source_name, line, format!("\"{key}\" must be a number"))),
                    }
                };
                let c = C64::new(num("re")?, num("im")?);
                if !seen.insert(p.index()) {
                    return Err(at(source_name, line, format!("duplicate entry for \"{label}\"")));
                }
                m.set(&p, c);
            }
        }
    }
    let map = map.ok_or_else(|| at(source_name, 1, "empty coefficient file"))?;
    Ok((map, header))
}

pub fn read_coefficients_file(path: &std::path::Path) -> Result<(PauliMap, Header), FormatError> {
    let f = std::fs::File::open(path).map_err(|e| FormatError::Other(format!("{}: {e}", path.display())))?;
    read_coefficients(std::io::BufReader::new(f), &path.display().to_string())
}

pub fn write_shot_log<W: Write>(mut w: W, shots: &[PauliString], header: &Header) -> Result<(), FormatError> {
    writeln!(w, "{}", Value::Object(header.clone()))?;
    for (i, s) in shots.iter().enumerate() {
        writeln!(w, "{}", json!({"shot": i, "outcome": s.label()}))?;
    }
    Ok(())
}

pub fn read_shot_log<R: BufRead>(reader: R, source_name: &str) -> Result<(Vec<PauliString>, Header), FormatError> {
    let mut header = None;
    let mut shots = Vec::new();
    for (line, text) in numbered_lines(reader) {
        let obj = parse_object(source_name, line, &text?)?;
        if header.is_none() {
            header = Some(obj);
            continue;
        }
        let label = obj
            .get("outcome")
            .and_then(Value::as_str)
            .ok_or_else(|| at(source_name, line, "missing string field \"outcome\""))?;
        shots.push(label.parse().map_err(|e| at(source_name, line, format!("{e}")))?);
    }
    Ok((shots, header.unwrap_or_default()))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TableauJson {
    pub k: usize,
    pub matrix: Vec<Vec<u8>>,
    pub phases: Vec<u8>,
}

impl From<&CliffordTableau> for TableauJson {
    fn from(t: &CliffordTableau) -> Self {
        Self {
            k: t.k(),
            matrix: t
                .symplectic_matrix()
                .iter()
                .map(|r| r.iter().map(|b| u8::from(*b)).collect())
                .collect(),
            phases: t.phases().iter().map(|b| u8::from(*b)).collect(),
        }
    }
}

impl TableauJson {
    pub fn to_tableau(&self) -> Result<CliffordTableau, FormatError> {
        let bit = |b: u8| -> Result<bool, FormatError> {
            match b {
                0 => Ok(false),
                1 => Ok(true),
                _ => Err(FormatError::Other(format!("tableau entry {b} is not a bit"))),
            }
        };
        let matrix = self
            .matrix
            .iter()
            .map(|r| r.iter().map(|b| bit(*b)).collect::<Result<Vec<_>, _>>())
            .collect::<Result<Vec<_>, _>>()?;
        let phases = self.phases.iter().map(|b| bit(*b)).collect::<Result<Vec<_>, _>>()?;
        if matrix.len() != 2 * self.k {
            return Err(FormatError::Other(format!("expected {} rows for k = {}", 2 * self.k, self.k)));
        }
        CliffordTableau::from_symplectic(&matrix, &phases).map_err(|e| FormatError::Other(e.to_string()))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GateJson {
    pub gate: String,
    pub targets: Vec<usize>,
}

pub fn gates_to_json(gates: &[Gate]) -> Vec<GateJson> {
    gates
        .iter()
        .map(|g| GateJson {
            gate: g.name().to_string(),
            targets: g.targets(),
        })
        .collect()
}

pub fn gates_from_json(gates: &[GateJson]) -> Result<Vec<Gate>, FormatError> {
    gates
        .iter()
        .map(|g| Gate::from_parts(&g.gate, &g.targets).map_err(|e| FormatError::Other(e.to_string())))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SnapshotJson {
    pub index: u64,
    pub stream_id: u64,
    pub outcome: u64,
    pub tableau: TableauJson,
}

pub fn write_snapshots<W: Write>(mut w: W, snapshots: &[Snapshot], header: &Header) -> Result<(), FormatError> {
    writeln!(w, "{}", Value::Object(header.clone()))?;
    for (i, s) in snapshots.iter().enumerate() {
        let rec = SnapshotJson {
            index: i as u64,
            stream_id: s.stream_id,
            outcome: s.outcome,
            tableau: (&s.tableau).into(),
        };
        writeln!(w, "{}", serde_json::to_string(&rec)?)?;
    }
    Ok(())
}

pub fn read_snapshots<R: BufRead>(reader: R, source_name: &str) -> Result<(Vec<Snapshot>, Header), FormatError> {
    let mut header = None;
    let mut out = Vec::new();
    for (line, text) in numbered_lines(reader) {
        let text = text?;
        if header.is_none() {
            header = Some(parse_object(source_name, line, &text)?);
            continue;
        }
        let rec: SnapshotJson = serde_json::from_str(&text).map_err(|e| at(source_name, line, e.to_string()))?;
        let t = rec.tableau.to_tableau().map_err(|e| at(source_name, line, e.to_string()))?;
        out.push(Snapshot::new(t, rec.outcome, rec.stream_id).map_err(|e| at(source_name, line, e.to_string()))?);
    }
    Ok((out, header.unwrap_or_default()))
}

/// Dense matrix as `{"n": n, "rows": [[[re, im], ..], ..]}`.
pub fn operator_to_json(op: &DenseOperator) -> Value {
    let d = op.dim();
    let rows: Vec<Vec<[f64; 2]>> = (0..d)
        .map(|r| (0..d).map(|c| {
            let z = op.get(r, c);
            [z.re, z.im]
        }).collect())
        .collect();
    json!({"n": op.qubits(), "rows": rows})
}

pub fn operator_from_json(v: &Value) -> Result<DenseOperator, FormatError> {
    let rows: Vec<Vec<[f64; 2]>> = serde_json::from_value(
        v.get("rows").cloned().ok_or_else(|| FormatError::Other("missing \"rows\"".into()))?,
    )?;
    let rows: Vec<Vec<C64>> = rows.iter().map(|r| r.iter().map(|[a, b]| C64::new(*a, *b)).collect()).collect();
    DenseOperator::from_rows(&rows).map_err(|e| FormatError::Other(e.to_string()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_errors_name_the_line() {
        let text = "{\"n\": 2}\n{\"pauli\": \"XZ\", \"re\": 1.0}\n\n{\"pauli\": \"XZZ\", \"re\": 1.0}\n";
        let err = read_coefficients(text.as_bytes(), "c.jsonl").unwrap_err().to_string();
        assert!(err.starts_with("c.jsonl:4:"), "{err}");
        let dup = "{\"n\": 1}\n{\"pauli\": \"X\"}\n{\"pauli\": \"X\"}\n";
        assert!(read_coefficients(dup.as_bytes(), "d").unwrap_err().to_string().starts_with("d:3:"));
        let no_header = "{\"pauli\": \"X\"}\n";
        assert!(read_coefficients(no_header.as_bytes(), "h").is_err());
    }
}
