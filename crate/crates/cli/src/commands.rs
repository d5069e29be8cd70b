//! Subcommand implementations.

use std::fs::File;
use std::io::{BufReader, BufWriter, Write};
use std::path::Path;
use std::time::Instant;

use paulilearn::lcu::{amplified_block, effective_block, exact_schedule, gate_estimate, success_probability, LcuSpec};
use paulilearn::learner::{find_support, learn, plan, LearnConfig, LearnReport};
use paulilearn::metrics::{distance_report, min_phase_l1, DistanceReport};
use paulilearn::pauli::{decompose, synthesize};
use paulilearn::shadows::{collect, estimate_from_snapshots, BellObservable, ObservableKind};
use paulilearn::sim::{bell_sample, prepare_choi, UnitaryOracle};
use paulilearn::{rng, DenseOperator, Error, PauliMap, PauliString, QueryCounter};
use rayon::prelude::*;
use serde_json::{json, Map, Value};

use crate::cli::{Command, Common, ZooAction};
use crate::config::{resolve, RunConfig, DEFAULT_SHOTS, DEFAULT_SNAPSHOTS};
use crate::error::{LearnerAbort, UsageError, EXIT_OK, EXIT_PROPERTY};
use crate::family::{parse_family, resolve_operand, Operand, CATALOG};
use crate::formats::{
    operator_from_json, operator_to_json, read_coefficients_file, read_snapshots, write_coefficients,
    write_shot_log, write_snapshots, Header,
};
use crate::version::VERSION;

/// Header names of the bench CSV, in column order.
pub const BENCH_HEADER: &str = "n,s,eps,m1,m2,total_queries,aligned_l1_error,restricted_diamond,diamond_upper,wall_time";

fn usage(msg: impl Into<String>) -> anyhow::Error {
    UsageError(msg.into()).into()
}

/// Map learner aborts to their own error kind.
fn learner_error(e: Error) -> anyhow::Error {
    match e {
        Error::AnchorTooSmall { .. } | Error::BudgetExceeded { .. } => LearnerAbort(e.to_string()).into(),
        other => usage(other.to_string()),
    }
}

fn output(cfg: &RunConfig) -> anyhow::Result<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(BufWriter::new(create(path)?)),
        None => Box::new(BufWriter::new(std::io::stdout().lock())),
    })
}

fn create(path: &Path) -> anyhow::Result<File> {
    File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

/// Common header for JSON and JSONL outputs.
fn envelope(command: &str, cfg: &RunConfig) -> Map<String, Value> {
    let mut m = Map::new();
    m.insert("version".into(), json!(VERSION));
    m.insert("command".into(), json!(command));
    m.insert("config".into(), serde_json::to_value(cfg).expect("serializable"));
    m
}

fn emit_json(command: &str, cfg: &RunConfig, result: Value) -> anyhow::Result<()> {
    let mut doc = envelope(command, cfg);
    doc.insert("result".into(), result);
    let mut w = output(cfg)?;
    serde_json::to_writer_pretty(&mut w, &Value::Object(doc))?;
    writeln!(w)?;
    w.flush()?;
    Ok(())
}

fn coefficient_list(map: &PauliMap) -> Value {
    Value::Array(
        map.iter()
            .map(|(p, c)| json!({"pauli": p.label(), "re": c.re, "im": c.im}))
            .collect(),
    )
}

fn labels(v: &[PauliString]) -> Vec<String> {
    v.iter().map(PauliString::label).collect()
}

fn report_json(r: &DistanceReport) -> Value {
    json!({
        "d_optphase": r.d_optphase,
        "phi_star": r.phi_star,
        "d_diamond_exact": r.d_diamond_exact,
        "d_diamond_upper": r.d_diamond_upper,
        "d_restricted_mm": r.d_restricted_mm,
        "l1p_aligned": r.l1p_aligned,
        "l2p_aligned": r.l2p_aligned,
    })
}

fn with_family(cfg: RunConfig, family: &Option<String>) -> RunConfig {
    RunConfig {
        family: family.clone().or(cfg.family),
        ..cfg
    }
}

fn setup(common: &Common, extra: impl FnOnce(RunConfig) -> RunConfig) -> anyhow::Result<RunConfig> {
    resolve(extra(common.flags()?), common.config.as_deref())
}

fn operand(cfg: &RunConfig) -> anyhow::Result<Operand> {
    let spec = cfg.family.as_deref().ok_or_else(|| usage("--family is required"))?;
    resolve_operand(spec, cfg.n, &cfg.params())
}

/// Run `f` inside a pool of `cfg.workers` threads.
fn in_pool<T: Send>(cfg: &RunConfig, f: impl FnOnce() -> T + Send) -> anyhow::Result<T> {
    let mut b = rayon::ThreadPoolBuilder::new();
    if let Some(w) = cfg.workers {
        b = b.num_threads(w);
    }
    Ok(b.build()?.install(f))
}

pub fn run(command: Command) -> anyhow::Result<i32> {
    match command {
        Command::Decompose { family, matrix, common } => {
            let cfg = setup(&common, |c| with_family(c, &family))?;
            decompose_cmd(&cfg, matrix.as_deref())
        }
        Command::Synthesize { coeffs, common } => {
            let cfg = setup(&common, |c| RunConfig { coeffs: Some(coeffs.clone()), ..c })?;
            synthesize_cmd(&cfg)
        }
        Command::Zoo { action: ZooAction::List } => {
            let mut out = std::io::stdout().lock();
            writeln!(out, "{:<18} {:<22} description", "family", "parameters")?;
            for (name, params, desc) in CATALOG {
                writeln!(out, "{name:<18} {params:<22} {desc}")?;
            }
            Ok(EXIT_OK)
        }
        Command::Zoo { action: ZooAction::Build { family, common } } => {
            let cfg = setup(&common, |c| with_family(c, &family))?;
            zoo_build(&cfg)
        }
        Command::BellSample { family, shots, common } => {
            let cfg = setup(&common, |c| RunConfig { shots, ..with_family(c, &family) })?;
            bell_cmd(&cfg)
        }
        Command::Shadow { family, snapshots, observables, delta, save_shadows, load_shadows, common } => {
            let cfg = setup(&common, |c| RunConfig { snapshots, delta, ..with_family(c, &family) })?;
            shadow_cmd(&cfg, observables.as_deref(), save_shadows.as_deref(), load_shadows.as_deref())
        }
        Command::Learn { family, learn, coeffs_out, common } => {
            let cfg = setup(&common, |c| learn.apply(with_family(c, &family)))?;
            learn_cmd(&cfg, coeffs_out.as_deref())
        }
        Command::Lcu { family, a, gamma, common } => {
            let cfg = setup(&common, |c| with_family(c, &family))?;
            lcu_cmd(&cfg, a, gamma)
        }
        Command::Metrics { a, b, common } => {
            let cfg = setup(&common, |c| c)?;
            metrics_cmd(&cfg, &a, &b)
        }
        Command::Bench { family, sweep, trials, learn, common } => {
            let cfg = setup(&common, |c| RunConfig { trials, ..learn.apply(with_family(c, &family)) })?;
            bench_cmd(&cfg, &sweep)
        }
        Command::Verify { only, junit, common } => {
            let cfg = setup(&common, |c| c)?;
            verify_cmd(&cfg, &only, junit.as_deref())
        }
    }
}

fn decompose_cmd(cfg: &RunConfig, matrix: Option<&Path>) -> anyhow::Result<i32> {
    let op = match (matrix, &cfg.family) {
        (Some(path), None) => {
            let f = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let v: Value = serde_json::from_reader(BufReader::new(f))
                .map_err(|e| usage(format!("{}:{}:{}: {e}", path.display(), e.line(), e.column())))?;
            operator_from_json(&v).map_err(|e| usage(format!("{}: {e}", path.display())))?
        }
        (None, Some(_)) => operand(cfg)?.op,
        _ => return Err(usage("pass exactly one of --family and --matrix")),
    };
    let map = decompose(&op).map_err(|e| usage(e.to_string()))?;
    let mut meta: Header = envelope("decompose", cfg);
    let norms = map.norms();
    meta.insert("l1".into(), json!(norms.l1));
    meta.insert("l2".into(), json!(norms.l2));
    let mut w = output(cfg)?;
    write_coefficients(&mut w, &map, &meta)?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn synthesize_cmd(cfg: &RunConfig) -> anyhow::Result<i32> {
    let path = cfg.coeffs.as_deref().expect("set by the caller");
    let (map, _) = read_coefficients_file(path)?;
    let op = synthesize(&map).map_err(|e| usage(e.to_string()))?;
    emit_json(
        "synthesize",
        cfg,
        json!({
            "n": map.n(),
            "terms": map.len(),
            "unitarity_deviation": op.unitarity_deviation(),
            "operator": operator_to_json(&op),
        }),
    )?;
    Ok(EXIT_OK)
}

fn zoo_build(cfg: &RunConfig) -> anyhow::Result<i32> {
    let spec = cfg.family.as_deref().ok_or_else(|| usage("--family is required"))?;
    let fam = parse_family(spec, cfg.n, &cfg.params())?;
    let coeffs = fam.coefficients()?;
    let dense = decompose(&fam.build()?)?;
    let norms = coeffs.norms();
    emit_json(
        "zoo",
        cfg,
        json!({
            "family": fam.name(),
            "n": fam.n(),
            "terms": coeffs.len(),
            "l1": norms.l1,
            "l2": norms.l2,
            "linf": norms.linf,
            "l1_closed_form": fam.l1_closed_form(),
            "max_deviation_from_dense": dense.sub(&coeffs)?.norms().linf,
            "coefficients": coefficient_list(&coeffs),
        }),
    )?;
    Ok(EXIT_OK)
}

fn bell_cmd(cfg: &RunConfig) -> anyhow::Result<i32> {
    let seed = cfg.seed()?;
    let op = operand(cfg)?;
    let shots = cfg.shots.unwrap_or(DEFAULT_SHOTS) as usize;
    let psi = prepare_choi(&op.op, &mut QueryCounter::new()).map_err(|e| usage(e.to_string()))?;
    let mut r = rng::stream(seed, "cli-bell", 0);
    let samples = bell_sample(&psi, &mut r, shots)?;
    let mut header = envelope("bell-sample", cfg);
    header.insert("n".into(), json!(op.op.qubits()));
    header.insert("shots".into(), json!(shots));
    let mut w = output(cfg)?;
    write_shot_log(&mut w, &samples, &header)?;
    w.flush()?;
    Ok(EXIT_OK)
}

fn parse_observables(text: &str, n: usize) -> anyhow::Result<Vec<BellObservable>> {
    let pauli = |s: &str| -> anyhow::Result<PauliString> {
        let p: PauliString = s.parse().map_err(|e| usage(format!("{e}")))?;
        if p.n() != n {
            return Err(usage(format!("observable string {s} is not on {n} qubits")));
        }
        Ok(p)
    };
    text.split(',')
        .filter(|s| !s.trim().is_empty())
        .map(|item| {
            let parts: Vec<&str> = item.trim().split(':').collect();
            match parts.as_slice() {
                ["M", s] => Ok(BellObservable::m(pauli(s)?)),
                ["R", t, s] => Ok(BellObservable::r(pauli(t)?, pauli(s)?)),
                ["I", t, s] => Ok(BellObservable::i(pauli(t)?, pauli(s)?)),
                _ => Err(usage(format!("bad observable \"{item}\"; use M:s, R:t:s or I:t:s"))),
            }
        })
        .collect()
}

fn observable_label(o: &BellObservable) -> String {
    match o.kind {
        ObservableKind::M => format!("M:{}", o.s),
        ObservableKind::R => format!("R:{}:{}", o.t, o.s),
        ObservableKind::I => format!("I:{}:{}", o.t, o.s),
    }
}

fn shadow_cmd(cfg: &RunConfig, observables: Option<&str>, save: Option<&Path>, load: Option<&Path>) -> anyhow::Result<i32> {
    let op = operand(cfg)?;
    let n = op.op.qubits();
    let psi = prepare_choi(&op.op, &mut QueryCounter::new()).map_err(|e| usage(e.to_string()))?;
    let obs = match observables {
        Some(text) => parse_observables(text, n)?,
        None => op.coefficients.support().into_iter().map(BellObservable::m).collect(),
    };
    let snapshots = match load {
        Some(path) => {
            let f = File::open(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            let (snaps, _) = read_snapshots(BufReader::new(f), &path.display().to_string())?;
            if let Some(s) = snaps.iter().find(|s| s.tableau.k() != 2 * n) {
                return Err(usage(format!("snapshot on {} qubits does not match 2n = {}", s.tableau.k(), 2 * n)));
            }
            snaps
        }
        None => {
            let m = cfg.snapshots.unwrap_or(DEFAULT_SNAPSHOTS) as usize;
            collect(&psi, m, cfg.seed()?, "cli-shadow")
        }
    };
    if let Some(path) = save {
        let mut header = envelope("shadow", cfg);
        header.insert("n".into(), json!(n));
        let mut w = BufWriter::new(create(path)?);
        write_snapshots(&mut w, &snapshots, &header)?;
        w.flush()?;
    }
    let est = estimate_from_snapshots(&snapshots, &obs, cfg.delta()).map_err(|e| usage(e.to_string()))?;
    let rows: Vec<Value> = obs
        .iter()
        .zip(&est)
        .map(|(o, e)| {
            let exact = o.expectation(&psi).expect("matching dimensions");
            json!({"observable": observable_label(o), "estimate": e, "exact": exact, "error": (e - exact).abs()})
        })
        .collect();
    emit_json(
        "shadow",
        cfg,
        json!({"n": n, "snapshots": snapshots.len(), "delta": cfg.delta(), "estimates": rows}),
    )?;
    Ok(EXIT_OK)
}

/// Errors of a learned expansion against the true operator.
pub fn evaluation(truth: &DenseOperator, alpha_hat: &PauliMap, target: Option<f64>) -> anyhow::Result<Value> {
    let (l1, phi) = min_phase_l1(alpha_hat, &decompose(truth)?)?;
    let report = distance_report(truth, &synthesize(alpha_hat)?)?;
    Ok(json!({
        "aligned_l1_error": l1,
        "aligned_phase": phi,
        "target_error": target,
        "within_target": target.map(|t| l1 <= t),
        "distances": report_json(&report),
    }))
}

fn learn_report_json(r: &LearnReport, truth: &DenseOperator) -> anyhow::Result<Value> {
    Ok(json!({
        "seed": r.seed,
        "mode": format!("{:?}", r.config.mode),
        "delta": r.config.delta,
        "constants": {"c_m1": r.config.constants.c_m1, "c_m2": r.config.constants.c_m2, "c_acc": r.config.constants.c_acc},
        "theta": r.theta,
        "inner_epsilon": r.inner_epsilon,
        "epsilon2": r.epsilon2,
        "truncation_threshold": r.truncation_threshold,
        "m1": r.m1,
        "m2": r.m2,
        "total_queries": r.total_queries,
        "support": labels(&r.support),
        "anchor": r.anchor.label(),
        "anchor_mag": r.anchor_mag,
        "coefficients": coefficient_list(&r.alpha_hat),
        "evaluation": evaluation(truth, &r.alpha_hat, r.config.target_error())?,
    }))
}

fn learn_cmd(cfg: &RunConfig, coeffs_out: Option<&Path>) -> anyhow::Result<i32> {
    let seed = cfg.seed()?;
    let op = operand(cfg)?;
    let lc = cfg.learn_config()?;
    lc.validate().map_err(|e| usage(e.to_string()))?;
    let mut oracle = UnitaryOracle::new(&op.op).map_err(|e| usage(e.to_string()))?;
    let report = learn(&mut oracle, &lc, seed).map_err(learner_error)?;
    if let Some(path) = coeffs_out {
        let mut meta = envelope("learn", cfg);
        meta.insert("total_queries".into(), json!(report.total_queries));
        let mut w = BufWriter::new(create(path)?);
        write_coefficients(&mut w, &report.alpha_hat, &meta)?;
        w.flush()?;
    }
    emit_json("learn", cfg, learn_report_json(&report, &op.op)?)?;
    Ok(EXIT_OK)
}

fn lcu_cmd(cfg: &RunConfig, a: Option<f64>, gamma: Option<f64>) -> anyhow::Result<i32> {
    let op = operand(cfg)?;
    let mut spec = LcuSpec::from_learned(op.coefficients.clone()).map_err(|e| usage(e.to_string()))?;
    if let Some(a) = a {
        spec = spec.with_subnormalization(a).map_err(|e| usage(e.to_string()))?;
    }
    if let Some(g) = gamma {
        spec = spec.with_gamma(g);
    }
    let target = synthesize(&spec.coeffs)?;
    let block = effective_block(&spec).map_err(|e| usage(e.to_string()))?;
    let block_error = block.max_abs_diff(&target.scale(num_complex::Complex64::new(1.0 / spec.a, 0.0)));
    let amp = amplified_block(&spec).map_err(|e| usage(e.to_string()))?;
    let gates = gate_estimate(&spec);
    let (rounds, padded) = exact_schedule(spec.a);
    let amplified = if op.op.is_unitary(1e-9) {
        Some(report_json(&distance_report(&op.op, &amp.block)?))
    } else {
        None
    };
    emit_json(
        "lcu",
        cfg,
        json!({
            "n": spec.n(),
            "a": spec.a,
            "ancillas": spec.m,
            "slots": spec.slot_count(),
            "gamma": spec.gamma,
            "success_probability": success_probability(&spec)?,
            "block_error": block_error,
            "schedule": {"rounds": rounds, "padded_a": padded},
            "amplified": {"rounds": amp.rounds, "a": amp.a, "distance_to_target": amplified},
            "gate_estimate": {"prepare": gates.prepare, "select": gates.select},
        }),
    )?;
    Ok(EXIT_OK)
}

fn metrics_cmd(cfg: &RunConfig, a: &str, b: &str) -> anyhow::Result<i32> {
    let params = cfg.params();
    let u = resolve_operand(a, cfg.n, &params)?;
    let v = resolve_operand(b, cfg.n, &params)?;
    let report = distance_report(&u.op, &v.op).map_err(|e| usage(e.to_string()))?;
    emit_json("metrics", cfg, json!({"a": u.label, "b": v.label, "report": report_json(&report)}))?;
    Ok(EXIT_OK)
}

/// One grid point of a bench sweep.
#[derive(Clone, Debug)]
struct BenchPoint {
    n: Option<usize>,
    s: Option<usize>,
    eps: f64,
    delta: Option<f64>,
}

fn parse_sweep(items: &[String], base: &RunConfig) -> anyhow::Result<Vec<BenchPoint>> {
    let mut points = vec![BenchPoint { n: base.n, s: base.s, eps: base.eps(), delta: base.delta }];
    for item in items {
        let (key, values) = item.split_once('=').ok_or_else(|| usage(format!("bad sweep \"{item}\"")))?;
        let values: Vec<&str> = values.split(',').map(str::trim).filter(|v| !v.is_empty()).collect();
        let mut next = Vec::new();
        for p in &points {
            for v in &values {
                let bad = || usage(format!("bad {key} value \"{v}\""));
                let mut q = p.clone();
                match key.trim() {
                    "eps" => q.eps = v.parse().map_err(|_| bad())?,
                    "delta" => q.delta = Some(v.parse().map_err(|_| bad())?),
                    "s" => q.s = Some(v.parse().map_err(|_| bad())?),
                    "n" => q.n = Some(v.parse().map_err(|_| bad())?),
                    other => return Err(usage(format!("cannot sweep \"{other}\""))),
                }
                next.push(q);
            }
        }
        points = next;
    }
    Ok(points)
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map(|v| format!("{v:.6e}")).unwrap_or_default()
}

/// One CSV row; learning is skipped (error columns empty) when the plan
/// exceeds the query budget.
fn bench_row(cfg: &RunConfig, point: &BenchPoint, seed: u64) -> anyhow::Result<String> {
    let start = Instant::now();
    let pcfg = RunConfig { n: point.n, s: point.s, eps: Some(point.eps), delta: point.delta.or(cfg.delta), ..cfg.clone() };
    pcfg.validate(&pcfg, None)?;
    let op = operand(&pcfg)?;
    let lc: LearnConfig = pcfg.learn_config()?;
    lc.validate().map_err(|e| usage(e.to_string()))?;
    let budget = lc.max_queries.unwrap_or(u64::MAX);
    let mut probe = UnitaryOracle::new(&op.op)?;
    let first = plan(&lc, point.s.unwrap_or(1));
    let support = if first.m1 <= budget {
        find_support(&mut probe, lc.theta(), lc.delta, lc.constants.c_m1, seed)?.len()
    } else {
        point.s.unwrap_or(1)
    };
    let planned = plan(&lc, support);
    let (err, restricted, upper) = if planned.total <= budget {
        let mut oracle = UnitaryOracle::new(&op.op)?;
        let report = learn(&mut oracle, &lc, seed).map_err(learner_error)?;
        debug_assert_eq!(report.total_queries, planned.total);
        let (l1, _) = min_phase_l1(&report.alpha_hat, &decompose(&op.op)?)?;
        let d = distance_report(&op.op, &synthesize(&report.alpha_hat)?)?;
        (Some(l1), Some(d.d_restricted_mm), Some(d.d_diamond_upper))
    } else {
        (None, None, None)
    };
    Ok(format!(
        "{},{},{},{},{},{},{},{},{},{:.3}",
        op.op.qubits(),
        point.s.map(|s| s.to_string()).unwrap_or_default(),
        point.eps,
        planned.m1,
        planned.m2,
        planned.total,
        fmt_opt(err),
        fmt_opt(restricted),
        fmt_opt(upper),
        start.elapsed().as_secs_f64(),
    ))
}

fn bench_cmd(cfg: &RunConfig, sweep: &[String]) -> anyhow::Result<i32> {
    let seed = cfg.seed()?;
    let points = parse_sweep(sweep, cfg)?;
    let trials = cfg.trials.unwrap_or(1);
    let jobs: Vec<(usize, u64)> = (0..points.len()).flat_map(|p| (0..trials).map(move |t| (p, t))).collect();
    let rows: Vec<String> = in_pool(cfg, || {
        jobs.par_iter()
            .map(|(p, t)| bench_row(cfg, &points[*p], rng::derive_seed(seed, "bench", (*p as u64) << 32 | t)))
            .collect::<anyhow::Result<Vec<_>>>()
    })??;
    let mut w = output(cfg)?;
    writeln!(w, "{BENCH_HEADER}")?;
    for r in rows {
        writeln!(w, "{r}")?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn xml_escape(s: &str) -> String {
    s.replace('&', "&amp;").replace('<', "&lt;").replace('>', "&gt;").replace('"', "&quot;")
}

pub fn junit_xml(results: &[crate::criteria::CriterionResult]) -> String {
    let failures = results.iter().filter(|r| !r.passed).count();
    let total: f64 = results.iter().map(|r| r.elapsed_secs).sum();
    let mut x = format!(
        "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n<testsuite name=\"paulilearn-acceptance\" tests=\"{}\" failures=\"{failures}\" time=\"{total:.3}\">\n",
        results.len()
    );
    for r in results {
        x.push_str(&format!(
            "  <testcase classname=\"acceptance\" name=\"criterion-{:02}-{}\" time=\"{:.3}\"",
            r.id, r.name, r.elapsed_secs
        ));
        if r.passed {
            x.push_str(" />\n");
        } else {
            let kind = if r.infeasible { "infeasible" } else { "failed" };
            x.push_str(&format!(
                ">\n    <failure type=\"{kind}\" message=\"{}\" />\n  </testcase>\n",
                xml_escape(&r.detail)
            ));
        }
    }
    x.push_str("</testsuite>\n");
    x
}

fn verify_cmd(cfg: &RunConfig, only: &[u32], junit: Option<&Path>) -> anyhow::Result<i32> {
    let seed = cfg.seed()?;
    let known: Vec<u32> = crate::criteria::all().iter().map(|c| c.id).collect();
    if let Some(bad) = only.iter().find(|i| !known.contains(i)) {
        return Err(usage(format!("no criterion {bad}")));
    }
    let results = in_pool(cfg, || crate::criteria::run_selected(seed, only))?;
    for r in &results {
        eprintln!("{}", r.line());
    }
    if let Some(path) = junit {
        std::fs::write(path, junit_xml(&results)).map_err(|e| usage(format!("{}: {e}", path.display())))?;
    }
    let passed = results.iter().all(|r| r.passed);
    emit_json("verify", cfg, json!({"seed": seed, "passed": passed, "criteria": results}))?;
    Ok(if passed { EXIT_OK } else { EXIT_PROPERTY })
}
