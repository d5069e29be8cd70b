//! Run configuration: flags override a JSON config file, which overrides defaults.

use std::collections::BTreeMap;
use std::path::{Path, PathBuf};

use paulilearn::learner::{Constants, LearnConfig, Mode, DEFAULT_MAX_QUERIES};
use serde::{Deserialize, Serialize};

use crate::error::UsageError;

pub const DEFAULT_DELTA: f64 = 0.1;
pub const DEFAULT_EPS: f64 = 0.1;
pub const DEFAULT_SHOTS: u64 = 10_000;
pub const DEFAULT_SNAPSHOTS: u64 = 10_000;
pub const DEFAULT_TRIALS: u64 = 20;

#[derive(Clone, Debug, Default, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub n: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub family: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub params: Option<BTreeMap<String, String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub coeffs: Option<PathBuf>,
    /// `sparse`, `corollary`, `l1` or `estimate`.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub mode: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub s: Option<usize>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eps: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub delta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub l1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_m1: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_m2: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub c_acc: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub max_queries: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub out: Option<PathBuf>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub shots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub snapshots: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub trials: Option<u64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub workers: Option<usize>,
}

macro_rules! merge_fields {
    ($dst:ident, $src:ident, $($f:ident),*) => {
        $( if $dst.$f.is_none() { $dst.$f = $src.$f.clone(); } )*
    };
}

impl RunConfig {
    /// Fill every unset field from `lower`.
    pub fn merged_over(mut self, lower: &RunConfig) -> RunConfig {
        merge_fields!(
            self, lower, seed, n, family, params, coeffs, mode, s, eps, delta, l1, theta, c_m1, c_m2, c_acc,
            max_queries, out, shots, snapshots, trials, workers
        );
        self
    }

    pub fn seed(&self) -> anyhow::Result<u64> {
        self.seed
            .ok_or_else(|| UsageError("--seed is required (no clock-derived default)".into()).into())
    }

    pub fn delta(&self) -> f64 {
        self.delta.unwrap_or(DEFAULT_DELTA)
    }

    pub fn eps(&self) -> f64 {
        self.eps.unwrap_or(DEFAULT_EPS)
    }

    pub fn params(&self) -> BTreeMap<String, String> {
        self.params.clone().unwrap_or_default()
    }

    pub fn constants(&self) -> Constants {
        let d = Constants::default();
        Constants {
            c_m1: self.c_m1.unwrap_or(d.c_m1),
            c_m2: self.c_m2.unwrap_or(d.c_m2),
            c_acc: self.c_acc.unwrap_or(d.c_acc),
        }
    }

    /// Learner configuration; the mode defaults to `sparse` when `s` is set
    /// and to `l1` when `l1` is set.
    pub fn learn_config(&self) -> anyhow::Result<LearnConfig> {
        let eps = self.eps();
        let mode = match self.mode.as_deref() {
            Some(m) => m.to_string(),
            None if self.l1.is_some() => "l1".into(),
            None if self.theta.is_some() && self.s.is_none() => "estimate".into(),
            None => "sparse".into(),
        };
        let need_s = || self.s.ok_or_else(|| UsageError(format!("mode {mode} needs --s")));
        let mode = match mode.as_str() {
            "sparse" => Mode::NearlySparse { s: need_s()?, epsilon: eps },
            "corollary" => Mode::Corollary { s: need_s()?, epsilon: eps },
            "l1" => Mode::L1Bounded {
                l1: self.l1.ok_or_else(|| UsageError("mode l1 needs --l1".into()))?,
                epsilon: eps,
            },
            "estimate" => Mode::Estimate {
                theta: self.theta.ok_or_else(|| UsageError("mode estimate needs --theta".into()))?,
                epsilon: eps,
            },
            other => return Err(UsageError(format!("unknown mode \"{other}\"")).into()),
        };
        let cfg = LearnConfig::new(mode, self.delta())
            .with_constants(self.constants())
            .with_max_queries(Some(self.max_queries.unwrap_or(DEFAULT_MAX_QUERIES)));
        Ok(cfg)
    }

    /// Range checks. Errors name the config-file line when the value came from there.
    pub fn validate(&self, flags: &RunConfig, file: Option<&ConfigFile>) -> anyhow::Result<()> {
        let mut problems: Vec<(&str, String)> = Vec::new();
        if let Some(n) = self.n {
            let cap = paulilearn::dense_cap();
            if n == 0 || 2 * n > cap {
                problems.push(("n", format!("n = {n} must be in 1..={} (dense cap {cap})", cap / 2)));
            }
        }
        let open = |x: f64| x > 0.0 && x < 1.0;
        if let Some(d) = self.delta {
            if !open(d) {
                problems.push(("delta", format!("delta = {d} must lie in (0, 1)")));
            }
        }
        if let Some(e) = self.eps {
            if !open(e) {
                problems.push(("eps", format!("eps = {e} must lie in (0, 1)")));
            }
        }
        if let Some(t) = self.theta {
            if !(t > 0.0 && t <= 1.0) {
                problems.push(("theta", format!("theta = {t} must lie in (0, 1]")));
            }
        }
        if let Some(l) = self.l1 {
            if l < 1.0 {
                problems.push(("l1", format!("l1 = {l} must be at least 1")));
            }
        }
        if self.s == Some(0) {
            problems.push(("s", "s must be positive".into()));
        }
        if self.workers == Some(0) {
            problems.push(("workers", "workers must be positive".into()));
        }
        if let Some(out) = &self.out {
            if let Some(dir) = out.parent().filter(|d| !d.as_os_str().is_empty()) {
                if !dir.is_dir() {
                    problems.push(("out", format!("output directory {} does not exist", dir.display())));
                }
            }
        }
        let Some((field, msg)) = problems.into_iter().next() else {
            return Ok(());
        };
        let from_file = flag_is_unset(flags, field);
        match file.filter(|_| from_file).and_then(|f| f.line_of(field).map(|l| (f, l))) {
            Some((f, line)) => Err(UsageError(format!("{}:{line}: {msg}", f.path.display())).into()),
            None => Err(UsageError(msg).into()),
        }
    }
}

fn flag_is_unset(flags: &RunConfig, field: &str) -> bool {
    match field {
        "n" => flags.n.is_none(),
        "delta" => flags.delta.is_none(),
        "eps" => flags.eps.is_none(),
        "theta" => flags.theta.is_none(),
        "l1" => flags.l1.is_none(),
        "s" => flags.s.is_none(),
        "workers" => flags.workers.is_none(),
        "out" => flags.out.is_none(),
        _ => true,
    }
}

/// A parsed config file with its text, for line-precise messages.
pub struct ConfigFile {
    pub path: PathBuf,
    pub text: String,
    pub config: RunConfig,
}

impl ConfigFile {
    pub fn load(path: &Path) -> anyhow::Result<Self> {
        let text = std::fs::read_to_string(path)
            .map_err(|e| UsageError(format!("{}: {e}", path.display())))?;
        let config = serde_json::from_str(&text).map_err(|e| {
            UsageError(format!("{}:{}:{}: {}", path.display(), e.line(), e.column(), e))
        })?;
        Ok(Self {
            path: path.to_path_buf(),
            text,
            config,
        })
    }

    /// 1-based line of the first `"key"` occurrence.
    pub fn line_of(&self, key: &str) -> Option<usize> {
        let quoted = format!("\"{key}\"");
        self.text.lines().position(|l| l.contains(&quoted)).map(|i| i + 1)
    }
}

/// Merge flags over an optional config file and validate.
pub fn resolve(flags: RunConfig, config_path: Option<&Path>) -> anyhow::Result<RunConfig> {
    let file = config_path.map(ConfigFile::load).transpose()?;
    let merged = match &file {
        Some(f) => flags.clone().merged_over(&f.config),
        None => flags.clone(),
    };
    merged.validate(&flags, file.as_ref())?;
    Ok(merged)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flags_override_file() {
        let flags = RunConfig { seed: Some(1), ..Default::default() };
        let file = RunConfig { seed: Some(2), eps: Some(0.2), ..Default::default() };
        let m = flags.merged_over(&file);
        assert_eq!(m.seed, Some(1));
        assert_eq!(m.eps, Some(0.2));
        assert_eq!(RunConfig::default().delta(), DEFAULT_DELTA);
    }

    #[test]
    fn file_errors_name_the_line() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("c.json");
        std::fs::write(&path, "{\n  \"seed\": 3,\n  \"delta\": 1.5\n}\n").unwrap();
        let err = resolve(RunConfig::default(), Some(&path)).unwrap_err().to_string();
        assert!(err.ends_with("c.json:3: delta = 1.5 must lie in (0, 1)"), "{err}");
        std::fs::write(&path, "{\n  \"seed\": 3,\n  \"bogus\": 1\n}\n").unwrap();
        let err = resolve(RunConfig::default(), Some(&path)).unwrap_err().to_string();
        assert!(err.contains("c.json:3:"), "{err}");
    }
}
