//! Command-line definitions.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};

use crate::config::RunConfig;

#[derive(Debug, Parser)]
#[command(name = "paulilearn", version = crate::version::VERSION, about = "Learn nearly Pauli-sparse unitaries from Choi-state queries")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

/// Flags shared by every subcommand.
#[derive(Args, Clone, Debug, Default)]
pub struct Common {
    /// JSON config file; explicit flags take precedence.
    #[arg(long)]
    pub config: Option<PathBuf>,
    #[arg(long)]
    pub seed: Option<u64>,
    /// Qubit count for families that need one.
    #[arg(long)]
    pub n: Option<usize>,
    /// Family parameter, repeatable.
    #[arg(long = "param", value_name = "KEY=VALUE")]
    pub params: Vec<String>,
    /// Output file (stdout when absent).
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Worker threads for trials.
    #[arg(long)]
    pub workers: Option<usize>,
}

/// Learner parameters.
#[derive(Args, Clone, Debug, Default)]
pub struct LearnArgs {
    /// `sparse`, `corollary`, `l1` or `estimate`.
    #[arg(long)]
    pub mode: Option<String>,
    #[arg(long)]
    pub s: Option<usize>,
    #[arg(long)]
    pub eps: Option<f64>,
    #[arg(long)]
    pub delta: Option<f64>,
    #[arg(long)]
    pub l1: Option<f64>,
    #[arg(long)]
    pub theta: Option<f64>,
    #[arg(long)]
    pub c_m1: Option<f64>,
    #[arg(long)]
    pub c_m2: Option<f64>,
    #[arg(long)]
    pub c_acc: Option<f64>,
    #[arg(long)]
    pub max_queries: Option<u64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Pauli coefficients of a unitary as a coefficient file.
    Decompose {
        /// Family spec, `file:coeffs.jsonl`, or omit and pass `--matrix`.
        #[arg(long)]
        family: Option<String>,
        /// Operator JSON `{"n", "rows"}`.
        #[arg(long)]
        matrix: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Dense operator from a coefficient file.
    Synthesize {
        #[arg(long)]
        coeffs: PathBuf,
        #[command(flatten)]
        common: Common,
    },
    /// List or build example families.
    Zoo {
        #[command(subcommand)]
        action: ZooAction,
    },
    /// Bell-basis samples of a Choi state as a shot log.
    BellSample {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        shots: Option<u64>,
        #[command(flatten)]
        common: Common,
    },
    /// Classical-shadow estimates of Bell observables.
    Shadow {
        #[arg(long)]
        family: Option<String>,
        #[arg(long)]
        snapshots: Option<u64>,
        /// Comma-separated `M:s`, `R:t:s`, `I:t:s`; defaults to `M` on the exact support.
        #[arg(long)]
        observables: Option<String>,
        #[arg(long)]
        delta: Option<f64>,
        #[arg(long)]
        save_shadows: Option<PathBuf>,
        #[arg(long)]
        load_shadows: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Learn a unitary and report the estimate and its errors.
    Learn {
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        learn: LearnArgs,
        /// Write the learned coefficients here.
        #[arg(long)]
        coeffs_out: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
    /// Build an LCU block encoding and amplify it.
    Lcu {
        /// Family spec or `file:coeffs.jsonl`.
        #[arg(long)]
        family: Option<String>,
        /// Subnormalization (defaults to the l1 norm).
        #[arg(long)]
        a: Option<f64>,
        /// Known l1 distance to a unitary.
        #[arg(long)]
        gamma: Option<f64>,
        #[command(flatten)]
        common: Common,
    },
    /// Distances between two operators.
    Metrics {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[command(flatten)]
        common: Common,
    },
    /// Sweep learner parameters and write a CSV.
    Bench {
        #[arg(long)]
        family: Option<String>,
        /// `key=v1,v2,..` with key in eps, s, n, delta; repeatable.
        #[arg(long)]
        sweep: Vec<String>,
        #[arg(long)]
        trials: Option<u64>,
        #[command(flatten)]
        learn: LearnArgs,
        #[command(flatten)]
        common: Common,
    },
    /// Run the acceptance criteria.
    Verify {
        /// Criterion ids to run, e.g. `1,3,10`.
        #[arg(long, value_delimiter = ',')]
        only: Vec<u32>,
        /// JUnit XML results file.
        #[arg(long)]
        junit: Option<PathBuf>,
        #[command(flatten)]
        common: Common,
    },
}

#[derive(Debug, Subcommand)]
pub enum ZooAction {
    /// Print the family catalog.
    List,
    /// Exact coefficients and norms of one member.
    Build {
        #[arg(long)]
        family: Option<String>,
        #[command(flatten)]
        common: Common,
    },
}

impl Common {
    pub fn flags(&self) -> anyhow::Result<RunConfig> {
        let params = crate::family::parse_params(&self.params)?;
        Ok(RunConfig {
            seed: self.seed,
            n: self.n,
            params: (!params.is_empty()).then_some(params),
            out: self.out.clone(),
            workers: self.workers,
            ..Default::default()
        })
    }
}

impl LearnArgs {
    /// Overlay the learner flags on `cfg`.
    pub fn apply(&self, mut cfg: RunConfig) -> RunConfig {
        cfg.mode = self.mode.clone();
        cfg.s = self.s;
        cfg.eps = self.eps;
        cfg.delta = self.delta;
        cfg.l1 = self.l1;
        cfg.theta = self.theta;
        cfg.c_m1 = self.c_m1;
        cfg.c_m2 = self.c_m2;
        cfg.c_acc = self.c_acc;
        cfg.max_queries = self.max_queries;
        cfg
    }
}
