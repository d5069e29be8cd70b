//! File formats, command-line front end and verification harness for `paulilearn`.

pub mod cli;
pub mod commands;
pub mod config;
pub mod criteria;
pub mod error;
pub mod family;
pub mod formats;
pub mod version;

/// Environment variable overriding the dense-state qubit cap.
pub const DENSE_CAP_VAR: &str = "PAULILEARN_DENSE_CAP";

/// Apply `PAULILEARN_DENSE_CAP` when set.
pub fn apply_dense_cap_env() -> anyhow::Result<()> {
    if let Ok(v) = std::env::var(DENSE_CAP_VAR) {
        let cap: usize = v
            .trim()
            .parse()
            .map_err(|_| error::UsageError(format!("{DENSE_CAP_VAR}={v} is not a qubit count")))?;
        paulilearn::set_dense_cap(cap);
    }
    Ok(())
}
