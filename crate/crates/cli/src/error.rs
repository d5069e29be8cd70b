//! Error kinds that map to process exit codes.

/// Bad flags, config or input files. Exit code 1.
#[derive(Debug, thiserror::Error)]
#[error("{0}")]
pub struct UsageError(pub String);

/// The learner stopped before producing coefficients. Exit code 2.
#[derive(Debug, thiserror::Error)]
#[error("learner aborted: {0}")]
pub struct LearnerAbort(pub String);

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_ABORT: i32 = 2;
pub const EXIT_PROPERTY: i32 = 3;

/// Exit code for an error returned by a command.
pub fn exit_code(err: &anyhow::Error) -> i32 {
    if err.downcast_ref::<LearnerAbort>().is_some() {
        EXIT_ABORT
    } else {
        EXIT_USAGE
    }
}
