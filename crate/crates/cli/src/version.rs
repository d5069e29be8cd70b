/// Git-describe-style version, fixed at build time.
pub const VERSION: &str = env!("PAULILEARN_VERSION");
