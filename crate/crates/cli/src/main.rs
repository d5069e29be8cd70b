use clap::Parser;
use paulilearn_cli::cli::Cli;
use paulilearn_cli::error::{exit_code, EXIT_OK, EXIT_USAGE};

fn main() {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let _ = e.print();
            std::process::exit(code);
        }
    };
    let result = paulilearn_cli::apply_dense_cap_env().and_then(|_| paulilearn_cli::commands::run(cli.command));
    match result {
        Ok(code) => std::process::exit(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            std::process::exit(exit_code(&e));
        }
    }
}
