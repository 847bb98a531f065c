use std::process::ExitCode;

use clap::Parser;

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = abscomp_cli::Cli::parse();
    ExitCode::from(abscomp_cli::run(&cli))
}
