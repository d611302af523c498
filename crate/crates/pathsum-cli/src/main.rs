use std::process::ExitCode;

mod cli;
mod config;
mod runners;

pub(crate) use cli::CliError;

fn main() -> ExitCode {
    cli::main()
}
