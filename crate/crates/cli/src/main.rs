use std::process::ExitCode;

use clap::Parser;
use kapitza_dirac_cli::{run, Cli};

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("kdsim: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
