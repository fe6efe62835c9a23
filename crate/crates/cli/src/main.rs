use std::process::ExitCode;

use clap::Parser;

use bsppcc_cli::{run, RunOptions};

fn main() -> ExitCode {
    let opts = RunOptions::parse();
    match run(opts) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
