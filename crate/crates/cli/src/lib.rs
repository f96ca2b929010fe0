//! Command-line front end: argument parsing, file formats and report emission.

pub mod args;
pub mod commands;
pub mod error;
pub mod input;
pub mod output;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
use error::{EXIT_CHECK_FAILED, EXIT_INPUT, EXIT_PASS};

/// Runs the tool on `argv` and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_INPUT } else { EXIT_PASS };
        }
    };
    let result = match &cli.command {
        Command::Analyze(a) => commands::analyze(a),
        Command::Transform(a) => commands::transform(a),
        Command::Probe(a) => commands::probe(a),
        Command::Metric(a) => commands::metric(a),
        Command::Mesh(a) => commands::mesh(a),
    };
    match result {
        Ok(o) => {
            println!("{}", o.summary);
            if o.passed {
                EXIT_PASS
            } else {
                EXIT_CHECK_FAILED
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
