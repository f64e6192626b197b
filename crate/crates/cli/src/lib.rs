//! `qptf` command-line front end.
//!
//! Exit codes: 0 success, 1 failed detection or failed checks (and runtime
//! errors such as I/O), 2 usage errors.

pub mod args;
pub mod io;
mod run;

use std::ffi::OsString;

use clap::Parser;

use args::{Cli, Command};
pub use run::{detect_row, DETECT_HEADER, SWEEP_HEADER};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Outcome {
    Success,
    DetectionFailed,
    ChecksFailed,
}

/// An argument combination rejected before computing anything.
#[derive(Debug)]
pub struct UsageError(pub String);

impl std::fmt::Display for UsageError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(&self.0)
    }
}

impl std::error::Error for UsageError {}

fn is_usage(err: &anyhow::Error) -> bool {
    use qptf_core::Error as E;
    err.downcast_ref::<UsageError>().is_some()
        || matches!(
            err.downcast_ref::<E>(),
            Some(E::InvalidArgument(_) | E::MissingParams(_) | E::UnexpectedParams(_) | E::GridTooSmall { .. } | E::Regime(_))
        )
}

pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    match &cli.command {
        Command::Generate(a) => run::generate(a),
        Command::Transform(a) => run::transform(a),
        Command::Detect(a) => run::detect(a),
        Command::Verify(a) => run::verify(a),
        Command::Sweep(a) => run::sweep(a),
        Command::Figure(a) => run::figure(a),
    }
}

/// Parses `argv` (program name first), runs it and returns the exit code.
pub fn dispatch<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    match run(&cli) {
        Ok(Outcome::Success) => 0,
        Ok(Outcome::DetectionFailed) => {
            eprintln!("qptf: no ridge detected");
            1
        }
        Ok(Outcome::ChecksFailed) => {
            eprintln!("qptf: some checks exceeded their tolerance");
            1
        }
        Err(e) => {
            eprintln!("qptf: {e:#}");
            if is_usage(&e) {
                2
            } else {
                1
            }
        }
    }
}
