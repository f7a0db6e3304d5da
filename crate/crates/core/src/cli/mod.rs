//! The `twospin` command-line front end.
//!
//! Results go to `--out` or stdout as CSV or JSON, rendered completely before
//! anything is written. Failures print a single JSON object on stderr and map
//! to exit codes 2 (usage or parameters), 3 (I/O) and 4 (non-finite numbers).

pub mod args;
pub mod commands;
pub mod config;
pub mod table;

use std::ffi::OsString;
use std::fs;
use std::io::Write;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;

use crate::error::Error;
use args::{Cli, Command};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 2;
pub const EXIT_IO: i32 = 3;
pub const EXIT_NUMERIC: i32 = 4;

#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Param(Error),
    Io(String),
    Numeric(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Param(_) => EXIT_USAGE,
            CliError::Io(_) => EXIT_IO,
            CliError::Numeric(_) => EXIT_NUMERIC,
        }
    }

    fn kind(&self) -> &'static str {
        match self {
            CliError::Usage(_) => "usage",
            CliError::Param(_) => "parameter",
            CliError::Io(_) => "io",
            CliError::Numeric(_) => "numeric",
        }
    }

    fn message(&self) -> String {
        match self {
            CliError::Usage(m) | CliError::Io(m) | CliError::Numeric(m) => m.clone(),
            CliError::Param(e) => e.to_string(),
        }
    }

    fn at_point(e: Error, point: &str) -> CliError {
        match CliError::from(e) {
            CliError::Param(e) => CliError::Usage(format!("{e} at {point}")),
            CliError::Numeric(m) => CliError::Numeric(format!("{m} at {point}")),
            other => other,
        }
    }

    fn to_json(&self) -> String {
        json!({
            "error": {
                "kind": self.kind(),
                "message": self.message(),
                "exit_code": self.exit_code(),
            }
        })
        .to_string()
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            // inputs are validated up front, so a non-finite value here arose
            // inside a computation
            Error::NonFinite(what) => CliError::Numeric(format!("non-finite value in {what}")),
            other => CliError::Param(other),
        }
    }
}

pub fn run() -> i32 {
    run_with(std::env::args_os())
}

pub fn run_with<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = e.print();
                    EXIT_OK
                }
                _ => report(&CliError::Usage(e.to_string().trim_end().to_string())),
            };
        }
    };
    match execute(&cli) {
        Ok(()) => EXIT_OK,
        Err(e) => report(&e),
    }
}

fn report(e: &CliError) -> i32 {
    eprintln!("{}", e.to_json());
    e.exit_code()
}

fn execute(cli: &Cli) -> Result<(), CliError> {
    let common = cli.command.common();
    let settings = config::resolve(common)?;
    let p = settings.params;
    p.validate().map_err(CliError::Param)?;

    let table = match &cli.command {
        Command::Spectrum { .. } => commands::spectrum(&p)?,
        Command::Phases { mode, .. } => commands::phases(&p, *mode)?,
        Command::Evolve { initial, time, .. } => commands::evolve_cmd(&p, initial, *time, settings.steps)?,
        Command::Twocycle {
            scheme, omega1_sweep, ..
        } => commands::twocycle(&p, *scheme, omega1_sweep.as_deref(), settings.steps)?,
        Command::Sweep { axes, quantity, .. } => commands::sweep(&p, axes, *quantity)?,
    };
    table.check_finite()?;
    let text = table.render(settings.format);

    match &common.out {
        Some(path) => fs::write(path, text)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut out = std::io::stdout().lock();
            out.write_all(text.as_bytes())
                .and_then(|_| out.flush())
                .map_err(|e| CliError::Io(format!("cannot write to stdout: {e}")))
        }
    }
}
