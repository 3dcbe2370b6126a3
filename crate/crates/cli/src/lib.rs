//! Command-line front end for `selfext-core`.
//!
//! Exit codes: 0 success, 1 a verification failed, 2 bad input or usage.

pub mod args;
pub mod commands;
pub mod config;
pub mod output;
pub mod report;
pub mod suite;

use std::ffi::OsString;
use std::io::Write;

use clap::Parser;

pub use report::{Check, Status, VerificationReport};
pub use suite::{run_suite, SuiteSettings};

/// Environment variable holding the `env_logger` filter, e.g. `debug`.
pub const LOG_ENV: &str = "SELFEXT_LOG";

#[derive(Debug)]
pub enum CliError {
    /// Malformed input, unreadable files, exceeded caps. Exit code 2.
    Input(String),
    /// A computation or verification failed. Exit code 1.
    Failed(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Failed(_) => 1,
        }
    }
}

impl std::fmt::Display for CliError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            CliError::Input(m) | CliError::Failed(m) => f.write_str(m),
        }
    }
}

impl From<selfext_core::Error> for CliError {
    fn from(e: selfext_core::Error) -> Self {
        match e {
            selfext_core::Error::Input(_) | selfext_core::Error::Resource(_) => CliError::Input(e.to_string()),
            _ => CliError::Failed(e.to_string()),
        }
    }
}

/// What a command produced: a pretty-printed JSON document and its human
/// rendering.
pub struct Output {
    pub json: String,
    pub human: String,
    /// Set when the command ran but what it checked does not hold.
    pub failed: bool,
}

fn init_logging() {
    let env = env_logger::Env::new().filter_or(LOG_ENV, "warn");
    let _ = env_logger::Builder::from_env(env).format_timestamp(None).try_init();
}

/// Parses `argv`, runs the command and returns the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    init_logging();
    let cli = match args::Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let out_path = cli.out.clone();
    match commands::dispatch(&cli) {
        Ok(out) => {
            if out_path.as_deref() == Some(std::path::Path::new("-")) {
                let _ = writeln!(std::io::stdout(), "{}", out.json);
            } else if let Some(path) = out_path {
                let text = format!("{}\n", out.json);
                if let Err(e) = std::fs::write(&path, text) {
                    eprintln!("error: cannot write {}: {e}", path.display());
                    return 2;
                }
            } else {
                let _ = std::io::stdout().write_all(out.human.as_bytes());
            }
            if out.failed {
                1
            } else {
                0
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            e.exit_code()
        }
    }
}
