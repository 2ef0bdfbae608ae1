//! Driver for the `pt-harmonics` verification suites.
//!
//! [`run`] executes one suite and returns a [`Report`]; [`execute`] also
//! emits it and maps the outcome to the process exit code:
//!
//! | code | meaning |
//! |------|---------|
//! | 0 | every check passed |
//! | 1 | a check failed, or an internal or I/O error |
//! | 2 | invalid command line or environment |
//! | 3 | the gauge is not PT-compatible but the suite needs it to be |

pub mod config;
pub mod report;
pub mod suites;

use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use pt_harmonics::Complex64;

pub use config::{OutputFormat, ResolvedConfig, RunConfig, Suite};
pub use report::{emit, parse_csv, Record, Relation, Report};

pub const EXIT_PASS: u8 = 0;
pub const EXIT_CHECK_FAILED: u8 = 1;
pub const EXIT_USAGE: u8 = 2;
pub const EXIT_INCOMPATIBLE: u8 = 3;

pub const THREADS_ENV: &str = "PT_HARMONICS_THREADS";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(
        "gauge {gauge} is not PT-compatible: max deviation {max_deviation:e} around λ = {lambda}"
    )]
    Incompatible {
        gauge: String,
        max_deviation: f64,
        lambda: Complex64,
    },
    #[error(transparent)]
    Core(#[from] pt_harmonics::Error),
    #[error("{THREADS_ENV}: {0}")]
    Threads(String),
    #[error("writing {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Incompatible { .. } => EXIT_INCOMPATIBLE,
            CliError::Threads(_) => EXIT_USAGE,
            CliError::Core(_) | CliError::Io { .. } => EXIT_CHECK_FAILED,
        }
    }
}

/// Runs the configured suite. Warnings about the configuration are added to
/// the report's notes.
pub fn run(config: &RunConfig) -> Result<Report, CliError> {
    let (resolved, warnings) = config.resolve();
    let mut report = suites::run_suite(&resolved)?;
    for w in warnings {
        report.note(format!("warning: {w}"));
    }
    Ok(report)
}

/// Sizes rayon's global pool from `PT_HARMONICS_THREADS` when it is set.
pub fn configure_threads() -> Result<(), CliError> {
    let Ok(value) = std::env::var(THREADS_ENV) else {
        return Ok(());
    };
    let n: usize = value
        .trim()
        .parse()
        .ok()
        .filter(|&n| n > 0)
        .ok_or_else(|| CliError::Threads(format!("expected a positive integer, got {value:?}")))?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| CliError::Threads(e.to_string()))
}

fn write_output(path: Option<&PathBuf>, bytes: &[u8]) -> Result<(), CliError> {
    match path {
        Some(p) => fs::write(p, bytes).map_err(|source| CliError::Io {
            path: p.display().to_string(),
            source,
        }),
        None => io::stdout()
            .lock()
            .write_all(bytes)
            .map_err(|source| CliError::Io {
                path: "<stdout>".into(),
                source,
            }),
    }
}

/// Runs, emits and writes the report; returns the exit code.
pub fn execute(config: &RunConfig) -> u8 {
    let result = run(config).and_then(|report| {
        let bytes = emit(&report, config.output_format).map_err(|source| CliError::Io {
            path: "<report>".into(),
            source,
        })?;
        write_output(config.output_path.as_ref(), &bytes)?;
        Ok(report)
    });
    match result {
        Ok(report) => {
            for n in report.notes.iter().filter(|n| n.starts_with("warning: ")) {
                eprintln!("{n}");
            }
            if report.passed() {
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
