//! Command-line front end for the `bbh` library.
//!
//! Each command builds a [`Report`]: the effective [`RunConfig`] followed by
//! the command's result. Reports render as JSON ([`Report::to_machine`]) or
//! as aligned text ([`Report::to_table`]); with `--out STEM` both are written.

mod args;
mod commands;
mod config;
mod report;
mod workload;

use std::path::{Path, PathBuf};

use thiserror::Error;

pub use args::{
    BenchArgs, CareerArgs, ChooseArgs, ChooseStrategy, Cli, Command, Common, Format, Generator,
    ProfileSources, ScreenArgs, WorkloadArgs,
};
pub use commands::build_report;
pub use config::{parse_config, FileConfig, RunConfig};
pub use report::{Body, Report};
pub use workload::{workload, WorkloadQuery};

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] bbh::Error),
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: bbh::Error },
    #[error("cannot read {}: {source}", path.display())]
    Read {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("cannot write {}: {source}", path.display())]
    Write {
        path: PathBuf,
        source: std::io::Error,
    },
    #[error("config: {0}")]
    Config(String),
    #[error("{0}")]
    Usage(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) | CliError::Config(_) => 2,
            _ => 1,
        }
    }
}

fn same_file(a: &Path, b: &Path) -> bool {
    match (a.canonicalize(), b.canonicalize()) {
        (Ok(x), Ok(y)) => x == y,
        _ => a == b,
    }
}

pub(crate) fn write_file(path: &Path, contents: &str, config: &RunConfig) -> Result<(), CliError> {
    if config
        .inputs
        .values()
        .any(|i| same_file(Path::new(i), path))
    {
        return Err(CliError::Usage(format!(
            "refusing to overwrite input file {}",
            path.display()
        )));
    }
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.to_owned(),
        source,
    })
}

fn with_extension(stem: &Path, ext: &str) -> PathBuf {
    let mut s = stem.as_os_str().to_owned();
    s.push(".");
    s.push(ext);
    PathBuf::from(s)
}

/// Runs one command. The report goes to `stdout` unless `--out` is given, in
/// which case both formats are written next to the stem and the paths are
/// returned.
pub fn run(cli: &Cli, stdout: &mut impl std::io::Write) -> Result<Vec<PathBuf>, CliError> {
    let (report, format, out) = build_report(cli)?;
    match out {
        Some(stem) => {
            let json = with_extension(&stem, "json");
            let txt = with_extension(&stem, "txt");
            write_file(&json, &report.to_machine(), &report.config)?;
            write_file(&txt, &report.to_table(), &report.config)?;
            Ok(vec![json, txt])
        }
        None => {
            let text = match format {
                Format::Machine => report.to_machine(),
                Format::Table => report.to_table(),
            };
            stdout
                .write_all(text.as_bytes())
                .map_err(|source| CliError::Write {
                    path: PathBuf::from("<stdout>"),
                    source,
                })?;
            Ok(Vec::new())
        }
    }
}
