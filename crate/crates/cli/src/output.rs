use std::fmt;
use std::fs;
use std::io::{self, Write};

use serde_json::Value;

use crate::args::Cli;

#[derive(Debug)]
pub enum CliError {
    /// Bad arguments or input files: exit code 2.
    Usage(String),
    /// The analysis itself failed: exit code 1.
    Domain(graphkms::Error),
    /// A check ran and found a violation: exit code 1.
    Check(String),
    Io(io::Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Usage(msg) | CliError::Check(msg) => write!(f, "{msg}"),
            CliError::Domain(graphkms::Error::BetaZero) => write!(
                f,
                "{}; run `graphkms trace` for the trace states",
                graphkms::Error::BetaZero
            ),
            CliError::Domain(e) => write!(f, "{e}"),
            CliError::Io(e) => write!(f, "{e}"),
        }
    }
}

impl From<graphkms::Error> for CliError {
    /// Malformed words come from the command line, so they are usage errors.
    fn from(e: graphkms::Error) -> Self {
        use graphkms::Error::*;
        match e {
            UnknownVertex(_) | UnknownEdge(_) | NotComposable { .. } | MalformedPath(_) => {
                CliError::Usage(e.to_string())
            }
            e => CliError::Domain(e),
        }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        CliError::Io(e)
    }
}

pub type CliResult<T> = Result<T, CliError>;

/// Rendered command output.
pub enum Output {
    Json(Value),
    Text {
        body: String,
        extension: &'static str,
    },
}

impl Output {
    fn render(&self) -> (String, &'static str) {
        match self {
            Output::Json(v) => (
                serde_json::to_string_pretty(v).expect("values serialize") + "\n",
                "json",
            ),
            Output::Text { body, extension } => (body.clone(), extension),
        }
    }

    /// Prints to stdout, or writes `<out-dir>/<command>.<ext>` and prints
    /// the path.
    pub fn emit(&self, cli: &Cli) -> CliResult<()> {
        let (body, extension) = self.render();
        match &cli.global.out_dir {
            None => io::stdout().write_all(body.as_bytes())?,
            Some(dir) => {
                fs::create_dir_all(dir)?;
                let path = dir.join(format!("{}.{extension}", cli.command.name()));
                fs::write(&path, body)?;
                println!("{}", path.display());
            }
        }
        Ok(())
    }
}
