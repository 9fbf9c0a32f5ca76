//! Scenario files in, exact reports out.
//!
//! Each subcommand loads a TOML scenario, runs one computation from `tropglue-core` and
//! renders a [`Report`] as text or JSON. Failures map to a [`CliError`] whose
//! [`category`](CliError::category) and [`exit_code`](CliError::exit_code) are stable.

use std::fmt;
use std::path::PathBuf;

use thiserror::Error;
use tropglue_core::BalancingMode;

mod commands;
pub mod scenario;
pub mod svg;

pub use commands::run;
pub use scenario::{Loaded, Scenario};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("line {line}, column {column}: {message}")]
    Parse { line: usize, column: usize, message: String },
    #[error("{0}")]
    Reference(String),
    #[error("{0}")]
    Validation(String),
    #[error("{0}")]
    Compute(String),
    #[error("{0}")]
    Budget(String),
}

impl CliError {
    pub fn category(&self) -> &'static str {
        match self {
            CliError::Io(_) => "io",
            CliError::Parse { .. } => "parse",
            CliError::Reference(_) => "reference",
            CliError::Validation(_) => "validation",
            CliError::Compute(_) => "computation",
            CliError::Budget(_) => "budget",
        }
    }

    /// 2 is left to argument errors.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Parse { .. } => 3,
            CliError::Io(_) => 4,
            CliError::Reference(_) | CliError::Validation(_) => 5,
            CliError::Compute(_) => 6,
            CliError::Budget(_) => 7,
        }
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::json!({ "category": self.category(), "message": self.to_string() });
        if let CliError::Parse { line, column, .. } = self {
            v["line"] = (*line).into();
            v["column"] = (*column).into();
        }
        serde_json::json!({ "error": v })
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Command {
    Validate,
    Cut,
    Glue,
    Star,
    Complete,
    Rend,
    GlueClasses,
    Enumerate,
    Ledger,
}

impl Command {
    pub const ALL: [Command; 9] = [
        Command::Validate,
        Command::Cut,
        Command::Glue,
        Command::Star,
        Command::Complete,
        Command::Rend,
        Command::GlueClasses,
        Command::Enumerate,
        Command::Ledger,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Command::Validate => "validate",
            Command::Cut => "cut",
            Command::Glue => "glue",
            Command::Star => "star",
            Command::Complete => "complete",
            Command::Rend => "rend",
            Command::GlueClasses => "glue-classes",
            Command::Enumerate => "enumerate",
            Command::Ledger => "ledger",
        }
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Debug, Default)]
pub struct Options {
    pub scenario: PathBuf,
    pub curve: Option<String>,
    pub emit_diagram: Option<PathBuf>,
    pub balancing: BalancingMode,
    pub budget: Option<u64>,
    pub format: Format,
}

/// Output of one subcommand in both renderings.
#[derive(Clone, Debug, PartialEq)]
pub struct Report {
    pub text: String,
    pub json: serde_json::Value,
}

impl Report {
    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.text.clone(),
            Format::Json => {
                let mut s = serde_json::to_string_pretty(&self.json).expect("reports serialize");
                s.push('\n');
                s
            }
        }
    }
}

impl fmt::Display for Report {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.text)
    }
}

/// Runs `cmd` and returns what to print on stdout, on stderr, and the exit code.
pub fn execute(cmd: Command, opts: &Options) -> (String, String, i32) {
    match run(cmd, opts) {
        Ok(r) => (r.render(opts.format), String::new(), 0),
        Err(e) => {
            let err = match opts.format {
                Format::Text => format!("error[{}]: {e}\n", e.category()),
                Format::Json => format!("{}\n", serde_json::to_string_pretty(&e.to_json()).expect("errors serialize")),
            };
            (String::new(), err, e.exit_code())
        }
    }
}
