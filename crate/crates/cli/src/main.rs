use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use tropglue_cli::{execute, Command, Format, Options};
use tropglue_core::BalancingMode;

#[derive(Parser)]
#[command(name = "tropglue", version, about = "Tropical gluing computations on scenario files")]
struct Cli {
    #[command(subcommand)]
    command: Cmd,
    #[arg(long, global = true)]
    scenario: Option<PathBuf>,
    #[arg(long, global = true)]
    curve: Option<String>,
    /// Write an SVG drawing of the complex and curve.
    #[arg(long, global = true)]
    emit_diagram: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Balancing::InteriorOnly)]
    balancing: Balancing,
    /// Search-node budget for `enumerate`.
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[arg(long, global = true, value_enum, default_value_t = Fmt::Text)]
    format: Fmt,
}

#[derive(Subcommand, Clone, Copy)]
enum Cmd {
    /// Check the complex and curves.
    Validate,
    /// Cut the curve on every edge.
    Cut,
    /// Cut, then glue back.
    Glue,
    /// Star curves at vertices.
    Star,
    /// Tangent cone at `run.point`.
    Complete,
    /// Evaluation components and gluing diagram.
    Rend,
    /// Evaluate the gluing formula.
    GlueClasses,
    /// Rigid curves through the constraints.
    Enumerate,
    /// Euler characteristic bookkeeping.
    Ledger,
}

#[derive(ValueEnum, Clone, Copy)]
enum Balancing {
    On,
    Off,
    InteriorOnly,
}

#[derive(ValueEnum, Clone, Copy)]
enum Fmt {
    Text,
    Json,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let Some(scenario) = cli.scenario else {
        eprintln!("error[usage]: --scenario is required");
        return ExitCode::from(2);
    };
    let command = match cli.command {
        Cmd::Validate => Command::Validate,
        Cmd::Cut => Command::Cut,
        Cmd::Glue => Command::Glue,
        Cmd::Star => Command::Star,
        Cmd::Complete => Command::Complete,
        Cmd::Rend => Command::Rend,
        Cmd::GlueClasses => Command::GlueClasses,
        Cmd::Enumerate => Command::Enumerate,
        Cmd::Ledger => Command::Ledger,
    };
    let opts = Options {
        scenario,
        curve: cli.curve,
        emit_diagram: cli.emit_diagram,
        balancing: match cli.balancing {
            Balancing::On => BalancingMode::On,
            Balancing::Off => BalancingMode::Off,
            Balancing::InteriorOnly => BalancingMode::InteriorOnly,
        },
        budget: cli.budget,
        format: match cli.format {
            Fmt::Text => Format::Text,
            Fmt::Json => Format::Json,
        },
    };
    let (out, err, code) = execute(command, &opts);
    let _ = std::io::stdout().write_all(out.as_bytes());
    let _ = std::io::stderr().write_all(err.as_bytes());
    ExitCode::from(code as u8)
}
