//! `twolocal`: command-line frontend for the algebra kernel.
//!
//! Exit codes: 0 computed (including fail verdicts), 1 usage error,
//! 2 input parse error, 3 precondition violation.

mod commands;
mod render;

use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Parser, Debug)]
#[command(
    name = "twolocal",
    version,
    about = "Exact computations with Witt-type and thin Lie algebras"
)]
struct Cli {
    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Bracket of two elements.
    Bracket {
        #[arg(long)]
        algebra: String,
        #[arg(allow_hyphen_values = true)]
        x: String,
        #[arg(allow_hyphen_values = true)]
        y: String,
    },
    /// Jacobi identity on all basis triples of a window.
    Jacobi {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Leibniz rule for a map table.
    Leibniz {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        map: String,
        #[arg(long)]
        depth: i64,
    },
    /// Extend generator images D(e_1), D(e_2) to a full table.
    Extend {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        e1: String,
        #[arg(long, allow_hyphen_values = true)]
        e2: String,
        #[arg(long)]
        truncation: i64,
    },
    /// Basis of the space of derivations with bounded generator images.
    DerBasis {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        support: i64,
        /// Consistency depth (default 2n+3).
        #[arg(long)]
        depth: Option<i64>,
    },
    /// Recover the element a with D = ad(a).
    RecoverInner {
        #[arg(long)]
        algebra: String,
        #[arg(long)]
        map: String,
    },
    /// Centralizer of an element within a window.
    Centralizer {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// Rigidity trace for an element.
    Rigidity {
        #[arg(long)]
        algebra: String,
        #[arg(long, allow_hyphen_values = true)]
        element: String,
        /// Derivation table matching the 2-local map on the generating pair.
        #[arg(long)]
        baseline: Option<String>,
        #[arg(long, allow_hyphen_values = true)]
        window: String,
    },
    /// The thin-algebra 2-local derivation.
    TwoLocal(TwoLocalArgs),
}

#[derive(Args, Debug)]
struct TwoLocalArgs {
    #[command(subcommand)]
    command: TwoLocalCommand,
}

#[derive(Subcommand, Debug)]
enum TwoLocalCommand {
    /// Build and check a witness for every pair in a pairs file.
    Verify {
        #[arg(long)]
        pairs: String,
    },
    /// Show that the map is not additive.
    Additivity,
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(1)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match commands::run(cli.command, cli.format) {
        Ok(out) => {
            print!("{out}");
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
