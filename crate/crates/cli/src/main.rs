//! `tcdo`: runs the engine's verification suites and prints reports.

mod commands;
mod output;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::output::Outcome;

#[derive(Parser, Debug)]
#[command(name = "tcdo", version, about = "Exact verification of twisted chiral differential operators on P^1")]
struct Cli {
    #[command(flatten)]
    common: Common,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct Common {
    /// Report format.
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Seed for sampled properties.
    #[arg(long, default_value_t = 42, global = true)]
    pub seed: u64,
    /// Number of random samples per sampled property.
    #[arg(long, default_value_t = 100, global = true)]
    pub samples: usize,
    /// Largest conformal weight considered.
    #[arg(long, default_value_t = 4, global = true)]
    pub weight_max: u32,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Property suite of the mode engine (Borcherds identity, translation, gradings).
    VerifyEngine {
        /// Break one side of the Borcherds identity on purpose.
        #[arg(long, hide = true)]
        inject_sign_flip: bool,
    },
    /// Zhu algebra relations and the chart-level Zhu correspondence.
    Zhu {
        /// Largest filtration degree compared against x^d ∂^k λ^e.
        #[arg(long, default_value_t = 3)]
        cutoff: u32,
    },
    /// Gluing map, sl2 embedding and the Sugawara image.
    Gluing {
        /// `symbolic` keeps λ* free; an integer n specializes to O(n).
        #[arg(long, default_value = "symbolic", value_parser = commands::parse_twist, allow_hyphen_values = true)]
        twist: commands::Twist,
    },
    /// Čech cohomology of O(n)^ch per bidegree.
    Cech {
        /// A single n or an inclusive range `A..B`.
        #[arg(long, default_value = "-3..3", value_parser = commands::parse_range, allow_hyphen_values = true)]
        n: (i64, i64),
    },
    /// Critical-level sl2 modules.
    Affine {
        #[command(subcommand)]
        which: AffineCommand,
    },
}

#[derive(Subcommand, Debug)]
enum AffineCommand {
    /// Brute-force character of L_n against the closed form.
    Char {
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
    /// Per-bidegree comparison of M_n, M_{n/z} and the sections over the big cell.
    VermaVsSections {
        #[arg(long, default_value_t = -3, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, default_value_t = 4)]
        depth: u32,
    },
    /// Singular vectors of M_{ν/z} for a rational ν.
    Generic {
        #[arg(long, default_value = "1/2", allow_hyphen_values = true)]
        nu: String,
        #[arg(long, default_value_t = 3)]
        depth: u32,
    },
}

fn run(cli: &Cli) -> Result<Outcome, commands::Failure> {
    let c = &cli.common;
    match &cli.command {
        Command::VerifyEngine { inject_sign_flip } => commands::verify_engine(c, *inject_sign_flip),
        Command::Zhu { cutoff } => commands::zhu(c, *cutoff),
        Command::Gluing { twist } => commands::gluing(c, *twist),
        Command::Cech { n } => commands::cech(c, *n),
        Command::Affine { which } => match which {
            AffineCommand::Char { n, depth } => commands::affine_char(c, *n, *depth),
            AffineCommand::VermaVsSections { n, depth } => commands::verma_vs_sections(c, *n, *depth),
            AffineCommand::Generic { nu, depth } => commands::generic(c, nu, *depth),
        },
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match run(&cli) {
        Ok(o) => o,
        Err(commands::Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return ExitCode::from(2);
        }
        Err(commands::Failure::Engine(e)) => {
            eprintln!("engine error: {e}");
            return ExitCode::from(1);
        }
    };
    for w in &outcome.warnings {
        eprintln!("warning: {w}");
    }
    if let Err(e) = output::emit(&outcome, &cli.common) {
        eprintln!("error: {e:#}");
        return ExitCode::from(2);
    }
    if outcome.pass {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    }
}
