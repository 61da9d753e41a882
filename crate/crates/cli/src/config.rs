use std::path::PathBuf;

use clap::{Parser, Subcommand, ValueEnum};

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Subcommand)]
pub enum Command {
    /// Classical shift family of a Poisson structure, or the binary-operation variant.
    Classical,
    /// Deformed shift family in a DGLA twisted by an MC element.
    Quantum,
    /// Associativity (MC equation) of a star product.
    StarCheck,
    /// Generalized Jacobi identities of a finite L∞-algebra.
    LinftyCheck,
    /// L∞-morphism identities between finite algebras.
    MorphismCheck,
    /// L∞-derivation identities on a finite algebra.
    DerivationCheck,
    /// Weak and strong Nijenhuis defects.
    Nijenhuis,
    /// Brute-force search for strong Nijenhuis derivations on a grid.
    Scan,
}

impl Command {
    pub fn name(self) -> &'static str {
        match self {
            Command::Classical => "classical",
            Command::Quantum => "quantum",
            Command::StarCheck => "star-check",
            Command::LinftyCheck => "linfty-check",
            Command::MorphismCheck => "morphism-check",
            Command::DerivationCheck => "derivation-check",
            Command::Nijenhuis => "nijenhuis",
            Command::Scan => "scan",
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "shiftq", version, about = "Exact verification of argument-shift constructions")]
pub struct Config {
    #[command(subcommand)]
    pub command: Command,

    /// Problem file (JSON).
    #[arg(long, global = true)]
    pub input: Option<PathBuf>,

    /// Write the report here instead of stdout.
    #[arg(long, global = true)]
    pub report: Option<PathBuf>,

    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(0..=32))]
    pub kmax: Option<u16>,

    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..=16))]
    pub hbar_cap: Option<u16>,

    #[arg(long, global = true, value_parser = clap::value_parser!(u16).range(1..=8))]
    pub arity_cutoff: Option<u16>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,

    /// Candidate budget for `scan` when the problem file sets none.
    #[arg(long, global = true, env = "SHIFTQ_BUDGET")]
    pub budget: Option<usize>,
}
