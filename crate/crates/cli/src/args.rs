use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(name = "freeconv", version, about = "Free convolution densities, atoms and convergence reports")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Density table of a freely infinitely divisible law (CSV).
    Density {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Zero and atom of a freely infinitely divisible law (JSON).
    Atoms {
        #[command(flatten)]
        law: LawArgs,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Density table of a free convolution power of a discrete measure (CSV).
    Convpow {
        /// Base measure as `t:w,...`.
        #[arg(long, allow_hyphen_values = true)]
        atoms: String,
        /// Number of summands, at least 2.
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        table: TableArgs,
    },
    /// Convergence report for a triangular array (JSON).
    Superconv {
        #[arg(long, value_enum)]
        scheme: SchemeKind,
        /// Base measure of the central-limit scheme as `t:w,...`.
        #[arg(long, allow_hyphen_values = true)]
        atoms: Option<String>,
        /// Rate of the Poisson scheme.
        #[arg(long, default_value = "1")]
        lambda: String,
        /// Jump law of the Poisson scheme as `t:w,...`.
        #[arg(long, allow_hyphen_values = true, default_value = "1:1")]
        jump: String,
        /// Row indices, comma separated.
        #[arg(long)]
        n: String,
        /// Exponents of the L^p distances, comma separated.
        #[arg(long, default_value = "2")]
        p: String,
        /// Grid as `lo:hi:n`.
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        /// Open interval `lo:hi` left out of the comparison.
        #[arg(long, allow_hyphen_values = true)]
        exclude: Option<String>,
        #[command(flatten)]
        out: OutputArgs,
    },
    /// Checks the dilation property of a freely stable law (JSON).
    StableCheck {
        /// Stable parameters `alpha=<r> b=<r or m:theta>`.
        #[arg(long, num_args = 1..=2, allow_hyphen_values = true, required = true)]
        stable: Vec<String>,
        /// Grid as `lo:hi:n`.
        #[arg(long, allow_hyphen_values = true, default_value = "-3:3:401")]
        grid: String,
        #[command(flatten)]
        out: OutputArgs,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum SchemeKind {
    Clt,
    Poisson,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct LawArgs {
    /// Generating pair `gamma=<r> sigma=<t:w,...>`.
    #[arg(long, num_args = 1..=2, allow_hyphen_values = true)]
    pub pair: Option<Vec<String>>,
    /// Stable parameters `alpha=<r> b=<r or m:theta>`.
    #[arg(long, num_args = 1..=2, allow_hyphen_values = true)]
    pub stable: Option<Vec<String>>,
}

#[derive(Debug, Args)]
pub struct TableArgs {
    /// Grid as `lo:hi:n`.
    #[arg(long, allow_hyphen_values = true)]
    pub grid: String,
    /// Open interval `lo:hi` whose grid points are omitted.
    #[arg(long, allow_hyphen_values = true)]
    pub exclude: Option<String>,
    /// Also write a gnuplot script to this path.
    #[arg(long)]
    pub gnuplot: Option<PathBuf>,
    #[command(flatten)]
    pub out: OutputArgs,
}

#[derive(Debug, Args)]
pub struct OutputArgs {
    /// Write to this file instead of standard output.
    #[arg(long)]
    pub output: Option<PathBuf>,
}
