//! `jeqp`: construct, verify, classify and search equitable 2-partitions of
//! Johnson graphs.
//!
//! Exit codes: 0 when every check passes, 1 when a check fails, 2 for usage
//! and format errors.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

#[derive(Debug, Parser)]
#[command(
    name = "jeqp",
    version,
    about = "Equitable 2-partitions of Johnson graphs J(n,w)"
)]
struct Cli {
    /// Seed for randomised operations.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Print the eigenvalues λ_i(n,w) for i = 0..=w.
    Spectrum(Graph),
    /// List the admissible quotient matrices for the second eigenvalue.
    Matrices(Graph),
    /// Build a partition and write it as JSON (or packed bits).
    Construct(ConstructArgs),
    /// Check equitability and print the quotient matrix.
    Verify(PartitionIn),
    /// Partial difference g_{i,j} of f = b·χ_C1 − c·χ_C2 with its classification.
    Diff(DiffArgs),
    /// Classify a function file against the four canonical forms.
    Classify(FileIn),
    /// Block decomposition of a partition's function or of a function file.
    Blocks(BlocksArgs),
    /// Exhaustive search for partitions with a given quotient matrix.
    Search(SearchArgs),
    /// Canonical form under coordinate permutations and cell swap.
    Canon(CanonArgs),
    /// Run every applicable check on a partition.
    Audit(AuditArgs),
}

#[derive(Debug, Args)]
struct Graph {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    w: u32,
    /// Emit JSON instead of a table.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Family {
    C1,
    C2,
    C3,
    C4,
    Coord,
    Pattern,
}

#[derive(Debug, Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    family: Family,
    /// Weight; the constructions live on J(2w, w).
    #[arg(long)]
    w: Option<u32>,
    /// Number of coordinates (coord and pattern only).
    #[arg(long)]
    n: Option<u32>,
    /// Coordinate (1-based) of a coord partition.
    #[arg(long)]
    i: Option<u32>,
    /// Pattern file {"k":…, "B":[…]}.
    #[arg(long)]
    pattern: Option<PathBuf>,
    /// Apply a coordinate permutation drawn from --seed.
    #[arg(long)]
    relabel: bool,
    #[arg(long)]
    out: Option<PathBuf>,
    /// Write packed bits instead of JSON; requires --out.
    #[arg(long, requires = "out")]
    binary: bool,
}

/// A partition file: JSON, or packed bits with `--binary --n --w`.
#[derive(Debug, Args)]
struct PartitionIn {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    #[arg(long, requires_all = ["n", "w"])]
    binary: bool,
    #[arg(long)]
    n: Option<u32>,
    #[arg(long)]
    w: Option<u32>,
}

#[derive(Debug, Args)]
struct FileIn {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
}

#[derive(Debug, Args)]
struct DiffArgs {
    #[command(flatten)]
    partition: PartitionIn,
    /// First coordinate (1-based).
    #[arg(long)]
    i: u32,
    /// Second coordinate (1-based).
    #[arg(long)]
    j: u32,
}

#[derive(Debug, Args)]
struct BlocksArgs {
    #[arg(long = "in", value_name = "FILE")]
    input: PathBuf,
    /// Treat the file as a function rather than a partition.
    #[arg(long)]
    function: bool,
}

#[derive(Debug, Args)]
struct SearchArgs {
    #[arg(long)]
    n: u32,
    #[arg(long)]
    w: u32,
    /// Off-diagonal entry b of the quotient matrix.
    #[arg(long, required_unless_present = "all_b", conflicts_with = "all_b")]
    b: Option<u32>,
    /// Search every admissible matrix.
    #[arg(long)]
    all_b: bool,
    #[arg(long, value_name = "N")]
    budget_nodes: Option<u64>,
    #[arg(long, value_name = "S", env = "JEQP_BUDGET_SECS")]
    budget_secs: Option<f64>,
    #[arg(long, default_value_t = 1)]
    threads: usize,
    /// Disable fixing vertex 0 in the first cell.
    #[arg(long)]
    no_symmetry: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct CanonArgs {
    #[command(flatten)]
    partition: PartitionIn,
    /// Also print the certificate permutation and swap flag.
    #[arg(long)]
    cert: bool,
}

#[derive(Debug, Args)]
struct AuditArgs {
    #[command(flatten)]
    partition: PartitionIn,
    #[arg(long)]
    json: bool,
    /// Omit timing so identical inputs give identical reports.
    #[arg(long)]
    no_timing: bool,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match commands::run(cli) {
        Ok(outcome) => outcome.exit_code(),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
