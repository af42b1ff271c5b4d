//! `modchain`: posets, labelings, complexes and subgroup lattices from the
//! command line. Exit codes: 0 success, 1 verification failure, 2 input
//! error.

mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::report::{Report, Status, Timing};

#[derive(Debug, Parser)]
#[command(name = "modchain", version, about = "Left-modular chains, quasi-EL labelings and the topology of order complexes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    pub format: Format,
    /// Leave timing out of the report.
    #[arg(long, global = true)]
    pub no_timing: bool,
    #[command(flatten)]
    pub limits: Limits,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Text,
}

#[derive(Debug, Clone, Args)]
pub struct Limits {
    /// Maximal chains enumerated before giving up.
    #[arg(long, default_value_t = modchain::morse::DEFAULT_CHAIN_LIMIT, global = true)]
    pub chain_limit: usize,
    /// Faces held in memory by homology and depth computations.
    #[arg(long, default_value_t = 2_000_000, global = true)]
    pub face_limit: usize,
    /// Largest group order accepted.
    #[arg(long, default_value_t = modchain::groups::DEFAULT_ORDER_LIMIT, global = true)]
    pub order_limit: usize,
    /// Facets allowed in an exhaustive shelling search.
    #[arg(long, default_value_t = 12, global = true)]
    pub facet_limit: usize,
    /// Vertices allowed in an exhaustive decomposition search.
    #[arg(long, default_value_t = 16, global = true)]
    pub vertex_limit: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Poset checks.
    #[command(subcommand)]
    Poset(PosetCommand),
    /// Edge labelings.
    #[command(subcommand)]
    Label(LabelCommand),
    /// Simplicial complexes and order complexes.
    #[command(subcommand)]
    Complex(ComplexCommand),
    /// Lexicographic discrete Morse data.
    #[command(subcommand)]
    Morse(MorseCommand),
    /// Subgroup lattices of permutation groups.
    #[command(subcommand)]
    Group(GroupCommand),
}

#[derive(Debug, Subcommand)]
pub enum PosetCommand {
    /// Parse a poset and report bounds, lattice property and grading.
    Check { file: PathBuf },
}

#[derive(Debug, Subcommand)]
pub enum LabelCommand {
    /// Left-modular labeling of a lattice along a chain.
    Modular {
        #[arg(long)]
        poset: PathBuf,
        /// Comma-separated chain from bottom to top.
        #[arg(long, value_delimiter = ',', required = true)]
        chain: Vec<String>,
        /// Also write the labeling file here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Check the quasi-EL axioms on every interval.
    Verify {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        labeling: PathBuf,
        /// Also require a unique ascending chain per interval.
        #[arg(long)]
        el: bool,
    },
}

/// Either a complex file or a poset whose order complex is meant.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false)]
pub struct ComplexSource {
    #[arg(long)]
    pub complex: Option<PathBuf>,
    #[arg(long)]
    pub poset: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum ComplexCommand {
    /// Vertex decomposition of a skeleton.
    ///
    /// With `--poset` and `--labeling` the certificate is built from the
    /// labeling; with `--complex` it is found by exhaustive search.
    Vd {
        #[arg(long, conflicts_with_all = ["poset", "labeling"])]
        complex: Option<PathBuf>,
        #[arg(long, requires = "labeling")]
        poset: Option<PathBuf>,
        #[arg(long, requires = "poset")]
        labeling: Option<PathBuf>,
        /// Skeleton dimension; defaults to r − 2 for a labeled poset and the
        /// full complex otherwise.
        #[arg(long, allow_hyphen_values = true)]
        skeleton: Option<isize>,
        /// Certify the whole order complex (no three equal labels in a row).
        #[arg(long, conflicts_with = "skeleton", requires = "labeling")]
        full: bool,
        /// Check this certificate instead of producing one.
        #[arg(long, conflicts_with_all = ["labeling", "output"])]
        certificate: Option<PathBuf>,
        /// Also write the certificate here.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Depth, Cohen-Macaulayness and reduced Betti numbers.
    Depth {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long, allow_hyphen_values = true)]
        skeleton: Option<isize>,
    },
    /// Find or verify a shelling order.
    Shell {
        #[command(flatten)]
        source: ComplexSource,
        #[arg(long, allow_hyphen_values = true)]
        skeleton: Option<isize>,
        /// Shelling order file to check.
        #[arg(long)]
        verify: Option<PathBuf>,
    },
}

#[derive(Debug, Subcommand)]
pub enum MorseCommand {
    /// Minimal skipped intervals, descending chains and dimension bounds.
    Report {
        #[arg(long)]
        poset: PathBuf,
        #[arg(long)]
        labeling: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Method {
    Depth,
    Skeleton,
}

#[derive(Debug, Subcommand)]
pub enum GroupCommand {
    /// Subgroups, normality and a chief series.
    Lattice {
        file: PathBuf,
        /// Also write the subgroup lattice as a poset file.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Decide solvability topologically and compare with the derived series.
    Solvable {
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Method::Depth)]
        method: Method,
    },
    /// Homotopy type check for solvable groups: a wedge of spheres counted
    /// by chains of complements.
    Thevenaz { file: PathBuf },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let start = Instant::now();
    match commands::run(&cli) {
        Ok(mut report) => {
            if !cli.no_timing {
                report.timing = Some(Timing {
                    seconds: start.elapsed().as_secs_f64(),
                });
            }
            emit(&cli, &report);
            match report.status {
                Status::Ok => ExitCode::SUCCESS,
                Status::VerificationFailed => ExitCode::from(1),
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn emit(cli: &Cli, report: &Report) {
    match cli.format {
        Format::Json => println!("{}", report.to_json()),
        Format::Text => print!("{}", report.to_text()),
    }
}
