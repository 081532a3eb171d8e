//! Command-line front end for the profinite workbench.
//!
//! Every command either prints a deterministic report and exits 0, or
//! prints a diagnostic to stderr and exits 1 (domain errors) or 2 (usage).

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand};

use profinite_cli::commands::{self, CliError};
use profinite_cli::report::{self, Report};

#[derive(Parser)]
#[command(
    name = "profinite",
    version,
    about = "Exact workbench for profinite-group finite-quotient data"
)]
struct Cli {
    /// Report format revision to emit (only "1" exists).
    #[arg(long, global = true, default_value = report::FORMAT_VERSION)]
    format_version: String,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// The lattice of open normal subgroups: enumeration, order, meet,
    /// join and the word metric.
    #[command(subcommand)]
    Lattice(LatticeCmd),
    /// Filter chains approximating closed normal subgroups.
    #[command(subcommand)]
    Filter(FilterCmd),
    /// Nil-2 exponent-p graph groups and the graph interpretation.
    #[command(subcommand)]
    Mekler(MeklerCmd),
    /// Coset trees and the binary Cantor encoding.
    #[command(subcommand)]
    Cantor(CantorCmd),
    /// SL2 product towers and prime-set recovery.
    #[command(subcommand)]
    Slfam(SlfamCmd),
}

#[derive(Subcommand)]
enum LatticeCmd {
    /// Print the i-th element of the fixed repetition-free enumeration.
    Enum { index: usize },
    /// Decide kernel containment between two enumerated elements.
    Leq { i: usize, j: usize },
    /// Greatest lower bound of two enumerated elements.
    Meet { i: usize, j: usize },
    /// Least upper bound of two enumerated elements.
    Join { i: usize, j: usize },
    /// The ultrametric distance between two words, as an exact dyadic.
    Delta {
        g: String,
        h: String,
        #[arg(long, default_value_t = 8)]
        precision: usize,
    },
}

#[derive(Subcommand)]
enum FilterCmd {
    /// Finite quotient of the chain at a level.
    Quotient {
        file: PathBuf,
        #[arg(long)]
        level: usize,
    },
    /// Whether the chain stabilizes on the window up to the depth.
    Principal {
        file: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Whether two chains agree at the coarse scale of a base level.
    Hausdorff {
        file_r: PathBuf,
        file_s: PathBuf,
        #[arg(long)]
        level: usize,
    },
}

#[derive(Subcommand)]
enum MeklerCmd {
    /// Check the graph for triangles, squares and separation.
    Nice { graph: PathBuf },
    /// Normal-form product of two elements.
    Mul {
        a: String,
        b: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: u32,
    },
    /// Normal-form inverse.
    Inv {
        a: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: u32,
    },
    /// Commutator by the closed formula, cross-checked by the rewriter.
    Comm {
        a: String,
        b: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: u32,
    },
    /// Recover the graph from the group through the class interpretation.
    Gamma2 {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: u32,
    },
    /// Case and class size of a noncentral element.
    Classify {
        element: String,
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        p: u32,
    },
}

#[derive(Subcommand)]
enum CantorCmd {
    /// Branching factors and coset representatives of a filter chain.
    Tree {
        filter: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Binary encoding of a digit path (digits comma-separated).
    Encode {
        digits: String,
        #[arg(long)]
        filter: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Group difference of two digit paths at a level.
    Rho {
        z: String,
        w: String,
        #[arg(long)]
        level: usize,
        #[arg(long)]
        filter: PathBuf,
        #[arg(long)]
        depth: usize,
    },
    /// Check the group-difference axioms at a level.
    Verify {
        #[arg(long)]
        level: usize,
        /// Sweep all associativity triples regardless of quotient size.
        #[arg(long)]
        exhaustive: bool,
        #[arg(long, default_value_t = 1000)]
        samples: u64,
        #[arg(long)]
        filter: PathBuf,
        #[arg(long)]
        depth: usize,
    },
}

#[derive(Subcommand)]
enum SlfamCmd {
    /// Tabulate the level-k quotient of the SL2 product over a prime set.
    Build {
        #[arg(long)]
        primes: String,
        #[arg(long, default_value_t = 1)]
        level: u32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Recover the prime set of a tabulated group by epimorphism search.
    Detect {
        file: PathBuf,
        #[arg(long)]
        candidates: String,
    },
    /// Least level distinguishing two prime sets.
    Distinguish {
        #[arg(long)]
        p: String,
        #[arg(long)]
        q: String,
    },
    /// The unitriangular 3x3 group over Z/p.
    Ut3 {
        #[arg(long)]
        p: u32,
    },
}

fn main() -> ExitCode {
    let argv: Vec<String> = std::env::args().collect();
    let cli = Cli::parse();
    if cli.format_version != report::FORMAT_VERSION {
        eprintln!(
            "error: unsupported format version {:?} (this build emits {})",
            cli.format_version,
            report::FORMAT_VERSION
        );
        return ExitCode::from(2);
    }
    let mut report = Report::new(&argv[1..]);
    match run(&cli.command, &mut report) {
        Ok(()) => {
            print!("{}", report.render());
            ExitCode::SUCCESS
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}

fn run(command: &Command, report: &mut Report) -> Result<(), CliError> {
    match command {
        Command::Lattice(cmd) => match cmd {
            LatticeCmd::Enum { index } => commands::lattice_enum(report, *index),
            LatticeCmd::Leq { i, j } => commands::lattice_leq(report, *i, *j),
            LatticeCmd::Meet { i, j } => commands::lattice_meet(report, *i, *j),
            LatticeCmd::Join { i, j } => commands::lattice_join(report, *i, *j),
            LatticeCmd::Delta { g, h, precision } => {
                commands::lattice_delta(report, g, h, *precision)
            }
        },
        Command::Filter(cmd) => match cmd {
            FilterCmd::Quotient { file, level } => {
                commands::filter_quotient(report, file, *level)
            }
            FilterCmd::Principal { file, depth } => {
                commands::filter_principal(report, file, *depth)
            }
            FilterCmd::Hausdorff { file_r, file_s, level } => {
                commands::filter_hausdorff(report, file_r, file_s, *level)
            }
        },
        Command::Mekler(cmd) => match cmd {
            MeklerCmd::Nice { graph } => commands::mekler_nice(report, graph),
            MeklerCmd::Mul { a, b, graph, p } => {
                commands::mekler_mul(report, a, b, graph, *p)
            }
            MeklerCmd::Inv { a, graph, p } => commands::mekler_inv(report, a, graph, *p),
            MeklerCmd::Comm { a, b, graph, p } => {
                commands::mekler_comm(report, a, b, graph, *p)
            }
            MeklerCmd::Gamma2 { graph, p } => commands::mekler_gamma2(report, graph, *p),
            MeklerCmd::Classify { element, graph, p } => {
                commands::mekler_classify(report, element, graph, *p)
            }
        },
        Command::Cantor(cmd) => match cmd {
            CantorCmd::Tree { filter, depth } => commands::cantor_tree(report, filter, *depth),
            CantorCmd::Encode { digits, filter, depth } => {
                commands::cantor_encode(report, digits, filter, *depth)
            }
            CantorCmd::Rho { z, w, level, filter, depth } => {
                commands::cantor_rho(report, z, w, *level, filter, *depth)
            }
            CantorCmd::Verify { level, exhaustive, samples, filter, depth } => {
                commands::cantor_verify(report, *level, *exhaustive, *samples, filter, *depth)
            }
        },
        Command::Slfam(cmd) => match cmd {
            SlfamCmd::Build { primes, level, out } => {
                commands::slfam_build(report, primes, *level, out.as_deref())
            }
            SlfamCmd::Detect { file, candidates } => {
                commands::slfam_detect(report, file, candidates)
            }
            SlfamCmd::Distinguish { p, q } => commands::slfam_distinguish(report, p, q),
            SlfamCmd::Ut3 { p } => commands::slfam_ut3(report, *p),
        },
    }
}
