use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};

mod commands;
mod output;

use output::{Failure, Format, Invocation};

#[derive(Parser, Debug)]
#[command(name = "treebound", version, about = "Exact tree counts, lower bounds and embedding measures")]
struct Cli {
    /// Output format written to stdout.
    #[arg(long, value_enum, default_value_t = Format::Json, global = true)]
    format: Format,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
pub struct Instance {
    /// Graph edge-list file (0-indexed vertices).
    #[arg(long)]
    pub graph: PathBuf,
    /// Tree edge-list file (1-indexed) or a preset `path:T` / `star:T`.
    #[arg(long)]
    pub tree: String,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
pub enum HomMethod {
    Dp,
    Brute,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Count labeled copies of a tree.
    Count {
        #[command(flatten)]
        input: Instance,
    },
    /// Count homomorphisms of a tree.
    Hom {
        #[command(flatten)]
        input: Instance,
        #[arg(long, value_enum, default_value_t = HomMethod::Dp)]
        method: HomMethod,
    },
    /// Count walks with `length` edges.
    Walks {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        length: usize,
    },
    /// Evaluate every lower bound for `t`-edge trees.
    Bounds {
        #[arg(long)]
        graph: PathBuf,
        #[arg(long)]
        t: usize,
        /// Induced maximum degree for the bounded-degree bound (default t).
        #[arg(long)]
        k: Option<usize>,
    },
    /// Aggregated measure table g[i][v].
    Gtable {
        #[command(flatten)]
        input: Instance,
        /// One of p, P, Pprime.
        #[arg(long)]
        measure: String,
        #[arg(long, conflicts_with = "samples")]
        exact: bool,
        /// Monte Carlo estimate of P from this many draws.
        #[arg(long, requires = "seed")]
        samples: Option<u64>,
        #[arg(long)]
        seed: Option<u64>,
    },
    /// Draw embeddings from the oriented random process.
    Sample {
        #[command(flatten)]
        input: Instance,
        #[arg(long)]
        samples: u64,
        #[arg(long)]
        seed: u64,
    },
    /// Run every asserted invariant on one instance; exit 1 if any fails.
    Verify {
        #[command(flatten)]
        input: Instance,
    },
    /// Entropy chain from copy count down to the degree-product bound.
    Chain {
        #[command(flatten)]
        input: Instance,
    },
    /// Compare exact counts with the falling-factorial bound on a graph family.
    Conjecture {
        /// random, cliques or bipartite.
        #[arg(long)]
        family: String,
        /// Vertex count `N` or inclusive range `A..B`.
        #[arg(long)]
        n: String,
        #[arg(long)]
        t: usize,
        #[arg(long, default_value_t = 1)]
        trials: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Minimum-degree floor (default 2t).
        #[arg(long)]
        min_degree: Option<usize>,
        /// Edge probability for the random family.
        #[arg(long, default_value_t = 0.6)]
        p: f64,
        /// Trees to test (presets or files); default path and star.
        #[arg(long)]
        tree: Vec<String>,
    },
    /// Check that disjoint cliques hit the falling-factorial count exactly.
    Sharpness {
        #[arg(long)]
        q: usize,
        #[arg(long)]
        c: usize,
        #[arg(long)]
        t: usize,
        /// Extra trees (presets or files).
        #[arg(long)]
        tree: Vec<String>,
    },
    /// Generate a graph file: `gen FAMILY ARGS... -o FILE`.
    Gen {
        /// cliques C Q | complete N | complete-minus-edge N | cycle N | bipartite A B | petersen | random N P MINDEG
        family: String,
        args: Vec<String>,
        #[arg(short, long)]
        output: PathBuf,
        #[arg(long, default_value_t = 0)]
        seed: u64,
    },
    /// Run the instance suite from a JSON config (defaults when omitted).
    Suite {
        #[arg(long)]
        config: Option<PathBuf>,
    },
}

fn main() -> ExitCode {
    let start = Instant::now();
    let argv: Vec<String> = std::env::args().skip(1).collect();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 2 } else { 0 });
        }
    };
    let mut inv = Invocation::new(argv, cli.format);
    let result = commands::run(&cli.command, &mut inv);
    let code = match result {
        Ok(report) => {
            let failed = report.failed;
            match inv.emit(report, start.elapsed()) {
                Ok(()) if failed => 1,
                Ok(()) => 0,
                Err(f) => f.report(),
            }
        }
        Err(f) => f.report(),
    };
    ExitCode::from(code)
}

impl Failure {
    fn report(&self) -> u8 {
        eprintln!("error: {}", self.message());
        self.code()
    }
}
