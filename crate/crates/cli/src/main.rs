//! `forest-spectra`: exact Hessian spectra, forest bijections and Lefschetz
//! checks from the command line. Every subcommand prints one JSON report.

mod commands;
mod output;

use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand};
use forest_spectra::{complete_bipartite_graph, complete_graph, Error, Graph};

use crate::output::Report;

#[derive(Debug, Parser)]
#[command(name = "forest-spectra", version, about = "Exact forest Hessian spectra and Lefschetz checks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Closed-form spectrum of the all-ones Hessian of the k-forest polynomial.
    Spectrum {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        /// Include the full Hessian in the report.
        #[arg(long)]
        matrix: bool,
    },
    /// Build the forest families and verify every bijection between them.
    Bijections {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        /// Size of the anchored vertex set W = {1..SIZE} (complete graphs only).
        #[arg(long, value_name = "SIZE")]
        w: Option<usize>,
    },
    /// Strong Lefschetz check for the truncated graphic matroid of rank r.
    Slp {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        r: usize,
        /// Coefficients of the linear form, comma separated (default all ones).
        #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
        point: Option<Vec<String>>,
    },
    /// The graphic matroid truncated to rank r.
    Matroid {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        r: usize,
        /// Check the basis exchange axiom.
        #[arg(long)]
        verify_axioms: bool,
    },
    /// List the spanning forests with k components in canonical order.
    Enumerate {
        #[command(flatten)]
        graph: GraphArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        count_only: bool,
    },
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct GraphArgs {
    /// Complete graph K_N.
    #[arg(long, value_name = "N")]
    complete: Option<usize>,
    /// Complete bipartite graph K_{M,N}.
    #[arg(long, num_args = 2, value_names = ["M", "N"])]
    bipartite: Option<Vec<usize>>,
}

impl GraphArgs {
    fn build(&self) -> Result<Graph, Error> {
        match (&self.complete, &self.bipartite) {
            (Some(n), None) => complete_graph(*n),
            (None, Some(mn)) => complete_bipartite_graph(mn[0], mn[1]),
            _ => unreachable!("clap enforces exactly one graph"),
        }
    }
}

fn configure_threads() -> Result<(), String> {
    let Ok(raw) = std::env::var("FOREST_SPECTRA_THREADS") else { return Ok(()) };
    let threads: usize = raw
        .trim()
        .parse()
        .ok()
        .filter(|&t| t > 0)
        .ok_or_else(|| format!("FOREST_SPECTRA_THREADS must be a positive integer, got {raw:?}"))?;
    rayon::ThreadPoolBuilder::new().num_threads(threads).build_global().map_err(|e| e.to_string())
}

fn run(command: &Command) -> Result<Report, Error> {
    match command {
        Command::Spectrum { graph, k, matrix } => commands::spectrum(&graph.build()?, *k, *matrix),
        Command::Bijections { graph, k, w } => commands::bijections(&graph.build()?, *k, *w),
        Command::Slp { graph, r, point } => commands::slp(&graph.build()?, *r, point.as_deref()),
        Command::Matroid { graph, r, verify_axioms } => commands::matroid(&graph.build()?, *r, *verify_axioms),
        Command::Enumerate { graph, k, count_only } => commands::enumerate(&graph.build()?, *k, *count_only),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Err(msg) = configure_threads() {
        eprintln!("error: {msg}");
        return ExitCode::from(2);
    }
    let start = Instant::now();
    match run(&cli.command) {
        Ok(report) => {
            let ok = report.passed();
            println!("{}", report.into_json(start.elapsed()));
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(err @ Error::StructureViolation(_)) => {
            eprintln!("verification failed: {err}");
            ExitCode::from(1)
        }
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}
