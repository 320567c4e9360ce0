//! `adsrank` command-line tool.

mod common;
mod influence;
mod query;
mod tools;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

#[derive(Parser, Debug)]
#[command(name = "adsrank", version, about = "All-distances sketches and reverse-rank queries")]
pub struct Cli {
    /// Directory for output files.
    #[arg(long, global = true, env = "ADSRANK_OUT", default_value = "out")]
    pub out_dir: PathBuf,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Args, Debug, Clone)]
pub struct GraphArgs {
    /// Edge list file: `u v [w]` per line, `#` comments.
    #[arg(long)]
    pub graph: PathBuf,
    /// Treat edges as directed arcs.
    #[arg(long)]
    pub directed: bool,
    /// Length of edges given without one.
    #[arg(long, default_value_t = 1.0)]
    pub default_length: f64,
    /// File of external ids (one per line) restricting the rankee set.
    #[arg(long)]
    pub rankees: Option<PathBuf>,
    /// File of external ids (one per line) restricting the ranker set.
    #[arg(long)]
    pub rankers: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SketchArgs {
    /// Sketch file written by `build`; without it sketches are built in memory.
    #[arg(long)]
    pub sketches: Option<PathBuf>,
    /// Sketch parameter k (in-memory builds).
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    /// Rank assignment: permutation or hash (in-memory builds).
    #[arg(long, default_value = "permutation")]
    pub rank_assign: String,
    /// Seed of the rank assignment (in-memory builds).
    #[arg(long, default_value_t = 1)]
    pub rank_seed: u64,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Build sketches and estimation lists and write them to a sketch file.
    Build(tools::BuildArgs),
    /// Sorted reverse-rank stream from one or more source nodes.
    RrQuery(query::RrQueryArgs),
    /// Cumulative reverse-rank distribution for the given sources.
    RankDist(query::RankDistArgs),
    /// Cumulative distance distribution for the given sources.
    DistDist(query::DistDistArgs),
    /// Sampling-based greedy influence maximization on estimated ranks.
    ImSkim(influence::ImSkimArgs),
    /// Exact greedy influence maximization.
    ImExact(influence::ImExactArgs),
    /// Estimated against exact influence of every prefix of a seed file.
    Eval(influence::EvalArgs),
    /// Compare sketch-based ranks with the exact oracle on random graphs.
    Verify(tools::VerifyArgs),
    /// Time plain Dijkstra against reverse-rank queries and sketch builds.
    Bench(tools::BenchArgs),
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Build(a) => tools::build(&cli, a),
        Command::RrQuery(a) => query::rr_query(&cli, a),
        Command::RankDist(a) => query::rank_dist(&cli, a),
        Command::DistDist(a) => query::dist_dist(&cli, a),
        Command::ImSkim(a) => influence::im_skim(&cli, a),
        Command::ImExact(a) => influence::im_exact(&cli, a),
        Command::Eval(a) => influence::eval(&cli, a),
        Command::Verify(a) => tools::verify(&cli, a),
        Command::Bench(a) => tools::bench(&cli, a),
    };
    match result {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
