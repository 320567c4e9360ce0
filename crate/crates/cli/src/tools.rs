use std::fs::File;
use std::hint::black_box;
use std::io::{BufReader, Write};
use std::path::PathBuf;
use std::process::ExitCode;
use std::time::{Duration, Instant};

use adsrank::gen::{gnm, Lengths};
use adsrank::oracle::exact_reverse_ranks;
use adsrank::sketch::{assign_ranks, build_ads, BuildSchedule, RankAssignMode};
use adsrank::store::save_sketches;
use adsrank::{
    dijkstra, load_edge_list, reverse_rank_sorted, EstimationLists, Estimator, Graph, NodeId, RevRankOptions,
};
use anyhow::{bail, Context, Result};
use clap::Args;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::common::{load_graph, Manifest, Output};
use crate::{Cli, GraphArgs};

#[derive(Args, Debug)]
pub struct BuildArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    /// Batch growth parameter of the batched builder.
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    /// Worker threads of the batched builder.
    #[arg(long, default_value_t = 1)]
    pub workers: usize,
    /// Use the sequential builder.
    #[arg(long)]
    pub sequential: bool,
    /// Rank assignment: permutation or hash.
    #[arg(long, default_value = "permutation")]
    pub rank_assign: String,
    #[arg(long, default_value_t = 1)]
    pub rank_seed: u64,
    /// Estimation lists to store: bottom-k, hip or both.
    #[arg(long, default_value = "both")]
    pub estimator: String,
    /// Sketch file name inside the output directory.
    #[arg(long, default_value = "sketches.ads")]
    pub output: String,
}

pub fn build(cli: &Cli, a: &BuildArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mode: RankAssignMode = a.rank_assign.parse()?;
    let estimators = match a.estimator.as_str() {
        "both" => vec![Estimator::BottomK, Estimator::Hip],
        other => vec![other.parse::<Estimator>()?],
    };
    let schedule = if a.sequential {
        BuildSchedule::Sequential
    } else {
        BuildSchedule::Batched {
            mu: a.mu,
            workers: a.workers,
        }
    };
    let ranks = assign_ranks(&g, mode, a.rank_seed);
    let (set, stats) = build_ads(&g, a.k, &ranks, schedule)?;
    let lists: Vec<EstimationLists> = estimators.iter().map(|&e| EstimationLists::build(&set, e)).collect();
    let path = out.path(&a.output);
    save_sketches(&path, &set, &lists.iter().collect::<Vec<_>>())
        .with_context(|| format!("cannot write sketch file {}", path.display()))?;

    let mut manifest = Manifest::new("build");
    manifest.graph(&a.graph, &g);
    manifest.set("k", a.k);
    manifest.set("rank_assign", mode);
    manifest.set("rank_seed", a.rank_seed);
    match schedule {
        BuildSchedule::Sequential => manifest.set("schedule", "sequential"),
        BuildSchedule::Batched { mu, workers } => {
            manifest.set("schedule", "batched");
            manifest.set("mu", mu);
            manifest.set("workers", workers);
        }
    }
    manifest.set(
        "estimators",
        estimators.iter().map(|e| e.as_str()).collect::<Vec<_>>().join(";"),
    );
    manifest.set("output", &a.output);
    manifest.set("entries", set.total_entries());
    manifest.set("members", set.total_members());
    manifest.set("kept", stats.kept);
    manifest.set("discarded", stats.discarded);
    manifest.set("overhead", stats.overhead());
    manifest.set("batches", stats.batches);
    manifest.set("scans_inserted", stats.scans_inserted);
    manifest.set("scans_pruned", stats.scans_pruned);
    manifest.set("arcs_relaxed", stats.arcs_relaxed);
    manifest.set("elapsed_ms", stats.elapsed.as_secs_f64() * 1e3);
    manifest.write(&out, "build")?;
    println!(
        "built {} sketches ({} entries) in {:.1}ms; wrote {}",
        g.node_count(),
        set.total_entries(),
        stats.elapsed.as_secs_f64() * 1e3,
        path.display()
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct VerifyArgs {
    /// Nodes per random graph.
    #[arg(long, default_value_t = 32)]
    pub n: usize,
    #[arg(long, default_value_t = 20)]
    pub trials: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
}

/// Checks one graph at saturation; returns the number of mismatches.
fn verify_graph(g: &Graph, seed: u64) -> Result<usize> {
    let n = g.node_count();
    let ranks = assign_ranks(g, RankAssignMode::Permutation, seed);
    let (set, _) = build_ads(g, n, &ranks, BuildSchedule::Sequential)?;
    let (batched, _) = build_ads(g, n, &ranks, BuildSchedule::Batched { mu: 0.5, workers: 1 })?;
    let mut bad = usize::from(set != batched);
    let lists = EstimationLists::build(&set, Estimator::BottomK);
    let opts = RevRankOptions {
        cutoff: None,
        include_unreachable: true,
    };
    for i in g.rankees() {
        let exact = exact_reverse_ranks(g, i)?;
        let items: Vec<_> = reverse_rank_sorted(g, &lists, &[i], opts)?.collect();
        if items.len() != n {
            bad += 1;
        }
        let mut seen = vec![false; n];
        let mut prev = f64::NEG_INFINITY;
        for it in &items {
            let e = exact[it.node as usize];
            if seen[it.node as usize] || it.rank.upper < prev || it.dist != e.dist || it.rank != e.estimate() {
                bad += 1;
            }
            seen[it.node as usize] = true;
            prev = it.rank.upper;
        }
    }
    Ok(bad)
}

pub fn verify(cli: &Cli, a: &VerifyArgs) -> Result<ExitCode> {
    if a.n < 2 {
        bail!("--n must be at least 2");
    }
    let out = Output::new(cli)?;
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut failed = 0;
    for trial in 0..a.trials {
        let m = rng.random_range(a.n..=4 * a.n);
        let directed = rng.random_bool(0.5);
        let lengths = if rng.random_bool(0.5) {
            Lengths::Integer(1, 3)
        } else {
            Lengths::Uniform(0.5, 2.0)
        };
        let g = gnm(a.n, m, directed, lengths, rng.random())?;
        let bad = verify_graph(&g, rng.random())?;
        if bad > 0 {
            failed += 1;
            println!("trial {trial}: {bad} mismatches (m={m}, directed={directed}, lengths={lengths:?})");
        }
    }
    let mut manifest = Manifest::new("verify");
    manifest.set("n", a.n);
    manifest.set("trials", a.trials);
    manifest.set("seed", a.seed);
    manifest.set("k", a.n);
    manifest.set("rank_assign", RankAssignMode::Permutation);
    manifest.set("failed_trials", failed);
    manifest.write(&out, "verify")?;
    if failed == 0 {
        println!("PASS: {} trials with n={} match the exact oracle", a.trials, a.n);
        Ok(ExitCode::SUCCESS)
    } else {
        println!("FAIL: {failed} of {} trials disagree with the exact oracle", a.trials);
        Ok(ExitCode::from(1))
    }
}

#[derive(Args, Debug)]
pub struct BenchArgs {
    /// Edge list to benchmark on; a random graph is generated otherwise.
    #[arg(long)]
    pub graph: Option<PathBuf>,
    #[arg(long)]
    pub directed: bool,
    #[arg(long, default_value_t = 1.0)]
    pub default_length: f64,
    /// Nodes of the generated graph.
    #[arg(long, default_value_t = 10_000)]
    pub gen_n: usize,
    /// Arcs of the generated graph (directed, unit lengths).
    #[arg(long, default_value_t = 100_000)]
    pub gen_m: usize,
    #[arg(long, default_value_t = 16)]
    pub k: usize,
    /// Number of random query sources.
    #[arg(long, default_value_t = 20)]
    pub sources: usize,
    #[arg(long, default_value_t = 1)]
    pub seed: u64,
    #[arg(long, default_value_t = 0.1)]
    pub mu: f64,
    /// Worker counts of the batched builds.
    #[arg(long, value_delimiter = ',', default_value = "1")]
    pub workers: Vec<usize>,
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1e3
}

pub fn bench(cli: &Cli, a: &BenchArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let mut manifest = Manifest::new("bench");
    let g = match &a.graph {
        Some(p) => {
            let f = File::open(p).with_context(|| format!("cannot open graph file {}", p.display()))?;
            manifest.set("graph", p.display());
            load_edge_list(BufReader::new(f), a.directed, a.default_length)
                .with_context(|| format!("cannot parse graph file {}", p.display()))?
        }
        None => {
            manifest.set("graph", format!("gnm(n={}, m={}, seed={})", a.gen_n, a.gen_m, a.seed));
            gnm(a.gen_n, a.gen_m, true, Lengths::Unit, a.seed)?
        }
    };
    manifest.set("nodes", g.node_count());
    manifest.set("arcs", g.arc_count());
    manifest.set("k", a.k);
    manifest.set("rank_assign", RankAssignMode::Permutation);
    manifest.set("rank_seed", a.seed);

    let ranks = assign_ranks(&g, RankAssignMode::Permutation, a.seed);
    let mut w = out.create("bench_build.csv")?;
    writeln!(w, "schedule,mu,workers,elapsed_ms,kept,discarded,overhead")?;
    let (set, stats) = build_ads(&g, a.k, &ranks, BuildSchedule::Sequential)?;
    writeln!(
        w,
        "sequential,,1,{:.3},{},{},{}",
        ms(stats.elapsed),
        stats.kept,
        stats.discarded,
        stats.overhead()
    )?;
    for &workers in &a.workers {
        let (_, s) = build_ads(&g, a.k, &ranks, BuildSchedule::Batched { mu: a.mu, workers })?;
        writeln!(
            w,
            "batched,{},{workers},{:.3},{},{},{}",
            a.mu,
            ms(s.elapsed),
            s.kept,
            s.discarded,
            s.overhead()
        )?;
    }
    w.flush()?;

    let lists = EstimationLists::build(&set, Estimator::BottomK);
    let rankees: Vec<NodeId> = g.rankees().collect();
    if rankees.is_empty() {
        bail!("graph has no rankees");
    }
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    let mut w = out.create("bench_queries.csv")?;
    writeln!(w, "source,dijkstra_ms,rr_query_ms,ratio")?;
    let (mut t_dij, mut t_rr) = (Duration::ZERO, Duration::ZERO);
    for _ in 0..a.sources {
        let s = rankees[rng.random_range(0..rankees.len())];
        let t0 = Instant::now();
        black_box(dijkstra(&g, s, true)?.scan_order.len());
        let d = t0.elapsed();
        let t1 = Instant::now();
        black_box(reverse_rank_sorted(&g, &lists, &[s], RevRankOptions::default())?.count());
        let r = t1.elapsed();
        t_dij += d;
        t_rr += r;
        writeln!(
            w,
            "{},{:.3},{:.3},{:.3}",
            g.external_id(s),
            ms(d),
            ms(r),
            r.as_secs_f64() / d.as_secs_f64()
        )?;
    }
    w.flush()?;
    let ratio = t_rr.as_secs_f64() / t_dij.as_secs_f64();
    manifest.set("sources", a.sources);
    manifest.set("seed", a.seed);
    manifest.set("mu", a.mu);
    manifest.set("sequential_build_ms", ms(stats.elapsed));
    manifest.set("rr_over_dijkstra", ratio);
    manifest.write(&out, "bench")?;
    println!(
        "sequential build {:.1}ms; rr-query over dijkstra {ratio:.2} across {} sources",
        ms(stats.elapsed),
        a.sources
    );
    Ok(ExitCode::SUCCESS)
}
