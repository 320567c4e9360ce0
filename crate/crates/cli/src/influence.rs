use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use adsrank::influence::{
    evaluate_influence_est, exact_greedy_im, greedy_im_estimated, skim_im, Alpha, Beta, InfluenceSpec, SeedList,
    SkimParams, StopRule,
};
use adsrank::oracle::evaluate_influence_exact_spec;
use adsrank::{Graph, RankMode};
use anyhow::{anyhow, bail, Context, Result};
use clap::Args;

use crate::common::{bottom_k_lists, dense_ids, load_graph, read_seed_file, Manifest, Output};
use crate::{Cli, GraphArgs, SketchArgs};

fn write_seeds(out: &Output, name: &str, g: &Graph, seeds: &SeedList) -> Result<()> {
    let mut w = out.create(name)?;
    writeln!(w, "seed_external_id,marginal,cumulative,cumulative_fraction")?;
    let z = seeds.ranker_count.max(1) as f64;
    for (e, c) in seeds.entries.iter().zip(seeds.cumulative()) {
        writeln!(w, "{},{},{c},{}", g.external_id(e.seed), e.marginal, c as f64 / z)?;
    }
    w.flush()?;
    Ok(())
}

#[derive(Args, Debug)]
pub struct ImSkimArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Rank threshold T.
    #[arg(long)]
    pub t: f64,
    /// Sample size K at which a rankee becomes the next seed.
    #[arg(long = "samples", short = 'K', default_value_t = SkimParams::DEFAULT_K)]
    pub samples: usize,
    /// Seed of the ranker shuffle.
    #[arg(long, default_value_t = 1)]
    pub shuffle_seed: u64,
    /// Stop after this many seeds.
    #[arg(long, conflicts_with = "coverage_target")]
    pub max_seeds: Option<usize>,
    /// Stop once this fraction of rankers is covered.
    #[arg(long)]
    pub coverage_target: Option<f64>,
    #[arg(long, default_value = "seeds.csv")]
    pub output: String,
}

pub fn im_skim(cli: &Cli, a: &ImSkimArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mut manifest = Manifest::new("im-skim");
    manifest.graph(&a.graph, &g);
    let lists = bottom_k_lists(&g, &a.sketch, &mut manifest)?;
    let stop = match (a.max_seeds, a.coverage_target) {
        (Some(s), _) => StopRule::MaxSeeds(s),
        (None, Some(f)) => StopRule::CoverageTarget(f),
        (None, None) => StopRule::Exhaust,
    };
    let params = SkimParams {
        t: a.t,
        k: a.samples,
        shuffle_seed: a.shuffle_seed,
        stop,
    };
    let res = skim_im(&g, &lists, &params)?;
    write_seeds(&out, &a.output, &g, &res.seeds)?;
    manifest.set("t", a.t);
    manifest.set("samples", a.samples);
    manifest.set("shuffle_seed", a.shuffle_seed);
    manifest.set("stop", format!("{stop:?}"));
    manifest.set("output", &a.output);
    manifest.set("seeds", res.seeds.len());
    manifest.set("covered", res.seeds.total());
    manifest.set("seeds_by_sample", res.stats.seeds_by_sample);
    manifest.write(&out, "im_skim")?;
    println!(
        "selected {} seeds covering {} of {} rankers; wrote {}",
        res.seeds.len(),
        res.seeds.total(),
        g.ranker_count(),
        out.path(&a.output).display()
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct ImExactArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Rank threshold T.
    #[arg(long)]
    pub t: usize,
    #[arg(long)]
    pub max_seeds: Option<usize>,
    /// Rank interpretation: upper, lower_plus_one or midpoint.
    #[arg(long, default_value = "upper")]
    pub rank_mode: String,
    /// Run the greedy on sketch-estimated ranks instead of exact ranks.
    #[arg(long)]
    pub estimated: bool,
    #[arg(long, default_value = "seeds.csv")]
    pub output: String,
}

pub fn im_exact(cli: &Cli, a: &ImExactArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mut manifest = Manifest::new("im-exact");
    manifest.graph(&a.graph, &g);
    let mode: RankMode = a.rank_mode.parse()?;
    let seeds = if a.estimated {
        let lists = bottom_k_lists(&g, &a.sketch, &mut manifest)?;
        greedy_im_estimated(&g, &lists, a.t as f64, a.max_seeds, mode)?
    } else {
        exact_greedy_im(&g, a.t, a.max_seeds, mode)?
    };
    write_seeds(&out, &a.output, &g, &seeds)?;
    manifest.set("t", a.t);
    manifest.set("max_seeds", a.max_seeds.map_or("-".to_string(), |s| s.to_string()));
    manifest.set("rank_mode", mode);
    manifest.set("ranks", if a.estimated { "estimated" } else { "exact" });
    manifest.set("output", &a.output);
    manifest.set("seeds", seeds.len());
    manifest.set("covered", seeds.total());
    manifest.write(&out, "im_exact")?;
    println!(
        "selected {} seeds covering {} of {} rankers; wrote {}",
        seeds.len(),
        seeds.total(),
        g.ranker_count(),
        out.path(&a.output).display()
    );
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct EvalArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Seeds: a seeds CSV (column `seed_external_id`) or one id per line.
    #[arg(long)]
    pub seeds: PathBuf,
    /// Decay function: threshold, reciprocal or table.
    #[arg(long, default_value = "threshold")]
    pub alpha: String,
    /// Threshold T for `--alpha threshold`.
    #[arg(long)]
    pub t: Option<f64>,
    /// Breakpoints `x:v,x:v,...` for `--alpha table`.
    #[arg(long)]
    pub alpha_table: Option<String>,
    /// Ranker weights, `external_id weight` per line; unlisted rankers weigh 0.
    #[arg(long)]
    pub weights: Option<PathBuf>,
    #[arg(long, default_value = "upper")]
    pub rank_mode: String,
    #[arg(long, default_value = "eval.csv")]
    pub output: String,
}

fn parse_alpha(a: &EvalArgs) -> Result<Alpha> {
    Ok(match a.alpha.as_str() {
        "threshold" => Alpha::Threshold(a.t.ok_or_else(|| anyhow!("--alpha threshold needs --t"))?),
        "reciprocal" => Alpha::Reciprocal,
        "table" => {
            let spec = a.alpha_table.as_deref().ok_or_else(|| anyhow!("--alpha table needs --alpha-table"))?;
            let mut points = Vec::new();
            for part in spec.split(',') {
                let (x, v) = part.split_once(':').ok_or_else(|| anyhow!("bad breakpoint `{part}`, want x:v"))?;
                let x: f64 = x.trim().parse().map_err(|_| anyhow!("bad breakpoint `{part}`"))?;
                let v: f64 = v.trim().parse().map_err(|_| anyhow!("bad breakpoint `{part}`"))?;
                points.push((x, v));
            }
            Alpha::Table(points)
        }
        other => bail!("unknown alpha `{other}`; use threshold, reciprocal or table"),
    })
}

fn parse_weights(g: &Graph, path: &PathBuf) -> Result<Beta> {
    let text = std::fs::read_to_string(path).with_context(|| format!("cannot open weights file {}", path.display()))?;
    let mut w = vec![0.0; g.node_count()];
    for (i, line) in text.lines().enumerate() {
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let bad = || anyhow!("{}:{}: want `external_id weight`", path.display(), i + 1);
        let mut it = t.split_whitespace();
        let id: u64 = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let weight: f64 = it.next().and_then(|x| x.parse().ok()).ok_or_else(bad)?;
        let v = g.dense_id(id).ok_or_else(|| anyhow!("{}: node {id} does not occur in the graph", path.display()))?;
        w[v as usize] = weight;
    }
    Ok(Beta::Weights(w))
}

pub fn eval(cli: &Cli, a: &EvalArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mut manifest = Manifest::new("eval");
    manifest.graph(&a.graph, &g);
    let lists = bottom_k_lists(&g, &a.sketch, &mut manifest)?;
    let seeds_ext = read_seed_file(&a.seeds)?;
    let seeds = dense_ids(&g, &seeds_ext)?;
    let spec = InfluenceSpec {
        alpha: parse_alpha(a)?,
        beta: match &a.weights {
            Some(p) => parse_weights(&g, p)?,
            None => Beta::Uniform,
        },
        rank_mode: a.rank_mode.parse()?,
    };
    spec.validate(&g)?;
    let mut w = out.create(&a.output)?;
    writeln!(w, "prefix,seed_external_id,estimated_influence,exact_influence")?;
    let mut last = (0.0, 0.0);
    for i in 1..=seeds.len() {
        let est = evaluate_influence_est(&g, &lists, &seeds[..i], &spec)?;
        let exact = evaluate_influence_exact_spec(&g, &seeds[..i], &spec)?;
        writeln!(w, "{i},{},{est},{exact}", seeds_ext[i - 1])?;
        last = (est, exact);
    }
    w.flush()?;
    manifest.set("seeds_file", a.seeds.display());
    manifest.set("alpha", format!("{:?}", spec.alpha));
    manifest.set("weights", a.weights.as_ref().map_or("uniform".to_string(), |p| p.display().to_string()));
    manifest.set("rank_mode", spec.rank_mode);
    manifest.set("output", &a.output);
    manifest.write(&out, "eval")?;
    println!(
        "{} seeds: estimated influence {}, exact {}; wrote {}",
        seeds.len(),
        last.0,
        last.1,
        out.path(&a.output).display()
    );
    Ok(ExitCode::SUCCESS)
}
