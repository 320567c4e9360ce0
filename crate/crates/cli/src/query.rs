use std::io::Write;
use std::process::ExitCode;

use adsrank::oracle::exact_reverse_ranks;
use adsrank::{dijkstra, reverse_rank_sorted, Graph, RevRankOptions, UNREACHABLE};
use anyhow::{bail, Result};
use clap::Args;

use crate::common::{bottom_k_lists, dense_ids, join, load_graph, Manifest, Output};
use crate::{Cli, GraphArgs, SketchArgs};

#[derive(Args, Debug)]
pub struct RrQueryArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Source node (external id); repeat for a multi-source query.
    #[arg(long = "source", required = true)]
    pub sources: Vec<u64>,
    /// Emit at most this many rows.
    #[arg(long)]
    pub top: Option<usize>,
    /// Stop at the first node whose upper rank estimate exceeds this value.
    #[arg(long)]
    pub cutoff: Option<f64>,
    /// Append nodes that cannot reach any source.
    #[arg(long)]
    pub include_unreachable: bool,
    /// Output CSV file name inside the output directory.
    #[arg(long, default_value = "rr_query.csv")]
    pub output: String,
}

fn fmt_dist(d: f64) -> String {
    if d == UNREACHABLE {
        "inf".to_string()
    } else {
        d.to_string()
    }
}

pub fn rr_query(cli: &Cli, a: &RrQueryArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mut manifest = Manifest::new("rr-query");
    manifest.graph(&a.graph, &g);
    let lists = bottom_k_lists(&g, &a.sketch, &mut manifest)?;
    let sources = dense_ids(&g, &a.sources)?;
    let opts = RevRankOptions {
        cutoff: a.cutoff,
        include_unreachable: a.include_unreachable,
    };
    let stream = reverse_rank_sorted(&g, &lists, &sources, opts)?;
    let mut w = out.create(&a.output)?;
    writeln!(w, "node,dist,rank_lower,rank_upper")?;
    let mut rows = 0usize;
    for item in stream.take(a.top.unwrap_or(usize::MAX)) {
        writeln!(
            w,
            "{},{},{},{}",
            g.external_id(item.node),
            fmt_dist(item.dist),
            item.rank.lower,
            item.rank.upper
        )?;
        rows += 1;
    }
    w.flush()?;
    manifest.set("sources", join(&a.sources));
    manifest.set("top", a.top.map_or("-".to_string(), |t| t.to_string()));
    manifest.set("cutoff", a.cutoff.map_or("-".to_string(), |t| t.to_string()));
    manifest.set("include_unreachable", a.include_unreachable);
    manifest.set("output", &a.output);
    manifest.set("rows", rows);
    manifest.write(&out, "rr_query")?;
    println!("wrote {rows} rows to {}", out.path(&a.output).display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct RankDistArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    #[command(flatten)]
    pub sketch: SketchArgs,
    /// Source node (external id); each gets its own distribution.
    #[arg(long = "source", required = true)]
    pub sources: Vec<u64>,
    /// Use exact reverse ranks from full Dijkstra runs instead of sketches.
    #[arg(long)]
    pub exact: bool,
    #[arg(long, default_value = "rank_dist.csv")]
    pub output: String,
}

/// `(value, count of rankers at or below value)` for distinct values.
fn cumulative(mut values: Vec<f64>) -> Vec<(f64, usize)> {
    values.sort_by(f64::total_cmp);
    let mut out: Vec<(f64, usize)> = Vec::new();
    for (i, v) in values.into_iter().enumerate() {
        match out.last_mut() {
            Some(last) if last.0 == v => last.1 = i + 1,
            _ => out.push((v, i + 1)),
        }
    }
    out
}

fn write_distribution(w: &mut impl Write, g: &Graph, source: u64, rows: &[(f64, usize)]) -> Result<()> {
    let z = g.ranker_count().max(1) as f64;
    for &(v, c) in rows {
        writeln!(w, "{source},{},{c},{}", fmt_dist(v), c as f64 / z)?;
    }
    Ok(())
}

pub fn rank_dist(cli: &Cli, a: &RankDistArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mut manifest = Manifest::new("rank-dist");
    manifest.graph(&a.graph, &g);
    let sources = dense_ids(&g, &a.sources)?;
    let lists = if a.exact {
        manifest.set("ranks", "exact");
        None
    } else {
        manifest.set("ranks", "estimated");
        Some(bottom_k_lists(&g, &a.sketch, &mut manifest)?)
    };
    let mut w = out.create(&a.output)?;
    writeln!(w, "source,rank,count,fraction")?;
    for (&s, &ext) in sources.iter().zip(&a.sources) {
        if !g.is_rankee(s) {
            bail!("source {ext} is not a rankee");
        }
        let ranks: Vec<f64> = match &lists {
            Some(lists) => reverse_rank_sorted(&g, lists, &[s], RevRankOptions::default())?
                .filter(|it| g.is_ranker(it.node))
                .map(|it| it.rank.upper)
                .collect(),
            None => {
                let table = exact_reverse_ranks(&g, s)?;
                g.rankers()
                    .filter(|&z| table[z as usize].dist != UNREACHABLE)
                    .map(|z| table[z as usize].upper as f64)
                    .collect()
            }
        };
        write_distribution(&mut w, &g, ext, &cumulative(ranks))?;
    }
    w.flush()?;
    manifest.set("sources", join(&a.sources));
    manifest.set("output", &a.output);
    manifest.write(&out, "rank_dist")?;
    println!("wrote {}", out.path(&a.output).display());
    Ok(ExitCode::SUCCESS)
}

#[derive(Args, Debug)]
pub struct DistDistArgs {
    #[command(flatten)]
    pub graph: GraphArgs,
    /// Source node (external id); each gets its own distribution.
    #[arg(long = "source", required = true)]
    pub sources: Vec<u64>,
    #[arg(long, default_value = "dist_dist.csv")]
    pub output: String,
}

/// Distribution of the distance from each ranker to the source.
pub fn dist_dist(cli: &Cli, a: &DistDistArgs) -> Result<ExitCode> {
    let out = Output::new(cli)?;
    let g = load_graph(&a.graph, &out)?;
    let mut manifest = Manifest::new("dist-dist");
    manifest.graph(&a.graph, &g);
    let sources = dense_ids(&g, &a.sources)?;
    let mut w = out.create(&a.output)?;
    writeln!(w, "source,dist,count,fraction")?;
    for (&s, &ext) in sources.iter().zip(&a.sources) {
        let res = dijkstra(&g, s, true)?;
        let dists: Vec<f64> = g
            .rankers()
            .map(|z| res.dist[z as usize])
            .filter(|&d| d != UNREACHABLE)
            .collect();
        write_distribution(&mut w, &g, ext, &cumulative(dists))?;
    }
    w.flush()?;
    manifest.set("sources", join(&a.sources));
    manifest.set("output", &a.output);
    manifest.write(&out, "dist_dist")?;
    println!("wrote {}", out.path(&a.output).display());
    Ok(ExitCode::SUCCESS)
}
