use std::fs::{self, File};
use std::io::{BufRead, BufReader, BufWriter, Write};
use std::path::{Path, PathBuf};

use adsrank::sketch::{assign_ranks, build_ads, BuildSchedule, RankAssignMode};
use adsrank::store::load_sketches;
use adsrank::{load_edge_list, EstimationLists, Estimator, Graph, NodeId};
use anyhow::{anyhow, bail, Context, Result};

use crate::{Cli, GraphArgs, SketchArgs};

/// Ordered `key=value` run description written next to the outputs.
pub struct Manifest {
    lines: Vec<(String, String)>,
}

impl Manifest {
    pub fn new(subcommand: &str) -> Self {
        let mut m = Self { lines: Vec::new() };
        m.set("tool", "adsrank");
        m.set("version", env!("CARGO_PKG_VERSION"));
        m.set("subcommand", subcommand);
        m
    }

    pub fn set(&mut self, key: &str, value: impl ToString) {
        self.lines.push((key.to_string(), value.to_string()));
    }

    pub fn graph(&mut self, a: &GraphArgs, g: &Graph) {
        self.set("graph", a.graph.display());
        self.set("directed", a.directed);
        self.set("default_length", a.default_length);
        self.set("rankees_file", opt_path(&a.rankees));
        self.set("rankers_file", opt_path(&a.rankers));
        self.set("nodes", g.node_count());
        self.set("arcs", g.arc_count());
        self.set("rankee_count", g.rankee_count());
        self.set("ranker_count", g.ranker_count());
    }

    pub fn write(&self, out: &Output, name: &str) -> Result<()> {
        let mut w = out.create(&format!("{name}.manifest"))?;
        for (k, v) in &self.lines {
            writeln!(w, "{k}={v}")?;
        }
        w.flush()?;
        Ok(())
    }
}

fn opt_path(p: &Option<PathBuf>) -> String {
    p.as_ref().map_or_else(|| "-".to_string(), |p| p.display().to_string())
}

pub struct Output {
    pub dir: PathBuf,
}

impl Output {
    pub fn new(cli: &Cli) -> Result<Self> {
        fs::create_dir_all(&cli.out_dir)
            .with_context(|| format!("cannot create output directory {}", cli.out_dir.display()))?;
        Ok(Self {
            dir: cli.out_dir.clone(),
        })
    }

    pub fn path(&self, name: &str) -> PathBuf {
        self.dir.join(name)
    }

    pub fn create(&self, name: &str) -> Result<BufWriter<File>> {
        let p = self.path(name);
        let f = File::create(&p).with_context(|| format!("cannot create {}", p.display()))?;
        Ok(BufWriter::new(f))
    }
}

fn read_id_list(path: &Path) -> Result<Vec<u64>> {
    let f = File::open(path).with_context(|| format!("cannot open id list {}", path.display()))?;
    let mut ids = Vec::new();
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        ids.push(t.parse().map_err(|_| anyhow!("{}:{}: invalid node id `{t}`", path.display(), i + 1))?);
    }
    Ok(ids)
}

fn mask(g: &Graph, path: &Path) -> Result<Vec<bool>> {
    let mut m = vec![false; g.node_count()];
    for ext in read_id_list(path)? {
        let v = g
            .dense_id(ext)
            .ok_or_else(|| anyhow!("{}: node {ext} does not occur in the graph", path.display()))?;
        m[v as usize] = true;
    }
    Ok(m)
}

/// Loads the graph and writes the id map when external ids were remapped.
pub fn load_graph(a: &GraphArgs, out: &Output) -> Result<Graph> {
    let f = File::open(&a.graph).with_context(|| format!("cannot open graph file {}", a.graph.display()))?;
    let mut g = load_edge_list(BufReader::new(f), a.directed, a.default_length)
        .with_context(|| format!("cannot parse graph file {}", a.graph.display()))?;
    if let Some(p) = &a.rankees {
        let m = mask(&g, p)?;
        g = g.with_rankees(m)?;
    }
    if let Some(p) = &a.rankers {
        let m = mask(&g, p)?;
        g = g.with_rankers(m)?;
    }
    if !g.ids_are_identity() {
        let mut w = out.create("id_map.csv")?;
        g.write_id_map(&mut w)?;
        w.flush()?;
    }
    Ok(g)
}

/// Bottom-k lists from a sketch file, or from sketches built in memory.
pub fn bottom_k_lists(g: &Graph, a: &SketchArgs, manifest: &mut Manifest) -> Result<EstimationLists> {
    if let Some(path) = &a.sketches {
        let stored = load_sketches(path).with_context(|| format!("cannot read sketch file {}", path.display()))?;
        stored
            .set
            .ranks()
            .check_graph(g)
            .with_context(|| format!("sketch file {} does not match the graph", path.display()))?;
        manifest.set("sketches", path.display());
        manifest.set("k", stored.set.k());
        manifest.set("rank_assign", stored.set.ranks().mode());
        manifest.set("rank_seed", stored.set.ranks().seed());
        Ok(match stored.lists_for(Estimator::BottomK) {
            Some(l) => l.clone(),
            None => EstimationLists::build(&stored.set, Estimator::BottomK),
        })
    } else {
        let mode: RankAssignMode = a.rank_assign.parse()?;
        if a.k < 1 {
            bail!("k must be at least 1");
        }
        let ranks = assign_ranks(g, mode, a.rank_seed);
        let (set, _) = build_ads(g, a.k, &ranks, BuildSchedule::Sequential)?;
        manifest.set("sketches", "in-memory");
        manifest.set("k", a.k);
        manifest.set("rank_assign", mode);
        manifest.set("rank_seed", a.rank_seed);
        Ok(EstimationLists::build(&set, Estimator::BottomK))
    }
}

/// Dense ids of external node ids.
pub fn dense_ids(g: &Graph, ext: &[u64]) -> Result<Vec<NodeId>> {
    ext.iter()
        .map(|&e| g.dense_id(e).ok_or_else(|| anyhow!("node {e} does not occur in the graph")))
        .collect()
}

pub fn join<T: ToString>(xs: &[T]) -> String {
    xs.iter().map(ToString::to_string).collect::<Vec<_>>().join(";")
}

/// Reads seeds from a CSV with a `seed_external_id` column or a plain id list.
pub fn read_seed_file(path: &Path) -> Result<Vec<u64>> {
    let f = File::open(path).with_context(|| format!("cannot open seed file {}", path.display()))?;
    let mut ids = Vec::new();
    let mut column = None;
    for (i, line) in BufReader::new(f).lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        let t = line.trim();
        if t.is_empty() || t.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = t.split(',').map(str::trim).collect();
        if column.is_none() {
            if let Some(c) = fields.iter().position(|f| *f == "seed_external_id") {
                column = Some(c);
                continue;
            }
            column = Some(0);
        }
        let c = column.unwrap();
        let tok = fields
            .get(c)
            .ok_or_else(|| anyhow!("{}:{lineno}: missing seed column", path.display()))?;
        ids.push(
            tok.parse()
                .map_err(|_| anyhow!("{}:{lineno}: invalid node id `{tok}`", path.display()))?,
        );
    }
    if ids.is_empty() {
        bail!("seed file {} lists no seeds", path.display());
    }
    Ok(ids)
}
