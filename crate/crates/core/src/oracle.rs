//! Brute-force references: exact ranks from full Dijkstra runs. Quadratic
//! or worse; meant for graphs of at most a few thousand nodes.

use std::collections::BinaryHeap;

use crate::error::{Error, Result};
use crate::graph::{dijkstra, top_t_with, Graph, NodeId, UNREACHABLE};
use crate::influence::InfluenceSpec;
use crate::rank::{RankEstimate, RankMode};
use crate::search::Workspace;

/// Exact distance and rank range of a rankee as seen by a ranker.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ExactRank {
    pub dist: f64,
    /// Rankees strictly closer.
    pub lower: u32,
    /// Rankees at most as far; `|U|` when unreachable.
    pub upper: u32,
}

impl ExactRank {
    pub fn estimate(&self) -> RankEstimate {
        RankEstimate::new(self.lower as f64, self.upper as f64)
    }
}

/// Rankee distances from one node, sorted, for counting balls.
struct SortedBalls {
    dists: Vec<f64>,
    u_count: u32,
}

impl SortedBalls {
    fn from(g: &Graph, dist: &[f64]) -> Self {
        let mut dists: Vec<f64> = g.rankees().map(|u| dist[u as usize]).filter(|d| *d != UNREACHABLE).collect();
        dists.sort_unstable_by(f64::total_cmp);
        Self {
            dists,
            u_count: g.rankee_count() as u32,
        }
    }

    fn strict(&self, d: f64) -> u32 {
        self.dists.partition_point(|&x| x < d) as u32
    }

    fn closed(&self, d: f64) -> u32 {
        self.dists.partition_point(|&x| x <= d) as u32
    }

    fn rank(&self, d: f64) -> ExactRank {
        if d == UNREACHABLE {
            ExactRank {
                dist: d,
                lower: self.dists.len() as u32,
                upper: self.u_count,
            }
        } else {
            ExactRank {
                dist: d,
                lower: self.strict(d),
                upper: self.closed(d),
            }
        }
    }
}

/// Exact distances and rank ranges for every (ranker, rankee) pair.
#[derive(Debug, Clone)]
pub struct ExactRankTable {
    n: usize,
    ranks: Vec<ExactRank>,
}

impl ExactRankTable {
    /// Runs a full Dijkstra from every node.
    pub fn build(g: &Graph) -> Self {
        let n = g.node_count();
        let mut ranks = Vec::with_capacity(n * n);
        for j in g.nodes() {
            let res = dijkstra(g, j, false).expect("node in range");
            let balls = SortedBalls::from(g, &res.dist);
            ranks.extend(res.dist.iter().map(|&d| balls.rank(d)));
        }
        Self { n, ranks }
    }

    /// Rank of `rankee` as seen by `ranker`.
    pub fn get(&self, ranker: NodeId, rankee: NodeId) -> ExactRank {
        self.ranks[ranker as usize * self.n + rankee as usize]
    }

    pub fn node_count(&self) -> usize {
        self.n
    }
}

/// For every node `j`, the distance from `j` to rankee `i` and the rank range
/// `j` assigns to `i`.
pub fn exact_reverse_ranks(g: &Graph, i: NodeId) -> Result<Vec<ExactRank>> {
    g.check_node(i)?;
    if !g.is_rankee(i) {
        return Err(Error::NotRankee(i));
    }
    Ok(g.nodes()
        .map(|j| {
            let res = dijkstra(g, j, false).expect("node in range");
            SortedBalls::from(g, &res.dist).rank(res.dist[i as usize])
        })
        .collect())
}

/// Exact neighborhood function of one node: the rankee counts within
/// distance `d`.
#[derive(Debug, Clone, PartialEq)]
pub struct NeighborhoodFunction {
    /// `(distance, rankees within that distance)` at each distinct rankee
    /// distance, increasing.
    pub steps: Vec<(f64, u32)>,
}

impl NeighborhoodFunction {
    /// `n_i(d)`.
    pub fn closed(&self, d: f64) -> u32 {
        let idx = self.steps.partition_point(|&(x, _)| x <= d);
        if idx == 0 {
            0
        } else {
            self.steps[idx - 1].1
        }
    }

    /// Rankees strictly closer than `d`.
    pub fn strict(&self, d: f64) -> u32 {
        let idx = self.steps.partition_point(|&(x, _)| x < d);
        if idx == 0 {
            0
        } else {
            self.steps[idx - 1].1
        }
    }
}

pub fn exact_neighborhood_function(g: &Graph, i: NodeId) -> Result<NeighborhoodFunction> {
    let res = dijkstra(g, i, false)?;
    let balls = SortedBalls::from(g, &res.dist);
    let mut steps: Vec<(f64, u32)> = Vec::new();
    for (idx, &d) in balls.dists.iter().enumerate() {
        match steps.last_mut() {
            Some(last) if last.0 == d => last.1 = idx as u32 + 1,
            _ => steps.push((d, idx as u32 + 1)),
        }
    }
    Ok(NeighborhoodFunction { steps })
}

/// Number of rankers placing some seed within their top `t`.
pub fn evaluate_influence_exact(g: &Graph, seeds: &[NodeId], t: usize, mode: RankMode) -> Result<usize> {
    let mut is_seed = vec![false; g.node_count()];
    for &s in seeds {
        g.check_node(s)?;
        is_seed[s as usize] = true;
    }
    if seeds.is_empty() || t == 0 {
        return Ok(0);
    }
    let mut ws = Workspace::new(g.node_count());
    let mut heap = BinaryHeap::new();
    Ok(g.rankers()
        .filter(|&z| {
            top_t_with(g, &mut ws, &mut heap, z, t, mode)
                .iter()
                .any(|&(u, _)| is_seed[u as usize])
        })
        .count())
}

/// Exact `Σ_z β(z) α(π_zS)` under a general influence spec; rankers that
/// reach no seed contribute nothing.
pub fn evaluate_influence_exact_spec(g: &Graph, seeds: &[NodeId], spec: &InfluenceSpec) -> Result<f64> {
    spec.validate(g)?;
    for &s in seeds {
        g.check_node(s)?;
    }
    let mut total = 0.0;
    for z in g.rankers() {
        let res = dijkstra(g, z, false)?;
        let d = seeds.iter().map(|&s| res.dist[s as usize]).fold(UNREACHABLE, f64::min);
        if d == UNREACHABLE {
            continue;
        }
        let rank = SortedBalls::from(g, &res.dist).rank(d).estimate().value(spec.rank_mode);
        total += spec.beta.weight(z) * spec.alpha.eval(rank);
    }
    Ok(total)
}
