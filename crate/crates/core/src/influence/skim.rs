use std::cmp::Reverse;
use std::collections::BinaryHeap;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::{SeedEntry, SeedList};
use crate::error::{invalid, Error, Result};
use crate::estimate::{EstimationLists, Estimator};
use crate::graph::{forward_scan, Graph, NodeId};
use crate::reverse::{RevRankOptions, RevRankStream, RevRankWorkspace};
use crate::search::Workspace;

#[derive(Debug, Clone, Copy, PartialEq)]
pub enum StopRule {
    /// Stop after this many seeds.
    MaxSeeds(usize),
    /// Stop once this fraction of the rankers is covered; the seed that
    /// crosses the target is kept.
    CoverageTarget(f64),
    /// Run until every ranker is covered or no rankee adds coverage.
    Exhaust,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SkimParams {
    /// Rank threshold `T`.
    pub t: f64,
    /// Sample size `K` at which a rankee becomes the next seed.
    pub k: usize,
    pub shuffle_seed: u64,
    pub stop: StopRule,
}

impl SkimParams {
    pub const DEFAULT_K: usize = 512;
}

/// Per node, the best estimated rank of any selected seed and the matching
/// smallest distance; `∞` for nodes no seed covers within `T`.
#[derive(Debug, Clone, PartialEq)]
pub struct BestSeedTable {
    pub rank: Vec<f64>,
    pub dist: Vec<f64>,
}

impl BestSeedTable {
    fn new(n: usize) -> Self {
        Self {
            rank: vec![f64::INFINITY; n],
            dist: vec![f64::INFINITY; n],
        }
    }

    pub fn is_covered(&self, z: NodeId) -> bool {
        self.rank[z as usize] < f64::INFINITY
    }

    /// Whether a seed at `(rank, dist)` from `z` is no better than the
    /// current best.
    fn dominated(&self, z: NodeId, rank: f64, dist: f64) -> bool {
        let r = self.rank[z as usize];
        r < rank || (r == rank && self.dist[z as usize] <= dist)
    }
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct SkimStats {
    /// Seeds chosen because their sample reached `K`; the rest came from
    /// the argmax fallback.
    pub seeds_by_sample: u64,
    pub sampling_searches: u64,
    pub samples: u64,
    pub reverse_scans: u64,
    pub reverse_pruned: u64,
    pub arcs_relaxed: u64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct SkimResult {
    pub seeds: SeedList,
    pub best: BestSeedTable,
    pub stats: SkimStats,
}

/// Sampling-based greedy maximization of the estimated threshold influence
/// (uniform ranker weights, upper rank estimates).
pub fn skim_im(g: &Graph, lists: &EstimationLists, params: &SkimParams) -> Result<SkimResult> {
    lists.require(Estimator::BottomK)?;
    if lists.node_count() != g.node_count() {
        return Err(Error::Mismatch("estimation lists do not match the graph".into()));
    }
    if params.k < 1 {
        return Err(invalid("K must be at least 1"));
    }
    if !(params.t >= 1.0) {
        return Err(invalid("T must be at least 1"));
    }
    match params.stop {
        StopRule::MaxSeeds(0) => return Err(invalid("max seeds must be at least 1")),
        StopRule::CoverageTarget(f) if !(f > 0.0 && f <= 1.0) => {
            return Err(invalid("coverage target must be in (0, 1]"))
        }
        _ => {}
    }

    let n = g.node_count();
    let t = params.t;
    let k = params.k as u32;
    let ranker_count = g.ranker_count();
    let mut best = BestSeedTable::new(n);
    let mut size = vec![0u32; n];
    let mut index: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    let mut shuffled: Vec<NodeId> = g.rankers().collect();
    shuffled.shuffle(&mut ChaCha8Rng::seed_from_u64(params.shuffle_seed));
    let mut next_in_shuffle = 0;
    let mut fallback: Option<BinaryHeap<(u32, Reverse<NodeId>)>> = None;
    let mut fwd = Workspace::new(n);
    let mut fwd_heap = BinaryHeap::new();
    let mut rev = RevRankWorkspace::new(n);
    let mut seeds = SeedList {
        entries: Vec::new(),
        ranker_count,
    };
    let mut stats = SkimStats::default();
    let mut covered = 0usize;

    while covered < ranker_count {
        let mut next = None;
        while next.is_none() && next_in_shuffle < shuffled.len() {
            let z = shuffled[next_in_shuffle];
            next_in_shuffle += 1;
            if best.is_covered(z) {
                continue;
            }
            stats.sampling_searches += 1;
            forward_scan(g, &mut fwd, &mut fwd_heap, z, |v, d| {
                if !g.is_rankee(v) {
                    return true;
                }
                if lists.rank(z, d).upper > t {
                    return false;
                }
                stats.samples += 1;
                size[v as usize] += 1;
                index[z as usize].push(v);
                if size[v as usize] == k {
                    next = Some(v);
                    return false;
                }
                true
            });
        }
        let x = match next {
            Some(x) => {
                stats.seeds_by_sample += 1;
                x
            }
            None => {
                // sampling is over, so sizes can only decrease from here on
                let heap = fallback.get_or_insert_with(|| {
                    size.iter()
                        .enumerate()
                        .filter(|(_, &s)| s > 0)
                        .map(|(v, &s)| (s, Reverse(v as NodeId)))
                        .collect()
                });
                let mut pick = None;
                while let Some((s, Reverse(v))) = heap.pop() {
                    let cur = size[v as usize];
                    if cur == s {
                        pick = Some(v);
                        break;
                    }
                    if cur > 0 {
                        heap.push((cur, Reverse(v)));
                    }
                }
                match pick {
                    Some(x) => x,
                    None => break,
                }
            }
        };

        let opts = RevRankOptions {
            cutoff: Some(t),
            include_unreachable: false,
        };
        let mut stream = RevRankStream::start(g, lists, &[x], opts, &mut rev)?;
        let mut marginal = 0u64;
        while let Some(item) = stream.next() {
            let (v, rank, d) = (item.node, item.rank.upper, item.dist);
            if best.dominated(v, rank, d) {
                stats.reverse_pruned += 1;
                stream.prune();
                continue;
            }
            stats.reverse_scans += 1;
            if !best.is_covered(v) && g.is_ranker(v) {
                marginal += 1;
                covered += 1;
                for w in std::mem::take(&mut index[v as usize]) {
                    size[w as usize] -= 1;
                }
            }
            best.rank[v as usize] = rank;
            best.dist[v as usize] = d;
        }
        stats.arcs_relaxed += stream.stats().arcs_relaxed;
        debug_assert!(marginal > 0, "seed {x} added no coverage");
        seeds.entries.push(SeedEntry { seed: x, marginal });

        let done = match params.stop {
            StopRule::MaxSeeds(s) => seeds.len() >= s,
            StopRule::CoverageTarget(f) => covered as f64 >= f * ranker_count as f64,
            StopRule::Exhaust => false,
        };
        if done {
            break;
        }
    }
    Ok(SkimResult { seeds, best, stats })
}
