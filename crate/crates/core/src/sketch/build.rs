use std::collections::BinaryHeap;
use std::time::{Duration, Instant};

use rayon::prelude::*;

use super::ads::{AdsSketch, PruneDecision};
use super::ranks::RankAssignment;
use super::schedule::batch_boundaries;
use crate::error::{invalid, Error, Result};
use crate::graph::{Direction, Graph, NodeId};
use crate::search::{MinKey, Workspace};

/// How the Pruned Dijkstra searches are scheduled.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BuildSchedule {
    /// One search per rankee in `r` order, each seeing every earlier insertion.
    Sequential,
    /// Searches of a batch run in parallel against the thresholds frozen at
    /// the start of the batch; proposals are merged in `r` order.
    Batched { mu: f64, workers: usize },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct BuildStats {
    /// Entries in the final sketches, auxiliary ones included.
    pub kept: u64,
    /// Batched proposals rejected at merge time.
    pub discarded: u64,
    /// Scans that passed the prune test.
    pub scans_inserted: u64,
    /// Scans stopped by the prune test.
    pub scans_pruned: u64,
    pub arcs_relaxed: u64,
    pub batches: usize,
    pub elapsed: Duration,
}

impl BuildStats {
    /// Discarded over kept proposals; zero for a sequential build.
    pub fn overhead(&self) -> f64 {
        if self.kept == 0 {
            0.0
        } else {
            self.discarded as f64 / self.kept as f64
        }
    }
}

/// The sketches of every node together with the `r`-values they were built from.
#[derive(Debug, Clone, PartialEq)]
pub struct SketchSet {
    k: usize,
    ranks: RankAssignment,
    sketches: Vec<AdsSketch>,
}

impl SketchSet {
    pub(crate) fn from_parts(k: usize, ranks: RankAssignment, sketches: Vec<AdsSketch>) -> Result<Self> {
        if sketches.len() != ranks.node_count() {
            return Err(Error::Mismatch(format!(
                "{} sketches for {} nodes",
                sketches.len(),
                ranks.node_count()
            )));
        }
        Ok(Self { k, ranks, sketches })
    }

    pub fn k(&self) -> usize {
        self.k
    }

    /// `|U|`, the number of rankees.
    pub fn u_count(&self) -> usize {
        self.ranks.rankee_count()
    }

    pub fn node_count(&self) -> usize {
        self.sketches.len()
    }

    pub fn ranks(&self) -> &RankAssignment {
        &self.ranks
    }

    pub fn sketch(&self, v: NodeId) -> &AdsSketch {
        &self.sketches[v as usize]
    }

    pub fn sketches(&self) -> &[AdsSketch] {
        &self.sketches
    }

    pub fn total_entries(&self) -> usize {
        self.sketches.iter().map(AdsSketch::len).sum()
    }

    pub fn total_members(&self) -> usize {
        self.sketches.iter().map(AdsSketch::member_count).sum()
    }
}

#[derive(Default)]
struct SearchCounts {
    inserted: u64,
    pruned: u64,
    arcs: u64,
}

/// Dijkstra on `G^T` from `source`. At each settled node `visit` decides
/// whether the search continues through it.
fn pruned_search(
    g: &Graph,
    ws: &mut Workspace,
    heap: &mut BinaryHeap<MinKey>,
    source: NodeId,
    counts: &mut SearchCounts,
    mut visit: impl FnMut(NodeId, f64) -> bool,
) {
    ws.reset();
    heap.clear();
    ws.improve(source, 0.0);
    heap.push(MinKey::dist(0.0, source));
    while let Some(MinKey { primary: d, node: v, .. }) = heap.pop() {
        if ws.is_settled(v) || d > ws.dist(v) {
            continue;
        }
        ws.settle(v);
        if !visit(v, d) {
            counts.pruned += 1;
            continue;
        }
        counts.inserted += 1;
        for (x, w) in g.arcs(v, Direction::Transpose) {
            counts.arcs += 1;
            let nd = d + w;
            if !ws.is_settled(x) && ws.improve(x, nd) {
                heap.push(MinKey::dist(nd, x));
            }
        }
    }
}

/// Builds the all-distances sketch of every node.
pub fn build_ads(
    g: &Graph,
    k: usize,
    ranks: &RankAssignment,
    schedule: BuildSchedule,
) -> Result<(SketchSet, BuildStats)> {
    if k < 1 {
        return Err(invalid("k must be at least 1"));
    }
    ranks.check_graph(g)?;
    let start = Instant::now();
    let mut sketches = vec![AdsSketch::new(k); g.node_count()];
    let mut stats = match schedule {
        BuildSchedule::Sequential => build_sequential(g, ranks, &mut sketches),
        BuildSchedule::Batched { mu, workers } => {
            if workers < 1 {
                return Err(invalid("workers must be at least 1"));
            }
            let plan = batch_boundaries(ranks.rankee_count(), k, mu)?;
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(workers)
                .build()
                .map_err(|e| invalid(format!("cannot start worker pool: {e}")))?;
            let mut stats = BuildStats::default();
            for range in plan.ranges() {
                let batch = &ranks.order()[range];
                let proposals = pool.install(|| propose(g, &sketches, batch));
                merge(ranks, &mut sketches, proposals, &mut stats);
            }
            stats.batches = plan.batch_count();
            stats
        }
    };
    stats.kept = sketches.iter().map(|s| s.len() as u64).sum();
    stats.elapsed = start.elapsed();
    Ok((SketchSet::from_parts(k, ranks.clone(), sketches)?, stats))
}

fn build_sequential(g: &Graph, ranks: &RankAssignment, sketches: &mut [AdsSketch]) -> BuildStats {
    let mut ws = Workspace::new(g.node_count());
    let mut heap = BinaryHeap::new();
    let mut counts = SearchCounts::default();
    for &u in ranks.order() {
        let r = ranks.r(u);
        pruned_search(g, &mut ws, &mut heap, u, &mut counts, |v, d| {
            sketches[v as usize].offer(u, r, d)
        });
    }
    BuildStats {
        scans_inserted: counts.inserted,
        scans_pruned: counts.pruned,
        arcs_relaxed: counts.arcs,
        batches: ranks.rankee_count(),
        ..BuildStats::default()
    }
}

struct Proposals {
    items: Vec<(NodeId, NodeId, f64)>,
    counts: SearchCounts,
}

fn propose(g: &Graph, sketches: &[AdsSketch], batch: &[NodeId]) -> Vec<Proposals> {
    batch
        .par_iter()
        .map_init(
            || (Workspace::new(g.node_count()), BinaryHeap::new()),
            |(ws, heap), &u| {
                let mut out = Proposals {
                    items: Vec::new(),
                    counts: SearchCounts::default(),
                };
                pruned_search(g, ws, heap, u, &mut out.counts, |v, d| {
                    if sketches[v as usize].prune_test(d) == PruneDecision::Prune {
                        false
                    } else {
                        out.items.push((v, u, d));
                        true
                    }
                });
                out
            },
        )
        .collect()
}

fn merge(ranks: &RankAssignment, sketches: &mut [AdsSketch], proposals: Vec<Proposals>, stats: &mut BuildStats) {
    let mut all = Vec::with_capacity(proposals.iter().map(|p| p.items.len()).sum());
    for p in proposals {
        stats.scans_inserted += p.counts.inserted;
        stats.scans_pruned += p.counts.pruned;
        stats.arcs_relaxed += p.counts.arcs;
        all.extend(p.items);
    }
    all.sort_unstable_by_key(|&(v, u, _)| (v, ranks.position(u)));
    for (v, u, d) in all {
        if !sketches[v as usize].offer(u, ranks.r(u), d) {
            stats.discarded += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sketch::RankAssignMode;

    fn path3() -> Graph {
        Graph::from_edges(3, false, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap()
    }

    #[test]
    fn full_sketches_when_k_covers_everything() {
        let g = path3();
        let ranks = RankAssignment::from_values(RankAssignMode::Permutation, 0, vec![0.5, 1.0, 0.25]).unwrap();
        let (set, stats) = build_ads(&g, 3, &ranks, BuildSchedule::Sequential).unwrap();
        for v in g.nodes() {
            assert_eq!(set.sketch(v).member_count(), 3);
        }
        assert_eq!(stats.kept, 9);
        assert_eq!(stats.overhead(), 0.0);
    }

    #[test]
    fn k_one_keeps_prefix_minima() {
        // from node 0: node 0 (r .5, d 0), node 1 (r 1, d 1) not a new minimum,
        // node 2 (r .25, d 2) is
        let g = path3();
        let ranks = RankAssignment::from_values(RankAssignMode::Permutation, 0, vec![0.5, 1.0, 0.25]).unwrap();
        let (set, _) = build_ads(&g, 1, &ranks, BuildSchedule::Sequential).unwrap();
        let s0: Vec<_> = set.sketch(0).entries_by_distance().map(|e| (e.node, e.dist)).collect();
        assert_eq!(s0, vec![(0, 0.0), (2, 2.0)]);
        let s2: Vec<_> = set.sketch(2).entries_by_distance().map(|e| e.node).collect();
        assert_eq!(s2, vec![2]);
    }

    #[test]
    fn batched_matches_sequential_small() {
        let g = crate::gen::erdos_renyi(200, 4.0, true, crate::gen::Lengths::Integer(1, 3), 5).unwrap();
        let ranks = crate::sketch::assign_ranks(&g, RankAssignMode::Permutation, 9);
        let (a, _) = build_ads(&g, 4, &ranks, BuildSchedule::Sequential).unwrap();
        for mu in [0.1, 0.5, 2.0] {
            let (b, stats) = build_ads(&g, 4, &ranks, BuildSchedule::Batched { mu, workers: 2 }).unwrap();
            assert_eq!(a, b);
            assert_eq!(stats.kept as usize, b.total_entries());
        }
    }

    #[test]
    fn rejects_bad_parameters() {
        let g = path3();
        let ranks = crate::sketch::assign_ranks(&g, RankAssignMode::Permutation, 1);
        assert!(build_ads(&g, 0, &ranks, BuildSchedule::Sequential).is_err());
        let bad = BuildSchedule::Batched { mu: 0.1, workers: 0 };
        assert!(build_ads(&g, 2, &ranks, bad).is_err());
    }
}
