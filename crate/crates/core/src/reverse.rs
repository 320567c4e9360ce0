//! Sorted-access reverse-rank queries: nodes are produced in nondecreasing
//! `(estimated rank, distance)` order with respect to a seed set, touching
//! only arcs adjacent to nodes already produced.

use std::borrow::BorrowMut;
use std::collections::BinaryHeap;

use crate::error::{invalid, Error, Result};
use crate::estimate::{EstimationLists, Estimator};
use crate::graph::{Direction, Graph, NodeId, UNREACHABLE};
use crate::rank::RankEstimate;
use crate::search::{MinKey, Workspace};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RevRankItem {
    pub node: NodeId,
    /// Distance from `node` to the nearest seed, [`UNREACHABLE`] for
    /// appended unreachable nodes.
    pub dist: f64,
    /// Estimated rank range of the nearest seed as seen by `node`.
    pub rank: RankEstimate,
}

#[derive(Debug, Clone, Copy, Default, PartialEq)]
pub struct RevRankOptions {
    /// Stop at the first node whose upper rank estimate exceeds this value.
    pub cutoff: Option<f64>,
    /// After the reachable nodes, emit the nodes that cannot reach any seed
    /// with rank range `(reachable, |U|]`. Ignored when a cutoff below `|U|`
    /// is set.
    pub include_unreachable: bool,
}

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub struct RevRankStats {
    pub emitted: u64,
    pub arcs_relaxed: u64,
}

/// Scratch space for reverse-rank traversals; reuse it across queries on
/// the same graph to avoid reallocating per query.
#[derive(Debug, Clone)]
pub struct RevRankWorkspace {
    ws: Workspace,
    heap: BinaryHeap<MinKey>,
}

impl RevRankWorkspace {
    pub fn new(n: usize) -> Self {
        Self {
            ws: Workspace::new(n),
            heap: BinaryHeap::new(),
        }
    }
}

/// Lazy reverse-rank stream. Arcs of an emitted node are relaxed only when
/// the next item is requested, and not at all after [`prune`](Self::prune).
pub struct RevRankStream<'a, W: BorrowMut<RevRankWorkspace> = RevRankWorkspace> {
    g: &'a Graph,
    lists: &'a EstimationLists,
    work: W,
    options: RevRankOptions,
    pending: Option<(NodeId, f64)>,
    stopped_by_cutoff: bool,
    tail: Option<NodeId>,
    stats: RevRankStats,
}

fn check_seeds(g: &Graph, seeds: &[NodeId]) -> Result<Vec<NodeId>> {
    if seeds.is_empty() {
        return Err(invalid("seed set is empty"));
    }
    let mut out = seeds.to_vec();
    for &s in &out {
        g.check_node(s)?;
        if !g.is_rankee(s) {
            return Err(Error::NotRankee(s));
        }
    }
    out.sort_unstable();
    out.dedup();
    Ok(out)
}

/// Starts a sorted reverse-rank traversal from `seeds` with its own workspace.
pub fn reverse_rank_sorted<'a>(
    g: &'a Graph,
    lists: &'a EstimationLists,
    seeds: &[NodeId],
    options: RevRankOptions,
) -> Result<RevRankStream<'a>> {
    RevRankStream::start(g, lists, seeds, options, RevRankWorkspace::new(g.node_count()))
}

impl<'a, W: BorrowMut<RevRankWorkspace>> RevRankStream<'a, W> {
    /// Starts a traversal using the given workspace (owned or `&mut`).
    pub fn start(
        g: &'a Graph,
        lists: &'a EstimationLists,
        seeds: &[NodeId],
        options: RevRankOptions,
        mut work: W,
    ) -> Result<Self> {
        lists.require(Estimator::BottomK)?;
        if lists.node_count() != g.node_count() {
            return Err(Error::Mismatch(format!(
                "lists cover {} nodes, graph has {}",
                lists.node_count(),
                g.node_count()
            )));
        }
        if let Some(t) = options.cutoff {
            if t.is_nan() {
                return Err(invalid("rank cutoff is NaN"));
            }
        }
        let seeds = check_seeds(g, seeds)?;
        let w = work.borrow_mut();
        w.ws.reset();
        w.heap.clear();
        for s in seeds {
            w.ws.improve(s, 0.0);
            w.heap.push(MinKey {
                primary: lists.get(s).cardinality(0.0, false),
                secondary: 0.0,
                node: s,
            });
        }
        Ok(Self {
            g,
            lists,
            work,
            options,
            pending: None,
            stopped_by_cutoff: false,
            tail: None,
            stats: RevRankStats::default(),
        })
    }

    /// Skips relaxing the arcs of the most recently emitted node.
    pub fn prune(&mut self) {
        self.pending = None;
    }

    pub fn stats(&self) -> RevRankStats {
        self.stats
    }

    fn relax_pending(&mut self) {
        let Some((v, d)) = self.pending.take() else {
            return;
        };
        let w = self.work.borrow_mut();
        for (x, len) in self.g.arcs(v, Direction::Transpose) {
            self.stats.arcs_relaxed += 1;
            let nd = d + len;
            if !w.ws.is_settled(x) && w.ws.improve(x, nd) {
                w.heap.push(MinKey {
                    primary: self.lists.get(x).cardinality(nd, false),
                    secondary: nd,
                    node: x,
                });
            }
        }
    }

    fn next_unreachable(&mut self) -> Option<RevRankItem> {
        let n = self.g.node_count() as NodeId;
        let mut v = self.tail?;
        let w = self.work.borrow_mut();
        while v < n && w.ws.dist(v) != UNREACHABLE {
            v += 1;
        }
        if v >= n {
            self.tail = None;
            return None;
        }
        self.tail = Some(v + 1);
        self.stats.emitted += 1;
        Some(RevRankItem {
            node: v,
            dist: UNREACHABLE,
            rank: self.lists.rank(v, UNREACHABLE),
        })
    }
}

impl<W: BorrowMut<RevRankWorkspace>> Iterator for RevRankStream<'_, W> {
    type Item = RevRankItem;

    fn next(&mut self) -> Option<RevRankItem> {
        if self.tail.is_some() {
            return self.next_unreachable();
        }
        if self.stopped_by_cutoff {
            return None;
        }
        self.relax_pending();
        let w = self.work.borrow_mut();
        while let Some(key) = w.heap.pop() {
            let (v, d) = (key.node, key.secondary);
            if w.ws.is_settled(v) || d > w.ws.dist(v) {
                continue;
            }
            if let Some(t) = self.options.cutoff {
                if key.primary > t {
                    self.stopped_by_cutoff = true;
                    w.heap.clear();
                    return None;
                }
            }
            w.ws.settle(v);
            self.pending = Some((v, d));
            self.stats.emitted += 1;
            let list = self.lists.get(v);
            return Some(RevRankItem {
                node: v,
                dist: d,
                rank: RankEstimate::new(list.cardinality(d, true), key.primary),
            });
        }
        let append = self.options.include_unreachable
            && self.options.cutoff.is_none_or(|t| self.lists.u_count() as f64 <= t);
        if append {
            self.tail = Some(0);
            return self.next_unreachable();
        }
        None
    }
}
