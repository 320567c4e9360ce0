//! Immutable weighted graph with a transpose view, edge-list ingestion, plain
//! Dijkstra and the truncated top-`T` search used by exact greedy.

use std::collections::{BTreeMap, BinaryHeap};
use std::io::{BufRead, Write};

use crate::error::{invalid, Error, Result};
use crate::rank::RankMode;
use crate::search::{MinKey, Workspace};

pub type NodeId = u32;

/// Distance of a node that cannot be reached.
pub const UNREACHABLE: f64 = f64::INFINITY;

/// Which arcs a search follows.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Direction {
    /// Along arc direction: distances *from* the source.
    Forward,
    /// Against arc direction: distances *to* the source.
    Transpose,
}

#[derive(Debug, Clone, Default)]
struct Csr {
    offsets: Vec<usize>,
    heads: Vec<NodeId>,
    lengths: Vec<f64>,
}

impl Csr {
    fn from_arcs(n: usize, arcs: &[(NodeId, NodeId, f64)], reversed: bool) -> Self {
        let mut offsets = vec![0usize; n + 1];
        for &(u, v, _) in arcs {
            let tail = if reversed { v } else { u };
            offsets[tail as usize + 1] += 1;
        }
        for i in 0..n {
            offsets[i + 1] += offsets[i];
        }
        let mut fill = offsets.clone();
        let mut heads = vec![0; arcs.len()];
        let mut lengths = vec![0.0; arcs.len()];
        for &(u, v, w) in arcs {
            let (tail, head) = if reversed { (v, u) } else { (u, v) };
            let slot = &mut fill[tail as usize];
            heads[*slot] = head;
            lengths[*slot] = w;
            *slot += 1;
        }
        Self {
            offsets,
            heads,
            lengths,
        }
    }

    #[inline]
    fn arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        let (lo, hi) = (self.offsets[v as usize], self.offsets[v as usize + 1]);
        self.heads[lo..hi]
            .iter()
            .copied()
            .zip(self.lengths[lo..hi].iter().copied())
    }

    fn degree(&self, v: NodeId) -> usize {
        self.offsets[v as usize + 1] - self.offsets[v as usize]
    }
}

/// A directed or undirected graph with positive arc lengths and dense node
/// ids `0..n`.
///
/// Undirected edges are stored as two opposite arcs. Rankees (`U`) and
/// rankers (`Z`) default to all nodes.
#[derive(Debug, Clone)]
pub struct Graph {
    n: usize,
    directed: bool,
    out: Csr,
    inc: Csr,
    rankee: Vec<bool>,
    ranker: Vec<bool>,
    rankee_count: usize,
    ranker_count: usize,
    external_ids: Vec<u64>,
}

impl Graph {
    /// Builds a graph from dense-id edges. Undirected edges are given once.
    pub fn from_edges(n: usize, directed: bool, edges: &[(NodeId, NodeId, f64)]) -> Result<Self> {
        if n == 0 {
            return Err(invalid("graph must have at least one node"));
        }
        if n > NodeId::MAX as usize {
            return Err(invalid("too many nodes"));
        }
        let mut arcs = Vec::with_capacity(if directed { edges.len() } else { 2 * edges.len() });
        for &(u, v, w) in edges {
            for x in [u, v] {
                if x as usize >= n {
                    return Err(Error::InvalidNode(x));
                }
            }
            if !(w > 0.0) || !w.is_finite() {
                return Err(invalid(format!("arc {u}->{v} has non-positive length {w}")));
            }
            if u == v {
                continue;
            }
            arcs.push((u, v, w));
            if !directed {
                arcs.push((v, u, w));
            }
        }
        let out = Csr::from_arcs(n, &arcs, false);
        let inc = Csr::from_arcs(n, &arcs, true);
        Ok(Self {
            n,
            directed,
            out,
            inc,
            rankee: vec![true; n],
            ranker: vec![true; n],
            rankee_count: n,
            ranker_count: n,
            external_ids: (0..n as u64).collect(),
        })
    }

    /// Restricts the rankee set `U` to the nodes flagged in `mask`.
    pub fn with_rankees(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.n {
            return Err(invalid("rankee mask length differs from node count"));
        }
        let count = mask.iter().filter(|&&b| b).count();
        if count == 0 {
            return Err(invalid("rankee set is empty"));
        }
        self.rankee = mask;
        self.rankee_count = count;
        Ok(self)
    }

    /// Restricts the ranker set `Z` to the nodes flagged in `mask`.
    pub fn with_rankers(mut self, mask: Vec<bool>) -> Result<Self> {
        if mask.len() != self.n {
            return Err(invalid("ranker mask length differs from node count"));
        }
        self.ranker_count = mask.iter().filter(|&&b| b).count();
        self.ranker = mask;
        Ok(self)
    }

    pub fn node_count(&self) -> usize {
        self.n
    }

    /// Number of stored arcs (an undirected edge counts twice).
    pub fn arc_count(&self) -> usize {
        self.out.heads.len()
    }

    /// Number of input edges (undirected edges counted once).
    pub fn edge_count(&self) -> usize {
        if self.directed {
            self.arc_count()
        } else {
            self.arc_count() / 2
        }
    }

    pub fn is_directed(&self) -> bool {
        self.directed
    }

    pub fn nodes(&self) -> impl Iterator<Item = NodeId> {
        0..self.n as NodeId
    }

    /// Outgoing arcs `(head, length)` of `v`.
    #[inline]
    pub fn out_arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.out.arcs(v)
    }

    /// Incoming arcs of `v` as `(tail, length)`, i.e. the arcs of `G^T`.
    #[inline]
    pub fn in_arcs(&self, v: NodeId) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        self.inc.arcs(v)
    }

    #[inline]
    pub fn arcs(&self, v: NodeId, dir: Direction) -> impl Iterator<Item = (NodeId, f64)> + '_ {
        match dir {
            Direction::Forward => self.out.arcs(v),
            Direction::Transpose => self.inc.arcs(v),
        }
    }

    pub fn out_degree(&self, v: NodeId) -> usize {
        self.out.degree(v)
    }

    pub fn in_degree(&self, v: NodeId) -> usize {
        self.inc.degree(v)
    }

    #[inline]
    pub fn is_rankee(&self, v: NodeId) -> bool {
        self.rankee[v as usize]
    }

    #[inline]
    pub fn is_ranker(&self, v: NodeId) -> bool {
        self.ranker[v as usize]
    }

    pub fn rankee_count(&self) -> usize {
        self.rankee_count
    }

    pub fn ranker_count(&self) -> usize {
        self.ranker_count
    }

    pub fn rankees(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|&v| self.is_rankee(v))
    }

    pub fn rankers(&self) -> impl Iterator<Item = NodeId> + '_ {
        self.nodes().filter(|&v| self.is_ranker(v))
    }

    pub fn check_node(&self, v: NodeId) -> Result<()> {
        if (v as usize) < self.n {
            Ok(())
        } else {
            Err(Error::InvalidNode(v))
        }
    }

    pub fn external_id(&self, v: NodeId) -> u64 {
        self.external_ids[v as usize]
    }

    /// Dense id of an external id, if present.
    pub fn dense_id(&self, external: u64) -> Option<NodeId> {
        // external ids are assigned in increasing order
        self.external_ids
            .binary_search(&external)
            .ok()
            .map(|i| i as NodeId)
    }

    /// True when dense and external ids coincide.
    pub fn ids_are_identity(&self) -> bool {
        self.external_ids
            .iter()
            .enumerate()
            .all(|(i, &e)| e == i as u64)
    }

    /// Writes the `external_id,dense_id` table as CSV.
    pub fn write_id_map<W: Write>(&self, mut w: W) -> Result<()> {
        writeln!(w, "external_id,dense_id")?;
        for (dense, ext) in self.external_ids.iter().enumerate() {
            writeln!(w, "{ext},{dense}")?;
        }
        Ok(())
    }
}

/// Parses a whitespace-separated edge list `u v [w]`.
///
/// Lines starting with `#` and blank lines are skipped. External ids are
/// remapped to dense ids in increasing order of external id. Self-loops are
/// dropped, parallel edges kept.
pub fn load_edge_list<R: BufRead>(reader: R, directed: bool, default_length: f64) -> Result<Graph> {
    if !(default_length > 0.0) || !default_length.is_finite() {
        return Err(invalid("default length must be positive"));
    }
    let mut raw: Vec<(u64, u64, f64)> = Vec::new();
    let mut ids: BTreeMap<u64, NodeId> = BTreeMap::new();
    for (idx, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = idx + 1;
        let trimmed = line.trim();
        if trimmed.is_empty() || trimmed.starts_with('#') {
            continue;
        }
        let parse_err = |msg: String| Error::Parse { line: lineno, msg };
        let mut tokens = trimmed.split_whitespace();
        let mut node = |what: &str| -> Result<u64> {
            let tok = tokens
                .next()
                .ok_or_else(|| parse_err(format!("missing {what} node")))?;
            tok.parse::<u64>()
                .map_err(|_| parse_err(format!("invalid node id `{tok}`")))
        };
        let u = node("source")?;
        let v = node("target")?;
        let w = match tokens.next() {
            None => default_length,
            Some(tok) => {
                let w: f64 = tok
                    .parse()
                    .map_err(|_| parse_err(format!("invalid length `{tok}`")))?;
                if !(w > 0.0) || !w.is_finite() {
                    return Err(parse_err(format!("length must be positive, got {tok}")));
                }
                w
            }
        };
        if let Some(extra) = tokens.next() {
            return Err(parse_err(format!("unexpected trailing token `{extra}`")));
        }
        ids.insert(u, 0);
        ids.insert(v, 0);
        raw.push((u, v, w));
    }
    if raw.is_empty() {
        return Err(Error::EmptyInput);
    }
    let mut external_ids = Vec::with_capacity(ids.len());
    for (dense, (ext, slot)) in ids.iter_mut().enumerate() {
        *slot = dense as NodeId;
        external_ids.push(*ext);
    }
    let edges: Vec<_> = raw.iter().map(|&(u, v, w)| (ids[&u], ids[&v], w)).collect();
    let mut g = Graph::from_edges(external_ids.len(), directed, &edges)?;
    g.external_ids = external_ids;
    Ok(g)
}

/// Result of a full single-source shortest-path computation.
#[derive(Debug, Clone)]
pub struct DistanceResult {
    pub source: NodeId,
    /// Distance per node, [`UNREACHABLE`] when there is no path.
    pub dist: Vec<f64>,
    /// Reachable nodes in nondecreasing distance order.
    pub scan_order: Vec<NodeId>,
}

impl DistanceResult {
    pub fn is_reachable(&self, v: NodeId) -> bool {
        self.dist[v as usize] != UNREACHABLE
    }
}

/// Exact single-source distances. With `use_transpose` the search runs on
/// `G^T`, so `dist[v]` is the distance from `v` to `source` in `G`.
pub fn dijkstra(g: &Graph, source: NodeId, use_transpose: bool) -> Result<DistanceResult> {
    g.check_node(source)?;
    let dir = if use_transpose {
        Direction::Transpose
    } else {
        Direction::Forward
    };
    let mut dist = vec![UNREACHABLE; g.node_count()];
    let mut done = vec![false; g.node_count()];
    let mut scan_order = Vec::new();
    let mut heap = BinaryHeap::new();
    dist[source as usize] = 0.0;
    heap.push(MinKey::dist(0.0, source));
    while let Some(MinKey { primary: d, node: v, .. }) = heap.pop() {
        if done[v as usize] {
            continue;
        }
        done[v as usize] = true;
        scan_order.push(v);
        for (u, w) in g.arcs(v, dir) {
            let nd = d + w;
            if nd < dist[u as usize] {
                dist[u as usize] = nd;
                heap.push(MinKey::dist(nd, u));
            }
        }
    }
    Ok(DistanceResult {
        source,
        dist,
        scan_order,
    })
}

/// Runs a forward Dijkstra from `source` and hands each settled node to
/// `visit(node, dist)` in nondecreasing distance order until it returns
/// `false`.
pub(crate) fn forward_scan(
    g: &Graph,
    ws: &mut Workspace,
    heap: &mut BinaryHeap<MinKey>,
    source: NodeId,
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
            break;
        }
        for (u, w) in g.out_arcs(v) {
            let nd = d + w;
            if !ws.is_settled(u) && ws.improve(u, nd) {
                heap.push(MinKey::dist(nd, u));
            }
        }
    }
    heap.clear();
}

/// Rankees whose rank with respect to `ranker` is at most `t`, with that rank.
///
/// The search processes whole distance tiers and stops once the number of
/// rankees strictly closer than the current tier reaches `t`, at which point
/// every further rankee has rank above `t` under any [`RankMode`].
pub fn top_t_rankees(g: &Graph, ranker: NodeId, t: usize, mode: RankMode) -> Result<Vec<(NodeId, f64)>> {
    g.check_node(ranker)?;
    if t == 0 {
        return Err(invalid("T must be at least 1"));
    }
    let mut ws = Workspace::new(g.node_count());
    let mut heap = BinaryHeap::new();
    Ok(top_t_with(g, &mut ws, &mut heap, ranker, t, mode))
}

pub(crate) fn top_t_with(
    g: &Graph,
    ws: &mut Workspace,
    heap: &mut BinaryHeap<MinKey>,
    ranker: NodeId,
    t: usize,
    mode: RankMode,
) -> Vec<(NodeId, f64)> {
    let mut out = Vec::new();
    let mut tier: Vec<NodeId> = Vec::new();
    let mut tier_dist = f64::NAN;
    let mut closer = 0usize;
    let limit = t as f64;
    let flush = |tier: &mut Vec<NodeId>, closer: &mut usize, out: &mut Vec<(NodeId, f64)>| {
        let lower = *closer as f64;
        let upper = (*closer + tier.len()) as f64;
        let rank = mode.resolve(lower, upper);
        if rank <= limit {
            out.extend(tier.iter().map(|&u| (u, rank)));
        }
        *closer += tier.len();
        tier.clear();
    };
    forward_scan(g, ws, heap, ranker, |v, d| {
        if !g.is_rankee(v) {
            return true;
        }
        if d != tier_dist {
            if !tier.is_empty() {
                flush(&mut tier, &mut closer, &mut out);
            }
            if closer >= t {
                return false;
            }
            tier_dist = d;
        }
        tier.push(v);
        true
    });
    if !tier.is_empty() && closer < t {
        flush(&mut tier, &mut closer, &mut out);
    }
    out
}
