use std::cmp::Reverse;
use std::collections::BinaryHeap;

use super::{SeedEntry, SeedList};
use crate::error::{invalid, Error, Result};
use crate::estimate::EstimationLists;
use crate::graph::{forward_scan, top_t_with, Graph, NodeId};
use crate::rank::RankMode;
use crate::search::Workspace;

/// For every ranker, the rankees it places within its top `t` by exact rank.
/// Non-rankers get an empty list.
pub fn coverers_exact(g: &Graph, t: usize, mode: RankMode) -> Result<Vec<Vec<NodeId>>> {
    if t < 1 {
        return Err(invalid("T must be at least 1"));
    }
    let mut ws = Workspace::new(g.node_count());
    let mut heap = BinaryHeap::new();
    Ok(g.nodes()
        .map(|z| {
            if g.is_ranker(z) {
                top_t_with(g, &mut ws, &mut heap, z, t, mode).into_iter().map(|(u, _)| u).collect()
            } else {
                Vec::new()
            }
        })
        .collect())
}

/// For every ranker `z`, the rankees `u` with estimated rank `π̂_zu ≤ t`,
/// found by a forward search from `z` that stops at the first rankee above `t`.
pub fn coverers_estimated(g: &Graph, lists: &EstimationLists, t: f64, mode: RankMode) -> Result<Vec<Vec<NodeId>>> {
    if !(t >= 1.0) {
        return Err(invalid("T must be at least 1"));
    }
    if lists.node_count() != g.node_count() {
        return Err(Error::Mismatch("estimation lists do not match the graph".into()));
    }
    let mut ws = Workspace::new(g.node_count());
    let mut heap = BinaryHeap::new();
    Ok(g.nodes()
        .map(|z| {
            let mut out = Vec::new();
            if g.is_ranker(z) {
                forward_scan(g, &mut ws, &mut heap, z, |u, d| {
                    if !g.is_rankee(u) {
                        return true;
                    }
                    if lists.rank(z, d).value(mode) > t {
                        return false;
                    }
                    out.push(u);
                    true
                });
            }
            out
        })
        .collect())
}

/// Greedy maximum coverage: repeatedly takes the rankee covering the most
/// still-uncovered rankers (ties to the smaller id) until `max_seeds` seeds
/// are chosen or no rankee adds coverage.
pub fn greedy_from_coverers(coverers: &[Vec<NodeId>], ranker_count: usize, max_seeds: Option<usize>) -> SeedList {
    let n = coverers.len();
    let mut coverage: Vec<Vec<NodeId>> = vec![Vec::new(); n];
    for (z, us) in coverers.iter().enumerate() {
        for &u in us {
            coverage[u as usize].push(z as NodeId);
        }
    }
    let mut count: Vec<u64> = coverage.iter().map(|c| c.len() as u64).collect();
    let mut heap: BinaryHeap<(u64, Reverse<NodeId>)> = count
        .iter()
        .enumerate()
        .filter(|(_, &c)| c > 0)
        .map(|(u, &c)| (c, Reverse(u as NodeId)))
        .collect();
    let mut covered = vec![false; n];
    let mut seeds = SeedList {
        entries: Vec::new(),
        ranker_count,
    };
    let limit = max_seeds.unwrap_or(usize::MAX);
    while seeds.len() < limit {
        let Some((c, Reverse(u))) = heap.pop() else {
            break;
        };
        if c != count[u as usize] {
            if count[u as usize] > 0 {
                heap.push((count[u as usize], Reverse(u)));
            }
            continue;
        }
        let mut marginal = 0;
        for &z in &coverage[u as usize] {
            if covered[z as usize] {
                continue;
            }
            covered[z as usize] = true;
            marginal += 1;
            for &w in &coverers[z as usize] {
                count[w as usize] -= 1;
            }
        }
        debug_assert_eq!(marginal, c);
        seeds.entries.push(SeedEntry { seed: u, marginal });
    }
    seeds
}

/// Exact greedy reverse-rank influence maximization with threshold `T` and
/// uniform ranker weights.
pub fn exact_greedy_im(g: &Graph, t: usize, max_seeds: Option<usize>, mode: RankMode) -> Result<SeedList> {
    let coverers = coverers_exact(g, t, mode)?;
    Ok(greedy_from_coverers(&coverers, g.ranker_count(), max_seeds))
}

/// Exact greedy over estimated ranks: the greedy sequence for the
/// estimated influence, used as the reference for sampled greedy.
pub fn greedy_im_estimated(
    g: &Graph,
    lists: &EstimationLists,
    t: f64,
    max_seeds: Option<usize>,
    mode: RankMode,
) -> Result<SeedList> {
    let coverers = coverers_estimated(g, lists, t, mode)?;
    Ok(greedy_from_coverers(&coverers, g.ranker_count(), max_seeds))
}
