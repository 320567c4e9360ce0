//! Seeded random graph generators for tests, verification runs and benches.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Result};
use crate::graph::{Graph, NodeId};

const GRID: f64 = (1u64 << 24) as f64;

/// Arc length distribution.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Lengths {
    /// Every arc has length 1.
    Unit,
    /// Integers drawn uniformly from `lo..=hi`.
    Integer(u32, u32),
    /// Reals drawn uniformly from `[lo, hi)`, rounded to multiples of
    /// `2^-24` so that path sums are exact and do not depend on the order
    /// of summation. Distances are unique with high probability.
    Uniform(f64, f64),
}

impl Lengths {
    fn sample(&self, rng: &mut impl Rng) -> f64 {
        match *self {
            Lengths::Unit => 1.0,
            Lengths::Integer(lo, hi) => rng.random_range(lo..=hi) as f64,
            Lengths::Uniform(lo, hi) => {
                let x = (rng.random_range(lo..hi) * GRID).round() / GRID;
                x.max(1.0 / GRID)
            }
        }
    }
}

/// `G(n, m)`-style random graph: `m` edges with endpoints drawn uniformly,
/// self-loops rejected, duplicates allowed.
pub fn gnm(n: usize, m: usize, directed: bool, lengths: Lengths, seed: u64) -> Result<Graph> {
    if n < 2 && m > 0 {
        return Err(invalid("need at least two nodes to place edges"));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut edges = Vec::with_capacity(m);
    while edges.len() < m {
        let u = rng.random_range(0..n) as NodeId;
        let v = rng.random_range(0..n) as NodeId;
        if u == v {
            continue;
        }
        edges.push((u, v, lengths.sample(&mut rng)));
    }
    Graph::from_edges(n.max(1), directed, &edges)
}

/// Erdős–Rényi style graph with the given average degree.
///
/// For undirected graphs the average degree counts both endpoints, so
/// `n * avg_degree / 2` edges are placed; for directed graphs it is the
/// average out-degree.
pub fn erdos_renyi(n: usize, avg_degree: f64, directed: bool, lengths: Lengths, seed: u64) -> Result<Graph> {
    let m = if directed {
        (n as f64 * avg_degree).round() as usize
    } else {
        (n as f64 * avg_degree / 2.0).round() as usize
    };
    gnm(n, m, directed, lengths, seed)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn deterministic_and_sized() {
        let a = erdos_renyi(100, 8.0, false, Lengths::Integer(1, 10), 7).unwrap();
        let b = erdos_renyi(100, 8.0, false, Lengths::Integer(1, 10), 7).unwrap();
        assert_eq!(a.edge_count(), 400);
        assert_eq!(a.arc_count(), 800);
        for v in a.nodes() {
            assert_eq!(a.out_arcs(v).collect::<Vec<_>>(), b.out_arcs(v).collect::<Vec<_>>());
        }
        let d = gnm(50, 120, true, Lengths::Unit, 1).unwrap();
        assert_eq!(d.arc_count(), 120);
    }
}
