#![allow(dead_code)]

use adsrank::gen::{gnm, Lengths};
use adsrank::{Graph, NodeId, UNREACHABLE};
use proptest::prelude::*;

/// All-pairs distances by Bellman-Ford relaxation; `d[i][j]` is from i to j.
pub fn all_pairs(g: &Graph) -> Vec<Vec<f64>> {
    let n = g.node_count();
    let arcs: Vec<(NodeId, NodeId, f64)> = g
        .nodes()
        .flat_map(|u| g.out_arcs(u).map(move |(v, w)| (u, v, w)))
        .collect();
    (0..n)
        .map(|s| {
            let mut d = vec![UNREACHABLE; n];
            d[s] = 0.0;
            for _ in 0..n {
                let mut changed = false;
                for &(u, v, w) in &arcs {
                    let nd = d[u as usize] + w;
                    if nd < d[v as usize] {
                        d[v as usize] = nd;
                        changed = true;
                    }
                }
                if !changed {
                    break;
                }
            }
            d
        })
        .collect()
}

/// Rankees within distance `d` of `i` (strict / closed).
pub fn ball_counts(g: &Graph, dist_from_i: &[f64], d: f64) -> (usize, usize) {
    let mut lt = 0;
    let mut le = 0;
    for u in g.rankees() {
        let x = dist_from_i[u as usize];
        if x == UNREACHABLE {
            continue;
        }
        if x < d {
            lt += 1;
        }
        if x <= d {
            le += 1;
        }
    }
    (lt, le)
}

#[derive(Debug, Clone)]
pub struct GraphCase {
    pub n: usize,
    pub m: usize,
    pub directed: bool,
    pub unique: bool,
    pub seed: u64,
}

impl GraphCase {
    pub fn build(&self) -> Graph {
        let lengths = if self.unique {
            Lengths::Uniform(1.0, 10.0)
        } else {
            Lengths::Integer(1, 10)
        };
        gnm(self.n, self.m, self.directed, lengths, self.seed).unwrap()
    }
}

/// Small random graphs, with integer lengths (many ties) or real lengths.
pub fn small_graph(max_n: usize) -> impl Strategy<Value = GraphCase> {
    (2..=max_n, 0.5f64..4.0, any::<bool>(), any::<bool>(), any::<u64>()).prop_map(|(n, deg, directed, unique, seed)| {
        GraphCase {
            n,
            m: ((n as f64) * deg) as usize,
            directed,
            unique,
            seed,
        }
    })
}
