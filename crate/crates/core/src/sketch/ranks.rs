use std::fmt;
use std::str::FromStr;

use rand::seq::SliceRandom;
use rand::{RngCore, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{invalid, Error, Result};
use crate::graph::{Graph, NodeId};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum RankAssignMode {
    /// `r(u)` is the position of `u` in a seeded shuffle of `U`, divided by `|U|`.
    #[default]
    Permutation,
    /// `r(u)` is a seeded hash of the node id, uniform on `(0, 1]`.
    Hash,
}

impl RankAssignMode {
    pub fn as_str(self) -> &'static str {
        match self {
            RankAssignMode::Permutation => "permutation",
            RankAssignMode::Hash => "hash",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            RankAssignMode::Permutation => 0,
            RankAssignMode::Hash => 1,
        }
    }

    pub(crate) fn from_code(c: u8) -> Option<Self> {
        match c {
            0 => Some(RankAssignMode::Permutation),
            1 => Some(RankAssignMode::Hash),
            _ => None,
        }
    }
}

impl fmt::Display for RankAssignMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for RankAssignMode {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "permutation" | "perm" => Ok(RankAssignMode::Permutation),
            "hash" => Ok(RankAssignMode::Hash),
            other => Err(invalid(format!("unknown rank assignment mode `{other}`"))),
        }
    }
}

/// The random `r`-values of the rankees.
///
/// Rankees are totally ordered by `(r, node id)`; the id only matters when
/// hashed values collide.
#[derive(Debug, Clone)]
pub struct RankAssignment {
    mode: RankAssignMode,
    seed: u64,
    values: Vec<f64>,
    order: Vec<NodeId>,
    position: Vec<u32>,
}

// NaN marks non-rankees, so values are compared bitwise
impl PartialEq for RankAssignment {
    fn eq(&self, other: &Self) -> bool {
        self.mode == other.mode
            && self.seed == other.seed
            && self.values.len() == other.values.len()
            && self.values.iter().zip(&other.values).all(|(a, b)| a.to_bits() == b.to_bits())
    }
}

/// Maps 64 random bits to `(0, 1]`.
fn unit_interval(bits: u64) -> f64 {
    ((bits >> 11) + 1) as f64 * (1.0 / (1u64 << 53) as f64)
}

pub fn assign_ranks(g: &Graph, mode: RankAssignMode, seed: u64) -> RankAssignment {
    let mut values = vec![f64::NAN; g.node_count()];
    match mode {
        RankAssignMode::Permutation => {
            let mut rankees: Vec<NodeId> = g.rankees().collect();
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rankees.shuffle(&mut rng);
            let count = rankees.len() as f64;
            for (pos, &u) in rankees.iter().enumerate() {
                values[u as usize] = (pos + 1) as f64 / count;
            }
        }
        RankAssignMode::Hash => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            for u in g.rankees() {
                rng.set_stream(u as u64);
                rng.set_word_pos(0);
                values[u as usize] = unit_interval(rng.next_u64());
            }
        }
    }
    RankAssignment::from_parts(mode, seed, values)
}

impl RankAssignment {
    /// Uses explicit `r`-values; `NaN` marks a node that is not a rankee.
    pub fn from_values(mode: RankAssignMode, seed: u64, values: Vec<f64>) -> Result<Self> {
        if values.iter().any(|&r| !r.is_nan() && !(r > 0.0 && r <= 1.0)) {
            return Err(invalid("r-values must lie in (0, 1]"));
        }
        if values.iter().all(|r| r.is_nan()) {
            return Err(invalid("no rankee has an r-value"));
        }
        Ok(Self::from_parts(mode, seed, values))
    }

    fn from_parts(mode: RankAssignMode, seed: u64, values: Vec<f64>) -> Self {
        let mut order: Vec<NodeId> = (0..values.len() as NodeId)
            .filter(|&u| !values[u as usize].is_nan())
            .collect();
        order.sort_unstable_by(|&a, &b| {
            values[a as usize]
                .total_cmp(&values[b as usize])
                .then(a.cmp(&b))
        });
        let mut position = vec![u32::MAX; values.len()];
        for (pos, &u) in order.iter().enumerate() {
            position[u as usize] = pos as u32;
        }
        Self {
            mode,
            seed,
            values,
            order,
            position,
        }
    }

    pub fn mode(&self) -> RankAssignMode {
        self.mode
    }

    pub fn seed(&self) -> u64 {
        self.seed
    }

    /// `r(u)`, or `None` when `u` is not a rankee.
    pub fn get(&self, u: NodeId) -> Option<f64> {
        let r = self.values[u as usize];
        (!r.is_nan()).then_some(r)
    }

    #[inline]
    pub(crate) fn r(&self, u: NodeId) -> f64 {
        self.values[u as usize]
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    /// Rankees in increasing `(r, id)` order.
    pub fn order(&self) -> &[NodeId] {
        &self.order
    }

    /// Index of `u` in [`order`](Self::order).
    #[inline]
    pub fn position(&self, u: NodeId) -> u32 {
        self.position[u as usize]
    }

    pub fn rankee_count(&self) -> usize {
        self.order.len()
    }

    pub fn node_count(&self) -> usize {
        self.values.len()
    }

    /// Checks that this assignment covers exactly the rankees of `g`.
    pub fn check_graph(&self, g: &Graph) -> Result<()> {
        if self.values.len() != g.node_count() {
            return Err(Error::Mismatch(format!(
                "rank assignment has {} nodes, graph has {}",
                self.values.len(),
                g.node_count()
            )));
        }
        if g.nodes().any(|v| g.is_rankee(v) == self.values[v as usize].is_nan()) {
            return Err(Error::Mismatch(
                "rank assignment does not match the graph's rankee set".into(),
            ));
        }
        Ok(())
    }
}
