//! Distance-to-cardinality estimation lists derived from a sketch, and the
//! rank queries answered from them.

use std::collections::BinaryHeap;
use std::fmt;
use std::str::FromStr;

use crate::error::{invalid, Error, Result};
use crate::graph::NodeId;
use crate::rank::RankEstimate;
use crate::sketch::{AdsSketch, SketchSet};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Default)]
pub enum Estimator {
    #[default]
    BottomK,
    Hip,
}

impl Estimator {
    pub fn as_str(self) -> &'static str {
        match self {
            Estimator::BottomK => "bottom-k",
            Estimator::Hip => "hip",
        }
    }

    pub(crate) fn code(self) -> u8 {
        match self {
            Estimator::BottomK => 1,
            Estimator::Hip => 2,
        }
    }

    pub(crate) fn from_code(c: u8) -> Option<Self> {
        match c {
            1 => Some(Estimator::BottomK),
            2 => Some(Estimator::Hip),
            _ => None,
        }
    }
}

impl fmt::Display for Estimator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Estimator {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "bottom-k" | "bottomk" | "bottom_k" => Ok(Estimator::BottomK),
            "hip" | "HIP" => Ok(Estimator::Hip),
            other => Err(invalid(format!("unknown estimator `{other}`"))),
        }
    }
}

/// `(distance, estimate)` pairs, strictly increasing in distance and
/// nondecreasing in estimate.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationList {
    pub estimator: Estimator,
    pub pairs: Vec<(f64, f64)>,
}

/// Positive `f64` values ordered by their bit patterns.
fn key(r: f64) -> u64 {
    debug_assert!(r > 0.0);
    r.to_bits()
}

/// The `k` smallest values pushed so far.
struct BottomK {
    k: usize,
    heap: BinaryHeap<u64>,
}

impl BottomK {
    fn new(k: usize) -> Self {
        Self {
            k,
            heap: BinaryHeap::with_capacity(k + 1),
        }
    }

    fn push(&mut self, r: f64) {
        if self.heap.len() < self.k {
            self.heap.push(key(r));
        } else if key(r) < *self.heap.peek().unwrap() {
            self.heap.pop();
            self.heap.push(key(r));
        }
    }

    /// The `k`-th smallest value, once `k` values have been seen.
    fn kth(&self) -> Option<f64> {
        if self.heap.len() == self.k {
            self.heap.peek().map(|&b| f64::from_bits(b))
        } else {
            None
        }
    }
}

/// Builds the estimation list of one node.
///
/// `u_count` is `|U|`; when `k ≥ |U|` the sketch holds every reachable
/// rankee and both estimators return exact counts.
pub fn build_estimation_list(sketch: &AdsSketch, k: usize, estimator: Estimator, u_count: usize) -> Result<EstimationList> {
    if sketch.k() != k {
        return Err(Error::Mismatch(format!("sketch was built with k={}, asked for k={k}", sketch.k())));
    }
    let members: Vec<_> = sketch.entries_by_distance().filter(|e| !e.auxiliary).collect();
    let mut pairs: Vec<(f64, f64)> = Vec::new();
    let saturated = k >= u_count;
    let mut seen = BottomK::new(k);
    let mut count = 0usize;
    let mut hip_sum = 0.0;
    let mut i = 0;
    while i < members.len() {
        let d = members[i].dist;
        let mut j = i;
        // HIP probabilities use only strictly closer entries, so the whole
        // tier is weighed before any of it is pushed
        let tau = seen.kth();
        while j < members.len() && members[j].dist == d {
            hip_sum += tau.map_or(1.0, |t| 1.0 / t);
            j += 1;
        }
        for e in &members[i..j] {
            seen.push(e.r);
        }
        count += j - i;
        let est = match estimator {
            Estimator::Hip => hip_sum,
            Estimator::BottomK => match seen.kth() {
                Some(t) if !saturated => (k - 1) as f64 / t,
                _ => count as f64,
            },
        };
        pairs.push((d, est));
        i = j;
    }
    Ok(EstimationList { estimator, pairs })
}

impl EstimationList {
    /// Estimated number of rankees within distance `d` (strictly closer when
    /// `strict`); zero below the smallest listed distance.
    pub fn cardinality(&self, d: f64, strict: bool) -> f64 {
        let idx = if strict {
            self.pairs.partition_point(|&(x, _)| x < d)
        } else {
            self.pairs.partition_point(|&(x, _)| x <= d)
        };
        if idx == 0 {
            0.0
        } else {
            self.pairs[idx - 1].1
        }
    }

    /// Estimated number of rankees reachable from the node.
    pub fn reachable(&self) -> f64 {
        self.pairs.last().map_or(0.0, |p| p.1)
    }

    /// Rank range of a rankee at distance `d`; an unreachable rankee
    /// (`d = ∞`) gets `(reachable, u_count]`.
    pub fn rank(&self, d: f64, u_count: usize) -> RankEstimate {
        if d == f64::INFINITY {
            RankEstimate::new(self.reachable(), u_count as f64)
        } else {
            RankEstimate::new(self.cardinality(d, true), self.cardinality(d, false))
        }
    }
}

pub fn estimate_cardinality(list: &EstimationList, d: f64, strict: bool) -> f64 {
    list.cardinality(d, strict)
}

pub fn estimate_rank(list: &EstimationList, d: f64, u_count: usize) -> RankEstimate {
    list.rank(d, u_count)
}

/// Estimation lists for every node of a sketch set.
#[derive(Debug, Clone, PartialEq)]
pub struct EstimationLists {
    estimator: Estimator,
    k: usize,
    u_count: usize,
    lists: Vec<EstimationList>,
}

impl EstimationLists {
    pub fn build(set: &SketchSet, estimator: Estimator) -> Self {
        let lists = set
            .sketches()
            .iter()
            .map(|s| build_estimation_list(s, set.k(), estimator, set.u_count()).expect("k taken from the set"))
            .collect();
        Self {
            estimator,
            k: set.k(),
            u_count: set.u_count(),
            lists,
        }
    }

    pub(crate) fn from_parts(estimator: Estimator, k: usize, u_count: usize, lists: Vec<EstimationList>) -> Self {
        Self {
            estimator,
            k,
            u_count,
            lists,
        }
    }

    pub fn estimator(&self) -> Estimator {
        self.estimator
    }

    pub fn k(&self) -> usize {
        self.k
    }

    pub fn u_count(&self) -> usize {
        self.u_count
    }

    pub fn node_count(&self) -> usize {
        self.lists.len()
    }

    pub fn get(&self, v: NodeId) -> &EstimationList {
        &self.lists[v as usize]
    }

    pub fn lists(&self) -> &[EstimationList] {
        &self.lists
    }

    /// Rank range of a rankee at distance `d` from ranker `v`.
    pub fn rank(&self, v: NodeId, d: f64) -> RankEstimate {
        self.lists[v as usize].rank(d, self.u_count)
    }

    pub(crate) fn require(&self, estimator: Estimator) -> Result<()> {
        if self.estimator != estimator {
            return Err(Error::Mismatch(format!("need {estimator} lists, got {}", self.estimator)));
        }
        Ok(())
    }
}
