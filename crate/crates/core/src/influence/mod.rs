//! Reverse-rank influence: evaluation under general decay and weight
//! functions, exact greedy maximization and sampling-based greedy (SKIM).

mod greedy;
mod skim;
mod spec;

pub use greedy::{coverers_estimated, coverers_exact, exact_greedy_im, greedy_from_coverers, greedy_im_estimated};
pub use skim::{skim_im, BestSeedTable, SkimParams, SkimResult, SkimStats, StopRule};
pub use spec::{Alpha, Beta, InfluenceSpec};

use crate::error::{Error, Result};
use crate::estimate::EstimationLists;
use crate::graph::{Graph, NodeId};
use crate::rank::RankMode;
use crate::reverse::{reverse_rank_sorted, RevRankOptions};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SeedEntry {
    pub seed: NodeId,
    /// Rankers first covered by this seed.
    pub marginal: u64,
}

/// Seeds in selection order with their marginal coverage.
#[derive(Debug, Clone, Default, PartialEq, Eq)]
pub struct SeedList {
    pub entries: Vec<SeedEntry>,
    /// `|Z|`, for coverage fractions.
    pub ranker_count: usize,
}

impl SeedList {
    pub fn seeds(&self) -> Vec<NodeId> {
        self.entries.iter().map(|e| e.seed).collect()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn total(&self) -> u64 {
        self.entries.iter().map(|e| e.marginal).sum()
    }

    /// Cumulative coverage after each seed.
    pub fn cumulative(&self) -> Vec<u64> {
        self.entries
            .iter()
            .scan(0u64, |acc, e| {
                *acc += e.marginal;
                Some(*acc)
            })
            .collect()
    }
}

/// Estimated influence `Σ_z β(z) α(π̂_zS)` of a seed set, from one
/// multi-source reverse-rank traversal.
///
/// Rankers that cannot reach any seed contribute nothing. With the upper
/// rank mode the traversal stops at the first ranker where `α` vanishes;
/// other modes do not follow the traversal order and scan everything.
pub fn evaluate_influence_est(g: &Graph, lists: &EstimationLists, seeds: &[NodeId], spec: &InfluenceSpec) -> Result<f64> {
    spec.validate(g)?;
    if seeds.is_empty() {
        return Err(Error::InvalidParameter("seed set is empty".into()));
    }
    let early_stop = spec.rank_mode == RankMode::Upper;
    let mut total = 0.0;
    for item in reverse_rank_sorted(g, lists, seeds, RevRankOptions::default())? {
        let a = spec.alpha.eval(item.rank.value(spec.rank_mode));
        if a == 0.0 && early_stop {
            break;
        }
        if g.is_ranker(item.node) {
            total += spec.beta.weight(item.node) * a;
        }
    }
    Ok(total)
}
