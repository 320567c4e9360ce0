//! All-distances sketches on weighted graphs, with estimated reverse-rank
//! queries and reverse-rank influence maximization built on top of them.

pub mod error;
pub mod estimate;
pub mod gen;
pub mod graph;
pub mod influence;
pub mod oracle;
pub mod rank;
pub mod reverse;
pub mod sketch;
pub mod store;

mod search;

pub use error::{Error, Result};
pub use estimate::{estimate_cardinality, estimate_rank, EstimationList, EstimationLists, Estimator};
pub use graph::{dijkstra, load_edge_list, top_t_rankees, DistanceResult, Graph, NodeId, UNREACHABLE};
pub use rank::{RankEstimate, RankMode};
pub use reverse::{reverse_rank_sorted, RevRankItem, RevRankOptions, RevRankStream, RevRankWorkspace};
pub use sketch::{assign_ranks, build_ads, BuildSchedule, BuildStats, RankAssignMode, RankAssignment, SketchSet};
