//! All-distances sketches: rank assignment, the per-node sketch with its
//! threshold state, and the sequential and batched Pruned Dijkstra builders.

mod ads;
mod build;
mod ranks;
mod schedule;

pub use ads::{AdsEntry, AdsSketch, PruneDecision};
pub use build::{build_ads, BuildSchedule, BuildStats, SketchSet};
pub use ranks::{assign_ranks, RankAssignment, RankAssignMode};
pub use schedule::{batch_boundaries, BatchSchedule};
