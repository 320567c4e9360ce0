mod common;

use adsrank::gen::{erdos_renyi, Lengths};
use adsrank::oracle::ExactRankTable;
use adsrank::sketch::{assign_ranks, build_ads, BuildSchedule, RankAssignMode};
use adsrank::{EstimationLists, Estimator, UNREACHABLE};
use common::small_graph;
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(80))]

    #[test]
    fn saturated_estimates_are_exact(case in small_graph(48), rseed in any::<u64>()) {
        let g = case.build();
        let n = g.node_count();
        let ranks = assign_ranks(&g, RankAssignMode::Permutation, rseed);
        let (set, _) = build_ads(&g, n, &ranks, BuildSchedule::Sequential).unwrap();
        let table = ExactRankTable::build(&g);
        for est in [Estimator::BottomK, Estimator::Hip] {
            let lists = EstimationLists::build(&set, est);
            for j in g.nodes() {
                for i in g.nodes() {
                    let exact = table.get(j, i);
                    let r = lists.rank(j, exact.dist);
                    prop_assert_eq!((r.lower, r.upper), (exact.lower as f64, exact.upper as f64));
                }
            }
        }
    }

    #[test]
    fn lists_are_monotone(case in small_graph(64), k in 1usize..8, rseed in any::<u64>(), probes in prop::collection::vec(0.0f64..80.0, 2..20)) {
        let g = case.build();
        let ranks = assign_ranks(&g, RankAssignMode::Hash, rseed);
        let (set, _) = build_ads(&g, k, &ranks, BuildSchedule::Sequential).unwrap();
        for est in [Estimator::BottomK, Estimator::Hip] {
            let lists = EstimationLists::build(&set, est);
            for (v, l) in lists.lists().iter().enumerate() {
                prop_assert!(l.pairs.windows(2).all(|w| w[0].0 < w[1].0 && w[0].1 <= w[1].1));
                let mut distinct: Vec<f64> = set.sketch(v as u32).entries().iter().filter(|e| !e.auxiliary).map(|e| e.dist).collect();
                distinct.sort_by(f64::total_cmp);
                distinct.dedup();
                prop_assert_eq!(l.pairs.iter().map(|p| p.0).collect::<Vec<_>>(), distinct);
                let mut p = probes.clone();
                p.sort_by(f64::total_cmp);
                for w in p.windows(2) {
                    for strict in [false, true] {
                        prop_assert!(l.cardinality(w[0], strict) <= l.cardinality(w[1], strict));
                    }
                }
            }
        }
    }
}

/// Mean of bottom-k estimates over many rank seeds stays within three
/// standard errors of the true count. Hash ranks are i.i.d. uniform; with
/// permutation ranks a ball covering most of `U` is biased low by up to
/// `(k-1)/k`.
#[test]
fn bottom_k_is_unbiased_on_fixed_probes() {
    let g = erdos_renyi(400, 6.0, false, Lengths::Uniform(1.0, 2.0), 21).unwrap();
    let k = 8;
    let table = ExactRankTable::build(&g);
    let probes: Vec<(u32, u32)> = (0..8).map(|i| (i * 37 % 400, (i * 101 + 7) % 400)).collect();
    let seeds = 300;
    let mut samples = vec![Vec::with_capacity(seeds); probes.len()];
    for seed in 0..seeds as u64 {
        let ranks = assign_ranks(&g, RankAssignMode::Hash, seed);
        let (set, _) = build_ads(&g, k, &ranks, BuildSchedule::Sequential).unwrap();
        let lists = EstimationLists::build(&set, Estimator::BottomK);
        for (p, &(v, u)) in probes.iter().enumerate() {
            let d = table.get(v, u).dist;
            assert!(d != UNREACHABLE);
            samples[p].push(lists.get(v).cardinality(d, false));
        }
    }
    for (p, xs) in samples.iter().enumerate() {
        let (v, u) = probes[p];
        let truth = table.get(v, u).upper as f64;
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let var = xs.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (n - 1.0);
        let se = (var / n).sqrt();
        if truth < k as f64 {
            assert_eq!(mean, truth);
        } else {
            assert!((mean - truth).abs() <= 3.0 * se + 1e-9, "probe {p}: mean {mean}, truth {truth}, se {se}");
        }
    }
}

#[test]
fn exact_mode_rank_examples() {
    let g = adsrank::Graph::from_edges(3, false, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    let ranks = assign_ranks(&g, RankAssignMode::Permutation, 0);
    let (set, _) = build_ads(&g, 3, &ranks, BuildSchedule::Sequential).unwrap();
    let lists = EstimationLists::build(&set, Estimator::BottomK);
    assert_eq!(lists.rank(0, 2.0).upper, 3.0);
    assert_eq!(lists.rank(1, 0.0).upper, 1.0);
}
