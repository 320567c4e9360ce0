mod common;

use adsrank::{dijkstra, top_t_rankees, RankMode, UNREACHABLE};
use common::{all_pairs, ball_counts, small_graph};
use proptest::prelude::*;

proptest! {
    #![proptest_config(ProptestConfig::with_cases(100))]

    #[test]
    fn dijkstra_matches_bellman_ford(case in small_graph(64)) {
        let g = case.build();
        let apsp = all_pairs(&g);
        for s in g.nodes() {
            let res = dijkstra(&g, s, false).unwrap();
            prop_assert_eq!(&res.dist, &apsp[s as usize]);
            prop_assert_eq!(res.dist[s as usize], 0.0);
            prop_assert!(res.scan_order.windows(2).all(|w| res.dist[w[0] as usize] <= res.dist[w[1] as usize]));
            prop_assert!(res.scan_order.iter().all(|&v| res.is_reachable(v)));
        }
    }

    #[test]
    fn transpose_gives_distances_to_source(case in small_graph(40)) {
        let g = case.build();
        let apsp = all_pairs(&g);
        for s in g.nodes() {
            let res = dijkstra(&g, s, true).unwrap();
            for v in g.nodes() {
                prop_assert_eq!(res.dist[v as usize], apsp[v as usize][s as usize]);
            }
        }
    }

    #[test]
    fn top_t_is_exact_rank_filter(case in small_graph(64), t in 1usize..12) {
        let g = case.build();
        let apsp = all_pairs(&g);
        for mode in [RankMode::Upper, RankMode::LowerPlusOne, RankMode::Midpoint] {
            for z in g.nodes() {
                let mut got = top_t_rankees(&g, z, t, mode).unwrap();
                got.sort_by_key(|p| p.0);
                let mut want = Vec::new();
                for u in g.rankees() {
                    let d = apsp[z as usize][u as usize];
                    if d == UNREACHABLE {
                        continue;
                    }
                    let (lt, le) = ball_counts(&g, &apsp[z as usize], d);
                    let rank = mode.resolve(lt as f64, le as f64);
                    if rank <= t as f64 {
                        want.push((u, rank));
                    }
                }
                prop_assert_eq!(got, want);
            }
        }
    }
}

#[test]
fn top_t_examples() {
    let path = adsrank::Graph::from_edges(3, false, &[(0, 1, 1.0), (1, 2, 1.0)]).unwrap();
    assert_eq!(top_t_rankees(&path, 0, 2, RankMode::Upper).unwrap(), vec![(0, 1.0), (1, 2.0)]);
    let star = adsrank::Graph::from_edges(4, false, &[(0, 1, 1.0), (0, 2, 1.0), (0, 3, 1.0)]).unwrap();
    assert_eq!(top_t_rankees(&star, 0, 1, RankMode::Upper).unwrap(), vec![(0, 1.0)]);
    let all = top_t_rankees(&star, 1, 10, RankMode::Upper).unwrap();
    assert_eq!(all.len(), 4);
}
