use proptest::prelude::*;
use streamnament::generators::{random_no_non_edge, random_tournament};
use streamnament::oracles::{oracle_reach, oracle_scc, DenseGraph};
use streamnament::scc::{reach_query, scc_run, strconn_query};
use streamnament::EdgeStream;

fn chain(s: &EdgeStream, tournament: bool) -> Vec<Vec<u32>> {
    scc_run(s, tournament).unwrap().value.components().to_vec()
}

proptest! {
    #[test]
    fn tournament_chain_matches_tarjan(n in 1usize..40, seed in any::<u64>()) {
        let s = random_tournament(n, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        prop_assert_eq!(chain(&s, true), oracle_scc(&g).components);
        prop_assert_eq!(chain(&s, false), oracle_scc(&g).components);
    }

    #[test]
    fn general_chain_matches_tarjan(n in 1usize..40, q in 0.0f64..0.6, seed in any::<u64>()) {
        let s = random_no_non_edge(n, q, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        prop_assert_eq!(chain(&s, false), oracle_scc(&g).components);
    }

    #[test]
    fn edge_order_is_irrelevant(n in 1usize..30, seed in any::<u64>(), order in any::<u64>()) {
        let s = random_no_non_edge(n, 0.3, seed);
        prop_assert_eq!(chain(&s, false), chain(&s.permuted(order).unwrap(), false));
    }

    #[test]
    fn prefixes_are_cuts(n in 2usize..25, seed in any::<u64>()) {
        let s = random_tournament(n, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        let comps = chain(&s, true);
        let mut inside = vec![false; n];
        let mut size = 0i64;
        for c in &comps[..comps.len() - 1] {
            for &v in c {
                inside[v as usize] = true;
            }
            size += c.len() as i64;
            let balance: i64 = g
                .vertices()
                .filter(|&v| inside[v as usize])
                .map(|v| g.out_degree(v) as i64 - g.in_degree(v) as i64)
                .sum();
            prop_assert_eq!(balance, size * (n as i64 - size));
            let reverse = g.edges().iter().filter(|e| !inside[e.from as usize] && inside[e.to as usize]).count();
            prop_assert_eq!(reverse, 0);
        }
    }

    #[test]
    fn queries_match_dfs(n in 1usize..20, seed in any::<u64>()) {
        let s = random_no_non_edge(n, 0.2, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        let c = scc_run(&s, false).unwrap().value;
        for a in 0..n as u32 {
            for b in 0..n as u32 {
                prop_assert_eq!(reach_query(&c, a, b).unwrap(), oracle_reach(&g, a, b));
            }
        }
        prop_assert_eq!(strconn_query(&c), oracle_scc(&g).components.len() == 1);
    }

    #[test]
    fn one_pass_and_degree_space(n in 1usize..60, seed in any::<u64>()) {
        let s = random_tournament(n, seed);
        let t = scc_run(&s, true).unwrap().stats;
        let gm = scc_run(&s, false).unwrap().stats;
        prop_assert_eq!((t.passes, gm.passes), (1, 1));
        prop_assert!(t.words_peak <= n + 4 && gm.words_peak <= 2 * n);
    }
}
