use proptest::prelude::*;
use streamnament::acyc::{acyc_t, sink_dag, squared_outdegree_sum, transitive_threshold};
use streamnament::fas::{count_back_edges, fas_t, FasConfig, FasMode};
use streamnament::generators::{random_dag, random_tournament, transitive};
use streamnament::oracles::{back_edges, oracle_acyclic, oracle_fas, oracle_sinks, DenseGraph};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn acyclicity_is_independent_of_p(n in 1usize..60, seed in any::<u64>(), transitive_input in any::<bool>()) {
        let s = if transitive_input { transitive(n).permuted(seed).unwrap() } else { random_tournament(n, seed) };
        let truth = oracle_acyclic(&DenseGraph::from_stream(&s).unwrap());
        for p in [1, 2, 3, n].into_iter().filter(|&p| p <= n) {
            let m = acyc_t(&s, p).unwrap();
            prop_assert_eq!(m.value, truth);
            prop_assert_eq!(m.stats.passes, p);
            prop_assert!(m.stats.words_peak <= n.div_ceil(p) + 4);
        }
        prop_assert_eq!(squared_outdegree_sum(&s, 1).unwrap().value >= transitive_threshold(n), truth);
    }

    #[test]
    fn sinks_are_sinks(n in 1usize..50, p in 1usize..8, seed in any::<u64>()) {
        let s = random_dag(n, 0.3, seed);
        let p = p.min(n);
        let m = sink_dag(&s, p).unwrap();
        prop_assert!(oracle_sinks(&DenseGraph::from_stream(&s).unwrap()).contains(&m.value));
        prop_assert!(m.stats.passes <= p);
        prop_assert!(m.stats.words_peak <= n.div_ceil(p) + 2);
    }

    #[test]
    fn fas_orderings(n in 1usize..10, seed in any::<u64>()) {
        let s = random_tournament(n, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        let (_, best) = oracle_fas(&g).unwrap();
        let exact = fas_t(&s, FasConfig::new(FasMode::Exact, n * n)).unwrap().value;
        prop_assert_eq!(exact.back_edges, best);
        prop_assert_eq!(back_edges(&g, &exact.order), best);
        prop_assert_eq!(exact.cross_back_edges, 0);
        let approx = fas_t(&s, FasConfig::new(FasMode::Indegree5, n * n)).unwrap().value;
        prop_assert!(approx.back_edges <= 5 * best);
        prop_assert_eq!(approx.cross_back_edges, 0);
        prop_assert_eq!(count_back_edges(&s, &approx.order).unwrap().value, approx.back_edges);
    }

    #[test]
    fn small_budget_falls_back(n in 3usize..30, seed in any::<u64>()) {
        let s = random_tournament(n, seed);
        let tight = fas_t(&s, FasConfig::new(FasMode::Exact, 0)).unwrap();
        let loose = fas_t(&s, FasConfig::new(FasMode::Indegree5, 0)).unwrap();
        prop_assert_eq!(tight.value, loose.value);
        prop_assert_eq!(tight.stats.passes, 2);
    }
}
