use proptest::prelude::*;
use streamnament::generators::{random_strong_tournament, random_tournament, HashedTournament};
use streamnament::hamiltonian::{
    cycle_pass_bound, ham_cycle, ham_path, ham_path_scc_concat, restricted_path, Anchor, HamConfig,
};
use streamnament::oracles::{is_ham_cycle, is_ham_path, oracle_strongly_connected, DenseGraph};

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn outputs_are_hamiltonian(n in 1usize..48, seed in any::<u64>(), budget in 4usize..3000, base in 1usize..13) {
        let s = random_tournament(n, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        let cfg = HamConfig { budget, base_case: base };
        let c = ham_cycle(&s, cfg).unwrap();
        prop_assert_eq!(c.value.is_some(), oracle_strongly_connected(&g));
        if let Some(cycle) = &c.value {
            prop_assert!(is_ham_cycle(&g, &cycle.vertices));
        }
        prop_assert_eq!(c.stats.passes, c.critical_passes);
        prop_assert!(c.nesting.iter().all(|&(p, ch)| ch <= (3 * p).div_ceil(4)));
        let p = ham_path_scc_concat(&s, cfg).unwrap();
        prop_assert!(is_ham_path(&g, &p.value.vertices));
        let all: Vec<u32> = (0..n as u32).collect();
        prop_assert!(is_ham_path(&g, &ham_path(&s, &all, cfg).unwrap().value.vertices));
    }

    #[test]
    fn sub_scopes(n in 4usize..30, seed in any::<u64>(), pick in any::<u64>()) {
        let s = random_tournament(n, seed);
        let g = DenseGraph::from_stream(&s).unwrap();
        let scope: Vec<u32> = (0..n as u32).filter(|v| pick >> (v % 64) & 1 == 1).collect();
        prop_assume!(!scope.is_empty());
        let p = ham_path(&s, &scope, HamConfig::new(64)).unwrap().value.vertices;
        prop_assert_eq!(p.len(), scope.len());
        prop_assert!(p.windows(2).all(|w| g.has(w[0], w[1])));
    }

    #[test]
    fn edge_order_does_not_change_the_cycle(n in 3usize..40, seed in any::<u64>(), order in any::<u64>()) {
        let s = random_strong_tournament(n, seed).unwrap();
        let cfg = HamConfig { budget: n * n, base_case: 3 };
        let a = ham_cycle(&s, cfg).unwrap();
        let b = ham_cycle(&s.permuted(order).unwrap(), cfg).unwrap();
        prop_assert_eq!(a.value, b.value);
        prop_assert_eq!(a.stats, b.stats);
    }

    #[test]
    fn anchored_paths(n in 3usize..25, seed in any::<u64>(), u in any::<u32>()) {
        let s = random_strong_tournament(n, seed).unwrap();
        let g = DenseGraph::from_stream(&s).unwrap();
        let u = u % n as u32;
        let all: Vec<u32> = (0..n as u32).collect();
        let cfg = HamConfig { budget: 256, base_case: 1 };
        let p = restricted_path(&s, &all, Anchor::Start, u, cfg).unwrap().value.vertices;
        prop_assert!(is_ham_path(&g, &p) && p[0] == u);
        let p = restricted_path(&s, &all, Anchor::End, u, cfg).unwrap().value.vertices;
        prop_assert!(is_ham_path(&g, &p) && p[n - 1] == u);
    }
}

#[test]
fn pass_bound_on_larger_inputs() {
    for n in [32usize, 64, 128, 200] {
        for seed in 0..3 {
            let s = HashedTournament { n, seed, transitive: false }.stream();
            let run = ham_cycle(&s, HamConfig::new(n * n)).unwrap();
            if run.value.is_some() {
                assert!((run.stats.passes as f64) <= cycle_pass_bound(n), "n={n}: {} passes", run.stats.passes);
            }
        }
    }
}
