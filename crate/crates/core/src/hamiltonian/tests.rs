use super::*;
use crate::generators::{random_strong_tournament, random_tournament, rotational, transitive};
use crate::oracles::{is_ham_cycle, is_ham_path, oracle_strongly_connected, DenseGraph};
use crate::Edge;

fn all_tournaments(n: usize) -> impl Iterator<Item = EdgeStream> {
    let pairs: Vec<(u32, u32)> = (0..n as u32).flat_map(|a| (a + 1..n as u32).map(move |b| (a, b))).collect();
    (0u64..1 << pairs.len()).map(move |mask| {
        let edges = pairs
            .iter()
            .enumerate()
            .map(|(i, &(a, b))| if mask >> i & 1 == 1 { Edge::new(b, a) } else { Edge::new(a, b) });
        EdgeStream::from_edges(n, edges).unwrap()
    })
}

fn configs() -> [HamConfig; 3] {
    [HamConfig::new(1 << 20), HamConfig { budget: 1 << 20, base_case: 1 }, HamConfig { budget: 4, base_case: 1 }]
}

#[test]
fn three_cycle() {
    let s = EdgeStream::from_edges(3, [Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 0)]).unwrap();
    for cfg in configs() {
        let run = ham_cycle(&s, cfg).unwrap();
        let mut c = run.value.unwrap().vertices;
        let at = c.iter().position(|&v| v == 0).unwrap();
        c.rotate_left(at);
        assert_eq!(c, vec![0, 1, 2]);
        assert_eq!(run.stats.passes, run.critical_passes);
    }
}

#[test]
fn transitive_cases() {
    let s = transitive(6);
    assert_eq!(ham_cycle(&s, HamConfig::new(100)).unwrap().value, None);
    let p = ham_path(&s, &[0, 1, 2, 3, 4, 5], HamConfig::new(4)).unwrap();
    assert_eq!(p.value.vertices, vec![0, 1, 2, 3, 4, 5]);
    let p = restricted_path(&s, &[0, 1, 2, 3, 4, 5], Anchor::Start, 0, HamConfig::new(100)).unwrap();
    assert_eq!(p.value.vertices, vec![0, 1, 2, 3, 4, 5]);
    assert!(matches!(
        restricted_path(&s, &[0, 1, 2, 3, 4, 5], Anchor::Start, 3, HamConfig::new(100)),
        Err(Error::Precondition(_))
    ));
    assert_eq!(ham_path_scc_concat(&s, HamConfig::new(100)).unwrap().value.vertices, vec![0, 1, 2, 3, 4, 5]);
    assert_eq!(ham_path(&s, &[4], HamConfig::new(4)).unwrap().value.vertices, vec![4]);
}

#[test]
fn exhaustive_small() {
    for n in 1..=5 {
        for s in all_tournaments(n) {
            let g = DenseGraph::from_stream(&s).unwrap();
            let all: Vec<u32> = (0..n as u32).collect();
            for cfg in configs() {
                let run = ham_cycle(&s, cfg).unwrap();
                assert_eq!(run.value.is_some(), oracle_strongly_connected(&g));
                if let Some(c) = run.value {
                    assert!(is_ham_cycle(&g, &c.vertices));
                }
                assert_eq!(run.stats.passes, run.critical_passes);
                let p = ham_path(&s, &all, cfg).unwrap();
                assert!(is_ham_path(&g, &p.value.vertices));
                let p = ham_path_scc_concat(&s, cfg).unwrap();
                assert!(is_ham_path(&g, &p.value.vertices));
                assert_eq!(p.stats.passes, p.critical_passes);
            }
        }
    }
}

#[test]
fn restricted_anchors() {
    for seed in 0..20 {
        let s = random_strong_tournament(7, seed).unwrap();
        let g = DenseGraph::from_stream(&s).unwrap();
        let all: Vec<u32> = (0..7).collect();
        for u in 0..7 {
            for cfg in configs() {
                let p = restricted_path(&s, &all, Anchor::End, u, cfg).unwrap().value.vertices;
                assert!(is_ham_path(&g, &p) && p[6] == u);
                let p = restricted_path(&s, &all, Anchor::Start, u, cfg).unwrap().value.vertices;
                assert!(is_ham_path(&g, &p) && p[0] == u);
            }
        }
    }
}

#[test]
fn larger_cycles_shrink() {
    for (n, seed) in [(20, 1), (33, 2), (64, 3)] {
        let s = random_strong_tournament(n, seed).unwrap();
        let g = DenseGraph::from_stream(&s).unwrap();
        for cfg in [HamConfig::new(n * n), HamConfig { budget: n * n, base_case: 1 }, HamConfig::new(16)] {
            let run = ham_cycle(&s, cfg).unwrap();
            assert!(is_ham_cycle(&g, &run.value.unwrap().vertices));
            assert_eq!(run.stats.passes, run.critical_passes);
            assert!(!run.nesting.is_empty());
            assert!(run.nesting.iter().all(|&(p, c)| c <= (3 * p).div_ceil(4)));
        }
    }
    let s = rotational(21).unwrap();
    let g = DenseGraph::from_stream(&s).unwrap();
    assert!(is_ham_cycle(&g, &ham_cycle(&s, HamConfig::new(441)).unwrap().value.unwrap().vertices));
}

#[test]
fn merge_levels_with_full_budget() {
    let s = random_tournament(37, 5);
    let all: Vec<u32> = (0..37).collect();
    let run = ham_path(&s, &all, HamConfig::new(37 * 37)).unwrap();
    // six merge levels and the verification pass
    assert_eq!(run.stats.passes, 7);
    let tight = ham_path(&s, &all, HamConfig::new(4)).unwrap();
    assert!(tight.stats.passes > 7);
    assert_eq!(tight.stats.passes, tight.critical_passes);
}

#[test]
fn malformed_and_bad_arguments() {
    let s = EdgeStream::from_edges(3, [Edge::new(0, 1), Edge::new(1, 2)]).unwrap();
    assert!(matches!(ham_path(&s, &[0, 1, 2], HamConfig::new(100)), Err(Error::Malformed(_))));
    assert!(matches!(ham_cycle(&s, HamConfig::new(100)), Err(Error::Malformed(_))));
    assert!(matches!(ham_path(&s, &[0, 1], HamConfig::new(3)), Err(Error::Argument(_))));
    assert!(matches!(ham_path(&s, &[0, 0], HamConfig::new(4)), Err(Error::Argument(_))));
    assert!(matches!(ham_path(&s, &[5], HamConfig::new(4)), Err(Error::Argument(_))));
}
