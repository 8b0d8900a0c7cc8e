use proptest::prelude::*;
use streamnament::generators::{
    acyc_gadget, reach_gadget, reachgen_gadget, sink_gadget, strconn_gadget, GenSpec, HashedTournament,
};
use streamnament::oracles::{oracle_acyclic, oracle_reach, oracle_sinks, oracle_strongly_connected, DenseGraph};
use streamnament::scc::{reach_query, scc_run, strconn_query};
use streamnament::stream::format::{parse_edge_list, write_edge_list};
use streamnament::{Edge, EdgeStream, SpaceMeter};

fn dense(s: &EdgeStream) -> DenseGraph {
    DenseGraph::from_stream(s).unwrap()
}

fn bit_pair(max: usize) -> impl Strategy<Value = (Vec<bool>, Vec<bool>)> {
    (1..=max).prop_flat_map(|n| (prop::collection::vec(any::<bool>(), n), prop::collection::vec(any::<bool>(), n)))
}

proptest! {
    #[test]
    fn ladder_gadgets((x, y) in bit_pair(8)) {
        let disjoint = x.iter().zip(&y).all(|(a, b)| !(a & b));
        let g = reach_gadget(&x, &y).unwrap();
        prop_assert!(dense(&g.stream).is_tournament());
        prop_assert_eq!(g.answer, disjoint);
        prop_assert_eq!(oracle_reach(&dense(&g.stream), g.s, g.t), disjoint);
        prop_assert_eq!(reach_query(&scc_run(&g.stream, true).unwrap().value, g.s, g.t).unwrap(), disjoint);
        let (s, answer) = strconn_gadget(&x, &y).unwrap();
        prop_assert_eq!(answer, disjoint);
        prop_assert_eq!(oracle_strongly_connected(&dense(&s)), disjoint);
        prop_assert_eq!(strconn_query(&scc_run(&s, true).unwrap().value), disjoint);
        let (s, answer) = acyc_gadget(&x, &y).unwrap();
        prop_assert_eq!(answer, disjoint);
        prop_assert_eq!(oracle_acyclic(&dense(&s)), disjoint);
    }

    #[test]
    fn sink_gadget_has_one_sink((mut x, mut y) in bit_pair(8), c in any::<prop::sample::Index>()) {
        let c = c.index(x.len());
        for i in 0..x.len() {
            if i != c && x[i] && y[i] {
                y[i] = false;
            }
        }
        x[c] = true;
        y[c] = true;
        let (s, sink) = sink_gadget(&x, &y).unwrap();
        prop_assert_eq!(oracle_sinks(&dense(&s)), vec![sink]);
        prop_assert!(oracle_acyclic(&dense(&s)));
    }

    #[test]
    fn reachgen_gadget_truth(bits in prop::collection::vec(any::<bool>(), 9), i in 0usize..3, j in 0usize..3) {
        let x: Vec<Vec<bool>> = bits.chunks(3).map(<[bool]>::to_vec).collect();
        let g = reachgen_gadget(&x, i, j).unwrap();
        let d = dense(&g.stream);
        prop_assert_eq!(oracle_reach(&d, g.s, g.t), !x[i][j]);
        prop_assert_eq!(oracle_strongly_connected(&d), !x[i][j]);
    }

    #[test]
    fn edge_lists_round_trip(n in 0usize..30, seed in any::<u64>()) {
        let s = generated(&format!("random:n={n},seed={seed}"));
        let text = s.to_text().unwrap();
        let (m, edges) = parse_edge_list(&text).unwrap();
        prop_assert_eq!(m, n);
        prop_assert_eq!(write_edge_list(m, &edges), text);
    }
}

fn generated(spec: &str) -> EdgeStream {
    spec.parse::<GenSpec>().unwrap().build().unwrap()
}

#[test]
fn file_streams_replay_like_memory() {
    let s = HashedTournament { n: 12, seed: 3, transitive: false }.stream();
    let path = std::env::temp_dir().join(format!("streamnament-{}.txt", std::process::id()));
    std::fs::write(&path, s.to_text().unwrap()).unwrap();
    let f = EdgeStream::from_file(&path).unwrap();
    assert_eq!(f.edges().unwrap(), s.edges().unwrap());
    assert_eq!(scc_run(&f, true).unwrap(), scc_run(&s, true).unwrap());
    std::fs::write(&path, "3 2\n0 1\n1 1\n").unwrap();
    assert!(EdgeStream::from_file(&path).and_then(|f| f.edges()).is_err());
    std::fs::remove_file(&path).unwrap();
}

#[test]
fn meter_checks() {
    let m = SpaceMeter::new();
    assert!(m.check(1).unwrap());
    m.alloc(20);
    m.free(20);
    assert!(m.check(20).unwrap());
    assert!(!m.check(10).unwrap());
    assert!(m.check(0).is_err());
    assert!(EdgeStream::from_edges(2, [Edge::new(0, 1), Edge::new(0, 1)]).is_err());
}
