//! Instance generators: random and structured tournaments, near-tournaments,
//! DAGs, and reduction gadgets whose answers are known by construction.

use std::str::FromStr;
use std::sync::Arc;

use rand::seq::index::sample;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::oracles::DenseGraph;
use crate::sparse::{pair_count, PairIndex};
use crate::stream::{Edge, EdgeGenerator, EdgeStream, Flow, VertexId};

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn build(n: usize, edges: Vec<Edge>) -> EdgeStream {
    EdgeStream::from_edges(n, edges).expect("generated edges are valid")
}

/// A tournament with `u -> v` iff `forward(u, v)`, pairs listed `u < v` in order.
fn tournament_by(n: usize, mut forward: impl FnMut(VertexId, VertexId) -> bool) -> Vec<Edge> {
    let mut edges = Vec::with_capacity(pair_count(n));
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            edges.push(if forward(u, v) { Edge::new(u, v) } else { Edge::new(v, u) });
        }
    }
    edges
}

pub fn random_tournament(n: usize, seed: u64) -> EdgeStream {
    let mut r = rng(seed);
    build(n, tournament_by(n, |_, _| r.gen()))
}

pub fn transitive(n: usize) -> EdgeStream {
    build(n, tournament_by(n, |_, _| true))
}

/// `i -> i+1, ..., i+(n-1)/2 (mod n)`; strongly connected and regular.
pub fn rotational(n: usize) -> Result<EdgeStream> {
    if n % 2 == 0 {
        return Err(Error::Argument(format!("rotational tournaments need odd n, got {n}")));
    }
    Ok(build(n, tournament_by(n, |u, v| (v - u) as usize <= (n - 1) / 2)))
}

/// A random tournament that is strongly connected (rejection sampling; `n != 2`).
pub fn random_strong_tournament(n: usize, seed: u64) -> Result<EdgeStream> {
    if n == 2 {
        return Err(Error::Argument("no strongly connected tournament on 2 vertices".into()));
    }
    let mut r = rng(seed);
    loop {
        let s = build(n, tournament_by(n, |_, _| r.gen()));
        if crate::oracles::oracle_strongly_connected(&DenseGraph::from_stream(&s)?) {
            return Ok(s);
        }
    }
}

/// A random tournament with `non_edges` pairs removed and `bidirected` pairs doubled.
pub fn kclose_with(n: usize, non_edges: usize, bidirected: usize, seed: u64) -> Result<EdgeStream> {
    let pairs = pair_count(n);
    if non_edges + bidirected > pairs {
        return Err(Error::Argument(format!("{} modified pairs exceed {pairs} pairs", non_edges + bidirected)));
    }
    let mut r = rng(seed);
    let picked = sample(&mut r, pairs, non_edges + bidirected).into_vec();
    let mut kind = vec![0u8; pairs];
    for (i, &p) in picked.iter().enumerate() {
        kind[p] = if i < non_edges { 1 } else { 2 };
    }
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            let (a, b) = if r.gen() { (u, v) } else { (v, u) };
            match kind[PairIndex::of(n, u, v).0] {
                1 => {}
                2 => edges.extend([Edge::new(a, b), Edge::new(b, a)]),
                _ => edges.push(Edge::new(a, b)),
            }
        }
    }
    Ok(build(n, edges))
}

/// `k` modified pairs, each a non-edge or bidirected by a seeded coin.
pub fn kclose(n: usize, k: usize, seed: u64) -> Result<EdgeStream> {
    let mut r = rng(seed ^ 0x5eed);
    let non_edges = (0..k).filter(|_| r.gen::<bool>()).count();
    kclose_with(n, non_edges, k - non_edges, seed)
}

/// A tournament where each pair is additionally bidirected with probability `q`.
pub fn random_no_non_edge(n: usize, q: f64, seed: u64) -> EdgeStream {
    let mut r = rng(seed);
    let mut edges = Vec::new();
    for u in 0..n as VertexId {
        for v in u + 1..n as VertexId {
            let (a, b) = if r.gen() { (u, v) } else { (v, u) };
            edges.push(Edge::new(a, b));
            if r.gen_bool(q) {
                edges.push(Edge::new(b, a));
            }
        }
    }
    build(n, edges)
}

/// Random DAG: a hidden random vertex order, forward pairs kept with probability `p`.
pub fn random_dag(n: usize, p: f64, seed: u64) -> EdgeStream {
    let mut r = rng(seed);
    let mut order: Vec<VertexId> = (0..n as VertexId).collect();
    rand::seq::SliceRandom::shuffle(order.as_mut_slice(), &mut r);
    let mut edges = Vec::new();
    for i in 0..n {
        for j in i + 1..n {
            if r.gen_bool(p) {
                edges.push(Edge::new(order[i], order[j]));
            }
        }
    }
    build(n, edges)
}

fn splitmix(mut z: u64) -> u64 {
    z = z.wrapping_add(0x9e37_79b9_7f4a_7c15);
    z = (z ^ (z >> 30)).wrapping_mul(0xbf58_476d_1ce4_e5b9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94d0_49bb_1331_11eb);
    z ^ (z >> 31)
}

/// A random tournament whose edges are recomputed on every replay instead of buffered.
#[derive(Clone, Copy, Debug)]
pub struct HashedTournament {
    pub n: usize,
    pub seed: u64,
    /// Orient every pair low -> high (the transitive tournament).
    pub transitive: bool,
}

impl EdgeGenerator for HashedTournament {
    fn for_each_edge(&self, f: &mut dyn FnMut(Edge) -> Flow) {
        for u in 0..self.n as VertexId {
            for v in u + 1..self.n as VertexId {
                let fwd = self.transitive || splitmix(self.seed ^ ((u as u64) << 32 | v as u64)) & 1 == 0;
                let e = if fwd { Edge::new(u, v) } else { Edge::new(v, u) };
                if f(e) == Flow::Abort {
                    return;
                }
            }
        }
    }
}

impl HashedTournament {
    pub fn stream(self) -> EdgeStream {
        EdgeStream::generated(self.n, Arc::new(self))
    }
}

/// A reduction instance with designated endpoints and its known answer.
#[derive(Clone, Debug)]
pub struct Gadget {
    pub stream: EdgeStream,
    pub s: VertexId,
    pub t: VertexId,
    pub answer: bool,
}

fn same_len(x: &[bool], y: &[bool]) -> Result<usize> {
    if x.len() != y.len() || x.is_empty() {
        return Err(Error::Argument(format!("bit vectors must be nonempty and equal length ({} vs {})", x.len(), y.len())));
    }
    Ok(x.len())
}

fn disjoint(x: &[bool], y: &[bool]) -> bool {
    x.iter().zip(y).all(|(&a, &b)| !(a && b))
}

/// Two ladders `a_1..a_{N+1}` and `b_1..b_{N+1}` between `s` and `t`.
/// Rungs and ladder steps encode `x` and `y`; everything else points back
/// toward `s`. `t` is reachable from `s` iff `x` and `y` are disjoint.
pub fn reach_gadget(x: &[bool], y: &[bool]) -> Result<Gadget> {
    let (edges, n) = ladder(x, y, false)?;
    Ok(Gadget { stream: build(n, edges), s: 0, t: n as VertexId - 1, answer: disjoint(x, y) })
}

/// The ladder with its two end rungs also decided by `y`; strongly connected
/// iff `x` and `y` are disjoint.
pub fn strconn_gadget(x: &[bool], y: &[bool]) -> Result<(EdgeStream, bool)> {
    let (edges, n) = ladder(x, y, true)?;
    Ok((build(n, edges), disjoint(x, y)))
}

fn ladder(x: &[bool], y: &[bool], end_rungs_from_y: bool) -> Result<(Vec<Edge>, usize)> {
    let big_n = same_len(x, y)?;
    let n = 2 * big_n + 4;
    let s = 0;
    let t = n as VertexId - 1;
    // levels 1..=N+1
    let a = |i: usize| (2 * i - 1) as VertexId;
    let b = |i: usize| (2 * i) as VertexId;
    let mut edges = Vec::new();
    let mut e = |u, v| edges.push(Edge::new(u, v));
    for i in 1..=big_n {
        if x[i - 1] { e(a(i + 1), a(i)) } else { e(a(i), a(i + 1)) }
        if y[i - 1] { e(b(i + 1), b(i)) } else { e(b(i), b(i + 1)) }
    }
    for i in 2..=big_n {
        if x[i - 1] { e(a(i), b(i)) } else { e(b(i), a(i)) }
    }
    if end_rungs_from_y && y[0] { e(b(1), a(1)) } else { e(a(1), b(1)) }
    if end_rungs_from_y && !y[big_n - 1] { e(b(big_n + 1), a(big_n + 1)) } else { e(a(big_n + 1), b(big_n + 1)) }
    e(s, a(1));
    e(s, b(1));
    e(a(big_n + 1), t);
    e(b(big_n + 1), t);
    for i in 2..=big_n + 1 {
        e(a(i), s);
        e(b(i), s);
    }
    for i in 1..=big_n {
        e(t, a(i));
        e(t, b(i));
    }
    e(t, s);
    for i in 2..=big_n + 1 {
        for j in 1..i {
            e(a(i), b(j));
            e(b(i), a(j));
            if j + 1 < i {
                e(a(i), a(j));
                e(b(i), b(j));
            }
        }
    }
    Ok((edges, n))
}

/// Clusters `{u_i, v_i, w_i}` in a transitive order; cluster `i` contains a
/// 3-cycle exactly when `x_i = y_i = 1`. Acyclic iff disjoint.
pub fn acyc_gadget(x: &[bool], y: &[bool]) -> Result<(EdgeStream, bool)> {
    let big_n = same_len(x, y)?;
    let n = 3 * big_n;
    let (u, v, w) = (|i: usize| 3 * i as VertexId, |i: usize| 3 * i as VertexId + 1, |i: usize| 3 * i as VertexId + 2);
    let mut edges = Vec::new();
    for i in 0..big_n {
        edges.push(if x[i] { Edge::new(v(i), u(i)) } else { Edge::new(u(i), v(i)) });
        edges.push(Edge::new(u(i), w(i)));
        edges.push(if y[i] { Edge::new(w(i), v(i)) } else { Edge::new(v(i), w(i)) });
        for j in i + 1..big_n {
            for p in [u(i), v(i), w(i)] {
                for q in [u(j), v(j), w(j)] {
                    edges.push(Edge::new(p, q));
                }
            }
        }
    }
    Ok((build(n, edges), disjoint(x, y)))
}

/// Triples `{v_i, a_i, b_i}`; with a unique common index `c`, the DAG has the
/// single sink `v_c`. Returns the stream and that sink.
pub fn sink_gadget(x: &[bool], y: &[bool]) -> Result<(EdgeStream, VertexId)> {
    let big_n = same_len(x, y)?;
    let common: Vec<usize> = (0..big_n).filter(|&i| x[i] && y[i]).collect();
    let [c] = common[..] else {
        return Err(Error::Argument(format!("bit vectors must intersect exactly once, found {}", common.len())));
    };
    let (v, a, b) = (|i: usize| 3 * i as VertexId, |i: usize| 3 * i as VertexId + 1, |i: usize| 3 * i as VertexId + 2);
    let mut edges = Vec::new();
    for i in 0..big_n {
        let j = (i + 1) % big_n;
        edges.push(if x[i] { Edge::new(a(i), v(i)) } else { Edge::new(v(i), a(i)) });
        edges.push(if y[i] { Edge::new(b(i), v(i)) } else { Edge::new(v(i), b(i)) });
        if !x[i] {
            edges.push(Edge::new(a(i), if x[j] { b(j) } else { a(j) }));
        }
        if !y[i] {
            edges.push(Edge::new(b(i), if y[j] { a(j) } else { b(j) }));
        }
    }
    Ok((build(3 * big_n, edges), v(c)))
}

/// `s`, `u_1..u_N`, `v_1..v_N`, `t`: pair `{u_a, v_b}` is an edge iff
/// `x[a][b] = 0`, and the only route from `s` to `t` is `s -> u_i -> v_j -> t`.
/// Reachable and strongly connected iff `x[i][j] = 0`; the number of
/// non-edges equals the number of ones in `x`.
pub fn reachgen_gadget(x: &[Vec<bool>], i: usize, j: usize) -> Result<Gadget> {
    let big_n = x.len();
    if big_n == 0 || x.iter().any(|row| row.len() != big_n) || i >= big_n || j >= big_n {
        return Err(Error::Argument("x must be a square nonempty matrix with (i, j) inside it".into()));
    }
    let n = 2 * big_n + 2;
    let s = 0;
    let t = n as VertexId - 1;
    let u = |a: usize| 1 + a as VertexId;
    let v = |b: usize| 1 + (big_n + b) as VertexId;
    let mut edges = Vec::new();
    for (a, row) in x.iter().enumerate() {
        for (b, &bit) in row.iter().enumerate() {
            if !bit {
                edges.push(Edge::new(u(a), v(b)));
            }
        }
    }
    edges.extend([Edge::new(s, u(i)), Edge::new(v(j), t), Edge::new(v(j), s), Edge::new(t, u(i)), Edge::new(t, s)]);
    for a in (0..big_n).filter(|&a| a != i) {
        edges.extend([Edge::new(u(a), s), Edge::new(t, u(a)), Edge::new(u(a), u(i))]);
        edges.extend((a + 1..big_n).filter(|&c| c != i).map(|c| Edge::new(u(a), u(c))));
    }
    for b in (0..big_n).filter(|&b| b != j) {
        edges.extend([Edge::new(v(b), s), Edge::new(t, v(b)), Edge::new(v(j), v(b))]);
        edges.extend((b + 1..big_n).filter(|&c| c != j).map(|c| Edge::new(v(b), v(c))));
    }
    Ok(Gadget { stream: build(n, edges), s, t, answer: !x[i][j] })
}

/// Embeds the tournament `inner` on `N` vertices into `3N` vertices: a
/// transitive block `A` on the new vertices, `u, v -> A`, and `A -> ` every
/// other inner vertex. Returns the stream and whether `u -> v` in `inner`,
/// which decides the order of `u` and `v` in every minimum FAS ordering.
pub fn fas_gadget(inner: &DenseGraph, u: VertexId, v: VertexId) -> Result<(EdgeStream, bool)> {
    let big_n = inner.n();
    if !inner.is_tournament() || u == v || u as usize >= big_n || v as usize >= big_n {
        return Err(Error::Argument("need a tournament and two distinct vertices of it".into()));
    }
    let n = 3 * big_n;
    let mut edges = inner.edges();
    let block = big_n as VertexId..n as VertexId;
    for p in block.clone() {
        edges.extend((p + 1..n as VertexId).map(|q| Edge::new(p, q)));
        for w in 0..big_n as VertexId {
            edges.push(if w == u || w == v { Edge::new(w, p) } else { Edge::new(p, w) });
        }
    }
    Ok((build(n, edges), inner.has(u, v)))
}

/// A generator family with its parameters.
#[derive(Clone, Debug, PartialEq)]
pub enum Family {
    Random { n: usize, seed: u64 },
    Transitive { n: usize },
    Rotational { n: usize },
    Strong { n: usize, seed: u64 },
    KClose { n: usize, k: usize, seed: u64 },
    NoNonEdge { n: usize, q: f64, seed: u64 },
    Dag { n: usize, p: f64, seed: u64 },
    ReachGadget { x: Vec<bool>, y: Vec<bool> },
    StrconnGadget { x: Vec<bool>, y: Vec<bool> },
    AcycGadget { x: Vec<bool>, y: Vec<bool> },
    SinkGadget { x: Vec<bool>, y: Vec<bool> },
    ReachGenGadget { x: Vec<Vec<bool>>, i: usize, j: usize },
    FasGadget { inner_n: usize, seed: u64, u: VertexId, v: VertexId },
}

/// A family plus an optional edge-order shuffle; determines the stream exactly.
#[derive(Clone, Debug, PartialEq)]
pub struct GenSpec {
    pub family: Family,
    pub order_seed: Option<u64>,
}

impl GenSpec {
    pub fn build(&self) -> Result<EdgeStream> {
        let s = match &self.family {
            Family::Random { n, seed } => random_tournament(*n, *seed),
            Family::Transitive { n } => transitive(*n),
            Family::Rotational { n } => rotational(*n)?,
            Family::Strong { n, seed } => random_strong_tournament(*n, *seed)?,
            Family::KClose { n, k, seed } => kclose(*n, *k, *seed)?,
            Family::NoNonEdge { n, q, seed } => random_no_non_edge(*n, *q, *seed),
            Family::Dag { n, p, seed } => random_dag(*n, *p, *seed),
            Family::ReachGadget { x, y } => reach_gadget(x, y)?.stream,
            Family::StrconnGadget { x, y } => strconn_gadget(x, y)?.0,
            Family::AcycGadget { x, y } => acyc_gadget(x, y)?.0,
            Family::SinkGadget { x, y } => sink_gadget(x, y)?.0,
            Family::ReachGenGadget { x, i, j } => reachgen_gadget(x, *i, *j)?.stream,
            Family::FasGadget { inner_n, seed, u, v } => {
                let inner = DenseGraph::from_stream(&random_tournament(*inner_n, *seed))?;
                fas_gadget(&inner, *u, *v)?.0
            }
        };
        match self.order_seed {
            Some(seed) => s.permuted(seed),
            None => Ok(s),
        }
    }
}

fn bits(s: &str) -> Result<Vec<bool>> {
    s.chars()
        .map(|c| match c {
            '0' => Ok(false),
            '1' => Ok(true),
            _ => Err(Error::Argument(format!("bit string {s:?} contains {c:?}"))),
        })
        .collect()
}

/// Parses `family:key=value,...`, e.g. `random:n=10,seed=3` or
/// `reach-gadget:x=0110,y=1001,order=7`. Matrix rows are separated by `/`.
impl FromStr for GenSpec {
    type Err = Error;

    fn from_str(spec: &str) -> Result<Self> {
        let (name, rest) = spec.split_once(':').unwrap_or((spec, ""));
        let mut params = std::collections::BTreeMap::new();
        for kv in rest.split(',').filter(|s| !s.is_empty()) {
            let (k, v) = kv.split_once('=').ok_or_else(|| Error::Argument(format!("expected key=value, got {kv:?}")))?;
            params.insert(k.trim(), v.trim());
        }
        let get = |k: &str| params.get(k).copied().ok_or_else(|| Error::Argument(format!("{name} needs `{k}`")));
        let num = |k: &str| -> Result<u64> { get(k)?.parse().map_err(|_| Error::Argument(format!("bad number for `{k}`"))) };
        let num_or = |k: &str, d: u64| if params.contains_key(k) { num(k) } else { Ok(d) };
        let float = |k: &str, d: f64| -> Result<f64> {
            match params.get(k) {
                Some(v) => v.parse().map_err(|_| Error::Argument(format!("bad number for `{k}`"))),
                None => Ok(d),
            }
        };
        let xy = || -> Result<(Vec<bool>, Vec<bool>)> { Ok((bits(get("x")?)?, bits(get("y")?)?)) };
        let family = match name {
            "random" => Family::Random { n: num("n")? as usize, seed: num_or("seed", 0)? },
            "transitive" => Family::Transitive { n: num("n")? as usize },
            "rotational" => Family::Rotational { n: num("n")? as usize },
            "strong" => Family::Strong { n: num("n")? as usize, seed: num_or("seed", 0)? },
            "kclose" => Family::KClose { n: num("n")? as usize, k: num("k")? as usize, seed: num_or("seed", 0)? },
            "no-non-edge" => Family::NoNonEdge { n: num("n")? as usize, q: float("q", 0.1)?, seed: num_or("seed", 0)? },
            "dag" => Family::Dag { n: num("n")? as usize, p: float("p", 0.3)?, seed: num_or("seed", 0)? },
            "reach-gadget" => xy().map(|(x, y)| Family::ReachGadget { x, y })?,
            "strconn-gadget" => xy().map(|(x, y)| Family::StrconnGadget { x, y })?,
            "acyc-gadget" => xy().map(|(x, y)| Family::AcycGadget { x, y })?,
            "sink-gadget" => xy().map(|(x, y)| Family::SinkGadget { x, y })?,
            "reachgen-gadget" => Family::ReachGenGadget {
                x: get("x")?.split('/').map(bits).collect::<Result<_>>()?,
                i: num("i")? as usize,
                j: num("j")? as usize,
            },
            "fas-gadget" => Family::FasGadget {
                inner_n: num("n")? as usize,
                seed: num_or("seed", 0)?,
                u: num("u")? as VertexId,
                v: num("v")? as VertexId,
            },
            other => return Err(Error::Argument(format!("unknown generator family {other:?}"))),
        };
        let order_seed = if params.contains_key("order") { Some(num("order")?) } else { None };
        Ok(GenSpec { family, order_seed })
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{oracle_reach, oracle_sinks, oracle_strongly_connected};

    fn dense(s: &EdgeStream) -> DenseGraph {
        DenseGraph::from_stream(s).unwrap()
    }

    #[test]
    fn basic_families() {
        assert_eq!(random_tournament(1, 3).edges().unwrap(), vec![]);
        assert_eq!(random_tournament(3, 9).edges().unwrap(), random_tournament(3, 9).edges().unwrap());
        for n in 0..9 {
            assert_eq!(random_tournament(n, n as u64).edges().unwrap().len(), pair_count(n));
        }
        assert_eq!(transitive(3).edges().unwrap(), vec![Edge::new(0, 1), Edge::new(0, 2), Edge::new(1, 2)]);
        assert!(oracle_strongly_connected(&dense(&rotational(5).unwrap())));
        assert!(rotational(4).is_err());
        assert!(dense(&random_strong_tournament(7, 1).unwrap()).is_tournament());
    }

    #[test]
    fn kclose_counts() {
        let g = dense(&kclose_with(8, 2, 3, 5).unwrap());
        let mut none = 0;
        let mut both = 0;
        for u in g.vertices() {
            for v in g.vertices().filter(|&v| v > u) {
                match (g.has(u, v), g.has(v, u)) {
                    (false, false) => none += 1,
                    (true, true) => both += 1,
                    _ => {}
                }
            }
        }
        assert_eq!((none, both), (2, 3));
        assert!(dense(&kclose(6, 0, 1).unwrap()).is_tournament());
    }

    #[test]
    fn hashed_tournament_is_valid() {
        let s = HashedTournament { n: 30, seed: 4, transitive: false }.stream();
        assert!(dense(&s).is_tournament());
        assert_eq!(s.edges().unwrap(), s.edges().unwrap());
    }

    #[test]
    fn gadget_examples() {
        let g = reach_gadget(&[false; 4], &[false; 4]).unwrap();
        assert_eq!(g.stream.n(), 12);
        assert!(g.answer && oracle_reach(&dense(&g.stream), g.s, g.t));
        let e1 = [true, false, false, false];
        let g = reach_gadget(&e1, &e1).unwrap();
        assert!(!g.answer && !oracle_reach(&dense(&g.stream), g.s, g.t));
        let (s, sink) = sink_gadget(&[false, true, true], &[true, true, false]).unwrap();
        assert_eq!(oracle_sinks(&dense(&s)), vec![sink]);
        assert_eq!(sink, 3);
        assert!(sink_gadget(&[true, true], &[true, true]).is_err());
    }

    #[test]
    fn spec_parsing() {
        let s: GenSpec = "random:n=5,seed=2,order=9".parse().unwrap();
        assert_eq!(s.family, Family::Random { n: 5, seed: 2 });
        assert_eq!(s.order_seed, Some(9));
        let g: GenSpec = "reachgen-gadget:x=01/10,i=0,j=1".parse().unwrap();
        assert_eq!(g.build().unwrap().n(), 6);
        assert!("nope:n=1".parse::<GenSpec>().is_err());
        assert!("random:seed=1".parse::<GenSpec>().is_err());
    }
}
