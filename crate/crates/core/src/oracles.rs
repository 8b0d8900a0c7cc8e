//! In-memory reference algorithms used to check the streaming ones.

use std::cmp::Ordering;
use std::collections::{BTreeSet, VecDeque};

use crate::almost::SccDag;
use crate::error::{Error, Result};
use crate::stream::{Edge, EdgeStream, VertexId};

/// Largest graph the dense representation accepts.
pub const DENSE_LIMIT: usize = 4096;
/// Largest graph the subset-DP oracles accept.
pub const DP_LIMIT: usize = 18;
/// Largest graph the factorial FAS oracle accepts.
pub const FACTORIAL_LIMIT: usize = 10;

fn guard(what: &'static str, value: usize, limit: usize) -> Result<()> {
    if value > limit {
        return Err(Error::TooLarge { what, value, limit });
    }
    Ok(())
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenseGraph {
    n: usize,
    adj: Vec<bool>,
}

impl DenseGraph {
    pub fn new(n: usize) -> Result<Self> {
        guard("vertex count", n, DENSE_LIMIT)?;
        Ok(DenseGraph { n, adj: vec![false; n * n] })
    }

    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let mut g = Self::new(n)?;
        for e in edges {
            if e.from == e.to || e.from as usize >= n || e.to as usize >= n {
                return Err(Error::InvalidEdge { from: e.from, to: e.to, n });
            }
            g.add(e.from, e.to);
        }
        Ok(g)
    }

    pub fn from_stream(s: &EdgeStream) -> Result<Self> {
        Self::from_edges(s.n(), s.edges()?)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn add(&mut self, u: VertexId, v: VertexId) {
        self.adj[u as usize * self.n + v as usize] = true;
    }

    pub fn has(&self, u: VertexId, v: VertexId) -> bool {
        self.adj[u as usize * self.n + v as usize]
    }

    pub fn edges(&self) -> Vec<Edge> {
        self.vertices()
            .flat_map(|u| self.vertices().filter(move |&v| self.has(u, v)).map(move |v| Edge::new(u, v)))
            .collect()
    }

    pub fn vertices(&self) -> impl Iterator<Item = VertexId> + Clone {
        0..self.n as VertexId
    }

    pub fn out_neighbors(&self, u: VertexId) -> impl Iterator<Item = VertexId> + '_ {
        self.vertices().filter(move |&v| self.has(u, v))
    }

    pub fn in_degree(&self, v: VertexId) -> usize {
        self.vertices().filter(|&u| self.has(u, v)).count()
    }

    pub fn out_degree(&self, u: VertexId) -> usize {
        self.out_neighbors(u).count()
    }

    /// Exactly one edge between every pair.
    pub fn is_tournament(&self) -> bool {
        self.vertices()
            .all(|u| self.vertices().filter(|&v| v > u).all(|v| self.has(u, v) != self.has(v, u)))
    }

    fn out_mask(&self, u: VertexId) -> u32 {
        self.out_neighbors(u).fold(0, |m, v| m | 1 << v)
    }
}

struct Tarjan<'g> {
    g: &'g DenseGraph,
    index: Vec<usize>,
    low: Vec<usize>,
    on_stack: Vec<bool>,
    stack: Vec<VertexId>,
    next: usize,
    comps: Vec<Vec<VertexId>>,
}

impl Tarjan<'_> {
    fn visit(&mut self, v: VertexId) {
        let vi = v as usize;
        self.index[vi] = self.next;
        self.low[vi] = self.next;
        self.next += 1;
        self.stack.push(v);
        self.on_stack[vi] = true;
        for w in self.g.out_neighbors(v) {
            let wi = w as usize;
            if self.index[wi] == usize::MAX {
                self.visit(w);
                self.low[vi] = self.low[vi].min(self.low[wi]);
            } else if self.on_stack[wi] {
                self.low[vi] = self.low[vi].min(self.index[wi]);
            }
        }
        if self.low[vi] == self.index[vi] {
            let mut comp = Vec::new();
            while let Some(w) = self.stack.pop() {
                self.on_stack[w as usize] = false;
                comp.push(w);
                if w == v {
                    break;
                }
            }
            comp.sort_unstable();
            self.comps.push(comp);
        }
    }
}

/// Strongly connected components (Tarjan), unordered.
pub fn tarjan(g: &DenseGraph) -> Vec<Vec<VertexId>> {
    let n = g.n();
    let mut t = Tarjan {
        g,
        index: vec![usize::MAX; n],
        low: vec![0; n],
        on_stack: vec![false; n],
        stack: Vec::new(),
        next: 0,
        comps: Vec::new(),
    };
    for v in g.vertices() {
        if t.index[v as usize] == usize::MAX {
            t.visit(v);
        }
    }
    t.comps
}

/// Orders equal-size vertex sets by their characteristic bitmask value.
pub fn canonical_set_cmp(a: &[VertexId], b: &[VertexId]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.iter().rev().cmp(b.iter().rev()))
}

/// The condensation, topologically ordered; among simultaneously available
/// components the smallest (by size, then bitmask) comes first.
pub fn oracle_scc(g: &DenseGraph) -> SccDag {
    let comps = tarjan(g);
    let mut comp_of = vec![0usize; g.n()];
    for (i, c) in comps.iter().enumerate() {
        for &v in c {
            comp_of[v as usize] = i;
        }
    }
    let mut succ: Vec<BTreeSet<usize>> = vec![BTreeSet::new(); comps.len()];
    let mut indeg = vec![0usize; comps.len()];
    for e in g.edges() {
        let (a, b) = (comp_of[e.from as usize], comp_of[e.to as usize]);
        if a != b && succ[a].insert(b) {
            indeg[b] += 1;
        }
    }
    let mut ready: Vec<usize> = (0..comps.len()).filter(|&c| indeg[c] == 0).collect();
    let mut order = Vec::new();
    while !ready.is_empty() {
        let pos = (0..ready.len())
            .min_by(|&x, &y| canonical_set_cmp(&comps[ready[x]], &comps[ready[y]]))
            .expect("nonempty");
        let c = ready.swap_remove(pos);
        order.push(c);
        for &d in &succ[c] {
            indeg[d] -= 1;
            if indeg[d] == 0 {
                ready.push(d);
            }
        }
    }
    let mut rank = vec![0; comps.len()];
    for (r, &c) in order.iter().enumerate() {
        rank[c] = r;
    }
    let dag_edges = succ
        .iter()
        .enumerate()
        .flat_map(|(a, s)| s.iter().map(move |&b| (a, b)))
        .map(|(a, b)| (rank[a], rank[b]))
        .collect();
    SccDag { components: order.into_iter().map(|c| comps[c].clone()).collect(), dag_edges }
}

pub fn oracle_reach(g: &DenseGraph, s: VertexId, t: VertexId) -> bool {
    let mut seen = vec![false; g.n()];
    let mut queue = VecDeque::from([s]);
    seen[s as usize] = true;
    while let Some(u) = queue.pop_front() {
        if u == t {
            return true;
        }
        for v in g.out_neighbors(u) {
            if !std::mem::replace(&mut seen[v as usize], true) {
                queue.push_back(v);
            }
        }
    }
    false
}

pub fn oracle_strongly_connected(g: &DenseGraph) -> bool {
    g.n() <= 1 || tarjan(g).len() == 1
}

/// Kahn's algorithm: acyclic iff every vertex gets removed.
pub fn oracle_acyclic(g: &DenseGraph) -> bool {
    let mut indeg: Vec<usize> = g.vertices().map(|v| g.in_degree(v)).collect();
    let mut ready: Vec<VertexId> = g.vertices().filter(|&v| indeg[v as usize] == 0).collect();
    let mut removed = 0;
    while let Some(u) = ready.pop() {
        removed += 1;
        for v in g.out_neighbors(u) {
            indeg[v as usize] -= 1;
            if indeg[v as usize] == 0 {
                ready.push(v);
            }
        }
    }
    removed == g.n()
}

pub fn oracle_sinks(g: &DenseGraph) -> Vec<VertexId> {
    g.vertices().filter(|&v| g.out_degree(v) == 0).collect()
}

/// Edges pointing from a later vertex of `order` to an earlier one.
pub fn back_edges(g: &DenseGraph, order: &[VertexId]) -> usize {
    let mut pos = vec![0; g.n()];
    for (i, &v) in order.iter().enumerate() {
        pos[v as usize] = i;
    }
    g.edges().iter().filter(|e| pos[e.to as usize] < pos[e.from as usize]).count()
}

/// Minimum feedback-arc-set ordering by subset DP.
pub fn oracle_fas(g: &DenseGraph) -> Result<(Vec<VertexId>, usize)> {
    oracle_fas_constrained(g, None)
}

/// As [`oracle_fas`], restricted to orderings that place `before.0` ahead of `before.1`.
pub fn oracle_fas_constrained(g: &DenseGraph, before: Option<(VertexId, VertexId)>) -> Result<(Vec<VertexId>, usize)> {
    let n = g.n();
    guard("FAS oracle size", n, DP_LIMIT)?;
    let out: Vec<u32> = g.vertices().map(|v| g.out_mask(v)).collect();
    let full = (1usize << n) - 1;
    let mut best = vec![usize::MAX; 1 << n];
    let mut last = vec![0 as VertexId; 1 << n];
    best[0] = 0;
    for mask in 0..full {
        if best[mask] == usize::MAX {
            continue;
        }
        for v in 0..n {
            if mask >> v & 1 == 1 {
                continue;
            }
            if let Some((a, b)) = before {
                if v == b as usize && mask >> a & 1 == 0 {
                    continue;
                }
            }
            let next = mask | 1 << v;
            let cost = best[mask] + (out[v] as usize & mask).count_ones() as usize;
            if cost < best[next] {
                best[next] = cost;
                last[next] = v as VertexId;
            }
        }
    }
    let mut order = Vec::with_capacity(n);
    let mut mask = full;
    while mask != 0 {
        let v = last[mask];
        order.push(v);
        mask &= !(1 << v);
    }
    order.reverse();
    Ok((order, best[full]))
}

/// Minimum feedback-arc-set size by trying every permutation.
pub fn oracle_fas_factorial(g: &DenseGraph) -> Result<usize> {
    guard("factorial FAS oracle size", g.n(), FACTORIAL_LIMIT)?;
    fn go(g: &DenseGraph, order: &mut Vec<VertexId>, used: &mut Vec<bool>, cost: usize, best: &mut usize) {
        if cost >= *best {
            return;
        }
        if order.len() == g.n() {
            *best = cost;
            return;
        }
        for v in g.vertices() {
            if used[v as usize] {
                continue;
            }
            let added = order.iter().filter(|&&u| g.has(v, u)).count();
            used[v as usize] = true;
            order.push(v);
            go(g, order, used, cost + added, best);
            order.pop();
            used[v as usize] = false;
        }
    }
    let mut best = usize::MAX;
    go(g, &mut Vec::new(), &mut vec![false; g.n()], 0, &mut best);
    Ok(if g.n() == 0 { 0 } else { best })
}

/// `reach[mask][v]`: some path visits exactly `mask`, starts at `start` (or
/// anywhere when `start` is `None`) and ends at `v`.
fn ham_table(g: &DenseGraph, start: Option<usize>) -> Vec<u32> {
    let n = g.n();
    let preds: Vec<u32> = g.vertices().map(|v| g.vertices().filter(|&u| g.has(u, v)).fold(0, |m, u| m | 1 << u)).collect();
    let mut ends = vec![0u32; 1 << n];
    for v in 0..n {
        if start.is_none_or(|s| s == v) {
            ends[1 << v] = 1 << v;
        }
    }
    for mask in 1usize..1 << n {
        if ends[mask] == 0 {
            continue;
        }
        for v in 0..n {
            if mask >> v & 1 == 0 && preds[v] & ends[mask] != 0 {
                ends[mask | 1 << v] |= 1 << v;
            }
        }
    }
    ends
}

fn ham_walk_back(g: &DenseGraph, ends: &[u32], mut mask: usize, mut v: usize) -> Vec<VertexId> {
    let mut path = vec![v as VertexId];
    while mask.count_ones() > 1 {
        let rest = mask & !(1 << v);
        let u = (0..g.n())
            .find(|&u| ends[rest] >> u & 1 == 1 && g.has(u as VertexId, v as VertexId))
            .expect("DP table is consistent");
        path.push(u as VertexId);
        mask = rest;
        v = u;
    }
    path.reverse();
    path
}

pub fn oracle_ham_path(g: &DenseGraph) -> Result<Option<Vec<VertexId>>> {
    let n = g.n();
    guard("Hamiltonian oracle size", n, DP_LIMIT)?;
    if n == 0 {
        return Ok(Some(vec![]));
    }
    let ends = ham_table(g, None);
    let full = (1 << n) - 1;
    Ok((0..n).find(|&v| ends[full] >> v & 1 == 1).map(|v| ham_walk_back(g, &ends, full, v)))
}

/// A Hamiltonian cycle listed from vertex 0, without repeating it at the end.
pub fn oracle_ham_cycle(g: &DenseGraph) -> Result<Option<Vec<VertexId>>> {
    let n = g.n();
    guard("Hamiltonian oracle size", n, DP_LIMIT)?;
    if n < 2 {
        return Ok((n == 1).then(|| vec![0]));
    }
    let ends = ham_table(g, Some(0));
    let full = (1 << n) - 1;
    Ok((1..n).find(|&v| ends[full] >> v & 1 == 1 && g.has(v as VertexId, 0)).map(|v| ham_walk_back(g, &ends, full, v)))
}

pub fn is_ham_path(g: &DenseGraph, path: &[VertexId]) -> bool {
    is_permutation(g.n(), path) && path.windows(2).all(|w| g.has(w[0], w[1]))
}

pub fn is_ham_cycle(g: &DenseGraph, cycle: &[VertexId]) -> bool {
    is_ham_path(g, cycle) && (cycle.len() == 1 || cycle.len() > 2 && g.has(cycle[cycle.len() - 1], cycle[0]))
}

pub fn is_permutation(n: usize, order: &[VertexId]) -> bool {
    let mut seen = vec![false; n];
    order.len() == n && order.iter().all(|&v| (v as usize) < n && !std::mem::replace(&mut seen[v as usize], true))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn g(n: usize, edges: &[(u32, u32)]) -> DenseGraph {
        DenseGraph::from_edges(n, edges.iter().map(|&e| e.into())).unwrap()
    }

    #[test]
    fn triangle() {
        let t = g(3, &[(0, 1), (1, 2), (2, 0)]);
        assert_eq!(oracle_scc(&t).components, vec![vec![0, 1, 2]]);
        assert_eq!(oracle_fas(&t).unwrap().1, 1);
        assert_eq!(oracle_fas_factorial(&t).unwrap(), 1);
        let cyc = oracle_ham_cycle(&t).unwrap().unwrap();
        assert!(is_ham_cycle(&t, &cyc));
        assert!(!oracle_acyclic(&t));
        assert!(oracle_sinks(&t).is_empty());
    }

    #[test]
    fn transitive() {
        let t = g(3, &[(0, 1), (0, 2), (1, 2)]);
        let dag = oracle_scc(&t);
        assert_eq!(dag.components, vec![vec![0], vec![1], vec![2]]);
        assert_eq!(dag.dag_edges, BTreeSet::from([(0, 1), (0, 2), (1, 2)]));
        assert_eq!(oracle_ham_cycle(&t).unwrap(), None);
        assert_eq!(oracle_ham_path(&t).unwrap(), Some(vec![0, 1, 2]));
        assert!(oracle_acyclic(&t));
        assert_eq!(oracle_sinks(&t), vec![2]);
        assert!(oracle_reach(&t, 0, 2) && !oracle_reach(&t, 2, 0));
        assert_eq!(back_edges(&t, &[2, 1, 0]), 3);
    }

    #[test]
    fn canonical_order_for_independent_sources() {
        // components {2} and {0,1} are both sources; the singleton comes first
        let t = g(4, &[(0, 1), (1, 0), (0, 3), (2, 3)]);
        let dag = oracle_scc(&t);
        assert_eq!(dag.components, vec![vec![2], vec![0, 1], vec![3]]);
        assert_eq!(dag.dag_edges, BTreeSet::from([(0, 2), (1, 2)]));
    }

    #[test]
    fn constrained_fas() {
        let t = g(3, &[(0, 1), (0, 2), (1, 2)]);
        assert_eq!(oracle_fas_constrained(&t, Some((2, 0))).unwrap().1, 2);
        assert!(oracle_fas(&DenseGraph::new(19).unwrap()).is_err());
    }
}
