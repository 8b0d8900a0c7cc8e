//! Feedback-arc-set orderings for tournaments: order the SCC chain, then order
//! each component on its own. No edge between components can point backwards,
//! so the total cost is the sum of the per-component costs.

use std::collections::HashMap;

use crate::error::{Error, Result};
use crate::oracles::DP_LIMIT;
use crate::scc::DegreeTable;
use crate::stream::{Edge, EdgeConsumer, EdgeStream, Flow, PassRunner, VertexId};
use crate::{Metered, RunStats};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FasMode {
    /// Minimum back edges per component via subset DP.
    Exact,
    /// Per component, sort by in-degree (5-approximation).
    Indegree5,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct FasConfig {
    pub mode: FasMode,
    /// Components larger than this fall back to in-degree order in exact mode.
    pub max_exact_size: usize,
    /// Words available for buffering component edges.
    pub budget: usize,
}

impl FasConfig {
    pub fn new(mode: FasMode, budget: usize) -> Self {
        FasConfig { mode, max_exact_size: DP_LIMIT, budget }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FasOrdering {
    pub order: Vec<VertexId>,
    pub back_edges: usize,
    /// Back edges whose endpoints lie in different components; always zero for tournaments.
    pub cross_back_edges: usize,
}

/// Orders one component given its internal edges.
pub fn fas_component(vertices: &[VertexId], edges: &[Edge], mode: FasMode) -> Result<Vec<VertexId>> {
    let local: HashMap<VertexId, usize> = vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect();
    let s = vertices.len();
    match mode {
        FasMode::Indegree5 => {
            let mut d_in = vec![0i64; s];
            for e in edges {
                d_in[local[&e.to]] += 1;
            }
            Ok(indegree_order(vertices, &d_in))
        }
        FasMode::Exact => {
            if s > DP_LIMIT {
                return Err(Error::TooLarge { what: "component size for exact FAS", value: s, limit: DP_LIMIT });
            }
            let mut out = vec![0u32; s];
            for e in edges {
                out[local[&e.from]] |= 1 << local[&e.to];
            }
            Ok(exact_order(&out).into_iter().map(|i| vertices[i]).collect())
        }
    }
}

fn indegree_order(vertices: &[VertexId], d_in: &[i64]) -> Vec<VertexId> {
    let mut idx: Vec<usize> = (0..vertices.len()).collect();
    idx.sort_by_key(|&i| (d_in[i], vertices[i]));
    idx.into_iter().map(|i| vertices[i]).collect()
}

/// Subset DP: `best[S]` is the cheapest ordering of `S` as a prefix; appending
/// `v` costs its edges back into `S`.
fn exact_order(out: &[u32]) -> Vec<usize> {
    let s = out.len();
    let full = (1usize << s) - 1;
    let mut best = vec![u32::MAX; 1 << s];
    let mut last = vec![0u8; 1 << s];
    best[0] = 0;
    for mask in 0..full {
        let base = best[mask];
        for (v, &o) in out.iter().enumerate() {
            if mask >> v & 1 == 0 {
                let next = mask | 1 << v;
                let cost = base + (o as usize & mask).count_ones();
                if cost < best[next] {
                    best[next] = cost;
                    last[next] = v as u8;
                }
            }
        }
    }
    let mut order = Vec::with_capacity(s);
    let mut mask = full;
    while mask != 0 {
        let v = last[mask] as usize;
        order.push(v);
        mask &= !(1 << v);
    }
    order.reverse();
    order
}

/// Buffers the edges inside selected components.
struct ComponentEdges {
    slot_of: HashMap<VertexId, usize>,
    edges: Vec<Vec<Edge>>,
    stored: usize,
}

impl EdgeConsumer for ComponentEdges {
    fn observe(&mut self, e: Edge) -> Flow {
        if let (Some(a), Some(b)) = (self.slot_of.get(&e.from), self.slot_of.get(&e.to)) {
            if a == b {
                self.edges[*a].push(e);
                self.stored += 1;
            }
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        2 * self.slot_of.len() + 2 * self.stored
    }
}

struct BackEdgeCounter {
    pos: Vec<u32>,
    comp: Option<Vec<u32>>,
    back: usize,
    cross: usize,
}

impl EdgeConsumer for BackEdgeCounter {
    fn observe(&mut self, e: Edge) -> Flow {
        if self.pos[e.to as usize] < self.pos[e.from as usize] {
            self.back += 1;
            if let Some(c) = &self.comp {
                if c[e.to as usize] != c[e.from as usize] {
                    self.cross += 1;
                }
            }
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        self.pos.len() + self.comp.as_ref().map_or(0, Vec::len) + 2
    }
}

fn positions(n: usize, order: &[VertexId]) -> Result<Vec<u32>> {
    let mut pos = vec![u32::MAX; n];
    for (i, &v) in order.iter().enumerate() {
        match pos.get_mut(v as usize) {
            Some(p) if *p == u32::MAX => *p = i as u32,
            _ => return Err(Error::Argument(format!("ordering is not a permutation (vertex {v})"))),
        }
    }
    if order.len() != n {
        return Err(Error::Argument(format!("ordering has {} of {n} vertices", order.len())));
    }
    Ok(pos)
}

/// Number of stream edges pointing backwards in `order`, in one pass.
pub fn count_back_edges(stream: &EdgeStream, order: &[VertexId]) -> Result<Metered<usize>> {
    let runner = PassRunner::new(stream);
    let mut c = BackEdgeCounter { pos: positions(stream.n(), order)?, comp: None, back: 0, cross: 0 };
    runner.run_pass(&mut [&mut c])?;
    Ok(Metered { value: c.back, stats: RunStats::of(&runner) })
}

pub fn fas_t(stream: &EdgeStream, config: FasConfig) -> Result<Metered<FasOrdering>> {
    let n = stream.n();
    let runner = PassRunner::new(stream);
    let mut table = DegreeTable::new(n, true);
    runner.run_pass(&mut [&mut table])?;
    let chain = table.finalize()?;
    // degrees plus the chain survive until the end
    runner.meter().alloc(2 * n);

    let exact_cap = config.max_exact_size.min(DP_LIMIT);
    let mut selected = Vec::new();
    let mut buffered = 0usize;
    if config.mode == FasMode::Exact {
        for (i, comp) in chain.components().iter().enumerate() {
            let s = comp.len();
            if (3..=exact_cap).contains(&s) && buffered + s * s <= config.budget {
                buffered += s * s;
                selected.push(i);
            }
        }
    }
    let mut component_edges: HashMap<usize, Vec<Edge>> = HashMap::new();
    if !selected.is_empty() {
        let mut slot_of = HashMap::new();
        for (slot, &i) in selected.iter().enumerate() {
            slot_of.extend(chain.components()[i].iter().map(|&v| (v, slot)));
        }
        let mut c = ComponentEdges { slot_of, edges: vec![Vec::new(); selected.len()], stored: 0 };
        runner.run_pass(&mut [&mut c])?;
        component_edges = selected.iter().copied().zip(c.edges).collect();
    }

    let mut order = Vec::with_capacity(n);
    let mut before = 0i64;
    for (i, comp) in chain.components().iter().enumerate() {
        match component_edges.get(&i) {
            Some(edges) => order.extend(fas_component(comp, edges, FasMode::Exact)?),
            None => {
                let d_in: Vec<i64> = comp.iter().map(|&v| table.d_in()[v as usize] as i64 - before).collect();
                order.extend(indegree_order(comp, &d_in));
            }
        }
        before += comp.len() as i64;
    }

    let comp: Vec<u32> = (0..n as VertexId).map(|v| chain.component_of(v).map(|c| c as u32)).collect::<Result<_>>()?;
    let mut counter = BackEdgeCounter { pos: positions(n, &order)?, comp: Some(comp), back: 0, cross: 0 };
    runner.run_pass(&mut [&mut counter])?;
    runner.meter().free(2 * n);
    let value = FasOrdering { order, back_edges: counter.back, cross_back_edges: counter.cross };
    Ok(Metered { value, stats: RunStats::of(&runner) })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::generators::{random_tournament, transitive};
    use crate::oracles::{back_edges, oracle_fas_factorial, DenseGraph};

    fn stream(n: usize, edges: &[(u32, u32)]) -> EdgeStream {
        EdgeStream::from_edges(n, edges.iter().map(|&e| e.into())).unwrap()
    }

    #[test]
    fn component_orders() {
        let tr: Vec<Edge> = transitive(4).edges().unwrap();
        for mode in [FasMode::Exact, FasMode::Indegree5] {
            assert_eq!(fas_component(&[0, 1, 2, 3], &tr, mode).unwrap(), vec![0, 1, 2, 3]);
        }
        let tri = [Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 0)];
        let order = fas_component(&[0, 1, 2], &tri, FasMode::Exact).unwrap();
        let g = DenseGraph::from_edges(3, tri).unwrap();
        assert_eq!(back_edges(&g, &order), 1);
        let big: Vec<VertexId> = (0..19).collect();
        assert!(fas_component(&big, &[], FasMode::Exact).is_err());
    }

    #[test]
    fn random_component_matches_factorial() {
        for seed in 0..20 {
            let s = random_tournament(6, seed);
            let g = DenseGraph::from_stream(&s).unwrap();
            let order = fas_component(&[0, 1, 2, 3, 4, 5], &s.edges().unwrap(), FasMode::Exact).unwrap();
            assert_eq!(back_edges(&g, &order), oracle_fas_factorial(&g).unwrap());
        }
    }

    #[test]
    fn two_triangles() {
        let mut edges = vec![(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)];
        for a in 0..3 {
            for b in 3..6 {
                edges.push((a, b));
            }
        }
        let s = stream(6, &edges);
        let m = fas_t(&s, FasConfig::new(FasMode::Exact, 1000)).unwrap();
        assert_eq!((m.value.back_edges, m.value.cross_back_edges), (2, 0));
        assert_eq!(m.stats.passes, 3);
        let m = fas_t(&s, FasConfig::new(FasMode::Indegree5, 1000)).unwrap();
        assert_eq!(m.stats.passes, 2);
        assert_eq!(m.value.back_edges, 2);
    }

    #[test]
    fn counting() {
        let s = transitive(5);
        assert_eq!(count_back_edges(&s, &[0, 1, 2, 3, 4]).unwrap().value, 0);
        assert_eq!(count_back_edges(&s, &[4, 3, 2, 1, 0]).unwrap().value, 10);
        assert!(count_back_edges(&s, &[0, 1, 2, 3, 3]).is_err());
        assert!(count_back_edges(&s, &[0, 1, 2]).is_err());
        assert_eq!(fas_t(&s, FasConfig::new(FasMode::Exact, 100)).unwrap().value.back_edges, 0);
    }
}
