//! SCC structure, reachability and strong connectivity for digraphs that are
//! within `k` edge insertions/deletions of a tournament, from one pass that
//! records degrees and sketches the non-edges.

use std::collections::{BTreeSet, VecDeque};

use crate::error::{Error, Result};
use crate::scc::{peel_chain, DegreeTable};
use crate::sparse::{Backend, PairIndex, SparseSketch};
use crate::stream::{EdgeStream, PassRunner, VertexId};
use crate::{Metered, RunStats};

/// Largest vertex count accepted by subset enumeration.
pub const MAX_ENUM_VERTICES: usize = 24;
/// Largest non-edge count accepted by completion enumeration.
pub const MAX_ENUM_NON_EDGES: usize = 24;

/// Vertex pairs sharing no edge (`non_edges`) or both edges (`bidirected`), as `(u, v)` with `u < v`.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct NonEdgeSet {
    pub non_edges: BTreeSet<(VertexId, VertexId)>,
    pub bidirected: BTreeSet<(VertexId, VertexId)>,
}

impl NonEdgeSet {
    pub fn is_non_edge(&self, u: VertexId, v: VertexId) -> bool {
        self.non_edges.contains(&(u.min(v), u.max(v)))
    }
}

/// Components in topological order plus the condensation edges `(i, j)`, `i < j`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccDag {
    pub components: Vec<Vec<VertexId>>,
    pub dag_edges: BTreeSet<(usize, usize)>,
}

impl SccDag {
    fn component_index(&self, v: VertexId) -> Option<usize> {
        self.components.iter().position(|c| c.contains(&v))
    }

    /// Whether component `j` is reachable from component `i` along DAG edges.
    pub fn reaches(&self, i: usize, j: usize) -> bool {
        let mut seen = vec![false; self.components.len()];
        let mut queue = VecDeque::from([i]);
        seen[i] = true;
        while let Some(c) = queue.pop_front() {
            if c == j {
                return true;
            }
            for &(_, d) in self.dag_edges.range((c, 0)..(c + 1, 0)) {
                if !std::mem::replace(&mut seen[d], true) {
                    queue.push_back(d);
                }
            }
        }
        false
    }
}

/// Exact degrees and the recovered non-edge structure after one pass.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct StreamSummary {
    pub degrees: DegreeTable,
    pub pairs: NonEdgeSet,
}

pub fn gen_stream_phase(stream: &EdgeStream, k: usize, backend: Backend) -> Result<Metered<StreamSummary>> {
    let n = stream.n();
    let runner = PassRunner::new(stream);
    let mut degrees = DegreeTable::new(n, false);
    if n < 2 {
        runner.run_pass(&mut [&mut degrees])?;
        let value = StreamSummary { degrees, pairs: NonEdgeSet::default() };
        return Ok(Metered { value, stats: RunStats::of(&runner) });
    }
    let mut sketch = SparseSketch::all_ones(n, k, backend)?;
    runner.run_pass(&mut [&mut degrees, &mut sketch])?;
    let recovered = sketch.recover().map_err(|e| match e {
        Error::RecoveryFailure { k } => Error::ClosenessViolation { k },
        other => other,
    })?;
    let mut pairs = NonEdgeSet::default();
    for (PairIndex(i), value) in recovered {
        let pair = PairIndex(i).pair(n);
        match value {
            1 => pairs.non_edges.insert(pair),
            -1 => pairs.bidirected.insert(pair),
            _ => return Err(Error::Malformed(format!("pair {pair:?} carries {} edges", 1 - value))),
        };
    }
    Ok(Metered { value: StreamSummary { degrees, pairs }, stats: RunStats::of(&runner) })
}

/// The not-yet-peeled part of the graph during source-SCC peeling.
struct Residual<'a> {
    alive: Vec<bool>,
    d_in: Vec<i64>,
    d_out: Vec<i64>,
    pairs: &'a NonEdgeSet,
}

impl<'a> Residual<'a> {
    fn new(degrees: &DegreeTable, pairs: &'a NonEdgeSet) -> Result<Self> {
        let d_out = degrees
            .d_out()
            .ok_or_else(|| Error::Argument("near-tournament queries need out-degrees".into()))?;
        Ok(Residual {
            alive: vec![true; degrees.n()],
            d_in: degrees.d_in().iter().map(|&d| d as i64).collect(),
            d_out: d_out.iter().map(|&d| d as i64).collect(),
            pairs,
        })
    }

    fn ids(&self) -> Vec<VertexId> {
        (0..self.alive.len() as VertexId).filter(|&v| self.alive[v as usize]).collect()
    }

    /// Orients each live non-edge (those crossing `s` away from it, the rest
    /// low to high) and checks whether `s` is the first component of the result.
    fn is_source(&self, s: &[VertexId]) -> Result<bool> {
        let n = self.alive.len();
        let mut in_s = vec![false; n];
        for &v in s {
            in_s[v as usize] = true;
        }
        let mut d_in = self.d_in.clone();
        let mut d_out = self.d_out.clone();
        for &(a, b) in &self.pairs.non_edges {
            if !self.alive[a as usize] || !self.alive[b as usize] {
                continue;
            }
            let (from, to) = if in_s[b as usize] && !in_s[a as usize] { (b, a) } else { (a, b) };
            d_out[from as usize] += 1;
            d_in[to as usize] += 1;
        }
        let ids = self.ids();
        let din: Vec<i64> = ids.iter().map(|&v| d_in[v as usize]).collect();
        let dout: Vec<i64> = ids.iter().map(|&v| d_out[v as usize]).collect();
        let first = peel_chain(&ids, &din, Some(&dout), true)?;
        let mut first = first.into_iter().next().unwrap_or_default();
        first.sort_unstable();
        Ok(first == s)
    }

    /// Removes a source component; survivors lose one in-edge per non-F pair with it.
    fn remove(&mut self, s: &[VertexId]) {
        for &u in s {
            self.alive[u as usize] = false;
        }
        for v in 0..self.alive.len() as VertexId {
            if self.alive[v as usize] {
                let linked = s.iter().filter(|&&u| !self.pairs.is_non_edge(u, v)).count();
                self.d_in[v as usize] -= linked as i64;
            }
        }
    }
}

/// Whether `s` is a source SCC of the graph described by `degrees` and `pairs`,
/// assuming `s` strictly contains no source SCC.
pub fn is_source_scc(s: &[VertexId], degrees: &DegreeTable, pairs: &NonEdgeSet) -> Result<bool> {
    if s.is_empty() {
        return Err(Error::Argument("candidate set is empty".into()));
    }
    let mut sorted = s.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.iter().any(|&v| v as usize >= degrees.n()) {
        return Err(Error::Argument("candidate vertex out of range".into()));
    }
    Residual::new(degrees, pairs)?.is_source(&sorted)
}

/// Subsets of `0..n` with `size` bits, in increasing bitmask order.
fn subsets(n: usize, size: usize) -> impl Iterator<Item = u32> {
    let first = if size == 0 { 0 } else { (1u64 << size) as u32 - 1 };
    let limit = 1u64 << n;
    std::iter::successors(Some(first), move |&m| {
        if m == 0 {
            return None;
        }
        let c = m & m.wrapping_neg();
        let r = m as u64 + c as u64;
        let next = (((r ^ m as u64) >> 2) / c as u64) | r;
        (next < limit).then_some(next as u32)
    })
    .take_while(move |&m| (m as u64) < limit)
}

pub fn gen_scc_dag(degrees: &DegreeTable, pairs: &NonEdgeSet) -> Result<SccDag> {
    let n = degrees.n();
    if n > MAX_ENUM_VERTICES {
        return Err(Error::TooLarge { what: "vertex count for subset enumeration", value: n, limit: MAX_ENUM_VERTICES });
    }
    let mut residual = Residual::new(degrees, pairs)?;
    let mut components = Vec::new();
    loop {
        let ids = residual.ids();
        if ids.is_empty() {
            break;
        }
        let found = (1..=ids.len())
            .flat_map(|size| subsets(ids.len(), size))
            .map(|mask| ids.iter().enumerate().filter(|(i, _)| mask >> i & 1 == 1).map(|(_, &v)| v).collect::<Vec<_>>())
            .find_map(|s| match residual.is_source(&s) {
                Ok(true) => Some(Ok(s)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })
            .transpose()?
            .ok_or_else(|| Error::Invariant("no source component among the remaining vertices".into()))?;
        residual.remove(&found);
        components.push(found);
    }
    let mut dag_edges = BTreeSet::new();
    for i in 0..components.len() {
        for j in i + 1..components.len() {
            let linked = components[i]
                .iter()
                .any(|&u| components[j].iter().any(|&v| !pairs.is_non_edge(u, v)));
            if linked {
                dag_edges.insert((i, j));
            }
        }
    }
    Ok(SccDag { components, dag_edges })
}

fn check_vertex(n: usize, v: VertexId) -> Result<()> {
    if v as usize >= n {
        return Err(Error::Argument(format!("vertex {v} out of range for n = {n}")));
    }
    Ok(())
}

/// Calls `f` with the component index of every vertex in each completion, until
/// `f` returns false. Returns whether every call returned true.
fn all_completions(
    degrees: &DegreeTable,
    pairs: &NonEdgeSet,
    mut f: impl FnMut(&[usize]) -> bool,
) -> Result<bool> {
    let f_pairs: Vec<_> = pairs.non_edges.iter().copied().collect();
    if f_pairs.len() > MAX_ENUM_NON_EDGES {
        return Err(Error::TooLarge { what: "non-edge count", value: f_pairs.len(), limit: MAX_ENUM_NON_EDGES });
    }
    let n = degrees.n();
    let ids: Vec<VertexId> = (0..n as VertexId).collect();
    let base_in: Vec<i64> = degrees.d_in().iter().map(|&d| d as i64).collect();
    let base_out: Vec<i64> = degrees
        .d_out()
        .ok_or_else(|| Error::Argument("near-tournament queries need out-degrees".into()))?
        .iter()
        .map(|&d| d as i64)
        .collect();
    let mut comp_of = vec![0; n];
    for mask in 0u32..1 << f_pairs.len() {
        let (mut d_in, mut d_out) = (base_in.clone(), base_out.clone());
        for (i, &(a, b)) in f_pairs.iter().enumerate() {
            let (from, to) = if mask >> i & 1 == 1 { (b, a) } else { (a, b) };
            d_out[from as usize] += 1;
            d_in[to as usize] += 1;
        }
        for (c, comp) in peel_chain(&ids, &d_in, Some(&d_out), false)?.iter().enumerate() {
            for &v in comp {
                comp_of[v as usize] = c;
            }
        }
        if !f(&comp_of) {
            return Ok(false);
        }
    }
    Ok(true)
}

/// `t` is reachable from `s` in the real graph iff it is in every completion.
pub fn gen_reach_by_completions(degrees: &DegreeTable, pairs: &NonEdgeSet, s: VertexId, t: VertexId) -> Result<bool> {
    check_vertex(degrees.n(), s)?;
    check_vertex(degrees.n(), t)?;
    all_completions(degrees, pairs, |comp| comp[s as usize] <= comp[t as usize])
}

pub fn gen_reach_by_dag(degrees: &DegreeTable, pairs: &NonEdgeSet, s: VertexId, t: VertexId) -> Result<bool> {
    check_vertex(degrees.n(), s)?;
    check_vertex(degrees.n(), t)?;
    let dag = gen_scc_dag(degrees, pairs)?;
    let (cs, ct) = (dag.component_index(s), dag.component_index(t));
    Ok(dag.reaches(cs.expect("s is covered"), ct.expect("t is covered")))
}

pub fn gen_strconn_by_completions(degrees: &DegreeTable, pairs: &NonEdgeSet) -> Result<bool> {
    all_completions(degrees, pairs, |comp| comp.iter().all(|&c| c == 0))
}

pub fn gen_strconn_by_dag(degrees: &DegreeTable, pairs: &NonEdgeSet) -> Result<bool> {
    Ok(gen_scc_dag(degrees, pairs)?.components.len() <= 1)
}

/// Enumerates completions when there are at most `n` non-edges, else peels the SCC DAG.
pub fn gen_reach(degrees: &DegreeTable, pairs: &NonEdgeSet, s: VertexId, t: VertexId) -> Result<bool> {
    check_vertex(degrees.n(), s)?;
    check_vertex(degrees.n(), t)?;
    if s == t {
        return Ok(true);
    }
    if pairs.non_edges.len() <= degrees.n() {
        gen_reach_by_completions(degrees, pairs, s, t)
    } else {
        gen_reach_by_dag(degrees, pairs, s, t)
    }
}

pub fn gen_strconn(degrees: &DegreeTable, pairs: &NonEdgeSet) -> Result<bool> {
    if pairs.non_edges.len() <= degrees.n() {
        gen_strconn_by_completions(degrees, pairs)
    } else {
        gen_strconn_by_dag(degrees, pairs)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::oracles::{oracle_scc, DenseGraph};
    use crate::stream::Edge;

    fn summary(n: usize, edges: &[(u32, u32)], k: usize) -> StreamSummary {
        let s = EdgeStream::from_edges(n, edges.iter().map(|&e| Edge::from(e))).unwrap();
        let m = gen_stream_phase(&s, k, Backend::Syndrome).unwrap();
        assert_eq!(m.stats.passes, 1);
        m.value
    }

    const FOUR: [(u32, u32); 5] = [(0, 1), (1, 0), (0, 2), (1, 3), (2, 3)];

    #[test]
    fn stream_phase_recovers_pairs() {
        let t = summary(3, &[(0, 1), (1, 2), (2, 0)], 0);
        assert_eq!(t.pairs, NonEdgeSet::default());
        let t = summary(4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3)], 1);
        assert_eq!(t.pairs.non_edges, BTreeSet::from([(2, 3)]));
        let t = summary(3, &[(0, 1), (1, 0), (1, 2), (2, 0)], 1);
        assert_eq!(t.pairs.bidirected, BTreeSet::from([(0, 1)]));
        let s = EdgeStream::from_edges(3, [Edge::new(0, 1)]).unwrap();
        assert!(matches!(gen_stream_phase(&s, 1, Backend::Syndrome), Err(Error::ClosenessViolation { k: 1 })));
    }

    #[test]
    fn source_checks() {
        let tri = summary(3, &[(0, 1), (1, 2), (2, 0)], 0);
        assert!(is_source_scc(&[0, 1, 2], &tri.degrees, &tri.pairs).unwrap());
        let tr = summary(3, &[(0, 1), (0, 2), (1, 2)], 0);
        assert!(!is_source_scc(&[1], &tr.degrees, &tr.pairs).unwrap());
        assert!(is_source_scc(&[0], &tr.degrees, &tr.pairs).unwrap());
        // {0,1} bidirected, non-edge {2,3} and {0,3}... keep F = {{2,3}}
        let g = summary(4, &[(0, 1), (1, 0), (0, 2), (1, 2), (0, 3), (1, 3)], 2);
        assert_eq!(g.pairs.non_edges, BTreeSet::from([(2, 3)]));
        assert!(is_source_scc(&[0, 1], &g.degrees, &g.pairs).unwrap());
    }

    #[test]
    fn dag_matches_oracle() {
        let edges = [(0, 1), (1, 0), (0, 2), (1, 2), (0, 3), (1, 3)];
        let g = summary(4, &edges, 2);
        let dag = gen_scc_dag(&g.degrees, &g.pairs).unwrap();
        assert_eq!(dag.components, vec![vec![0, 1], vec![2], vec![3]]);
        assert_eq!(dag.dag_edges, BTreeSet::from([(0, 1), (0, 2)]));
        let dense = DenseGraph::from_edges(4, edges.iter().map(|&e| e.into())).unwrap();
        assert_eq!(oracle_scc(&dense), dag);

        let g = summary(4, &FOUR, 3);
        let dense = DenseGraph::from_edges(4, FOUR.iter().map(|&e| e.into())).unwrap();
        assert_eq!(oracle_scc(&dense), gen_scc_dag(&g.degrees, &g.pairs).unwrap());
    }

    #[test]
    fn reach_queries() {
        let g = summary(2, &[], 1);
        assert!(!gen_reach(&g.degrees, &g.pairs, 0, 1).unwrap());
        assert!(gen_reach(&g.degrees, &g.pairs, 1, 1).unwrap());
        let g = summary(4, &FOUR, 3);
        for (s, t) in [(0, 3), (3, 0), (2, 1), (1, 2)] {
            assert_eq!(
                gen_reach_by_completions(&g.degrees, &g.pairs, s, t).unwrap(),
                gen_reach_by_dag(&g.degrees, &g.pairs, s, t).unwrap()
            );
        }
        assert!(!gen_strconn(&g.degrees, &g.pairs).unwrap());
    }

    #[test]
    fn subset_order() {
        assert_eq!(subsets(4, 2).collect::<Vec<_>>(), vec![3, 5, 6, 9, 10, 12]);
        assert_eq!(subsets(3, 3).collect::<Vec<_>>(), vec![7]);
        assert_eq!(subsets(24, 24).count(), 1);
    }
}
