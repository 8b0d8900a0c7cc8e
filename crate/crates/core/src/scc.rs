//! One-pass SCC chains for digraphs in which every vertex pair shares at least
//! one edge. In such graphs the strongly connected components are totally
//! ordered, every edge between two components points forward, and the chain is
//! determined by the degree sequence alone.

use crate::error::{Error, Result};
use crate::stream::{Edge, EdgeConsumer, EdgeStream, Flow, PassRunner, VertexId};
use crate::{Metered, RunStats};

/// In/out-degree counters. In tournament mode only in-degrees are stored.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DegreeTable {
    d_in: Vec<u32>,
    d_out: Option<Vec<u32>>,
}

impl DegreeTable {
    pub fn new(n: usize, tournament_mode: bool) -> Self {
        DegreeTable { d_in: vec![0; n], d_out: (!tournament_mode).then(|| vec![0; n]) }
    }

    /// A table holding precomputed degrees (general mode).
    pub fn from_degrees(d_in: Vec<u32>, d_out: Vec<u32>) -> Result<Self> {
        if d_in.len() != d_out.len() {
            return Err(Error::Argument("degree arrays differ in length".into()));
        }
        Ok(DegreeTable { d_in, d_out: Some(d_out) })
    }

    pub fn n(&self) -> usize {
        self.d_in.len()
    }

    pub fn tournament_mode(&self) -> bool {
        self.d_out.is_none()
    }

    pub fn process_edge(&mut self, e: Edge) {
        self.d_in[e.to as usize] += 1;
        if let Some(out) = &mut self.d_out {
            out[e.from as usize] += 1;
        }
    }

    pub fn d_in(&self) -> &[u32] {
        &self.d_in
    }

    /// Stored out-degrees; `None` in tournament mode.
    pub fn d_out(&self) -> Option<&[u32]> {
        self.d_out.as_deref()
    }

    pub fn finalize(&self) -> Result<SccChain> {
        scc_finalize(self)
    }
}

impl EdgeConsumer for DegreeTable {
    fn observe(&mut self, e: Edge) -> Flow {
        self.process_edge(e);
        Flow::Continue
    }

    fn words(&self) -> usize {
        self.d_in.len() + self.d_out.as_ref().map_or(0, Vec::len)
    }
}

/// Components in topological order; all cross edges go from earlier to later.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SccChain {
    components: Vec<Vec<VertexId>>,
    component_of: Vec<u32>,
}

impl SccChain {
    /// Builds a chain over `0..n` from an ordered partition.
    pub fn from_components(n: usize, components: Vec<Vec<VertexId>>) -> Result<Self> {
        let mut component_of = vec![u32::MAX; n];
        for (i, comp) in components.iter().enumerate() {
            for &v in comp {
                let slot = component_of
                    .get_mut(v as usize)
                    .ok_or_else(|| Error::Argument(format!("vertex {v} out of range")))?;
                if *slot != u32::MAX {
                    return Err(Error::Argument(format!("vertex {v} listed twice")));
                }
                *slot = i as u32;
            }
        }
        if component_of.contains(&u32::MAX) {
            return Err(Error::Argument("components do not cover every vertex".into()));
        }
        Ok(SccChain { components, component_of })
    }

    pub fn components(&self) -> &[Vec<VertexId>] {
        &self.components
    }

    pub fn len(&self) -> usize {
        self.components.len()
    }

    pub fn is_empty(&self) -> bool {
        self.components.is_empty()
    }

    pub fn n(&self) -> usize {
        self.component_of.len()
    }

    pub fn component_of(&self, v: VertexId) -> Result<usize> {
        self.component_of
            .get(v as usize)
            .map(|&c| c as usize)
            .ok_or_else(|| Error::Argument(format!("vertex {v} out of range for n = {}", self.n())))
    }

    /// `t` is reachable from `s` iff `s`'s component does not come after `t`'s.
    pub fn reach(&self, s: VertexId, t: VertexId) -> Result<bool> {
        Ok(self.component_of(s)? <= self.component_of(t)?)
    }

    pub fn is_strongly_connected(&self) -> bool {
        self.components.len() == 1
    }
}

pub fn reach_query(chain: &SccChain, s: VertexId, t: VertexId) -> Result<bool> {
    chain.reach(s, t)
}

pub fn strconn_query(chain: &SccChain) -> bool {
    chain.is_strongly_connected()
}

/// Peels the chain of the subgraph on `ids` from its degrees within that subgraph
/// (`d_in[i]`, `d_out[i]` belong to `ids[i]`). Without out-degrees the subgraph
/// is treated as a tournament. With `first_only`, stops after the first component.
pub(crate) fn peel_chain(
    ids: &[VertexId],
    d_in: &[i64],
    d_out: Option<&[i64]>,
    first_only: bool,
) -> Result<Vec<Vec<VertexId>>> {
    let n = ids.len() as i64;
    let total_in: i64 = d_in.iter().sum();
    match d_out {
        Some(out) => {
            let total_out: i64 = out.iter().sum();
            if total_in != total_out {
                return Err(Error::Malformed(format!("in-degree sum {total_in} != out-degree sum {total_out}")));
            }
            if total_in < n * (n - 1) / 2 {
                return Err(Error::Malformed("fewer edges than vertex pairs".into()));
            }
        }
        None if total_in != n * (n - 1) / 2 => {
            return Err(Error::Malformed(format!("{total_in} edges cannot form a tournament on {n} vertices")));
        }
        None => {}
    }

    let mut order: Vec<usize> = (0..ids.len()).collect();
    order.sort_by_key(|&i| (d_in[i], ids[i]));

    let mut chain = Vec::new();
    let mut current = Vec::new();
    let mut remaining = n;
    let mut offset = 0i64;
    let mut c = 0i64;
    for i in order {
        let din = d_in[i] - offset;
        let dout = match d_out {
            Some(out) => out[i],
            None => remaining - 1 - din,
        };
        if din < 0 || dout < 0 {
            return Err(Error::Malformed(format!("vertex {} has inconsistent degrees", ids[i])));
        }
        current.push(ids[i]);
        c += dout - din;
        let size = current.len() as i64;
        if c == size * (remaining - size) {
            offset += size;
            remaining -= size;
            c = 0;
            current.sort_unstable();
            chain.push(std::mem::take(&mut current));
            if first_only {
                return Ok(chain);
            }
        }
    }
    if !current.is_empty() {
        return Err(Error::Malformed("degree sequence admits no SCC chain".into()));
    }
    Ok(chain)
}

pub fn scc_finalize(table: &DegreeTable) -> Result<SccChain> {
    let n = table.n();
    let ids: Vec<VertexId> = (0..n as VertexId).collect();
    let d_in: Vec<i64> = table.d_in.iter().map(|&d| d as i64).collect();
    let d_out: Option<Vec<i64>> = table.d_out.as_ref().map(|o| o.iter().map(|&d| d as i64).collect());
    let components = peel_chain(&ids, &d_in, d_out.as_deref(), false)?;
    SccChain::from_components(n, components)
}

/// One pass over `stream`, then post-processing.
pub fn scc_run(stream: &EdgeStream, tournament_mode: bool) -> Result<Metered<SccChain>> {
    let runner = PassRunner::new(stream);
    let mut table = DegreeTable::new(stream.n(), tournament_mode);
    runner.run_pass(&mut [&mut table])?;
    let chain = scc_finalize(&table)?;
    Ok(Metered { value: chain, stats: RunStats::of(&runner) })
}
