//! Per-pass state used by the Hamiltonian jobs. Every consumer owns its data
//! so that it can wait in the co-scheduler between passes.

use std::cmp::Reverse;
use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::oracles::DenseGraph;
use crate::stream::{Edge, EdgeConsumer, Flow, VertexId};

fn local_index(vertices: &[VertexId]) -> HashMap<VertexId, usize> {
    vertices.iter().enumerate().map(|(i, &v)| (v, i)).collect()
}

/// Sorts the scope into in-neighbours and out-neighbours of `v`.
pub(super) struct Neighbours {
    v: VertexId,
    index: HashMap<VertexId, usize>,
    beats_v: Vec<Option<bool>>,
}

impl Neighbours {
    pub(super) fn new(v: VertexId, scope: &[VertexId]) -> Self {
        Neighbours { v, index: local_index(scope), beats_v: vec![None; scope.len()] }
    }

    /// `(L, W)`: vertices with an edge into `v`, and vertices `v` points to.
    pub(super) fn split(self) -> Result<(Vec<VertexId>, Vec<VertexId>)> {
        let mut l = Vec::new();
        let mut w = Vec::new();
        for (&x, &i) in &self.index {
            match self.beats_v[i] {
                _ if x == self.v => {}
                Some(true) => l.push(x),
                Some(false) => w.push(x),
                None => return Err(Error::Malformed(format!("no edge between {} and {x}", self.v))),
            }
        }
        l.sort_unstable();
        w.sort_unstable();
        Ok((l, w))
    }
}

impl EdgeConsumer for Neighbours {
    fn observe(&mut self, e: Edge) -> Flow {
        if e.to == self.v {
            if let Some(&i) = self.index.get(&e.from) {
                self.beats_v[i] = Some(true);
            }
        } else if e.from == self.v {
            if let Some(&i) = self.index.get(&e.to) {
                self.beats_v[i] = Some(false);
            }
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        2 * self.index.len()
    }
}

/// In-degrees inside each of several disjoint vertex groups.
pub(super) struct GroupDegrees {
    slot: HashMap<VertexId, (usize, usize)>,
    d_in: Vec<Vec<i64>>,
}

impl GroupDegrees {
    pub(super) fn new(groups: &[&[VertexId]]) -> Self {
        let mut slot = HashMap::new();
        for (g, members) in groups.iter().enumerate() {
            slot.extend(members.iter().enumerate().map(|(i, &v)| (v, (g, i))));
        }
        GroupDegrees { slot, d_in: groups.iter().map(|g| vec![0; g.len()]).collect() }
    }

    pub(super) fn into_degrees(self) -> Vec<Vec<i64>> {
        self.d_in
    }
}

impl EdgeConsumer for GroupDegrees {
    fn observe(&mut self, e: Edge) -> Flow {
        if let (Some(&(ga, _)), Some(&(gb, j))) = (self.slot.get(&e.from), self.slot.get(&e.to)) {
            if ga == gb {
                self.d_in[gb][j] += 1;
            }
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        2 * self.slot.len()
    }
}

/// Chosen crossing edges out of W into L.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub(super) struct Crossings {
    /// Edge into the source component of L from the W component nearest the sink.
    pub(super) into_l_source: (VertexId, VertexId),
    /// Edge out of the sink component of W into the L component nearest the source.
    pub(super) from_w_sink: (VertexId, VertexId),
}

/// Scans the edges from W to L, keeping the two extreme choices.
pub(super) struct CrossingScan {
    w_rank: HashMap<VertexId, usize>,
    l_rank: HashMap<VertexId, usize>,
    w_sink: usize,
    into_l_source: Option<(Reverse<usize>, VertexId, VertexId)>,
    from_w_sink: Option<(usize, VertexId, VertexId)>,
}

impl CrossingScan {
    pub(super) fn new(w_chain: &[Vec<VertexId>], l_chain: &[Vec<VertexId>]) -> Self {
        let rank = |chain: &[Vec<VertexId>]| {
            chain.iter().enumerate().flat_map(|(r, c)| c.iter().map(move |&v| (v, r))).collect()
        };
        CrossingScan {
            w_rank: rank(w_chain),
            l_rank: rank(l_chain),
            w_sink: w_chain.len().saturating_sub(1),
            into_l_source: None,
            from_w_sink: None,
        }
    }

    pub(super) fn finish(self) -> Result<Crossings> {
        match (self.into_l_source, self.from_w_sink) {
            (Some((_, w2, l2)), Some((_, w1, l1))) => {
                Ok(Crossings { into_l_source: (w2, l2), from_w_sink: (w1, l1) })
            }
            _ => Err(Error::Invariant("no edge from the out-neighbours back into the in-neighbours".into())),
        }
    }
}

impl EdgeConsumer for CrossingScan {
    fn observe(&mut self, e: Edge) -> Flow {
        if let (Some(&rw), Some(&rl)) = (self.w_rank.get(&e.from), self.l_rank.get(&e.to)) {
            if rl == 0 {
                let key = (Reverse(rw), e.from, e.to);
                if self.into_l_source.is_none_or(|best| key < best) {
                    self.into_l_source = Some(key);
                }
            }
            if rw == self.w_sink {
                let key = (rl, e.from, e.to);
                if self.from_w_sink.is_none_or(|best| key < best) {
                    self.from_w_sink = Some(key);
                }
            }
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        2 * (self.w_rank.len() + self.l_rank.len()) + 6
    }
}

/// Buffers every edge inside a small scope.
pub(super) struct ScopeEdges {
    scope: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    edges: Vec<(usize, usize)>,
}

impl ScopeEdges {
    pub(super) fn new(scope: &[VertexId]) -> Self {
        ScopeEdges { scope: scope.to_vec(), index: local_index(scope), edges: Vec::new() }
    }

    /// The buffered sub-tournament on local ids `0..scope.len()`.
    pub(super) fn graph(&self) -> Result<DenseGraph> {
        let mut g = DenseGraph::new(self.scope.len())?;
        for &(a, b) in &self.edges {
            g.add(a as VertexId, b as VertexId);
        }
        if !g.is_tournament() {
            return Err(Error::Malformed(format!("scope of {} vertices is not a tournament", self.scope.len())));
        }
        Ok(g)
    }

    pub(super) fn global(&self, local: &[VertexId]) -> Vec<VertexId> {
        local.iter().map(|&i| self.scope[i as usize]).collect()
    }
}

impl EdgeConsumer for ScopeEdges {
    fn observe(&mut self, e: Edge) -> Flow {
        if let (Some(&a), Some(&b)) = (self.index.get(&e.from), self.index.get(&e.to)) {
            self.edges.push((a, b));
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        2 * self.scope.len() + 2 * self.edges.len()
    }
}

/// Orientations between the current head windows of paths being merged.
pub(super) struct MergeWindows {
    slot: HashMap<VertexId, (usize, bool, usize)>,
    width: Vec<usize>,
    cells: Vec<Vec<u8>>,
}

pub(super) const A_TO_B: u8 = 1;
pub(super) const B_TO_A: u8 = 2;

impl MergeWindows {
    /// One `(a_window, b_window)` per merge in progress.
    pub(super) fn new(windows: &[(&[VertexId], &[VertexId])]) -> Self {
        let mut slot = HashMap::new();
        for (p, (a, b)) in windows.iter().enumerate() {
            slot.extend(a.iter().enumerate().map(|(i, &v)| (v, (p, false, i))));
            slot.extend(b.iter().enumerate().map(|(i, &v)| (v, (p, true, i))));
        }
        MergeWindows {
            slot,
            width: windows.iter().map(|(_, b)| b.len()).collect(),
            cells: windows.iter().map(|(a, b)| vec![0; a.len() * b.len()]).collect(),
        }
    }

    /// Orientation between position `i` of window A and `j` of window B in merge `p`.
    pub(super) fn get(&self, p: usize, i: usize, j: usize) -> u8 {
        self.cells[p][i * self.width[p] + j]
    }
}

impl EdgeConsumer for MergeWindows {
    fn observe(&mut self, e: Edge) -> Flow {
        if let (Some(&(p, sf, i)), Some(&(q, st, j))) = (self.slot.get(&e.from), self.slot.get(&e.to)) {
            if p == q && sf != st {
                let (cell, dir) = if sf { (j * self.width[p] + i, B_TO_A) } else { (i * self.width[p] + j, A_TO_B) };
                self.cells[p][cell] = dir;
            }
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        2 * self.slot.len() + self.cells.iter().map(Vec::len).sum::<usize>()
    }
}

/// Confirms that every consecutive pair of a vertex sequence is a stream edge.
pub(super) struct PathCheck {
    missing: HashSet<(VertexId, VertexId)>,
    words: usize,
}

impl PathCheck {
    pub(super) fn new(order: &[VertexId], closed: bool) -> Self {
        let mut missing: HashSet<_> = order.windows(2).map(|w| (w[0], w[1])).collect();
        if closed && order.len() > 1 {
            missing.insert((order[order.len() - 1], order[0]));
        }
        PathCheck { words: 2 * missing.len(), missing }
    }

    pub(super) fn first_missing(&self) -> Option<(VertexId, VertexId)> {
        self.missing.iter().min().copied()
    }
}

impl EdgeConsumer for PathCheck {
    fn observe(&mut self, e: Edge) -> Flow {
        self.missing.remove(&(e.from, e.to));
        Flow::Continue
    }

    fn words(&self) -> usize {
        self.words
    }
}
