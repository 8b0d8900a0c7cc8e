//! p-pass acyclicity testing for tournaments and p-pass sink finding for DAGs,
//! each pass handling one contiguous block of vertex ids.

use std::ops::Range;

use crate::error::{Error, Result};
use crate::stream::{Edge, EdgeConsumer, EdgeStream, Flow, PassRunner, VertexId};
use crate::{Metered, RunStats};

/// `n` vertex ids split into `p` contiguous blocks whose sizes differ by at most one.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PassPartition {
    n: usize,
    p: usize,
}

impl PassPartition {
    pub fn new(n: usize, p: usize) -> Result<Self> {
        if p == 0 || p > n.max(1) {
            return Err(Error::Argument(format!("pass count {p} outside 1..={}", n.max(1))));
        }
        Ok(PassPartition { n, p })
    }

    pub fn block(&self, i: usize) -> Range<VertexId> {
        let (q, r) = (self.n / self.p, self.n % self.p);
        let start = i * q + i.min(r);
        let len = q + usize::from(i < r);
        start as VertexId..(start + len) as VertexId
    }

    pub fn blocks(&self) -> impl Iterator<Item = Range<VertexId>> + '_ {
        (0..self.p).map(|i| self.block(i))
    }

    pub fn max_block(&self) -> usize {
        self.n.div_ceil(self.p)
    }
}

/// Out-degrees of one block of vertices.
struct BlockOutDegrees {
    block: Range<VertexId>,
    out: Vec<u64>,
}

impl EdgeConsumer for BlockOutDegrees {
    fn observe(&mut self, e: Edge) -> Flow {
        if self.block.contains(&e.from) {
            self.out[(e.from - self.block.start) as usize] += 1;
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        // counters plus the two block bounds
        self.out.len() + 2
    }
}

/// `sum_v outdeg(v)^2` over all vertices, accumulated one block per pass.
pub fn squared_outdegree_sum(stream: &EdgeStream, p: usize) -> Result<Metered<u128>> {
    let parts = PassPartition::new(stream.n(), p)?;
    let runner = PassRunner::new(stream);
    // the running sum occupies two words
    runner.meter().alloc(2);
    let mut sum: u128 = 0;
    for block in parts.blocks() {
        let mut c = BlockOutDegrees { out: vec![0; block.len()], block };
        runner.run_pass(&mut [&mut c])?;
        sum += c.out.iter().map(|&d| d as u128 * d as u128).sum::<u128>();
    }
    runner.meter().free(2);
    Ok(Metered { value: sum, stats: RunStats::of(&runner) })
}

/// `n(n-1)(2n-1)/6`, the squared out-degree sum of a transitive tournament.
pub fn transitive_threshold(n: usize) -> u128 {
    let n = n as u128;
    if n == 0 {
        return 0;
    }
    n * (n - 1) * (2 * n - 1) / 6
}

/// A tournament is acyclic iff its squared out-degrees sum to the transitive value.
/// The answer is meaningless for inputs that are not tournaments.
pub fn acyc_t(stream: &EdgeStream, p: usize) -> Result<Metered<bool>> {
    let m = squared_outdegree_sum(stream, p)?;
    Ok(Metered { value: m.value == transitive_threshold(stream.n()), stats: m.stats })
}

/// One bit per vertex of the block: has an out-neighbour.
struct BlockHasOut {
    block: Range<VertexId>,
    has_out: Vec<bool>,
}

impl EdgeConsumer for BlockHasOut {
    fn observe(&mut self, e: Edge) -> Flow {
        if self.block.contains(&e.from) {
            self.has_out[(e.from - self.block.start) as usize] = true;
        }
        Flow::Continue
    }

    fn words(&self) -> usize {
        self.has_out.len() + 2
    }
}

/// The smallest-id sink of the first block containing one; stops early.
pub fn sink_dag(stream: &EdgeStream, p: usize) -> Result<Metered<VertexId>> {
    let parts = PassPartition::new(stream.n(), p)?;
    let runner = PassRunner::new(stream);
    for block in parts.blocks() {
        let mut c = BlockHasOut { has_out: vec![false; block.len()], block };
        runner.run_pass(&mut [&mut c])?;
        if let Some(i) = c.has_out.iter().position(|&b| !b) {
            return Ok(Metered { value: c.block.start + i as VertexId, stats: RunStats::of(&runner) });
        }
    }
    Err(Error::NotADag)
}
