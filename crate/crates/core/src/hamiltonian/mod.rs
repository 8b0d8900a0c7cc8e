//! Hamiltonian paths and cycles in tournaments.
//!
//! A strongly connected scope is split around a vertex with balanced in- and
//! out-degree into its in-neighbours `L` and out-neighbours `W`. The SCC
//! chains of both sides and two edges from `W` back into `L` cut the scope into
//! at most five pieces, each solved by a nested cycle or path job; all pieces
//! share physical passes. Paths are built by pairwise merging of sorted runs,
//! one pass per merge level once the word budget is at least `n^2`.

mod consumers;
mod jobs;

use std::cell::RefCell;
use std::collections::HashSet;

use consumers::{GroupDegrees, PathCheck};
use jobs::{chain_of, Comp, Ctx, Piece};

use crate::error::{Error, Result};
use crate::oracles::DP_LIMIT;
use crate::scc::DegreeTable;
use crate::stream::cosched::{join_all, CoScheduler};
use crate::stream::{EdgeStream, PassRunner, VertexId};
use crate::RunStats;

/// Scopes up to this size are solved by buffering their edges.
pub const DEFAULT_BASE_CASE: usize = 12;

/// Slope of the pass bound `C * log2(n) + C0` for [`ham_cycle`] with a budget
/// of at least `n^2` words. A cycle level costs three passes and its largest
/// nested scope has at most `n - 1 - floor(n/4)` vertices, so the worst case is
/// `3 log_{4/3} n + O(1)`, about `7.23 log2 n`; merge paths never dominate.
pub const PASS_BOUND_SLOPE: f64 = 8.0;
/// Constant term of the pass bound.
pub const PASS_BOUND_OFFSET: f64 = 6.0;

pub fn cycle_pass_bound(n: usize) -> f64 {
    PASS_BOUND_SLOPE * (n.max(1) as f64).log2() + PASS_BOUND_OFFSET
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct HamConfig {
    /// Words available per pass for buffered merge orientations.
    pub budget: usize,
    pub base_case: usize,
}

impl HamConfig {
    pub fn new(budget: usize) -> Self {
        HamConfig { budget, base_case: DEFAULT_BASE_CASE }
    }

    fn validate(&self) -> Result<()> {
        if self.budget < 4 {
            return Err(Error::Argument(format!("merge budget {} is below 4 words", self.budget)));
        }
        if self.base_case == 0 {
            return Err(Error::Argument("base case size must be at least 1".into()));
        }
        if self.base_case > DP_LIMIT {
            return Err(Error::TooLarge { what: "base case size", value: self.base_case, limit: DP_LIMIT });
        }
        Ok(())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Anchor {
    Start,
    End,
}

/// Distinct vertices, each joined to the next by an edge. A closed path also
/// has an edge from its last vertex back to its first.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPath {
    pub vertices: Vec<VertexId>,
    pub closed: bool,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HamRun<T> {
    pub value: T,
    pub stats: RunStats,
    /// Length of the longest chain of dependent passes; equals `stats.passes`
    /// because independent jobs always share a pass.
    pub critical_passes: usize,
    /// `(parent size, child size)` for every nested cycle call.
    pub nesting: Vec<(usize, usize)>,
}

struct Session<'s> {
    runner: PassRunner<'s>,
    config: HamConfig,
}

impl<'s> Session<'s> {
    fn new(stream: &'s EdgeStream, config: HamConfig) -> Result<Self> {
        config.validate()?;
        Ok(Session { runner: PassRunner::new(stream), config })
    }

    fn ctx<'a>(&'a self, sched: &'a CoScheduler<'a, 'a>) -> Ctx<'a> {
        Ctx {
            sched,
            n_root: self.runner.n(),
            budget: self.config.budget,
            base_case: self.config.base_case,
            nesting: RefCell::new(Vec::new()),
        }
    }

    /// Verifies `order` against the stream in one pass and packages the run.
    fn finish(&self, ctx: Ctx<'_>, scope: &[VertexId], piece: Piece, closed: bool) -> Result<HamRun<VertexPath>> {
        let expected: HashSet<_> = scope.iter().collect();
        let got: HashSet<_> = piece.order.iter().collect();
        if got.len() != piece.order.len() || got != expected {
            return Err(Error::Invariant("result does not visit every scope vertex exactly once".into()));
        }
        let mut check = PathCheck::new(&piece.order, closed);
        self.runner.run_pass(&mut [&mut check])?;
        if let Some((a, b)) = check.first_missing() {
            return Err(Error::Invariant(format!("result uses {a} -> {b}, which is not a stream edge")));
        }
        Ok(HamRun {
            value: VertexPath { vertices: piece.order, closed },
            stats: RunStats::of(&self.runner),
            critical_passes: piece.depth,
            nesting: ctx.nesting.into_inner(),
        })
    }
}

fn checked_scope(n: usize, scope: &[VertexId]) -> Result<Vec<VertexId>> {
    let mut sorted = scope.to_vec();
    sorted.sort_unstable();
    sorted.dedup();
    if sorted.is_empty() || sorted.len() != scope.len() {
        return Err(Error::Argument("scope must be a non-empty set of distinct vertices".into()));
    }
    if let Some(&v) = sorted.last().filter(|&&v| v as usize >= n) {
        return Err(Error::Argument(format!("vertex {v} outside 0..{n}")));
    }
    Ok(sorted)
}

/// Hamiltonian path of the sub-tournament induced by `scope`.
pub fn ham_path(stream: &EdgeStream, scope: &[VertexId], config: HamConfig) -> Result<HamRun<VertexPath>> {
    let scope = checked_scope(stream.n(), scope)?;
    let session = Session::new(stream, config)?;
    let sched = CoScheduler::new(&session.runner);
    let ctx = session.ctx(&sched);
    let mut piece = sched.block_on(jobs::path(&ctx, scope.clone()))??;
    piece.depth += 1;
    session.finish(ctx, &scope, piece, false)
}

/// Hamiltonian path of `scope` that starts (or ends) at `u`.
pub fn restricted_path(
    stream: &EdgeStream,
    scope: &[VertexId],
    anchor: Anchor,
    u: VertexId,
    config: HamConfig,
) -> Result<HamRun<VertexPath>> {
    let scope = checked_scope(stream.n(), scope)?;
    let session = Session::new(stream, config)?;
    let sched = CoScheduler::new(&session.runner);
    let ctx = session.ctx(&sched);
    let mut degrees = GroupDegrees::new(&[&scope]);
    session.runner.run_pass(&mut [&mut degrees])?;
    let chain = chain_of(&scope, &degrees.into_degrees()[0])?;
    let mut piece = sched.block_on(jobs::restricted(&ctx, chain, anchor, u, None))??;
    piece.depth += 2;
    session.finish(ctx, &scope, piece, false)
}

/// A Hamiltonian cycle, or `None` when the tournament is not strongly connected.
pub fn ham_cycle(stream: &EdgeStream, config: HamConfig) -> Result<HamRun<Option<VertexPath>>> {
    let n = stream.n();
    if n == 0 {
        return Err(Error::Argument("empty tournament".into()));
    }
    let session = Session::new(stream, config)?;
    let mut table = DegreeTable::new(n, true);
    session.runner.run_pass(&mut [&mut table])?;
    let chain = table.finalize()?;
    if !chain.is_strongly_connected() {
        return Ok(HamRun { value: None, stats: RunStats::of(&session.runner), critical_passes: 1, nesting: Vec::new() });
    }
    let sched = CoScheduler::new(&session.runner);
    let ctx = session.ctx(&sched);
    let all: Vec<VertexId> = (0..n as VertexId).collect();
    let d_in = table.d_in().iter().map(|&d| d as i64).collect();
    let mut piece = sched.block_on(jobs::cycle(&ctx, Comp { vertices: all.clone(), d_in }, None))??;
    piece.depth += 2;
    let run = session.finish(ctx, &all, piece, true)?;
    Ok(HamRun { value: Some(run.value), stats: run.stats, critical_passes: run.critical_passes, nesting: run.nesting })
}

/// Hamiltonian path of a whole tournament: one path per SCC, concatenated in chain order.
pub fn ham_path_scc_concat(stream: &EdgeStream, config: HamConfig) -> Result<HamRun<VertexPath>> {
    let n = stream.n();
    if n == 0 {
        return Err(Error::Argument("empty tournament".into()));
    }
    let session = Session::new(stream, config)?;
    let mut table = DegreeTable::new(n, true);
    session.runner.run_pass(&mut [&mut table])?;
    let chain = table.finalize()?;
    let sched = CoScheduler::new(&session.runner);
    let ctx = session.ctx(&sched);
    let jobs = chain.components().iter().map(|c| jobs::path(&ctx, c.clone())).collect();
    let mut piece = Piece { order: Vec::with_capacity(n), depth: 0 };
    for part in sched.block_on(join_all(jobs))? {
        let part = part?;
        piece.order.extend(part.order);
        piece.depth = piece.depth.max(part.depth);
    }
    piece.depth += 2;
    let all: Vec<VertexId> = (0..n as VertexId).collect();
    session.finish(ctx, &all, piece, false)
}

#[cfg(test)]
mod tests;
