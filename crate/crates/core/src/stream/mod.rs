//! Replayable edge streams, pass accounting and a word-level space meter.

pub mod cosched;
pub mod format;

use std::cell::Cell;
use std::collections::HashSet;
use std::fmt;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

pub use cosched::{join_all, CoScheduler, LocalFuture, WordCharge};
pub use format::{parse_edge_list, write_edge_list};

pub type VertexId = u32;

/// A directed edge `from -> to`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Edge {
    pub from: VertexId,
    pub to: VertexId,
}

impl Edge {
    pub const fn new(from: VertexId, to: VertexId) -> Self {
        Edge { from, to }
    }
}

impl fmt::Display for Edge {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}->{}", self.from, self.to)
    }
}

impl From<(VertexId, VertexId)> for Edge {
    fn from((from, to): (VertexId, VertexId)) -> Self {
        Edge { from, to }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Flow {
    Continue,
    Abort,
}

/// Per-pass state fed every edge of a physical replay.
pub trait EdgeConsumer {
    fn observe(&mut self, edge: Edge) -> Flow;

    /// Words of state currently held.
    fn words(&self) -> usize;
}

/// An edge sequence computed on the fly, for instances too large to buffer.
pub trait EdgeGenerator: Send + Sync {
    fn for_each_edge(&self, f: &mut dyn FnMut(Edge) -> Flow);
}

#[derive(Clone)]
enum Source {
    Memory(Arc<[Edge]>),
    File(PathBuf),
    Generated(Arc<dyn EdgeGenerator>),
}

/// A fixed, replayable sequence of directed edges over vertices `0..n`.
#[derive(Clone)]
pub struct EdgeStream {
    n: usize,
    source: Source,
}

impl fmt::Debug for EdgeStream {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let kind = match &self.source {
            Source::Memory(e) => format!("memory({} edges)", e.len()),
            Source::File(p) => format!("file({})", p.display()),
            Source::Generated(_) => "generated".to_string(),
        };
        f.debug_struct("EdgeStream").field("n", &self.n).field("source", &kind).finish()
    }
}

fn check_edge(e: Edge, n: usize) -> Result<()> {
    if e.from == e.to || e.from as usize >= n || e.to as usize >= n {
        return Err(Error::InvalidEdge { from: e.from, to: e.to, n });
    }
    Ok(())
}

impl EdgeStream {
    /// Buffers `edges` in memory, rejecting self-loops, out-of-range ids and duplicates.
    pub fn from_edges(n: usize, edges: impl IntoIterator<Item = Edge>) -> Result<Self> {
        let edges: Vec<Edge> = edges.into_iter().collect();
        let mut seen = HashSet::with_capacity(edges.len());
        for &e in &edges {
            check_edge(e, n)?;
            if !seen.insert(e) {
                return Err(Error::DuplicateEdge { from: e.from, to: e.to });
            }
        }
        Ok(EdgeStream { n, source: Source::Memory(edges.into()) })
    }

    /// A stream that re-reads `path` on every replay. Only the header is read here;
    /// per-edge validation happens during passes (duplicates are not detected).
    pub fn from_file(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref().to_path_buf();
        let io = |source| Error::Io { path: path.clone(), source };
        let mut reader = BufReader::new(File::open(&path).map_err(io)?);
        let mut header = String::new();
        reader.read_line(&mut header).map_err(io)?;
        let (n, _) = format::parse_header(&header)?;
        Ok(EdgeStream { n, source: Source::File(path) })
    }

    pub fn generated(n: usize, generator: Arc<dyn EdgeGenerator>) -> Self {
        EdgeStream { n, source: Source::Generated(generator) }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Feeds every edge to `f` in stream order until it returns [`Flow::Abort`].
    pub fn replay(&self, f: &mut dyn FnMut(Edge) -> Flow) -> Result<()> {
        match &self.source {
            Source::Memory(edges) => {
                for &e in edges.iter() {
                    if f(e) == Flow::Abort {
                        break;
                    }
                }
                Ok(())
            }
            Source::Generated(g) => {
                g.for_each_edge(f);
                Ok(())
            }
            Source::File(path) => self.replay_file(path, f),
        }
    }

    fn replay_file(&self, path: &Path, f: &mut dyn FnMut(Edge) -> Flow) -> Result<()> {
        let io = |source| Error::Io { path: path.to_path_buf(), source };
        let reader = BufReader::new(File::open(path).map_err(io)?);
        let mut lines = reader.lines();
        let header = lines.next().transpose().map_err(io)?.unwrap_or_default();
        let (_, m) = format::parse_header(&header)?;
        let mut count = 0;
        for (i, line) in lines.enumerate() {
            let line = line.map_err(io)?;
            if line.trim().is_empty() {
                continue;
            }
            let e = format::parse_edge_line(&line, i + 2)?;
            check_edge(e, self.n)?;
            count += 1;
            if f(e) == Flow::Abort {
                return Ok(());
            }
        }
        if count != m {
            return Err(Error::Parse { line: 1, msg: format!("header announces {m} edges, found {count}") });
        }
        Ok(())
    }

    /// Materialises the edge sequence (tests, oracles and format conversion only).
    pub fn edges(&self) -> Result<Vec<Edge>> {
        let mut out = Vec::new();
        self.replay(&mut |e| {
            out.push(e);
            Flow::Continue
        })?;
        Ok(out)
    }

    /// The same edge set in a seeded pseudo-random order.
    pub fn permuted(&self, seed: u64) -> Result<EdgeStream> {
        let mut edges = self.edges()?;
        edges.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
        Ok(EdgeStream { n: self.n, source: Source::Memory(edges.into()) })
    }

    pub fn to_text(&self) -> Result<String> {
        Ok(write_edge_list(self.n, &self.edges()?))
    }
}

/// Word-level space accounting. Interior mutability lets nested jobs report
/// allocations while the pass loop holds a shared borrow.
#[derive(Debug, Default)]
pub struct SpaceMeter {
    current: Cell<usize>,
    peak: Cell<usize>,
}

impl SpaceMeter {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn alloc(&self, words: usize) {
        let cur = self.current.get() + words;
        self.current.set(cur);
        if cur > self.peak.get() {
            self.peak.set(cur);
        }
    }

    pub fn free(&self, words: usize) {
        let cur = self.current.get();
        debug_assert!(words <= cur, "freeing {words} of {cur} words");
        self.current.set(cur.saturating_sub(words));
    }

    /// Records a transient footprint of `words` on top of the current allocation.
    pub fn touch(&self, words: usize) {
        self.alloc(words);
        self.free(words);
    }

    pub fn current(&self) -> usize {
        self.current.get()
    }

    pub fn peak(&self) -> usize {
        self.peak.get()
    }

    /// True iff the peak footprint fits in `budget` words.
    pub fn check(&self, budget: usize) -> Result<bool> {
        if budget == 0 {
            return Err(Error::Argument("word budget must be positive".into()));
        }
        Ok(self.peak() <= budget)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct PassStats {
    /// 1-based index of the pass just completed.
    pub pass: usize,
    pub edges: usize,
}

/// Owns the pass counter and meter for one algorithm run over a stream.
#[derive(Debug)]
pub struct PassRunner<'s> {
    stream: &'s EdgeStream,
    passes: Cell<usize>,
    meter: SpaceMeter,
}

impl<'s> PassRunner<'s> {
    pub fn new(stream: &'s EdgeStream) -> Self {
        PassRunner { stream, passes: Cell::new(0), meter: SpaceMeter::new() }
    }

    pub fn stream(&self) -> &'s EdgeStream {
        self.stream
    }

    pub fn n(&self) -> usize {
        self.stream.n()
    }

    pub fn passes_used(&self) -> usize {
        self.passes.get()
    }

    pub fn meter(&self) -> &SpaceMeter {
        &self.meter
    }

    /// One physical replay shared by all `consumers`. The pass is counted even
    /// when a consumer aborts or the source fails midway.
    pub fn run_pass(&self, consumers: &mut [&mut dyn EdgeConsumer]) -> Result<PassStats> {
        self.passes.set(self.passes.get() + 1);
        let mut edges = 0;
        let mut aborted = false;
        let res = self.stream.replay(&mut |e| {
            edges += 1;
            for c in consumers.iter_mut() {
                if c.observe(e) == Flow::Abort {
                    aborted = true;
                    return Flow::Abort;
                }
            }
            Flow::Continue
        });
        // consumer state only grows during a pass, so the end size is its peak
        self.meter.touch(consumers.iter().map(|c| c.words()).sum());
        res?;
        if aborted {
            return Err(Error::Aborted);
        }
        Ok(PassStats { pass: self.passes.get(), edges })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    struct Recorder(Vec<Edge>);

    impl EdgeConsumer for Recorder {
        fn observe(&mut self, e: Edge) -> Flow {
            self.0.push(e);
            Flow::Continue
        }
        fn words(&self) -> usize {
            2 * self.0.len()
        }
    }

    fn three() -> EdgeStream {
        EdgeStream::from_edges(3, [Edge::new(0, 1), Edge::new(1, 2), Edge::new(2, 0)]).unwrap()
    }

    #[test]
    fn empty_stream_counts_a_pass() {
        let s = EdgeStream::from_edges(4, []).unwrap();
        let runner = PassRunner::new(&s);
        let mut r = Recorder(vec![]);
        runner.run_pass(&mut [&mut r]).unwrap();
        assert!(r.0.is_empty());
        assert_eq!(runner.passes_used(), 1);
    }

    #[test]
    fn shared_pass_feeds_all_consumers() {
        let s = three();
        let runner = PassRunner::new(&s);
        let (mut a, mut b) = (Recorder(vec![]), Recorder(vec![]));
        runner.run_pass(&mut [&mut a, &mut b]).unwrap();
        assert_eq!(a.0, b.0);
        assert_eq!(a.0.len(), 3);
        assert_eq!(runner.passes_used(), 1);
        runner.run_pass(&mut [&mut a]).unwrap();
        assert_eq!(runner.passes_used(), 2);
        assert_eq!(runner.meter().peak(), 12);
    }

    #[test]
    fn abort_still_counts() {
        struct Quit;
        impl EdgeConsumer for Quit {
            fn observe(&mut self, _: Edge) -> Flow {
                Flow::Abort
            }
            fn words(&self) -> usize {
                0
            }
        }
        let s = three();
        let runner = PassRunner::new(&s);
        assert!(matches!(runner.run_pass(&mut [&mut Quit]), Err(Error::Aborted)));
        assert_eq!(runner.passes_used(), 1);
    }

    #[test]
    fn rejects_bad_edges() {
        assert!(EdgeStream::from_edges(2, [Edge::new(0, 0)]).is_err());
        assert!(EdgeStream::from_edges(2, [Edge::new(0, 2)]).is_err());
        assert!(EdgeStream::from_edges(2, [Edge::new(0, 1), Edge::new(0, 1)]).is_err());
    }

    #[test]
    fn meter_check() {
        let m = SpaceMeter::new();
        assert!(m.check(5).unwrap());
        m.alloc(8);
        m.free(8);
        assert!(m.check(8).unwrap());
        assert!(!m.check(4).unwrap());
        assert!(m.check(0).is_err());
    }

    #[test]
    fn file_stream_replays() {
        let dir = std::env::temp_dir().join(format!("streamnament-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("tri.txt");
        std::fs::write(&path, three().to_text().unwrap()).unwrap();
        let fs = EdgeStream::from_file(&path).unwrap();
        assert_eq!(fs.n(), 3);
        assert_eq!(fs.edges().unwrap(), three().edges().unwrap());
        std::fs::write(&path, "3 2\n0 1\n").unwrap();
        assert!(EdgeStream::from_file(&path).unwrap().edges().is_err());
    }
}
