//! Multi-pass streaming algorithms for tournaments and digraphs close to tournaments.
//!
//! Every algorithm reads its input through an [`EdgeStream`] replayed by a
//! [`PassRunner`], which counts physical passes and meters state in words.

pub mod acyc;
pub mod almost;
pub mod error;
pub mod fas;
pub mod generators;
pub mod hamiltonian;
pub mod oracles;
pub mod scc;
pub mod sparse;
pub mod stream;

pub use error::{Error, Result};
pub use stream::{Edge, EdgeConsumer, EdgeStream, Flow, PassRunner, SpaceMeter, VertexId};

/// Pass and space usage of one algorithm run.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct RunStats {
    pub passes: usize,
    pub words_peak: usize,
}

impl RunStats {
    pub fn of(runner: &PassRunner<'_>) -> Self {
        RunStats { passes: runner.passes_used(), words_peak: runner.meter().peak() }
    }
}

/// A result together with the resources spent computing it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Metered<T> {
    pub value: T,
    pub stats: RunStats,
}
