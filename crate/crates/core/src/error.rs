use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("cannot read edge stream {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("edge list line {line}: {msg}")]
    Parse { line: usize, msg: String },
    #[error("invalid edge {from}->{to} for n = {n}")]
    InvalidEdge { from: u32, to: u32, n: usize },
    #[error("duplicate edge {from}->{to}")]
    DuplicateEdge { from: u32, to: u32 },
    #[error("malformed input: {0}")]
    Malformed(String),
    #[error("invalid argument: {0}")]
    Argument(String),
    #[error("sparse recovery failed: more than {k} nonzero coordinates")]
    RecoveryFailure { k: usize },
    #[error("input is not {k}-close to a tournament")]
    ClosenessViolation { k: usize },
    #[error("instance too large: {what} = {value} exceeds {limit}")]
    TooLarge {
        what: &'static str,
        value: usize,
        limit: usize,
    },
    #[error("precondition violated: {0}")]
    Precondition(String),
    #[error("internal invariant violated: {0}")]
    Invariant(String),
    #[error("no sink found: the input is not a DAG")]
    NotADag,
    #[error("pass aborted by a consumer")]
    Aborted,
}
