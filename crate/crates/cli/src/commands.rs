use serde_json::{json, Value};
use streamnament::acyc::{acyc_t, sink_dag};
use streamnament::almost::{gen_reach, gen_scc_dag, gen_stream_phase, gen_strconn, SccDag};
use streamnament::fas::{fas_t, FasConfig, FasMode};
use streamnament::hamiltonian::{ham_cycle, ham_path_scc_concat, HamConfig};
use streamnament::oracles::{
    back_edges, is_ham_cycle, is_ham_path, oracle_acyclic, oracle_fas, oracle_reach, oracle_scc, oracle_sinks,
    oracle_strongly_connected, DenseGraph, DP_LIMIT,
};
use streamnament::scc::{reach_query, scc_run, strconn_query};
use streamnament::sparse::Backend;
use streamnament::{EdgeStream, Error, RunStats, VertexId};

use crate::report::Verification;
use crate::{CliError, FasModeArg, GraphMode};

#[derive(Clone, Copy, Debug)]
pub enum Task {
    Scc { mode: GraphMode },
    GenScc { k: usize },
    Reach { source: VertexId, target: VertexId, mode: GraphMode },
    GenReach { k: usize, source: VertexId, target: VertexId },
    Strconn { mode: GraphMode },
    GenStrconn { k: usize },
    HamCycle { base_case: usize },
    HamPath { base_case: usize },
    Fas { mode: FasModeArg, max_exact_size: usize },
    Acyc { passes: usize },
    Sink { passes: usize },
}

/// The typed answer, kept for the oracle comparison.
pub enum Detail {
    Components(Vec<Vec<VertexId>>),
    Dag(SccDag),
    Bool(bool),
    Cycle(Option<Vec<VertexId>>),
    Path(Vec<VertexId>),
    Fas { order: Vec<VertexId>, back_edges: usize, budget: usize },
    Vertex(VertexId),
}

pub struct Outcome {
    pub answer: Value,
    pub stats: RunStats,
    detail: Detail,
}

fn pairs<'a>(it: impl IntoIterator<Item = &'a (VertexId, VertexId)>) -> Vec<[VertexId; 2]> {
    it.into_iter().map(|&(u, v)| [u, v]).collect()
}

impl Task {
    pub fn run(&self, stream: &EdgeStream, budget: usize) -> Result<Outcome, CliError> {
        let outcome = match *self {
            Task::Scc { mode } => {
                let m = scc_run(stream, mode == GraphMode::Tournament)?;
                let comps = m.value.components().to_vec();
                Outcome { answer: json!({ "components": comps }), stats: m.stats, detail: Detail::Components(comps) }
            }
            Task::Reach { source, target, mode } => {
                let m = scc_run(stream, mode == GraphMode::Tournament)?;
                let b = reach_query(&m.value, source, target)?;
                Outcome { answer: json!({ "reachable": b }), stats: m.stats, detail: Detail::Bool(b) }
            }
            Task::Strconn { mode } => {
                let m = scc_run(stream, mode == GraphMode::Tournament)?;
                let b = strconn_query(&m.value);
                Outcome { answer: json!({ "strongly_connected": b }), stats: m.stats, detail: Detail::Bool(b) }
            }
            Task::GenScc { k } => {
                let m = gen_stream_phase(stream, k, Backend::Syndrome)?;
                let dag = gen_scc_dag(&m.value.degrees, &m.value.pairs)?;
                let edges: Vec<[usize; 2]> = dag.dag_edges.iter().map(|&(i, j)| [i, j]).collect();
                let answer = json!({
                    "components": dag.components,
                    "dag_edges": edges,
                    "non_edges": pairs(&m.value.pairs.non_edges),
                    "bidirected": pairs(&m.value.pairs.bidirected),
                });
                Outcome { answer, stats: m.stats, detail: Detail::Dag(dag) }
            }
            Task::GenReach { k, source, target } => {
                let m = gen_stream_phase(stream, k, Backend::Syndrome)?;
                let b = gen_reach(&m.value.degrees, &m.value.pairs, source, target)?;
                Outcome { answer: json!({ "reachable": b }), stats: m.stats, detail: Detail::Bool(b) }
            }
            Task::GenStrconn { k } => {
                let m = gen_stream_phase(stream, k, Backend::Syndrome)?;
                let b = gen_strconn(&m.value.degrees, &m.value.pairs)?;
                Outcome { answer: json!({ "strongly_connected": b }), stats: m.stats, detail: Detail::Bool(b) }
            }
            Task::HamCycle { base_case } => {
                let run = ham_cycle(stream, HamConfig { budget, base_case })?;
                let cycle = run.value.map(|p| p.vertices);
                Outcome { answer: json!({ "cycle": cycle }), stats: run.stats, detail: Detail::Cycle(cycle) }
            }
            Task::HamPath { base_case } => {
                let run = ham_path_scc_concat(stream, HamConfig { budget, base_case })?;
                let path = run.value.vertices;
                Outcome { answer: json!({ "path": path }), stats: run.stats, detail: Detail::Path(path) }
            }
            Task::Fas { mode, max_exact_size } => {
                let mode = match mode {
                    FasModeArg::Exact => FasMode::Exact,
                    FasModeArg::Indeg5 => FasMode::Indegree5,
                };
                let m = fas_t(stream, FasConfig { mode, max_exact_size, budget })?;
                let f = m.value;
                let answer = json!({
                    "order": f.order,
                    "back_edges": f.back_edges,
                    "cross_back_edges": f.cross_back_edges,
                });
                let detail = Detail::Fas { order: f.order, back_edges: f.back_edges, budget };
                Outcome { answer, stats: m.stats, detail }
            }
            Task::Acyc { passes } => {
                let m = acyc_t(stream, passes)?;
                Outcome { answer: json!({ "acyclic": m.value }), stats: m.stats, detail: Detail::Bool(m.value) }
            }
            Task::Sink { passes } => {
                let m = sink_dag(stream, passes)?;
                Outcome { answer: json!({ "sink": m.value }), stats: m.stats, detail: Detail::Vertex(m.value) }
            }
        };
        Ok(outcome)
    }

    /// Recomputes the answer in memory. Inputs too large for a dense matrix are skipped.
    pub fn verify(&self, stream: &EdgeStream, outcome: &Outcome) -> Result<Verification, CliError> {
        let g = match DenseGraph::from_stream(stream) {
            Ok(g) => g,
            Err(Error::TooLarge { .. }) => return Ok(Verification::Skipped),
            Err(e) => return Err(e.into()),
        };
        let agrees = match (self, &outcome.detail) {
            (Task::Scc { .. }, Detail::Components(c)) => oracle_scc(&g).components == *c,
            (Task::GenScc { .. }, Detail::Dag(d)) => oracle_scc(&g) == *d,
            (Task::Reach { source, target, .. } | Task::GenReach { source, target, .. }, Detail::Bool(b)) => {
                oracle_reach(&g, *source, *target) == *b
            }
            (Task::Strconn { .. } | Task::GenStrconn { .. }, Detail::Bool(b)) => oracle_strongly_connected(&g) == *b,
            (Task::HamCycle { .. }, Detail::Cycle(c)) => match c {
                Some(c) => is_ham_cycle(&g, c),
                None => !oracle_strongly_connected(&g),
            },
            (Task::HamPath { .. }, Detail::Path(p)) => is_ham_path(&g, p),
            (Task::Fas { mode, max_exact_size }, Detail::Fas { order, back_edges: count, budget }) => {
                let n = g.n();
                let recount = back_edges(&g, order) == *count;
                let optimum = || oracle_fas(&g).map(|(_, best)| best);
                recount
                    && match mode {
                        FasModeArg::Exact if n <= DP_LIMIT.min(*max_exact_size) && n * n <= *budget => {
                            *count == optimum()?
                        }
                        FasModeArg::Indeg5 if n <= DP_LIMIT => *count <= 5 * optimum()?,
                        _ => true,
                    }
            }
            (Task::Acyc { .. }, Detail::Bool(b)) => oracle_acyclic(&g) == *b,
            (Task::Sink { .. }, Detail::Vertex(v)) => oracle_sinks(&g).contains(v),
            _ => unreachable!("detail matches its task"),
        };
        Ok(agrees.into())
    }
}
