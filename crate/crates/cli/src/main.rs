mod commands;
mod report;

use std::path::PathBuf;
use std::process::ExitCode;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use streamnament::generators::GenSpec;
use streamnament::hamiltonian::DEFAULT_BASE_CASE;
use streamnament::oracles::DP_LIMIT;
use streamnament::{EdgeStream, VertexId};
use thiserror::Error;

use report::{RunReport, Verification, SCHEMA};

pub const BUDGET_ENV: &str = "STREAMNAMENT_WORD_BUDGET";

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] streamnament::Error),
    #[error("{BUDGET_ENV} must be a positive integer, got {0:?}")]
    BudgetEnv(String),
    #[error("cannot write {path}: {source}")]
    Write { path: PathBuf, source: std::io::Error },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        use streamnament::Error as E;
        match self {
            CliError::BudgetEnv(_) => 64,
            CliError::Write { .. } | CliError::Json(_) => 1,
            CliError::Core(e) => match e {
                E::Io { .. }
                | E::Parse { .. }
                | E::InvalidEdge { .. }
                | E::DuplicateEdge { .. }
                | E::Malformed(_)
                | E::ClosenessViolation { .. }
                | E::NotADag => 2,
                E::Argument(_) | E::Precondition(_) | E::TooLarge { .. } => 64,
                _ => 1,
            },
        }
    }
}

#[derive(Debug, Parser)]
#[command(name = "streamnament", version, about = "Multi-pass streaming algorithms for tournaments and near-tournaments")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
struct Input {
    /// Edge-list file: a `n m` header, then one `u v` line per edge.
    #[arg(long = "in", value_name = "FILE")]
    path: Option<PathBuf>,
    /// Generated instance, e.g. `strong:n=32,seed=1`.
    #[arg(long = "gen", value_name = "SPEC")]
    spec: Option<GenSpec>,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    input: Input,
    /// Write the report here instead of stdout.
    #[arg(long, value_name = "FILE")]
    out: Option<PathBuf>,
    /// Pretty-print the report.
    #[arg(long)]
    json: bool,
    /// Check the answer against an in-memory oracle.
    #[arg(long)]
    verify: bool,
    /// Replay the input edges in a shuffled order.
    #[arg(long)]
    seed: Option<u64>,
    /// Word budget; defaults to $STREAMNAMENT_WORD_BUDGET, else n^2.
    #[arg(long)]
    budget: Option<usize>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum GraphMode {
    /// Exactly one edge per vertex pair; stores in-degrees only.
    Tournament,
    /// At least one edge per vertex pair; stores in- and out-degrees.
    General,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
pub enum FasModeArg {
    Exact,
    Indeg5,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// SCC chain of a tournament or a digraph without non-edges.
    Scc {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "tournament")]
        mode: GraphMode,
    },
    /// SCC graph of a digraph close to a tournament.
    GenScc {
        #[command(flatten)]
        common: Common,
        /// Bound on non-edges plus bidirected pairs.
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// s-t reachability via the SCC chain.
    Reach {
        #[command(flatten)]
        common: Common,
        #[arg(long)]
        source: VertexId,
        #[arg(long)]
        target: VertexId,
        #[arg(long, value_enum, default_value = "tournament")]
        mode: GraphMode,
    },
    /// s-t reachability in a digraph close to a tournament.
    GenReach {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        k: usize,
        #[arg(long)]
        source: VertexId,
        #[arg(long)]
        target: VertexId,
    },
    /// Strong connectivity via the SCC chain.
    Strconn {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "tournament")]
        mode: GraphMode,
    },
    /// Strong connectivity of a digraph close to a tournament.
    GenStrconn {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 8)]
        k: usize,
    },
    /// Hamiltonian cycle of a tournament, if it is strongly connected.
    Hamcycle {
        #[command(flatten)]
        common: Common,
        /// Largest scope solved by buffering its edges.
        #[arg(long, default_value_t = DEFAULT_BASE_CASE)]
        base_case: usize,
    },
    /// Hamiltonian path of a tournament.
    Hampath {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = DEFAULT_BASE_CASE)]
        base_case: usize,
    },
    /// Feedback-arc-set ordering of a tournament.
    Fas {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value = "exact")]
        mode: FasModeArg,
        /// Larger components fall back to in-degree order.
        #[arg(long, default_value_t = DP_LIMIT)]
        max_exact_size: usize,
    },
    /// Acyclicity of a tournament in p passes.
    Acyc {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        passes: usize,
    },
    /// A sink of a DAG in at most p passes.
    Sink {
        #[command(flatten)]
        common: Common,
        #[arg(long, default_value_t = 1)]
        passes: usize,
    },
    /// Write a generated instance as an edge list.
    Gen {
        #[arg(long = "gen", value_name = "SPEC")]
        spec: GenSpec,
        #[arg(long, value_name = "FILE")]
        out: Option<PathBuf>,
        /// Shuffle the edge order.
        #[arg(long)]
        seed: Option<u64>,
    },
}

fn load(input: &Input, seed: Option<u64>) -> Result<EdgeStream, CliError> {
    let stream = match (&input.path, &input.spec) {
        (Some(path), _) => EdgeStream::from_file(path)?,
        (None, Some(spec)) => spec.build()?,
        (None, None) => unreachable!("clap requires an input"),
    };
    Ok(match seed {
        Some(s) => stream.permuted(s)?,
        None => stream,
    })
}

fn budget_for(flag: Option<usize>, n: usize) -> Result<usize, CliError> {
    if let Some(b) = flag {
        return Ok(b);
    }
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw.trim().parse().ok().filter(|&b| b > 0).ok_or(CliError::BudgetEnv(raw)),
        Err(_) => Ok(n.saturating_mul(n).max(4)),
    }
}

fn emit(text: &str, out: Option<&PathBuf>) -> Result<(), CliError> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(|source| CliError::Write { path: path.clone(), source }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<Verification, CliError> {
    use commands::Task;
    let (algorithm, common, task) = match cli.command {
        Command::Gen { spec, out, seed } => {
            let stream = load(&Input { path: None, spec: Some(spec) }, seed)?;
            emit(&stream.to_text()?, out.as_ref())?;
            return Ok(Verification::Skipped);
        }
        Command::Scc { common, mode } => ("scc", common, Task::Scc { mode }),
        Command::GenScc { common, k } => ("gen-scc", common, Task::GenScc { k }),
        Command::Reach { common, source, target, mode } => ("reach", common, Task::Reach { source, target, mode }),
        Command::GenReach { common, k, source, target } => ("gen-reach", common, Task::GenReach { k, source, target }),
        Command::Strconn { common, mode } => ("strconn", common, Task::Strconn { mode }),
        Command::GenStrconn { common, k } => ("gen-strconn", common, Task::GenStrconn { k }),
        Command::Hamcycle { common, base_case } => ("hamcycle", common, Task::HamCycle { base_case }),
        Command::Hampath { common, base_case } => ("hampath", common, Task::HamPath { base_case }),
        Command::Fas { common, mode, max_exact_size } => ("fas", common, Task::Fas { mode, max_exact_size }),
        Command::Acyc { common, passes } => ("acyc", common, Task::Acyc { passes }),
        Command::Sink { common, passes } => ("sink", common, Task::Sink { passes }),
    };
    let stream = load(&common.input, common.seed)?;
    let budget = budget_for(common.budget, stream.n())?;
    let start = Instant::now();
    let outcome = task.run(&stream, budget)?;
    let wall_ms = start.elapsed().as_secs_f64() * 1e3;
    let verification = if common.verify { task.verify(&stream, &outcome)? } else { Verification::Skipped };
    let report = RunReport {
        schema: SCHEMA,
        algorithm,
        n: stream.n(),
        answer: outcome.answer,
        passes_used: outcome.stats.passes,
        words_peak: outcome.stats.words_peak,
        budget,
        within_budget: outcome.stats.words_peak <= budget,
        wall_ms: (wall_ms * 1e3).round() / 1e3,
        verification,
    };
    let mut text = report.to_json(common.json)?;
    text.push('\n');
    emit(&text, common.out.as_ref())?;
    Ok(verification)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 64 } else { 0 });
        }
    };
    match run(cli) {
        Ok(Verification::Mismatch) => ExitCode::from(3),
        Ok(_) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
