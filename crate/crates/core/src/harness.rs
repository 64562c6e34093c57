//! Batch runner behind the `selfred` binary: load or generate formulas, run
//! one algorithm with one oracle configuration, optionally check each result
//! against brute force, and write JSONL traces and a CSV summary.

use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;
use std::time::{Duration, Instant};

use rayon::prelude::*;
use serde::Serialize;
use thiserror::Error;

use crate::corpus::{generate_random, GenerateError};
use crate::count::{brute_force_count_with_limit, DEFAULT_BRUTE_LIMIT};
use crate::enumerate::{count_via_enumerator, DescentStep};
use crate::formula::Formula;
use crate::oracle::{
    adversarial_selector, honest_selector, honest_two_enumerator, simulated_sparse_coreduction,
    simulated_tally_reduction, EnumeratorStyle, SparseStyle, TallyStyle,
};
use crate::parse::{parse, parse_dimacs};
use crate::pruning::{decide_via_sparse, decide_via_tally, SparseMode, TreeLevel};
use crate::selector::{decide_via_selector, PathStep};

/// Environment variable overriding [`DEFAULT_BRUTE_LIMIT`].
pub const BRUTE_LIMIT_ENV: &str = "SELFRED_BRUTE_LIMIT";

pub fn brute_limit_from_env() -> Result<usize, HarnessError> {
    match std::env::var(BRUTE_LIMIT_ENV) {
        Ok(v) => v
            .parse()
            .map_err(|_| HarnessError::Config(format!("{BRUTE_LIMIT_ENV}={v} is not a number"))),
        Err(_) => Ok(DEFAULT_BRUTE_LIMIT),
    }
}

#[derive(Debug, Error)]
pub enum HarnessError {
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error("{path}: {source}")]
    Io { path: PathBuf, source: std::io::Error },
    #[error("formula {id}: {source}")]
    Parse { id: usize, source: crate::error::ParseError },
    #[error(transparent)]
    Generate(#[from] GenerateError),
    #[error("formula {id} (`{formula}`): {source}")]
    Run { id: usize, formula: String, source: crate::error::Error },
    #[error("csv: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] crate::error::Error),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Algorithm {
    Selector,
    Tally,
    Sparse,
    EnumCount,
}

impl fmt::Display for Algorithm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Algorithm::Selector => "selector",
            Algorithm::Tally => "tally",
            Algorithm::Sparse => "sparse",
            Algorithm::EnumCount => "enum_count",
        })
    }
}

/// Oracle construction parameters, checked against the algorithm.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum OracleStyle {
    HonestSelector,
    AdversarialSelector,
    Tally(TallyStyle),
    Sparse(SparseStyle),
    Enumerator(EnumeratorStyle),
}

impl OracleStyle {
    /// Parse a style name for `algorithm`; `None` picks its default.
    pub fn for_algorithm(algorithm: Algorithm, name: Option<&str>) -> Result<Self, HarnessError> {
        let bad = |e: String| HarnessError::Config(e);
        Ok(match algorithm {
            Algorithm::Selector => match name.unwrap_or("honest") {
                "honest" => OracleStyle::HonestSelector,
                "adversarial" => OracleStyle::AdversarialSelector,
                s => return Err(bad(format!("unknown selector style `{s}` (honest, adversarial)"))),
            },
            Algorithm::Tally => OracleStyle::Tally(TallyStyle::from_str(name.unwrap_or("canonical")).map_err(bad)?),
            Algorithm::Sparse => OracleStyle::Sparse(SparseStyle::from_str(name.unwrap_or("singleton")).map_err(bad)?),
            Algorithm::EnumCount => {
                OracleStyle::Enumerator(EnumeratorStyle::from_str(name.unwrap_or("exact_plus_offset")).map_err(bad)?)
            }
        })
    }
}

impl fmt::Display for OracleStyle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            OracleStyle::HonestSelector => f.write_str("honest"),
            OracleStyle::AdversarialSelector => f.write_str("adversarial"),
            OracleStyle::Tally(s) => s.fmt(f),
            OracleStyle::Sparse(s) => s.fmt(f),
            OracleStyle::Enumerator(s) => s.fmt(f),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum InputSource {
    Inline(String),
    /// Formula per line, or DIMACS CNF when the extension is `.cnf`.
    File(PathBuf),
    Random { vars: usize, node_budget: usize, seed: u64, count: usize },
}

#[derive(Clone, Debug)]
pub struct ExperimentConfig {
    pub algorithm: Algorithm,
    pub oracle: OracleStyle,
    pub seed: u64,
    pub mode: SparseMode,
    pub input: InputSource,
    pub verify: bool,
    pub brute_limit: usize,
    pub trace: Option<PathBuf>,
    pub summary: Option<PathBuf>,
}

impl ExperimentConfig {
    pub fn new(algorithm: Algorithm, oracle: OracleStyle, input: InputSource) -> Self {
        ExperimentConfig {
            algorithm,
            oracle,
            seed: 0,
            mode: SparseMode::EarlyAccept,
            input,
            verify: true,
            brute_limit: DEFAULT_BRUTE_LIMIT,
            trace: None,
            summary: None,
        }
    }
}

/// Per-algorithm detail kept for the JSONL trace.
#[derive(Clone, Debug, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum RunTrace {
    Path { steps: Vec<PathStep> },
    Levels { outcome: crate::pruning::Outcome, threshold: Option<u64>, levels: Vec<TreeLevel> },
    Descent { steps: Vec<DescentStep> },
}

#[derive(Clone, Debug, Serialize)]
pub struct RunRecord {
    pub formula_id: usize,
    pub formula: String,
    pub vars: usize,
    pub algorithm: Algorithm,
    pub oracle_style: String,
    pub seed: u64,
    /// `sat`/`unsat` for deciders, the decimal count for the counter.
    pub result: String,
    pub reference: Option<String>,
    pub agree: Option<bool>,
    pub oracle_calls: u64,
    pub max_width: Option<usize>,
    #[serde(skip)]
    pub trace: RunTrace,
    #[serde(skip)]
    pub wall_time: Duration,
}

fn sat_word(b: bool) -> String {
    if b { "sat" } else { "unsat" }.to_string()
}

pub fn load_formulas(input: &InputSource) -> Result<Vec<Formula>, HarnessError> {
    match input {
        InputSource::Inline(text) => Ok(vec![parse(text).map_err(|source| HarnessError::Parse { id: 0, source })?]),
        InputSource::File(path) => {
            let text = std::fs::read_to_string(path).map_err(|source| HarnessError::Io { path: path.clone(), source })?;
            if path.extension().is_some_and(|e| e == "cnf") {
                return Ok(vec![parse_dimacs(&text).map_err(|source| HarnessError::Parse { id: 0, source })?]);
            }
            text.lines()
                .map(str::trim)
                .filter(|l| !l.is_empty() && !l.starts_with('#'))
                .enumerate()
                .map(|(id, l)| parse(l).map_err(|source| HarnessError::Parse { id, source }))
                .collect()
        }
        InputSource::Random { vars, node_budget, seed, count } => (0..*count as u64)
            .map(|i| Ok(generate_random(*vars, *node_budget, seed.wrapping_add(i))?))
            .collect(),
    }
}

/// Run one formula with a fresh oracle.
pub fn run_one(config: &ExperimentConfig, id: usize, f: &Formula) -> Result<RunRecord, HarnessError> {
    let started = Instant::now();
    let wrap = |source| HarnessError::Run { id, formula: f.serialize(), source };
    let (result, oracle_calls, max_width, trace) = match config.oracle {
        OracleStyle::HonestSelector | OracleStyle::AdversarialSelector => {
            let (v, t) = if config.oracle == OracleStyle::HonestSelector {
                decide_via_selector(f, &honest_selector().with_limit(config.brute_limit))
            } else {
                decide_via_selector(f, &adversarial_selector(config.seed).with_limit(config.brute_limit))
            }
            .map_err(wrap)?;
            (sat_word(v), t.oracle_calls, None, RunTrace::Path { steps: t.steps })
        }
        OracleStyle::Tally(style) => {
            let g = simulated_tally_reduction(style).with_limit(config.brute_limit);
            let (v, s) = decide_via_tally(f, &g).map_err(wrap)?;
            let w = s.max_width();
            (sat_word(v), s.oracle_calls, Some(w), RunTrace::Levels { outcome: s.outcome, threshold: None, levels: s.levels })
        }
        OracleStyle::Sparse(style) => {
            let g = simulated_sparse_coreduction(style, config.seed).with_limit(config.brute_limit);
            let (v, s) = decide_via_sparse(f, &g, config.mode).map_err(wrap)?;
            let w = s.max_width();
            let trace = RunTrace::Levels { outcome: s.outcome, threshold: s.threshold, levels: s.levels };
            (sat_word(v), s.oracle_calls, Some(w), trace)
        }
        OracleStyle::Enumerator(style) => {
            let h = honest_two_enumerator(style, config.seed);
            let r = count_via_enumerator(f, &h).map_err(wrap)?;
            (r.count.to_string(), r.oracle_calls, None, RunTrace::Descent { steps: r.steps })
        }
    };

    let reference = if config.verify {
        let count = brute_force_count_with_limit(f, config.brute_limit).map_err(|e| wrap(e.into()))?;
        Some(match config.algorithm {
            Algorithm::EnumCount => count.to_string(),
            _ => sat_word(count > 0u8.into()),
        })
    } else {
        None
    };
    let agree = reference.as_ref().map(|r| *r == result);
    Ok(RunRecord {
        formula_id: id,
        formula: f.serialize(),
        vars: f.vars().len(),
        algorithm: config.algorithm,
        oracle_style: config.oracle.to_string(),
        seed: config.seed,
        result,
        reference,
        agree,
        oracle_calls,
        max_width,
        trace,
        wall_time: started.elapsed(),
    })
}

fn validate(config: &ExperimentConfig) -> Result<(), HarnessError> {
    let expected = OracleStyle::for_algorithm(config.algorithm, Some(&config.oracle.to_string()));
    if expected.ok() != Some(config.oracle) {
        return Err(HarnessError::Config(format!("oracle `{}` does not fit algorithm `{}`", config.oracle, config.algorithm)));
    }
    if let InputSource::Random { vars, .. } = config.input {
        if config.verify && vars > config.brute_limit {
            return Err(HarnessError::Config(format!(
                "{vars} variables exceed the verification limit {}; raise {BRUTE_LIMIT_ENV} or pass --no-verify",
                config.brute_limit
            )));
        }
    }
    Ok(())
}

/// Run the whole batch. Formulas are processed in parallel; records come
/// back in input order and the trace and summary files are written if
/// configured.
pub fn run(config: &ExperimentConfig) -> Result<Vec<RunRecord>, HarnessError> {
    validate(config)?;
    let formulas = load_formulas(&config.input)?;
    let records = formulas
        .par_iter()
        .enumerate()
        .map(|(id, f)| run_one(config, id, f))
        .collect::<Result<Vec<_>, _>>()?;
    if let Some(path) = &config.trace {
        write_file(path, |w| write_trace(&records, w))?;
    }
    if let Some(path) = &config.summary {
        let file = std::fs::File::create(path).map_err(|source| HarnessError::Io { path: path.clone(), source })?;
        write_summary(&records, file)?;
    }
    Ok(records)
}

fn write_file(path: &Path, body: impl FnOnce(&mut dyn Write) -> std::io::Result<()>) -> Result<(), HarnessError> {
    let io = |source| HarnessError::Io { path: path.to_path_buf(), source };
    let mut w = std::io::BufWriter::new(std::fs::File::create(path).map_err(io)?);
    body(&mut w).map_err(io)?;
    w.flush().map_err(io)
}

#[derive(Serialize)]
struct TraceLine<'a, T: Serialize> {
    formula_id: usize,
    record: &'a str,
    #[serde(flatten)]
    body: T,
}

/// JSONL: one line per tree level (deciders) or descent step (counter) or
/// path step (selector), followed by one `result` line per formula.
pub fn write_trace(records: &[RunRecord], w: &mut dyn Write) -> std::io::Result<()> {
    fn line<T: Serialize>(w: &mut dyn Write, formula_id: usize, record: &str, body: T) -> std::io::Result<()> {
        serde_json::to_writer(&mut *w, &TraceLine { formula_id, record, body })?;
        w.write_all(b"\n")
    }
    for r in records {
        match &r.trace {
            RunTrace::Path { steps } => {
                for s in steps {
                    line(w, r.formula_id, "path_step", s)?;
                }
            }
            RunTrace::Levels { levels, .. } => {
                for l in levels {
                    line(w, r.formula_id, "level", l)?;
                }
            }
            RunTrace::Descent { steps } => {
                for s in steps {
                    line(w, r.formula_id, "descent_step", s)?;
                }
            }
        }
        #[derive(Serialize)]
        struct Outcome<'a> {
            #[serde(flatten)]
            record: &'a RunRecord,
            outcome: Option<crate::pruning::Outcome>,
            threshold: Option<u64>,
        }
        let (outcome, threshold) = match &r.trace {
            RunTrace::Levels { outcome, threshold, .. } => (Some(*outcome), *threshold),
            _ => (None, None),
        };
        line(w, r.formula_id, "result", Outcome { record: r, outcome, threshold })?;
    }
    Ok(())
}

#[derive(Serialize)]
struct SummaryRow<'a> {
    formula_id: usize,
    vars: usize,
    algorithm: String,
    oracle_style: &'a str,
    seed: u64,
    result: &'a str,
    reference: &'a str,
    agree: &'a str,
    oracle_calls: u64,
    max_width: String,
}

pub fn write_summary<W: Write>(records: &[RunRecord], w: W) -> Result<(), HarnessError> {
    let mut out = csv::Writer::from_writer(w);
    for r in records {
        out.serialize(SummaryRow {
            formula_id: r.formula_id,
            vars: r.vars,
            algorithm: r.algorithm.to_string(),
            oracle_style: &r.oracle_style,
            seed: r.seed,
            result: &r.result,
            reference: r.reference.as_deref().unwrap_or(""),
            agree: match r.agree {
                Some(true) => "true",
                Some(false) => "false",
                None => "",
            },
            oracle_calls: r.oracle_calls,
            max_width: r.max_width.map(|w| w.to_string()).unwrap_or_default(),
        })?;
    }
    out.flush().map_err(|e| HarnessError::Csv(e.into()))?;
    Ok(())
}

/// Exit status for a finished batch: success iff nothing disagreed.
pub fn all_agree(records: &[RunRecord]) -> bool {
    records.iter().all(|r| r.agree != Some(false))
}
