//! Breadth-first descent of the self-reducibility tree with per-level
//! pruning.
//!
//! Both deciders split every live node on its least free variable, ask the
//! reduction for the image of every child, and keep one node per distinct
//! image. Nodes with equal images are equisatisfiable because the reduction
//! is a function with `x ∈ A ⇔ g(x) ∈ B`, so discarding all but one never
//! changes whether the level holds a satisfiable node.
//!
//! * [`decide_via_tally`] additionally drops every node whose image is not a
//!   tally string (such a node is unsatisfiable). Distinct tally strings of
//!   length at most `L` number `L + 1`, which bounds every level's width.
//! * [`decide_via_sparse`] has no syntactic rule to drop nodes. Instead, a
//!   level holding more than `q(r(m))` distinct images must contain a node
//!   whose image lies outside the sparse set, i.e. a satisfiable node.

use std::collections::HashMap;
use std::fmt;
use std::str::FromStr;

use serde::Serialize;

use crate::error::{Error, OracleError, Result};
use crate::formula::{Formula, TreeNode};
use crate::oracle::{is_tally, SparseCoReduction, TallyReduction};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum PruneKind {
    NonTally,
    DuplicateImage,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PruneEvent {
    pub kind: PruneKind,
    pub discarded: String,
    /// Image of the node kept in its place, for duplicate pruning.
    pub surviving_image: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelNode {
    pub formula: String,
    pub image: String,
}

/// One level of the pruned tree, as recorded in the trace.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TreeLevel {
    pub depth: usize,
    pub pre_prune_width: usize,
    pub post_prune_width: usize,
    /// Surviving nodes, in deterministic order.
    pub nodes: Vec<LevelNode>,
    pub prune_events: Vec<PruneEvent>,
    /// Sparse decider only: this level held more than `q(r(m))` distinct images.
    pub threshold_crossed: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Outcome {
    Sat,
    Unsat,
    /// Stopped at a level wider than the sparse set can account for.
    EarlySat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LevelStats {
    pub levels: Vec<TreeLevel>,
    pub oracle_calls: u64,
    pub outcome: Outcome,
    /// `m`, the encoding length of the input.
    pub root_len: usize,
    /// `q(r(m))` for the sparse decider.
    pub threshold: Option<u64>,
}

impl LevelStats {
    pub fn verdict(&self) -> bool {
        self.outcome != Outcome::Unsat
    }

    pub fn widths(&self) -> Vec<(usize, usize)> {
        self.levels.iter().map(|l| (l.pre_prune_width, l.post_prune_width)).collect()
    }

    pub fn max_width(&self) -> usize {
        self.levels.iter().map(|l| l.pre_prune_width).max().unwrap_or(0)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum SparseMode {
    /// Declare satisfiable at the first over-threshold level.
    EarlyAccept,
    /// Keep the first `q(r(m)) + 1` nodes of an over-threshold level and go on.
    CappedContinue,
}

impl FromStr for SparseMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "early_accept" => Ok(SparseMode::EarlyAccept),
            "capped_continue" => Ok(SparseMode::CappedContinue),
            _ => Err(format!("unknown mode `{s}` (early_accept, capped_continue)")),
        }
    }
}

impl fmt::Display for SparseMode {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SparseMode::EarlyAccept => "early_accept",
            SparseMode::CappedContinue => "capped_continue",
        })
    }
}

/// Decide SAT given a many-one reduction from SAT to a tally set.
pub fn decide_via_tally<G: TallyReduction>(f: &Formula, g: &G) -> Result<(bool, LevelStats)> {
    let stats = descend(f, |x| g.reduce(x), Pruning::Tally)?;
    Ok((stats.verdict(), stats))
}

/// Decide SAT given a many-one reduction from unsatisfiability to a sparse
/// set with census bound `q` and output-length bound `r`.
pub fn decide_via_sparse<G: SparseCoReduction>(f: &Formula, g: &G, mode: SparseMode) -> Result<(bool, LevelStats)> {
    let m = f.encoded_len() as u64;
    let threshold = g.census_bound().eval(g.length_bound().eval(m));
    let stats = descend(f, |x| g.reduce(x), Pruning::Sparse { threshold, mode })?;
    Ok((stats.verdict(), stats))
}

#[derive(Clone, Copy)]
enum Pruning {
    Tally,
    Sparse { threshold: u64, mode: SparseMode },
}

fn descend(
    f: &Formula,
    mut reduce: impl FnMut(&Formula) -> std::result::Result<String, OracleError>,
    pruning: Pruning,
) -> Result<LevelStats> {
    let root_len = f.encoded_len();
    let mut stats = LevelStats {
        levels: Vec::new(),
        oracle_calls: 0,
        outcome: Outcome::Unsat,
        root_len,
        threshold: match pruning {
            Pruning::Sparse { threshold, .. } => Some(threshold),
            Pruning::Tally => None,
        },
    };

    let mut candidates = vec![TreeNode::root(f)];
    let mut depth = 0;
    loop {
        let pre_prune_width = candidates.len();
        let mut kept: Vec<(TreeNode, String)> = Vec::with_capacity(candidates.len());
        let mut seen: HashMap<String, usize> = HashMap::new();
        let mut prune_events = Vec::new();
        for node in candidates {
            let text = node.formula.serialize();
            if text.len() > root_len {
                return Err(Error::EncodingInvariantBroken { node: text, root_len });
            }
            let image = reduce(&node.formula)?;
            stats.oracle_calls += 1;
            if matches!(pruning, Pruning::Tally) && !is_tally(&image) {
                prune_events.push(PruneEvent { kind: PruneKind::NonTally, discarded: text, surviving_image: None });
                continue;
            }
            if seen.contains_key(&image) {
                prune_events.push(PruneEvent {
                    kind: PruneKind::DuplicateImage,
                    discarded: text,
                    surviving_image: Some(image),
                });
                continue;
            }
            seen.insert(image.clone(), kept.len());
            kept.push((node, image));
        }

        let mut threshold_crossed = false;
        if let Pruning::Sparse { threshold, mode } = pruning {
            if kept.len() as u64 > threshold {
                threshold_crossed = true;
                match mode {
                    SparseMode::EarlyAccept => stats.outcome = Outcome::EarlySat,
                    SparseMode::CappedContinue => kept.truncate(threshold as usize + 1),
                }
            }
        }

        stats.levels.push(TreeLevel {
            depth,
            pre_prune_width,
            post_prune_width: kept.len(),
            nodes: kept
                .iter()
                .map(|(n, image)| LevelNode { formula: n.formula.serialize(), image: image.clone() })
                .collect(),
            prune_events,
            threshold_crossed,
        });

        if stats.outcome == Outcome::EarlySat {
            return Ok(stats);
        }
        // every pruning rule only ever discards unsatisfiable or redundant nodes
        if kept.is_empty() {
            stats.outcome = Outcome::Unsat;
            return Ok(stats);
        }
        if kept[0].0.is_leaf() {
            let sat = kept.iter().any(|(n, _)| n.formula.as_const() == Some(true));
            stats.outcome = if sat { Outcome::Sat } else { Outcome::Unsat };
            return Ok(stats);
        }

        candidates = Vec::with_capacity(2 * kept.len());
        for (node, _) in kept {
            let (t, fa, _) = node.split().expect("non-leaf node splits");
            candidates.push(t);
            candidates.push(fa);
        }
        depth += 1;
    }
}
