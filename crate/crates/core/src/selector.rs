//! SAT from a selector: walk one root-to-leaf path of the self-reducibility
//! tree, letting the selector pick which child to follow.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::formula::{Assignment, Formula, TreeNode, Var};
use crate::oracle::Selector;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathStep {
    pub split_var: Var,
    /// `true` when the selector followed the `x = T` child.
    pub branch: bool,
    pub formula: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct PathTrace {
    pub steps: Vec<PathStep>,
    pub final_value: bool,
    pub oracle_calls: u64,
}

impl PathTrace {
    /// The branch choices as a total assignment on the input's variables.
    pub fn assignment(&self) -> Assignment {
        self.steps.iter().map(|s| (s.split_var, s.branch)).collect()
    }
}

/// Decide satisfiability with one selector call per variable of `f`.
///
/// Each round splits the current node on its least free variable and
/// follows whichever child the selector returns. If the selector honours
/// its contract the current node stays satisfiable exactly when `f` is, so
/// the constant reached at the bottom is the verdict. Variables dropped by
/// simplification stay on the path, so the walk always takes `|vars(f)|`
/// steps and the choices form a total assignment.
pub fn decide_via_selector<S: Selector>(f: &Formula, selector: &S) -> Result<(bool, PathTrace)> {
    let mut node = TreeNode::root(f);
    let mut steps = Vec::with_capacity(node.free.len());
    let mut calls = 0;
    while let Some((if_true, if_false, split_var)) = node.split() {
        let chosen = selector.select(&if_true.formula, &if_false.formula)?;
        calls += 1;
        let branch = if chosen == &if_true.formula {
            true
        } else if chosen == &if_false.formula {
            false
        } else {
            return Err(Error::SelectorContractViolation);
        };
        node = if branch { if_true } else { if_false };
        steps.push(PathStep { split_var, branch, formula: node.formula.serialize() });
    }
    let final_value = node.formula.as_const().expect("leaf formulas are constant");
    Ok((final_value, PathTrace { steps, final_value, oracle_calls: calls }))
}
