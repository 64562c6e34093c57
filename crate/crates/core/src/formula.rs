//! Propositional formula AST, canonical printing, constant propagation and
//! the one-variable self-reduction.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use crate::error::FormulaError;

/// Variable index. Indices are positive; `x0` is not a variable.
pub type Var = u32;

/// Total (or partial) truth assignment keyed by variable index.
pub type Assignment = BTreeMap<Var, bool>;

/// A propositional formula.
///
/// `And` and `Or` are n-ary with at least two children. Use [`Formula::and`]
/// and [`Formula::or`] to build them so that degenerate arities collapse.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Const(bool),
    Var(Var),
    Not(Box<Formula>),
    And(Vec<Formula>),
    Or(Vec<Formula>),
}

impl Formula {
    pub fn var(v: Var) -> Formula {
        assert!(v > 0, "variable indices start at 1");
        Formula::Var(v)
    }

    #[allow(clippy::should_implement_trait)]
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    /// Conjunction; the empty conjunction is `T` and a single child is returned as is.
    pub fn and(mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => Formula::Const(true),
            1 => children.pop().unwrap(),
            _ => Formula::And(children),
        }
    }

    /// Disjunction; the empty disjunction is `F` and a single child is returned as is.
    pub fn or(mut children: Vec<Formula>) -> Formula {
        match children.len() {
            0 => Formula::Const(false),
            1 => children.pop().unwrap(),
            _ => Formula::Or(children),
        }
    }

    pub fn is_const(&self) -> bool {
        matches!(self, Formula::Const(_))
    }

    pub fn as_const(&self) -> Option<bool> {
        match self {
            Formula::Const(b) => Some(*b),
            _ => None,
        }
    }

    /// The set of variable indices occurring in the formula.
    pub fn vars(&self) -> BTreeSet<Var> {
        let mut out = BTreeSet::new();
        self.collect_vars(&mut out);
        out
    }

    fn collect_vars(&self, out: &mut BTreeSet<Var>) {
        match self {
            Formula::Const(_) => {}
            Formula::Var(v) => {
                out.insert(*v);
            }
            Formula::Not(c) => c.collect_vars(out),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().for_each(|c| c.collect_vars(out)),
        }
    }

    pub fn contains_var(&self, v: Var) -> bool {
        match self {
            Formula::Const(_) => false,
            Formula::Var(w) => *w == v,
            Formula::Not(c) => c.contains_var(v),
            Formula::And(cs) | Formula::Or(cs) => cs.iter().any(|c| c.contains_var(v)),
        }
    }

    pub fn max_var(&self) -> Option<Var> {
        self.vars().last().copied()
    }

    pub fn node_count(&self) -> usize {
        match self {
            Formula::Const(_) | Formula::Var(_) => 1,
            Formula::Not(c) => 1 + c.node_count(),
            Formula::And(cs) | Formula::Or(cs) => 1 + cs.iter().map(Formula::node_count).sum::<usize>(),
        }
    }

    /// Canonical serialization: minimal parentheses, single spaces around
    /// binary operators, nested same-operator chains flattened.
    pub fn serialize(&self) -> String {
        self.to_string()
    }

    /// Encoding length `|F|`: byte length of the canonical serialization.
    pub fn encoded_len(&self) -> usize {
        self.serialize().len()
    }

    /// Constant propagation to a fixed point. The rule set is
    /// `T&y = y`, `F&y = F`, `T|y = T`, `F|y = y`, `!T = F`, `!F = T`;
    /// same-operator chains are flattened. Nothing else is rewritten.
    pub fn simplify(&self) -> Formula {
        match self {
            Formula::Const(_) | Formula::Var(_) => self.clone(),
            Formula::Not(c) => match c.simplify() {
                Formula::Const(b) => Formula::Const(!b),
                s => Formula::not(s),
            },
            Formula::And(cs) => {
                let mut kept = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        Formula::Const(true) => {}
                        Formula::Const(false) => return Formula::Const(false),
                        Formula::And(inner) => kept.extend(inner),
                        s => kept.push(s),
                    }
                }
                Formula::and(kept)
            }
            Formula::Or(cs) => {
                let mut kept = Vec::with_capacity(cs.len());
                for c in cs {
                    match c.simplify() {
                        Formula::Const(false) => {}
                        Formula::Const(true) => return Formula::Const(true),
                        Formula::Or(inner) => kept.extend(inner),
                        s => kept.push(s),
                    }
                }
                Formula::or(kept)
            }
        }
    }

    /// Replace every occurrence of `x_v` by the constant `b` and simplify.
    pub fn substitute(&self, v: Var, b: bool) -> Result<Formula, FormulaError> {
        if !self.contains_var(v) {
            return Err(FormulaError::UnknownVariable(v));
        }
        Ok(self.replace(v, b).simplify())
    }

    fn replace(&self, v: Var, b: bool) -> Formula {
        match self {
            Formula::Var(w) if *w == v => Formula::Const(b),
            Formula::Const(_) | Formula::Var(_) => self.clone(),
            Formula::Not(c) => Formula::not(c.replace(v, b)),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.replace(v, b)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.replace(v, b)).collect()),
        }
    }

    /// Split on the least variable.
    pub fn self_reduce(&self) -> Result<SelfReduction, FormulaError> {
        let vars = self.vars();
        let split_var = *vars.first().ok_or(FormulaError::NoVariables)?;
        Ok(SelfReduction {
            if_true: self.substitute(split_var, true)?,
            if_false: self.substitute(split_var, false)?,
            split_var,
            rest: vars.into_iter().skip(1).collect(),
        })
    }

    /// Evaluate under an assignment covering every variable of the formula.
    pub fn evaluate(&self, a: &Assignment) -> Result<bool, FormulaError> {
        Ok(match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => *a.get(v).ok_or(FormulaError::IncompleteAssignment(*v))?,
            Formula::Not(c) => !c.evaluate(a)?,
            Formula::And(cs) => {
                for c in cs {
                    if !c.evaluate(a)? {
                        return Ok(false);
                    }
                }
                true
            }
            Formula::Or(cs) => {
                for c in cs {
                    if c.evaluate(a)? {
                        return Ok(true);
                    }
                }
                false
            }
        })
    }

    /// Evaluate against a dense table indexed by variable. Panics on a
    /// variable outside the table.
    pub(crate) fn eval_dense(&self, values: &[bool]) -> bool {
        match self {
            Formula::Const(b) => *b,
            Formula::Var(v) => values[*v as usize],
            Formula::Not(c) => !c.eval_dense(values),
            Formula::And(cs) => cs.iter().all(|c| c.eval_dense(values)),
            Formula::Or(cs) => cs.iter().any(|c| c.eval_dense(values)),
        }
    }

    /// Rename variables through `map`. Variables missing from the map are kept.
    pub fn rename(&self, map: &BTreeMap<Var, Var>) -> Formula {
        match self {
            Formula::Const(_) => self.clone(),
            Formula::Var(v) => Formula::Var(*map.get(v).unwrap_or(v)),
            Formula::Not(c) => Formula::not(c.rename(map)),
            Formula::And(cs) => Formula::And(cs.iter().map(|c| c.rename(map)).collect()),
            Formula::Or(cs) => Formula::Or(cs.iter().map(|c| c.rename(map)).collect()),
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Formula::Or(_) => 0,
            Formula::And(_) => 1,
            _ => 2,
        }
    }

    fn fmt_child(&self, child: &Formula, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if child.precedence() < self.precedence() {
            write!(f, "({child})")
        } else {
            write!(f, "{child}")
        }
    }

    fn fmt_chain(&self, children: &[Formula], op: &str, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for c in children {
            // flatten nested chains of the same operator
            let same = std::mem::discriminant(c) == std::mem::discriminant(self);
            if !first {
                write!(f, " {op} ")?;
            }
            first = false;
            if same {
                let inner = match c {
                    Formula::And(cs) | Formula::Or(cs) => cs,
                    _ => unreachable!(),
                };
                self.fmt_chain(inner, op, f)?;
            } else {
                self.fmt_child(c, f)?;
            }
        }
        Ok(())
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Const(true) => f.write_str("T"),
            Formula::Const(false) => f.write_str("F"),
            Formula::Var(v) => write!(f, "x{v}"),
            Formula::Not(c) => {
                f.write_str("!")?;
                self.fmt_child(c, f)
            }
            Formula::And(cs) => self.fmt_chain(cs, "&", f),
            Formula::Or(cs) => self.fmt_chain(cs, "|", f),
        }
    }
}

/// The two children of a formula split on its least variable.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SelfReduction {
    pub split_var: Var,
    pub if_true: Formula,
    pub if_false: Formula,
    /// `vars(F) \ {split_var}`: the variables both children range over,
    /// whether or not simplification kept them.
    pub rest: BTreeSet<Var>,
}

/// A node of the self-reducibility tree: a simplified formula together with
/// the variables still unassigned on the path to it.
///
/// Simplification can drop variables other than the one being split, so
/// `formula.vars()` may be a strict subset of `free`. Splitting always
/// consumes the least free variable, which keeps every level of the tree at
/// the same depth.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TreeNode {
    pub formula: Formula,
    pub free: Vec<Var>,
}

impl TreeNode {
    /// Root node: the simplified formula, ranging over every variable of
    /// the input as written.
    pub fn root(f: &Formula) -> TreeNode {
        TreeNode { formula: f.simplify(), free: f.vars().into_iter().collect() }
    }

    pub fn is_leaf(&self) -> bool {
        self.free.is_empty()
    }

    /// Split on the least free variable. Returns `(true child, false child, var)`.
    pub fn split(&self) -> Option<(TreeNode, TreeNode, Var)> {
        let (&v, rest) = self.free.split_first()?;
        let child = |b: bool| TreeNode {
            formula: if self.formula.contains_var(v) {
                self.formula.replace(v, b).simplify()
            } else {
                self.formula.clone()
            },
            free: rest.to_vec(),
        };
        Some((child(true), child(false), v))
    }
}
