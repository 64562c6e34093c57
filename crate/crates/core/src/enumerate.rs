//! Exact #SAT from a 2-enumerator.
//!
//! Running the enumerator on a formula and its two children separately gives
//! three unrelated pairs of guesses, which is not enough to link the
//! children's counts to the parent's (see [`demonstrate_naive_failure`]).
//! [`combine`] packs two formulas into one whose model count is
//! `‖F‖·2^(m+1) + ‖G‖`, so a single enumerator call on the nested
//! combination of a node and both its children returns guesses whose three
//! components are coordinated. Each guess either resolves the node, or the
//! two guesses disagree on a child, which links the child's count one-to-one
//! to the node's. The descent follows that child down the tree and the
//! linkages are resolved bottom-up once a count is known.

use std::collections::BTreeMap;

use num_bigint::BigUint;
use num_traits::{One, Zero};
use serde::{Serialize, Serializer};

use crate::count::{brute_force_count, ModelCount};
use crate::error::{Error, Result};
use crate::formula::{Formula, Var};
use crate::oracle::{honest_two_enumerator, EnumeratorStyle, TwoEnumerator};

fn big_str<S: Serializer>(n: &BigUint, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(n)
}

fn pow2(e: usize) -> BigUint {
    BigUint::one() << e
}

/// The combined formula `(F ∧ z) ∨ (¬z ∧ x1 ∧ … ∧ xn ∧ G ∧ z′)` and what is
/// needed to decode its model count.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CombineRecipe {
    pub renamed_left: Formula,
    pub renamed_right: Formula,
    /// `n`: variables of the left operand.
    pub left_var_count: usize,
    /// `m`: variables of the right operand.
    pub right_var_count: usize,
    pub combined: Formula,
    /// `(z, z′)`.
    pub fresh_vars: (Var, Var),
}

/// Rename `f`'s variables, in increasing order, onto `offset+1, offset+2, …`.
fn rename_from(f: &Formula, offset: Var) -> Formula {
    let map: BTreeMap<Var, Var> = f.vars().into_iter().zip(offset + 1..).collect();
    f.rename(&map)
}

/// Combine two formulas with at least one variable each. The operands are
/// renamed apart first: the left onto `1..=n`, the right onto `n+1..=n+m`,
/// and `z`, `z′` are `n+m+1` and `n+m+2`.
pub fn combine(left: &Formula, right: &Formula) -> Result<CombineRecipe> {
    let n = left.vars().len();
    let m = right.vars().len();
    if n == 0 || m == 0 {
        return Err(Error::ConstantOperand);
    }
    let renamed_left = rename_from(left, 0);
    let renamed_right = rename_from(right, n as Var);
    let z = (n + m + 1) as Var;
    let z_prime = z + 1;

    let mut second = vec![Formula::not(Formula::Var(z))];
    second.extend((1..=n as Var).map(Formula::Var));
    second.push(renamed_right.clone());
    second.push(Formula::Var(z_prime));
    let combined = Formula::or(vec![
        Formula::and(vec![renamed_left.clone(), Formula::Var(z)]),
        Formula::and(second),
    ]);

    Ok(CombineRecipe {
        renamed_left,
        renamed_right,
        left_var_count: n,
        right_var_count: m,
        combined,
        fresh_vars: (z, z_prime),
    })
}

/// Split of a combined count back into operand counts.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Decoded {
    #[serde(serialize_with = "big_str")]
    pub left: BigUint,
    #[serde(serialize_with = "big_str")]
    pub right: BigUint,
    /// `left ≤ 2^n` and `right ≤ 2^m`; false means the count cannot have
    /// come from the recipe, i.e. the guess was bogus.
    pub in_range: bool,
}

/// `left = count div 2^(m+1)`, `right = count mod 2^(m+1)`.
pub fn decode(recipe: &CombineRecipe, combined_count: &BigUint) -> Decoded {
    let m = recipe.right_var_count;
    let left = combined_count >> (m + 1);
    let right = combined_count - (&left << (m + 1));
    let in_range = right <= pow2(m) && left <= pow2(recipe.left_var_count);
    Decoded { left, right, in_range }
}

/// Candidate counts for a node and its two children, all measured over the
/// node's variables (children over the node's variables minus the split one).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GuessTriple {
    #[serde(serialize_with = "big_str")]
    pub a: BigUint,
    #[serde(serialize_with = "big_str")]
    pub b: BigUint,
    #[serde(serialize_with = "big_str")]
    pub c: BigUint,
}

impl GuessTriple {
    pub fn new(a: impl Into<BigUint>, b: impl Into<BigUint>, c: impl Into<BigUint>) -> Self {
        GuessTriple { a: a.into(), b: b.into(), c: c.into() }
    }

    pub fn is_consistent(&self) -> bool {
        self.a == &self.b + &self.c
    }
}

/// `combiner(F, combiner(F_left, F_right))`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Combine3Recipe {
    pub outer: CombineRecipe,
    pub inner: CombineRecipe,
    /// Number of variables the children range over: `|vars(F)| − 1`.
    pub child_scope: usize,
    left_gap: usize,
    right_gap: usize,
}

impl Combine3Recipe {
    pub fn combined(&self) -> &Formula {
        &self.outer.combined
    }
}

/// Nested three-way combination of a node with its two children. The
/// children must each have at least one variable and at most
/// `|vars(F)| − 1` of them.
pub fn combine3(f: &Formula, left: &Formula, right: &Formula) -> Result<Combine3Recipe> {
    let inner = combine(left, right)?;
    let outer = combine(f, &inner.combined)?;
    let child_scope = outer.left_var_count - 1;
    let gap = |g: &Formula| {
        child_scope
            .checked_sub(g.vars().len())
            .expect("children have fewer variables than their parent")
    };
    Ok(Combine3Recipe { left_gap: gap(left), right_gap: gap(right), outer, inner, child_scope })
}

/// Decode one combined count into a triple. `None` when either split is out
/// of range.
pub fn decode3(recipe: &Combine3Recipe, combined_count: &BigUint) -> Option<GuessTriple> {
    let outer = decode(&recipe.outer, combined_count);
    if !outer.in_range {
        return None;
    }
    let inner = decode(&recipe.inner, &outer.right);
    if !inner.in_range {
        return None;
    }
    Some(GuessTriple { a: outer.left, b: inner.left << recipe.left_gap, c: inner.right << recipe.right_gap })
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    /// The `x = T` child.
    Left,
    /// The `x = F` child.
    Right,
}

/// One-to-one map from a child's two candidate counts to its parent's.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Linkage {
    pub side: Side,
    pub child: Formula,
    /// `(child count, parent count)`, child counts over the child scope.
    pub mapping: [(BigUint, BigUint); 2],
    pub depth: usize,
    /// Variables of the child scope that no longer occur in the child.
    pub gap: usize,
}

impl Linkage {
    pub fn lookup(&self, child_count: &BigUint) -> Option<&BigUint> {
        self.mapping.iter().find(|(k, _)| k == child_count).map(|(_, v)| v)
    }
}

impl Serialize for Linkage {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let pairs: Vec<(String, String)> = self.mapping.iter().map(|(k, v)| (k.to_string(), v.to_string())).collect();
        let mut st = s.serialize_struct("Linkage", 5)?;
        st.serialize_field("side", &self.side)?;
        st.serialize_field("child", &self.child.serialize())?;
        st.serialize_field("mapping", &pairs)?;
        st.serialize_field("depth", &self.depth)?;
        st.serialize_field("gap", &self.gap)?;
        st.end()
    }
}

/// What the surviving guesses say about the node.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum LinkDecision {
    Resolved(BigUint),
    Descend { side: Side, mapping: [(BigUint, BigUint); 2] },
}

/// Decide from the consistent, in-range guesses of one node.
///
/// When the two guesses disagree on the node's count they must disagree on
/// at least one child; if they disagree on both, the `F` child is linked.
pub fn link_guesses(valid: &[GuessTriple]) -> Result<LinkDecision> {
    match valid {
        [] => Err(Error::OracleContractViolation("no guess decodes to a consistent triple".into())),
        [only] => Ok(LinkDecision::Resolved(only.a.clone())),
        [first, second] if first.a == second.a => Ok(LinkDecision::Resolved(first.a.clone())),
        [first, second] => {
            let (side, keys) = if first.c != second.c {
                (Side::Right, (&first.c, &second.c))
            } else if first.b != second.b {
                (Side::Left, (&first.b, &second.b))
            } else {
                unreachable!("a = b + c forces differing children when the roots differ")
            };
            Ok(LinkDecision::Descend {
                side,
                mapping: [(keys.0.clone(), first.a.clone()), (keys.1.clone(), second.a.clone())],
            })
        }
        _ => Err(Error::OracleContractViolation(format!("{} guesses from a 2-enumerator", valid.len()))),
    }
}

/// Trace record for one node visited by the descent.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DescentStep {
    pub depth: usize,
    pub formula: String,
    pub left_child: String,
    pub right_child: String,
    /// Raw enumerator output on the combined formula; empty when no call was needed.
    pub enumerator_output: Vec<String>,
    /// Decoded guesses; `None` for out-of-range decodings.
    pub triples: Vec<Option<GuessTriple>>,
    pub linkage: Option<Linkage>,
    pub resolved: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EnumCount {
    pub count: ModelCount,
    pub chain: Vec<Linkage>,
    pub steps: Vec<DescentStep>,
    pub oracle_calls: u64,
}

fn known(b: bool, gap: usize) -> BigUint {
    if b {
        pow2(gap)
    } else {
        BigUint::zero()
    }
}

/// Exact model count of `f` (over its own variables) from a 2-enumerator.
pub fn count_via_enumerator<H: TwoEnumerator>(f: &Formula, h: &H) -> Result<EnumCount> {
    let root = f.simplify();
    let lift = f.vars().len() - root.vars().len();
    let mut node = root;
    let mut chain: Vec<Linkage> = Vec::new();
    let mut steps = Vec::new();
    let mut calls = 0;
    let mut depth = 0;

    let mut count = loop {
        if let Some(b) = node.as_const() {
            break known(b, 0);
        }
        let k = node.vars().len();
        let split = node.self_reduce()?;
        let (lt, rt) = (split.if_true, split.if_false);
        let gap_l = k - 1 - lt.vars().len();
        let gap_r = k - 1 - rt.vars().len();
        let mut step = DescentStep {
            depth,
            formula: node.serialize(),
            left_child: lt.serialize(),
            right_child: rt.serialize(),
            enumerator_output: Vec::new(),
            triples: Vec::new(),
            linkage: None,
            resolved: None,
        };

        let triples: Vec<Option<GuessTriple>> = match (lt.as_const(), rt.as_const()) {
            (Some(x), Some(y)) => {
                let a = known(x, gap_l) + known(y, gap_r);
                step.resolved = Some(a.to_string());
                steps.push(step);
                break a;
            }
            (Some(x), None) | (None, Some(x)) => {
                let left_known = lt.is_const();
                let other = if left_known { &rt } else { &lt };
                let other_gap = if left_known { gap_r } else { gap_l };
                let recipe = combine(&node, other)?;
                let guesses = h.enumerate(&recipe.combined)?;
                calls += 1;
                step.enumerator_output = guesses.iter().map(|g| g.to_string()).collect();
                guesses
                    .iter()
                    .map(|g| {
                        let d = decode(&recipe, g);
                        d.in_range.then(|| {
                            let decoded = d.right << other_gap;
                            let fixed = known(x, if left_known { gap_l } else { gap_r });
                            if left_known {
                                GuessTriple { a: d.left, b: fixed, c: decoded }
                            } else {
                                GuessTriple { a: d.left, b: decoded, c: fixed }
                            }
                        })
                    })
                    .collect()
            }
            (None, None) => {
                let recipe = combine3(&node, &lt, &rt)?;
                let guesses = h.enumerate(recipe.combined())?;
                calls += 1;
                step.enumerator_output = guesses.iter().map(|g| g.to_string()).collect();
                guesses.iter().map(|g| decode3(&recipe, g)).collect()
            }
        };
        if triples.len() > 2 {
            return Err(Error::OracleContractViolation(format!("enumerator returned {} values", triples.len())));
        }
        step.triples = triples.clone();
        let valid: Vec<GuessTriple> = triples.into_iter().flatten().filter(GuessTriple::is_consistent).collect();

        match link_guesses(&valid)? {
            LinkDecision::Resolved(a) => {
                step.resolved = Some(a.to_string());
                steps.push(step);
                break a;
            }
            LinkDecision::Descend { side, mapping } => {
                let (child, gap) = match side {
                    Side::Left => (lt, gap_l),
                    Side::Right => (rt, gap_r),
                };
                let link = Linkage { side, child: child.clone(), mapping, depth, gap };
                step.linkage = Some(link.clone());
                steps.push(step);
                chain.push(link);
                node = child;
                depth += 1;
            }
        }
    };

    for link in chain.iter().rev() {
        let key = &count << link.gap;
        count = link
            .lookup(&key)
            .ok_or_else(|| {
                Error::OracleContractViolation(format!(
                    "child `{}` has {key} models, matching neither linked candidate",
                    link.child
                ))
            })?
            .clone();
    }
    Ok(EnumCount { count: count << lift, chain, steps, oracle_calls: calls })
}

/// One formula of a naive-failure witness with its brute-force count.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessNode {
    pub formula: String,
    /// Count over the node's scope (children: the root's variables minus `x1`).
    #[serde(serialize_with = "big_str")]
    pub count: BigUint,
    pub guesses: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Witness {
    pub root: WitnessNode,
    pub left: WitnessNode,
    pub right: WitnessNode,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NaiveFailureReport {
    pub witnesses: [Witness; 2],
    /// Every one of the six guess lists is `{0, 1}`.
    pub guess_sets_identical: bool,
    pub root_counts_differ: bool,
}

/// Two formulas whose root and children all receive the guesses `{0, 1}`
/// from a contract-respecting enumerator, yet whose roots have different
/// counts. Whatever is computed from those three guess pairs alone is
/// wrong on one of them.
pub fn demonstrate_naive_failure() -> Result<NaiveFailureReport> {
    let h = honest_two_enumerator(EnumeratorStyle::Woeginger, 0);
    let witness = |text: &str| -> Result<Witness> {
        let f = crate::parse::parse(text)?;
        let k = f.vars().len();
        let split = f.self_reduce()?;
        let node = |g: &Formula, scope: usize| -> Result<WitnessNode> {
            let own = brute_force_count(g)?;
            Ok(WitnessNode {
                formula: g.serialize(),
                count: own << (scope - g.vars().len()),
                guesses: h.enumerate(g)?.iter().map(|c| c.to_string()).collect(),
            })
        };
        Ok(Witness { root: node(&f, k)?, left: node(&split.if_true, k - 1)?, right: node(&split.if_false, k - 1)? })
    };
    let a = witness("x1 & !x1 & x2")?;
    let b = witness("!x1 & x2")?;
    let guess_sets_identical = [&a, &b]
        .iter()
        .flat_map(|w| [&w.root, &w.left, &w.right])
        .all(|n| n.guesses == ["0", "1"]);
    let root_counts_differ = a.root.count != b.root.count;
    Ok(NaiveFailureReport { witnesses: [a, b], guess_sets_identical, root_counts_differ })
}
