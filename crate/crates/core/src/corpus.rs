//! Test corpora: seeded random formulas and exhaustive enumeration of small
//! ASTs.

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::formula::{Formula, Var};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("invalid generator parameters: {0}")]
    InvalidParams(String),
}

/// Random formula in which every one of `x1..=x{vars}` occurs, with at most
/// `node_budget` AST nodes. Deterministic in `seed`.
///
/// A formula over `v ≥ 2` variables needs at least `v + 1` nodes (one n-ary
/// connective over the literals), so `node_budget` must be at least that.
pub fn generate_random(vars: usize, node_budget: usize, seed: u64) -> Result<Formula, GenerateError> {
    if vars == 0 {
        return Err(GenerateError::InvalidParams("vars must be at least 1".into()));
    }
    if vars > Var::MAX as usize {
        return Err(GenerateError::InvalidParams(format!("vars {vars} exceeds index range")));
    }
    let minimum = if vars == 1 { 1 } else { vars + 1 };
    if node_budget < minimum {
        return Err(GenerateError::InvalidParams(format!(
            "node budget {node_budget} below minimum {minimum} for {vars} variables"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);

    // 2L - 1 nodes suffice for a binary tree over L leaves
    let max_extra = node_budget.div_ceil(2).saturating_sub(vars);
    let extra = rng.gen_range(0..=max_extra.min(vars));
    let mut items: Vec<Formula> = (1..=vars as Var).map(Formula::Var).collect();
    items.extend((0..extra).map(|_| Formula::Var(rng.gen_range(1..=vars as Var))));
    items.shuffle(&mut rng);

    let mut spare = node_budget - items.len();
    let merges = items.len() - 1;
    for item in items.iter_mut() {
        // keep enough budget for binary merges all the way up
        if spare > merges && rng.gen_bool(0.3) {
            *item = Formula::not(std::mem::replace(item, Formula::Const(false)));
            spare -= 1;
        }
    }

    while items.len() > 1 {
        let c = items.len();
        // after merging `a` items, `spare - 1 >= c - a` keeps the rest feasible
        let min_arity = (c + 1).saturating_sub(spare).max(2);
        let arity = rng.gen_range(min_arity..=(min_arity + 1).min(c));
        let mut group = Vec::with_capacity(arity);
        for _ in 0..arity {
            let i = rng.gen_range(0..items.len());
            group.push(items.swap_remove(i));
        }
        let mut node = if rng.gen_bool(0.5) { Formula::And(group) } else { Formula::Or(group) };
        spare -= 1;
        if spare > items.len() && rng.gen_bool(0.25) {
            node = Formula::not(node);
            spare -= 1;
        }
        items.push(node);
    }
    Ok(items.pop().unwrap())
}

/// `count` random formulas with between 1 and `max_vars` variables and a
/// node budget between `v + 1` and `4v`.
pub fn random_corpus(count: usize, max_vars: usize, seed: u64) -> Vec<Formula> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|_| {
            let vars = rng.gen_range(1..=max_vars);
            let budget = rng.gen_range(vars + 1..=4 * vars.max(2));
            generate_random(vars, budget, rng.gen()).expect("parameters are in range")
        })
        .collect()
}

/// Every AST with at most `max_nodes` nodes over the constants and the
/// variables `x1..=x{max_vars}`, using unary `!` and binary `&`, `|`.
pub fn exhaustive_asts(max_vars: usize, max_nodes: usize) -> Vec<Formula> {
    let mut by_size: Vec<Vec<Formula>> = vec![Vec::new(); max_nodes + 1];
    if max_nodes == 0 {
        return Vec::new();
    }
    by_size[1].extend([Formula::Const(true), Formula::Const(false)]);
    by_size[1].extend((1..=max_vars as Var).map(Formula::Var));
    for size in 2..=max_nodes {
        let mut level: Vec<Formula> = by_size[size - 1].iter().cloned().map(Formula::not).collect();
        for left_size in 1..size - 1 {
            let right_size = size - 1 - left_size;
            for l in &by_size[left_size] {
                for r in &by_size[right_size] {
                    level.push(Formula::And(vec![l.clone(), r.clone()]));
                    level.push(Formula::Or(vec![l.clone(), r.clone()]));
                }
            }
        }
        by_size[size] = level;
    }
    by_size.into_iter().flatten().collect()
}
