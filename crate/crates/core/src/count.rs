//! Exact model counting.
//!
//! [`brute_force_count`] enumerates every assignment and is the reference
//! that every other result is checked against. [`count_models`] walks the
//! self-reducibility tree instead, collapsing subtrees whose formula has
//! simplified to a constant; the simulated enumerators use it because the
//! combined formulas they see have far more variables than exhaustive
//! enumeration can handle.

use num_bigint::BigUint;
use num_traits::{One, Zero};

use crate::error::CountError;
use crate::formula::Formula;

/// Number of satisfying assignments over the formula's own variables.
pub type ModelCount = BigUint;

/// Default cap on variables for exhaustive enumeration.
pub const DEFAULT_BRUTE_LIMIT: usize = 24;

pub fn brute_force_count(f: &Formula) -> Result<ModelCount, CountError> {
    brute_force_count_with_limit(f, DEFAULT_BRUTE_LIMIT)
}

pub fn brute_force_sat(f: &Formula) -> Result<bool, CountError> {
    brute_force_sat_with_limit(f, DEFAULT_BRUTE_LIMIT)
}

pub fn brute_force_count_with_limit(f: &Formula, limit: usize) -> Result<ModelCount, CountError> {
    let mut count: u64 = 0;
    enumerate(f, limit, |sat| {
        count += sat as u64;
        false
    })?;
    Ok(BigUint::from(count))
}

pub fn brute_force_sat_with_limit(f: &Formula, limit: usize) -> Result<bool, CountError> {
    let mut found = false;
    enumerate(f, limit, |sat| {
        found |= sat;
        sat
    })?;
    Ok(found)
}

/// Visit every assignment in counting order; `visit` returns true to stop.
fn enumerate(f: &Formula, limit: usize, mut visit: impl FnMut(bool) -> bool) -> Result<(), CountError> {
    let vars: Vec<usize> = f.vars().into_iter().map(|v| v as usize).collect();
    if vars.len() > limit || vars.len() >= 64 {
        return Err(CountError::TooLarge { vars: vars.len(), limit });
    }
    let width = vars.last().map_or(0, |v| v + 1);
    let mut values = vec![false; width];
    for bits in 0u64..(1u64 << vars.len()) {
        for (i, &v) in vars.iter().enumerate() {
            values[v] = bits >> i & 1 == 1;
        }
        if visit(f.eval_dense(&values)) {
            break;
        }
    }
    Ok(())
}

/// Exact count by Shannon expansion on the least variable, with constant
/// propagation after every split. No variable limit.
pub fn count_models(f: &Formula) -> ModelCount {
    let k = f.vars().len();
    count_simplified(&f.simplify(), k)
}

fn count_simplified(f: &Formula, k: usize) -> ModelCount {
    match f {
        Formula::Const(true) => BigUint::one() << k,
        Formula::Const(false) => BigUint::zero(),
        _ => {
            let r = f.self_reduce().expect("non-constant formula has a variable");
            count_simplified(&r.if_true, k - 1) + count_simplified(&r.if_false, k - 1)
        }
    }
}

/// Lift a count over the formula's own variables to a count over a scope of
/// `scope_size` variables containing them.
pub fn count_in_scope(f: &Formula, own_count: &ModelCount, scope_size: usize) -> ModelCount {
    let own = f.vars().len();
    assert!(own <= scope_size, "scope smaller than the formula's variable set");
    own_count << (scope_size - own)
}
