//! Linkage descent under an enumerator whose wrong guess decodes to a
//! consistent triple, so nodes cannot be resolved on the spot.

use std::cell::Cell;
use std::collections::HashMap;

use num_bigint::BigUint;
use num_traits::One;

use selfred::corpus::random_corpus;
use selfred::enumerate::{combine, combine3, count_via_enumerator, Side};
use selfred::error::OracleError;
use selfred::oracle::TwoEnumerator;
use selfred::{brute_force_count, count_models, Formula};

/// Node, x=T child and x=F child, as the descent sees them.
type Split = (Formula, Formula, Formula);

/// Knows every combined formula the descent of one input can ask about and
/// answers with the true count plus a decoy that differs on one child.
struct Decoy {
    queries: HashMap<Formula, Split>,
    seed: u64,
    calls: Cell<u64>,
}

impl Decoy {
    fn new(f: &Formula, seed: u64) -> Decoy {
        let mut queries = HashMap::new();
        let mut stack = vec![f.simplify()];
        while let Some(node) = stack.pop() {
            if node.is_const() {
                continue;
            }
            let r = node.self_reduce().unwrap();
            let (lt, rt) = (r.if_true, r.if_false);
            let key = match (lt.is_const(), rt.is_const()) {
                (true, true) => None,
                (true, false) => Some(combine(&node, &rt).unwrap().combined),
                (false, true) => Some(combine(&node, &lt).unwrap().combined),
                (false, false) => Some(combine3(&node, &lt, &rt).unwrap().combined().clone()),
            };
            if let Some(key) = key {
                queries.insert(key, (node.clone(), lt.clone(), rt.clone()));
            }
            stack.extend([lt, rt]);
        }
        Decoy { queries, seed, calls: Cell::new(0) }
    }

    fn decoy(&self, (node, lt, rt): &Split) -> Option<BigUint> {
        let one = BigUint::one;
        let a = count_models(node);
        let k = node.vars().len();
        // shift the node and one non-constant child by one raw model
        let mut options = Vec::new();
        for (child, other, left) in [(lt, rt, true), (rt, lt, false)] {
            if child.is_const() {
                continue;
            }
            let raw = count_models(child);
            let gap = k - 1 - child.vars().len();
            let step = one() << gap;
            let encode = |a2: BigUint, raw2: BigUint| -> BigUint {
                if other.is_const() {
                    let r = combine(node, child).unwrap();
                    (a2 << (r.right_var_count + 1)) + raw2
                } else {
                    let r = combine3(node, lt, rt).unwrap();
                    let (l_raw, r_raw) = if left {
                        (raw2, count_models(rt))
                    } else {
                        (count_models(lt), raw2)
                    };
                    let inner = (l_raw << (r.inner.right_var_count + 1)) + r_raw;
                    (a2 << (r.outer.right_var_count + 1)) + inner
                }
            };
            if raw < one() << child.vars().len() && &a + &step <= one() << k {
                options.push(encode(&a + &step, &raw + 1u8));
            }
            if raw >= one() && a >= step {
                options.push(encode(&a - &step, &raw - 1u8));
            }
        }
        if options.is_empty() {
            return None;
        }
        let pick = (self.seed as usize + self.calls.get() as usize) % options.len();
        Some(options.swap_remove(pick))
    }
}

impl TwoEnumerator for Decoy {
    fn enumerate(&self, f: &Formula) -> Result<Vec<BigUint>, OracleError> {
        self.calls.set(self.calls.get() + 1);
        let split = self.queries.get(f).ok_or_else(|| OracleError::Failed(format!("unexpected query {f}")))?;
        let c = count_models(f);
        let mut out = vec![c.clone(), self.decoy(split).unwrap_or(&c + 1u8)];
        out.sort();
        Ok(out)
    }
    fn calls(&self) -> u64 {
        self.calls.get()
    }
}

#[test]
fn descent_and_ripple_back_recover_exact_counts() {
    let mut linkages = 0;
    let mut sides = [0, 0];
    for f in random_corpus(300, 7, 11) {
        for seed in 0..3 {
            let h = Decoy::new(&f, seed);
            let r = count_via_enumerator(&f, &h).unwrap();
            assert_eq!(r.count, brute_force_count(&f).unwrap(), "{f}");
            assert!(r.oracle_calls <= f.vars().len() as u64 + 1);
            for link in &r.chain {
                assert_ne!(link.mapping[0].0, link.mapping[1].0);
                assert_ne!(link.mapping[0].1, link.mapping[1].1);
                sides[(link.side == Side::Right) as usize] += 1;
            }
            linkages += r.chain.len();
        }
    }
    assert!(linkages > 100, "only {linkages} linkages");
    assert!(sides[0] > 0 && sides[1] > 0, "descended {sides:?}");
}

#[test]
fn every_linked_child_count_is_a_decoded_candidate() {
    for f in random_corpus(100, 6, 12) {
        let h = Decoy::new(&f, 1);
        let r = count_via_enumerator(&f, &h).unwrap();
        // the true count of each linked child is one of its two keys
        for link in &r.chain {
            let truth = brute_force_count(&link.child).unwrap() << link.gap;
            assert!(link.lookup(&truth).is_some(), "{}", link.child);
        }
    }
}
