//! Structural invariants of formulas, oracles and deciders, over random
//! formulas drawn through the corpus generator.

use std::collections::BTreeSet;

use num_bigint::BigUint;
use num_traits::One;
use proptest::prelude::*;

use selfred::corpus::generate_random;
use selfred::enumerate::{combine, GuessTriple};
use selfred::oracle::{
    adversarial_selector, census, honest_selector, honest_two_enumerator, simulated_sparse_coreduction,
    simulated_tally_reduction, EnumeratorStyle, PolynomialBound, Selector, SparseCoReduction, SparseStyle,
    TallyReduction, TallyStyle, TwoEnumerator,
};
use selfred::pruning::{decide_via_sparse, decide_via_tally, LevelStats, PruneKind, SparseMode};
use selfred::{brute_force_count, brute_force_sat, decide_via_selector, Formula};

fn formula(max_vars: usize) -> impl Strategy<Value = Formula> {
    (1..=max_vars, 0usize..12, any::<u64>())
        .prop_map(|(vars, extra, seed)| generate_random(vars, vars + 1 + extra, seed).unwrap())
}

fn tally_style() -> impl Strategy<Value = TallyStyle> {
    prop_oneof![Just(TallyStyle::Canonical), Just(TallyStyle::CollisionRich), Just(TallyStyle::Spread)]
}

fn sparse_style() -> impl Strategy<Value = SparseStyle> {
    prop_oneof![Just(SparseStyle::Singleton), Just(SparseStyle::Scatter)]
}

fn no_inner_constants(f: &Formula) -> bool {
    match f {
        Formula::Const(_) | Formula::Var(_) => true,
        Formula::Not(g) => !g.is_const() && no_inner_constants(g),
        Formula::And(gs) | Formula::Or(gs) => gs.iter().all(|g| !g.is_const() && no_inner_constants(g)),
    }
}

fn check_levels(stats: &LevelStats, tally: bool) -> Result<(), TestCaseError> {
    for (d, level) in stats.levels.iter().enumerate() {
        prop_assert!(level.post_prune_width <= level.pre_prune_width);
        if d > 0 {
            prop_assert!(level.pre_prune_width <= 2 * stats.levels[d - 1].post_prune_width);
        }
        let images: BTreeSet<&str> = level.nodes.iter().map(|n| n.image.as_str()).collect();
        prop_assert_eq!(images.len(), level.nodes.len());
        if !tally {
            prop_assert!(level.prune_events.iter().all(|e| e.kind != PruneKind::NonTally));
        }
    }
    Ok(())
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(300))]

    #[test]
    fn simplify_leaves_constants_only_at_the_root(f in formula(8)) {
        let s = f.simplify();
        prop_assert!(no_inner_constants(&s));
        prop_assert!(s.vars().is_subset(&f.vars()));
    }

    #[test]
    fn counts_lie_in_range(f in formula(10)) {
        let c = brute_force_count(&f).unwrap();
        prop_assert!(c <= BigUint::one() << f.vars().len());
        prop_assert_eq!(c, selfred::count_models(&f));
    }

    #[test]
    fn selectors_return_an_argument_and_keep_satisfiability(
        a in formula(6), b in formula(6), seed in any::<u64>()
    ) {
        let either = brute_force_sat(&a).unwrap() || brute_force_sat(&b).unwrap();
        let honest = honest_selector();
        let adversarial = adversarial_selector(seed);
        for sel in [&honest as &dyn Selector, &adversarial] {
            let pick = sel.select(&a, &b).unwrap();
            prop_assert!(pick == &a || pick == &b);
            if either {
                prop_assert!(brute_force_sat(pick).unwrap());
            }
            prop_assert_eq!(sel.calls(), 1);
        }
    }

    #[test]
    fn tally_images_track_satisfiability(f in formula(8), style in tally_style()) {
        let g = simulated_tally_reduction(style);
        let image = g.reduce(&f).unwrap();
        prop_assert_eq!(brute_force_sat(&f).unwrap(), g.in_target(&image));
        prop_assert!(!g.in_target(selfred::oracle::NON_TALLY_TOKEN));
        prop_assert_eq!(g.calls(), 1);
    }

    #[test]
    fn sparse_images_track_unsatisfiability(fs in prop::collection::vec(formula(8), 1..20), style in sparse_style(), seed in any::<u64>()) {
        let g = simulated_sparse_coreduction(style, seed);
        for f in &fs {
            let image = g.reduce(f).unwrap();
            prop_assert_eq!(!brute_force_sat(f).unwrap(), g.in_target(&image));
            prop_assert!(image.len() as u64 <= g.length_bound().eval(f.encoded_len() as u64));
            // same formula, same image
            prop_assert_eq!(g.reduce(f).unwrap(), image);
        }
        for n in 0..40 {
            prop_assert!(census(g.target_set(), n) as u64 <= g.census_bound().eval(n as u64));
        }
    }

    #[test]
    fn enumerators_list_the_true_count(f in formula(9), seed in any::<u64>()) {
        let c = brute_force_count(&f).unwrap();
        for style in [EnumeratorStyle::ExactPlusOffset, EnumeratorStyle::Woeginger] {
            let out = honest_two_enumerator(style, seed).enumerate(&f).unwrap();
            prop_assert!(out.contains(&c));
            prop_assert!(!out.is_empty() && out.len() <= 2);
            prop_assert!(out.windows(2).all(|w| w[0] < w[1]));
        }
    }

    #[test]
    fn polynomial_bounds_are_nondecreasing(coeffs in prop::collection::vec(0i64..50, 0..4), n in 0u64..1000) {
        let q = PolynomialBound::new(&coeffs).unwrap();
        prop_assert!(q.eval(n) <= q.eval(n + 1));
    }

    #[test]
    fn selector_paths_have_one_step_per_variable(f in formula(9), seed in any::<u64>()) {
        let (_, trace) = decide_via_selector(&f, &adversarial_selector(seed)).unwrap();
        prop_assert_eq!(trace.steps.len(), f.vars().len());
        prop_assert_eq!(trace.oracle_calls, trace.steps.len() as u64);
        let split: Vec<u32> = trace.steps.iter().map(|s| s.split_var).collect();
        prop_assert_eq!(split, f.vars().into_iter().collect::<Vec<_>>());
    }

    #[test]
    fn pruned_levels_are_distinct_and_narrowing(f in formula(9), t in tally_style(), s in sparse_style()) {
        let (_, stats) = decide_via_tally(&f, &simulated_tally_reduction(t)).unwrap();
        check_levels(&stats, true)?;
        for mode in [SparseMode::EarlyAccept, SparseMode::CappedContinue] {
            let (_, stats) = decide_via_sparse(&f, &simulated_sparse_coreduction(s, 0), mode).unwrap();
            check_levels(&stats, false)?;
        }
    }

    #[test]
    fn combined_operands_are_renamed_apart(a in formula(5), b in formula(5)) {
        let r = combine(&a, &b).unwrap();
        let (l, rv) = (r.renamed_left.vars(), r.renamed_right.vars());
        prop_assert!(l.is_disjoint(&rv));
        let (z, z2) = r.fresh_vars;
        prop_assert!(z != z2 && !l.contains(&z) && !rv.contains(&z) && !l.contains(&z2) && !rv.contains(&z2));
        let h = brute_force_count(&r.combined).unwrap();
        let expected = brute_force_count(&a).unwrap() * (BigUint::one() << (b.vars().len() + 1)) + brute_force_count(&b).unwrap();
        prop_assert_eq!(h, expected);
    }

    #[test]
    fn triples_are_consistent_exactly_when_they_add_up(a in 0u32..50, b in 0u32..50, c in 0u32..50) {
        prop_assert_eq!(GuessTriple::new(a, b, c).is_consistent(), a == b + c);
    }
}
