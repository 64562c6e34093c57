//! Acceptance suite. Runs every criterion, prints one PASS/FAIL line each,
//! and exits nonzero if any failed.

use std::path::Path;
use std::process::Command;
use std::time::{Duration, Instant};

use num_bigint::BigUint;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use selfred::corpus::{exhaustive_asts, generate_random, random_corpus};
use selfred::count::{brute_force_count, brute_force_sat, count_in_scope};
use selfred::enumerate::{combine, count_via_enumerator, decode, demonstrate_naive_failure, link_guesses};
use selfred::enumerate::{GuessTriple, LinkDecision, Side};
use selfred::oracle::{
    adversarial_selector, honest_selector, honest_two_enumerator, is_tally, simulated_sparse_coreduction,
    simulated_tally_reduction, EnumeratorStyle, Selector, SparseStyle, TallyStyle,
};
use selfred::pruning::{decide_via_sparse, decide_via_tally, Outcome, SparseMode};
use selfred::{decide_via_selector, Formula};

const SEEDS: [u64; 5] = [1, 2, 3, 4, 5];

type Check = Result<String, String>;
type Criterion<'a> = (&'static str, Box<dyn Fn() -> Check + 'a>);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Exhaustive ASTs with at most 3 variables and 7 nodes, plus 500 random
/// formulas with at most 10 variables.
fn corpus() -> Vec<Formula> {
    let mut all = exhaustive_asts(3, 7);
    all.extend(random_corpus(500, 10, 20_261_018));
    all
}

fn timed(limit: Duration, body: impl FnOnce() -> Check) -> Check {
    let started = Instant::now();
    let detail = body()?;
    let elapsed = started.elapsed();
    ensure(elapsed < limit, || format!("took {elapsed:.1?}, limit {limit:?}"))?;
    Ok(format!("{detail} in {elapsed:.2?}"))
}

fn self_reducibility(corpus: &[Formula]) -> Check {
    let mut checked = 0;
    for f in corpus {
        if f.vars().is_empty() {
            continue;
        }
        let r = f.self_reduce().map_err(|e| e.to_string())?;
        let sat = |g: &Formula| brute_force_sat(g).unwrap();
        let count = |g: &Formula| brute_force_count(g).unwrap();
        ensure(sat(f) == (sat(&r.if_true) || sat(&r.if_false)), || format!("sat split fails on {f}"))?;
        let scope = r.rest.len();
        let children = count_in_scope(&r.if_true, &count(&r.if_true), scope)
            + count_in_scope(&r.if_false, &count(&r.if_false), scope);
        ensure(count(f) == children, || format!("count split fails on {f}"))?;
        checked += 1;
    }
    Ok(format!("{checked} formulas"))
}

fn selector_criterion(corpus: &[Formula]) -> Check {
    let mut runs = 0;
    let check = |f: &Formula, sel: &dyn Selector| -> Result<(), String> {
        let (v, trace) = decide_via_selector(f, &sel).map_err(|e| e.to_string())?;
        ensure(v == brute_force_sat(f).unwrap(), || format!("wrong verdict on {f}"))?;
        ensure(trace.oracle_calls == f.vars().len() as u64, || {
            format!("{} calls on {f}, expected {}", trace.oracle_calls, f.vars().len())
        })?;
        if v {
            ensure(f.evaluate(&trace.assignment()) == Ok(true), || format!("path does not satisfy {f}"))?;
        }
        Ok(())
    };
    for f in corpus {
        check(f, &honest_selector())?;
        for seed in SEEDS {
            check(f, &adversarial_selector(seed))?;
        }
        runs += 1 + SEEDS.len();
    }
    Ok(format!("{runs} runs"))
}

fn tally_criterion(corpus: &[Formula]) -> Check {
    let mut runs = 0;
    for style in [TallyStyle::Canonical, TallyStyle::CollisionRich, TallyStyle::Spread] {
        for f in corpus {
            let g = simulated_tally_reduction(style);
            let (v, stats) = decide_via_tally(f, &g).map_err(|e| e.to_string())?;
            ensure(v == brute_force_sat(f).unwrap(), || format!("{style}: wrong verdict on {f}"))?;
            let mut longest = 0;
            for level in &stats.levels {
                for n in &level.nodes {
                    ensure(is_tally(&n.image), || format!("{style}: non-tally survivor on {f}"))?;
                    longest = longest.max(n.image.len());
                }
                ensure(level.post_prune_width <= 1 + longest, || {
                    format!("{style}: width {} > 1 + {longest} on {f}", level.post_prune_width)
                })?;
            }
            runs += 1;
        }
    }
    Ok(format!("{runs} runs"))
}

fn sparse_criterion(corpus: &[Formula]) -> Check {
    let (mut runs, mut early) = (0, 0);
    for style in [SparseStyle::Singleton, SparseStyle::Scatter] {
        for seed in SEEDS {
            for f in corpus {
                let truth = brute_force_sat(f).unwrap();
                let mut verdicts = Vec::new();
                for mode in [SparseMode::EarlyAccept, SparseMode::CappedContinue] {
                    let g = simulated_sparse_coreduction(style, seed);
                    let (v, stats) = decide_via_sparse(f, &g, mode).map_err(|e| e.to_string())?;
                    ensure(v == truth, || format!("{style}/{mode}: wrong verdict on {f}"))?;
                    if stats.outcome == Outcome::EarlySat {
                        early += 1;
                        ensure(truth, || format!("{style}: early accept on unsatisfiable {f}"))?;
                    }
                    let w = stats.threshold.unwrap();
                    if !stats.levels.iter().any(|l| l.threshold_crossed) {
                        ensure(stats.levels.iter().all(|l| l.post_prune_width as u64 <= w), || {
                            format!("{style}/{mode}: width above q(r(m)) = {w} on {f}")
                        })?;
                        let k = f.vars().len() as u64;
                        ensure(stats.oracle_calls <= 2 * (w + 1) * k + 1, || {
                            format!("{style}/{mode}: {} calls on {f}", stats.oracle_calls)
                        })?;
                    }
                    verdicts.push(v);
                    runs += 1;
                }
                ensure(verdicts[0] == verdicts[1], || format!("{style}: modes disagree on {f}"))?;
            }
        }
    }
    Ok(format!("{runs} runs, {early} early accepts"))
}

/// Wide satisfiable formulas whose levels outgrow `q(r(m))`, so the early
/// accept path is exercised as well. `x1&x(n+1) | ... | xn&x2n` has 2^n
/// distinct restrictions at depth n.
fn sparse_early_accept() -> Check {
    let mut early = 0;
    let sizes = 6..=9;
    for n in sizes.clone() {
        let terms: Vec<String> = (1..=n).map(|i| format!("x{i} & x{}", i + n)).collect();
        let f = selfred::parse(&terms.join(" | ")).unwrap();
        let truth = brute_force_sat(&f).unwrap();
        let g = simulated_sparse_coreduction(SparseStyle::Singleton, 0);
        let (v, stats) = decide_via_sparse(&f, &g, SparseMode::EarlyAccept).map_err(|e| e.to_string())?;
        ensure(v == truth, || format!("wrong verdict on {f}"))?;
        if stats.outcome == Outcome::EarlySat {
            early += 1;
            let last = stats.levels.last().unwrap();
            ensure(last.pre_prune_width as u64 > stats.threshold.unwrap(), || "early accept below threshold".into())?;
        }
        let g = simulated_sparse_coreduction(SparseStyle::Singleton, 0);
        let (capped, stats) = decide_via_sparse(&f, &g, SparseMode::CappedContinue).map_err(|e| e.to_string())?;
        ensure(capped == v, || format!("modes disagree on {f}"))?;
        let w = stats.threshold.unwrap();
        ensure(stats.levels.iter().all(|l| l.post_prune_width as u64 <= w + 1), || "capped level above W + 1".into())?;
    }
    ensure(early > 0, || "no formula crossed the threshold".into())?;
    Ok(format!("{early}/{} wide formulas accepted early", sizes.count()))
}

fn combiner_criterion() -> Check {
    let parse = |s: &str| selfred::parse(s).unwrap();
    let worked = combine(&parse("x1"), &parse("x1 | x2")).map_err(|e| e.to_string())?;
    let c = brute_force_count(&worked.combined).unwrap();
    ensure(c == BigUint::from(11u8), || format!("worked pair combined to {c}"))?;
    let d = decode(&worked, &c);
    ensure((d.left, d.right) == (1u8.into(), 3u8.into()), || "worked pair decodes wrongly".into())?;

    let mut rng = ChaCha8Rng::seed_from_u64(5);
    for _ in 0..200 {
        let mut pick = || {
            let vars = rng.gen_range(1..=6);
            generate_random(vars, rng.gen_range(vars + 1..=3 * vars + 1), rng.gen()).unwrap()
        };
        let (f, g) = (pick(), pick());
        let r = combine(&f, &g).map_err(|e| e.to_string())?;
        let (cf, cg) = (brute_force_count(&f).unwrap(), brute_force_count(&g).unwrap());
        let ch = brute_force_count(&r.combined).unwrap();
        ensure(ch == &cf * (BigUint::from(1u8) << (r.right_var_count + 1)) + &cg, || {
            format!("identity fails on ({f}, {g})")
        })?;
        let d = decode(&r, &ch);
        ensure(d.in_range && d.left == cf && d.right == cg, || format!("decode fails on ({f}, {g})"))?;
    }
    Ok("worked pair 11 -> (1, 3) and 200 random pairs".into())
}

fn enumerator_criterion(corpus: &[Formula]) -> Check {
    let mut runs = 0;
    let mut linked = 0;
    let mut configs: Vec<(EnumeratorStyle, u64)> =
        SEEDS.iter().map(|&s| (EnumeratorStyle::ExactPlusOffset, s)).collect();
    configs.push((EnumeratorStyle::Woeginger, 0));
    for (style, seed) in configs {
        for f in corpus {
            let h = honest_two_enumerator(style, seed);
            let r = count_via_enumerator(f, &h).map_err(|e| format!("{style}/{seed} on {f}: {e}"))?;
            ensure(r.count == brute_force_count(f).unwrap(), || format!("{style}/{seed}: wrong count on {f}"))?;
            ensure(r.oracle_calls <= f.vars().len() as u64 + 1, || format!("too many calls on {f}"))?;
            for link in &r.chain {
                ensure(link.mapping[0].0 != link.mapping[1].0 && link.mapping[0].1 != link.mapping[1].1, || {
                    format!("linkage not injective on {f}")
                })?;
            }
            linked += r.chain.len();
            runs += 1;
        }
    }
    Ok(format!("{runs} runs, {linked} linkages"))
}

fn linkage_table() -> Check {
    let first = GuessTriple::new(100u8, 83u8, 17u8);
    let second = GuessTriple::new(101u8, 85u8, 16u8);
    let n = |v: u8| BigUint::from(v);
    match link_guesses(&[first, second]).map_err(|e| e.to_string())? {
        LinkDecision::Descend { side: Side::Right, mapping } if mapping == [(n(17), n(100)), (n(16), n(101))] => {
            Ok("right child: 17 -> 100, 16 -> 101".into())
        }
        other => Err(format!("unexpected link {other:?}")),
    }
}

fn naive_failure() -> Check {
    let r = demonstrate_naive_failure().map_err(|e| e.to_string())?;
    ensure(r.guess_sets_identical, || "guess sets differ".into())?;
    let [a, b] = &r.witnesses;
    for w in [a, b] {
        for node in [&w.root, &w.left, &w.right] {
            ensure(node.guesses == ["0", "1"], || format!("guesses {:?}", node.guesses))?;
        }
        // recheck the stored counts from scratch
        let f = selfred::parse(&w.root.formula).unwrap();
        ensure(brute_force_count(&f).unwrap() == w.root.count, || "root count mismatch".into())?;
    }
    ensure(a.root.count == 0u8.into() && b.root.count == 1u8.into(), || "root counts are not 0 and 1".into())?;
    ensure(
        (a.left.count.clone(), a.right.count.clone()) == (0u8.into(), 0u8.into())
            && (b.left.count.clone(), b.right.count.clone()) == (0u8.into(), 1u8.into()),
        || "child counts differ from (0,0) / (0,1)".into(),
    )?;
    Ok(format!("`{}` (0) vs `{}` (1)", a.root.formula, b.root.formula))
}

fn run_cli(dir: &Path, tag: &str, args: &[&str]) -> Result<(Vec<u8>, Vec<u8>), String> {
    let trace = dir.join(format!("{tag}.jsonl"));
    let summary = dir.join(format!("{tag}.csv"));
    let status = Command::new(env!("CARGO_BIN_EXE_selfred"))
        .args(args)
        .arg("--trace")
        .arg(&trace)
        .arg("--summary")
        .arg(&summary)
        .output()
        .map_err(|e| e.to_string())?;
    ensure(status.status.success(), || {
        format!("{args:?} exited with {}: {}", status.status, String::from_utf8_lossy(&status.stderr))
    })?;
    Ok((std::fs::read(&trace).unwrap(), std::fs::read(&summary).unwrap()))
}

fn determinism() -> Check {
    let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
    let experiments: [&[&str]; 6] = [
        &["decide", "selector", "--random", "vars=8", "count=60", "seed=3", "--oracle", "adversarial", "--seed", "4"],
        &["decide", "tally", "--random", "vars=8", "count=60", "seed=3", "--oracle", "spread"],
        &["decide", "sparse", "--random", "vars=8", "count=100", "seed=3", "--oracle", "scatter", "--verify"],
        &["decide", "sparse", "--random", "vars=9", "count=40", "seed=1", "--mode", "capped_continue"],
        &["count", "enum", "--random", "vars=7", "count=40", "seed=9", "--oracle", "woeginger"],
        &["count", "enum", "--inline", "x1 | x2", "--oracle", "exact_plus_offset", "--seed", "7", "--verify"],
    ];
    for (i, args) in experiments.iter().enumerate() {
        let first = run_cli(dir.path(), &format!("{i}a"), args)?;
        let second = run_cli(dir.path(), &format!("{i}b"), args)?;
        ensure(!first.0.is_empty() && !first.1.is_empty(), || format!("{args:?} wrote empty output"))?;
        ensure(first == second, || format!("{args:?} is not reproducible"))?;
    }
    Ok(format!("{} experiments reproduced byte for byte", experiments.len()))
}

fn main() {
    let corpus = corpus();
    let criteria: Vec<Criterion> = vec![
        ("1 self-reducibility", Box::new(|| timed(Duration::from_secs(10), || self_reducibility(&corpus)))),
        ("2 selector decider", Box::new(|| timed(Duration::from_secs(30), || selector_criterion(&corpus)))),
        ("3 tally decider", Box::new(|| timed(Duration::from_secs(60), || tally_criterion(&corpus)))),
        ("4 sparse decider", Box::new(|| timed(Duration::from_secs(60), || sparse_criterion(&corpus)))),
        ("4 sparse early accept", Box::new(sparse_early_accept)),
        ("5 combiner identity", Box::new(|| timed(Duration::from_secs(30), combiner_criterion))),
        ("6 enumerator counting", Box::new(|| timed(Duration::from_secs(120), || enumerator_criterion(&corpus)))),
        ("7 worked linkage table", Box::new(linkage_table)),
        ("8 naive-failure witnesses", Box::new(naive_failure)),
        ("9 CLI determinism", Box::new(determinism)),
    ];
    let mut failed = 0;
    for (name, check) in &criteria {
        match check() {
            Ok(detail) => println!("PASS  criterion {name}: {detail}"),
            Err(why) => {
                failed += 1;
                println!("FAIL  criterion {name}: {why}");
            }
        }
    }
    println!("{} of {} criteria passed", criteria.len() - failed, criteria.len());
    if failed > 0 {
        std::process::exit(1);
    }
}
