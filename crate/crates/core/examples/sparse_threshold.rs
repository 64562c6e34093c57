//! Pruning with a reduction of unsatisfiability to a sparse set. Duplicate
//! images are merged as in the tally case. A level with more distinct images
//! than the sparse set has strings of bounded length must contain a
//! satisfiable node, so `early_accept` stops there while `capped_continue`
//! keeps going on a truncated level.

use selfred::oracle::{simulated_sparse_coreduction, SparseStyle};
use selfred::{decide_via_sparse, parse, SparseMode};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    // each restriction of x1..x8 leaves a different disjunction
    let terms: Vec<String> = (1..=8).map(|i| format!("x{i} & x{}", i + 8)).collect();
    let f = parse(&terms.join(" | "))?;
    println!("{f}  (m = {})", f.encoded_len());

    for mode in [SparseMode::EarlyAccept, SparseMode::CappedContinue] {
        let g = simulated_sparse_coreduction(SparseStyle::Singleton, 0);
        let (sat, stats) = decide_via_sparse(&f, &g, mode)?;
        println!("\n{mode}: {sat} ({:?}), threshold q(r(m)) = {}", stats.outcome, stats.threshold.unwrap_or(0));
        for level in &stats.levels {
            let mark = if level.threshold_crossed { "  crossed" } else { "" };
            println!("  depth {:>2}: {:>3} -> {:>3}{mark}", level.depth, level.pre_prune_width, level.post_prune_width);
        }
        println!("  {} oracle calls", stats.oracle_calls);
    }
    Ok(())
}
