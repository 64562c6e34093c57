//! Level-by-level pruning with a reduction of SAT to a tally set. Nodes that
//! map to a non-tally string are unsatisfiable, and nodes with the same
//! image stand or fall together, so each level keeps at most one node per
//! image.

use selfred::corpus::generate_random;
use selfred::oracle::{simulated_tally_reduction, TallyStyle};
use selfred::pruning::PruneKind;
use selfred::{brute_force_sat, decide_via_tally};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = generate_random(10, 26, 4)?;
    println!("{f}\n");
    for style in [TallyStyle::Canonical, TallyStyle::CollisionRich, TallyStyle::Spread] {
        let (sat, stats) = decide_via_tally(&f, &simulated_tally_reduction(style))?;
        assert_eq!(sat, brute_force_sat(&f)?);
        println!("{style}: {sat}, {} oracle calls", stats.oracle_calls);
        for level in &stats.levels {
            let non_tally = level.prune_events.iter().filter(|e| e.kind == PruneKind::NonTally).count();
            println!(
                "  depth {:>2}: {:>2} -> {} nodes ({} non-tally, {} duplicate)",
                level.depth,
                level.pre_prune_width,
                level.post_prune_width,
                non_tally,
                level.prune_events.len() - non_tally
            );
        }
    }
    Ok(())
}
