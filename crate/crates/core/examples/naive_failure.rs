//! Querying the enumerator on a node and its children separately gives
//! three unrelated guess pairs. Two formulas with different counts can
//! receive identical guesses everywhere, so nothing links them.

use selfred::demonstrate_naive_failure;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let report = demonstrate_naive_failure()?;
    for w in &report.witnesses {
        println!("{} has {} models", w.root.formula, w.root.count);
        for node in [&w.root, &w.left, &w.right] {
            println!("  {:<16} count {}  guesses {:?}", node.formula, node.count, node.guesses);
        }
    }
    println!("identical guesses: {}, counts differ: {}", report.guess_sets_identical, report.root_counts_differ);
    Ok(())
}
