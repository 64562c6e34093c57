//! Read a DIMACS CNF instance and decide it with every decider.

use selfred::oracle::{honest_selector, honest_two_enumerator, simulated_sparse_coreduction, simulated_tally_reduction};
use selfred::oracle::{EnumeratorStyle, SparseStyle, TallyStyle};
use selfred::{count_via_enumerator, decide_via_selector, decide_via_sparse, decide_via_tally, parse_dimacs, SparseMode};

const INSTANCE: &str = "c pigeonhole-ish
p cnf 4 5
1 2 0
3 4 0
-1 -3 0
-2 -4 0
-1 -4 0
";

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let f = parse_dimacs(INSTANCE)?;
    println!("{f}");
    println!("selector: {}", decide_via_selector(&f, &honest_selector())?.0);
    println!("tally:    {}", decide_via_tally(&f, &simulated_tally_reduction(TallyStyle::Spread))?.0);
    let g = simulated_sparse_coreduction(SparseStyle::Scatter, 9);
    println!("sparse:   {}", decide_via_sparse(&f, &g, SparseMode::EarlyAccept)?.0);
    let h = honest_two_enumerator(EnumeratorStyle::Woeginger, 0);
    println!("models:   {}", count_via_enumerator(&f, &h)?.count);
    Ok(())
}
