//! Exact model counting from an enumerator that returns two candidates, one
//! of them right.
//!
//!     cargo run --example enumerator_count -- "(x1 | x2) & (x3 | !x1) & x4"

use selfred::oracle::{honest_two_enumerator, EnumeratorStyle};
use selfred::{brute_force_count, count_via_enumerator, parse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "(x1 | x2) & (x3 | !x1) & x4".into());
    let f = parse(&text)?;
    println!("{f}: brute force {}", brute_force_count(&f)?);

    for (style, seed) in [(EnumeratorStyle::ExactPlusOffset, 1), (EnumeratorStyle::ExactPlusOffset, 2), (EnumeratorStyle::Woeginger, 0)] {
        let h = honest_two_enumerator(style, seed);
        let r = count_via_enumerator(&f, &h)?;
        println!("\n{style}/{seed}: {} in {} calls", r.count, r.oracle_calls);
        for step in &r.steps {
            let triples: Vec<String> = step
                .triples
                .iter()
                .map(|t| t.as_ref().map_or("out of range".into(), |t| format!("({}, {}, {})", t.a, t.b, t.c)))
                .collect();
            println!("  depth {} {}: {:?} -> {}", step.depth, step.formula, step.enumerator_output, triples.join(" "));
            if let Some(a) = &step.resolved {
                println!("    resolved: {a}");
            }
            if let Some(l) = &step.linkage {
                println!("    linked {:?} child {}: {:?}", l.side, l.child, l.mapping);
            }
        }
    }
    Ok(())
}
