//! Decide a formula by following one path chosen by a selector.
//!
//!     cargo run --example selector_walk -- "(x1 & x2 & !x3) | (x4 & !x4)"

use selfred::oracle::{adversarial_selector, honest_selector};
use selfred::{decide_via_selector, parse};

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let text = std::env::args().nth(1).unwrap_or_else(|| "(x1 & x2 & !x3) | (x4 & !x4)".into());
    let f = parse(&text)?;

    let (sat, trace) = decide_via_selector(&f, &honest_selector())?;
    println!("{f}: {} after {} selector calls", if sat { "sat" } else { "unsat" }, trace.oracle_calls);
    for step in &trace.steps {
        println!("  x{} = {:<5}  ->  {}", step.split_var, step.branch, step.formula);
    }
    if sat {
        println!("assignment {:?} evaluates to {}", trace.assignment(), f.evaluate(&trace.assignment())?);
    }

    // a selector that picks at random whenever both children are satisfiable
    // still lands on a model
    let g = parse("(x1 | x2) & (x3 | !x4)")?;
    println!("\n{g}");
    for seed in 0..4 {
        let (v, t) = decide_via_selector(&g, &adversarial_selector(seed))?;
        let path: Vec<_> = t.steps.iter().map(|s| if s.branch { 'T' } else { 'F' }).collect();
        println!("seed {seed}: {v} via {}", path.into_iter().collect::<String>());
    }
    Ok(())
}
