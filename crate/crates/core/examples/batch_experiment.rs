//! Run a random batch through the harness and write the JSONL trace and CSV
//! summary, as the CLI does.

use selfred::harness::{all_agree, run, Algorithm, ExperimentConfig, InputSource, OracleStyle};
use selfred::oracle::SparseStyle;

fn main() -> Result<(), Box<dyn std::error::Error>> {
    let out = std::env::temp_dir().join("selfred-batch");
    std::fs::create_dir_all(&out)?;

    let input = InputSource::Random { vars: 9, node_budget: 27, seed: 3, count: 50 };
    let mut config = ExperimentConfig::new(Algorithm::Sparse, OracleStyle::Sparse(SparseStyle::Scatter), input);
    config.trace = Some(out.join("trace.jsonl"));
    config.summary = Some(out.join("summary.csv"));

    let records = run(&config)?;
    let widest = records.iter().filter_map(|r| r.max_width).max().unwrap_or(0);
    println!("{} formulas, all agree: {}, widest level {widest}", records.len(), all_agree(&records));
    println!("wrote {}", out.display());
    Ok(())
}
