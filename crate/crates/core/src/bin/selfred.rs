use std::fmt;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};

use selfred::corpus::generate_random;
use selfred::harness::{
    all_agree, brute_limit_from_env, run, Algorithm, ExperimentConfig, HarnessError, InputSource, OracleStyle,
};
use selfred::pruning::SparseMode;

#[derive(Parser)]
#[command(name = "selfred", version, about = "Self-reducibility tree pruning with simulated oracles")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Decide satisfiability with one of the pruning deciders.
    Decide {
        #[arg(value_enum)]
        algorithm: DecideAlgorithm,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Count models.
    Count {
        #[arg(value_enum)]
        algorithm: CountAlgorithm,
        #[command(flatten)]
        run: RunArgs,
    },
    /// Demonstrations.
    Demo {
        #[arg(value_enum)]
        which: Demo,
    },
    /// Print random formulas, one per line.
    Gen {
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        budget: Option<usize>,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, default_value_t = 1)]
        count: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum DecideAlgorithm {
    Selector,
    Tally,
    Sparse,
}

#[derive(Clone, Copy, ValueEnum)]
enum CountAlgorithm {
    Enum,
}

#[derive(Clone, Copy, ValueEnum)]
enum Demo {
    NaiveFailure,
}

#[derive(Args)]
struct RunArgs {
    /// A single formula, e.g. "x1 & !x1".
    #[arg(long, group = "input")]
    inline: Option<String>,
    /// Formula-per-line file, or DIMACS CNF when the name ends in `.cnf`.
    #[arg(long, group = "input")]
    file: Option<PathBuf>,
    /// Random formulas: vars=N count=N seed=N [budget=N].
    #[arg(long, group = "input", num_args = 1.., value_name = "KEY=VALUE")]
    random: Option<Vec<String>>,
    /// Oracle style; defaults per algorithm.
    #[arg(long)]
    oracle: Option<String>,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value = "early_accept")]
    mode: SparseMode,
    /// Check every result against brute force (default).
    #[arg(long, overrides_with = "no_verify")]
    verify: bool,
    #[arg(long)]
    no_verify: bool,
    /// JSONL trace output.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// CSV summary output.
    #[arg(long)]
    summary: Option<PathBuf>,
}

/// `println!` that exits quietly when the reader has gone away.
fn emit(line: fmt::Arguments) {
    let mut out = io::stdout().lock();
    if let Err(e) = out.write_fmt(line).and_then(|_| out.write_all(b"\n")) {
        if e.kind() == io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

fn random_source(items: &[String]) -> Result<InputSource, HarnessError> {
    let (mut vars, mut count, mut seed, mut budget) = (None, 1, 0, None);
    for item in items {
        let (k, v) = item
            .split_once('=')
            .ok_or_else(|| HarnessError::Config(format!("expected KEY=VALUE, got `{item}`")))?;
        let n: u64 = v
            .parse()
            .map_err(|_| HarnessError::Config(format!("`{k}` needs a number, got `{v}`")))?;
        match k {
            "vars" => vars = Some(n as usize),
            "count" => count = n as usize,
            "seed" => seed = n,
            "budget" => budget = Some(n as usize),
            _ => return Err(HarnessError::Config(format!("unknown random parameter `{k}`"))),
        }
    }
    let vars = vars.ok_or_else(|| HarnessError::Config("--random needs vars=N".into()))?;
    Ok(InputSource::Random { vars, node_budget: budget.unwrap_or(3 * vars), seed, count })
}

fn execute(algorithm: Algorithm, args: RunArgs) -> Result<bool, HarnessError> {
    let input = match (args.inline, args.file, args.random) {
        (Some(text), _, _) => InputSource::Inline(text),
        (_, Some(path), _) => InputSource::File(path),
        (_, _, Some(items)) => random_source(&items)?,
        _ => return Err(HarnessError::Config("one of --inline, --file, --random is required".into())),
    };
    let mut config = ExperimentConfig::new(algorithm, OracleStyle::for_algorithm(algorithm, args.oracle.as_deref())?, input);
    config.seed = args.seed;
    config.mode = args.mode;
    config.verify = !args.no_verify || args.verify;
    config.brute_limit = brute_limit_from_env()?;
    config.trace = args.trace;
    config.summary = args.summary;

    let records = run(&config)?;
    for r in &records {
        let check = match r.agree {
            Some(true) => "agree",
            Some(false) => "DISAGREE",
            None => "unverified",
        };
        emit(format_args!(
            "{}\t{}\t{}\tcalls={}\t{}\t{}",
            r.formula_id,
            r.result,
            r.reference.as_deref().unwrap_or("-"),
            r.oracle_calls,
            check,
            r.formula
        ));
    }
    let wall: std::time::Duration = records.iter().map(|r| r.wall_time).sum();
    eprintln!("{} formulas, {:.3}s total wall time", records.len(), wall.as_secs_f64());
    Ok(all_agree(&records))
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Decide { algorithm, run } => {
            let algorithm = match algorithm {
                DecideAlgorithm::Selector => Algorithm::Selector,
                DecideAlgorithm::Tally => Algorithm::Tally,
                DecideAlgorithm::Sparse => Algorithm::Sparse,
            };
            execute(algorithm, run)
        }
        Command::Count { algorithm: CountAlgorithm::Enum, run } => execute(Algorithm::EnumCount, run),
        Command::Demo { which: Demo::NaiveFailure } => selfred::demonstrate_naive_failure()
            .map(|report| {
                emit(format_args!("{}", serde_json::to_string_pretty(&report).expect("report serializes")));
                report.guess_sets_identical && report.root_counts_differ
            })
            .map_err(HarnessError::from),
        Command::Gen { vars, budget, seed, count } => (0..count as u64)
            .map(|i| generate_random(vars, budget.unwrap_or(3 * vars), seed.wrapping_add(i)))
            .collect::<Result<Vec<_>, _>>()
            .map(|fs| {
                fs.iter().for_each(|f| emit(format_args!("{f}")));
                true
            })
            .map_err(HarnessError::from),
    };
    match outcome {
        Ok(true) => ExitCode::SUCCESS,
        Ok(false) => ExitCode::FAILURE,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
