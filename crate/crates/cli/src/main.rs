//! `q2lab`: command-line front end for the diamond-free verification
//! toolkit. Subcommands cover chain censuses, the randomized verification
//! suites, bound optimization, symmetric chain decompositions, exact
//! extremal search, constructions, and the exact tail-sum check.
//!
//! Exit codes: 0 success, 1 check failure, 2 usage or input error,
//! 3 internal invariant breach.

use clap::{ArgAction, Parser, Subcommand, ValueEnum};
use q2lab_core::census::{census_through, chain_census, chain_census_capped, lym_sum};
use q2lab_core::lattice::{parse_family, serialize_family, subset_line, Family, Subset};
use q2lab_core::optimize::{maximize_qprime_with, maximize_three_layer_surface_with, OptResult};
use q2lab_core::scd::scd_decompose;
use q2lab_core::search::{
    branch_and_bound_ex, brute_force_ex, construct_balanced_local, construct_two_middle_layers,
    extremal_references,
};
use q2lab_core::suites::{CaseOutcome, ParamValue, SuiteKind};
use rayon::prelude::*;
use serde_json::{json, Map, Value};
use std::panic::AssertUnwindSafe;
use std::path::PathBuf;
use std::time::{Duration, Instant};

#[derive(Parser)]
#[command(
    name = "q2lab",
    version,
    about = "Exact verification lab for diamond-free families"
)]
struct Cli {
    /// Output format for machine-readable commands.
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Increase diagnostic chatter on stderr.
    #[arg(short, long, global = true, action = ArgAction::Count)]
    verbose: u8,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Text,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum OptimizeTarget {
    Qprime,
    T2surface,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum SearchMethod {
    Brute,
    Bnb,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ConstructKind {
    TwoMiddle,
    Conclusions,
}

#[derive(Subcommand)]
enum Command {
    /// Full-chain census of a family file.
    Census {
        #[arg(long)]
        family: PathBuf,
        /// Truncation cap on tracked member counts (default: exact).
        #[arg(long)]
        cap: Option<usize>,
    },
    /// Census of full chains through a fixed subset.
    Through {
        #[arg(long)]
        family: PathBuf,
        /// The subset as an n-character {0,1} string.
        #[arg(long)]
        set: String,
    },
    /// Exact LYM sum of a family file.
    Lym {
        #[arg(long)]
        family: PathBuf,
    },
    /// Run a randomized verification suite.
    Verify {
        /// lemma2 | local | graph-identities | three-layer | compression |
        /// star-ub3 | all
        #[arg(long)]
        suite: String,
        #[arg(long, default_value_t = 42)]
        seed: u64,
        #[arg(long, default_value_t = 100)]
        cases: u64,
    },
    /// Maximize a bound surface by grid search plus refinement.
    Optimize {
        #[arg(long, value_enum)]
        target: OptimizeTarget,
        #[arg(long, default_value_t = 2048)]
        grid: usize,
        #[arg(long, default_value_t = 1e-12)]
        tol: f64,
    },
    /// Symmetric chain decomposition of the subset lattice.
    Scd {
        #[arg(long)]
        n: u32,
    },
    /// Exact extremal search for the largest diamond-free family.
    Search {
        #[arg(long)]
        n: u32,
        #[arg(long, value_enum, default_value_t = SearchMethod::Bnb)]
        method: SearchMethod,
        /// Time budget in seconds (branch and bound only).
        #[arg(long)]
        budget: Option<u64>,
    },
    /// Emit a construction as a family file on stdout.
    Construct {
        #[arg(long, value_enum)]
        kind: ConstructKind,
        /// Ground size for two-middle.
        #[arg(long)]
        n: Option<u32>,
        /// Ground size for conclusions (even).
        #[arg(long)]
        m: Option<u32>,
    },
    /// Exact binomial tail-sum comparison in the log2 domain.
    Tailbound {
        #[arg(long)]
        n: u64,
    },
}

#[derive(Debug)]
struct InputError(String);

impl std::fmt::Display for InputError {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}", self.0)
    }
}

fn input_err<E: std::fmt::Display>(e: E) -> InputError {
    InputError(e.to_string())
}

fn main() {
    let cli = Cli::parse();
    if let Ok(threads) = std::env::var("Q2LAB_THREADS") {
        if let Ok(t) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(t.max(1))
                .build_global();
        }
    }
    let outcome = std::panic::catch_unwind(AssertUnwindSafe(|| run(&cli)));
    let code = match outcome {
        Ok(Ok(code)) => code,
        Ok(Err(e)) => {
            eprintln!("error: {e}");
            2
        }
        Err(_) => {
            eprintln!("error: internal invariant breach");
            3
        }
    };
    std::process::exit(code);
}

fn load_family(path: &PathBuf) -> Result<Family, InputError> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| InputError(format!("cannot read {}: {e}", path.display())))?;
    parse_family(&text).map_err(input_err)
}

fn rational_string(r: &num_rational::BigRational) -> String {
    format!("{}/{}", r.numer(), r.denom())
}

fn run(cli: &Cli) -> Result<i32, InputError> {
    match &cli.command {
        Command::Census { family, cap } => {
            let fam = load_family(family)?;
            let census = match cap {
                Some(c) => chain_census_capped(&fam, *c),
                None => chain_census(&fam),
            }
            .map_err(input_err)?;
            let counts: Vec<String> = census.counts().iter().map(|c| c.to_string()).collect();
            match cli.format {
                Format::Text => println!("n={} counts: {}", fam.ground(), counts.join(" ")),
                _ => print_json(&json!({
                    "n": fam.ground(),
                    "cap": census.cap(),
                    "counts": counts,
                })),
            }
            Ok(0)
        }
        Command::Through { family, set } => {
            let fam = load_family(family)?;
            let n = fam.ground();
            if set.chars().count() != n as usize || !set.chars().all(|c| c == '0' || c == '1') {
                return Err(InputError(format!(
                    "--set must be an {n}-character string over {{0,1}}"
                )));
            }
            let mut mask = 0u64;
            for (i, ch) in set.chars().enumerate() {
                if ch == '1' {
                    mask |= 1 << i;
                }
            }
            let subset = Subset::new(n, mask).map_err(input_err)?;
            let counts = census_through(&fam, subset).map_err(input_err)?;
            let counts: Vec<String> = counts.iter().map(|c| c.to_string()).collect();
            match cli.format {
                Format::Text => println!("through {set}: {}", counts.join(" ")),
                _ => print_json(&json!({
                    "n": n,
                    "set": set,
                    "counts": counts,
                })),
            }
            Ok(0)
        }
        Command::Lym { family } => {
            let fam = load_family(family)?;
            let sum = lym_sum(&fam);
            let at_most_one = sum <= num_rational::BigRational::from_integer(1.into());
            match cli.format {
                Format::Text => println!(
                    "lym sum = {} (antichain: {}, <=1: {})",
                    rational_string(&sum),
                    fam.is_antichain(),
                    at_most_one
                ),
                _ => print_json(&json!({
                    "n": fam.ground(),
                    "members": fam.len(),
                    "sum": rational_string(&sum),
                    "antichain": fam.is_antichain(),
                    "at_most_one": at_most_one,
                })),
            }
            Ok(0)
        }
        Command::Verify { suite, seed, cases } => run_verify(cli, suite, *seed, *cases),
        Command::Optimize { target, grid, tol } => {
            let (name, result): (&str, OptResult) = match target {
                OptimizeTarget::Qprime => ("qprime", maximize_qprime_with(*grid, *tol)),
                OptimizeTarget::T2surface => {
                    ("t2surface", maximize_three_layer_surface_with(*grid, *tol))
                }
            };
            match cli.format {
                Format::Text => println!(
                    "{name}: max {} at ({}, {})",
                    result.max_value, result.argmax.0, result.argmax.1
                ),
                _ => print_json(&json!({
                    "target": name,
                    "max_value": result.max_value,
                    "argmax": [result.argmax.0, result.argmax.1],
                    "grid": result.grid_resolution,
                    "tol": result.refinement_tolerance,
                })),
            }
            Ok(0)
        }
        Command::Scd { n } => {
            let scd = scd_decompose(*n).map_err(input_err)?;
            for (index, chain) in scd.chains().iter().enumerate() {
                let sets: Vec<String> = chain.iter().map(subset_line).collect();
                match cli.format {
                    Format::Text => println!("{}", sets.join(" -> ")),
                    _ => print_json(&json!({ "index": index, "sets": sets })),
                }
            }
            Ok(0)
        }
        Command::Search { n, method, budget } => {
            let result = match method {
                SearchMethod::Brute => brute_force_ex(*n).map_err(input_err)?,
                SearchMethod::Bnb => {
                    branch_and_bound_ex(*n, budget.map(Duration::from_secs)).map_err(input_err)?
                }
            };
            let refs = extremal_references(*n);
            let method_name = match method {
                SearchMethod::Brute => "brute",
                SearchMethod::Bnb => "bnb",
            };
            match cli.format {
                Format::Text => println!(
                    "n={} best={} optimal={} nodes={} ({:.3}s); references 2N={} 2.283261N={:.3}",
                    result.n,
                    result.best_size,
                    result.proved_optimal,
                    result.nodes_expanded,
                    result.wall_time.as_secs_f64(),
                    refs.lower_ref,
                    refs.upper_ref,
                ),
                _ => print_json(&json!({
                    "n": result.n,
                    "method": method_name,
                    "best_size": result.best_size,
                    "proved_optimal": result.proved_optimal,
                    "nodes": result.nodes_expanded.to_string(),
                    "seconds": result.wall_time.as_secs_f64(),
                    "lower_ref": refs.lower_ref,
                    "upper_ref": refs.upper_ref,
                    "family": serialize_family(&result.best_family),
                })),
            }
            Ok(0)
        }
        Command::Construct { kind, n, m } => {
            let family = match kind {
                ConstructKind::TwoMiddle => {
                    let n = n.ok_or_else(|| InputError("--n required for two-middle".into()))?;
                    if n == 0 {
                        return Err(InputError("two-middle requires n >= 1".into()));
                    }
                    construct_two_middle_layers(n)
                }
                ConstructKind::Conclusions => {
                    let m = m.ok_or_else(|| InputError("--m required for conclusions".into()))?;
                    construct_balanced_local(m)
                        .map_err(input_err)?
                        .family()
                        .clone()
                }
            };
            print!("{}", serialize_family(&family));
            Ok(0)
        }
        Command::Tailbound { n } => {
            let report = q2lab_core::lattice::tail_bound_check(*n).map_err(input_err)?;
            match cli.format {
                Format::Text => println!(
                    "n={n}: lhs_log2={} rhs_log2={} holds={}",
                    report.lhs_log2, report.rhs_log2, report.holds
                ),
                _ => print_json(&json!({
                    "n": n.to_string(),
                    "threshold": report.threshold.to_string(),
                    "lhs_log2": report.lhs_log2,
                    "rhs_log2": report.rhs_log2,
                    "holds": report.holds,
                })),
            }
            Ok(if report.holds { 0 } else { 1 })
        }
    }
}

fn print_json(value: &Value) {
    println!("{value}");
}

fn case_json(outcome: &CaseOutcome) -> Value {
    let mut map = Map::new();
    map.insert("suite".into(), json!(outcome.suite.name()));
    map.insert("case".into(), json!(outcome.case_index));
    map.insert("seed".into(), json!(outcome.seed.to_string()));
    for (key, value) in &outcome.params {
        let v = match value {
            ParamValue::Int(i) => json!(i),
            ParamValue::IntList(l) => json!(l),
            ParamValue::Text(s) => json!(s),
        };
        map.insert((*key).into(), v);
    }
    let mut checks = Map::new();
    for (name, ok) in &outcome.checks {
        checks.insert((*name).into(), json!(ok));
    }
    map.insert("checks".into(), Value::Object(checks));
    map.insert("ok".into(), json!(outcome.ok()));
    Value::Object(map)
}

fn run_verify(cli: &Cli, suite: &str, seed: u64, cases: u64) -> Result<i32, InputError> {
    let kinds: Vec<SuiteKind> = if suite == "all" {
        SuiteKind::ALL.to_vec()
    } else {
        vec![SuiteKind::parse(suite).ok_or_else(|| {
            InputError(format!(
                "unknown suite {suite:?}; expected one of lemma2, local, \
                 graph-identities, three-layer, compression, star-ub3, all"
            ))
        })?]
    };

    let mut any_failure = false;
    for kind in kinds {
        let start = Instant::now();
        let outcomes: Vec<CaseOutcome> = (0..cases)
            .into_par_iter()
            .map(|i| q2lab_core::suites::run_case(kind, seed, i))
            .collect();
        let failures: Vec<&CaseOutcome> = outcomes.iter().filter(|o| !o.ok()).collect();
        match cli.format {
            Format::Json => {
                for o in &outcomes {
                    print_json(&case_json(o));
                }
            }
            Format::Csv => {
                println!("suite,case,seed,ok,failed_checks");
                for o in &outcomes {
                    println!(
                        "{},{},{},{},{}",
                        o.suite.name(),
                        o.case_index,
                        o.seed,
                        o.ok(),
                        o.failed_checks().join("|")
                    );
                }
            }
            Format::Text => {
                println!(
                    "suite {}: {} cases, {} failures ({} ms)",
                    kind.name(),
                    cases,
                    failures.len(),
                    start.elapsed().as_millis()
                );
            }
        }
        if cli.format != Format::Text && cli.verbose > 0 {
            // Timing stays off the deterministic stdout stream.
            eprintln!(
                "suite {}: {} cases, {} failures ({} ms)",
                kind.name(),
                cases,
                failures.len(),
                start.elapsed().as_millis()
            );
        }
        for o in &failures {
            eprintln!(
                "FAIL suite={} case={} seed={} checks={}",
                o.suite.name(),
                o.case_index,
                o.seed,
                o.failed_checks().join("|")
            );
        }
        any_failure |= !failures.is_empty();
    }
    Ok(if any_failure { 1 } else { 0 })
}
