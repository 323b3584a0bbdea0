//! Command-line front end: run instances, verify ranges, print the
//! quantum-vs-deterministic table, and check the level transformations.
//!
//! Exit status 0 means success (or all verifications passed), 1 means a
//! verification or residual check failed, 2 means a usage or parse error.
//! JSON output is schema-stable: identical inputs and seeds produce
//! byte-identical output.

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::Serialize;

use exactq_core::algorithms::{trace_exact, trace_threshold, LevelRecord, RunTrace};
use exactq_core::oracle::parse_bits;
use exactq_core::verify::{
    isometry_residuals, table_rows, verify_instance, FunctionFamily, TableRow,
    VerificationReport, VerifyConfig, VerifyMode,
};
use exactq_core::{Error, Family};

/// Residual threshold for `check-unitary` to report success.
const RESIDUAL_THRESHOLD: f64 = 1e-10;

const EXIT_FAIL: i32 = 1;
const EXIT_USAGE: i32 = 2;

#[derive(Parser)]
#[command(
    name = "exactq",
    version,
    about = "Simulate and verify exact quantum query algorithms for EXACT and THRESHOLD"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FunctionArg {
    Exact,
    Threshold,
}

impl From<FunctionArg> for FunctionFamily {
    fn from(f: FunctionArg) -> Self {
        match f {
            FunctionArg::Exact => FunctionFamily::Exact,
            FunctionArg::Threshold => FunctionFamily::Threshold,
        }
    }
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ModeArg {
    Full,
    Symmetric,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum AlgArg {
    Exact,
    Maj,
}

#[derive(Subcommand)]
enum Command {
    /// Sample one run of an instance and print the measurement trace.
    Run {
        /// Function family to evaluate.
        #[arg(long = "fn")]
        function: FunctionArg,
        /// Threshold or exact-count parameter k.
        #[arg(long)]
        k: usize,
        /// Input bit string, x_1 leftmost.
        #[arg(long)]
        input: String,
        /// Seed for the branch sampler.
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Emit one JSON object instead of text.
        #[arg(long)]
        json: bool,
    },
    /// Certify exactness and query budgets over whole input spaces.
    Verify {
        #[arg(long = "fn")]
        function: FunctionArg,
        /// Verify a single k.
        #[arg(long)]
        k: Option<usize>,
        /// Verify every k from 0 to n.
        #[arg(long)]
        all_k: bool,
        /// Input length n.
        #[arg(long)]
        n: Option<usize>,
        /// Sweep every n from 1 to this bound.
        #[arg(long)]
        max_n: Option<usize>,
        /// full enumerates all 2^n inputs; symmetric verifies weight classes.
        #[arg(long, value_enum, default_value_t = ModeArg::Full)]
        mode: ModeArg,
        /// Emit a JSON array of reports instead of text lines.
        #[arg(long)]
        json: bool,
    },
    /// Print verified quantum budgets against deterministic complexity.
    Table {
        #[arg(long)]
        max_n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Check the orthonormality residual of the level transformations.
    CheckUnitary {
        /// Which family's transformations to check.
        #[arg(long)]
        alg: AlgArg,
        /// Level parameter m (must be at least 1).
        #[arg(long)]
        m: usize,
        #[arg(long)]
        json: bool,
    },
}

fn main() {
    let cli = Cli::parse();
    let code = match cli.command {
        Command::Run {
            function,
            k,
            input,
            seed,
            json,
        } => cmd_run(function, k, &input, seed, json),
        Command::Verify {
            function,
            k,
            all_k,
            n,
            max_n,
            mode,
            json,
        } => cmd_verify(function, k, all_k, n, max_n, mode, json),
        Command::Table { max_n, json } => cmd_table(max_n, json),
        Command::CheckUnitary { alg, m, json } => cmd_check_unitary(alg, m, json),
    };
    std::process::exit(code);
}

fn usage_error(message: &str) -> i32 {
    eprintln!("error: {message}");
    EXIT_USAGE
}

#[derive(Serialize)]
struct RunOutput<'a> {
    function: &'a str,
    k: usize,
    n: usize,
    input: &'a str,
    seed: u64,
    levels: &'a [LevelRecord],
    answer: u8,
    queries: u32,
}

fn cmd_run(function: FunctionArg, k: usize, input: &str, seed: u64, json: bool) -> i32 {
    let bits = match parse_bits(input) {
        Ok(bits) => bits,
        Err(e) => return usage_error(&e.to_string()),
    };
    let result: Result<(RunTrace, u32), Error> = match function {
        FunctionArg::Exact => trace_exact(&bits, k, seed),
        FunctionArg::Threshold => trace_threshold(&bits, k, seed),
    };
    let (trace, budget) = match result {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let name = match function {
        FunctionArg::Exact => "exact",
        FunctionArg::Threshold => "threshold",
    };
    if json {
        let out = RunOutput {
            function: name,
            k,
            n: bits.len(),
            input,
            seed,
            levels: &trace.levels,
            answer: trace.answer as u8,
            queries: trace.queries,
        };
        println!("{}", serde_json::to_string(&out).expect("serializable"));
    } else {
        println!(
            "{name} k={k} n={} input={input} seed={seed} budget={budget}",
            bits.len()
        );
        for level in &trace.levels {
            println!(
                "  level size={}: outcome {}  p={} ({})  removed {:?}",
                level.level_size,
                level.outcome,
                fmt_probability(level.probability),
                level.exact_probability,
                level.removed_global
            );
        }
        println!("answer {} after {} queries", trace.answer as u8, trace.queries);
    }
    0
}

/// Probabilities are printed with 12 significant digits.
fn fmt_probability(p: f64) -> String {
    format!("{p:.11e}")
}

fn cmd_verify(
    function: FunctionArg,
    k: Option<usize>,
    all_k: bool,
    n: Option<usize>,
    max_n: Option<usize>,
    mode: ModeArg,
    json: bool,
) -> i32 {
    if all_k == k.is_some() {
        return usage_error("provide exactly one of --k or --all-k");
    }
    if max_n.is_some() == n.is_some() {
        return usage_error("provide exactly one of --n or --max-n");
    }
    let family: FunctionFamily = function.into();
    let mode = match mode {
        ModeArg::Full => VerifyMode::Full,
        ModeArg::Symmetric => VerifyMode::Symmetric,
    };
    let config = VerifyConfig::default();

    let ns: Vec<usize> = match (n, max_n) {
        (Some(n), None) => vec![n],
        (None, Some(max)) => (1..=max).collect(),
        _ => unreachable!(),
    };
    let mut instances = Vec::new();
    for &n in &ns {
        match k {
            Some(k) => {
                let in_range = match family {
                    FunctionFamily::Exact => k <= n,
                    FunctionFamily::Threshold => k <= n + 1,
                };
                if in_range {
                    instances.push((k, n));
                } else if ns.len() == 1 {
                    return usage_error(&Error::KOutOfRange { k, n }.to_string());
                }
            }
            None => instances.extend((0..=n).map(|k| (k, n))),
        }
    }

    configure_threads();
    let results: Vec<Result<VerificationReport, Error>> = instances
        .par_iter()
        .map(|&(k, n)| verify_instance(family, k, n, mode, &config))
        .collect();

    let mut reports = Vec::with_capacity(results.len());
    for result in results {
        match result {
            Ok(report) => reports.push(report),
            Err(e) => return usage_error(&e.to_string()),
        }
    }
    reports.sort_by_key(|r| (r.n, r.k));

    if json {
        println!("{}", serde_json::to_string(&reports).expect("serializable"));
    } else {
        for report in &reports {
            println!("{}", report.human_line());
        }
    }
    if reports.iter().all(|r| r.passed()) {
        0
    } else {
        EXIT_FAIL
    }
}

fn cmd_table(max_n: usize, json: bool) -> i32 {
    let rows: Result<Vec<TableRow>, Error> = table_rows(max_n, &VerifyConfig::default());
    let rows = match rows {
        Ok(rows) => rows,
        Err(Error::VerificationFailed(w)) => {
            eprintln!("error: verification failed: {w}");
            return EXIT_FAIL;
        }
        Err(e) => return usage_error(&e.to_string()),
    };
    if json {
        println!("{}", serde_json::to_string(&rows).expect("serializable"));
    } else {
        println!("{:<10} {:>3} {:>3} {:>8} {:>3}", "family", "k", "n", "quantum", "D");
        for row in &rows {
            println!(
                "{:<10} {:>3} {:>3} {:>8} {:>3}",
                row.family.to_string(),
                row.k,
                row.n,
                row.quantum,
                row.deterministic
            );
        }
    }
    0
}

#[derive(Serialize)]
struct UnitaryReport {
    alg: &'static str,
    m: usize,
    u1_residual: f64,
    u2_residual: f64,
    max_residual: f64,
    pass: bool,
}

fn cmd_check_unitary(alg: AlgArg, m: usize, json: bool) -> i32 {
    let (name, family) = match alg {
        AlgArg::Exact => ("exact", Family::Exact),
        AlgArg::Maj => ("maj", Family::Maj),
    };
    let (u1_residual, u2_residual) = match isometry_residuals(family, m) {
        Ok(r) => r,
        Err(e) => return usage_error(&e.to_string()),
    };
    let max_residual = u1_residual.max(u2_residual);
    let pass = max_residual < RESIDUAL_THRESHOLD;
    if json {
        let report = UnitaryReport {
            alg: name,
            m,
            u1_residual,
            u2_residual,
            max_residual,
            pass,
        };
        println!("{}", serde_json::to_string(&report).expect("serializable"));
    } else {
        println!("{name} m={m}: u1 residual {u1_residual:.3e}, u2 residual {u2_residual:.3e}");
        println!(
            "max residual {max_residual:.3e}: {}",
            if pass { "PASS" } else { "FAIL" }
        );
    }
    if pass {
        0
    } else {
        EXIT_FAIL
    }
}

/// Optional EXACTQ_THREADS caps the verification fan-out; output order is
/// deterministic regardless (reports are sorted before emission).
fn configure_threads() {
    if let Ok(value) = std::env::var("EXACTQ_THREADS") {
        if let Ok(threads) = value.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build_global();
        }
    }
}
