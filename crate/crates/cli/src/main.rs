//! `fermat-lab`: factor, analyze, benchmark and verify from the command line.
//!
//! Exit codes: 0 success, 1 not factored or verification mismatch, 2 invalid
//! input.

use std::fs::File;
use std::io::{self, BufWriter, Write};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use fermat_lab::harness::{prediction_accuracy, run_bench, verify_example, write_csv, BenchmarkSpec};
use fermat_lab::{
    alpha_method_solve, boundary_paper, c_method_solve, effectiveness_report, BoundMode, Direction, Error,
    ExactRational, FermatContext, Natural, SearchBudget, SieveProfile, SolveError, SolveResult,
};
use serde_json::json;

#[derive(Parser)]
#[command(name = "fermat-lab", version, about = "Fermat factorization laboratory")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Factor an odd modulus with the c-method, the alpha-method, or both.
    Factor {
        n: Natural,
        #[arg(long, value_enum, default_value_t = MethodArg::Both)]
        method: MethodArg,
        /// First alpha to test (default: max(ceil(sqrt(P0)), 0.255·X0) ascending, X0 - 1 descending).
        #[arg(long)]
        alpha_start: Option<Natural>,
        #[arg(long, value_enum, default_value_t = DirectionArg::Asc)]
        direction: DirectionArg,
        #[arg(long, default_value_t = SearchBudget::DEFAULT_MAX)]
        max_iter: u64,
        #[arg(long)]
        json: bool,
    },
    /// Region-of-effectiveness report for a factorization.
    Analyze {
        n: Natural,
        #[arg(long, requires = "q")]
        p: Option<Natural>,
        #[arg(long, requires = "p")]
        q: Option<Natural>,
        #[arg(long, value_enum, default_value_t = ModeArg::Paper)]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
    },
    /// Generate semiprimes and compare both methods, one CSV row per modulus.
    Bench {
        #[arg(long)]
        bits: u32,
        #[arg(long)]
        count: usize,
        #[arg(long, default_value = "1")]
        ratio_min: ExactRational,
        #[arg(long, default_value = "2")]
        ratio_max: ExactRational,
        #[arg(long)]
        seed: u64,
        #[arg(long, default_value_t = SearchBudget::DEFAULT_MAX)]
        max_iter: u64,
        /// Output file (default: stdout).
        #[arg(long)]
        out: Option<std::path::PathBuf>,
    },
    /// Recompute the 264-bit worked example and compare digit for digit.
    VerifyExample,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    C,
    Alpha,
    Both,
}

#[derive(Clone, Copy, ValueEnum)]
enum DirectionArg {
    Asc,
    Desc,
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Paper,
    Exact,
}

/// Failure classes mapped onto exit codes.
enum Failure {
    NotFound(String),
    Invalid(String),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Invalid(e.to_string())
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let outcome = match cli.command {
        Command::Factor {
            n,
            method,
            alpha_start,
            direction,
            max_iter,
            json,
        } => factor(n, method, alpha_start, direction, max_iter, json),
        Command::Analyze { n, p, q, mode, json } => analyze(n, p.zip(q), mode, json),
        Command::Bench {
            bits,
            count,
            ratio_min,
            ratio_max,
            seed,
            max_iter,
            out,
        } => bench(bits, count, ratio_min, ratio_max, seed, max_iter, out),
        Command::VerifyExample => verify(),
    };
    match outcome {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::NotFound(msg)) => {
            eprintln!("{msg}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}

fn solve_json(name: &str, res: &Result<SolveResult, SolveError>) -> serde_json::Value {
    match res {
        Ok(r) => json!({
            "method": name,
            "status": "ok",
            "p": r.factors.p,
            "q": r.factors.q,
            "iterations": r.iterations.to_string(),
            "terminal_c": r.terminal_c,
            "terminal_alpha": r.terminal_alpha,
        }),
        Err(e) => json!({
            "method": name,
            "status": e.status(),
            "iterations": e.iterations().map(|i| i.to_string()),
            "message": e.to_string(),
        }),
    }
}

fn solve_text(name: &str, res: &Result<SolveResult, SolveError>) -> String {
    match res {
        Ok(r) => format!(
            "{name}: {} = {} * {} (c = {}, alpha = {}, iterations = {})",
            r.factors.p.clone().into_inner() * r.factors.q.as_biguint(),
            r.factors.p,
            r.factors.q,
            r.terminal_c,
            r.terminal_alpha,
            r.iterations
        ),
        Err(e) => format!("{name}: {e}"),
    }
}

fn factor(
    n: Natural,
    method: MethodArg,
    alpha_start: Option<Natural>,
    direction: DirectionArg,
    max_iter: u64,
    as_json: bool,
) -> Result<(), Failure> {
    let ctx = FermatContext::new(n)?;
    let budget = SearchBudget::new(max_iter)?;
    let mut results = Vec::new();

    if matches!(method, MethodArg::C | MethodArg::Both) {
        let res = c_method_solve(&ctx, &Default::default(), budget);
        if let Err(SolveError::Invalid(e)) = res {
            return Err(e.into());
        }
        results.push(("c-method", res));
    }
    if matches!(method, MethodArg::Alpha | MethodArg::Both) {
        let profile = SieveProfile::build(&ctx)?;
        let direction = match direction {
            DirectionArg::Asc => Direction::Ascending,
            DirectionArg::Desc => Direction::Descending,
        };
        let start = match (alpha_start, direction) {
            (Some(a), _) => a.into_inner(),
            (None, Direction::Ascending) => ctx
                .alpha_min()
                .as_biguint()
                .max(boundary_paper(&ctx).as_biguint())
                .clone(),
            (None, Direction::Descending) => ctx.x0().as_biguint() - 1u32,
        };
        let res = alpha_method_solve(&ctx, &profile, &start, direction, budget);
        if let Err(SolveError::Invalid(e)) = res {
            return Err(e.into());
        }
        results.push(("alpha-method", res));
    }

    let mut out = io::stdout().lock();
    if as_json {
        let body = json!({
            "n": ctx.n(),
            "x0": ctx.x0(),
            "p0": ctx.p0(),
            "results": results.iter().map(|(m, r)| solve_json(m, r)).collect::<Vec<_>>(),
        });
        writeln!(out, "{}", serde_json::to_string_pretty(&body).expect("serializable"))?;
    } else {
        writeln!(out, "n = {}  X0 = {}  P0 = {}", ctx.n(), ctx.x0(), ctx.p0())?;
        for (m, r) in &results {
            writeln!(out, "{}", solve_text(m, r))?;
        }
    }
    if results.iter().all(|(_, r)| r.is_ok()) {
        Ok(())
    } else {
        Err(Failure::NotFound("not factored".into()))
    }
}

fn analyze(n: Natural, pq: Option<(Natural, Natural)>, mode: ModeArg, as_json: bool) -> Result<(), Failure> {
    let ctx = FermatContext::new(n)?;
    let mode = match mode {
        ModeArg::Paper => BoundMode::Paper,
        ModeArg::Exact => BoundMode::Exact,
    };
    let (p, q) = match pq {
        Some((p, q)) if p >= q => (p, q),
        Some((p, q)) => (q, p),
        None => match c_method_solve(&ctx, &Default::default(), SearchBudget::default()) {
            Ok(r) => (r.factors.p, r.factors.q),
            Err(SolveError::Invalid(e)) => return Err(e.into()),
            Err(e) => return Err(Failure::NotFound(format!("could not factor n: {e}"))),
        },
    };
    let report = effectiveness_report(&ctx, &p, &q, mode)?;
    let mut out = io::stdout().lock();
    if as_json {
        writeln!(out, "{}", serde_json::to_string_pretty(&report).expect("serializable"))?;
    } else {
        writeln!(out, "n                 = {}", ctx.n())?;
        writeln!(out, "p, q              = {p}, {q}")?;
        writeln!(out, "X0                = {}", ctx.x0())?;
        writeln!(out, "P0                = {}", ctx.p0())?;
        writeln!(out, "c                 = {}", report.true_c)?;
        writeln!(out, "alpha             = {}", report.true_alpha)?;
        writeln!(out, "boundary (0.255)  = {}", report.boundary_paper)?;
        writeln!(out, "boundary (exact)  = {}", report.boundary_exact)?;
        writeln!(out, "alpha cap (0.3)   = {}", report.alpha_cap_paper)?;
        writeln!(out, "z                 = {}", report.z)?;
        writeln!(out, "0.4z              = {}", report.sieved_iterations)?;
        writeln!(out, "c - 0.4z          = {}", report.delta)?;
        writeln!(out, "predicted better  = {}", report.predicted_better)?;
    }
    Ok(())
}

fn bench(
    bits: u32,
    count: usize,
    ratio_min: ExactRational,
    ratio_max: ExactRational,
    seed: u64,
    max_iter: u64,
    out: Option<std::path::PathBuf>,
) -> Result<(), Failure> {
    let spec = BenchmarkSpec {
        bits,
        count,
        ratio_min,
        ratio_max,
        seed,
        budget: SearchBudget::new(max_iter)?,
    };
    let records = run_bench(&spec)?;
    match &out {
        Some(path) => write_csv(&spec, &records, BufWriter::new(File::create(path)?))?,
        None => write_csv(&spec, &records, io::stdout().lock())?,
    }
    eprintln!(
        "{} records, prediction accuracy {:.3}",
        records.len(),
        prediction_accuracy(&records)
    );
    Ok(())
}

fn verify() -> Result<(), Failure> {
    let report = verify_example();
    println!("{report}");
    if report.passed() {
        Ok(())
    } else {
        Err(Failure::NotFound("verification mismatch".into()))
    }
}
