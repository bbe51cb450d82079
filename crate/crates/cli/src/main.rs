//! Batch front-end for the non-archimedean algebra engine.
//!
//! Exit codes: 0 success, 1 usage error, 2 verification failure,
//! 3 precision loss.

use std::io::Write;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde_json::json;

use nonarch_core::error::Error;
use nonarch_core::novikov::Rational;

mod folklore;
mod sample;

#[derive(Parser)]
#[command(name = "nonarch", version, about = "non-archimedean computer algebra engine")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Reproduce the critical-values-are-eigenvalues matchings.
    Folklore(FolkloreArgs),
    /// Run a module's randomized verification suite.
    Selftest(SelftestArgs),
    /// Evaluate an expression in the shared grammar.
    Eval(EvalArgs),
    /// Fibration utilities.
    Fibration(FibrationArgs),
}

#[derive(Args)]
struct FolkloreArgs {
    /// cp2 | p1xp1 | cpn
    #[arg(long)]
    space: String,
    /// quantum parameter energy (cp2, cpn)
    #[arg(long)]
    energy: Option<Rational>,
    /// first factor energy (p1xp1)
    #[arg(long)]
    e1: Option<Rational>,
    /// second factor energy (p1xp1)
    #[arg(long)]
    e2: Option<Rational>,
    /// projective dimension (cpn)
    #[arg(long)]
    n: Option<usize>,
    /// truncation order for roots and lifts
    #[arg(long, default_value = "4")]
    order: Rational,
    /// coefficient tolerance for the matching
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    #[arg(long, default_value = "text")]
    format: String,
    /// write the report here instead of stdout
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct SelftestArgs {
    /// novikov | series | ainf | floer | wallcross | all
    #[arg(long, default_value = "all")]
    suite: String,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// energy cutoff for the randomized checks
    #[arg(long, default_value = "2")]
    cutoff: Rational,
    #[arg(long, default_value = "text")]
    format: String,
    #[arg(long)]
    out: Option<String>,
}

#[derive(Args)]
struct EvalArgs {
    /// expression in the shared grammar
    expr: String,
    /// bindings like "Y1=T^(1/2)" (repeatable)
    #[arg(long = "at")]
    at: Vec<String>,
    /// truncation order for inversions and series cutoffs
    #[arg(long, default_value = "4")]
    order: Rational,
}

#[derive(Args)]
struct FibrationArgs {
    #[command(subcommand)]
    command: FibrationCommand,
}

#[derive(Subcommand)]
enum FibrationCommand {
    /// Emit CSV of (val x0, val x1, val y, q1, q2, residual) samples.
    Sample {
        #[arg(long, default_value_t = 1000)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<String>,
    },
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            // clap prints help/version through the error path with success
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let outcome = match cli.command {
        Command::Folklore(args) => folklore::run(args),
        Command::Selftest(args) => run_selftest(args),
        Command::Eval(args) => run_eval(args),
        Command::Fibration(args) => match args.command {
            FibrationCommand::Sample { count, seed, out } => sample::run(count, seed, out),
        },
    };
    match outcome {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            match e {
                Error::PrecisionLoss(_) | Error::TruncatedZero(_) => ExitCode::from(3),
                Error::ParseError { .. } | Error::UnknownName(_) => ExitCode::from(1),
                _ => ExitCode::from(2),
            }
        }
    }
}

/// Seed override honored by every randomized command.
fn effective_seed(seed: u64) -> u64 {
    std::env::var("NONARCH_SEED")
        .ok()
        .and_then(|s| s.parse().ok())
        .unwrap_or(seed)
}

fn run_selftest(args: SelftestArgs) -> Result<ExitCode, Error> {
    let seed = effective_seed(args.seed);
    let corrupt = std::env::var("NONARCH_CORRUPT").map_or(false, |v| !v.is_empty() && v != "0");
    let suites: Vec<&str> = if args.suite == "all" {
        nonarch_core::selftest::all_suites().to_vec()
    } else {
        vec![args.suite.as_str()]
    };
    let mut reports = Vec::new();
    let mut all_passed = true;
    for suite in suites {
        let rep = nonarch_core::selftest::run_suite(suite, seed, args.cutoff, corrupt)?;
        all_passed &= rep.passed();
        reports.push(rep);
    }
    let status = if all_passed { "pass" } else { "fail" };
    let text = match args.format.as_str() {
        "json" => {
            let body = json!({
                "config": {
                    "seed": seed,
                    "cutoff": args.cutoff.to_string(),
                    "corrupt": corrupt,
                },
                "inputs": { "suites": reports.iter().map(|r| r.suite.clone()).collect::<Vec<_>>() },
                "results": reports,
                "residuals": [],
                "status": status,
            });
            serde_json::to_string_pretty(&body).expect("report serializes")
        }
        _ => {
            let mut out = String::new();
            for rep in &reports {
                out.push_str(&format!("suite {} (seed {})\n", rep.suite, rep.seed));
                for c in &rep.checks {
                    let mark = if c.passed { "pass" } else { "FAIL" };
                    out.push_str(&format!("  [{mark}] {}", c.name));
                    if !c.details.is_empty() {
                        out.push_str(&format!(" -- {}", c.details));
                    }
                    out.push('\n');
                }
            }
            out.push_str(&format!("status: {status}\n"));
            out
        }
    };
    write_out(&text, args.out.as_deref())?;
    Ok(if all_passed { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn run_eval(args: EvalArgs) -> Result<ExitCode, Error> {
    use nonarch_core::expr::{evaluate, parse, EvalContext, Value};
    let ast = parse(&args.expr)?;
    let mut ctx = EvalContext::new(args.order);
    for binding in &args.at {
        let Some((name, rhs)) = binding.split_once('=') else {
            return Err(Error::ParseError {
                pos: 0,
                msg: format!("binding '{binding}' is not of the form NAME=EXPR"),
            });
        };
        let value = evaluate(&parse(rhs.trim())?, &ctx)?;
        match value {
            Value::Scalar(s) => ctx.bind(name.trim(), s),
            Value::Series(_) => {
                return Err(Error::ParseError {
                    pos: 0,
                    msg: format!("binding '{name}' must evaluate to a scalar"),
                })
            }
        }
    }
    match evaluate(&ast, &ctx)? {
        Value::Scalar(s) => println!("{s}"),
        Value::Series(s) => println!("{s}"),
    }
    Ok(ExitCode::SUCCESS)
}

pub(crate) fn write_out(text: &str, out: Option<&str>) -> Result<(), Error> {
    match out {
        None => {
            print!("{text}");
            std::io::stdout().flush().ok();
            Ok(())
        }
        Some(path) => std::fs::write(path, text).map_err(|e| Error::ParseError {
            pos: 0,
            msg: format!("cannot write {path}: {e}"),
        }),
    }
}
