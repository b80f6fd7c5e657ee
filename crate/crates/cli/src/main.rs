//! `vdc`: experiments with van der Corput sets from the command line.

mod commands;
mod specs;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use vdc_core::Error;

use crate::commands::Outcome;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

pub mod exit {
    pub const OK: u8 = 0;
    pub const USAGE: u8 = 2;
    pub const SPECTRUM: u8 = 3;
    pub const BOUND: u8 = 4;
    pub const REFUTED: u8 = 5;
    pub const INCONCLUSIVE: u8 = 6;
    pub const CAPACITY: u8 = 7;
}

const SPEC_HELP: &str = "\
FAMILIES
  poly:e1,e2,...         polynomials in n, e.g. poly:n^2,sqrt(2) n^3
  prime-poly:e           polynomial evaluated at the n-th prime
  kronecker:a1,a2,...    n·(a1, a2, ...)
  powerlog:α,β[,c]       c n^α (log n)^β
  entire:f;λ             f(p_n) for f of logarithmic order λ, e.g. entire:exp(ln(x)^(6/5));6/5
  primes, primes+b, primes-b^θ
                         (p_n + b)^θ
  {...} or @file.json    JSON family
SETS (floors of a family, zero dropped)
  multiples:m            {m n}
  progression:a,b        {a n + b}, n >= 1
  any family above, or a JSON set {\"generator\": ..., \"horizon\": ...}
EXIT CODES
  0 ok/consistent, 2 usage, 3 spectrum violation, 4 bound violation,
  5 refuted, 6 inconclusive, 7 precision or capacity
ENVIRONMENT
  VDC_PRECISION_BITS     default working precision in bits";

#[derive(Parser, Debug)]
#[command(name = "vdc", version, about = "Verify and refute van der Corput sets", after_help = SPEC_HELP)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug, Clone, Serialize)]
pub struct Common {
    /// Write the canonical JSON artifact here (`-` for stdout).
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Write tabular data as CSV here.
    #[arg(long, global = true)]
    pub csv: Option<PathBuf>,
    /// Worker threads (default: logical cores).
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Seed for sampled inputs.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    /// Working precision in bits (at least 64).
    #[arg(long, global = true, env = "VDC_PRECISION_BITS")]
    pub precision: Option<usize>,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Generate a family or the elements of a set.
    Gen(commands::GenArgs),
    /// Weyl sums, or a u.d. screen over a frequency budget.
    Weyl(commands::WeylArgs),
    /// Star discrepancy of a one-dimensional family.
    Disc(commands::DiscArgs),
    /// Build a trigonometric-polynomial witness for a set.
    Witness(commands::WitnessArgs),
    /// Check a witness against a set and a tolerance.
    Verify(commands::VerifyArgs),
    /// Try to refute (or settle) the van der Corput property of a set.
    Refute(commands::RefuteArgs),
    /// Congruence criterion for a polynomial set {P(n)}.
    Kmf(commands::KmfArgs),
    /// Screen the sufficient condition through the D_q filter.
    #[command(name = "dq-test")]
    DqTest(commands::DqArgs),
    /// Recurrence and ergodic averages for circle rotations.
    Recur(commands::RecurArgs),
    /// Digit streams of concatenation-type normal numbers.
    Normal(commands::NormalArgs),
}

#[derive(Serialize)]
struct RunConfig<'a> {
    subcommand: &'a str,
    args: Value,
    precision_bits: usize,
    horizon: Option<u64>,
    threads: Option<usize>,
    seed: u64,
    out: Option<String>,
    csv: Option<String>,
}

fn exit_for(e: &Error) -> u8 {
    match e {
        Error::Capacity { .. }
        | Error::Precision { .. }
        | Error::Budget(_)
        | Error::SolverStall { .. } => exit::CAPACITY,
        Error::EmptySet(_) => exit::INCONCLUSIVE,
        _ => exit::USAGE,
    }
}

fn run(cli: Cli) -> Result<u8, Error> {
    let (name, common, args, horizon): (&str, Common, Value, Option<u64>) = match &cli.command {
        Command::Gen(a) => ("gen", a.common.clone(), serde_json::to_value(a)?, a.horizon),
        Command::Weyl(a) => ("weyl", a.common.clone(), serde_json::to_value(a)?, None),
        Command::Disc(a) => ("disc", a.common.clone(), serde_json::to_value(a)?, None),
        Command::Witness(a) => ("witness", a.common.clone(), serde_json::to_value(a)?, Some(a.horizon)),
        Command::Verify(a) => ("verify", a.common.clone(), serde_json::to_value(a)?, Some(a.horizon)),
        Command::Refute(a) => ("refute", a.common.clone(), serde_json::to_value(a)?, Some(a.horizon)),
        Command::Kmf(a) => ("kmf", a.common.clone(), serde_json::to_value(a)?, None),
        Command::DqTest(a) => ("dq-test", a.common.clone(), serde_json::to_value(a)?, a.horizon),
        Command::Recur(a) => ("recur", a.common.clone(), serde_json::to_value(a)?, Some(a.horizon)),
        Command::Normal(a) => ("normal", a.common.clone(), serde_json::to_value(a)?, None),
    };
    if let Some(bits) = common.precision {
        if bits < 64 {
            return Err(Error::Domain(format!("precision must be at least 64 bits, got {bits}")));
        }
    }
    if let Some(t) = common.threads {
        if t == 0 {
            return Err(Error::Domain("--threads must be positive".into()));
        }
        // Fails only if a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(t).build_global();
    }
    let outcome: Outcome = match &cli.command {
        Command::Gen(a) => commands::gen(a)?,
        Command::Weyl(a) => commands::weyl(a)?,
        Command::Disc(a) => commands::disc(a)?,
        Command::Witness(a) => commands::witness(a)?,
        Command::Verify(a) => commands::verify(a)?,
        Command::Refute(a) => commands::refute(a)?,
        Command::Kmf(a) => commands::kmf(a)?,
        Command::DqTest(a) => commands::dq_test(a)?,
        Command::Recur(a) => commands::recur(a)?,
        Command::Normal(a) => commands::normal(a)?,
    };
    // Common flags are recorded once, at the top level.
    let mut args = args;
    if let Value::Object(map) = &mut args {
        map.remove("common");
    }
    let config = RunConfig {
        subcommand: name,
        args,
        precision_bits: common.precision.unwrap_or(vdc_core::hp::DEFAULT_PRECISION),
        horizon,
        threads: common.threads,
        seed: common.seed,
        out: common.out.as_ref().map(|p| p.display().to_string()),
        csv: common.csv.as_ref().map(|p| p.display().to_string()),
    };
    println!("{}", outcome.summary);
    if let Some(path) = &common.out {
        let text = vdc_core::report::artifact("vdc", VERSION, &config, &outcome.result)?;
        if path.as_os_str() == "-" {
            print!("{text}");
        } else {
            std::fs::write(path, text)?;
        }
    }
    if let (Some(path), Some(table)) = (&common.csv, &outcome.table) {
        let header: Vec<&str> = table.header.iter().map(String::as_str).collect();
        vdc_core::report::write_csv_file(path, &header, &table.rows)?;
    }
    Ok(outcome.code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("vdc: {e}");
            ExitCode::from(exit_for(&e))
        }
    }
}
