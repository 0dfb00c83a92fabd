use std::fs::{self, OpenOptions};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::Context;
use clap::{Parser, Subcommand, ValueEnum};

use nsw_core::generate::{random_instance, GenParams, GenerateError};
use nsw_core::oracle::{ratio, Optimum, RatioReport, DEFAULT_BUDGET, RATIO_CSV_HEADER};
use nsw_core::reductions::{
    parse_certificate, parse_pdm, parse_rational_str, reduce_gap4dm, reduce_pdm, verify_apx_lp,
    ReductionError,
};
use nsw_core::{
    exact_optimum, nsw_product, parse_allocation, parse_instance, serialize_allocation,
    serialize_instance, two_value_approx, validate_allocation, BalanceError, Instance,
    OracleConfig, OracleError,
};

const EXIT_PARSE: u8 = 1;
const EXIT_TOO_FEW_GOODS: u8 = 2;
const EXIT_ZERO_SMALL: u8 = 3;
const EXIT_BUDGET: u8 = 4;
const EXIT_REDUCTION: u8 = 5;

#[derive(Parser)]
#[command(
    name = "nsw2v",
    version,
    about = "Nash social welfare for two-value instances"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Run the local-search approximation and write the allocation.
    Solve {
        instance: PathBuf,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Exhaustive optimum with a witness allocation.
    Exact {
        instance: PathBuf,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        #[arg(long)]
        out: Option<PathBuf>,
        /// Split the search over threads (same result).
        #[arg(long)]
        parallel: bool,
    },
    /// Approximation ratio against the optimum, one CSV row per instance.
    Ratio {
        #[arg(required = true)]
        instances: Vec<PathBuf>,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Append rows to this CSV file (header written if empty).
        #[arg(long)]
        out: Option<PathBuf>,
        /// Print max and mean ratio after the rows.
        #[arg(long)]
        summary: bool,
        #[arg(long)]
        parallel: bool,
    },
    /// Validate an allocation file against an instance.
    Check {
        instance: PathBuf,
        allocation: PathBuf,
    },
    /// Seeded random instance.
    Gen {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        p: u64,
        #[arg(long)]
        q: u64,
        /// Probability that a pair is big, as `num/den`.
        #[arg(long, default_value = "1/2")]
        big_prob: String,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Build the hardness instance of a matching file.
    Reduce {
        pdm: PathBuf,
        mode: Mode,
        /// Big value `q` for `np`, target matching size `k` for `gap4dm`.
        param: u64,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check an LP certificate in exact arithmetic.
    VerifyLp {
        certificate: PathBuf,
        #[arg(long, default_value = "0")]
        eps: String,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum Mode {
    Np,
    Gap4dm,
}

struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn new(code: u8, err: impl Into<anyhow::Error>) -> Self {
        Failure {
            code,
            err: err.into(),
        }
    }
}

impl From<anyhow::Error> for Failure {
    fn from(err: anyhow::Error) -> Self {
        Failure::new(EXIT_PARSE, err)
    }
}

type Res<T> = Result<T, Failure>;

fn balance_failure(e: BalanceError) -> Failure {
    let code = match e {
        BalanceError::TooFewGoods { .. } => EXIT_TOO_FEW_GOODS,
        BalanceError::ZeroSmallValue => EXIT_ZERO_SMALL,
        BalanceError::RunProperty(_) => EXIT_PARSE,
    };
    Failure::new(code, e)
}

fn oracle_failure(e: OracleError) -> Failure {
    match e {
        OracleError::Balance(b) => balance_failure(b),
        e @ OracleError::BudgetExceeded { .. } => Failure::new(EXIT_BUDGET, e),
    }
}

fn read(path: &Path) -> Res<String> {
    Ok(fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?)
}

fn load_instance(path: &Path) -> Res<Instance> {
    let text = read(path)?;
    Ok(parse_instance(&text).with_context(|| format!("parsing {}", path.display()))?)
}

/// Write to `out` if given, else to stdout.
fn emit(out: Option<&Path>, text: &str) -> Res<()> {
    match out {
        Some(path) => {
            fs::write(path, text).with_context(|| format!("writing {}", path.display()))?
        }
        None => print!("{text}"),
    }
    Ok(())
}

fn solve(instance: &Path, out: Option<&Path>) -> Res<()> {
    let inst = load_instance(instance)?;
    let alloc = two_value_approx(&inst).map_err(balance_failure)?;
    let value = nsw_product(&inst, &alloc);
    emit(out, &serialize_allocation(&alloc, inst.m()))?;
    println!("{value}");
    Ok(())
}

fn exact(instance: &Path, budget: u64, out: Option<&Path>, parallel: bool) -> Res<()> {
    let inst = load_instance(instance)?;
    let cfg = OracleConfig::with_budget(budget).parallel(parallel);
    let Optimum { value, witness } = exact_optimum(&inst, &cfg).map_err(oracle_failure)?;
    emit(out, &serialize_allocation(&witness, inst.m()))?;
    println!("{value}");
    Ok(())
}

fn stem(path: &Path) -> String {
    path.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string())
}

fn ratio_cmd(
    instances: &[PathBuf],
    budget: u64,
    out: Option<&Path>,
    summary: bool,
    parallel: bool,
) -> Res<()> {
    let cfg = OracleConfig::with_budget(budget).parallel(parallel);
    let mut rows = Vec::new();
    let mut ratios = Vec::new();
    for path in instances {
        let inst = load_instance(path)?;
        let report: RatioReport = ratio(&inst, &cfg).map_err(oracle_failure)?;
        rows.push(report.csv_row(&stem(path), &inst));
        ratios.push(report.ratio);
    }
    match out {
        Some(path) => {
            let fresh = fs::metadata(path).map_or(true, |m| m.len() == 0);
            let mut file = OpenOptions::new()
                .create(true)
                .append(true)
                .open(path)
                .with_context(|| format!("opening {}", path.display()))?;
            let mut text = String::new();
            if fresh {
                text.push_str(RATIO_CSV_HEADER);
                text.push('\n');
            }
            for row in &rows {
                text.push_str(row);
                text.push('\n');
            }
            file.write_all(text.as_bytes())
                .with_context(|| format!("writing {}", path.display()))?;
        }
        None => {
            println!("{RATIO_CSV_HEADER}");
            rows.iter().for_each(|r| println!("{r}"));
        }
    }
    if summary {
        let max = ratios.iter().cloned().fold(f64::NEG_INFINITY, f64::max);
        let mean = ratios.iter().sum::<f64>() / ratios.len() as f64;
        println!(
            "instances={} max_ratio={max:.6} mean_ratio={mean:.6}",
            ratios.len()
        );
    }
    Ok(())
}

fn check(instance: &Path, allocation: &Path) -> Res<()> {
    let inst = load_instance(instance)?;
    let (alloc, m) = parse_allocation(&read(allocation)?)
        .with_context(|| format!("parsing {}", allocation.display()))?;
    if m != inst.m() {
        return Err(anyhow::anyhow!("allocation has m={m}, instance has m={}", inst.m()).into());
    }
    let report = validate_allocation(&inst, &alloc).context("checking allocation")?;
    println!(
        "complete={} disjoint={} nonwasteful={}",
        report.complete, report.disjoint, report.nonwasteful
    );
    println!("{}", nsw_product(&inst, &alloc));
    Ok(())
}

fn parse_prob(s: &str) -> Res<(u64, u64)> {
    let bad = || anyhow::anyhow!("big-prob must be num/den, got {s:?}");
    let (num, den) = s.split_once('/').unwrap_or((s, "1"));
    let num = num.trim().parse().map_err(|_| bad())?;
    let den = den.trim().parse().map_err(|_| bad())?;
    Ok((num, den))
}

#[allow(clippy::too_many_arguments)]
fn gen(
    n: usize,
    m: usize,
    p: u64,
    q: u64,
    big_prob: &str,
    seed: u64,
    out: Option<&Path>,
) -> Res<()> {
    let params = GenParams {
        n,
        m,
        p,
        q,
        big_prob: parse_prob(big_prob)?,
        seed,
    };
    let inst = random_instance(&params).map_err(|e| match e {
        GenerateError::TooFewGoods { .. } => Failure::new(EXIT_TOO_FEW_GOODS, e),
        e => Failure::new(EXIT_PARSE, e),
    })?;
    emit(out, &serialize_instance(&inst))
}

fn reduce(pdm: &Path, mode: Mode, param: u64, out: Option<&Path>) -> Res<()> {
    let g = parse_pdm(&read(pdm)?).map_err(|e| Failure::new(EXIT_PARSE, e))?;
    let inst = match mode {
        Mode::Np => reduce_pdm(&g, param),
        Mode::Gap4dm => reduce_gap4dm(&g, param as usize),
    }
    .map_err(|e| Failure::new(EXIT_REDUCTION, e))?;
    emit(out, &serialize_instance(&inst))
}

fn verify_lp(certificate: &Path, eps: &str) -> Res<()> {
    let parse = |e: ReductionError| Failure::new(EXIT_PARSE, e);
    let cert = parse_certificate(&read(certificate)?).map_err(parse)?;
    let eps = parse_rational_str(eps).map_err(parse)?;
    let report = verify_apx_lp(&cert, &eps);
    println!(
        "{} tight={} factor={:.10}",
        if report.feasible {
            "feasible"
        } else {
            "infeasible"
        },
        report.tight_inequalities(),
        report.factor
    );
    for c in report.constraints.iter().chain(&report.bounds) {
        println!("{} lhs={} rhs={} slack={}", c.name, c.lhs, c.rhs, c.slack);
    }
    println!("objective={:.12}", report.objective);
    Ok(())
}

fn dispatch(cli: Cli) -> Res<()> {
    match cli.cmd {
        Cmd::Solve { instance, out } => solve(&instance, out.as_deref()),
        Cmd::Exact {
            instance,
            budget,
            out,
            parallel,
        } => exact(&instance, budget, out.as_deref(), parallel),
        Cmd::Ratio {
            instances,
            budget,
            out,
            summary,
            parallel,
        } => ratio_cmd(&instances, budget, out.as_deref(), summary, parallel),
        Cmd::Check {
            instance,
            allocation,
        } => check(&instance, &allocation),
        Cmd::Gen {
            n,
            m,
            p,
            q,
            big_prob,
            seed,
            out,
        } => gen(n, m, p, q, &big_prob, seed, out.as_deref()),
        Cmd::Reduce {
            pdm,
            mode,
            param,
            out,
        } => reduce(&pdm, mode, param, out.as_deref()),
        Cmd::VerifyLp { certificate, eps } => verify_lp(&certificate, &eps),
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(EXIT_PARSE);
        }
        Err(e) => {
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}
