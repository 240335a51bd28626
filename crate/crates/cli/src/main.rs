//! Batch command-line front end for the capacitated-cover toolkit.
//!
//! Exit codes are a stable contract:
//! 0 success (and every check or benchmark row passed),
//! 1 completed with failing checks or benchmark rows,
//! 2 parse or usage errors,
//! 3 infeasible instance,
//! 4 internal invariant violation,
//! 5 oracle budget exceeded.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use vchc::bench::{run_bench, BenchConfig};
use vchc::format::{parse_instance, serialize_instance, trace_to_jsonl};
use vchc::lp::{export_dual_lp, export_lp};
use vchc::report::{cover_result_json, oracle_result_json, to_output_string};
use vchc_core::certify::{self, CertificateReport, CheckStatus};
use vchc_core::cover::{solve_augmented, AugmentedRun, CoverError};
use vchc_core::gen::{gen_family, gen_random, Family, GenParams};
use vchc_core::instance::Instance;
use vchc_core::oracle::{self, OracleError};
use vchc_core::primal_dual::SolveError;

use vchc_core::num_traits::Signed;

#[derive(Parser)]
#[command(
    name = "vchc",
    version,
    about = "capacitated vertex cover solver toolkit"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Solve an instance with augmented multiplicities and write the cover.
    Solve(SolveArgs),
    /// Exhaustive optimum of a small instance.
    Oracle(OracleArgs),
    /// Generate instances, solve and cross-check them, emit a CSV.
    Bench(BenchArgs),
    /// Generate an instance file.
    Gen(GenArgs),
    /// Export the primal relaxation or its dual in LP text format.
    ExportLp(ExportLpArgs),
}

#[derive(Args)]
struct SolveArgs {
    /// Instance file.
    #[arg(long)]
    input: PathBuf,
    /// Multiplicity augmentation factor (>= 2).
    #[arg(long)]
    k: u64,
    /// Run the certificate checks and embed the report.
    #[arg(long)]
    certify: bool,
    /// Write the solver event trace (JSON lines) to this file and include
    /// the reassignment move log in the result.
    #[arg(long)]
    trace: Option<PathBuf>,
    /// Output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct OracleArgs {
    #[arg(long)]
    input: PathBuf,
    /// Enumeration budget: product of (m_v + 1) must stay within it.
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct BenchArgs {
    /// Vertices per generated instance.
    #[arg(long)]
    n: usize,
    /// Edges per generated instance.
    #[arg(long)]
    m: usize,
    /// Maximum edge size.
    #[arg(long)]
    f: usize,
    /// Augmentation factors, comma separated (each >= 2).
    #[arg(long, value_delimiter = ',', required = true)]
    k: Vec<u64>,
    /// Number of instances.
    #[arg(long)]
    count: u64,
    /// First seed; instances use seed, seed+1, ...
    #[arg(long)]
    seed: u64,
    #[arg(long, default_value_t = oracle::DEFAULT_BUDGET)]
    budget: u64,
    /// CSV output file (stdout when omitted).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct GenArgs {
    /// Adversarial family (star, tight, heavy_light) instead of random
    /// generation.
    #[arg(long)]
    family: Option<String>,
    /// Family size parameter.
    #[arg(long)]
    size: Option<usize>,
    /// Vertices (random mode).
    #[arg(long)]
    n: Option<usize>,
    /// Edges (random mode).
    #[arg(long)]
    m: Option<usize>,
    /// Maximum edge size (random mode).
    #[arg(long)]
    f: Option<usize>,
    #[arg(long)]
    seed: u64,
    /// Raise multiplicities until the instance is feasible (random mode).
    #[arg(long)]
    ensure_feasible: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct ExportLpArgs {
    #[arg(long)]
    input: PathBuf,
    /// Which program to export: primal or dual.
    #[arg(long)]
    which: String,
    #[arg(long)]
    out: Option<PathBuf>,
}

const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_PARSE: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_INTERNAL: u8 = 4;
const EXIT_BUDGET: u8 = 5;

struct CmdError {
    code: u8,
    message: String,
}

impl CmdError {
    fn new(code: u8, message: impl Into<String>) -> Self {
        CmdError {
            code,
            message: message.into(),
        }
    }
}

impl From<CoverError> for CmdError {
    fn from(e: CoverError) -> Self {
        let code = match &e {
            CoverError::FactorTooSmall => EXIT_PARSE,
            CoverError::Augment(_) => EXIT_PARSE,
            CoverError::Solve(SolveError::Infeasible) => EXIT_INFEASIBLE,
            CoverError::Solve(SolveError::InvariantViolation(_)) => EXIT_INTERNAL,
            CoverError::Profile(_) => EXIT_INTERNAL,
        };
        CmdError::new(code, e.to_string())
    }
}

impl From<OracleError> for CmdError {
    fn from(e: OracleError) -> Self {
        let code = match &e {
            OracleError::BudgetExceeded { .. } => EXIT_BUDGET,
            OracleError::Augment(_) => EXIT_PARSE,
        };
        CmdError::new(code, e.to_string())
    }
}

fn read_instance(path: &Path) -> Result<Instance, CmdError> {
    let text = fs::read_to_string(path)
        .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {}", path.display(), e)))?;
    parse_instance(&text)
        .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {}", path.display(), e)))
}

fn write_output(out: &Option<PathBuf>, content: &str) -> Result<(), CmdError> {
    match out {
        None => {
            print!("{}", content);
            Ok(())
        }
        Some(path) => fs::write(path, content)
            .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {}", path.display(), e))),
    }
}

/// Certificate checks for one solved run: primal cover conditions, dual
/// feasibility against both the original and the augmented instance (whose
/// verdicts must agree), the trace audit, and the informational
/// bound-certified ratio check (vacuous whenever the dual lower bound
/// cannot conclude).
fn certificate_for(inst: &Instance, k: u64, run: &AugmentedRun) -> CertificateReport {
    let mut report = CertificateReport::default();
    report.absorb(
        "primal",
        certify::check_primal(inst, k, &run.cover.assignment),
    );
    let dual_original = certify::check_dual(inst, &run.cover.dual);
    let original_ok = dual_original.overall();
    report.absorb("dual", dual_original);
    match inst.augment_multiplicities(k) {
        Ok(aug) => {
            let dual_augmented = certify::check_dual(&aug, &run.cover.dual);
            let identical = dual_augmented.overall() == original_ok;
            report.absorb("dual-augmented", dual_augmented);
            report.push(
                "dual-region-identity",
                if identical {
                    CheckStatus::Pass
                } else {
                    CheckStatus::Fail
                },
                String::new(),
            );
        }
        Err(e) => report.push("dual-augmented", CheckStatus::Fail, e.to_string()),
    }
    report.absorb(
        "audit",
        certify::audit_trace(&certify::AuditInputs {
            inst,
            k,
            trace: run.trace(),
            pre_assignment: run.pre_assignment(),
            assignment: &run.cover.assignment,
            dual: &run.cover.dual,
            pending_history: &run.cover.pending_history,
            profiles: &run.profiles,
        }),
    );
    let lb = &run.cover.dual_lower_bound;
    if lb.is_positive() {
        let certified = run.cover.cost <= &run.cover.guaranteed_ratio * lb;
        if certified {
            report.push(
                "ratio-bound-certified",
                CheckStatus::Pass,
                format!(
                    "cost {} within ratio times dual lower bound {}",
                    run.cover.cost, lb
                ),
            );
        } else {
            report.push(
                "ratio-bound-certified",
                CheckStatus::Vacuous,
                String::from("dual lower bound too weak to certify the ratio; use the oracle"),
            );
        }
    } else {
        report.push(
            "ratio-bound-certified",
            CheckStatus::Vacuous,
            String::from("vacuous, use oracle: dual lower bound is nonpositive"),
        );
    }
    report
}

fn cmd_solve(args: &SolveArgs) -> Result<u8, CmdError> {
    if args.k < 2 {
        return Err(CmdError::new(EXIT_PARSE, "--k must be at least 2"));
    }
    let inst = read_instance(&args.input)?;
    let run = solve_augmented(&inst, args.k)?;
    if let Some(path) = &args.trace {
        fs::write(path, trace_to_jsonl(run.trace()))
            .map_err(|e| CmdError::new(EXIT_PARSE, format!("{}: {}", path.display(), e)))?;
    }
    let certificate = args.certify.then(|| certificate_for(&inst, args.k, &run));
    let doc = cover_result_json(&run, args.trace.is_some(), certificate.as_ref());
    write_output(&args.out, &to_output_string(&doc))?;
    match certificate {
        Some(report) if !report.overall() => Ok(EXIT_CHECK_FAILED),
        _ => Ok(0),
    }
}

fn cmd_oracle(args: &OracleArgs) -> Result<u8, CmdError> {
    let inst = read_instance(&args.input)?;
    let result = oracle::exact_opt(&inst, args.budget)?;
    let doc = oracle_result_json(&result);
    write_output(&args.out, &to_output_string(&doc))?;
    Ok(0)
}

fn cmd_bench(args: &BenchArgs) -> Result<u8, CmdError> {
    if args.k.iter().any(|&k| k < 2) {
        return Err(CmdError::new(EXIT_PARSE, "--k entries must be at least 2"));
    }
    let outcome = run_bench(&BenchConfig {
        vertex_count: args.n,
        edge_count: args.m,
        max_edge_size: args.f,
        ks: args.k.clone(),
        count: args.count,
        seed: args.seed,
        budget: args.budget,
    })
    .map_err(|e| match e {
        vchc::bench::BenchError::Budget(m) => CmdError::new(EXIT_BUDGET, m),
        vchc::bench::BenchError::Other(m) => CmdError::new(EXIT_PARSE, m),
    })?;
    write_output(&args.out, &outcome.csv)?;
    Ok(if outcome.all_pass {
        0
    } else {
        EXIT_CHECK_FAILED
    })
}

fn cmd_gen(args: &GenArgs) -> Result<u8, CmdError> {
    let inst = match &args.family {
        Some(name) => {
            let family = Family::parse(name)
                .ok_or_else(|| CmdError::new(EXIT_PARSE, format!("unknown family {:?}", name)))?;
            let size = args
                .size
                .ok_or_else(|| CmdError::new(EXIT_PARSE, "--size is required with --family"))?;
            gen_family(family, size, args.seed)
        }
        None => {
            let (Some(n), Some(m), Some(f)) = (args.n, args.m, args.f) else {
                return Err(CmdError::new(
                    EXIT_PARSE,
                    "--n, --m and --f are required without --family",
                ));
            };
            let mut params = GenParams::small(n, m, f, args.seed);
            params.ensure_feasible = args.ensure_feasible;
            gen_random(&params).map_err(|e| CmdError::new(EXIT_PARSE, e.to_string()))?
        }
    };
    write_output(&args.out, &serialize_instance(&inst))?;
    Ok(0)
}

fn cmd_export_lp(args: &ExportLpArgs) -> Result<u8, CmdError> {
    let inst = read_instance(&args.input)?;
    let text = match args.which.as_str() {
        "primal" => export_lp(&inst),
        "dual" => export_dual_lp(&inst),
        other => {
            return Err(CmdError::new(
                EXIT_PARSE,
                format!("--which must be primal or dual, got {:?}", other),
            ))
        }
    };
    write_output(&args.out, &text)?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Solve(args) => cmd_solve(args),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Bench(args) => cmd_bench(args),
        Command::Gen(args) => cmd_gen(args),
        Command::ExportLp(args) => cmd_export_lp(args),
    };
    match result {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}
