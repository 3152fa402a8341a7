//! Command-line front end.
//!
//! Subcommands: `check` (full stability report), `zeros` (characteristic-
//! function zero list), `oracle` (cross-validation of the pencil eigenvalues
//! against the scalar determinant polynomial), `simulate` (time-domain
//! trajectory export as CSV).
//!
//! Exit codes are exhaustive and stable: 0 = stable (or success for
//! `oracle`/`simulate`), 1 = unstable, 2 = any input or solver error.
//! Reports go to stdout (or `--out`); diagnostics go to stderr.
//! There is no environment-variable configuration.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use fracstab::eigensolver::Backend;
use fracstab::pipeline::{self, AnalysisOptions, DEFAULT_DENOMINATOR_CAP};
use fracstab::problem::ProblemFile;
use fracstab::report;
use fracstab::{simulate, verify, Error, Result};

#[derive(Parser, Debug)]
#[command(
    name = "fracstab",
    version,
    about = "Asymptotic stability checks for incommensurate fractional-order linear systems"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Decide stability and print the full structured report.
    Check(AnalyzeArgs),
    /// Print only the characteristic-function zeros.
    Zeros(AnalyzeArgs),
    /// Cross-validate the eigenvalues against the scalar polynomial oracle.
    Oracle(OracleArgs),
    /// Integrate the system in time and export the trajectory as CSV.
    Simulate(SimulateArgs),
}

#[derive(Copy, Clone, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    /// Machine-readable structured report.
    Json,
    /// Human-readable summary.
    Text,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    /// Path to the problem file.
    problem: PathBuf,

    /// Stability margin; overrides the problem file's `epsilon`.
    #[arg(long)]
    epsilon: Option<f64>,

    /// Eigenvalue residual certification tolerance.
    #[arg(long)]
    residual_tol: Option<f64>,

    /// Maximum accepted |chi(lambda)| at the computed zeros.
    #[arg(long)]
    chi_tol: Option<f64>,

    /// Radius below which an eigenvalue counts as at the origin.
    #[arg(long)]
    zero_tol: Option<f64>,

    /// Eigenvalue backend.
    #[arg(long, value_parser = parse_backend)]
    backend: Option<Backend>,

    /// Largest denominator accepted when parsing decimal orders.
    #[arg(long)]
    denominator_cap: Option<u64>,

    /// Output format.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,

    /// Write the report to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[command(flatten)]
    common: AnalyzeArgs,

    /// Force this interpolation radius instead of the automatic choice.
    #[arg(long)]
    oracle_radius: Option<f64>,

    /// Largest accepted eigenvalue/root multiset distance.
    #[arg(long, default_value_t = 1e-6)]
    oracle_tol: f64,
}

#[derive(Args, Debug)]
struct SimulateArgs {
    /// Path to the problem file.
    problem: PathBuf,

    /// Initial state, comma separated (e.g. `--x0 1,0,-2`); overrides the
    /// problem file's simulate block.
    #[arg(long, value_delimiter = ',', allow_hyphen_values = true)]
    x0: Option<Vec<f64>>,

    /// Time horizon.
    #[arg(long = "T", alias = "t-end")]
    t_end: Option<f64>,

    /// Step size.
    #[arg(long = "h", alias = "step")]
    h: Option<f64>,

    /// Largest denominator accepted when parsing decimal orders.
    #[arg(long)]
    denominator_cap: Option<u64>,

    /// Write the CSV to this file instead of stdout.
    #[arg(long)]
    out: Option<PathBuf>,
}

fn parse_backend(s: &str) -> std::result::Result<Backend, String> {
    s.parse()
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Check(args) => cmd_analyze(args, false),
        Command::Zeros(args) => cmd_analyze(args, true),
        Command::Oracle(args) => cmd_oracle(args),
        Command::Simulate(args) => cmd_simulate(args),
    };
    match result {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(2)
        }
    }
}

fn load_problem(path: &Path) -> Result<ProblemFile> {
    let text = fs::read_to_string(path)
        .map_err(|e| Error::Problem(format!("cannot read {}: {e}", path.display())))?;
    fracstab::problem::parse_problem_file(&text)
}

fn options_from(args: &AnalyzeArgs) -> AnalysisOptions {
    AnalysisOptions {
        epsilon: args.epsilon,
        backend: args.backend,
        residual_tol: args.residual_tol,
        chi_tol: args.chi_tol,
        zero_tol: args.zero_tol,
        denominator_cap: args.denominator_cap,
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<()> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Error::Problem(format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}

fn cmd_analyze(args: &AnalyzeArgs, zeros_only: bool) -> Result<ExitCode> {
    let problem = load_problem(&args.problem)?;
    let analysis = pipeline::analyze(&problem, &options_from(args))?;
    let rep = report::build_report(&analysis);
    let content = match (zeros_only, args.format) {
        (false, Format::Json) => report::render_json(&rep),
        (false, Format::Text) => report::render_text(&rep),
        (true, Format::Json) => report::render_zeros_json(&rep),
        (true, Format::Text) => report::render_zeros_text(&rep),
    };
    emit(args.out.as_deref(), &content)?;
    Ok(if analysis.stability.stable {
        ExitCode::SUCCESS
    } else {
        ExitCode::from(1)
    })
}

#[derive(Serialize)]
struct OracleReport {
    tool: report::ToolInfo,
    backend: String,
    interpolation_radius: f64,
    polynomial_degree: usize,
    leading_deviation: f64,
    match_distance: f64,
    tolerance: f64,
    within_tolerance: bool,
    pencil_mu: Vec<[f64; 2]>,
    oracle_roots: Vec<[f64; 2]>,
}

fn cmd_oracle(args: &OracleArgs) -> Result<ExitCode> {
    let problem = load_problem(&args.common.problem)?;
    let analysis = pipeline::analyze(&problem, &options_from(&args.common))?;
    let poly = verify::interpolate_det_p(&analysis.orders, &problem.a, args.oracle_radius)?;
    let roots = verify::polynomial_roots(&poly)?;
    let distance = verify::multiset_match_distance(&analysis.eigen.mu, &roots)?;
    let ok = distance <= args.oracle_tol;

    let rep = OracleReport {
        tool: report::tool_info(),
        backend: analysis.backend.to_string(),
        interpolation_radius: poly.radius,
        polynomial_degree: poly.degree(),
        leading_deviation: poly.leading_deviation,
        match_distance: distance,
        tolerance: args.oracle_tol,
        within_tolerance: ok,
        pencil_mu: analysis.eigen.mu.iter().map(|z| [z.re, z.im]).collect(),
        oracle_roots: roots.iter().map(|z| [z.re, z.im]).collect(),
    };
    let content = match args.common.format {
        Format::Json => {
            let mut s = serde_json::to_string_pretty(&rep).expect("report serializes");
            s.push('\n');
            s
        }
        Format::Text => format!(
            "oracle: degree = {}, interpolation radius = {:.6}, leading deviation = {:.3e}\n\
             max matched eigenvalue/root distance = {:.6e} (tolerance {:.3e})\n\
             within tolerance: {}\n",
            rep.polynomial_degree,
            rep.interpolation_radius,
            rep.leading_deviation,
            rep.match_distance,
            rep.tolerance,
            if ok { "yes" } else { "no" }
        ),
    };
    emit(args.common.out.as_deref(), &content)?;
    Ok(if ok { ExitCode::SUCCESS } else { ExitCode::from(2) })
}

fn cmd_simulate(args: &SimulateArgs) -> Result<ExitCode> {
    let problem = load_problem(&args.problem)?;
    let cap = args
        .denominator_cap
        .or(problem.denominator_cap)
        .unwrap_or(DEFAULT_DENOMINATOR_CAP);
    let orders = pipeline::resolve_orders(&problem, cap)?;
    let block = problem.simulate.as_ref();
    let x0 = args
        .x0
        .clone()
        .or_else(|| block.map(|b| b.x0.clone()))
        .ok_or_else(|| {
            Error::Problem(
                "initial state is required: pass --x0 or add a simulate block to the problem file"
                    .into(),
            )
        })?;
    let t_end = args.t_end.or(block.map(|b| b.t_end)).ok_or_else(|| {
        Error::Problem(
            "time horizon is required: pass --T or add a simulate block to the problem file"
                .into(),
        )
    })?;
    let h = args.h.or(block.map(|b| b.h)).ok_or_else(|| {
        Error::Problem(
            "step size is required: pass --h or add a simulate block to the problem file".into(),
        )
    })?;
    let traj = simulate::simulate(&orders.alpha(), &problem.a, &x0, t_end, h)?;
    emit(args.out.as_deref(), &report::render_csv(&traj))?;
    Ok(ExitCode::SUCCESS)
}
