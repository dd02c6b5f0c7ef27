use std::fs;
use std::io::Write;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::json;

use orbita_core::hohmann::{all_branches, HohmannInput};
use orbita_core::lambert::{solve_lambert, LambertError, LambertInput};
use orbita_core::oracle::{planar_two_impulse_min, CostKind, OracleConfig};
use orbita_core::poly::{Rat, DEFAULT_ROOT_TOL};
use orbita_core::rotated::{
    apogee_to_apogee_cost, params_from_angle, solve_rotated, CaseSelection, RotatedError,
    RotatedInput, SolveOptions,
};
use orbita_core::sweep::{range_inclusive, sweep, CSV_HEADER};
use orbita_core::transfer::{impulses_with_tol, validate_plan, TransferPlan, PLAN_TOL};

const EXIT_VALIDATION: u8 = 2;
const EXIT_INFEASIBLE: u8 = 3;
const EXIT_CHECK_FAILED: u8 = 1;
const EXIT_USAGE: u8 = 64;

#[derive(Parser, Debug)]
#[command(
    name = "orbita",
    version,
    about = "Minimum-fuel two-impulse orbit transfers"
)]
struct Cli {
    /// Root refinement tolerance for the polynomial solvers.
    #[arg(long, global = true, default_value_t = DEFAULT_ROOT_TOL, allow_hyphen_values = true)]
    tol: f64,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Transfer between two coplanar circular orbits.
    Hohmann(HohmannArgs),
    /// Minimum f2 transfer between two given points and velocities.
    Lambert {
        /// JSON file with `r0`, `r1`, `w0`, `w1star`.
        input: PathBuf,
    },
    /// Transfer between two identical ellipses rotated by an angle.
    Rotated(RotatedArgs),
    /// Sweep eccentricity and angle; writes CSV.
    SweepRotated(SweepArgs),
    /// Residuals and costs of a plan given as JSON.
    EvalPlan { path: PathBuf },
    /// Compare a solver answer with the brute-force planar oracle.
    OracleCheck(OracleArgs),
}

#[derive(Args, Debug)]
struct HohmannArgs {
    #[arg(long, allow_hyphen_values = true)]
    r0: f64,
    #[arg(long, allow_hyphen_values = true)]
    r2: f64,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    dir0: i8,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    dir2: i8,
    /// Print every branch instead of the best one.
    #[arg(long)]
    all_branches: bool,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Cases {
    All,
    Case1,
    Case2a,
    Case2b,
}

impl From<Cases> for CaseSelection {
    fn from(c: Cases) -> Self {
        match c {
            Cases::All => CaseSelection::All,
            Cases::Case1 => CaseSelection::Case1,
            Cases::Case2a => CaseSelection::Case2a,
            Cases::Case2b => CaseSelection::Case2b,
        }
    }
}

#[derive(Args, Debug)]
struct RotatedArgs {
    #[arg(long, required_unless_present = "s0x", allow_hyphen_values = true)]
    e: Option<f64>,
    /// Rotation angle in degrees, in (0, 180].
    #[arg(long, required_unless_present = "s0x", allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Exact `s0x`, e.g. `3/10`; use with `--s0y` instead of `--e`/`--alpha`.
    #[arg(long, requires = "s0y", conflicts_with_all = ["e", "alpha"], allow_hyphen_values = true)]
    s0x: Option<String>,
    #[arg(long, requires = "s0x", allow_hyphen_values = true)]
    s0y: Option<String>,
    #[arg(long, value_enum, default_value_t = Cases::All)]
    cases: Cases,
    /// Include every candidate, not only the winner.
    #[arg(long)]
    all: bool,
}

#[derive(Args, Debug)]
struct SweepArgs {
    /// `lo:hi:step`
    #[arg(long, default_value = "0.1:0.9:0.1")]
    e: String,
    /// `lo:hi:step` in degrees
    #[arg(long, default_value = "5:175:5")]
    alpha: String,
    /// Also add the alpha = 180 row for every eccentricity.
    #[arg(long)]
    include_180: bool,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum Problem {
    Hohmann,
    Rotated,
}

#[derive(Args, Debug)]
struct OracleArgs {
    #[arg(long, value_enum)]
    problem: Problem,
    #[arg(long, allow_hyphen_values = true)]
    r0: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    r2: Option<f64>,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    dir0: i8,
    #[arg(long, default_value_t = 1, allow_hyphen_values = true)]
    dir2: i8,
    #[arg(long, allow_hyphen_values = true)]
    e: Option<f64>,
    #[arg(long, allow_hyphen_values = true)]
    alpha: Option<f64>,
    /// Grid points per dimension.
    #[arg(long, default_value_t = 64)]
    grid: usize,
    /// Relative slack before the oracle counts as better.
    #[arg(long, default_value_t = 1e-6)]
    slack: f64,
}

struct Failure {
    code: u8,
    msg: String,
}

fn validation(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_VALIDATION,
        msg: msg.into(),
    }
}

fn infeasible(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_INFEASIBLE,
        msg: msg.into(),
    }
}

fn rotated_failure(e: RotatedError) -> Failure {
    match e {
        RotatedError::InvalidInput(m) => validation(m),
        other => infeasible(other.to_string()),
    }
}

fn print_json<T: Serialize>(v: &T) -> Result<(), Failure> {
    let s = serde_json::to_string_pretty(v)
        .map_err(|e| infeasible(format!("serialization failed: {e}")))?;
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{s}") {
        Err(e) if e.kind() != std::io::ErrorKind::BrokenPipe => {
            Err(infeasible(format!("writing output: {e}")))
        }
        _ => Ok(()),
    }
}

/// Re-checks a plan before it is printed.
fn checked(plan: &TransferPlan) -> Result<(), Failure> {
    match validate_plan(plan).first_violation(PLAN_TOL) {
        Some(r) => Err(infeasible(format!("solver returned an invalid plan: {r}"))),
        None => Ok(()),
    }
}

fn parse_range(s: &str) -> Result<Vec<f64>, Failure> {
    let parts: Vec<&str> = s.split(':').collect();
    let num = |x: &str| {
        x.trim()
            .parse::<f64>()
            .map_err(|_| validation(format!("bad number {x:?} in range {s:?}")))
    };
    match parts.as_slice() {
        [v] => Ok(vec![num(v)?]),
        [lo, hi, step] => {
            let r = range_inclusive(num(lo)?, num(hi)?, num(step)?);
            if r.is_empty() {
                return Err(validation(format!("empty range {s:?}")));
            }
            Ok(r)
        }
        _ => Err(validation(format!(
            "range {s:?} must be `value` or `lo:hi:step`"
        ))),
    }
}

fn hohmann(args: &HohmannArgs) -> Result<(), Failure> {
    let inp = HohmannInput::from_radii(args.r0, args.r2, args.dir0, args.dir2)
        .map_err(|e| validation(e.to_string()))?;
    let branches = all_branches(&inp);
    for b in branches.iter().filter(|b| b.feasible) {
        checked(&b.plan)?;
    }
    if args.all_branches {
        return print_json(&json!({ "input": inp, "branches": branches }));
    }
    let best = branches
        .into_iter()
        .find(|b| b.feasible)
        .ok_or_else(|| infeasible("no feasible branch"))?;
    print_json(&best)
}

fn lambert(path: &PathBuf) -> Result<(), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    let raw: LambertInput =
        serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    let inp = LambertInput::new(raw.r0, raw.r1, raw.w0, raw.w1star)
        .map_err(|e| validation(e.to_string()))?;
    match solve_lambert(&inp) {
        Ok(rep) => print_json(&json!({
            "minimum": rep.best(),
            "candidates": rep.candidates,
            "frame": rep.frame,
        })),
        Err(e @ (LambertError::ZeroPosition | LambertError::RadiusMismatch { .. })) => {
            Err(validation(e.to_string()))
        }
        Err(e) => Err(infeasible(e.to_string())),
    }
}

fn rotated_input(
    e: Option<f64>,
    alpha: Option<f64>,
    s0x: &Option<String>,
    s0y: &Option<String>,
) -> Result<RotatedInput, Failure> {
    if let (Some(x), Some(y)) = (s0x, s0y) {
        let p = |s: &str| {
            s.trim()
                .parse::<Rat>()
                .map_err(|_| validation(format!("bad rational {s:?}")))
        };
        return RotatedInput::from_rationals(p(x)?, p(y)?).map_err(rotated_failure);
    }
    let (Some(e), Some(a)) = (e, alpha) else {
        return Err(validation("need --e and --alpha, or --s0x and --s0y"));
    };
    params_from_angle(e, a).map_err(rotated_failure)
}

fn rotated(args: &RotatedArgs, tol: f64) -> Result<(), Failure> {
    let inp = rotated_input(args.e, args.alpha, &args.s0x, &args.s0y)?;
    let opts = SolveOptions {
        cases: args.cases.into(),
        root_tol: tol,
    };
    let sol = solve_rotated(&inp, &opts).map_err(rotated_failure)?;
    checked(&sol.winner.plan)?;
    let apogee = apogee_to_apogee_cost(&inp).ok();
    let ratio = apogee.as_ref().map(|a| 100.0 * sol.winner.f1 / a.f1);
    let mut out = json!({
        "input": inp,
        "winner": sol.winner,
        "apogee": apogee,
        "ratio_pct": ratio,
    });
    if args.all {
        out["candidates"] =
            serde_json::to_value(&sol.all).map_err(|e| infeasible(e.to_string()))?;
    }
    print_json(&out)
}

fn sweep_rotated(args: &SweepArgs, tol: f64) -> Result<(), Failure> {
    let es = parse_range(&args.e)?;
    let mut alphas = parse_range(&args.alpha)?;
    if let Some(bad) = es.iter().find(|e| !(0.0..1.0).contains(*e)) {
        return Err(validation(format!("eccentricity {bad} outside [0, 1)")));
    }
    if let Some(bad) = alphas.iter().find(|a| !(**a > 0.0 && **a < 180.0)) {
        return Err(validation(format!(
            "angle {bad} outside (0, 180); use --include-180 for the half turn"
        )));
    }
    if args.include_180 {
        alphas.push(180.0);
    }
    let opts = SolveOptions {
        root_tol: tol,
        ..Default::default()
    };
    let rows = sweep(&es, &alphas, &opts).map_err(rotated_failure)?;
    let mut w = csv::Writer::from_path(&args.out)
        .map_err(|e| validation(format!("{}: {e}", args.out.display())))?;
    let io = |e: csv::Error| infeasible(format!("writing {}: {e}", args.out.display()));
    w.write_record(CSV_HEADER).map_err(io)?;
    for r in &rows {
        w.write_record(r.csv_row()).map_err(io)?;
    }
    w.flush().map_err(|e| infeasible(e.to_string()))?;
    eprintln!("wrote {} rows to {}", rows.len(), args.out.display());
    Ok(())
}

fn eval_plan(path: &PathBuf) -> Result<(), Failure> {
    let text =
        fs::read_to_string(path).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    let plan: TransferPlan =
        serde_json::from_str(&text).map_err(|e| validation(format!("{}: {e}", path.display())))?;
    plan.check_shape().map_err(|e| validation(e.to_string()))?;
    let residuals = validate_plan(&plan);
    if let Some(r) = residuals.first_violation(PLAN_TOL) {
        return Err(validation(format!("{r}")));
    }
    let cost = impulses_with_tol(&plan, PLAN_TOL).map_err(|e| validation(e.to_string()))?;
    print_json(&json!({ "residuals": residuals, "cost": cost }))
}

fn oracle_check(args: &OracleArgs, tol: f64) -> Result<(), Failure> {
    let cfg = OracleConfig {
        grid_points_per_dim: args.grid,
        ..Default::default()
    };
    let (solver_f1, plan) = match args.problem {
        Problem::Hohmann => {
            let (Some(r0), Some(r2)) = (args.r0, args.r2) else {
                return Err(validation("hohmann check needs --r0 and --r2"));
            };
            let inp = HohmannInput::from_radii(r0, r2, args.dir0, args.dir2)
                .map_err(|e| validation(e.to_string()))?;
            let best = all_branches(&inp)
                .into_iter()
                .find(|b| b.feasible)
                .ok_or_else(|| infeasible("no feasible branch"))?;
            (best.f1, best.plan)
        }
        Problem::Rotated => {
            let inp = rotated_input(args.e, args.alpha, &None, &None)?;
            let opts = SolveOptions {
                root_tol: tol,
                ..Default::default()
            };
            let sol = solve_rotated(&inp, &opts).map_err(rotated_failure)?;
            (sol.winner.f1, sol.winner.plan)
        }
    };
    let n = plan.orbits.len();
    let o = planar_two_impulse_min(&plan.orbits[0], &plan.orbits[n - 1], CostKind::F1, &cfg)
        .map_err(|e| validation(e.to_string()))?;
    let ok = o.cost >= solver_f1 - args.slack * solver_f1.abs().max(1e-12);
    print_json(&json!({
        "solver_f1": solver_f1,
        "oracle_f1": o.cost,
        "oracle_grid_f1": o.grid_cost,
        "gap": o.cost - solver_f1,
        "ok": ok,
    }))?;
    if ok {
        Ok(())
    } else {
        Err(Failure {
            code: EXIT_CHECK_FAILED,
            msg: "oracle found a cheaper transfer".into(),
        })
    }
}

fn init_threads() -> Result<(), Failure> {
    let Ok(v) = std::env::var("ORBITA_THREADS") else {
        return Ok(());
    };
    let n: usize = v.parse().ok().filter(|n| *n > 0).ok_or_else(|| {
        validation(format!(
            "ORBITA_THREADS must be a positive integer, got {v:?}"
        ))
    })?;
    rayon::ThreadPoolBuilder::new()
        .num_threads(n)
        .build_global()
        .map_err(|e| infeasible(e.to_string()))
}

fn run(cli: &Cli) -> Result<(), Failure> {
    if !(cli.tol > 0.0 && cli.tol.is_finite()) {
        return Err(validation("--tol must be positive"));
    }
    init_threads()?;
    match &cli.command {
        Command::Hohmann(a) => hohmann(a),
        Command::Lambert { input } => lambert(input),
        Command::Rotated(a) => rotated(a, cli.tol),
        Command::SweepRotated(a) => sweep_rotated(a, cli.tol),
        Command::EvalPlan { path } => eval_plan(path),
        Command::OracleCheck(a) => oracle_check(a, cli.tol),
    }
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() {
                ExitCode::from(EXIT_USAGE)
            } else {
                ExitCode::SUCCESS
            };
        }
    };
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.msg);
            ExitCode::from(f.code)
        }
    }
}
