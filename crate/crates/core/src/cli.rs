//! Command-line front end.
//!
//! Subcommands:
//!
//! - `verdict`: steering and entanglement reports for a state read from a
//!   JSON file;
//! - `family`: emit a family member in the state-file JSON format;
//! - `sweep`: bisect a detector threshold along one family parameter, or dump
//!   the 101-point pre-scan table as CSV;
//! - `region`: CSV detection-region scan of the werner_derivative family;
//! - `selftest`: run the acceptance matrix and report pass/fail per check.
//!
//! Exit codes: 0 on success, 2 for invalid input (bad flags, malformed or
//! invalid state files, out-of-range parameters, flat or non-monotone
//! sweeps), 1 for internal errors.

use std::fmt::Write as _;
use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::entdetect::{ppt_report, spa_report, DetectError, EntanglementReport};
use crate::matcore::MatError;
use crate::selftest::{run_all, SelftestConfig};
use crate::states::{make_family, Family, FamilySpec, StateError, StateFile};
use crate::steer::{thm1_verdict, SteerError, SteeringReport, DEFAULT_MU, MU_MAX};
use crate::sweep::{
    find_threshold, prescan_table, region_scan, AxisSpec, Detector, SweepError, SweepSpec,
};

/// Environment variable scaling every selftest tolerance; values other than 1
/// deliberately corrupt the gate (0 fails every numeric check).
pub const TOL_SCALE_ENV: &str = "STEERDET_TOL_SCALE";

#[derive(Debug)]
enum CliError {
    /// User-correctable problem: exit code 2.
    Input(String),
    /// Unexpected internal failure: exit code 1.
    Internal(String),
}

impl CliError {
    fn exit_code(&self) -> i32 {
        match self {
            CliError::Input(_) => 2,
            CliError::Internal(_) => 1,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::Internal(m) => m,
        }
    }
}

fn input_err(e: impl std::fmt::Display) -> CliError {
    CliError::Input(e.to_string())
}

fn internal_err(e: impl std::fmt::Display) -> CliError {
    CliError::Internal(e.to_string())
}

fn classify_state(e: StateError) -> CliError {
    match e {
        StateError::Mat(MatError::TooLarge { .. }) => input_err(e),
        StateError::Mat(_)
        | StateError::Channel(_)
        | StateError::CorrelationNotReal { .. }
        | StateError::CorrelationOutOfRange { .. } => internal_err(e),
        _ => input_err(e),
    }
}

fn classify_detect(e: DetectError) -> CliError {
    match e {
        DetectError::Mat(_) => internal_err(e),
        DetectError::State(inner) => classify_state(inner),
    }
}

fn classify_steer(e: SteerError) -> CliError {
    match e {
        SteerError::Mat(_) => internal_err(e),
        SteerError::State(inner) => classify_state(inner),
        SteerError::Detect(inner) => classify_detect(inner),
        _ => input_err(e),
    }
}

fn classify_sweep(e: SweepError) -> CliError {
    match e {
        SweepError::State(inner) => classify_state(inner),
        SweepError::Steer(inner) => classify_steer(inner),
        SweepError::IterationCap => internal_err(e),
        _ => input_err(e),
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

fn parse_param(s: &str) -> Result<(String, f64), String> {
    let (name, value) = s
        .split_once('=')
        .ok_or_else(|| format!("expected name=value, got '{s}'"))?;
    let value: f64 = value
        .trim()
        .parse()
        .map_err(|e| format!("parameter '{name}': {e}"))?;
    Ok((name.trim().to_string(), value))
}

fn parse_grid(s: &str) -> Result<(usize, usize), String> {
    let (n, m) = s
        .split_once(['x', 'X'])
        .ok_or_else(|| format!("expected NxM, got '{s}'"))?;
    let n = n.parse().map_err(|e| format!("grid rows: {e}"))?;
    let m = m.parse().map_err(|e| format!("grid cols: {e}"))?;
    Ok((n, m))
}

#[derive(Debug, Parser)]
#[command(
    name = "steerdet",
    about = "Detect EPR steering of bipartite states by testing entanglement of locally depolarized mixtures",
    version
)]
pub struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Steering and entanglement verdicts for a state file.
    Verdict(VerdictArgs),
    /// Emit a parametric family member as a state JSON file.
    Family(FamilyArgs),
    /// Bisect a detector threshold along one family parameter.
    Sweep(SweepArgs),
    /// Scan the werner_derivative detection region and emit CSV.
    Region(RegionArgs),
    /// Run the acceptance matrix and print one line per check.
    Selftest(SelftestArgs),
}

#[derive(Debug, Args)]
struct VerdictArgs {
    /// Path to a state file: {"dims":[dA,dB],"matrix":[[re,im],...]}.
    #[arg(long)]
    input: PathBuf,
    /// Mixing parameter for the steering maps, in [0, 1/√3].
    #[arg(long, default_value_t = DEFAULT_MU)]
    mu: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct FamilyArgs {
    /// Family name (werner, munro, werner_derivative, nmems, msms, one_way,
    /// amp_damp_bell, lossy_werner).
    #[arg(long)]
    family: String,
    /// Family parameter, repeatable: --param p=0.7 --param mu=0.3.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SweepArgs {
    /// Family name.
    #[arg(long)]
    family: String,
    /// Pinned parameters; the one left unset is swept.
    #[arg(long = "param", value_parser = parse_param)]
    params: Vec<(String, f64)>,
    /// Detector: thm1, thm1_ba, thm1_ab, ls2 or ls3.
    #[arg(long, default_value = "thm1")]
    detector: String,
    /// Mixing parameter for the steering maps.
    #[arg(long, default_value_t = DEFAULT_MU)]
    mu: f64,
    /// Lower end of the sweep (defaults to the parameter's domain).
    #[arg(long, allow_negative_numbers = true)]
    lo: Option<f64>,
    /// Upper end of the sweep (defaults to the parameter's domain).
    #[arg(long, allow_negative_numbers = true)]
    hi: Option<f64>,
    /// Bisection tolerance on the swept parameter.
    #[arg(long, default_value_t = crate::sweep::DEFAULT_TOL)]
    tol: f64,
    /// json: the threshold result; csv: the 101-point pre-scan table.
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct RegionArgs {
    /// Family name; only werner_derivative is supported.
    #[arg(long, default_value = "werner_derivative")]
    family: String,
    /// Grid as alpha_steps x theta_steps.
    #[arg(long, value_parser = parse_grid, default_value = "201x201")]
    grid: (usize, usize),
    /// Mixing parameter for the steering maps.
    #[arg(long, default_value_t = DEFAULT_MU)]
    mu: f64,
    /// Output file (stdout when absent).
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Debug, Args)]
struct SelftestArgs {
    /// Seed for the randomized checks.
    #[arg(long, default_value_t = 42)]
    seed: u64,
}

/// Parse arguments and run; returns the process exit code.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message());
            e.exit_code()
        }
    }
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Verdict(args) => run_verdict(args).map(|()| 0),
        Command::Family(args) => run_family(args).map(|()| 0),
        Command::Sweep(args) => run_sweep(args).map(|()| 0),
        Command::Region(args) => run_region(args).map(|()| 0),
        Command::Selftest(args) => run_selftest(args),
    }
}

fn emit(out: Option<&Path>, content: &str) -> Result<(), CliError> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| input_err(format!("cannot write {}: {e}", path.display()))),
        None => {
            let mut stdout = std::io::stdout().lock();
            stdout
                .write_all(content.as_bytes())
                .map_err(|e| internal_err(format!("stdout: {e}")))
        }
    }
}

/// Combined verdict payload for one state.
#[derive(Debug, Serialize)]
struct VerdictOutput {
    steering: SteeringReport,
    ppt: EntanglementReport,
    /// Present only for two-qubit states.
    #[serde(skip_serializing_if = "Option::is_none")]
    spa: Option<EntanglementReport>,
}

fn check_mu_arg(mu: f64) -> Result<(), CliError> {
    if !mu.is_finite() || !(0.0..=MU_MAX + 1e-12).contains(&mu) {
        return Err(input_err(format!("--mu {mu} outside [0, 1/√3]")));
    }
    Ok(())
}

fn run_verdict(args: VerdictArgs) -> Result<(), CliError> {
    check_mu_arg(args.mu)?;
    let text = fs::read_to_string(&args.input)
        .map_err(|e| input_err(format!("cannot read {}: {e}", args.input.display())))?;
    let file: StateFile = serde_json::from_str(&text)
        .map_err(|e| input_err(format!("malformed state file: {e}")))?;
    let rho = file.to_state().map_err(classify_state)?;

    let steering = thm1_verdict(&rho, args.mu).map_err(classify_steer)?;
    let ppt = ppt_report(&rho).map_err(classify_detect)?;
    let dims = rho.dims();
    let spa = if dims.d_a == 2 && dims.d_b == 2 {
        Some(spa_report(&rho).map_err(classify_detect)?)
    } else {
        None
    };

    let output = VerdictOutput { steering, ppt, spa };
    let json = serde_json::to_string_pretty(&output).map_err(internal_err)?;
    emit(args.out.as_deref(), &format!("{json}\n"))
}

fn parse_family(name: &str) -> Result<Family, CliError> {
    name.parse::<Family>().map_err(classify_state)
}

fn run_family(args: FamilyArgs) -> Result<(), CliError> {
    let family = parse_family(&args.family)?;
    let pairs: Vec<(&str, f64)> = args
        .params
        .iter()
        .map(|(k, v)| (k.as_str(), *v))
        .collect();
    let spec = FamilySpec::new(family, &pairs).map_err(classify_state)?;
    let rho = make_family(&spec).map_err(classify_state)?;
    let json = serde_json::to_string_pretty(&StateFile::from_state(&rho)).map_err(internal_err)?;
    emit(args.out.as_deref(), &format!("{json}\n"))
}

/// Split the parameter list into pinned values and the single swept name.
fn resolve_sweep_spec(family: Family, params: &[(String, f64)]) -> Result<SweepSpec, CliError> {
    for (name, _) in params {
        if !family.params().iter().any(|&(n, _, _)| n == name) {
            return Err(input_err(format!(
                "family '{family}' has no parameter '{name}'"
            )));
        }
    }
    let free: Vec<&str> = family
        .params()
        .iter()
        .map(|&(n, _, _)| n)
        .filter(|n| !params.iter().any(|(given, _)| given == n))
        .collect();
    match free.as_slice() {
        [name] => {
            let pinned: Vec<(&str, f64)> = params.iter().map(|(k, v)| (k.as_str(), *v)).collect();
            SweepSpec::new(family, name, &pinned).map_err(classify_sweep)
        }
        [] => Err(input_err(format!(
            "family '{family}' has no free parameter left to sweep; drop one --param"
        ))),
        names => Err(input_err(format!(
            "family '{family}' has several unset parameters ({}); pin all but one with --param",
            names.join(", ")
        ))),
    }
}

fn run_sweep(args: SweepArgs) -> Result<(), CliError> {
    check_mu_arg(args.mu)?;
    let family = parse_family(&args.family)?;
    let detector = Detector::parse(&args.detector).map_err(classify_sweep)?;
    let spec = resolve_sweep_spec(family, &args.params)?;
    let (domain_lo, domain_hi) = spec.free_range();
    let lo = args.lo.unwrap_or(domain_lo);
    let hi = args.hi.unwrap_or(domain_hi);
    if lo < domain_lo || hi > domain_hi {
        return Err(input_err(format!(
            "sweep range [{lo}, {hi}] outside the domain [{domain_lo}, {domain_hi}] of '{}'",
            spec.free
        )));
    }

    match args.format {
        Format::Json => {
            let result = find_threshold(&spec, detector, args.mu, lo, hi, args.tol)
                .map_err(classify_sweep)?;
            let json = serde_json::to_string_pretty(&result).map_err(internal_err)?;
            emit(args.out.as_deref(), &format!("{json}\n"))
        }
        Format::Csv => {
            let rows = prescan_table(&spec, args.mu, lo, hi).map_err(classify_sweep)?;
            let mut csv = String::from("param,thm1_ba,thm1_ab,ls2,ls3\n");
            for row in rows {
                let [ba, ab, ls2, ls3] = row.verdicts.map(u8::from);
                writeln!(csv, "{:.6},{ba},{ab},{ls2},{ls3}", row.param).expect("string write");
            }
            emit(args.out.as_deref(), &csv)
        }
    }
}

fn run_region(args: RegionArgs) -> Result<(), CliError> {
    check_mu_arg(args.mu)?;
    let family = parse_family(&args.family)?;
    if family != Family::WernerDerivative {
        return Err(input_err(format!(
            "region scan supports only werner_derivative, got '{family}'"
        )));
    }
    let (alpha_steps, theta_steps) = args.grid;
    let grid = region_scan(
        AxisSpec {
            min: 0.0,
            max: 1.0,
            steps: alpha_steps,
        },
        AxisSpec {
            min: 0.0,
            max: std::f64::consts::FRAC_PI_4,
            steps: theta_steps,
        },
        args.mu,
    )
    .map_err(classify_sweep)?;

    let mut csv = String::from("alpha,theta,thm1_ba,thm1_ab,ls2,ls3\n");
    for (ia, &alpha) in grid.alphas.iter().enumerate() {
        for (it, &theta) in grid.thetas.iter().enumerate() {
            let cell = grid.cell(ia, it);
            writeln!(
                csv,
                "{alpha:.6},{theta:.6},{},{},{},{}",
                u8::from(cell.thm1_ba),
                u8::from(cell.thm1_ab),
                u8::from(cell.ls2),
                u8::from(cell.ls3),
            )
            .expect("string write");
        }
    }
    emit(args.out.as_deref(), &csv)
}

fn run_selftest(args: SelftestArgs) -> Result<i32, CliError> {
    let tol_scale = match std::env::var(TOL_SCALE_ENV) {
        Ok(raw) => {
            let parsed: f64 = raw
                .parse()
                .map_err(|e| input_err(format!("{TOL_SCALE_ENV}='{raw}': {e}")))?;
            if !parsed.is_finite() || parsed < 0.0 {
                return Err(input_err(format!(
                    "{TOL_SCALE_ENV} must be finite and non-negative, got {raw}"
                )));
            }
            parsed
        }
        Err(_) => 1.0,
    };
    if tol_scale != 1.0 {
        println!("note: tolerances scaled by {tol_scale} via {TOL_SCALE_ENV}");
    }

    let cfg = SelftestConfig {
        seed: args.seed,
        tol_scale,
    };
    let results = run_all(&cfg);
    let mut failed = 0;
    for check in &results {
        println!(
            "[{}] C{:02} {} — {}",
            if check.pass { "PASS" } else { "FAIL" },
            check.criterion,
            check.name,
            check.summary
        );
        if !check.pass {
            failed += 1;
        }
    }
    println!(
        "{} checks: {} passed, {} failed (seed {})",
        results.len(),
        results.len() - failed,
        failed,
        cfg.seed
    );
    Ok(if failed == 0 { 0 } else { 1 })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn param_and_grid_parsers() {
        assert_eq!(parse_param("p=0.7").unwrap(), ("p".to_string(), 0.7));
        assert_eq!(parse_param(" mu = 0.3 ").unwrap().1, 0.3);
        assert!(parse_param("p").is_err());
        assert!(parse_param("p=abc").is_err());
        assert_eq!(parse_grid("201x201").unwrap(), (201, 201));
        assert_eq!(parse_grid("11X21").unwrap(), (11, 21));
        assert!(parse_grid("201").is_err());
    }

    #[test]
    fn sweep_spec_resolution() {
        let spec = resolve_sweep_spec(Family::LossyWerner, &[("mu".to_string(), 0.3)]).unwrap();
        assert_eq!(spec.free, "p");

        let err = resolve_sweep_spec(Family::LossyWerner, &[]).unwrap_err();
        assert!(err.message().contains("several unset"));

        let err = resolve_sweep_spec(Family::Werner, &[("p".to_string(), 0.5)]).unwrap_err();
        assert!(err.message().contains("no free parameter"));

        let err = resolve_sweep_spec(Family::Werner, &[("q".to_string(), 0.5)]).unwrap_err();
        assert!(err.message().contains("no parameter 'q'"));
    }

    #[test]
    fn error_classification_exit_codes() {
        assert_eq!(
            classify_state(StateError::TraceNotOne { trace: 0.9 }).exit_code(),
            2
        );
        assert_eq!(classify_sweep(SweepError::IterationCap).exit_code(), 1);
        assert_eq!(classify_steer(SteerError::MuOutOfRange(0.9)).exit_code(), 2);
    }
}
