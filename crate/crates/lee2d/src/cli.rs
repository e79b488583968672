//! JSON-configured front end: `sigma`, `boundstate`, `verify`, `limit-study`.
//!
//! Exit codes are a contract: 0 success, 1 verification failure, 2 config
//! error, 3 numerical error. Outputs are deterministic: CSV rows are printed
//! with `{:.16e}` (17 significant digits), LF line endings, grid order.

use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use serde::Deserialize;

use crate::error::Error;
use crate::model::{FormFactor, MassSpectrum, ModelParams};
use crate::renorm::{
    bare_internal_energy, contact_lambda, renormalized_coupling_sq, solve_bound_state,
    BareCouplingSq, PhysicalParams,
};
use crate::scattering::cross_section_point;
use crate::verify::{default_suite, limit_convergence_study, log_grid};

#[derive(Debug, Parser)]
#[command(
    name = "lee2d",
    version,
    about = "Scattering observables of a solvable two-particle pair model in two dimensions"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Sweep cross-section observables over the configured momentum grid
    Sigma(CommonArgs),
    /// Solve the bound state of a bare, regulated parameterization
    Boundstate(CommonArgs),
    /// Run the closed-form-versus-oracle check suite
    Verify(VerifyArgs),
    /// Convergence-rate study toward the contact limit
    #[command(name = "limit-study")]
    LimitStudy(CommonArgs),
}

#[derive(Debug, Args)]
pub struct CommonArgs {
    /// Path to the JSON configuration
    #[arg(long)]
    pub config: PathBuf,
    /// Override the primary output path from the config
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct VerifyArgs {
    /// Path to a JSON configuration (validated, not otherwise used)
    #[arg(long)]
    pub config: Option<PathBuf>,
    /// Override the report path from the config
    #[arg(long)]
    pub out: Option<PathBuf>,
    /// Override every check tolerance
    #[arg(long)]
    pub tol: Option<f64>,
}

/// Failure category carrying the process exit code.
#[derive(Debug)]
pub enum CliError {
    /// Unreadable, unparsable, or invalid configuration (exit 2).
    Config(String),
    /// A computation failed: no root, quadrature, degenerate grid (exit 3).
    Numeric(String),
    /// One or more verification checks failed (exit 1).
    ChecksFailed(usize),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::ChecksFailed(_) => 1,
            CliError::Config(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Config(m) => write!(f, "config: {m}"),
            CliError::Numeric(m) => write!(f, "numeric: {m}"),
            CliError::ChecksFailed(n) => write!(f, "{n} verification check(s) failed"),
        }
    }
}

fn config_err(m: impl fmt::Display) -> CliError {
    CliError::Config(m.to_string())
}

fn numeric_err(e: Error) -> CliError {
    CliError::Numeric(e.to_string())
}

// ---------------------------------------------------------------------------
// Configuration schema.

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SweepConfig {
    pub masses: Masses,
    pub parameterization: Parameterization,
    #[serde(default)]
    pub sweep: Option<SweepGrid>,
    #[serde(default)]
    pub limit_study: Option<LimitStudySection>,
    #[serde(default)]
    pub outputs: Outputs,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Masses {
    #[serde(rename = "M")]
    pub m_n: f64,
    #[serde(rename = "m")]
    pub m_theta: f64,
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum Parameterization {
    Bare {
        u0: f64,
        g0: f64,
        form_factor: FormFactorSpec,
    },
    Physical {
        e0: f64,
        g0_sq: CouplingSpec,
    },
}

#[derive(Debug, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case", deny_unknown_fields)]
pub enum FormFactorSpec {
    Local,
    SharpCutoff { lambda: f64 },
    Gaussian { lambda: f64 },
}

impl From<&FormFactorSpec> for FormFactor {
    fn from(s: &FormFactorSpec) -> FormFactor {
        match *s {
            FormFactorSpec::Local => FormFactor::Local,
            FormFactorSpec::SharpCutoff { lambda } => FormFactor::SharpCutoff { lambda },
            FormFactorSpec::Gaussian { lambda } => FormFactor::Gaussian { lambda },
        }
    }
}

/// Squared bare coupling in config: a number, or the token "infinity" for
/// the contact limit (JSON has no native infinity).
#[derive(Debug, Deserialize)]
#[serde(untagged)]
pub enum CouplingSpec {
    Value(f64),
    Token(String),
}

impl CouplingSpec {
    fn resolve(&self) -> Result<BareCouplingSq, CliError> {
        match self {
            CouplingSpec::Value(v) => Ok(BareCouplingSq::Finite(*v)),
            CouplingSpec::Token(t) if t == "infinity" => Ok(BareCouplingSq::Infinite),
            CouplingSpec::Token(t) => Err(config_err(format!(
                "g0_sq must be a number or \"infinity\", got \"{t}\""
            ))),
        }
    }
}

#[derive(Debug, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub struct SweepGrid {
    pub k_min: f64,
    pub k_max: f64,
    pub n_points: usize,
    pub spacing: Spacing,
}

#[derive(Debug, Clone, Copy, PartialEq, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Spacing {
    Linear,
    Log,
}

#[derive(Debug, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct LimitStudySection {
    pub k: f64,
    pub g0_sq_min: f64,
    pub g0_sq_max: f64,
    pub n_points: usize,
}

#[derive(Debug, Default, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Outputs {
    #[serde(default)]
    pub csv_path: Option<PathBuf>,
    #[serde(default)]
    pub report_path: Option<PathBuf>,
}

pub fn load_config(path: &Path) -> Result<SweepConfig, CliError> {
    let text = fs::read_to_string(path)
        .map_err(|e| config_err(format!("cannot read {}: {e}", path.display())))?;
    serde_json::from_str(&text)
        .map_err(|e| config_err(format!("cannot parse {}: {e}", path.display())))
}

/// Momentum grid per the sweep section; all structural problems are config
/// errors.
fn sweep_grid(s: &SweepGrid) -> Result<Vec<f64>, CliError> {
    if !(s.k_min > 0.0 && s.k_min.is_finite()) {
        return Err(config_err("sweep.k_min must be positive and finite"));
    }
    if !(s.k_max > s.k_min && s.k_max.is_finite()) {
        return Err(config_err("sweep.k_max must exceed k_min and be finite"));
    }
    if s.n_points < 2 {
        return Err(config_err("sweep.n_points must be at least 2"));
    }
    Ok(match s.spacing {
        Spacing::Linear => {
            let step = (s.k_max - s.k_min) / (s.n_points - 1) as f64;
            (0..s.n_points).map(|i| s.k_min + i as f64 * step).collect()
        }
        Spacing::Log => log_grid(s.k_min, s.k_max, s.n_points),
    })
}

/// The theory a config describes, before any solving.
enum Theory {
    Bare(ModelParams),
    Physical(PhysicalParams),
}

/// Stage one: construct parameters from config. Every failure here is a
/// config error; numerical work has not started yet.
fn build_theory(cfg: &SweepConfig) -> Result<Theory, CliError> {
    match &cfg.parameterization {
        Parameterization::Bare {
            u0,
            g0,
            form_factor,
        } => {
            let p = ModelParams::new(
                cfg.masses.m_n,
                cfg.masses.m_theta,
                *u0,
                *g0,
                form_factor.into(),
            )
            .map_err(config_err)?;
            Ok(Theory::Bare(p))
        }
        Parameterization::Physical { e0, g0_sq } => {
            let masses =
                MassSpectrum::new(cfg.masses.m_n, cfg.masses.m_theta).map_err(config_err)?;
            let phys = PhysicalParams::new(*e0, masses.mu, g0_sq.resolve()?).map_err(config_err)?;
            Ok(Theory::Physical(phys))
        }
    }
}

fn write_text(path: &Path, text: &str) -> Result<(), CliError> {
    fs::write(path, text).map_err(|e| config_err(format!("cannot write {}: {e}", path.display())))
}

fn coupling_json(g: BareCouplingSq) -> serde_json::Value {
    match g {
        BareCouplingSq::Finite(v) => serde_json::json!(v),
        BareCouplingSq::Infinite => serde_json::json!("infinity"),
    }
}

// ---------------------------------------------------------------------------
// Subcommands.

fn cmd_sigma(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let sweep = cfg
        .sweep
        .as_ref()
        .ok_or_else(|| config_err("sigma requires a sweep section"))?;
    let grid = sweep_grid(sweep)?;
    let csv_path = args
        .out
        .clone()
        .or_else(|| cfg.outputs.csv_path.clone())
        .ok_or_else(|| config_err("no CSV output: set outputs.csv_path or pass --out"))?;

    // Stage two: resolve the physical parameters, solving the bound state
    // for a bare parameterization first.
    let (phys, solved_e0) = match build_theory(&cfg)? {
        Theory::Physical(p) => (p, None),
        Theory::Bare(p) => {
            let e0 = solve_bound_state(&p).map_err(numeric_err)?;
            let phys = PhysicalParams::new(e0, p.masses.mu, BareCouplingSq::Finite(p.g0_sq()))
                .map_err(numeric_err)?;
            (phys, Some(e0))
        }
    };

    let mut csv = String::from("k,dsigma_dphi,sigma,delta0,re_bracket,im_bracket\n");
    for &k in &grid {
        let p = cross_section_point(&phys, k).map_err(numeric_err)?;
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e},{:.16e},{:.16e},{:.16e}\n",
            p.k, p.dsigma_dphi, p.sigma, p.delta0, p.bracket.re, p.bracket.im
        ));
    }
    write_text(&csv_path, &csv)?;

    if let Some(report_path) = &cfg.outputs.report_path {
        let report = serde_json::json!({
            "subcommand": "sigma",
            "e0": phys.e0(),
            "solved_e0": solved_e0,
            "mu": phys.mu(),
            "g0_sq": coupling_json(phys.g0_sq()),
            "g_sq": phys.g_sq(),
            "k_min": sweep.k_min,
            "k_max": sweep.k_max,
            "n_points": grid.len(),
            "csv_path": csv_path.display().to_string(),
        });
        write_text(report_path, &format!("{:#}\n", report))?;
    }
    println!("sigma: wrote {} rows to {}", grid.len(), csv_path.display());
    Ok(())
}

fn cmd_boundstate(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let params = match build_theory(&cfg)? {
        Theory::Bare(p) => p,
        Theory::Physical(_) => {
            return Err(config_err("boundstate requires the bare parameterization"))
        }
    };
    let e0 = solve_bound_state(&params).map_err(numeric_err)?;
    let u0_back = bare_internal_energy(&params, e0).map_err(numeric_err)?;
    let residual = u0_back - params.couplings.u0;
    let g_sq = renormalized_coupling_sq(params.g0_sq(), params.masses.mu, e0);
    let lambda = contact_lambda(params.g0_sq(), params.couplings.u0).ok();

    println!("e0 = {:.16e}", e0);
    println!("u0 = {:.16e}", params.couplings.u0);
    println!("u0_round_trip_residual = {:.16e}", residual);
    println!("g0_sq = {:.16e}", params.g0_sq());
    println!("g_sq = {:.16e}", g_sq);
    match lambda {
        Some(l) => println!("lambda = {:.16e}", l),
        None => println!("lambda = omitted (bare core u0 <= 0)"),
    }

    let report_path = args.out.clone().or_else(|| cfg.outputs.report_path.clone());
    if let Some(path) = report_path {
        let report = serde_json::json!({
            "subcommand": "boundstate",
            "e0": e0,
            "u0": params.couplings.u0,
            "u0_round_trip_residual": residual,
            "g0_sq": params.g0_sq(),
            "g_sq": g_sq,
            "lambda": lambda,
            "lambda_note": if lambda.is_none() { Some("omitted: bare core u0 <= 0") } else { None },
        });
        write_text(&path, &format!("{:#}\n", report))?;
    }
    Ok(())
}

fn cmd_verify(args: &VerifyArgs) -> Result<(), CliError> {
    let cfg = match &args.config {
        Some(path) => Some(load_config(path)?),
        None => None,
    };
    if let Some(t) = args.tol {
        if !(t > 0.0 && t.is_finite()) {
            return Err(config_err("--tol must be positive and finite"));
        }
    }
    let suite = default_suite(args.tol);
    let failed = suite.iter().filter(|r| !r.passed).count();
    for r in &suite {
        let status = if r.passed { "PASS" } else { "FAIL" };
        println!(
            "{status} {} rel_error={:.3e} tolerance={:.3e}",
            r.target, r.rel_error, r.tolerance
        );
    }
    println!(
        "verify: {}/{} checks passed",
        suite.len() - failed,
        suite.len()
    );

    let report = serde_json::json!({
        "subcommand": "verify",
        "tolerance_override": args.tol,
        "n_checks": suite.len(),
        "n_failed": failed,
        "checks": suite,
    });
    let report_path = args
        .out
        .clone()
        .or_else(|| cfg.as_ref().and_then(|c| c.outputs.report_path.clone()));
    if let Some(path) = report_path {
        write_text(&path, &format!("{:#}\n", report))?;
    }
    if failed > 0 {
        return Err(CliError::ChecksFailed(failed));
    }
    Ok(())
}

fn cmd_limit_study(args: &CommonArgs) -> Result<(), CliError> {
    let cfg = load_config(&args.config)?;
    let study = cfg
        .limit_study
        .as_ref()
        .ok_or_else(|| config_err("limit-study requires a limit_study section"))?;
    let phys = match build_theory(&cfg)? {
        Theory::Physical(p) => p,
        Theory::Bare(_) => {
            return Err(config_err(
                "limit-study requires the physical parameterization",
            ))
        }
    };
    let csv_path = args
        .out
        .clone()
        .or_else(|| cfg.outputs.csv_path.clone())
        .ok_or_else(|| config_err("no CSV output: set outputs.csv_path or pass --out"))?;

    let grid = log_grid(study.g0_sq_min, study.g0_sq_max, study.n_points);
    let slope =
        limit_convergence_study(study.k, phys.mu(), phys.e0(), &grid).map_err(numeric_err)?;

    let contact = PhysicalParams::contact(phys.e0(), phys.mu()).map_err(numeric_err)?;
    let sigma_inf =
        crate::scattering::total_cross_section(&contact, study.k).map_err(numeric_err)?;
    let mut csv = String::from("g0_sq,sigma,abs_err\n");
    for &g in &grid {
        let p = PhysicalParams::new(phys.e0(), phys.mu(), BareCouplingSq::Finite(g))
            .map_err(numeric_err)?;
        let sigma = crate::scattering::total_cross_section(&p, study.k).map_err(numeric_err)?;
        csv.push_str(&format!(
            "{:.16e},{:.16e},{:.16e}\n",
            g,
            sigma,
            (sigma - sigma_inf).abs()
        ));
    }
    write_text(&csv_path, &csv)?;

    if let Some(report_path) = &cfg.outputs.report_path {
        let report = serde_json::json!({
            "subcommand": "limit-study",
            "k": study.k,
            "e0": phys.e0(),
            "mu": phys.mu(),
            "sigma_contact": sigma_inf,
            "slope": slope,
            "n_points": grid.len(),
            "csv_path": csv_path.display().to_string(),
        });
        write_text(report_path, &format!("{:#}\n", report))?;
    }
    println!(
        "limit-study: slope {:.6} over {} couplings, wrote {}",
        slope,
        grid.len(),
        csv_path.display()
    );
    Ok(())
}

pub fn run(cli: Cli) -> Result<(), CliError> {
    match &cli.command {
        Command::Sigma(a) => cmd_sigma(a),
        Command::Boundstate(a) => cmd_boundstate(a),
        Command::Verify(a) => cmd_verify(a),
        Command::LimitStudy(a) => cmd_limit_study(a),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(text: &str) -> Result<SweepConfig, serde_json::Error> {
        serde_json::from_str(text)
    }

    #[test]
    fn physical_config_with_contact_token() {
        let cfg = parse(
            r#"{
                "masses": {"M": 1.0, "m": 1.0},
                "parameterization": {"physical": {"e0": 1.0, "g0_sq": "infinity"}},
                "sweep": {"k_min": 0.1, "k_max": 10.0, "n_points": 50, "spacing": "log"},
                "outputs": {"csv_path": "out.csv"}
            }"#,
        )
        .unwrap();
        match &cfg.parameterization {
            Parameterization::Physical { g0_sq, .. } => {
                assert_eq!(g0_sq.resolve().unwrap(), BareCouplingSq::Infinite);
            }
            _ => panic!("expected physical"),
        }
        assert_eq!(cfg.sweep.as_ref().unwrap().spacing, Spacing::Log);
    }

    #[test]
    fn bare_config_with_sharp_cutoff() {
        let cfg = parse(
            r#"{
                "masses": {"M": 1.0, "m": 1.0},
                "parameterization": {"bare": {"u0": 2.0, "g0": 2.5066282746310002,
                    "form_factor": {"type": "sharp_cutoff", "lambda": 10.0}}},
                "outputs": {}
            }"#,
        )
        .unwrap();
        match build_theory(&cfg).unwrap() {
            Theory::Bare(p) => {
                assert!((p.masses.mu - 0.5).abs() < 1e-15);
                assert!(matches!(p.form_factor, FormFactor::SharpCutoff { .. }));
            }
            _ => panic!("expected bare"),
        }
    }

    #[test]
    fn unknown_fields_and_bad_tokens_are_rejected() {
        assert!(parse(
            r#"{
                "masses": {"M": 1.0, "m": 1.0, "extra": 3.0},
                "parameterization": {"physical": {"e0": 1.0, "g0_sq": 2.0}}
            }"#
        )
        .is_err());
        let cfg = parse(
            r#"{
                "masses": {"M": 1.0, "m": 1.0},
                "parameterization": {"physical": {"e0": 1.0, "g0_sq": "Infinity"}}
            }"#,
        )
        .unwrap();
        match &cfg.parameterization {
            Parameterization::Physical { g0_sq, .. } => {
                assert!(matches!(g0_sq.resolve(), Err(CliError::Config(_))));
            }
            _ => panic!("expected physical"),
        }
    }

    #[test]
    fn missing_required_field_is_a_parse_error() {
        assert!(parse(
            r#"{
                "masses": {"M": 1.0, "m": 1.0},
                "parameterization": {"physical": {"g0_sq": 2.0}}
            }"#
        )
        .is_err());
    }

    #[test]
    fn sweep_grid_shapes() {
        let lin = sweep_grid(&SweepGrid {
            k_min: 1.0,
            k_max: 3.0,
            n_points: 5,
            spacing: Spacing::Linear,
        })
        .unwrap();
        assert_eq!(lin, vec![1.0, 1.5, 2.0, 2.5, 3.0]);
        let log = sweep_grid(&SweepGrid {
            k_min: 0.1,
            k_max: 10.0,
            n_points: 3,
            spacing: Spacing::Log,
        })
        .unwrap();
        assert!((log[1] - 1.0).abs() <= 1e-12);
        assert!((log[2] - 10.0).abs() <= 1e-12);
    }

    #[test]
    fn sweep_grid_invariants() {
        for bad in [
            SweepGrid {
                k_min: 0.0,
                k_max: 1.0,
                n_points: 5,
                spacing: Spacing::Linear,
            },
            SweepGrid {
                k_min: 2.0,
                k_max: 1.0,
                n_points: 5,
                spacing: Spacing::Linear,
            },
            SweepGrid {
                k_min: 1.0,
                k_max: 2.0,
                n_points: 1,
                spacing: Spacing::Linear,
            },
        ] {
            assert!(matches!(sweep_grid(&bad), Err(CliError::Config(_))));
        }
    }

    #[test]
    fn exit_codes_per_category() {
        assert_eq!(CliError::ChecksFailed(1).exit_code(), 1);
        assert_eq!(CliError::Config(String::new()).exit_code(), 2);
        assert_eq!(CliError::Numeric(String::new()).exit_code(), 3);
    }

    #[test]
    fn invalid_masses_are_config_errors() {
        let cfg = parse(
            r#"{
                "masses": {"M": -1.0, "m": 1.0},
                "parameterization": {"physical": {"e0": 1.0, "g0_sq": 2.0}}
            }"#,
        )
        .unwrap();
        assert!(matches!(build_theory(&cfg), Err(CliError::Config(_))));
    }
}
