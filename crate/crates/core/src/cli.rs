//! Command-line front end. `run` parses the arguments, dispatches one
//! subcommand and maps failures onto exit codes: 0 ok, 1 argument error,
//! 2 domain error, 3 numerical failure.

use std::f64::consts::PI;
use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::action_angle::{
    kappa_forward, kappa_inverse, rk4_chart, root_data, trajectory, wobbling_period, ActionAnglePoint,
    Hamiltonian, TrajectorySample,
};
use crate::error::{ErrorClass, OrbitaError};
use crate::figure::{band_rows, bands_svg, spectrum_figure, spectrum_svg, trajectory_svg, BandRow, SpectrumFigure};
use crate::orbit::{band_catalog, q_range};
use crate::poisson::WeightVector;
use crate::quantize::{quad_tol, DEFAULT_QUAD_TOL};
use crate::verify::{run_all, run_suite, SuiteReport, VerifyConfig, DEFAULT_SEED, SUITES};

pub const EXIT_OK: i32 = 0;
pub const EXIT_ARGUMENT: i32 = 1;
pub const EXIT_DOMAIN: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

/// Sup-norm bound for the trajectory oracle comparison.
pub const ORACLE_TOL: f64 = 1e-6;

#[derive(Debug, Parser)]
#[command(name = "orbita", version, about = "Reduced u(3) orbit dynamics: verification, bands, spectra, trajectories")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the invariant suites and report residuals.
    Verify(VerifyArgs),
    /// Tabulate the S/P bands of an orbit in the shape plane.
    Bands(BandsArgs),
    /// Bohr-Sommerfeld spectrum of the wobbling momentum.
    Spectrum(SpectrumArgs),
    /// Closed-form wobbling trajectory.
    Trajectory(TrajectoryArgs),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Csv,
    Json,
    Svg,
}

/// Orbit given either as `--p p1,p2,p3` or through its gaps.
#[derive(Debug, Clone, Args)]
pub struct OrbitArgs {
    /// Weights p1,p2,p3 with p1 > p2 > p3.
    #[arg(long, value_delimiter = ',', num_args = 1, allow_hyphen_values = true, conflicts_with_all = ["lam", "mu"])]
    pub p: Option<Vec<f64>>,
    /// Gap p1 - p2.
    #[arg(long, requires = "mu")]
    pub lam: Option<f64>,
    /// Gap p2 - p3.
    #[arg(long, requires = "lam")]
    pub mu: Option<f64>,
    /// Lowest weight when the orbit is given by its gaps.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub p3: f64,
}

#[derive(Debug, Clone, Args)]
pub struct OutputArgs {
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    pub format: Format,
    /// Output file; standard output when absent.
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Clone, Args)]
pub struct VerifyArgs {
    /// Run a single suite.
    #[arg(long)]
    pub suite: Option<String>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    pub seed: u64,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct BandsArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Hamiltonian family parameter r (r <= 2).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub r: f64,
    /// Hamiltonian family parameter s (s >= 0).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s: f64,
    /// Samples per band segment.
    #[arg(long = "l-steps", default_value_t = 200)]
    pub l_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct SpectrumArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Quantization branch s in [-1, 1].
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub s: f64,
    /// Samples per band curve in the figure data.
    #[arg(long = "l-steps", default_value_t = 200)]
    pub l_steps: usize,
    #[command(flatten)]
    pub output: OutputArgs,
}

#[derive(Debug, Clone, Args)]
pub struct TrajectoryArgs {
    #[command(flatten)]
    pub orbit: OrbitArgs,
    /// Angular momentum L of the initial state (default: half of L_max).
    #[arg(long = "L")]
    pub l: Option<f64>,
    /// Wobbling momentum Q (default: middle of the admissible range).
    #[arg(long = "Q", allow_hyphen_values = true)]
    pub q: Option<f64>,
    /// Initial wobbling angle theta (default: half the half period).
    #[arg(long, allow_hyphen_values = true)]
    pub theta: Option<f64>,
    /// Initial psi.
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub psi: f64,
    /// Hamiltonian family parameter r (r <= 2).
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub r: f64,
    /// Hamiltonian family parameter s (s >= 0).
    #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
    pub s: f64,
    /// Rotational scale omega_r in omega(L) = omega_r L^2 / <p>^2.
    #[arg(long, default_value_t = 1.0, allow_hyphen_values = true)]
    pub omega: f64,
    #[arg(long = "E0", default_value_t = 0.0, allow_hyphen_values = true)]
    pub e0: f64,
    /// End time (default: one wobbling period).
    #[arg(long = "t-end")]
    pub t_end: Option<f64>,
    #[arg(long, default_value_t = 201)]
    pub samples: usize,
    /// Add RK4 oracle columns and fail when they disagree.
    #[arg(long)]
    pub oracle: bool,
    #[command(flatten)]
    pub output: OutputArgs,
}

/// Validated run parameters shared by all subcommands; serialized into the
/// JSON `meta.params` block.
#[derive(Debug, Clone, Serialize)]
pub struct RunConfig {
    pub orbit: Option<[f64; 3]>,
    pub r: f64,
    pub s_h: f64,
    pub omega: f64,
    pub e0: f64,
    /// Spectrum branch s.
    pub s: f64,
    pub l_steps: usize,
    pub samples: usize,
    pub quad_tol: f64,
}

impl Default for RunConfig {
    fn default() -> Self {
        Self { orbit: None, r: 1.0, s_h: 0.0, omega: 1.0, e0: 0.0, s: 1.0, l_steps: 200, samples: 201, quad_tol: DEFAULT_QUAD_TOL }
    }
}

impl RunConfig {
    /// Check the invariants: ordered orbit, resolutions ≥ 2, tolerances > 0.
    pub fn validate(self) -> CliResult<Self> {
        if let Some(p) = self.orbit {
            WeightVector::new(p[0], p[1], p[2])?;
        }
        if self.l_steps < 2 {
            return Err(CliError::argument(format!("--l-steps must be at least 2, got {}", self.l_steps)));
        }
        if self.samples < 2 {
            return Err(CliError::argument(format!("--samples must be at least 2, got {}", self.samples)));
        }
        if !(self.quad_tol > 0.0 && self.quad_tol.is_finite()) {
            return Err(CliError::argument(format!("quadrature tolerance must be positive, got {}", self.quad_tol)));
        }
        Ok(self)
    }
}

/// Failure of a CLI run with its exit code.
#[derive(Debug)]
pub struct CliError {
    pub code: i32,
    pub message: String,
}

impl CliError {
    fn argument(msg: impl Into<String>) -> Self {
        Self { code: EXIT_ARGUMENT, message: msg.into() }
    }
}

impl From<OrbitaError> for CliError {
    fn from(e: OrbitaError) -> Self {
        let code = match e.class() {
            ErrorClass::Argument => EXIT_ARGUMENT,
            ErrorClass::Domain => EXIT_DOMAIN,
            ErrorClass::Numerical => EXIT_NUMERICAL,
        };
        Self { code, message: e.to_string() }
    }
}

impl From<io::Error> for CliError {
    fn from(e: io::Error) -> Self {
        Self::argument(format!("output: {e}"))
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        Self::argument(format!("csv: {e}"))
    }
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Tolerance from `ORBITA_QUAD_TOL`; malformed or non-positive values are
/// argument errors.
fn checked_quad_tol() -> CliResult<f64> {
    match std::env::var("ORBITA_QUAD_TOL") {
        Err(_) => Ok(quad_tol()),
        Ok(v) => match v.trim().parse::<f64>() {
            Ok(t) if t > 0.0 && t.is_finite() => Ok(quad_tol()),
            _ => Err(CliError::argument(format!("ORBITA_QUAD_TOL must be a positive number, got '{v}'"))),
        },
    }
}

fn orbit_of(a: &OrbitArgs) -> CliResult<WeightVector> {
    let wv = match (&a.p, a.lam, a.mu) {
        (Some(p), _, _) => {
            if p.len() != 3 {
                return Err(CliError::argument(format!("--p takes three weights, got {}", p.len())));
            }
            WeightVector::new(p[0], p[1], p[2])
        }
        (None, Some(lam), Some(mu)) => WeightVector::from_gaps(lam, mu, a.p3),
        _ => return Err(CliError::argument("give the orbit with --p p1,p2,p3 or --lam/--mu/--p3")),
    };
    Ok(wv?)
}

/// Scientific notation with 17 significant digits.
pub fn num(x: f64) -> String {
    // Fold −0 into 0 so equal values print identically.
    let x = if x == 0.0 { 0.0 } else { x };
    format!("{x:.16e}")
}

fn meta(kind: &str, cfg: &RunConfig, details: Value, extra_tol: Value) -> Value {
    json!({
        "orbit": cfg.orbit,
        "kind": kind,
        "params": { "config": cfg, "details": details },
        "version": env!("CARGO_PKG_VERSION"),
        "tolerances": {
            "quad_tol": quad_tol(),
            "default_quad_tol": DEFAULT_QUAD_TOL,
            "extra": extra_tol,
        },
    })
}

fn csv_string(header: &[&str], rows: &[Vec<String>]) -> CliResult<String> {
    let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
    w.write_record(header)?;
    for r in rows {
        w.write_record(r)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::argument(format!("csv: {e}")))?;
    String::from_utf8(bytes).map_err(|e| CliError::argument(format!("csv: {e}")))
}

fn json_string(meta: Value, rows: Value) -> String {
    let mut s = serde_json::to_string_pretty(&json!({ "meta": meta, "rows": rows })).expect("serializable");
    s.push('\n');
    s
}

fn emit(out: &OutputArgs, text: &str) -> CliResult<()> {
    match &out.out {
        Some(path) => fs::write(path, text)?,
        None => io::stdout().lock().write_all(text.as_bytes())?,
    }
    Ok(())
}

// verify

pub fn verify_rows(reports: &[SuiteReport]) -> Vec<Vec<String>> {
    reports
        .iter()
        .flat_map(|r| {
            r.checks.iter().map(move |c| {
                vec![
                    r.suite.clone(),
                    c.name.clone(),
                    c.count.to_string(),
                    num(c.max_residual),
                    num(c.tolerance),
                    c.passed.to_string(),
                ]
            })
        })
        .collect()
}

fn cmd_verify(a: &VerifyArgs) -> CliResult<String> {
    let cfg = VerifyConfig { seed: a.seed };
    let reports = match &a.suite {
        Some(name) => {
            if !SUITES.contains(&name.as_str()) {
                return Err(CliError::argument(format!("unknown suite '{name}' (one of {})", SUITES.join(", "))));
            }
            vec![run_suite(name, &cfg)?]
        }
        None => run_all(&cfg)?,
    };
    let text = match a.output.format {
        Format::Csv => csv_string(
            &["suite", "check", "count", "max_residual", "tolerance", "passed"],
            &verify_rows(&reports),
        )?,
        Format::Json => json_string(
            meta(
                "verify",
                &RunConfig { quad_tol: quad_tol(), ..Default::default() },
                json!({ "seed": a.seed, "suite": a.suite }),
                Value::Null,
            ),
            serde_json::to_value(&reports).expect("serializable"),
        ),
        Format::Svg => return Err(CliError::argument("verify has no SVG rendering")),
    };
    emit(&a.output, &text)?;
    for r in &reports {
        for c in r.checks.iter().filter(|c| !c.passed) {
            eprintln!("FAIL {}/{}: max {:e} > tol {:e}", r.suite, c.name, c.max_residual, c.tolerance);
        }
    }
    if reports.iter().all(SuiteReport::passed) {
        Ok(text)
    } else {
        Err(CliError { code: EXIT_NUMERICAL, message: "verification failed".into() })
    }
}

// bands

pub const BANDS_HEADER: [&str; 13] =
    ["band", "L", "p", "Q", "P1", "P2", "P3", "beta", "Gamma", "x", "y", "E_factor", "stability"];

pub fn bands_csv_rows(rows: &[BandRow]) -> Vec<Vec<String>> {
    rows.iter()
        .map(|r| {
            vec![
                r.band.name().to_string(),
                num(r.l),
                num(r.p),
                num(r.q),
                num(r.eig[0]),
                num(r.eig[1]),
                num(r.eig[2]),
                num(r.beta),
                num(r.gamma),
                num(r.x),
                num(r.y),
                num(r.e_factor),
                r.stability.name().to_string(),
            ]
        })
        .collect()
}

fn cmd_bands(a: &BandsArgs) -> CliResult<String> {
    let wv = orbit_of(&a.orbit)?;
    let cfg = RunConfig { orbit: Some(wv.p()), r: a.r, s_h: a.s, l_steps: a.l_steps, quad_tol: quad_tol(), ..Default::default() }
        .validate()?;
    let cat = band_catalog(&wv, a.r, a.s)?;
    let rows = band_rows(&cat, a.l_steps);
    let text = match a.output.format {
        Format::Csv => csv_string(&BANDS_HEADER, &bands_csv_rows(&rows))?,
        Format::Json => json_string(
            meta(
                "bands",
                &cfg,
                json!({ "intersections": cat.intersections, "bands": cat.bands }),
                Value::Null,
            ),
            serde_json::to_value(&rows).expect("serializable"),
        ),
        Format::Svg => bands_svg(&cat, &rows),
    };
    emit(&a.output, &text)?;
    Ok(text)
}

// spectrum

pub const SPECTRUM_HEADER: [&str; 5] = ["L", "k", "k_u", "Q", "band"];

pub fn spectrum_csv_rows(fig: &SpectrumFigure) -> Vec<Vec<String>> {
    fig.rows
        .iter()
        .map(|r| {
            vec![
                r.l.to_string(),
                r.k.to_string(),
                num(r.k_u),
                num(r.q),
                r.band.map(|b| b.name()).unwrap_or("").to_string(),
            ]
        })
        .collect()
}

fn cmd_spectrum(a: &SpectrumArgs) -> CliResult<String> {
    if !(-1.0..=1.0).contains(&a.s) {
        return Err(CliError::argument(format!("--s must lie in [-1, 1], got {}", a.s)));
    }
    let wv = orbit_of(&a.orbit)?;
    let cfg = RunConfig { orbit: Some(wv.p()), s: a.s, l_steps: a.l_steps, quad_tol: quad_tol(), ..Default::default() }
        .validate()?;
    let fig = spectrum_figure(&wv, a.s, a.l_steps)?;
    let text = match a.output.format {
        Format::Csv => csv_string(&SPECTRUM_HEADER, &spectrum_csv_rows(&fig))?,
        Format::Json => json_string(
            meta(
                "spectrum",
                &cfg,
                json!({
                    "curves": fig.curves,
                    "levels": fig.levels,
                    "pi": fig.pi,
                    "pi_polyline": fig.pi_polyline,
                    "intersections": fig.intersections,
                }),
                Value::Null,
            ),
            serde_json::to_value(&fig.rows).expect("serializable"),
        ),
        Format::Svg => spectrum_svg(&fig),
    };
    emit(&a.output, &text)?;
    Ok(text)
}

// trajectory

pub const TRAJECTORY_HEADER: [&str; 12] =
    ["t", "L", "Q", "psi", "theta", "p", "gamma", "phi", "H", "C1", "C2", "C3"];

fn wrap_pi(x: f64) -> f64 {
    x - 2.0 * PI * (x / (2.0 * PI)).round()
}

/// Initial action-angle point from the flags, with defaults in the middle of
/// the admissible region.
fn initial_point(a: &TrajectoryArgs, wv: &WeightVector) -> CliResult<ActionAnglePoint> {
    let l = a.l.unwrap_or(0.5 * wv.l_max());
    let (qmin, qmax) = q_range(wv, l)?;
    let q = a.q.unwrap_or(0.5 * (qmin + qmax));
    let rd = root_data(wv, l, q)?;
    let delta = 0.5 * l / rd.c_coef.sqrt() * rd.k().value;
    let theta = a.theta.unwrap_or(0.5 * delta);
    let probe = ActionAnglePoint { l, q, psi: a.psi, theta, eps_theta: 0, delta };
    // Round trip through the chart fixes ε_ϑ and normalizes ϑ.
    Ok(kappa_forward(&kappa_inverse(&probe, wv)?, wv)?)
}

/// RK4 (p, γ) at the sample times, with roughly 1e5 steps per period.
pub fn oracle_path(
    wv: &WeightVector,
    a0: &ActionAnglePoint,
    h: &Hamiltonian,
    t_end: f64,
    samples: usize,
) -> crate::Result<Vec<(f64, f64)>> {
    let period = wobbling_period(a0, h);
    let c0 = kappa_inverse(a0, wv)?;
    let intervals = samples.max(2) - 1;
    let per_interval = ((1e5 * t_end / period / intervals as f64).ceil() as usize).max(1);
    let steps = intervals * per_interval;
    let path = rk4_chart(wv, a0.l, h.omega(a0.l), (c0.p, c0.gamma), t_end / steps as f64, steps, per_interval);
    Ok(path.into_iter().map(|(_, p, g)| (p, g)).collect())
}

pub fn trajectory_csv_rows(rows: &[TrajectorySample], oracle: Option<&[(f64, f64)]>) -> Vec<Vec<String>> {
    rows.iter()
        .enumerate()
        .map(|(i, r)| {
            let mut v = vec![
                num(r.t),
                num(r.l),
                num(r.q),
                num(r.psi),
                num(r.theta),
                num(r.p),
                num(r.gamma),
                num(r.phi),
                num(r.h),
                num(r.casimirs[0]),
                num(r.casimirs[1]),
                num(r.casimirs[2]),
            ];
            if let Some(o) = oracle {
                v.push(num(o[i].0));
                v.push(num(o[i].1));
            }
            v
        })
        .collect()
}

fn cmd_trajectory(a: &TrajectoryArgs) -> CliResult<String> {
    let wv = orbit_of(&a.orbit)?;
    let cfg = RunConfig {
        orbit: Some(wv.p()),
        r: a.r,
        s_h: a.s,
        omega: a.omega,
        e0: a.e0,
        samples: a.samples,
        quad_tol: quad_tol(),
        ..Default::default()
    }
    .validate()?;
    let mut h = Hamiltonian::default_for(&wv, a.omega, a.e0);
    h.r = a.r;
    h.s = a.s;
    Hamiltonian::new(a.e0, a.r, a.s, h.model.clone())?;
    let a0 = initial_point(a, &wv)?;
    let start = kappa_inverse(&a0, &wv)?;
    let period = wobbling_period(&a0, &h);
    let t_end = a.t_end.unwrap_or(period);
    if !(t_end > 0.0 && t_end.is_finite()) {
        return Err(CliError::argument(format!("--t-end must be positive, got {t_end}")));
    }
    let rows = trajectory(&start, &wv, &h, t_end, a.samples)?;
    let oracle = if a.oracle { Some(oracle_path(&wv, &a0, &h, t_end, a.samples)?) } else { None };
    let mut sup = 0.0_f64;
    if let Some(o) = &oracle {
        for (r, &(p, g)) in rows.iter().zip(o) {
            sup = sup.max((r.p - p).abs()).max(wrap_pi(r.gamma - g).abs());
        }
    }
    let mut header: Vec<&str> = TRAJECTORY_HEADER.to_vec();
    if oracle.is_some() {
        header.extend(["p_rk4", "gamma_rk4"]);
    }
    let text = match a.output.format {
        Format::Csv => csv_string(&header, &trajectory_csv_rows(&rows, oracle.as_deref()))?,
        Format::Json => {
            let mut json_rows = serde_json::to_value(&rows).expect("serializable");
            if let (Some(o), Value::Array(items)) = (&oracle, &mut json_rows) {
                for (item, &(p, g)) in items.iter_mut().zip(o) {
                    item["p_rk4"] = json!(p);
                    item["gamma_rk4"] = json!(g);
                }
            }
            json_string(
                meta(
                    "trajectory",
                    &cfg,
                    json!({
                        "L": a0.l, "Q": a0.q, "psi": a0.psi, "theta": a0.theta,
                        "t_end": t_end, "period": period,
                        "oracle_sup": oracle.as_ref().map(|_| sup),
                    }),
                    json!({ "oracle": ORACLE_TOL }),
                ),
                json_rows,
            )
        }
        Format::Svg => trajectory_svg(&rows, oracle.as_deref()),
    };
    emit(&a.output, &text)?;
    if oracle.is_some() && !(sup < ORACLE_TOL) {
        return Err(CliError {
            code: EXIT_NUMERICAL,
            message: format!("RK4 oracle deviates by {sup:e} (tolerance {ORACLE_TOL:e})"),
        });
    }
    Ok(text)
}

/// Parse `args` (including the program name) and run. Returns the exit code
/// and the emitted text, if any.
pub fn run_with<I, T>(args: I) -> (i32, Option<String>)
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_ARGUMENT } else { EXIT_OK };
            let _ = e.print();
            return (code, None);
        }
    };
    let result = checked_quad_tol().and_then(|_| match &cli.command {
        Command::Verify(a) => cmd_verify(a),
        Command::Bands(a) => cmd_bands(a),
        Command::Spectrum(a) => cmd_spectrum(a),
        Command::Trajectory(a) => cmd_trajectory(a),
    });
    match result {
        Ok(text) => (EXIT_OK, Some(text)),
        Err(e) => {
            eprintln!("orbita: {}", e.message);
            (e.code, None)
        }
    }
}

/// Entry point of the binary.
pub fn run() -> i32 {
    run_with(std::env::args_os()).0
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn numbers_carry_seventeen_digits() {
        assert_eq!(num(0.1), "1.0000000000000001e-1");
        assert_eq!(num(-0.0), "0.0000000000000000e0");
        let s = num(std::f64::consts::PI);
        assert_eq!(s.parse::<f64>().unwrap(), std::f64::consts::PI);
    }

    #[test]
    fn argument_errors_exit_with_one() {
        assert_eq!(run_with(["orbita", "spectrum"]).0, EXIT_ARGUMENT);
        assert_eq!(run_with(["orbita", "spectrum", "--p", "6,4,0", "--s", "2"]).0, EXIT_ARGUMENT);
        assert_eq!(run_with(["orbita", "bands", "--p", "6,4,0", "--l-steps", "1"]).0, EXIT_ARGUMENT);
        assert_eq!(run_with(["orbita", "verify", "--suite", "nope"]).0, EXIT_ARGUMENT);
        assert_eq!(run_with(["orbita", "frobnicate"]).0, EXIT_ARGUMENT);
    }

    #[test]
    fn domain_errors_exit_with_two() {
        assert_eq!(run_with(["orbita", "bands", "--p", "1,2,3"]).0, EXIT_DOMAIN);
        assert_eq!(run_with(["orbita", "spectrum", "--p", "6.5,4,0"]).0, EXIT_DOMAIN);
    }

    #[test]
    fn run_config_invariants() {
        assert!(RunConfig::default().validate().is_ok());
        assert!(RunConfig { samples: 1, ..Default::default() }.validate().is_err());
        assert!(RunConfig { quad_tol: -1.0, ..Default::default() }.validate().is_err());
        assert!(RunConfig { orbit: Some([1.0, 1.0, 0.0]), ..Default::default() }.validate().is_err());
    }

    #[test]
    fn small_spectrum_csv() {
        let (code, text) = run_with(["orbita", "spectrum", "--lam", "4", "--mu", "2", "--out", "/dev/null"]);
        assert_eq!(code, EXIT_OK);
        let text = text.unwrap();
        assert!(text.starts_with("L,k,k_u,Q,band\n"));
        assert!(!text.contains('\r'));
    }
}
