//! Command-line front end. [`run`] parses arguments and writes to the given
//! streams so the binary and the tests share one code path.
//!
//! Exit codes: 0 success, 1 a check failed, 2 usage or configuration error.

use std::ffi::OsString;
use std::f64::consts::{PI, SQRT_2};
use std::fs;
use std::io::Write;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::value::RawValue;

use crate::entangle::{
    chsh_standard_settings, chsh_value, correlation_curve, singlet, CorrelationPoint, TRANSVERSE_NOTE,
};
use crate::error::{Result, SpinError};
use crate::harmonics::{AnglePair, CoverConvention, SpinHarmonic};
use crate::operators::{
    apply_s2, eigen_residual, ladder_defect, LadderDefect, OperatorSettings, ResidualGrid, SpinOperator,
    SpinorField, DEFAULT_FD_STEP,
};
use crate::pauli::{
    abstract_eigencheck, expectation, orthonormality_check, project_to_spinor, SpinMatrix, Spinor2,
};
use crate::quadrature::{four_angle_inner_product, full_inner_product, phi_inner_product, QuadratureSpec};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest accepted `|E_quadrature - E_oracle|` on an emitted curve.
pub const EPR_TOLERANCE: f64 = 1e-6;
/// Agreement required between the ladder probe and its reference values.
pub const LADDER_TOLERANCE: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum CoverArg {
    Single,
    Double,
}

impl From<CoverArg> for CoverConvention {
    fn from(c: CoverArg) -> Self {
        match c {
            CoverArg::Single => CoverConvention::Single,
            CoverArg::Double => CoverConvention::Double,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum HarmonicArg {
    Alpha,
    Beta,
}

#[derive(Debug, Parser)]
#[command(name = "spincoord", version, about = "Coordinate representation of electron spin")]
pub struct Cli {
    #[command(flatten)]
    pub global: GlobalArgs,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Clone, Args)]
pub struct GlobalArgs {
    /// Azimuthal range: single (2 pi) or double (4 pi) circle
    #[arg(long, value_enum, default_value = "single", global = true)]
    pub cover: CoverArg,

    /// Gauss-Legendre nodes in theta (default 64; 32 per electron for epr)
    #[arg(long, global = true)]
    pub n_theta: Option<usize>,

    /// Trapezoid nodes in phi (default 64; 16 per electron for epr)
    #[arg(long, global = true)]
    pub n_phi: Option<usize>,

    /// Central-difference step, radians
    #[arg(long, default_value_t = DEFAULT_FD_STEP, global = true)]
    pub fd_step: f64,

    /// Machine-readable output format
    #[arg(long, value_enum, default_value = "csv", global = true)]
    pub format: OutputFormat,

    /// Write machine-readable output here
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,

    /// Seed for randomized checks
    #[arg(long, default_value_t = 0, global = true)]
    pub seed: u64,
}

#[derive(Debug, Clone, Subcommand)]
pub enum Command {
    /// Run the full verification suite
    Verify,
    /// Evaluate alpha or beta at (theta, phi), radians
    #[command(allow_negative_numbers = true)]
    Eval {
        #[arg(value_enum)]
        harmonic: HarmonicArg,
        theta: f64,
        phi: f64,
    },
    /// Inner products of alpha and beta
    Ip {
        /// Polar angle for the phi-only integrals
        #[arg(long, default_value_t = PI / 2.0)]
        theta: f64,
    },
    /// Singlet detector-correlation curve
    Epr {
        #[arg(long, default_value_t = 33)]
        n_points: usize,
    },
    /// Measure how far S+ beta is from alpha
    LadderProbe,
}

/// Validated configuration shared by all subcommands.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RunConfig {
    pub cover: CoverConvention,
    pub n_theta: usize,
    pub n_phi: usize,
    pub fd_step: f64,
    pub output_format: OutputFormat,
    pub output_path: Option<PathBuf>,
    pub seed: u64,
}

impl RunConfig {
    fn from_args(g: &GlobalArgs, default_nodes: (usize, usize)) -> Result<Self> {
        let cfg = Self {
            cover: g.cover.into(),
            n_theta: g.n_theta.unwrap_or(default_nodes.0),
            n_phi: g.n_phi.unwrap_or(default_nodes.1),
            fd_step: g.fd_step,
            output_format: g.format,
            output_path: g.out.clone(),
            seed: g.seed,
        };
        cfg.spec()?;
        cfg.operator_settings().validate()?;
        Ok(cfg)
    }

    pub fn spec(&self) -> Result<QuadratureSpec> {
        QuadratureSpec::new(self.n_theta, self.n_phi, self.cover)
    }

    pub fn operator_settings(&self) -> OperatorSettings {
        OperatorSettings { fd_step: self.fd_step, ..OperatorSettings::default() }
    }
}

/// Parses `args` (including the program name) and runs the subcommand.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    EXIT_OK
                }
                _ => {
                    let _ = write!(err, "{e}");
                    EXIT_USAGE
                }
            };
        }
    };
    let defaults = match cli.command {
        Command::Epr { .. } => {
            let d = QuadratureSpec::four_angle_default();
            (d.n_theta(), d.n_phi())
        }
        _ => (64, 64),
    };
    let cfg = match RunConfig::from_args(&cli.global, defaults) {
        Ok(c) => c,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            return EXIT_USAGE;
        }
    };
    let result = match cli.command {
        Command::Verify => cmd_verify(&cfg, out),
        Command::Eval { harmonic, theta, phi } => cmd_eval(harmonic, theta, phi, &cfg, out),
        Command::Ip { theta } => cmd_ip(theta, &cfg, out),
        Command::Epr { n_points } => cmd_epr(n_points, &cfg, out, err),
        Command::LadderProbe => cmd_ladder_probe(&cfg, out),
    };
    match result {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_USAGE
        }
        Err(CliError::Failure(msg)) => {
            let _ = writeln!(err, "error: {msg}");
            EXIT_CHECK_FAILED
        }
    }
}

#[derive(Debug)]
enum CliError {
    Usage(String),
    Failure(String),
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Failure(format!("i/o: {e}"))
    }
}

impl From<SpinError> for CliError {
    fn from(e: SpinError) -> Self {
        CliError::Failure(e.to_string())
    }
}

type CliResult = std::result::Result<i32, CliError>;

/// Fixed 17-significant-digit rendering used by every machine format.
pub fn sig17(x: f64) -> String {
    format!("{x:.16e}")
}

fn raw(x: f64) -> Box<RawValue> {
    RawValue::from_string(sig17(x)).expect("finite float renders as a JSON number")
}

fn emit(cfg: &RunConfig, body: &str, fallback: &mut dyn Write) -> std::io::Result<()> {
    match &cfg.output_path {
        Some(p) => fs::write(p, body),
        None => fallback.write_all(body.as_bytes()),
    }
}

// ---------------------------------------------------------------- verify

/// One row of the verification table.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Check {
    pub name: String,
    pub value: f64,
    pub tolerance: f64,
    pub passed: bool,
}

impl Check {
    fn new(name: &str, value: f64, tolerance: f64) -> Self {
        Self { name: name.to_string(), value, tolerance, passed: value.is_finite() && value <= tolerance }
    }

    fn failed(name: &str, tolerance: f64) -> Self {
        Self { name: name.to_string(), value: f64::NAN, tolerance, passed: false }
    }
}

fn check_or_fail(name: &str, tolerance: f64, value: Result<f64>) -> Check {
    match value {
        Ok(v) => Check::new(name, v, tolerance),
        Err(e) => {
            log::debug!("check {name} errored: {e}");
            Check::failed(name, tolerance)
        }
    }
}

fn random_spinor(rng: &mut ChaCha8Rng) -> Spinor2 {
    loop {
        let v: [f64; 4] = std::array::from_fn(|_| rng.gen_range(-1.0..1.0));
        let s = Spinor2 { c_alpha: Complex64::new(v[0], v[1]), c_beta: Complex64::new(v[2], v[3]) };
        if s.norm_sqr() > 1e-3 {
            return s.normalized().expect("nonzero");
        }
    }
}

/// Runs every check of the suite under `cfg`.
pub fn verification_checks(cfg: &RunConfig) -> Result<Vec<Check>> {
    let spec = cfg.spec()?;
    let cover = cfg.cover;
    let analytic = OperatorSettings::default();
    let fd = OperatorSettings::finite_difference(cfg.fd_step);
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut checks = Vec::new();

    let alpha_h = SpinHarmonic::alpha(cover);
    let beta_h = SpinHarmonic::beta(cover);
    let (sign, dens) = sign_flip_metrics(&[alpha_h, beta_h], 101);
    checks.push(Check::new("sign_flip", sign, 1e-14));
    checks.push(Check::new("density_shift", dens, 1e-15));

    let alpha = SpinorField::alpha(cover);
    let beta = SpinorField::beta(cover);
    let eig = |op, f: &SpinorField, l, s: &OperatorSettings| {
        eigen_residual(op, f, l, &spec, s).map(|r| r.max_pointwise_residual)
    };
    for (label, f, m) in [("alpha", &alpha, 0.5), ("beta", &beta, -0.5)] {
        checks.push(check_or_fail(&format!("s2_{label}"), 1e-10, eig(SpinOperator::S2, f, 0.75, &analytic)));
        checks.push(check_or_fail(&format!("sz_{label}"), 1e-10, eig(SpinOperator::Sz, f, m, &analytic)));
        checks.push(check_or_fail(&format!("s2_{label}_fd"), 1e-6, eig(SpinOperator::S2, f, 0.75, &fd)));
        checks.push(check_or_fail(&format!("sz_{label}_fd"), 1e-6, eig(SpinOperator::Sz, f, m, &fd)));
    }

    let margin = ResidualGrid::from_spec(&spec).theta_margin;
    let points: Vec<AnglePair> = (0..1000)
        .map(|_| {
            let t = rng.gen_range(margin..PI - margin);
            let p = rng.gen_range(0.0..cover.period());
            AnglePair::new(t, p).expect("interior")
        })
        .collect();
    let fd_gap = (|| -> Result<f64> {
        let mut worst = 0.0_f64;
        for f in [&alpha, &beta] {
            for &a in &points {
                worst = worst.max((apply_s2(f, a, &fd)? - apply_s2(f, a, &analytic)?).norm());
            }
        }
        Ok(worst)
    })();
    checks.push(check_or_fail("fd_vs_analytic", 1e-6, fd_gap));
    let partials = alpha
        .check_partials(&points[..100], 1e-5, 1e-7)
        .and_then(|a| beta.check_partials(&points[..100], 1e-5, 1e-7).map(|b| a.max_relative_error.max(b.max_relative_error)));
    checks.push(check_or_fail("partials_self_test", 1e-7, partials));

    checks.push(check_or_fail("norm_alpha", 1e-12, full_inner_product(&alpha, &alpha, &spec).map(|z| (z - 1.0).norm())));
    checks.push(check_or_fail("norm_beta", 1e-12, full_inner_product(&beta, &beta, &spec).map(|z| (z - 1.0).norm())));
    let ortho_phi = (|| -> Result<f64> {
        let mut worst = 0.0_f64;
        for k in 1..=33 {
            let t = PI * k as f64 / 34.0;
            worst = worst.max(phi_inner_product(&alpha, &beta, t, &spec)?.norm());
            worst = worst.max(phi_inner_product(&beta, &alpha, t, &spec)?.norm());
        }
        Ok(worst)
    })();
    checks.push(check_or_fail("ortho_phi", 1e-14, ortho_phi));
    checks.push(check_or_fail("ortho_full", 1e-14, full_inner_product(&alpha, &beta, &spec).map(|z| z.norm())));

    let pauli_eigen = abstract_eigencheck(&Spinor2::alpha())
        .and_then(|a| abstract_eigencheck(&Spinor2::beta()).map(|b| {
            (a.s2_eigenvalue - 0.75).abs()
                .max((a.sz_eigenvalue - 0.5).abs())
                .max((b.s2_eigenvalue - 0.75).abs())
                .max((b.sz_eigenvalue + 0.5).abs())
                .max(a.residual)
                .max(b.residual)
        }));
    checks.push(check_or_fail("pauli_eigen", 0.0, pauli_eigen));
    checks.push(Check::new("pauli_orthonormality", orthonormality_check().max_deviation(), 0.0));

    let spinors: Vec<Spinor2> = (0..100).map(|_| random_spinor(&mut rng)).collect();
    let (round_trip, expect_gap) = match pauli_equivalence(&spinors, &spec) {
        Ok((r, e)) => (Ok(r), Ok(e)),
        Err(e) => (Err(e.clone()), Err(e)),
    };
    checks.push(check_or_fail("pauli_projection", 1e-10, round_trip));
    checks.push(check_or_fail("pauli_expectation", 1e-8, expect_gap));

    match ladder_defect(&spec, &analytic) {
        Ok(d) => {
            let [n, o, x] = ladder_gaps(&d);
            checks.push(Check::new("ladder_norm", n, LADDER_TOLERANCE));
            checks.push(Check::new("ladder_overlap", o, LADDER_TOLERANCE));
            checks.push(Check::new("ladder_defect", x, LADDER_TOLERANCE));
        }
        Err(_) => {
            for name in ["ladder_norm", "ladder_overlap", "ladder_defect"] {
                checks.push(Check::failed(name, LADDER_TOLERANCE));
            }
        }
    }

    let spec4 = QuadratureSpec::four_angle_default().with_cover(cover);
    let psi = singlet().coordinate_wavefunction(cover);
    let singlet_norm = four_angle_inner_product(
        |a, b, c, d| psi.eval(a, b, c, d),
        |a, b, c, d| psi.eval(a, b, c, d),
        &spec4,
    )
    .map(|z| (z - 1.0).norm());
    checks.push(check_or_fail("singlet_norm", 1e-10, singlet_norm));
    checks.push(check_or_fail(
        "chsh",
        1e-9,
        chsh_value(&singlet(), chsh_standard_settings()).map(|s| (s - 2.0 * SQRT_2).abs()),
    ));
    Ok(checks)
}

/// `(max relative |Y(t, p + 2 pi) + Y(t, p)|, max |density shift|)` over an
/// `n x n` grid with interior theta and phi spanning `[0, 2 pi]`.
pub fn sign_flip_metrics(harmonics: &[SpinHarmonic], n: usize) -> (f64, f64) {
    let mut sign = 0.0_f64;
    let mut dens = 0.0_f64;
    for h in harmonics {
        for i in 0..n {
            let t = PI * (i as f64 + 0.5) / n as f64;
            for j in 0..n {
                let p = 2.0 * PI * j as f64 / (n - 1) as f64;
                let a = AnglePair::new(t, p).expect("grid inside domain");
                let (y, y2) = (h.eval(a), h.eval(a.wound(1)));
                sign = sign.max((y2 + y).norm() / y.norm());
                dens = dens.max((h.density(a.wound(1)) - h.density(a)).abs());
                dens = dens.max((y.norm_sqr() - h.density(a)).abs());
            }
        }
    }
    (sign, dens)
}

/// `(max projection round-trip error, max |coordinate - abstract|
/// expectation gap for S^2 and S_z)` over the given spinors.
pub fn pauli_equivalence(spinors: &[Spinor2], spec: &QuadratureSpec) -> Result<(f64, f64)> {
    let settings = OperatorSettings::default();
    let mut round_trip = 0.0_f64;
    let mut gap = 0.0_f64;
    for s in spinors {
        let f = s.to_field(spec.cover());
        round_trip = round_trip.max(project_to_spinor(&f, spec)?.distance(s));
        for (op, m) in [(SpinOperator::S2, SpinMatrix::s2()), (SpinOperator::Sz, SpinMatrix::sz())] {
            let coord = full_inner_product(&f, &op.field(&f, settings), spec)?;
            let abs = expectation(s, &m)?;
            gap = gap.max((coord - abs).norm());
        }
    }
    Ok((round_trip, gap))
}

fn ladder_gaps(d: &LadderDefect) -> [f64; 3] {
    [
        (d.norm_of_splus_beta - 1.0).abs(),
        d.overlap_with_alpha.norm(),
        (d.defect_norm - SQRT_2).abs(),
    ]
}

fn cmd_verify(cfg: &RunConfig, out: &mut dyn Write) -> CliResult {
    let checks = verification_checks(cfg)?;
    writeln!(out, "{:<22} {:>12} {:>10}  pass", "check", "value", "tolerance")?;
    for c in &checks {
        writeln!(
            out,
            "{:<22} {:>12.3e} {:>10.1e}  {}",
            c.name,
            c.value,
            c.tolerance,
            if c.passed { "PASS" } else { "FAIL" }
        )?;
    }
    let failed: Vec<&str> = checks.iter().filter(|c| !c.passed).map(|c| c.name.as_str()).collect();
    if failed.is_empty() {
        writeln!(out, "all {} checks passed", checks.len())?;
    } else {
        writeln!(out, "{} of {} checks failed: {}", failed.len(), checks.len(), failed.join(", "))?;
    }
    if cfg.output_path.is_some() {
        let body = match cfg.output_format {
            OutputFormat::Csv => {
                let mut s = String::from("check,value,tolerance,passed\n");
                for c in &checks {
                    s.push_str(&format!("{},{},{},{}\n", c.name, sig17(c.value), sig17(c.tolerance), c.passed));
                }
                s
            }
            OutputFormat::Json => serde_json::to_string_pretty(&checks).map_err(|e| CliError::Failure(e.to_string()))? + "\n",
        };
        emit(cfg, &body, &mut std::io::sink())?;
    }
    Ok(if failed.is_empty() { EXIT_OK } else { EXIT_CHECK_FAILED })
}

// ---------------------------------------------------------------- eval

/// `a + bi` / `a - bi` with 15 digits after the decimal point.
pub fn format_complex(z: Complex64) -> String {
    let re = fixed15(z.re);
    let im = fixed15(z.im.abs());
    let sign = if fixed15(z.im).starts_with('-') { '-' } else { '+' };
    format!("{re} {sign} {im}i")
}

fn fixed15(x: f64) -> String {
    let s = format!("{x:.15}");
    if s.trim_start_matches('-').chars().all(|c| c == '0' || c == '.') {
        s.trim_start_matches('-').to_string()
    } else {
        s
    }
}

fn cmd_eval(h: HarmonicArg, theta: f64, phi: f64, cfg: &RunConfig, out: &mut dyn Write) -> CliResult {
    let a = AnglePair::new(theta, phi).map_err(|e| CliError::Usage(e.to_string()))?;
    let harmonic = match h {
        HarmonicArg::Alpha => SpinHarmonic::alpha(cfg.cover),
        HarmonicArg::Beta => SpinHarmonic::beta(cfg.cover),
    };
    writeln!(out, "{}", format_complex(harmonic.eval(a)))?;
    writeln!(out, "density {}", fixed15(harmonic.density(a)))?;
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- ip

#[derive(Debug, Serialize)]
struct IpRow {
    kind: &'static str,
    pair: &'static str,
    theta: Option<Box<RawValue>>,
    re: Box<RawValue>,
    im: Box<RawValue>,
}

fn cmd_ip(theta: f64, cfg: &RunConfig, out: &mut dyn Write) -> CliResult {
    if !(theta > 0.0 && theta < PI) {
        return Err(CliError::Usage(format!("theta {theta} must lie strictly inside (0, pi)")));
    }
    let spec = cfg.spec()?;
    let a = SpinorField::alpha(cfg.cover);
    let b = SpinorField::beta(cfg.cover);
    let pairs: [(&'static str, &SpinorField, &SpinorField); 4] =
        [("alpha,alpha", &a, &a), ("beta,beta", &b, &b), ("alpha,beta", &a, &b), ("beta,alpha", &b, &a)];
    let mut rows = Vec::new();
    writeln!(out, "{:<6} {:<11} {:>22} {:>22}", "kind", "pair", "re", "im")?;
    for (name, f, g) in pairs {
        let full = full_inner_product(f, g, &spec)?;
        let phi = phi_inner_product(f, g, theta, &spec)?;
        for (kind, z, t) in [("full", full, None), ("phi", phi, Some(theta))] {
            writeln!(out, "{kind:<6} {name:<11} {:>22} {:>22}", sig17(z.re), sig17(z.im))?;
            rows.push(IpRow { kind, pair: name, theta: t.map(raw), re: raw(z.re), im: raw(z.im) });
        }
    }
    if cfg.output_path.is_some() {
        let body = match cfg.output_format {
            OutputFormat::Csv => {
                let mut s = String::from("kind,pair,theta,re,im\n");
                for r in &rows {
                    let t = r.theta.as_ref().map(|t| t.get().to_string()).unwrap_or_default();
                    s.push_str(&format!("{},\"{}\",{},{},{}\n", r.kind, r.pair, t, r.re.get(), r.im.get()));
                }
                s
            }
            OutputFormat::Json => {
                let doc = serde_json::json!({ "config": config_echo(cfg, None), "rows": rows });
                serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failure(e.to_string()))? + "\n"
            }
        };
        emit(cfg, &body, &mut std::io::sink())?;
    }
    Ok(EXIT_OK)
}

// ---------------------------------------------------------------- epr

#[derive(Debug, Serialize)]
struct PointOut {
    angle: Box<RawValue>,
    e_oracle: Box<RawValue>,
    e_quadrature: Box<RawValue>,
    abs_diff: Box<RawValue>,
}

fn config_echo(cfg: &RunConfig, n_points: Option<usize>) -> serde_json::Value {
    let mut v = serde_json::json!({
        "cover": cfg.cover.as_str(),
        "n_theta": cfg.n_theta,
        "n_phi": cfg.n_phi,
        "fd_step": cfg.fd_step,
        "format": cfg.output_format,
        "seed": cfg.seed,
    });
    if let Some(n) = n_points {
        v["n_points"] = n.into();
    }
    v
}

/// CSV body for a correlation curve: header plus one row per point.
pub fn curve_csv(points: &[CorrelationPoint]) -> String {
    let mut s = String::from("angle,e_oracle,e_quadrature,abs_diff\n");
    for p in points {
        s.push_str(&format!(
            "{},{},{},{}\n",
            sig17(p.angle_between_detectors),
            sig17(p.e_oracle),
            sig17(p.e_quadrature),
            sig17(p.abs_difference)
        ));
    }
    s
}

fn curve_json(points: &[CorrelationPoint], cfg: &RunConfig, n_points: usize) -> std::result::Result<String, CliError> {
    #[derive(Serialize)]
    struct Doc {
        config: serde_json::Value,
        points: Vec<PointOut>,
    }
    let doc = Doc {
        config: config_echo(cfg, Some(n_points)),
        points: points
            .iter()
            .map(|p| PointOut {
                angle: raw(p.angle_between_detectors),
                e_oracle: raw(p.e_oracle),
                e_quadrature: raw(p.e_quadrature),
                abs_diff: raw(p.abs_difference),
            })
            .collect(),
    };
    Ok(serde_json::to_string_pretty(&doc).map_err(|e| CliError::Failure(e.to_string()))? + "\n")
}

fn cmd_epr(n_points: usize, cfg: &RunConfig, out: &mut dyn Write, err: &mut dyn Write) -> CliResult {
    if n_points < 2 {
        return Err(CliError::Usage(format!("--n-points {n_points} must be >= 2")));
    }
    let spec = cfg.spec()?;
    let points = correlation_curve(&singlet(), n_points, &spec)?;
    let body = match cfg.output_format {
        OutputFormat::Csv => curve_csv(&points),
        OutputFormat::Json => curve_json(&points, cfg, n_points)?,
    };
    emit(cfg, &body, out)?;
    let worst = points.iter().map(|p| p.abs_difference).fold(0.0, f64::max);
    writeln!(err, "max |E_quadrature - E_oracle| = {worst:.3e} (tolerance {EPR_TOLERANCE:.0e})")?;
    writeln!(err, "note: {TRANSVERSE_NOTE}")?;
    Ok(if worst <= EPR_TOLERANCE { EXIT_OK } else { EXIT_CHECK_FAILED })
}

// ---------------------------------------------------------------- ladder-probe

fn cmd_ladder_probe(cfg: &RunConfig, out: &mut dyn Write) -> CliResult {
    let spec = cfg.spec()?;
    let d = ladder_defect(&spec, &OperatorSettings::default())?;
    let gaps = ladder_gaps(&d);
    let rows = [
        ("norm_of_splus_beta", d.norm_of_splus_beta, 1.0),
        ("overlap_with_alpha", d.overlap_with_alpha.norm(), 0.0),
        ("defect_norm", d.defect_norm, SQRT_2),
    ];
    writeln!(out, "{:<20} {:>20} {:>20} {:>10}  pass", "quantity", "value", "reference", "abs_diff")?;
    for ((name, value, reference), gap) in rows.iter().zip(gaps) {
        writeln!(
            out,
            "{name:<20} {value:>20.15} {reference:>20.15} {gap:>10.1e}  {}",
            if gap <= LADDER_TOLERANCE { "PASS" } else { "FAIL" }
        )?;
    }
    writeln!(
        out,
        "overlap_with_alpha (complex) = {}",
        format_complex(d.overlap_with_alpha)
    )?;
    writeln!(out, "S+ beta is orthogonal to alpha: the differential raising operator does not realize S+ beta = alpha")?;
    Ok(if gaps.iter().all(|g| *g <= LADDER_TOLERANCE) { EXIT_OK } else { EXIT_CHECK_FAILED })
}
