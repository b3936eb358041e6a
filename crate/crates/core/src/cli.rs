//! Command-line front end: config parsing, subcommands and exit codes.
//!
//! Exit codes: `0` success, `2` unreadable or invalid configuration, `3` the
//! parameters describe no black hole, `4` a solver or domain error, `5` some
//! mode could not be certified.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand};
use serde::{Deserialize, Serialize};

use crate::angular::{solve_angular, AngularMethod, AngularProblem};
use crate::error::{Error, Result};
use crate::geometry::{
    admissibility, critical_masses, cubic_resolvent_check, find_horizons, jacobian_det, Background, Classification,
    PhysicalParams,
};
use crate::positivity::eta_bound;
use crate::radial::{angular_eigenvalue, certify_sweep, CertifyOptions, Verdict};
use crate::separation::{horizon_potentials, End, FieldParams, HalfInteger, RadialCoefficients, TortoiseMap};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CONFIG: i32 = 2;
pub const EXIT_NO_BLACK_HOLE: i32 = 3;
pub const EXIT_SOLVER: i32 = 4;
pub const EXIT_UNCERTIFIED: i32 = 5;

/// Background given either by physical parameters or by its horizon radii.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", deny_unknown_fields)]
pub enum BackgroundSpec {
    Physical { m: f64, a: f64, l: f64, q_e: f64, #[serde(default)] q_m: f64 },
    /// The charge split is not fixed by the roots; `q_m` is taken as given and `q_e` absorbs the rest.
    Roots { r_c: f64, r_plus: f64, r_minus: f64, l: f64, #[serde(default)] q_m: f64 },
    /// Mass set to the lower critical value, where the inner horizons merge.
    Extremal { a: f64, l: f64, q_e: f64, #[serde(default)] q_m: f64 },
}

impl BackgroundSpec {
    /// Invalid numbers are reported as configuration errors.
    pub fn params(&self) -> Result<PhysicalParams> {
        let p = match *self {
            Self::Physical { m, a, l, q_e, q_m } => PhysicalParams::new(m, a, l, q_e, q_m),
            Self::Roots { r_c, r_plus, r_minus, l, q_m } => PhysicalParams::from_roots(r_c, r_plus, r_minus, l, q_m),
            Self::Extremal { a, l, q_e, q_m } => {
                let z = q_e.hypot(q_m);
                match critical_masses(a, z, l).values {
                    Some(v) => PhysicalParams::new(v.m_crit_minus, a, l, q_e, q_m),
                    None => Err(Error::NoBlackHole(crate::geometry::NoBlackHoleReason::SpinBoundViolated)),
                }
            }
        };
        p.map_err(|e| match e {
            Error::Precondition(m) => Error::Config(m),
            other => other,
        })
    }
}

/// Either an explicit list or an inclusive arithmetic range.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum OmegaGrid {
    List(Vec<f64>),
    Range { start: f64, stop: f64, step: f64 },
}

impl OmegaGrid {
    pub fn values(&self) -> Result<Vec<f64>> {
        let v = match self {
            Self::List(v) => v.clone(),
            Self::Range { start, stop, step } => {
                if !(*step > 0.0) || !(stop >= start) {
                    return Err(Error::Config(format!("bad omega range {start}..{stop} step {step}")));
                }
                let n = ((stop - start) / step + 1e-9).floor() as usize;
                (0..=n).map(|i| start + i as f64 * step).collect()
            }
        };
        if v.is_empty() || v.iter().any(|w| !w.is_finite()) || v.windows(2).any(|w| w[1] <= w[0]) {
            return Err(Error::Config("omega grid must be finite, nonempty and strictly increasing".into()));
        }
        Ok(v)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModeSpec {
    /// Half-integer `k` values.
    pub k: Vec<HalfInteger>,
    pub j_max: u32,
    pub omega: OmegaGrid,
}

impl Default for ModeSpec {
    fn default() -> Self {
        let k = [-3, -1, 1, 3].iter().map(|t| HalfInteger::from_twice(*t).unwrap()).collect();
        Self { k, j_max: 3, omega: OmegaGrid::Range { start: -5.0, stop: 5.0, step: 0.1 } }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AngularChoice {
    Galerkin,
    FiniteDifference,
    /// Galerkin values with the finite-difference disagreement per row.
    Both,
}

/// Settings of the tabulation commands.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct SampleSpec {
    pub k: HalfInteger,
    pub j: i32,
    /// Tortoise range; chosen so the potential has settled at both ends when absent.
    pub y_range: Option<[f64; 2]>,
    pub count: usize,
}

impl Default for SampleSpec {
    fn default() -> Self {
        Self { k: HalfInteger::from_twice(1).unwrap(), j: 1, y_range: None, count: 2001 }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RunConfig {
    pub background: BackgroundSpec,
    pub field: FieldParams,
    #[serde(default)]
    pub modes: ModeSpec,
    #[serde(default)]
    pub tolerances: CertifyOptions,
    #[serde(default = "default_angular")]
    pub angular_method: AngularChoice,
    #[serde(default)]
    pub sample: SampleSpec,
    /// Output directory; `--out` takes precedence.
    #[serde(default)]
    pub out_dir: Option<PathBuf>,
}

fn default_angular() -> AngularChoice {
    AngularChoice::Galerkin
}

impl RunConfig {
    pub fn from_json(text: &str) -> Result<Self> {
        let cfg: Self = serde_json::from_str(text).map_err(|e| Error::Config(e.to_string()))?;
        cfg.modes.omega.values()?;
        Ok(cfg)
    }

    pub fn load(path: &Path) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
        Self::from_json(&text)
    }

    /// Applies `key=value` pairs separated by commas to the tolerances.
    pub fn apply_tol_overrides(&mut self, spec: &str) -> Result<()> {
        let mut v = serde_json::to_value(self.tolerances).expect("tolerances serialize");
        for pair in spec.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (key, val) = pair.split_once('=').ok_or_else(|| Error::Config(format!("override `{pair}` is not key=value")))?;
            let key = key.trim();
            let num: f64 = val.trim().parse().map_err(|_| Error::Config(format!("override `{pair}` is not numeric")))?;
            let slot = v.get_mut(key).ok_or_else(|| Error::Config(format!("unknown tolerance `{key}`")))?;
            *slot = serde_json::json!(num);
        }
        self.tolerances = serde_json::from_value(v).map_err(|e| Error::Config(e.to_string()))?;
        Ok(())
    }
}

#[derive(Debug, Parser)]
#[command(name = "knds", version, about = "Dirac fields on Kerr-Newman-de Sitter black holes")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// JSON run configuration.
    #[arg(long, global = true)]
    pub config: Option<PathBuf>,
    /// Directory for output files.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Worker threads for sweeps.
    #[arg(long, global = true)]
    pub threads: Option<usize>,
    /// Tolerance overrides such as `y_max=2000,variation_tol=1e-4`.
    #[arg(long, global = true)]
    pub tol_overrides: Option<String>,
}

#[derive(Debug, Clone, Copy, Subcommand)]
pub enum Command {
    /// Horizons, critical masses, Jacobian and weight bound.
    Classify,
    /// Table of angular eigenvalues.
    Angular,
    /// Sweep of non-normalizability certificates.
    Certify,
    /// Tortoise coordinate table.
    Tortoise,
    /// Radial potential table.
    Potential,
}

fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Config(_) => EXIT_CONFIG,
        Error::NoBlackHole(_) => EXIT_NO_BLACK_HOLE,
        _ => EXIT_SOLVER,
    }
}

/// Parses arguments, runs the command and returns the process exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_CONFIG } else { EXIT_OK };
        }
    };
    match run(&cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

fn run(cli: &Cli) -> Result<i32> {
    let path = cli.config.as_ref().ok_or_else(|| Error::Config("--config is required".into()))?;
    let mut cfg = RunConfig::load(path)?;
    if let Some(spec) = &cli.tol_overrides {
        cfg.apply_tol_overrides(spec)?;
    }
    let out = cli.out.clone().or_else(|| cfg.out_dir.clone()).unwrap_or_else(|| PathBuf::from("."));
    fs::create_dir_all(&out)?;
    if let Some(n) = cli.threads {
        // Fails only if a pool already exists, e.g. in-process tests; keep that pool.
        if rayon::ThreadPoolBuilder::new().num_threads(n).build_global().is_err() {
            log::debug!("global thread pool already initialized");
        }
    }
    match cli.command {
        Command::Classify => cmd_classify(&cfg, &out),
        Command::Angular => cmd_angular(&cfg, &out),
        Command::Certify => cmd_certify(&cfg, &out),
        Command::Tortoise => cmd_tortoise(&cfg, &out),
        Command::Potential => cmd_potential(&cfg, &out),
    }
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let text = serde_json::to_string_pretty(value).map_err(|e| Error::Config(e.to_string()))?;
    fs::write(path, text + "\n")?;
    Ok(())
}

/// Formats a float with 17 significant digits.
pub fn fmt_f64(x: f64) -> String {
    format!("{x:.16e}")
}

fn csv_writer(path: &Path) -> Result<csv::Writer<fs::File>> {
    csv::Writer::from_path(path).map_err(|e| Error::Io(std::io::Error::other(e)))
}

fn csv_err(e: csv::Error) -> Error {
    Error::Io(std::io::Error::other(e))
}

#[derive(Debug, Serialize)]
struct ClassifyReport {
    classification: Classification,
    label: &'static str,
    params: PhysicalParams,
    discriminant: f64,
    m_crit_minus: Option<f64>,
    m_crit_plus: Option<f64>,
    resolvent_all_real: bool,
    horizons: Option<Horizons>,
    jacobian: Option<f64>,
    eta_numeric: Option<f64>,
    sqrt_h_rplus: Option<f64>,
}

#[derive(Debug, Serialize)]
struct Horizons {
    r_minus: f64,
    r_plus: f64,
    r_c: f64,
    r_neg: f64,
}

fn cmd_classify(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let params = cfg.background.params()?;
    let adm = admissibility(&params);
    let crit = critical_masses(params.a, params.z2().sqrt(), params.l);
    let mut report = ClassifyReport {
        classification: adm.classification,
        label: adm.classification.label(),
        params,
        discriminant: crit.discriminant,
        m_crit_minus: crit.values.map(|v| v.m_crit_minus),
        m_crit_plus: crit.values.map(|v| v.m_crit_plus),
        resolvent_all_real: cubic_resolvent_check(&params).all_real,
        horizons: None,
        jacobian: None,
        eta_numeric: None,
        sqrt_h_rplus: None,
    };
    let code = if adm.classification.is_black_hole() {
        let h = find_horizons(&params)?;
        let bg = Background::new(params)?;
        let eta = eta_bound(&bg)?;
        report.horizons = Some(Horizons { r_minus: h.r_minus, r_plus: h.r_plus, r_c: h.r_c, r_neg: h.r_neg() });
        report.jacobian = Some(jacobian_det(h.r_c, h.r_plus, h.r_minus, params.l));
        report.eta_numeric = Some(eta.eta_numeric);
        report.sqrt_h_rplus = Some(eta.sqrt_h_rplus);
        EXIT_OK
    } else {
        eprintln!("no black hole: {}", adm.classification.label());
        EXIT_NO_BLACK_HOLE
    };
    write_json(&out.join("classification.json"), &report)?;
    let mut stdout = std::io::stdout().lock();
    writeln!(stdout, "{}", serde_json::to_string_pretty(&report).expect("report serializes"))?;
    Ok(code)
}

fn background(cfg: &RunConfig) -> Result<(Background, FieldParams)> {
    let bg = Background::new(cfg.background.params()?)?;
    Ok((bg, cfg.field))
}

fn cmd_angular(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let (bg, field) = background(cfg)?;
    let j_max = cfg.modes.j_max as i32;
    if j_max < 1 {
        return Err(Error::Config("j_max must be at least 1".into()));
    }
    let count = 2 * j_max as usize + 4;
    let mut w = csv_writer(&out.join("angular.csv"))?;
    let both = cfg.angular_method == AngularChoice::Both;
    let mut header = vec!["k", "j", "lambda", "residual", "method"];
    if both {
        header.push("disagreement");
    }
    w.write_record(&header).map_err(csv_err)?;
    for &k in &cfg.modes.k {
        let p = AngularProblem::from_background(&bg, &field, k)?;
        let method = match cfg.angular_method {
            AngularChoice::FiniteDifference => AngularMethod::FiniteDifference,
            _ => AngularMethod::Galerkin,
        };
        let spec = solve_angular(&p, count, method)?;
        let other = if both { Some(solve_angular(&p, count, AngularMethod::FiniteDifference)?) } else { None };
        let mut rows: Vec<_> = spec.eigenvalues.iter().filter(|e| e.j.abs() <= j_max).collect();
        rows.sort_by_key(|e| (e.j < 0, e.j.abs()));
        if rows.len() != 2 * j_max as usize {
            return Err(Error::NoConvergence {
                what: format!("angular indices up to ±{j_max} for k = {k}"),
                last: rows.iter().map(|e| e.lambda).collect(),
            });
        }
        for e in rows {
            let method_name = match method {
                AngularMethod::Galerkin => "galerkin",
                AngularMethod::FiniteDifference => "finite_difference",
            };
            let mut rec = vec![k.to_string(), e.j.to_string(), fmt_f64(e.lambda), fmt_f64(e.residual), method_name.into()];
            if let Some(o) = &other {
                let l2 = o.lambda(e.j).ok_or_else(|| Error::NoConvergence {
                    what: format!("finite-difference index j = {}", e.j),
                    last: vec![e.lambda],
                })?;
                rec.push(fmt_f64((e.lambda - l2).abs()));
            }
            w.write_record(&rec).map_err(csv_err)?;
        }
    }
    w.flush()?;
    Ok(EXIT_OK)
}

#[derive(Debug, Serialize)]
struct CertifySummary {
    total: usize,
    certified: usize,
    inconclusive: usize,
    all_certified: bool,
    phi_plus: Vec<(HalfInteger, f64)>,
    phi_c: Vec<(HalfInteger, f64)>,
    modes: Vec<ModeVerdict>,
}

#[derive(Debug, Serialize)]
struct ModeVerdict {
    k: HalfInteger,
    j: i32,
    lambda: f64,
    omega: f64,
    verdict: Verdict,
}

fn cmd_certify(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let (bg, field) = background(cfg)?;
    let omegas = cfg.modes.omega.values()?;
    let js: Vec<i32> = (1..=cfg.modes.j_max as i32).collect();
    let sweep = certify_sweep(&bg, &field, &cfg.modes.k, &js, &omegas, &cfg.tolerances)?;

    let mut w = csv_writer(&out.join("tails.csv"))?;
    w.write_record([
        "k", "j", "omega", "end", "x0_1", "x0_2", "cutoff", "amplitude", "variation", "frequency", "predicted_frequency",
        "mass_slope", "mass_r2", "certified",
    ])
    .map_err(csv_err)?;
    for c in &sweep.certificates {
        for e in [&c.inner, &c.cosmological] {
            for s in &e.solutions {
                let end = match s.end {
                    End::Inner => "inner",
                    End::Cosmological => "cosmological",
                };
                w.write_record([
                    c.k.to_string(),
                    c.j.to_string(),
                    fmt_f64(c.omega),
                    end.into(),
                    fmt_f64(s.x0[0]),
                    fmt_f64(s.x0[1]),
                    fmt_f64(s.cutoff),
                    fmt_f64(s.amplitude),
                    fmt_f64(s.variation),
                    fmt_f64(s.frequency),
                    fmt_f64(s.predicted_frequency),
                    fmt_f64(s.mass_fit.slope),
                    fmt_f64(s.mass_fit.r2),
                    s.certified.to_string(),
                ])
                .map_err(csv_err)?;
            }
        }
    }
    w.flush()?;

    let summary = CertifySummary {
        total: sweep.total,
        certified: sweep.certified,
        inconclusive: sweep.total - sweep.certified,
        all_certified: sweep.all_certified(),
        phi_plus: cfg.modes.k.iter().map(|&k| (k, horizon_potentials(&bg, &field, k).phi_plus)).collect(),
        phi_c: cfg.modes.k.iter().map(|&k| (k, horizon_potentials(&bg, &field, k).phi_c)).collect(),
        modes: sweep
            .certificates
            .iter()
            .map(|c| ModeVerdict { k: c.k, j: c.j, lambda: c.lambda, omega: c.omega, verdict: c.verdict })
            .collect(),
    };
    write_json(&out.join("certificate.json"), &summary)?;
    println!("{} of {} modes certified", sweep.certified, sweep.total);
    Ok(if sweep.all_certified() { EXIT_OK } else { EXIT_UNCERTIFIED })
}

/// Default tabulation range: where the remainder has dropped below the simple-end threshold.
fn sample_range(c: &RadialCoefficients, tol: &CertifyOptions) -> Result<[f64; 2]> {
    let mut ends = [0.0; 2];
    for (slot, end) in ends.iter_mut().zip([End::Inner, End::Cosmological]) {
        let phi = c.limits.at(end);
        let mut y = tol.y_min;
        loop {
            match c.map.point_at(end.sign() * y) {
                Ok(pt) if c.parts_at(&pt).remainder_norm(phi) > tol.simple_delta && y < tol.y_max => y *= 2.0,
                _ => break,
            }
        }
        *slot = end.sign() * y;
    }
    Ok(ends)
}

fn sample_ys(range: [f64; 2], count: usize) -> Result<Vec<f64>> {
    if count < 2 || !(range[1] > range[0]) {
        return Err(Error::Config("sample needs count ≥ 2 and an increasing y range".into()));
    }
    Ok((0..count).map(|i| range[0] + (range[1] - range[0]) * i as f64 / (count - 1) as f64).collect())
}

fn sample_coefficients(cfg: &RunConfig) -> Result<RadialCoefficients> {
    let (bg, field) = background(cfg)?;
    let lambda = angular_eigenvalue(&bg, &field, cfg.sample.k, cfg.sample.j)?;
    RadialCoefficients::new(&bg, &field, cfg.sample.k, lambda)
}

fn cmd_tortoise(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let c = sample_coefficients(cfg)?;
    let range = match cfg.sample.y_range {
        Some(r) => r,
        None => sample_range(&c, &cfg.tolerances)?,
    };
    let map: &TortoiseMap = &c.map;
    let mut w = csv_writer(&out.join("tortoise.csv"))?;
    w.write_record(["y", "r", "r_minus_r_plus", "r_c_minus_r", "delta_r"]).map_err(csv_err)?;
    for y in sample_ys(range, cfg.sample.count)? {
        let pt = map.point_at(y)?;
        w.write_record([fmt_f64(y), fmt_f64(map.r_of(&pt)), fmt_f64(pt.d_plus), fmt_f64(pt.d_c), fmt_f64(map.delta_at(&pt))])
            .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

fn cmd_potential(cfg: &RunConfig, out: &Path) -> Result<i32> {
    let c = sample_coefficients(cfg)?;
    let range = match cfg.sample.y_range {
        Some(r) => r,
        None => sample_range(&c, &cfg.tolerances)?,
    };
    let (phi_p, phi_c) = (c.limits.phi_plus, c.limits.phi_c);
    let mut w = csv_writer(&out.join("potential.csv"))?;
    w.write_record(["y", "r", "v11", "v12", "v22", "phi_plus", "phi_c", "remainder_inner", "remainder_cosmological"])
        .map_err(csv_err)?;
    for y in sample_ys(range, cfg.sample.count)? {
        let pt = c.map.point_at(y)?;
        let v = c.parts_at(&pt);
        let m = v.matrix();
        w.write_record([
            fmt_f64(y),
            fmt_f64(c.map.r_of(&pt)),
            fmt_f64(m[0][0]),
            fmt_f64(m[0][1]),
            fmt_f64(m[1][1]),
            fmt_f64(phi_p),
            fmt_f64(phi_c),
            fmt_f64(v.remainder_norm(phi_p)),
            fmt_f64(v.remainder_norm(phi_c)),
        ])
        .map_err(csv_err)?;
    }
    w.flush()?;
    Ok(EXIT_OK)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn omega_range_is_inclusive() {
        let g = OmegaGrid::Range { start: -5.0, stop: 5.0, step: 0.1 };
        let v = g.values().unwrap();
        assert_eq!(v.len(), 101);
        assert!((v[100] - 5.0).abs() < 1e-12);
        assert!(OmegaGrid::List(vec![1.0, 0.5]).values().is_err());
    }

    #[test]
    fn overrides_touch_only_named_keys() {
        let mut cfg = RunConfig::from_json(
            r#"{"background": {"roots": {"r_c": 7, "r_plus": 2.5, "r_minus": 2.2, "l": 10}}, "field": {"mu": 0.5, "e": 0.3}}"#,
        )
        .unwrap();
        cfg.apply_tol_overrides("y_max=20, variation_tol=1e-4").unwrap();
        assert_eq!(cfg.tolerances.y_max, 20.0);
        assert_eq!(cfg.tolerances.variation_tol, 1e-4);
        assert_eq!(cfg.tolerances.rtol, CertifyOptions::default().rtol);
        assert!(cfg.apply_tol_overrides("nonsense=1").is_err());
    }
}
