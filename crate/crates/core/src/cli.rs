//! Command-line front end: each subcommand emits one table as CSV or JSON.

use std::ffi::OsString;
use std::fs::File;
use std::io::{self, Write};
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use num_complex::Complex64 as C64;
use serde_json::{json, Map, Value};

use crate::airy::zero;
use crate::cavity::{
    complex_pole, lifetime_of, lorentzian_fit, numeric_solver, resonance_energies, response_scan,
    scattering_length_lifetime, scattering_length_records, transition_frequencies, EffectiveRangeCavity,
    RoundTripModel,
};
use crate::constants::{ATOMIC_MASS_UNIT, BOHR_RADIUS, HARTREE, PICO_EV};
use crate::effrange::{fit_coefficients, EffectiveRangeCoefficients, FitReport, DEFAULT_WINDOW};
use crate::error::Error;
use crate::liouville::{langer_map, LangerProblem};
use crate::potential::{PhysicalSetup, PotentialModel, SurfacePreset, TabulatedPotential};
use crate::scatter::{cp_length, reflection_scan, Boundary, ReflectionData, ReflectionSample, RoundTripSolver, SolverOptions};

#[derive(Debug, Parser)]
#[command(name = "qbounce", version, about = "Quantum levitation states of atoms above a mirror")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Ideal bouncer levels λ_n ε_g and transition frequencies.
    Ideal(Common),
    /// Reflection amplitude r(k) of the CP tail, optionally fitted.
    Reflect {
        #[command(flatten)]
        common: Common,
        /// Number of energies in the window.
        #[arg(long, default_value_t = 200)]
        points: usize,
        /// Generate r(k) from the surface's effective-range coefficients.
        #[arg(long)]
        synthetic: bool,
    },
    /// Real resonance energies and their shifts.
    Resonances {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// Complex poles of the cavity response and lifetimes.
    Poles {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Both)]
        method: Method,
    },
    /// |f(E)|² over an energy grid with Lorentzian fits of the peaks.
    Scan {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum, default_value_t = Method::Effrange)]
        method: Method,
        #[arg(long, default_value_t = 2000)]
        points: usize,
        /// Peak to fit (repeatable); defaults to 1..=nmax.
        #[arg(long = "peak")]
        peaks: Vec<usize>,
    },
    /// Langer-coordinate grid (z, 𝒛, 𝑭, Q) for one energy.
    LangerDump {
        #[command(flatten)]
        common: Common,
        /// Energy in ε_g units (default: λ_1).
        #[arg(long)]
        energy: Option<f64>,
        #[arg(long, default_value_t = 400)]
        points: usize,
        /// Lower end of the grid in ℓ_g units.
        #[arg(long)]
        zmin: Option<f64>,
        /// Upper end of the grid in ℓ_g units.
        #[arg(long)]
        zmax: Option<f64>,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Method {
    Numeric,
    Effrange,
    Both,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum ModelKind {
    None,
    V4,
    V3v4,
    Table,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

#[derive(Debug, Args)]
struct Common {
    /// Shipped surface preset: perfect-mirror, silicon, silica.
    #[arg(long)]
    preset: Option<String>,
    /// Surface preset JSON file with custom coefficients.
    #[arg(long)]
    config: Option<PathBuf>,
    /// Potential used on the numeric path.
    #[arg(long, value_enum)]
    model: Option<ModelKind>,
    /// Tabulated potential CSV (`z_m,V_eV`).
    #[arg(long)]
    table: Option<PathBuf>,
    /// C3 in atomic units for the v3v4 model.
    #[arg(long)]
    c3: Option<f64>,
    /// Atom mass in unified atomic mass units.
    #[arg(long)]
    mass: Option<f64>,
    /// Gravitational acceleration in m/s².
    #[arg(long)]
    gravity: Option<f64>,
    #[arg(long, default_value_t = 10)]
    nmax: usize,
    /// Energy window `lo,hi` in ε_g units.
    #[arg(long, value_parser = parse_window)]
    window: Option<(f64, f64)>,
    /// Output file (default: stdout).
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Csv)]
    format: Format,
    /// Fit effective-range coefficients to numerically computed r(k).
    #[arg(long)]
    fit: bool,
    /// Print energies in peV instead of ε_g units.
    #[arg(long)]
    si: bool,
}

fn parse_window(s: &str) -> Result<(f64, f64), String> {
    let (a, b) = s.split_once(',').ok_or("expected `lo,hi`")?;
    let lo: f64 = a.trim().parse().map_err(|e| format!("{e}"))?;
    let hi: f64 = b.trim().parse().map_err(|e| format!("{e}"))?;
    Ok((lo, hi))
}

/// Failure of a command, mapped to an exit code.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Numeric(Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Numeric(_) => 3,
        }
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        CliError::Numeric(e)
    }
}

fn usage(msg: impl Into<String>) -> CliError {
    CliError::Usage(msg.into())
}

type CliResult<T> = std::result::Result<T, CliError>;

/// Where the surface description comes from.
#[derive(Debug, Clone)]
pub enum SurfaceSource {
    Preset(SurfacePreset),
    Table(TabulatedPotential),
}

/// Validated settings shared by all subcommands.
#[derive(Debug, Clone)]
pub struct RunConfig {
    pub setup: PhysicalSetup,
    pub surface: SurfaceSource,
    pub model: PotentialModel,
    pub n_max: usize,
    pub window: Option<(f64, f64)>,
    pub out: Option<PathBuf>,
    pub json: bool,
    pub si: bool,
    pub fit: bool,
}

impl RunConfig {
    fn from_common(c: &Common) -> CliResult<Self> {
        let selected = [c.preset.is_some(), c.config.is_some(), c.table.is_some()].iter().filter(|&&b| b).count();
        if selected > 1 {
            return Err(usage("choose only one of --preset, --config, --table"));
        }
        let mass = c.mass.map(|m| m * ATOMIC_MASS_UNIT);
        let setup = match (mass, c.gravity) {
            (None, None) => PhysicalSetup::hydrogen(),
            (m, g) => {
                let d = PhysicalSetup::hydrogen();
                PhysicalSetup::new(m.unwrap_or(d.mass()), g.unwrap_or(d.gravity())).map_err(|e| usage(e.to_string()))?
            }
        };
        let surface = if let Some(path) = &c.table {
            SurfaceSource::Table(TabulatedPotential::from_csv_path(path).map_err(|e| usage(format!("{}: {e}", e.name())))?)
        } else if let Some(path) = &c.config {
            let text = std::fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))?;
            SurfaceSource::Preset(SurfacePreset::from_json(&text).map_err(|e| usage(e.to_string()))?)
        } else {
            let name = c.preset.as_deref().unwrap_or("perfect-mirror");
            SurfaceSource::Preset(SurfacePreset::by_name(name).map_err(|e| usage(e.to_string()))?)
        };
        let kind = c.model.unwrap_or(match surface {
            SurfaceSource::Table(_) => ModelKind::Table,
            SurfaceSource::Preset(_) => ModelKind::V4,
        });
        let model = match (kind, &surface) {
            (ModelKind::None, _) => PotentialModel::Absent,
            (ModelKind::Table, SurfaceSource::Table(t)) => PotentialModel::Tabulated(t.clone()),
            (ModelKind::Table, _) => return Err(usage("--model table needs --table")),
            (_, SurfaceSource::Table(_)) => return Err(usage("--table only works with --model table")),
            (ModelKind::V4, SurfaceSource::Preset(p)) => PotentialModel::homogeneous_v4(p.c4(&setup))?,
            (ModelKind::V3v4, SurfaceSource::Preset(p)) => {
                let c3 = match (c.c3, p.c3()) {
                    (Some(au), _) => au * HARTREE * BOHR_RADIUS.powi(3),
                    (None, Some(c3)) => c3,
                    (None, None) => return Err(usage("--model v3v4 needs --c3")),
                };
                PotentialModel::v3v4(c3, p.c4(&setup)).map_err(|e| usage(e.to_string()))?
            }
        };
        if c.nmax == 0 {
            return Err(usage("--nmax must be at least 1"));
        }
        if let Some((lo, hi)) = c.window {
            if !(lo >= 0.0 && hi > lo && hi.is_finite()) {
                return Err(usage(format!("empty energy window ({lo}, {hi}]")));
            }
        }
        Ok(RunConfig {
            setup,
            surface,
            model,
            n_max: c.nmax,
            window: c.window,
            out: c.out.clone(),
            json: c.format == Format::Json,
            si: c.si,
            fit: c.fit,
        })
    }

    fn surface_name(&self) -> String {
        match &self.surface {
            SurfaceSource::Preset(p) => p.name.clone(),
            SurfaceSource::Table(_) => "table".into(),
        }
    }

    /// Energy unit in joules for printing.
    fn unit(&self) -> f64 {
        if self.si {
            PICO_EV
        } else {
            self.setup.eps_g()
        }
    }

    fn unit_suffix(&self) -> &'static str {
        if self.si {
            "peV"
        } else {
            "over_epsg"
        }
    }

    fn needs_potential(&self) -> CliResult<()> {
        if matches!(self.model, PotentialModel::Absent) {
            return Err(usage("this command needs a CP potential (--model v4, v3v4 or table)"));
        }
        Ok(())
    }

    /// Effective-range coefficients: fitted to the numeric r(k) with --fit,
    /// otherwise the preset's.
    fn coefficients(&self) -> CliResult<(EffectiveRangeCoefficients, Option<FitReport>)> {
        match (&self.surface, self.fit) {
            (SurfaceSource::Preset(p), false) => Ok((p.coefficients(), None)),
            _ => {
                self.needs_potential()?;
                let window = self.window.unwrap_or(DEFAULT_WINDOW);
                let data = numeric_reflection(self, window, 200)?;
                let ell = cp_length(&self.setup, &self.model)?;
                let (c, report) = fit_coefficients(&data, &self.setup, ell, window)?;
                Ok((c, Some(report)))
            }
        }
    }
}

/// Column-oriented output table.
struct Table {
    headers: Vec<String>,
    rows: Vec<Vec<Value>>,
}

impl Table {
    fn new(headers: &[&str]) -> Self {
        Table { headers: headers.iter().map(|s| s.to_string()).collect(), rows: Vec::new() }
    }

    fn push(&mut self, row: Vec<Value>) {
        self.rows.push(row);
    }

    fn write_csv<W: Write>(&self, w: W) -> CliResult<()> {
        let mut out = csv::Writer::from_writer(w);
        let io = |e: csv::Error| CliError::Numeric(Error::InvalidParameter(e.to_string()));
        out.write_record(&self.headers).map_err(io)?;
        for row in &self.rows {
            out.write_record(row.iter().map(cell_text)).map_err(io)?;
        }
        out.flush().map_err(|e| CliError::Numeric(Error::InvalidParameter(e.to_string())))
    }

    fn to_json(&self) -> Value {
        Value::Array(
            self.rows
                .iter()
                .map(|row| Value::Object(self.headers.iter().cloned().zip(row.iter().cloned()).collect::<Map<_, _>>()))
                .collect(),
        )
    }
}

fn cell_text(v: &Value) -> String {
    match v {
        Value::Null => String::new(),
        Value::String(s) => s.clone(),
        Value::Number(n) => match n.as_f64() {
            Some(f) if n.is_f64() => f.to_string(),
            _ => n.to_string(),
        },
        other => other.to_string(),
    }
}

fn num(v: f64) -> Value {
    serde_json::Number::from_f64(v).map(Value::Number).unwrap_or(Value::Null)
}

fn opt(v: Option<f64>) -> Value {
    v.map(num).unwrap_or(Value::Null)
}

fn writer(cfg: &RunConfig) -> CliResult<Box<dyn Write>> {
    Ok(match &cfg.out {
        Some(path) => Box::new(File::create(path).map_err(|e| usage(format!("{}: {e}", path.display())))?),
        None => Box::new(io::stdout().lock()),
    })
}

/// Writes the main table; `extra` is attached in JSON mode, or sent to stderr in CSV mode.
fn emit(cfg: &RunConfig, table: &Table, extra: Option<(&str, Value)>) -> CliResult<()> {
    let mut w = writer(cfg)?;
    if cfg.json {
        let mut doc = Map::new();
        doc.insert("rows".into(), table.to_json());
        if let Some((key, value)) = extra {
            doc.insert(key.into(), value);
        }
        serde_json::to_writer_pretty(&mut w, &Value::Object(doc))
            .map_err(|e| CliError::Numeric(Error::InvalidParameter(e.to_string())))?;
        writeln!(w).map_err(|e| usage(e.to_string()))?;
    } else {
        table.write_csv(&mut w)?;
        if let Some((key, value)) = extra {
            eprintln!("{}", json!({ key: value }));
        }
    }
    Ok(())
}

fn cmd_ideal(cfg: &RunConfig) -> CliResult<()> {
    let records = scattering_length_records(&cfg.setup, C64::new(0.0, 0.0), cfg.n_max)?;
    let pairs: Vec<(usize, usize)> = (1..=cfg.n_max).map(|n| (1, n)).collect();
    let omega = transition_frequencies(&records, &pairs)?;
    let e_col = format!("E0_{}", cfg.unit_suffix());
    let mut t = Table::new(&["n", "lambda", &e_col, "omega_1n_rad_s"]);
    for (r, w) in records.iter().zip(omega) {
        t.push(vec![json!(r.n), num(zero(r.n)?), opt(r.energy.map(|e| e / cfg.unit())), num(w)]);
    }
    emit(cfg, &t, None)
}

fn energy_grid(window: (f64, f64), points: usize) -> Vec<f64> {
    let (lo, hi) = window;
    (1..=points).map(|i| lo + (hi - lo) * i as f64 / points as f64).collect()
}

fn numeric_reflection(cfg: &RunConfig, window: (f64, f64), points: usize) -> CliResult<ReflectionData> {
    let ks: Vec<f64> = energy_grid(window, points)
        .into_iter()
        .map(|e| cfg.setup.wavevector(cfg.setup.from_eps_g(e)))
        .collect();
    Ok(reflection_scan(&cfg.setup, &cfg.model, &ks, &cfg.surface_name(), &SolverOptions::default())?)
}

fn fit_json(c: &EffectiveRangeCoefficients, report: &FitReport) -> Value {
    json!({
        "ell_m": c.ell,
        "alpha0_re": c.alpha0.re,
        "alpha0_im": c.alpha0.im,
        "alpha2_re": c.alpha2.re,
        "alpha2_im": c.alpha2.im,
        "residual_rms": report.residual_rms,
        "samples": report.samples,
        "condition": report.condition,
    })
}

fn cmd_reflect(cfg: &RunConfig, points: usize, synthetic: bool) -> CliResult<()> {
    let window = cfg.window.unwrap_or((0.0, 500.0));
    if points == 0 {
        return Err(usage("--points must be positive"));
    }
    let (data, ell) = if synthetic {
        let SurfaceSource::Preset(p) = &cfg.surface else {
            return Err(usage("--synthetic needs a surface preset"));
        };
        let coeffs = p.coefficients();
        let samples = energy_grid(window, points)
            .into_iter()
            .map(|e| {
                let k = cfg.setup.wavevector(cfg.setup.from_eps_g(e));
                let r = coeffs.r_model(k)?;
                Ok(ReflectionSample { k, r, transmission: 1.0 - r.norm_sqr() })
            })
            .collect::<crate::Result<Vec<_>>>()?;
        (ReflectionData::new(p.name.clone(), "effective-range", samples), coeffs.ell)
    } else {
        cfg.needs_potential()?;
        (numeric_reflection(cfg, window, points)?, cp_length(&cfg.setup, &cfg.model)?)
    };
    let fit = if cfg.fit {
        let (c, report) = fit_coefficients(&data, &cfg.setup, ell, window)?;
        Some(fit_json(&c, &report))
    } else {
        None
    };
    let mut t = Table::new(&["k_per_m", "re_r", "im_r", "transmission"]);
    for s in data.samples() {
        t.push(vec![num(s.k), num(s.r.re), num(s.r.im), num(s.transmission)]);
    }
    if !cfg.json && !cfg.fit {
        let w = writer(cfg)?;
        return Ok(data.write_csv(w)?);
    }
    emit(cfg, &t, fit.map(|f| ("fit", f)))
}

struct Paths {
    coeffs: EffectiveRangeCoefficients,
    report: Option<FitReport>,
    numeric: Option<RoundTripSolver>,
    analytic: Option<EffectiveRangeCavity>,
}

fn paths(cfg: &RunConfig, method: Method) -> CliResult<Paths> {
    let (coeffs, report) = cfg.coefficients()?;
    let numeric = if method != Method::Effrange {
        cfg.needs_potential()?;
        Some(numeric_solver(&cfg.setup, &cfg.model, cfg.n_max, SolverOptions::default())?)
    } else {
        None
    };
    let analytic = (method != Method::Numeric).then(|| EffectiveRangeCavity::new(&cfg.setup, &coeffs));
    Ok(Paths { coeffs, report, numeric, analytic })
}

fn cmd_resonances(cfg: &RunConfig, method: Method) -> CliResult<()> {
    let p = paths(cfg, method)?;
    let shift = p.coeffs.scattering_length().0.re / cfg.setup.ell_g();
    let solve = |m: Option<&dyn RoundTripModel>| -> CliResult<Option<Vec<(f64, f64)>>> {
        Ok(match m {
            Some(m) => Some(resonance_energies(m, cfg.n_max)?),
            None => None,
        })
    };
    let num_e = solve(p.numeric.as_ref().map(|s| s as &dyn RoundTripModel))?;
    let ana_e = solve(p.analytic.as_ref().map(|s| s as &dyn RoundTripModel))?;
    let u = cfg.setup.to_eps_g(cfg.unit()).recip();
    let mut t = Table::new(&[
        "n",
        "E0",
        "E_num",
        "E_ana",
        "shift_num",
        "shift_ana",
        "num_minus_sl",
        "ana_minus_sl",
        "delta_ana_num",
        "survival_num",
        "survival_ana",
    ]);
    for n in 1..=cfg.n_max {
        let e0 = zero(n)?;
        let en = num_e.as_ref().map(|v| v[n - 1]);
        let ea = ana_e.as_ref().map(|v| v[n - 1]);
        let scaled = |v: Option<f64>| opt(v.map(|x| x * u));
        t.push(vec![
            json!(n),
            num(e0 * u),
            scaled(en.map(|v| v.0)),
            scaled(ea.map(|v| v.0)),
            scaled(en.map(|v| v.0 - e0)),
            scaled(ea.map(|v| v.0 - e0)),
            scaled(en.map(|v| v.0 - e0 - shift)),
            scaled(ea.map(|v| v.0 - e0 - shift)),
            scaled(en.zip(ea).map(|(a, b)| b.0 - a.0)),
            opt(en.map(|v| v.1)),
            opt(ea.map(|v| v.1)),
        ]);
    }
    let extra = p.report.map(|r| ("fit", fit_json(&p.coeffs, &r)));
    emit(cfg, &t, extra)
}

fn cmd_poles(cfg: &RunConfig, method: Method) -> CliResult<()> {
    let p = paths(cfg, method)?;
    let a = p.coeffs.scattering_length().0;
    let sl_shift = a / cfg.setup.ell_g();
    let poles = |m: Option<&dyn RoundTripModel>| -> CliResult<Option<Vec<C64>>> {
        Ok(match m {
            Some(m) => {
                Some((1..=cfg.n_max).map(|n| complex_pole(m, n)).collect::<crate::Result<Vec<_>>>()?)
            }
            None => None,
        })
    };
    let num_p = poles(p.numeric.as_ref().map(|s| s as &dyn RoundTripModel))?;
    let ana_p = poles(p.analytic.as_ref().map(|s| s as &dyn RoundTripModel))?;
    let eg = cfg.setup.eps_g();
    let u = eg / cfg.unit();
    let mut t = Table::new(&[
        "n",
        "re_num",
        "im_num",
        "re_ana",
        "im_ana",
        "re_sl",
        "im_sl",
        "re_num_minus_sl",
        "im_num_minus_sl",
        "re_ana_minus_sl",
        "im_ana_minus_sl",
        "re_delta_ana_num",
        "im_delta_ana_num",
        "lifetime_num_s",
        "lifetime_ana_s",
        "lifetime_sl_s",
    ]);
    let b = -a.im;
    for n in 1..=cfg.n_max {
        let sl = zero(n)? + sl_shift;
        let pn = num_p.as_ref().map(|v| v[n - 1]);
        let pa = ana_p.as_ref().map(|v| v[n - 1]);
        let re = |v: Option<C64>| opt(v.map(|c| c.re * u));
        let im = |v: Option<C64>| opt(v.map(|c| c.im * u));
        let delta = pn.zip(pa).map(|(x, y)| y - x);
        t.push(vec![
            json!(n),
            re(pn),
            im(pn),
            re(pa),
            im(pa),
            num(sl.re * u),
            num(sl.im * u),
            re(pn.map(|c| c - sl)),
            im(pn.map(|c| c - sl)),
            re(pa.map(|c| c - sl)),
            im(pa.map(|c| c - sl)),
            re(delta),
            im(delta),
            opt(pn.map(|c| lifetime_of(c * eg))),
            opt(pa.map(|c| lifetime_of(c * eg))),
            num(scattering_length_lifetime(&cfg.setup, b)),
        ]);
    }
    let extra = p.report.map(|r| ("fit", fit_json(&p.coeffs, &r)));
    emit(cfg, &t, extra)
}

fn cmd_scan(cfg: &RunConfig, method: Method, points: usize, peaks: &[usize]) -> CliResult<()> {
    if method == Method::Both {
        return Err(usage("scan takes a single --method (numeric or effrange)"));
    }
    if points < 2 {
        return Err(usage("--points must be at least 2"));
    }
    let p = paths(cfg, method)?;
    let model: &dyn RoundTripModel = match (&p.numeric, &p.analytic) {
        (Some(s), _) => s,
        (None, Some(c)) => c,
        (None, None) => unreachable!("one path is always built"),
    };
    let window = cfg.window.unwrap_or((zero(1)? - 0.5, zero(cfg.n_max)? + 0.5));
    let grid: Vec<f64> = (0..points)
        .map(|i| window.0 + (window.1 - window.0) * i as f64 / (points - 1) as f64)
        .collect();
    let scan = response_scan(model, &grid)?;
    let wanted: Vec<usize> = if peaks.is_empty() { (1..=cfg.n_max).collect() } else { peaks.to_vec() };

    let u = cfg.setup.eps_g() / cfg.unit();
    let mut fits = Vec::new();
    for &n in &wanted {
        if n == 0 {
            return Err(usage("peak indices start at 1"));
        }
        let pole = complex_pole(model, n)?;
        if pole.re < window.0 || pole.re > window.1 {
            continue;
        }
        let g = pole.im.abs();
        let fine: Vec<f64> = (0..81).map(|i| pole.re - 4.0 * g + 8.0 * g * i as f64 / 80.0).collect();
        let peak = lorentzian_fit(&response_scan(model, &fine)?)?;
        fits.push(json!({
            "n": n,
            "center": peak.center * u,
            "half_width": peak.half_width * u,
            "amplitude": peak.amplitude,
            "residual": peak.residual,
            "pole_re": pole.re * u,
            "pole_im": pole.im * u,
            "ideal_E0": zero(n)? * u,
        }));
    }
    let meta = json!({
        "unit": cfg.unit_suffix(),
        "method": if method == Method::Numeric { "numeric" } else { "effective-range" },
        "surface": cfg.surface_name(),
        "peaks": fits,
    });
    let mut t = Table::new(&[if cfg.si { "E_peV" } else { "E_over_epsg" }, "abs_f_sq"]);
    for (e, f) in scan {
        t.push(vec![num(e * u), num(f)]);
    }
    emit(cfg, &t, Some(("meta", meta)))
}

fn cmd_langer_dump(
    cfg: &RunConfig,
    energy: Option<f64>,
    points: usize,
    zmin: Option<f64>,
    zmax: Option<f64>,
) -> CliResult<()> {
    if points < 4 {
        return Err(usage("--points must be at least 4"));
    }
    let e = match energy {
        Some(e) => e,
        None => zero(1)?,
    };
    let problem = LangerProblem::new(&cfg.setup, &cfg.model, cfg.setup.from_eps_g(e))?;
    let ell = cfg.setup.ell_g();
    let x_t = problem.turning_point() / ell;
    let lo = match (zmin, &cfg.model) {
        (Some(z), _) => z,
        (None, PotentialModel::Absent) => 1e-3 * x_t,
        (None, _) => RoundTripSolver::new(&cfg.setup, &cfg.model, Boundary::Absorbing, e + 1.0, SolverOptions::default())?
            .lower_point(),
    };
    let hi = zmax.unwrap_or(x_t + 3.0);
    if !(lo > 0.0 && lo < x_t && hi > x_t) {
        return Err(usage(format!("grid [{lo}, {hi}] must bracket the turning point {x_t}")));
    }
    let map = langer_map(&problem, lo * ell, hi * ell)?;
    let half = points / 2;
    let mid = 0.5 * x_t;
    let mut zs: Vec<f64> = (0..half).map(|i| lo * (mid / lo).powf(i as f64 / half as f64)).collect();
    let rest = points - half;
    zs.extend((0..rest).map(|i| mid + (hi - mid) * i as f64 / (rest - 1) as f64));
    let zs: Vec<f64> = zs.into_iter().map(|x| x * ell).collect();
    let rows = map.dump(&zs)?;
    let mut t = Table::new(&["z_m", "bold_z", "bold_F", "Q", "V_cp"]);
    for [z, bz, f, q] in rows {
        t.push(vec![num(z), num(bz), num(f), num(q), num(e - f - bz)]);
    }
    emit(cfg, &t, Some(("turning_point_m", num(problem.turning_point()))))
}

fn dispatch(cli: Cli) -> CliResult<()> {
    match cli.command {
        Command::Ideal(c) => cmd_ideal(&RunConfig::from_common(&c)?),
        Command::Reflect { common, points, synthetic } => cmd_reflect(&RunConfig::from_common(&common)?, points, synthetic),
        Command::Resonances { common, method } => cmd_resonances(&RunConfig::from_common(&common)?, method),
        Command::Poles { common, method } => cmd_poles(&RunConfig::from_common(&common)?, method),
        Command::Scan { common, method, points, peaks } => {
            cmd_scan(&RunConfig::from_common(&common)?, method, points, &peaks)
        }
        Command::LangerDump { common, energy, points, zmin, zmax } => {
            cmd_langer_dump(&RunConfig::from_common(&common)?, energy, points, zmin, zmax)
        }
    }
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    match dispatch(cli) {
        Ok(()) => 0,
        Err(err) => {
            match &err {
                CliError::Usage(msg) => eprintln!("error: {msg}"),
                CliError::Numeric(e) => eprintln!("error: {}: {e}", e.name()),
            }
            err.exit_code()
        }
    }
}
