//! Quantum reflection on the CP tail and the cavity round-trip factor ρ(E).

use std::io::{Read, Write};

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::airy::airy_pair;
use crate::channel::Channel;
use crate::constants::HBAR;
use crate::error::{Error, Result};
use crate::numeric::{gauss_legendre, integrate_schrodinger, OdeOptions};
use crate::potential::{PhysicalSetup, PotentialModel};

/// Numerical controls shared by the scattering solvers.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SolverOptions {
    /// Relative tolerance of the Runge–Kutta integrator.
    pub rtol: f64,
    /// |Q| below which the WKB boundary wave is imposed near the surface.
    pub q_threshold: f64,
    /// Outer matching point: |V_CP| below this fraction of ħ²k²/2m.
    pub tail_threshold: f64,
}

impl Default for SolverOptions {
    fn default() -> Self {
        SolverOptions { rtol: 1e-11, q_threshold: 1e-6, tail_threshold: 1e-8 }
    }
}

impl SolverOptions {
    pub(crate) fn ode(&self) -> OdeOptions {
        OdeOptions { rtol: self.rtol, ..OdeOptions::default() }
    }
}

/// One reflection solve.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ReflectionSample {
    /// Wavevector in 1/m.
    pub k: f64,
    pub r: C64,
    /// Probability flux absorbed at the surface.
    pub transmission: f64,
}

/// Sampled reflection amplitude r(k).
#[derive(Debug, Clone, PartialEq)]
pub struct ReflectionData {
    surface: String,
    model: String,
    samples: Vec<ReflectionSample>,
}

impl ReflectionData {
    pub fn new(surface: impl Into<String>, model: impl Into<String>, samples: Vec<ReflectionSample>) -> Self {
        ReflectionData { surface: surface.into(), model: model.into(), samples }
    }

    pub fn surface(&self) -> &str {
        &self.surface
    }

    pub fn model(&self) -> &str {
        &self.model
    }

    pub fn samples(&self) -> &[ReflectionSample] {
        &self.samples
    }

    /// CSV with header `k_per_m,re_r,im_r`.
    pub fn write_csv<W: Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
        w.write_record(["k_per_m", "re_r", "im_r"]).map_err(io)?;
        for s in &self.samples {
            w.write_record([s.k.to_string(), s.r.re.to_string(), s.r.im.to_string()]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    /// Reads the CSV written by [`write_csv`](Self::write_csv); transmission is
    /// reconstructed as 1 − |r|².
    pub fn read_csv<R: Read>(reader: R, surface: &str, model: &str) -> Result<Self> {
        let mut rdr = csv::Reader::from_reader(reader);
        let mut samples = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 1;
            let rec = rec.map_err(|e| Error::TableParse { row, msg: e.to_string() })?;
            let get = |j: usize| -> Result<f64> {
                rec.get(j)
                    .and_then(|s| s.trim().parse().ok())
                    .ok_or_else(|| Error::TableParse { row, msg: format!("bad column {}", j + 1) })
            };
            let r = C64::new(get(1)?, get(2)?);
            samples.push(ReflectionSample { k: get(0)?, r, transmission: 1.0 - r.norm_sqr() });
        }
        Ok(ReflectionData::new(surface, model, samples))
    }
}

/// Length ℓ = √(2mC4)/ħ used to reduce the CP-only problem.
pub fn cp_length(setup: &PhysicalSetup, model: &PotentialModel) -> Result<f64> {
    let c4 = model.c4();
    if !(c4 > 0.0) {
        return Err(Error::InvalidParameter("reflection needs a potential with C4 > 0".into()));
    }
    Ok((2.0 * setup.mass() * c4).sqrt() / HBAR)
}

/// Reflection amplitude of the CP tail alone, with an absorbing surface.
pub fn reflection_amplitude(setup: &PhysicalSetup, model: &PotentialModel, k: f64) -> Result<ReflectionSample> {
    reflection_amplitude_with(setup, model, k, &SolverOptions::default())
}

pub fn reflection_amplitude_with(
    setup: &PhysicalSetup,
    model: &PotentialModel,
    k: f64,
    opts: &SolverOptions,
) -> Result<ReflectionSample> {
    if !(k > 0.0 && k.is_finite()) {
        return Err(Error::InvalidParameter(format!("wavevector must be positive, got {k}")));
    }
    let length = cp_length(setup, model)?;
    let kl = k * length;
    let ch = Channel::cp(setup, model, length, kl);
    let start = 10.0 / kl.sqrt().min(1.0);
    let x_c = ch.cp_crossover(start.max(10.0))?;
    let x_min = ch.wkb_floor(x_c, opts.q_threshold)?;
    let mut x_max = x_c;
    while ch.u.derivatives(x_max)?[0].abs() >= opts.tail_threshold * kl * kl {
        x_max *= 1.05;
    }

    let y0 = absorbing_start(&ch, x_min)?;
    let y = integrate_schrodinger(|x| ch.f(x), x_min, x_max, y0, &opts.ode())?;

    let [f, f1, _, _] = ch.derivatives(x_max)?;
    let phase = kl * x_max - tail_action(&ch, x_max, kl)?;
    let amp = f.powf(-0.25);
    let u_plus = amp * C64::from_polar(1.0, phase);
    let u_minus = amp * C64::from_polar(1.0, -phase);
    let log_d = -f1 / (4.0 * f);
    let up_p = (log_d + C64::i() * f.sqrt()) * u_plus;
    let um_p = (log_d - C64::i() * f.sqrt()) * u_minus;
    let two_i = C64::new(0.0, 2.0);
    let a = (y[0] * up_p - y[1] * u_plus) / two_i;
    let b = (u_minus * y[1] - um_p * y[0]) / two_i;
    Ok(ReflectionSample { k, r: b / a, transmission: 1.0 / a.norm_sqr() })
}

/// ∫_x^∞ (√F − K) dx′ via x′ = x/t.
fn tail_action(ch: &Channel, x: f64, kl: f64) -> Result<f64> {
    let mut sum = 0.0;
    for &(t, w) in gauss_legendre(20) {
        let t = 0.5 * (t + 1.0);
        let xp = x / t;
        let u = ch.u.derivatives(xp)?[0];
        let f = kl * kl - u;
        sum += 0.5 * w * (-u / (f.sqrt() + kl)) * x / (t * t);
    }
    Ok(sum)
}

/// Downward WKB wave F^{-1/4} e^{−i∫√F} at x, as (ψ, ψ′).
pub(crate) fn absorbing_start(ch: &Channel, x: f64) -> Result<[C64; 2]> {
    let [f, f1, _, _] = ch.derivatives(x)?;
    let psi = f.powf(-0.25);
    Ok([psi, (-f1 / (4.0 * f) - C64::i() * f.sqrt()) * psi])
}

/// Scans r(k) over a wavevector grid in parallel.
pub fn reflection_scan(
    setup: &PhysicalSetup,
    model: &PotentialModel,
    ks: &[f64],
    surface: &str,
    opts: &SolverOptions,
) -> Result<ReflectionData> {
    let samples = ks
        .par_iter()
        .map(|&k| reflection_amplitude_with(setup, model, k, opts))
        .collect::<Result<Vec<_>>>()?;
    Ok(ReflectionData::new(surface, model.label(), samples))
}

/// Lower boundary of the cavity.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Boundary {
    /// Purely downward WKB wave where the badlands function is negligible.
    Absorbing,
    /// ψ = 0 at the given altitude (m).
    HardWall { altitude: f64 },
}

/// Round-trip factor at one real energy.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RoundTrip {
    /// Energy in joules.
    pub energy: f64,
    pub rho: C64,
    /// 1 − |ρ|².
    pub transmission_loss: f64,
}

/// Solver for ρ(E) = c/a, where the wave above the CP wall is a·Ci⁻ + c·Ci⁺ in
/// the Langer coordinate.
///
/// The absorbing boundary point is fixed at construction (from the highest
/// energy of interest) so that ρ is a smooth function of E.
#[derive(Debug, Clone)]
pub struct RoundTripSolver {
    setup: PhysicalSetup,
    model: PotentialModel,
    boundary: Boundary,
    opts: SolverOptions,
    x_min: f64,
}

impl RoundTripSolver {
    /// `e_max` is the largest energy (ε_g units) the solver will be asked about.
    pub fn new(
        setup: &PhysicalSetup,
        model: &PotentialModel,
        boundary: Boundary,
        e_max: f64,
        opts: SolverOptions,
    ) -> Result<Self> {
        if !(e_max > 0.0) {
            return Err(Error::InvalidParameter(format!("energy bound must be positive, got {e_max}")));
        }
        let x_min = match boundary {
            Boundary::HardWall { altitude } => {
                if altitude < 0.0 {
                    return Err(Error::NonPositiveAltitude(altitude));
                }
                altitude / setup.ell_g()
            }
            Boundary::Absorbing => {
                let ch = Channel::gravity(setup, model, C64::new(e_max, 0.0));
                let x_c = ch.cp_crossover(0.5 * e_max)?;
                ch.wkb_floor(x_c, opts.q_threshold)?
            }
        };
        Ok(RoundTripSolver { setup: *setup, model: model.clone(), boundary, opts, x_min })
    }

    pub fn setup(&self) -> &PhysicalSetup {
        &self.setup
    }

    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    /// Lower integration point in ℓ_g units.
    pub fn lower_point(&self) -> f64 {
        self.x_min
    }

    /// ρ at complex energy `e` (ε_g units).
    pub fn rho(&self, e: C64) -> Result<C64> {
        let (w, psi_t) = self.langer_state(e)?;
        let v = airy_pair(w)?;
        let (cm, cp) = (v.ci_minus(), v.ci_plus());
        let (cm1, cp1) = (v.ci_minus_prime(), v.ci_plus_prime());
        let a = psi_t[0] * cp1 - psi_t[1] * cp;
        let c = cm * psi_t[1] - cm1 * psi_t[0];
        Ok(c / a)
    }

    pub fn at_energy(&self, energy: f64) -> Result<RoundTrip> {
        let rho = self.rho(C64::new(self.setup.to_eps_g(energy), 0.0))?;
        Ok(RoundTrip { energy, rho, transmission_loss: 1.0 - rho.norm_sqr() })
    }

    /// Integrates from the lower boundary to one ℓ_g above the turning point and
    /// returns w = 𝒛 − 𝒛_t there with the Langer-frame state (ψ̃, dψ̃/d𝒛).
    fn langer_state(&self, e: C64) -> Result<(C64, [C64; 2])> {
        let ch = Channel::gravity(&self.setup, &self.model, e);
        let x_t = ch.turning_point()?;
        let x_m = x_t.re.max(0.0) + 1.0;
        if x_m <= self.x_min {
            return Err(Error::InvalidParameter("energy below the lower integration point".into()));
        }
        let y0 = match self.boundary {
            Boundary::Absorbing => absorbing_start(&ch, self.x_min)?,
            Boundary::HardWall { .. } => [C64::new(0.0, 0.0), C64::new(1.0, 0.0)],
        };
        let y = integrate_schrodinger(|x| ch.f(x), self.x_min, x_m, y0, &self.opts.ode())?;
        let (w, zp) = ch.langer_point(x_t, x_m)?;
        let [_, f1, _, _] = ch.derivatives(x_m)?;
        let zpp = -(f1 + zp * zp * zp) / (2.0 * w * zp);
        let sq = zp.sqrt();
        let psi_t = [sq * y[0], y[1] / sq + zpp * y[0] / (2.0 * zp * sq)];
        Ok((w, psi_t))
    }
}

/// ρ(E) with an absorbing surface; `energy` in joules.
pub fn round_trip_factor(setup: &PhysicalSetup, model: &PotentialModel, energy: f64) -> Result<RoundTrip> {
    let e = setup.to_eps_g(energy);
    RoundTripSolver::new(setup, model, Boundary::Absorbing, e, SolverOptions::default())?.at_energy(energy)
}
