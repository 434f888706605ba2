//! Cavity resonances: ideal levels, scattering-length shifts, real resonance
//! energies, complex poles of the response function, Lorentzian fits and
//! lifetimes.

use std::f64::consts::PI;
use std::fmt;
use std::io::Write;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::airy::{airy_pair, airy_phase, airy_phase_complex, zero};
use crate::constants::HBAR;
use crate::effrange::EffectiveRangeCoefficients;
use crate::error::{Error, Result};
use crate::numeric::brent;
use crate::potential::{PhysicalSetup, PotentialModel};
use crate::scatter::{Boundary, RoundTripSolver, SolverOptions};

/// How a resonance was obtained.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    Numeric,
    EffectiveRange,
    ScatteringLength,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Numeric => "numeric",
            Method::EffectiveRange => "effective-range",
            Method::ScatteringLength => "scattering-length",
        })
    }
}

/// Anything that can evaluate the round-trip factor ρ at complex energy (ε_g units).
pub trait RoundTripModel: Sync {
    fn rho(&self, e: C64) -> Result<C64>;

    fn method(&self) -> Method;

    /// Expected level shift (ε_g units) used to seed searches; a/ℓ_g when known.
    fn shift_hint(&self) -> C64 {
        C64::new(0.0, 0.0)
    }
}

impl RoundTripModel for RoundTripSolver {
    fn rho(&self, e: C64) -> Result<C64> {
        RoundTripSolver::rho(self, e)
    }

    fn method(&self) -> Method {
        Method::Numeric
    }
}

/// ρ = r(K)·Ci⁻(−e)/Ci⁺(−e) with r from the effective-range model.
#[derive(Debug, Clone, Copy)]
pub struct EffectiveRangeCavity {
    pub setup: PhysicalSetup,
    pub coeffs: EffectiveRangeCoefficients,
}

impl EffectiveRangeCavity {
    pub fn new(setup: &PhysicalSetup, coeffs: &EffectiveRangeCoefficients) -> Self {
        EffectiveRangeCavity { setup: *setup, coeffs: *coeffs }
    }

    /// K = kℓ at reduced energy e (k = √e/ℓ_g).
    pub fn k_ell(&self, e: C64) -> C64 {
        e.sqrt() * (self.coeffs.ell / self.setup.ell_g())
    }
}

fn airy_round_trip(r: C64, e: C64) -> Result<C64> {
    let v = airy_pair(-e)?;
    Ok(r * v.ci_minus() / v.ci_plus())
}

impl RoundTripModel for EffectiveRangeCavity {
    fn rho(&self, e: C64) -> Result<C64> {
        airy_round_trip(self.coeffs.r_of_k_ell(self.k_ell(e)), e)
    }

    fn method(&self) -> Method {
        Method::EffectiveRange
    }

    fn shift_hint(&self) -> C64 {
        self.coeffs.scattering_length().0 / self.setup.ell_g()
    }
}

/// ρ with the constant-length reflection r = −(1 − ika)/(1 + ika).
#[derive(Debug, Clone, Copy)]
pub struct ScatteringLengthCavity {
    pub setup: PhysicalSetup,
    /// Complex scattering length in metres.
    pub a: C64,
}

impl RoundTripModel for ScatteringLengthCavity {
    fn rho(&self, e: C64) -> Result<C64> {
        let ika = C64::i() * e.sqrt() * (self.a / self.setup.ell_g());
        airy_round_trip(-(1.0 - ika) / (1.0 + ika), e)
    }

    fn method(&self) -> Method {
        Method::ScatteringLength
    }

    fn shift_hint(&self) -> C64 {
        self.a / self.setup.ell_g()
    }
}

/// Parameters of |f|² ≈ A/((E − c)² + γ²).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LorentzianPeak {
    pub center: f64,
    pub half_width: f64,
    pub amplitude: f64,
    /// RMS residual of the fit relative to the peak height.
    pub residual: f64,
}

/// One resonance. Energies are in joules.
#[derive(Debug, Clone, PartialEq)]
pub struct ResonanceRecord {
    pub n: usize,
    /// Real resonance energy E_n (arg ρ = 0), when computed.
    pub energy: Option<f64>,
    /// Pole ℰ_n of the response function, when computed.
    pub complex_energy: Option<C64>,
    pub method: Method,
    /// |ρ(E_n)|, the amplitude kept per round trip.
    pub survival: Option<f64>,
    pub peak: Option<LorentzianPeak>,
}

impl ResonanceRecord {
    /// −ħ/(2 Im ℰ_n) in seconds.
    pub fn lifetime(&self) -> Option<f64> {
        self.complex_energy.map(lifetime_of)
    }

    /// Re ℰ_n if known, else E_n.
    pub fn real_energy(&self) -> Option<f64> {
        self.complex_energy.map(|c| c.re).or(self.energy)
    }
}

/// E_n⁰ = λ_n ε_g for n = 1..=n_max.
pub fn ideal_levels(setup: &PhysicalSetup, n_max: usize) -> Result<Vec<f64>> {
    check_n(n_max)?;
    (1..=n_max).map(|n| Ok(zero(n)? * setup.eps_g())).collect()
}

/// ℰ_n¹ = λ_n ε_g + m g a.
pub fn scattering_length_levels(setup: &PhysicalSetup, a: C64, n_max: usize) -> Result<Vec<C64>> {
    let shift = setup.mass() * setup.gravity() * a;
    Ok(ideal_levels(setup, n_max)?.into_iter().map(|e| e + shift).collect())
}

pub fn scattering_length_records(setup: &PhysicalSetup, a: C64, n_max: usize) -> Result<Vec<ResonanceRecord>> {
    Ok(scattering_length_levels(setup, a, n_max)?
        .into_iter()
        .enumerate()
        .map(|(i, c)| ResonanceRecord {
            n: i + 1,
            energy: Some(c.re),
            complex_energy: Some(c),
            method: Method::ScatteringLength,
            survival: None,
            peak: None,
        })
        .collect())
}

fn check_n(n_max: usize) -> Result<()> {
    if n_max == 0 {
        return Err(Error::InvalidParameter("n_max must be at least 1".into()));
    }
    Ok(())
}

fn search_window(n: usize) -> Result<(f64, f64)> {
    let lambda = zero(n)?;
    Ok((lambda, 0.4 * (zero(n + 1)? - lambda)))
}

/// Real resonance energies (ε_g units) where arg ρ(e) = 0, on the branch that
/// carries the n-th Airy winding: 2θ(−e) + arg(ρ e^{−2iθ(−e)}) = 2nπ.
pub fn resonance_energies<M: RoundTripModel + ?Sized>(model: &M, n_max: usize) -> Result<Vec<(f64, f64)>> {
    check_n(n_max)?;
    let shift = model.shift_hint().re;
    (1..=n_max)
        .into_par_iter()
        .map(|n| {
            let (lambda, half) = search_window(n)?;
            let seed = lambda + shift;
            let phase = |e: f64| -> Result<f64> {
                let theta = airy_phase(-e);
                let rho = model.rho(C64::new(e, 0.0))?;
                let rest = (rho * C64::from_polar(1.0, -2.0 * theta)).arg();
                if rest.abs() > 0.5 * PI {
                    return Err(Error::PhaseUnwrapError(n));
                }
                Ok(2.0 * theta + rest - 2.0 * PI * n as f64)
            };
            let e = brent(phase, seed - half, seed + half, 1e-14 * seed)?.ok_or(Error::BracketFailure(n))?;
            let survival = model.rho(C64::new(e, 0.0))?.norm();
            Ok((e, survival))
        })
        .collect()
}

/// Resonances from direct integration of the Schrödinger equation.
pub fn resonances_numeric(setup: &PhysicalSetup, model: &PotentialModel, n_max: usize) -> Result<Vec<ResonanceRecord>> {
    let solver = numeric_solver(setup, model, n_max, SolverOptions::default())?;
    resonances_with(setup, &solver, n_max)
}

/// A round-trip solver whose boundary is valid up to the (n_max+1)-th level.
pub fn numeric_solver(
    setup: &PhysicalSetup,
    model: &PotentialModel,
    n_max: usize,
    opts: SolverOptions,
) -> Result<RoundTripSolver> {
    check_n(n_max)?;
    let e_max = zero(n_max + 1)? + 1.0;
    RoundTripSolver::new(setup, model, Boundary::Absorbing, e_max, opts)
}

/// Resonances for any round-trip model, as records in joules.
pub fn resonances_with<M: RoundTripModel + ?Sized>(
    setup: &PhysicalSetup,
    model: &M,
    n_max: usize,
) -> Result<Vec<ResonanceRecord>> {
    Ok(resonance_energies(model, n_max)?
        .into_iter()
        .enumerate()
        .map(|(i, (e, s))| ResonanceRecord {
            n: i + 1,
            energy: Some(setup.from_eps_g(e)),
            complex_energy: None,
            method: model.method(),
            survival: Some(s),
            peak: None,
        })
        .collect())
}

/// Resonances of the effective-range model: θ(−e_n) − Re arctan(k𝒜(K_n)) = nπ.
pub fn resonances_effective_range(
    setup: &PhysicalSetup,
    coeffs: &EffectiveRangeCoefficients,
    n_max: usize,
) -> Result<Vec<ResonanceRecord>> {
    check_n(n_max)?;
    let cavity = EffectiveRangeCavity::new(setup, coeffs);
    let shift = cavity.shift_hint().re;
    (1..=n_max)
        .map(|n| {
            let (lambda, half) = search_window(n)?;
            let seed = lambda + shift;
            let condition = |e: f64| -> Result<f64> {
                let ka = coeffs.k_script_a(cavity.k_ell(C64::new(e, 0.0)));
                Ok(airy_phase(-e) - ka.atan().re - PI * n as f64)
            };
            let e = brent(condition, seed - half, seed + half, 1e-14 * seed)?.ok_or(Error::BracketFailure(n))?;
            let survival = cavity.rho(C64::new(e, 0.0))?.norm();
            Ok(ResonanceRecord {
                n,
                energy: Some(setup.from_eps_g(e)),
                complex_energy: None,
                method: Method::EffectiveRange,
                survival: Some(survival),
                peak: None,
            })
        })
        .collect()
}

/// Cavity response f = ρ/(1 − ρ).
pub fn response_function(rho: C64) -> Result<C64> {
    if rho == C64::new(1.0, 0.0) {
        return Err(Error::InvalidParameter("response function has a pole at rho = 1".into()));
    }
    Ok(rho / (1.0 - rho))
}

/// Newton step for finite-difference derivatives, ε_g units.
const NEWTON_FD_STEP: f64 = 1e-7;

/// Complex pole of ρ/(1 − ρ) near ℰ_n¹ (ε_g units), by Newton on ρ(e) = 1.
pub fn complex_pole<M: RoundTripModel + ?Sized>(model: &M, n: usize) -> Result<C64> {
    let seed = zero(n)? + model.shift_hint();
    let mut e = seed;
    for _ in 0..60 {
        let rho = model.rho(e)?;
        let g = rho - 1.0;
        if g.norm() < 1e-10 {
            if (e - seed).norm() > 0.5 {
                return Err(Error::WrongBasin { n, distance: (e - seed).norm() });
            }
            if e.im >= 0.0 {
                return Err(Error::NewtonDivergence(n));
            }
            return Ok(e);
        }
        let h = NEWTON_FD_STEP;
        let d = (model.rho(e + h)? - model.rho(e - h)?) / (2.0 * h);
        let step = g / d;
        if !step.re.is_finite() || !step.im.is_finite() {
            return Err(Error::NewtonDivergence(n));
        }
        e -= step;
        if (e - seed).norm() > 0.5 {
            return Err(Error::WrongBasin { n, distance: (e - seed).norm() });
        }
    }
    Err(Error::NewtonDivergence(n))
}

/// Poles ℰ_1..ℰ_{n_max} in joules.
pub fn complex_poles<M: RoundTripModel + ?Sized>(setup: &PhysicalSetup, model: &M, n_max: usize) -> Result<Vec<C64>> {
    check_n(n_max)?;
    (1..=n_max)
        .into_par_iter()
        .map(|n| Ok(complex_pole(model, n)? * setup.eps_g()))
        .collect()
}

/// Records carrying both E_n and ℰ_n for one model.
pub fn full_records<M: RoundTripModel + ?Sized>(
    setup: &PhysicalSetup,
    model: &M,
    n_max: usize,
) -> Result<Vec<ResonanceRecord>> {
    let mut records = resonances_with(setup, model, n_max)?;
    let poles = complex_poles(setup, model, n_max)?;
    for (r, p) in records.iter_mut().zip(poles) {
        r.complex_energy = Some(p);
    }
    Ok(records)
}

/// Complex Airy-phase form of the effective-range round trip,
/// ρ = exp(2i(θ(−e) − arctan k𝒜)); equal to [`EffectiveRangeCavity`] by identity.
pub fn effective_range_rho_phase(cavity: &EffectiveRangeCavity, e: C64) -> Result<C64> {
    let theta = airy_phase_complex(-e)?;
    let ka = cavity.coeffs.k_script_a(cavity.k_ell(e));
    Ok((2.0 * C64::i() * (theta - ka.atan())).exp())
}

/// τ = −ħ/(2 Im ℰ) for a pole in joules.
pub fn lifetime_of(complex_energy: C64) -> f64 {
    -HBAR / (2.0 * complex_energy.im)
}

pub fn lifetime(record: &ResonanceRecord) -> Option<f64> {
    record.lifetime()
}

/// Scattering-length lifetime τ = ħ/(2mgb), b in metres.
pub fn scattering_length_lifetime(setup: &PhysicalSetup, b: f64) -> f64 {
    HBAR / (2.0 * setup.mass() * setup.gravity() * b)
}

/// ω_mn = (Re ℰ_n − Re ℰ_m)/ħ in rad/s for each (m, n) pair.
pub fn transition_frequencies(records: &[ResonanceRecord], pairs: &[(usize, usize)]) -> Result<Vec<f64>> {
    let energy = |n: usize| -> Result<f64> {
        records
            .iter()
            .find(|r| r.n == n)
            .and_then(|r| r.real_energy())
            .ok_or_else(|| Error::InvalidParameter(format!("no energy for level {n}")))
    };
    pairs.iter().map(|&(m, n)| Ok((energy(n)? - energy(m)?) / HBAR)).collect()
}

/// |f(e)|² on a grid of reduced energies.
pub fn response_scan<M: RoundTripModel + ?Sized>(model: &M, energies: &[f64]) -> Result<Vec<(f64, f64)>> {
    energies
        .par_iter()
        .map(|&e| Ok((e, response_function(model.rho(C64::new(e, 0.0))?)?.norm_sqr())))
        .collect()
}

/// RMS residual (relative to the peak) above which a fit is reported as contaminated.
pub const LORENTZIAN_RESIDUAL_LIMIT: f64 = 0.05;

/// Least-squares fit of A/((E − c)² + γ²) to samples (E, |f|²). The amplitude
/// is eliminated in closed form; (c, γ) follow by damped Gauss–Newton.
/// Residuals are scaled by the largest sample.
pub fn lorentzian_fit(samples: &[(f64, f64)]) -> Result<LorentzianPeak> {
    if samples.len() < 7 {
        return Err(Error::FitDiverged(format!("{} samples, at least 7 needed", samples.len())));
    }
    if samples.iter().any(|&(e, y)| !(y > 0.0) || !e.is_finite()) {
        return Err(Error::FitDiverged("samples must be finite with positive |f|^2".into()));
    }
    let (i_max, &(c0, y_max)) = samples
        .iter()
        .enumerate()
        .max_by(|a, b| a.1 .1.total_cmp(&b.1 .1))
        .unwrap();
    let mut gamma = half_max_width(samples, i_max, y_max);
    let mut center = c0;

    let residuals = |c: f64, g: f64| -> (Vec<f64>, f64) {
        let shape: Vec<f64> = samples.iter().map(|&(e, _)| 1.0 / ((e - c).powi(2) + g * g)).collect();
        let num: f64 = shape.iter().zip(samples).map(|(l, s)| l * s.1).sum();
        let amp = num / shape.iter().map(|l| l * l).sum::<f64>();
        (shape.iter().zip(samples).map(|(l, s)| (s.1 - amp * l) / y_max).collect(), amp)
    };
    let cost = |r: &[f64]| r.iter().map(|v| v * v).sum::<f64>();

    let mut lambda = 1e-3;
    let (mut res, _) = residuals(center, gamma);
    let mut current = cost(&res);
    for _ in 0..200 {
        let hc = 1e-7 * gamma;
        let hg = 1e-7 * gamma;
        let (rc_p, _) = residuals(center + hc, gamma);
        let (rc_m, _) = residuals(center - hc, gamma);
        let (rg_p, _) = residuals(center, gamma + hg);
        let (rg_m, _) = residuals(center, gamma - hg);
        let mut jtj = [[0.0; 2]; 2];
        let mut jtr = [0.0; 2];
        for i in 0..res.len() {
            let j = [(rc_p[i] - rc_m[i]) / (2.0 * hc), (rg_p[i] - rg_m[i]) / (2.0 * hg)];
            for a in 0..2 {
                jtr[a] += j[a] * res[i];
                for b in 0..2 {
                    jtj[a][b] += j[a] * j[b];
                }
            }
        }
        let mut accepted = false;
        for _ in 0..30 {
            let m = [[jtj[0][0] * (1.0 + lambda), jtj[0][1]], [jtj[1][0], jtj[1][1] * (1.0 + lambda)]];
            let det = m[0][0] * m[1][1] - m[0][1] * m[1][0];
            if det == 0.0 || !det.is_finite() {
                return Err(Error::FitDiverged("singular normal matrix".into()));
            }
            let dc = -(m[1][1] * jtr[0] - m[0][1] * jtr[1]) / det;
            let dg = -(m[0][0] * jtr[1] - m[1][0] * jtr[0]) / det;
            let (nc, ng) = (center + dc, (gamma + dg).abs());
            let (nr, _) = residuals(nc, ng);
            let trial = cost(&nr);
            if trial <= current {
                let small = dc.abs() <= 1e-12 * gamma && dg.abs() <= 1e-12 * gamma
                    || current - trial <= 1e-15 * current.max(1e-300);
                center = nc;
                gamma = ng;
                res = nr;
                current = trial;
                lambda = (lambda * 0.3).max(1e-12);
                accepted = true;
                if small {
                    return finish(samples, center, gamma, &residuals);
                }
                break;
            }
            lambda *= 10.0;
        }
        if !accepted {
            return finish(samples, center, gamma, &residuals);
        }
    }
    Err(Error::FitDiverged("no convergence in 200 iterations".into()))
}

fn finish<R>(samples: &[(f64, f64)], center: f64, gamma: f64, residuals: &R) -> Result<LorentzianPeak>
where
    R: Fn(f64, f64) -> (Vec<f64>, f64),
{
    let (res, amp) = residuals(center, gamma);
    let rms = (res.iter().map(|v| v * v).sum::<f64>() / samples.len() as f64).sqrt();
    if !(gamma > 0.0) || !amp.is_finite() {
        return Err(Error::FitDiverged("non-positive width".into()));
    }
    if rms > LORENTZIAN_RESIDUAL_LIMIT {
        return Err(Error::PeakOverlap);
    }
    Ok(LorentzianPeak { center, half_width: gamma, amplitude: amp, residual: rms })
}

fn half_max_width(samples: &[(f64, f64)], i_max: usize, y_max: f64) -> f64 {
    let half = 0.5 * y_max;
    let left = samples[..i_max].iter().rev().find(|s| s.1 < half).map(|s| s.0);
    let right = samples[i_max..].iter().find(|s| s.1 < half).map(|s| s.0);
    let c = samples[i_max].0;
    match (left, right) {
        (Some(l), Some(r)) => 0.5 * (r - l),
        (Some(l), None) => c - l,
        (None, Some(r)) => r - c,
        (None, None) => 0.25 * (samples.last().unwrap().0 - samples[0].0).abs(),
    }
}

/// Writes `n,E_over_epsg,reE_over_epsg,imE_over_epsg,lifetime_s,method,surface`.
/// Energies are divided by `unit` (ε_g for reduced output, or 1 peV).
pub fn write_resonance_csv<W: Write>(records: &[ResonanceRecord], unit: f64, surface: &str, writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
    w.write_record(["n", "E_over_epsg", "reE_over_epsg", "imE_over_epsg", "lifetime_s", "method", "surface"])
        .map_err(io)?;
    let opt = |v: Option<f64>| v.map(|x| x.to_string()).unwrap_or_default();
    for r in records {
        w.write_record([
            r.n.to_string(),
            opt(r.energy.map(|e| e / unit)),
            opt(r.complex_energy.map(|c| c.re / unit)),
            opt(r.complex_energy.map(|c| c.im / unit)),
            opt(r.lifetime()),
            r.method.to_string(),
            surface.to_string(),
        ])
        .map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
}

/// Writes `E_over_epsg,abs_f_sq`.
pub fn write_scan_csv<W: Write>(scan: &[(f64, f64)], writer: W) -> Result<()> {
    let mut w = csv::Writer::from_writer(writer);
    let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
    w.write_record(["E_over_epsg", "abs_f_sq"]).map_err(io)?;
    for (e, f) in scan {
        w.write_record([e.to_string(), f.to_string()]).map_err(io)?;
    }
    w.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
}
