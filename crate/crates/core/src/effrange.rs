//! Effective-range model of the quantum-reflection amplitude.
//!
//! r = −(1 − ik𝒜)/(1 + ik𝒜) with k𝒜 = −iKα(K), K = kℓ and
//! α(K) = α₀ + iπK/3 + (α₂ + (4/3)α₀ ln K)K².

use std::f64::consts::PI;

use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::potential::PhysicalSetup;
use crate::scatter::ReflectionData;

/// Minimum number of samples inside the fit window.
pub const MIN_FIT_SAMPLES: usize = 50;

/// Default fit window (ε_g units).
pub const DEFAULT_WINDOW: (f64, f64) = (0.5, 500.0);

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(into = "CoefficientsJson", try_from = "CoefficientsJson")]
pub struct EffectiveRangeCoefficients {
    /// CP length ℓ in metres.
    pub ell: f64,
    pub alpha0: C64,
    pub alpha2: C64,
    /// Energy window (ε_g units) the coefficients were fitted on, if any.
    pub window: Option<(f64, f64)>,
}

impl EffectiveRangeCoefficients {
    pub fn new(ell: f64, alpha0: C64, alpha2: C64) -> Self {
        EffectiveRangeCoefficients { ell, alpha0, alpha2, window: None }
    }

    /// Hard lossless wall, r ≡ −1. The length is zero: any finite ℓ brings in
    /// the universal iπK/3 term of the C4 tail.
    pub fn perfect_reflector() -> Self {
        Self::new(0.0, C64::new(0.0, 0.0), C64::new(0.0, 0.0))
    }

    /// Coefficients of the homogeneous −C4/z⁴ tail.
    pub fn homogeneous_v4(ell: f64) -> Self {
        Self::new(ell, C64::new(1.0, 0.0), alpha2_v4())
    }

    /// α(K) for complex K (principal branch of ln K); α(0) = α₀.
    pub fn alpha(&self, k_ell: C64) -> C64 {
        if k_ell == C64::new(0.0, 0.0) {
            return self.alpha0;
        }
        let k2 = k_ell * k_ell;
        self.alpha0 + C64::i() * (PI / 3.0) * k_ell + (self.alpha2 + 4.0 / 3.0 * self.alpha0 * k_ell.ln()) * k2
    }

    /// k𝒜(k) = −iKα(K).
    pub fn k_script_a(&self, k_ell: C64) -> C64 {
        -C64::i() * k_ell * self.alpha(k_ell)
    }

    /// Model reflection amplitude at reduced wavevector K = kℓ (any complex K).
    pub fn r_of_k_ell(&self, k_ell: C64) -> C64 {
        let ika = C64::i() * self.k_script_a(k_ell);
        -(1.0 - ika) / (1.0 + ika)
    }

    /// Model reflection amplitude at wavevector `k` (1/m).
    pub fn r_model(&self, k: f64) -> Result<C64> {
        if !(k > 0.0) {
            return Err(Error::InvalidParameter(format!("wavevector must be positive, got {k}")));
        }
        let kl = k * self.ell;
        let r = self.r_of_k_ell(C64::new(kl, 0.0));
        if r.norm() > 1.0 + 1e-12 {
            return Err(Error::ModelNonPhysical { k: kl, abs_r: r.norm() });
        }
        Ok(r)
    }

    /// Scattering length a = −iℓα₀ (m) and b = −Im a.
    pub fn scattering_length(&self) -> (C64, f64) {
        let a = -C64::i() * self.ell * self.alpha0;
        (a, -a.im)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("coefficients serialise")
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("coefficients JSON: {e}")))
    }
}

/// α₂ of the homogeneous V4 tail: (8/3)(γ + ln 2) − 28/9 − 2πi/3.
pub fn alpha2_v4() -> C64 {
    const EULER_GAMMA: f64 = 0.577_215_664_901_532_9;
    C64::new(8.0 / 3.0 * (EULER_GAMMA + 2f64.ln()) - 28.0 / 9.0, -2.0 * PI / 3.0)
}

/// Scattering length a = −iℓα₀ and b = −Im a.
pub fn scattering_length(coeffs: &EffectiveRangeCoefficients) -> (C64, f64) {
    coeffs.scattering_length()
}

/// Solves r = −(1 − ik𝒜)/(1 + ik𝒜) for k𝒜.
pub fn invert_to_ka(r: C64, k: f64) -> Result<C64> {
    if !(k > 0.0) {
        return Err(Error::InvalidParameter(format!("wavevector must be positive, got {k}")));
    }
    if (r - 1.0).norm() < 1e-300 {
        return Err(Error::DegenerateR);
    }
    Ok(-C64::i() * (1.0 + r) / (1.0 - r))
}

/// Diagnostics of a coefficient fit.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FitReport {
    /// RMS residual of α over the samples used.
    pub residual_rms: f64,
    pub samples: usize,
    /// Ratio of the larger to smaller singular value of the design matrix.
    pub condition: f64,
}

/// Least-squares fit of (α₀, α₂) to reflection data inside `window` (ε_g units).
pub fn fit_coefficients(
    data: &ReflectionData,
    setup: &PhysicalSetup,
    ell: f64,
    window: (f64, f64),
) -> Result<(EffectiveRangeCoefficients, FitReport)> {
    let (lo, hi) = window;
    if !(lo >= 0.0 && hi > lo) {
        return Err(Error::WindowTooNarrow(format!("empty window ({lo}, {hi}]")));
    }
    let mut rows = Vec::new();
    for s in data.samples() {
        let e = setup.to_eps_g(setup.energy_of_wavevector(s.k));
        if e <= lo || e > hi {
            continue;
        }
        let kl = s.k * ell;
        let ka = invert_to_ka(s.r, s.k)?;
        let alpha_data = ka / (-C64::i() * kl);
        let y = alpha_data - C64::i() * (PI / 3.0) * kl;
        let k2 = kl * kl;
        rows.push(([1.0 + 4.0 / 3.0 * k2 * kl.ln(), k2], y));
    }
    if rows.len() < MIN_FIT_SAMPLES {
        return Err(Error::WindowTooNarrow(format!(
            "{} samples in window, at least {MIN_FIT_SAMPLES} needed",
            rows.len()
        )));
    }
    let (coef, condition) = least_squares_2(&rows)?;
    let mut out = EffectiveRangeCoefficients::new(ell, coef[0], coef[1]);
    out.window = Some(window);
    let ss: f64 = rows.iter().map(|(b, y)| (y - coef[0] * b[0] - coef[1] * b[1]).norm_sqr()).sum();
    let report = FitReport { residual_rms: (ss / rows.len() as f64).sqrt(), samples: rows.len(), condition };
    Ok((out, report))
}

/// Complex least squares with a real two-column design, by modified Gram–Schmidt.
fn least_squares_2(rows: &[([f64; 2], C64)]) -> Result<([C64; 2], f64)> {
    let n0: f64 = rows.iter().map(|(b, _)| b[0] * b[0]).sum::<f64>().sqrt();
    let q0: Vec<f64> = rows.iter().map(|(b, _)| b[0] / n0).collect();
    let r01: f64 = rows.iter().zip(&q0).map(|((b, _), q)| b[1] * q).sum();
    let v1: Vec<f64> = rows.iter().zip(&q0).map(|((b, _), q)| b[1] - r01 * q).collect();
    let n1: f64 = v1.iter().map(|v| v * v).sum::<f64>().sqrt();
    let col1: f64 = rows.iter().map(|(b, _)| b[1] * b[1]).sum::<f64>().sqrt();
    if !(n1 > 1e-10 * col1) || n1 == 0.0 {
        return Err(Error::IllConditionedFit("basis columns are nearly dependent".into()));
    }
    let q1: Vec<f64> = v1.iter().map(|v| v / n1).collect();
    let c0: C64 = rows.iter().zip(&q0).map(|((_, y), q)| y * q).sum();
    let c1: C64 = rows.iter().zip(&q1).map(|((_, y), q)| y * q).sum();
    let x1 = c1 / n1;
    let x0 = (c0 - r01 * x1) / n0;
    let condition = (n0 * n0 + r01 * r01 + n1 * n1).sqrt() / n1.min(n0);
    Ok(([x0, x1], condition))
}

#[derive(Serialize, Deserialize)]
struct CoefficientsJson {
    ell_m: String,
    alpha0_re: String,
    alpha0_im: String,
    alpha2_re: String,
    alpha2_im: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    window_eps_g: Option<[String; 2]>,
}

impl From<EffectiveRangeCoefficients> for CoefficientsJson {
    fn from(c: EffectiveRangeCoefficients) -> Self {
        CoefficientsJson {
            ell_m: c.ell.to_string(),
            alpha0_re: c.alpha0.re.to_string(),
            alpha0_im: c.alpha0.im.to_string(),
            alpha2_re: c.alpha2.re.to_string(),
            alpha2_im: c.alpha2.im.to_string(),
            window_eps_g: c.window.map(|(a, b)| [a.to_string(), b.to_string()]),
        }
    }
}

impl TryFrom<CoefficientsJson> for EffectiveRangeCoefficients {
    type Error = String;

    fn try_from(j: CoefficientsJson) -> std::result::Result<Self, String> {
        let p = |s: &str| s.parse::<f64>().map_err(|e| format!("`{s}`: {e}"));
        let window = match j.window_eps_g {
            Some([a, b]) => Some((p(&a)?, p(&b)?)),
            None => None,
        };
        Ok(EffectiveRangeCoefficients {
            ell: p(&j.ell_m)?,
            alpha0: C64::new(p(&j.alpha0_re)?, p(&j.alpha0_im)?),
            alpha2: C64::new(p(&j.alpha2_re)?, p(&j.alpha2_im)?),
            window,
        })
    }
}
