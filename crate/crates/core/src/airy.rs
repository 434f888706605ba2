//! Airy functions, their zeros, and the continuous Airy phase θ.
//!
//! Function values come from the `complex-bessel` implementation of the Amos
//! algorithms; zeros and phases are built on top of it here.

use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};
use std::sync::OnceLock;

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::brent;

/// Largest |z| accepted by [`airy_pair`].
pub const MAX_ARGUMENT: f64 = 1e4;

/// Ai, Bi and their derivatives at one point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AiryValues {
    pub ai: C64,
    pub bi: C64,
    pub ai_prime: C64,
    pub bi_prime: C64,
}

impl AiryValues {
    /// Upward travelling wave Ci⁺ = Ai + i Bi.
    pub fn ci_plus(&self) -> C64 {
        self.ai + C64::i() * self.bi
    }

    /// Downward travelling wave Ci⁻ = Ai − i Bi.
    pub fn ci_minus(&self) -> C64 {
        self.ai - C64::i() * self.bi
    }

    pub fn ci_plus_prime(&self) -> C64 {
        self.ai_prime + C64::i() * self.bi_prime
    }

    pub fn ci_minus_prime(&self) -> C64 {
        self.ai_prime - C64::i() * self.bi_prime
    }

    /// Ai·Bi′ − Ai′·Bi, equal to 1/π.
    pub fn wronskian(&self) -> C64 {
        self.ai * self.bi_prime - self.ai_prime * self.bi
    }
}

fn bessel_err(z: C64, e: complex_bessel::Error) -> Error {
    match e {
        complex_bessel::Error::Overflow => Error::Overflow(format!("{z}")),
        _ => Error::DomainTooLarge(z.norm()),
    }
}

/// Ai, Bi, Ai′, Bi′ at complex `z`, |z| ≤ 10⁴.
pub fn airy_pair(z: C64) -> Result<AiryValues> {
    if !z.re.is_finite() || !z.im.is_finite() || z.norm() > MAX_ARGUMENT {
        return Err(Error::DomainTooLarge(z.norm()));
    }
    // complex-bessel mishandles a negative-zero imaginary part on the negative real axis.
    let z = C64::new(z.re, z.im + 0.0);
    let ai = complex_bessel::airy(z).map_err(|e| bessel_err(z, e))?;
    let ai_prime = complex_bessel::airyprime(z).map_err(|e| bessel_err(z, e))?;
    let bi = complex_bessel::biry(z).map_err(|e| bessel_err(z, e))?;
    let bi_prime = complex_bessel::biryprime(z).map_err(|e| bessel_err(z, e))?;
    let v = AiryValues { ai, bi, ai_prime, bi_prime };
    if [v.ai, v.bi, v.ai_prime, v.bi_prime].iter().any(|c| !c.re.is_finite() || !c.im.is_finite()) {
        return Err(Error::Overflow(format!("{z}")));
    }
    Ok(v)
}

/// Real-axis convenience: (Ai, Bi, Ai′, Bi′) at real `x`.
pub fn airy_real(x: f64) -> Result<[f64; 4]> {
    let v = airy_pair(C64::new(x, 0.0))?;
    Ok([v.ai.re, v.bi.re, v.ai_prime.re, v.bi_prime.re])
}

/// Asymptotic estimate of λ_n (DLMF 9.9.6 with 9.9.18).
fn zero_seed(n: usize) -> f64 {
    let t = 3.0 * PI * (4.0 * n as f64 - 1.0) / 8.0;
    let t2 = 1.0 / (t * t);
    t.powf(2.0 / 3.0)
        * (1.0 + t2 * (5.0 / 48.0 + t2 * (-5.0 / 36.0 + t2 * (77125.0 / 82944.0 - t2 * 108056875.0 / 6967296.0))))
}

/// n-th zero λ_n of Ai(−x), n ≥ 1.
pub fn airy_zero(n: usize) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter("Airy zeros are indexed from 1".into()));
    }
    let seed = zero_seed(n);
    let spacing = PI / seed.sqrt();
    let ai = |x: f64| airy_pair(C64::new(-x, 0.0)).map(|v| v.ai.re);
    let mut half = 0.2 * spacing;
    loop {
        let lo = (seed - half).max(0.0);
        if let Some(root) = brent(ai, lo, seed + half, 1e-15 * seed)? {
            return Ok(root);
        }
        half *= 1.5;
        if half > spacing {
            return Err(Error::InvalidParameter(format!("could not bracket Airy zero {n}")));
        }
    }
}

/// Table of the first zeros λ_1 < λ_2 < … of Ai(−x).
#[derive(Debug, Clone, PartialEq)]
pub struct AiryZeroTable {
    zeros: Vec<f64>,
}

impl AiryZeroTable {
    pub fn new(count: usize) -> Result<Self> {
        let zeros = (1..=count).map(airy_zero).collect::<Result<Vec<_>>>()?;
        Ok(AiryZeroTable { zeros })
    }

    /// λ_n with the 1-based index used throughout.
    pub fn get(&self, n: usize) -> Option<f64> {
        n.checked_sub(1).and_then(|i| self.zeros.get(i).copied())
    }

    pub fn zeros(&self) -> &[f64] {
        &self.zeros
    }

    pub fn len(&self) -> usize {
        self.zeros.len()
    }

    pub fn is_empty(&self) -> bool {
        self.zeros.is_empty()
    }
}

const CACHED_ZEROS: usize = 256;

/// Shared table of the first 256 zeros, built on first use.
pub fn cached_zeros() -> &'static [f64] {
    static TABLE: OnceLock<Vec<f64>> = OnceLock::new();
    TABLE.get_or_init(|| {
        (1..=CACHED_ZEROS)
            .map(|n| airy_zero(n).expect("Airy zeros below 256 are always bracketed"))
            .collect()
    })
}

/// λ_n, served from the cache when possible.
pub fn zero(n: usize) -> Result<f64> {
    match n {
        1..=CACHED_ZEROS => Ok(cached_zeros()[n - 1]),
        _ => airy_zero(n),
    }
}

fn asymptotic_phase(t: f64) -> f64 {
    let zeta = 2.0 / 3.0 * t.powf(1.5);
    let t3 = 1.0 / (t * t * t);
    FRAC_PI_4 + zeta * (1.0 + t3 * (-5.0 / 32.0 + t3 * 1105.0 / 6144.0))
}

/// Continuous Airy phase θ(x) = arctan(Ai(x)/Bi(x)) with θ(0) = π/6 and θ(−λ_n) = nπ.
pub fn airy_phase(x: f64) -> f64 {
    if x > 100.0 {
        // Ai/Bi ≈ e^{-4/3 x^{3/2}} / 2 and Bi overflows soon after.
        return 0.5 * (-4.0 / 3.0 * x.powf(1.5)).exp();
    }
    let t = -x;
    if t > MAX_ARGUMENT {
        return asymptotic_phase(t);
    }
    let [ai, bi, _, _] = match airy_real(x) {
        Ok(v) => v,
        Err(_) => return asymptotic_phase(t),
    };
    if x >= 0.0 {
        return ai.atan2(bi);
    }
    let zeros = cached_zeros();
    if t <= zeros[CACHED_ZEROS - 1] {
        let count = zeros.partition_point(|&z| z < t);
        let s = if count % 2 == 0 { 1.0 } else { -1.0 };
        let mut phi = (s * ai).atan2(s * bi);
        if phi < -FRAC_PI_2 {
            phi += 2.0 * PI;
        }
        count as f64 * PI + phi
    } else {
        // Beyond the table the asymptotic series is accurate to ~1e-15 and only
        // selects the branch; the value itself comes from atan(Ai/Bi).
        let guess = asymptotic_phase(t);
        let base = (ai / bi).atan();
        base + ((guess - base) / PI).round() * PI
    }
}

/// Analytic continuation θ(z) = log(−Ci⁻(z)/Ci⁺(z)) / (2i), tracked by continuity
/// along the vertical segment from Re z.
pub fn airy_phase_complex(z: C64) -> Result<C64> {
    let theta0 = airy_phase(z.re);
    if z.im == 0.0 {
        return Ok(C64::new(theta0, 0.0));
    }
    let ratio = |w: C64| -> Result<C64> {
        let v = airy_pair(w)?;
        let r = -v.ci_minus() / v.ci_plus();
        if !r.re.is_finite() || !r.im.is_finite() || r == C64::new(0.0, 0.0) {
            return Err(Error::BranchTrackingFailure(format!("{w}")));
        }
        Ok(r)
    };
    let steps = ((z.im.abs() / 0.05).ceil() as usize).max(1);
    let dy = z.im / steps as f64;
    let mut log_acc = C64::new(0.0, 2.0 * theta0);
    let mut prev = ratio(C64::new(z.re, 0.0))?;
    for j in 1..=steps {
        let y0 = (j - 1) as f64 * dy;
        let y1 = j as f64 * dy;
        let (delta, r1) = track_segment(&ratio, z.re, y0, y1, prev, 0)?;
        log_acc += delta;
        prev = r1;
    }
    Ok(log_acc / (2.0 * C64::i()))
}

fn track_segment<R>(ratio: &R, x: f64, y0: f64, y1: f64, r0: C64, depth: usize) -> Result<(C64, C64)>
where
    R: Fn(C64) -> Result<C64>,
{
    let r1 = ratio(C64::new(x, y1))?;
    let delta = (r1 / r0).ln();
    if delta.im.abs() < FRAC_PI_2 {
        return Ok((delta, r1));
    }
    if depth >= 24 {
        return Err(Error::BranchTrackingFailure(format!("{}", C64::new(x, y1))));
    }
    let ym = 0.5 * (y0 + y1);
    let (d0, rm) = track_segment(ratio, x, y0, ym, r0, depth + 1)?;
    let (d1, r1) = track_segment(ratio, x, ym, y1, rm, depth + 1)?;
    Ok((d0 + d1, r1))
}
