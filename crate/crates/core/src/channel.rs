//! Reduced-unit form of the radial equation shared by the solvers:
//! F(x) = e − s·x − u(x), with x = z/L, u = V_CP/ε, ε = ħ²/(2mL²).

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::numeric::gauss_legendre;
use crate::potential::{PhysicalSetup, PotentialModel, Reduced};

#[derive(Debug, Clone, Copy)]
pub(crate) struct Channel<'a> {
    pub u: Reduced<'a>,
    /// Gravity slope: 1 in ℓ_g units, 0 for the CP-only problem.
    pub slope: f64,
    pub e: C64,
}

impl<'a> Channel<'a> {
    /// Gravity + CP in ℓ_g / ε_g units.
    pub fn gravity(setup: &PhysicalSetup, model: &'a PotentialModel, e: C64) -> Self {
        Channel { u: Reduced::new(setup, model, setup.ell_g()), slope: 1.0, e }
    }

    /// CP tail alone in ℓ_CP units; e = K².
    pub fn cp(setup: &PhysicalSetup, model: &'a PotentialModel, length: f64, k_ell: f64) -> Self {
        Channel { u: Reduced::new(setup, model, length), slope: 0.0, e: C64::new(k_ell * k_ell, 0.0) }
    }

    pub fn f(&self, x: f64) -> Result<C64> {
        let u = self.u.derivatives(x)?[0];
        Ok(self.e - self.slope * x - u)
    }

    /// F, F′, F″, F‴ at real x.
    pub fn derivatives(&self, x: f64) -> Result<[C64; 4]> {
        let d = self.u.derivatives(x)?;
        Ok([
            self.e - self.slope * x - d[0],
            C64::new(-self.slope - d[1], 0.0),
            C64::new(-d[2], 0.0),
            C64::new(-d[3], 0.0),
        ])
    }

    /// F and F′ at complex x, continued from Re x by a Taylor series in Im x.
    pub fn f_complex(&self, x: C64) -> Result<(C64, C64)> {
        let d = self.u.derivatives(x.re)?;
        let h = C64::new(0.0, x.im);
        let u = d[0] + h * (d[1] + h * (d[2] / 2.0 + h * d[3] / 6.0));
        let u1 = d[1] + h * (d[2] + h * d[3] / 2.0);
        Ok((self.e - self.slope * x - u, -self.slope - u1))
    }

    /// Badlands function Q = F″/(4F²) − 5F′²/(16F³).
    pub fn badlands(&self, x: f64) -> Result<C64> {
        let [f, f1, f2, _] = self.derivatives(x)?;
        if f == C64::new(0.0, 0.0) {
            return Err(Error::AtTurningPoint(x));
        }
        Ok(f2 / (4.0 * f * f) - 5.0 * f1 * f1 / (16.0 * f * f * f))
    }

    /// Turning point F(x_t) = 0 of the gravity channel, by Newton from x = e.
    pub fn turning_point(&self) -> Result<C64> {
        if self.slope == 0.0 {
            return Err(Error::InvalidParameter("CP-only channel has no turning point".into()));
        }
        let mut x = self.e;
        for _ in 0..60 {
            let (f, f1) = self.f_complex(x)?;
            let step = f / f1;
            x -= step;
            if step.norm() <= 1e-15 * (1.0 + x.norm()) {
                return Ok(x);
            }
        }
        Err(Error::SingularityExpansionFailure(format!("turning point search did not converge from e = {}", self.e)))
    }

    /// Langer coordinate offset w = 𝒛 − 𝒛_t at x and 𝒛′(x), by the closed form
    /// w = Δ(3I)^{2/3}, I = ∫₀¹ s²√G(s²) ds, G(u) = −F(x_t + uΔ)/(uΔ).
    ///
    /// Valid when F has no singularity on the segment from x_t to x.
    pub fn langer_point(&self, x_t: C64, x: f64) -> Result<(C64, C64)> {
        let delta = x - x_t;
        let (f_t, _) = self.f_complex(x_t)?;
        let g = |u: f64| -> Result<C64> {
            let (f, _) = self.f_complex(x_t + u * delta)?;
            Ok(-(f - f_t) / (u * delta))
        };
        let mut integral = C64::new(0.0, 0.0);
        for &(s, w) in gauss_legendre(40) {
            let s = 0.5 * (s + 1.0);
            integral += 0.5 * w * s * s * g(s * s)?.sqrt();
        }
        let scale = (3.0 * integral).powf(2.0 / 3.0);
        let w = delta * scale;
        let slope = (g(1.0)? / scale).sqrt();
        Ok((w, slope))
    }

    /// Largest x below `x_start` with |Q(x)| < threshold, scanning geometrically
    /// towards the surface.
    pub fn wkb_floor(&self, x_start: f64, threshold: f64) -> Result<f64> {
        let mut x = x_start;
        let floor = x_start * 1e-9;
        while x > floor {
            let q = self.badlands(x)?;
            if q.norm() < threshold {
                return Ok(x);
            }
            x *= 0.97;
        }
        Err(Error::NoWkbWindow)
    }

    /// Point where |u(x)| equals the local kinetic term |e − s·x|; the CP
    /// badlands peak sits close above it.
    pub fn cp_crossover(&self, x_hi: f64) -> Result<f64> {
        let kinetic = |x: f64| (self.e.re - self.slope * x).abs();
        let mut x = x_hi;
        for _ in 0..2000 {
            let u = self.u.derivatives(x)?[0].abs();
            if u >= kinetic(x) {
                return Ok(x);
            }
            x *= 0.97;
        }
        Err(Error::NoWkbWindow)
    }
}
