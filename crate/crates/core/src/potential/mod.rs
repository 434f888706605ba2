//! Physical setup and Casimir–Polder potential models.

mod preset;
mod tabulated;

pub use preset::SurfacePreset;
pub use tabulated::TabulatedPotential;

use num_complex::Complex64 as C64;

use crate::constants::{HBAR, HYDROGEN_MASS, STANDARD_GRAVITY};
use crate::error::{Error, Result};

/// Atom mass and gravitational acceleration, with the derived scales ℓ_g and ε_g.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PhysicalSetup {
    mass: f64,
    gravity: f64,
}

impl PhysicalSetup {
    pub fn new(mass: f64, gravity: f64) -> Result<Self> {
        if !(mass > 0.0 && mass.is_finite()) {
            return Err(Error::InvalidParameter(format!("mass must be positive, got {mass}")));
        }
        if !(gravity > 0.0 && gravity.is_finite()) {
            return Err(Error::InvalidParameter(format!("gravity must be positive, got {gravity}")));
        }
        Ok(PhysicalSetup { mass, gravity })
    }

    /// (Anti)hydrogen with g = 9.81 m/s².
    pub fn hydrogen() -> Self {
        PhysicalSetup { mass: HYDROGEN_MASS, gravity: STANDARD_GRAVITY }
    }

    pub fn mass(&self) -> f64 {
        self.mass
    }

    pub fn gravity(&self) -> f64 {
        self.gravity
    }

    /// ℓ_g = (ħ²/(2m²g))^{1/3} in metres.
    pub fn ell_g(&self) -> f64 {
        (HBAR * HBAR / (2.0 * self.mass * self.mass * self.gravity)).cbrt()
    }

    /// ε_g = m g ℓ_g in joules.
    pub fn eps_g(&self) -> f64 {
        self.mass * self.gravity * self.ell_g()
    }

    pub fn to_eps_g(&self, energy: f64) -> f64 {
        energy / self.eps_g()
    }

    pub fn from_eps_g(&self, e: f64) -> f64 {
        e * self.eps_g()
    }

    pub fn to_ell_g(&self, z: f64) -> f64 {
        z / self.ell_g()
    }

    /// Classical turning point z_t = E/(mg).
    pub fn turning_point(&self, energy: f64) -> f64 {
        energy / (self.mass * self.gravity)
    }

    /// Free-fall wavevector k = sqrt(2mE)/ħ.
    pub fn wavevector(&self, energy: f64) -> f64 {
        (2.0 * self.mass * energy).sqrt() / HBAR
    }

    /// Inverse of [`wavevector`](Self::wavevector).
    pub fn energy_of_wavevector(&self, k: f64) -> f64 {
        HBAR * HBAR * k * k / (2.0 * self.mass)
    }

    /// Energy unit ħ²/(2mL²) attached to a length L.
    pub fn energy_scale(&self, length: f64) -> f64 {
        HBAR * HBAR / (2.0 * self.mass * length * length)
    }
}

impl Default for PhysicalSetup {
    fn default() -> Self {
        PhysicalSetup::hydrogen()
    }
}

/// Casimir–Polder potential V_CP(z).
#[derive(Debug, Clone, PartialEq)]
pub enum PotentialModel {
    /// V_CP ≡ 0; used for ideal-mirror checks.
    Absent,
    /// −C4/z⁴.
    HomogeneousV4 { c4: f64 },
    /// −C4/(z³(z + C4/C3)), interpolating −C3/z³ and −C4/z⁴.
    V3V4 { c3: f64, c4: f64 },
    Tabulated(TabulatedPotential),
}

impl PotentialModel {
    pub fn homogeneous_v4(c4: f64) -> Result<Self> {
        check_positive("C4", c4)?;
        Ok(PotentialModel::HomogeneousV4 { c4 })
    }

    pub fn v3v4(c3: f64, c4: f64) -> Result<Self> {
        check_positive("C3", c3)?;
        check_positive("C4", c4)?;
        Ok(PotentialModel::V3V4 { c3, c4 })
    }

    /// C4 such that √(2mC4)/ħ equals `ell` (metres).
    pub fn c4_from_ell(setup: &PhysicalSetup, ell: f64) -> f64 {
        HBAR * HBAR * ell * ell / (2.0 * setup.mass())
    }

    pub fn label(&self) -> &'static str {
        match self {
            PotentialModel::Absent => "none",
            PotentialModel::HomogeneousV4 { .. } => "v4",
            PotentialModel::V3V4 { .. } => "v3v4",
            PotentialModel::Tabulated(_) => "table",
        }
    }

    /// Long-range coefficient C4 in J·m⁴ (0 for [`PotentialModel::Absent`]).
    pub fn c4(&self) -> f64 {
        match self {
            PotentialModel::Absent => 0.0,
            PotentialModel::HomogeneousV4 { c4 } | PotentialModel::V3V4 { c4, .. } => *c4,
            PotentialModel::Tabulated(t) => t.c4(),
        }
    }

    /// Short-range coefficient C3 in J·m³, where the model has one.
    pub fn c3(&self) -> Option<f64> {
        match self {
            PotentialModel::V3V4 { c3, .. } => Some(*c3),
            PotentialModel::Tabulated(t) => Some(t.c3()),
            _ => None,
        }
    }

    /// V_CP(z) in joules.
    pub fn value(&self, z: f64) -> Result<f64> {
        Ok(self.derivatives(z)?[0])
    }

    /// V_CP and its first three derivatives with respect to z.
    pub fn derivatives(&self, z: f64) -> Result<[f64; 4]> {
        if let PotentialModel::Absent = self {
            return Ok([0.0; 4]);
        }
        if !(z > 0.0) {
            return Err(Error::NonPositiveAltitude(z));
        }
        Ok(match self {
            PotentialModel::Absent => unreachable!(),
            PotentialModel::HomogeneousV4 { c4 } => {
                let v = -c4 / z.powi(4);
                [v, -4.0 * v / z, 20.0 * v / (z * z), -120.0 * v / (z * z * z)]
            }
            PotentialModel::V3V4 { c3, c4 } => rational_derivatives(*c4, *c4 / *c3, z),
            PotentialModel::Tabulated(t) => t.derivatives(z),
        })
    }

    /// V_CP at complex altitude. Exact for the closed-form models; the
    /// tabulated model is continued by a Taylor expansion about Re z, which is
    /// accurate for the small imaginary offsets met in complex-energy solves.
    pub fn value_complex(&self, z: C64) -> Result<C64> {
        match self {
            PotentialModel::Absent => Ok(C64::new(0.0, 0.0)),
            PotentialModel::HomogeneousV4 { c4 } => Ok(-*c4 / z.powi(4)),
            PotentialModel::V3V4 { c3, c4 } => Ok(-*c4 / (z.powi(3) * (z + *c4 / *c3))),
            PotentialModel::Tabulated(_) => {
                let d = self.derivatives(z.re)?;
                let h = C64::new(0.0, z.im);
                Ok(d[0] + h * (d[1] + h * (d[2] / 2.0 + h * d[3] / 6.0)))
            }
        }
    }

    /// (ℓ_CP, ε_CP) = (√(2mC4)/ħ, C4/ℓ_CP⁴).
    pub fn cp_scales(&self, setup: &PhysicalSetup) -> Result<(f64, f64)> {
        let c4 = self.c4();
        check_positive("C4", c4)?;
        let ell = (2.0 * setup.mass() * c4).sqrt() / HBAR;
        Ok((ell, c4 / ell.powi(4)))
    }
}

fn check_positive(name: &str, v: f64) -> Result<()> {
    if v > 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::InvalidParameter(format!("{name} must be positive, got {v}")))
    }
}

/// Derivatives of −C4/g(z) with g = z⁴ + z_c z³.
fn rational_derivatives(c4: f64, zc: f64, z: f64) -> [f64; 4] {
    let g = z.powi(3) * (z + zc);
    let g1 = 4.0 * z.powi(3) + 3.0 * zc * z * z;
    let g2 = 12.0 * z * z + 6.0 * zc * z;
    let g3 = 24.0 * z + 6.0 * zc;
    let v = -c4 / g;
    let v1 = c4 * g1 / (g * g);
    let v2 = c4 * (g2 / (g * g) - 2.0 * g1 * g1 / g.powi(3));
    let v3 = c4 * (g3 / (g * g) - 6.0 * g1 * g2 / g.powi(3) + 6.0 * g1.powi(3) / g.powi(4));
    [v, v1, v2, v3]
}

/// F(z) = (2m/ħ²)(E − mgz − V_CP(z)) in 1/m².
pub fn f_function(setup: &PhysicalSetup, model: &PotentialModel, energy: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::NonPositiveAltitude(z));
    }
    let v = model.value(z)?;
    Ok(2.0 * setup.mass() / (HBAR * HBAR) * (energy - setup.mass() * setup.gravity() * z - v))
}

/// The potential expressed in reduced variables: u(x) = V_CP(xL)/ε with ε = ħ²/(2mL²).
#[derive(Debug, Clone, Copy)]
pub(crate) struct Reduced<'a> {
    pub model: &'a PotentialModel,
    pub length: f64,
    pub energy: f64,
}

impl<'a> Reduced<'a> {
    pub fn new(setup: &PhysicalSetup, model: &'a PotentialModel, length: f64) -> Self {
        Reduced { model, length, energy: setup.energy_scale(length) }
    }

    /// u and its derivatives with respect to the reduced coordinate.
    pub fn derivatives(&self, x: f64) -> Result<[f64; 4]> {
        let d = self.model.derivatives(x * self.length)?;
        let l = self.length;
        Ok([d[0] / self.energy, d[1] * l / self.energy, d[2] * l * l / self.energy, d[3] * l * l * l / self.energy])
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn gravity_scales() {
        let s = PhysicalSetup::hydrogen();
        assert!((s.ell_g() * 1e6 - 5.87).abs() < 0.01);
        assert!((s.eps_g() / crate::constants::PICO_EV - 0.602).abs() < 0.001);
        // ε_g = ħ²/(2mℓ_g²)
        assert!((s.energy_scale(s.ell_g()) / s.eps_g() - 1.0).abs() < 1e-14);
    }

    #[test]
    fn rational_derivatives_match_finite_differences() {
        let (c4, zc) = (2.0, 0.7);
        let z = 1.3;
        let h = 1e-4;
        let d = rational_derivatives(c4, zc, z);
        let at = |t: f64| rational_derivatives(c4, zc, t);
        let fd1 = (at(z + h)[0] - at(z - h)[0]) / (2.0 * h);
        let fd2 = (at(z + h)[1] - at(z - h)[1]) / (2.0 * h);
        let fd3 = (at(z + h)[2] - at(z - h)[2]) / (2.0 * h);
        assert!((d[1] / fd1 - 1.0).abs() < 1e-7);
        assert!((d[2] / fd2 - 1.0).abs() < 1e-7);
        assert!((d[3] / fd3 - 1.0).abs() < 1e-7);
    }

    #[test]
    fn absent_model_is_flat() {
        assert_eq!(PotentialModel::Absent.derivatives(-1.0).unwrap(), [0.0; 4]);
    }
}
