use num_complex::Complex64 as C64;
use serde::{Deserialize, Serialize};

use crate::constants::{BOHR_RADIUS, HARTREE};
use crate::effrange::EffectiveRangeCoefficients;
use crate::error::{Error, Result};

use super::{PhysicalSetup, PotentialModel};

/// Surface description: effective-range coefficients for (anti)hydrogen plus
/// optional dispersion coefficients in atomic units.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SurfacePreset {
    pub name: String,
    pub ell_a0: f64,
    pub alpha0_re: f64,
    pub alpha0_im: f64,
    pub alpha2_re: f64,
    pub alpha2_im: f64,
    #[serde(rename = "C3_au", default, skip_serializing_if = "Option::is_none")]
    pub c3_au: Option<f64>,
    #[serde(rename = "C4_au", default, skip_serializing_if = "Option::is_none")]
    pub c4_au: Option<f64>,
}

impl SurfacePreset {
    pub fn perfect_mirror() -> Self {
        SurfacePreset {
            name: "perfect-mirror".into(),
            ell_a0: 520.06,
            alpha0_re: 1.0468,
            alpha0_im: -0.1028,
            alpha2_re: 0.17,
            alpha2_im: -2.06,
            c3_au: None,
            c4_au: None,
        }
    }

    pub fn silicon() -> Self {
        SurfacePreset {
            name: "silicon".into(),
            ell_a0: 429.82,
            alpha0_re: 1.0149,
            alpha0_im: -0.2271,
            alpha2_re: 0.09,
            alpha2_im: -2.09,
            c3_au: None,
            c4_au: None,
        }
    }

    pub fn silica() -> Self {
        SurfacePreset {
            name: "silica".into(),
            ell_a0: 321.31,
            alpha0_re: 0.8504,
            alpha0_im: -0.2414,
            alpha2_re: 0.70,
            alpha2_im: -4.8,
            c3_au: None,
            c4_au: None,
        }
    }

    pub fn builtin() -> Vec<SurfacePreset> {
        vec![Self::perfect_mirror(), Self::silicon(), Self::silica()]
    }

    /// Looks up a shipped preset by name (`perfect-mirror`, `silicon`, `silica`).
    pub fn by_name(name: &str) -> Result<Self> {
        Self::builtin()
            .into_iter()
            .find(|p| p.name == name)
            .ok_or_else(|| Error::InvalidParameter(format!("unknown surface preset `{name}`")))
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let p: SurfacePreset =
            serde_json::from_str(text).map_err(|e| Error::InvalidParameter(format!("preset JSON: {e}")))?;
        if !(p.ell_a0 > 0.0) {
            return Err(Error::InvalidParameter("ell_a0 must be positive".into()));
        }
        Ok(p)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("preset serialises")
    }

    pub fn ell(&self) -> f64 {
        self.ell_a0 * BOHR_RADIUS
    }

    pub fn alpha0(&self) -> C64 {
        C64::new(self.alpha0_re, self.alpha0_im)
    }

    pub fn alpha2(&self) -> C64 {
        C64::new(self.alpha2_re, self.alpha2_im)
    }

    pub fn coefficients(&self) -> EffectiveRangeCoefficients {
        EffectiveRangeCoefficients::new(self.ell(), self.alpha0(), self.alpha2())
    }

    /// C4 in J·m⁴: the explicit value if given, otherwise ħ²ℓ²/(2m).
    pub fn c4(&self, setup: &PhysicalSetup) -> f64 {
        match self.c4_au {
            Some(c4) => c4 * HARTREE * BOHR_RADIUS.powi(4),
            None => PotentialModel::c4_from_ell(setup, self.ell()),
        }
    }

    /// C3 in J·m³ if the preset carries one.
    pub fn c3(&self) -> Option<f64> {
        self.c3_au.map(|c3| c3 * HARTREE * BOHR_RADIUS.powi(3))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn json_round_trip() {
        for p in SurfacePreset::builtin() {
            assert_eq!(SurfacePreset::from_json(&p.to_json()).unwrap(), p);
        }
    }

    #[test]
    fn explicit_c4_field_is_honoured() {
        let text = r#"{"name":"x","ell_a0":500,"alpha0_re":1,"alpha0_im":-0.1,
            "alpha2_re":0,"alpha2_im":-2,"C4_au":80.0}"#;
        let p = SurfacePreset::from_json(text).unwrap();
        let c4 = p.c4(&PhysicalSetup::hydrogen());
        assert!((c4 / (80.0 * HARTREE * BOHR_RADIUS.powi(4)) - 1.0).abs() < 1e-15);
    }
}
