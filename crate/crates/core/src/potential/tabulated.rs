use std::io::Read;
use std::path::Path;

use crate::constants::ELECTRON_VOLT;
use crate::error::{Error, Result};
use crate::numeric::spline::CubicSpline;

pub const MIN_ROWS: usize = 100;

/// Potential sampled on a grid, interpolated by a natural cubic spline of
/// ln(−V) against ln z, with power-law tails fitted on the outer tenths.
#[derive(Debug, Clone, PartialEq)]
pub struct TabulatedPotential {
    z: Vec<f64>,
    v: Vec<f64>,
    log_spline: LogSpline,
    c3: f64,
    c4: f64,
}

#[derive(Debug, Clone)]
struct LogSpline(CubicSpline);

impl PartialEq for LogSpline {
    fn eq(&self, other: &Self) -> bool {
        self.0.x() == other.0.x() && self.0.y() == other.0.y()
    }
}

impl TabulatedPotential {
    /// Builds the table from altitudes (m) and energies (J).
    pub fn new(z: Vec<f64>, v: Vec<f64>) -> Result<Self> {
        if z.len() != v.len() {
            return Err(Error::InvalidParameter("altitude and energy columns differ in length".into()));
        }
        if z.len() < MIN_ROWS {
            return Err(Error::TableTooSparse(z.len()));
        }
        for i in 0..z.len() {
            if !(z[i] > 0.0 && z[i].is_finite()) {
                return Err(Error::TableParse { row: i + 1, msg: format!("altitude {} must be positive", z[i]) });
            }
            if !(v[i] < 0.0 && v[i].is_finite()) {
                return Err(Error::TableParse { row: i + 1, msg: format!("potential {} must be negative", v[i]) });
            }
            if i > 0 && z[i] <= z[i - 1] {
                return Err(Error::TableParse { row: i + 1, msg: "altitudes must be strictly increasing".into() });
            }
        }
        let s: Vec<f64> = z.iter().map(|t| t.ln()).collect();
        let y: Vec<f64> = v.iter().map(|t| (-t).ln()).collect();
        let log_spline = LogSpline(CubicSpline::natural(s, y));
        let tail = (z.len() / 10).max(2);
        let c3 = power_fit(&z[..tail], &v[..tail], 3);
        let c4 = power_fit(&z[z.len() - tail..], &v[v.len() - tail..], 4);
        Ok(TabulatedPotential { z, v, log_spline, c3, c4 })
    }

    /// Reads a CSV file with header `z_m,V_eV`.
    pub fn from_csv_path(path: impl AsRef<Path>) -> Result<Self> {
        let file = std::fs::File::open(path.as_ref())
            .map_err(|e| Error::TableParse { row: 0, msg: format!("{}: {e}", path.as_ref().display()) })?;
        Self::from_csv_reader(file)
    }

    /// Parses CSV with header `z_m,V_eV`; row numbers in errors count data rows from 1.
    pub fn from_csv_reader<R: Read>(reader: R) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let headers = rdr.headers().map_err(|e| Error::TableParse { row: 0, msg: e.to_string() })?.clone();
        if headers.len() != 2 || &headers[0] != "z_m" || &headers[1] != "V_eV" {
            return Err(Error::TableParse { row: 0, msg: "expected header `z_m,V_eV`".into() });
        }
        let mut z = Vec::new();
        let mut v = Vec::new();
        for (i, rec) in rdr.records().enumerate() {
            let row = i + 1;
            let rec = rec.map_err(|e| Error::TableParse { row, msg: e.to_string() })?;
            let parse = |j: usize| -> Result<f64> {
                rec.get(j)
                    .ok_or_else(|| Error::TableParse { row, msg: "missing column".into() })?
                    .parse::<f64>()
                    .map_err(|e| Error::TableParse { row, msg: format!("column {}: {e}", j + 1) })
            };
            z.push(parse(0)?);
            v.push(parse(1)? * ELECTRON_VOLT);
        }
        Self::new(z, v)
    }

    pub fn write_csv<W: std::io::Write>(&self, writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
        w.write_record(["z_m", "V_eV"]).map_err(io)?;
        for (z, v) in self.z.iter().zip(&self.v) {
            w.write_record([format!("{z:e}"), format!("{:e}", v / ELECTRON_VOLT)]).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
    }

    pub fn altitudes(&self) -> &[f64] {
        &self.z
    }

    pub fn energies(&self) -> &[f64] {
        &self.v
    }

    /// Coefficient of the fitted −C3/z³ inner tail.
    pub fn c3(&self) -> f64 {
        self.c3
    }

    /// Coefficient of the fitted −C4/z⁴ outer tail.
    pub fn c4(&self) -> f64 {
        self.c4
    }

    pub(crate) fn derivatives(&self, z: f64) -> [f64; 4] {
        let (lo, hi) = (self.z[0], self.z[self.z.len() - 1]);
        if z < lo {
            return power_derivatives(self.c3, 3, z);
        }
        if z > hi {
            return power_derivatives(self.c4, 4, z);
        }
        // V = −exp(y(s)), s = ln z.
        let [y, y1, y2, y3] = self.log_spline.0.eval(z.ln());
        let v = -y.exp();
        let vs = v * y1;
        let vss = v * (y1 * y1 + y2);
        let vsss = v * (y1 * y1 * y1 + 3.0 * y1 * y2 + y3);
        [v, vs / z, (vss - vs) / (z * z), (vsss - 3.0 * vss + 2.0 * vs) / (z * z * z)]
    }
}

fn power_fit(z: &[f64], v: &[f64], p: i32) -> f64 {
    let num: f64 = z.iter().zip(v).map(|(z, v)| v * z.powi(-p)).sum();
    let den: f64 = z.iter().map(|z| z.powi(-2 * p)).sum();
    -num / den
}

fn power_derivatives(c: f64, p: i32, z: f64) -> [f64; 4] {
    let v = -c / z.powi(p);
    let pf = p as f64;
    [v, -pf * v / z, pf * (pf + 1.0) * v / (z * z), -pf * (pf + 1.0) * (pf + 2.0) * v / (z * z * z)]
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v3v4_table(n: usize) -> TabulatedPotential {
        let (c3, c4) = (2.0e-49, 5.0e-57);
        let z: Vec<f64> = (0..n).map(|i| 1e-12 * (1e8f64).powf(i as f64 / (n - 1) as f64)).collect();
        let v = z.iter().map(|z| -c4 / (z.powi(3) * (z + c4 / c3))).collect();
        TabulatedPotential::new(z, v).unwrap()
    }

    #[test]
    fn power_law_tails_are_recovered() {
        let t = v3v4_table(400);
        assert!((t.c3() / 2.0e-49 - 1.0).abs() < 0.01);
        assert!((t.c4() / 5.0e-57 - 1.0).abs() < 0.01);
    }

    #[test]
    fn rejects_sparse_and_unsorted_tables() {
        let z: Vec<f64> = (1..50).map(|i| i as f64).collect();
        let v = vec![-1.0; 49];
        assert_eq!(TabulatedPotential::new(z, v), Err(Error::TableTooSparse(49)));
        let mut z: Vec<f64> = (1..=120).map(|i| i as f64 * 1e-9).collect();
        z.swap(40, 41);
        let v = vec![-1.0; 120];
        assert!(matches!(TabulatedPotential::new(z, v), Err(Error::TableParse { row: 42, .. })));
    }

    #[test]
    fn csv_errors_cite_rows() {
        let mut text = String::from("z_m,V_eV\n");
        for i in 1..=120 {
            if i == 7 {
                text.push_str("1e-9,oops\n");
            } else {
                text.push_str(&format!("{},{}\n", i as f64 * 1e-9, -1e-6));
            }
        }
        let err = TabulatedPotential::from_csv_reader(text.as_bytes()).unwrap_err();
        assert!(matches!(err, Error::TableParse { row: 7, .. }), "{err:?}");
    }
}
