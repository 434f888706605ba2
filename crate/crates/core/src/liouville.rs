//! Liouville transformations of ψ″ + F ψ = 0 and the Langer coordinate.
//!
//! A monotone map z → z̃ with the rescaling ψ̃ = √z̃′ ψ turns the equation into
//! ψ̃″ + F̃ ψ̃ = 0 with F̃ = (F − ½{z̃, z})/z̃′². The Langer map makes F̃ exactly
//! linear at the classical turning point, so that the gravitational part of
//! the problem becomes the Airy equation.

use std::io::Write;

use num_complex::Complex64 as C64;

use crate::airy::airy_pair;
use crate::channel::Channel;
use crate::error::{Error, Result};
use crate::numeric::{adaptive_gl, integrate_schrodinger};
use crate::potential::{f_function, PhysicalSetup, PotentialModel};
use crate::scatter::{absorbing_start, SolverOptions};

/// A smooth monotone coordinate change z → z̃.
pub trait CoordinateMap {
    fn forward(&self, z: f64) -> Result<f64>;

    /// z̃′(z).
    fn derivative(&self, z: f64) -> Result<f64>;

    /// (z̃″, z̃‴) when available in closed form.
    fn higher_derivatives(&self, _z: f64) -> Option<Result<[f64; 2]>> {
        None
    }

    /// Open interval on which the map is defined.
    fn domain(&self) -> (f64, f64);
}

/// z̃ = scale·z + offset.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AffineMap {
    pub scale: f64,
    pub offset: f64,
}

impl CoordinateMap for AffineMap {
    fn forward(&self, z: f64) -> Result<f64> {
        Ok(self.scale * z + self.offset)
    }

    fn derivative(&self, _z: f64) -> Result<f64> {
        Ok(self.scale)
    }

    fn higher_derivatives(&self, _z: f64) -> Option<Result<[f64; 2]>> {
        Some(Ok([0.0, 0.0]))
    }

    fn domain(&self) -> (f64, f64) {
        (f64::NEG_INFINITY, f64::INFINITY)
    }
}

/// A map given by closures for z̃ and z̃′; higher derivatives are taken numerically.
pub struct FnMap<F, D> {
    forward: F,
    derivative: D,
    domain: (f64, f64),
}

impl<F, D> FnMap<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    pub fn new(forward: F, derivative: D, domain: (f64, f64)) -> Self {
        FnMap { forward, derivative, domain }
    }
}

impl<F, D> CoordinateMap for FnMap<F, D>
where
    F: Fn(f64) -> f64,
    D: Fn(f64) -> f64,
{
    fn forward(&self, z: f64) -> Result<f64> {
        check_domain(self.domain, z)?;
        Ok((self.forward)(z))
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        check_domain(self.domain, z)?;
        Ok((self.derivative)(z))
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

/// WKB action map z̃ = ∫_{origin}^z √F on a region where F > 0. `f` returns
/// [F, F′, F″, F‴].
pub struct ActionMap<F> {
    f: F,
    origin: f64,
    domain: (f64, f64),
}

impl<F> ActionMap<F>
where
    F: Fn(f64) -> Result<[f64; 4]>,
{
    pub fn new(f: F, origin: f64, domain: (f64, f64)) -> Self {
        ActionMap { f, origin, domain }
    }

    fn sqrt_f(&self, z: f64) -> Result<f64> {
        let v = (self.f)(z)?[0];
        if !(v > 0.0) {
            return Err(Error::AtTurningPoint(z));
        }
        Ok(v.sqrt())
    }
}

impl<F> CoordinateMap for ActionMap<F>
where
    F: Fn(f64) -> Result<[f64; 4]>,
{
    fn forward(&self, z: f64) -> Result<f64> {
        check_domain(self.domain, z)?;
        let scale = self.sqrt_f(z)?.max(self.sqrt_f(self.origin)?) * (z - self.origin).abs();
        let v = adaptive_gl(|t| Ok(C64::new(self.sqrt_f(t)?, 0.0)), self.origin, z, 1e-14 * scale)?;
        Ok(v.re)
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        check_domain(self.domain, z)?;
        self.sqrt_f(z)
    }

    fn higher_derivatives(&self, z: f64) -> Option<Result<[f64; 2]>> {
        let run = || -> Result<[f64; 2]> {
            let [f, f1, f2, _] = (self.f)(z)?;
            let s = self.sqrt_f(z)?;
            Ok([f1 / (2.0 * s), f2 / (2.0 * s) - f1 * f1 / (4.0 * f * s)])
        };
        Some(run())
    }

    fn domain(&self) -> (f64, f64) {
        self.domain
    }
}

fn check_domain(domain: (f64, f64), z: f64) -> Result<()> {
    if !(z > domain.0 && z < domain.1) {
        return Err(Error::OutsideMappedDomain(z));
    }
    Ok(())
}

/// (z̃″, z̃‴), analytic when the map supplies them, else five-point central
/// differences of z̃′.
fn second_third<M: CoordinateMap + ?Sized>(map: &M, z: f64) -> Result<[f64; 2]> {
    if let Some(d) = map.higher_derivatives(z) {
        return d;
    }
    let (lo, hi) = map.domain();
    let h = 1e-3 * z.abs().max(1e-3 * (hi - lo).min(1.0));
    if z - 2.0 * h <= lo || z + 2.0 * h >= hi || !h.is_finite() {
        return Err(Error::NearBoundary(z));
    }
    let d = |k: f64| map.derivative(z + k * h);
    let (m2, m1, p1, p2) = (d(-2.0)?, d(-1.0)?, d(1.0)?, d(2.0)?);
    let c = map.derivative(z)?;
    let first = (m2 - 8.0 * m1 + 8.0 * p1 - p2) / (12.0 * h);
    let second = (-m2 + 16.0 * m1 - 30.0 * c + 16.0 * p1 - p2) / (12.0 * h * h);
    Ok([first, second])
}

/// Schwarzian derivative {z̃, z} = z̃‴/z̃′ − (3/2)(z̃″/z̃′)².
pub fn schwarzian<M: CoordinateMap + ?Sized>(map: &M, z: f64) -> Result<f64> {
    let d1 = map.derivative(z)?;
    let [d2, d3] = second_third(map, z)?;
    Ok(d3 / d1 - 1.5 * (d2 / d1).powi(2))
}

/// Transformed F̃ at z̃(z): (F(z) − ½{z̃, z})/z̃′².
pub fn transform_f<M, F>(f: F, map: &M, z: f64) -> Result<f64>
where
    M: CoordinateMap + ?Sized,
    F: Fn(f64) -> Result<f64>,
{
    let d1 = map.derivative(z)?;
    Ok((f(z)? - 0.5 * schwarzian(map, z)?) / (d1 * d1))
}

/// (ψ, dψ/dz) → (ψ̃, dψ̃/dz̃) with ψ̃ = √z̃′ ψ.
pub fn rescale_wavefunction<M: CoordinateMap + ?Sized>(map: &M, z: f64, psi: [C64; 2]) -> Result<[C64; 2]> {
    let d1 = map.derivative(z)?;
    let d2 = second_third(map, z)?[0];
    let s = d1.sqrt();
    Ok([s * psi[0], psi[1] / s + d2 * psi[0] / (2.0 * d1 * s)])
}

/// Sampled (z, z̃, z̃′) table used to invert a map.
#[derive(Debug, Clone, PartialEq)]
pub struct MapGrid {
    z: Vec<f64>,
    u: Vec<f64>,
    du: Vec<f64>,
}

impl MapGrid {
    /// Samples `map` at increasing `points`.
    pub fn sample<M: CoordinateMap + ?Sized>(map: &M, points: &[f64]) -> Result<Self> {
        if points.len() < 2 || points.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::InvalidParameter("grid points must be strictly increasing".into()));
        }
        let mut u = Vec::with_capacity(points.len());
        let mut du = Vec::with_capacity(points.len());
        for &z in points {
            u.push(map.forward(z)?);
            du.push(map.derivative(z)?);
        }
        Ok(MapGrid { z: points.to_vec(), u, du })
    }

    /// z̃′ > 0 and z̃ increasing at every node.
    pub fn is_monotone(&self) -> bool {
        self.du.iter().all(|&d| d > 0.0) && self.u.windows(2).all(|w| w[1] > w[0])
    }

    pub fn len(&self) -> usize {
        self.z.len()
    }

    pub fn is_empty(&self) -> bool {
        self.z.is_empty()
    }

    pub fn nodes(&self) -> impl Iterator<Item = (f64, f64, f64)> + '_ {
        (0..self.z.len()).map(|i| (self.z[i], self.u[i], self.du[i]))
    }

    /// z with forward(z) = u: cubic Hermite guess on the inverse table, then
    /// safeguarded Newton on the map itself.
    pub fn inverse<M: CoordinateMap + ?Sized>(&self, map: &M, u: f64) -> Result<f64> {
        let n = self.u.len();
        let slack = 1e-12 * (self.u[n - 1] - self.u[0]);
        if !(u >= self.u[0] - slack && u <= self.u[n - 1] + slack) {
            return Err(Error::OutsideMappedDomain(u));
        }
        if u <= self.u[0] {
            return Ok(self.z[0]);
        }
        if u >= self.u[n - 1] {
            return Ok(self.z[n - 1]);
        }
        let i = self.u.partition_point(|&v| v <= u).clamp(1, n - 1) - 1;
        let (u0, u1) = (self.u[i], self.u[i + 1]);
        let h = u1 - u0;
        let s = (u - u0) / h;
        let mut z = crate::numeric::spline::hermite(self.z[i], self.z[i + 1], 1.0 / self.du[i], 1.0 / self.du[i + 1], h, s);
        let (mut a, mut b) = (self.z[i], self.z[i + 1]);
        for _ in 0..60 {
            let g = map.forward(z)? - u;
            if g == 0.0 {
                return Ok(z);
            }
            if g > 0.0 {
                b = z;
            } else {
                a = z;
            }
            let mut next = z - g / map.derivative(z)?;
            if !(next > a && next < b) {
                next = 0.5 * (a + b);
            }
            if (next - z).abs() <= 1e-15 * z.abs().max(f64::MIN_POSITIVE) {
                return Ok(next);
            }
            z = next;
        }
        Ok(z)
    }
}

/// Width of the turning-point neighbourhood (ℓ_g units) handled by the local series.
const SERIES_RADIUS: f64 = 1e-3;
/// Half-width of the 𝒛 window around 𝒛_t where 𝑭 is interpolated.
const LANGER_F_GAP: f64 = 0.02;

/// One energy of the gravity + CP problem with its classical turning point.
#[derive(Debug, Clone)]
pub struct LangerProblem {
    setup: PhysicalSetup,
    model: PotentialModel,
    energy: f64,
    x_t: f64,
}

impl LangerProblem {
    /// `energy` in joules; must lie above the surface region (E > 0).
    pub fn new(setup: &PhysicalSetup, model: &PotentialModel, energy: f64) -> Result<Self> {
        let e = setup.to_eps_g(energy);
        if !(e > 0.0) {
            return Err(Error::MultipleTurningPoints);
        }
        let ch = Channel::gravity(setup, model, C64::new(e, 0.0));
        let x_t = ch.turning_point()?.re;
        let f1 = ch.derivatives(x_t)?[1].re;
        if !(x_t > 0.0 && f1 < 0.0) {
            return Err(Error::MultipleTurningPoints);
        }
        Ok(LangerProblem { setup: *setup, model: model.clone(), energy, x_t })
    }

    pub fn setup(&self) -> &PhysicalSetup {
        &self.setup
    }

    pub fn model(&self) -> &PotentialModel {
        &self.model
    }

    pub fn energy(&self) -> f64 {
        self.energy
    }

    /// Turning point z_t in metres.
    pub fn turning_point(&self) -> f64 {
        self.x_t * self.setup.ell_g()
    }

    /// 𝒛_t = E/ε_g.
    pub fn bold_z_t(&self) -> f64 {
        self.setup.to_eps_g(self.energy)
    }

    fn channel(&self) -> Channel<'_> {
        Channel::gravity(&self.setup, &self.model, C64::new(self.bold_z_t(), 0.0))
    }
}

/// Badlands function Q(z) for energy E (J) at altitude z (m).
pub fn badlands(setup: &PhysicalSetup, model: &PotentialModel, energy: f64, z: f64) -> Result<f64> {
    if !(z > 0.0) {
        return Err(Error::NonPositiveAltitude(z));
    }
    let ch = Channel::gravity(setup, model, C64::new(setup.to_eps_g(energy), 0.0));
    Ok(ch.badlands(z / setup.ell_g())?.re)
}

/// The Langer map z → 𝒛 for one problem, on a window [z_lo, z_hi] (m).
///
/// Above x_t − δ the offset w = 𝒛 − 𝒛_t comes from the closed-form action
/// integral along the segment from the turning point; below it the action is
/// accumulated node by node towards the surface.
#[derive(Debug, Clone)]
pub struct LangerMap {
    problem: LangerProblem,
    x_lo: f64,
    x_hi: f64,
    x_c: f64,
    action_c: f64,
    /// (x, action from x to x_c), decreasing x.
    nodes: Vec<(f64, f64)>,
    series: [f64; 3],
    grid: MapGrid,
}

/// Builds the Langer map of `problem` on [z_lo, z_hi] (m).
pub fn langer_map(problem: &LangerProblem, z_lo: f64, z_hi: f64) -> Result<LangerMap> {
    LangerMap::new(problem, z_lo, z_hi)
}

impl LangerMap {
    pub fn new(problem: &LangerProblem, z_lo: f64, z_hi: f64) -> Result<Self> {
        let ell = problem.setup.ell_g();
        let (x_lo, x_hi) = (z_lo / ell, z_hi / ell);
        let x_t = problem.x_t;
        if !(x_lo > 0.0 && x_lo < x_t && x_hi > x_t) {
            return Err(Error::InvalidParameter("map window must bracket the turning point above z = 0".into()));
        }
        let ch = problem.channel();
        let [_, f1, f2, f3] = ch.derivatives(x_t)?;
        let (a1, a2, a3) = (f1.re, 0.5 * f2.re, f3.re / 6.0);
        let c1 = (-a1).cbrt();
        let c2 = -a2 / (5.0 * c1 * c1);
        let c3 = -(a3 + 8.0 * c1 * c2 * c2) / (7.0 * c1 * c1);
        if !(c1 > 0.0 && c2.is_finite() && c3.is_finite()) {
            return Err(Error::SingularityExpansionFailure(format!("F'(z_t) = {a1}")));
        }

        let x_c = (x_t - (0.5f64).min(0.5 * x_t)).max(x_lo);
        let (w_c, _) = ch.langer_point(C64::new(x_t, 0.0), x_c)?;
        let action_c = 2.0 / 3.0 * (-w_c.re).powf(1.5);

        let mut nodes = vec![(x_c, 0.0)];
        let mut x = x_c;
        let mut acc = 0.0;
        while x > x_lo {
            let next = (x * 0.8).max(x_lo);
            acc += action_segment(&ch, next, x)?;
            nodes.push((next, acc));
            x = next;
        }

        let mut map = LangerMap {
            problem: problem.clone(),
            x_lo,
            x_hi,
            x_c,
            action_c,
            nodes,
            series: [c1, c2, c3],
            grid: MapGrid { z: vec![], u: vec![], du: vec![] },
        };
        let mut points: Vec<f64> = map.nodes.iter().rev().map(|n| n.0 * ell).collect();
        points.dedup();
        let steps = ((x_hi - x_c) / 0.02).ceil().max(8.0) as usize;
        for k in 1..=steps {
            points.push((x_c + (x_hi - x_c) * k as f64 / steps as f64) * ell);
        }
        if let Some(last) = points.last_mut() {
            *last = z_hi;
        }
        let mut grid = MapGrid::sample(&Unchecked(&map), &points)?;
        if !grid.is_monotone() {
            return Err(Error::MultipleTurningPoints);
        }
        std::mem::swap(&mut map.grid, &mut grid);
        Ok(map)
    }

    pub fn problem(&self) -> &LangerProblem {
        &self.problem
    }

    pub fn grid(&self) -> &MapGrid {
        &self.grid
    }

    /// [w, 𝒛′, 𝒛″, 𝒛‴] at reduced altitude x, derivatives with respect to x.
    fn reduced(&self, x: f64) -> Result<[f64; 4]> {
        let ch = self.problem.channel();
        let t = x - self.problem.x_t;
        if t.abs() < SERIES_RADIUS {
            let [c1, c2, c3] = self.series;
            return Ok([
                t * (c1 + t * (c2 + t * c3)),
                c1 + t * (2.0 * c2 + 3.0 * t * c3),
                2.0 * c2 + 6.0 * t * c3,
                6.0 * c3,
            ]);
        }
        let [f, f1, f2, _] = ch.derivatives(x)?;
        let (f, f1, f2) = (f.re, f1.re, f2.re);
        let (w, z1) = if x >= self.x_c {
            let (w, z1) = ch.langer_point(C64::new(self.problem.x_t, 0.0), x)?;
            (w.re, z1.re)
        } else {
            let action = self.action_c + self.action_below(&ch, x)?;
            let w = -(1.5 * action).powf(2.0 / 3.0);
            (w, (f / -w).sqrt())
        };
        let z2 = -(f1 + z1 * z1 * z1) / (2.0 * w * z1);
        let z3 = -(f2 + 2.0 * w * z2 * z2 + 5.0 * z1 * z1 * z2) / (2.0 * w * z1);
        Ok([w, z1, z2, z3])
    }

    /// ∫_x^{x_c} √F for x below x_c.
    fn action_below(&self, ch: &Channel, x: f64) -> Result<f64> {
        let i = self.nodes.partition_point(|n| n.0 > x);
        if i == 0 {
            return action_segment(ch, x, self.x_c);
        }
        let (upper, acc) = self.nodes[i - 1];
        Ok(acc + action_segment(ch, x, upper)?)
    }

    fn check(&self, z: f64) -> Result<f64> {
        let x = z / self.problem.setup.ell_g();
        if !(x >= self.x_lo * (1.0 - 1e-14) && x <= self.x_hi * (1.0 + 1e-14)) {
            return Err(Error::OutsideMappedDomain(z));
        }
        Ok(x)
    }

    /// z (m) for a Langer coordinate inside the mapped window.
    pub fn inverse(&self, bold_z: f64) -> Result<f64> {
        self.grid.inverse(self, bold_z)
    }

    /// 𝑭(𝒛) = 𝒛_t − 𝒛 − 5/(16 w²) + w Q(z), w = 𝒛 − 𝒛_t. Close to 𝒛_t the
    /// singular terms cancel; there 𝑭 is interpolated from four points at ±δ, ±2δ.
    pub fn langer_f(&self, bold_z: f64) -> Result<f64> {
        let w = bold_z - self.problem.bold_z_t();
        if w.abs() >= LANGER_F_GAP {
            return self.langer_f_direct(bold_z);
        }
        let d = LANGER_F_GAP;
        let nodes = [-2.0 * d, -d, d, 2.0 * d];
        let mut sum = 0.0;
        for (i, &wi) in nodes.iter().enumerate() {
            let mut basis = 1.0;
            for (j, &wj) in nodes.iter().enumerate() {
                if i != j {
                    basis *= (w - wj) / (wi - wj);
                }
            }
            sum += basis * self.langer_f_direct(self.problem.bold_z_t() + wi)?;
        }
        Ok(sum)
    }

    fn langer_f_direct(&self, bold_z: f64) -> Result<f64> {
        let z = self.inverse(bold_z)?;
        let x = z / self.problem.setup.ell_g();
        let w = self.reduced(x)?[0];
        let q = self.problem.channel().badlands(x)?.re;
        Ok(-w - 5.0 / (16.0 * w * w) + w * q)
    }

    /// Transformed CP potential 𝑽_CP(𝒛) = 𝑬 − 𝑭(𝒛) − 𝒛.
    pub fn transformed_potential(&self, bold_z: f64) -> Result<f64> {
        Ok(self.problem.bold_z_t() - self.langer_f(bold_z)? - bold_z)
    }

    /// ρ by integrating ψ̃″ + 𝑭ψ̃ = 0 in the Langer coordinate, from a downward
    /// WKB wave at the bottom of the window up to one ℓ_g above the turning point.
    pub fn round_trip(&self, opts: &SolverOptions) -> Result<C64> {
        let ell = self.problem.setup.ell_g();
        let x_m = self.problem.x_t + 1.0;
        if x_m > self.x_hi {
            return Err(Error::OutsideMappedDomain(x_m * ell));
        }
        let ch = self.problem.channel();
        let start = absorbing_start(&ch, self.x_lo)?;
        let [_, z1, z2, _] = self.reduced(self.x_lo)?;
        let s = z1.sqrt();
        let y0 = [s * start[0], start[1] / s + z2 * start[0] / (2.0 * z1 * s)];
        let lo = self.forward(self.x_lo * ell)?;
        let hi = self.forward(x_m * ell)?;
        let y = integrate_schrodinger(|u| Ok(C64::new(self.langer_f(u)?, 0.0)), lo, hi, y0, &opts.ode())?;
        let w = hi - self.problem.bold_z_t();
        let v = airy_pair(C64::new(w, 0.0))?;
        let a = y[0] * v.ci_plus_prime() - y[1] * v.ci_plus();
        let c = v.ci_minus() * y[1] - v.ci_minus_prime() * y[0];
        Ok(c / a)
    }

    /// Rows (z, 𝒛, 𝑭, Q) at the given altitudes (m). Q is NaN within the
    /// turning-point neighbourhood where it is not representable.
    pub fn dump(&self, altitudes: &[f64]) -> Result<Vec<[f64; 4]>> {
        let ell = self.problem.setup.ell_g();
        altitudes
            .iter()
            .map(|&z| {
                let bold = self.forward(z)?;
                let x = z / ell;
                let q = if (x - self.problem.x_t).abs() < SERIES_RADIUS {
                    f64::NAN
                } else {
                    self.problem.channel().badlands(x)?.re
                };
                Ok([z, bold, self.langer_f(bold)?, q])
            })
            .collect()
    }

    /// Writes `z_m,bold_z,bold_F,Q` at the given altitudes (m).
    pub fn write_csv<W: Write>(&self, altitudes: &[f64], writer: W) -> Result<()> {
        let mut w = csv::Writer::from_writer(writer);
        let io = |e: csv::Error| Error::InvalidParameter(e.to_string());
        w.write_record(["z_m", "bold_z", "bold_F", "Q"]).map_err(io)?;
        for row in self.dump(altitudes)? {
            w.write_record(row.iter().map(|v| v.to_string())).map_err(io)?;
        }
        w.flush().map_err(|e| Error::InvalidParameter(e.to_string()))
    }
}

fn action_segment(ch: &Channel, a: f64, b: f64) -> Result<f64> {
    let root = |x: f64| -> Result<C64> {
        let f = ch.f(x)?.re;
        if !(f > 0.0) {
            return Err(Error::MultipleTurningPoints);
        }
        Ok(C64::new(f.sqrt(), 0.0))
    };
    let rough = (root(a)?.re + root(b)?.re) * (b - a);
    Ok(adaptive_gl(root, a, b, 1e-14 * rough)?.re)
}

/// The map without its window check, used while the inversion grid is built.
struct Unchecked<'a>(&'a LangerMap);

impl CoordinateMap for Unchecked<'_> {
    fn forward(&self, z: f64) -> Result<f64> {
        let x = z / self.0.problem.setup.ell_g();
        Ok(self.0.problem.bold_z_t() + self.0.reduced(x)?[0])
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        let ell = self.0.problem.setup.ell_g();
        Ok(self.0.reduced(z / ell)?[1] / ell)
    }

    fn domain(&self) -> (f64, f64) {
        self.0.domain()
    }
}

impl CoordinateMap for LangerMap {
    fn forward(&self, z: f64) -> Result<f64> {
        let x = self.check(z)?;
        Ok(self.problem.bold_z_t() + self.reduced(x)?[0])
    }

    fn derivative(&self, z: f64) -> Result<f64> {
        let x = self.check(z)?;
        Ok(self.reduced(x)?[1] / self.problem.setup.ell_g())
    }

    fn higher_derivatives(&self, z: f64) -> Option<Result<[f64; 2]>> {
        let ell = self.problem.setup.ell_g();
        Some(self.check(z).and_then(|x| {
            let d = self.reduced(x)?;
            Ok([d[2] / (ell * ell), d[3] / (ell * ell * ell)])
        }))
    }

    fn domain(&self) -> (f64, f64) {
        let ell = self.problem.setup.ell_g();
        (self.x_lo * ell, self.x_hi * ell)
    }
}

/// F(z) in SI units for a Langer problem, for use with [`transform_f`].
pub fn problem_f(problem: &LangerProblem) -> impl Fn(f64) -> Result<f64> + '_ {
    move |z| f_function(&problem.setup, &problem.model, problem.energy, z)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::potential::SurfacePreset;

    #[test]
    fn schwarzian_of_simple_maps() {
        let affine = AffineMap { scale: 3.0, offset: -1.0 };
        assert_eq!(schwarzian(&affine, 0.4).unwrap(), 0.0);
        let mobius = FnMap::new(|z: f64| 1.0 / z, |z: f64| -1.0 / (z * z), (0.0, 10.0));
        assert!(schwarzian(&mobius, 1.0).unwrap().abs() < 1e-8);
        let square = FnMap::new(|z: f64| z * z, |z: f64| 2.0 * z, (0.0, 10.0));
        assert!((schwarzian(&square, 1.0).unwrap() + 1.5).abs() < 1e-8);
    }

    #[test]
    fn stencil_needs_room() {
        let square = FnMap::new(|z: f64| z * z, |z: f64| 2.0 * z, (0.0, 1.0));
        assert!(matches!(schwarzian(&square, 0.9999), Err(Error::NearBoundary(_))));
    }

    #[test]
    fn identity_leaves_f_unchanged() {
        let id = AffineMap { scale: 1.0, offset: 0.0 };
        let f = |z: f64| Ok(3.0 - z * z);
        assert_eq!(transform_f(f, &id, 0.7).unwrap(), f(0.7).unwrap());
    }

    #[test]
    fn action_map_gives_one_minus_q() {
        let fd = |z: f64| Ok([1.0 + z * z, 2.0 * z, 2.0, 0.0]);
        let map = ActionMap::new(fd, 0.0, (-5.0, 5.0));
        let z = 0.8;
        let [f, f1, f2, _] = fd(z).unwrap();
        let q = f2 / (4.0 * f * f) - 5.0 * f1 * f1 / (16.0 * f * f * f);
        let ft = transform_f(|z| Ok(fd(z)?[0]), &map, z).unwrap();
        assert!((ft - (1.0 - q)).abs() < 1e-14);
        // asinh form of ∫√(1+t²)
        let exact = 0.5 * (z * (1.0 + z * z).sqrt() + z.asinh());
        assert!((map.forward(z).unwrap() - exact).abs() < 1e-13);
    }

    fn v4_problem(e: f64) -> LangerProblem {
        let setup = PhysicalSetup::hydrogen();
        let p = SurfacePreset::perfect_mirror();
        let model = PotentialModel::homogeneous_v4(p.c4(&setup)).unwrap();
        LangerProblem::new(&setup, &model, setup.from_eps_g(e)).unwrap()
    }

    #[test]
    fn pure_gravity_map_is_linear() {
        let setup = PhysicalSetup::hydrogen();
        let problem = LangerProblem::new(&setup, &PotentialModel::Absent, setup.eps_g()).unwrap();
        let ell = setup.ell_g();
        let map = langer_map(&problem, 0.01 * ell, 4.0 * ell).unwrap();
        for x in [0.02, 0.3, 0.9995, 1.0, 1.2, 3.5] {
            assert!((map.forward(x * ell).unwrap() - x).abs() < 1e-12, "x = {x}");
            assert!((map.derivative(x * ell).unwrap() * ell - 1.0).abs() < 1e-12);
            assert!((map.langer_f(x).unwrap() - (1.0 - x)).abs() < 1e-10);
        }
    }

    #[test]
    fn langer_f_matches_transform_f() {
        let problem = v4_problem(2.3);
        let ell = problem.setup().ell_g();
        let map = langer_map(&problem, 2e-3 * ell, 5.0 * ell).unwrap();
        for x in [3e-3, 1e-2, 0.1, 1.0, 2.0, 2.6, 4.0] {
            let z = x * ell;
            let direct = map.langer_f(map.forward(z).unwrap()).unwrap();
            let general = transform_f(problem_f(&problem), &map, z).unwrap();
            assert!((direct - general).abs() < 1e-8 * direct.abs().max(1.0), "x = {x}: {direct} vs {general}");
        }
    }

    #[test]
    fn inverse_round_trips() {
        let problem = v4_problem(4.1);
        let ell = problem.setup().ell_g();
        let map = langer_map(&problem, 2e-3 * ell, 6.0 * ell).unwrap();
        assert!(map.grid().is_monotone());
        let (lo, hi) = (map.forward(2e-3 * ell).unwrap(), map.forward(6.0 * ell).unwrap());
        for k in 0..=50 {
            let u = lo + (hi - lo) * k as f64 / 50.0;
            let z = map.inverse(u).unwrap();
            assert!((map.forward(z).unwrap() - u).abs() <= 1e-10 * u.abs().max(1.0));
        }
    }

    #[test]
    fn cp_peak_near_surface() {
        let problem = v4_problem(2.3);
        let ell = problem.setup().ell_g();
        let map = langer_map(&problem, 2e-3 * ell, 5.0 * ell).unwrap();
        let near = map.transformed_potential(map.forward(5e-3 * ell).unwrap()).unwrap();
        let far = map.transformed_potential(map.forward(3.0 * ell).unwrap()).unwrap();
        assert!(near > 0.0 && near > 100.0 * far.abs());
    }

    #[test]
    fn non_positive_energy_rejected() {
        let setup = PhysicalSetup::hydrogen();
        let r = LangerProblem::new(&setup, &PotentialModel::Absent, -setup.eps_g());
        assert!(matches!(r, Err(Error::MultipleTurningPoints)));
    }

    #[test]
    fn langer_frame_round_trip_matches_solver() {
        use crate::scatter::{Boundary, RoundTripSolver};
        let problem = v4_problem(2.3);
        let setup = *problem.setup();
        let opts = SolverOptions::default();
        let solver = RoundTripSolver::new(&setup, problem.model(), Boundary::Absorbing, 12.0, opts).unwrap();
        let ell = setup.ell_g();
        let map = langer_map(&problem, solver.lower_point() * ell, 4.0 * ell).unwrap();
        let a = map.round_trip(&opts).unwrap();
        let b = solver.rho(C64::new(2.3, 0.0)).unwrap();
        assert!((a - b).norm() < 1e-8, "{a} vs {b}");
    }
}
