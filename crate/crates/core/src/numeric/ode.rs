//! Dormand–Prince 5(4) integrator specialised to ψ'' = −F(x) ψ with complex F.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy)]
pub(crate) struct OdeOptions {
    pub rtol: f64,
    pub atol: f64,
    pub max_steps: usize,
}

impl Default for OdeOptions {
    fn default() -> Self {
        OdeOptions { rtol: 1e-11, atol: 1e-300, max_steps: 2_000_000 }
    }
}

const C: [f64; 7] = [0.0, 0.2, 0.3, 0.8, 8.0 / 9.0, 1.0, 1.0];
const A: [[f64; 6]; 7] = [
    [0.0; 6],
    [0.2, 0.0, 0.0, 0.0, 0.0, 0.0],
    [3.0 / 40.0, 9.0 / 40.0, 0.0, 0.0, 0.0, 0.0],
    [44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0, 0.0, 0.0, 0.0],
    [19372.0 / 6561.0, -25360.0 / 2187.0, 64448.0 / 6561.0, -212.0 / 729.0, 0.0, 0.0],
    [9017.0 / 3168.0, -355.0 / 33.0, 46732.0 / 5247.0, 49.0 / 176.0, -5103.0 / 18656.0, 0.0],
    [35.0 / 384.0, 0.0, 500.0 / 1113.0, 125.0 / 192.0, -2187.0 / 6784.0, 11.0 / 84.0],
];
const E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

type State = [C64; 2];

fn rhs(f: C64, y: &State) -> State {
    [y[1], -f * y[0]]
}

/// Integrates (ψ, ψ') from `x0` to `x1`; `f(x)` returns F(x).
///
/// The error norm weights ψ by sqrt|F| so that ψ and ψ' are compared on the
/// same footing in oscillating and evanescent regions alike.
pub(crate) fn integrate_schrodinger<F>(mut f: F, x0: f64, x1: f64, y0: State, opts: &OdeOptions) -> Result<State>
where
    F: FnMut(f64) -> Result<C64>,
{
    let span = x1 - x0;
    if span == 0.0 {
        return Ok(y0);
    }
    let dir = span.signum();
    let mut x = x0;
    let mut y = y0;
    let mut f0 = f(x)?;
    let mut k1 = rhs(f0, &y);
    let wave = f0.norm().sqrt().max(1.0 / span.abs());
    let mut h = dir * (0.05 / wave).min(span.abs());
    let h_min = 1e-14 * (x0.abs() + x1.abs()).max(span.abs());
    let mut steps = 0usize;

    while (x1 - x) * dir > 0.0 {
        if steps >= opts.max_steps {
            return Err(Error::StiffIntegration(format!("step budget exhausted at x = {x}")));
        }
        steps += 1;
        if (x + h - x1) * dir > 0.0 {
            h = x1 - x;
        }
        let mut k = [[C64::new(0.0, 0.0); 2]; 7];
        k[0] = k1;
        let mut f_last = f0;
        for s in 1..7 {
            let mut ys = y;
            for (j, kj) in k.iter().enumerate().take(s) {
                let a = A[s][j];
                if a != 0.0 {
                    ys[0] += h * a * kj[0];
                    ys[1] += h * a * kj[1];
                }
            }
            let fs = f(x + C[s] * h)?;
            k[s] = rhs(fs, &ys);
            if s == 6 {
                f_last = fs;
            }
        }
        let mut y_new = y;
        for (j, kj) in k.iter().enumerate().take(6) {
            let a = A[6][j];
            y_new[0] += h * a * kj[0];
            y_new[1] += h * a * kj[1];
        }
        let mut err = [C64::new(0.0, 0.0); 2];
        for (j, kj) in k.iter().enumerate() {
            err[0] += h * E[j] * kj[0];
            err[1] += h * E[j] * kj[1];
        }
        let w = f0.norm().max(f_last.norm());
        let amp = |s: &State| (s[0].norm_sqr() * w + s[1].norm_sqr()).sqrt();
        let scale = opts.rtol * amp(&y).max(amp(&y_new)) + opts.atol;
        let err_norm = (err[0].norm_sqr() * w + err[1].norm_sqr()).sqrt() / scale;
        if !err_norm.is_finite() {
            return Err(Error::StiffIntegration(format!("non-finite state near x = {x}")));
        }
        if err_norm <= 1.0 {
            x += h;
            y = y_new;
            f0 = f_last;
            k1 = k[6];
            let grow = if err_norm == 0.0 { 5.0 } else { (0.9 * err_norm.powf(-0.2)).clamp(0.2, 5.0) };
            h *= grow;
        } else {
            h *= (0.9 * err_norm.powf(-0.2)).clamp(0.1, 0.9);
            if h.abs() < h_min {
                return Err(Error::StiffIntegration(format!("step size underflow at x = {x}")));
            }
        }
    }
    Ok(y)
}
