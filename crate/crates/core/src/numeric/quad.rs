use std::num::NonZeroUsize;
use std::sync::OnceLock;

use gauss_quad::legendre::GaussLegendre;
use num_complex::Complex64 as C64;

use crate::error::Result;

/// Gauss–Legendre nodes and weights on [-1, 1]; degrees 10, 20 and 40 are cached.
pub(crate) fn gauss_legendre(degree: usize) -> &'static [(f64, f64)] {
    static RULES: [OnceLock<Vec<(f64, f64)>>; 3] = [OnceLock::new(), OnceLock::new(), OnceLock::new()];
    let slot = match degree {
        10 => 0,
        20 => 1,
        40 => 2,
        _ => panic!("unsupported Gauss-Legendre degree {degree}"),
    };
    RULES[slot].get_or_init(|| {
        let rule = GaussLegendre::new(NonZeroUsize::new(degree).unwrap());
        rule.as_node_weight_pairs().to_vec()
    })
}

pub(crate) fn gl_fixed<F>(degree: usize, a: f64, b: f64, mut f: F) -> Result<C64>
where
    F: FnMut(f64) -> Result<C64>,
{
    let half = 0.5 * (b - a);
    let mid = 0.5 * (b + a);
    let mut sum = C64::new(0.0, 0.0);
    for &(x, w) in gauss_legendre(degree) {
        sum += w * f(mid + half * x)?;
    }
    Ok(sum * half)
}

/// Adaptive bisection on a 20-point Gauss–Legendre rule until the two halves
/// agree with the whole to `tol` (absolute, scaled by the panel share).
pub(crate) fn adaptive_gl<F>(mut f: F, a: f64, b: f64, tol: f64) -> Result<C64>
where
    F: FnMut(f64) -> Result<C64>,
{
    let whole = gl_fixed(20, a, b, &mut f)?;
    adaptive_step(&mut f, a, b, whole, tol, 0)
}

fn adaptive_step<F>(f: &mut F, a: f64, b: f64, whole: C64, tol: f64, depth: usize) -> Result<C64>
where
    F: FnMut(f64) -> Result<C64>,
{
    let m = 0.5 * (a + b);
    let left = gl_fixed(20, a, m, &mut *f)?;
    let right = gl_fixed(20, m, b, &mut *f)?;
    let sum = left + right;
    if (sum - whole).norm() <= tol || depth >= 40 {
        return Ok(sum);
    }
    Ok(adaptive_step(f, a, m, left, 0.5 * tol, depth + 1)? + adaptive_step(f, m, b, right, 0.5 * tol, depth + 1)?)
}
