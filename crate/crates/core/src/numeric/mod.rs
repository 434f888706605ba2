//! Small numerical kernels shared by the physics modules.

pub(crate) mod ode;
pub(crate) mod quad;
pub(crate) mod roots;
pub mod spline;

pub(crate) use ode::{integrate_schrodinger, OdeOptions};
pub(crate) use quad::{adaptive_gl, gauss_legendre};
pub(crate) use roots::brent;
