//! CODATA 2018 constants in SI units.

pub const HBAR: f64 = 1.054_571_817e-34;
pub const BOHR_RADIUS: f64 = 5.291_772_109_03e-11;
pub const HARTREE: f64 = 4.359_744_722_207_1e-18;
pub const ELECTRON_VOLT: f64 = 1.602_176_634e-19;
pub const ATOMIC_MASS_UNIT: f64 = 1.660_539_066_60e-27;
/// Mass of the hydrogen atom (1.007 825 032 07 u); antihydrogen is identical.
pub const HYDROGEN_MASS: f64 = 1.007_825_032_07 * ATOMIC_MASS_UNIT;
pub const STANDARD_GRAVITY: f64 = 9.81;
/// 1 peV in joules.
pub const PICO_EV: f64 = 1e-12 * ELECTRON_VOLT;
