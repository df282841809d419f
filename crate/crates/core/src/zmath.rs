//! Small complex-arithmetic helpers shared across modules.

use num_complex::Complex64;

pub(crate) const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// z/|z| with the convention 0 ↦ 0.
pub(crate) fn unit_phase(z: Complex64) -> Complex64 {
    let r = z.norm();
    if r == 0.0 {
        ZERO
    } else {
        z / r
    }
}

/// z/z̄ (the squared phase) with the convention 0 ↦ 0.
pub(crate) fn phase_sq(z: Complex64) -> Complex64 {
    let n = z.norm_sqr();
    if n == 0.0 {
        ZERO
    } else {
        z * z / n
    }
}

/// |x|^q with 0^0 = 1.
pub(crate) fn abs_pow(x: f64, q: f64) -> f64 {
    if q == 0.0 {
        1.0
    } else {
        x.abs().powf(q)
    }
}

/// Wrap an angle to (−π, π]. Used by the branch-selection tests.
#[cfg_attr(not(test), allow(dead_code))]
pub(crate) fn wrap_angle(a: f64) -> f64 {
    let mut a = a % std::f64::consts::TAU;
    if a <= -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    } else if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    }
    a
}

/// Wirtinger derivatives of a radial stretching z ↦ ρ(|z|)·z/|z|.
///
/// d_z = ½(ρ̇ + ρ/t), d_z̄ = ½(z/z̄)(ρ̇ − ρ/t) with t = |z|; callers handle t = 0.
pub(crate) fn radial_stretch_derivs(z: Complex64, rho: f64, rho_dot: f64) -> (Complex64, Complex64) {
    let t = z.norm();
    let dz = Complex64::new(0.5 * (rho_dot + rho / t), 0.0);
    let dzb = phase_sq(z) * (0.5 * (rho_dot - rho / t));
    (dz, dzb)
}
