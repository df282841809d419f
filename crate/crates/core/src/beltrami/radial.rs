//! Radial fast path: for coefficients of the form η(z) = γ₀(|z|)·z/z̄ the
//! stretching ansatz Φ(z) = ρ(|z|)·z/|z| reduces the Beltrami equation to the
//! separable ODE ρ̇ = (1/t)·(1+γ₀)/(1−γ₀)·ρ, integrated here in log space by
//! adaptive Simpson quadrature.

use std::sync::Arc;

use num_complex::Complex64;

use super::{JacobianSign, MapFn, PhiMethod, PhiSolution};
use crate::zmath::unit_phase;
use crate::{Error, Result};

/// Choice of the free multiplicative constant in ρ.
#[derive(Clone, Copy, Debug)]
pub enum RadialNormalization {
    /// ρ(t_hi) = t_hi: the outer sampled circle is mapped to itself.
    OuterIdentity,
    /// ρ(t_hi) = value.
    OuterValue(f64),
}

const N_NODES: usize = 2049;
const SIMPSON_TOL: f64 = 1e-12;
const MAX_DEPTH: usize = 40;
const PHASE_TOL: f64 = 1e-8;

fn simpson(f: &impl Fn(f64) -> f64, a: f64, fa: f64, b: f64, fb: f64) -> (f64, f64, f64) {
    let m = 0.5 * (a + b);
    let fm = f(m);
    ((b - a) / 6.0 * (fa + 4.0 * fm + fb), m, fm)
}

fn adaptive_simpson(
    f: &impl Fn(f64) -> f64,
    a: f64,
    fa: f64,
    b: f64,
    fb: f64,
    whole: f64,
    m: f64,
    fm: f64,
    tol: f64,
    depth: usize,
) -> f64 {
    let (left, lm, flm) = simpson(f, a, fa, m, fm);
    let (right, rm, frm) = simpson(f, m, fm, b, fb);
    let delta = left + right - whole;
    if depth >= MAX_DEPTH || delta.abs() <= 15.0 * tol {
        left + right + delta / 15.0
    } else {
        adaptive_simpson(f, a, fa, m, fm, left, lm, flm, 0.5 * tol, depth + 1)
            + adaptive_simpson(f, m, fm, b, fb, right, rm, frm, 0.5 * tol, depth + 1)
    }
}

fn integrate(f: &impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb) = (f(a), f(b));
    let (whole, m, fm) = simpson(f, a, fa, b, fb);
    adaptive_simpson(f, a, fa, b, fb, whole, m, fm, tol, 0)
}

/// Cumulative integral sampled on a uniform log-radius grid, evaluated by
/// cubic Lagrange interpolation.
struct LogProfile {
    tau0: f64,
    dtau: f64,
    vals: Vec<f64>,
}

impl LogProfile {
    fn window(&self, tau: f64) -> (usize, f64) {
        let n = self.vals.len();
        let t = (tau - self.tau0) / self.dtau;
        let base = (t.floor() as isize).clamp(1, n as isize - 3) as usize;
        (base, t - base as f64)
    }

    fn eval(&self, tau: f64) -> f64 {
        let (b, s) = self.window(tau);
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        w[0] * self.vals[b - 1] + w[1] * self.vals[b] + w[2] * self.vals[b + 1] + w[3] * self.vals[b + 2]
    }

    /// (value, d/dτ) of the interpolant.
    fn eval_with_deriv(&self, tau: f64) -> (f64, f64) {
        let (b, s) = self.window(tau);
        let w = [
            -s * (s - 1.0) * (s - 2.0) / 6.0,
            (s + 1.0) * (s - 1.0) * (s - 2.0) / 2.0,
            -(s + 1.0) * s * (s - 2.0) / 2.0,
            (s + 1.0) * s * (s - 1.0) / 6.0,
        ];
        let dw = [
            -(3.0 * s * s - 6.0 * s + 2.0) / 6.0,
            (3.0 * s * s - 4.0 * s - 1.0) / 2.0,
            -(3.0 * s * s - 2.0 * s - 2.0) / 2.0,
            (3.0 * s * s - 1.0) / 6.0,
        ];
        let v = w[0] * self.vals[b - 1] + w[1] * self.vals[b] + w[2] * self.vals[b + 1] + w[3] * self.vals[b + 2];
        let d = dw[0] * self.vals[b - 1] + dw[1] * self.vals[b] + dw[2] * self.vals[b + 1] + dw[3] * self.vals[b + 2];
        (v, d / self.dtau)
    }
}

/// Solve Φ_z̄ = ηΦ_z for η(z) = γ₀(|z|)·z/z̄ on the annulus t_lo ≤ |z| ≤ t_hi.
///
/// Requires t_lo > 0 and |γ₀| < 1 on the range. ρ is recovered from
/// log ρ(t) = log ρ(t_lo) + ∫ (1/s)(1+γ₀(s))/(1−γ₀(s)) ds to quadrature
/// tolerance 1e−10, and the inverse by a monotone 1-D root find.
pub fn solve_phi_radial<F>(gamma0: F, t_range: (f64, f64), norm: RadialNormalization) -> Result<PhiSolution>
where
    F: Fn(f64) -> f64 + Send + Sync + 'static,
{
    let (t_lo, t_hi) = t_range;
    if !(t_lo > 0.0) || !(t_hi > t_lo) {
        return Err(Error::InvalidParam(format!("need 0 < t_lo < t_hi, got [{t_lo}, {t_hi}]")));
    }

    // |γ₀| < 1 on a dense sample, otherwise the ODE direction field breaks down.
    for k in 0..=512 {
        let t = t_lo * (t_hi / t_lo).powf(k as f64 / 512.0);
        let g = gamma0(t);
        if !g.is_finite() || g.abs() >= 1.0 {
            return Err(Error::CoefficientBound(format!("|gamma0({t})| = {} >= 1", g.abs())));
        }
    }

    let integrand = move |s: f64| {
        let g = gamma0(s);
        (1.0 + g) / (1.0 - g) / s
    };

    // Cumulative integral on log-spaced nodes; per-interval adaptive Simpson.
    let tau0 = t_lo.ln();
    let tau1 = t_hi.ln();
    let dtau = (tau1 - tau0) / (N_NODES - 1) as f64;
    let mut vals = Vec::with_capacity(N_NODES);
    vals.push(0.0);
    let mut acc = 0.0;
    for k in 1..N_NODES {
        let a = (tau0 + (k - 1) as f64 * dtau).exp();
        let b = (tau0 + k as f64 * dtau).exp();
        acc += integrate(&integrand, a, b, SIMPSON_TOL);
        vals.push(acc);
    }
    let total = vals[N_NODES - 1];
    let profile = Arc::new(LogProfile { tau0, dtau, vals });

    let scale = match norm {
        RadialNormalization::OuterIdentity => t_hi / total.exp(),
        RadialNormalization::OuterValue(v) => {
            if !(v > 0.0) {
                return Err(Error::InvalidParam(format!("outer radius must be positive, got {v}")));
            }
            v / total.exp()
        }
    };
    let rho_lo = scale;
    let rho_hi = scale * total.exp();

    // Residual of the interpolated profile against the ODE right-hand side:
    // with w(t) = t·ρ̇/ρ the pointwise Beltrami residual is
    // |(w−1) − γ₀(w+1)| / (w+1).
    let mut residual = 0.0f64;
    for k in 0..=256 {
        let tau = tau0 + (tau1 - tau0) * k as f64 / 256.0;
        let (_, didtau) = profile.eval_with_deriv(tau);
        let g = {
            let t = tau.exp();
            let gg = integrand(t);
            // reconstruct γ₀ from the integrand: g·t = (1+γ)/(1−γ)
            let w = gg * t;
            (w - 1.0) / (w + 1.0)
        };
        let w = didtau; // t·ρ̇/ρ = dI/dτ for the interpolant
        residual = residual.max(((w - 1.0) - g * (w + 1.0)).abs() / ((w + 1.0).abs() + 1e-14));
    }

    let slack = 1.0 + 1e-12;
    let fwd_profile = profile.clone();
    let forward: MapFn = Arc::new(move |z: Complex64| {
        let t = z.norm();
        if t < t_lo / slack || t > t_hi * slack {
            return None;
        }
        let t = t.clamp(t_lo, t_hi);
        Some(unit_phase(z) * (scale * fwd_profile.eval(t.ln()).exp()))
    });

    let inv_profile = profile.clone();
    let inverse: MapFn = Arc::new(move |w: Complex64| {
        let m = w.norm();
        if m < rho_lo / slack || m > rho_hi * slack {
            return None;
        }
        let target = (m / scale).ln().clamp(0.0, total);
        // bisection on the increasing interpolant I(τ) = target
        let (mut lo, mut hi) = (tau0, tau1);
        for _ in 0..100 {
            let mid = 0.5 * (lo + hi);
            if inv_profile.eval(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        let t = (0.5 * (lo + hi)).exp();
        Some(unit_phase(w) * t)
    });

    Ok(PhiSolution {
        method: PhiMethod::RadialOde,
        residual,
        jacobian_sign: JacobianSign::Positive, // ρ̇ > 0 follows from |γ₀| < 1
        iterations: N_NODES - 1,
        sup_coefficient: {
            let mut s = 0.0f64;
            for k in 0..=128 {
                let t = t_lo * (t_hi / t_lo).powf(k as f64 / 128.0);
                let w = integrand(t) * t;
                s = s.max(((w - 1.0) / (w + 1.0)).abs());
            }
            s
        },
        truncation_bound: None,
        phi_grid: None,
        image: format!("annulus {rho_lo:.6e} <= |w| <= {rho_hi:.6e}"),
        forward,
        inverse,
    })
}

/// Check that a coefficient has the radial form η(z) = γ₀(|z|)·z/z̄ on the
/// given radius range, to tolerance 1e−8 in the phase test.
pub fn validate_radial_eta<E>(eta: &E, t_range: (f64, f64)) -> Result<()>
where
    E: Fn(Complex64) -> Complex64,
{
    let (t_lo, t_hi) = t_range;
    for k in 0..=24 {
        let t = t_lo * (t_hi / t_lo).powf(k as f64 / 24.0);
        let on_axis = eta(Complex64::new(t, 0.0));
        if on_axis.im.abs() > PHASE_TOL * (1.0 + on_axis.norm()) {
            return Err(Error::NotRadial(format!("eta({t}) = {on_axis} is not real on the positive axis")));
        }
        for a in 1..16 {
            let th = std::f64::consts::TAU * a as f64 / 16.0;
            let z = Complex64::from_polar(t, th);
            let rotated = eta(z) * Complex64::from_polar(1.0, -2.0 * th);
            if (rotated - on_axis).norm() > PHASE_TOL * (1.0 + on_axis.norm()) {
                return Err(Error::NotRadial(format!(
                    "eta is not rotation-covariant at t = {t}, angle {th}: {rotated} vs {on_axis}"
                )));
            }
        }
    }
    Ok(())
}

/// Validate radial symmetry of `eta` and solve along its profile
/// γ₀(t) = η(t) on the positive real axis.
pub fn solve_phi_radial_from_eta<E>(
    eta: E,
    t_range: (f64, f64),
    norm: RadialNormalization,
) -> Result<PhiSolution>
where
    E: Fn(Complex64) -> Complex64 + Send + Sync + 'static,
{
    validate_radial_eta(&eta, t_range)?;
    solve_phi_radial(move |t| eta(Complex64::new(t, 0.0)).re, t_range, norm)
}
