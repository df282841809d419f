//! Closed-form solutions Φ of Φ_z̄ = ηΦ_z for the catalog coefficients,
//! with exact Wirtinger derivatives, inverses and the matching η.

use std::sync::Arc;

use num_complex::Complex64;

use super::{JacobianSign, MapFn, PhiMethod, PhiSolution};
use crate::zmath::{phase_sq, radial_stretch_derivs, unit_phase, ZERO};

type DerivFn = Arc<dyn Fn(Complex64) -> (Complex64, Complex64) + Send + Sync>;
type EtaFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A closed-form homeomorphism with derivatives, inverse and coefficient.
#[derive(Clone)]
pub struct ClosedFormPhi {
    pub id: &'static str,
    forward: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    inverse: Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>,
    derivs: DerivFn,
    eta: EtaFn,
}

impl ClosedFormPhi {
    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.forward)(z)
    }

    pub fn inverse(&self, w: Complex64) -> Complex64 {
        (self.inverse)(w)
    }

    /// (Φ_w, Φ_w̄) at z.
    pub fn wirtinger(&self, z: Complex64) -> (Complex64, Complex64) {
        (self.derivs)(z)
    }

    /// The coefficient η this map solves for.
    pub fn eta(&self, z: Complex64) -> Complex64 {
        (self.eta)(z)
    }

    pub fn eta_fn(&self) -> EtaFn {
        self.eta.clone()
    }

    pub fn to_solution(&self, image: &str, sup_coefficient: f64) -> PhiSolution {
        let f = self.forward.clone();
        let g = self.inverse.clone();
        let fwd: MapFn = Arc::new(move |z| {
            let v = f(z);
            (v.re.is_finite() && v.im.is_finite()).then_some(v)
        });
        let inv: MapFn = Arc::new(move |w| {
            let v = g(w);
            (v.re.is_finite() && v.im.is_finite()).then_some(v)
        });
        PhiSolution {
            method: PhiMethod::ClosedForm,
            residual: 0.0,
            jacobian_sign: JacobianSign::Positive,
            iterations: 0,
            sup_coefficient,
            truncation_bound: None,
            phi_grid: None,
            image: image.into(),
            forward: fwd,
            inverse: inv,
        }
    }
}

/// Power stretching |z|^{δ−1}·z, the solution attached to the p-Laplacian
/// via δ = √(p−1); constant radial coefficient η = (δ−1)/(δ+1)·z/z̄.
pub fn phi_power_stretch(delta: f64) -> ClosedFormPhi {
    let fwd = move |z: Complex64| {
        let t = z.norm();
        if t == 0.0 {
            ZERO
        } else {
            t.powf(delta - 1.0) * z
        }
    };
    let inv = move |w: Complex64| {
        let m = w.norm();
        if m == 0.0 {
            ZERO
        } else {
            m.powf(1.0 / delta - 1.0) * w
        }
    };
    let derivs = move |z: Complex64| {
        let t = z.norm();
        if t == 0.0 {
            return (Complex64::new(f64::NAN, 0.0), Complex64::new(f64::NAN, 0.0));
        }
        let m = t.powf(delta - 1.0);
        (
            Complex64::new(0.5 * m * (delta + 1.0), 0.0),
            phase_sq(z) * (0.5 * m * (delta - 1.0)),
        )
    };
    let gamma0 = (delta - 1.0) / (delta + 1.0);
    let eta = move |z: Complex64| phase_sq(z) * gamma0;
    ClosedFormPhi {
        id: "power_stretch",
        forward: Arc::new(fwd),
        inverse: Arc::new(inv),
        derivs: Arc::new(derivs),
        eta: Arc::new(eta),
    }
}

/// Radial coefficient profile γ₀ of the minimal-surface map, in the
/// cancellation-free form −2t²/(1 + 2t² + √(1+4t²)).
pub fn minimal_surface_gamma0(t: f64) -> f64 {
    let t2 = t * t;
    -2.0 * t2 / (1.0 + 2.0 * t2 + (1.0 + 4.0 * t2).sqrt())
}

/// Φ(z) = 2z/(1 + √(1+4|z|²)): ℂ → unit disk, with inverse w/(1−|w|²).
pub fn phi_minimal_surface() -> ClosedFormPhi {
    let fwd = |z: Complex64| 2.0 * z / (1.0 + (1.0 + 4.0 * z.norm_sqr()).sqrt());
    let inv = |w: Complex64| w / (1.0 - w.norm_sqr());
    let derivs = |z: Complex64| {
        let t = z.norm();
        if t == 0.0 {
            return (Complex64::new(1.0, 0.0), ZERO);
        }
        let s = (1.0 + 4.0 * t * t).sqrt();
        let rho = 2.0 * t / (1.0 + s);
        let rho_dot = 2.0 / ((1.0 + s) * s); // from ρ̇/ρ = 1/(t·s)
        radial_stretch_derivs(z, rho, rho_dot)
    };
    let eta = |z: Complex64| phase_sq(z) * minimal_surface_gamma0(z.norm());
    ClosedFormPhi {
        id: "minimal_surface",
        forward: Arc::new(fwd),
        inverse: Arc::new(inv),
        derivs: Arc::new(derivs),
        eta: Arc::new(eta),
    }
}

/// Radial coefficient profile γ₀ of the spacelike map on t < ½, in the
/// cancellation-free form 2t²/(1 − 2t² + √(1−4t²)).
pub fn maximal_spacelike_gamma0(t: f64) -> f64 {
    let t2 = t * t;
    2.0 * t2 / (1.0 - 2.0 * t2 + (1.0 - 4.0 * t2).sqrt())
}

/// Increasing radial solution for the spacelike coefficient, normalized as a
/// self-map of the half disk: Φ(z) = (1 − √(1−4|z|²))/(4|z|)·z/|z|.
///
/// Obtained by integrating ρ̇/ρ = 1/(t√(1−4t²)); the inverse radius profile
/// is ρ⁻¹(m) = 2m/(1+4m²).
pub fn phi_maximal_spacelike() -> ClosedFormPhi {
    let rho = |t: f64| {
        if t == 0.0 {
            0.0
        } else {
            (1.0 - (1.0 - 4.0 * t * t).sqrt()) / (4.0 * t)
        }
    };
    let fwd = move |z: Complex64| {
        let t = z.norm();
        if t == 0.0 {
            ZERO
        } else {
            unit_phase(z) * rho(t)
        }
    };
    let inv = |w: Complex64| {
        let m = w.norm();
        if m == 0.0 {
            ZERO
        } else {
            unit_phase(w) * (2.0 * m / (1.0 + 4.0 * m * m))
        }
    };
    let derivs = move |z: Complex64| {
        let t = z.norm();
        if t == 0.0 {
            return (Complex64::new(0.5, 0.0), ZERO);
        }
        let s = (1.0 - 4.0 * t * t).sqrt();
        let r = rho(t);
        let rho_dot = r / (t * s); // ρ̇/ρ = 1/(t·s)
        radial_stretch_derivs(z, r, rho_dot)
    };
    let eta = |z: Complex64| phase_sq(z) * maximal_spacelike_gamma0(z.norm());
    ClosedFormPhi {
        id: "maximal_spacelike",
        forward: Arc::new(fwd),
        inverse: Arc::new(inv),
        derivs: Arc::new(derivs),
        eta: Arc::new(eta),
    }
}
