//! Homeomorphic solutions Φ of the linear Beltrami equation Φ_z̄ = ηΦ_z:
//! a radial-ODE fast path for rotationally symmetric coefficients, an
//! FFT Neumann-series grid solver for uniformly elliptic coefficients, and
//! closed-form solutions for the catalog fields.

pub mod closed;
mod grid_solver;
mod invert;
mod radial;

pub use closed::ClosedFormPhi;
pub use grid_solver::{solve_phi_grid, GridSolveOptions};
pub use invert::{invert_map, GridInverse};
pub use radial::{solve_phi_radial, solve_phi_radial_from_eta, validate_radial_eta, RadialNormalization};

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::grid::ComplexGridField;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PhiMethod {
    RadialOde,
    NeumannGrid,
    ClosedForm,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum JacobianSign {
    Positive,
    Negative,
    Mixed,
}

pub(crate) type MapFn = Arc<dyn Fn(Complex64) -> Option<Complex64> + Send + Sync>;

/// A constructed solution of Φ_z̄ = ηΦ_z with its inverse and diagnostics.
///
/// `residual` is the solver's reported sup of |Φ_z̄ − ηΦ_z|/(|Φ_z| + floor)
/// over its test points. `image` records where Φ actually maps the solved
/// region (solutions are not forced to be self-maps of the domain).
pub struct PhiSolution {
    pub method: PhiMethod,
    pub residual: f64,
    pub jacobian_sign: JacobianSign,
    pub iterations: usize,
    pub sup_coefficient: f64,
    /// Neumann truncation estimate 10·k^m/(1−k); grid method only.
    pub truncation_bound: Option<f64>,
    /// Φ sampled on the input nodes; grid method only.
    pub phi_grid: Option<ComplexGridField>,
    pub image: String,
    pub(crate) forward: MapFn,
    pub(crate) inverse: MapFn,
}

impl PhiSolution {
    /// Evaluate Φ(z); `None` outside the solved region.
    pub fn forward(&self, z: Complex64) -> Option<Complex64> {
        (self.forward)(z)
    }

    /// Evaluate Φ⁻¹(w); `None` outside the image or on inversion failure.
    pub fn inverse(&self, w: Complex64) -> Option<Complex64> {
        (self.inverse)(w)
    }

    /// Machine-readable solve manifest.
    pub fn manifest(&self) -> serde_json::Value {
        serde_json::json!({
            "method": self.method,
            "residual": self.residual,
            "jacobian_sign": self.jacobian_sign,
            "iterations": self.iterations,
            "sup_coefficient": self.sup_coefficient,
            "truncation_bound": self.truncation_bound,
            "image": self.image,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn manifest_round_trips_through_json() {
        let sol = PhiSolution {
            method: PhiMethod::ClosedForm,
            residual: 1e-12,
            jacobian_sign: JacobianSign::Positive,
            iterations: 0,
            sup_coefficient: 0.3,
            truncation_bound: None,
            phi_grid: None,
            image: "unit disk".into(),
            forward: Arc::new(Some),
            inverse: Arc::new(Some),
        };
        let m = sol.manifest();
        assert_eq!(m["method"], "closed_form");
        assert_eq!(m["jacobian_sign"], "positive");
    }
}
