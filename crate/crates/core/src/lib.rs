//! Toolkit for the conformal structure of autonomous divergence-form equations
//! `div A(∇u) = 0` in the plane.
//!
//! Starting from a structure field `A`, the library computes the Beltrami
//! coefficient `ν` of the complex-gradient equation, selects the elliptic root
//! `η` of the associated quadratic, builds homeomorphic solutions `Φ` of
//! `Φ_z̄ = η Φ_z` (radial ODE fast path and an FFT Neumann-series grid solver),
//! and verifies, at desk scale, every identity in the reduction chain down to
//! the hodograph-linearised equation for the inverse factor.
//!
//! Entry points:
//! - [`fields::catalog`] / [`fields::to_bold`] — structure fields and the
//!   gradient-side transform,
//! - [`conformal::ConformalData::compute`] — ν, η, γ, μ with classification,
//! - [`beltrami::solve_phi_radial`] / [`beltrami::solve_phi_grid`] — solvers,
//! - [`verify`] — residual reports for each identity,
//! - [`hodograph::factorize`] — Stoilow-style factorization `F = h ∘ g⁻¹`,
//! - [`audit`] — cross-checks of variant closed forms against the
//!   differentiation oracle.

pub mod audit;
pub mod beltrami;
pub mod cli;
pub mod conformal;
mod error;
pub mod fields;
pub mod grid;
pub mod hodograph;
pub mod solutions;
pub(crate) mod spectral;
pub mod verify;
pub(crate) mod zmath;

pub use error::{Error, Result};
pub use num_complex::Complex64;
