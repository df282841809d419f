//! Desk-scale Stoilow-style factorization: given F solving the quasilinear
//! equation with known pointwise coefficient, build a homeomorphic solution
//! χ of the same linear equation, set g = χ⁻¹ and h = F∘g, and verify that h
//! is holomorphic and that g solves the hodograph-linearised equation.
//!
//! The factor h is unique only up to conformal reparametrization, so all
//! acceptance goes through residuals, never pointwise comparison of factors.

use num_complex::Complex64;

use crate::beltrami::{invert_map, solve_phi_grid, GridSolveOptions};
use crate::grid::{wirtinger_fd, BicubicSampler, ComplexGridField, GridSpec};
use crate::verify::{residual_hodograph, ResidualReport, REL_FLOOR};
use crate::{Error, Result};

#[derive(Clone, Copy, Debug)]
pub struct FactorizeOptions {
    pub solver: GridSolveOptions,
    /// Fraction of the χ-image bounding box trimmed from each side before
    /// sampling h (keeps the h grid away from inversion-failure fringes).
    pub image_margin: f64,
    /// Points per axis of the h grid; 0 reuses the F grid resolution.
    pub image_n: usize,
    /// Factorizations with holomorphy residual above this are flagged failed.
    pub failure_threshold: f64,
}

impl Default for FactorizeOptions {
    fn default() -> Self {
        FactorizeOptions {
            solver: GridSolveOptions::default(),
            image_margin: 0.1,
            image_n: 0,
            failure_threshold: 0.05,
        }
    }
}

/// The factorization F = h ∘ g⁻¹ with its certificates.
pub struct Factorization {
    /// Homeomorphic solution χ of χ_z̄ = coeff(z)·χ_z on F's grid.
    pub chi: ComplexGridField,
    /// g = χ⁻¹ sampled on the image grid.
    pub g: ComplexGridField,
    /// Candidate holomorphic factor h = F∘g sampled on the image grid.
    pub h: ComplexGridField,
    /// rel sup of |h_z̄| over sup |h_z|.
    pub holomorphy_residual: f64,
    /// Residual of g's linear equation (coefficient evaluated through g).
    pub linear_residual: ResidualReport,
    /// sup |h(χ(z)) − F(z)| over interior sample points.
    pub composition_error: f64,
    pub failed: bool,
    pub image_spec: GridSpec,
}

/// Factorize F given the pointwise coefficient z ↦ coeff(z) of the linear
/// equation its solutions share (|coeff| ≤ k < 1 required on F's grid).
pub fn factorize<C>(f: &ComplexGridField, coeff: C, opts: &FactorizeOptions) -> Result<Factorization>
where
    C: Fn(Complex64) -> Complex64,
{
    let spec = f.spec;
    let coeff_grid = ComplexGridField::sample_masked(spec, &coeff, |z| {
        // coefficient only matters where F is known
        let i = ((z.re - spec.x_min) / spec.hx()).round() as usize;
        let j = ((z.im - spec.y_min) / spec.hy()).round() as usize;
        i < spec.nx && j < spec.ny && f.is_valid(i, j)
    });

    let chi_sol = solve_phi_grid(&coeff_grid, &opts.solver)?;
    let chi = chi_sol.phi_grid.clone().ok_or_else(|| {
        Error::FactorizationFailed("grid solver returned no sampled solution".into())
    })?;
    let inverse = invert_map(&chi)?;

    // Image grid: bounding box of χ over F-valid nodes, trimmed by the margin.
    let (lo, hi) = inverse.image_bounds();
    let mx = opts.image_margin * (hi.re - lo.re);
    let my = opts.image_margin * (hi.im - lo.im);
    let n = if opts.image_n == 0 { spec.nx.max(spec.ny) } else { opts.image_n };
    let image_spec = GridSpec::new(lo.re + mx, hi.re - mx, lo.im + my, hi.im - my, n, n)?;

    let f_sampler = BicubicSampler::new(f);
    let mut g = ComplexGridField::zeros(image_spec);
    let mut h = ComplexGridField::zeros(image_spec);
    for j in 0..image_spec.ny {
        for i in 0..image_spec.nx {
            let w = image_spec.point(i, j);
            match inverse.eval(w) {
                Ok(z) => {
                    g.set(i, j, z, true);
                    match f_sampler.value(z) {
                        Some(v) => h.set(i, j, v, true),
                        None => h.set(i, j, Complex64::new(0.0, 0.0), false),
                    }
                }
                Err(_) => {
                    g.set(i, j, Complex64::new(0.0, 0.0), false);
                    h.set(i, j, Complex64::new(0.0, 0.0), false);
                }
            }
        }
    }
    if h.valid_count() == 0 {
        return Err(Error::FactorizationFailed("image grid missed the factor domain entirely".into()));
    }

    let (hz, hzb) = wirtinger_fd(&h)?;
    let mut sup_hz = 0.0f64;
    let mut sup_hzb = 0.0f64;
    for j in 0..image_spec.ny {
        for i in 0..image_spec.nx {
            if hz.is_valid(i, j) && hzb.is_valid(i, j) {
                sup_hz = sup_hz.max(hz.get(i, j).norm());
                sup_hzb = sup_hzb.max(hzb.get(i, j).norm());
            }
        }
    }
    let holomorphy_residual = sup_hzb / (sup_hz + REL_FLOOR);

    // g solves g_w̄ = −m(h(w))·conj(g_w) with the value coefficient m; since
    // m(h(w)) = coeff(g(w)), the z-space closure evaluates it directly.
    let g_for_coeff = g.clone();
    let linear_residual = residual_hodograph(&g, |w| w, |w| {
        let s = BicubicSampler::new(&g_for_coeff);
        match s.value(w) {
            Some(z) => coeff(z),
            None => Complex64::new(f64::NAN, 0.0),
        }
    })?;

    // composition check |h(χ(z)) − F(z)| on interior nodes
    let h_sampler = BicubicSampler::new(&h);
    let mut composition_error = 0.0f64;
    f.for_each_valid(|i, j, _, fv| {
        if chi.is_valid(i, j) {
            if let Some(hv) = h_sampler.value(chi.get(i, j)) {
                composition_error = composition_error.max((hv - fv).norm());
            }
        }
    });

    let failed = holomorphy_residual > opts.failure_threshold;
    Ok(Factorization {
        chi,
        g,
        h,
        holomorphy_residual,
        linear_residual,
        composition_error,
        failed,
        image_spec,
    })
}
