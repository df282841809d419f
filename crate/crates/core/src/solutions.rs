//! Exact and classical reference solutions u of the catalog equations, with
//! analytic gradients, used to drive the residual verification pipelines.

use std::sync::Arc;

use num_complex::Complex64;
use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::grid::{ComplexGridField, GridSpec, Region};
use crate::{Error, Result};

type ScalarFn = Arc<dyn Fn(Complex64) -> f64 + Send + Sync>;
type GradFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;

/// A scalar solution with analytic gradient ∇u packed as u_x + i·u_y.
#[derive(Clone)]
pub struct ReferenceSolution {
    pub equation_id: String,
    pub name: String,
    pub region: Region,
    pub notes: String,
    u: ScalarFn,
    grad: GradFn,
}

impl ReferenceSolution {
    pub fn u(&self, z: Complex64) -> f64 {
        (self.u)(z)
    }

    /// ∇u as u_x + i·u_y.
    pub fn grad(&self, z: Complex64) -> Complex64 {
        (self.grad)(z)
    }

    /// Complex gradient u_z = (u_x − i·u_y)/2.
    pub fn u_z(&self, z: Complex64) -> Complex64 {
        0.5 * self.grad(z).conj()
    }

    /// u sampled on a grid, masked to the solution's valid region.
    pub fn sample_u(&self, spec: &GridSpec) -> ComplexGridField {
        ComplexGridField::sample_real_region(*spec, &self.region, |z| self.u(z))
    }

    /// u_z sampled on a grid, masked to the solution's valid region.
    pub fn sample_u_z(&self, spec: &GridSpec) -> ComplexGridField {
        ComplexGridField::sample_region(*spec, &self.region, |z| self.u_z(z))
    }

    /// Max deviation between the analytic gradient and central differences of
    /// u at seeded random interior points.
    pub fn gradient_consistency(&self, n_points: usize, seed: u64) -> f64 {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (lo, hi) = match self.region {
            Region::Rect { x0, x1, y0, y1 } => (Complex64::new(x0, y0), Complex64::new(x1, y1)),
            Region::Disk { radius } => (Complex64::new(-radius, -radius), Complex64::new(radius, radius)),
            Region::Annulus { outer, .. } => (Complex64::new(-outer, -outer), Complex64::new(outer, outer)),
        };
        let h = 1e-6 * (hi - lo).norm().max(1.0);
        let mut worst = 0.0f64;
        let mut tried = 0usize;
        while tried < n_points {
            let z = Complex64::new(
                lo.re + (hi.re - lo.re) * rng.random::<f64>(),
                lo.im + (hi.im - lo.im) * rng.random::<f64>(),
            );
            tried += 1;
            // stay inside the valid region with slack for the stencil
            let inside = |q: Complex64| self.region.contains(q);
            if !(inside(z + 2.0 * h) && inside(z - 2.0 * h)
                && inside(z + Complex64::new(0.0, 2.0 * h))
                && inside(z - Complex64::new(0.0, 2.0 * h)))
            {
                continue;
            }
            let i = Complex64::new(0.0, 1.0);
            let ux = (self.u(z + h) - self.u(z - h)) / (2.0 * h);
            let uy = (self.u(z + i * h) - self.u(z - i * h)) / (2.0 * h);
            worst = worst.max((Complex64::new(ux, uy) - self.grad(z)).norm());
        }
        worst
    }
}

fn param(params: &[(String, f64)], key: &str) -> Option<f64> {
    params.iter().find(|(k, _)| k == key).map(|&(_, v)| v)
}

/// Look up a reference solution.
///
/// Pairs: (`minimal_surface`, `scherk`); (`p_laplacian`, `radial`) with
/// p ≠ 2; (`p_laplacian`, `harmonic`); (any id, `linear`) with optional
/// gradient components a_re/a_im.
pub fn reference(equation_id: &str, name: &str, params: &[(String, f64)]) -> Result<ReferenceSolution> {
    match (equation_id, name) {
        (_, "linear") => {
            let default = default_linear_gradient(equation_id);
            let a = Complex64::new(
                param(params, "a_re").unwrap_or(default.re),
                param(params, "a_im").unwrap_or(default.im),
            );
            if equation_id == "maximal_spacelike" && a.norm() >= 1.0 {
                return Err(Error::InvalidParam(format!(
                    "spacelike gradients must satisfy |a| < 1, got |a| = {}",
                    a.norm()
                )));
            }
            Ok(ReferenceSolution {
                equation_id: equation_id.into(),
                name: "linear".into(),
                region: Region::square(-1.0, 1.0),
                notes: format!("u = Re(ā z) with a = {a}; solves every autonomous equation"),
                u: Arc::new(move |z| a.re * z.re + a.im * z.im),
                grad: Arc::new(move |_| a),
            })
        }
        ("minimal_surface", "scherk") => Ok(ReferenceSolution {
            equation_id: "minimal_surface".into(),
            name: "scherk".into(),
            region: Region::square(-1.2, 1.2),
            notes: "u = log(cos x / cos y), valid for |x|, |y| < pi/2".into(),
            u: Arc::new(|z| (z.re.cos() / z.im.cos()).ln()),
            grad: Arc::new(|z| Complex64::new(-z.re.tan(), z.im.tan())),
        }),
        ("p_laplacian", "radial") => {
            let p = param(params, "p").ok_or_else(|| Error::InvalidParam("missing parameter p".into()))?;
            if !(p > 1.0) {
                return Err(Error::InvalidParam(format!("p must exceed 1, got {p}")));
            }
            if (p - 2.0).abs() < 1e-12 {
                return Err(Error::InvalidParam(
                    "the radial profile degenerates at p = 2; use `harmonic`".into(),
                ));
            }
            let kappa = (p - 2.0) / (p - 1.0);
            Ok(ReferenceSolution {
                equation_id: "p_laplacian".into(),
                name: "radial".into(),
                region: Region::Annulus { inner: 0.5, outer: 1.0 },
                notes: format!("u = |z|^kappa with kappa = (p-2)/(p-1) = {kappa}; valid away from 0"),
                u: Arc::new(move |z| z.norm().powf(kappa)),
                grad: Arc::new(move |z| {
                    let r = z.norm();
                    kappa * r.powf(kappa - 2.0) * z
                }),
            })
        }
        ("p_laplacian", "harmonic") => {
            if let Some(p) = param(params, "p") {
                if (p - 2.0).abs() > 1e-12 {
                    return Err(Error::InvalidParam(format!(
                        "u = x^2 - y^2 solves the p-harmonic equation only at p = 2, got p = {p}"
                    )));
                }
            }
            Ok(ReferenceSolution {
                equation_id: "p_laplacian".into(),
                name: "harmonic".into(),
                region: Region::square(-1.0, 1.0),
                notes: "u = x^2 - y^2".into(),
                u: Arc::new(|z| z.re * z.re - z.im * z.im),
                grad: Arc::new(|z| Complex64::new(2.0 * z.re, -2.0 * z.im)),
            })
        }
        _ => Err(Error::UnknownSolution(equation_id.into(), name.into())),
    }
}

/// Default linear-solution gradients keeping ∇u in the admissible set:
/// |a| < 1 for the spacelike equation, u_z in the first quadrant for the
/// orthotropic one.
fn default_linear_gradient(equation_id: &str) -> Complex64 {
    match equation_id {
        "maximal_spacelike" => Complex64::new(0.6, 0.0),
        "p_orthotropic" => Complex64::new(1.0, -1.0), // u_z = (1 + i)/2
        _ => Complex64::new(1.0, 2.0),
    }
}
