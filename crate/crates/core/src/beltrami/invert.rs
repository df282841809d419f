//! Inversion of grid-sampled homeomorphisms: bucketed nearest-node seeding
//! followed by Newton iteration on bicubically interpolated values and
//! derivatives.

use num_complex::Complex64;

use super::JacobianSign;
use crate::grid::{wirtinger_fd, BicubicSampler, ComplexGridField};
use crate::{Error, Result};

const NEWTON_MAX_STEPS: usize = 50;
const NEWTON_REL_TOL: f64 = 1e-10;
const BUCKETS: usize = 64;

/// Evaluatable inverse of a grid-sampled orientation-preserving map.
pub struct GridInverse {
    phi: ComplexGridField,
    image_lo: Complex64,
    image_hi: Complex64,
    scale: f64,
    buckets: Vec<Vec<(usize, usize)>>,
}

fn jacobian_sign_of(dz: &ComplexGridField, dzb: &ComplexGridField) -> JacobianSign {
    let mut pos = false;
    let mut neg = false;
    dz.for_each_valid(|i, j, _, a| {
        if dzb.is_valid(i, j) {
            let det = a.norm_sqr() - dzb.get(i, j).norm_sqr();
            if det > 0.0 {
                pos = true;
            } else {
                neg = true;
            }
        }
    });
    match (pos, neg) {
        (true, false) => JacobianSign::Positive,
        (false, true) => JacobianSign::Negative,
        _ => JacobianSign::Mixed,
    }
}

/// Discrete Jacobian sign of a grid map from FD Wirtinger derivatives.
pub fn grid_jacobian_sign(phi: &ComplexGridField) -> Result<JacobianSign> {
    let (dz, dzb) = wirtinger_fd(phi)?;
    Ok(jacobian_sign_of(&dz, &dzb))
}

/// Build the inverse of `phi`. Fails unless the discrete Jacobian
/// |Φ_z|² − |Φ_z̄|² is positive at every valid interior point.
pub fn invert_map(phi: &ComplexGridField) -> Result<GridInverse> {
    match grid_jacobian_sign(phi)? {
        JacobianSign::Positive => {}
        other => {
            return Err(Error::NotHomeomorphic(format!(
                "discrete Jacobian sign is {other:?}; need positive"
            )))
        }
    }

    // Image bounding box over valid nodes.
    let mut lo = Complex64::new(f64::INFINITY, f64::INFINITY);
    let mut hi = Complex64::new(f64::NEG_INFINITY, f64::NEG_INFINITY);
    phi.for_each_valid(|_, _, _, w| {
        lo = Complex64::new(lo.re.min(w.re), lo.im.min(w.im));
        hi = Complex64::new(hi.re.max(w.re), hi.im.max(w.im));
    });
    if !lo.re.is_finite() {
        return Err(Error::EmptySample);
    }
    let scale = ((hi - lo).norm()).max(1e-300);

    let mut buckets = vec![Vec::new(); BUCKETS * BUCKETS];
    let clampi = |v: f64| -> usize { (v as isize).clamp(0, BUCKETS as isize - 1) as usize };
    phi.for_each_valid(|i, j, _, w| {
        let bx = clampi(((w.re - lo.re) / (hi.re - lo.re).max(1e-300)) * BUCKETS as f64);
        let by = clampi(((w.im - lo.im) / (hi.im - lo.im).max(1e-300)) * BUCKETS as f64);
        buckets[by * BUCKETS + bx].push((i, j));
    });

    Ok(GridInverse { phi: phi.clone(), image_lo: lo, image_hi: hi, scale, buckets })
}

impl GridInverse {
    pub fn image_bounds(&self) -> (Complex64, Complex64) {
        (self.image_lo, self.image_hi)
    }

    fn nearest_seed(&self, w: Complex64) -> Option<(usize, usize)> {
        let clampi = |v: f64| -> isize { (v as isize).clamp(0, BUCKETS as isize - 1) };
        let bx = clampi(((w.re - self.image_lo.re) / (self.image_hi.re - self.image_lo.re).max(1e-300)) * BUCKETS as f64);
        let by = clampi(((w.im - self.image_lo.im) / (self.image_hi.im - self.image_lo.im).max(1e-300)) * BUCKETS as f64);
        let mut best: Option<((usize, usize), f64)> = None;
        for ring in 0..BUCKETS as isize {
            for dy in -ring..=ring {
                for dx in -ring..=ring {
                    if dx.abs() != ring && dy.abs() != ring {
                        continue; // ring boundary only
                    }
                    let (cx, cy) = (bx + dx, by + dy);
                    if cx < 0 || cy < 0 || cx >= BUCKETS as isize || cy >= BUCKETS as isize {
                        continue;
                    }
                    for &(i, j) in &self.buckets[cy as usize * BUCKETS + cx as usize] {
                        let d = (self.phi.get(i, j) - w).norm();
                        if best.map_or(true, |(_, bd)| d < bd) {
                            best = Some(((i, j), d));
                        }
                    }
                }
            }
            // one extra ring after the first hit covers diagonal neighbours
            if let Some(((_, _), d)) = best {
                if d <= (ring as f64) * self.scale / BUCKETS as f64 {
                    break;
                }
            }
        }
        best.map(|(ij, _)| ij)
    }

    /// Solve Φ(z) = w to |Φ(z) − w| ≤ 1e−10·scale.
    pub fn eval(&self, w: Complex64) -> Result<Complex64> {
        let margin = 1e-9 * self.scale;
        if w.re < self.image_lo.re - margin
            || w.re > self.image_hi.re + margin
            || w.im < self.image_lo.im - margin
            || w.im > self.image_hi.im + margin
        {
            return Err(Error::InversionFailed(format!("{w} outside image hull")));
        }
        let seed = self
            .nearest_seed(w)
            .ok_or_else(|| Error::InversionFailed("no valid seed".into()))?;
        let sampler = BicubicSampler::new(&self.phi);
        let mut z = self.phi.spec.point(seed.0, seed.1);
        let mut err = f64::INFINITY;
        for _ in 0..NEWTON_MAX_STEPS {
            let Some((v, dz, dzb)) = sampler.value_and_derivs(z) else {
                return Err(Error::InversionFailed(format!("left interpolable region at {z}")));
            };
            let e = v - w;
            err = e.norm();
            if err <= NEWTON_REL_TOL * self.scale {
                return Ok(z);
            }
            let det = dz.norm_sqr() - dzb.norm_sqr();
            if det.abs() < 1e-300 {
                return Err(Error::InversionFailed("singular derivative".into()));
            }
            // solve the real-linear system dz·δ + dzb·conj(δ) = e
            let mut step = (dz.conj() * e - dzb * e.conj()) / det;
            // dampen if overshooting
            for _ in 0..20 {
                let zn = z - step;
                match sampler.value(zn) {
                    Some(vn) if (vn - w).norm() <= err => {
                        z = zn;
                        break;
                    }
                    _ => step *= 0.5,
                }
            }
        }
        Err(Error::InversionFailed(format!(
            "Newton did not reach tolerance after {NEWTON_MAX_STEPS} steps (|err| = {err:.3e})"
        )))
    }
}
