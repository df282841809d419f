//! Structure fields A: N → ℂ, the gradient-side transform
//! **A**(ξ) = conj(A(2·conj ξ)), and δ-monotonicity audits.

mod catalog;

pub use catalog::catalog;

use std::sync::Arc;

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::grid::GridSpec;
use crate::{Error, Result};

pub type EvalFn = Arc<dyn Fn(Complex64) -> Complex64 + Send + Sync>;
pub type WirtingerFn = Arc<dyn Fn(Complex64) -> (Complex64, Complex64) + Send + Sync>;

/// Admissible gradient domain N associated with a structure field.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub enum DomainN {
    Plane,
    Disk { radius: f64 },
    QuadrantOne,
    Annulus { inner: f64, outer: f64 },
}

impl DomainN {
    pub fn contains(&self, z: Complex64) -> bool {
        match *self {
            DomainN::Plane => true,
            DomainN::Disk { radius } => z.norm() < radius,
            DomainN::QuadrantOne => z.re > 0.0 && z.im > 0.0,
            DomainN::Annulus { inner, outer } => {
                let r = z.norm();
                r > inner && r < outer
            }
        }
    }

    pub fn describe(&self) -> String {
        match *self {
            DomainN::Plane => "all of C".into(),
            DomainN::Disk { radius } => format!("open disk |z| < {radius}"),
            DomainN::QuadrantOne => "open first quadrant".into(),
            DomainN::Annulus { inner, outer } => format!("open annulus {inner} < |z| < {outer}"),
        }
    }

    /// Image of the domain under ξ ↦ conj(ξ)/2, which is how the gradient
    /// domain transports through the bold transform. The quadrant is kept
    /// fixed: the only quadrant-domain field in the catalog commutes with
    /// conjugation, so the first quadrant stays the canonical component.
    fn half_conj(&self) -> DomainN {
        match *self {
            DomainN::Plane => DomainN::Plane,
            DomainN::Disk { radius } => DomainN::Disk { radius: radius / 2.0 },
            DomainN::QuadrantOne => DomainN::QuadrantOne,
            DomainN::Annulus { inner, outer } => DomainN::Annulus { inner: inner / 2.0, outer: outer / 2.0 },
        }
    }
}

/// Evaluatable map A: N → ℂ with optional closed-form Wirtinger derivatives.
///
/// Evaluation outside the field's natural domain returns non-finite values,
/// which downstream grid sampling masks out.
#[derive(Clone)]
pub struct StructureField {
    pub id: String,
    pub params: Vec<(String, f64)>,
    pub domain: DomainN,
    eval: EvalFn,
    wirtinger: Option<WirtingerFn>,
}

impl StructureField {
    pub fn new_custom(
        id: impl Into<String>,
        params: Vec<(String, f64)>,
        domain: DomainN,
        eval: EvalFn,
        wirtinger: Option<WirtingerFn>,
    ) -> Self {
        StructureField { id: id.into(), params, domain, eval, wirtinger }
    }

    pub fn eval(&self, z: Complex64) -> Complex64 {
        (self.eval)(z)
    }

    pub fn has_analytic_derivatives(&self) -> bool {
        self.wirtinger.is_some()
    }

    pub fn param(&self, name: &str) -> Option<f64> {
        self.params.iter().find(|(k, _)| k == name).map(|&(_, v)| v)
    }

    /// Wirtinger derivatives (A_z, A_z̄); analytic when available, otherwise
    /// central finite differences with a default step.
    pub fn wirtinger(&self, z: Complex64) -> (Complex64, Complex64) {
        match &self.wirtinger {
            Some(w) => w(z),
            None => self.wirtinger_fd(z, 1e-6 * (1.0 + z.norm())),
        }
    }

    /// Central-difference Wirtinger derivatives with an explicit step.
    pub fn wirtinger_fd(&self, z: Complex64, h: f64) -> (Complex64, Complex64) {
        let i = Complex64::new(0.0, 1.0);
        let ax = (self.eval(z + h) - self.eval(z - h)) / (2.0 * h);
        let ay = (self.eval(z + i * h) - self.eval(z - i * h)) / (2.0 * h);
        (0.5 * (ax - i * ay), 0.5 * (ax + i * ay))
    }
}

/// Transform A ↦ **A** with **A**(ξ) = conj(A(2·conj ξ)).
///
/// Chain rule on ξ ↦ 2·conj ξ followed by conjugation gives
/// **A**_z(z) = 2·conj(A_w(2z̄)) and **A**_z̄(z) = 2·conj(A_w̄(2z̄)); the
/// factor 2 on both slots is cross-checked against the finite-difference
/// oracle in the tests.
pub fn to_bold(a: &StructureField) -> StructureField {
    let eval = a.eval.clone();
    let bold_eval: EvalFn = Arc::new(move |z: Complex64| eval(2.0 * z.conj()).conj());
    let bold_wirt: Option<WirtingerFn> = a.wirtinger.clone().map(|w| {
        let f: WirtingerFn = Arc::new(move |z: Complex64| {
            let (aw, awb) = w(2.0 * z.conj());
            (2.0 * aw.conj(), 2.0 * awb.conj())
        });
        f
    });
    StructureField {
        id: format!("bold_{}", a.id),
        params: a.params.clone(),
        domain: a.domain.half_conj(),
        eval: bold_eval,
        wirtinger: bold_wirt,
    }
}

/// Largest deviation between analytic and finite-difference Wirtinger
/// derivatives at seeded random points of the sample region.
pub struct DerivativeConsistency {
    pub max_abs_dev: f64,
    pub points_checked: usize,
    pub step: f64,
}

/// Self-consistency audit of a field's closed-form derivatives against the
/// FD oracle. Points where either evaluation is non-finite are skipped.
pub fn derivative_consistency(
    field: &StructureField,
    sample: impl Fn(&mut ChaCha8Rng) -> Complex64,
    n_points: usize,
    step: f64,
    seed: u64,
) -> DerivativeConsistency {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut max_abs_dev = 0.0f64;
    let mut checked = 0usize;
    while checked < n_points {
        let z = sample(&mut rng);
        let (az, azb) = field.wirtinger(z);
        let (fz, fzb) = field.wirtinger_fd(z, step);
        let vals = [az, azb, fz, fzb];
        if vals.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
            checked += 1; // counted, but nothing to compare
            continue;
        }
        max_abs_dev = max_abs_dev.max((az - fz).norm()).max((azb - fzb).norm());
        checked += 1;
    }
    DerivativeConsistency { max_abs_dev, points_checked: checked, step }
}

/// Result of a sampled δ-monotonicity audit. `delta_max` is a per-sample
/// infimum — an estimate over the sampled points, not a proof.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct MonotonicityReport {
    pub delta_max: f64,
    /// Distortion bound (1+√(1−δ²))/(1−√(1−δ²)) at δ = delta_max; `None`
    /// when delta_max = 0 (unbounded distortion).
    pub k_distortion: Option<f64>,
    pub requested_delta: Option<f64>,
    pub passed: Option<bool>,
    pub violation_count: usize,
    pub violation_points: Vec<[f64; 2]>,
    pub sample_spec: GridSpec,
    pub points_checked: usize,
    pub points_skipped: usize,
}

pub fn distortion_from_delta(delta: f64) -> Option<f64> {
    if delta <= 0.0 {
        return None;
    }
    let s = (1.0 - delta * delta).max(0.0).sqrt();
    Some((1.0 + s) / (1.0 - s))
}

const DELTA_TOL: f64 = 1e-6;
const MAX_VIOLATIONS_KEPT: usize = 1000;

/// Pointwise δ-monotonicity criterion |A_z̄| + δ|Im A_z| ≤ √(1−δ²)·Re A_z.
fn dm_holds(az: Complex64, azb: Complex64, delta: f64) -> bool {
    azb.norm() + delta * az.im.abs() <= (1.0 - delta * delta).max(0.0).sqrt() * az.re
}

/// Audit δ-monotonicity of `field` over the nodes of `sample`.
///
/// With `delta` supplied the report carries pass/fail and the violating
/// points; otherwise delta_max is located by bisection (the criterion is
/// monotone in δ: the left side grows while the right side shrinks).
pub fn monotonicity_audit(
    field: &StructureField,
    sample: &GridSpec,
    delta: Option<f64>,
) -> Result<MonotonicityReport> {
    monotonicity_audit_region(field, sample, None, delta)
}

/// [`monotonicity_audit`] restricted to the sample nodes inside `region`.
pub fn monotonicity_audit_region(
    field: &StructureField,
    sample: &GridSpec,
    region: Option<&crate::grid::Region>,
    delta: Option<f64>,
) -> Result<MonotonicityReport> {
    if let Some(d) = delta {
        if !(0.0 < d && d <= 1.0) {
            return Err(Error::InvalidParam(format!("delta must lie in (0, 1], got {d}")));
        }
    }
    let mut derivs: Vec<(Complex64, Complex64, Complex64)> = Vec::new();
    let mut skipped = 0usize;
    for j in 0..sample.ny {
        for i in 0..sample.nx {
            let z = sample.point(i, j);
            if let Some(r) = region {
                if !r.contains(z) {
                    continue;
                }
            }
            let (az, azb) = field.wirtinger(z);
            if az.re.is_finite() && az.im.is_finite() && azb.re.is_finite() && azb.im.is_finite() {
                derivs.push((z, az, azb));
            } else {
                skipped += 1;
            }
        }
    }
    if derivs.is_empty() {
        return Err(Error::EmptySample);
    }

    let all_hold = |d: f64| derivs.iter().all(|&(_, az, azb)| dm_holds(az, azb, d));

    let delta_max = if all_hold(1.0) {
        1.0
    } else if !all_hold(DELTA_TOL) {
        0.0
    } else {
        let (mut lo, mut hi) = (DELTA_TOL, 1.0);
        while hi - lo > DELTA_TOL {
            let mid = 0.5 * (lo + hi);
            if all_hold(mid) {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    };

    // Witness points: at the requested δ, or at the tolerance level when the
    // field is nowhere δ-monotone.
    let witness_delta = delta.unwrap_or(if delta_max == 0.0 { DELTA_TOL } else { f64::NAN });
    let mut violation_points = Vec::new();
    let mut violation_count = 0usize;
    if witness_delta.is_finite() {
        for &(z, az, azb) in &derivs {
            if !dm_holds(az, azb, witness_delta) {
                violation_count += 1;
                if violation_points.len() < MAX_VIOLATIONS_KEPT {
                    violation_points.push([z.re, z.im]);
                }
            }
        }
    }

    Ok(MonotonicityReport {
        delta_max,
        k_distortion: distortion_from_delta(delta_max),
        requested_delta: delta,
        passed: delta.map(|_| violation_count == 0),
        violation_count,
        violation_points,
        sample_spec: *sample,
        points_checked: derivs.len(),
        points_skipped: skipped,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::Rng;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn p2_laplacian_is_identity() {
        let f = catalog("p_laplacian", &[("p".into(), 2.0)]).unwrap();
        let z = c(0.3, -0.7);
        assert!((f.eval(z) - z).norm() < 1e-15);
    }

    #[test]
    fn minimal_surface_value() {
        let f = catalog("minimal_surface", &[]).unwrap();
        let xi = c(3.0, 4.0);
        let expect = xi / 26.0f64.sqrt();
        assert!((f.eval(xi) - expect).norm() < 1e-14);
    }

    #[test]
    fn maximal_spacelike_value() {
        let f = catalog("maximal_spacelike", &[]).unwrap();
        assert!((f.eval(c(0.6, 0.0)) - c(0.75, 0.0)).norm() < 1e-14);
        // outside the unit disk the field is undefined
        let v = f.eval(c(1.5, 0.0));
        assert!(!v.re.is_finite() || !v.im.is_finite());
    }

    #[test]
    fn catalog_rejects_bad_input() {
        assert!(matches!(catalog("nope", &[]), Err(Error::UnknownField(_))));
        assert!(catalog("p_laplacian", &[("p".into(), 1.0)]).is_err());
        assert!(catalog("p_orthotropic", &[("p".into(), 0.5)]).is_err());
    }

    #[test]
    fn bold_of_identity_doubles() {
        let f = catalog("identity", &[]).unwrap();
        let b = to_bold(&f);
        let z = c(0.4, 0.9);
        assert!((b.eval(z) - 2.0 * z).norm() < 1e-15);
        // double transform: bold of the 2z field is 4z
        let bb = to_bold(&b);
        assert!((bb.eval(z) - 4.0 * z).norm() < 1e-15);
    }

    #[test]
    fn bold_minimal_surface_value() {
        let b = to_bold(&catalog("minimal_surface", &[]).unwrap());
        let v = b.eval(c(0.5, 0.0));
        assert!((v.re - 1.0 / 2.0f64.sqrt()).abs() < 1e-12, "got {v}");
        assert!(v.im.abs() < 1e-15);
    }

    #[test]
    fn bold_maximal_spacelike_value_and_domain() {
        let b = to_bold(&catalog("maximal_spacelike", &[]).unwrap());
        let v = b.eval(c(0.25, 0.0));
        assert!((v.re - 0.5 / 0.75f64.sqrt()).abs() < 1e-12, "got {v}");
        assert_eq!(b.domain, DomainN::Disk { radius: 0.5 });
    }

    #[test]
    fn catalog_derivatives_match_fd_oracle() {
        // 200 random points of (a safe part of) each field's domain.
        let cases: Vec<(&str, Vec<(String, f64)>, Box<dyn Fn(&mut ChaCha8Rng) -> Complex64>)> = vec![
            (
                "p_laplacian",
                vec![("p".to_string(), 4.0)],
                Box::new(|rng| {
                    let r = 0.2 + 1.3 * rng.random::<f64>();
                    let th = std::f64::consts::TAU * rng.random::<f64>();
                    Complex64::from_polar(r, th)
                }),
            ),
            (
                "p_laplacian",
                vec![("p".to_string(), 1.5)],
                Box::new(|rng| {
                    let r = 0.2 + 1.3 * rng.random::<f64>();
                    let th = std::f64::consts::TAU * rng.random::<f64>();
                    Complex64::from_polar(r, th)
                }),
            ),
            (
                "minimal_surface",
                vec![],
                Box::new(|rng| Complex64::new(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0)),
            ),
            (
                "maximal_spacelike",
                vec![],
                // stay away from the rim where third derivatives blow up and
                // the FD oracle itself loses accuracy
                Box::new(|rng| {
                    let r = 0.7 * rng.random::<f64>();
                    let th = std::f64::consts::TAU * rng.random::<f64>();
                    Complex64::from_polar(r, th)
                }),
            ),
            (
                "p_orthotropic",
                vec![("p".to_string(), 4.0)],
                // keep away from the axes where the field is merely C^1
                Box::new(|rng| Complex64::new(0.1 + 1.4 * rng.random::<f64>(), 0.1 + 1.4 * rng.random::<f64>())),
            ),
            (
                "identity",
                vec![],
                Box::new(|rng| Complex64::new(4.0 * rng.random::<f64>() - 2.0, 4.0 * rng.random::<f64>() - 2.0)),
            ),
        ];
        for (id, params, sampler) in cases {
            let f = catalog(id, &params).unwrap();
            let rep = derivative_consistency(&f, sampler.as_ref(), 200, 1e-4, 7);
            assert!(rep.max_abs_dev <= 1e-6, "{id}: dev {}", rep.max_abs_dev);
            // the same constants must survive the bold transform
            let b = to_bold(&f);
            let half_sampler = |rng: &mut ChaCha8Rng| sampler(rng).conj() / 2.0;
            let rep_b = derivative_consistency(&b, half_sampler, 200, 1e-4, 8);
            assert!(rep_b.max_abs_dev <= 1e-6, "bold {id}: dev {}", rep_b.max_abs_dev);
        }
    }

    #[test]
    fn p_laplacian_delta_max_closed_form() {
        // For the radial field the criterion reduces to |p−2|/p ≤ √(1−δ²),
        // so δ_max = 2√(p−1)/p; p = 4 gives √3/2.
        let f = catalog("p_laplacian", &[("p".into(), 4.0)]).unwrap();
        let spec = GridSpec::square(-1.0, 1.0, 48).unwrap();
        let rep = monotonicity_audit(&f, &spec, None).unwrap();
        let expect = 3.0f64.sqrt() / 2.0;
        assert!((rep.delta_max - expect).abs() < 1e-4, "delta_max {}", rep.delta_max);
        assert!((rep.k_distortion.unwrap() - 3.0).abs() < 1e-3);
    }

    #[test]
    fn identity_is_one_monotone() {
        let f = catalog("identity", &[]).unwrap();
        let spec = GridSpec::square(-1.0, 1.0, 16).unwrap();
        let rep = monotonicity_audit(&f, &spec, None).unwrap();
        assert_eq!(rep.delta_max, 1.0);
        assert_eq!(rep.k_distortion, Some(1.0));
    }

    #[test]
    fn orthotropic_fails_across_axes() {
        let f = catalog("p_orthotropic", &[("p".into(), 4.0)]).unwrap();
        // 129 points over [-1, 1] puts nodes exactly on both axes.
        let spec = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 129, 129).unwrap();
        let rep = monotonicity_audit(&f, &spec, None).unwrap();
        assert_eq!(rep.delta_max, 0.0);
        assert_eq!(rep.k_distortion, None);
        assert!(rep.violation_count > 0);
        for p in &rep.violation_points {
            assert!(p[0].abs() < 1e-12 || p[1].abs() < 1e-12, "violation off-axis: {p:?}");
        }
    }

    #[test]
    fn distortion_decreases_in_delta() {
        let mut prev = f64::INFINITY;
        for k in 1..=20 {
            let d = k as f64 / 20.0;
            let kd = distortion_from_delta(d).unwrap();
            assert!(kd <= prev + 1e-12, "K not decreasing at delta {d}");
            assert!(kd >= 1.0);
            prev = kd;
        }
        assert_eq!(distortion_from_delta(1.0), Some(1.0));
    }
}
