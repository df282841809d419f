//! Beltrami coefficient ν of the complex-gradient equation, the elliptic root
//! η of ν + η + ν̄η² = 0, and the derived coefficients γ and μ = −η̄.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::fields::StructureField;
use crate::grid::{ComplexGridField, GridSpec, Region};
use crate::zmath::unit_phase;
use crate::{Error, Result};

/// Separation between the elliptic and near-degenerate bands: |η| approaches
/// 1 with infinite slope as |ν| → ½, so points within the guard of the
/// degenerate threshold are computed but kept out of sup-norm statistics.
pub const EPS_GUARD: f64 = 1e-6;

/// Placeholder ν on the set where the coefficient is undefined
/// (Re **A**_w = 0 or derivatives unavailable); such points are tagged and
/// excluded from all ellipticity statistics.
pub const NU_UNDEFINED_VALUE: Complex64 = Complex64::new(0.25, 0.0);

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PointClass {
    /// |ν| < ½ − guard
    Elliptic,
    /// ½ − guard ≤ |ν| < ½
    NearDegenerate,
    /// |ν| ≥ ½
    Degenerate,
    /// Re **A**_w = 0 or derivatives unavailable
    NuUndefined,
    /// outside the requested sample region
    Unsampled,
}

impl PointClass {
    pub fn as_str(self) -> &'static str {
        match self {
            PointClass::Elliptic => "elliptic",
            PointClass::NearDegenerate => "near_degenerate",
            PointClass::Degenerate => "degenerate",
            PointClass::NuUndefined => "nu_undefined",
            PointClass::Unsampled => "unsampled",
        }
    }
}

fn classify(nu: Complex64) -> PointClass {
    let r = nu.norm();
    if r < 0.5 - EPS_GUARD {
        PointClass::Elliptic
    } else if r < 0.5 {
        PointClass::NearDegenerate
    } else {
        PointClass::Degenerate
    }
}

/// ν = −**A**_w̄ / (2 Re **A**_w) at one point of the gradient domain.
pub fn nu_at(bold: &StructureField, w: Complex64) -> (Complex64, PointClass) {
    let (az, azb) = bold.wirtinger(w);
    let finite = az.re.is_finite() && az.im.is_finite() && azb.re.is_finite() && azb.im.is_finite();
    let denom = 2.0 * az.re;
    if !finite || denom == 0.0 {
        return (NU_UNDEFINED_VALUE, PointClass::NuUndefined);
    }
    let nu = -azb / denom;
    if !nu.re.is_finite() || !nu.im.is_finite() {
        return (NU_UNDEFINED_VALUE, PointClass::NuUndefined);
    }
    (nu, classify(nu))
}

/// ν sampled on a grid together with the per-point classification.
///
/// The field mask marks points where ν is defined (everything except
/// `NuUndefined` and `Unsampled`); undefined points hold the placeholder
/// value so the grid stays fully populated.
pub struct NuField {
    pub nu: ComplexGridField,
    pub class: Vec<PointClass>,
}

impl NuField {
    pub fn class_at(&self, i: usize, j: usize) -> PointClass {
        self.class[self.nu.spec.index(i, j)]
    }
}

pub fn compute_nu(bold: &StructureField, at: &GridSpec, region: Option<&Region>) -> NuField {
    let mut nu = ComplexGridField::zeros(*at);
    let mut class = vec![PointClass::Unsampled; at.len()];
    for j in 0..at.ny {
        for i in 0..at.nx {
            let w = at.point(i, j);
            if let Some(r) = region {
                if !r.contains(w) {
                    nu.set(i, j, Complex64::new(0.0, 0.0), false);
                    continue;
                }
            }
            let (v, c) = nu_at(bold, w);
            class[at.index(i, j)] = c;
            nu.set(i, j, v, c != PointClass::NuUndefined);
        }
    }
    NuField { nu, class }
}

/// The root of ν + η + ν̄η² = 0 with modulus below 1, written in the
/// cancellation-free form η = −(ν/|ν|)·r/(½ + √(¼ − r²)), r = |ν|.
///
/// Returns `None` for |ν| ≥ ½ (no elliptic root) and 0 for ν = 0.
pub fn eta_from_nu(nu: Complex64) -> Option<Complex64> {
    let r = nu.norm();
    if r >= 0.5 {
        return None;
    }
    if r == 0.0 {
        return Some(Complex64::new(0.0, 0.0));
    }
    let m = r / (0.5 + (0.25 - r * r).sqrt());
    Some(-unit_phase(nu) * m)
}

/// η on the points where |ν| < ½; degenerate and undefined points are masked.
pub fn compute_eta(nu: &NuField) -> ComplexGridField {
    let spec = nu.nu.spec;
    let mut eta = ComplexGridField::zeros(spec);
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let v = match nu.class_at(i, j) {
                PointClass::Elliptic | PointClass::NearDegenerate => eta_from_nu(nu.nu.get(i, j)),
                _ => None,
            };
            match v {
                Some(e) => eta.set(i, j, e, true),
                None => eta.set(i, j, Complex64::new(0.0, 0.0), false),
            }
        }
    }
    eta
}

/// γ by the explicit quotient (1−|η|²)ν̄ / (|1+ην̄|² − |ην|²).
///
/// The denominator equals √(1−4|ν|²) on the selected branch; a non-positive
/// value at an elliptic point indicates an internal inconsistency.
pub fn gamma_quotient(nu: Complex64, eta: Complex64) -> Result<Complex64> {
    let one = Complex64::new(1.0, 0.0);
    let denom = (one + eta * nu.conj()).norm_sqr() - (eta * nu).norm_sqr();
    if denom <= 0.0 {
        return Err(Error::Inconsistency(format!(
            "gamma denominator {denom} at nu = {nu}, eta = {eta}; expected sqrt(1-4|nu|^2) > 0"
        )));
    }
    Ok((1.0 - eta.norm_sqr()) * nu.conj() / denom)
}

/// γ (quotient form) and μ = −η̄ on the elliptic set, plus the largest
/// pointwise deviation |γ − (−η̄)| as a consistency certificate.
pub struct GammaMu {
    pub gamma: ComplexGridField,
    pub mu: ComplexGridField,
    pub max_deviation: f64,
}

pub fn compute_gamma_mu(nu: &NuField, eta: &ComplexGridField) -> Result<GammaMu> {
    let spec = eta.spec;
    let mut gamma = ComplexGridField::zeros(spec);
    let mut mu = ComplexGridField::zeros(spec);
    let mut max_dev = 0.0f64;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            if !eta.is_valid(i, j) {
                gamma.set(i, j, Complex64::new(0.0, 0.0), false);
                mu.set(i, j, Complex64::new(0.0, 0.0), false);
                continue;
            }
            let n = nu.nu.get(i, j);
            let e = eta.get(i, j);
            let g = if n.norm() == 0.0 {
                Complex64::new(0.0, 0.0) // quotient degenerates to 0/1 at ν = 0
            } else {
                gamma_quotient(n, e)?
            };
            let m = -e.conj();
            max_dev = max_dev.max((g - m).norm());
            gamma.set(i, j, g, true);
            mu.set(i, j, m, true);
        }
    }
    Ok(GammaMu { gamma, mu, max_deviation: max_dev })
}

/// Per-point conformal structure data on one grid: ν, η, γ, μ with
/// classification and the ellipticity bound sup|η| over elliptic points.
pub struct ConformalData {
    pub nu: NuField,
    pub eta: ComplexGridField,
    pub gamma: ComplexGridField,
    pub mu: ComplexGridField,
    pub gamma_consistency: f64,
    pub k_bound: f64,
}

impl ConformalData {
    pub fn compute(bold: &StructureField, at: &GridSpec, region: Option<&Region>) -> Result<Self> {
        let nu = compute_nu(bold, at, region);
        let eta = compute_eta(&nu);
        let gm = compute_gamma_mu(&nu, &eta)?;
        let mut k_bound = 0.0f64;
        eta.for_each_valid(|i, j, _, v| {
            if nu.class_at(i, j) == PointClass::Elliptic {
                k_bound = k_bound.max(v.norm());
            }
        });
        Ok(ConformalData {
            nu,
            eta,
            gamma: gm.gamma,
            mu: gm.mu,
            gamma_consistency: gm.max_deviation,
            k_bound,
        })
    }

    pub fn spec(&self) -> GridSpec {
        self.nu.nu.spec
    }

    pub fn all_degenerate(&self) -> bool {
        !self
            .nu
            .class
            .iter()
            .any(|&c| c == PointClass::Elliptic || c == PointClass::NearDegenerate)
    }
}

/// Summary statistics of a classified sample.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct EllipticityReport {
    pub elliptic: usize,
    pub near_degenerate: usize,
    pub degenerate: usize,
    pub nu_undefined: usize,
    pub sampled: usize,
    pub elliptic_fraction: f64,
    /// sup 2|ν| over points where ν is defined
    pub sup_two_nu: f64,
    /// sup |η| over elliptic points
    pub sup_eta: f64,
    pub gamma_consistency: f64,
    /// grid edges along which |ν| crosses ½
    pub boundary_crossings: usize,
    pub boundary_points: Vec<[f64; 2]>,
    pub all_degenerate: bool,
}

const MAX_BOUNDARY_KEPT: usize = 256;

pub fn ellipticity_report(data: &ConformalData) -> EllipticityReport {
    let spec = data.spec();
    let mut counts = [0usize; 4];
    let mut sup_two_nu = 0.0f64;
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            match data.nu.class_at(i, j) {
                PointClass::Elliptic => counts[0] += 1,
                PointClass::NearDegenerate => counts[1] += 1,
                PointClass::Degenerate => counts[2] += 1,
                PointClass::NuUndefined => counts[3] += 1,
                PointClass::Unsampled => continue,
            }
            if data.nu.nu.is_valid(i, j) {
                sup_two_nu = sup_two_nu.max(2.0 * data.nu.nu.get(i, j).norm());
            }
        }
    }
    let sampled = counts.iter().sum::<usize>();

    // |ν| − ½ sign changes along grid edges mark the boundary of ellipticity.
    let mut boundary_points = Vec::new();
    let mut crossings = 0usize;
    let excess = |i: usize, j: usize| data.nu.nu.get(i, j).norm() - 0.5;
    let defined = |i: usize, j: usize| data.nu.nu.is_valid(i, j);
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            if !defined(i, j) {
                continue;
            }
            let e0 = excess(i, j);
            for (ni, nj) in [(i + 1, j), (i, j + 1)] {
                if ni < spec.nx && nj < spec.ny && defined(ni, nj) {
                    let e1 = excess(ni, nj);
                    if (e0 < 0.0) != (e1 < 0.0) {
                        crossings += 1;
                        if boundary_points.len() < MAX_BOUNDARY_KEPT {
                            let a = spec.point(i, j);
                            let b = spec.point(ni, nj);
                            boundary_points.push([0.5 * (a.re + b.re), 0.5 * (a.im + b.im)]);
                        }
                    }
                }
            }
        }
    }

    EllipticityReport {
        elliptic: counts[0],
        near_degenerate: counts[1],
        degenerate: counts[2],
        nu_undefined: counts[3],
        sampled,
        elliptic_fraction: if sampled == 0 { 0.0 } else { counts[0] as f64 / sampled as f64 },
        sup_two_nu,
        sup_eta: data.k_bound,
        gamma_consistency: data.gamma_consistency,
        boundary_crossings: crossings,
        boundary_points,
        all_degenerate: data.all_degenerate(),
    }
}
