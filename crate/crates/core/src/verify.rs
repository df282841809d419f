//! Residual verification of the reduction chain: divergence form,
//! complex-gradient Beltrami equation, chain-rule identity and reduction
//! condition, quasilinear equation for F = Φ(u_z), and the hodograph-linear
//! equation for the inverse factor.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::beltrami::ClosedFormPhi;
use crate::conformal::{eta_from_nu, nu_at, PointClass};
use crate::fields::StructureField;
use crate::grid::{fd_x, fd_y, wirtinger_fd, ComplexGridField};
use crate::{Error, Result};

/// Floor added to relative-norm denominators.
pub const REL_FLOOR: f64 = 1e-14;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum IdentityId {
    DivForm,
    ComplexGradient,
    ChainRule,
    ReductionCondition,
    Quasilinear,
    HodographLinear,
    Holomorphy,
}

/// Named residual norms for one verified identity.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ResidualReport {
    pub identity_id: IdentityId,
    pub abs_sup: f64,
    pub rel_sup: f64,
    pub rel_l2: f64,
    pub points_used: usize,
    pub points_excluded: usize,
    pub normalizer: String,
    pub normalizer_sup: f64,
}

fn assemble(
    identity_id: IdentityId,
    residuals: &[f64],
    excluded: usize,
    normalizer_sup: f64,
    normalizer: &str,
) -> Result<ResidualReport> {
    if residuals.is_empty() {
        return Err(Error::EmptySample);
    }
    let abs_sup = residuals.iter().cloned().fold(0.0f64, f64::max);
    let l2 = (residuals.iter().map(|r| r * r).sum::<f64>() / residuals.len() as f64).sqrt();
    Ok(ResidualReport {
        identity_id,
        abs_sup,
        rel_sup: abs_sup / (normalizer_sup + REL_FLOOR),
        rel_l2: l2 / (normalizer_sup + REL_FLOOR),
        points_used: residuals.len(),
        points_excluded: excluded,
        normalizer: normalizer.into(),
        normalizer_sup,
    })
}

/// Strong-form residual ∂_x[A(∇u)]₁ + ∂_y[A(∇u)]₂ of the divergence
/// equation, from a real scalar sample of u by nested central differences.
pub fn residual_divergence(a: &StructureField, u: &ComplexGridField) -> Result<ResidualReport> {
    if u.sup_imag_abs() > 0.0 {
        return Err(Error::InvalidParam("u must be real-valued".into()));
    }
    let ux = fd_x(u)?;
    let uy = fd_y(u)?;
    // ∇u as a complex field, then the structure field applied pointwise
    let mut grad = ComplexGridField::zeros(u.spec);
    for j in 0..u.spec.ny {
        for i in 0..u.spec.nx {
            let ok = ux.is_valid(i, j) && uy.is_valid(i, j);
            grad.set(i, j, Complex64::new(ux.get(i, j).re, uy.get(i, j).re), ok);
        }
    }
    let flux = grad.map(|_, g| a.eval(g));
    let px = fd_x(&flux)?;
    let qy = fd_y(&flux)?;
    let total = u.valid_count();
    let mut residuals = Vec::new();
    let mut normalizer_sup = 0.0f64;
    for j in 0..u.spec.ny {
        for i in 0..u.spec.nx {
            if px.is_valid(i, j) && qy.is_valid(i, j) {
                let div = px.get(i, j).re + qy.get(i, j).im;
                residuals.push(div.abs());
                normalizer_sup = normalizer_sup.max(px.get(i, j).re.abs() + qy.get(i, j).im.abs());
            }
        }
    }
    let excluded = total - residuals.len();
    assemble(IdentityId::DivForm, &residuals, excluded, normalizer_sup, "sup(|d_x A1| + |d_y A2|)")
}

/// Residual f_z̄ − conj(ν(f))·f_z − ν(f)·conj(f_z) of the complex-gradient
/// equation, with ν evaluated along the sampled values of f = u_z.
///
/// Points whose value lands in the degenerate or undefined class of ν are
/// excluded and counted.
pub fn residual_complex_gradient(bold: &StructureField, f: &ComplexGridField) -> Result<ResidualReport> {
    let (fz, fzb) = wirtinger_fd(f)?;
    let total = f.valid_count();
    let mut residuals = Vec::new();
    let mut normalizer_sup = 0.0f64;
    for j in 0..f.spec.ny {
        for i in 0..f.spec.nx {
            if !(fz.is_valid(i, j) && fzb.is_valid(i, j)) {
                continue;
            }
            let w = f.get(i, j);
            let (nu, class) = nu_at(bold, w);
            match class {
                PointClass::Elliptic | PointClass::NearDegenerate => {}
                _ => continue,
            }
            let a = fz.get(i, j);
            let b = fzb.get(i, j);
            residuals.push((b - nu.conj() * a - nu * a.conj()).norm());
            normalizer_sup = normalizer_sup.max(a.norm());
        }
    }
    if residuals.is_empty() {
        return Err(Error::AllDegenerate("every sampled value was excluded from the nu classification".into()));
    }
    let excluded = total - residuals.len();
    assemble(IdentityId::ComplexGradient, &residuals, excluded, normalizer_sup, "sup |f_z|")
}

/// Residuals of the chain-rule identity for F = Φ(f) under the general
/// (μ, ν) equation, together with the annihilation condition on
/// Φ_w²ν + Φ_wΦ_w̄(|ν|²−|μ|²+1) + Φ_w̄²ν̄ and the non-degeneracy guard.
pub struct ChainRuleReport {
    pub identity: ResidualReport,
    pub annihilation: ResidualReport,
    /// min over samples of |Φ_w + Φ_w̄ν̄|² − |Φ_w̄μ̄|²
    pub nz_min: f64,
    /// max over samples of |quasilinear coefficient − γ(f)| (μ = ν̄ route)
    pub coeff_vs_gamma_max: f64,
}

pub fn residual_chain_rule<M, N>(
    phi: &ClosedFormPhi,
    f: &ComplexGridField,
    mu_of: M,
    nu_of: N,
) -> Result<ChainRuleReport>
where
    M: Fn(Complex64) -> Complex64,
    N: Fn(Complex64) -> Complex64,
{
    let big_f = f.map(|_, w| phi.eval(w));
    let (fz, fzb) = wirtinger_fd(&big_f)?;
    let total = f.valid_count();
    let mut id_res = Vec::new();
    let mut ann_res = Vec::new();
    let mut id_norm = 0.0f64;
    let mut ann_norm = 0.0f64;
    let mut nz_min = f64::INFINITY;
    let mut coeff_dev = 0.0f64;
    for j in 0..f.spec.ny {
        for i in 0..f.spec.nx {
            if !(f.is_valid(i, j) && fz.is_valid(i, j) && fzb.is_valid(i, j)) {
                continue;
            }
            let w = f.get(i, j);
            let (pw, pwb) = phi.wirtinger(w);
            let mu = mu_of(w);
            let nu = nu_of(w);
            if [pw, pwb, mu, nu].iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
                continue;
            }
            let big_fz = fz.get(i, j);
            let big_fzb = fzb.get(i, j);

            let lhs_coef = (pw + pwb * nu.conj()).norm_sqr() - (pwb * mu.conj()).norm_sqr();
            let quad = pw * pw * nu
                + pw * pwb * (nu.norm_sqr() - mu.norm_sqr() + 1.0)
                + pwb * pwb * nu.conj();
            let lhs = lhs_coef * big_fzb;
            let rhs = mu * (pw.norm_sqr() - pwb.norm_sqr()) * big_fz + quad * big_fz.conj();

            id_res.push((lhs - rhs).norm());
            id_norm = id_norm.max(lhs_coef.abs() * (big_fz.norm() + big_fzb.norm()));
            ann_res.push(quad.norm());
            ann_norm = ann_norm.max(pw.norm_sqr() + (pw * pwb).norm() + pwb.norm_sqr());
            nz_min = nz_min.min(lhs_coef);

            // against γ on the complex-gradient route (μ = ν̄)
            if let Some(eta) = eta_from_nu(nu) {
                let coeff = mu * (pw.norm_sqr() - pwb.norm_sqr()) / lhs_coef;
                coeff_dev = coeff_dev.max((coeff - (-eta.conj())).norm());
            }
        }
    }
    let excluded = total - id_res.len();
    Ok(ChainRuleReport {
        identity: assemble(IdentityId::ChainRule, &id_res, excluded, id_norm, "sup |coef_lhs|(|F_z| + |F_z̄|)")?,
        annihilation: assemble(
            IdentityId::ReductionCondition,
            &ann_res,
            excluded,
            ann_norm,
            "sup(|Φ_w|² + |Φ_wΦ_w̄| + |Φ_w̄|²)",
        )?,
        nz_min,
        coeff_vs_gamma_max: coeff_dev,
    })
}

/// Residual F_z̄ + conj(η(Φ⁻¹(F)))·F_z of the quasilinear equation.
///
/// Errors when more than 1% of the eligible points fail to invert.
pub fn residual_quasilinear<I, E>(big_f: &ComplexGridField, inverse: I, eta_of: E) -> Result<ResidualReport>
where
    I: Fn(Complex64) -> Option<Complex64>,
    E: Fn(Complex64) -> Complex64,
{
    let (fz, fzb) = wirtinger_fd(big_f)?;
    let total = big_f.valid_count();
    let mut residuals = Vec::new();
    let mut normalizer_sup = 0.0f64;
    let mut eligible = 0usize;
    let mut failures = 0usize;
    for j in 0..big_f.spec.ny {
        for i in 0..big_f.spec.nx {
            if !(fz.is_valid(i, j) && fzb.is_valid(i, j)) {
                continue;
            }
            eligible += 1;
            let value = big_f.get(i, j);
            let Some(w) = inverse(value) else {
                failures += 1;
                continue;
            };
            let eta = eta_of(w);
            if !eta.re.is_finite() || !eta.im.is_finite() {
                failures += 1;
                continue;
            }
            let a = fz.get(i, j);
            residuals.push((fzb.get(i, j) + eta.conj() * a).norm());
            normalizer_sup = normalizer_sup.max(a.norm());
        }
    }
    if eligible > 0 && failures * 100 > eligible {
        return Err(Error::InversionFailed(format!(
            "{failures} of {eligible} sampled values left the image of the homeomorphism"
        )));
    }
    let excluded = total - residuals.len();
    assemble(IdentityId::Quasilinear, &residuals, excluded, normalizer_sup, "sup |F_z|")
}

/// Pointwise deviation of the quasilinear coefficient −conj(η(Φ⁻¹(F))) from
/// a closed-form target, at analytically sampled argument points.
pub fn coefficient_identity_deviation<F, I, E, T>(
    forward: F,
    inverse: I,
    eta_of: E,
    target: T,
    samples: &[Complex64],
) -> Result<f64>
where
    F: Fn(Complex64) -> Option<Complex64>,
    I: Fn(Complex64) -> Option<Complex64>,
    E: Fn(Complex64) -> Complex64,
    T: Fn(Complex64) -> Complex64,
{
    let mut worst = 0.0f64;
    for &w in samples {
        let value = forward(w).ok_or_else(|| Error::InversionFailed(format!("{w} outside solved region")))?;
        let wi = inverse(value).ok_or_else(|| Error::InversionFailed(format!("{value} failed to invert")))?;
        let coeff = -eta_of(wi).conj();
        worst = worst.max((coeff - target(value)).norm());
    }
    Ok(worst)
}

/// Residual g_z̄ + γ(h(z))·conj(g_z) of the hodograph-linearised equation.
pub fn residual_hodograph<H, G>(g: &ComplexGridField, h: H, gamma_of_value: G) -> Result<ResidualReport>
where
    H: Fn(Complex64) -> Complex64,
    G: Fn(Complex64) -> Complex64,
{
    let (gz, gzb) = wirtinger_fd(g)?;
    let total = g.valid_count();
    let mut residuals = Vec::new();
    let mut normalizer_sup = 0.0f64;
    for j in 0..g.spec.ny {
        for i in 0..g.spec.nx {
            if !(gz.is_valid(i, j) && gzb.is_valid(i, j)) {
                continue;
            }
            let z = g.spec.point(i, j);
            let coeff = gamma_of_value(h(z));
            if !coeff.re.is_finite() || !coeff.im.is_finite() {
                continue;
            }
            let a = gz.get(i, j);
            residuals.push((gzb.get(i, j) + coeff * a.conj()).norm());
            normalizer_sup = normalizer_sup.max(a.norm());
        }
    }
    let excluded = total - residuals.len();
    assemble(IdentityId::HodographLinear, &residuals, excluded, normalizer_sup, "sup |g_z|")
}

/// Evaluate the hodograph equation under both coefficient-argument
/// conventions — at h(z) and at conj(h(z)) — and report both residuals, so
/// the data decides which one annihilates.
pub fn hodograph_convention_residuals<H, G>(
    g: &ComplexGridField,
    h: H,
    gamma_of_value: G,
) -> Result<(ResidualReport, ResidualReport)>
where
    H: Fn(Complex64) -> Complex64 + Copy,
    G: Fn(Complex64) -> Complex64 + Copy,
{
    let direct = residual_hodograph(g, h, gamma_of_value)?;
    let conjugated = residual_hodograph(g, |z| h(z).conj(), gamma_of_value)?;
    Ok((direct, conjugated))
}
