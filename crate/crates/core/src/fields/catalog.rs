//! Built-in structure fields with closed-form Wirtinger derivatives.

use std::sync::Arc;

use num_complex::Complex64;

use super::{DomainN, EvalFn, StructureField, WirtingerFn};
use crate::zmath::abs_pow;
use crate::{Error, Result};

fn get_p(params: &[(String, f64)]) -> Result<f64> {
    let mut p = None;
    for (k, v) in params {
        match k.as_str() {
            "p" => p = Some(*v),
            other => return Err(Error::InvalidParam(format!("unknown parameter `{other}`"))),
        }
    }
    let p = p.ok_or_else(|| Error::InvalidParam("missing parameter p".into()))?;
    if !(p > 1.0) {
        return Err(Error::InvalidParam(format!("p must exceed 1, got {p}")));
    }
    Ok(p)
}

fn no_params(params: &[(String, f64)]) -> Result<()> {
    if let Some((k, _)) = params.first() {
        return Err(Error::InvalidParam(format!("unexpected parameter `{k}`")));
    }
    Ok(())
}

/// Construct a catalog structure field.
///
/// Supported ids: `p_laplacian` (param p > 1), `minimal_surface`,
/// `maximal_spacelike`, `p_orthotropic` (param p > 1), `identity`.
pub fn catalog(id: &str, params: &[(String, f64)]) -> Result<StructureField> {
    match id {
        "identity" => {
            no_params(params)?;
            let eval: EvalFn = Arc::new(|z| z);
            let wirt: WirtingerFn = Arc::new(|_| (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)));
            Ok(StructureField::new_custom("identity", vec![], DomainN::Plane, eval, Some(wirt)))
        }
        "p_laplacian" => {
            let p = get_p(params)?;
            let eval: EvalFn = Arc::new(move |z: Complex64| abs_pow(z.norm(), p - 2.0) * z);
            let wirt: WirtingerFn = Arc::new(move |z: Complex64| {
                let t = z.norm();
                if t == 0.0 {
                    // differentiable at 0 only for p > 2 (derivative 0) and p = 2
                    return if p > 2.0 {
                        (Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0))
                    } else if p == 2.0 {
                        (Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0))
                    } else {
                        (Complex64::new(f64::INFINITY, 0.0), Complex64::new(f64::INFINITY, 0.0))
                    };
                }
                let m = abs_pow(t, p - 2.0);
                let az = Complex64::new(0.5 * p * m, 0.0);
                let azb = z * z / (t * t) * (0.5 * (p - 2.0) * m);
                (az, azb)
            });
            Ok(StructureField::new_custom(
                "p_laplacian",
                vec![("p".into(), p)],
                DomainN::Plane,
                eval,
                Some(wirt),
            ))
        }
        "minimal_surface" => {
            no_params(params)?;
            let eval: EvalFn = Arc::new(|z: Complex64| z / (1.0 + z.norm_sqr()).sqrt());
            let wirt: WirtingerFn = Arc::new(|z: Complex64| {
                let t2 = z.norm_sqr();
                let s3 = (1.0 + t2).powf(1.5);
                let az = Complex64::new((2.0 + t2) / (2.0 * s3), 0.0);
                let azb = -z * z / (2.0 * s3);
                (az, azb)
            });
            Ok(StructureField::new_custom("minimal_surface", vec![], DomainN::Plane, eval, Some(wirt)))
        }
        "maximal_spacelike" => {
            no_params(params)?;
            // defined on the unit disk; the square root turns NaN outside
            let eval: EvalFn = Arc::new(|z: Complex64| z / (1.0 - z.norm_sqr()).sqrt());
            let wirt: WirtingerFn = Arc::new(|z: Complex64| {
                let t2 = z.norm_sqr();
                let s3 = (1.0 - t2).powf(1.5);
                let az = Complex64::new((2.0 - t2) / (2.0 * s3), 0.0);
                let azb = z * z / (2.0 * s3);
                (az, azb)
            });
            Ok(StructureField::new_custom(
                "maximal_spacelike",
                vec![],
                DomainN::Disk { radius: 1.0 },
                eval,
                Some(wirt),
            ))
        }
        "p_orthotropic" => {
            let p = get_p(params)?;
            let eval: EvalFn = Arc::new(move |z: Complex64| {
                Complex64::new(abs_pow(z.re, p - 2.0) * z.re, abs_pow(z.im, p - 2.0) * z.im)
            });
            let wirt: WirtingerFn = Arc::new(move |z: Complex64| {
                let a = abs_pow(z.re, p - 2.0);
                let b = abs_pow(z.im, p - 2.0);
                let az = Complex64::new(0.5 * (p - 1.0) * (a + b), 0.0);
                let azb = Complex64::new(0.5 * (p - 1.0) * (a - b), 0.0);
                (az, azb)
            });
            Ok(StructureField::new_custom(
                "p_orthotropic",
                vec![("p".into(), p)],
                DomainN::QuadrantOne,
                eval,
                Some(wirt),
            ))
        }
        other => Err(Error::UnknownField(other.into())),
    }
}
