//! Wirtinger derivatives of sampled fields: ∂_z = ½(∂_x − i∂_y),
//! ∂_z̄ = ½(∂_x + i∂_y), by second-order finite differences or, on periodic
//! grids, by Fourier multipliers.

use num_complex::Complex64;

use super::ComplexGridField;
use crate::spectral::{wavenumbers, Fft2};
use crate::{Error, Result};

const I: Complex64 = Complex64::new(0.0, 1.0);

fn check_size(field: &ComplexGridField) -> Result<()> {
    if field.spec.nx < 3 || field.spec.ny < 3 {
        return Err(Error::InsufficientStencil(format!(
            "{}×{} grid cannot support central differences",
            field.spec.nx, field.spec.ny
        )));
    }
    Ok(())
}

/// ∂_x by central differences (one-sided at non-periodic boundaries).
///
/// The output mask keeps a point only if the point itself and both axis
/// neighbours are valid and, on non-periodic grids, the point is interior:
/// one-sided boundary values are computed but masked out.
pub fn fd_x(field: &ComplexGridField) -> Result<ComplexGridField> {
    check_size(field)?;
    let spec = field.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let h2 = 2.0 * spec.hx();
    let mut out = ComplexGridField::zeros(spec);
    for j in 0..ny {
        for i in 0..nx {
            if !field.is_valid(i, j) {
                out.set(i, j, Complex64::new(0.0, 0.0), false);
                continue;
            }
            let (v, ok) = if spec.periodic {
                let l = (i + nx - 1) % nx;
                let r = (i + 1) % nx;
                let ok = field.is_valid(l, j) && field.is_valid(r, j);
                let v = if ok { (field.get(r, j) - field.get(l, j)) / h2 } else { Complex64::new(0.0, 0.0) };
                (v, ok)
            } else if i == 0 {
                let ok = field.is_valid(1, j) && field.is_valid(2, j);
                let v = if ok {
                    (-3.0 * field.get(0, j) + 4.0 * field.get(1, j) - field.get(2, j)) / h2
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (v, false) // boundary ring stays masked
            } else if i == nx - 1 {
                let ok = field.is_valid(nx - 2, j) && field.is_valid(nx - 3, j);
                let v = if ok {
                    (3.0 * field.get(nx - 1, j) - 4.0 * field.get(nx - 2, j) + field.get(nx - 3, j)) / h2
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (v, false)
            } else {
                let ok = field.is_valid(i - 1, j) && field.is_valid(i + 1, j);
                let v = if ok { (field.get(i + 1, j) - field.get(i - 1, j)) / h2 } else { Complex64::new(0.0, 0.0) };
                (v, ok)
            };
            out.set(i, j, v, ok);
        }
    }
    Ok(out)
}

/// ∂_y by central differences; same mask policy as [`fd_x`].
pub fn fd_y(field: &ComplexGridField) -> Result<ComplexGridField> {
    check_size(field)?;
    let spec = field.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let h2 = 2.0 * spec.hy();
    let mut out = ComplexGridField::zeros(spec);
    for j in 0..ny {
        for i in 0..nx {
            if !field.is_valid(i, j) {
                out.set(i, j, Complex64::new(0.0, 0.0), false);
                continue;
            }
            let (v, ok) = if spec.periodic {
                let d = (j + ny - 1) % ny;
                let u = (j + 1) % ny;
                let ok = field.is_valid(i, d) && field.is_valid(i, u);
                let v = if ok { (field.get(i, u) - field.get(i, d)) / h2 } else { Complex64::new(0.0, 0.0) };
                (v, ok)
            } else if j == 0 {
                let ok = field.is_valid(i, 1) && field.is_valid(i, 2);
                let v = if ok {
                    (-3.0 * field.get(i, 0) + 4.0 * field.get(i, 1) - field.get(i, 2)) / h2
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (v, false)
            } else if j == ny - 1 {
                let ok = field.is_valid(i, ny - 2) && field.is_valid(i, ny - 3);
                let v = if ok {
                    (3.0 * field.get(i, ny - 1) - 4.0 * field.get(i, ny - 2) + field.get(i, ny - 3)) / h2
                } else {
                    Complex64::new(0.0, 0.0)
                };
                (v, false)
            } else {
                let ok = field.is_valid(i, j - 1) && field.is_valid(i, j + 1);
                let v = if ok { (field.get(i, j + 1) - field.get(i, j - 1)) / h2 } else { Complex64::new(0.0, 0.0) };
                (v, ok)
            };
            out.set(i, j, v, ok);
        }
    }
    Ok(out)
}

/// Both Wirtinger derivatives by central differences.
pub fn wirtinger_fd(field: &ComplexGridField) -> Result<(ComplexGridField, ComplexGridField)> {
    let fx = fd_x(field)?;
    let fy = fd_y(field)?;
    let spec = field.spec;
    let mut dz = ComplexGridField::zeros(spec);
    let mut dzb = ComplexGridField::zeros(spec);
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let ok = fx.is_valid(i, j) && fy.is_valid(i, j);
            if ok {
                let gx = fx.get(i, j);
                let gy = fy.get(i, j);
                dz.set(i, j, 0.5 * (gx - I * gy), true);
                dzb.set(i, j, 0.5 * (gx + I * gy), true);
            } else {
                dz.set(i, j, Complex64::new(0.0, 0.0), false);
                dzb.set(i, j, Complex64::new(0.0, 0.0), false);
            }
        }
    }
    Ok((dz, dzb))
}

/// Wirtinger derivatives by Fourier multipliers; spectrally accurate for
/// smooth periodic fields. Requires a periodic spec and an all-valid mask.
pub fn wirtinger_spectral(field: &ComplexGridField) -> Result<(ComplexGridField, ComplexGridField)> {
    if !field.spec.periodic || !field.all_valid() {
        return Err(Error::NotPeriodic);
    }
    let spec = field.spec;
    let (nx, ny) = (spec.nx, spec.ny);
    let kx = wavenumbers(nx, spec.x_max - spec.x_min);
    let ky = wavenumbers(ny, spec.y_max - spec.y_min);
    let mut fft = Fft2::new(nx, ny);
    let mut hat = field.values().to_vec();
    fft.forward(&mut hat);

    // ∂_z ↔ (i/2)·conj(κ), ∂_z̄ ↔ (i/2)·κ with κ = kx + i·ky.
    let mut dz_hat = vec![Complex64::new(0.0, 0.0); nx * ny];
    let mut dzb_hat = vec![Complex64::new(0.0, 0.0); nx * ny];
    for j in 0..ny {
        for i in 0..nx {
            let k = j * nx + i;
            let kappa = Complex64::new(kx[i], ky[j]);
            let half_i = Complex64::new(0.0, 0.5);
            dz_hat[k] = half_i * kappa.conj() * hat[k];
            dzb_hat[k] = half_i * kappa * hat[k];
        }
    }
    fft.inverse(&mut dz_hat);
    fft.inverse(&mut dzb_hat);
    let dz = ComplexGridField::from_parts(spec, dz_hat, vec![true; nx * ny])?;
    let dzb = ComplexGridField::from_parts(spec, dzb_hat, vec![true; nx * ny])?;
    Ok((dz, dzb))
}
