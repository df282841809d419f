//! The coefficient pipeline ν → η → γ = μ = −η̄ with branch selection and
//! ellipticity classification.

use num_complex::Complex64;
use quasiconf::conformal::{ellipticity_report, eta_from_nu, gamma_quotient, nu_at, ConformalData};
use quasiconf::fields::{catalog, to_bold};
use quasiconf::grid::Region;

fn main() {
    // pointwise values for the p-Laplacian at p = 4
    let bold = to_bold(&catalog("p_laplacian", &[("p".into(), 4.0)]).unwrap());
    let z = Complex64::new(1.0, 0.0);
    let (nu, class) = nu_at(&bold, z);
    let eta = eta_from_nu(nu).unwrap();
    let gamma = gamma_quotient(nu, eta).unwrap();
    println!("p-Laplacian (p = 4) at z = 1:");
    println!("  nu    = {nu:+.10}   [{}]", class.as_str());
    println!("  eta   = {eta:+.10}   (the root with |eta| < 1)");
    println!("  gamma = {gamma:+.10}   (equals -conj(eta))");
    println!("  quadratic residual |nu + eta + conj(nu) eta^2| = {:.3e}", (nu + eta + nu.conj() * eta * eta).norm());

    // a field-wide classification for the spacelike equation
    let bold = to_bold(&catalog("maximal_spacelike", &[]).unwrap());
    let region = Region::Disk { radius: 0.49 };
    let spec = region.bounding_spec(128).unwrap();
    let data = ConformalData::compute(&bold, &spec, Some(&region)).unwrap();
    let rep = ellipticity_report(&data);
    println!("\nspacelike field on |z| <= 0.49 (128x128):");
    println!("  elliptic {} / near-degenerate {} / degenerate {} / undefined {}", rep.elliptic, rep.near_degenerate, rep.degenerate, rep.nu_undefined);
    println!("  sup 2|nu| = {:.6} (tends to 1 at the rim of the half disk)", rep.sup_two_nu);
    println!("  sup |eta| = {:.6}", rep.sup_eta);
    println!("  gamma consistency |gamma - (-conj eta)| = {:.3e}", rep.gamma_consistency);
}
