//! Radial-ODE construction of homeomorphic Beltrami solutions, checked
//! against the closed forms for the power stretching and the minimal-surface
//! map.

use num_complex::Complex64;
use quasiconf::beltrami::closed::{minimal_surface_gamma0, phi_minimal_surface};
use quasiconf::beltrami::{solve_phi_radial, RadialNormalization};

fn main() {
    // constant profile integrates to the power law |z|^{delta-1} z
    let delta = 3.0f64.sqrt();
    let g = (delta - 1.0) / (delta + 1.0);
    let sol = solve_phi_radial(move |_| g, (0.1, 1.0), RadialNormalization::OuterIdentity).unwrap();
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let t = 0.1 * 10f64.powf(k as f64 / 100.0);
        let z = Complex64::from_polar(t, 1.7 * k as f64);
        worst = worst.max((sol.forward(z).unwrap() - t.powf(delta - 1.0) * z).norm());
    }
    println!("constant gamma0 = (d-1)/(d+1), d = sqrt(3):");
    println!("  max |Phi - |z|^(d-1) z| = {worst:.3e}   residual = {:.3e}", sol.residual);

    // minimal-surface profile vs its closed form
    let closed = phi_minimal_surface();
    let outer = closed.eval(Complex64::new(2.0, 0.0)).re;
    let sol = solve_phi_radial(minimal_surface_gamma0, (0.05, 2.0), RadialNormalization::OuterValue(outer)).unwrap();
    let mut worst = 0.0f64;
    for k in 0..=100 {
        let t = 0.05 * 40f64.powf(k as f64 / 100.0);
        let z = Complex64::from_polar(t, 0.9 * k as f64);
        worst = worst.max((sol.forward(z).unwrap() - closed.eval(z)).norm());
    }
    println!("minimal-surface profile on 0.05 <= |z| <= 2:");
    println!("  max |Phi - 2z/(1+sqrt(1+4|z|^2))| = {worst:.3e}");
    println!("  Phi(1) = {:+.10} (closed form 2/(1+sqrt 5) = {:.10})", sol.forward(Complex64::new(1.0, 0.0)).unwrap().re, 2.0 / (1.0 + 5f64.sqrt()));
    println!("  image: {}", sol.image);

    // round trip through the numeric inverse
    let z = Complex64::from_polar(0.7, 2.3);
    let w = sol.forward(z).unwrap();
    let back = sol.inverse(w).unwrap();
    println!("  inverse round trip |Phi^-1(Phi(z)) - z| = {:.3e}", (back - z).norm());
}
