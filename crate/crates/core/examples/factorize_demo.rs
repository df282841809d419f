//! Stoilow-style factorization of a manufactured quasiregular field:
//! F = h₀∘χ₀ with h₀(z) = z² and χ₀(z) = z + 0.2 z̄ on an annulus. The
//! recovered factor is holomorphic even though the reconstructed χ differs
//! from χ₀ by a conformal reparametrization.

use num_complex::Complex64;
use quasiconf::grid::{ComplexGridField, GridSpec, Region};
use quasiconf::hodograph::{factorize, FactorizeOptions};

fn main() {
    let spec = GridSpec::square(-1.0, 1.0, 128).unwrap();
    let region = Region::Annulus { inner: 0.35, outer: 0.95 };
    let f = ComplexGridField::sample_region(spec, &region, |z| {
        let w = z + 0.2 * z.conj();
        w * w
    });
    println!("input: F = (z + 0.2 conj z)^2 on {} ({} samples)", region.describe(), f.valid_count());

    let fact = factorize(&f, |_| Complex64::new(0.2, 0.0), &FactorizeOptions::default()).unwrap();
    println!("factorization F = h o g^-1:");
    println!("  holomorphy residual sup|h_zbar|/sup|h_z| = {:.3e}", fact.holomorphy_residual);
    println!("  linear-equation residual for g            = {:.3e}", fact.linear_residual.rel_sup);
    println!("  composition error sup|h(chi(z)) - F(z)|   = {:.3e}", fact.composition_error);
    println!("  failed flag: {}", fact.failed);
    println!(
        "  image grid: [{:.3}, {:.3}] x [{:.3}, {:.3}], {} points per axis",
        fact.image_spec.x_min, fact.image_spec.x_max, fact.image_spec.y_min, fact.image_spec.y_max, fact.image_spec.nx
    );
}
