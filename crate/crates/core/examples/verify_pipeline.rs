//! Residual verification of the full reduction chain on the minimal-surface
//! equation with the classical saddle solution u = log(cos x / cos y).

use quasiconf::beltrami::closed::phi_minimal_surface;
use quasiconf::conformal::nu_at;
use quasiconf::fields::{catalog, to_bold};
use quasiconf::solutions::reference;
use quasiconf::verify::{
    residual_chain_rule, residual_complex_gradient, residual_divergence, residual_quasilinear,
};

fn main() {
    let a = catalog("minimal_surface", &[]).unwrap();
    let bold = to_bold(&a);
    let sol = reference("minimal_surface", "scherk", &[]).unwrap();
    let phi = phi_minimal_surface();

    for n in [128usize, 256] {
        let spec = sol.region.bounding_spec(n).unwrap();
        let u = sol.sample_u(&spec);
        let f = sol.sample_u_z(&spec);
        let big_f = f.map(|_, w| phi.eval(w));

        let div = residual_divergence(&a, &u).unwrap();
        let cgrad = residual_complex_gradient(&bold, &f).unwrap();
        let chain = residual_chain_rule(&phi, &f, |w| nu_at(&bold, w).0.conj(), |w| nu_at(&bold, w).0).unwrap();
        let eta_fn = phi.eta_fn();
        let quasi = residual_quasilinear(&big_f, |v| Some(phi.inverse(v)), |w| eta_fn(w)).unwrap();

        println!("grid {n}x{n} ({} interior points):", div.points_used);
        println!("  divergence form      rel_sup = {:.3e}", div.rel_sup);
        println!("  complex gradient     rel_sup = {:.3e}", cgrad.rel_sup);
        println!("  chain-rule identity  rel_sup = {:.3e}", chain.identity.rel_sup);
        println!("  reduction condition  rel_sup = {:.3e} (analytic, no grid error)", chain.annihilation.rel_sup);
        println!("  quasilinear equation rel_sup = {:.3e}", quasi.rel_sup);
        println!("  coefficient-vs-gamma max dev = {:.3e}", chain.coeff_vs_gamma_max);
    }
}
