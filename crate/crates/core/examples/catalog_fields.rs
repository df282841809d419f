//! The structure-field catalog, the bold transform, and δ-monotonicity
//! audits with their distortion bounds.

use num_complex::Complex64;
use quasiconf::fields::{catalog, monotonicity_audit, to_bold};
use quasiconf::grid::GridSpec;

fn main() {
    let entries: Vec<(&str, Vec<(String, f64)>)> = vec![
        ("identity", vec![]),
        ("p_laplacian", vec![("p".into(), 4.0)]),
        ("p_laplacian", vec![("p".into(), 1.5)]),
        ("minimal_surface", vec![]),
        ("maximal_spacelike", vec![]),
        ("p_orthotropic", vec![("p".into(), 4.0)]),
    ];
    let probe = Complex64::new(0.3, 0.1);
    println!("catalog fields at xi = {probe}:");
    for (id, params) in &entries {
        let a = catalog(id, params).unwrap();
        let bold = to_bold(&a);
        println!(
            "  {:18} A(xi) = {:+.6}  bold(xi/2 conj) domain: {}",
            a.id,
            a.eval(probe),
            bold.domain.describe()
        );
    }

    println!("\nsampled monotonicity audits (64x64 over [-1,1]^2):");
    let spec = GridSpec::square(-1.0, 1.0, 64).unwrap();
    for (id, params) in &entries {
        let a = catalog(id, params).unwrap();
        let rep = monotonicity_audit(&a, &spec, None).unwrap();
        let p = a.param("p").map(|v| format!(" (p = {v})")).unwrap_or_default();
        match rep.k_distortion {
            Some(k) => println!("  {:18}{p} delta_max = {:.6}, K = {:.4}", a.id, rep.delta_max, k),
            None => println!(
                "  {:18}{p} not delta-monotone on the sample ({} violating points)",
                a.id, rep.violation_count
            ),
        }
    }
}
