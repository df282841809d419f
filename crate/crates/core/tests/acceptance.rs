//! Acceptance suite: one test per criterion, each printing a PASS line with
//! the measured numbers (run with `--nocapture` to see them).

use std::time::{Duration, Instant};

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use quasiconf::audit::audit_variant_formulas;
use quasiconf::beltrami::closed::{minimal_surface_gamma0, phi_minimal_surface, phi_power_stretch};
use quasiconf::beltrami::{
    solve_phi_grid, solve_phi_radial, solve_phi_radial_from_eta, GridSolveOptions, JacobianSign,
    RadialNormalization,
};
use quasiconf::conformal::{compute_eta, compute_nu, eta_from_nu, gamma_quotient, nu_at};
use quasiconf::fields::{catalog, monotonicity_audit, to_bold};
use quasiconf::grid::{wirtinger_fd, ComplexGridField, GridSpec, Region};
use quasiconf::hodograph::{factorize, FactorizeOptions};
use quasiconf::solutions::reference;
use quasiconf::verify::{
    coefficient_identity_deviation, residual_chain_rule, residual_complex_gradient,
    residual_divergence, residual_quasilinear,
};

fn c(re: f64, im: f64) -> Complex64 {
    Complex64::new(re, im)
}

fn wrap_angle(a: f64) -> f64 {
    let mut a = a % std::f64::consts::TAU;
    if a <= -std::f64::consts::PI {
        a += std::f64::consts::TAU;
    } else if a > std::f64::consts::PI {
        a -= std::f64::consts::TAU;
    }
    a
}

fn budget(start: Instant, limit_s: u64, label: &str) {
    let elapsed = start.elapsed();
    assert!(
        elapsed < Duration::from_secs(limit_s),
        "{label}: runtime {elapsed:?} exceeds {limit_s}s budget"
    );
}

#[test]
fn criterion_01_branch_quadratic_suite() {
    let start = Instant::now();
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let mut worst_quad = 0.0f64;
    let mut worst_phase = 0.0f64;
    let mut worst_gamma = 0.0f64;
    for _ in 0..10_000 {
        let r = 0.499 * rng.random::<f64>().sqrt();
        let th = std::f64::consts::TAU * rng.random::<f64>();
        let nu = Complex64::from_polar(r.max(1e-14), th);
        let eta = eta_from_nu(nu).expect("|nu| < 1/2");
        worst_quad = worst_quad.max((nu + eta + nu.conj() * eta * eta).norm());
        assert!(eta.norm() < 1.0);
        worst_phase = worst_phase.max(wrap_angle(eta.arg() - nu.arg() - std::f64::consts::PI).abs());
        let g = gamma_quotient(nu, eta).unwrap();
        worst_gamma = worst_gamma.max((g + eta.conj()).norm()).max((g.norm() - eta.norm()).abs());
    }
    assert!(worst_quad <= 1e-12, "quadratic residual {worst_quad}");
    assert!(worst_phase <= 1e-10, "phase deviation {worst_phase}");
    assert!(worst_gamma <= 1e-12, "gamma deviation {worst_gamma}");
    budget(start, 1, "criterion 1");
    println!(
        "ACCEPTANCE 1 branch/quadratic suite: PASS (quad {worst_quad:.2e}, phase {worst_phase:.2e}, gamma {worst_gamma:.2e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_02_p_laplacian_closed_loop() {
    let start = Instant::now();
    let mut worst_eta = 0.0f64;
    let mut worst_phi = 0.0f64;
    for p in [1.5, 3.0, 4.0, 10.0] {
        let delta = (p - 1.0f64).sqrt();
        let coeff = (delta - 1.0) / (delta + 1.0);
        let bold = to_bold(&catalog("p_laplacian", &[("p".into(), p)]).unwrap());

        // η field from analytic derivatives against the closed form
        let spec = GridSpec::square(-1.0, 1.0, 64).unwrap();
        let region = Region::Annulus { inner: 0.3, outer: 1.0 };
        let nu = compute_nu(&bold, &spec, Some(&region));
        let eta = compute_eta(&nu);
        eta.for_each_valid(|_, _, z, e| {
            let expect = z * z / z.norm_sqr() * coeff;
            worst_eta = worst_eta.max((e - expect).norm());
        });
        assert!(eta.valid_count() > 1000, "p={p}: elliptic sample too small");

        // radial solve reproduces the power stretching |z|^{δ−1}z
        let bold_for_eta = bold.clone();
        let sol = solve_phi_radial_from_eta(
            move |z| eta_from_nu(nu_at(&bold_for_eta, z).0).unwrap_or(c(f64::NAN, f64::NAN)),
            (0.1, 1.0),
            RadialNormalization::OuterIdentity,
        )
        .unwrap();
        for k in 0..=160 {
            let t = 0.1 * 10.0f64.powf(k as f64 / 160.0);
            let z = Complex64::from_polar(t, 0.41 * k as f64);
            let got = sol.forward(z).unwrap();
            let expect = t.powf(delta - 1.0) * z;
            worst_phi = worst_phi.max((got - expect).norm());
        }
    }
    assert!(worst_eta <= 1e-10, "eta field deviation {worst_eta}");
    assert!(worst_phi <= 1e-8, "radial-ODE deviation {worst_phi}");
    budget(start, 5, "criterion 2");
    println!(
        "ACCEPTANCE 2 p-Laplacian closed loop: PASS (eta {worst_eta:.2e}, phi {worst_phi:.2e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_03_minimal_surface_closed_loop() {
    let start = Instant::now();
    let closed = phi_minimal_surface();
    let outer = closed.eval(c(2.0, 0.0)).re;
    let sol = solve_phi_radial(
        minimal_surface_gamma0,
        (0.05, 2.0),
        RadialNormalization::OuterValue(outer),
    )
    .unwrap();
    let mut worst_phi = 0.0f64;
    for k in 0..=200 {
        let t = 0.05 * 40.0f64.powf(k as f64 / 200.0);
        let z = Complex64::from_polar(t, 0.7 * k as f64);
        worst_phi = worst_phi.max((sol.forward(z).unwrap() - closed.eval(z)).norm());
    }
    assert!(worst_phi <= 1e-8, "phi deviation {worst_phi}");

    // coefficient identity −conj(η(Φ⁻¹(F))) = conj(F)² at 10³ sample points,
    // inverting through the radial solution
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let samples: Vec<Complex64> = (0..1000)
        .map(|_| {
            let t = 0.06 + 1.9 * rng.random::<f64>();
            Complex64::from_polar(t, std::f64::consts::TAU * rng.random::<f64>())
        })
        .collect();
    let dev = coefficient_identity_deviation(
        |w| sol.forward(w),
        |v| sol.inverse(v),
        |w| closed.eta(w),
        |value| value.conj() * value.conj(),
        &samples,
    )
    .unwrap();
    assert!(dev <= 1e-6, "coefficient identity deviation {dev}");
    budget(start, 5, "criterion 3");
    println!(
        "ACCEPTANCE 3 minimal-surface closed loop: PASS (phi {worst_phi:.2e}, coefficient {dev:.2e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_04_pde_residual_suite() {
    let start = Instant::now();
    let minimal = catalog("minimal_surface", &[]).unwrap();
    let bold_minimal = to_bold(&minimal);
    let scherk = reference("minimal_surface", "scherk", &[]).unwrap();
    let plap = catalog("p_laplacian", &[("p".into(), 4.0)]).unwrap();
    let bold_plap = to_bold(&plap);
    let radial = reference("p_laplacian", "radial", &[("p".into(), 4.0)]).unwrap();

    let mut lines = Vec::new();
    for (field, bold, sol, label) in [
        (&minimal, &bold_minimal, &scherk, "scherk"),
        (&plap, &bold_plap, &radial, "p4-radial"),
    ] {
        let run = |n: usize| {
            let spec = sol.region.bounding_spec(n).unwrap();
            let div = residual_divergence(field, &sol.sample_u(&spec)).unwrap();
            let cgrad = residual_complex_gradient(bold, &sol.sample_u_z(&spec)).unwrap();
            (div.rel_sup, cgrad.rel_sup)
        };
        let (div_c, cgrad_c) = run(256);
        let (div_f, cgrad_f) = run(512);
        assert!(div_c <= 5e-3, "{label}: div rel_sup {div_c} at 256");
        assert!(cgrad_c <= 5e-3, "{label}: cgrad rel_sup {cgrad_c} at 256");
        assert!(div_c / div_f >= 3.0, "{label}: div ratio {}", div_c / div_f);
        assert!(cgrad_c / cgrad_f >= 3.0, "{label}: cgrad ratio {}", cgrad_c / cgrad_f);
        lines.push(format!(
            "{label}: div {div_c:.2e}->{div_f:.2e}, cgrad {cgrad_c:.2e}->{cgrad_f:.2e}"
        ));
    }
    budget(start, 30, "criterion 4");
    println!("ACCEPTANCE 4 residual suite: PASS ({}; {:?})", lines.join("; "), start.elapsed());
}

#[test]
fn criterion_05_quasilinear_reduction() {
    let start = Instant::now();
    let mut lines = Vec::new();

    // p-Laplacian pipeline with the power stretching
    {
        let p = 4.0;
        let delta = (p - 1.0f64).sqrt();
        let phi = phi_power_stretch(delta);
        let bold = to_bold(&catalog("p_laplacian", &[("p".into(), p)]).unwrap());
        let sol = reference("p_laplacian", "radial", &[("p".into(), p)]).unwrap();
        let spec = sol.region.bounding_spec(256).unwrap();
        let f = sol.sample_u_z(&spec);
        let big_f = f.map(|_, w| phi.eval(w));
        let eta_fn = phi.eta_fn();
        let quasi = residual_quasilinear(
            &big_f,
            |v| {
                let w = phi.inverse(v);
                (w.re.is_finite() && w.im.is_finite()).then_some(w)
            },
            |w| eta_fn(w),
        )
        .unwrap();
        assert!(quasi.rel_sup <= 5e-3, "p-laplacian quasilinear {}", quasi.rel_sup);
        let chain =
            residual_chain_rule(&phi, &f, |w| nu_at(&bold, w).0.conj(), |w| nu_at(&bold, w).0).unwrap();
        assert!(chain.annihilation.rel_sup <= 1e-8, "p-laplacian annihilation {}", chain.annihilation.rel_sup);
        assert!(chain.nz_min > 0.0, "non-degeneracy guard {}", chain.nz_min);
        lines.push(format!(
            "p4: quasi {:.2e}, annihilation {:.2e}",
            quasi.rel_sup, chain.annihilation.rel_sup
        ));
    }

    // minimal-surface pipeline with the closed-form homeomorphism
    {
        let phi = phi_minimal_surface();
        let bold = to_bold(&catalog("minimal_surface", &[]).unwrap());
        let sol = reference("minimal_surface", "scherk", &[]).unwrap();
        let spec = sol.region.bounding_spec(256).unwrap();
        let f = sol.sample_u_z(&spec);
        let big_f = f.map(|_, w| phi.eval(w));
        let eta_fn = phi.eta_fn();
        let quasi = residual_quasilinear(&big_f, |v| Some(phi.inverse(v)), |w| eta_fn(w)).unwrap();
        assert!(quasi.rel_sup <= 5e-3, "minimal quasilinear {}", quasi.rel_sup);
        let chain =
            residual_chain_rule(&phi, &f, |w| nu_at(&bold, w).0.conj(), |w| nu_at(&bold, w).0).unwrap();
        assert!(chain.annihilation.rel_sup <= 1e-8, "minimal annihilation {}", chain.annihilation.rel_sup);
        lines.push(format!(
            "minimal: quasi {:.2e}, annihilation {:.2e}",
            quasi.rel_sup, chain.annihilation.rel_sup
        ));
    }

    budget(start, 30, "criterion 5");
    println!("ACCEPTANCE 5 quasilinear reduction: PASS ({}; {:?})", lines.join("; "), start.elapsed());
}

#[test]
fn criterion_06_grid_beltrami_solver() {
    let start = Instant::now();

    // η ≡ 0: identity, bit for bit
    {
        let spec = GridSpec::periodic(-1.0, 1.0, -1.0, 1.0, 64, 64).unwrap();
        let eta = ComplexGridField::sample(spec, |_| c(0.0, 0.0));
        let sol = solve_phi_grid(&eta, &GridSolveOptions { pad_factor: 1, ..Default::default() }).unwrap();
        let mut dev = 0.0f64;
        sol.phi_grid.as_ref().unwrap().for_each_valid(|_, _, z, w| dev = dev.max((w - z).norm()));
        assert_eq!(dev, 0.0, "identity must be exact");
    }

    // constant η = 0.3: affine solution on the interior
    let affine_dev = {
        let spec = GridSpec::periodic(-1.0, 1.0, -1.0, 1.0, 256, 256).unwrap();
        let eta = ComplexGridField::sample(spec, |_| c(0.3, 0.0));
        let sol = solve_phi_grid(&eta, &GridSolveOptions { pad_factor: 1, ..Default::default() }).unwrap();
        let mut dev = 0.0f64;
        sol.phi_grid.as_ref().unwrap().for_each_valid(|_, _, z, w| {
            dev = dev.max((w - (z + 0.3 * z.conj())).norm());
        });
        assert!(dev <= 1e-8, "affine deviation {dev}");
        assert_eq!(sol.jacobian_sign, JacobianSign::Positive);
        dev
    };

    // conformal equivalence against the radial solver: the grid solver gets
    // the minimal-surface coefficient on the annulus 0.2 ≤ |z| ≤ 0.8 with a
    // smooth roll-off to the zero extension (a hard cut would put a jump in
    // the coefficient and its ringing into the comparison); the two solutions
    // are composed where the coefficient is untouched
    let mu_sup = {
        let smootherstep = |x: f64| {
            let x: f64 = x.clamp(0.0, 1.0);
            x * x * x * (x * (6.0 * x - 15.0) + 10.0)
        };
        let window = move |t: f64| {
            smootherstep((t - 0.2) / 0.1) * (1.0 - smootherstep((t - 0.7) / 0.1))
        };
        let spec = GridSpec::square(-0.9, 0.9, 256).unwrap();
        let region = Region::Annulus { inner: 0.19, outer: 0.81 };
        let eta = ComplexGridField::sample_region(spec, &region, |z| {
            z * z / z.norm_sqr() * (minimal_surface_gamma0(z.norm()) * window(z.norm()))
        });
        let grid_sol = solve_phi_grid(&eta, &GridSolveOptions::default()).unwrap();
        assert!(grid_sol.residual <= 1e-8, "grid residual {}", grid_sol.residual);
        let radial_sol = solve_phi_radial(
            minimal_surface_gamma0,
            (0.25, 0.75),
            RadialNormalization::OuterIdentity,
        )
        .unwrap();
        // compose on an annulus inside the radial image of [0.35, 0.65]
        let r_lo = radial_sol.forward(c(0.35, 0.0)).unwrap().norm();
        let r_hi = radial_sol.forward(c(0.65, 0.0)).unwrap().norm();
        let w_spec = GridSpec::square(-r_hi - 0.05, r_hi + 0.05, 256).unwrap();
        let w_region = Region::Annulus { inner: r_lo, outer: r_hi };
        let composed = ComplexGridField::sample_region(w_spec, &w_region, |w| {
            match radial_sol.inverse(w).and_then(|z| grid_sol.forward(z)) {
                Some(v) => v,
                None => c(f64::NAN, f64::NAN),
            }
        });
        let (gz, gzb) = wirtinger_fd(&composed).unwrap();
        let mut mu_sup = 0.0f64;
        gz.for_each_valid(|i, j, _, a| {
            if gzb.is_valid(i, j) && a.norm() > 0.0 {
                mu_sup = mu_sup.max(gzb.get(i, j).norm() / a.norm());
            }
        });
        assert!(mu_sup <= 1e-3, "composed Beltrami coefficient {mu_sup}");
        mu_sup
    };

    budget(start, 60, "criterion 6");
    println!(
        "ACCEPTANCE 6 grid Beltrami solver: PASS (identity exact, affine {affine_dev:.2e}, equivalence {mu_sup:.2e}, {:?})",
        start.elapsed()
    );
}

#[test]
fn criterion_07_factorization() {
    let start = Instant::now();
    let run = |n: usize| {
        let spec = GridSpec::square(-1.0, 1.0, n).unwrap();
        let region = Region::Annulus { inner: 0.35, outer: 0.95 };
        let f = ComplexGridField::sample_region(spec, &region, |z| {
            let w = z + 0.2 * z.conj();
            w * w
        });
        factorize(&f, |_| c(0.2, 0.0), &FactorizeOptions::default()).unwrap()
    };
    let coarse = run(128);
    assert!(coarse.holomorphy_residual <= 1e-2, "holomorphy {}", coarse.holomorphy_residual);
    assert!(coarse.linear_residual.rel_sup <= 1e-2, "linear {}", coarse.linear_residual.rel_sup);
    assert!(!coarse.failed);
    let fine = run(256);
    assert!(
        fine.holomorphy_residual < coarse.holomorphy_residual,
        "no refinement: {} -> {}",
        coarse.holomorphy_residual,
        fine.holomorphy_residual
    );
    budget(start, 60, "criterion 7");
    println!(
        "ACCEPTANCE 7 factorization: PASS (holomorphy {:.2e} -> {:.2e}, linear {:.2e}, {:?})",
        coarse.holomorphy_residual,
        fine.holomorphy_residual,
        coarse.linear_residual.rel_sup,
        start.elapsed()
    );
}

#[test]
fn criterion_08_monotonicity_audits() {
    let start = Instant::now();

    // p-Laplacian p = 4 on an annulus sample: delta_max = √3/2 ± 1e−4
    let plap = catalog("p_laplacian", &[("p".into(), 4.0)]).unwrap();
    let spec = GridSpec::square(-1.0, 1.0, 96).unwrap();
    let rep = quasiconf::fields::monotonicity_audit_region(
        &plap,
        &spec,
        Some(&Region::Annulus { inner: 0.5, outer: 1.0 }),
        None,
    )
    .unwrap();
    let expect = 3.0f64.sqrt() / 2.0;
    assert!((rep.delta_max - expect).abs() <= 1e-4, "delta_max {}", rep.delta_max);

    // p-orthotropic p = 4 across the axes: nowhere δ-monotone, violations on
    // the axes; branch-corrected η vanishes on the diagonal and approaches ±1
    // at the axes
    let ortho = catalog("p_orthotropic", &[("p".into(), 4.0)]).unwrap();
    let axes_spec = GridSpec::new(-1.0, 1.0, -1.0, 1.0, 129, 129).unwrap();
    let rep2 = monotonicity_audit(&ortho, &axes_spec, None).unwrap();
    assert_eq!(rep2.delta_max, 0.0, "orthotropic flagged monotone");
    assert!(rep2.violation_count > 0);
    for p in &rep2.violation_points {
        assert!(p[0].abs() < 1e-12 || p[1].abs() < 1e-12, "violation off the axes: {p:?}");
    }

    let bold = to_bold(&ortho);
    let eta_at = |x: f64, y: f64| eta_from_nu(nu_at(&bold, c(x, y)).0).unwrap();
    assert!(eta_at(0.5, 0.5).norm() < 1e-15, "eta nonzero on the diagonal");
    assert!(eta_at(1.0, 1e-4).re > 0.999, "eta near the x-axis: {}", eta_at(1.0, 1e-4).re);
    assert!(eta_at(1e-4, 1.0).re < -0.999, "eta near the y-axis: {}", eta_at(1e-4, 1.0).re);

    budget(start, 5, "criterion 8");
    println!(
        "ACCEPTANCE 8 monotonicity audits: PASS (delta_max {:.6}, orthotropic violations {}, {:?})",
        rep.delta_max,
        rep2.violation_count,
        start.elapsed()
    );
}

#[test]
fn criterion_09_variant_formula_ledger() {
    let start = Instant::now();
    let audits = audit_variant_formulas();
    let required = [
        "maximal_spacelike_dbar_sign",
        "maximal_spacelike_nu_scale",
        "p_orthotropic_eta_branch",
    ];
    for id in required {
        let audit = audits.iter().find(|a| a.id == id).unwrap_or_else(|| panic!("missing audit {id}"));
        assert!(
            audit.sup_deviation >= 1e-2,
            "{id}: deviation {} too small to be a real discrepancy",
            audit.sup_deviation
        );
        assert!(
            audit.oracle_consistency <= 1e-6,
            "{id}: oracle consistency {} — the reference side is not trustworthy",
            audit.oracle_consistency
        );
    }
    budget(start, 5, "criterion 9");
    let summary: Vec<String> = audits
        .iter()
        .map(|a| format!("{} dev {:.2e}", a.id, a.sup_deviation))
        .collect();
    println!("ACCEPTANCE 9 variant-formula ledger: PASS ({}; {:?})", summary.join("; "), start.elapsed());
}
