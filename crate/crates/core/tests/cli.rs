//! End-to-end tests of the command-line front end: exit codes, JSON reports,
//! CSV artifacts, config files and byte-for-byte determinism.

use std::path::Path;
use std::process::{Command, Output};

use num_complex::Complex64;
use quasiconf::grid::{read_csv_path, write_csv_path, ComplexGridField, GridSpec, Region};

fn bin() -> Command {
    Command::new(env!("CARGO_BIN_EXE_quasiconf"))
}

fn run(args: &[&str]) -> Output {
    bin().args(args).output().expect("binary runs")
}

fn json_of(out: &Output) -> serde_json::Value {
    assert!(!out.stdout.is_empty(), "no stdout; stderr: {}", String::from_utf8_lossy(&out.stderr));
    serde_json::from_slice(&out.stdout).expect("stdout is JSON")
}

#[test]
fn analyze_p_laplacian_annulus() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        "--field",
        "p_laplacian",
        "--param",
        "p=4",
        "--region",
        "annulus:0.5,1",
        "--n",
        "96",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    let delta_max = v["monotonicity"]["delta_max"].as_f64().unwrap();
    assert!((delta_max - 0.8660254).abs() < 1e-4, "delta_max {delta_max}");
    assert_eq!(v["ellipticity"]["degenerate"], 0);
    assert_eq!(v["ellipticity"]["near_degenerate"], 0);
    assert!(dir.path().join("analyze_eta.csv").exists());
}

#[test]
fn analyze_orthotropic_reports_axis_violations() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        "--field",
        "p_orthotropic",
        "--param",
        "p=4",
        "--region",
        "square:-1,1",
        "--n",
        "129",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["monotonicity"]["delta_max"], 0.0);
    assert!(v["monotonicity"]["violation_count"].as_u64().unwrap() > 0);
    for p in v["monotonicity"]["violation_points"].as_array().unwrap() {
        let (x, y) = (p[0].as_f64().unwrap(), p[1].as_f64().unwrap());
        assert!(x.abs() < 1e-12 || y.abs() < 1e-12, "violation off-axis ({x}, {y})");
    }
    assert!(v["ellipticity"]["degenerate"].as_u64().unwrap() > 0); // the axes themselves
    assert!(v["ellipticity"]["elliptic"].as_u64().unwrap() > 0);
}

#[test]
fn analyze_identity_is_trivially_elliptic() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&["analyze", "--field", "identity", "--n", "32", "--out", dir.path().to_str().unwrap()]);
    assert_eq!(out.status.code(), Some(0));
    let v = json_of(&out);
    assert_eq!(v["ellipticity"]["sup_two_nu"], 0.0);
    assert_eq!(v["monotonicity"]["delta_max"], 1.0);
    assert_eq!(v["monotonicity"]["k_distortion"], 1.0);
}

#[test]
fn analyze_exit_code_two_outside_gradient_domain() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "analyze",
        "--field",
        "maximal_spacelike",
        "--region",
        "annulus:0.6,0.9",
        "--n",
        "24",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(2), "stderr: {}", String::from_utf8_lossy(&out.stderr));
}

#[test]
fn eta_emits_per_point_table() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "eta",
        "--field",
        "p_laplacian",
        "--param",
        "p=4",
        "--region",
        "annulus:0.5,1",
        "--n",
        "24",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0));
    let text = std::fs::read_to_string(dir.path().join("eta.csv")).unwrap();
    let mut lines = text.lines();
    assert_eq!(lines.next().unwrap(), "x,y,nu_re,nu_im,eta_re,eta_im,class");
    assert_eq!(lines.count(), 24 * 24);
    assert!(text.contains("elliptic"));
    assert!(text.contains("unsampled")); // square corners outside the annulus
}

#[test]
fn solve_phi_radial_matches_closed_form() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "solve-phi",
        "--field",
        "minimal_surface",
        "--method",
        "radial",
        "--t",
        "0.05,2",
        "--n",
        "48",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["solution"]["method"], "radial_ode");
    assert_eq!(v["solution"]["jacobian_sign"], "positive");
    assert!(v["solution"]["residual"].as_f64().unwrap() < 1e-8);
    // the emitted grid matches the closed form up to the outer normalization
    let phi = read_csv_path(dir.path().join("phi.csv")).unwrap();
    let closed = |z: Complex64| 2.0 * z / (1.0 + (1.0 + 4.0 * z.norm_sqr()).sqrt());
    // outer-identity normalization rescales the closed form by ρ(2) ↦ 2
    let scale = 2.0 / closed(Complex64::new(2.0, 0.0)).re;
    let mut worst = 0.0f64;
    phi.for_each_valid(|_, _, z, w| worst = worst.max((w - scale * closed(z)).norm()));
    assert!(worst < 1e-7, "deviation from rescaled closed form {worst}");
}

#[test]
fn solve_phi_grid_constant_coefficient() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "solve-phi",
        "--method",
        "grid",
        "--eta",
        "const:0.3",
        "--n",
        "64",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["solution"]["method"], "neumann_grid");
    let phi = read_csv_path(dir.path().join("phi.csv")).unwrap();
    let mut worst = 0.0f64;
    phi.for_each_valid(|_, _, z, w| worst = worst.max((w - (z + 0.3 * z.conj())).norm()));
    assert!(worst <= 1e-8, "affine deviation {worst}");
    assert!(dir.path().join("solve_phi.json").exists());
}

#[test]
fn verify_harmonic_p2_is_clean() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--field",
        "p_laplacian",
        "--param",
        "p=2",
        "--solution",
        "harmonic",
        "--checks",
        "div,cgrad",
        "--n",
        "64",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    for rep in v["reports"].as_array().unwrap() {
        let rel = rep["report"]["rel_sup"].as_f64().unwrap();
        assert!(rel <= 1e-10, "{}: rel_sup {rel}", rep["check"]);
    }
}

#[test]
fn verify_scherk_full_bundle() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--field",
        "minimal_surface",
        "--solution",
        "scherk",
        "--checks",
        "all",
        "--n",
        "128",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let reports = v["reports"].as_array().unwrap();
    let find = |check: &str| reports.iter().find(|r| r["check"] == check).unwrap_or_else(|| panic!("{check} missing"));
    assert!(find("div")["report"]["rel_sup"].as_f64().unwrap() <= 5e-3);
    assert!(find("cgrad")["report"]["rel_sup"].as_f64().unwrap() <= 5e-3);
    assert!(find("chain")["annihilation"]["rel_sup"].as_f64().unwrap() <= 1e-8);
    assert!(find("quasilinear")["report"]["rel_sup"].as_f64().unwrap() <= 5e-3);
    assert_eq!(find("hodograph")["annihilating_convention"], "direct");
    let audits = find("audit")["audits"].as_array().unwrap();
    assert_eq!(audits.len(), 4);
    for a in audits {
        assert_eq!(a["distinct"], true, "audit {} not distinct", a["id"]);
    }
}

#[test]
fn verify_p4_radial_pipeline() {
    let dir = tempfile::tempdir().unwrap();
    let out = run(&[
        "verify",
        "--field",
        "p_laplacian",
        "--param",
        "p=4",
        "--solution",
        "radial",
        "--checks",
        "div,cgrad,chain,quasilinear",
        "--n",
        "128",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    let reports = v["reports"].as_array().unwrap();
    let find = |check: &str| reports.iter().find(|r| r["check"] == check).unwrap_or_else(|| panic!("{check} missing"));
    assert!(find("div")["report"]["rel_sup"].as_f64().unwrap() <= 5e-3);
    assert!(find("cgrad")["report"]["rel_sup"].as_f64().unwrap() <= 5e-3);
    assert!(find("chain")["annihilation"]["rel_sup"].as_f64().unwrap() <= 1e-8);
    assert!(find("quasilinear")["report"]["rel_sup"].as_f64().unwrap() <= 5e-3);
}

#[test]
fn factorize_manufactured_composition_via_csv() {
    let dir = tempfile::tempdir().unwrap();
    let input = dir.path().join("F.csv");
    let spec = GridSpec::square(-1.0, 1.0, 96).unwrap();
    let region = Region::Annulus { inner: 0.35, outer: 0.95 };
    let f = ComplexGridField::sample_region(spec, &region, |z| {
        let w = z + 0.2 * z.conj();
        w * w
    });
    write_csv_path(&f, &input).unwrap();

    // no --coeff: the measured ratio F_z̄/F_z (here exactly 0.2) is used
    let out = run(&[
        "factorize",
        "--input",
        input.to_str().unwrap(),
        "--k-max",
        "0.8",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(out.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&out.stderr));
    let v = json_of(&out);
    assert_eq!(v["failed"], false);
    assert!(v["holomorphy_residual"].as_f64().unwrap() <= 1e-2);
    assert!(v["linear_residual"]["rel_sup"].as_f64().unwrap() <= 1e-2);
    for name in ["chi.csv", "g.csv", "h.csv", "factorize.json"] {
        assert!(dir.path().join(name).exists(), "{name} missing");
    }
}

#[test]
fn identical_configs_give_byte_identical_reports() {
    let dir = tempfile::tempdir().unwrap();
    let args = [
        "analyze",
        "--field",
        "p_laplacian",
        "--param",
        "p=3",
        "--region",
        "annulus:0.4,1",
        "--n",
        "48",
        "--seed",
        "7",
        "--out",
        dir.path().to_str().unwrap(),
    ];
    let a = run(&args);
    let b = run(&args);
    assert_eq!(a.status.code(), Some(0));
    assert_eq!(a.stdout, b.stdout, "reports differ between identical runs");
}

#[test]
fn config_file_reproduces_flag_run(){
    let dir = tempfile::tempdir().unwrap();
    let cfg_path = dir.path().join("run.cfg");
    std::fs::write(
        &cfg_path,
        format!(
            "# analyze configuration\nfield=p_laplacian\nparam=p=4\nregion=annulus:0.5,1\nn=48\nout={}\n",
            dir.path().display()
        ),
    )
    .unwrap();
    let via_config = run(&["analyze", "--config", cfg_path.to_str().unwrap()]);
    let via_flags = run(&[
        "analyze",
        "--field",
        "p_laplacian",
        "--param",
        "p=4",
        "--region",
        "annulus:0.5,1",
        "--n",
        "48",
        "--out",
        dir.path().to_str().unwrap(),
    ]);
    assert_eq!(via_config.status.code(), Some(0), "stderr: {}", String::from_utf8_lossy(&via_config.stderr));
    assert_eq!(via_config.stdout, via_flags.stdout);
}

#[test]
fn usage_errors_exit_one() {
    // missing required option
    let out = run(&["analyze"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown flag
    let out = run(&["analyze", "--field", "identity", "--bogus"]);
    assert_eq!(out.status.code(), Some(1));
    // unknown subcommand
    let out = run(&["frobnicate"]);
    assert_eq!(out.status.code(), Some(1));
    // malformed region
    let out = run(&["analyze", "--field", "identity", "--region", "blob:1"]);
    assert_eq!(out.status.code(), Some(1));
}

#[test]
fn csv_roundtrip_through_filesystem_is_bit_exact() {
    let dir = tempfile::tempdir().unwrap();
    let path: &Path = &dir.path().join("grid.csv");
    let spec = GridSpec::square(-1.0, 1.0, 16).unwrap();
    let f = ComplexGridField::sample(spec, |z| (z * Complex64::new(1.0, -0.3)).exp() / 7.0);
    write_csv_path(&f, path).unwrap();
    let g = read_csv_path(path).unwrap();
    for k in 0..spec.len() {
        assert_eq!(f.values()[k].re.to_bits(), g.values()[k].re.to_bits());
        assert_eq!(f.values()[k].im.to_bits(), g.values()[k].im.to_bits());
    }
}
