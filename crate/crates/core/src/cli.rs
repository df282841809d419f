//! Command implementations behind the binary front end: reproducible configs
//! in, JSON reports and CSV fields out.
//!
//! Exit-code contract: 0 success, 1 usage error, 2 analyze found no elliptic
//! (or near-degenerate) points in the sample.

use std::io::Write;
use std::path::{Path, PathBuf};

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use serde_json::json;

use crate::audit::audit_variant_formulas;
use crate::beltrami::closed::{phi_minimal_surface, phi_power_stretch, ClosedFormPhi};
use crate::beltrami::{
    solve_phi_grid, solve_phi_radial_from_eta, GridSolveOptions, PhiSolution, RadialNormalization,
};
use crate::conformal::{eta_from_nu, nu_at, ConformalData, EllipticityReport};
use crate::fields::{catalog, monotonicity_audit_region, to_bold, DomainN, StructureField};
use crate::grid::{
    read_csv_path, wirtinger_fd, write_csv_path, BicubicSampler, ComplexGridField, GridSpec, Region,
};
use crate::hodograph::{factorize, FactorizeOptions};
use crate::solutions::reference;
use crate::verify::{
    hodograph_convention_residuals, residual_chain_rule, residual_complex_gradient,
    residual_divergence, residual_quasilinear,
};
use crate::{Error, Result};

/// Fully serializable run configuration; a saved config reproduces a run
/// byte-for-byte given the same binary.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RunConfig {
    pub command: String,
    pub field: Option<String>,
    pub params: Vec<(String, f64)>,
    pub region: Option<String>,
    pub n: usize,
    pub tol: f64,
    pub seed: u64,
    pub method: Option<String>,
    pub eta: Option<String>,
    pub coeff: Option<String>,
    pub t_range: Option<(f64, f64)>,
    pub k_max: f64,
    pub solution: Option<String>,
    pub checks: Option<String>,
    pub input: Option<String>,
    pub out: Option<String>,
    pub delta: Option<f64>,
}

impl RunConfig {
    pub fn new(command: &str) -> Self {
        RunConfig {
            command: command.into(),
            field: None,
            params: Vec::new(),
            region: None,
            n: 128,
            tol: 1e-10,
            seed: 0,
            method: None,
            eta: None,
            coeff: None,
            t_range: None,
            k_max: 0.999,
            solution: None,
            checks: None,
            input: None,
            out: None,
            delta: None,
        }
    }

    fn out_dir(&self) -> PathBuf {
        PathBuf::from(self.out.clone().unwrap_or_else(|| ".".into()))
    }
}

/// Parse `key=value` assignments as accepted in config files and `--param`.
pub fn parse_param(s: &str) -> Result<(String, f64)> {
    let (k, v) = s
        .split_once('=')
        .ok_or_else(|| Error::Usage(format!("expected key=value, got `{s}`")))?;
    let v = v
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Usage(format!("parameter `{k}`: {e}")))?;
    Ok((k.trim().to_string(), v))
}

/// Region grammar: `square:lo,hi` | `disk:r` | `annulus:r0,r1` |
/// `rect:x0,x1,y0,y1`.
pub fn parse_region(s: &str) -> Result<Region> {
    let (kind, rest) = s
        .split_once(':')
        .ok_or_else(|| Error::Usage(format!("expected kind:args, got `{s}`")))?;
    let nums: Vec<f64> = rest
        .split(',')
        .map(|t| t.trim().parse::<f64>().map_err(|e| Error::Usage(format!("region `{s}`: {e}"))))
        .collect::<Result<_>>()?;
    match (kind, nums.as_slice()) {
        ("square", [lo, hi]) => Ok(Region::square(*lo, *hi)),
        ("disk", [r]) => Ok(Region::Disk { radius: *r }),
        ("annulus", [r0, r1]) => Ok(Region::Annulus { inner: *r0, outer: *r1 }),
        ("rect", [x0, x1, y0, y1]) => Ok(Region::Rect { x0: *x0, x1: *x1, y0: *y0, y1: *y1 }),
        _ => Err(Error::Usage(format!("unrecognized region `{s}`"))),
    }
}

/// Apply one config-file assignment (same keys as the CLI flags).
pub fn apply_kv(cfg: &mut RunConfig, key: &str, value: &str) -> Result<()> {
    let parse_f64 = |v: &str| v.parse::<f64>().map_err(|e| Error::Usage(format!("{key}: {e}")));
    match key {
        "field" => cfg.field = Some(value.into()),
        "param" => cfg.params.push(parse_param(value)?),
        "region" => cfg.region = Some(value.into()),
        "method" => cfg.method = Some(value.into()),
        "eta" => cfg.eta = Some(value.into()),
        "coeff" => cfg.coeff = Some(value.into()),
        "solution" => cfg.solution = Some(value.into()),
        "checks" => cfg.checks = Some(value.into()),
        "input" => cfg.input = Some(value.into()),
        "out" => cfg.out = Some(value.into()),
        "n" => cfg.n = value.parse().map_err(|e| Error::Usage(format!("n: {e}")))?,
        "seed" => cfg.seed = value.parse().map_err(|e| Error::Usage(format!("seed: {e}")))?,
        "tol" => cfg.tol = parse_f64(value)?,
        "delta" => cfg.delta = Some(parse_f64(value)?),
        "k-max" | "k_max" => cfg.k_max = parse_f64(value)?,
        "t" => {
            let (a, b) = value
                .split_once(',')
                .ok_or_else(|| Error::Usage(format!("t: expected lo,hi, got `{value}`")))?;
            cfg.t_range = Some((parse_f64(a.trim())?, parse_f64(b.trim())?));
        }
        other => return Err(Error::Usage(format!("unknown config key `{other}`"))),
    }
    Ok(())
}

/// Load `key=value` lines (UTF-8; `#` comments and blank lines ignored).
pub fn load_config_file(path: &Path) -> Result<Vec<(String, String)>> {
    let text = std::fs::read_to_string(path)?;
    let mut out = Vec::new();
    for (lineno, line) in text.lines().enumerate() {
        let line = line.trim();
        if line.is_empty() || line.starts_with('#') {
            continue;
        }
        let (k, v) = line
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("config line {}: expected key=value", lineno + 1)))?;
        out.push((k.trim().to_string(), v.trim().to_string()));
    }
    Ok(out)
}

fn required<'a, T>(v: &'a Option<T>, what: &str) -> Result<&'a T> {
    v.as_ref().ok_or_else(|| Error::Usage(format!("missing required option --{what}")))
}

fn build_field(cfg: &RunConfig) -> Result<StructureField> {
    let id = required(&cfg.field, "field")?;
    catalog(id, &cfg.params)
}

fn default_region(domain: &DomainN) -> Region {
    match *domain {
        DomainN::Plane => Region::square(-1.0, 1.0),
        DomainN::Disk { radius } => Region::Disk { radius: 0.9 * radius },
        DomainN::QuadrantOne => Region::Rect { x0: 0.05, x1: 1.0, y0: 0.05, y1: 1.0 },
        DomainN::Annulus { inner, outer } => Region::Annulus { inner, outer },
    }
}

fn resolve_region(cfg: &RunConfig, domain: &DomainN) -> Result<Region> {
    match &cfg.region {
        Some(s) => parse_region(s),
        None => Ok(default_region(domain)),
    }
}

fn fmt17(v: f64) -> String {
    format!("{v:.16e}")
}

/// Per-point ν/η CSV: `x,y,nu_re,nu_im,eta_re,eta_im,class`.
fn write_eta_csv(data: &ConformalData, path: &Path) -> Result<()> {
    let f = std::fs::File::create(path)?;
    let mut w = std::io::BufWriter::new(f);
    writeln!(w, "x,y,nu_re,nu_im,eta_re,eta_im,class")?;
    let spec = data.spec();
    for j in 0..spec.ny {
        for i in 0..spec.nx {
            let z = spec.point(i, j);
            let nu = data.nu.nu.get(i, j);
            let eta = data.eta.get(i, j);
            writeln!(
                w,
                "{},{},{},{},{},{},{}",
                fmt17(z.re),
                fmt17(z.im),
                fmt17(nu.re),
                fmt17(nu.im),
                fmt17(eta.re),
                fmt17(eta.im),
                data.nu.class_at(i, j).as_str()
            )?;
        }
    }
    Ok(())
}

struct ConformalPass {
    bold: StructureField,
    region: Region,
    spec: GridSpec,
    report: EllipticityReport,
    csv: PathBuf,
}

fn conformal_pass(cfg: &RunConfig, csv_name: &str) -> Result<ConformalPass> {
    let a = build_field(cfg)?;
    let bold = to_bold(&a);
    let region = resolve_region(cfg, &bold.domain)?;
    let spec = region.bounding_spec(cfg.n)?;
    let data = ConformalData::compute(&bold, &spec, Some(&region))?;
    let report = crate::conformal::ellipticity_report(&data);
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join(csv_name);
    write_eta_csv(&data, &csv)?;
    Ok(ConformalPass { bold, region, spec, report, csv })
}

/// `analyze`: ellipticity classification plus δ-monotonicity audit.
pub fn cmd_analyze(cfg: &RunConfig) -> Result<(serde_json::Value, i32)> {
    let pass = conformal_pass(cfg, "analyze_eta.csv")?;
    // a sample with no finite derivatives still produces a report (the
    // ellipticity side already tells the story); other errors propagate
    let mono = match monotonicity_audit_region(&pass.bold, &pass.spec, Some(&pass.region), cfg.delta) {
        Ok(rep) => serde_json::to_value(rep)?,
        Err(Error::EmptySample) => json!({ "note": "no finite-derivative points in sample" }),
        Err(e) => return Err(e),
    };
    let exit = if pass.report.elliptic + pass.report.near_degenerate == 0 { 2 } else { 0 };
    Ok((
        json!({
            "config": cfg,
            "region": pass.region.describe(),
            "ellipticity": pass.report,
            "monotonicity": mono,
            "files": { "eta_csv": pass.csv.display().to_string() },
        }),
        exit,
    ))
}

/// `eta`: per-point ν/η table.
pub fn cmd_eta(cfg: &RunConfig) -> Result<(serde_json::Value, i32)> {
    let pass = conformal_pass(cfg, "eta.csv")?;
    Ok((
        json!({
            "config": cfg,
            "ellipticity": pass.report,
            "files": { "eta_csv": pass.csv.display().to_string() },
        }),
        0,
    ))
}

/// Fill masked nodes with the value of the nearest valid node (multi-source
/// breadth-first propagation along grid edges). Used to extend measured
/// coefficient grids across masked derivative rings without introducing
/// jumps.
fn fill_from_nearest(field: &ComplexGridField) -> ComplexGridField {
    let spec = field.spec;
    let mut out = field.clone();
    let mut queue: std::collections::VecDeque<(usize, usize)> = std::collections::VecDeque::new();
    let mut known = vec![false; spec.len()];
    field.for_each_valid(|i, j, _, _| {
        known[spec.index(i, j)] = true;
        queue.push_back((i, j));
    });
    while let Some((i, j)) = queue.pop_front() {
        let v = out.get(i, j);
        let mut neighbors = Vec::with_capacity(4);
        if i > 0 {
            neighbors.push((i - 1, j));
        }
        if i + 1 < spec.nx {
            neighbors.push((i + 1, j));
        }
        if j > 0 {
            neighbors.push((i, j - 1));
        }
        if j + 1 < spec.ny {
            neighbors.push((i, j + 1));
        }
        for (ni, nj) in neighbors {
            let k = spec.index(ni, nj);
            if !known[k] {
                known[k] = true;
                out.set(ni, nj, v, true);
                queue.push_back((ni, nj));
            }
        }
    }
    out
}

fn parse_const_coefficient(s: &str) -> Result<Complex64> {
    let rest = s
        .strip_prefix("const:")
        .ok_or_else(|| Error::Usage(format!("expected const:re[,im], got `{s}`")))?;
    let mut it = rest.split(',');
    let re = it
        .next()
        .unwrap_or("")
        .trim()
        .parse::<f64>()
        .map_err(|e| Error::Usage(format!("coefficient `{s}`: {e}")))?;
    let im = match it.next() {
        Some(t) => t.trim().parse::<f64>().map_err(|e| Error::Usage(format!("coefficient `{s}`: {e}")))?,
        None => 0.0,
    };
    Ok(Complex64::new(re, im))
}

fn eta_closure(bold: StructureField) -> impl Fn(Complex64) -> Complex64 + Send + Sync + 'static {
    move |z| match eta_from_nu(nu_at(&bold, z).0) {
        Some(e) => e,
        None => Complex64::new(f64::NAN, f64::NAN),
    }
}

fn phi_files(cfg: &RunConfig, sol: &PhiSolution, phi_field: &ComplexGridField) -> Result<serde_json::Value> {
    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir)?;
    let csv = dir.join("phi.csv");
    write_csv_path(phi_field, &csv)?;
    let manifest_path = dir.join("solve_phi.json");
    let manifest = json!({
        "config": cfg,
        "solution": sol.manifest(),
        "files": { "phi_csv": csv.display().to_string() },
    });
    std::fs::write(&manifest_path, serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    Ok(manifest)
}

/// `solve-phi`: radial or grid construction of Φ.
pub fn cmd_solve_phi(cfg: &RunConfig) -> Result<(serde_json::Value, i32)> {
    let method = required(&cfg.method, "method")?.as_str();
    match method {
        "radial" => {
            let a = build_field(cfg)?;
            let bold = to_bold(&a);
            let (t_lo, t_hi) = cfg
                .t_range
                .ok_or_else(|| Error::Usage("radial method needs --t t_lo,t_hi".into()))?;
            let sol = solve_phi_radial_from_eta(
                eta_closure(bold),
                (t_lo, t_hi),
                RadialNormalization::OuterIdentity,
            )?;
            // sample the solved annulus on a square grid for the CSV
            let spec = GridSpec::square(-t_hi, t_hi, cfg.n)?;
            let field = ComplexGridField::sample_masked(
                spec,
                |z| sol.forward(z).unwrap_or(Complex64::new(f64::NAN, 0.0)),
                |z| {
                    let t = z.norm();
                    t >= t_lo && t <= t_hi
                },
            );
            Ok((phi_files(cfg, &sol, &field)?, 0))
        }
        "grid" => {
            let (eta_field, pad) = match &cfg.eta {
                Some(s) => {
                    let c = parse_const_coefficient(s)?;
                    let spec = GridSpec::periodic(-1.0, 1.0, -1.0, 1.0, cfg.n, cfg.n)?;
                    (ComplexGridField::sample(spec, move |_| c), 1)
                }
                None => {
                    let a = build_field(cfg)?;
                    let bold = to_bold(&a);
                    let region = resolve_region(cfg, &bold.domain)?;
                    let spec = region.bounding_spec(cfg.n)?;
                    let eta = eta_closure(bold);
                    (ComplexGridField::sample_region(spec, &region, eta), 2)
                }
            };
            let opts = GridSolveOptions {
                pad_factor: pad,
                k_max: cfg.k_max,
                tol: cfg.tol.min(1e-8),
                ..Default::default()
            };
            let sol = solve_phi_grid(&eta_field, &opts)?;
            let field = sol.phi_grid.clone().expect("grid method always samples phi");
            Ok((phi_files(cfg, &sol, &field)?, 0))
        }
        other => Err(Error::Usage(format!("unknown method `{other}` (radial|grid)"))),
    }
}

fn closed_phi_for(field_id: &str, params: &[(String, f64)]) -> Option<ClosedFormPhi> {
    match field_id {
        "p_laplacian" => {
            let p = params.iter().find(|(k, _)| k == "p").map(|&(_, v)| v)?;
            if (p - 2.0).abs() < 1e-12 {
                Some(phi_power_stretch(1.0))
            } else {
                Some(phi_power_stretch((p - 1.0).sqrt()))
            }
        }
        "minimal_surface" => Some(phi_minimal_surface()),
        "maximal_spacelike" => Some(crate::beltrami::closed::phi_maximal_spacelike()),
        _ => None,
    }
}

/// `verify`: residual reports for the selected identities.
pub fn cmd_verify(cfg: &RunConfig) -> Result<(serde_json::Value, i32)> {
    let a = build_field(cfg)?;
    let bold = to_bold(&a);
    let sol_name = required(&cfg.solution, "solution")?;
    let sol = reference(&a.id, sol_name, &cfg.params)?;
    let spec = sol.region.bounding_spec(cfg.n)?;

    let checks: Vec<&str> = match cfg.checks.as_deref() {
        None | Some("all") => vec!["div", "cgrad", "chain", "quasilinear", "hodograph", "audit"],
        Some(list) => list.split(',').map(str::trim).collect(),
    };
    let phi = closed_phi_for(&a.id, &cfg.params);

    let mut reports = Vec::new();
    let mut notes = Vec::new();
    for check in &checks {
        match *check {
            "div" => {
                let u = sol.sample_u(&spec);
                reports.push(json!({ "check": "div", "report": residual_divergence(&a, &u)? }));
            }
            "cgrad" => {
                let f = sol.sample_u_z(&spec);
                reports.push(json!({
                    "check": "cgrad",
                    "report": residual_complex_gradient(&bold, &f)?,
                }));
            }
            "chain" => match &phi {
                Some(phi) => {
                    let f = sol.sample_u_z(&spec);
                    let rep = residual_chain_rule(
                        phi,
                        &f,
                        |w| nu_at(&bold, w).0.conj(),
                        |w| nu_at(&bold, w).0,
                    )?;
                    reports.push(json!({
                        "check": "chain",
                        "identity": rep.identity,
                        "annihilation": rep.annihilation,
                        "nz_min": rep.nz_min,
                        "coeff_vs_gamma_max": rep.coeff_vs_gamma_max,
                    }));
                }
                None => notes.push(format!("chain: no closed-form homeomorphism for `{}`", a.id)),
            },
            "quasilinear" => match &phi {
                Some(phi) => {
                    let f = sol.sample_u_z(&spec);
                    let big_f = f.map(|_, w| phi.eval(w));
                    let eta_fn = phi.eta_fn();
                    let inv = |v: Complex64| {
                        let w = phi.inverse(v);
                        (w.re.is_finite() && w.im.is_finite()).then_some(w)
                    };
                    reports.push(json!({
                        "check": "quasilinear",
                        "report": residual_quasilinear(&big_f, inv, |w| eta_fn(w))?,
                    }));
                }
                None => notes.push(format!("quasilinear: no closed-form homeomorphism for `{}`", a.id)),
            },
            "hodograph" => {
                // manufactured radial data discriminating the coefficient
                // argument conventions; independent of the field under test
                let lambda = 0.6;
                let q = (1.0 - lambda) / (1.0 + lambda);
                let gspec = GridSpec::square(-1.0, 1.0, cfg.n.max(128))?;
                let region = Region::Annulus { inner: 0.5, outer: 0.95 };
                let g = ComplexGridField::sample_region(gspec, &region, |w| {
                    w.conj() / w.norm().powf(1.0 + q)
                });
                let coeff = move |v: Complex64| {
                    let n = v.norm_sqr();
                    if n == 0.0 {
                        Complex64::new(0.0, 0.0)
                    } else {
                        lambda * v.conj() * v.conj() / n
                    }
                };
                let (direct, conjugated) = hodograph_convention_residuals(&g, |z| z, coeff)?;
                let annihilating = if direct.rel_sup < conjugated.rel_sup { "direct" } else { "conjugated" };
                reports.push(json!({
                    "check": "hodograph",
                    "direct_argument": direct,
                    "conjugated_argument": conjugated,
                    "annihilating_convention": annihilating,
                }));
            }
            "audit" => {
                reports.push(json!({ "check": "audit", "audits": audit_variant_formulas() }));
            }
            other => return Err(Error::Usage(format!("unknown check `{other}`"))),
        }
    }

    Ok((
        json!({
            "config": cfg,
            "solution": { "equation": sol.equation_id, "name": sol.name, "notes": sol.notes },
            "grid": spec,
            "reports": reports,
            "notes": notes,
        }),
        0,
    ))
}

/// `factorize`: read F from CSV, factorize, write χ/g/h grids and manifest.
pub fn cmd_factorize(cfg: &RunConfig) -> Result<(serde_json::Value, i32)> {
    let input = required(&cfg.input, "input")?;
    let f = read_csv_path(input)?;

    enum Coeff {
        Const(Complex64),
        Measured(ComplexGridField),
    }
    let coeff = match &cfg.coeff {
        Some(s) => Coeff::Const(parse_const_coefficient(s)?),
        None => {
            // measured pointwise ratio F_z̄/F_z, masked where |F_z| is tiny
            let (fz, fzb) = wirtinger_fd(&f)?;
            let floor = 1e-8 * fz.sup_abs();
            let mut ratio = ComplexGridField::zeros(f.spec);
            for j in 0..f.spec.ny {
                for i in 0..f.spec.nx {
                    let ok = fz.is_valid(i, j) && fzb.is_valid(i, j) && fz.get(i, j).norm() > floor;
                    let v = if ok { fzb.get(i, j) / fz.get(i, j) } else { Complex64::new(0.0, 0.0) };
                    ratio.set(i, j, v, ok);
                }
            }
            let sup = ratio.sup_abs();
            if sup >= cfg.k_max.min(1.0) {
                return Err(Error::CoefficientBound(format!(
                    "measured coefficient reaches {sup}; pass an explicit --coeff or raise --k-max"
                )));
            }
            // extend across the masked derivative ring so the re-sampled
            // coefficient has no artificial jump inside F's region
            Coeff::Measured(fill_from_nearest(&ratio))
        }
    };

    let opts = FactorizeOptions {
        solver: GridSolveOptions { k_max: cfg.k_max, ..Default::default() },
        ..Default::default()
    };
    let fact = match &coeff {
        Coeff::Const(c) => {
            let c = *c;
            factorize(&f, move |_| c, &opts)?
        }
        Coeff::Measured(grid) => {
            let sampler_src = grid.clone();
            factorize(
                &f,
                move |z| {
                    BicubicSampler::new(&sampler_src)
                        .value(z)
                        .unwrap_or(Complex64::new(0.0, 0.0))
                },
                &opts,
            )?
        }
    };

    let dir = cfg.out_dir();
    std::fs::create_dir_all(&dir)?;
    let chi_path = dir.join("chi.csv");
    let g_path = dir.join("g.csv");
    let h_path = dir.join("h.csv");
    write_csv_path(&fact.chi, &chi_path)?;
    write_csv_path(&fact.g, &g_path)?;
    write_csv_path(&fact.h, &h_path)?;
    let manifest = json!({
        "config": cfg,
        "holomorphy_residual": fact.holomorphy_residual,
        "linear_residual": fact.linear_residual,
        "composition_error": fact.composition_error,
        "failed": fact.failed,
        "image_grid": fact.image_spec,
        "files": {
            "chi_csv": chi_path.display().to_string(),
            "g_csv": g_path.display().to_string(),
            "h_csv": h_path.display().to_string(),
        },
    });
    std::fs::write(dir.join("factorize.json"), serde_json::to_string_pretty(&manifest)?.as_bytes())?;
    Ok((manifest, 0))
}

/// Dispatch on `config.command`.
pub fn run(cfg: &RunConfig) -> Result<(serde_json::Value, i32)> {
    match cfg.command.as_str() {
        "analyze" => cmd_analyze(cfg),
        "eta" => cmd_eta(cfg),
        "solve-phi" => cmd_solve_phi(cfg),
        "verify" => cmd_verify(cfg),
        "factorize" => cmd_factorize(cfg),
        other => Err(Error::Usage(format!("unknown command `{other}`"))),
    }
}
