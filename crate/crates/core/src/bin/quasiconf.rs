//! Thin command-line front end; all work happens in the library's `cli`
//! module. Prints one JSON report to stdout. Exit codes: 0 success, 1 usage
//! or runtime error, 2 analyze found no elliptic points.

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use quasiconf::cli::{self, RunConfig};

#[derive(Parser)]
#[command(name = "quasiconf", version, about = "Conformal structure of planar divergence-form equations")]
struct Cli {
    /// key=value config file applied before the flags
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Output directory for CSV grids and manifests
    #[arg(long, global = true)]
    out: Option<String>,
    /// Points per grid axis
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Solver tolerance
    #[arg(long, global = true)]
    tol: Option<f64>,
    /// Seed for randomized sampling
    #[arg(long, global = true)]
    seed: Option<u64>,
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Args)]
struct FieldArgs {
    /// Catalog field id (p_laplacian, minimal_surface, maximal_spacelike, p_orthotropic, identity)
    #[arg(long)]
    field: Option<String>,
    /// Field parameter, repeatable: --param p=4
    #[arg(long = "param")]
    params: Vec<String>,
    /// Sample region: square:lo,hi | disk:r | annulus:r0,r1 | rect:x0,x1,y0,y1
    #[arg(long)]
    region: Option<String>,
}

#[derive(Subcommand)]
enum Cmd {
    /// Ellipticity classification and monotonicity audit of a field
    Analyze {
        #[command(flatten)]
        field: FieldArgs,
        /// Check this delta instead of searching for the largest feasible one
        #[arg(long)]
        delta: Option<f64>,
    },
    /// Emit the per-point nu/eta table for a field
    Eta {
        #[command(flatten)]
        field: FieldArgs,
    },
    /// Construct a homeomorphic solution of the linear Beltrami equation
    SolvePhi {
        #[command(flatten)]
        field: FieldArgs,
        /// radial | grid
        #[arg(long)]
        method: Option<String>,
        /// Constant coefficient for the grid method: const:re[,im]
        #[arg(long)]
        eta: Option<String>,
        /// Radial range t_lo,t_hi for the radial method
        #[arg(long)]
        t: Option<String>,
        /// Reject coefficients with sup modulus above this
        #[arg(long = "k-max")]
        k_max: Option<f64>,
    },
    /// Residual verification of the reduction chain on a reference solution
    Verify {
        #[command(flatten)]
        field: FieldArgs,
        /// Reference solution name (scherk, radial, harmonic, linear)
        #[arg(long)]
        solution: Option<String>,
        /// all or a comma list of div,cgrad,chain,quasilinear,hodograph,audit
        #[arg(long)]
        checks: Option<String>,
    },
    /// Stoilow-style factorization of a grid field from CSV
    Factorize {
        /// Input grid CSV (header x,y,re,im,mask)
        #[arg(long)]
        input: Option<String>,
        /// Coefficient const:re[,im]; default measures F_zbar/F_z from the grid
        #[arg(long)]
        coeff: Option<String>,
        #[arg(long = "k-max")]
        k_max: Option<f64>,
    },
}

fn build_config(cli: &Cli) -> Result<RunConfig, quasiconf::Error> {
    let command = match &cli.cmd {
        Cmd::Analyze { .. } => "analyze",
        Cmd::Eta { .. } => "eta",
        Cmd::SolvePhi { .. } => "solve-phi",
        Cmd::Verify { .. } => "verify",
        Cmd::Factorize { .. } => "factorize",
    };
    let mut cfg = RunConfig::new(command);
    if let Some(path) = &cli.config {
        for (k, v) in cli::load_config_file(path)? {
            cli::apply_kv(&mut cfg, &k, &v)?;
        }
    }

    let apply_field_args = |cfg: &mut RunConfig, fa: &FieldArgs| -> Result<(), quasiconf::Error> {
        if let Some(f) = &fa.field {
            cfg.field = Some(f.clone());
        }
        for p in &fa.params {
            cfg.params.push(cli::parse_param(p)?);
        }
        if let Some(r) = &fa.region {
            cfg.region = Some(r.clone());
        }
        Ok(())
    };

    match &cli.cmd {
        Cmd::Analyze { field, delta } => {
            apply_field_args(&mut cfg, field)?;
            if delta.is_some() {
                cfg.delta = *delta;
            }
        }
        Cmd::Eta { field } => apply_field_args(&mut cfg, field)?,
        Cmd::SolvePhi { field, method, eta, t, k_max } => {
            apply_field_args(&mut cfg, field)?;
            if let Some(m) = method {
                cfg.method = Some(m.clone());
            }
            if let Some(e) = eta {
                cfg.eta = Some(e.clone());
            }
            if let Some(t) = t {
                cli::apply_kv(&mut cfg, "t", t)?;
            }
            if let Some(k) = k_max {
                cfg.k_max = *k;
            }
        }
        Cmd::Verify { field, solution, checks } => {
            apply_field_args(&mut cfg, field)?;
            if let Some(s) = solution {
                cfg.solution = Some(s.clone());
            }
            if let Some(c) = checks {
                cfg.checks = Some(c.clone());
            }
        }
        Cmd::Factorize { input, coeff, k_max } => {
            if let Some(i) = input {
                cfg.input = Some(i.clone());
            }
            if let Some(c) = coeff {
                cfg.coeff = Some(c.clone());
            }
            if let Some(k) = k_max {
                cfg.k_max = *k;
            }
        }
    }

    if let Some(out) = &cli.out {
        cfg.out = Some(out.clone());
    }
    if let Some(n) = cli.n {
        cfg.n = n;
    }
    if let Some(tol) = cli.tol {
        cfg.tol = tol;
    }
    if let Some(seed) = cli.seed {
        cfg.seed = seed;
    }
    Ok(cfg)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            // clap prints help/version through the error path with success
            // status; everything else is a usage error (exit 1)
            if e.use_stderr() {
                eprintln!("{e}");
                return ExitCode::from(1);
            }
            print!("{e}");
            return ExitCode::SUCCESS;
        }
    };
    let cfg = match build_config(&cli) {
        Ok(c) => c,
        Err(e) => {
            eprintln!("error: {e}");
            return ExitCode::from(1);
        }
    };
    match cli::run(&cfg) {
        Ok((report, exit)) => {
            println!("{}", serde_json::to_string_pretty(&report).expect("serializable report"));
            ExitCode::from(exit as u8)
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(1)
        }
    }
}
