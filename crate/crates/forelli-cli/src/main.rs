//! Command-line front end: bundle extendibility tests, slice decompositions,
//! disc-engine tests, Poisson-kernel checks, and characterized-class
//! round-trips, with deterministic JSON/CSV reports.
//!
//! Exit codes: 0 = all tested properties hold, 1 = a tested property failed,
//! 2 = usage/configuration error, 3 = inconclusive (quadrature-limited).

mod report;
mod spec;

use std::path::PathBuf;
use std::time::Instant;

use clap::{Args, Parser, Subcommand, ValueEnum};
use forelli_core::boundary::{BoundaryFunction, CharTerm, CharacterizedSpec};
use forelli_core::decomposition::{fit_characterized, CharFitParams, SliceGrid};
use forelli_core::disc::{hyperbolic_family_test, polyanalytic_fit, FitParams};
use forelli_core::geometry::ball_automorphism;
use forelli_core::moments::{bundle_test, BundleParams, Verdict};
use forelli_core::poisson::{
    integral, invariant_laplacian_fd, kernel_covariance_defect, SphereQuadrature,
};
use forelli_core::poly::Polynomial;
use forelli_core::{BallPoint, Complex};
use rand::{Rng, SeedableRng};
use serde_json::{json, Value};

#[derive(Parser)]
#[command(name = "forelli", version, about = "Holomorphic extendibility tests on the sphere in C^2")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
}

#[derive(Subcommand)]
enum Command {
    /// Bundle test: sample lines through each vertex, test holomorphic
    /// extendibility of the boundary data along every boundary circle.
    Test(TestArgs),
    /// Angular slice decomposition and reconstruction round-trip.
    Decompose(DecomposeArgs),
    /// Disc engine: hyperbolic-circle family test and polyanalytic fit.
    DiscTest(DiscTestArgs),
    /// Poisson suite: normalization, kernel covariance, M-harmonicity.
    PoissonCheck(PoissonCheckArgs),
    /// Generate or load a characterized spec, re-fit its coefficients from
    /// sphere values, and report the recovery error.
    CharspecRoundtrip(CharspecArgs),
}

#[derive(Args)]
struct TestArgs {
    /// Function spec: modulus_sq | globevnik:k=<int> | poly:<expr> | charspec:<path>
    #[arg(long)]
    function: String,
    /// Semicolon-separated vertices, e.g. "0.3+0i,0; -0.2+0i,0"
    #[arg(long)]
    vertices: String,
    /// Lines sampled per vertex
    #[arg(long, default_value_t = 200)]
    lines: usize,
    #[arg(long, default_value_t = 32)]
    m_max: usize,
    /// Circle node count (default: dispatched on the smoothness hint)
    #[arg(long)]
    nodes: Option<usize>,
    #[arg(long, default_value_t = 1e-8)]
    tol: f64,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    format: Format,
}

#[derive(Args)]
struct DecomposeArgs {
    #[arg(long)]
    function: String,
    /// Largest |nu| retained in the slice expansion
    #[arg(long, default_value_t = 8)]
    numax: i64,
    /// Comma-separated |z1| grid radii
    #[arg(long, default_value = "0.2,0.35,0.5,0.65,0.8")]
    radii: String,
    /// Angular nodes in arg z1
    #[arg(long, default_value_t = 8)]
    npsi: usize,
    /// Activity threshold for reporting a slice as present
    #[arg(long, default_value_t = 1e-10)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct DiscTestArgs {
    /// Disc function spec: dpoly:<expr in z> | zbar:k=<int> | polyanalytic:<path>
    #[arg(long)]
    function: String,
    /// Hyperbolic center of the circle family
    #[arg(long, default_value = "0.3+0i")]
    center: String,
    /// Pole budget nu (default: the function's polyanalytic order);
    /// nu <= 0 demands plain holomorphic extension
    #[arg(long, allow_hyphen_values = true)]
    budget: Option<i64>,
    #[arg(long, default_value_t = 8)]
    radii_count: usize,
    #[arg(long, default_value_t = 10)]
    m_max: usize,
    #[arg(long, default_value_t = 256)]
    nodes: usize,
    #[arg(long, default_value_t = 1e-9)]
    tol: f64,
    /// Also run the polyanalytic fit and report the round-trip residual
    #[arg(long)]
    fit: bool,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct PoissonCheckArgs {
    /// Smooth catalog function for the M-harmonicity check
    #[arg(long, default_value = "modulus_sq")]
    function: String,
    #[arg(long, default_value_t = 200)]
    triples: usize,
    #[arg(long, default_value_t = 7)]
    seed: u64,
    #[arg(long, default_value_t = 10)]
    points: usize,
    #[arg(long, default_value_t = 1e-3)]
    step: f64,
    #[arg(long, default_value_t = 1e-9)]
    tol_normalization: f64,
    #[arg(long, default_value_t = 1e-11)]
    tol_covariance: f64,
    #[arg(long, default_value_t = 1e-4)]
    tol_mharmonic: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct CharspecArgs {
    /// Path to a characterized-spec JSON; omit to generate one from the seed
    #[arg(long)]
    spec: Option<PathBuf>,
    #[arg(long, default_value_t = 42)]
    seed: u64,
    #[arg(long, default_value_t = 6)]
    nu_max: u32,
    #[arg(long, default_value_t = 4)]
    degree: usize,
    /// Pass threshold on the relative coefficient recovery error
    #[arg(long, default_value_t = 1e-6)]
    tol: f64,
    #[arg(long)]
    out: Option<PathBuf>,
}

fn main() {
    if let Ok(threads) = std::env::var("FORELLI_THREADS") {
        if let Ok(n) = threads.parse::<usize>() {
            let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
        }
    }
    let cli = Cli::parse();
    let code = match run(cli) {
        Ok(code) => code,
        Err(msg) => {
            eprintln!("error: {msg}");
            2
        }
    };
    std::process::exit(code);
}

fn run(cli: Cli) -> Result<i32, String> {
    let start = Instant::now();
    match cli.command {
        Command::Test(args) => cmd_test(args, start),
        Command::Decompose(args) => cmd_decompose(args, start),
        Command::DiscTest(args) => cmd_disc_test(args, start),
        Command::PoissonCheck(args) => cmd_poisson_check(args, start),
        Command::CharspecRoundtrip(args) => cmd_charspec(args, start),
    }
}

fn cmd_test(args: TestArgs, start: Instant) -> Result<i32, String> {
    let f = spec::parse_function(&args.function)?;
    let vertices = spec::parse_vertices(&args.vertices)?;
    let params = BundleParams {
        lines_per_vertex: args.lines,
        m_max: args.m_max,
        n: args.nodes,
        tol: args.tol,
        seed: args.seed,
    };
    let bundle = bundle_test(&f, &vertices, &params).map_err(|e| e.to_string())?;

    if args.format == Format::Csv {
        report::emit(args.out.as_deref(), &report::bundle_csv(&bundle))?;
        return Ok(report::exit_code(bundle.verdict));
    }

    let config_echo = json!({
        "command": "test",
        "function": args.function,
        "vertices": args.vertices,
        "lines": args.lines,
        "m_max": args.m_max,
        "nodes": args.nodes,
        "tol": args.tol,
        "seed": args.seed,
    });
    let worst = json!({
        "line": bundle.worst_line,
        "max_residual": bundle.worst_residual,
    });
    let body = report::assemble(
        config_echo,
        report::verdict_str(bundle.verdict),
        serde_json::to_value(&bundle).map_err(|e| e.to_string())?,
        worst,
        start.elapsed().as_millis(),
    );
    report::emit(args.out.as_deref(), &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(report::exit_code(bundle.verdict))
}

fn cmd_decompose(args: DecomposeArgs, start: Instant) -> Result<i32, String> {
    let f = spec::parse_function(&args.function)?;
    let radii: Vec<f64> = args
        .radii
        .split(',')
        .map(|s| s.trim().parse::<f64>().map_err(|_| format!("bad radius '{s}'")))
        .collect::<Result<_, _>>()?;
    let n_phi = (4 * args.numax.unsigned_abs() as usize + 16).next_power_of_two().max(128);
    let grid = SliceGrid::from_boundary(&f, &radii, args.npsi, args.numax, n_phi)
        .map_err(|e| e.to_string())?;

    // Activity per nu: sup over nodes of the contribution magnitude
    // |F^nu(z1, r)| r^|nu|.
    let mut activity = Vec::new();
    for nu in -args.numax..=args.numax {
        let mut sup = 0.0f64;
        for node in &grid.nodes {
            if let Some(s) = grid.slice(node, nu) {
                sup = sup.max(s.norm() * node.r.powi(nu.unsigned_abs() as i32));
            }
        }
        activity.push(json!({ "nu": nu, "sup_contribution": sup, "active": sup > args.tol }));
    }

    // Round-trip at the grid nodes, sweeping the z2 phase.
    let mut worst = 0.0f64;
    for node in &grid.nodes {
        for s in 0..4 {
            let z2 = Complex::from_polar(node.r, std::f64::consts::FRAC_PI_2 * s as f64);
            let z = BallPoint { z1: node.z1, z2 };
            let recon = grid.reconstruct(&z, args.numax).map_err(|e| e.to_string())?;
            worst = worst.max((recon - f.eval(&z)).norm());
        }
    }
    let verdict = if worst < 1e-8 { Verdict::Pass } else { Verdict::Fail };

    let config_echo = json!({
        "command": "decompose",
        "function": args.function,
        "numax": args.numax,
        "radii": radii,
        "npsi": args.npsi,
        "n_phi": n_phi,
        "tol": args.tol,
    });
    let reports = json!({
        "activity": activity,
        "reconstruction_max_residual": worst,
        "grid": grid,
    });
    let body = report::assemble(
        config_echo,
        report::verdict_str(verdict),
        reports,
        Value::Null,
        start.elapsed().as_millis(),
    );
    report::emit(args.out.as_deref(), &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(report::exit_code(verdict))
}

fn cmd_disc_test(args: DiscTestArgs, start: Instant) -> Result<i32, String> {
    let f = spec::parse_disc_function(&args.function)?;
    let center = spec::parse_complex(&args.center)?;
    let budget = args.budget.unwrap_or(f.order() as i64);
    if args.radii_count == 0 {
        return Err("radii-count must be at least 1".into());
    }
    let r_grid: Vec<f64> = (1..=args.radii_count)
        .map(|i| 0.9 * i as f64 / (args.radii_count as f64 + 0.5))
        .collect();
    let g = {
        let f = f.clone();
        move |z: Complex| f.eval(z)
    };
    let family = hyperbolic_family_test(&g, center, budget, &r_grid, args.m_max, args.nodes, args.tol)
        .map_err(|e| e.to_string())?;
    let mut verdict = if family.pass { Verdict::Pass } else { Verdict::Fail };

    let fit_report = if args.fit {
        let degree = f.parts.iter().filter_map(|p| p.degree()).max().unwrap_or(0);
        let params = FitParams::with_default_radii(f.order(), degree, args.nodes.max(128));
        let (fitted, residual) = polyanalytic_fit(&g, &params).map_err(|e| e.to_string())?;
        if residual >= 1e-8 {
            verdict = Verdict::Fail;
        }
        json!({ "fitted": fitted, "residual": residual })
    } else {
        Value::Null
    };

    let config_echo = json!({
        "command": "disc-test",
        "function": args.function,
        "center": args.center,
        "budget": budget,
        "radii_count": args.radii_count,
        "m_max": args.m_max,
        "nodes": args.nodes,
        "tol": args.tol,
        "fit": args.fit,
    });
    let reports = json!({ "family": family, "fit": fit_report });
    let body = report::assemble(
        config_echo,
        report::verdict_str(verdict),
        reports,
        Value::Null,
        start.elapsed().as_millis(),
    );
    report::emit(args.out.as_deref(), &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(report::exit_code(verdict))
}

fn cmd_poisson_check(args: PoissonCheckArgs, start: Instant) -> Result<i32, String> {
    let f = spec::parse_function(&args.function)?;
    let quad = SphereQuadrature::default_resolution();
    let one = BoundaryFunction::holomorphic_poly(forelli_core::poly::Poly2::new(vec![(
        0,
        0,
        Complex::new(1.0, 0.0),
    )]));

    // 1. Normalization P(1) = 1 on a grid with |z| <= 0.7.
    let mut norm_worst = 0.0f64;
    for &a in &[0.0, 0.35, 0.7] {
        for &b in &[0.0, 0.3, -0.5] {
            let z1 = Complex::new(a / 2f64.sqrt(), b / 2f64.sqrt());
            let z2 = Complex::new(b / 2f64.sqrt(), a / 2f64.sqrt());
            let z = BallPoint::new(z1, z2).map_err(|e| e.to_string())?;
            if z.norm_sqr() > 0.49 {
                continue;
            }
            let v = integral(&one, &z, &quad).map_err(|e| e.to_string())?;
            norm_worst = norm_worst.max((v.value - Complex::new(1.0, 0.0)).norm());
        }
    }
    let norm_pass = norm_worst < args.tol_normalization;

    // 2. Kernel covariance P(wz, wxi) = P(z, xi) P(w(0), wxi) over random
    // triples.
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(args.seed);
    let tau = 2.0 * std::f64::consts::PI;
    let mut cov_worst = 0.0f64;
    for _ in 0..args.triples {
        let u: f64 = rng.gen();
        let xi = BallPoint {
            z1: Complex::from_polar((1.0 - u).sqrt(), rng.gen::<f64>() * tau),
            z2: Complex::from_polar(u.sqrt(), rng.gen::<f64>() * tau),
        };
        let z = BallPoint {
            z1: Complex::from_polar(rng.gen::<f64>() * 0.6, rng.gen::<f64>() * tau),
            z2: Complex::from_polar(rng.gen::<f64>() * 0.3, rng.gen::<f64>() * tau),
        };
        let a = BallPoint {
            z1: Complex::from_polar(rng.gen::<f64>() * 0.5, rng.gen::<f64>() * tau),
            z2: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * tau),
        };
        let omega = ball_automorphism(&a).map_err(|e| e.to_string())?;
        let defect = kernel_covariance_defect(&omega, &z, &xi).map_err(|e| e.to_string())?;
        cov_worst = cov_worst.max(defect);
    }
    let cov_pass = cov_worst < args.tol_covariance;

    // 3. M-harmonicity of Pf at interior points.
    let pf = {
        let quad = quad.clone();
        let f = f.clone();
        move |z: &BallPoint| integral(&f, z, &quad).map(|v| v.value).unwrap_or(Complex::new(f64::NAN, 0.0))
    };
    let mut mh_worst = 0.0f64;
    for _ in 0..args.points {
        let z = BallPoint {
            z1: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * tau),
            z2: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * tau),
        };
        let lap = invariant_laplacian_fd(&pf, &z, args.step).map_err(|e| e.to_string())?;
        mh_worst = mh_worst.max(lap.norm());
    }
    let mh_pass = mh_worst < args.tol_mharmonic;

    let verdict = if norm_pass && cov_pass && mh_pass { Verdict::Pass } else { Verdict::Fail };
    let config_echo = json!({
        "command": "poisson-check",
        "function": args.function,
        "triples": args.triples,
        "seed": args.seed,
        "points": args.points,
        "step": args.step,
        "tol_normalization": args.tol_normalization,
        "tol_covariance": args.tol_covariance,
        "tol_mharmonic": args.tol_mharmonic,
    });
    let reports = json!({
        "normalization": { "max_defect": norm_worst, "pass": norm_pass },
        "kernel_covariance": { "max_defect": cov_worst, "pass": cov_pass },
        "m_harmonicity": { "max_residual": mh_worst, "pass": mh_pass },
    });
    let body = report::assemble(
        config_echo,
        report::verdict_str(verdict),
        reports,
        Value::Null,
        start.elapsed().as_millis(),
    );
    report::emit(args.out.as_deref(), &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(report::exit_code(verdict))
}

/// Random characterized spec: one term per admissible (nu, j) kept with a
/// seeded coin flip, coefficients in the unit disc; at least one term.
fn random_charspec(seed: u64, nu_max: u32, degree: usize) -> CharacterizedSpec {
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let tau = 2.0 * std::f64::consts::PI;
    let mut terms = Vec::new();
    for nu in 1..=nu_max {
        for j in 0..nu.div_ceil(2) {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let coeffs = (0..=degree)
                .map(|_| Complex::from_polar(0.2 + 0.8 * rng.gen::<f64>(), rng.gen::<f64>() * tau))
                .collect();
            terms.push(CharTerm { nu, j, h: Polynomial::new(coeffs) });
        }
    }
    if terms.is_empty() {
        terms.push(CharTerm {
            nu: 1,
            j: 0,
            h: Polynomial::constant(Complex::new(1.0, 0.0)),
        });
    }
    CharacterizedSpec::new(terms).expect("generated terms satisfy 2j < nu")
}

fn cmd_charspec(args: CharspecArgs, start: Instant) -> Result<i32, String> {
    let source = match &args.spec {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read spec '{}': {e}", path.display()))?;
            let raw: CharacterizedSpec =
                serde_json::from_str(&text).map_err(|e| format!("bad charspec JSON: {e}"))?;
            CharacterizedSpec::new(raw.terms).map_err(|e| e.to_string())?
        }
        None => random_charspec(args.seed, args.nu_max, args.degree),
    };
    let f = BoundaryFunction::characterized(source.clone());
    let fit_params = CharFitParams {
        nu_max: source.terms.iter().map(|t| t.nu).max().unwrap_or(1),
        poly_degree: source
            .terms
            .iter()
            .filter_map(|t| t.h.degree())
            .max()
            .unwrap_or(0)
            .max(args.degree),
        ..CharFitParams::default()
    };
    let (fitted, residual) = fit_characterized(&f, &fit_params).map_err(|e| e.to_string())?;

    // Relative recovery error per source coefficient, plus spurious-term mass.
    let mut max_rel = 0.0f64;
    for t in &source.terms {
        let recovered = fitted
            .terms
            .iter()
            .find(|u| u.nu == t.nu && u.j == t.j)
            .map(|u| u.h.clone())
            .unwrap_or_else(Polynomial::zero);
        // Relative to the term's own coefficient scale, so exact zeros among
        // the coefficients do not inflate the error.
        let scale = t.h.max_coeff().max(1e-12);
        for (p, want) in t.h.coeffs.iter().enumerate() {
            let got = recovered.coeffs.get(p).copied().unwrap_or(Complex::new(0.0, 0.0));
            max_rel = max_rel.max((want - got).norm() / want.norm().max(scale));
        }
    }
    let spurious = fitted
        .terms
        .iter()
        .filter(|u| !source.terms.iter().any(|t| t.nu == u.nu && t.j == u.j))
        .map(|u| u.h.max_coeff())
        .fold(0.0, f64::max);

    let pass = max_rel < args.tol && spurious < args.tol;
    let verdict = if pass { Verdict::Pass } else { Verdict::Fail };
    let config_echo = json!({
        "command": "charspec-roundtrip",
        "spec": args.spec,
        "seed": args.seed,
        "nu_max": args.nu_max,
        "degree": args.degree,
        "tol": args.tol,
    });
    let reports = json!({
        "source": source,
        "fitted": fitted,
        "max_relative_coeff_error": max_rel,
        "spurious_coeff_mass": spurious,
        "eval_residual": residual,
    });
    let body = report::assemble(
        config_echo,
        report::verdict_str(verdict),
        reports,
        Value::Null,
        start.elapsed().as_millis(),
    );
    report::emit(args.out.as_deref(), &serde_json::to_string_pretty(&body).unwrap())?;
    Ok(report::exit_code(verdict))
}
