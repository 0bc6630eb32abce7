//! Acceptance gate: one test per criterion, each printing a single
//! PASS/FAIL line with its measured margin. Run with
//! `cargo test --test acceptance -- --nocapture` to see the lines.

use forelli_core::boundary::{BoundaryFunction, CharTerm, CharacterizedSpec};
use forelli_core::decomposition::{fit_characterized, radial_taylor, CharFitParams, SliceGrid};
use forelli_core::disc::{
    circle_mero_coeffs_of, hyperbolic_family_test, polyanalytic_fit, FitParams,
    PolyanalyticFunction,
};
use forelli_core::geometry::{ball_automorphism, line_boundary_circle};
use forelli_core::moments::{
    automorphism_moment_residuals, bundle_test, image_line_of_slice, line_extension_residuals,
    spiral_directions, BundleParams, Verdict,
};
use forelli_core::poisson::{
    integral, invariant_laplacian_fd, kernel_covariance_defect, SphereQuadrature,
};
use forelli_core::poly::{Poly2, Polynomial};
use forelli_core::{BallPoint, Complex, ComplexLine};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

const TAU: f64 = 2.0 * std::f64::consts::PI;

fn c(re: f64, im: f64) -> Complex {
    Complex::new(re, im)
}

fn report(criterion: &str, pass: bool, detail: &str) {
    println!("[{criterion}] {} — {detail}", if pass { "PASS" } else { "FAIL" });
    assert!(pass, "{criterion} failed: {detail}");
}

fn random_unit(rng: &mut ChaCha8Rng) -> Complex {
    Complex::from_polar(0.2 + 0.8 * rng.gen::<f64>(), rng.gen::<f64>() * TAU)
}

fn random_poly2(rng: &mut ChaCha8Rng, degree: u32) -> Poly2 {
    let mut terms = Vec::new();
    for p in 0..=degree {
        for q in 0..=(degree - p) {
            if rng.gen_bool(0.5) {
                terms.push((p, q, random_unit(rng)));
            }
        }
    }
    if terms.is_empty() {
        terms.push((1, 0, c(1.0, 0.0)));
    }
    Poly2::new(terms)
}

fn random_charspec(rng: &mut ChaCha8Rng, nu_max: u32, degree: usize) -> CharacterizedSpec {
    let mut terms = Vec::new();
    for nu in 1..=nu_max {
        for j in 0..nu.div_ceil(2) {
            if !rng.gen_bool(0.6) {
                continue;
            }
            let coeffs = (0..=degree).map(|_| random_unit(rng)).collect();
            terms.push(CharTerm { nu, j, h: Polynomial::new(coeffs) });
        }
    }
    if terms.is_empty() {
        terms.push(CharTerm { nu: 1, j: 0, h: Polynomial::constant(c(1.0, 0.0)) });
    }
    CharacterizedSpec::new(terms).unwrap()
}

fn random_polyanalytic(rng: &mut ChaCha8Rng, order: usize, degree: usize) -> PolyanalyticFunction {
    let parts = (0..=order)
        .map(|_| Polynomial::new((0..=degree).map(|_| random_unit(rng)).collect()))
        .collect();
    PolyanalyticFunction::new(parts)
}

#[test]
fn criterion_1_ball_algebra_soundness() {
    let mut rng = ChaCha8Rng::seed_from_u64(101);
    let vertices = [
        BallPoint::origin(),
        BallPoint::new(c(0.4, 0.0), c(0.0, 0.0)).unwrap(),
        BallPoint::new(c(0.0, 0.0), c(0.4, 0.0)).unwrap(),
    ];
    let params = BundleParams {
        lines_per_vertex: 100,
        m_max: 32,
        n: Some(512),
        tol: 1e-10,
        seed: 1,
    };
    let mut worst = 0.0f64;
    for _ in 0..10 {
        let f = BoundaryFunction::holomorphic_poly(random_poly2(&mut rng, 5));
        let rep = bundle_test(&f, &vertices, &params).unwrap();
        worst = worst.max(rep.worst_residual);
        if rep.verdict != Verdict::Pass {
            report("criterion 1", false, &format!("verdict {:?}", rep.verdict));
        }
    }
    report(
        "criterion 1",
        worst < 1e-10,
        &format!("10 random holomorphic polynomials, 3 bundles x 100 lines, max residual {worst:.3e} < 1e-10"),
    );
}

#[test]
fn criterion_2_modulus_sq_center_vs_offcenter() {
    let f = BoundaryFunction::modulus_sq();

    // Every line through the origin: the restriction is constant.
    let mut worst_center = 0.0f64;
    for d in spiral_directions(100, 2) {
        let line = ComplexLine::new(BallPoint::origin(), d).unwrap();
        let rep = line_extension_residuals(&f, &line, 32, 512, 0, 1e-12).unwrap();
        worst_center = worst_center.max(rep.max_residual);
    }

    // A sweep through (0.5, 0) must expose non-extendibility.
    let vertex = BallPoint::new(c(0.5, 0.0), c(0.0, 0.0)).unwrap();
    let mut worst_off = 0.0f64;
    for d in spiral_directions(200, 2) {
        let line = ComplexLine::new(vertex, d).unwrap();
        let rep = line_extension_residuals(&f, &line, 32, 512, 0, 1e-8).unwrap();
        worst_off = worst_off.max(rep.max_residual);
    }
    report(
        "criterion 2",
        worst_center < 1e-12 && worst_off > 1e-3,
        &format!(
            "|z1|^2: center-bundle max residual {worst_center:.3e} < 1e-12; off-center sweep max residual {worst_off:.3e} > 1e-3"
        ),
    );
}

#[test]
fn criterion_3_globevnik_sharpness() {
    let f = BoundaryFunction::globevnik(3).unwrap();

    // 500 sampled lines meeting {z2 = 0}: 250 through each hyperplane vertex.
    let mut worst_pass = 0.0f64;
    for v in [c(0.3, 0.0), c(-0.2, 0.0)] {
        let vertex = BallPoint::new(v, c(0.0, 0.0)).unwrap();
        for d in spiral_directions(250, 3) {
            let line = ComplexLine::new(vertex, d).unwrap();
            let rep = line_extension_residuals(&f, &line, 32, 2048, 0, 1e-6).unwrap();
            worst_pass = worst_pass.max(rep.max_residual);
        }
    }

    // Adding a vertex off the hyperplane breaks it.
    let vertices = [
        BallPoint::new(c(0.3, 0.0), c(0.0, 0.0)).unwrap(),
        BallPoint::new(c(-0.2, 0.0), c(0.0, 0.0)).unwrap(),
        BallPoint::new(c(0.0, 0.0), c(0.3, 0.0)).unwrap(),
    ];
    let params = BundleParams { lines_per_vertex: 200, seed: 3, ..BundleParams::default() };
    let rep = bundle_test(&f, &vertices, &params).unwrap();
    report(
        "criterion 3",
        worst_pass < 1e-6 && rep.verdict == Verdict::Fail && rep.worst_residual > 1e-3,
        &format!(
            "globevnik(3): 500 hyperplane lines max residual {worst_pass:.3e} < 1e-6; third vertex verdict {:?} with witness residual {:.3e} > 1e-3",
            rep.verdict, rep.worst_residual
        ),
    );
}

#[test]
fn criterion_4_characterized_roundtrip() {
    let mut rng = ChaCha8Rng::seed_from_u64(104);
    let vertices = [
        BallPoint::new(c(0.3, 0.0), c(0.0, 0.0)).unwrap(),
        BallPoint::new(c(-0.2, 0.0), c(0.0, 0.0)).unwrap(),
    ];
    let params = BundleParams {
        lines_per_vertex: 40,
        tol: 1e-8,
        seed: 4,
        ..BundleParams::default()
    };
    let mut worst_bundle = 0.0f64;
    let mut worst_recovery = 0.0f64;
    for _ in 0..20 {
        let source = random_charspec(&mut rng, 6, 4);
        let f = BoundaryFunction::characterized(source.clone());

        let rep = bundle_test(&f, &vertices, &params).unwrap();
        worst_bundle = worst_bundle.max(rep.worst_residual);

        let fit_params = CharFitParams { nu_max: 6, poly_degree: 4, ..CharFitParams::default() };
        let (fitted, _) = fit_characterized(&f, &fit_params).unwrap();
        for t in &source.terms {
            let recovered = fitted
                .terms
                .iter()
                .find(|u| u.nu == t.nu && u.j == t.j)
                .map(|u| u.h.clone())
                .unwrap_or_else(Polynomial::zero);
            let scale = t.h.max_coeff();
            for (p, want) in t.h.coeffs.iter().enumerate() {
                let got = recovered.coeffs.get(p).copied().unwrap_or(c(0.0, 0.0));
                worst_recovery = worst_recovery.max((want - got).norm() / want.norm().max(scale));
            }
        }
    }
    report(
        "criterion 4",
        worst_bundle < 1e-8 && worst_recovery < 1e-6,
        &format!(
            "20 characterized specs: two-bundle max residual {worst_bundle:.3e} < 1e-8; coefficient recovery relative error {worst_recovery:.3e} < 1e-6"
        ),
    );
}

#[test]
fn criterion_5_poisson_suite() {
    let quad = SphereQuadrature::default_resolution();
    let one = BoundaryFunction::holomorphic_poly(Poly2::new(vec![(0, 0, c(1.0, 0.0))]));

    // P(1) = 1 on |z| <= 0.7.
    let mut rng = ChaCha8Rng::seed_from_u64(105);
    let mut norm_worst = 0.0f64;
    let mut pts: Vec<BallPoint> = (0..15)
        .map(|_| {
            let r = 0.7 * rng.gen::<f64>().sqrt();
            let split = rng.gen::<f64>();
            BallPoint {
                z1: Complex::from_polar(r * split.sqrt(), rng.gen::<f64>() * TAU),
                z2: Complex::from_polar(r * (1.0 - split).sqrt(), rng.gen::<f64>() * TAU),
            }
        })
        .collect();
    pts.push(BallPoint::new(c(0.7, 0.0), c(0.0, 0.0)).unwrap()); // worst case
    for z in &pts {
        let v = integral(&one, z, &quad).unwrap();
        norm_worst = norm_worst.max((v.value - c(1.0, 0.0)).norm());
    }

    // Kernel Möbius covariance over 200 random triples.
    let mut cov_worst = 0.0f64;
    for _ in 0..200 {
        let u: f64 = rng.gen();
        let xi = BallPoint {
            z1: Complex::from_polar((1.0 - u).sqrt(), rng.gen::<f64>() * TAU),
            z2: Complex::from_polar(u.sqrt(), rng.gen::<f64>() * TAU),
        };
        let z = BallPoint {
            z1: Complex::from_polar(rng.gen::<f64>() * 0.6, rng.gen::<f64>() * TAU),
            z2: Complex::from_polar(rng.gen::<f64>() * 0.3, rng.gen::<f64>() * TAU),
        };
        let a = BallPoint {
            z1: Complex::from_polar(rng.gen::<f64>() * 0.5, rng.gen::<f64>() * TAU),
            z2: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * TAU),
        };
        let omega = ball_automorphism(&a).unwrap();
        cov_worst = cov_worst.max(kernel_covariance_defect(&omega, &z, &xi).unwrap());
    }

    // M-harmonicity of Pf for smooth catalog functions.
    let mut mh_worst = 0.0f64;
    for f in [
        BoundaryFunction::modulus_sq(),
        BoundaryFunction::holomorphic_poly(Poly2::new(vec![
            (1, 1, c(1.0, 0.0)),
            (0, 2, c(0.3, -0.2)),
        ])),
    ] {
        let pf = {
            let quad = quad.clone();
            let f = f.clone();
            move |z: &BallPoint| integral(&f, z, &quad).map(|v| v.value).unwrap()
        };
        for _ in 0..5 {
            let z = BallPoint {
                z1: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * TAU),
                z2: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * TAU),
            };
            mh_worst = mh_worst.max(invariant_laplacian_fd(&pf, &z, 1e-3).unwrap().norm());
        }
    }
    report(
        "criterion 5",
        norm_worst < 1e-9 && cov_worst < 1e-11 && mh_worst < 1e-4,
        &format!(
            "Poisson: normalization defect {norm_worst:.3e} < 1e-9; kernel covariance defect {cov_worst:.3e} < 1e-11 over 200 triples; M-harmonic residual {mh_worst:.3e} < 1e-4 at 10 points"
        ),
    );
}

#[test]
fn criterion_6_decomposition_roundtrip() {
    let catalog: Vec<(&str, BoundaryFunction)> = vec![
        (
            "poly",
            BoundaryFunction::holomorphic_poly(Poly2::new(vec![
                (2, 0, c(1.0, 0.0)),
                (1, 1, c(0.0, 1.0)),
                (0, 3, c(-0.5, 0.2)),
            ])),
        ),
        ("modulus_sq", BoundaryFunction::modulus_sq()),
        ("globevnik(3)", BoundaryFunction::globevnik(3).unwrap()),
        (
            "characterized",
            BoundaryFunction::characterized(
                CharacterizedSpec::new(vec![
                    CharTerm { nu: 3, j: 1, h: Polynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]) },
                    CharTerm { nu: 2, j: 0, h: Polynomial::constant(c(0.4, -0.3)) },
                ])
                .unwrap(),
            ),
        ),
    ];
    let mut worst = 0.0f64;
    for (name, f) in &catalog {
        let grid = SliceGrid::from_boundary(f, &[0.2, 0.5, 0.8], 8, 6, 256).unwrap();
        for node in &grid.nodes {
            for s in 0..4 {
                let z2 = Complex::from_polar(node.r, TAU * s as f64 / 4.0);
                let z = BallPoint { z1: node.z1, z2 };
                let res = (grid.reconstruct(&z, 6).unwrap() - f.eval(&z)).norm();
                assert!(res < 1e-10, "{name}: residual {res:.3e} at node");
                worst = worst.max(res);
            }
        }
    }

    // Boundedness of B_l on a grid approaching |z1| = 1 for an analytic
    // slice profile growing like 1/(1 - |z1|^2) in A_l.
    let nu = 2i64;
    let mut sup_b = 0.0f64;
    for &rho in &[0.9, 0.99, 0.999] {
        let z1 = c(rho, 0.0);
        let big_r = 1.0 - rho * rho;
        let slice_w = move |w: Complex| (w / big_r).exp() * z1;
        for l in 0..=8 {
            let (_, b_l) = radial_taylor(&slice_w, z1, l, nu, 128).unwrap();
            sup_b = sup_b.max(b_l.norm());
        }
    }
    report(
        "criterion 6",
        worst < 1e-10 && sup_b.is_finite() && sup_b < 10.0,
        &format!(
            "decompose-reconstruct max residual {worst:.3e} < 1e-10 over 4 catalog families; sup |B_l| = {sup_b:.3} bounded near |z1| = 1"
        ),
    );
}

#[test]
fn criterion_7_disc_engine() {
    let mut rng = ChaCha8Rng::seed_from_u64(107);
    let mut detect_ok = 0usize;
    let mut fit_worst = 0.0f64;
    let mut family_pass = true;
    for i in 0..100 {
        let order = 1 + (i % 4); // orders 1..=4
        let f = random_polyanalytic(&mut rng, order, 3);
        let g = |z: Complex| f.eval(z);

        // Pole-order detection on a generic circle.
        let e = Complex::from_polar(rng.gen::<f64>() * 0.3, rng.gen::<f64>() * TAU);
        let t = 0.35 + 0.15 * rng.gen::<f64>();
        let rep = circle_mero_coeffs_of(&g, e, t, 8, 256, 1e-9).unwrap();
        if rep.detected_order == Some(order) {
            detect_ok += 1;
        }

        // Fit round-trip.
        let params = FitParams::with_default_radii(order, 3, 256);
        let (fitted, _) = polyanalytic_fit(&g, &params).unwrap();
        for k in 0..=order {
            let scale = f.parts[k].max_coeff();
            for p in 0..=3 {
                let want = f.parts[k].coeffs[p];
                let got = fitted.parts[k].coeffs.get(p).copied().unwrap_or(c(0.0, 0.0));
                fit_worst = fit_worst.max((want - got).norm() / want.norm().max(scale));
            }
        }

        // Family test: 5 random centers x 8 radii, budget = order.
        for _ in 0..5 {
            let center = Complex::from_polar(rng.gen::<f64>() * 0.6, rng.gen::<f64>() * TAU);
            let grid: Vec<f64> = (1..=8).map(|q| 0.1 + 0.1 * q as f64).collect();
            let v = hyperbolic_family_test(&g, center, order as i64, &grid, 10, 256, 1e-9).unwrap();
            family_pass &= v.pass;
        }
    }
    report(
        "criterion 7",
        detect_ok == 100 && fit_worst < 1e-8 && family_pass,
        &format!(
            "disc engine: pole order exact on {detect_ok}/100 functions; fit relative error {fit_worst:.3e} < 1e-8; family tests all pass"
        ),
    );
}

#[test]
fn criterion_8_route_equivalence() {
    let mut rng = ChaCha8Rng::seed_from_u64(108);
    let mut agree = 0usize;
    let mut worst_ratio = 0.0f64;
    for i in 0..50 {
        let f = match i % 4 {
            0 => BoundaryFunction::holomorphic_poly(random_poly2(&mut rng, 3)),
            1 => BoundaryFunction::modulus_sq(),
            2 => BoundaryFunction::globevnik(3).unwrap(),
            _ => BoundaryFunction::characterized(random_charspec(&mut rng, 4, 2)),
        };
        let a = BallPoint {
            z1: Complex::from_polar(rng.gen::<f64>() * 0.4, rng.gen::<f64>() * TAU),
            z2: Complex::from_polar(rng.gen::<f64>() * 0.3, rng.gen::<f64>() * TAU),
        };
        let u: f64 = rng.gen();
        let z = BallPoint {
            z1: Complex::from_polar((1.0 - u).sqrt(), rng.gen::<f64>() * TAU),
            z2: Complex::from_polar(u.sqrt(), rng.gen::<f64>() * TAU),
        };
        let omega = ball_automorphism(&a).unwrap();
        let n = forelli_core::moments::nodes_for(f.smoothness());

        let auto_rep = automorphism_moment_residuals(&f, &omega, &z, 16, n, 1e-8).unwrap();
        let line = image_line_of_slice(&omega, &z).unwrap();
        let line_rep = line_extension_residuals(&f, &line, 16, n, 0, 1e-8).unwrap();

        if auto_rep.pass == line_rep.pass {
            agree += 1;
        }
        let ratio = auto_rep.max_residual.max(1e-12) / line_rep.max_residual.max(1e-12);
        worst_ratio = worst_ratio.max(ratio.max(1.0 / ratio));
        // Sanity: the image line's boundary circle exists.
        line_boundary_circle(&line).unwrap();
    }
    report(
        "criterion 8",
        agree == 50 && worst_ratio <= 10.0,
        &format!(
            "route equivalence: verdict agreement {agree}/50; residual ratio {worst_ratio:.3} within factor 10"
        ),
    );
}
