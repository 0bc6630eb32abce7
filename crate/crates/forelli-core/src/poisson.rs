//! Invariant Poisson kernel and integral on the ball in ℂ², plus a
//! finite-difference residual check for the invariant Laplacian.
//!
//! The surface measure is normalized to total mass 1, so the integral of the
//! kernel over the sphere is exactly 1. This is a constant global factor
//! relative to the unnormalized area measure and has no effect on any
//! vanishing statement.

use serde::{Deserialize, Serialize};

use crate::boundary::BoundaryFunction;
use crate::error::{Error, Result};
use crate::geometry::BallPoint;
use crate::Complex;

/// Product quadrature on ∂B²: torus angles by uniform trapezoid, the polar
/// parameter u = |ξ2|² by Gauss-Legendre on [0, 1]. With the normalized
/// measure, dσ = du dφ1 dφ2 / (2π)².
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SphereQuadrature {
    pub n_phi1: usize,
    pub n_phi2: usize,
    pub n_u: usize,
    nodes: Vec<(BallPoint, f64)>,
}

impl SphereQuadrature {
    pub fn new(n_phi1: usize, n_phi2: usize, n_u: usize) -> Result<Self> {
        if n_phi1 < 4 || n_phi2 < 4 || n_u < 2 {
            return Err(Error::InvalidParameter("quadrature resolution too small".into()));
        }
        let (u_nodes, u_weights) = gauss_legendre_unit(n_u);
        let mut nodes = Vec::with_capacity(n_phi1 * n_phi2 * n_u);
        let w_angle = 1.0 / (n_phi1 * n_phi2) as f64;
        for (u, wu) in u_nodes.iter().zip(&u_weights) {
            let r1 = (1.0 - u).sqrt();
            let r2 = u.sqrt();
            for i in 0..n_phi1 {
                let p1 = 2.0 * std::f64::consts::PI * i as f64 / n_phi1 as f64;
                for j in 0..n_phi2 {
                    let p2 = 2.0 * std::f64::consts::PI * j as f64 / n_phi2 as f64;
                    nodes.push((
                        BallPoint {
                            z1: Complex::from_polar(r1, p1),
                            z2: Complex::from_polar(r2, p2),
                        },
                        wu * w_angle,
                    ));
                }
            }
        }
        Ok(Self { n_phi1, n_phi2, n_u, nodes })
    }

    pub fn default_resolution() -> Self {
        Self::new(64, 64, 32).expect("default resolution is valid")
    }

    pub fn nodes(&self) -> &[(BallPoint, f64)] {
        &self.nodes
    }

    pub fn weight_sum(&self) -> f64 {
        self.nodes.iter().map(|(_, w)| w).sum()
    }
}

/// Gauss-Legendre nodes and weights on [0, 1], by Newton iteration on the
/// Legendre polynomial.
fn gauss_legendre_unit(n: usize) -> (Vec<f64>, Vec<f64>) {
    let mut nodes = Vec::with_capacity(n);
    let mut weights = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-style initial guess on [-1, 1].
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (p, d) = legendre_with_derivative(n, x);
            dp = d;
            let dx = p / d;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        // Map [-1, 1] -> [0, 1], reversing so nodes come out increasing.
        nodes.push(0.5 * (1.0 - x));
        weights.push(0.5 * w);
    }
    (nodes, weights)
}

fn legendre_with_derivative(n: usize, x: f64) -> (f64, f64) {
    let mut p0 = 1.0;
    let mut p1 = x;
    for k in 2..=n {
        let k = k as f64;
        let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
    }
    let d = n as f64 * (x * p1 - p0) / (x * x - 1.0);
    (p1, d)
}

/// Invariant Poisson kernel P(z, ξ) = (1 − |z|²)² / |1 − ⟨z, ξ⟩|⁴.
pub fn kernel(z: &BallPoint, xi: &BallPoint) -> Result<f64> {
    if !z.is_interior() {
        return Err(Error::Domain("kernel argument z must be interior".into()));
    }
    if !xi.is_on_sphere() {
        return Err(Error::Domain("kernel argument xi must be on the sphere".into()));
    }
    let num = (1.0 - z.norm_sqr()).powi(2);
    let den = (Complex::new(1.0, 0.0) - z.inner(xi)).norm_sqr().powi(2);
    Ok(num / den)
}

/// Relative defect of the Möbius covariance identity
/// P(ωz, ωξ) = P(z, ξ) · P(ω(0), ωξ).
///
/// The factor P(ω(0), ωξ) is the boundary Jacobian of ω on the sphere, so
/// this identity is exactly what makes the Poisson integral
/// automorphism-invariant: P(f∘ω) = P(f)∘ω. The kernel alone is covariant,
/// not pointwise invariant.
pub fn kernel_covariance_defect(
    omega: &crate::geometry::BallMobius,
    z: &BallPoint,
    xi: &BallPoint,
) -> Result<f64> {
    let wz = omega.apply(z)?;
    let wxi = omega.apply(xi)?;
    let w0 = omega.apply(&BallPoint::origin())?;
    let lhs = kernel(&wz, &wxi)?;
    let rhs = kernel(z, xi)? * kernel(&w0, &wxi)?;
    Ok((lhs - rhs).abs() / lhs.max(1.0))
}

/// Quadrature value of the invariant Poisson integral, with a normalization
/// defect as the built-in error estimate.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct PoissonValue {
    pub value: Complex,
    /// |Σ w P(z, ξ) − 1|: the kernel's own quadrature error at this z.
    pub estimated_error: f64,
    /// False when z is too close to the sphere for the supplied resolution.
    pub reliable: bool,
}

/// Distance-to-sphere margin below which the default resolution is not
/// trusted (kernel peaking governs accuracy).
pub const MIN_BOUNDARY_MARGIN: f64 = 0.05;

pub fn integral(
    f: &BoundaryFunction,
    z: &BallPoint,
    quad: &SphereQuadrature,
) -> Result<PoissonValue> {
    if !z.is_interior() {
        return Err(Error::Domain("Poisson integral evaluation point must be interior".into()));
    }
    let mut value = Complex::new(0.0, 0.0);
    let mut mass = 0.0;
    for (xi, w) in quad.nodes() {
        let p = w * kernel(z, xi)?;
        value += p * f.eval(xi);
        mass += p;
    }
    let estimated_error = (mass - 1.0).abs();
    let margin = 1.0 - z.norm_sqr().sqrt();
    Ok(PoissonValue {
        value,
        estimated_error,
        reliable: margin >= MIN_BOUNDARY_MARGIN && estimated_error < 1e-6,
    })
}

/// Central-difference estimate of the invariant Laplacian
/// Δ̃F = 4(1 − |z|²) Σ_{i,k} (δ_{ik} − z_i z̄_k) ∂²F/∂z_i∂z̄_k.
pub fn invariant_laplacian_fd(
    f: &dyn Fn(&BallPoint) -> Complex,
    z: &BallPoint,
    h: f64,
) -> Result<Complex> {
    if h < 1e-6 {
        return Err(Error::InvalidParameter(
            "step below 1e-6 rejected (cancellation dominates)".into(),
        ));
    }
    if 1.0 - z.norm_sqr().sqrt() <= 2.0 * h {
        return Err(Error::Domain("point too close to the sphere for the given step".into()));
    }

    // Real coordinates (x1, y1, x2, y2).
    let shift = |zp: &BallPoint, axis: usize, delta: f64| -> BallPoint {
        let mut p = *zp;
        match axis {
            0 => p.z1.re += delta,
            1 => p.z1.im += delta,
            2 => p.z2.re += delta,
            _ => p.z2.im += delta,
        }
        p
    };
    let second = |a: usize, b: usize| -> Complex {
        if a == b {
            (f(&shift(z, a, h)) - 2.0 * f(z) + f(&shift(z, a, -h))) / (h * h)
        } else {
            (f(&shift(&shift(z, a, h), b, h)) - f(&shift(&shift(z, a, h), b, -h))
                - f(&shift(&shift(z, a, -h), b, h))
                + f(&shift(&shift(z, a, -h), b, -h)))
                / (4.0 * h * h)
        }
    };

    // Wirtinger: 4 ∂²/∂z_i∂z̄_k = ∂²/∂x_i∂x_k + ∂²/∂y_i∂y_k
    //                            + i (∂²/∂x_i∂y_k − ∂²/∂y_i∂x_k).
    let i_unit = Complex::new(0.0, 1.0);
    let wirtinger = |i: usize, k: usize| -> Complex {
        let (xi, yi) = (2 * i, 2 * i + 1);
        let (xk, yk) = (2 * k, 2 * k + 1);
        (second(xi, xk) + second(yi, yk) + i_unit * (second(xi, yk) - second(yi, xk))) / 4.0
    };

    let zc = [z.z1, z.z2];
    let mut acc = Complex::new(0.0, 0.0);
    for i in 0..2 {
        for k in 0..2 {
            let delta = if i == k { 1.0 } else { 0.0 };
            let coeff = Complex::new(delta, 0.0) - zc[i] * zc[k].conj();
            acc += coeff * wirtinger(i, k);
        }
    }
    Ok(4.0 * (1.0 - z.norm_sqr()) * acc)
}
