//! One-dimensional engine in the unit disc: polyanalytic functions, their
//! closed-form meromorphic extension from circles, Laurent pole-order
//! detection on circles, the hyperbolic-circle family test, and the
//! polyanalytic fit.

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::HyperbolicCircle;
use crate::linalg::solve_least_squares;
use crate::poly::Polynomial;
use crate::{spectral, Complex};

pub const DEFAULT_DETECTION_TOL: f64 = 1e-9;

/// E(z) = Σ_k h_k(z) z̄^k with holomorphic polynomial coefficients.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PolyanalyticFunction {
    /// parts[k] multiplies z̄^k.
    pub parts: Vec<Polynomial>,
}

impl PolyanalyticFunction {
    pub fn new(parts: Vec<Polynomial>) -> Self {
        Self { parts }
    }

    /// Largest k with h_k ≠ 0.
    pub fn order(&self) -> usize {
        self.parts.iter().rposition(|p| !p.is_zero()).unwrap_or(0)
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let zbar = z.conj();
        let mut acc = Complex::new(0.0, 0.0);
        let mut pow = Complex::new(1.0, 0.0);
        for h in &self.parts {
            acc += h.eval(z) * pow;
            pow *= zbar;
        }
        acc
    }
}

/// Meromorphic extension of a polyanalytic function from the circle
/// |z − e| = t, obtained by substituting z̄ = ē + t²/(z − e).
#[derive(Debug, Clone)]
pub struct CircleExtension {
    pub e: Complex,
    pub t: f64,
    pub source: PolyanalyticFunction,
}

impl CircleExtension {
    /// Value at z, or None at the pole z = e.
    pub fn eval(&self, z: Complex) -> Option<Complex> {
        let d = z - self.e;
        if d.norm() < 1e-13 {
            return None;
        }
        let zbar_ext = self.e.conj() + (self.t * self.t) / d;
        let mut acc = Complex::new(0.0, 0.0);
        let mut pow = Complex::new(1.0, 0.0);
        for h in &self.source.parts {
            acc += h.eval(z) * pow;
            pow *= zbar_ext;
        }
        Some(acc)
    }

    /// The pole order at e is at most the polyanalytic order.
    pub fn declared_pole_order(&self) -> usize {
        self.source.order()
    }
}

/// Substitute z̄ = ē + t²/(z − e) into the polyanalytic form.
pub fn closed_form_circle_extension(
    e_fun: &PolyanalyticFunction,
    e: Complex,
    t: f64,
) -> Result<CircleExtension> {
    if e.norm() + t > 1.0 + 1e-12 {
        return Err(Error::Domain("circle must lie in the closed unit disc".into()));
    }
    if t <= 0.0 {
        return Err(Error::Domain("circle radius must be positive".into()));
    }
    Ok(CircleExtension { e, t, source: e_fun.clone() })
}

/// Laurent evidence from one circle: coefficients about the circle's center
/// and the detected pole order.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CircleExtensionReport {
    pub e: Complex,
    pub t: f64,
    /// ĝ(m) for −m_max ≤ m ≤ m_max.
    pub coeffs: Vec<(i64, Complex)>,
    /// Smallest k ≥ 0 with |ĝ(m)| < tol for all m < −k; None when the
    /// two-scale check disagrees (knife-edge data).
    pub detected_order: Option<usize>,
    pub tol: f64,
    pub n: usize,
}

impl CircleExtensionReport {
    pub fn coeff(&self, m: i64) -> Option<Complex> {
        self.coeffs.iter().find(|(k, _)| *k == m).map(|(_, v)| *v)
    }

    /// Pass for budget k ⇔ |ĝ(m)| < tol for all m < −k.
    pub fn pass_for_budget(&self, budget: usize) -> bool {
        self.coeffs
            .iter()
            .all(|(m, v)| *m >= -(budget as i64) || v.norm() < self.tol)
    }
}

fn order_from_coeffs(coeffs: &[(i64, Complex)], tol: f64) -> usize {
    coeffs
        .iter()
        .filter(|(m, v)| *m < 0 && v.norm() >= tol)
        .map(|(m, _)| (-m) as usize)
        .max()
        .unwrap_or(0)
}

/// Fourier/Laurent coefficients of samples g(e + t e^{iθ_j}) with the
/// two-scale pole-order detector (tol and 100·tol must agree).
pub fn circle_mero_coeffs(
    samples: &[Complex],
    e: Complex,
    t: f64,
    m_max: usize,
    tol: f64,
) -> Result<CircleExtensionReport> {
    let n = samples.len();
    if n < 4 * m_max {
        return Err(Error::InvalidParameter(format!(
            "need N >= 4*m_max samples, got N = {n}, m_max = {m_max}"
        )));
    }
    let mut coeffs = Vec::with_capacity(2 * m_max + 1);
    for m in -(m_max as i64)..=(m_max as i64) {
        coeffs.push((m, spectral::fourier_coeff(samples, m)?));
    }
    let sharp = order_from_coeffs(&coeffs, tol);
    let loose = order_from_coeffs(&coeffs, 100.0 * tol);
    let detected_order = if sharp == loose { Some(sharp) } else { None };
    Ok(CircleExtensionReport { e, t, coeffs, detected_order, tol, n })
}

/// Sample a disc function on the circle (e, t) and analyze it.
pub fn circle_mero_coeffs_of(
    g: &dyn Fn(Complex) -> Complex,
    e: Complex,
    t: f64,
    m_max: usize,
    n: usize,
    tol: f64,
) -> Result<CircleExtensionReport> {
    let samples = spectral::sample_circle(n, |theta| g(e + Complex::from_polar(t, theta)));
    circle_mero_coeffs(&samples, e, t, m_max, tol)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FamilyVerdict {
    pub center: Complex,
    pub budget: usize,
    pub reports: Vec<CircleExtensionReport>,
    pub pass: bool,
}

/// Condition (H, c, ν): from every hyperbolic circle H(c, r) the function
/// extends meromorphically inside with a single pole of order at most
/// max(ν, 0) at the Euclidean center. Budget ν ≤ 0 means holomorphic
/// extension.
pub fn hyperbolic_family_test(
    b: &dyn Fn(Complex) -> Complex,
    c: Complex,
    nu: i64,
    r_grid: &[f64],
    m_max: usize,
    n: usize,
    tol: f64,
) -> Result<FamilyVerdict> {
    if c.norm() >= 1.0 {
        return Err(Error::Domain("hyperbolic center must satisfy |c| < 1".into()));
    }
    let budget = nu.max(0) as usize;
    let mut reports = Vec::with_capacity(r_grid.len());
    let mut pass = true;
    for &r in r_grid {
        let circle = HyperbolicCircle::new(c, r)?;
        let rep = circle_mero_coeffs_of(b, circle.e, circle.t, m_max, n, tol)?;
        pass &= rep.pass_for_budget(budget);
        reports.push(rep);
    }
    Ok(FamilyVerdict { center: c, budget, reports, pass })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FitParams {
    pub nu: usize,
    pub poly_degree: usize,
    pub radii: Vec<f64>,
    pub n: usize,
}

impl FitParams {
    pub fn with_default_radii(nu: usize, poly_degree: usize, n: usize) -> Self {
        Self { nu, poly_degree, radii: chebyshev_radii(nu + 3, 0.35, 0.85), n }
    }
}

/// Chebyshev-spaced radii in [lo, hi]; conditions the Vandermonde-in-r²
/// systems of the fit.
pub fn chebyshev_radii(count: usize, lo: f64, hi: f64) -> Vec<f64> {
    (0..count)
        .map(|i| {
            let x = (std::f64::consts::PI * (i as f64 + 0.5) / count as f64).cos();
            0.5 * (lo + hi) + 0.5 * (hi - lo) * x
        })
        .collect()
}

/// Fit B ≈ Σ_k h_k(z) z̄^k from circle data: on |z| = r the term
/// c_{k,p} z^p z̄^k contributes c_{k,p} r^{p+k} at angular frequency p − k,
/// so each frequency n gives a small Vandermonde-in-r² system
/// Σ_k c_{k,n+k} r_i^{n+2k} = ĝ_{r_i}(n).
pub fn polyanalytic_fit(
    b: &dyn Fn(Complex) -> Complex,
    params: &FitParams,
) -> Result<(PolyanalyticFunction, f64)> {
    let nu = params.nu;
    let deg = params.poly_degree;
    if params.radii.len() < nu + 1 {
        return Err(Error::InvalidParameter(format!(
            "need at least nu + 1 = {} distinct radii, got {}",
            nu + 1,
            params.radii.len()
        )));
    }
    if params.n < 4 * (deg + nu) + 16 {
        return Err(Error::InvalidParameter("sample count too small for the band".into()));
    }

    // Angular coefficients per radius.
    let mut ring_coeffs: Vec<Vec<(i64, Complex)>> = Vec::with_capacity(params.radii.len());
    for &r in &params.radii {
        if !(0.0..1.0).contains(&r) || r == 0.0 {
            return Err(Error::InvalidParameter("fit radii must lie in (0, 1)".into()));
        }
        let samples = spectral::sample_circle(params.n, |t| b(Complex::from_polar(r, t)));
        let mut per = Vec::new();
        for m in -(nu as i64)..=(deg as i64) {
            per.push((m, spectral::fourier_coeff(&samples, m)?));
        }
        ring_coeffs.push(per);
    }

    let mut parts: Vec<Polynomial> =
        (0..=nu).map(|_| Polynomial::new(vec![Complex::new(0.0, 0.0); deg + 1])).collect();

    for freq in -(nu as i64)..=(deg as i64) {
        // Unknowns c_{k, freq+k} for admissible k.
        let ks: Vec<usize> = (0..=nu)
            .filter(|&k| {
                let p = freq + k as i64;
                (0..=deg as i64).contains(&p)
            })
            .collect();
        if ks.is_empty() {
            continue;
        }
        let mut a = DMatrix::zeros(params.radii.len(), ks.len());
        let mut rhs = DVector::zeros(params.radii.len());
        for (i, &r) in params.radii.iter().enumerate() {
            for (col, &k) in ks.iter().enumerate() {
                a[(i, col)] = Complex::new(r.powi(freq as i32 + 2 * k as i32), 0.0);
            }
            rhs[i] = ring_coeffs[i]
                .iter()
                .find(|(m, _)| *m == freq)
                .map(|(_, v)| *v)
                .unwrap_or_default();
        }
        let sol = solve_least_squares(a, rhs, "spread the fit radii (try Chebyshev points in [0.35, 0.85])")?;
        for (col, &k) in ks.iter().enumerate() {
            parts[k].coeffs[(freq + k as i64) as usize] = sol[col];
        }
    }

    let fitted = PolyanalyticFunction::new(parts);
    let mut residual = 0.0f64;
    for &r in &[0.2, 0.5, 0.75, 0.9] {
        for s in 0..32 {
            let z = Complex::from_polar(r, 2.0 * std::f64::consts::PI * s as f64 / 32.0);
            residual = residual.max((b(z) - fitted.eval(z)).norm());
        }
    }
    Ok((fitted, residual))
}
