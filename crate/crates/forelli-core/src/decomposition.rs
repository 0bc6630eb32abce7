//! Double decomposition of ball functions: angular Fourier slices in the
//! phase of z2, radial Taylor coefficients in the complexified variable
//! w = |z2|², and reconstruction from the slice grid.
//!
//! Phase convention: the slice F^ν is defined through the product F^ν·z2^ν,
//! so a convention is required to report F^ν itself; slices here are
//! normalized with z2 real positive (z2 = r).

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::boundary::{BoundaryFunction, CharTerm, CharacterizedSpec};
use crate::error::{Error, Result};
use crate::geometry::BallPoint;
use crate::linalg::solve_least_squares;
use crate::poly::Polynomial;
use crate::{spectral, Complex, EPS_GEOM};

/// F^ν(z1, r) from (1/2π) ∫ F(z1, r e^{iφ}) e^{−iνφ} dφ, divided by r^ν.
///
/// At r = 0 the continuous limit applies: F(z1, 0) for ν = 0, otherwise 0.
pub fn angular_slice(
    f: &dyn Fn(Complex, Complex) -> Complex,
    z1: Complex,
    r: f64,
    nu: i64,
    n: usize,
) -> Result<Complex> {
    if z1.norm_sqr() + r * r > 1.0 + EPS_GEOM {
        return Err(Error::Domain("slice point outside the closed ball".into()));
    }
    if n < 4 * nu.unsigned_abs() as usize + 16 {
        return Err(Error::InvalidParameter(format!(
            "need N >= 4|nu| + 16 for slice nu = {nu}, got N = {n}"
        )));
    }
    if r == 0.0 {
        return Ok(if nu == 0 { f(z1, Complex::new(0.0, 0.0)) } else { Complex::new(0.0, 0.0) });
    }
    let samples = spectral::sample_circle(n, |phi| f(z1, Complex::from_polar(r, phi)));
    let coeff = spectral::fourier_coeff(&samples, nu)?;
    Ok(coeff / r.powi(nu as i32))
}

/// One grid node: a z1 value, a |z2| value, and the slice values at it.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceNode {
    pub z1: Complex,
    pub r: f64,
    /// Index 0 corresponds to ν = −nu_max.
    pub slices: Vec<Complex>,
}

/// Angular slices F^ν on a fixed set of (z1, r) nodes, ν ∈ [−nu_max, nu_max].
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SliceGrid {
    pub nu_max: i64,
    pub n_phi: usize,
    pub nodes: Vec<SliceNode>,
}

pub const DEFAULT_NU_MAX: i64 = 16;
pub const DEFAULT_L_MAX: usize = 16;

impl SliceGrid {
    /// Decompose boundary data on the sphere: z1 ranges over the polar grid
    /// radii × n_psi angles, with r = √(1 − |z1|²) forced by the sphere.
    pub fn from_boundary(
        f: &BoundaryFunction,
        z1_radii: &[f64],
        n_psi: usize,
        nu_max: i64,
        n_phi: usize,
    ) -> Result<Self> {
        let eval = |z1: Complex, z2: Complex| f.eval(&BallPoint { z1, z2 });
        let mut nodes = Vec::new();
        for &rho in z1_radii {
            if !(0.0..1.0).contains(&rho) {
                return Err(Error::Domain("z1 grid radius must lie in [0, 1)".into()));
            }
            let r = (1.0 - rho * rho).max(0.0).sqrt();
            for q in 0..n_psi {
                let z1 = Complex::from_polar(rho, 2.0 * std::f64::consts::PI * q as f64 / n_psi as f64);
                let mut slices = Vec::with_capacity((2 * nu_max + 1) as usize);
                for nu in -nu_max..=nu_max {
                    slices.push(angular_slice(&eval, z1, r, nu, n_phi)?);
                }
                nodes.push(SliceNode { z1, r, slices });
            }
        }
        Ok(Self { nu_max, n_phi, nodes })
    }

    pub fn slice(&self, node: &SliceNode, nu: i64) -> Option<Complex> {
        if nu.abs() > self.nu_max {
            return None;
        }
        node.slices.get((nu + self.nu_max) as usize).copied()
    }

    fn find_node(&self, z1: Complex, r: f64) -> Option<&SliceNode> {
        self.nodes
            .iter()
            .find(|n| n.z1 == z1 && (n.r - r).abs() < 1e-13)
    }

    /// Partial sum Σ_{|ν| ≤ nu_max} F^ν(z1, |z2|) z2^ν at a grid node.
    ///
    /// Exact-node evaluation only; interpolation is refused.
    pub fn reconstruct(&self, z: &BallPoint, nu_max: i64) -> Result<Complex> {
        if nu_max > self.nu_max {
            return Err(Error::InvalidParameter(format!(
                "grid holds |nu| <= {}, requested {nu_max}",
                self.nu_max
            )));
        }
        let r = z.z2.norm();
        let node = self.find_node(z.z1, r).ok_or_else(|| {
            Error::Domain("reconstruction point is not a grid node (interpolation refused)".into())
        })?;
        let mut acc = self.slice(node, 0).unwrap();
        if r == 0.0 {
            return Ok(acc);
        }
        for nu in 1..=nu_max {
            let pos = z.z2.powu(nu as u32);
            acc += self.slice(node, nu).unwrap() * pos;
            acc += self.slice(node, -nu).unwrap() / pos;
        }
        Ok(acc)
    }
}

/// Radial Taylor data at one (z1, l): the Cauchy coefficient A_l of the
/// slice in the complexified variable w on the contour |w| = 1 − |z1|², and
/// its normalization B_l = A_l (1 − |z1|²)^{l+ν}.
pub fn radial_taylor(
    slice_w: &dyn Fn(Complex) -> Complex,
    z1: Complex,
    l: usize,
    nu: i64,
    n_w: usize,
) -> Result<(Complex, Complex)> {
    if z1.norm() >= 1.0 {
        return Err(Error::Domain("radial contour collapses for |z1| >= 1".into()));
    }
    if n_w < 4 * l + 16 {
        return Err(Error::InvalidParameter("contour node count too small for l".into()));
    }
    let big_r = 1.0 - z1.norm_sqr();
    let samples = spectral::sample_circle(n_w, |t| slice_w(Complex::from_polar(big_r, t)));
    let a_l = spectral::fourier_coeff(&samples, l as i64)? / big_r.powi(l as i32);
    let b_l = a_l * big_r.powi((l as i64 + nu) as i32);
    Ok((a_l, b_l))
}

/// Per-(l, z1) radial coefficients for a fixed ν.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RadialCoeffs {
    pub nu: i64,
    pub z1: Complex,
    /// (A_l, B_l) for l = 0..=l_max.
    pub coeffs: Vec<(Complex, Complex)>,
}

pub fn radial_coeffs(
    slice_w: &dyn Fn(Complex) -> Complex,
    z1: Complex,
    nu: i64,
    l_max: usize,
    n_w: usize,
) -> Result<RadialCoeffs> {
    let mut coeffs = Vec::with_capacity(l_max + 1);
    for l in 0..=l_max {
        coeffs.push(radial_taylor(slice_w, z1, l, nu, n_w)?);
    }
    Ok(RadialCoeffs { nu, z1, coeffs })
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CharFitParams {
    pub nu_max: u32,
    pub poly_degree: usize,
    /// |z1| circles on which slices are sampled.
    pub radii: Vec<f64>,
    /// Angular nodes in arg z1.
    pub n_psi: usize,
    /// Angular nodes in arg z2.
    pub n_phi: usize,
}

impl Default for CharFitParams {
    fn default() -> Self {
        Self { nu_max: 8, poly_degree: 8, radii: vec![0.3, 0.4, 0.5, 0.6, 0.7, 0.8], n_psi: 64, n_phi: 256 }
    }
}

/// Recover the per-slice holomorphic coefficients h^ν_j of a function of
/// the two-bundle-extendible class from its sphere values.
///
/// On the sphere |z2|² = 1 − |z1|², so for each ν the slice has the form
/// Σ_j h^ν_j(z1) (1 − |z1|²)^{−j}; expanding h^ν_j in powers of z1 and
/// reading angular frequencies of z1 turns this into small per-frequency
/// least-squares systems over the |z1| radii.
pub fn fit_characterized(
    f: &BoundaryFunction,
    params: &CharFitParams,
) -> Result<(CharacterizedSpec, f64)> {
    let eval = |z1: Complex, z2: Complex| f.eval(&BallPoint { z1, z2 });
    let radii = &params.radii;
    if radii.len() < 2 {
        return Err(Error::InvalidParameter("need at least two |z1| radii".into()));
    }

    let mut terms: Vec<CharTerm> = Vec::new();
    for nu in 1..=params.nu_max {
        let j_count = (nu as usize).div_ceil(2); // j with 2j < nu
        // Slice values on each z1 circle.
        let mut freq: Vec<Vec<Complex>> = Vec::with_capacity(radii.len());
        for &rho in radii {
            let r = (1.0 - rho * rho).sqrt();
            let mut ring = Vec::with_capacity(params.n_psi);
            for q in 0..params.n_psi {
                let z1 =
                    Complex::from_polar(rho, 2.0 * std::f64::consts::PI * q as f64 / params.n_psi as f64);
                ring.push(angular_slice(&eval, z1, r, nu as i64, params.n_phi)?);
            }
            // Angular frequencies p of z1 on this ring.
            let mut per_p = Vec::with_capacity(params.poly_degree + 1);
            for p in 0..=params.poly_degree as i64 {
                per_p.push(spectral::fourier_coeff(&ring, p)?);
            }
            freq.push(per_p);
        }

        // For each z1-power p: freq[m][p] = Σ_j c_{j,p} rho_m^p (1-rho_m^2)^{-j}.
        let mut h_polys: Vec<Vec<Complex>> = vec![vec![Complex::new(0.0, 0.0); params.poly_degree + 1]; j_count];
        for p in 0..=params.poly_degree {
            let mut a = DMatrix::zeros(radii.len(), j_count);
            let mut b = DVector::zeros(radii.len());
            for (m, &rho) in radii.iter().enumerate() {
                let scale = rho.powi(p as i32);
                for j in 0..j_count {
                    a[(m, j)] = Complex::new(scale * (1.0 - rho * rho).powi(-(j as i32)), 0.0);
                }
                b[m] = freq[m][p];
            }
            let sol = solve_least_squares(a, b, "spread the |z1| radii further apart")?;
            for j in 0..j_count {
                h_polys[j][p] = sol[j];
            }
        }

        for (j, coeffs) in h_polys.into_iter().enumerate() {
            let poly = Polynomial::new(coeffs);
            if poly.max_coeff() > 1e-10 {
                terms.push(CharTerm { nu, j: j as u32, h: poly });
            }
        }
    }

    let spec = CharacterizedSpec::new(terms)?;
    let fitted = BoundaryFunction::characterized(spec.clone());

    // Sup residual on a verification grid on the sphere.
    let mut residual = 0.0f64;
    for &rho in &[0.25f64, 0.55, 0.85] {
        let r = (1.0 - rho * rho).sqrt();
        for q in 0..24 {
            for s in 0..8 {
                let z1 = Complex::from_polar(rho, 2.0 * std::f64::consts::PI * q as f64 / 24.0);
                let z2 = Complex::from_polar(r, 2.0 * std::f64::consts::PI * s as f64 / 8.0);
                let z = BallPoint { z1, z2 };
                residual = residual.max((f.eval(&z) - fitted.eval(&z)).norm());
            }
        }
    }
    Ok((spec, residual))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::Poly2;

    fn c(re: f64, im: f64) -> Complex {
        Complex::new(re, im)
    }

    #[test]
    fn slice_of_pure_power() {
        let f = |_z1: Complex, z2: Complex| z2 * z2;
        let v = angular_slice(&f, c(0.1, 0.0), 0.5, 2, 64).unwrap();
        assert!((v - c(1.0, 0.0)).norm() < 1e-14);
        for nu in [-2i64, -1, 0, 1, 3] {
            assert!(angular_slice(&f, c(0.1, 0.0), 0.5, nu, 64).unwrap().norm() < 1e-14);
        }
    }

    #[test]
    fn slice_of_modulus() {
        let f = |_z1: Complex, z2: Complex| Complex::new(z2.norm_sqr(), 0.0);
        let v = angular_slice(&f, c(0.0, 0.0), 0.5, 0, 64).unwrap();
        assert!((v - c(0.25, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn slice_at_zero_radius_uses_limit_convention() {
        let f = |z1: Complex, _z2: Complex| z1;
        assert!((angular_slice(&f, c(0.3, 0.0), 0.0, 0, 64).unwrap() - c(0.3, 0.0)).norm() < 1e-15);
        assert_eq!(angular_slice(&f, c(0.3, 0.0), 0.0, 3, 64).unwrap(), c(0.0, 0.0));
    }

    #[test]
    fn globevnik_slice_on_sphere() {
        let g = BoundaryFunction::globevnik(3).unwrap();
        let f = |z1: Complex, z2: Complex| g.eval(&BallPoint { z1, z2 });
        let rho = 0.6f64;
        let r = (1.0 - rho * rho).sqrt();
        let v = angular_slice(&f, c(rho, 0.0), r, 4, 64).unwrap();
        assert!((v - c(1.0 / (r * r), 0.0)).norm() < 1e-12);
    }

    #[test]
    fn radial_taylor_linear_slice() {
        let z1 = c(0.5, 0.0);
        let slice = move |w: Complex| z1 + w;
        let (a0, _) = radial_taylor(&slice, z1, 0, 0, 64).unwrap();
        let (a1, _) = radial_taylor(&slice, z1, 1, 0, 64).unwrap();
        let (a2, _) = radial_taylor(&slice, z1, 2, 0, 64).unwrap();
        assert!((a0 - z1).norm() < 1e-14);
        assert!((a1 - c(1.0, 0.0)).norm() < 1e-13);
        assert!(a2.norm() < 1e-13);
    }

    #[test]
    fn radial_taylor_normalization() {
        // A_1 = 1, nu = 2, z1 = 0.5 -> B_1 = 0.75^3.
        let slice = |w: Complex| w; // A_1 = 1
        let (_, b1) = radial_taylor(&slice, c(0.5, 0.0), 1, 2, 64).unwrap();
        assert!((b1 - c(0.421875, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn radial_taylor_rejects_boundary_z1() {
        let slice = |w: Complex| w;
        assert!(radial_taylor(&slice, c(1.0, 0.0), 0, 0, 64).is_err());
    }

    #[test]
    fn reconstruct_single_power() {
        let f = BoundaryFunction::holomorphic_poly(Poly2::new(vec![(0, 2, c(1.0, 0.0))]));
        let grid = SliceGrid::from_boundary(&f, &[0.3, 0.6], 8, 4, 64).unwrap();
        for node in &grid.nodes {
            let z2 = Complex::from_polar(node.r, 0.7);
            let z = BallPoint { z1: node.z1, z2 };
            let v = grid.reconstruct(&z, 4).unwrap();
            assert!((v - z2 * z2).norm() < 1e-13);
        }
    }

    #[test]
    fn reconstruct_with_negative_slice() {
        // f = z1 + z2 + conj(z2): slices nu in {-1, 0, 1}.
        let f = BoundaryFunction::custom(|z| z.z1 + z.z2 + z.z2.conj());
        let grid = SliceGrid::from_boundary(&f, &[0.2, 0.5], 8, 1, 64).unwrap();
        for node in &grid.nodes {
            let z2 = Complex::from_polar(node.r, 1.3);
            let z = BallPoint { z1: node.z1, z2 };
            let v = grid.reconstruct(&z, 1).unwrap();
            assert!((v - f.eval(&z)).norm() < 1e-12);
        }
    }

    #[test]
    fn reconstruct_globevnik_supnorm() {
        let f = BoundaryFunction::globevnik(3).unwrap();
        let grid = SliceGrid::from_boundary(&f, &[0.2, 0.5, 0.8], 8, 4, 128).unwrap();
        let mut worst = 0.0f64;
        for node in &grid.nodes {
            for s in 0..8 {
                let z2 = Complex::from_polar(node.r, 2.0 * std::f64::consts::PI * s as f64 / 8.0);
                let z = BallPoint { z1: node.z1, z2 };
                worst = worst.max((grid.reconstruct(&z, 4).unwrap() - f.eval(&z)).norm());
            }
        }
        assert!(worst < 1e-10, "sup error {worst}");
    }

    #[test]
    fn reconstruct_refuses_off_grid_points() {
        let f = BoundaryFunction::modulus_sq();
        let grid = SliceGrid::from_boundary(&f, &[0.3], 4, 2, 64).unwrap();
        let z = BallPoint::new(c(0.123, 0.0), c(0.5, 0.0)).unwrap();
        assert!(grid.reconstruct(&z, 2).is_err());
    }

    #[test]
    fn fourier_conjugate_symmetry_for_real_data() {
        // For real-valued data the raw angular coefficients satisfy
        // c_{-nu} = conj(c_nu), i.e. F^{-nu} r^{-nu} = conj(F^nu r^nu).
        let f = BoundaryFunction::custom(|z| {
            let w = z.z1 * z.z2.conj() + z.z2 * z.z2 * Complex::new(0.2, 0.5);
            Complex::new(z.z2.norm_sqr() + 2.0 * w.re, 0.0)
        });
        let eval = |z1: Complex, z2: Complex| f.eval(&BallPoint { z1, z2 });
        let z1 = Complex::from_polar(0.4, 0.3);
        let r = (1.0 - z1.norm_sqr()).sqrt();
        for nu in 1..=4i64 {
            let plus = angular_slice(&eval, z1, r, nu, 64).unwrap() * r.powi(nu as i32);
            let minus = angular_slice(&eval, z1, r, -nu, 64).unwrap() * r.powi(-nu as i32);
            assert!((minus - plus.conj()).norm() < 1e-13, "nu = {nu}");
        }
    }

    #[test]
    fn parseval_consistency() {
        let f = BoundaryFunction::custom(|z| z.z1 + z.z2 * z.z2 + z.z2.conj() * c(0.3, 0.1));
        let eval = |z1: Complex, z2: Complex| f.eval(&BallPoint { z1, z2 });
        let z1 = c(0.3, 0.2);
        let r = 0.5f64;
        let mut lhs = 0.0;
        for nu in -6..=6i64 {
            let s = angular_slice(&eval, z1, r, nu, 64).unwrap();
            lhs += (s * r.powi(nu as i32)).norm_sqr();
        }
        let samples = spectral::sample_circle(64, |phi| eval(z1, Complex::from_polar(r, phi)));
        let rhs: f64 = samples.iter().map(|v| v.norm_sqr()).sum::<f64>() / 64.0;
        assert!((lhs - rhs).abs() < 1e-10);
    }

    #[test]
    fn truncation_decay_for_analytic_data() {
        let f = BoundaryFunction::custom(|z| z.z2.exp());
        let eval = |z1: Complex, z2: Complex| f.eval(&BallPoint { z1, z2 });
        let rho = 0.6f64;
        let r = (1.0 - rho * rho).sqrt();
        let mags: Vec<f64> = (4..10)
            .map(|nu| {
                (angular_slice(&eval, c(rho, 0.0), r, nu, 128).unwrap() * r.powi(nu as i32)).norm()
            })
            .collect();
        for w in mags.windows(2) {
            assert!(w[1] < 0.5 * w[0], "no geometric decay: {mags:?}");
        }
    }

    #[test]
    fn smooth_lemma_boundedness_near_rim() {
        // F^nu (1-|z1|^2)^nu stays bounded as |z1| -> 1 along the sphere.
        let g = BoundaryFunction::globevnik(3).unwrap();
        let eval = |z1: Complex, z2: Complex| g.eval(&BallPoint { z1, z2 });
        let mut vals = Vec::new();
        for rho in [0.9, 0.99, 0.999] {
            let r = (1.0f64 - rho * rho).sqrt();
            let v = angular_slice(&eval, c(rho, 0.0), r, 4, 64).unwrap();
            vals.push((v * (1.0 - rho * rho).powi(4)).norm());
        }
        for v in &vals {
            assert!(*v < 2.0, "unbounded: {vals:?}");
        }
    }

    #[test]
    fn characterized_roundtrip_single_term() {
        let spec = CharacterizedSpec::new(vec![CharTerm {
            nu: 3,
            j: 1,
            h: Polynomial::new(vec![c(0.0, 0.0), c(1.0, 0.0)]),
        }])
        .unwrap();
        let f = BoundaryFunction::characterized(spec.clone());
        let params = CharFitParams { nu_max: 4, poly_degree: 3, ..Default::default() };
        let (fit, residual) = fit_characterized(&f, &params).unwrap();
        assert!(residual < 1e-8, "residual {residual}");
        // The recovered nu=3, j=1 coefficient matches h(z1) = z1.
        let term = fit.terms.iter().find(|t| t.nu == 3 && t.j == 1).expect("term recovered");
        assert!((term.h.eval(c(0.5, 0.2)) - c(0.5, 0.2)).norm() < 1e-8);
    }
}
