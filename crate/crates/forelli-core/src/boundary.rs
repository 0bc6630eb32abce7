//! Catalog of boundary functions on the unit sphere in ℂ² used as test
//! subjects: holomorphic polynomials, |z1|², the z2^k/z̄2 family, and the
//! two-bundle-extendible class built from per-slice holomorphic coefficients.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::{line_boundary_circle, BallPoint, ComplexLine};
use crate::poly::{Poly2, Polynomial};
use crate::Complex;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Smoothness {
    Analytic,
    FinitelySmooth(u32),
    Continuous,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SingularSet {
    Empty,
    /// The circle {z2 = 0} ∩ ∂B², where |z2|-power terms lose smoothness.
    Z2Zero,
}

/// One term h(z1) · z2^ν / |z2|^{2j} of the two-bundle-extendible class.
/// Requires 2j < ν, so the term tends to 0 as z2 → 0.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharTerm {
    pub nu: u32,
    pub j: u32,
    pub h: Polynomial,
}

/// A finite family of [`CharTerm`]s; the sum is the general continuous
/// function extendible along every complex line meeting {z2 = 0}.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CharacterizedSpec {
    pub terms: Vec<CharTerm>,
}

impl CharacterizedSpec {
    pub fn new(terms: Vec<CharTerm>) -> Result<Self> {
        for t in &terms {
            if 2 * t.j >= t.nu {
                return Err(Error::InvalidParameter(format!(
                    "characterized term requires 2j < nu, got nu = {}, j = {}",
                    t.nu, t.j
                )));
            }
        }
        Ok(Self { terms })
    }

    pub fn eval(&self, z1: Complex, z2: Complex) -> Complex {
        let r2 = z2.norm_sqr();
        if r2 == 0.0 {
            // Each term has modulus |h| |z2|^{nu-2j} -> 0.
            return Complex::new(0.0, 0.0);
        }
        self.terms
            .iter()
            .map(|t| t.h.eval(z1) * z2.powu(t.nu) / r2.powi(t.j as i32))
            .sum()
    }
}

type CustomEval = Arc<dyn Fn(&BallPoint) -> Complex + Send + Sync>;

#[derive(Clone)]
enum Family {
    HolomorphicPoly(Poly2),
    ModulusSq,
    Globevnik { k: u32 },
    Characterized(CharacterizedSpec),
    Custom { eval: CustomEval, smoothness: Smoothness },
}

/// A tagged evaluator on the unit sphere of ℂ².
#[derive(Clone)]
pub struct BoundaryFunction {
    family: Family,
}

impl fmt::Debug for BoundaryFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.describe())
    }
}

impl BoundaryFunction {
    pub fn holomorphic_poly(p: Poly2) -> Self {
        Self { family: Family::HolomorphicPoly(p) }
    }

    pub fn modulus_sq() -> Self {
        Self { family: Family::ModulusSq }
    }

    /// z2^k / z̄2, continuous only for k >= 2.
    pub fn globevnik(k: u32) -> Result<Self> {
        if k < 2 {
            return Err(Error::InvalidParameter(
                "globevnik requires k >= 2 (k < 2 is not continuous at z2 = 0)".into(),
            ));
        }
        Ok(Self { family: Family::Globevnik { k } })
    }

    pub fn characterized(spec: CharacterizedSpec) -> Self {
        Self { family: Family::Characterized(spec) }
    }

    pub fn custom(eval: impl Fn(&BallPoint) -> Complex + Send + Sync + 'static) -> Self {
        Self {
            family: Family::Custom { eval: Arc::new(eval), smoothness: Smoothness::Continuous },
        }
    }

    pub fn eval(&self, z: &BallPoint) -> Complex {
        match &self.family {
            Family::HolomorphicPoly(p) => p.eval(z.z1, z.z2),
            Family::ModulusSq => Complex::new(z.z1.norm_sqr(), 0.0),
            Family::Globevnik { k } => {
                // z2^k / conj(z2) = z2^{k+1} / |z2|^2, value 0 at z2 = 0.
                let r2 = z.z2.norm_sqr();
                if r2 == 0.0 {
                    Complex::new(0.0, 0.0)
                } else {
                    z.z2.powu(k + 1) / r2
                }
            }
            Family::Characterized(spec) => spec.eval(z.z1, z.z2),
            Family::Custom { eval, .. } => eval(z),
        }
    }

    pub fn smoothness(&self) -> Smoothness {
        match &self.family {
            Family::HolomorphicPoly(_) | Family::ModulusSq => Smoothness::Analytic,
            Family::Globevnik { k } => Smoothness::FinitelySmooth(k.saturating_sub(1)),
            Family::Characterized(_) => Smoothness::Continuous,
            Family::Custom { smoothness, .. } => *smoothness,
        }
    }

    pub fn singular_set(&self) -> SingularSet {
        match &self.family {
            Family::HolomorphicPoly(_) | Family::ModulusSq => SingularSet::Empty,
            Family::Globevnik { .. } | Family::Characterized(_) => SingularSet::Z2Zero,
            Family::Custom { .. } => SingularSet::Empty,
        }
    }

    pub fn describe(&self) -> String {
        match &self.family {
            Family::HolomorphicPoly(p) => format!("poly({} terms)", p.terms.len()),
            Family::ModulusSq => "modulus_sq".into(),
            Family::Globevnik { k } => format!("globevnik(k={k})"),
            Family::Characterized(s) => format!("characterized({} terms)", s.terms.len()),
            Family::Custom { .. } => "custom".into(),
        }
    }
}

/// Sample f on the boundary circle of a complex line at N uniform angles:
/// f(base + (lambda0 + rho e^{iθ_j}) dir), θ_j = 2πj/N.
pub fn evaluate_on_circle(
    f: &BoundaryFunction,
    line: &ComplexLine,
    n: usize,
) -> Result<Vec<Complex>> {
    if n < 16 || !n.is_power_of_two() {
        return Err(Error::InvalidParameter(format!(
            "node count must be a power of two >= 16, got {n}"
        )));
    }
    let circle = line_boundary_circle(line)?;
    let mut out = Vec::with_capacity(n);
    for j in 0..n {
        let theta = 2.0 * std::f64::consts::PI * j as f64 / n as f64;
        let lam = circle.lambda0 + Complex::from_polar(circle.rho, theta);
        let (z1, z2) = line.point_at(lam);
        out.push(f.eval(&BallPoint { z1, z2 }));
    }
    Ok(out)
}
