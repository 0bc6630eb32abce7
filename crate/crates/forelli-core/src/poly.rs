//! Polynomials with complex coefficients, evaluated by Horner accumulation.

use serde::{Deserialize, Serialize};

use crate::Complex;

/// Univariate polynomial; `coeffs[k]` multiplies `z^k`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Polynomial {
    pub coeffs: Vec<Complex>,
}

impl Polynomial {
    pub fn new(coeffs: Vec<Complex>) -> Self {
        Self { coeffs }
    }

    pub fn constant(c: Complex) -> Self {
        Self { coeffs: vec![c] }
    }

    pub fn zero() -> Self {
        Self { coeffs: vec![] }
    }

    pub fn eval(&self, z: Complex) -> Complex {
        let mut acc = Complex::new(0.0, 0.0);
        for c in self.coeffs.iter().rev() {
            acc = acc * z + c;
        }
        acc
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.iter().rposition(|c| c.norm() != 0.0)
    }

    pub fn is_zero(&self) -> bool {
        self.degree().is_none()
    }

    /// Largest coefficient magnitude, 0 for the zero polynomial.
    pub fn max_coeff(&self) -> f64 {
        self.coeffs.iter().map(|c| c.norm()).fold(0.0, f64::max)
    }
}

/// Bivariate polynomial in (z1, z2), stored as a term list.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Poly2 {
    /// (power of z1, power of z2, coefficient)
    pub terms: Vec<(u32, u32, Complex)>,
}

impl Poly2 {
    pub fn new(terms: Vec<(u32, u32, Complex)>) -> Self {
        Self { terms }
    }

    pub fn eval(&self, z1: Complex, z2: Complex) -> Complex {
        self.terms
            .iter()
            .map(|&(p, q, c)| c * z1.powu(p) * z2.powu(q))
            .sum()
    }

    /// Highest z2-power with a nonzero coefficient.
    pub fn z2_degree(&self) -> u32 {
        self.terms
            .iter()
            .filter(|t| t.2.norm() != 0.0)
            .map(|t| t.1)
            .max()
            .unwrap_or(0)
    }
}
