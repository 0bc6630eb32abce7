//! Trapezoidal Fourier analysis of uniformly sampled periodic data.
//!
//! The uniform trapezoid rule on the circle is spectrally exact: for data
//! that is a trigonometric polynomial of degree < N/2 the coefficients below
//! are exact up to rounding, which is what the extendibility tests rely on.

use std::collections::BTreeMap;

use crate::error::{Error, Result};
use crate::Complex;

/// ĝ(m) = (1/N) Σ_j samples[j] e^{−imθ_j}, θ_j = 2πj/N.
///
/// Requires |m| < N/2 so the requested index sits in the alias-safe band.
pub fn fourier_coeff(samples: &[Complex], m: i64) -> Result<Complex> {
    let n = samples.len();
    if 2 * m.unsigned_abs() as usize >= n {
        return Err(Error::IndexOutOfBand { index: m, half_n: n / 2 });
    }
    let step = -2.0 * std::f64::consts::PI * m as f64 / n as f64;
    let mut acc = Complex::new(0.0, 0.0);
    for (j, s) in samples.iter().enumerate() {
        acc += s * Complex::from_polar(1.0, step * j as f64);
    }
    Ok(acc / n as f64)
}

/// Coefficients for every index in `range` (inclusive), keyed by index.
pub fn fourier_coeffs(
    samples: &[Complex],
    range: std::ops::RangeInclusive<i64>,
) -> Result<BTreeMap<i64, Complex>> {
    let mut out = BTreeMap::new();
    for m in range {
        out.insert(m, fourier_coeff(samples, m)?);
    }
    Ok(out)
}

/// Sample `g` at the N uniform angles θ_j = 2πj/N.
pub fn sample_circle(n: usize, mut g: impl FnMut(f64) -> Complex) -> Vec<Complex> {
    (0..n)
        .map(|j| g(2.0 * std::f64::consts::PI * j as f64 / n as f64))
        .collect()
}
