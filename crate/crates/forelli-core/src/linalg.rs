//! Small dense least-squares helper shared by the fitting routines.

use nalgebra::{DMatrix, DVector};

use crate::error::{Error, Result};
use crate::Complex;

pub(crate) const MAX_CONDITION: f64 = 1e10;

/// Least-squares solve via SVD, refusing ill-conditioned systems.
pub(crate) fn solve_least_squares(
    a: DMatrix<Complex>,
    b: DVector<Complex>,
    hint: &str,
) -> Result<DVector<Complex>> {
    let svd = a.svd(true, true);
    let smax = svd.singular_values.max();
    let smin = svd.singular_values.min();
    let cond = if smin > 0.0 { smax / smin } else { f64::INFINITY };
    if cond > MAX_CONDITION {
        return Err(Error::IllConditioned { cond, hint: hint.to_string() });
    }
    svd.solve(&b, 0.0)
        .map_err(|e| Error::InvalidParameter(format!("SVD solve failed: {e}")))
}
