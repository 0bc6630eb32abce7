//! The decision engine: Laurent/Fourier residuals of boundary data along
//! circles, per-line extendibility tests, and the bundle test over families
//! of complex lines through prescribed vertices.
//!
//! Index convention: samples on a circle λ = center + radius·e^{iθ} are
//! analyzed into coefficients ĝ(m); vanishing of every ĝ(m) with m < 0 is
//! equivalent to the vanishing of the contour moments ∮ g(λz) λ^m dλ, m ≥ 0
//! (the dλ = i e^{iθ} dθ factor only shifts the index by one and scales by a
//! constant, which cannot affect vanishing).

use std::collections::BTreeMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::boundary::{evaluate_on_circle, BoundaryFunction, Smoothness};
use crate::error::{Error, Result};
use crate::geometry::{line_boundary_circle, BallMobius, BallPoint, ComplexLine, LineBoundaryCircle};
use crate::{spectral, Complex};

pub const DEFAULT_TOL: f64 = 1e-8;
pub const DEFAULT_NODES: usize = 512;
pub const DEFAULT_M_MAX: usize = 32;
pub const DEFAULT_LINES_PER_VERTEX: usize = 200;

/// Node count by smoothness hint: spectrally convergent families keep the
/// default, finitely-smooth and merely-continuous ones get the fine grid.
pub fn nodes_for(smoothness: Smoothness) -> usize {
    match smoothness {
        Smoothness::Analytic => DEFAULT_NODES,
        Smoothness::FinitelySmooth(_) | Smoothness::Continuous => 2048,
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    Pass,
    Fail,
    /// Residuals above tolerance but still dropping under refinement:
    /// quadrature-limited evidence, never coerced to pass.
    Inconclusive,
}

impl Verdict {
    pub fn combine(self, other: Verdict) -> Verdict {
        use Verdict::*;
        match (self, other) {
            (Fail, _) | (_, Fail) => Fail,
            (Inconclusive, _) | (_, Inconclusive) => Inconclusive,
            _ => Pass,
        }
    }
}

/// Per-circle residual report.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct MomentReport {
    pub line: Option<ComplexLine>,
    pub circle: Option<LineBoundaryCircle>,
    /// |ĝ(m)| keyed by Laurent index m < 0.
    pub residuals: BTreeMap<i64, f64>,
    pub max_residual: f64,
    pub verdict: Verdict,
    pub pass: bool,
    pub tol: f64,
    pub m_max: usize,
    /// Nodes used for the reported coefficients (after the doubling check).
    pub n_used: usize,
}

fn residuals_from_samples(
    samples: &[Complex],
    indices: impl Iterator<Item = i64> + Clone,
) -> Result<BTreeMap<i64, f64>> {
    let mut out = BTreeMap::new();
    for m in indices {
        out.insert(m, spectral::fourier_coeff(samples, m)?.norm());
    }
    Ok(out)
}

fn max_residual(map: &BTreeMap<i64, f64>) -> f64 {
    map.values().cloned().fold(0.0, f64::max)
}

/// Doubling protocol: pass when the refined residual is below tolerance;
/// a residual that survives refinement is a genuine coefficient (fail);
/// a residual still shrinking under refinement is quadrature-limited
/// (inconclusive).
fn verdict_from_doubling(coarse: f64, refined: f64, tol: f64) -> Verdict {
    if refined < tol {
        Verdict::Pass
    } else if refined <= 0.5 * coarse {
        Verdict::Inconclusive
    } else {
        Verdict::Fail
    }
}

/// Laurent residuals of f restricted to the boundary circle of `line`,
/// expanded about the circle's own center.
///
/// With `pole_budget` = 0 this is exactly the holomorphic-extendibility
/// criterion; budget k tolerates a pole of order at most k at the center.
pub fn line_extension_residuals(
    f: &BoundaryFunction,
    line: &ComplexLine,
    m_max: usize,
    n: usize,
    pole_budget: usize,
    tol: f64,
) -> Result<MomentReport> {
    if n < 4 * m_max {
        return Err(Error::InvalidParameter(format!(
            "need N >= 4*m_max, got N = {n}, m_max = {m_max}"
        )));
    }
    if pole_budget >= m_max {
        return Err(Error::InvalidParameter("pole budget must be below m_max".into()));
    }
    let circle = line_boundary_circle(line)?;
    let indices = -(m_max as i64)..=-(pole_budget as i64 + 1);

    let coarse = evaluate_on_circle(f, line, n)?;
    let coarse_res = residuals_from_samples(&coarse, indices.clone())?;
    let refined = evaluate_on_circle(f, line, 2 * n)?;
    let refined_res = residuals_from_samples(&refined, indices)?;

    let r1 = max_residual(&coarse_res);
    let r2 = max_residual(&refined_res);
    let verdict = verdict_from_doubling(r1, r2, tol);
    Ok(MomentReport {
        line: Some(*line),
        circle: Some(circle),
        residuals: refined_res,
        max_residual: r2,
        verdict,
        pass: verdict == Verdict::Pass,
        tol,
        m_max,
        n_used: 2 * n,
    })
}

/// Moment residuals |(f∘ω)_m(z)| for m = 0..m_max, computed as Fourier
/// coefficients of θ ↦ (f∘ω)(e^{iθ} z) at indices −(m+1).
///
/// An independent route to the same verdict as [`line_extension_residuals`]
/// on the image line ω({λz}).
pub fn automorphism_moment_residuals(
    f: &BoundaryFunction,
    omega: &BallMobius,
    z: &BallPoint,
    m_max: usize,
    n: usize,
    tol: f64,
) -> Result<MomentReport> {
    if !z.is_on_sphere() {
        return Err(Error::Domain("moment base point must be on the sphere".into()));
    }
    if n < 4 * m_max {
        return Err(Error::InvalidParameter(format!(
            "need N >= 4*m_max, got N = {n}, m_max = {m_max}"
        )));
    }
    if !omega.apply(&BallPoint::origin())?.is_interior() {
        return Err(Error::Domain("automorphism must send 0 to an interior point".into()));
    }

    let sample = |count: usize| -> Result<Vec<Complex>> {
        let mut out = Vec::with_capacity(count);
        for j in 0..count {
            let theta = 2.0 * std::f64::consts::PI * j as f64 / count as f64;
            let lam = Complex::from_polar(1.0, theta);
            let p = BallPoint { z1: lam * z.z1, z2: lam * z.z2 };
            out.push(f.eval(&omega.apply(&p)?));
        }
        Ok(out)
    };

    let indices = -(m_max as i64 + 1)..=-1;
    let coarse = residuals_from_samples(&sample(n)?, indices.clone())?;
    let refined = residuals_from_samples(&sample(2 * n)?, indices)?;
    let r1 = max_residual(&coarse);
    let r2 = max_residual(&refined);
    let verdict = verdict_from_doubling(r1, r2, tol);
    Ok(MomentReport {
        line: None,
        circle: None,
        residuals: refined,
        max_residual: r2,
        verdict,
        pass: verdict == Verdict::Pass,
        tol,
        m_max,
        n_used: 2 * n,
    })
}

/// The complex line ω({λ z}), used to cross-check the two moment routes.
pub fn image_line_of_slice(omega: &BallMobius, z: &BallPoint) -> Result<ComplexLine> {
    let base = omega.apply(&BallPoint::origin())?;
    let half = BallPoint { z1: 0.5 * z.z1, z2: 0.5 * z.z2 };
    let other = omega.apply(&half)?;
    ComplexLine::new(base, (other.z1 - base.z1, other.z2 - base.z2))
}

#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
pub struct BundleParams {
    pub lines_per_vertex: usize,
    pub m_max: usize,
    /// Circle node count; `None` dispatches on the smoothness hint.
    pub n: Option<usize>,
    pub tol: f64,
    pub seed: u64,
}

impl Default for BundleParams {
    fn default() -> Self {
        Self {
            lines_per_vertex: DEFAULT_LINES_PER_VERTEX,
            m_max: DEFAULT_M_MAX,
            n: None,
            tol: DEFAULT_TOL,
            seed: 0,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct BundleReport {
    pub vertices: Vec<BallPoint>,
    pub lines_per_vertex: usize,
    pub reports: Vec<MomentReport>,
    pub verdict: Verdict,
    pub pass: bool,
    /// True when all vertices sit on a single complex line; the theorem's
    /// general-position hypothesis fails there, so a pass certifies nothing.
    pub collinear_vertices: bool,
    pub worst_line: Option<ComplexLine>,
    pub worst_residual: f64,
    pub n_used: usize,
}

/// Deterministic low-discrepancy directions on the space of complex lines
/// through a point (directions modulo phase = the 2-sphere), via a golden
/// spiral with a seeded angular offset.
pub fn spiral_directions(count: usize, seed: u64) -> Vec<(Complex, Complex)> {
    use rand::{Rng, SeedableRng};
    let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
    let offset: f64 = rng.gen::<f64>() * 2.0 * std::f64::consts::PI;
    let golden = std::f64::consts::PI * (3.0 - 5.0f64.sqrt());
    (0..count)
        .map(|i| {
            let zc = 1.0 - 2.0 * (i as f64 + 0.5) / count as f64;
            let alpha = zc.clamp(-1.0, 1.0).acos();
            let phi = offset + golden * i as f64;
            (
                Complex::new((alpha / 2.0).cos(), 0.0),
                Complex::from_polar((alpha / 2.0).sin(), phi),
            )
        })
        .collect()
}

/// True when every vertex lies on one complex line (always true for fewer
/// than three vertices).
pub fn vertices_collinear(vertices: &[BallPoint]) -> bool {
    if vertices.len() <= 2 {
        return true;
    }
    let v0 = &vertices[0];
    let mut dir: Option<(Complex, Complex)> = None;
    for v in &vertices[1..] {
        let d = (v.z1 - v0.z1, v.z2 - v0.z2);
        if d.0.norm() + d.1.norm() < 1e-12 {
            continue;
        }
        match dir {
            None => dir = Some(d),
            Some(w) => {
                let det = d.0 * w.1 - d.1 * w.0;
                if det.norm() > 1e-12 {
                    return false;
                }
            }
        }
    }
    true
}

/// Run the per-line extendibility test over `lines_per_vertex` sampled
/// directions through each vertex and aggregate.
pub fn bundle_test(
    f: &BoundaryFunction,
    vertices: &[BallPoint],
    params: &BundleParams,
) -> Result<BundleReport> {
    if vertices.is_empty() {
        return Err(Error::Usage("bundle test requires at least one vertex".into()));
    }
    if params.lines_per_vertex == 0 {
        return Err(Error::Usage("lines_per_vertex must be at least 1".into()));
    }
    for (i, v) in vertices.iter().enumerate() {
        if !v.is_interior() {
            return Err(Error::Domain(format!("vertex {i} is not interior")));
        }
        for w in &vertices[..i] {
            if (v.z1 - w.z1).norm() + (v.z2 - w.z2).norm() < 1e-12 {
                return Err(Error::Degenerate("vertices must be pairwise distinct".into()));
            }
        }
    }
    let n = params.n.unwrap_or_else(|| nodes_for(f.smoothness()));
    let dirs = spiral_directions(params.lines_per_vertex, params.seed);

    let mut lines = Vec::with_capacity(vertices.len() * dirs.len());
    for v in vertices {
        for d in &dirs {
            lines.push(ComplexLine::new(*v, *d)?);
        }
    }

    let mut reports = lines
        .par_iter()
        .map(|line| line_extension_residuals(f, line, params.m_max, n, 0, params.tol))
        .collect::<Result<Vec<_>>>()?;

    // Order-deterministic aggregation.
    reports.sort_by(|a, b| {
        let ka = a.line.as_ref().map(|l| l.sort_key()).unwrap_or_default();
        let kb = b.line.as_ref().map(|l| l.sort_key()).unwrap_or_default();
        ka.partial_cmp(&kb).unwrap_or(std::cmp::Ordering::Equal)
    });

    let verdict = reports
        .iter()
        .map(|r| r.verdict)
        .fold(Verdict::Pass, Verdict::combine);
    let worst = reports
        .iter()
        .max_by(|a, b| a.max_residual.partial_cmp(&b.max_residual).unwrap());
    let (worst_line, worst_residual) = match worst {
        Some(r) => (r.line, r.max_residual),
        None => (None, 0.0),
    };

    Ok(BundleReport {
        vertices: vertices.to_vec(),
        lines_per_vertex: params.lines_per_vertex,
        verdict,
        pass: verdict == Verdict::Pass,
        collinear_vertices: vertices_collinear(vertices),
        worst_line,
        worst_residual,
        n_used: 2 * n,
        reports,
    })
}
