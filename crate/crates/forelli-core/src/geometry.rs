//! Möbius geometry of the unit ball in ℂ² and of the unit disc.
//!
//! Everything here is exact closed-form arithmetic: disc automorphisms,
//! axis automorphisms of the ball and their unitary conjugates, boundary
//! circles of complex lines, and the Euclidean data of hyperbolic circles.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::{Complex, EPS_GEOM};

fn check_finite(z: Complex, what: &'static str) -> Result<()> {
    if z.re.is_finite() && z.im.is_finite() {
        Ok(())
    } else {
        Err(Error::NonFinite(what))
    }
}

/// A point of the closed unit ball in ℂ².
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallPoint {
    pub z1: Complex,
    pub z2: Complex,
}

impl BallPoint {
    pub fn new(z1: Complex, z2: Complex) -> Result<Self> {
        check_finite(z1, "BallPoint.z1")?;
        check_finite(z2, "BallPoint.z2")?;
        let p = Self { z1, z2 };
        if p.norm_sqr() > 1.0 + EPS_GEOM {
            return Err(Error::Domain(format!(
                "point ({z1}, {z2}) lies outside the closed ball (|z|^2 = {})",
                p.norm_sqr()
            )));
        }
        Ok(p)
    }

    pub fn origin() -> Self {
        Self { z1: Complex::new(0.0, 0.0), z2: Complex::new(0.0, 0.0) }
    }

    pub fn norm_sqr(&self) -> f64 {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    pub fn is_interior(&self) -> bool {
        self.norm_sqr() < 1.0 - EPS_GEOM
    }

    pub fn is_on_sphere(&self) -> bool {
        (self.norm_sqr() - 1.0).abs() <= EPS_GEOM
    }

    /// Hermitian inner product ⟨self, other⟩ = z1 w̄1 + z2 w̄2.
    pub fn inner(&self, other: &BallPoint) -> Complex {
        self.z1 * other.z1.conj() + self.z2 * other.z2.conj()
    }
}

/// A complex line λ ↦ base + λ·dir through a point of the ball.
///
/// The direction is canonical: unit Hermitian norm, with its
/// largest-modulus coordinate rotated to be real and positive, so equal
/// lines compare equal and are usable as report keys.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ComplexLine {
    pub base: BallPoint,
    pub dir: (Complex, Complex),
}

impl ComplexLine {
    pub fn new(base: BallPoint, dir: (Complex, Complex)) -> Result<Self> {
        check_finite(dir.0, "ComplexLine.dir.0")?;
        check_finite(dir.1, "ComplexLine.dir.1")?;
        let norm = (dir.0.norm_sqr() + dir.1.norm_sqr()).sqrt();
        if norm < 1e-14 {
            return Err(Error::Degenerate("zero direction vector".into()));
        }
        // A direction that is already canonical passes through untouched, so
        // canonicalization is idempotent bit-for-bit.
        if (norm - 1.0).abs() <= 1e-14 && is_canonical(dir) {
            return Ok(Self { base, dir });
        }
        let d = (dir.0 / norm, dir.1 / norm);
        Ok(Self { base, dir: canonical_dir(d) })
    }

    pub fn point_at(&self, lambda: Complex) -> (Complex, Complex) {
        (self.base.z1 + lambda * self.dir.0, self.base.z2 + lambda * self.dir.1)
    }

    /// Deterministic total order used to sort reports.
    pub fn sort_key(&self) -> [f64; 8] {
        [
            self.base.z1.re, self.base.z1.im, self.base.z2.re, self.base.z2.im,
            self.dir.0.re, self.dir.0.im, self.dir.1.re, self.dir.1.im,
        ]
    }
}

fn is_canonical(d: (Complex, Complex)) -> bool {
    let pivot = if d.0.norm_sqr() >= d.1.norm_sqr() { d.0 } else { d.1 };
    pivot.im == 0.0 && pivot.re > 0.0
}

/// Rotate a unit direction so its largest-modulus coordinate is exactly real
/// positive.
fn canonical_dir(d: (Complex, Complex)) -> (Complex, Complex) {
    let first_is_pivot = d.0.norm_sqr() >= d.1.norm_sqr();
    let pivot = if first_is_pivot { d.0 } else { d.1 };
    if pivot.im == 0.0 && pivot.re > 0.0 {
        return d;
    }
    let modulus = pivot.norm();
    let phase = pivot.conj() / modulus;
    let pinned = Complex::new(modulus, 0.0);
    if first_is_pivot {
        (pinned, d.1 * phase)
    } else {
        (d.0 * phase, pinned)
    }
}

/// Boundary circle of a complex line in the line's λ-parameter plane:
/// { λ : |λ − lambda0| = rho } maps onto L ∩ ∂B² under λ ↦ base + λ·dir.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LineBoundaryCircle {
    pub lambda0: Complex,
    pub rho: f64,
}

/// Solve |base + λ dir| = 1: lambda0 = −⟨p,d⟩, rho = √(1 − |p|² + |⟨p,d⟩|²).
pub fn line_boundary_circle(line: &ComplexLine) -> Result<LineBoundaryCircle> {
    if !line.base.is_interior() {
        return Err(Error::Domain(
            "line base must be strictly inside the ball".into(),
        ));
    }
    let d = BallPoint { z1: line.dir.0, z2: line.dir.1 };
    let ip = line.base.inner(&d);
    let rho2 = 1.0 - line.base.norm_sqr() + ip.norm_sqr();
    Ok(LineBoundaryCircle { lambda0: -ip, rho: rho2.sqrt() })
}

/// Disc automorphism ω_c(z) = (z + c) / (1 + c̄ z).
pub fn disc_automorphism_apply(c: Complex, z: Complex) -> Result<Complex> {
    check_finite(c, "disc_automorphism c")?;
    check_finite(z, "disc_automorphism z")?;
    if c.norm() >= 1.0 {
        return Err(Error::Domain("automorphism parameter must satisfy |c| < 1".into()));
    }
    let den = Complex::new(1.0, 0.0) + c.conj() * z;
    if den.norm() < 1e-14 {
        return Err(Error::Degenerate("degenerate denominator 1 + conj(c) z".into()));
    }
    Ok((z + c) / den)
}

/// Axis automorphism of the ball sending 0 to (c1, 0):
/// ω(z) = ((z1 + c1)/(1 + c̄1 z1), √(1 − |c1|²) z2 / (1 + c̄1 z1)).
pub fn axis_automorphism_apply(c1: Complex, z: &BallPoint) -> Result<BallPoint> {
    if c1.norm() >= 1.0 {
        return Err(Error::Domain("axis parameter must satisfy |c1| < 1".into()));
    }
    let den = Complex::new(1.0, 0.0) + c1.conj() * z.z1;
    if den.norm() < 1e-14 {
        return Err(Error::Degenerate("degenerate denominator 1 + conj(c1) z1".into()));
    }
    let w1 = (z.z1 + c1) / den;
    let w2 = (1.0 - c1.norm_sqr()).sqrt() * z.z2 / den;
    Ok(BallPoint { z1: w1, z2: w2 })
}

/// 2×2 unitary matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Unitary {
    pub rows: [[Complex; 2]; 2],
}

impl Unitary {
    pub fn identity() -> Self {
        let one = Complex::new(1.0, 0.0);
        let zero = Complex::new(0.0, 0.0);
        Self { rows: [[one, zero], [zero, one]] }
    }

    /// Unitary sending v/|v| to the first basis vector, so U v = (|v|, 0).
    pub fn align_to_first_axis(v: (Complex, Complex)) -> Result<Self> {
        let norm = (v.0.norm_sqr() + v.1.norm_sqr()).sqrt();
        if norm < 1e-14 {
            return Err(Error::Degenerate("cannot align the zero vector".into()));
        }
        let u = (v.0 / norm, v.1 / norm);
        Ok(Self { rows: [[u.0.conj(), u.1.conj()], [-u.1, u.0]] })
    }

    pub fn apply(&self, z: &BallPoint) -> BallPoint {
        BallPoint {
            z1: self.rows[0][0] * z.z1 + self.rows[0][1] * z.z2,
            z2: self.rows[1][0] * z.z1 + self.rows[1][1] * z.z2,
        }
    }

    pub fn adjoint(&self) -> Self {
        Self {
            rows: [
                [self.rows[0][0].conj(), self.rows[1][0].conj()],
                [self.rows[0][1].conj(), self.rows[1][1].conj()],
            ],
        }
    }

    pub fn compose(&self, inner: &Unitary) -> Self {
        let mut rows = [[Complex::new(0.0, 0.0); 2]; 2];
        for (i, row) in rows.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                *entry = self.rows[i][0] * inner.rows[0][j] + self.rows[i][1] * inner.rows[1][j];
            }
        }
        Self { rows }
    }

    /// Max deviation of U*U from the identity.
    pub fn unitarity_defect(&self) -> f64 {
        let p = self.adjoint().compose(self);
        let id = Unitary::identity();
        let mut worst = 0.0f64;
        for i in 0..2 {
            for j in 0..2 {
                worst = worst.max((p.rows[i][j] - id.rows[i][j]).norm());
            }
        }
        worst
    }
}

/// Möbius automorphism of the ball stored as a composition record
/// z ↦ post · ω_c1(pre · z), with ω_c1 the axis automorphism.
///
/// The record form is closed under inversion, so the inverse is exact.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct BallMobius {
    pub pre: Unitary,
    pub c1: Complex,
    pub post: Unitary,
}

impl BallMobius {
    pub fn identity() -> Self {
        Self { pre: Unitary::identity(), c1: Complex::new(0.0, 0.0), post: Unitary::identity() }
    }

    pub fn apply(&self, z: &BallPoint) -> Result<BallPoint> {
        let w = axis_automorphism_apply(self.c1, &self.pre.apply(z))?;
        Ok(self.post.apply(&w))
    }

    pub fn inverse(&self) -> Self {
        Self { pre: self.post.adjoint(), c1: -self.c1, post: self.pre.adjoint() }
    }

    /// Absorb a further unitary applied after this map.
    pub fn then_unitary(&self, u: &Unitary) -> Self {
        Self { pre: self.pre, c1: self.c1, post: u.compose(&self.post) }
    }
}

/// Automorphism φ of the ball with φ(0) = a, built by conjugating the axis
/// formula with the unitary taking a to the z1-axis.
pub fn ball_automorphism(a: &BallPoint) -> Result<BallMobius> {
    if !a.is_interior() {
        return Err(Error::Domain("automorphism vertex must be interior".into()));
    }
    let norm = a.norm_sqr().sqrt();
    if norm < 1e-15 {
        return Ok(BallMobius::identity());
    }
    if a.z2.norm() == 0.0 && a.z1.im == 0.0 && a.z1.re > 0.0 {
        // Already on the positive z1-axis.
        return Ok(BallMobius { pre: Unitary::identity(), c1: a.z1, post: Unitary::identity() });
    }
    let v = Unitary::align_to_first_axis((a.z1, a.z2))?;
    Ok(BallMobius { pre: v, c1: Complex::new(norm, 0.0), post: v.adjoint() })
}

/// Automorphism ψ sending both a and b into the complex line {z2 = 0}.
pub fn align_to_axis(a: &BallPoint, b: &BallPoint) -> Result<BallMobius> {
    if !a.is_interior() || !b.is_interior() {
        return Err(Error::Domain("both points must be interior".into()));
    }
    if (a.z1 - b.z1).norm() < 1e-14 && (a.z2 - b.z2).norm() < 1e-14 {
        return Err(Error::Degenerate("align_to_axis requires a != b".into()));
    }
    if a.z2.norm() <= EPS_GEOM && b.z2.norm() <= EPS_GEOM {
        return Ok(BallMobius::identity());
    }
    let phi_inv = ball_automorphism(a)?.inverse();
    let b_moved = phi_inv.apply(b)?;
    let u = Unitary::align_to_first_axis((b_moved.z1, b_moved.z2))?;
    Ok(phi_inv.then_unitary(&u))
}

/// A hyperbolic circle in the unit disc: the image of {|z| = r} under ω_c.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HyperbolicCircle {
    /// Hyperbolic center, |c| < 1.
    pub c: Complex,
    /// Hyperbolic radius, 0 < r < 1.
    pub r: f64,
    /// Euclidean center e = c (1 − r²) / (1 − |c|² r²).
    pub e: Complex,
    /// Euclidean radius t = r (1 − |c|²) / (1 − |c|² r²).
    pub t: f64,
}

impl HyperbolicCircle {
    pub fn new(c: Complex, r: f64) -> Result<Self> {
        check_finite(c, "HyperbolicCircle.c")?;
        if c.norm() >= 1.0 {
            return Err(Error::Domain("hyperbolic center must satisfy |c| < 1".into()));
        }
        if !(0.0 < r && r < 1.0) {
            return Err(Error::Domain("hyperbolic radius must lie in (0, 1)".into()));
        }
        let (e, t) = hyperbolic_to_euclidean(c, r)?;
        Ok(Self { c, r, e, t })
    }
}

/// Euclidean center and radius of the hyperbolic circle H(c, r).
pub fn hyperbolic_to_euclidean(c: Complex, r: f64) -> Result<(Complex, f64)> {
    check_finite(c, "hyperbolic center")?;
    if c.norm() >= 1.0 || !(0.0 < r && r < 1.0) {
        return Err(Error::Domain("need |c| < 1 and r in (0, 1)".into()));
    }
    let den = 1.0 - c.norm_sqr() * r * r;
    Ok((c * ((1.0 - r * r) / den), r * (1.0 - c.norm_sqr()) / den))
}
