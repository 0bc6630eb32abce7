//! Numerical toolkit for holomorphic extendibility along bundles of complex
//! lines on the unit sphere in ℂ².
//!
//! Given a continuous function on ∂B² and a family of complex lines through
//! prescribed interior vertices, the [`moments`] engine decides, to quadrature
//! tolerance, whether the restriction of the function to each boundary circle
//! extends holomorphically into the corresponding disc. The supporting
//! machinery covers Möbius geometry of the ball ([`geometry`]), a catalog of
//! boundary test functions ([`boundary`]), the invariant Poisson integral
//! ([`poisson`]), the angular/radial double decomposition
//! ([`decomposition`]), and a one-variable engine for polyanalytic functions
//! and meromorphic extension from hyperbolic circles ([`disc`]).

pub mod boundary;
pub mod decomposition;
pub mod disc;
pub mod error;
pub mod geometry;
mod linalg;
pub mod moments;
pub mod poisson;
pub mod poly;
pub mod spectral;

pub use error::{Error, Result};
pub use geometry::{BallMobius, BallPoint, ComplexLine, HyperbolicCircle, LineBoundaryCircle};

/// Ambient scalar for everything in this crate.
pub type Complex = num_complex::Complex<f64>;

/// Tolerance for geometric membership checks (sphere/ball/unit norms).
pub const EPS_GEOM: f64 = 1e-12;
