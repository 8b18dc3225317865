//! Oriented paths in the complex plane and quadrature along them.
//!
//! A [`ContourPath`] is a continuous chain of straight segments and circular
//! arcs. The builders here produce the paths used throughout the crate: the
//! real interval with a semicircular indentation around a singular point,
//! semicircles centred at the origin, tilted rays for oscillatory tails and a
//! wedge-shaped keyhole around the positive real axis.

mod quadrature;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use quadrature::{
    integrate_to_infinity, tail_is_integrable, taylor_coefficient, QuadratureResult,
    DEFAULT_MAX_INTERVALS,
};

pub(crate) use quadrature::adaptive;

/// Default absolute tolerance for contour quadrature.
pub const DEFAULT_TOL: f64 = 1e-10;

const CONTINUITY_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ContourError {
    #[error("line segment has coincident endpoints at {0}")]
    DegenerateLine(Complex64),
    #[error("arc must have positive radius and sweep at most 2π (radius {radius}, sweep {sweep})")]
    InvalidArc { radius: f64, sweep: f64 },
    #[error("segment {index} does not start where segment {} ends", .index - 1)]
    Discontinuous { index: usize },
    #[error("a path needs at least one segment")]
    Empty,
    #[error("singular point {x0} must lie strictly inside ({a}, {b})")]
    PointOutsideInterval { a: f64, b: f64, x0: f64 },
    #[error("indentation radius {rho} too large: must be below {limit}")]
    RhoTooLarge { rho: f64, limit: f64 },
    #[error("radius must be positive and finite, got {0}")]
    InvalidRadius(f64),
    #[error("length must be positive and finite, got {0}")]
    InvalidLength(f64),
    #[error("ray angle must lie in (0, π/2), got {0}")]
    InvalidAngle(f64),
    #[error("tolerance must be positive, got {0}")]
    InvalidTolerance(f64),
    #[error("integrand is not finite on piece {piece} at parameter {parameter}")]
    NonFiniteIntegrand { piece: usize, parameter: f64 },
    #[error("quadrature did not converge")]
    NotConverged,
}

/// Which side of the real axis an indentation passes.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Side {
    Above,
    Below,
}

/// Half-plane selector for semicircles and rays.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum HalfPlane {
    Upper,
    Lower,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PathSegment {
    Line {
        start: Complex64,
        end: Complex64,
    },
    /// `center + radius·e^{iθ}` for θ running from `theta_start` to `theta_end`.
    Arc {
        center: Complex64,
        radius: f64,
        theta_start: f64,
        theta_end: f64,
    },
}

impl PathSegment {
    pub fn line(start: Complex64, end: Complex64) -> Result<Self, ContourError> {
        if start == end || !(start.re.is_finite() && start.im.is_finite() && end.re.is_finite() && end.im.is_finite()) {
            return Err(ContourError::DegenerateLine(start));
        }
        Ok(PathSegment::Line { start, end })
    }

    pub fn arc(center: Complex64, radius: f64, theta_start: f64, theta_end: f64) -> Result<Self, ContourError> {
        let sweep = theta_end - theta_start;
        if !(radius > 0.0) || !radius.is_finite() || !sweep.is_finite() || sweep.abs() > 2.0 * PI + 1e-12 {
            return Err(ContourError::InvalidArc { radius, sweep });
        }
        Ok(PathSegment::Arc { center, radius, theta_start, theta_end })
    }

    /// Point at parameter `t ∈ [0, 1]`.
    pub fn point(&self, t: f64) -> Complex64 {
        match *self {
            PathSegment::Line { start, end } => start + (end - start) * t,
            PathSegment::Arc { center, radius, theta_start, theta_end } => {
                let theta = theta_start + (theta_end - theta_start) * t;
                center + Complex64::from_polar(radius, theta)
            }
        }
    }

    /// `dz/dt` at parameter `t`.
    pub fn tangent(&self, t: f64) -> Complex64 {
        match *self {
            PathSegment::Line { start, end } => end - start,
            PathSegment::Arc { radius, theta_start, theta_end, .. } => {
                let sweep = theta_end - theta_start;
                let theta = theta_start + sweep * t;
                Complex64::new(0.0, 1.0) * Complex64::from_polar(radius, theta) * sweep
            }
        }
    }

    pub fn start(&self) -> Complex64 {
        self.point(0.0)
    }

    pub fn end(&self) -> Complex64 {
        self.point(1.0)
    }

    pub fn reversed(&self) -> Self {
        match *self {
            PathSegment::Line { start, end } => PathSegment::Line { start: end, end: start },
            PathSegment::Arc { center, radius, theta_start, theta_end } => PathSegment::Arc {
                center,
                radius,
                theta_start: theta_end,
                theta_end: theta_start,
            },
        }
    }

    pub fn length(&self) -> f64 {
        match *self {
            PathSegment::Line { start, end } => (end - start).norm(),
            PathSegment::Arc { radius, theta_start, theta_end, .. } => radius * (theta_end - theta_start).abs(),
        }
    }
}

/// A continuous, oriented chain of segments.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ContourPath {
    segments: Vec<PathSegment>,
}

impl ContourPath {
    pub fn new(segments: Vec<PathSegment>) -> Result<Self, ContourError> {
        if segments.is_empty() {
            return Err(ContourError::Empty);
        }
        for index in 1..segments.len() {
            let prev = segments[index - 1].end();
            let next = segments[index].start();
            if (prev - next).norm() > CONTINUITY_TOL * (1.0 + prev.norm()) {
                return Err(ContourError::Discontinuous { index });
            }
        }
        Ok(Self { segments })
    }

    pub fn segments(&self) -> &[PathSegment] {
        &self.segments
    }

    pub fn start(&self) -> Complex64 {
        self.segments[0].start()
    }

    pub fn end(&self) -> Complex64 {
        self.segments[self.segments.len() - 1].end()
    }

    /// The same curve traversed backwards.
    pub fn reversed(&self) -> Self {
        Self {
            segments: self.segments.iter().rev().map(PathSegment::reversed).collect(),
        }
    }

    /// Concatenation; `other` must start where `self` ends.
    pub fn join(&self, other: &ContourPath) -> Result<Self, ContourError> {
        let mut segments = self.segments.clone();
        segments.extend_from_slice(&other.segments);
        Self::new(segments)
    }

    pub fn length(&self) -> f64 {
        self.segments.iter().map(PathSegment::length).sum()
    }

    /// Smallest distance from `point` to the path, estimated on a fine sample.
    pub fn distance_to(&self, point: Complex64) -> f64 {
        let mut best = f64::INFINITY;
        for seg in &self.segments {
            if let PathSegment::Line { start, end } = *seg {
                let d = end - start;
                let t = (((point - start) * d.conj()).re / d.norm_sqr()).clamp(0.0, 1.0);
                best = best.min((start + d * t - point).norm());
            } else {
                for k in 0..=256 {
                    best = best.min((seg.point(k as f64 / 256.0) - point).norm());
                }
            }
        }
        best
    }
}

/// Real segment `[a, b]` with a semicircular indentation of radius `rho`
/// around `x0`; `Side::Above` bumps into the upper half-plane.
pub fn build_indented_path(a: f64, b: f64, x0: f64, rho: f64, side: Side) -> Result<ContourPath, ContourError> {
    if !(a < x0 && x0 < b) || !a.is_finite() || !b.is_finite() {
        return Err(ContourError::PointOutsideInterval { a, b, x0 });
    }
    let limit = (x0 - a).min(b - x0);
    if !(rho > 0.0) || !rho.is_finite() {
        return Err(ContourError::InvalidRadius(rho));
    }
    if rho >= limit {
        return Err(ContourError::RhoTooLarge { rho, limit });
    }
    let c = Complex64::new(x0, 0.0);
    let arc = match side {
        Side::Above => PathSegment::arc(c, rho, PI, 0.0)?,
        Side::Below => PathSegment::arc(c, rho, -PI, 0.0)?,
    };
    ContourPath::new(vec![
        PathSegment::line(Complex64::new(a, 0.0), Complex64::new(x0 - rho, 0.0))?,
        arc,
        PathSegment::line(Complex64::new(x0 + rho, 0.0), Complex64::new(b, 0.0))?,
    ])
}

/// Semicircle about the origin from `-radius` to `+radius` through `half`.
pub fn build_semicircle(radius: f64, half: HalfPlane) -> Result<ContourPath, ContourError> {
    if !(radius > 0.0) || !radius.is_finite() {
        return Err(ContourError::InvalidRadius(radius));
    }
    let start = match half {
        HalfPlane::Upper => PI,
        HalfPlane::Lower => -PI,
    };
    ContourPath::new(vec![PathSegment::arc(Complex64::new(0.0, 0.0), radius, start, 0.0)?])
}

/// Full counter-clockwise circle, split into two arcs.
pub fn build_circle(center: Complex64, radius: f64) -> Result<ContourPath, ContourError> {
    ContourPath::new(vec![
        PathSegment::arc(center, radius, 0.0, PI)?,
        PathSegment::arc(center, radius, PI, 2.0 * PI)?,
    ])
}

/// Straight ray of the given length leaving the real point `x_from` into
/// `direction` at `angle` to the real axis. Rays from negative points lean
/// towards `-∞`, all others towards `+∞`.
pub fn tilted_ray_path(x_from: f64, direction: HalfPlane, length: f64, angle: f64) -> Result<ContourPath, ContourError> {
    if !(angle > 0.0 && angle < PI / 2.0) {
        return Err(ContourError::InvalidAngle(angle));
    }
    if !(length > 0.0) || !length.is_finite() {
        return Err(ContourError::InvalidLength(length));
    }
    let mut theta = if x_from < 0.0 { PI - angle } else { angle };
    if direction == HalfPlane::Lower {
        theta = -theta;
    }
    let start = Complex64::new(x_from, 0.0);
    ContourPath::new(vec![PathSegment::line(start, start + Complex64::from_polar(length, theta))?])
}

/// Counter-clockwise keyhole around `[0, outer]` that straddles the positive
/// real axis: from `outer` along the ray at angle `+half_angle` in to radius
/// `inner`, round the origin to angle `2π - half_angle`, and back out to
/// `outer` below the axis. Only the endpoints touch the axis.
pub fn build_keyhole(outer: f64, inner: f64, half_angle: f64) -> Result<ContourPath, ContourError> {
    if !(outer > 0.0) || !outer.is_finite() {
        return Err(ContourError::InvalidRadius(outer));
    }
    if !(inner > 0.0 && inner < outer) {
        return Err(ContourError::InvalidRadius(inner));
    }
    if !(half_angle > 0.0 && half_angle < PI / 2.0) {
        return Err(ContourError::InvalidAngle(half_angle));
    }
    let tip = Complex64::new(outer, 0.0);
    ContourPath::new(vec![
        PathSegment::line(tip, Complex64::from_polar(inner, half_angle))?,
        PathSegment::arc(Complex64::new(0.0, 0.0), inner, half_angle, 2.0 * PI - half_angle)?,
        PathSegment::line(Complex64::from_polar(inner, -half_angle), tip)?,
    ])
}

/// Integrates `integrand(z) dz` along `path`, refining globally until the
/// error estimate is below `tol`.
pub fn integrate_along<F>(integrand: F, path: &ContourPath, tol: f64) -> Result<QuadratureResult, ContourError>
where
    F: Fn(Complex64) -> Complex64,
{
    integrate_along_with(integrand, path, tol, DEFAULT_MAX_INTERVALS)
}

pub fn integrate_along_with<F>(
    integrand: F,
    path: &ContourPath,
    tol: f64,
    max_intervals: usize,
) -> Result<QuadratureResult, ContourError>
where
    F: Fn(Complex64) -> Complex64,
{
    let segments = path.segments();
    let mapped = |piece: usize, t: f64| {
        let seg = &segments[piece];
        integrand(seg.point(t)) * seg.tangent(t)
    };
    let ranges = vec![(0.0, 1.0); segments.len()];
    adaptive(&mapped, &ranges, tol, max_intervals, 2)
}
