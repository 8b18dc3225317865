//! Finite parts of `∫_0^a f(x) x^{-s} dx` with the singular point at an
//! endpoint, through a keyhole that straddles the positive real axis.
//!
//! The keyhole leaves `a` above the axis, circles the origin
//! counter-clockwise and returns to `a` below it. With a kernel that jumps
//! across the axis by a known factor, the two rays combine into the
//! truncated real integral and the small circle supplies exactly the terms
//! that cancel its divergent part.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::contour::{build_keyhole, integrate_along, ContourPath};
use crate::expr::AnalyticFunction;

use super::{Diagnostics, EvaluationResult, InterpError};

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };

/// `FP ∫_0^a f(x) x^{-m} dx` with kernel `ln(-z)/(2πi)`, the principal log
/// of `-z` being `log z - iπ` for `arg z ∈ (0, 2π)`.
pub fn fpi_halfline_integer(f: &AnalyticFunction, a: f64, m: u32, tol: f64) -> Result<EvaluationResult, InterpError> {
    check(a, m, tol)?;
    let path = keyhole(f, a)?;
    let mf = m as i32;
    let integrand = |z: Complex64| f.value(z) * z.powi(-mf) * (-z).ln() / (2.0 * PI * I);
    finish(integrand, path, tol)
}

/// `FP ∫_0^a f(x) x^{-(m+ν)} dx` for `0 < ν < 1` with the constant kernel
/// `1/(e^{-2πiν} - 1)` and `z^{-(m+ν)}` cut along the positive real axis.
pub fn fpi_halfline_fractional(
    f: &AnalyticFunction,
    a: f64,
    m: u32,
    nu: f64,
    tol: f64,
) -> Result<EvaluationResult, InterpError> {
    check(a, m, tol)?;
    if !(nu > 0.0 && nu < 1.0) {
        return Err(InterpError::InvalidSpec(format!("ν must lie in (0, 1), got {nu}")));
    }
    let path = keyhole(f, a)?;
    let s = m as f64 + nu;
    let kernel = 1.0 / (Complex64::from_polar(1.0, -2.0 * PI * nu) - 1.0);
    // arg z ∈ (0, 2π) on the keyhole
    let integrand = |z: Complex64| kernel * f.value(z) * (-s * ((-z).ln() + PI * I)).exp();
    finish(integrand, path, tol)
}

fn check(a: f64, m: u32, tol: f64) -> Result<(), InterpError> {
    if !(a > 0.0) || !a.is_finite() {
        return Err(InterpError::InvalidSpec(format!("upper limit must be positive and finite, got {a}")));
    }
    if m == 0 {
        return Err(InterpError::InvalidSpec("power must be at least 1".into()));
    }
    if !(tol > 0.0) {
        return Err(crate::contour::ContourError::InvalidTolerance(tol).into());
    }
    Ok(())
}

/// Wedge keyhole kept within half the distance from `[0, a]` to the
/// nearest singularity of `f`.
fn keyhole(f: &AnalyticFunction, a: f64) -> Result<ContourPath, InterpError> {
    let (inner, half_angle) = match f.nearest_singularity_distance(Complex64::new(0.0, 0.0)).known() {
        None => (0.25 * a, PI / 16.0),
        Some(_) => {
            let mut d0 = f64::INFINITY;
            let mut nearest = Complex64::new(0.0, 0.0);
            for s in f.singularities() {
                let p = s.location;
                let foot = Complex64::new(p.re.clamp(0.0, a), 0.0);
                let d = (p - foot).norm();
                if d < d0 {
                    d0 = d;
                    nearest = p;
                }
            }
            if d0 <= 1e-12 * (1.0 + a) {
                return Err(InterpError::SingularityOnInterval(nearest));
            }
            let inner = (0.5 * a).min(0.5 * d0);
            let sin_phi = (d0 / (2.0 * a)).min((PI / 8.0).sin());
            (inner, sin_phi.asin())
        }
    };
    Ok(build_keyhole(a, inner, half_angle)?)
}

fn finish<F>(integrand: F, path: ContourPath, tol: f64) -> Result<EvaluationResult, InterpError>
where
    F: Fn(Complex64) -> Complex64,
{
    let r = integrate_along(integrand, &path, tol)?;
    let inner = path.distance_to(Complex64::new(0.0, 0.0));
    Ok(EvaluationResult {
        value: r.value,
        abs_error_estimate: r.abs_error_estimate,
        diagnostics: Diagnostics {
            rho: inner,
            window: None,
            contributions: vec![r.value],
            tail: None,
            converged: r.converged,
            evaluations: r.evaluations,
            paths: vec![path],
        },
    })
}
