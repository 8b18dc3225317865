//! Brute-force real-line oracles for the transforms.

use num_complex::Complex64;

use crate::contour::{adaptive, integrate_to_infinity, tail_is_integrable, QuadratureResult, DEFAULT_MAX_INTERVALS};
use crate::expr::AnalyticFunction;

use super::TransformError;

fn check_axis(f: &AnalyticFunction) -> Result<(), TransformError> {
    for s in f.singularities() {
        if s.location.im.abs() <= 1e-12 * (1.0 + s.location.norm()) {
            return Err(TransformError::SingularityOnAxis(s.location));
        }
    }
    Ok(())
}

/// `∫_0^∞ g(t) dt`: adaptive on `[0, split]`, compactified beyond.
fn half_line<G>(g: G, split: f64, tol: f64) -> Result<QuadratureResult, TransformError>
where
    G: Fn(f64) -> Complex64,
{
    if !tail_is_integrable(&g, split) {
        return Err(TransformError::NonConvergentTail);
    }
    let body = adaptive(&|_, t| g(t), &[(0.0, split)], 0.5 * tol, DEFAULT_MAX_INTERVALS, 8)?;
    let tail = integrate_to_infinity(&g, split, 0.5 * tol)?;
    if !tail.converged {
        return Err(TransformError::NonConvergentTail);
    }
    Ok(body.combine(tail))
}

/// `∫_ℝ f(x)/(ω² + x²) dx` by real-line quadrature.
pub fn stieltjes_direct(f: &AnalyticFunction, omega: f64, tol: f64) -> Result<QuadratureResult, TransformError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(TransformError::InvalidParameter(format!("ω must be positive, got {omega}")));
    }
    check_axis(f)?;
    let w2 = omega * omega;
    let g = |x: f64| {
        let pos = f.value(Complex64::new(x, 0.0));
        let neg = f.value(Complex64::new(-x, 0.0));
        (pos + neg) / (w2 + x * x)
    };
    half_line(g, 4.0 + omega, tol)
}

/// `PV∫_ℝ f(x)/(ω - x) dx`, folded about `ω` into
/// `-∫_0^∞ (f(ω + t) - f(ω - t))/t dt`.
pub fn hilbert_pv(f: &AnalyticFunction, omega: f64, tol: f64) -> Result<QuadratureResult, TransformError> {
    if !omega.is_finite() {
        return Err(TransformError::InvalidParameter(format!("ω must be finite, got {omega}")));
    }
    check_axis(f)?;
    let g = |t: f64| {
        let up = f.value(Complex64::new(omega + t, 0.0));
        let down = f.value(Complex64::new(omega - t, 0.0));
        -(up - down) / t
    };
    half_line(g, 4.0 + omega.abs(), tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn f(s: &str) -> AnalyticFunction {
        AnalyticFunction::parse(s).unwrap()
    }

    #[test]
    fn stieltjes_examples() {
        let r = stieltjes_direct(&f("1"), 2.0, 1e-12).unwrap();
        assert!((r.value.re - PI / 2.0).abs() < 1e-11);
        let r = stieltjes_direct(&f("exp(-z^2)"), 1.0, 1e-12).unwrap();
        assert!((r.value.re - 1.343_293_421_646_735_2).abs() < 1e-11, "{}", r.value);
        let r = stieltjes_direct(&f("1/(1+z^2)"), 0.5, 1e-12).unwrap();
        assert!((r.value.re - 4.0 * PI / 3.0).abs() < 1e-11, "{}", r.value);
    }

    #[test]
    fn hilbert_examples() {
        let r = hilbert_pv(&f("1/(1+z^2)"), 0.5, 1e-12).unwrap();
        assert!((r.value.re - 0.4 * PI).abs() < 1e-11, "{}", r.value);
        assert!(hilbert_pv(&f("exp(-z^2)"), 0.0, 1e-12).unwrap().value.norm() < 1e-12);
        assert!(hilbert_pv(&f("1"), 0.3, 1e-12).unwrap().value.norm() < 1e-12);
    }

    #[test]
    fn rejects_bad_input() {
        assert!(matches!(stieltjes_direct(&f("z^2"), 1.0, 1e-10), Err(TransformError::NonConvergentTail)));
        assert!(matches!(stieltjes_direct(&f("1/z"), 1.0, 1e-10), Err(TransformError::SingularityOnAxis(_))));
        assert!(stieltjes_direct(&f("1"), 0.0, 1e-10).is_err());
    }
}
