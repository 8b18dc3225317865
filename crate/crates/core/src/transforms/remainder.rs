//! Remainder of the truncated Stieltjes expansion on the semicircle of
//! radius `a` and its ML bound.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;

use crate::contour::{adaptive, build_semicircle, integrate_along, HalfPlane, DEFAULT_MAX_INTERVALS, DEFAULT_TOL};
use crate::expr::AnalyticFunction;

use super::TransformError;

#[derive(Clone, Copy, Debug, Serialize)]
pub struct RemainderDiagnostics {
    pub n: u32,
    /// `R_n = (-1)^n ω^{2n} ∫_{Γ⁺} f(z) / (z^{2n}(ω² + z²)) dz`.
    pub remainder: Complex64,
    /// `(ω/a)^{2n} M(a)`.
    pub bound: f64,
    /// `M(a) = a ∫_0^π |f(a e^{iθ})| / |ω² + a² e^{2iθ}| dθ`.
    pub m_a: f64,
}

pub fn remainder_diagnostics(
    f: &AnalyticFunction,
    omega: f64,
    a: f64,
    n: u32,
) -> Result<RemainderDiagnostics, TransformError> {
    if !(omega > 0.0) || !(a > 0.0) || !a.is_finite() {
        return Err(TransformError::InvalidParameter(format!("need ω > 0 and a > 0, got ω={omega}, a={a}")));
    }
    if omega >= a {
        return Err(TransformError::InvalidParameter(format!("need ω < a, got ω={omega}, a={a}")));
    }
    if n == 0 {
        return Err(TransformError::InvalidParameter("n must be at least 1".into()));
    }
    let w2 = Complex64::new(omega * omega, 0.0);
    let path = build_semicircle(a, HalfPlane::Upper)?;
    let power = 2 * n as i32;
    let integral = integrate_along(|z| f.value(z) / (z.powi(power) * (w2 + z * z)), &path, DEFAULT_TOL * 1e-3)?;
    let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
    let remainder = integral.value * sign * omega.powi(power);

    let modulus = |_: usize, theta: f64| {
        let z = Complex64::from_polar(a, theta);
        Complex64::new(f.value(z).norm() / (w2 + z * z).norm(), 0.0)
    };
    let m_a = a * adaptive(&modulus, &[(0.0, PI)], DEFAULT_TOL, DEFAULT_MAX_INTERVALS, 8)?.value.re;
    let bound = (omega / a).powi(power) * m_a;
    Ok(RemainderDiagnostics { n, remainder, bound, m_a })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(s: &str) -> AnalyticFunction {
        AnalyticFunction::parse(s).unwrap()
    }

    #[test]
    fn bound_holds_and_shrinks() {
        for expr in ["1", "exp(-z^2)"] {
            let mut previous = f64::INFINITY;
            for n in 1..=10 {
                let d = remainder_diagnostics(&f(expr), 0.5, 2.0, n).unwrap();
                assert!(d.remainder.norm() <= d.bound, "{expr} n={n}: {} > {}", d.remainder.norm(), d.bound);
                if n > 2 {
                    assert!(d.remainder.norm() < previous);
                }
                previous = d.remainder.norm();
            }
        }
    }

    #[test]
    fn constant_bound_ratio() {
        let a = remainder_diagnostics(&f("1"), 0.5, 2.0, 3).unwrap();
        let b = remainder_diagnostics(&f("1"), 0.5, 2.0, 4).unwrap();
        assert!((b.bound / a.bound - 1.0 / 16.0).abs() < 1e-14);
    }

    #[test]
    fn omega_beyond_radius_is_rejected() {
        assert!(remainder_diagnostics(&f("1"), 3.0, 2.0, 1).is_err());
    }
}
