//! Symmetric ε-deletion oracle for the finite part on a finite interval.
//!
//! For `order = n + 1` the deleted integral behaves like
//! `H_n(ε) + FP + a_1 ε + a_3 ε^3 + …`: after subtracting the divergent
//! terms only odd powers of ε remain, so the limit is taken by fitting that
//! basis through the sampled values.

use num_complex::Complex64;

use crate::contour::{adaptive, DEFAULT_MAX_INTERVALS};

use super::{DivergentIntegralSpec, InterpError};

const HALVINGS: usize = 7;
const QUAD_TOL: f64 = 1e-14;
const MAX_SPREAD: f64 = 1e-5;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct OracleResult {
    pub value: Complex64,
    pub abs_error_estimate: f64,
}

/// `ε_j = ε_0 2^{-j}` with `ε_0` half the smallest of the distances from
/// `x0` to either endpoint and to the nearest singularity of `f`.
pub fn default_epsilon_sequence(spec: &DivergentIntegralSpec) -> Result<Vec<f64>, InterpError> {
    if !spec.is_finite() {
        return Err(InterpError::InvalidSpec("the ε oracle needs finite limits".into()));
    }
    let d = spec
        .f
        .nearest_singularity_distance(Complex64::new(spec.x0, 0.0))
        .known()
        .unwrap_or(1.0);
    let eps0 = 0.5 * (spec.x0 - spec.a).min(spec.b - spec.x0).min(d);
    Ok((0..HALVINGS).map(|j| eps0 * 0.5f64.powi(j as i32)).collect())
}

/// Finite part of `∫_a^b f(x)(x - x0)^{-order} dx` from the deleted
/// integrals at the given decreasing `eps` values.
pub fn fpi_epsilon_oracle(spec: &DivergentIntegralSpec, eps: &[f64]) -> Result<OracleResult, InterpError> {
    if !spec.is_finite() {
        return Err(InterpError::InvalidSpec("the ε oracle needs finite limits".into()));
    }
    if eps.len() < 3 {
        return Err(InterpError::InvalidSpec("need at least three ε values".into()));
    }
    let half = (spec.x0 - spec.a).min(spec.b - spec.x0);
    if !eps.windows(2).all(|w| w[1] < w[0]) || !(eps[eps.len() - 1] > 0.0) || !(eps[0] < half) {
        return Err(InterpError::InvalidSpec(format!("ε values must decrease within (0, {half})")));
    }
    spec.check_real_axis()?;

    let n = spec.order - 1;
    let x0c = Complex64::new(spec.x0, 0.0);
    let coeffs = (0..n)
        .map(|k| spec.f.taylor_coefficient(x0c, k).map(|d| d.value))
        .collect::<Result<Vec<_>, _>>()?;

    let samples = eps
        .iter()
        .map(|&e| deleted_integral(spec, e, half).map(|v| v - divergent_part(&coeffs, n, e)))
        .collect::<Result<Vec<_>, _>>()?;

    let scale = eps[0];
    let u: Vec<f64> = eps.iter().map(|e| e / scale).collect();
    let full = extrapolate(&u, &samples);
    let coarse_dropped = extrapolate(&u[1..], &samples[1..]);
    let spread = (full - coarse_dropped).norm();
    if !spread.is_finite() || spread > MAX_SPREAD * full.norm().max(1.0) {
        return Err(InterpError::ExtrapolationFailed { spread });
    }
    Ok(OracleResult { value: full, abs_error_estimate: spread })
}

/// `H_n(ε) = Σ_{k<n} c_k (1 - (-1)^{n-k}) / ((n - k) ε^{n-k})`.
fn divergent_part(coeffs: &[Complex64], n: u32, eps: f64) -> Complex64 {
    coeffs
        .iter()
        .enumerate()
        .filter(|(k, _)| (n - *k as u32) % 2 == 1)
        .map(|(k, c)| {
            let p = (n - k as u32) as i32;
            c * 2.0 / (p as f64 * eps.powi(p))
        })
        .sum()
}

/// `∫_a^{x0-ε} + ∫_{x0+ε}^b`, with the part symmetric about `x0` folded so
/// that the odd half of the integrand cancels before summation.
fn deleted_integral(spec: &DivergentIntegralSpec, eps: f64, half: f64) -> Result<Complex64, InterpError> {
    let x0 = spec.x0;
    let g = |x: f64| spec.integrand(Complex64::new(x, 0.0));
    let mut ranges = vec![(eps, half)];
    if spec.b - x0 > half {
        ranges.push((x0 + half, spec.b));
    }
    if x0 - spec.a > half {
        ranges.push((spec.a, x0 - half));
    }
    let h = |piece: usize, t: f64| if piece == 0 { g(x0 + t) + g(x0 - t) } else { g(t) };
    let r = adaptive(&h, &ranges, QUAD_TOL, DEFAULT_MAX_INTERVALS, 8)?;
    Ok(r.value)
}

/// Value at `u = 0` of the interpolant in the basis `1, u, u^3, u^5, …`.
fn extrapolate(u: &[f64], v: &[Complex64]) -> Complex64 {
    let m = u.len();
    let power = |col: usize| if col == 0 { 0 } else { 2 * col as i32 - 1 };
    let mut a: Vec<Vec<f64>> = u.iter().map(|&x| (0..m).map(|c| x.powi(power(c))).collect()).collect();
    let mut rhs = v.to_vec();
    // Gaussian elimination with partial pivoting
    for col in 0..m {
        let pivot = (col..m)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("non-empty");
        a.swap(col, pivot);
        rhs.swap(col, pivot);
        for row in col + 1..m {
            let factor = a[row][col] / a[col][col];
            for k in col..m {
                a[row][k] -= factor * a[col][k];
            }
            let r = rhs[col] * factor;
            rhs[row] -= r;
        }
    }
    let mut x = vec![Complex64::new(0.0, 0.0); m];
    for row in (0..m).rev() {
        let mut s = rhs[row];
        for k in row + 1..m {
            s -= x[k] * a[row][k];
        }
        x[row] = s / a[row][row];
    }
    x[0]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::AnalyticFunction;

    fn spec(f: &str, x0: f64, order: u32, a: f64, b: f64) -> DivergentIntegralSpec {
        DivergentIntegralSpec::new(AnalyticFunction::parse(f).unwrap(), x0, order, a, b).unwrap()
    }

    fn oracle(s: &DivergentIntegralSpec) -> OracleResult {
        fpi_epsilon_oracle(s, &default_epsilon_sequence(s).unwrap()).unwrap()
    }

    #[test]
    fn principal_value_of_inverse() {
        assert!(oracle(&spec("1", 0.0, 1, -1.0, 1.0)).value.norm() < 1e-12);
    }

    #[test]
    fn inverse_square() {
        let r = oracle(&spec("1", 0.0, 2, -1.0, 1.0));
        assert!((r.value - Complex64::new(-2.0, 0.0)).norm() < 1e-10, "{:?}", r);
    }

    #[test]
    fn asymmetric_interval() {
        // FP ∫_{-1}^{3} dx/x^2 = -1/3 - 1
        let r = oracle(&spec("1", 0.0, 2, -1.0, 3.0));
        assert!((r.value - Complex64::new(-4.0 / 3.0, 0.0)).norm() < 1e-10, "{:?}", r);
        // PV ∫_{-1}^{3} dx/x = ln 3
        let r = oracle(&spec("1", 0.0, 1, -1.0, 3.0));
        assert!((r.value - Complex64::new(3f64.ln(), 0.0)).norm() < 1e-10, "{:?}", r);
    }

    #[test]
    fn gaussian_third_order_matches_series() {
        // FP ∫_{-1}^{1} e^{-x²}/x^3 = 0 by oddness; order 4 gives a real value
        let r = oracle(&spec("exp(-z^2)", 0.0, 3, -1.0, 1.0));
        assert!(r.value.norm() < 1e-9);
        // FP ∫_{-1}^{1} (1 - x² + x⁴/2 - …)/x⁴: termwise -2/3 + 2 + Σ_{k≥2} 2(-1)^k/(k!(2k-3))
        let mut expected = -2.0 / 3.0 + 2.0;
        let mut fact = 1.0;
        for k in 2..30 {
            fact *= k as f64;
            expected += 2.0 * (-1f64).powi(k) / (fact * (2 * k - 3) as f64);
        }
        let r = oracle(&spec("exp(-z^2)", 0.0, 4, -1.0, 1.0));
        assert!((r.value.re - expected).abs() < 1e-8, "{} vs {expected}", r.value);
    }

    #[test]
    fn rejects_bad_sequences() {
        let s = spec("1", 0.0, 2, -1.0, 1.0);
        assert!(fpi_epsilon_oracle(&s, &[0.5, 0.25]).is_err());
        assert!(fpi_epsilon_oracle(&s, &[0.25, 0.5, 0.1]).is_err());
        assert!(fpi_epsilon_oracle(&s, &[1.5, 0.5, 0.1]).is_err());
    }
}
