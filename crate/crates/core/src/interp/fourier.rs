//! Closed forms for `∫_ℝ e^{iσx} (x - x0)^{-n} dx`.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{InterpError, Standard};

/// `∫_ℝ (x - x0)^{-n} dx` under the symmetric cutoff: only `n = 1` survives,
/// as `±iπ` from the half-circle around `x0`.
pub fn pure_power_value(interp: Standard, n: u32) -> Result<Complex64, InterpError> {
    if n == 0 {
        return Err(InterpError::InvalidSpec("pole order must be at least 1".into()));
    }
    let half_turn = if n == 1 { PI } else { 0.0 };
    Ok(match interp {
        Standard::Ubv => Complex64::new(0.0, half_turn),
        Standard::Lbv => Complex64::new(0.0, -half_turn),
        Standard::Fpi => Complex64::new(0.0, 0.0),
    })
}

/// Value of `∫_ℝ e^{iσx} (x - x0)^{-n} dx`. `σ = 0` is the pure power.
pub fn fourier_closed_form(interp: Standard, sigma: f64, x0: f64, n: u32) -> Result<Complex64, InterpError> {
    if n == 0 {
        return Err(InterpError::InvalidSpec("pole order must be at least 1".into()));
    }
    if !sigma.is_finite() || !x0.is_finite() {
        return Err(InterpError::InvalidSpec(format!("non-finite σ={sigma} or x0={x0}")));
    }
    if sigma == 0.0 {
        return pure_power_value(interp, n);
    }
    let factorial: f64 = (1..n).map(f64::from).product();
    let i_pow = Complex64::new(0.0, 1.0).powu(n);
    let base = i_pow * PI * sigma.powi(n as i32 - 1) / factorial * Complex64::from_polar(1.0, sigma * x0);
    let step = |s: f64| if s > 0.0 { 1.0 } else { 0.0 };
    Ok(match interp {
        Standard::Ubv => base * 2.0 * step(sigma),
        Standard::Lbv => -base * 2.0 * step(-sigma),
        Standard::Fpi => base * sigma.signum(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn close(a: Complex64, b: Complex64) -> bool {
        (a - b).norm() < 1e-12 * (1.0 + b.norm())
    }

    #[test]
    fn tabulated_cases() {
        assert!(close(fourier_closed_form(Standard::Fpi, 2.0, 0.0, 2).unwrap(), Complex64::new(-2.0 * PI, 0.0)));
        assert!(close(fourier_closed_form(Standard::Ubv, -2.0, 0.0, 2).unwrap(), Complex64::new(0.0, 0.0)));
        assert!(close(fourier_closed_form(Standard::Lbv, 0.0, 0.0, 1).unwrap(), Complex64::new(0.0, -PI)));
        assert!(close(fourier_closed_form(Standard::Ubv, 2.0, 0.0, 2).unwrap(), Complex64::new(-4.0 * PI, 0.0)));
        assert!(close(fourier_closed_form(Standard::Fpi, 0.0, 1.0, 3).unwrap(), Complex64::new(0.0, 0.0)));
    }

    #[test]
    fn averaging_and_difference() {
        for &sigma in &[-2.0, -1.0, 1.0, 2.0] {
            for n in 1..=4 {
                let u = fourier_closed_form(Standard::Ubv, sigma, 0.5, n).unwrap();
                let l = fourier_closed_form(Standard::Lbv, sigma, 0.5, n).unwrap();
                let f = fourier_closed_form(Standard::Fpi, sigma, 0.5, n).unwrap();
                assert!(close(f, (u + l) * 0.5));
                // UBV - LBV = 2πi · (iσ)^{n-1} e^{iσx0} / (n-1)!
                let fact: f64 = (1..n).map(f64::from).product();
                let d = Complex64::new(0.0, 2.0 * PI) * Complex64::new(0.0, sigma).powu(n - 1)
                    * Complex64::from_polar(1.0, 0.5 * sigma)
                    / fact;
                assert!(close(u - l, d));
            }
        }
    }

    #[test]
    fn order_zero_rejected() {
        assert!(fourier_closed_form(Standard::Ubv, 1.0, 0.0, 0).is_err());
    }
}
