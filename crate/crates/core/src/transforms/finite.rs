//! Finite expansions: `∫ Σ_l h_l = Σ_l #∫ h_l` with no correction.

use num_complex::Complex64;
use serde::Serialize;

use crate::expr::AnalyticFunction;
use crate::interp::{evaluate_divergent, DivergentIntegralSpec, Interpretation};

use super::TransformError;

/// `coefficient · ∫ f(x)(x - x0)^{-order} dx` as one summand.
#[derive(Clone, Debug)]
pub struct TermSpec {
    pub coefficient: Complex64,
    pub spec: DivergentIntegralSpec,
}

#[derive(Clone, Debug, Serialize)]
pub struct FiniteSumEvaluation {
    pub value: Complex64,
    pub abs_error_estimate: f64,
    /// `coefficient · value` of each term, in input order.
    pub term_values: Vec<Complex64>,
    pub converged: bool,
}

pub fn finite_sum_reconstruction(
    terms: &[TermSpec],
    interp: &Interpretation,
    tol: f64,
) -> Result<FiniteSumEvaluation, TransformError> {
    if terms.is_empty() {
        return Err(TransformError::InvalidParameter("no terms".into()));
    }
    let per_term = tol / terms.len() as f64;
    let mut value = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut converged = true;
    let mut term_values = Vec::with_capacity(terms.len());
    for t in terms {
        let scale = t.coefficient.norm().max(f64::MIN_POSITIVE);
        let r = evaluate_divergent(&t.spec, interp, per_term / scale.max(1.0))?;
        let v = r.value * t.coefficient;
        value += v;
        error += r.abs_error_estimate * scale;
        converged &= r.diagnostics.converged;
        term_values.push(v);
    }
    Ok(FiniteSumEvaluation { value, abs_error_estimate: error, term_values, converged })
}

/// `sin²x/x² = -¼ e^{2ix}/x² + ½/x² - ¼ e^{-2ix}/x²` over the real line.
pub fn sin2_over_x2_terms() -> Vec<TermSpec> {
    let term = |coefficient: f64, f: &str, sigma: f64| TermSpec {
        coefficient: Complex64::new(coefficient, 0.0),
        spec: DivergentIntegralSpec::real_line(AnalyticFunction::parse(f).expect("preset parses"), 0.0, 2)
            .expect("preset is valid")
            .with_oscillation(sigma),
    };
    vec![term(-0.25, "exp(2i*z)", 2.0), term(0.5, "1", 0.0), term(-0.25, "exp(-2i*z)", -2.0)]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::interp::Standard;
    use std::f64::consts::PI;

    #[test]
    fn sin_squared_over_x_squared_is_pi() {
        let terms = sin2_over_x2_terms();
        for interp in Standard::ALL {
            let r = finite_sum_reconstruction(&terms, &interp.interpretation(), 1e-11).unwrap();
            assert!((r.value - Complex64::new(PI, 0.0)).norm() < 1e-8, "{interp:?}: {}", r.value);
        }
        let ubv = finite_sum_reconstruction(&terms, &Interpretation::ubv(), 1e-11).unwrap();
        assert!((ubv.term_values[0] - Complex64::new(PI, 0.0)).norm() < 1e-8);
        assert!(ubv.term_values[2].norm() < 1e-8);
    }

    #[test]
    fn empty_is_rejected() {
        assert!(finite_sum_reconstruction(&[], &Interpretation::fpi(), 1e-10).is_err());
    }
}
