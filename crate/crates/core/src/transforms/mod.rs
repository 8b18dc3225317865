//! Convergent transforms evaluated by term-by-term integration.
//!
//! Expanding the kernel of a Stieltjes or Hilbert transform in powers of
//! `1/x` turns the transform into a series of divergent integrals. Summing
//! their values under one interpretation misses the contribution of the
//! kernel's own poles; the correction term restores it. Direct quadrature
//! oracles and the remainder bound of the Stieltjes expansion live here too.

mod direct;
mod finite;
mod remainder;

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::Serialize;
use thiserror::Error;

use crate::contour::ContourError;
use crate::expr::{AnalyticFunction, ExprError};
use crate::interp::{
    evaluate_divergent_with, DivergentIntegralSpec, EvaluationOptions, EvaluationResult, InterpError, Standard,
};

pub use direct::{hilbert_pv, stieltjes_direct};
pub use finite::{finite_sum_reconstruction, sin2_over_x2_terms, FiniteSumEvaluation, TermSpec};
pub use remainder::{remainder_diagnostics, RemainderDiagnostics};

/// Default cap on the number of series terms.
pub const DEFAULT_MAX_TERMS: usize = 100;

const I: Complex64 = Complex64 { re: 0.0, im: 1.0 };
/// Largest indentation radius tried for the divergent terms.
const MAX_TERM_RADIUS: f64 = 6.0;
/// Consecutive small terms required before the series is cut.
const SMALL_RUN: usize = 3;
const GROWTH_LIMIT: f64 = 1e8;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum TransformError {
    #[error("|ω| = {omega} is outside the radius of convergence {radius} set by the nearest singularity of f")]
    OutsideRadius { omega: f64, radius: f64 },
    #[error("series terms grow (|term {index}| = {magnitude:e})")]
    TermGrowth { index: usize, magnitude: f64 },
    #[error("singularities of f are not fully known; the radius of convergence cannot be checked")]
    UnknownGeometry,
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error("tail of the integrand does not decay")]
    NonConvergentTail,
    #[error("f has a singularity at {0} on the real axis")]
    SingularityOnAxis(Complex64),
    #[error(transparent)]
    Interp(#[from] InterpError),
    #[error(transparent)]
    Contour(#[from] ContourError),
    #[error(transparent)]
    Expr(#[from] ExprError),
}

/// Series part, correction and total of a term-by-term evaluation.
#[derive(Clone, Debug, Serialize)]
pub struct SeriesEvaluation {
    pub interpretation: Standard,
    pub series_value: Complex64,
    pub correction: Complex64,
    pub total: Complex64,
    pub terms_used: usize,
    /// Half-width of the real window shared by every divergent term.
    pub cutoff: f64,
    /// Indentation radius of each term.
    pub rhos: Vec<f64>,
    /// Signed series terms, ascending.
    pub terms: Vec<Complex64>,
    pub term_magnitudes: Vec<f64>,
    pub converged: bool,
    /// Distance from the origin to the nearest singularity of `f`.
    pub radius_bound: f64,
    pub abs_error_estimate: f64,
}

/// Which transform a series belongs to.
#[derive(Clone, Copy)]
enum Transform {
    Stieltjes,
    Hilbert,
}

/// `∫_ℝ f(x) x^{-order} dx` under `interp`, with the indentation radius
/// chosen to keep the term well conditioned and the real window fixed at
/// `cutoff`.
pub fn power_moment(
    f: &AnalyticFunction,
    order: u32,
    interp: Standard,
    cutoff: f64,
    tol: f64,
) -> Result<EvaluationResult, TransformError> {
    let cap = (cutoff - 1.0).max(f64::MIN_POSITIVE);
    let radius = term_radius(f, order, cap);
    let spec = DivergentIntegralSpec::real_line(f.clone(), 0.0, order)?;
    let opts = EvaluationOptions { tol, rho: Some(radius), cutoff: Some(cutoff), ..EvaluationOptions::default() };
    Ok(evaluate_divergent_with(&spec, &interp.interpretation(), &opts)?)
}

/// Half-width of the real window for series over `f`: the largest bump
/// radius plus one.
pub fn series_cutoff(f: &AnalyticFunction) -> Result<f64, TransformError> {
    let d = radius_of_convergence(f)?;
    Ok((0.9 * d).min(MAX_TERM_RADIUS) + 1.0)
}

/// `∫_ℝ f(x)/(ω² + x²) dx = Σ_j (-1)^j ω^{2j} #∫ f/x^{2j+2} + Δ#`.
pub fn stieltjes_series(
    f: &AnalyticFunction,
    omega: f64,
    interp: Standard,
    max_terms: usize,
    tol: f64,
) -> Result<SeriesEvaluation, TransformError> {
    if !(omega > 0.0) || !omega.is_finite() {
        return Err(TransformError::InvalidParameter(format!("ω must be positive, got {omega}")));
    }
    let plus = f.evaluate(Complex64::new(0.0, omega))?;
    let minus = f.evaluate(Complex64::new(0.0, -omega))?;
    let correction = stieltjes_correction(interp, omega, plus, minus);
    run_series(f, omega, interp, max_terms, tol, Transform::Stieltjes, correction)
}

/// `Δ#` for the Stieltjes expansion: the residue at `iω` for LBV, at `-iω`
/// for UBV, and their mean for FPI.
pub fn stieltjes_correction(interp: Standard, omega: f64, f_plus: Complex64, f_minus: Complex64) -> Complex64 {
    match interp {
        Standard::Lbv => f_plus * (PI / omega),
        Standard::Ubv => f_minus * (PI / omega),
        Standard::Fpi => (f_plus + f_minus) * (PI / (2.0 * omega)),
    }
}

/// `PV∫_ℝ f(x)/(ω - x) dx = -Σ_k ω^k #∫ f/x^{k+1} + Δ#`.
pub fn hilbert_series(
    f: &AnalyticFunction,
    omega: f64,
    interp: Standard,
    max_terms: usize,
    tol: f64,
) -> Result<SeriesEvaluation, TransformError> {
    if !omega.is_finite() {
        return Err(TransformError::InvalidParameter(format!("ω must be finite, got {omega}")));
    }
    let value = f.evaluate(Complex64::new(omega, 0.0))?;
    let correction = hilbert_correction(interp, value);
    run_series(f, omega, interp, max_terms, tol, Transform::Hilbert, correction)
}

/// `Δ#` for the Hilbert expansion: `∓πi f(ω)` for LBV/UBV, nothing for FPI.
pub fn hilbert_correction(interp: Standard, f_omega: Complex64) -> Complex64 {
    match interp {
        Standard::Lbv => -I * PI * f_omega,
        Standard::Ubv => I * PI * f_omega,
        Standard::Fpi => Complex64::new(0.0, 0.0),
    }
}

fn radius_of_convergence(f: &AnalyticFunction) -> Result<f64, TransformError> {
    f.nearest_singularity_distance(Complex64::new(0.0, 0.0))
        .known()
        .ok_or(TransformError::UnknownGeometry)
}

fn run_series(
    f: &AnalyticFunction,
    omega: f64,
    interp: Standard,
    max_terms: usize,
    tol: f64,
    transform: Transform,
    correction: Complex64,
) -> Result<SeriesEvaluation, TransformError> {
    if !(tol > 0.0) {
        return Err(ContourError::InvalidTolerance(tol).into());
    }
    if max_terms == 0 {
        return Err(TransformError::InvalidParameter("max_terms must be positive".into()));
    }
    let radius = radius_of_convergence(f)?;
    if omega.abs() >= radius {
        return Err(TransformError::OutsideRadius { omega: omega.abs(), radius });
    }
    let cutoff = series_cutoff(f)?;
    // individual terms are resolved well below the requested tolerance
    let term_tol = 0.01 * tol;

    let mut series = Complex64::new(0.0, 0.0);
    let mut error = 0.0;
    let mut terms = Vec::new();
    let mut rhos = Vec::new();
    let mut small_run = 0;
    let mut converged = false;
    for j in 0..max_terms {
        let (order, weight) = match transform {
            Transform::Stieltjes => {
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                (2 * j as u32 + 2, sign * omega.powi(2 * j as i32))
            }
            Transform::Hilbert => (j as u32 + 1, -omega.powi(j as i32)),
        };
        let term = if weight == 0.0 {
            rhos.push(0.0);
            Complex64::new(0.0, 0.0)
        } else {
            let r = power_moment(f, order, interp, cutoff, (term_tol / weight.abs()).min(1e-6))?;
            rhos.push(r.diagnostics.rho);
            error += r.abs_error_estimate * weight.abs();
            r.value * weight
        };
        series += term;
        terms.push(term);

        let scale = (series + correction).norm().max(f64::MIN_POSITIVE);
        if term.norm() > GROWTH_LIMIT * scale.max(1.0) {
            return Err(TransformError::TermGrowth { index: j, magnitude: term.norm() });
        }
        if term.norm() <= tol * scale {
            small_run += 1;
        } else {
            small_run = 0;
        }
        if small_run >= SMALL_RUN && j >= 3 {
            converged = true;
            break;
        }
    }
    let last = terms.last().map_or(0.0, |t| t.norm());
    Ok(SeriesEvaluation {
        interpretation: interp,
        series_value: series,
        correction,
        total: series + correction,
        terms_used: terms.len(),
        cutoff,
        rhos,
        term_magnitudes: terms.iter().map(|t| t.norm()).collect(),
        terms,
        converged,
        radius_bound: radius,
        abs_error_estimate: error + last,
    })
}

/// Bump radius in `(0, cap]` minimising `max_{|z|=r} |f(z)| · r^{1-order}`,
/// the size of the integrand on the bump times its length.
fn term_radius(f: &AnalyticFunction, order: u32, cap: f64) -> f64 {
    const STEPS: usize = 48;
    const SAMPLES: usize = 64;
    let mut best = (f64::INFINITY, cap);
    for i in 1..=STEPS {
        let r = cap * i as f64 / STEPS as f64;
        let peak = (0..SAMPLES)
            .map(|k| f.value(Complex64::from_polar(r, 2.0 * PI * k as f64 / SAMPLES as f64)).norm())
            .fold(0.0, f64::max);
        let score = peak.ln() + (1.0 - order as f64) * r.ln();
        if score.is_finite() && score < best.0 {
            best = (score, r);
        }
    }
    best.1
}
