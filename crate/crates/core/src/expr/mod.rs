//! Analytic integrands: parsing, evaluation, Taylor data and singularity
//! geometry.
//!
//! An [`AnalyticFunction`] is an immutable expression tree over one complex
//! variable together with the singular points that could be derived from its
//! structure. Poles come from rational subexpressions, essential
//! singularities from `exp`/`sin`/`cos` of such, and branch points from
//! `log`/`sqrt`. The [`Entirety`] flag records whether that list is known to
//! be complete.

mod analysis;
mod parser;
mod poly;

use std::fmt;
use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::contour::{self, ContourError};

pub use parser::{Func, Node};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum ExprError {
    #[error("syntax error at byte {offset}: {message}")]
    Syntax { offset: usize, message: String },
    #[error("unknown identifier '{name}' at byte {offset}")]
    UnknownIdentifier { name: String, offset: usize },
    #[error("evaluation at singular point {0}")]
    AtSingularity(Complex64),
    #[error("non-finite value at {0}")]
    NonFinite(Complex64),
    #[error("singularity at {location} lies within radius {radius} of {center}")]
    SingularityInsideCircle { center: Complex64, radius: f64, location: Complex64 },
    #[error("Cauchy-integral derivative failed: {0}")]
    Quadrature(#[from] ContourError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "type", rename_all = "snake_case")]
pub enum SingularityKind {
    Pole { order: u32 },
    BranchPoint,
    Essential,
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct Singularity {
    pub location: Complex64,
    pub kind: SingularityKind,
}

/// How much is known about where `f` fails to be analytic.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Entirety {
    /// No singularities in the finite plane.
    Entire,
    /// Isolated singularities only, and the declared list is complete.
    Meromorphic,
    /// The list may be incomplete (branch cuts, zeros of transcendental
    /// divisors).
    Unknown,
}

/// Distance from a point to the nearest singularity.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum SingularityDistance {
    Finite(f64),
    Infinite,
    Unknown,
}

impl SingularityDistance {
    /// `Some(d)` with `d = ∞` for entire functions, `None` when unknown.
    pub fn known(self) -> Option<f64> {
        match self {
            SingularityDistance::Finite(d) => Some(d),
            SingularityDistance::Infinite => Some(f64::INFINITY),
            SingularityDistance::Unknown => None,
        }
    }
}

/// Taylor-data result of [`AnalyticFunction::derivative_at`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Derivative {
    pub value: Complex64,
    pub abs_error_estimate: f64,
}

#[derive(Clone, Debug)]
pub struct AnalyticFunction {
    ast: Arc<Node>,
    singularities: Arc<[Singularity]>,
    entirety: Entirety,
}

impl PartialEq for AnalyticFunction {
    fn eq(&self, other: &Self) -> bool {
        self.ast == other.ast
    }
}

impl AnalyticFunction {
    pub fn parse(text: &str) -> Result<Self, ExprError> {
        Ok(Self::from_node(parser::parse(text)?))
    }

    pub fn from_node(ast: Node) -> Self {
        let (singularities, entirety) = analysis::analyse(&ast);
        Self { ast: Arc::new(ast), singularities: singularities.into(), entirety }
    }

    pub fn ast(&self) -> &Node {
        &self.ast
    }

    pub fn singularities(&self) -> &[Singularity] {
        &self.singularities
    }

    pub fn entirety(&self) -> Entirety {
        self.entirety
    }

    /// True when every literal is real, so that `f(z̄) = conj(f(z))`.
    pub fn is_real_on_real_axis(&self) -> bool {
        self.ast.has_real_literals()
    }

    /// Raw complex value; no singularity or finiteness checks. This is the
    /// entry point quadrature loops use.
    #[inline]
    pub fn value(&self, z: Complex64) -> Complex64 {
        self.ast.eval(z)
    }

    /// Checked evaluation under principal branches.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, ExprError> {
        for s in self.singularities.iter() {
            if (z - s.location).norm() <= 1e-14 * (1.0 + s.location.norm()) {
                return Err(ExprError::AtSingularity(z));
            }
        }
        let v = self.value(z);
        if v.re.is_finite() && v.im.is_finite() {
            Ok(v)
        } else {
            Err(ExprError::NonFinite(z))
        }
    }

    pub fn nearest_singularity_distance(&self, center: Complex64) -> SingularityDistance {
        match self.entirety {
            Entirety::Entire => SingularityDistance::Infinite,
            Entirety::Unknown => SingularityDistance::Unknown,
            Entirety::Meromorphic => {
                let d = self
                    .singularities
                    .iter()
                    .map(|s| (s.location - center).norm())
                    .fold(f64::INFINITY, f64::min);
                if d.is_finite() {
                    SingularityDistance::Finite(d)
                } else {
                    SingularityDistance::Infinite
                }
            }
        }
    }

    /// Default Cauchy-circle radius: half the distance to the nearest
    /// singularity, capped at 1. Unknown geometry falls back to 1/4.
    pub fn default_derivative_radius(&self, x0: Complex64) -> f64 {
        match self.nearest_singularity_distance(x0).known() {
            Some(d) => (0.5 * d).min(1.0),
            None => 0.25,
        }
    }

    /// `f^(n)(x0)` from the Cauchy integral formula on `|z - x0| = radius`.
    pub fn derivative_at(&self, x0: Complex64, n: u32, radius: f64) -> Result<Derivative, ExprError> {
        for s in self.singularities.iter() {
            if (s.location - x0).norm() <= radius * (1.0 + 1e-12) {
                return Err(ExprError::SingularityInsideCircle { center: x0, radius, location: s.location });
            }
        }
        let (coefficient, err) = contour::taylor_coefficient(|z| self.value(z), x0, radius, n)?;
        let factorial: f64 = (1..=n).map(f64::from).product();
        Ok(Derivative { value: coefficient * factorial, abs_error_estimate: err * factorial })
    }

    /// `f^(n)(x0)/n!` with the default radius.
    pub fn taylor_coefficient(&self, x0: Complex64, n: u32) -> Result<Derivative, ExprError> {
        let radius = self.default_derivative_radius(x0);
        let d = self.derivative_at(x0, n, radius)?;
        let factorial: f64 = (1..=n).map(f64::from).product();
        Ok(Derivative { value: d.value / factorial, abs_error_estimate: d.abs_error_estimate / factorial })
    }
}

/// Canonical serialisation; parsing it back yields the same values.
impl fmt::Display for AnalyticFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.ast.fmt(f)
    }
}

impl std::str::FromStr for AnalyticFunction {
    type Err = ExprError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn poles(f: &AnalyticFunction) -> Vec<(Complex64, u32)> {
        f.singularities()
            .iter()
            .map(|s| match s.kind {
                SingularityKind::Pole { order } => (s.location, order),
                other => panic!("unexpected {other:?}"),
            })
            .collect()
    }

    #[test]
    fn gaussian_is_entire() {
        let f = AnalyticFunction::parse("exp(-z^2)").unwrap();
        assert_eq!(f.entirety(), Entirety::Entire);
        assert!(f.singularities().is_empty());
    }

    #[test]
    fn lorentzian_has_simple_poles_at_plus_minus_i() {
        let f = AnalyticFunction::parse("1/(1+z^2)").unwrap();
        assert_eq!(f.entirety(), Entirety::Meromorphic);
        let p = poles(&f);
        assert_eq!(p.len(), 2);
        for target in [c(0.0, 1.0), c(0.0, -1.0)] {
            assert!(p.iter().any(|(z, m)| (z - target).norm() < 1e-14 && *m == 1));
        }
    }

    #[test]
    fn explicit_cube_gives_third_order_pole() {
        let f = AnalyticFunction::parse("1/((z-2)^3)").unwrap();
        assert_eq!(poles(&f), vec![(c(2.0, 0.0), 3)]);
    }

    #[test]
    fn expanded_square_merges_to_double_pole() {
        let f = AnalyticFunction::parse("exp(z)/(z^2 - 2*z + 1)").unwrap();
        let p = poles(&f);
        assert_eq!(p.len(), 1);
        assert!((p[0].0 - c(1.0, 0.0)).norm() < 1e-7);
        assert_eq!(p[0].1, 2);
    }

    #[test]
    fn common_denominators_do_not_double_orders() {
        let f = AnalyticFunction::parse("1/z + 2/z").unwrap();
        assert_eq!(poles(&f), vec![(c(0.0, 0.0), 1)]);
        let g = AnalyticFunction::parse("cos(z)/z^2 + sin(z)/z").unwrap();
        assert_eq!(poles(&g), vec![(c(0.0, 0.0), 2)]);
    }

    #[test]
    fn removable_singularities_are_kept() {
        let f = AnalyticFunction::parse("sin(z)/z").unwrap();
        assert_eq!(poles(&f), vec![(c(0.0, 0.0), 1)]);
    }

    #[test]
    fn essential_and_branch_points() {
        let f = AnalyticFunction::parse("exp(1/(z-1))").unwrap();
        assert_eq!(f.singularities()[0].kind, SingularityKind::Essential);
        assert_eq!(f.entirety(), Entirety::Meromorphic);
        let g = AnalyticFunction::parse("sqrt(z+4)").unwrap();
        assert_eq!(g.entirety(), Entirety::Unknown);
        assert_eq!(g.singularities()[0].kind, SingularityKind::BranchPoint);
        assert!((g.singularities()[0].location - c(-4.0, 0.0)).norm() < 1e-14);
        let h = AnalyticFunction::parse("1/cos(z)").unwrap();
        assert_eq!(h.entirety(), Entirety::Unknown);
        let k = AnalyticFunction::parse("z/exp(z)").unwrap();
        assert_eq!(k.entirety(), Entirety::Entire);
    }

    #[test]
    fn evaluation_examples() {
        let f = AnalyticFunction::parse("exp(-z^2)").unwrap();
        assert!((f.evaluate(c(0.0, 1.0)).unwrap() - c(std::f64::consts::E, 0.0)).norm() < 1e-15);
        let s = AnalyticFunction::parse("sin(z)").unwrap();
        assert_eq!(s.evaluate(c(0.0, 0.0)).unwrap(), c(0.0, 0.0));
        let r = AnalyticFunction::parse("1/(1+z^2)").unwrap();
        assert!((r.evaluate(c(0.0, 0.5)).unwrap() - c(4.0 / 3.0, 0.0)).norm() < 1e-15);
    }

    #[test]
    fn evaluation_errors() {
        let r = AnalyticFunction::parse("1/(z-2)").unwrap();
        assert_eq!(r.evaluate(c(2.0, 0.0)), Err(ExprError::AtSingularity(c(2.0, 0.0))));
        let big = AnalyticFunction::parse("exp(z)").unwrap();
        assert_eq!(big.evaluate(c(1000.0, 0.0)), Err(ExprError::NonFinite(c(1000.0, 0.0))));
    }

    #[test]
    fn principal_branches() {
        let l = AnalyticFunction::parse("log(z)").unwrap();
        let v = l.evaluate(c(-1.0, 1e-300)).unwrap();
        assert!((v.im - std::f64::consts::PI).abs() < 1e-15);
        let s = AnalyticFunction::parse("sqrt(z)").unwrap();
        assert!((s.evaluate(c(-4.0, 0.0)).unwrap() - c(0.0, 2.0)).norm() < 1e-15);
    }

    #[test]
    fn derivative_examples() {
        let f = AnalyticFunction::parse("exp(2i*z)").unwrap();
        let d = f.derivative_at(c(0.0, 0.0), 1, 1.0).unwrap();
        assert!((d.value - c(0.0, 2.0)).norm() < 1e-13);
        let g = AnalyticFunction::parse("exp(-z^2)").unwrap();
        let d = g.derivative_at(c(0.0, 0.0), 2, 1.0).unwrap();
        assert!((d.value - c(-2.0, 0.0)).norm() < 1e-13);
    }

    #[test]
    fn fourth_derivative_of_lorentzian_matches_finite_differences() {
        let f = AnalyticFunction::parse("1/(1+z^2)").unwrap();
        let d = f.derivative_at(c(0.0, 0.0), 4, 0.5).unwrap();
        // five-point fourth difference, oracle independent of the contour route
        let h: f64 = 2.5e-3;
        let g = |x: f64| 1.0 / (1.0 + x * x);
        let fd = (g(2.0 * h) - 4.0 * g(h) + 6.0 * g(0.0) - 4.0 * g(-h) + g(-2.0 * h)) / h.powi(4);
        assert!((fd - 24.0).abs() < 2e-3, "finite-difference oracle {fd}");
        assert!((d.value - c(24.0, 0.0)).norm() < 1e-10, "{:?}", d);
    }

    #[test]
    fn derivative_rejects_enclosed_singularity() {
        let f = AnalyticFunction::parse("1/(1+z^2)").unwrap();
        assert!(matches!(
            f.derivative_at(c(0.0, 0.0), 1, 1.5),
            Err(ExprError::SingularityInsideCircle { .. })
        ));
    }

    #[test]
    fn nearest_singularity_examples() {
        let g = AnalyticFunction::parse("exp(-z^2)").unwrap();
        assert_eq!(g.nearest_singularity_distance(c(0.0, 0.0)), SingularityDistance::Infinite);
        let r = AnalyticFunction::parse("1/(1+z^2)").unwrap();
        assert_eq!(r.nearest_singularity_distance(c(0.0, 0.0)), SingularityDistance::Finite(1.0));
        let p = AnalyticFunction::parse("1/(z-2)").unwrap();
        assert_eq!(p.nearest_singularity_distance(c(0.5, 0.0)), SingularityDistance::Finite(1.5));
        let u = AnalyticFunction::parse("log(z+3)").unwrap();
        assert_eq!(u.nearest_singularity_distance(c(0.0, 0.0)), SingularityDistance::Unknown);
    }

    #[test]
    fn default_radius() {
        let r = AnalyticFunction::parse("1/(1+z^2)").unwrap();
        assert_eq!(r.default_derivative_radius(c(0.0, 0.0)), 0.5);
        let g = AnalyticFunction::parse("cos(z)").unwrap();
        assert_eq!(g.default_derivative_radius(c(0.0, 0.0)), 1.0);
    }
}
