use std::f64::consts::PI;

use divcalc::expr::AnalyticFunction;
use divcalc::interp::Standard;
use divcalc::transforms::{
    hilbert_pv, hilbert_series, power_moment, series_cutoff, stieltjes_direct, stieltjes_series, SeriesEvaluation,
};
use num_complex::Complex64;

fn f(s: &str) -> AnalyticFunction {
    AnalyticFunction::parse(s).unwrap()
}

fn all(g: &AnalyticFunction, omega: f64) -> [SeriesEvaluation; 3] {
    Standard::ALL.map(|i| stieltjes_series(g, omega, i, 60, 1e-12).unwrap())
}

#[test]
fn three_way_agreement() {
    for text in ["exp(-z^2)", "cos(z)*exp(-z^2)"] {
        let g = f(text);
        for omega in [0.25, 0.5, 1.0] {
            let direct = stieltjes_direct(&g, omega, 1e-12).unwrap().value;
            let [u, l, p] = all(&g, omega);
            assert!((u.total - l.total).norm() < 1e-8 && (u.total - p.total).norm() < 1e-8);
            assert!((p.total - direct).norm() < 1e-6 * direct.norm(), "{text} ω={omega}");
        }
    }
}

#[test]
fn series_and_correction_exchange() {
    // not even, so the boundary values genuinely differ
    for text in ["exp(-z^2)*(1+z)", "exp(-z^2+z/2)"] {
        let g = f(text);
        let omega = 0.5;
        let [u, l, p] = all(&g, omega);
        let plus = g.value(Complex64::new(0.0, omega));
        let minus = g.value(Complex64::new(0.0, -omega));
        let exchange = (minus - plus) * (PI / omega);
        assert!((l.series_value - u.series_value - exchange).norm() < 1e-6, "{text}");
        assert!(exchange.norm() > 0.1);
        assert!((p.series_value - (l.series_value + u.series_value) * 0.5).norm() < 1e-8);
        assert!((p.correction - (l.correction + u.correction) * 0.5).norm() < 1e-8);
        assert!((u.total - l.total).norm() < 1e-8);
    }
}

#[test]
fn even_functions_give_conjugate_boundary_values() {
    let g = f("cos(z)*exp(-z^2)");
    let cutoff = series_cutoff(&g).unwrap();
    for j in 0..6u32 {
        let order = 2 * j + 2;
        let u = power_moment(&g, order, Standard::Ubv, cutoff, 1e-12).unwrap().value;
        let l = power_moment(&g, order, Standard::Lbv, cutoff, 1e-12).unwrap().value;
        let p = power_moment(&g, order, Standard::Fpi, cutoff, 1e-12).unwrap().value;
        assert!(p.im.abs() < 1e-8 * (1.0 + p.norm()), "j={j}: {p}");
        assert!((u - l.conj()).norm() < 1e-8 * (1.0 + u.norm()), "j={j}: {u} vs {l}");
    }
}

#[test]
fn hilbert_partial_sums_settle_monotonically() {
    let g = f("1/(1+z^2)");
    for omega in [0.2, 0.4, 0.6] {
        let pv = hilbert_pv(&g, omega, 1e-13).unwrap().value;
        let s = hilbert_series(&g, omega, Standard::Fpi, 200, 1e-13).unwrap();
        assert!(s.converged);
        let mut partial = Complex64::new(0.0, 0.0);
        let errors: Vec<f64> = s
            .terms
            .iter()
            .map(|t| {
                partial += t;
                (partial - pv).norm()
            })
            .collect();
        for w in errors[2..].windows(2) {
            assert!(w[1] <= w[0] + 1e-12, "ω={omega}: {errors:?}");
        }
    }
}

#[test]
fn entire_with_real_axis_growth_uses_wide_window() {
    // cosh-like growth off the axis is fine as long as the real tail decays
    let g = f("exp(-z^2)*cos(2*z)");
    let omega = 0.7;
    let direct = stieltjes_direct(&g, omega, 1e-12).unwrap().value;
    let s = stieltjes_series(&g, omega, Standard::Lbv, 60, 1e-12).unwrap();
    assert!((s.total - direct).norm() < 1e-8, "{} vs {direct}", s.total);
}
