use std::f64::consts::PI;

use divcalc::contour::{build_circle, build_indented_path, integrate_along, Side};
use divcalc::expr::AnalyticFunction;
use num_complex::Complex64;

#[test]
fn entire_integrand_is_path_independent() {
    for text in ["exp(-z^2)", "cos(3*z) + z^5", "exp(2i*z)"] {
        let f = AnalyticFunction::parse(text).unwrap();
        let above = build_indented_path(-1.0, 2.0, 0.3, 0.4, Side::Above).unwrap();
        let below = build_indented_path(-1.0, 2.0, 0.3, 0.4, Side::Below).unwrap();
        let a = integrate_along(|z| f.value(z), &above, 1e-12).unwrap();
        let b = integrate_along(|z| f.value(z), &below, 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 1e-10, "{text}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn indentation_radius_is_a_homotopy() {
    let f = AnalyticFunction::parse("1/(1+z^2)").unwrap();
    let g = |z: Complex64| f.value(z) / z;
    for side in [Side::Above, Side::Below] {
        let small = build_indented_path(-0.5, 0.5, 0.0, 0.1, side).unwrap();
        let large = build_indented_path(-0.5, 0.5, 0.0, 0.3, side).unwrap();
        let a = integrate_along(g, &small, 1e-12).unwrap();
        let b = integrate_along(g, &large, 1e-12).unwrap();
        assert!((a.value - b.value).norm() < 1e-10, "{side:?}: {} vs {}", a.value, b.value);
    }
}

#[test]
fn winding_integral_of_inverse() {
    for r in [0.5, 1.0, 3.0] {
        let circle = build_circle(Complex64::new(0.0, 0.0), r).unwrap();
        let v = integrate_along(|z| z.inv(), &circle, 1e-12).unwrap();
        assert!((v.value - Complex64::new(0.0, 2.0 * PI)).norm() < 1e-10, "r={r}: {}", v.value);
        assert!(v.abs_error_estimate >= 0.0 && v.evaluations >= 1);
    }
}
