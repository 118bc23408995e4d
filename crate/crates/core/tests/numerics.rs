use std::f64::consts::PI;

use cavity_udw_core::model::{SwitchingFunction, Window};
use cavity_udw_core::numerics::*;
use cavity_udw_core::Complex64;

/// Trapezoid-type sum over the lower triangle with half weight on the diagonal.
fn triangle_riemann(f: &dyn Fn(f64, f64) -> Complex64, lo: f64, hi: f64, n: usize) -> Complex64 {
    let h = (hi - lo) / n as f64;
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..=n {
        let t = lo + h * i as f64;
        for j in 0..i {
            acc += f(t, lo + h * j as f64);
        }
        acc += 0.5 * f(t, t);
    }
    acc * h * h
}

#[test]
fn ordered_gaussian_integral_matches_richardson_and_dawson() {
    let sw = SwitchingFunction::new(1.0, 0.0).unwrap();
    let om = 2.0;
    let f = |t: f64, s: f64| sw.value(t) * sw.value(s) * Complex64::from_polar(1.0, -om * (t - s));
    let q = integrate_triangle(f, &sw, &WindowSpec::default(), om).unwrap();
    let exact = Complex64::new(0.032_463_624_680_131_72, -0.602_680_777_847_584);
    assert!((q.value - exact).norm() < 1e-9, "{}", q.value);
    let closed = Complex64::new(PI.sqrt() * (-om * om).exp(), -2.0 * dawson(om));
    assert!((closed - exact).norm() < 1e-13);
    let coarse = triangle_riemann(&f, -8.0, 8.0, 1000);
    let fine = triangle_riemann(&f, -8.0, 8.0, 2000);
    let rich = (4.0 * fine - coarse) / 3.0;
    assert!((rich - q.value).norm() < 1e-7, "{rich} {}", q.value);
}

#[test]
fn ordered_square_of_normalised_window_is_half() {
    let sw = SwitchingFunction::new(0.6, 1.2).unwrap();
    let q = integrate_triangle(
        |t, s| Complex64::new(sw.value(t).powi(2) * sw.value(s).powi(2), 0.0),
        &sw,
        &WindowSpec::default(),
        0.0,
    )
    .unwrap();
    assert!((q.value.re - 0.5).abs() < 1e-10);
}

#[test]
fn window_fourier_transform() {
    let sw = SwitchingFunction::new(0.8, -0.4).unwrap();
    for w in [0.0, 1.0, 5.0, -3.0] {
        let q = integrate_window(
            |t| sw.value(t) * Complex64::from_polar(1.0, -w * t),
            &sw,
            &WindowSpec::default(),
            w,
        )
        .unwrap();
        assert!((q.value - sw.fourier(w)).norm() < 1e-10, "{w}");
    }
}

#[test]
fn mode_sum_reports_tail_and_partial_on_exhaustion() {
    let spec = SumSpec {
        max_terms: 50,
        ..SumSpec::default()
    };
    match mode_sum(|n| Complex64::new(1.0 / n as f64, 0.0), &spec) {
        Err(cavity_udw_core::Error::Sum { partial, terms, .. }) => {
            assert_eq!(terms, 50);
            assert!(partial.re > 4.0);
        }
        other => panic!("{other:?}"),
    }
}

#[test]
fn smooth_sum_matches_direct_log_normal() {
    // terms e^{-(ln n)^2/8}/n^2 decay slowly enough to need the tail
    let f = |x: f64| Ok((-(x.ln()).powi(2) / 8.0).exp() / (x * x));
    let spec = SumSpec::relative(1e-10, 100_000, TailMode::IntegralComparison);
    let r = mode_sum_smooth(f, &spec, 64).unwrap();
    let direct: f64 = (1..2_000_000).map(|n| f(n as f64).unwrap()).sum();
    assert!((r.value.re - direct).abs() < 1e-8, "{} {direct}", r.value.re);
}
