use std::f64::consts::PI;

use cavity_udw_core::model::*;
use cavity_udw_core::numerics::{integrate_interval, SumSpec, TailMode, WindowSpec};
use cavity_udw_core::response::*;
use cavity_udw_core::wightman::stress_energy;
use cavity_udw_core::Complex64;
use proptest::prelude::*;

fn sum() -> SumSpec {
    SumSpec::relative(1e-13, 1_000_000, TailMode::GeometricBound)
}

fn zm(pp: f64) -> ZeroModeState {
    ZeroModeState::new(0.0, 0.0, 0.25 / pp, pp, Complex64::new(0.0, 0.5)).unwrap()
}

#[test]
fn zero_mode_response_examples() {
    let sw = SwitchingFunction::new(1.0, 0.0).unwrap();
    let w = WindowSpec::default();
    let st = Trajectory::static_detector();
    let v = response_zm_general(&zm(1.0), &st, &sw, 1.0, 0.0, &w).unwrap();
    assert!((v - 2.0 * PI.sqrt()).abs() < 1e-10);
    let r = response_inertial(0.0, 0.0, 1.0, &sw, &zm(1.0), &sum()).unwrap();
    assert!((r.f_zm - 2.0 * PI.sqrt()).abs() < 1e-14);
    // linear in pp
    let a = response_zm_general(&zm(1e-3), &st, &sw, 1.0, 0.7, &w).unwrap();
    let b = response_zm_general(&zm(2e-3), &st, &sw, 1.0, 0.7, &w).unwrap();
    assert!((b - 2.0 * a).abs() < 1e-12 * b);
}

#[test]
fn inertial_zero_mode_response_is_stationary() {
    let w = WindowSpec::default();
    let tr = Trajectory::Inertial { rapidity: 0.4 };
    let base = response_zm_general(
        &zm(1.0),
        &tr,
        &SwitchingFunction::new(0.9, 0.0).unwrap(),
        2.0,
        0.8,
        &w,
    )
    .unwrap();
    for t0 in [-3.0, 1.0, 7.5] {
        let v = response_zm_general(
            &zm(1.0),
            &tr,
            &SwitchingFunction::new(0.9, t0).unwrap(),
            2.0,
            0.8,
            &w,
        )
        .unwrap();
        assert!((v - base).abs() < 1e-10, "{t0}");
    }
    let closed = response_inertial(
        0.8,
        0.4,
        2.0,
        &SwitchingFunction::new(0.9, 3.0).unwrap(),
        &zm(1.0),
        &sum(),
    )
    .unwrap();
    assert!((closed.f_zm - base).abs() < 1e-10);
}

#[test]
fn resonant_deexcitation() {
    let sw = SwitchingFunction::new(1.0, 0.0).unwrap();
    let r = response_inertial(-2.0 * PI, 0.0, 1.0, &sw, &zm(1.0), &sum()).unwrap();
    let dominant = 4.0 * PI.powf(1.5);
    // n = 2 sits one spacing (2 pi) away: suppressed by e^{-4 pi^2}
    assert!((r.f_osc - dominant).abs() < 1e-12 * dominant, "{}", r.f_osc);
}

#[test]
fn rapidity_reflection() {
    let sw = SwitchingFunction::new(0.7, 0.0).unwrap();
    for (om, beta) in [(0.3, 0.8), (-1.0, 2.0), (0.0, 0.1)] {
        let a = response_inertial(om, beta, 1.5, &sw, &zm(1.0), &sum()).unwrap();
        let b = response_inertial(om, -beta, 1.5, &sw, &zm(1.0), &sum()).unwrap();
        assert!((a.f_osc - b.f_osc).abs() < 1e-13 * a.f_osc.max(1e-300));
        assert_eq!(a.f_zm, b.f_zm);
    }
}

#[test]
fn peak_examples() {
    let p = longtime_peaks(0.0, 2.0 * PI, &zm(1.0), 5.5).unwrap();
    let osc: Vec<_> = p.iter().filter(|p| p.source == PeakSource::Osc).collect();
    assert_eq!(osc.len(), 10);
    for pk in &osc {
        let n = -pk.omega;
        assert!((n - n.round()).abs() < 1e-12);
        assert!((pk.weight - n / 2.0).abs() < 1e-12);
    }
    assert!(p.iter().all(|p| p.omega <= 0.0 && p.weight >= 0.0));
}

#[test]
fn gaussian_response_is_a_delta_sequence() {
    // the area of F_osc around the n = 1 peak tends to the peak weight
    let l = 2.0 * PI;
    let sw = SwitchingFunction::new(50.0, 0.0).unwrap();
    // at beta = 0 both chiralities put a peak at omega = -1
    let peaks = longtime_peaks(0.0, l, &zm(1.0), 1.5).unwrap();
    let at: Vec<_> = peaks.iter().filter(|p| (p.omega + 1.0).abs() < 1e-12).collect();
    assert_eq!(at.len(), 2);
    let weight: f64 = at.iter().map(|p| p.weight).sum();
    let peak = at[0];
    let area = integrate_interval(
        |om| {
            Complex64::new(
                response_inertial(om, 0.0, l, &sw, &zm(1.0), &sum())
                    .unwrap()
                    .f_osc,
                0.0,
            )
        },
        peak.omega - 0.5,
        peak.omega + 0.5,
        1e-10,
        0.005,
        4000,
    )
    .unwrap()
    .value
    .re;
    assert!((area / weight - 1.0).abs() < 0.02, "{area} {weight}");
}

#[test]
fn ultrarelativistic_examples() {
    let sw = SwitchingFunction::new(1.0, 0.0).unwrap();
    assert!((response_ultrarel(0.0, &sw) - 1.0 / (4.0 * PI.sqrt())).abs() < 1e-15);
    let big = SwitchingFunction::new(50.0, 0.0).unwrap();
    assert!((response_ultrarel(-1.0, &big) - 0.5).abs() < 0.01);
    assert!(response_ultrarel(1.0, &big).abs() < 0.01);
    let r = response_inertial(0.5, 12.0, 1.0, &sw, &zm(1.0), &sum()).unwrap();
    let u = response_ultrarel(0.5, &sw);
    assert!((r.f_osc - u).abs() < 0.01 * u);
}

#[test]
fn accelerated_cavity_reference_table() {
    // self-generated, cross-checked against brute-force real-line quadrature
    let sw = SwitchingFunction::new(1.0, 0.0).unwrap();
    let opts = ResponseOptions::default();
    let table = [
        (0.15, 0.5, 5.694_207e-6),
        (0.3, 1.0, 3.524_155_294e-5),
        (1.0, 0.5, 6.636_55e-3),
        (1.0, 2.0, 8.1733e-5),
        (3.0, 1.0, 0.013_436_9),
    ];
    for (l, om, expect) in table {
        let r = response_accelerated(om, 1.0, l, &sw, &zm(1.0), &opts).unwrap();
        assert!(
            (r.f_osc - expect).abs() < 2e-6 * expect.abs().max(1e-3) * 10.0,
            "L={l} Omega={om}: {}",
            r.f_osc
        );
        assert!(r.f_osc >= 0.0 && r.f_zm >= 0.0);
    }
}

#[test]
fn accelerated_zero_mode_zeros_and_static_limit() {
    let om = 1.0;
    for s in [0.45, 0.5] {
        let sw = SwitchingFunction::new(s, 0.0).unwrap();
        let opts = ResponseOptions::default();
        let a0 = PI / 2.0 / (s * s * om);
        let static_val = 2.0 * PI.sqrt() * s * (-s * s * om * om).exp();
        let r = response_accelerated(om, a0, 1.0, &sw, &zm(1.0), &opts).unwrap();
        assert!(r.f_zm < 1e-12 * static_val, "{}", r.f_zm);
        let r = response_accelerated(om, 1e-6, 1.0, &sw, &zm(1.0), &opts).unwrap();
        assert!((r.f_zm - static_val).abs() < 1e-9 * static_val);
    }
}

#[test]
fn accelerated_response_depends_on_switching_centre() {
    let opts = ResponseOptions::default();
    let a = response_accelerated(
        1.0,
        1.0,
        1.0,
        &SwitchingFunction::new(1.0, 0.0).unwrap(),
        &zm(1.0),
        &opts,
    )
    .unwrap();
    let b = response_accelerated(
        1.0,
        1.0,
        1.0,
        &SwitchingFunction::new(1.0, 1.0).unwrap(),
        &zm(1.0),
        &opts,
    )
    .unwrap();
    assert!(a.f_osc != b.f_osc && a.f_zm != b.f_zm);
}

#[test]
fn zero_mode_response_depends_only_on_momentum_variance() {
    let sw = SwitchingFunction::new(0.8, 0.5).unwrap();
    let opts = ResponseOptions::default();
    let a = ZeroModeState::new(0.0, 0.0, 1.0, 1.0, Complex64::new(0.0, 0.5)).unwrap();
    let b = ZeroModeState::new(0.7, -0.2, 3.0, 1.0, Complex64::new(0.4, 0.5)).unwrap();
    let ra = response_accelerated(1.0, 0.7, 1.0, &sw, &a, &opts).unwrap();
    let rb = response_accelerated(1.0, 0.7, 1.0, &sw, &b, &opts).unwrap();
    assert_eq!(ra.f_zm, rb.f_zm);
    let ia = response_inertial(1.0, 0.3, 1.0, &sw, &a, &sum()).unwrap();
    let ib = response_inertial(1.0, 0.3, 1.0, &sw, &b, &sum()).unwrap();
    assert_eq!(ia.f_zm, ib.f_zm);
}

#[test]
fn zero_mode_coefficient_is_twice_the_energy_density() {
    for (pp, l) in [(1.0, 1.0), (0.3, 2.5), (1e-6, 1.0)] {
        let state = zm(pp);
        let tt = stress_energy(&state, l).unwrap().tt_zm;
        assert_eq!(state.pp() / (l * l), 2.0 * tt);
    }
}

#[test]
fn ratio_regression_and_linearity() {
    let sw = SwitchingFunction::new(0.5, 0.0).unwrap();
    let opts = ResponseOptions::default();
    let r2 = ratio_zm_osc(1.0, 2.0, 1.0, &sw, &zm(1e-6), &opts).unwrap();
    let r6 = ratio_zm_osc(1.0, 6.0, 1.0, &sw, &zm(1e-6), &opts).unwrap();
    assert!(r6 > r2);
    assert!((r2 - 5.459_690_653_636_946e-5).abs() < 1e-9 * r2);
    assert!((r6 - 1.620_740_011_872_888e-4).abs() < 1e-9 * r6);
    let d = ratio_zm_osc(1.0, 2.0, 1.0, &sw, &zm(2e-6), &opts).unwrap();
    assert!((d - 2.0 * r2).abs() < 1e-12 * d);
}

#[test]
fn minkowski_examples() {
    let w = WindowSpec::default();
    let sw = SwitchingFunction::new(1.0, 0.0).unwrap();
    let v = ShiftedContour.evaluate(1.0, 1.0, &sw, &w).unwrap();
    assert!(v.im.abs() < 1e-8 * v.re);
    let real_axis = RealAxisContour.evaluate(1.0, 1.0, &sw, &w).unwrap();
    assert!(real_axis.im.abs() < 1e-8 * real_axis.re);
    assert!((planck_rate(1.0, 2.0 * PI).unwrap() - 1.0 / (std::f64::consts::E - 1.0)).abs() < 1e-15);
    for i in 0..6 {
        let om = 0.1 + 0.58 * i as f64;
        for a in [0.5, 1.0, 1.5, 2.0] {
            for s in [0.5, 1.0, 1.5, 2.0] {
                let sw = SwitchingFunction::new(s, 0.0).unwrap();
                let v = response_mink_accel(om, a, &sw, &ShiftedContour, &w).unwrap();
                assert!(v > 0.0, "{om} {a} {s}: {v}");
            }
        }
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn inertial_components_nonnegative(om in -5.0f64..5.0, beta in -4.0f64..4.0, s in 0.1f64..3.0, l in 0.3f64..10.0, pp in 1e-6f64..3.0) {
        let sw = SwitchingFunction::new(s, 0.0).unwrap();
        let r = response_inertial(om, beta, l, &sw, &zm(pp), &SumSpec::relative(1e-10, 1_000_000, TailMode::GeometricBound)).unwrap();
        prop_assert!(r.f_osc >= 0.0 && r.f_zm >= 0.0);
        prop_assert_eq!(r.total(), r.f_osc + r.f_zm);
    }

    #[test]
    fn planck_detailed_balance(om in 0.01f64..5.0, a in 0.1f64..5.0) {
        let r = planck_rate(-om, a).unwrap() / planck_rate(om, a).unwrap();
        let e = (2.0 * PI * om / a).exp();
        prop_assert!((r - e).abs() <= 1e-12 * e);
    }

    #[test]
    fn accelerated_zero_mode_vanishes_on_its_zero_set(s in 0.4f64..1.0, om in 0.8f64..2.0, k in 0u32..2) {
        // by quadrature along the world line, independent of the closed form
        let a = (PI / 2.0 + k as f64 * PI) / (s * s * om);
        let sw = SwitchingFunction::new(s, 0.0).unwrap();
        let traj = Trajectory::Accelerated { acceleration: a };
        let f = response_zm_general(&zm(1.0), &traj, &sw, 1.0, om, &WindowSpec::default()).unwrap();
        let envelope = 2.0 * PI.sqrt() * s * (-s * s * (om * om - a * a)).exp();
        prop_assert!(f <= 1e-20 * envelope, "{} {}", f, envelope);
    }
}
