//! Uniformly accelerated detector in the cavity.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{ResponseBreakdown, ResponseMeta, ResponseOptions};
use crate::error::{require, Result};
use crate::model::{SwitchingFunction, Trajectory, Window, ZeroModeState};
use crate::numerics::{integrate_interval, integrate_window, mode_sum_smooth, WindowSpec};
use crate::wightman::expm1;

/// Below this real part the integrand is treated as zero.
const EXP_FLOOR: f64 = -700.0;

/// How the per-mode integral
/// J_n^eta = (sqrt(pi n)/L) int chi e^{-i Omega tau - eta a tau} exp(i eta (2 pi n/(a L)) e^{-eta a tau})
/// is evaluated. `n` is real so that the mode sum can be continued to an integral.
pub trait ModeIntegral: Send + Sync {
    fn name(&self) -> &'static str;

    #[allow(clippy::too_many_arguments)]
    fn mode_integral(
        &self,
        n: f64,
        eta: f64,
        gap: f64,
        acceleration: f64,
        length: f64,
        sw: &SwitchingFunction,
        window: &WindowSpec,
    ) -> Result<Complex64>;
}

/// Window for J_n: the factor e^{-eta a tau} moves the peak of the
/// integrand by a sigma^2, so the half-width grows by a sigma widths.
pub fn mode_integral_window(acceleration: f64, sw: &SwitchingFunction, window: &WindowSpec) -> WindowSpec {
    window.with_halfwidth(window.halfwidth_sigmas + acceleration * sw.sigma())
}

fn check(n: f64, eta: f64, acceleration: f64, length: f64) -> Result<()> {
    require(n > 0.0 && n.is_finite(), || {
        format!("mode index must be positive, got {n}")
    })?;
    require(eta == 1.0 || eta == -1.0, || {
        format!("eta must be +-1, got {eta}")
    })?;
    require(acceleration > 0.0 && acceleration.is_finite(), || {
        format!("acceleration must be positive, got {acceleration}")
    })?;
    require(length > 0.0, || format!("length must be positive, got {length}"))
}

fn quad_tol(sw: &SwitchingFunction, window: &WindowSpec) -> f64 {
    window.target_tol * 1e-3 * sw.sigma().sqrt()
}

/// The integral on the real tau line. The phase factor has unit modulus and
/// its frequency grows like c e^{a |tau|}, so the panel budget runs out once
/// a sigma is much above 1.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealLineModeIntegral;

impl ModeIntegral for RealLineModeIntegral {
    fn name(&self) -> &'static str {
        "real-line"
    }

    fn mode_integral(
        &self,
        n: f64,
        eta: f64,
        gap: f64,
        acceleration: f64,
        length: f64,
        sw: &SwitchingFunction,
        window: &WindowSpec,
    ) -> Result<Complex64> {
        check(n, eta, acceleration, length)?;
        let a = acceleration;
        let c = 2.0 * PI * n / (a * length);
        let spec = mode_integral_window(a, sw, window);
        // initial panels resolve the phase out to six widths; adaptive
        // bisection takes care of the far tails where chi is negligible
        let edge = a * ((spec.halfwidth_sigmas.min(6.0) + a * sw.sigma()) * sw.sigma() - eta * sw.tau0());
        let hint = gap.abs() + a + a * c * edge.min(700.0).exp();
        let q = integrate_window(
            |tau| {
                let z = -eta * a * tau;
                let phase = eta * c * z.exp_m1();
                Complex64::from_polar(sw.value(tau) * z.exp(), phase - gap * tau)
            },
            sw,
            // the phase c e^{-eta a tau} is large in the tails, which limits
            // the attainable accuracy to well above the shifted contour's
            &spec.with_tol(window.target_tol * sw.sigma().sqrt()),
            hint,
        )?;
        // the constant phase e^{i eta c} is split off to keep the integrand's phase small
        Ok((PI * n).sqrt() / length * Complex64::from_polar(1.0, eta * c) * q.value)
    }
}

/// The integral along tau = t - i delta, delta = min(sigma, 0.49 pi / a).
///
/// On that line |exp(i eta c e^{-eta a tau})| = exp(-c e^{-eta a t} sin(a delta)),
/// which turns the fast oscillation into decay for both eta. The integrand is
/// entire and bounded in the strip, so the value is unchanged.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShiftedContourModeIntegral;

impl ModeIntegral for ShiftedContourModeIntegral {
    fn name(&self) -> &'static str {
        "shifted-contour"
    }

    fn mode_integral(
        &self,
        n: f64,
        eta: f64,
        gap: f64,
        acceleration: f64,
        length: f64,
        sw: &SwitchingFunction,
        window: &WindowSpec,
    ) -> Result<Complex64> {
        check(n, eta, acceleration, length)?;
        let (a, s, t0) = (acceleration, sw.sigma(), sw.tau0());
        let c = 2.0 * PI * n / (a * length);
        let delta = s.min(0.49 * PI / a);
        let spec = mode_integral_window(a, sw, window);
        let norm = PI.powf(-0.25) / s.sqrt();
        let i = Complex64::i();
        let (sin_d, cot_d) = ((a * delta).sin(), (a * delta).cos() / (a * delta).sin());
        // The phase factor oscillates at a y cot(a delta) with damping e^{-y},
        // y = c e^{-eta a t} sin(a delta). Initial panels resolve y ~ 4;
        // bisection refines where larger y still matters.
        let edge = a * (spec.halfwidth_sigmas * s - eta * t0);
        let live = (c * sin_d * edge.min(700.0).exp()).min(4.0);
        let hint = gap.abs() + delta / (s * s) + a * cot_d * live;
        let tol = quad_tol(sw, window);
        let (lo, hi) = spec.bounds(sw);

        // log |integrand| = -((t - t0)^2 - delta^2)/(2 s^2) - Omega delta - eta a t
        // - c sin(a delta) e^{-eta a t} + log norm is concave in t: locate its
        // peak and drop the ends where the integrand is below tol / (hi - lo).
        let cs = c * sin_d;
        let log_mag = |t: f64| {
            norm.ln()
                - ((t - t0).powi(2) - delta * delta) / (2.0 * s * s)
                - gap * delta
                - eta * a * t
                - cs * (-eta * a * t).exp()
        };
        let slope = |t: f64| -(t - t0) / (s * s) - eta * a + eta * a * cs * (-eta * a * t).exp();
        let peak = bisect(lo, hi, |t| slope(t) > 0.0);
        let floor = (tol * 1e-3 / (hi - lo)).ln().max(EXP_FLOOR);
        if log_mag(peak) < floor {
            return Ok(Complex64::new(0.0, 0.0));
        }
        let left = if log_mag(lo) >= floor {
            lo
        } else {
            bisect(lo, peak, |t| log_mag(t) < floor)
        };
        let right = if log_mag(hi) >= floor {
            hi
        } else {
            bisect(peak, hi, |t| log_mag(t) >= floor)
        };

        let q = integrate_interval(
            |t| {
                let tau = Complex64::new(t, -delta);
                let z = -eta * a * tau;
                let d = tau - t0;
                let mut e = -d * d / (2.0 * s * s) - i * gap * tau + z;
                if z.re > 700.0 {
                    return Complex64::new(0.0, 0.0);
                }
                e += i * eta * c * expm1(z);
                if e.re < EXP_FLOOR {
                    Complex64::new(0.0, 0.0)
                } else {
                    norm * e.exp()
                }
            },
            left,
            right,
            tol,
            spec.max_panel_width(sw, hint),
            spec.max_panels,
        )?;
        Ok((PI * n).sqrt() / length * Complex64::from_polar(1.0, eta * c) * q.value)
    }
}

/// Last point of [lo, hi] where `pred` holds, for `pred` true on a prefix.
fn bisect(mut lo: f64, mut hi: f64, pred: impl Fn(f64) -> bool) -> f64 {
    for _ in 0..80 {
        let mid = 0.5 * (lo + hi);
        if mid <= lo || mid >= hi {
            break;
        }
        if pred(mid) {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    lo
}

/// Response of a detector with proper acceleration a, world line
/// t = sinh(a tau)/a, x = cosh(a tau)/a.
///
/// F_osc = sum_eta sum_{n>=1} |J_n^eta|^2 with the integral tail for large
/// a sigma; F_zm = (2 sqrt(pi) sigma / L^2) <P^2> e^{-sigma^2 (Omega^2 - a^2)}
/// [cos^2(sigma^2 a Omega) + sinh^2(a tau0)].
pub fn response_accelerated(
    gap: f64,
    acceleration: f64,
    length: f64,
    sw: &SwitchingFunction,
    zm: &ZeroModeState,
    opts: &ResponseOptions,
) -> Result<ResponseBreakdown> {
    require(gap.is_finite(), || format!("gap must be finite, got {gap}"))?;
    require(acceleration > 0.0 && acceleration.is_finite(), || {
        format!("acceleration must be positive, got {acceleration}")
    })?;
    require(length > 0.0 && length.is_finite(), || {
        format!("length must be positive, got {length}")
    })?;
    let (s, a) = (sw.sigma(), acceleration);
    let method = opts.mode_integral.as_ref();
    let term = |x: f64| -> Result<f64> {
        let p = method.mode_integral(x, 1.0, gap, a, length, sw, &opts.window)?;
        let m = method.mode_integral(x, -1.0, gap, a, length, sw, &opts.window)?;
        Ok(p.norm_sqr() + m.norm_sqr())
    };
    let resonance = (length * (gap.abs() + a + 8.0 / s) / (2.0 * PI)).ceil() as usize + 16;
    let spec = opts
        .sum
        .with_min_terms(opts.sum.min_terms.max(resonance).min(opts.direct_terms));
    let r = mode_sum_smooth(term, &spec, opts.direct_terms)?;

    let f_zm = 2.0 * PI.sqrt() * s / (length * length)
        * zm.pp()
        * (-s * s * (gap * gap - a * a)).exp()
        * ((s * s * a * gap).cos().powi(2) + (a * sw.tau0()).sinh().powi(2));
    Ok(ResponseBreakdown {
        f_osc: r.value.re,
        f_zm,
        meta: ResponseMeta {
            gap,
            trajectory: Trajectory::Accelerated { acceleration },
            sigma: s,
            tau0: sw.tau0(),
            length,
            pp: zm.pp(),
        },
        osc_terms: r.terms,
        osc_tail: r.tail_estimate,
    })
}
