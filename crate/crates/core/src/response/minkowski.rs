//! Accelerated detector in free Minkowski space and the Planckian reference.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::model::SwitchingFunction;
use crate::numerics::{integrate_interval, WindowSpec};

/// A complex evaluation of the Minkowski response; the imaginary part is a
/// diagnostic and should vanish.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct MinkowskiValue {
    pub re: f64,
    pub im: f64,
    pub error: f64,
}

/// How the r-integral
/// F = (a/(4 pi)) e^{-sigma^2 Omega^2} int dr sech^2(r) exp(-(r + i B)^2/(a^2 sigma^2)),
/// B = sigma^2 a Omega - pi/2, is evaluated.
pub trait MinkowskiContour: Send + Sync {
    fn name(&self) -> &'static str;

    fn evaluate(
        &self,
        gap: f64,
        acceleration: f64,
        sw: &SwitchingFunction,
        window: &WindowSpec,
    ) -> Result<MinkowskiValue>;
}

/// sech^2 z without overflow for large |Re z|.
fn sech2(z: Complex64) -> Complex64 {
    let w = if z.re >= 0.0 { z } else { -z };
    let e = (-2.0 * w).exp();
    4.0 * e / ((1.0 + e) * (1.0 + e))
}

fn check(gap: f64, acceleration: f64) -> Result<()> {
    require(gap.is_finite(), || format!("gap must be finite, got {gap}"))?;
    require(acceleration > 0.0 && acceleration.is_finite(), || {
        format!("acceleration must be positive, got {acceleration}")
    })
}

/// Integrates sech^2(r - i theta) exp(-sigma^2 Omega^2 + R^2/(a^2 sigma^2) - (r^2 + 2 i r R)/(a^2 sigma^2))
/// over |r| <= max(30, 12 a sigma), with R = B - theta.
fn contour_integral(
    gap: f64,
    a: f64,
    sw: &SwitchingFunction,
    window: &WindowSpec,
    theta: f64,
    smoothness: f64,
) -> Result<MinkowskiValue> {
    let s = sw.sigma();
    let b = s * s * a * gap - PI / 2.0;
    let r0 = b - theta;
    let w2 = a * a * s * s;
    let shift = -s * s * gap * gap + r0 * r0 / w2;
    let half = 30f64.max(12.0 * a * s);
    let hint = 2.0 * r0.abs() / w2;
    let width = 0.5f64
        .min(0.5 * (a * s).max(smoothness))
        .min(PI / (4.0 * hint.max(1e-300)));
    let pre = a / (4.0 * PI);
    let q = integrate_interval(
        |r| {
            let e = Complex64::new(shift - r * r / w2, -2.0 * r * r0 / w2);
            if e.re < -700.0 {
                return Complex64::new(0.0, 0.0);
            }
            pre * sech2(Complex64::new(r, -theta)) * e.exp()
        },
        -half,
        half,
        window.target_tol * 1e-4 * a,
        width,
        window.max_panels,
    )?;
    Ok(MinkowskiValue {
        re: q.value.re,
        im: q.value.im,
        error: q.error,
    })
}

/// The integral on the real r axis. Accurate while sigma^2 a Omega is
/// moderate; the oscillating Gaussian cancels against e^{B^2/(a^2 sigma^2)}
/// otherwise.
#[derive(Debug, Clone, Copy, Default)]
pub struct RealAxisContour;

impl MinkowskiContour for RealAxisContour {
    fn name(&self) -> &'static str {
        "real-axis"
    }

    fn evaluate(
        &self,
        gap: f64,
        acceleration: f64,
        sw: &SwitchingFunction,
        window: &WindowSpec,
    ) -> Result<MinkowskiValue> {
        check(gap, acceleration)?;
        contour_integral(gap, acceleration, sw, window, 0.0, 1.0)
    }
}

/// The integral on r - i theta, theta = B clamped to |theta| <= pi/2 - eps,
/// eps = min(pi/4, max(a sigma, 0.05)). The shift stays clear of the
/// double poles of sech^2 at +-i pi/2 and removes most of the oscillation.
#[derive(Debug, Clone, Copy, Default)]
pub struct ShiftedContour;

impl MinkowskiContour for ShiftedContour {
    fn name(&self) -> &'static str {
        "shifted"
    }

    fn evaluate(
        &self,
        gap: f64,
        acceleration: f64,
        sw: &SwitchingFunction,
        window: &WindowSpec,
    ) -> Result<MinkowskiValue> {
        check(gap, acceleration)?;
        let s = sw.sigma();
        let b = s * s * acceleration * gap - PI / 2.0;
        let eps = (PI / 4.0).min((acceleration * s).max(0.05));
        let lim = PI / 2.0 - eps;
        let theta = b.clamp(-lim, lim);
        contour_integral(gap, acceleration, sw, window, theta, eps)
    }
}

/// Minkowski-vacuum response of a uniformly accelerated detector.
pub fn response_mink_accel(
    gap: f64,
    acceleration: f64,
    sw: &SwitchingFunction,
    contour: &dyn MinkowskiContour,
    window: &WindowSpec,
) -> Result<f64> {
    let v = contour.evaluate(gap, acceleration, sw, window)?;
    if v.im.abs() > 1e-6 * v.re.abs() {
        return Err(Error::Consistency(format!(
            "Minkowski response has imaginary part {:e} against real part {:e}",
            v.im, v.re
        )));
    }
    Ok(v.re)
}

/// Omega / (e^{2 pi Omega / a} - 1), with the limit a/(2 pi) at Omega = 0.
pub fn planck_rate(gap: f64, acceleration: f64) -> Result<f64> {
    check(gap, acceleration)?;
    if gap == 0.0 {
        return Ok(acceleration / (2.0 * PI));
    }
    Ok(gap / (2.0 * PI * gap / acceleration).exp_m1())
}
