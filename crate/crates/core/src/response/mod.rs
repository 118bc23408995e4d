//! Response functions of the derivative-coupling detector.
//!
//! The lambda^2 prefactor is dropped throughout, so responses are
//! transition probabilities per unit lambda^2.

mod accelerated;
mod inertial;
mod minkowski;

use std::sync::Arc;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

pub use accelerated::{
    mode_integral_window, response_accelerated, ModeIntegral, RealLineModeIntegral,
    ShiftedContourModeIntegral,
};
pub use inertial::{longtime_peaks, response_inertial, response_ultrarel, ULTRAREL_THRESHOLD};
pub use minkowski::{
    planck_rate, response_mink_accel, MinkowskiContour, MinkowskiValue, RealAxisContour, ShiftedContour,
};

use crate::error::{Error, Result};
use crate::model::{worldline_eval, SwitchingFunction, Trajectory, Window, ZeroModeState};
use crate::numerics::{integrate_window, SumSpec, TailMode, WindowSpec};

/// Parameter echo attached to every response.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseMeta {
    pub gap: f64,
    pub trajectory: Trajectory,
    pub sigma: f64,
    pub tau0: f64,
    pub length: f64,
    pub pp: f64,
}

/// Oscillator and zero-mode parts of a response, kept separate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ResponseBreakdown {
    pub f_osc: f64,
    pub f_zm: f64,
    pub meta: ResponseMeta,
    /// Mode-sum terms used for `f_osc` (0 for closed forms).
    pub osc_terms: usize,
    /// Tail estimate of the `f_osc` mode sum.
    pub osc_tail: f64,
}

impl ResponseBreakdown {
    pub fn total(&self) -> f64 {
        self.f_osc + self.f_zm
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum PeakSource {
    Osc,
    Zm,
}

/// A delta peak omega -> weight * delta(Omega - omega) of the long-time rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectralPeak {
    pub omega: f64,
    pub weight: f64,
    pub source: PeakSource,
}

/// Numerical settings for the response operations.
#[derive(Clone)]
pub struct ResponseOptions {
    pub window: WindowSpec,
    pub sum: SumSpec,
    /// Terms summed directly before the integral tail takes over.
    pub direct_terms: usize,
    pub mode_integral: Arc<dyn ModeIntegral>,
    pub minkowski: Arc<dyn MinkowskiContour>,
}

impl Default for ResponseOptions {
    fn default() -> Self {
        ResponseOptions {
            window: WindowSpec::default(),
            sum: SumSpec::relative(1e-10, 1_000_000, TailMode::GeometricBound),
            direct_terms: 256,
            mode_integral: Arc::new(ShiftedContourModeIntegral),
            minkowski: Arc::new(ShiftedContour),
        }
    }
}

impl std::fmt::Debug for ResponseOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ResponseOptions")
            .field("window", &self.window)
            .field("sum", &self.sum)
            .field("direct_terms", &self.direct_terms)
            .field("mode_integral", &self.mode_integral.name())
            .field("minkowski", &self.minkowski.name())
            .finish()
    }
}

/// F_zm = (<P^2>/L^2) |int chi e^{-i Omega tau} dt/dtau|^2 along any worldline.
pub fn response_zm_general(
    zm: &ZeroModeState,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
    gap: f64,
    window: &WindowSpec,
) -> Result<f64> {
    traj.validate()?;
    crate::error::require(length > 0.0, || format!("length must be positive, got {length}"))?;
    let (hint, window) = match *traj {
        Trajectory::Inertial { .. } => (gap.abs(), *window),
        Trajectory::Accelerated { acceleration } => (
            gap.abs() + acceleration,
            window.with_halfwidth(window.halfwidth_sigmas + acceleration * sw.sigma()),
        ),
    };
    let q = integrate_window(
        |tau| sw.value(tau) * worldline_eval(traj, tau).dt_dtau * Complex64::from_polar(1.0, -gap * tau),
        sw,
        &window,
        hint,
    )?;
    Ok(zm.pp() / (length * length) * q.value.norm_sqr())
}

/// Z_zm = F_zm / F_osc for the accelerated detector.
pub fn ratio_zm_osc(
    gap: f64,
    acceleration: f64,
    length: f64,
    sw: &SwitchingFunction,
    zm: &ZeroModeState,
    opts: &ResponseOptions,
) -> Result<f64> {
    let r = response_accelerated(gap, acceleration, length, sw, zm, opts)?;
    if r.f_osc < 1e-300 {
        return Err(Error::Underflow(format!(
            "F_osc = {:e} at a = {acceleration}, sigma = {}",
            r.f_osc,
            sw.sigma()
        )));
    }
    Ok(r.f_zm / r.f_osc)
}
