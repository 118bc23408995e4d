//! Zero-mode and oscillator strength estimators for a static detector in a
//! Gaussian zero-mode state.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Sign;
use crate::error::{require, Error, Result};
use crate::model::{DetectorParams, SwitchingFunction, Window};
use crate::numerics::{integrate_square_vec, integrate_window, mode_sum, SumSpec, TailMode, WindowSpec};

/// Evaluation path for the estimators.
pub trait EstimatorPath: Send + Sync {
    fn name(&self) -> &'static str;

    fn e_zm(
        &self,
        sign: Sign,
        gamma: f64,
        det: &DetectorParams,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<f64>;

    fn e_osc(
        &self,
        sign: Sign,
        det: &DetectorParams,
        sw: &SwitchingFunction,
        length: f64,
        sum: &SumSpec,
    ) -> Result<f64>;
}

fn check(gamma: Option<f64>, length: f64) -> Result<()> {
    if let Some(g) = gamma {
        require(g > 0.0 && g.is_finite(), || {
            format!("gamma must be positive, got {g}")
        })?;
    }
    require(length > 0.0, || format!("length must be positive, got {length}"))
}

/// Modes to sum before trusting the tail: past n = L |Omega| / (2 pi) by
/// several widths L / (2 pi sigma).
fn osc_min_terms(det: &DetectorParams, sw: &SwitchingFunction, length: f64) -> usize {
    let scale = length / (2.0 * PI);
    (scale * (det.gap().abs() + 6.0 / sw.sigma())).ceil() as usize + 1
}

#[derive(Debug, Clone, Copy, Default)]
pub struct ClosedFormEstimators;

impl EstimatorPath for ClosedFormEstimators {
    fn name(&self) -> &'static str {
        "closed-form"
    }

    fn e_zm(
        &self,
        sign: Sign,
        gamma: f64,
        det: &DetectorParams,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<f64> {
        check(Some(gamma), length)?;
        let (s, om) = (sw.sigma(), det.gap());
        let bracket = gamma * s.powi(5) * om * om / (2.0 * length * length) + s / gamma
            - sign.value() * 2.0 * s.powi(3) * om / length;
        Ok(det.coupling().powi(2) * PI.sqrt() * (-s * s * om * om).exp() * bracket)
    }

    fn e_osc(
        &self,
        sign: Sign,
        det: &DetectorParams,
        sw: &SwitchingFunction,
        length: f64,
        sum: &SumSpec,
    ) -> Result<f64> {
        check(None, length)?;
        let (s, lo) = (sw.sigma(), length * det.gap() * sign.value());
        let spec = sum.with_min_terms(
            sum.min_terms
                .max(osc_min_terms(det, sw, length))
                .min(sum.max_terms),
        );
        let r = mode_sum(
            |n| {
                let x = s * (2.0 * PI * n as f64 + lo) / length;
                Complex64::new(s / (n as f64 * PI.sqrt()) * (-x * x).exp(), 0.0)
            },
            &spec,
        )?;
        Ok(det.coupling().powi(2) * r.value.re)
    }
}

/// The defining integrals, by cubature over the window square and
/// per-mode window quadrature.
///
/// E_zm^{+-} is evaluated with the phase e^{-+ i Omega (tau - tau')}, the
/// convention under which it matches the closed form.
#[derive(Debug, Clone, Copy, Default)]
pub struct IntegralEstimators {
    pub window: WindowSpec,
}

impl EstimatorPath for IntegralEstimators {
    fn name(&self) -> &'static str {
        "integral"
    }

    fn e_zm(
        &self,
        sign: Sign,
        gamma: f64,
        det: &DetectorParams,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<f64> {
        check(Some(gamma), length)?;
        let om = det.gap();
        let (t0, l) = (sw.tau0(), length);
        let q = integrate_square_vec(
            |tau, taup, out| {
                let (t, tp) = (tau - t0, taup - t0);
                let k = Complex64::new(1.0 / gamma + gamma * t * tp / (2.0 * l * l), (tp - t) / l);
                let ph = Complex64::from_polar(1.0, -sign.value() * om * (t - tp));
                out[0] = sw.value(tau) * sw.value(taup) * k * ph;
            },
            1,
            sw,
            &self.window,
            om.abs(),
        )?;
        let v = 0.5 * det.coupling().powi(2) * q.values[0];
        if v.im.abs() > 1e-8 * v.re.abs().max(1e-12) + 10.0 * q.error {
            return Err(Error::Consistency(format!(
                "E_zm integral has imaginary part {}",
                v.im
            )));
        }
        Ok(v.re)
    }

    fn e_osc(
        &self,
        sign: Sign,
        det: &DetectorParams,
        sw: &SwitchingFunction,
        length: f64,
        sum: &SumSpec,
    ) -> Result<f64> {
        check(None, length)?;
        let om = det.gap() * sign.value();
        let spec = sum.with_min_terms(
            sum.min_terms
                .max(osc_min_terms(det, sw, length))
                .min(sum.max_terms),
        );
        let mut failure = None;
        let r = mode_sum(
            |n| {
                let w = 2.0 * PI * n as f64 / length + om;
                match integrate_window(
                    |tau| sw.value(tau) * Complex64::from_polar(1.0, w * tau),
                    sw,
                    &self.window.with_tol(self.window.target_tol * 1e-2),
                    w,
                ) {
                    Ok(q) => Complex64::new(q.value.norm_sqr() / (2.0 * n as f64 * PI), 0.0),
                    Err(e) => {
                        failure.get_or_insert(e);
                        Complex64::new(0.0, 0.0)
                    }
                }
            },
            &spec,
        );
        if let Some(e) = failure {
            return Err(e);
        }
        Ok(det.coupling().powi(2) * r?.value.re)
    }
}

/// Closed-form E_zm^{+-}.
pub fn estimator_e_zm(
    sign: Sign,
    gamma: f64,
    det: &DetectorParams,
    sw: &SwitchingFunction,
    length: f64,
) -> Result<f64> {
    ClosedFormEstimators.e_zm(sign, gamma, det, sw, length)
}

/// Closed-form E_osc^{+-}, summed to relative accuracy 1e-12.
pub fn estimator_e_osc(sign: Sign, det: &DetectorParams, sw: &SwitchingFunction, length: f64) -> Result<f64> {
    ClosedFormEstimators.e_osc(sign, det, sw, length, &default_osc_sum())
}

pub(crate) fn default_osc_sum() -> SumSpec {
    SumSpec::relative(1e-12, 1_000_000, TailMode::GeometricBound)
}

/// S^{+-} = |E_zm^{+-}| / |E_osc^{+-}|, independent of lambda.
pub fn relative_strength_s(
    sign: Sign,
    gamma: f64,
    det: &DetectorParams,
    sw: &SwitchingFunction,
    length: f64,
    path: &dyn EstimatorPath,
    sum: &SumSpec,
) -> Result<f64> {
    // lambda^2 cancels; use unit coupling so lambda = 0 is not 0/0
    let unit = det.with_coupling(1.0)?;
    let osc = path.e_osc(sign, &unit, sw, length, sum)?;
    if osc.abs() < 1e-300 {
        return Err(Error::Underflow(format!(
            "E_osc = {osc:e} at sigma = {}, Omega = {}, L = {length}",
            sw.sigma(),
            det.gap()
        )));
    }
    let zm = path.e_zm(sign, gamma, &unit, sw, length)?;
    Ok(zm.abs() / osc.abs())
}

/// The two gamma at which E_zm^+ vanishes: (2 +- sqrt 2) L / (sigma^2 Omega).
pub fn gamma_zeros(length: f64, sw: &SwitchingFunction, det: &DetectorParams) -> Result<(f64, f64)> {
    require(det.gap() != 0.0, || {
        "no cancellation point for a gapless detector".into()
    })?;
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    let base = length / (sw.sigma().powi(2) * det.gap());
    Ok(((2.0 + 2f64.sqrt()) * base, (2.0 - 2f64.sqrt()) * base))
}
