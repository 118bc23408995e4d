//! The per-mode coupling integrals I_{n,+-} and G_{n,+-}.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::Sign;
use crate::error::{require, Error, Result};
use crate::model::{worldline_eval, DetectorParams, SwitchingFunction, Trajectory, Window};
use crate::numerics::{integrate_triangle, integrate_window, WindowSpec};
use crate::wightman::mode_function;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingI {
    pub n: i64,
    pub sign: Sign,
    pub value: Complex64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CouplingG {
    pub n: i64,
    pub sign: Sign,
    pub value: Complex64,
}

/// Frequency of u_n*(tau) along an inertial worldline:
/// (2 pi |n| / L) e^{-sign(n) beta}.
pub fn mode_frequency(n: i64, length: f64, rapidity: f64) -> f64 {
    2.0 * PI * n.unsigned_abs() as f64 / length * (-(n.signum() as f64) * rapidity).exp()
}

/// How I_{n,+-} and G_{n,+-} are evaluated.
pub trait CouplingMethod: Send + Sync {
    fn name(&self) -> &'static str;

    /// I_{n,+-} = -i lambda int chi e^{+- i Omega tau} u_n*(tau).
    fn coupling_i(
        &self,
        n: i64,
        sign: Sign,
        det: &DetectorParams,
        traj: &Trajectory,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<Complex64>;

    /// G_{n,+-} = -lambda^2 int int_{tau'<tau} chi chi e^{+- i Omega (tau-tau')} u_n(tau) u_n*(tau').
    fn coupling_g(
        &self,
        n: i64,
        sign: Sign,
        det: &DetectorParams,
        traj: &Trajectory,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<Complex64>;
}

fn check(n: i64, traj: &Trajectory, length: f64) -> Result<f64> {
    require(n != 0, || "mode index must be nonzero".into())?;
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    traj.rapidity()
}

/// The literal definitions, evaluated by windowed quadrature and
/// triangle cubature with the mode function pulled back to the worldline.
#[derive(Debug, Clone, Copy, Default)]
pub struct QuadratureCoupling {
    pub window: WindowSpec,
}

impl CouplingMethod for QuadratureCoupling {
    fn name(&self) -> &'static str {
        "quadrature"
    }

    fn coupling_i(
        &self,
        n: i64,
        sign: Sign,
        det: &DetectorParams,
        traj: &Trajectory,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<Complex64> {
        let beta = check(n, traj, length)?;
        let om = det.gap() * sign.value();
        let u_conj = |tau: f64| {
            let p = worldline_eval(traj, tau);
            mode_function(n, length, p.t, p.x).map(|u| u.conj())
        };
        let hint = det.gap().abs() + mode_frequency(n, length, beta);
        let q = integrate_window(
            |tau| {
                let u = u_conj(tau).unwrap_or_default();
                sw.value(tau) * Complex64::from_polar(1.0, om * tau) * u
            },
            sw,
            &self.window,
            hint,
        )?;
        Ok(Complex64::new(0.0, -det.coupling()) * q.value)
    }

    fn coupling_g(
        &self,
        n: i64,
        sign: Sign,
        det: &DetectorParams,
        traj: &Trajectory,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<Complex64> {
        let beta = check(n, traj, length)?;
        let om = det.gap() * sign.value();
        let u = |tau: f64| {
            let p = worldline_eval(traj, tau);
            mode_function(n, length, p.t, p.x).unwrap_or_default()
        };
        let hint = det.gap().abs() + mode_frequency(n, length, beta);
        let q = integrate_triangle(
            |t, s| sw.value(t) * sw.value(s) * Complex64::from_polar(1.0, om * (t - s)) * u(t) * u(s).conj(),
            sw,
            &self.window,
            hint,
        )?;
        Ok(-det.coupling().powi(2) * q.value)
    }
}

/// Closed forms from the window's Fourier transform and ordered transform.
///
/// Along an inertial worldline u_n*(tau) = (4 pi |n|)^{-1/2} e^{i w_n tau}, so
/// I_{n,+-} = -i lambda (4 pi |n|)^{-1/2} hat chi(-(w_n +- Omega)) and
/// G_{n,+-} = -lambda^2 (4 pi |n|)^{-1} T(w_n -+ Omega).
#[derive(Debug, Clone, Copy, Default)]
pub struct SpectralCoupling;

impl CouplingMethod for SpectralCoupling {
    fn name(&self) -> &'static str {
        "spectral"
    }

    fn coupling_i(
        &self,
        n: i64,
        sign: Sign,
        det: &DetectorParams,
        traj: &Trajectory,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<Complex64> {
        let beta = check(n, traj, length)?;
        let w = mode_frequency(n, length, beta) + sign.value() * det.gap();
        let amp = (4.0 * PI * n.unsigned_abs() as f64).sqrt().recip();
        Ok(Complex64::new(0.0, -det.coupling() * amp) * sw.fourier(-w))
    }

    fn coupling_g(
        &self,
        n: i64,
        sign: Sign,
        det: &DetectorParams,
        traj: &Trajectory,
        sw: &SwitchingFunction,
        length: f64,
    ) -> Result<Complex64> {
        let beta = check(n, traj, length)?;
        let w = mode_frequency(n, length, beta) - sign.value() * det.gap();
        let t = sw
            .ordered_transform(w)
            .ok_or_else(|| Error::domain("window has no closed-form ordered transform"))?;
        Ok(-det.coupling().powi(2) / (4.0 * PI * n.unsigned_abs() as f64) * t)
    }
}

/// I_{n,+-} by quadrature with default window settings.
pub fn coupling_i(
    n: i64,
    sign: Sign,
    det: &DetectorParams,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
) -> Result<CouplingI> {
    let value = QuadratureCoupling::default().coupling_i(n, sign, det, traj, sw, length)?;
    Ok(CouplingI { n, sign, value })
}

/// G_{n,+-} by triangle cubature with default window settings.
pub fn coupling_g(
    n: i64,
    sign: Sign,
    det: &DetectorParams,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
) -> Result<CouplingG> {
    let value = QuadratureCoupling::default().coupling_g(n, sign, det, traj, sw, length)?;
    Ok(CouplingG { n, sign, value })
}
