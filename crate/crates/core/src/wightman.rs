//! Two-point functions and the renormalised stress-energy.

use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require, Error, Result};
use crate::model::ZeroModeState;

/// Default regulator ladder for eps -> 0 limits, in units of L.
pub const EPS_LADDER: [f64; 3] = [1e-2, 5e-3, 2.5e-3];

/// Null-coordinate separation (du = dt - dx, dv = dt + dx) with regulator eps.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct NullSeparation {
    pub du: f64,
    pub dv: f64,
    pub eps: f64,
}

impl NullSeparation {
    pub fn new(du: f64, dv: f64, eps: f64) -> Self {
        NullSeparation { du, dv, eps }
    }

    /// Separation between (t, x) and (t', x').
    pub fn between(t: f64, x: f64, tp: f64, xp: f64, eps: f64) -> Self {
        let (dt, dx) = (t - tp, x - xp);
        NullSeparation {
            du: dt - dx,
            dv: dt + dx,
            eps,
        }
    }

    fn check(&self) -> Result<()> {
        require(self.eps > 0.0, || {
            format!("regulator eps must be positive, got {}", self.eps)
        })?;
        require(self.du.is_finite() && self.dv.is_finite(), || {
            "null separation must be finite".into()
        })
    }
}

/// Positive-frequency oscillator mode (4 pi |n|)^{-1/2} e^{-i 2 pi |n| t/L + i 2 pi n x/L}.
pub fn mode_function(n: i64, length: f64, t: f64, x: f64) -> Result<Complex64> {
    require(n != 0, || "n = 0 is the zero mode, not a mode function".into())?;
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    let k = 2.0 * PI / length;
    let amp = (4.0 * PI * n.unsigned_abs() as f64).sqrt().recip();
    Ok(Complex64::from_polar(
        amp,
        -k * n.unsigned_abs() as f64 * t + k * n as f64 * x,
    ))
}

/// Sum of the first `nmax` oscillator terms of the vacuum Wightman function.
pub fn wightman_osc_partial(sep: &NullSeparation, length: f64, nmax: usize) -> Complex64 {
    let k = 2.0 * PI / length;
    let mut sum = Complex64::new(0.0, 0.0);
    for n in 1..=nmax {
        let nf = n as f64;
        let damp = (-k * nf * sep.eps).exp();
        let term =
            Complex64::from_polar(damp, -k * nf * sep.du) + Complex64::from_polar(damp, -k * nf * sep.dv);
        sum += term / (4.0 * PI * nf);
    }
    sum
}

/// e^w - 1 without cancellation for small |w|.
pub(crate) fn expm1(w: Complex64) -> Complex64 {
    let half = (0.5 * w.im).sin();
    Complex64::new(
        w.re.exp_m1() * w.im.cos() - 2.0 * half * half,
        w.re.exp() * w.im.sin(),
    )
}

/// Closed form of the oscillator Wightman function, principal branch.
pub fn wightman_osc_closed(sep: &NullSeparation, length: f64) -> Result<Complex64> {
    sep.check()?;
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    let k = 2.0 * PI / length;
    let log_term = |d: f64| {
        // 1 - e^{-i k (d - i eps)} = -expm1(-k eps - i k d)
        (-expm1(Complex64::new(-k * sep.eps, -k * d))).ln()
    };
    Ok(-(log_term(sep.du) + log_term(sep.dv)) / (4.0 * PI))
}

/// Zero-mode part <(Q + P t/L)(Q + P t'/L)> from the raw second moments.
pub fn wightman_zm(state: &ZeroModeState, length: f64, t: f64, tp: f64) -> Complex64 {
    Complex64::new(state.qq(), 0.0)
        + state.pq() * (t / length)
        + state.qp() * (tp / length)
        + state.pp() * t * tp / (length * length)
}

/// Massless Minkowski vacuum Wightman function in 1+1 dimensions.
pub fn wightman_mink(sep: &NullSeparation) -> Result<Complex64> {
    sep.check()?;
    let a = Complex64::new(sep.eps, sep.du);
    let b = Complex64::new(sep.eps, sep.dv);
    // ln(a) + ln(b) stays on the principal sheet of each factor
    Ok(-(a.ln() + b.ln()) / (4.0 * PI))
}

/// Linear extrapolation of `f(eps)` to eps = 0 by least squares over `ladder`.
pub fn eps_limit<F>(f: F, ladder: &[f64]) -> Result<Complex64>
where
    F: Fn(f64) -> Result<Complex64>,
{
    require(ladder.len() >= 2, || {
        "eps ladder needs at least two points".into()
    })?;
    let n = ladder.len() as f64;
    let xm = ladder.iter().sum::<f64>() / n;
    let mut ym = Complex64::new(0.0, 0.0);
    let ys: Vec<Complex64> = ladder.iter().map(|&e| f(e)).collect::<Result<_>>()?;
    for y in &ys {
        ym += y / n;
    }
    let mut sxy = Complex64::new(0.0, 0.0);
    let mut sxx = 0.0;
    for (&x, y) in ladder.iter().zip(&ys) {
        sxy += (y - ym) * (x - xm);
        sxx += (x - xm) * (x - xm);
    }
    if sxx == 0.0 {
        return Err(Error::domain("eps ladder must contain distinct values"));
    }
    Ok(ym - sxy / sxx * xm)
}

/// Renormalised stress-energy components.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StressEnergy {
    pub tt_osc: f64,
    pub xx_osc: f64,
    pub tx_osc: f64,
    pub tt_zm: f64,
    pub xx_zm: f64,
    pub tx_zm: f64,
}

impl StressEnergy {
    pub fn tt_total(&self) -> f64 {
        self.tt_osc + self.tt_zm
    }
}

/// Casimir part from the oscillator vacuum plus the zero-mode kinetic part.
/// Both are time independent.
pub fn stress_energy(state: &ZeroModeState, length: f64) -> Result<StressEnergy> {
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    let l2 = length * length;
    let osc = -PI / (6.0 * l2);
    let zm = state.pp() / (2.0 * l2);
    Ok(StressEnergy {
        tt_osc: osc,
        xx_osc: osc,
        tx_osc: 0.0,
        tt_zm: zm,
        xx_zm: zm,
        tx_zm: 0.0,
    })
}
