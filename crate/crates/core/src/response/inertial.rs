//! Inertial detector: Gaussian-line mode sum, ultrarelativistic limit and
//! long-time spectral peaks.

use std::f64::consts::PI;

use num_complex::Complex64;

use super::{PeakSource, ResponseBreakdown, ResponseMeta, SpectralPeak};
use crate::error::{require, Result};
use crate::model::{SwitchingFunction, Trajectory, ZeroModeState};
use crate::numerics::{erfc, mode_sum, SumSpec};

/// Below this value of sigma^2 k^2 the branch sum is replaced by its
/// Euler-Maclaurin integral form.
pub const ULTRAREL_THRESHOLD: f64 = 1e-4;

/// Contribution of one branch: sum_{n>=1} n e^{-sigma^2 (Omega + k n)^2}.
fn branch_sum(gap: f64, sigma: f64, k: f64, sum: &SumSpec) -> Result<(f64, usize, f64)> {
    let c = sigma * sigma * k * k;
    if c < ULTRAREL_THRESHOLD {
        let g0 = (-sigma * sigma * gap * gap).exp();
        let s2 = sigma * sigma;
        let integral = (g0 / (2.0 * s2) - gap * PI.sqrt() / (2.0 * sigma) * erfc(sigma * gap)) / (k * k);
        let g2 = (4.0 * s2 * s2 * gap * gap * k * k - 2.0 * s2 * k * k) * g0;
        // f(x) = x g(x): f'(0) = g(0), f'''(0) = 3 g''(0)
        return Ok((integral - g0 / 12.0 + 3.0 * g2 / 720.0, 0, 0.0));
    }
    let peak = (-gap / k).max(0.0);
    let min_terms = (peak + 8.0 / (sigma * k)).ceil() as usize + 2;
    let spec = sum.with_min_terms(sum.min_terms.max(min_terms).min(sum.max_terms));
    let r = mode_sum(
        |n| {
            let x = sigma * (gap + k * n as f64);
            Complex64::new(n as f64 * (-x * x).exp(), 0.0)
        },
        &spec,
    )?;
    Ok((r.value.re, r.terms, r.tail_estimate))
}

/// Response of a detector moving with rapidity beta.
///
/// F_osc = (2 pi^{3/2} sigma / L^2) sum_eta sum_n e^{-2 eta beta} n e^{-sigma^2 (Omega + 2 pi n e^{-eta beta}/L)^2},
/// F_zm = (2 sqrt(pi) cosh^2(beta) / L^2) <P^2> sigma e^{-sigma^2 Omega^2}.
pub fn response_inertial(
    gap: f64,
    rapidity: f64,
    length: f64,
    sw: &SwitchingFunction,
    zm: &ZeroModeState,
    sum: &SumSpec,
) -> Result<ResponseBreakdown> {
    require(gap.is_finite(), || format!("gap must be finite, got {gap}"))?;
    require(rapidity.is_finite(), || {
        format!("rapidity must be finite, got {rapidity}")
    })?;
    require(length > 0.0 && length.is_finite(), || {
        format!("length must be positive, got {length}")
    })?;
    sum.validate()?;
    let s = sw.sigma();
    let (mut total, mut terms, mut tail) = (0.0, 0, 0.0);
    for eta in [1.0, -1.0] {
        let k = 2.0 * PI * (-eta * rapidity).exp() / length;
        let (v, n, t) = branch_sum(gap, s, k, sum)?;
        let pre = (-2.0 * eta * rapidity).exp();
        total += pre * v;
        terms += n;
        tail += pre * t;
    }
    let pre = 2.0 * PI.powf(1.5) * s / (length * length);
    let f_zm = 2.0 * PI.sqrt() * rapidity.cosh().powi(2) / (length * length)
        * zm.pp()
        * s
        * (-s * s * gap * gap).exp();
    Ok(ResponseBreakdown {
        f_osc: pre * total,
        f_zm,
        meta: ResponseMeta {
            gap,
            trajectory: Trajectory::Inertial { rapidity },
            sigma: s,
            tau0: sw.tau0(),
            length,
            pp: zm.pp(),
        },
        osc_terms: terms,
        osc_tail: pre * tail,
    })
}

/// beta -> infinity limit of F_osc: (1/(4 sigma)) [e^{-sigma^2 Omega^2}/sqrt(pi) - sigma Omega erfc(sigma Omega)].
pub fn response_ultrarel(gap: f64, sw: &SwitchingFunction) -> f64 {
    let x = sw.sigma() * gap;
    ((-x * x).exp() / PI.sqrt() - x * erfc(x)) / (4.0 * sw.sigma())
}

/// Delta peaks of the long-time transition rate up to |omega| <= omega_max,
/// sorted by decreasing omega.
///
/// Oscillators contribute at omega = -2 pi n e^{-eta beta}/L with weight
/// (2 pi^2 / L^2) n e^{-2 eta beta}; the zero mode a single peak at 0 with
/// weight 2 pi cosh^2(beta) <P^2> / L^2.
pub fn longtime_peaks(
    rapidity: f64,
    length: f64,
    zm: &ZeroModeState,
    omega_max: f64,
) -> Result<Vec<SpectralPeak>> {
    require(rapidity.is_finite(), || {
        format!("rapidity must be finite, got {rapidity}")
    })?;
    require(length > 0.0, || format!("length must be positive, got {length}"))?;
    require(omega_max >= 0.0, || {
        format!("omega_max must be nonnegative, got {omega_max}")
    })?;
    let mut peaks = vec![SpectralPeak {
        omega: 0.0,
        weight: 2.0 * PI * rapidity.cosh().powi(2) * zm.pp() / (length * length),
        source: PeakSource::Zm,
    }];
    for eta in [1.0, -1.0] {
        let k = 2.0 * PI * (-eta * rapidity).exp() / length;
        let w = 2.0 * PI * PI / (length * length) * (-2.0 * eta * rapidity).exp();
        let count = (omega_max / k).floor();
        require(count < 5e7, || {
            format!("{count} peaks below omega_max = {omega_max}")
        })?;
        for n in 1..=count as u64 {
            peaks.push(SpectralPeak {
                omega: -k * n as f64,
                weight: w * n as f64,
                source: PeakSource::Osc,
            });
        }
    }
    peaks.sort_by(|a, b| b.omega.total_cmp(&a.omega));
    Ok(peaks)
}
