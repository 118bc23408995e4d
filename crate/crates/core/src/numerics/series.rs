//! Mode sums over n >= 1 with tail control.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::numerics::quadrature::integrate_interval;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TailMode {
    /// Bound the tail by a geometric series with the last term ratio.
    /// Valid once the terms are log-concave and decreasing.
    GeometricBound,
    /// Fit a local power law to dyadic block sums and integrate it.
    IntegralComparison,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SumSpec {
    pub abs_tol: f64,
    /// Stop also when the tail is below `rel_tol * |partial sum|`.
    pub rel_tol: f64,
    pub max_terms: usize,
    pub tail_mode: TailMode,
    /// Never stop before this many terms (e.g. past a resonance peak).
    pub min_terms: usize,
}

impl Default for SumSpec {
    fn default() -> Self {
        SumSpec {
            abs_tol: 1e-10,
            rel_tol: 0.0,
            max_terms: 100_000,
            tail_mode: TailMode::GeometricBound,
            min_terms: 1,
        }
    }
}

impl SumSpec {
    pub fn relative(rel_tol: f64, max_terms: usize, tail_mode: TailMode) -> Self {
        SumSpec {
            abs_tol: 0.0,
            rel_tol,
            max_terms,
            tail_mode,
            min_terms: 1,
        }
    }

    pub fn with_min_terms(mut self, n: usize) -> Self {
        self.min_terms = n;
        self
    }

    pub fn with_tail_mode(mut self, mode: TailMode) -> Self {
        self.tail_mode = mode;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require(self.abs_tol >= 0.0 && self.rel_tol >= 0.0, || {
            "sum tolerances must be non-negative".into()
        })?;
        require(self.abs_tol > 0.0 || self.rel_tol > 0.0, || {
            "at least one sum tolerance must be positive".into()
        })?;
        require(self.max_terms >= 1, || "max_terms must be at least 1".into())
    }

    fn target(&self, partial: f64) -> f64 {
        self.abs_tol.max(self.rel_tol * partial)
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumResult {
    pub value: Complex64,
    pub terms: usize,
    /// Estimated remainder beyond the last term (already included in
    /// `value` for the integral-comparison mode).
    pub tail_estimate: f64,
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SumArrayResult<const K: usize> {
    pub values: [Complex64; K],
    pub terms: usize,
    pub tail_estimate: f64,
}

/// `sum_{n >= 1} term(n)`.
pub fn mode_sum<F>(mut term: F, spec: &SumSpec) -> Result<SumResult>
where
    F: FnMut(usize) -> Complex64,
{
    mode_sum_array(|n| [term(n)], spec).map(|r| SumResult {
        value: r.values[0],
        terms: r.terms,
        tail_estimate: r.tail_estimate,
    })
}

/// Component-wise version of [`mode_sum`]; stops when every component's tail
/// estimate meets the tolerance.
pub fn mode_sum_array<const K: usize, F>(term: F, spec: &SumSpec) -> Result<SumArrayResult<K>>
where
    F: FnMut(usize) -> [Complex64; K],
{
    spec.validate()?;
    match spec.tail_mode {
        TailMode::GeometricBound => geometric(term, spec),
        TailMode::IntegralComparison => integral_comparison(term, spec),
    }
}

fn geometric<const K: usize, F>(mut term: F, spec: &SumSpec) -> Result<SumArrayResult<K>>
where
    F: FnMut(usize) -> [Complex64; K],
{
    let zero = Complex64::new(0.0, 0.0);
    let mut sum = [zero; K];
    let mut prev = [f64::NAN; K];
    let mut prev_ratio = [f64::INFINITY; K];
    let mut tail = f64::INFINITY;
    for n in 1..=spec.max_terms {
        let t = term(n);
        tail = 0.0f64;
        for c in 0..K {
            sum[c] += t[c];
            let m = t[c].norm();
            let bound = if m == 0.0 {
                0.0
            } else if prev[c].is_nan() || prev[c] == 0.0 {
                f64::INFINITY
            } else {
                let r = m / prev[c];
                // ratios must be non-increasing for the geometric bound to hold
                let b = if r < 1.0 && r <= prev_ratio[c] * (1.0 + 1e-9) {
                    m * r / (1.0 - r)
                } else {
                    f64::INFINITY
                };
                prev_ratio[c] = r;
                b
            };
            prev[c] = m;
            if !(bound <= spec.target(sum[c].norm())) {
                tail = f64::INFINITY;
            } else {
                tail = tail.max(bound);
            }
        }
        if n >= spec.min_terms && tail.is_finite() {
            return Ok(SumArrayResult {
                values: sum,
                terms: n,
                tail_estimate: tail,
            });
        }
    }
    Err(Error::Sum {
        partial: sum[0],
        terms: spec.max_terms,
        tail_estimate: tail,
    })
}

/// ln of (x + 1/2) used as the continuous stand-in for the index.
fn lnx(n: usize) -> f64 {
    (n as f64 + 0.5).ln()
}

/// Power-law tail from two adjacent dyadic blocks.
///
/// With `s_far` = |sum over (N/2, N]| and `s_near` = |sum over (N/4, N/2]|,
/// find p with the ratio of `int x^{-p}` over the same blocks and return
/// `int_{N+1/2}^inf C x^{-p}` in units of `s_far`.
fn power_tail(n: usize, s_near: f64, s_far: f64) -> f64 {
    if s_far == 0.0 {
        return 0.0;
    }
    if !(s_near > s_far) {
        return f64::INFINITY;
    }
    let (a, b, c) = (lnx(n / 4), lnx(n / 2), lnx(n));
    let ratio = |p: f64| {
        let l1 = (1.0 - p) * (b - a);
        let l2 = (1.0 - p) * (c - b);
        (-l1).exp() * (-l1.exp_m1()) / (-l2.exp_m1())
    };
    let target = s_near / s_far;
    let (mut lo, mut hi) = (1.0 + 1e-9, 400.0);
    if target <= ratio(lo) {
        return f64::INFINITY;
    }
    if target >= ratio(hi) {
        lo = hi;
    } else {
        for _ in 0..200 {
            let mid = 0.5 * (lo + hi);
            if ratio(mid) < target {
                lo = mid;
            } else {
                hi = mid;
            }
        }
    }
    let l2 = (1.0 - lo) * (c - b);
    s_far / (-l2).exp_m1()
}

fn integral_comparison<const K: usize, F>(mut term: F, spec: &SumSpec) -> Result<SumArrayResult<K>>
where
    F: FnMut(usize) -> [Complex64; K],
{
    let zero = Complex64::new(0.0, 0.0);
    // prefix[n] = sum of terms 1..=n, prefix_abs likewise for moduli
    let mut prefix: Vec<[Complex64; K]> = vec![[zero; K]];
    let mut prefix_abs: Vec<[f64; K]> = vec![[0.0; K]];
    let extrapolate = |prefix: &[[Complex64; K]], prefix_abs: &[[f64; K]], n: usize, c: usize| {
        let block = prefix[n][c] - prefix[n / 2][c];
        let s_far = prefix_abs[n][c] - prefix_abs[n / 2][c];
        let s_near = prefix_abs[n / 2][c] - prefix_abs[n / 4][c];
        let t = power_tail(n, s_near, s_far);
        if t == 0.0 {
            (prefix[n][c], 0.0)
        } else if t.is_finite() {
            (prefix[n][c] + block * (t / s_far), t)
        } else {
            (prefix[n][c], f64::INFINITY)
        }
    };
    let mut last_tail = f64::INFINITY;
    for n in 1..=spec.max_terms {
        let t = term(n);
        let mut p = prefix[n - 1];
        let mut pa = prefix_abs[n - 1];
        for c in 0..K {
            p[c] += t[c];
            pa[c] += t[c].norm();
        }
        prefix.push(p);
        prefix_abs.push(pa);
        // checkpoints at multiples of 8 so that N/2 is itself a checkpoint
        if n % 8 != 0 || n < 16 {
            continue;
        }
        let mut ok = n >= spec.min_terms;
        let mut tail = 0.0f64;
        let mut values = [zero; K];
        for c in 0..K {
            let (v, tn) = extrapolate(&prefix, &prefix_abs, n, c);
            let (vh, _) = extrapolate(&prefix, &prefix_abs, n / 2, c);
            let err = if tn.is_finite() {
                (v - vh).norm()
            } else {
                f64::INFINITY
            };
            values[c] = v;
            tail = tail.max(tn);
            if !(err <= spec.target(v.norm())) {
                ok = false;
            }
        }
        last_tail = tail;
        if ok {
            return Ok(SumArrayResult {
                values,
                terms: n,
                tail_estimate: tail,
            });
        }
    }
    Err(Error::Sum {
        partial: prefix[spec.max_terms][0],
        terms: spec.max_terms,
        tail_estimate: last_tail,
    })
}

/// `sum_{n >= 1} f(n)` for a term that extends smoothly to real n.
///
/// Sums directly while that converges within `direct_terms`; otherwise the
/// remainder from M = direct_terms + 1 is
/// `int_M^inf f + f(M)/2 - f'(M)/12 + f'''(M)/720`, with the integral done
/// in ln x. Failures of `f` are propagated.
pub fn mode_sum_smooth<F>(f: F, spec: &SumSpec, direct_terms: usize) -> Result<SumResult>
where
    F: Fn(f64) -> Result<f64>,
{
    spec.validate()?;
    let mut failure = None;
    let direct_spec = SumSpec {
        max_terms: direct_terms.min(spec.max_terms),
        tail_mode: TailMode::IntegralComparison,
        ..*spec
    };
    let direct = mode_sum(
        |n| match f(n as f64) {
            Ok(v) => Complex64::new(v, 0.0),
            Err(e) => {
                failure.get_or_insert(e);
                Complex64::new(0.0, 0.0)
            }
        },
        &direct_spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let partial = match direct {
        Ok(r) => return Ok(r),
        Err(Error::Sum { partial, .. }) => partial.re,
        Err(e) => return Err(e),
    };
    let m = (direct_spec.max_terms + 1) as f64;
    let tol = spec.target(partial.abs());

    // Integral over [ln M, inf) in unit chunks until two chunks are negligible.
    let g = |u: f64| {
        let x = u.exp();
        f(x).map(|v| v * x)
    };
    let mut integral = 0.0;
    let mut quad_err = 0.0;
    let mut quiet = 0;
    let mut u = m.ln();
    while quiet < 2 {
        if u > 700.0 {
            return Err(Error::Sum {
                partial: Complex64::new(partial + integral, 0.0),
                terms: direct_spec.max_terms,
                tail_estimate: f64::INFINITY,
            });
        }
        let mut err_in = None;
        let q = integrate_interval(
            |v| match g(v) {
                Ok(y) => Complex64::new(y, 0.0),
                Err(e) => {
                    err_in.get_or_insert(e);
                    Complex64::new(0.0, 0.0)
                }
            },
            u,
            u + 1.0,
            tol * 1e-2,
            1.0,
            4000,
        )?;
        if let Some(e) = err_in {
            return Err(e);
        }
        integral += q.value.re;
        quad_err += q.error;
        let small = q.value.re.abs() <= 1e-3 * tol.max(1e-3 * integral.abs());
        quiet = if small { quiet + 1 } else { 0 };
        u += 1.0;
    }

    let h = (m / 8.0).max(1.0);
    let fm = f(m)?;
    let (fp1, fm1, fp2, fm2) = (f(m + h)?, f(m - h)?, f(m + 2.0 * h)?, f(m - 2.0 * h)?);
    let d1 = (fp1 - fm1) / (2.0 * h);
    let d3 = (fp2 - 2.0 * fp1 + 2.0 * fm1 - fm2) / (2.0 * h.powi(3));
    let value = partial + integral + fm / 2.0 - d1 / 12.0 + d3 / 720.0;
    // The first neglected Euler-Maclaurin term is of order f'''' / M^2 relative
    // to d3; use |d3|/720 as the remainder estimate.
    let tail_estimate = d3.abs() / 720.0 + quad_err;
    if tail_estimate > spec.target(value.abs()).max(tol) * 10.0 {
        return Err(Error::Sum {
            partial: Complex64::new(value, 0.0),
            terms: direct_spec.max_terms,
            tail_estimate,
        });
    }
    Ok(SumResult {
        value: Complex64::new(value, 0.0),
        terms: direct_spec.max_terms,
        tail_estimate,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::{E, PI};

    fn c(x: f64) -> Complex64 {
        Complex64::new(x, 0.0)
    }

    #[test]
    fn geometric_oracle() {
        let r = mode_sum(|n| c(n as f64 * (-(n as f64)).exp()), &SumSpec::default()).unwrap();
        assert!((r.value.re - E / (E - 1.0).powi(2)).abs() < 1e-10);
    }

    #[test]
    fn basel_with_integral_comparison() {
        let spec = SumSpec::default().with_tail_mode(TailMode::IntegralComparison);
        let r = mode_sum(|n| c(1.0 / (n * n) as f64), &spec).unwrap();
        assert!((r.value.re - PI * PI / 6.0).abs() < spec.abs_tol, "{:?}", r);
    }

    #[test]
    fn zero_terms_stop_immediately() {
        let r = mode_sum(|_| c(0.0), &SumSpec::default()).unwrap();
        assert_eq!(r.terms, 1);
        assert_eq!(r.value, c(0.0));
    }

    #[test]
    fn slow_gaussian_decay() {
        // n e^{-c n^2} with c = 1e-6; sum ~ 1/(2c) - 1/12 + O(c)
        let cc = 1e-6;
        let spec = SumSpec {
            abs_tol: 1e-6,
            max_terms: 1_000_000,
            tail_mode: TailMode::IntegralComparison,
            ..SumSpec::default()
        };
        let r = mode_sum(|n| c(n as f64 * (-cc * (n * n) as f64).exp()), &spec).unwrap();
        let oracle = 1.0 / (2.0 * cc) - 1.0 / 12.0 - cc / 120.0;
        assert!((r.value.re - oracle).abs() < 1e-5, "{} vs {oracle}", r.value.re);
    }

    #[test]
    fn exhaustion_carries_partial() {
        let spec = SumSpec {
            max_terms: 50,
            ..SumSpec::default()
        };
        match mode_sum(|n| c(1.0 / n as f64), &spec) {
            Err(Error::Sum { partial, terms, .. }) => {
                assert_eq!(terms, 50);
                assert!(partial.re > 4.0);
            }
            other => panic!("expected sum error, got {other:?}"),
        }
    }

    #[test]
    fn min_terms_skips_resonance_plateau() {
        // terms rise to a peak at n = 40 and fall; a zero first term would
        // otherwise stop at once
        let f = |n: usize| {
            c(if n < 3 {
                0.0
            } else {
                (-((n as f64 - 40.0) / 5.0).powi(2)).exp()
            })
        };
        let spec = SumSpec::default().with_min_terms(60);
        let r = mode_sum(f, &spec).unwrap();
        let direct: f64 = (1..400).map(|n| f(n).re).sum();
        assert!((r.value.re - direct).abs() < 1e-10);
    }

    #[test]
    fn smooth_sum_log_normal() {
        // f(x) = e^{-(ln x)^2 / 50} / x^1.01: needs ~e^{30} terms directly
        let f = |x: f64| Ok((-(x.ln().powi(2)) / 50.0).exp() / x.powf(1.01));
        let spec = SumSpec::relative(1e-9, 1_000_000, TailMode::IntegralComparison);
        let r = mode_sum_smooth(f, &spec, 256).unwrap();
        // oracle: sum 1..4095 directly plus integral tail from 4095.5 in ln x
        // (midpoint rule error is O(f''/24) per term, negligible here)
        let head: f64 = (1..4096).map(|n| f(n as f64).unwrap()).sum();
        let mut tail = 0.0;
        let (a, b, steps) = ((4095.5f64).ln(), 80.0, 400_000);
        let h = (b - a) / steps as f64;
        for i in 0..steps {
            let u = a + (i as f64 + 0.5) * h;
            tail += f(u.exp()).unwrap() * u.exp() * h;
        }
        let oracle = head + tail;
        assert!(
            ((r.value.re - oracle) / oracle).abs() < 1e-7,
            "{} vs {}",
            r.value.re,
            oracle
        );
    }
}
