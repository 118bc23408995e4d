//! Adaptive Gauss-Kronrod quadrature over switching windows and the
//! time-ordered triangle.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::PI;

use num_complex::Complex64;

use crate::error::{require, Error, Result};
use crate::model::Window;

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];
/// Gauss weights for the odd-indexed Kronrod nodes (1, 3, 5, 7).
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

/// 15 Kronrod nodes on [-1, 1] with Kronrod and embedded Gauss weights.
fn rule() -> [(f64, f64, f64); 15] {
    let mut out = [(0.0, 0.0, 0.0); 15];
    for k in 0..7 {
        let wg = if k % 2 == 1 { WG[k / 2] } else { 0.0 };
        out[k] = (-XGK[k], WGK[k], wg);
        out[14 - k] = (XGK[k], WGK[k], wg);
    }
    out[7] = (0.0, WGK[7], WG[3]);
    out
}

/// Window geometry and tolerance for switching-function integrals.
///
/// The window is centred on the switching function's centre.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WindowSpec {
    /// Half-width in units of the window width (sigma for the Gaussian).
    pub halfwidth_sigmas: f64,
    /// Absolute error target.
    pub target_tol: f64,
    /// Maximum number of panels (1D) or cells (2D).
    pub max_panels: usize,
}

impl Default for WindowSpec {
    fn default() -> Self {
        WindowSpec {
            halfwidth_sigmas: 8.0,
            target_tol: 1e-10,
            max_panels: 20_000,
        }
    }
}

impl WindowSpec {
    pub fn with_tol(mut self, tol: f64) -> Self {
        self.target_tol = tol;
        self
    }

    pub fn with_halfwidth(mut self, k: f64) -> Self {
        self.halfwidth_sigmas = k;
        self
    }

    pub fn validate(&self) -> Result<()> {
        require(self.halfwidth_sigmas >= 5.0, || {
            format!(
                "halfwidth_sigmas must be at least 5, got {}",
                self.halfwidth_sigmas
            )
        })?;
        require(self.target_tol > 0.0, || "target_tol must be positive".into())?;
        require(self.max_panels >= 1, || "max_panels must be at least 1".into())
    }

    pub(crate) fn bounds(&self, w: &dyn Window) -> (f64, f64) {
        let h = self.halfwidth_sigmas * w.width();
        (w.center() - h, w.center() + h)
    }

    pub(crate) fn max_panel_width(&self, w: &dyn Window, hint: f64) -> f64 {
        let mut width = w.width() / 4.0;
        if hint != 0.0 {
            width = width.min(PI / (4.0 * hint.abs()));
        }
        width
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Quadrature {
    pub value: Complex64,
    /// Estimated absolute error.
    pub error: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureVec {
    pub values: Vec<Complex64>,
    /// Estimated absolute error, maximum over components.
    pub error: f64,
    pub evaluations: usize,
}

impl QuadratureVec {
    fn into_scalar(self) -> Quadrature {
        Quadrature {
            value: self.values[0],
            error: self.error,
            evaluations: self.evaluations,
        }
    }
}

struct Panel {
    lo: f64,
    hi: f64,
    value: Vec<Complex64>,
    error: f64,
    abs: f64,
}

// Max-heap on error; ties broken by position so the order is deterministic.
struct Ranked(Panel);

impl PartialEq for Ranked {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}
impl Eq for Ranked {}
impl PartialOrd for Ranked {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Ranked {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0
            .error
            .total_cmp(&other.0.error)
            .then_with(|| other.0.lo.total_cmp(&self.0.lo))
    }
}

fn gk15<F>(f: &mut F, dim: usize, lo: f64, hi: f64, buf: &mut [Complex64]) -> Panel
where
    F: FnMut(f64, &mut [Complex64]),
{
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    let mut k = vec![Complex64::new(0.0, 0.0); dim];
    let mut g = vec![Complex64::new(0.0, 0.0); dim];
    let mut abs = 0.0;
    for (x, wk, wg) in rule() {
        buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
        f(mid + half * x, buf);
        let mut m = 0.0f64;
        for c in 0..dim {
            k[c] += buf[c] * wk;
            if wg != 0.0 {
                g[c] += buf[c] * wg;
            }
            m = m.max(buf[c].norm());
        }
        abs += wk * m;
    }
    let mut error = 0.0f64;
    for c in 0..dim {
        k[c] *= half;
        g[c] *= half;
        error = error.max((k[c] - g[c]).norm());
    }
    Panel {
        lo,
        hi,
        value: k,
        error,
        abs: abs * half.abs(),
    }
}

/// Roundoff floor below which refinement cannot make progress.
fn roundoff_floor(abs_integral: f64) -> f64 {
    50.0 * f64::EPSILON * abs_integral
}

/// Adaptive vector-valued integral of `f` over `[lo, hi]`.
///
/// `f(x, out)` writes `dim` components. Initial panels are no wider than
/// `max_panel_width`; the panel with the largest error is bisected until the
/// summed error is at most `tol`.
pub fn integrate_interval_vec<F>(
    mut f: F,
    dim: usize,
    lo: f64,
    hi: f64,
    tol: f64,
    max_panel_width: f64,
    max_panels: usize,
) -> Result<QuadratureVec>
where
    F: FnMut(f64, &mut [Complex64]),
{
    require(lo.is_finite() && hi.is_finite() && lo <= hi, || {
        format!("invalid interval [{lo}, {hi}]")
    })?;
    require(max_panel_width > 0.0, || "panel width must be positive".into())?;
    let mut buf = vec![Complex64::new(0.0, 0.0); dim];
    let span = hi - lo;
    let n0 = ((span / max_panel_width).ceil() as usize).clamp(1, max_panels.max(1));
    let mut heap = BinaryHeap::with_capacity(n0 * 2);
    let mut evaluations = 0;
    let (mut err, mut abs) = (0.0, 0.0);
    for i in 0..n0 {
        let a = lo + span * i as f64 / n0 as f64;
        let b = if i + 1 == n0 {
            hi
        } else {
            lo + span * (i + 1) as f64 / n0 as f64
        };
        let p = gk15(&mut f, dim, a, b, &mut buf);
        evaluations += 15;
        err += p.error;
        abs += p.abs;
        heap.push(Ranked(p));
    }
    while err > tol.max(roundoff_floor(abs)) && heap.len() < max_panels {
        let Ranked(worst) = heap.pop().expect("non-empty heap");
        let mid = 0.5 * (worst.lo + worst.hi);
        if mid <= worst.lo || mid >= worst.hi {
            heap.push(Ranked(worst));
            break;
        }
        let left = gk15(&mut f, dim, worst.lo, mid, &mut buf);
        let right = gk15(&mut f, dim, mid, worst.hi, &mut buf);
        evaluations += 30;
        err += left.error + right.error - worst.error;
        abs += left.abs + right.abs - worst.abs;
        heap.push(Ranked(left));
        heap.push(Ranked(right));
    }
    // Re-sum in positional order so the result does not depend on heap history.
    let mut panels: Vec<Panel> = heap.into_iter().map(|r| r.0).collect();
    panels.sort_by(|a, b| a.lo.total_cmp(&b.lo));
    let mut values = vec![Complex64::new(0.0, 0.0); dim];
    let (mut error, mut abs) = (0.0, 0.0);
    for p in &panels {
        for c in 0..dim {
            values[c] += p.value[c];
        }
        error += p.error;
        abs += p.abs;
    }
    if values.iter().any(|v| !v.re.is_finite() || !v.im.is_finite()) {
        return Err(Error::Quadrature {
            value: values[0],
            error: f64::INFINITY,
        });
    }
    if error > tol.max(roundoff_floor(abs)) {
        return Err(Error::Quadrature {
            value: values[0],
            error,
        });
    }
    Ok(QuadratureVec {
        values,
        error,
        evaluations,
    })
}

pub fn integrate_interval<F>(
    mut f: F,
    lo: f64,
    hi: f64,
    tol: f64,
    max_panel_width: f64,
    max_panels: usize,
) -> Result<Quadrature>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_interval_vec(
        |x, out| out[0] = f(x),
        1,
        lo,
        hi,
        tol,
        max_panel_width,
        max_panels,
    )
    .map(QuadratureVec::into_scalar)
}

/// `int f(tau) dtau` over the switching window `center +- halfwidth_sigmas * width`.
///
/// The integrand is taken as given; multiply by the window inside `f`.
/// `osc_freq_hint` is the largest angular frequency of `f` on the window.
pub fn integrate_window<F>(
    mut f: F,
    sw: &dyn Window,
    spec: &WindowSpec,
    osc_freq_hint: f64,
) -> Result<Quadrature>
where
    F: FnMut(f64) -> Complex64,
{
    integrate_window_vec(|x, out| out[0] = f(x), 1, sw, spec, osc_freq_hint).map(QuadratureVec::into_scalar)
}

pub fn integrate_window_vec<F>(
    f: F,
    dim: usize,
    sw: &dyn Window,
    spec: &WindowSpec,
    osc_freq_hint: f64,
) -> Result<QuadratureVec>
where
    F: FnMut(f64, &mut [Complex64]),
{
    spec.validate()?;
    let (lo, hi) = spec.bounds(sw);
    integrate_interval_vec(
        f,
        dim,
        lo,
        hi,
        spec.target_tol,
        spec.max_panel_width(sw, osc_freq_hint),
        spec.max_panels,
    )
}

/// Tensor-product cell rule. `diagonal` integrates only the lower triangle
/// tau' <= tau of the square cell via tau' = lo + (tau - lo) u.
#[allow(clippy::too_many_arguments)]
fn cell<F>(
    f: &mut F,
    dim: usize,
    (tlo, thi): (f64, f64),
    (slo, shi): (f64, f64),
    diagonal: bool,
    buf: &mut [Complex64],
    k: &mut [Complex64],
    g: &mut [Complex64],
) -> (f64, f64)
where
    F: FnMut(f64, f64, &mut [Complex64]),
{
    let r = rule();
    let (tm, th) = (0.5 * (tlo + thi), 0.5 * (thi - tlo));
    let (sm, sh) = (0.5 * (slo + shi), 0.5 * (shi - slo));
    k.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    g.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
    let mut abs = 0.0;
    for &(xt, wkt, wgt) in &r {
        let tau = tm + th * xt;
        for &(xs, wks, wgs) in &r {
            let (taup, jac) = if diagonal {
                let u = 0.5 * (1.0 + xs);
                (tlo + (tau - tlo) * u, 0.5 * (tau - tlo))
            } else {
                (sm + sh * xs, sh)
            };
            buf.iter_mut().for_each(|z| *z = Complex64::new(0.0, 0.0));
            f(tau, taup, buf);
            let wk = wkt * wks * jac * th;
            let wg = wgt * wgs * jac * th;
            let mut m = 0.0f64;
            for c in 0..dim {
                k[c] += buf[c] * wk;
                if wg != 0.0 {
                    g[c] += buf[c] * wg;
                }
                m = m.max(buf[c].norm());
            }
            abs += wk.abs() * m;
        }
    }
    let mut err = 0.0f64;
    for c in 0..dim {
        err = err.max((k[c] - g[c]).norm());
    }
    (err, abs)
}

fn grid_sweep<F>(
    f: &mut F,
    dim: usize,
    lo: f64,
    hi: f64,
    n: usize,
    square: bool,
) -> (Vec<Complex64>, f64, f64)
where
    F: FnMut(f64, f64, &mut [Complex64]),
{
    let edge = |i: usize| {
        if i == n {
            hi
        } else {
            lo + (hi - lo) * i as f64 / n as f64
        }
    };
    let zero = Complex64::new(0.0, 0.0);
    let (mut buf, mut k, mut g) = (vec![zero; dim], vec![zero; dim], vec![zero; dim]);
    let mut total = vec![zero; dim];
    let (mut err, mut abs) = (0.0, 0.0);
    for i in 0..n {
        let ti = (edge(i), edge(i + 1));
        let jmax = if square { n } else { i + 1 };
        for j in 0..jmax {
            let sj = (edge(j), edge(j + 1));
            let diagonal = !square && i == j;
            let (e, a) = cell(f, dim, ti, sj, diagonal, &mut buf, &mut k, &mut g);
            for c in 0..dim {
                total[c] += k[c];
            }
            err += e;
            abs += a;
        }
    }
    (total, err, abs)
}

fn refine_grid<F>(
    mut f: F,
    dim: usize,
    sw: &dyn Window,
    spec: &WindowSpec,
    hint: f64,
    square: bool,
) -> Result<QuadratureVec>
where
    F: FnMut(f64, f64, &mut [Complex64]),
{
    spec.validate()?;
    let (lo, hi) = spec.bounds(sw);
    // Tensor cells start four times wider than 1-D panels (about half an
    // oscillation period each); refinement doubles the grid from there.
    let mut n = (((hi - lo) / (4.0 * spec.max_panel_width(sw, hint))).ceil() as usize).max(1);
    let cells = |n: usize| if square { n * n } else { n * (n + 1) / 2 };
    let mut evaluations = 0;
    let mut best: Option<(Vec<Complex64>, f64)> = None;
    loop {
        if cells(n) > spec.max_panels {
            let (values, error) = best.unwrap_or((vec![Complex64::new(f64::NAN, 0.0)], f64::INFINITY));
            return Err(Error::Quadrature {
                value: values[0],
                error,
            });
        }
        let (values, err, abs) = grid_sweep(&mut f, dim, lo, hi, n, square);
        evaluations += 225 * cells(n);
        if err <= spec.target_tol.max(roundoff_floor(abs)) {
            return Ok(QuadratureVec {
                values,
                error: err,
                evaluations,
            });
        }
        best = Some((values, err));
        n *= 2;
    }
}

/// `int int_{tau' <= tau} f2(tau, tau')` over the window square.
///
/// Off-diagonal cells use a tensor Gauss-Kronrod rule; diagonal cells are
/// mapped onto the unit square. The grid is doubled until the error estimate
/// meets `target_tol`. `max_panels` caps the number of cells.
pub fn integrate_triangle<F>(
    f2: F,
    sw: &dyn Window,
    spec: &WindowSpec,
    osc_freq_hint: f64,
) -> Result<Quadrature>
where
    F: Fn(f64, f64) -> Complex64,
{
    integrate_triangle_vec(|t, s, out| out[0] = f2(t, s), 1, sw, spec, osc_freq_hint)
        .map(QuadratureVec::into_scalar)
}

pub fn integrate_triangle_vec<F>(
    f2: F,
    dim: usize,
    sw: &dyn Window,
    spec: &WindowSpec,
    osc_freq_hint: f64,
) -> Result<QuadratureVec>
where
    F: FnMut(f64, f64, &mut [Complex64]),
{
    refine_grid(f2, dim, sw, spec, osc_freq_hint, false)
}

/// Full-square counterpart of [`integrate_triangle_vec`].
pub fn integrate_square_vec<F>(
    f2: F,
    dim: usize,
    sw: &dyn Window,
    spec: &WindowSpec,
    osc_freq_hint: f64,
) -> Result<QuadratureVec>
where
    F: FnMut(f64, f64, &mut [Complex64]),
{
    refine_grid(f2, dim, sw, spec, osc_freq_hint, true)
}
