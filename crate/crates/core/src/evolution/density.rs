//! Oscillator and zero-mode contributions to the detector density matrix.

use num_complex::Complex64;

use super::{CouplingMethod, DensityContribution, Order, Sign, Source};
use crate::error::{Error, Result};
use crate::evolution::coupling::mode_frequency;
use crate::matrix::Mat2;
use crate::model::{
    worldline_eval, DetectorParams, DetectorState, SwitchingFunction, Trajectory, Window, ZeroModeState,
};
use crate::numerics::{integrate_triangle_vec, integrate_window_vec, mode_sum_array, SumSpec, WindowSpec};

/// Number of modes that must be summed before the tail test is trusted:
/// past the resonance |Omega| = w_n plus a few spectral widths.
fn resonance_terms(det: &DetectorParams, sw: &SwitchingFunction, length: f64, rapidity: f64) -> usize {
    let k_min = mode_frequency(1, length, rapidity.abs());
    let peak = det.gap().abs() / k_min;
    (peak + 8.0 / (sw.sigma() * k_min)).ceil() as usize + 2
}

/// Order lambda^2 oscillator contribution, summed over n != 0.
pub fn rho_osc_second(
    rho0: &DetectorState,
    det: &DetectorParams,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
    sum: &SumSpec,
    method: &dyn CouplingMethod,
) -> Result<DensityContribution> {
    let beta = traj.rapidity()?;
    let (a, b) = (rho0.a(), rho0.b());
    let mut failure: Option<Error> = None;
    let term = |n: i64| -> Result<[Complex64; 4]> {
        let ip = method.coupling_i(n, Sign::Plus, det, traj, sw, length)?;
        let im = method.coupling_i(n, Sign::Minus, det, traj, sw, length)?;
        let gp = method.coupling_g(n, Sign::Plus, det, traj, sw, length)?;
        let gm = method.coupling_g(n, Sign::Minus, det, traj, sw, length)?;
        let (p2, m2) = (ip.norm_sqr(), im.norm_sqr());
        Ok([
            Complex64::new((1.0 - a) * m2 - a * p2, 0.0),
            b.conj() * im * ip.conj() + b * (gm + gp.conj()),
            b * im.conj() * ip + b.conj() * (gp + gm.conj()),
            Complex64::new(a * p2 - (1.0 - a) * m2, 0.0),
        ])
    };
    let spec = sum.with_min_terms(
        sum.min_terms
            .max(resonance_terms(det, sw, length, beta))
            .min(sum.max_terms),
    );
    let r = mode_sum_array(
        |n| {
            let n = n as i64;
            let zero = [Complex64::new(0.0, 0.0); 4];
            match (term(n), term(-n)) {
                (Ok(x), Ok(y)) => [x[0] + y[0], x[1] + y[1], x[2] + y[2], x[3] + y[3]],
                (Err(e), _) | (_, Err(e)) => {
                    failure.get_or_insert(e);
                    zero
                }
            }
        },
        &spec,
    );
    if let Some(e) = failure {
        return Err(e);
    }
    let v = r?.values;
    Ok(DensityContribution {
        matrix: Mat2::new(v[0], v[1], v[2], v[3]),
        order: Order::Lambda2,
        source: Source::Osc,
    })
}

/// Frequency hint and window for integrands carrying powers of t(tau).
///
/// Along an accelerated worldline t grows like e^{a |tau|}, which moves the
/// peak of chi t by up to a sigma^2; widen the window accordingly.
fn zm_window(traj: &Trajectory, sw: &SwitchingFunction, window: &WindowSpec) -> (f64, WindowSpec) {
    match *traj {
        Trajectory::Inertial { .. } => (0.0, *window),
        Trajectory::Accelerated { acceleration } => (
            acceleration,
            window.with_halfwidth(window.halfwidth_sigmas + 2.0 * acceleration * sw.sigma()),
        ),
    }
}

/// Order lambda contribution; vanishes for states with zero means.
pub fn rho_zm_first(
    rho0: &DetectorState,
    det: &DetectorParams,
    zm: &ZeroModeState,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
    window: &WindowSpec,
) -> Result<DensityContribution> {
    traj.validate()?;
    let (a, b, om, lam) = (rho0.a(), rho0.b(), det.gap(), det.coupling());
    let (mq, mp) = (zm.mean_q(), zm.mean_p());
    let (rate, window) = zm_window(traj, sw, window);
    let hint = om.abs() + rate;
    // c[0] = int chi (<Q> + <P> t/L) e^{-i Omega tau}, c[1] the same with e^{+i Omega tau}
    let q = integrate_window_vec(
        |tau, out| {
            let t = worldline_eval(traj, tau).t;
            let m = sw.value(tau) * (mq + mp * t / length);
            out[0] = Complex64::from_polar(m, -om * tau);
            out[1] = Complex64::from_polar(m, om * tau);
        },
        2,
        sw,
        &window,
        hint,
    )?;
    let (cm, cp) = (q.values[0], q.values[1]);
    let i = Complex64::i();
    let matrix = Mat2::new(
        Complex64::new(-lam * 2.0 * (i * b.conj() * cm).re, 0.0),
        -lam * i * (1.0 - 2.0 * a) * cm,
        -lam * i * (2.0 * a - 1.0) * cp,
        Complex64::new(-lam * 2.0 * (i * b * cp).re, 0.0),
    );
    Ok(DensityContribution {
        matrix,
        order: Order::Lambda1,
        source: Source::Zm,
    })
}

/// The three order-lambda^2 zero-mode blocks, kept separate.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ZmSecondBlocks {
    /// Tr_zm(U1 rho U1^dagger), a full-square integral.
    pub square: Mat2,
    /// Tr_zm(U2 rho), a time-ordered integral.
    pub ordered: Mat2,
    /// Its Hermitian conjugate partner Tr_zm(rho U2^dagger).
    pub ordered_conj: Mat2,
}

impl ZmSecondBlocks {
    pub fn total(&self) -> Mat2 {
        self.square + self.ordered + self.ordered_conj
    }
}

/// Kernel weights for <phi(tau) phi(tau')> expanded in t^p t'^q:
/// [<Q^2>, <QP>/L (t'), <PQ>/L (t), <P^2>/L^2 (t t')].
fn kernel_forward(zm: &ZeroModeState, length: f64) -> [Complex64; 4] {
    [
        Complex64::new(zm.qq(), 0.0),
        zm.qp() / length,
        zm.pq() / length,
        Complex64::new(zm.pp() / (length * length), 0.0),
    ]
}

/// Same for <phi(tau') phi(tau)>, whose t' and t coefficients swap.
fn kernel_backward(zm: &ZeroModeState, length: f64) -> [Complex64; 4] {
    let k = kernel_forward(zm, length);
    [k[0], k[2], k[1], k[3]]
}

/// sum_k kernel[k] * moment[p_k][q_k], with moments indexed [p][q] for t^p t'^q.
fn contract(kernel: &[Complex64; 4], m: &[[Complex64; 2]; 2]) -> Complex64 {
    kernel[0] * m[0][0] + kernel[1] * m[0][1] + kernel[2] * m[1][0] + kernel[3] * m[1][1]
}

/// Evaluates the three blocks of the order lambda^2 zero-mode contribution.
///
/// The square block is lambda^2 int int chi chi <phi(tau') phi(tau)> mu(tau) rho mu(tau');
/// the ordered blocks are -lambda^2 int int_{tau'<tau} with <phi(tau) phi(tau')> and its
/// conjugate.
pub fn rho_zm_second_blocks(
    rho0: &DetectorState,
    det: &DetectorParams,
    zm: &ZeroModeState,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
    window: &WindowSpec,
) -> Result<ZmSecondBlocks> {
    traj.validate()?;
    let (a, b, om) = (rho0.a(), rho0.b(), det.gap());
    let lam2 = det.coupling().powi(2);
    let (rate, window) = zm_window(traj, sw, window);
    let hint = om.abs() + rate;

    // A[s][p] = int chi t^p e^{i s Omega tau}, s = 0 for minus, 1 for plus
    let single = integrate_window_vec(
        |tau, out| {
            let t = worldline_eval(traj, tau).t;
            let x = sw.value(tau);
            let em = Complex64::from_polar(x, -om * tau);
            let ep = Complex64::from_polar(x, om * tau);
            out[0] = em;
            out[1] = em * t;
            out[2] = ep;
            out[3] = ep * t;
        },
        4,
        sw,
        &window,
        hint,
    )?
    .values;
    let am = [single[0], single[1]];
    let ap = [single[2], single[3]];
    let outer =
        |f: &[Complex64; 2], g: &[Complex64; 2]| [[f[0] * g[0], f[0] * g[1]], [f[1] * g[0], f[1] * g[1]]];

    // T[s][p][q] = int int_{tau'<tau} chi chi t^p t'^q e^{-i s Omega (tau - tau')},
    // s = 0 for e^{-i Omega (tau-tau')}, 1 for e^{+i Omega (tau-tau')}
    let tri = integrate_triangle_vec(
        |tau, taup, out| {
            let t = worldline_eval(traj, tau).t;
            let tp = worldline_eval(traj, taup).t;
            let w = sw.value(tau) * sw.value(taup);
            let e = Complex64::from_polar(w, -om * (tau - taup));
            let ec = Complex64::from_polar(w, om * (tau - taup));
            for (s, ph) in [e, ec].into_iter().enumerate() {
                out[4 * s] = ph;
                out[4 * s + 1] = ph * tp;
                out[4 * s + 2] = ph * t;
                out[4 * s + 3] = ph * t * tp;
            }
        },
        8,
        sw,
        &window,
        hint,
    )?
    .values;
    let tmat = |s: usize| [[tri[4 * s], tri[4 * s + 1]], [tri[4 * s + 2], tri[4 * s + 3]]];
    let (t_minus, t_plus) = (tmat(0), tmat(1)); // e^{-i Omega D}, e^{+i Omega D}

    let kf = kernel_forward(zm, length);
    let kb = kernel_backward(zm, length);

    let square = Mat2::new(
        (1.0 - a) * contract(&kb, &outer(&am, &ap)),
        b.conj() * contract(&kb, &outer(&am, &am)),
        b * contract(&kb, &outer(&ap, &ap)),
        a * contract(&kb, &outer(&ap, &am)),
    ) * lam2;

    let ordered = Mat2::new(
        a * contract(&kf, &t_minus),
        b * contract(&kf, &t_minus),
        b.conj() * contract(&kf, &t_plus),
        (1.0 - a) * contract(&kf, &t_plus),
    ) * (-lam2);

    let ordered_conj = Mat2::new(
        a * contract(&kb, &t_plus),
        b * contract(&kb, &t_minus),
        b.conj() * contract(&kb, &t_plus),
        (1.0 - a) * contract(&kb, &t_minus),
    ) * (-lam2);

    Ok(ZmSecondBlocks {
        square,
        ordered,
        ordered_conj,
    })
}

/// Order lambda^2 zero-mode contribution (sum of the three blocks).
pub fn rho_zm_second(
    rho0: &DetectorState,
    det: &DetectorParams,
    zm: &ZeroModeState,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
    window: &WindowSpec,
) -> Result<DensityContribution> {
    let blocks = rho_zm_second_blocks(rho0, det, zm, traj, sw, length, window)?;
    Ok(DensityContribution {
        matrix: blocks.total(),
        order: Order::Lambda2,
        source: Source::Zm,
    })
}
