//! Physical parameters, zero-mode and detector states, worldlines and
//! switching functions.

use std::f64::consts::PI;

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{require, Error, Result};
use crate::matrix::Mat2;

/// Tolerance for the zero-mode moment constraints.
pub const MOMENT_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CavityParams {
    length: f64,
}

impl CavityParams {
    pub fn new(length: f64) -> Result<Self> {
        require(length.is_finite() && length > 0.0, || {
            format!("cavity length must be positive and finite, got {length}")
        })?;
        Ok(CavityParams { length })
    }

    pub fn length(&self) -> f64 {
        self.length
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorParams {
    gap: f64,
    coupling: f64,
}

impl DetectorParams {
    /// `gap` is the energy gap Omega and may have either sign.
    pub fn new(gap: f64, coupling: f64) -> Result<Self> {
        require(gap.is_finite(), || format!("gap must be finite, got {gap}"))?;
        require(coupling.is_finite() && coupling >= 0.0, || {
            format!("coupling must be non-negative, got {coupling}")
        })?;
        Ok(DetectorParams { gap, coupling })
    }

    pub fn gap(&self) -> f64 {
        self.gap
    }

    pub fn coupling(&self) -> f64 {
        self.coupling
    }

    pub fn with_gap(&self, gap: f64) -> Result<Self> {
        DetectorParams::new(gap, self.coupling)
    }

    pub fn with_coupling(&self, coupling: f64) -> Result<Self> {
        DetectorParams::new(self.gap, coupling)
    }
}

/// First and second moments of the zero-mode pair (Q, P).
///
/// Second moments are raw (not central). `<PQ>` is `conj(qp)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ZeroModeState {
    mean_q: f64,
    mean_p: f64,
    qq: f64,
    pp: f64,
    qp: Complex64,
}

impl ZeroModeState {
    pub fn new(mean_q: f64, mean_p: f64, qq: f64, pp: f64, qp: Complex64) -> Result<Self> {
        let finite = [mean_q, mean_p, qq, pp, qp.re, qp.im]
            .iter()
            .all(|v| v.is_finite());
        require(finite, || "zero-mode moments must be finite".into())?;
        require(qq > 0.0 && pp > 0.0, || {
            format!("<Q^2> and <P^2> must be positive, got {qq}, {pp}")
        })?;
        require((qp.im - 0.5).abs() <= MOMENT_TOL, || {
            format!("Im<QP> must equal 1/2, got {}", qp.im)
        })?;
        let dq = qq - mean_q * mean_q;
        let dp = pp - mean_p * mean_p;
        let cov = qp.re - mean_q * mean_p;
        let det = dq * dp - cov * cov;
        require(det >= 0.25 - MOMENT_TOL, || {
            format!("moments violate the uncertainty bound: det = {det} < 1/4")
        })?;
        Ok(ZeroModeState {
            mean_q,
            mean_p,
            qq,
            pp,
            qp: Complex64::new(qp.re, 0.5),
        })
    }

    pub fn mean_q(&self) -> f64 {
        self.mean_q
    }
    pub fn mean_p(&self) -> f64 {
        self.mean_p
    }
    pub fn qq(&self) -> f64 {
        self.qq
    }
    pub fn pp(&self) -> f64 {
        self.pp
    }
    pub fn qp(&self) -> Complex64 {
        self.qp
    }
    pub fn pq(&self) -> Complex64 {
        self.qp.conj()
    }

    /// Expectation of the zero-mode Hamiltonian P^2/(2L).
    pub fn energy(&self, length: f64) -> f64 {
        self.pp / (2.0 * length)
    }
}

/// Ground state of a zero-mode oscillator with frequency parameter `gamma`.
pub fn gaussian_zero_mode(gamma: f64) -> Result<ZeroModeState> {
    require(gamma.is_finite() && gamma > 0.0, || {
        format!("gamma must be positive, got {gamma}")
    })?;
    ZeroModeState::new(
        0.0,
        0.0,
        1.0 / (2.0 * gamma),
        gamma / 2.0,
        Complex64::new(0.0, 0.5),
    )
}

/// Qubit density matrix a|g><g| + b|g><e| + b*|e><g| + (1-a)|e><e|,
/// i.e. [[a, b], [b*, 1-a]] in the basis (|g>, |e>).
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DetectorState {
    a: f64,
    b: Complex64,
}

impl DetectorState {
    pub fn new(a: f64, b: Complex64) -> Result<Self> {
        require(a.is_finite() && b.re.is_finite() && b.im.is_finite(), || {
            "detector state entries must be finite".into()
        })?;
        let r = (a - 0.5).powi(2) + b.norm_sqr();
        require(r <= 0.25 + 1e-12, || {
            format!("detector state is not positive: (a-1/2)^2+|b|^2 = {r} > 1/4")
        })?;
        Ok(DetectorState { a, b })
    }

    pub fn ground() -> Self {
        DetectorState {
            a: 1.0,
            b: Complex64::new(0.0, 0.0),
        }
    }

    pub fn a(&self) -> f64 {
        self.a
    }
    pub fn b(&self) -> Complex64 {
        self.b
    }

    pub fn matrix(&self) -> Mat2 {
        Mat2::new(
            Complex64::new(self.a, 0.0),
            self.b,
            self.b.conj(),
            Complex64::new(1.0 - self.a, 0.0),
        )
    }
}

/// A smooth switching window given by its values and Fourier transform.
///
/// The transform convention is `hat(w) = int chi(tau) e^{-i w tau} dtau`.
pub trait Window: Send + Sync {
    fn value(&self, tau: f64) -> f64;
    fn fourier(&self, omega: f64) -> Complex64;
    fn center(&self) -> f64;
    /// Characteristic width; quadrature panels and windows scale with it.
    fn width(&self) -> f64;
    /// `int int_{tau' < tau} chi(tau) chi(tau') e^{-i w (tau - tau')}`, if known
    /// in closed form.
    fn ordered_transform(&self, _w: f64) -> Option<Complex64> {
        None
    }
}

/// Gaussian switching chi(tau) = pi^{-1/4} sigma^{-1/2} e^{-(tau-tau0)^2/(2 sigma^2)},
/// normalised so that int chi^2 = 1.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SwitchingFunction {
    sigma: f64,
    tau0: f64,
}

impl SwitchingFunction {
    pub fn new(sigma: f64, tau0: f64) -> Result<Self> {
        require(sigma.is_finite() && sigma > 0.0, || {
            format!("sigma must be positive, got {sigma}")
        })?;
        require(tau0.is_finite(), || format!("tau0 must be finite, got {tau0}"))?;
        Ok(SwitchingFunction { sigma, tau0 })
    }

    pub fn sigma(&self) -> f64 {
        self.sigma
    }
    pub fn tau0(&self) -> f64 {
        self.tau0
    }

    pub fn with_sigma(&self, sigma: f64) -> Result<Self> {
        SwitchingFunction::new(sigma, self.tau0)
    }
}

impl Window for SwitchingFunction {
    fn value(&self, tau: f64) -> f64 {
        let s = (tau - self.tau0) / self.sigma;
        PI.powf(-0.25) / self.sigma.sqrt() * (-0.5 * s * s).exp()
    }

    fn fourier(&self, omega: f64) -> Complex64 {
        let mag = PI.powf(0.25)
            * (2.0 * self.sigma).sqrt()
            * (-0.5 * self.sigma * self.sigma * omega * omega).exp();
        Complex64::from_polar(mag, -omega * self.tau0)
    }

    fn center(&self) -> f64 {
        self.tau0
    }

    fn width(&self) -> f64 {
        self.sigma
    }

    /// sqrt(pi) sigma e^{-sigma^2 w^2} - 2 i sigma D(sigma w), independent of tau0.
    fn ordered_transform(&self, w: f64) -> Option<Complex64> {
        let x = self.sigma * w;
        Some(Complex64::new(
            PI.sqrt() * self.sigma * (-x * x).exp(),
            -2.0 * self.sigma * crate::numerics::dawson(x),
        ))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Trajectory {
    /// t = tau cosh(beta), x = tau sinh(beta).
    Inertial { rapidity: f64 },
    /// t = sinh(a tau)/a, x = cosh(a tau)/a.
    Accelerated { acceleration: f64 },
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WorldPoint {
    pub t: f64,
    pub x: f64,
    pub dt_dtau: f64,
}

impl Trajectory {
    pub fn static_detector() -> Self {
        Trajectory::Inertial { rapidity: 0.0 }
    }

    pub fn inertial(rapidity: f64) -> Result<Self> {
        let t = Trajectory::Inertial { rapidity };
        t.validate()?;
        Ok(t)
    }

    pub fn accelerated(acceleration: f64) -> Result<Self> {
        let t = Trajectory::Accelerated { acceleration };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        match *self {
            Trajectory::Inertial { rapidity } => require(rapidity.is_finite(), || {
                format!("rapidity must be finite, got {rapidity}")
            }),
            Trajectory::Accelerated { acceleration } => {
                require(acceleration.is_finite() && acceleration > 0.0, || {
                    format!("acceleration must be positive, got {acceleration}")
                })
            }
        }
    }

    pub fn is_inertial(&self) -> bool {
        matches!(self, Trajectory::Inertial { .. })
    }

    pub(crate) fn rapidity(&self) -> Result<f64> {
        match *self {
            Trajectory::Inertial { rapidity } => Ok(rapidity),
            Trajectory::Accelerated { .. } => {
                Err(Error::domain("this operation requires an inertial trajectory"))
            }
        }
    }

    pub fn eval(&self, tau: f64) -> WorldPoint {
        worldline_eval(self, tau)
    }
}

pub fn worldline_eval(traj: &Trajectory, tau: f64) -> WorldPoint {
    match *traj {
        Trajectory::Inertial { rapidity } => WorldPoint {
            t: tau * rapidity.cosh(),
            x: tau * rapidity.sinh(),
            dt_dtau: rapidity.cosh(),
        },
        Trajectory::Accelerated { acceleration: a } => WorldPoint {
            t: (a * tau).sinh() / a,
            x: (a * tau).cosh() / a,
            dt_dtau: (a * tau).cosh(),
        },
    }
}
