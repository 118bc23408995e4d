//! Second-order perturbative evolution of the monopole detector.
//!
//! Oscillator and zero-mode contributions are computed by separate
//! operations and only added at the end; to order lambda^2 they do not
//! talk to each other when the oscillators start in the Fock vacuum.

mod coupling;
mod density;
mod estimators;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

pub use coupling::{
    coupling_g, coupling_i, mode_frequency, CouplingG, CouplingI, CouplingMethod, QuadratureCoupling,
    SpectralCoupling,
};
pub use density::{rho_osc_second, rho_zm_first, rho_zm_second, rho_zm_second_blocks, ZmSecondBlocks};
pub use estimators::{
    estimator_e_osc, estimator_e_zm, gamma_zeros, relative_strength_s, ClosedFormEstimators, EstimatorPath,
    IntegralEstimators,
};

use crate::error::Result;
use crate::matrix::Mat2;
use crate::model::{DetectorParams, DetectorState, SwitchingFunction, Trajectory, ZeroModeState};
use crate::numerics::{SumSpec, TailMode, WindowSpec};

/// Which rotating factor e^{+- i Omega tau} a quantity carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Sign {
    Plus,
    Minus,
}

impl Sign {
    pub fn value(self) -> f64 {
        match self {
            Sign::Plus => 1.0,
            Sign::Minus => -1.0,
        }
    }

    pub fn flip(self) -> Sign {
        match self {
            Sign::Plus => Sign::Minus,
            Sign::Minus => Sign::Plus,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Order {
    Lambda1,
    Lambda2,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    Osc,
    Zm,
}

/// One perturbative correction to the detector density matrix.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct DensityContribution {
    pub matrix: Mat2,
    pub order: Order,
    pub source: Source,
}

impl DensityContribution {
    pub fn trace_defect(&self) -> f64 {
        self.matrix.trace().norm()
    }

    pub fn hermiticity_defect(&self) -> f64 {
        self.matrix.hermiticity_defect()
    }
}

/// Numerical settings shared by the evolution operations.
#[derive(Clone)]
pub struct EvolutionOptions {
    pub window: WindowSpec,
    pub sum: SumSpec,
    pub coupling: Arc<dyn CouplingMethod>,
}

impl Default for EvolutionOptions {
    fn default() -> Self {
        EvolutionOptions {
            window: WindowSpec::default(),
            sum: SumSpec::default().with_tail_mode(TailMode::IntegralComparison),
            coupling: Arc::new(SpectralCoupling),
        }
    }
}

impl std::fmt::Debug for EvolutionOptions {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("EvolutionOptions")
            .field("window", &self.window)
            .field("sum", &self.sum)
            .field("coupling", &self.coupling.name())
            .finish()
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evolved {
    pub rho: Mat2,
    /// rho_zm^(1), rho_osc^(2), rho_zm^(2) in that order.
    pub parts: Vec<DensityContribution>,
}

/// rho_T = rho_0 + rho_zm^(1) + rho_osc^(2) + rho_zm^(2).
#[allow(clippy::too_many_arguments)]
pub fn evolve_density(
    rho0: &DetectorState,
    det: &DetectorParams,
    zm: &ZeroModeState,
    traj: &Trajectory,
    sw: &SwitchingFunction,
    length: f64,
    opts: &EvolutionOptions,
) -> Result<Evolved> {
    let parts = vec![
        rho_zm_first(rho0, det, zm, traj, sw, length, &opts.window)?,
        rho_osc_second(rho0, det, traj, sw, length, &opts.sum, opts.coupling.as_ref())?,
        rho_zm_second(rho0, det, zm, traj, sw, length, &opts.window)?,
    ];
    let mut rho = rho0.matrix();
    for p in &parts {
        rho += p.matrix;
    }
    Ok(Evolved { rho, parts })
}
