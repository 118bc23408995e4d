//! Scenario files: a single JSON document describing one computation.

use std::path::PathBuf;

use cavity_udw_core::evolution::{EvolutionOptions, Sign};
use cavity_udw_core::model::{
    gaussian_zero_mode, CavityParams, DetectorParams, DetectorState, SwitchingFunction, Trajectory,
    ZeroModeState,
};
use cavity_udw_core::numerics::{SumSpec, TailMode, WindowSpec};
use cavity_udw_core::registry::{MethodNames, Methods, Registries};
use cavity_udw_core::response::ResponseOptions;
use cavity_udw_core::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Kind {
    Evolve,
    Response,
    Sweep,
}

/// What each point of a run computes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Quantity {
    /// Density matrix after the interaction, with its parts.
    Evolve,
    /// Oscillator and zero-mode response, inertial or accelerated.
    Response,
    /// S = |E_zm| / |E_osc| for a static detector.
    RelativeStrength,
    /// Z_zm = F_zm / F_osc for an accelerated detector.
    RatioZmOsc,
    /// Minkowski-vacuum response of an accelerated detector.
    Minkowski,
    /// |F_Mink - F_osc| / F_Mink for an accelerated detector.
    MinkowskiGap,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Cavity {
    pub length: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Detector {
    pub gap: f64,
    #[serde(default = "one")]
    pub coupling: f64,
}

fn one() -> f64 {
    1.0
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case", deny_unknown_fields)]
pub enum ZeroMode {
    /// <Q^2> = 1/(2 gamma), <P^2> = gamma/2, zero means.
    Gaussian { gamma: f64 },
    /// Raw second moments; Im <QP> is fixed at 1/2.
    Moments {
        #[serde(default)]
        mean_q: f64,
        #[serde(default)]
        mean_p: f64,
        qq: f64,
        pp: f64,
        #[serde(default)]
        qp_re: f64,
    },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Switching {
    pub sigma: f64,
    #[serde(default)]
    pub tau0: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct InitialState {
    /// Ground-state population.
    pub a: f64,
    /// Coherence <g|rho|e> as [re, im].
    #[serde(default)]
    pub b: [f64; 2],
}

impl Default for InitialState {
    fn default() -> Self {
        InitialState {
            a: 1.0,
            b: [0.0, 0.0],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Estimator {
    #[serde(default = "plus")]
    pub sign: Sign,
}

fn plus() -> Sign {
    Sign::Plus
}

impl Default for Estimator {
    fn default() -> Self {
        Estimator { sign: Sign::Plus }
    }
}

/// Scalar parameters a sweep can vary.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Axis {
    Length,
    Gap,
    Coupling,
    Gamma,
    Pp,
    Sigma,
    Tau0,
    Rapidity,
    Acceleration,
}

impl Axis {
    pub fn name(self) -> &'static str {
        match self {
            Axis::Length => "length",
            Axis::Gap => "gap",
            Axis::Coupling => "coupling",
            Axis::Gamma => "gamma",
            Axis::Pp => "pp",
            Axis::Sigma => "sigma",
            Axis::Tau0 => "tau0",
            Axis::Rapidity => "rapidity",
            Axis::Acceleration => "acceleration",
        }
    }

    pub fn unit(self) -> &'static str {
        match self {
            Axis::Length | Axis::Sigma | Axis::Tau0 => "length",
            Axis::Gap | Axis::Acceleration => "1/length",
            Axis::Coupling | Axis::Gamma | Axis::Pp | Axis::Rapidity => "1",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Sweep {
    pub axis: Axis,
    pub values: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Format {
    Csv,
    Json,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Output {
    pub path: PathBuf,
    #[serde(default = "csv")]
    pub format: Format,
}

fn csv() -> Format {
    Format::Csv
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Numerics {
    /// Target for integrals (absolute) and mode sums (relative).
    pub tol: f64,
    pub max_terms: usize,
    pub halfwidth_sigmas: f64,
    pub max_panels: usize,
    /// Terms summed directly before the integral tail in slowly converging sums.
    pub direct_terms: usize,
}

impl Default for Numerics {
    fn default() -> Self {
        Numerics {
            tol: 1e-10,
            max_terms: 100_000,
            halfwidth_sigmas: 8.0,
            max_panels: 20_000,
            direct_terms: 256,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct Scenario {
    pub kind: Kind,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub quantity: Option<Quantity>,
    pub cavity: Cavity,
    pub detector: Detector,
    pub zero_mode: ZeroMode,
    #[serde(default = "static_detector")]
    pub trajectory: Trajectory,
    pub switching: Switching,
    #[serde(default)]
    pub initial_state: InitialState,
    #[serde(default)]
    pub estimator: Estimator,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub sweep: Option<Sweep>,
    pub output: Output,
    #[serde(default)]
    pub numerics: Numerics,
    #[serde(default)]
    pub methods: MethodNames,
}

fn static_detector() -> Trajectory {
    Trajectory::static_detector()
}

/// Validated physics inputs for one evaluation point.
#[derive(Debug, Clone)]
pub struct Physics {
    pub length: f64,
    pub detector: DetectorParams,
    pub zero_mode: ZeroModeState,
    /// Set when the zero mode is the Gaussian family.
    pub gamma: Option<f64>,
    pub trajectory: Trajectory,
    pub switching: SwitchingFunction,
    pub initial: DetectorState,
    pub sign: Sign,
}

/// Numerical settings resolved from the scenario and command-line overrides.
#[derive(Debug, Clone)]
pub struct Settings {
    pub window: WindowSpec,
    pub evolution: EvolutionOptions,
    pub estimator_sum: SumSpec,
    pub response: ResponseOptions,
    pub methods: Methods,
}

fn field<T>(path: &str, r: cavity_udw_core::Result<T>) -> Result<T, CliError> {
    r.map_err(|e| CliError::Field {
        field: path.to_string(),
        message: e.to_string(),
    })
}

fn finite(path: &str, v: f64) -> Result<(), CliError> {
    if v.is_finite() {
        Ok(())
    } else {
        Err(CliError::Field {
            field: path.to_string(),
            message: format!("must be finite, got {v}"),
        })
    }
}

impl Scenario {
    pub fn parse(text: &str) -> Result<Scenario, CliError> {
        let s: Scenario = serde_json::from_str(text).map_err(|e| CliError::Parse {
            line: e.line(),
            column: e.column(),
            message: e.to_string(),
        })?;
        s.check_shape()?;
        Ok(s)
    }

    /// The quantity computed at each point.
    pub fn quantity(&self) -> Quantity {
        match (self.kind, self.quantity) {
            (_, Some(q)) => q,
            (Kind::Evolve, None) => Quantity::Evolve,
            (_, None) => Quantity::Response,
        }
    }

    fn check_shape(&self) -> Result<(), CliError> {
        let bad = |field: &str, message: &str| {
            Err(CliError::Field {
                field: field.into(),
                message: message.into(),
            })
        };
        match (self.kind, &self.sweep) {
            (Kind::Sweep, None) => return bad("sweep", "required when kind is \"sweep\""),
            (Kind::Sweep, Some(s)) if s.values.is_empty() => return bad("sweep.values", "must not be empty"),
            (Kind::Evolve | Kind::Response, Some(_)) => {
                return bad("sweep", "only allowed when kind is \"sweep\"")
            }
            _ => {}
        }
        match (self.kind, self.quantity()) {
            (Kind::Evolve, q) if q != Quantity::Evolve => {
                return bad("quantity", "kind \"evolve\" computes the density matrix only")
            }
            (Kind::Response, Quantity::Evolve) => {
                return bad("quantity", "use kind \"evolve\" for the density matrix")
            }
            _ => {}
        }
        if let Some(s) = &self.sweep {
            for (i, v) in s.values.iter().enumerate() {
                finite(&format!("sweep.values[{i}]"), *v)?;
            }
            if matches!(s.axis, Axis::Gamma) && !matches!(self.zero_mode, ZeroMode::Gaussian { .. }) {
                return bad("sweep.axis", "\"gamma\" needs a gaussian zero_mode");
            }
        }
        // resolve every point once so that errors surface before any computation
        for v in self.axis_values() {
            self.physics(v)?;
        }
        self.settings(None, None)?;
        Ok(())
    }

    /// Sweep values, or a single `None` for unswept runs.
    pub fn axis_values(&self) -> Vec<Option<f64>> {
        match &self.sweep {
            Some(s) => s.values.iter().map(|&v| Some(v)).collect(),
            None => vec![None],
        }
    }

    /// Physics inputs with the sweep axis (if any) set to `value`.
    pub fn physics(&self, value: Option<f64>) -> Result<Physics, CliError> {
        let mut s = self.clone();
        if let (Some(v), Some(sweep)) = (value, &self.sweep) {
            match sweep.axis {
                Axis::Length => s.cavity.length = v,
                Axis::Gap => s.detector.gap = v,
                Axis::Coupling => s.detector.coupling = v,
                Axis::Gamma => {
                    if let ZeroMode::Gaussian { gamma } = &mut s.zero_mode {
                        *gamma = v;
                    }
                }
                Axis::Pp => match &mut s.zero_mode {
                    ZeroMode::Gaussian { .. } => {
                        // keep the state minimal: <Q^2> = 1/(4 pp)
                        s.zero_mode = ZeroMode::Moments {
                            mean_q: 0.0,
                            mean_p: 0.0,
                            qq: 0.25 / v,
                            pp: v,
                            qp_re: 0.0,
                        }
                    }
                    ZeroMode::Moments { pp, .. } => *pp = v,
                },
                Axis::Sigma => s.switching.sigma = v,
                Axis::Tau0 => s.switching.tau0 = v,
                Axis::Rapidity => match &mut s.trajectory {
                    Trajectory::Inertial { rapidity } => *rapidity = v,
                    Trajectory::Accelerated { .. } => {
                        return Err(CliError::Field {
                            field: "sweep.axis".into(),
                            message: "\"rapidity\" needs an inertial trajectory".into(),
                        })
                    }
                },
                Axis::Acceleration => match &mut s.trajectory {
                    Trajectory::Accelerated { acceleration } => *acceleration = v,
                    Trajectory::Inertial { .. } => {
                        return Err(CliError::Field {
                            field: "sweep.axis".into(),
                            message: "\"acceleration\" needs an accelerated trajectory".into(),
                        })
                    }
                },
            }
        }
        s.resolve_physics()
    }

    fn resolve_physics(&self) -> Result<Physics, CliError> {
        field("cavity", CavityParams::new(self.cavity.length))?;
        let detector = field(
            "detector",
            DetectorParams::new(self.detector.gap, self.detector.coupling),
        )?;
        let (zero_mode, gamma) = match self.zero_mode {
            ZeroMode::Gaussian { gamma } => {
                (field("zero_mode.gamma", gaussian_zero_mode(gamma))?, Some(gamma))
            }
            ZeroMode::Moments {
                mean_q,
                mean_p,
                qq,
                pp,
                qp_re,
            } => (
                field(
                    "zero_mode",
                    ZeroModeState::new(mean_q, mean_p, qq, pp, Complex64::new(qp_re, 0.5)),
                )?,
                None,
            ),
        };
        field("trajectory", self.trajectory.validate())?;
        let switching = field(
            "switching",
            SwitchingFunction::new(self.switching.sigma, self.switching.tau0),
        )?;
        let [re, im] = self.initial_state.b;
        let initial = field(
            "initial_state",
            DetectorState::new(self.initial_state.a, Complex64::new(re, im)),
        )?;
        let q = self.quantity();
        let need = |cond: bool, f: &str, m: &str| {
            if cond {
                Ok(())
            } else {
                Err(CliError::Field {
                    field: f.into(),
                    message: m.into(),
                })
            }
        };
        match q {
            Quantity::RelativeStrength => {
                need(
                    gamma.is_some(),
                    "zero_mode",
                    "relative_strength needs a gaussian zero_mode",
                )?;
                need(
                    self.trajectory == Trajectory::static_detector(),
                    "trajectory",
                    "relative_strength is defined for the static detector",
                )?;
            }
            Quantity::RatioZmOsc | Quantity::Minkowski | Quantity::MinkowskiGap => need(
                !self.trajectory.is_inertial(),
                "trajectory",
                "this quantity needs an accelerated trajectory",
            )?,
            Quantity::Evolve => need(
                self.trajectory.is_inertial(),
                "trajectory",
                "evolution supports inertial trajectories only",
            )?,
            Quantity::Response => {}
        }
        Ok(Physics {
            length: self.cavity.length,
            detector,
            zero_mode,
            gamma,
            trajectory: self.trajectory,
            switching,
            initial,
            sign: self.estimator.sign,
        })
    }

    /// Numerical settings, with optional command-line overrides.
    pub fn settings(&self, tol: Option<f64>, max_terms: Option<usize>) -> Result<Settings, CliError> {
        Settings::new(&self.numerics, &self.methods, tol, max_terms)
    }
}

impl Settings {
    pub fn new(
        numerics: &Numerics,
        names: &MethodNames,
        tol: Option<f64>,
        max_terms: Option<usize>,
    ) -> Result<Settings, CliError> {
        let n = numerics;
        let tol = tol.unwrap_or(n.tol);
        let max_terms = max_terms.unwrap_or(n.max_terms);
        if !(tol > 0.0 && tol < 1.0) {
            return Err(CliError::Field {
                field: "numerics.tol".into(),
                message: format!("must lie in (0, 1), got {tol}"),
            });
        }
        let window = WindowSpec {
            halfwidth_sigmas: n.halfwidth_sigmas,
            target_tol: tol,
            max_panels: n.max_panels,
        };
        field("numerics", window.validate())?;
        let sum = SumSpec {
            abs_tol: tol,
            rel_tol: 0.0,
            max_terms,
            tail_mode: TailMode::IntegralComparison,
            min_terms: 1,
        };
        field("numerics.max_terms", sum.validate())?;
        let relative = SumSpec::relative(tol, max_terms, TailMode::GeometricBound);
        let methods = field("methods", Registries::builtin(window).resolve(names))?;
        Ok(Settings {
            window,
            evolution: EvolutionOptions {
                window,
                sum,
                coupling: methods.coupling.clone(),
            },
            estimator_sum: relative,
            response: ResponseOptions {
                window,
                sum: relative,
                direct_terms: n.direct_terms.max(16),
                mode_integral: methods.mode_integral.clone(),
                minkowski: methods.minkowski.clone(),
            },
            methods,
        })
    }
}
