//! Named numerical strategies, selectable at run time.

use std::collections::BTreeMap;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::evolution::{
    ClosedFormEstimators, CouplingMethod, EstimatorPath, IntegralEstimators, QuadratureCoupling,
    SpectralCoupling,
};
use crate::numerics::WindowSpec;
use crate::response::{
    MinkowskiContour, ModeIntegral, RealAxisContour, RealLineModeIntegral, ShiftedContour,
    ShiftedContourModeIntegral,
};

/// Strategies of one family, keyed by name.
pub struct Registry<T: ?Sized> {
    family: &'static str,
    entries: BTreeMap<String, Arc<T>>,
}

impl<T: ?Sized> Registry<T> {
    pub fn new(family: &'static str) -> Self {
        Registry {
            family,
            entries: BTreeMap::new(),
        }
    }

    /// Adds or replaces a strategy.
    pub fn register(&mut self, name: impl Into<String>, strategy: Arc<T>) -> &mut Self {
        self.entries.insert(name.into(), strategy);
        self
    }

    pub fn get(&self, name: &str) -> Result<Arc<T>> {
        self.entries
            .get(name)
            .cloned()
            .ok_or_else(|| Error::UnknownStrategy {
                family: self.family,
                name: name.to_string(),
                known: self.names().join(", "),
            })
    }

    pub fn names(&self) -> Vec<&str> {
        self.entries.keys().map(String::as_str).collect()
    }

    pub fn family(&self) -> &'static str {
        self.family
    }
}

/// All built-in families. Quadrature-based strategies use `window`.
pub struct Registries {
    pub coupling: Registry<dyn CouplingMethod>,
    pub estimator: Registry<dyn EstimatorPath>,
    pub mode_integral: Registry<dyn ModeIntegral>,
    pub minkowski: Registry<dyn MinkowskiContour>,
}

impl Registries {
    pub fn builtin(window: WindowSpec) -> Self {
        let mut coupling: Registry<dyn CouplingMethod> = Registry::new("coupling");
        coupling
            .register("quadrature", Arc::new(QuadratureCoupling { window }))
            .register("spectral", Arc::new(SpectralCoupling));
        let mut estimator: Registry<dyn EstimatorPath> = Registry::new("estimator");
        estimator
            .register("closed-form", Arc::new(ClosedFormEstimators))
            .register("integral", Arc::new(IntegralEstimators { window }));
        let mut mode_integral: Registry<dyn ModeIntegral> = Registry::new("mode-integral");
        mode_integral
            .register("shifted-contour", Arc::new(ShiftedContourModeIntegral))
            .register("real-line", Arc::new(RealLineModeIntegral));
        let mut minkowski: Registry<dyn MinkowskiContour> = Registry::new("minkowski");
        minkowski
            .register("shifted", Arc::new(ShiftedContour))
            .register("real-axis", Arc::new(RealAxisContour));
        Registries {
            coupling,
            estimator,
            mode_integral,
            minkowski,
        }
    }

    pub fn resolve(&self, names: &MethodNames) -> Result<Methods> {
        Ok(Methods {
            coupling: self.coupling.get(&names.coupling)?,
            estimator: self.estimator.get(&names.estimator)?,
            mode_integral: self.mode_integral.get(&names.mode_integral)?,
            minkowski: self.minkowski.get(&names.minkowski)?,
        })
    }
}

/// Strategy names as they appear in configuration files.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MethodNames {
    pub coupling: String,
    pub estimator: String,
    pub mode_integral: String,
    pub minkowski: String,
}

impl Default for MethodNames {
    fn default() -> Self {
        MethodNames {
            coupling: "spectral".into(),
            estimator: "closed-form".into(),
            mode_integral: "shifted-contour".into(),
            minkowski: "shifted".into(),
        }
    }
}

/// One resolved strategy per family.
#[derive(Clone)]
pub struct Methods {
    pub coupling: Arc<dyn CouplingMethod>,
    pub estimator: Arc<dyn EstimatorPath>,
    pub mode_integral: Arc<dyn ModeIntegral>,
    pub minkowski: Arc<dyn MinkowskiContour>,
}

impl std::fmt::Debug for Methods {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("Methods")
            .field("coupling", &self.coupling.name())
            .field("estimator", &self.estimator.name())
            .field("mode_integral", &self.mode_integral.name())
            .field("minkowski", &self.minkowski.name())
            .finish()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn defaults_resolve_and_names_round_trip() {
        let reg = Registries::builtin(WindowSpec::default());
        let m = reg.resolve(&MethodNames::default()).unwrap();
        assert_eq!(m.coupling.name(), "spectral");
        assert_eq!(m.minkowski.name(), "shifted");
        for name in reg.mode_integral.names() {
            assert_eq!(reg.mode_integral.get(name).unwrap().name(), name);
        }
        for name in reg.estimator.names() {
            assert_eq!(reg.estimator.get(name).unwrap().name(), name);
        }
    }

    #[test]
    fn unknown_name_lists_alternatives() {
        let reg = Registries::builtin(WindowSpec::default());
        let names = MethodNames {
            coupling: "magic".into(),
            ..MethodNames::default()
        };
        match reg.resolve(&names) {
            Err(Error::UnknownStrategy { family, known, .. }) => {
                assert_eq!(family, "coupling");
                assert!(known.contains("quadrature") && known.contains("spectral"));
            }
            other => panic!("unexpected {other:?}"),
        }
    }
}
