//! Scenario JSON schema and resolution into validated pipeline inputs.

use conic_qm::cone::{make_hermitian_quantity, make_rotation_quantity};
use conic_qm::linalg::{ComplexMatrix, RealMatrix};
use conic_qm::{ConeKind, ConeModel, Error, PhysicalQuantity, StateVector};
use num_complex::Complex64;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum RouteSpec {
    Spectral,
    Numeric,
    Both,
}

fn default_route() -> RouteSpec {
    RouteSpec::Both
}

fn default_epsilons() -> Vec<f64> {
    vec![1.0, 0.1, 0.01]
}

fn default_nodes() -> usize {
    64
}

fn default_membership() -> f64 {
    1e-8
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ToleranceSpec {
    #[serde(default = "default_membership")]
    pub membership: f64,
    /// Outcome aggregation tolerance; defaults to 1e-8·(1+|a|) when absent.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub outcome: Option<f64>,
}

impl Default for ToleranceSpec {
    fn default() -> Self {
        Self { membership: default_membership(), outcome: None }
    }
}

/// Complex scalar on the wire: [re, im].
pub type WireComplex = [f64; 2];

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ScenarioConfig {
    pub cone: ConeKind,
    pub state: StateSpec,
    pub quantity: QuantitySpec,
    #[serde(default = "default_route")]
    pub route: RouteSpec,
    #[serde(default = "default_epsilons")]
    pub epsilons: Vec<f64>,
    #[serde(default = "default_nodes")]
    pub nodes: usize,
    #[serde(default)]
    pub normalize: bool,
    #[serde(default)]
    pub tolerances: ToleranceSpec,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum StateSpec {
    /// Row-major Hermitian matrix for psd-hermitian cones.
    Matrix { matrix: Vec<Vec<WireComplex>> },
    /// Raw coordinates in the fixed basis.
    Coords { coords: Vec<f64> },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(untagged, deny_unknown_fields)]
pub enum QuantitySpec {
    Hermitian { hermitian: Vec<Vec<WireComplex>> },
    Rotation { rotation: RotationSpec },
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct RotationSpec {
    pub axisplane: Vec<Vec<f64>>,
    pub u: Vec<f64>,
    pub c0: f64,
    pub c1: f64,
}

fn wire_to_complex(rows: &[Vec<WireComplex>], field: &str) -> Result<ComplexMatrix, Error> {
    let converted: Vec<Vec<Complex64>> = rows
        .iter()
        .map(|r| r.iter().map(|[re, im]| Complex64::new(*re, *im)).collect())
        .collect();
    ComplexMatrix::from_rows(&converted)
        .map_err(|e| Error::Validation(format!("{field}: {e}")))
}

/// Scenario resolved into validated pipeline inputs.
#[derive(Debug, Clone)]
pub struct ResolvedScenario {
    pub cone: ConeModel,
    pub state: StateVector,
    pub quantity: PhysicalQuantity,
    pub route: RouteSpec,
    pub epsilons: Vec<f64>,
    pub nodes: usize,
    pub outcome_tol: Option<f64>,
}

impl ScenarioConfig {
    /// The Hermitian observable, when the scenario has one: enables the
    /// density-matrix Born cross-check in reports.
    pub fn hermitian_observable(&self) -> Option<ComplexMatrix> {
        match &self.quantity {
            QuantitySpec::Hermitian { hermitian } => {
                wire_to_complex(hermitian, "quantity.hermitian").ok()
            }
            QuantitySpec::Rotation { .. } => None,
        }
    }

    pub fn resolve(&self) -> Result<ResolvedScenario, Error> {
        let cone = match self.cone {
            ConeKind::Simplex { d } => ConeModel::simplex(d),
            ConeKind::PsdHermitian { n } => ConeModel::psd_hermitian(n),
            ConeKind::SpinFactor { n } => ConeModel::spin_factor(n),
        }
        .map_err(|e| Error::Validation(format!("cone: {e}")))?;

        let state = match &self.state {
            StateSpec::Coords { coords } => StateVector(coords.clone()),
            StateSpec::Matrix { matrix } => {
                let m = wire_to_complex(matrix, "state.matrix")?;
                cone.matrix_to_state(&m)
                    .map_err(|e| Error::Validation(format!("state.matrix: {e}")))?
            }
        };
        cone.check_dim(&state).map_err(|e| Error::Validation(format!("state: {e}")))?;
        let state = if self.normalize {
            cone.normalize(&state).map_err(|e| Error::Validation(format!("state: {e}")))?
        } else {
            let ev = cone.e_value(&state)?;
            if (ev - 1.0).abs() > 1e-8 {
                return Err(Error::Validation(format!(
                    "state: state not normalized (e(x) = {ev}); set \"normalize\": true to rescale"
                )));
            }
            state
        };
        if !cone.contains(&state, self.tolerances.membership)? {
            return Err(Error::Validation(format!(
                "state: outside the cone (membership margin {:.3e})",
                cone.membership_margin(&state)?
            )));
        }

        let quantity = match &self.quantity {
            QuantitySpec::Hermitian { hermitian } => {
                if !matches!(self.cone, ConeKind::PsdHermitian { .. }) {
                    return Err(Error::Validation(
                        "quantity.hermitian: requires a psd_hermitian cone".into(),
                    ));
                }
                let m = wire_to_complex(hermitian, "quantity.hermitian")?;
                make_hermitian_quantity(&m)
                    .map_err(|e| Error::Validation(format!("quantity.hermitian: {e}")))?
            }
            QuantitySpec::Rotation { rotation } => {
                let n = match self.cone {
                    ConeKind::SpinFactor { n } => n,
                    _ => {
                        return Err(Error::Validation(
                            "quantity.rotation: requires a spin_factor cone".into(),
                        ))
                    }
                };
                let omega = RealMatrix::from_rows(&rotation.axisplane)
                    .map_err(|e| Error::Validation(format!("quantity.rotation.axisplane: {e}")))?;
                make_rotation_quantity(n, &omega, (rotation.c0, rotation.c1), &rotation.u)
                    .map_err(|e| Error::Validation(format!("quantity.rotation: {e}")))?
            }
        };
        if quantity.cone() != &cone {
            return Err(Error::Validation(
                "quantity: ambient cone does not match the scenario cone".into(),
            ));
        }

        if self.epsilons.is_empty() || self.epsilons.iter().any(|e| !(*e > 0.0) || !e.is_finite()) {
            return Err(Error::Validation(
                "epsilons: must be a non-empty list of positive finite values".into(),
            ));
        }

        Ok(ResolvedScenario {
            cone,
            state,
            quantity,
            route: self.route,
            epsilons: self.epsilons.clone(),
            nodes: self.nodes,
            outcome_tol: self.tolerances.outcome,
        })
    }
}
