//! Cone models, normalized states, and physical quantities as
//! (flow generator, invariant functional) pairs.

pub mod basis;
mod quantity;

pub use quantity::{make_hermitian_quantity, make_rotation_quantity, FlowGenerator, PhysicalQuantity};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::fixtures;
use crate::linalg::{herm_eigen, vec_norm, ComplexMatrix};

/// Coordinates of a point of the ambient space in the model's fixed basis.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct StateVector(pub Vec<f64>);

impl StateVector {
    pub fn dim(&self) -> usize {
        self.0.len()
    }

    pub fn coords(&self) -> &[f64] {
        &self.0
    }

    pub fn norm(&self) -> f64 {
        vec_norm(&self.0)
    }

    pub fn check_finite(&self) -> Result<()> {
        if self.0.iter().all(|v| v.is_finite()) {
            Ok(())
        } else {
            Err(Error::Validation("state has non-finite coordinates".into()))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ConeKind {
    /// Nonnegative orthant in R^d; normalized slice is the probability simplex.
    Simplex { d: usize },
    /// PSD Hermitian n x n matrices in the fixed real basis; d = n^2.
    PsdHermitian { n: usize },
    /// Lorentz cone x0 >= |x_vec| in R^{1+n}.
    SpinFactor { n: usize },
}

/// One of the three concrete cones with its normalizing functional.
/// The inner product is Euclidean in the fixed coordinates for all
/// three models (for psd-hermitian that is the trace form).
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct ConeModel {
    pub kind: ConeKind,
}

impl ConeModel {
    pub fn simplex(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("simplex dimension must be positive".into()));
        }
        Ok(Self { kind: ConeKind::Simplex { d } })
    }

    pub fn psd_hermitian(n: usize) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::Validation("psd-hermitian size must be in 1..=8".into()));
        }
        Ok(Self { kind: ConeKind::PsdHermitian { n } })
    }

    pub fn spin_factor(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("spin-factor dimension must be positive".into()));
        }
        Ok(Self { kind: ConeKind::SpinFactor { n } })
    }

    pub fn dim(&self) -> usize {
        match self.kind {
            ConeKind::Simplex { d } => d,
            ConeKind::PsdHermitian { n } => basis::dim(n),
            ConeKind::SpinFactor { n } => n + 1,
        }
    }

    pub fn basis_labels(&self) -> Vec<String> {
        match self.kind {
            ConeKind::Simplex { d } => (0..d).map(|i| format!("e{i}")).collect(),
            ConeKind::PsdHermitian { n } => basis::labels(n),
            ConeKind::SpinFactor { n } => (0..=n).map(|i| format!("x{i}")).collect(),
        }
    }

    /// The normalizing functional e as a covector in the fixed basis.
    pub fn e_covector(&self) -> Vec<f64> {
        match self.kind {
            ConeKind::Simplex { d } => vec![1.0; d],
            ConeKind::PsdHermitian { n } => {
                let mut e = vec![0.0; basis::dim(n)];
                e[..n].iter_mut().for_each(|v| *v = 1.0);
                e
            }
            ConeKind::SpinFactor { n } => {
                // Jordan trace of the spin factor: 2 x0
                let mut e = vec![0.0; n + 1];
                e[0] = 2.0;
                e
            }
        }
    }

    pub fn check_dim(&self, x: &StateVector) -> Result<()> {
        if x.dim() != self.dim() {
            return Err(Error::Dimension(format!(
                "state has dimension {}, cone ambient dimension is {}",
                x.dim(),
                self.dim()
            )));
        }
        x.check_finite()
    }

    pub fn e_value(&self, x: &StateVector) -> Result<f64> {
        self.check_dim(x)?;
        Ok(crate::linalg::vec_dot(&self.e_covector(), x.coords()))
    }

    pub fn normalize(&self, x: &StateVector) -> Result<StateVector> {
        let ev = self.e_value(x)?;
        if ev <= 0.0 {
            return Err(Error::Normalization(format!(
                "e(x) = {ev} is not positive, cannot normalize"
            )));
        }
        Ok(StateVector(x.coords().iter().map(|v| v / ev).collect()))
    }

    /// Signed distance-like membership margin: nonnegative inside the cone.
    ///
    /// simplex: smallest coordinate; psd-hermitian: smallest eigenvalue;
    /// spin-factor: x0 - |x_vec|.
    pub fn membership_margin(&self, x: &StateVector) -> Result<f64> {
        self.check_dim(x)?;
        match self.kind {
            ConeKind::Simplex { .. } => {
                Ok(x.coords().iter().copied().fold(f64::INFINITY, f64::min))
            }
            ConeKind::PsdHermitian { n } => {
                let m = basis::coords_to_herm(n, x.coords())?;
                let eig = herm_eigen(&m)?;
                Ok(*eig.eigenvalues.last().expect("nonempty spectrum"))
            }
            ConeKind::SpinFactor { .. } => {
                let x0 = x.coords()[0];
                Ok(x0 - vec_norm(&x.coords()[1..]))
            }
        }
    }

    pub fn contains(&self, x: &StateVector, tol: f64) -> Result<bool> {
        if tol < 0.0 {
            return Err(Error::Validation("membership tolerance must be nonnegative".into()));
        }
        Ok(self.membership_margin(x)? >= -tol)
    }

    /// The Hermitian matrix a psd-hermitian state represents.
    pub fn state_to_matrix(&self, x: &StateVector) -> Result<ComplexMatrix> {
        match self.kind {
            ConeKind::PsdHermitian { n } => {
                self.check_dim(x)?;
                basis::coords_to_herm(n, x.coords())
            }
            _ => Err(Error::Validation("state_to_matrix is defined for psd-hermitian only".into())),
        }
    }

    pub fn matrix_to_state(&self, m: &ComplexMatrix) -> Result<StateVector> {
        match self.kind {
            ConeKind::PsdHermitian { n } => {
                if m.rows() != n || m.cols() != n {
                    return Err(Error::Dimension(format!(
                        "matrix is {}x{}, cone expects {n}x{n}",
                        m.rows(),
                        m.cols()
                    )));
                }
                Ok(StateVector(basis::herm_to_coords(m)?))
            }
            _ => Err(Error::Validation("matrix_to_state is defined for psd-hermitian only".into())),
        }
    }

    /// Deterministic sample from the normalized slice.
    pub fn random_normalized_state(&self, seed: u64) -> StateVector {
        let mut r = fixtures::rng(seed ^ 0x9e3779b97f4a7c15);
        match self.kind {
            ConeKind::Simplex { d } => {
                // exponential spacings give a uniform Dirichlet sample
                let mut v: Vec<f64> =
                    (0..d).map(|_| -fixtures::uniform(&mut r).max(1e-12).ln()).collect();
                let s: f64 = v.iter().sum();
                v.iter_mut().for_each(|x| *x /= s);
                StateVector(v)
            }
            ConeKind::PsdHermitian { n } => {
                let rho = fixtures::random_density_with(n, &mut r);
                StateVector(basis::herm_to_coords(&rho).expect("construction is Hermitian"))
            }
            ConeKind::SpinFactor { n } => {
                let dir = fixtures::random_unit_vector(n, &mut r);
                let radius = 0.5 * fixtures::uniform(&mut r);
                let mut v = vec![0.5];
                v.extend(dir.into_iter().map(|d| d * radius));
                StateVector(v)
            }
        }
    }
}
