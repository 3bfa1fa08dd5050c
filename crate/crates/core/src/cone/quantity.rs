use num_complex::Complex64;

use crate::cone::{basis, ConeModel, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{mat_exp, vec_dot, vec_norm, ComplexMatrix, RealMatrix};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

const REL_TOL: f64 = 1e-10;

/// Real d x d matrix generating a one-parameter automorphism flow
/// exp(tG) of the cone, annihilating the normalizing functional.
#[derive(Debug, Clone)]
pub struct FlowGenerator {
    matrix: RealMatrix,
    declared_skew: bool,
}

impl FlowGenerator {
    pub fn new(cone: &ConeModel, matrix: RealMatrix, declared_skew: bool) -> Result<Self> {
        let d = cone.dim();
        if matrix.rows() != d || matrix.cols() != d {
            return Err(Error::Dimension(format!(
                "generator is {}x{}, ambient dimension is {d}",
                matrix.rows(),
                matrix.cols()
            )));
        }
        matrix.check_finite()?;
        let gnorm = matrix.frobenius_norm();
        let e = cone.e_covector();
        // e ∘ G = 0: the flow preserves the normalizing functional
        let gte = matrix.transpose().matvec(&e);
        if vec_norm(&gte) > REL_TOL * gnorm * vec_norm(&e) + 1e-300 {
            return Err(Error::Validation(
                "generator does not annihilate the normalizing functional (e∘G ≠ 0)".into(),
            ));
        }
        if declared_skew {
            let sym = matrix.add(&matrix.transpose());
            if sym.frobenius_norm() > REL_TOL * gnorm + 1e-300 {
                return Err(Error::Validation(
                    "generator declared skew-adjoint but G + G* ≠ 0".into(),
                ));
            }
        }
        Ok(Self { matrix, declared_skew })
    }

    pub fn matrix(&self) -> &RealMatrix {
        &self.matrix
    }

    pub fn is_declared_skew(&self) -> bool {
        self.declared_skew
    }

    pub fn norm(&self) -> f64 {
        self.matrix.frobenius_norm()
    }

    pub fn apply(&self, x: &StateVector) -> StateVector {
        StateVector(self.matrix.matvec(x.coords()))
    }
}

/// A physical quantity: a flow generator together with a flow-invariant
/// outcome functional.
#[derive(Debug, Clone)]
pub struct PhysicalQuantity {
    cone: ConeModel,
    generator: FlowGenerator,
    outcome: Vec<f64>,
}

impl PhysicalQuantity {
    fn validated(cone: ConeModel, generator: FlowGenerator, outcome: Vec<f64>) -> Result<Self> {
        if outcome.len() != cone.dim() {
            return Err(Error::Dimension(format!(
                "outcome covector has dimension {}, ambient dimension is {}",
                outcome.len(),
                cone.dim()
            )));
        }
        if outcome.iter().any(|v| !v.is_finite()) {
            return Err(Error::Validation("outcome covector has non-finite entries".into()));
        }
        // a ∘ G = 0: outcome functional is invariant under the flow
        let ag = generator.matrix.transpose().matvec(&outcome);
        let bound = REL_TOL * generator.norm() * vec_norm(&outcome) + 1e-300;
        if vec_norm(&ag) > bound {
            return Err(Error::Validation(
                "outcome functional is not invariant under the flow (a∘G ≠ 0)".into(),
            ));
        }
        Ok(Self { cone, generator, outcome })
    }

    /// Generator from a raw matrix. Enforces e∘G = 0 and a∘G = 0 by
    /// construction checks, plus sampled cone preservation: 200 seeded
    /// normalized states, a grid of times, membership tolerance 1e-8.
    pub fn from_raw(
        cone: ConeModel,
        matrix: RealMatrix,
        outcome: Vec<f64>,
        declared_skew: bool,
    ) -> Result<Self> {
        let generator = FlowGenerator::new(&cone, matrix, declared_skew)?;
        let q = Self::validated(cone, generator, outcome)?;
        let gnorm = q.generator.norm();
        let times: Vec<f64> = if gnorm == 0.0 {
            vec![1.0]
        } else {
            [-5.0, -2.0, -1.0, -0.5, 0.5, 1.0, 2.0, 5.0]
                .iter()
                .map(|t| t * (1.0_f64).min(10.0 / gnorm))
                .collect()
        };
        let check = |seed: u64| -> Result<()> {
            let x = q.cone.random_normalized_state(seed);
            for &t in &times {
                let y = q.evolve(t, &x)?;
                if !q.cone.contains(&y, 1e-8)? {
                    return Err(Error::Validation(format!(
                        "raw generator is not a cone automorphism: sample {seed} leaves the cone at t={t}"
                    )));
                }
            }
            Ok(())
        };
        #[cfg(feature = "parallel")]
        {
            (0..200u64).into_par_iter().try_for_each(check)?;
        }
        #[cfg(not(feature = "parallel"))]
        {
            (0..200u64).try_for_each(check)?;
        }
        Ok(q)
    }

    pub fn cone(&self) -> &ConeModel {
        &self.cone
    }

    pub fn generator(&self) -> &FlowGenerator {
        &self.generator
    }

    pub fn outcome_covector(&self) -> &[f64] {
        &self.outcome
    }

    pub fn outcome_value(&self, x: &StateVector) -> Result<f64> {
        self.cone.check_dim(x)?;
        Ok(vec_dot(&self.outcome, x.coords()))
    }

    /// exp(tG) x — the automorphism flow applied to a point.
    pub fn evolve(&self, t: f64, x: &StateVector) -> Result<StateVector> {
        self.cone.check_dim(x)?;
        let flow = mat_exp(self.generator.matrix(), t)?;
        Ok(StateVector(flow.matvec(x.coords())))
    }
}

/// The quantity a Hermitian operator induces on psd-hermitian(n):
/// G is the real representation of K ↦ -i(ÂK - KÂ), and the outcome
/// functional is K ↦ Tr(ÂK).
pub fn make_hermitian_quantity(a_hat: &ComplexMatrix) -> Result<PhysicalQuantity> {
    if !a_hat.is_square() {
        return Err(Error::Validation("observable must be square".into()));
    }
    if !a_hat.is_hermitian(1e-12) {
        return Err(Error::Validation("observable must be Hermitian".into()));
    }
    let n = a_hat.rows();
    let cone = ConeModel::psd_hermitian(n)?;
    let d = cone.dim();

    let mut g = RealMatrix::zeros(d, d);
    let mut outcome = vec![0.0; d];
    let minus_i = Complex64::new(0.0, -1.0);
    for col in 0..d {
        let mut coords = vec![0.0; d];
        coords[col] = 1.0;
        let b = basis::coords_to_herm(n, &coords)?;
        let commutator = a_hat.matmul(&b).sub(&b.matmul(a_hat));
        let image = commutator.scale(minus_i);
        let image_coords = basis::herm_to_coords(&image)?;
        for (row, v) in image_coords.iter().enumerate() {
            g[(row, col)] = *v;
        }
        outcome[col] = a_hat.matmul(&b).trace().re;
    }
    let generator = FlowGenerator::new(&cone, g, true)?;
    PhysicalQuantity::validated(cone, generator, outcome)
}

/// Rotation quantity on spin-factor(n): the flow spins the vector part by
/// exp(tΩ) and the outcome functional is c0·x0 + c1·(u·x_vec) for a unit
/// axis u fixed by Ω.
pub fn make_rotation_quantity(
    n: usize,
    axisplane: &RealMatrix,
    coeffs: (f64, f64),
    direction: &[f64],
) -> Result<PhysicalQuantity> {
    let cone = ConeModel::spin_factor(n)?;
    if axisplane.rows() != n || axisplane.cols() != n {
        return Err(Error::Dimension(format!(
            "axisplane is {}x{}, expected {n}x{n}",
            axisplane.rows(),
            axisplane.cols()
        )));
    }
    axisplane.check_finite()?;
    let omega_norm = axisplane.frobenius_norm();
    if axisplane.add(&axisplane.transpose()).frobenius_norm() > REL_TOL * omega_norm + 1e-300 {
        return Err(Error::Validation("axisplane must be skew-symmetric".into()));
    }
    if direction.len() != n {
        return Err(Error::Dimension(format!(
            "direction has dimension {}, expected {n}",
            direction.len()
        )));
    }
    if (vec_norm(direction) - 1.0).abs() > 1e-10 {
        return Err(Error::Validation("direction must be a unit vector".into()));
    }
    let omega_u = axisplane.matvec(direction);
    if vec_norm(&omega_u) > REL_TOL * (1.0 + omega_norm) {
        return Err(Error::Validation(
            "direction is not fixed by the rotation (Ωu ≠ 0), outcome would not be invariant"
                .into(),
        ));
    }
    let d = n + 1;
    let mut g = RealMatrix::zeros(d, d);
    for i in 0..n {
        for j in 0..n {
            g[(i + 1, j + 1)] = axisplane[(i, j)];
        }
    }
    let (c0, c1) = coeffs;
    let mut outcome = vec![c0];
    outcome.extend(direction.iter().map(|u| c1 * u));
    let generator = FlowGenerator::new(&cone, g, true)?;
    PhysicalQuantity::validated(cone, generator, outcome)
}
