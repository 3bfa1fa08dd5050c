//! Euclidean Jordan algebra structure for the three concrete models:
//! products, spectral decomposition into primitive idempotents,
//! cone-of-squares membership, and the spin(3) ↔ hermitian(2) isomorphism.

use num_complex::Complex64;

use crate::cone::{basis, ConeModel, StateVector};
use crate::error::{Error, Result};
use crate::linalg::{herm_eigen, vec_norm, ComplexMatrix};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum JordanKind {
    /// R^d with the componentwise product.
    Classical { d: usize },
    /// Hermitian n x n matrices with the anticommutator product (XY+YX)/2,
    /// in the same fixed real coordinates the psd-hermitian cone uses.
    Hermitian { n: usize },
    /// Spin factor R ⊕ R^n: (x0, x) ∘ (y0, y) = (x0 y0 + x·y, x0 y + y0 x).
    Spin { n: usize },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct JordanAlgebra {
    pub kind: JordanKind,
}

impl JordanAlgebra {
    pub fn classical(d: usize) -> Result<Self> {
        if d == 0 {
            return Err(Error::Validation("classical dimension must be positive".into()));
        }
        Ok(Self { kind: JordanKind::Classical { d } })
    }

    pub fn hermitian(n: usize) -> Result<Self> {
        if n == 0 || n > 8 {
            return Err(Error::Validation("hermitian size must be in 1..=8".into()));
        }
        Ok(Self { kind: JordanKind::Hermitian { n } })
    }

    pub fn spin(n: usize) -> Result<Self> {
        if n == 0 {
            return Err(Error::Validation("spin dimension must be positive".into()));
        }
        Ok(Self { kind: JordanKind::Spin { n } })
    }

    pub fn dimension(&self) -> usize {
        match self.kind {
            JordanKind::Classical { d } => d,
            JordanKind::Hermitian { n } => basis::dim(n),
            JordanKind::Spin { n } => n + 1,
        }
    }

    pub fn rank(&self) -> usize {
        match self.kind {
            JordanKind::Classical { d } => d,
            JordanKind::Hermitian { n } => n,
            JordanKind::Spin { .. } => 2,
        }
    }

    pub fn unit(&self) -> StateVector {
        match self.kind {
            JordanKind::Classical { d } => StateVector(vec![1.0; d]),
            JordanKind::Hermitian { n } => {
                let mut v = vec![0.0; basis::dim(n)];
                v[..n].iter_mut().for_each(|x| *x = 1.0);
                StateVector(v)
            }
            JordanKind::Spin { n } => {
                let mut v = vec![0.0; n + 1];
                v[0] = 1.0;
                StateVector(v)
            }
        }
    }

    /// The cone of squares of this algebra, as a cone model.
    pub fn cone(&self) -> ConeModel {
        match self.kind {
            JordanKind::Classical { d } => ConeModel::simplex(d).expect("validated size"),
            JordanKind::Hermitian { n } => ConeModel::psd_hermitian(n).expect("validated size"),
            JordanKind::Spin { n } => ConeModel::spin_factor(n).expect("validated size"),
        }
    }

    pub fn check_dim(&self, x: &StateVector) -> Result<()> {
        if x.dim() != self.dimension() {
            return Err(Error::Dimension(format!(
                "element has dimension {}, algebra dimension is {}",
                x.dim(),
                self.dimension()
            )));
        }
        x.check_finite()
    }
}

/// Jordan product x ∘ y.
pub fn jordan_product(alg: &JordanAlgebra, x: &StateVector, y: &StateVector) -> Result<StateVector> {
    alg.check_dim(x)?;
    alg.check_dim(y)?;
    match alg.kind {
        JordanKind::Classical { .. } => Ok(StateVector(
            x.coords().iter().zip(y.coords()).map(|(a, b)| a * b).collect(),
        )),
        JordanKind::Hermitian { n } => {
            let mx = basis::coords_to_herm(n, x.coords())?;
            let my = basis::coords_to_herm(n, y.coords())?;
            let anti = mx.matmul(&my).add(&my.matmul(&mx)).scale(Complex64::new(0.5, 0.0));
            Ok(StateVector(basis::herm_to_coords(&anti)?))
        }
        JordanKind::Spin { .. } => {
            let (x0, xv) = (x.coords()[0], &x.coords()[1..]);
            let (y0, yv) = (y.coords()[0], &y.coords()[1..]);
            let head = x0 * y0 + crate::linalg::vec_dot(xv, yv);
            let mut out = vec![head];
            out.extend(xv.iter().zip(yv).map(|(a, b)| x0 * b + y0 * a));
            Ok(StateVector(out))
        }
    }
}

/// Spectral decomposition x = Σ λ_i c_i into primitive idempotents.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    /// Eigenvalues, descending, one per unit of rank.
    pub eigenvalues: Vec<f64>,
    /// Primitive idempotents c_i (trace 1, c_i ∘ c_i = c_i).
    pub idempotents: Vec<StateVector>,
    /// True when the split inside an eigenvalue cluster is conventional.
    pub degenerate: bool,
}

pub fn spectral_decompose(alg: &JordanAlgebra, x: &StateVector) -> Result<SpectralDecomposition> {
    alg.check_dim(x)?;
    match alg.kind {
        JordanKind::Classical { d } => {
            let mut order: Vec<usize> = (0..d).collect();
            order.sort_by(|&i, &j| x.coords()[j].partial_cmp(&x.coords()[i]).unwrap());
            let eigenvalues: Vec<f64> = order.iter().map(|&i| x.coords()[i]).collect();
            let idempotents = order
                .iter()
                .map(|&i| {
                    let mut v = vec![0.0; d];
                    v[i] = 1.0;
                    StateVector(v)
                })
                .collect();
            let tol = 1e-12 * (1.0 + x.norm());
            let degenerate = eigenvalues.windows(2).any(|w| (w[0] - w[1]).abs() <= tol);
            Ok(SpectralDecomposition { eigenvalues, idempotents, degenerate })
        }
        JordanKind::Hermitian { n } => {
            let m = basis::coords_to_herm(n, x.coords())?;
            let eig = herm_eigen(&m)?;
            let mut idempotents = Vec::with_capacity(n);
            for k in 0..n {
                let proj = ComplexMatrix::from_fn(n, n, |i, j| {
                    eig.vectors[(i, k)] * eig.vectors[(j, k)].conj()
                });
                idempotents.push(StateVector(basis::herm_to_coords(&proj)?));
            }
            let tol = 1e-9 * (1.0 + x.norm());
            let degenerate = eig.eigenvalues.windows(2).any(|w| (w[0] - w[1]).abs() <= tol);
            Ok(SpectralDecomposition { eigenvalues: eig.eigenvalues, idempotents, degenerate })
        }
        JordanKind::Spin { n } => {
            let x0 = x.coords()[0];
            let xv = &x.coords()[1..];
            let r = vec_norm(xv);
            let (axis, degenerate) = if r <= 1e-14 {
                // conventional split along e1
                let mut a = vec![0.0; n];
                a[0] = 1.0;
                (a, true)
            } else {
                (xv.iter().map(|v| v / r).collect(), false)
            };
            let make = |sign: f64| {
                let mut v = vec![0.5];
                v.extend(axis.iter().map(|a| 0.5 * sign * a));
                StateVector(v)
            };
            Ok(SpectralDecomposition {
                eigenvalues: vec![x0 + r, x0 - r],
                idempotents: vec![make(1.0), make(-1.0)],
                degenerate,
            })
        }
    }
}

/// Cone-of-squares membership witness.
#[derive(Debug, Clone, Copy)]
pub struct SquareWitness {
    pub in_cone: bool,
    pub min_eigenvalue: f64,
}

pub fn square_in_cone(alg: &JordanAlgebra, x: &StateVector) -> Result<SquareWitness> {
    let dec = spectral_decompose(alg, x)?;
    let min = dec.eigenvalues.iter().copied().fold(f64::INFINITY, f64::min);
    Ok(SquareWitness { in_cone: min >= -1e-10, min_eigenvalue: min })
}

/// spin(3) → hermitian(2): (x0, x) ↦ x0 I + x1 σx + x2 σy + x3 σz,
/// returned in the fixed hermitian(2) coordinates.
pub fn spin_to_herm2(x: &StateVector) -> Result<StateVector> {
    if x.dim() != 4 {
        return Err(Error::Dimension("spin_to_herm2 expects a spin(3) element".into()));
    }
    x.check_finite()?;
    let (x0, x1, x2, x3) = (x.coords()[0], x.coords()[1], x.coords()[2], x.coords()[3]);
    let m = ComplexMatrix::from_rows(&[
        vec![Complex64::new(x0 + x3, 0.0), Complex64::new(x1, -x2)],
        vec![Complex64::new(x1, x2), Complex64::new(x0 - x3, 0.0)],
    ])?;
    Ok(StateVector(basis::herm_to_coords(&m)?))
}

/// Inverse of [`spin_to_herm2`].
pub fn herm2_to_spin(y: &StateVector) -> Result<StateVector> {
    if y.dim() != 4 {
        return Err(Error::Dimension("herm2_to_spin expects a hermitian(2) element".into()));
    }
    y.check_finite()?;
    let m = basis::coords_to_herm(2, y.coords())?;
    let x0 = 0.5 * (m[(0, 0)].re + m[(1, 1)].re);
    let x1 = m[(1, 0)].re;
    let x2 = m[(1, 0)].im;
    let x3 = 0.5 * (m[(0, 0)].re - m[(1, 1)].re);
    Ok(StateVector(vec![x0, x1, x2, x3]))
}
