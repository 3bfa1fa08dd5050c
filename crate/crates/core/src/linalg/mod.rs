//! Self-contained dense kernels: Jacobi eigensolvers, scaling-and-squaring
//! matrix exponential, Gauss–Hermite quadrature.

mod eigen;
mod expm;
mod matrix;
mod quadrature;

pub use eigen::{herm_eigen, sym_eigen, EigenResult, HermEigenResult};
pub use expm::mat_exp;
pub use matrix::{vec_dot, vec_norm, vec_sub, ComplexMatrix, RealMatrix};
pub use quadrature::{gauss_hermite, QuadratureRule, MAX_NODES};
