//! Cone-based formulation of finite-dimensional quantum theory: states as
//! elements of a convex cone, physical quantities as (flow generator,
//! invariant functional) pairs, decoherence as a projector onto the flow's
//! kernel, and outcome probabilities from extreme-point decomposition —
//! cross-validated against the standard density-matrix Born rule.
//!
//! Data-parallel inner loops (quadrature averaging, sampled validation,
//! the self-check suite) run on rayon when the default `parallel` feature
//! is enabled and fall back to sequential iteration without it.

pub mod cone;
pub mod error;
pub mod fixtures;
pub mod jordan;
pub mod linalg;
pub mod measure;
pub mod selfcheck;

pub use cone::{
    make_hermitian_quantity, make_rotation_quantity, ConeKind, ConeModel, FlowGenerator,
    PhysicalQuantity, StateVector,
};
pub use error::{Error, Result};
pub use measure::{
    born_oracle, extreme_decompose, outcome_distribution, q_numeric, q_spectral,
    OutcomeDistribution, OutcomeEntry, Route,
};
