//! Decoherence projector by two independent routes, extreme-point
//! decomposition, outcome probabilities, and the density-matrix Born
//! rule used as the cross-check oracle.

use serde::{Deserialize, Serialize};

use crate::cone::{ConeKind, ConeModel, PhysicalQuantity, StateVector};
use crate::error::{Error, Result};
use crate::jordan::{spectral_decompose, JordanAlgebra};
use crate::linalg::{gauss_hermite, herm_eigen, sym_eigen, vec_dot, vec_norm, vec_sub, ComplexMatrix};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

/// Which route computes the decohered state.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    /// Orthogonal projection onto Ker G (skew-adjoint generators only).
    Spectral,
    /// Gaussian-weighted flow average at finite ε with an N-node
    /// Gauss–Hermite rule.
    Numeric { epsilon: f64, nodes: usize },
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeEntry {
    /// Outcome value a(s_k) (probability-weighted mean after aggregation).
    pub value: f64,
    pub probability: f64,
    /// A representative extreme state for the outcome. Conventional when
    /// the decomposition was degenerate.
    pub representative: StateVector,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutcomeDistribution {
    /// Entries with strictly descending values.
    pub entries: Vec<OutcomeEntry>,
    /// Aggregation tolerance used to merge nearby outcome values.
    pub outcome_tol: f64,
}

impl OutcomeDistribution {
    pub fn total_probability(&self) -> f64 {
        self.entries.iter().map(|e| e.probability).sum()
    }

    pub fn expectation(&self) -> f64 {
        self.entries.iter().map(|e| e.probability * e.value).sum()
    }

    pub fn values(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.value).collect()
    }

    pub fn probabilities(&self) -> Vec<f64> {
        self.entries.iter().map(|e| e.probability).collect()
    }
}

/// Default aggregation tolerance: 1e-8 · (1 + |a|).
pub fn default_outcome_tol(outcome_covector: &[f64]) -> f64 {
    1e-8 * (1.0 + vec_norm(outcome_covector))
}

const KERNEL_REL_TOL: f64 = 1e-14; // on eigenvalues of GᵀG
const FIXEDNESS_TOL: f64 = 1e-8;
const MEMBERSHIP_TOL: f64 = 1e-8;
const NEGATIVE_PROB_FLOOR: f64 = -1e-9;

/// Q_A by kernel projection: the orthogonal projection of x onto Ker G
/// under the cone's inner product (Euclidean in the fixed coordinates).
pub fn q_spectral(q: &PhysicalQuantity, x: &StateVector) -> Result<StateVector> {
    q.cone().check_dim(x)?;
    if !q.generator().is_declared_skew() {
        return Err(Error::UnsupportedGenerator(
            "kernel projection requires a skew-adjoint generator; use the numeric route".into(),
        ));
    }
    let g = q.generator().matrix();
    if q.generator().norm() == 0.0 {
        return Ok(x.clone());
    }
    let gram = g.transpose().matmul(g);
    let eig = sym_eigen(&gram)?;
    let smax = eig.eigenvalues.first().copied().unwrap_or(0.0).max(0.0);
    let thr = KERNEL_REL_TOL * smax;
    let n = x.dim();
    let mut out = vec![0.0; n];
    for (k, &lambda) in eig.eigenvalues.iter().enumerate() {
        if lambda > thr {
            continue;
        }
        let v = eig.vectors.column(k);
        let c = vec_dot(&v, x.coords());
        for (o, vi) in out.iter_mut().zip(&v) {
            *o += c * vi;
        }
    }
    Ok(StateVector(out))
}

/// Q_A by the Gaussian flow average at finite ε: the Gauss–Hermite rule
/// transplanted by t = s/√ε, weights renormalized to sum to one, applied
/// to the flow exp(tG).
pub fn q_numeric(
    q: &PhysicalQuantity,
    x: &StateVector,
    epsilon: f64,
    nodes: usize,
) -> Result<StateVector> {
    q.cone().check_dim(x)?;
    if !(epsilon > 0.0) || !epsilon.is_finite() {
        return Err(Error::Validation("epsilon must be positive and finite".into()));
    }
    let rule = gauss_hermite(nodes)?;
    if q.generator().norm() == 0.0 {
        // trivial flow: the average is x exactly, not x plus summation dust
        return Ok(x.clone());
    }
    let total: f64 = rule.weights.iter().sum();
    let scale = 1.0 / epsilon.sqrt();
    let evaluate = |i: usize| -> Result<Vec<f64>> {
        let t = rule.nodes[i] * scale;
        let y = q.evolve(t, x).map_err(|e| match e {
            Error::Range(msg) => Error::Range(format!(
                "{msg}; quadrature node out of range — increase epsilon or reduce the generator norm"
            )),
            other => other,
        })?;
        let w = rule.weights[i] / total;
        Ok(y.coords().iter().map(|v| v * w).collect())
    };
    let combine = |a: Vec<f64>, b: Vec<f64>| -> Vec<f64> {
        a.iter().zip(&b).map(|(p, q)| p + q).collect()
    };
    let sum: Vec<f64>;
    #[cfg(feature = "parallel")]
    {
        sum = (0..rule.len())
            .into_par_iter()
            .map(evaluate)
            .try_reduce(|| vec![0.0; x.dim()], |a, b| Ok(combine(a, b)))?;
    }
    #[cfg(not(feature = "parallel"))]
    {
        let mut acc = vec![0.0; x.dim()];
        for i in 0..rule.len() {
            acc = combine(acc, evaluate(i)?);
        }
        sum = acc;
    }
    Ok(StateVector(sum))
}

fn jordan_for(cone: &ConeModel) -> JordanAlgebra {
    match cone.kind {
        ConeKind::Simplex { d } => JordanAlgebra::classical(d).expect("validated size"),
        ConeKind::PsdHermitian { n } => JordanAlgebra::hermitian(n).expect("validated size"),
        ConeKind::SpinFactor { n } => JordanAlgebra::spin(n).expect("validated size"),
    }
}

/// Mixture of extreme states for a normalized y fixed by the flow of q:
/// coordinates on the simplex, Jordan spectral decomposition elsewhere.
pub fn extreme_decompose(
    q: &PhysicalQuantity,
    y: &StateVector,
) -> Result<Vec<(f64, StateVector)>> {
    let cone = q.cone();
    cone.check_dim(y)?;
    let ev = cone.e_value(y)?;
    if (ev - 1.0).abs() > FIXEDNESS_TOL {
        return Err(Error::Precondition(format!("state is not normalized: e(y) = {ev}")));
    }
    let margin = cone.membership_margin(y)?;
    if margin < -MEMBERSHIP_TOL {
        return Err(Error::Validation(format!(
            "state is outside the cone (membership margin {margin:.3e})"
        )));
    }
    let drift = q.generator().apply(y).norm();
    let bound = FIXEDNESS_TOL * (1.0 + q.generator().norm() * y.norm());
    if drift > bound {
        return Err(Error::Precondition(format!(
            "state is not fixed by the flow: |G y| = {drift:.3e}"
        )));
    }

    let raw: Vec<(f64, StateVector)> = match cone.kind {
        ConeKind::Simplex { d } => (0..d)
            .map(|i| {
                let mut s = vec![0.0; d];
                s[i] = 1.0;
                (y.coords()[i], StateVector(s))
            })
            .collect(),
        _ => flow_adapted_decomposition(q, y)?,
    };

    let mut clamped = Vec::with_capacity(raw.len());
    for (p, s) in raw {
        if p < NEGATIVE_PROB_FLOOR {
            return Err(Error::Validation(format!(
                "decomposition weight {p:.3e} is below the clamping floor; state is outside the cone"
            )));
        }
        clamped.push((p.max(0.0), s));
    }
    let total: f64 = clamped.iter().map(|(p, _)| *p).sum();
    if total <= 0.0 {
        return Err(Error::Invariant("decomposition has zero total weight".into()));
    }
    Ok(clamped.into_iter().map(|(p, s)| (p / total, s)).collect())
}

fn idempotents_fixed(q: &PhysicalQuantity, dec: &[(f64, StateVector)]) -> bool {
    dec.iter().all(|(_, s)| {
        q.generator().apply(s).norm() <= FIXEDNESS_TOL * (1.0 + q.generator().norm() * s.norm())
    })
}

/// The algebra's trace form in the fixed coordinates: Euclidean on the
/// psd-hermitian model (trace-orthonormal basis), twice Euclidean on the
/// spin factor (Jordan trace of the unit is the rank, 2).
fn trace_pairing(cone: &ConeModel, a: &StateVector, b: &StateVector) -> f64 {
    let d = vec_dot(a.coords(), b.coords());
    match cone.kind {
        ConeKind::SpinFactor { .. } => 2.0 * d,
        _ => d,
    }
}

/// Spectral decomposition of y into primitive idempotents fixed by the
/// flow. When eigenvalues of y are degenerate across distinct outcome
/// blocks, a plain decomposition may mix them; perturbing along the
/// (flow-invariant) outcome element splits exactly the eigenspaces the
/// outcome functional distinguishes, so anything left mixed is harmless
/// to the value-aggregated distribution.
fn flow_adapted_decomposition(
    q: &PhysicalQuantity,
    y: &StateVector,
) -> Result<Vec<(f64, StateVector)>> {
    let cone = q.cone();
    let alg = jordan_for(cone);
    let dec = spectral_decompose(&alg, y)?;
    let plain: Vec<(f64, StateVector)> =
        dec.eigenvalues.into_iter().zip(dec.idempotents).collect();
    if idempotents_fixed(q, &plain) {
        return Ok(plain);
    }
    let a_vec = StateVector(q.outcome_covector().to_vec());
    let tau0 = 0.37 * (1.0 + y.norm()) / (1.0 + a_vec.norm());
    for tau in [tau0, tau0 / 3.0, tau0 / 9.0, tau0 * 2.7] {
        let w = StateVector(
            y.coords().iter().zip(a_vec.coords()).map(|(yi, ai)| yi + tau * ai).collect(),
        );
        let Ok(dec) = spectral_decompose(&alg, &w) else { continue };
        let cand: Vec<(f64, StateVector)> = dec
            .idempotents
            .into_iter()
            .map(|s| (trace_pairing(cone, y, &s), s))
            .collect();
        let mut rec = vec![0.0; y.dim()];
        for (p, s) in &cand {
            for (r, c) in rec.iter_mut().zip(s.coords()) {
                *r += p * c;
            }
        }
        let resid = vec_norm(&vec_sub(&rec, y.coords()));
        if resid <= 1e-9 * (1.0 + y.norm()) && idempotents_fixed(q, &cand) {
            return Ok(cand);
        }
    }
    Ok(plain)
}

/// Merge (value, probability, representative) triples whose values sit
/// within `tol` of each other; probabilities add, values average with
/// probability weights, the heaviest representative survives.
fn aggregate(
    mut triples: Vec<(f64, f64, StateVector)>,
    tol: f64,
) -> Vec<OutcomeEntry> {
    triples.sort_by(|a, b| b.0.partial_cmp(&a.0).unwrap());
    let mut out: Vec<Vec<(f64, f64, StateVector)>> = Vec::new();
    for t in triples {
        match out.last_mut() {
            Some(group) if group.last().unwrap().0 - t.0 <= tol => group.push(t),
            _ => out.push(vec![t]),
        }
    }
    out.into_iter()
        .map(|group| {
            let p: f64 = group.iter().map(|g| g.1).sum();
            let value = if p > 0.0 {
                group.iter().map(|g| g.0 * g.1).sum::<f64>() / p
            } else {
                group.iter().map(|g| g.0).sum::<f64>() / group.len() as f64
            };
            let representative = group
                .iter()
                .max_by(|a, b| a.1.partial_cmp(&b.1).unwrap())
                .unwrap()
                .2
                .clone();
            OutcomeEntry { value, probability: p, representative }
        })
        .collect()
}

/// The full pipeline: decohere x, decompose into extreme states, and
/// read off (a(s_k), p_k), aggregated by outcome value.
pub fn outcome_distribution(
    q: &PhysicalQuantity,
    x: &StateVector,
    route: Route,
    outcome_tol: Option<f64>,
) -> Result<OutcomeDistribution> {
    let cone = q.cone();
    let ev = cone.e_value(x)?;
    if (ev - 1.0).abs() > FIXEDNESS_TOL {
        return Err(Error::Precondition(format!("input state is not normalized: e(x) = {ev}")));
    }
    if !cone.contains(x, MEMBERSHIP_TOL)? {
        return Err(Error::Validation("input state is outside the cone".into()));
    }
    let y = match route {
        Route::Spectral => q_spectral(q, x)?,
        Route::Numeric { epsilon, nodes } => q_numeric(q, x, epsilon, nodes)?,
    };
    let decomposition = extreme_decompose(q, &y)?;
    let tol = outcome_tol.unwrap_or_else(|| default_outcome_tol(q.outcome_covector()));
    let triples = decomposition
        .into_iter()
        .map(|(p, s)| Ok((q.outcome_value(&s)?, p, s)))
        .collect::<Result<Vec<_>>>()?;
    Ok(OutcomeDistribution { entries: aggregate(triples, tol), outcome_tol: tol })
}

/// Conventional Born rule on density matrices: eigenvalue clusters of Â
/// with projector weights Tr(P_b ρ). The reference the geometric pipeline
/// must reproduce.
pub fn born_oracle(
    a_hat: &ComplexMatrix,
    rho: &ComplexMatrix,
    outcome_tol: Option<f64>,
) -> Result<OutcomeDistribution> {
    if !a_hat.is_hermitian(1e-12) {
        return Err(Error::Validation("observable must be Hermitian".into()));
    }
    if !rho.is_hermitian(1e-12) || rho.rows() != a_hat.rows() {
        return Err(Error::Validation("density matrix must be Hermitian of matching size".into()));
    }
    let n = rho.rows();
    let tr = rho.trace().re;
    if (tr - 1.0).abs() > 1e-9 {
        return Err(Error::Validation(format!("density matrix has trace {tr}, expected 1")));
    }
    let rho_eig = herm_eigen(rho)?;
    let rho_min = rho_eig.eigenvalues.last().copied().unwrap_or(0.0);
    if rho_min < -1e-9 {
        return Err(Error::Validation(format!(
            "density matrix is not PSD (min eigenvalue {rho_min:.3e})"
        )));
    }

    let eig = herm_eigen(a_hat)?;
    let cluster_tol = 1e-9 * (1.0 + a_hat.frobenius_norm());
    let cone = ConeModel::psd_hermitian(n)?;
    let mut triples: Vec<(f64, f64, StateVector)> = Vec::new();
    let mut k = 0;
    while k < n {
        let mut m = k + 1;
        while m < n && eig.eigenvalues[m - 1] - eig.eigenvalues[m] <= cluster_tol {
            m += 1;
        }
        let mu = eig.eigenvalues[k..m].iter().sum::<f64>() / (m - k) as f64;
        let proj = ComplexMatrix::from_fn(n, n, |i, j| {
            (k..m).map(|c| eig.vectors[(i, c)] * eig.vectors[(j, c)].conj()).sum()
        });
        let p = proj.matmul(rho).trace().re;
        if p < NEGATIVE_PROB_FLOOR {
            return Err(Error::Validation(format!(
                "Born weight {p:.3e} below the clamping floor"
            )));
        }
        let rep = cone.matrix_to_state(
            &proj.scale(num_complex::Complex64::new(1.0 / (m - k) as f64, 0.0)),
        )?;
        triples.push((mu, p.max(0.0), rep));
        k = m;
    }
    let total: f64 = triples.iter().map(|t| t.1).sum();
    for t in triples.iter_mut() {
        t.1 /= total;
    }
    let e_cov: Vec<f64> = {
        // outcome functional of (Â, a) in the fixed coordinates
        crate::cone::basis::herm_to_coords(a_hat)?
    };
    let tol = outcome_tol.unwrap_or_else(|| default_outcome_tol(&e_cov));
    Ok(OutcomeDistribution { entries: aggregate(triples, tol), outcome_tol: tol })
}

/// Largest gap between two distributions seen as value→probability maps:
/// infinity when the outcome sets disagree beyond `value_tol`.
pub fn distribution_distance(
    a: &OutcomeDistribution,
    b: &OutcomeDistribution,
    value_tol: f64,
) -> f64 {
    if a.entries.len() != b.entries.len() {
        return f64::INFINITY;
    }
    let mut worst = 0.0_f64;
    for (ea, eb) in a.entries.iter().zip(&b.entries) {
        if (ea.value - eb.value).abs() > value_tol {
            return f64::INFINITY;
        }
        worst = worst.max((ea.probability - eb.probability).abs());
    }
    worst
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::cone::{make_hermitian_quantity, make_rotation_quantity};
    use crate::linalg::RealMatrix;
    use approx::assert_abs_diff_eq;
    use num_complex::Complex64;

    fn pauli_z_quantity() -> PhysicalQuantity {
        let a = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        make_hermitian_quantity(&a).unwrap()
    }

    fn plus_plus_state(q: &PhysicalQuantity) -> StateVector {
        let rho = ComplexMatrix::from_fn(2, 2, |_, _| Complex64::new(0.5, 0.0));
        q.cone().matrix_to_state(&rho).unwrap()
    }

    fn rot_quantity() -> PhysicalQuantity {
        let omega = RealMatrix::from_rows(&[
            vec![0.0, 0.0, 0.0],
            vec![0.0, 0.0, -1.0],
            vec![0.0, 1.0, 0.0],
        ])
        .unwrap();
        make_rotation_quantity(3, &omega, (1.0, 1.0), &[1.0, 0.0, 0.0]).unwrap()
    }

    #[test]
    fn trivial_generator_is_identity_projection() {
        let q = make_hermitian_quantity(&ComplexMatrix::identity(2)).unwrap();
        let x = q.cone().random_normalized_state(3);
        assert_eq!(q_spectral(&q, &x).unwrap(), x);
        let y = q_numeric(&q, &x, 1.0, 16).unwrap();
        for (a, b) in y.coords().iter().zip(x.coords()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-14);
        }
    }

    #[test]
    fn dephasing_kills_off_diagonal() {
        let q = pauli_z_quantity();
        let x = plus_plus_state(&q);
        let y = q_spectral(&q, &x).unwrap();
        let m = q.cone().state_to_matrix(&y).unwrap();
        assert_abs_diff_eq!(m[(0, 0)].re, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(m[(1, 1)].re, 0.5, epsilon = 1e-12);
        assert!(m[(0, 1)].norm() < 1e-12);
    }

    #[test]
    fn rotation_average_keeps_axis_component() {
        let q = rot_quantity();
        let x = StateVector(vec![0.5, 0.1, 0.2, 0.3]);
        let y = q_spectral(&q, &x).unwrap();
        assert_abs_diff_eq!(y.coords()[0], 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(y.coords()[1], 0.1, epsilon = 1e-12);
        assert_abs_diff_eq!(y.coords()[2], 0.0, epsilon = 1e-12);
        assert_abs_diff_eq!(y.coords()[3], 0.0, epsilon = 1e-12);
        // the numeric route agrees
        let z = q_numeric(&q, &x, 0.01, 64).unwrap();
        for (a, b) in y.coords().iter().zip(z.coords()) {
            assert_abs_diff_eq!(a, b, epsilon = 1e-9);
        }
    }

    #[test]
    fn gaussian_damping_closed_form() {
        let q = pauli_z_quantity();
        let x = plus_plus_state(&q);
        for (eps, nodes) in [(0.5, 32usize), (0.5, 64), (0.05, 64)] {
            let y = q_numeric(&q, &x, eps, nodes).unwrap();
            let m = q.cone().state_to_matrix(&y).unwrap();
            let expected = 0.5 * (-1.0 / eps).exp();
            assert_abs_diff_eq!(m[(0, 1)].norm(), expected, epsilon = 1e-10);
        }
        let y = q_numeric(&q, &x, 0.05, 64).unwrap();
        let m = q.cone().state_to_matrix(&y).unwrap();
        assert!(m[(0, 1)].norm() <= 1.1e-9);
    }

    #[test]
    fn q_spectral_rejects_undeclared_skewness() {
        // same automorphism flow as the Pauli-z quantity, but the raw
        // constructor was not told the generator is skew-adjoint
        let src = pauli_z_quantity();
        let q = PhysicalQuantity::from_raw(
            *src.cone(),
            src.generator().matrix().clone(),
            src.outcome_covector().to_vec(),
            false,
        )
        .unwrap();
        let x = plus_plus_state(&q);
        assert!(matches!(q_spectral(&q, &x), Err(Error::UnsupportedGenerator(_))));
        // the numeric route still applies
        assert!(q_numeric(&q, &x, 0.5, 32).is_ok());
    }

    #[test]
    fn extreme_decompose_examples() {
        let q = pauli_z_quantity();
        let y = q.cone().matrix_to_state(&ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 0.3 } else { 0.7 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        })).unwrap();
        let dec = extreme_decompose(&q, &y).unwrap();
        assert_abs_diff_eq!(dec[0].0, 0.7, epsilon = 1e-12);
        assert_abs_diff_eq!(dec[1].0, 0.3, epsilon = 1e-12);

        let rot = rot_quantity();
        let y = StateVector(vec![0.5, 0.3, 0.0, 0.0]);
        let dec = extreme_decompose(&rot, &y).unwrap();
        assert_abs_diff_eq!(dec[0].0, 0.8, epsilon = 1e-12);
        assert_abs_diff_eq!(dec[1].0, 0.2, epsilon = 1e-12);
        assert_eq!(dec[0].1.coords(), &[0.5, 0.5, 0.0, 0.0]);
        assert_eq!(dec[1].1.coords(), &[0.5, -0.5, 0.0, 0.0]);
    }

    #[test]
    fn extreme_decompose_rejects_unfixed() {
        let q = pauli_z_quantity();
        let y = plus_plus_state(&q); // not in Ker G
        assert!(matches!(extreme_decompose(&q, &y), Err(Error::Precondition(_))));
    }

    #[test]
    fn simplex_decomposition_is_classical() {
        let cone = ConeModel::simplex(4).unwrap();
        let q = PhysicalQuantity::from_raw(
            cone,
            RealMatrix::zeros(4, 4),
            vec![1.0, 2.0, 3.0, 4.0],
            true,
        )
        .unwrap();
        let y = StateVector(vec![0.1, 0.2, 0.3, 0.4]);
        let dec = extreme_decompose(&q, &y).unwrap();
        assert_eq!(dec.len(), 4);
        for (i, (p, s)) in dec.iter().enumerate() {
            assert_abs_diff_eq!(*p, y.coords()[i], epsilon = 1e-15);
            assert_abs_diff_eq!(s.coords()[i], 1.0, epsilon = 1e-15);
        }
    }

    #[test]
    fn distribution_examples() {
        let q = pauli_z_quantity();
        // diagonal state needs no decoherence
        let rho = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 0.3 } else { 0.7 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let x = q.cone().matrix_to_state(&rho).unwrap();
        let d = outcome_distribution(&q, &x, Route::Spectral, None).unwrap();
        assert_eq!(d.entries.len(), 2);
        assert_abs_diff_eq!(d.entries[0].value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[0].probability, 0.3, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[1].value, -1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[1].probability, 0.7, epsilon = 1e-10);

        // symmetric superposition decoheres to a fair coin
        let x = plus_plus_state(&q);
        let d = outcome_distribution(&q, &x, Route::Spectral, None).unwrap();
        assert_abs_diff_eq!(d.entries[0].probability, 0.5, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[1].probability, 0.5, epsilon = 1e-10);

        // spin rotation example
        let rot = rot_quantity();
        let x = StateVector(vec![0.5, 0.3, 0.0, 0.0]);
        let d = outcome_distribution(&rot, &x, Route::Spectral, None).unwrap();
        assert_abs_diff_eq!(d.entries[0].value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[0].probability, 0.8, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[1].value, 0.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[1].probability, 0.2, epsilon = 1e-10);

        // identity observable: single certain outcome
        let qid = make_hermitian_quantity(&ComplexMatrix::identity(2)).unwrap();
        let x = qid.cone().random_normalized_state(9);
        let d = outcome_distribution(&qid, &x, Route::Spectral, None).unwrap();
        assert_eq!(d.entries.len(), 1);
        assert_abs_diff_eq!(d.entries[0].value, 1.0, epsilon = 1e-10);
        assert_abs_diff_eq!(d.entries[0].probability, 1.0, epsilon = 1e-10);
    }

    #[test]
    fn degenerate_decohered_state_splits_along_the_flow() {
        // the numeric route leaves y within rounding of I/2, whose plain
        // decomposition is basis-ambiguous; the flow-adapted split must
        // still yield the computational outcomes
        let q = pauli_z_quantity();
        let x = plus_plus_state(&q);
        let route = Route::Numeric { epsilon: 0.04, nodes: 64 };
        let d = outcome_distribution(&q, &x, route, None).unwrap();
        assert_eq!(d.entries.len(), 2);
        assert_abs_diff_eq!(d.entries[0].value, 1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d.entries[0].probability, 0.5, epsilon = 1e-9);
        assert_abs_diff_eq!(d.entries[1].value, -1.0, epsilon = 1e-8);
        assert_abs_diff_eq!(d.entries[1].probability, 0.5, epsilon = 1e-9);
    }

    #[test]
    fn born_oracle_examples() {
        let z = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 1.0 } else { -1.0 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let rho = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i == j {
                Complex64::new(if i == 0 { 0.3 } else { 0.7 }, 0.0)
            } else {
                Complex64::new(0.0, 0.0)
            }
        });
        let d = born_oracle(&z, &rho, None).unwrap();
        assert_abs_diff_eq!(d.entries[0].value, 1.0, epsilon = 1e-12);
        assert_abs_diff_eq!(d.entries[0].probability, 0.3, epsilon = 1e-12);
        assert_abs_diff_eq!(d.entries[1].probability, 0.7, epsilon = 1e-12);

        // σx on the maximally mixed state
        let sx = ComplexMatrix::from_fn(2, 2, |i, j| {
            if i != j { Complex64::new(1.0, 0.0) } else { Complex64::new(0.0, 0.0) }
        });
        let mixed = ComplexMatrix::identity(2).scale(Complex64::new(0.5, 0.0));
        let d = born_oracle(&sx, &mixed, None).unwrap();
        assert_abs_diff_eq!(d.entries[0].probability, 0.5, epsilon = 1e-12);
        assert_abs_diff_eq!(d.entries[1].probability, 0.5, epsilon = 1e-12);
    }

    #[test]
    fn born_oracle_matches_pipeline_random_4x4() {
        let a = crate::fixtures::random_hermitian(4, 7);
        let rho = crate::fixtures::random_density(4, 7);
        let q = make_hermitian_quantity(&a).unwrap();
        let x = q.cone().matrix_to_state(&rho).unwrap();
        let pipeline = outcome_distribution(&q, &x, Route::Spectral, None).unwrap();
        let oracle = born_oracle(&a, &rho, None).unwrap();
        let gap = distribution_distance(&pipeline, &oracle, 1e-8);
        assert!(gap <= 1e-8, "gap {gap}");
    }

    #[test]
    fn born_oracle_rejects_invalid_density() {
        let z = ComplexMatrix::identity(2);
        let bad = ComplexMatrix::identity(2); // trace 2
        assert!(born_oracle(&z, &bad, None).is_err());
    }

    #[test]
    fn expectation_consistency() {
        let q = pauli_z_quantity();
        let x = q.cone().random_normalized_state(21);
        let d = outcome_distribution(&q, &x, Route::Spectral, None).unwrap();
        let a_of_x = q.outcome_value(&x).unwrap();
        assert_abs_diff_eq!(d.expectation(), a_of_x, epsilon = 1e-9);
        assert_abs_diff_eq!(d.total_probability(), 1.0, epsilon = 1e-9);
    }
}
