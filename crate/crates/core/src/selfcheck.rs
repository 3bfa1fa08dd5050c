//! Fixed-seed invariant suites for every module, runnable from the CLI.
//! Deterministic: two runs produce identical results.

use crate::cone::{make_hermitian_quantity, make_rotation_quantity, ConeModel, PhysicalQuantity, StateVector};
use crate::jordan::{self, JordanAlgebra};
use crate::linalg::{gauss_hermite, herm_eigen, mat_exp, sym_eigen, ComplexMatrix, RealMatrix};
use crate::measure::{self, Route};
use crate::{fixtures, Result};

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub cases: usize,
    pub failures: usize,
    pub detail: String,
}

impl CheckResult {
    pub fn passed(&self) -> bool {
        self.failures == 0
    }
}

/// Tolerances the suites assert against. The defaults are the pinned
/// contract values; loosening or corrupting them is only useful to test
/// the harness itself.
#[derive(Debug, Clone)]
pub struct Tolerances {
    /// Offset added to every fixture seed; 0 is the pinned default run.
    pub seed_offset: u64,
    pub eigen_residual: f64,
    pub expm_group_law: f64,
    pub quad_exactness: f64,
    pub flow_e_drift: f64,
    pub cone_margin: f64,
    pub jordan_residual: f64,
    pub projector_residual: f64,
    pub born_agreement: f64,
    pub probability_sum: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            seed_offset: 0,
            eigen_residual: 1e-10,
            expm_group_law: 1e-9,
            quad_exactness: 1e-10,
            flow_e_drift: 1e-10,
            cone_margin: 1e-8,
            jordan_residual: 1e-9,
            projector_residual: 1e-10,
            born_agreement: 1e-8,
            probability_sum: 1e-9,
        }
    }
}

fn count_failures(cases: u64, f: impl Fn(u64) -> bool + Sync + Send) -> usize {
    #[cfg(feature = "parallel")]
    {
        (0..cases).into_par_iter().filter(|&s| !f(s)).count()
    }
    #[cfg(not(feature = "parallel"))]
    {
        (0..cases).filter(|&s| !f(s)).count()
    }
}

fn sample_quantities(seed_base: u64) -> Vec<(PhysicalQuantity, StateVector)> {
    let mut out = Vec::new();
    for n in 2..=4usize {
        let q = make_hermitian_quantity(&fixtures::random_hermitian(n, seed_base + n as u64))
            .expect("random Hermitian observable");
        let x = q.cone().random_normalized_state(seed_base + 100 + n as u64);
        out.push((q, x));
    }
    let omega = RealMatrix::from_rows(&[
        vec![0.0, 0.0, 0.0],
        vec![0.0, 0.0, -1.3],
        vec![0.0, 1.3, 0.0],
    ])
    .expect("static matrix");
    let q = make_rotation_quantity(3, &omega, (1.0, 0.7), &[1.0, 0.0, 0.0])
        .expect("rotation quantity");
    let x = q.cone().random_normalized_state(seed_base + 200);
    out.push((q, x));
    out
}

fn eigen_suite(tol: &Tolerances) -> CheckResult {
    let failures = count_failures(40, |seed| {
        let n = 2 + (seed % 7) as usize;
        let m = fixtures::random_symmetric(n, tol.seed_offset + 10_000 + seed);
        let Ok(eig) = sym_eigen(&m) else { return false };
        let mut rec = RealMatrix::zeros(n, n);
        for k in 0..n {
            let v = eig.vectors.column(k);
            for i in 0..n {
                for j in 0..n {
                    rec[(i, j)] += eig.eigenvalues[k] * v[i] * v[j];
                }
            }
        }
        let ok_real = rec.sub(&m).frobenius_norm() <= tol.eigen_residual * (1.0 + m.frobenius_norm());

        let h = fixtures::random_hermitian(n, tol.seed_offset + 20_000 + seed);
        let Ok(eig) = herm_eigen(&h) else { return false };
        let mut rec = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            for i in 0..n {
                for j in 0..n {
                    rec[(i, j)] +=
                        eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * eig.eigenvalues[k];
                }
            }
        }
        let ok_herm = rec.sub(&h).frobenius_norm() <= tol.eigen_residual * (1.0 + h.frobenius_norm());
        ok_real && ok_herm
    });
    CheckResult {
        name: "linalg.eigen_reconstruction",
        cases: 40,
        failures,
        detail: format!("residual <= {:e}", tol.eigen_residual),
    }
}

fn expm_suite(tol: &Tolerances) -> CheckResult {
    let failures = count_failures(20, |seed| {
        let n = 2 + (seed % 4) as usize;
        let g = fixtures::random_symmetric(n, tol.seed_offset + 30_000 + seed).scale(0.5);
        let mut r = fixtures::rng(tol.seed_offset + 40_000 + seed);
        let s = 4.0 * (fixtures::uniform(&mut r) - 0.5);
        let t = 4.0 * (fixtures::uniform(&mut r) - 0.5);
        let Ok(lhs) = mat_exp(&g, s + t) else { return false };
        let (Ok(es), Ok(et)) = (mat_exp(&g, s), mat_exp(&g, t)) else { return false };
        lhs.sub(&es.matmul(&et)).frobenius_norm() <= tol.expm_group_law
    });
    CheckResult {
        name: "linalg.expm_group_law",
        cases: 20,
        failures,
        detail: format!("||exp((s+t)G) - exp(sG)exp(tG)|| <= {:e}", tol.expm_group_law),
    }
}

fn quadrature_suite(tol: &Tolerances) -> CheckResult {
    let ns = [2usize, 5, 16, 64];
    let mut failures = 0;
    for &n in &ns {
        let Ok(rule) = gauss_hermite(n) else {
            failures += 1;
            continue;
        };
        let mut moment = std::f64::consts::PI.sqrt();
        let mut k = 0usize;
        let mut bad = false;
        while k <= 2 * n - 1 {
            let q = rule.integrate(|x| x.powi(k as i32));
            let exact = if k % 2 == 1 { 0.0 } else { moment };
            // at odd k `moment` already holds the next even moment; use it
            // as the scale since the exact odd moment is zero
            if (q - exact).abs() > tol.quad_exactness * (1.0 + moment) {
                bad = true;
            }
            if k % 2 == 0 {
                moment *= k as f64 / 2.0 + 0.5;
            }
            k += 1;
        }
        if bad {
            failures += 1;
        }
    }
    CheckResult {
        name: "linalg.quadrature_exactness",
        cases: ns.len(),
        failures,
        detail: format!("monomials to degree 2N-1 within {:e} relative", tol.quad_exactness),
    }
}

fn flow_suite(tol: &Tolerances) -> CheckResult {
    let quantities = sample_quantities(tol.seed_offset + 1);
    let mut cases = 0;
    let mut failures = 0;
    for (q, _) in &quantities {
        let gnorm = q.generator().norm().max(1e-12);
        let tmax = 5.0_f64.min(10.0 / gnorm);
        for seed in 0..25u64 {
            let x = q.cone().random_normalized_state(tol.seed_offset + 500 + seed);
            cases += 1;
            let check = || -> Result<bool> {
                let mut ok = true;
                for &t in &[-tmax, -0.3 * tmax, 0.4 * tmax, tmax] {
                    let y = q.evolve(t, &x)?;
                    ok &= (q.cone().e_value(&y)? - 1.0).abs() <= tol.flow_e_drift;
                    ok &= q.cone().contains(&y, tol.cone_margin)?;
                    ok &= (q.outcome_value(&y)? - q.outcome_value(&x)?).abs()
                        <= 1e-9 * (1.0 + q.outcome_value(&x)?.abs());
                }
                // group property
                let (s, t) = (0.4 * tmax, -0.7 * tmax);
                let two_step = q.evolve(s, &q.evolve(t, &x)?)?;
                let one_step = q.evolve(s + t, &x)?;
                let diff: f64 = crate::linalg::vec_norm(&crate::linalg::vec_sub(
                    two_step.coords(),
                    one_step.coords(),
                ));
                ok &= diff <= 1e-9;
                Ok(ok)
            };
            if !check().unwrap_or(false) {
                failures += 1;
            }
        }
    }
    CheckResult {
        name: "cone.flow_invariants",
        cases,
        failures,
        detail: "e-preservation, cone preservation, outcome invariance, group law".into(),
    }
}

fn jordan_suite(tol: &Tolerances) -> CheckResult {
    let algebras = [
        JordanAlgebra::classical(5).expect("size"),
        JordanAlgebra::hermitian(3).expect("size"),
        JordanAlgebra::spin(3).expect("size"),
    ];
    let mut cases = 0;
    let mut failures = 0;
    for alg in &algebras {
        for seed in 0..30u64 {
            cases += 1;
            let mut r = fixtures::rng(tol.seed_offset + 700 + seed);
            let x = StateVector(
                (0..alg.dimension()).map(|_| fixtures::standard_normal(&mut r)).collect(),
            );
            let check = || -> Result<bool> {
                let dec = jordan::spectral_decompose(alg, &x)?;
                let d = alg.dimension();
                let mut rec = vec![0.0; d];
                let mut idsum = vec![0.0; d];
                for (l, c) in dec.eigenvalues.iter().zip(&dec.idempotents) {
                    for i in 0..d {
                        rec[i] += l * c.coords()[i];
                        idsum[i] += c.coords()[i];
                    }
                }
                let mut ok = crate::linalg::vec_norm(&crate::linalg::vec_sub(&rec, x.coords()))
                    <= tol.jordan_residual * (1.0 + x.norm());
                ok &= crate::linalg::vec_norm(&crate::linalg::vec_sub(
                    &idsum,
                    alg.unit().coords(),
                )) <= tol.jordan_residual;
                for c in &dec.idempotents {
                    let cc = jordan::jordan_product(alg, c, c)?;
                    ok &= crate::linalg::vec_norm(&crate::linalg::vec_sub(
                        cc.coords(),
                        c.coords(),
                    )) <= tol.jordan_residual;
                }
                // cone-of-squares membership agrees with the cone model
                let w = jordan::square_in_cone(alg, &x)?;
                let in_model = alg.cone().contains(&x, 1e-9)?;
                ok &= w.in_cone == in_model || w.min_eigenvalue.abs() <= 1e-8;
                Ok(ok)
            };
            if !check().unwrap_or(false) {
                failures += 1;
            }
        }
    }
    CheckResult {
        name: "jordan.spectral_and_cone_of_squares",
        cases,
        failures,
        detail: "reconstruction, idempotents, membership agreement".into(),
    }
}

fn projector_suite(tol: &Tolerances) -> CheckResult {
    let quantities = sample_quantities(tol.seed_offset + 2);
    let mut cases = 0;
    let mut failures = 0;
    for (q, _) in &quantities {
        for seed in 0..25u64 {
            cases += 1;
            let x = q.cone().random_normalized_state(tol.seed_offset + 900 + seed);
            let check = || -> Result<bool> {
                let y = measure::q_spectral(q, &x)?;
                let yy = measure::q_spectral(q, &y)?;
                let mut ok = crate::linalg::vec_norm(&crate::linalg::vec_sub(
                    yy.coords(),
                    y.coords(),
                )) <= tol.projector_residual;
                ok &= (q.cone().e_value(&y)? - 1.0).abs() <= tol.projector_residual;
                ok &= q.cone().membership_margin(&y)? >= -tol.cone_margin;
                // flow commutation: Q(α(t)x) = Q(x)
                let gnorm = q.generator().norm().max(1e-12);
                let t = 3.0_f64.min(10.0 / gnorm);
                let qt = measure::q_spectral(q, &q.evolve(t, &x)?)?;
                ok &= crate::linalg::vec_norm(&crate::linalg::vec_sub(
                    qt.coords(),
                    y.coords(),
                )) <= 1e-9;
                // stationary states are fixed points
                let fixed = measure::q_spectral(q, &y)?;
                ok &= crate::linalg::vec_norm(&crate::linalg::vec_sub(
                    fixed.coords(),
                    y.coords(),
                )) <= tol.projector_residual;
                Ok(ok)
            };
            if !check().unwrap_or(false) {
                failures += 1;
            }
        }
    }
    CheckResult {
        name: "measure.projector_laws",
        cases,
        failures,
        detail: "idempotence, e/cone preservation, flow commutation, fixed points".into(),
    }
}

fn convergence_suite(tol: &Tolerances) -> CheckResult {
    let failures = count_failures(10, |seed| {
        let mut r = fixtures::rng(tol.seed_offset + 1_300 + seed);
        let omega = 1.0 + 0.2 * fixtures::uniform(&mut r);
        let a = observable_with_gap(2, omega, tol.seed_offset + 1_400 + seed);
        let Ok(q) = make_hermitian_quantity(&a) else { return false };
        let x = q.cone().random_normalized_state(tol.seed_offset + 1_500 + seed);
        let Ok(qx) = measure::q_spectral(&q, &x) else { return false };
        let mut last = f64::INFINITY;
        for eps in [1.0, 0.3, 0.1, 0.03, 0.01] {
            let Ok(y) = measure::q_numeric(&q, &x, eps, 64) else { return false };
            let err = crate::linalg::vec_norm(&crate::linalg::vec_sub(y.coords(), qx.coords()));
            if err >= last {
                return false;
            }
            if eps == 0.01 && err > 1e-6 {
                return false;
            }
            last = err;
        }
        true
    });
    CheckResult {
        name: "measure.gaussian_average_convergence",
        cases: 10,
        failures,
        detail: format!("strictly decreasing over the epsilon schedule, <= {:e} at 0.01", 1e-6_f64.min(tol.born_agreement.max(1e-6))),
    }
}

/// Hermitian observable with eigenvalue gap exactly `omega` and a random
/// seeded eigenbasis.
pub fn observable_with_gap(n: usize, omega: f64, seed: u64) -> ComplexMatrix {
    let h = fixtures::random_hermitian(n, seed);
    let eig = herm_eigen(&h).expect("random Hermitian");
    // eigenvalues 0, omega, 2*omega, ... in the sampled basis
    let mut m = ComplexMatrix::zeros(n, n);
    for k in 0..n {
        let lam = omega * k as f64;
        for i in 0..n {
            for j in 0..n {
                m[(i, j)] += eig.vectors[(i, k)] * eig.vectors[(j, k)].conj() * lam;
            }
        }
    }
    // symmetrize away rounding
    m.add(&m.adjoint()).scale(num_complex::Complex64::new(0.5, 0.0))
}

fn born_suite(tol: &Tolerances) -> CheckResult {
    let failures = count_failures(60, |seed| {
        let n = 2 + (seed % 3) as usize;
        let a = fixtures::random_hermitian(n, tol.seed_offset + 2_000 + seed);
        let rho = fixtures::random_density(n, tol.seed_offset + 3_000 + seed);
        let Ok(q) = make_hermitian_quantity(&a) else { return false };
        let Ok(x) = q.cone().matrix_to_state(&rho) else { return false };
        let Ok(pipeline) = measure::outcome_distribution(&q, &x, Route::Spectral, None) else {
            return false;
        };
        let Ok(oracle) = measure::born_oracle(&a, &rho, None) else { return false };
        measure::distribution_distance(&pipeline, &oracle, tol.born_agreement)
            <= tol.born_agreement
    });
    CheckResult {
        name: "measure.born_equivalence",
        cases: 60,
        failures,
        detail: format!("pipeline matches the Born oracle within {:e}", tol.born_agreement),
    }
}

fn probability_suite(tol: &Tolerances) -> CheckResult {
    let quantities = sample_quantities(tol.seed_offset + 3);
    let mut cases = 0;
    let mut failures = 0;
    for (q, _) in &quantities {
        for seed in 0..20u64 {
            cases += 1;
            let x = q.cone().random_normalized_state(tol.seed_offset + 4_000 + seed);
            let check = || -> Result<bool> {
                let d = measure::outcome_distribution(q, &x, Route::Spectral, None)?;
                let mut ok = d.entries.iter().all(|e| e.probability >= 0.0);
                ok &= (d.total_probability() - 1.0).abs() <= tol.probability_sum;
                ok &= (d.expectation() - q.outcome_value(&x)?).abs() <= 1e-9;
                ok &= d.entries.windows(2).all(|w| w[0].value > w[1].value);
                Ok(ok)
            };
            if !check().unwrap_or(false) {
                failures += 1;
            }
        }
    }
    CheckResult {
        name: "measure.probability_structure",
        cases,
        failures,
        detail: "p >= 0, sums to 1, expectation consistency, descending values".into(),
    }
}

fn classical_suite(tol: &Tolerances) -> CheckResult {
    let mut cases = 0;
    let mut failures = 0;
    for d in 2..=10usize {
        cases += 1;
        let check = || -> Result<bool> {
            let cone = ConeModel::simplex(d)?;
            let outcome: Vec<f64> = (0..d).map(|i| i as f64).collect();
            let q = PhysicalQuantity::from_raw(cone, RealMatrix::zeros(d, d), outcome, true)?;
            let x = cone.random_normalized_state(tol.seed_offset + 6_000 + d as u64);
            let dist = measure::outcome_distribution(&q, &x, Route::Spectral, Some(1e-12))?;
            if dist.entries.len() != d {
                return Ok(false);
            }
            // values descend as d-1, ..., 0; coordinates come back exactly
            Ok(dist
                .entries
                .iter()
                .enumerate()
                .all(|(k, e)| (e.probability - x.coords()[d - 1 - k]).abs() <= 1e-12))
        };
        if !check().unwrap_or(false) {
            failures += 1;
        }
    }
    CheckResult {
        name: "measure.classical_limit",
        cases,
        failures,
        detail: "simplex distribution equals state coordinates to 1e-12".into(),
    }
}

fn isomorphism_suite(tol: &Tolerances) -> CheckResult {
    let failures = count_failures(40, |seed| {
        let mut r = fixtures::rng(tol.seed_offset + 5_000 + seed);
        let x = StateVector((0..4).map(|_| fixtures::standard_normal(&mut r)).collect());
        let y = StateVector((0..4).map(|_| fixtures::standard_normal(&mut r)).collect());
        let spin = JordanAlgebra::spin(3).expect("size");
        let herm = JordanAlgebra::hermitian(2).expect("size");
        let check = || -> Result<bool> {
            let lhs = jordan::spin_to_herm2(&jordan::jordan_product(&spin, &x, &y)?)?;
            let rhs = jordan::jordan_product(
                &herm,
                &jordan::spin_to_herm2(&x)?,
                &jordan::spin_to_herm2(&y)?,
            )?;
            let mut ok = crate::linalg::vec_norm(&crate::linalg::vec_sub(
                lhs.coords(),
                rhs.coords(),
            )) <= 1e-10;
            let back = jordan::herm2_to_spin(&jordan::spin_to_herm2(&x)?)?;
            ok &= crate::linalg::vec_norm(&crate::linalg::vec_sub(
                back.coords(),
                x.coords(),
            )) <= 1e-12;
            Ok(ok)
        };
        check().unwrap_or(false)
    });
    CheckResult {
        name: "jordan.spin_herm2_isomorphism",
        cases: 40,
        failures,
        detail: "product morphism within 1e-10, round trip within 1e-12".into(),
    }
}

pub fn run_all() -> Vec<CheckResult> {
    run_all_with(&Tolerances::default())
}

pub fn run_all_with(tol: &Tolerances) -> Vec<CheckResult> {
    vec![
        eigen_suite(tol),
        expm_suite(tol),
        quadrature_suite(tol),
        flow_suite(tol),
        jordan_suite(tol),
        isomorphism_suite(tol),
        projector_suite(tol),
        convergence_suite(tol),
        born_suite(tol),
        probability_suite(tol),
        classical_suite(tol),
    ]
}
