use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::matrix::{ComplexMatrix, RealMatrix};

/// Eigendecomposition of a real symmetric matrix.
///
/// Eigenvalues are sorted descending; eigenvectors are the columns of
/// `vectors`, orthonormal, each with its first significant coordinate
/// positive.
#[derive(Debug, Clone)]
pub struct EigenResult {
    pub eigenvalues: Vec<f64>,
    pub vectors: RealMatrix,
}

/// Eigendecomposition of a complex Hermitian matrix. Eigenvalues are real
/// and sorted descending; columns of `vectors` are orthonormal in the
/// complex inner product, phased so the first significant coordinate is
/// real positive.
#[derive(Debug, Clone)]
pub struct HermEigenResult {
    pub eigenvalues: Vec<f64>,
    pub vectors: ComplexMatrix,
}

const MAX_SWEEPS: usize = 64;

/// Cyclic Jacobi eigensolver for real symmetric matrices.
pub fn sym_eigen(m: &RealMatrix) -> Result<EigenResult> {
    if !m.is_square() {
        return Err(Error::Validation("sym_eigen requires a square matrix".into()));
    }
    m.check_finite()?;
    let scale = m.frobenius_norm();
    if m.sym_error() > 1e-12 * (1.0 + scale) {
        return Err(Error::Validation("sym_eigen requires a symmetric matrix".into()));
    }
    let n = m.rows();
    let mut a = m.clone();
    // symmetrize exactly so rounding in the input cannot bias rotations
    for i in 0..n {
        for j in (i + 1)..n {
            let s = 0.5 * (a[(i, j)] + a[(j, i)]);
            a[(i, j)] = s;
            a[(j, i)] = s;
        }
    }
    let mut v = RealMatrix::identity(n);

    for _sweep in 0..MAX_SWEEPS {
        let mut off = 0.0_f64;
        for i in 0..n {
            for j in (i + 1)..n {
                off += a[(i, j)] * a[(i, j)];
            }
        }
        if off.sqrt() <= 1e-15 * (1.0 + scale) {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = a[(p, q)];
                if apq.abs() <= 1e-300 {
                    continue;
                }
                let app = a[(p, p)];
                let aqq = a[(q, q)];
                // rotation annihilating a[p][q]
                let theta = (aqq - app) / (2.0 * apq);
                let t = if theta.abs() > 1e150 {
                    1.0 / (2.0 * theta)
                } else {
                    let sgn = if theta >= 0.0 { 1.0 } else { -1.0 };
                    sgn / (theta.abs() + (theta * theta + 1.0).sqrt())
                };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let akp = a[(k, p)];
                    let akq = a[(k, q)];
                    a[(k, p)] = c * akp - s * akq;
                    a[(k, q)] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[(p, k)];
                    let aqk = a[(q, k)];
                    a[(p, k)] = c * apk - s * aqk;
                    a[(q, k)] = s * apk + c * aqk;
                }
                for k in 0..n {
                    let vkp = v[(k, p)];
                    let vkq = v[(k, q)];
                    v[(k, p)] = c * vkp - s * vkq;
                    v[(k, q)] = s * vkp + c * vkq;
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(j, j)].partial_cmp(&a[(i, i)]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&i| a[(i, i)]).collect();
    let mut vectors = RealMatrix::zeros(n, n);
    for (col, &src) in order.iter().enumerate() {
        let mut vc = v.column(src);
        fix_sign_real(&mut vc);
        vectors.set_column(col, &vc);
    }
    Ok(EigenResult { eigenvalues, vectors })
}

fn fix_sign_real(v: &mut [f64]) {
    let thr = 1e-12 * crate::linalg::matrix::vec_norm(v);
    if let Some(first) = v.iter().find(|x| x.abs() > thr) {
        if *first < 0.0 {
            v.iter_mut().for_each(|x| *x = -*x);
        }
    }
}

/// Hermitian eigensolver via the real 2n x 2n embedding
/// M = X + iY  ->  [[X, -Y], [Y, X]].
///
/// Each eigenvalue of M shows up twice in the embedding; the doubled
/// eigenvectors are collapsed back to n complex orthonormal columns.
pub fn herm_eigen(m: &ComplexMatrix) -> Result<HermEigenResult> {
    if !m.is_square() {
        return Err(Error::Validation("herm_eigen requires a square matrix".into()));
    }
    m.check_finite()?;
    let scale = m.frobenius_norm();
    if m.hermiticity_error() > 1e-12 * (1.0 + scale) {
        return Err(Error::Validation("herm_eigen requires a Hermitian matrix".into()));
    }
    let n = m.rows();
    let mut big = RealMatrix::zeros(2 * n, 2 * n);
    for i in 0..n {
        for j in 0..n {
            let z = m[(i, j)];
            big[(i, j)] = z.re;
            big[(i + n, j + n)] = z.re;
            big[(i, j + n)] = -z.im;
            big[(i + n, j)] = z.im;
        }
    }
    let emb = sym_eigen(&big)?;

    let cluster_tol = 1e-8 * (1.0 + scale);
    let mut eigenvalues: Vec<f64> = Vec::with_capacity(n);
    let mut cols: Vec<Vec<Complex64>> = Vec::with_capacity(n);
    for k in 0..2 * n {
        if cols.len() == n {
            break;
        }
        let lambda = emb.eigenvalues[k];
        let w = emb.vectors.column(k);
        let mut z: Vec<Complex64> =
            (0..n).map(|i| Complex64::new(w[i], w[i + n])).collect();
        // project out accepted vectors with a nearby eigenvalue; the
        // duplicate copy of an already-taken vector dies here
        for (acc_idx, acc) in cols.iter().enumerate() {
            if (eigenvalues[acc_idx] - lambda).abs() > cluster_tol {
                continue;
            }
            let proj: Complex64 =
                acc.iter().zip(&z).map(|(a, b)| a.conj() * b).sum();
            for (zi, ai) in z.iter_mut().zip(acc) {
                *zi -= proj * ai;
            }
        }
        let norm: f64 = z.iter().map(|v| v.norm_sqr()).sum::<f64>().sqrt();
        if norm < 1e-3 {
            continue;
        }
        for zi in z.iter_mut() {
            *zi /= norm;
        }
        fix_phase(&mut z);
        eigenvalues.push(lambda);
        cols.push(z);
    }
    if cols.len() != n {
        return Err(Error::Invariant(
            "herm_eigen failed to extract a full complex eigenbasis".into(),
        ));
    }
    let mut vectors = ComplexMatrix::zeros(n, n);
    for (j, col) in cols.iter().enumerate() {
        for (i, v) in col.iter().enumerate() {
            vectors[(i, j)] = *v;
        }
    }
    Ok(HermEigenResult { eigenvalues, vectors })
}

fn fix_phase(z: &mut [Complex64]) {
    let thr = 1e-12;
    if let Some(first) = z.iter().find(|v| v.norm() > thr) {
        let phase = first / first.norm();
        let corr = phase.conj();
        z.iter_mut().for_each(|v| *v *= corr);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    fn reconstruct_real(r: &EigenResult) -> RealMatrix {
        let n = r.eigenvalues.len();
        let mut d = RealMatrix::zeros(n, n);
        for i in 0..n {
            d[(i, i)] = r.eigenvalues[i];
        }
        r.vectors.matmul(&d).matmul(&r.vectors.transpose())
    }

    #[test]
    fn diagonal_passthrough() {
        let m = RealMatrix::from_rows(&[
            vec![3.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 2.0],
        ])
        .unwrap();
        let r = sym_eigen(&m).unwrap();
        assert_eq!(r.eigenvalues, vec![3.0, 2.0, 1.0]);
        for (col, idx) in [(0usize, 0usize), (1, 2), (2, 1)] {
            let v = r.vectors.column(col);
            assert_abs_diff_eq!(v[idx], 1.0, epsilon = 1e-14);
        }
    }

    #[test]
    fn symmetric_swap() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![1.0, 0.0]]).unwrap();
        let r = sym_eigen(&m).unwrap();
        assert_abs_diff_eq!(r.eigenvalues[0], 1.0, epsilon = 1e-14);
        assert_abs_diff_eq!(r.eigenvalues[1], -1.0, epsilon = 1e-14);
        let s = 1.0 / 2.0_f64.sqrt();
        let v0 = r.vectors.column(0);
        assert_abs_diff_eq!(v0[0], s, epsilon = 1e-12);
        assert_abs_diff_eq!(v0[1], s, epsilon = 1e-12);
    }

    #[test]
    fn seeded_random_reconstruction() {
        let m = crate::fixtures::random_symmetric(8, 314159);
        let r = sym_eigen(&m).unwrap();
        let resid = reconstruct_real(&r).sub(&m).frobenius_norm();
        assert!(resid <= 1e-10 * (1.0 + m.frobenius_norm()), "residual {resid}");
        let gram = r.vectors.transpose().matmul(&r.vectors).sub(&RealMatrix::identity(8));
        assert!(gram.max_abs() <= 1e-12);
    }

    #[test]
    fn rejects_asymmetric() {
        let m = RealMatrix::from_rows(&[vec![0.0, 1.0], vec![0.0, 0.0]]).unwrap();
        assert!(sym_eigen(&m).is_err());
    }

    #[test]
    fn pauli_z_and_y() {
        let z = ComplexMatrix::from_rows(&[
            vec![Complex64::new(1.0, 0.0), Complex64::new(0.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(-1.0, 0.0)],
        ])
        .unwrap();
        let r = herm_eigen(&z).unwrap();
        assert_abs_diff_eq!(r.eigenvalues[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.eigenvalues[1], -1.0, epsilon = 1e-13);

        let y = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, -1.0)],
            vec![Complex64::new(0.0, 1.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        let r = herm_eigen(&y).unwrap();
        assert_abs_diff_eq!(r.eigenvalues[0], 1.0, epsilon = 1e-13);
        assert_abs_diff_eq!(r.eigenvalues[1], -1.0, epsilon = 1e-13);
    }

    #[test]
    fn identity_all_ones() {
        let m = ComplexMatrix::identity(5);
        let r = herm_eigen(&m).unwrap();
        for l in &r.eigenvalues {
            assert_abs_diff_eq!(*l, 1.0, epsilon = 1e-13);
        }
    }

    #[test]
    fn hermitian_random_reconstruction() {
        let m = crate::fixtures::random_hermitian(8, 2718);
        let r = herm_eigen(&m).unwrap();
        let n = 8;
        let mut rec = ComplexMatrix::zeros(n, n);
        for k in 0..n {
            let lam = r.eigenvalues[k];
            for i in 0..n {
                for j in 0..n {
                    rec[(i, j)] += r.vectors[(i, k)] * r.vectors[(j, k)].conj() * lam;
                }
            }
        }
        let resid = rec.sub(&m).frobenius_norm();
        assert!(resid <= 1e-10 * (1.0 + m.frobenius_norm()), "residual {resid}");
        let gram = r.vectors.adjoint().matmul(&r.vectors).sub(&ComplexMatrix::identity(n));
        assert!(gram.frobenius_norm() <= 1e-11, "gram {}", gram.frobenius_norm());
    }

    #[test]
    fn rejects_non_hermitian() {
        let m = ComplexMatrix::from_rows(&[
            vec![Complex64::new(0.0, 0.0), Complex64::new(1.0, 0.0)],
            vec![Complex64::new(0.0, 0.0), Complex64::new(0.0, 0.0)],
        ])
        .unwrap();
        assert!(herm_eigen(&m).is_err());
    }
}
