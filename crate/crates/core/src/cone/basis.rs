//! Fixed real coordinates for Hermitian n x n matrices.
//!
//! The ordered basis is: the n diagonal units E_jj, then for each pair
//! j < k (lexicographic) the two matrices (E_jk + E_kj)/sqrt(2) and
//! i (E_jk - E_kj)/sqrt(2). This basis is orthonormal under the trace
//! form, so the trace inner product is plain Euclidean in coordinates.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::linalg::ComplexMatrix;

pub fn dim(n: usize) -> usize {
    n * n
}

/// (j, k) pairs in the order the off-diagonal basis elements appear.
pub fn pairs(n: usize) -> impl Iterator<Item = (usize, usize)> {
    (0..n).flat_map(move |j| ((j + 1)..n).map(move |k| (j, k)))
}

pub fn coords_to_herm(n: usize, coords: &[f64]) -> Result<ComplexMatrix> {
    if coords.len() != dim(n) {
        return Err(Error::Dimension(format!(
            "expected {} coordinates for hermitian({n}), got {}",
            dim(n),
            coords.len()
        )));
    }
    let inv_sqrt2 = std::f64::consts::FRAC_1_SQRT_2;
    let mut m = ComplexMatrix::zeros(n, n);
    for j in 0..n {
        m[(j, j)] = Complex64::new(coords[j], 0.0);
    }
    let mut idx = n;
    for (j, k) in pairs(n) {
        let re = coords[idx] * inv_sqrt2;
        let im = coords[idx + 1] * inv_sqrt2;
        m[(j, k)] = Complex64::new(re, im);
        m[(k, j)] = Complex64::new(re, -im);
        idx += 2;
    }
    Ok(m)
}

pub fn herm_to_coords(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let n = m.rows();
    if !m.is_square() {
        return Err(Error::Validation("herm_to_coords requires a square matrix".into()));
    }
    if !m.is_hermitian(1e-12) {
        return Err(Error::Validation("herm_to_coords requires a Hermitian matrix".into()));
    }
    let sqrt2 = std::f64::consts::SQRT_2;
    let mut coords = Vec::with_capacity(dim(n));
    for j in 0..n {
        coords.push(m[(j, j)].re);
    }
    for (j, k) in pairs(n) {
        // average the two conjugate entries so rounding cannot leak
        let z = 0.5 * (m[(j, k)] + m[(k, j)].conj());
        coords.push(sqrt2 * z.re);
        coords.push(sqrt2 * z.im);
    }
    Ok(coords)
}

pub fn labels(n: usize) -> Vec<String> {
    let mut out: Vec<String> = (0..n).map(|j| format!("E{j}{j}")).collect();
    for (j, k) in pairs(n) {
        out.push(format!("ReE{j}{k}"));
        out.push(format!("ImE{j}{k}"));
    }
    out
}
