use crate::error::{Error, Result};
use crate::linalg::matrix::RealMatrix;

/// Squaring budget: norms above 0.5 * 2^MAX_SQUARINGS are rejected.
const MAX_SQUARINGS: u32 = 40;
const MAX_TAYLOR_TERMS: usize = 40;

/// exp(t G) by truncated Taylor series with scaling and squaring.
///
/// The argument is scaled so its Frobenius norm is at most 0.5, the series
/// is summed to stagnation, and the result squared back up. exp(0) is the
/// exact identity.
pub fn mat_exp(g: &RealMatrix, t: f64) -> Result<RealMatrix> {
    if !g.is_square() {
        return Err(Error::Validation("mat_exp requires a square matrix".into()));
    }
    g.check_finite()?;
    if !t.is_finite() {
        return Err(Error::Validation("mat_exp requires finite t".into()));
    }
    let n = g.rows();
    let a = g.scale(t);
    let norm = a.frobenius_norm();
    if norm == 0.0 {
        return Ok(RealMatrix::identity(n));
    }
    let mut s: u32 = 0;
    while norm / f64::powi(2.0, s as i32) > 0.5 {
        s += 1;
        if s > MAX_SQUARINGS {
            return Err(Error::Range(format!(
                "mat_exp: ||tG|| = {norm:.3e} exceeds the squaring budget"
            )));
        }
    }
    let a = a.scale(f64::powi(2.0, -(s as i32)));

    let mut sum = RealMatrix::identity(n);
    let mut term = RealMatrix::identity(n);
    for k in 1..=MAX_TAYLOR_TERMS {
        term = term.matmul(&a).scale(1.0 / k as f64);
        sum = sum.add(&term);
        if term.frobenius_norm() <= f64::EPSILON * sum.frobenius_norm() {
            break;
        }
    }
    let mut result = sum;
    for _ in 0..s {
        result = result.matmul(&result);
    }
    Ok(result)
}
