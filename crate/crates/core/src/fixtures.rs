//! Seeded random inputs for tests, the self-check suite, and benches.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::linalg::{ComplexMatrix, RealMatrix};

pub fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian(rng: &mut ChaCha8Rng) -> f64 {
    // Box-Muller
    let u1: f64 = rng.gen_range(f64::EPSILON..1.0);
    let u2: f64 = rng.gen_range(0.0..1.0);
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

pub fn random_symmetric(n: usize, seed: u64) -> RealMatrix {
    let mut r = rng(seed);
    let mut m = RealMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let v = gaussian(&mut r);
            m[(i, j)] = v;
            m[(j, i)] = v;
        }
    }
    m
}

pub fn random_hermitian(n: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    random_hermitian_with(n, &mut r)
}

pub fn random_hermitian_with(n: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    let mut m = ComplexMatrix::zeros(n, n);
    for i in 0..n {
        m[(i, i)] = Complex64::new(gaussian(r), 0.0);
        for j in (i + 1)..n {
            let z = Complex64::new(gaussian(r), gaussian(r));
            m[(i, j)] = z;
            m[(j, i)] = z.conj();
        }
    }
    m
}

/// Random density matrix: G G† / Tr(G G†) for a complex Gaussian G.
pub fn random_density(n: usize, seed: u64) -> ComplexMatrix {
    let mut r = rng(seed);
    random_density_with(n, &mut r)
}

pub fn random_density_with(n: usize, r: &mut ChaCha8Rng) -> ComplexMatrix {
    let g = ComplexMatrix::from_fn(n, n, |_, _| Complex64::new(gaussian(r), gaussian(r)));
    let p = g.matmul(&g.adjoint());
    let t = p.trace().re;
    p.scale(Complex64::new(1.0 / t, 0.0))
}

pub fn random_unit_vector(n: usize, r: &mut ChaCha8Rng) -> Vec<f64> {
    loop {
        let v: Vec<f64> = (0..n).map(|_| gaussian(r)).collect();
        let norm = crate::linalg::vec_norm(&v);
        if norm > 1e-6 {
            return v.into_iter().map(|x| x / norm).collect();
        }
    }
}

pub fn uniform(r: &mut ChaCha8Rng) -> f64 {
    r.gen_range(0.0..1.0)
}

pub fn standard_normal(r: &mut ChaCha8Rng) -> f64 {
    gaussian(r)
}
