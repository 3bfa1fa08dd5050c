use crate::error::{Error, Result};

/// Gauss–Hermite rule for the weight e^{-x^2} on (-inf, inf).
///
/// Nodes ascend; weights are positive and sum to sqrt(pi).
#[derive(Debug, Clone)]
pub struct QuadratureRule {
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.nodes.is_empty()
    }

    pub fn integrate(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(x, w)| w * f(*x)).sum()
    }
}

pub const MAX_NODES: usize = 256;

/// Nodes and weights of the N-point Gauss–Hermite rule.
///
/// Roots of H_N are located by interlacing: the roots of H_k separate
/// those of H_{k+1}, so each level is bracketed by the previous one and
/// pinned down by bisection plus Newton polish on the orthonormal
/// three-term recurrence (which never overflows). Symmetric nodes are
/// mirrored exactly; the middle node of an odd rule is exactly zero.
pub fn gauss_hermite(n: usize) -> Result<QuadratureRule> {
    if n < 1 || n > MAX_NODES {
        return Err(Error::Validation(format!(
            "gauss_hermite: node count {n} outside 1..={MAX_NODES}"
        )));
    }
    let mut prev: Vec<f64> = Vec::new();
    for k in 1..=n {
        let bound = (2.0 * k as f64 + 1.0).sqrt();
        let mut brackets = Vec::with_capacity(k + 1);
        brackets.push(-bound);
        brackets.extend_from_slice(&prev);
        brackets.push(bound);
        let mut roots = Vec::with_capacity(k);
        for w in brackets.windows(2) {
            roots.push(bracketed_root(k, w[0], w[1]));
        }
        // mirror to kill asymmetric rounding; middle root of odd k is 0
        for i in 0..k / 2 {
            let r = 0.5 * (roots[k - 1 - i] - roots[i]);
            roots[k - 1 - i] = r;
            roots[i] = -r;
        }
        if k % 2 == 1 {
            roots[k / 2] = 0.0;
        }
        prev = roots;
    }

    let weights: Vec<f64> = prev
        .iter()
        .map(|&z| {
            let (_, dp) = hermite_orthonormal(n, z);
            2.0 / (dp * dp)
        })
        .collect();
    Ok(QuadratureRule { nodes: prev, weights })
}

/// One simple root of the degree-k orthonormal Hermite polynomial inside
/// (a, b), where the endpoints carry opposite signs.
fn bracketed_root(k: usize, mut a: f64, mut b: f64) -> f64 {
    let mut fa = hermite_orthonormal(k, a).0;
    // bisect until the interval is small, then Newton from its midpoint
    for _ in 0..40 {
        let mid = 0.5 * (a + b);
        let fm = hermite_orthonormal(k, mid).0;
        if fm == 0.0 {
            return mid;
        }
        if (fa > 0.0) == (fm > 0.0) {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    let mut z = 0.5 * (a + b);
    for _ in 0..8 {
        let (p, dp) = hermite_orthonormal(k, z);
        if dp == 0.0 {
            break;
        }
        let dz = p / dp;
        let next = z - dz;
        // stay inside the bracket
        if next <= a || next >= b {
            break;
        }
        z = next;
        if dz.abs() <= 1e-16 * (1.0 + z.abs()) {
            break;
        }
    }
    z
}

/// Value and derivative of the orthonormal Hermite polynomial of degree n
/// (orthonormal w.r.t. e^{-x^2} dx).
fn hermite_orthonormal(n: usize, x: f64) -> (f64, f64) {
    let pim4 = std::f64::consts::PI.powf(-0.25);
    let mut p1 = pim4;
    let mut p2 = 0.0_f64;
    for j in 1..=n {
        let p3 = p2;
        p2 = p1;
        p1 = x * (2.0 / j as f64).sqrt() * p2 - ((j as f64 - 1.0) / j as f64).sqrt() * p3;
    }
    let dp = (2.0 * n as f64).sqrt() * p2;
    (p1, dp)
}
