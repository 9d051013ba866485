//! One-dimensional rules on `[0,1]`: tanh-sinh nodes carried in logarithms and
//! Gauss–Jacobi rules for the weight `u^b`.

use alloc::vec::Vec;
use core::f64::consts::PI;

use nalgebra::{DMatrix, SymmetricEigen};
#[allow(unused_imports)]
use num_traits::Float;

use crate::special;

/// A tanh-sinh node `u = 1/(1+e^{−s})`, `s = π sinh t`, stored as `ln u`,
/// `ln(1−u)` and `ln(du/dt)`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct TsNode {
    pub index: i64,
    pub ln_u: f64,
    pub ln_1mu: f64,
    pub ln_jac: f64,
}

pub const TS_LOWER: f64 = -6.0;
pub const TS_UPPER: f64 = 3.5;

fn softplus(x: f64) -> f64 {
    if x > 0.0 {
        x + (-x).exp().ln_1p()
    } else {
        x.exp().ln_1p()
    }
}

/// Nodes `t = k h` on `[TS_LOWER, TS_UPPER]` with `h = 2^{−level}`; `index` is
/// `k` scaled to the finest grid so nested levels share indices.
pub fn tanh_sinh(level: u32, finest: u32) -> Vec<TsNode> {
    let h = 0.5f64.powi(level as i32);
    let lo = (TS_LOWER / h).ceil() as i64;
    let hi = (TS_UPPER / h).floor() as i64;
    let scale = 1i64 << (finest - level);
    (lo..=hi)
        .map(|k| {
            let t = k as f64 * h;
            let s = PI * t.sinh();
            let ln_u = -softplus(-s);
            let ln_1mu = -softplus(s);
            TsNode { index: k * scale, ln_u, ln_1mu, ln_jac: ln_u + ln_1mu + (PI * t.cosh()).ln() }
        })
        .collect()
}

/// Gauss–Jacobi rule for `∫₀¹ u^b g(u) du` (`b > −1`): nodes and weights.
pub fn gauss_jacobi(n: usize, b: f64) -> (Vec<f64>, Vec<f64>) {
    // Jacobi P^{(0,b)} on [−1,1], weight (1+x)^b; Golub–Welsch.
    let a = 0.0;
    let mut m = DMatrix::<f64>::zeros(n, n);
    for k in 0..n {
        let kf = k as f64;
        let s = 2.0 * kf + a + b;
        let diag = if k == 0 { (b - a) / (a + b + 2.0) } else { (b * b - a * a) / (s * (s + 2.0)) };
        m[(k, k)] = diag;
        if k + 1 < n {
            let j = kf + 1.0;
            let s = 2.0 * j + a + b;
            let off = (4.0 * j * (j + a) * (j + b) * (j + a + b) / (s * s * (s + 1.0) * (s - 1.0))).sqrt();
            m[(k, k + 1)] = off;
            m[(k + 1, k)] = off;
        }
    }
    let eig = SymmetricEigen::new(m);
    // μ₀ = ∫_{−1}^{1} (1+x)^b dx = 2^{b+1}/(b+1); mapping to [0,1] multiplies by 2^{−b−1}.
    let mu = 1.0 / (b + 1.0);
    let mut pairs: Vec<(f64, f64)> = (0..n)
        .map(|k| {
            let x = eig.eigenvalues[k];
            let v = eig.eigenvectors[(0, k)];
            ((1.0 + x) / 2.0, mu * v * v)
        })
        .collect();
    pairs.sort_by(|p, q| p.0.total_cmp(&q.0));
    pairs.into_iter().unzip()
}

/// Exact `∫₀¹ u^b (1−u)^c du`, used by tests.
pub fn beta(b: f64, c: f64) -> f64 {
    use num_complex::Complex64;
    let g = |x: f64| special::ln_gamma(Complex64::new(x, 0.0)).re;
    (g(b + 1.0) + g(c + 1.0) - g(b + c + 2.0)).exp()
}
