//! Laguerre polynomials, factorial radicals, and Gauss–generalized-Laguerre
//! quadrature.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use nalgebra::{DMatrix, SymmetricEigen};

use crate::error::{Error, Result};

/// Generalized Laguerre polynomial `L_n^alpha(x)` by upward recurrence.
pub fn laguerre_poly(n: usize, alpha: f64, x: f64) -> Result<f64> {
    if !(alpha > -1.0) {
        return Err(Error::domain(format!("laguerre alpha must exceed -1, got {alpha}")));
    }
    Ok(laguerre_pair(n, alpha, x).0)
}

/// Returns `(L_n^alpha(x), L_{n-1}^alpha(x))`; the second entry is 0 for n = 0.
#[inline]
pub(crate) fn laguerre_pair(n: usize, alpha: f64, x: f64) -> (f64, f64) {
    let mut prev = 0.0;
    let mut cur = 1.0;
    for k in 0..n {
        let kf = k as f64;
        let next = ((2.0 * kf + 1.0 + alpha - x) * cur - (kf + alpha) * prev) / (kf + 1.0);
        prev = cur;
        cur = next;
    }
    (cur, prev)
}

const RESCALE_BITS: i32 = 512;

/// Product accumulator carrying a separate power-of-two exponent so long
/// factorial ranges neither overflow nor lose precision through logarithms.
#[derive(Clone, Copy)]
struct ScaledProduct {
    mantissa: f64,
    exp2: i64,
}

impl ScaledProduct {
    fn one() -> Self {
        ScaledProduct { mantissa: 1.0, exp2: 0 }
    }

    fn renormalize(&mut self) {
        let hi = 2f64.powi(RESCALE_BITS);
        let lo = 2f64.powi(-RESCALE_BITS);
        while self.mantissa.abs() > hi {
            self.mantissa *= lo;
            self.exp2 += RESCALE_BITS as i64;
        }
        while self.mantissa != 0.0 && self.mantissa.abs() < lo {
            self.mantissa *= hi;
            self.exp2 -= RESCALE_BITS as i64;
        }
    }

    fn mul(&mut self, k: f64) {
        self.mantissa *= k;
        self.renormalize();
    }

    fn div(&mut self, k: f64) {
        self.mantissa /= k;
        self.renormalize();
    }

    fn sqrt(self) -> f64 {
        let half = self.exp2.div_euclid(2);
        let odd = self.exp2.rem_euclid(2);
        let m = if odd == 1 { self.mantissa * 2.0 } else { self.mantissa };
        m.sqrt() * 2f64.powi(half as i32)
    }
}

/// `sqrt(prod num_i! / prod den_j!)`.
///
/// Arguments are paired largest-with-largest so only the factors that do not
/// cancel are multiplied.
pub fn sqrt_factorial_ratio(num: &[u64], den: &[u64]) -> f64 {
    let mut a: Vec<u64> = num.to_vec();
    let mut b: Vec<u64> = den.to_vec();
    a.sort_unstable_by(|x, y| y.cmp(x));
    b.sort_unstable_by(|x, y| y.cmp(x));
    let len = a.len().max(b.len());
    a.resize(len, 0);
    b.resize(len, 0);
    let mut acc = ScaledProduct::one();
    for (&top, &bottom) in a.iter().zip(&b) {
        if top > bottom {
            for k in bottom + 1..=top {
                acc.mul(k as f64);
            }
        } else {
            for k in top + 1..=bottom {
                acc.div(k as f64);
            }
        }
    }
    acc.sqrt()
}

/// `sqrt(prod num / prod den)` over plain integers.
pub(crate) fn sqrt_int_ratio(num: &[u64], den: &[u64]) -> f64 {
    let mut acc = ScaledProduct::one();
    for &k in num {
        acc.mul(k as f64);
    }
    for &k in den {
        acc.div(k as f64);
    }
    acc.sqrt()
}

/// A `k`-point Gauss rule for the weight `x^alpha e^{-x}` on `(0, inf)`.
#[derive(Debug, Clone, PartialEq)]
pub struct QuadratureRule {
    pub order: usize,
    pub alpha: f64,
    pub nodes: Vec<f64>,
    pub weights: Vec<f64>,
}

impl QuadratureRule {
    /// `sum_i w_i f(x_i)`.
    pub fn integrate(&self, mut f: impl FnMut(f64) -> f64) -> f64 {
        self.nodes.iter().zip(&self.weights).map(|(&x, &w)| w * f(x)).sum()
    }
}

/// Gauss–generalized-Laguerre rule of order `k`.
///
/// Nodes are the eigenvalues of the Jacobi matrix, polished by Newton steps on
/// `L_k^alpha`. Weights use the Christoffel form `1 / (x L_k'(x)^2)`, evaluated
/// in log space and normalized to `Gamma(alpha + 1)`, which keeps the tiny
/// outer weights relatively accurate where eigenvector components are not.
pub fn gauss_gen_laguerre(k: usize, alpha: f64) -> Result<QuadratureRule> {
    if k == 0 {
        return Err(Error::domain("quadrature order must be positive"));
    }
    if !(alpha > -1.0) {
        return Err(Error::domain(format!("quadrature alpha must exceed -1, got {alpha}")));
    }
    let mu0 = statrs::function::gamma::gamma(alpha + 1.0);
    if !mu0.is_finite() {
        return Err(Error::domain(format!("Gamma({}) overflows", alpha + 1.0)));
    }
    if k == 1 {
        return Ok(QuadratureRule { order: 1, alpha, nodes: vec![alpha + 1.0], weights: vec![mu0] });
    }

    let mut jacobi = DMatrix::<f64>::zeros(k, k);
    for i in 0..k {
        let fi = i as f64;
        jacobi[(i, i)] = 2.0 * fi + 1.0 + alpha;
        if i > 0 {
            let off = (fi * (fi + alpha)).sqrt();
            jacobi[(i, i - 1)] = off;
            jacobi[(i - 1, i)] = off;
        }
    }
    let eig = SymmetricEigen::try_new(jacobi, f64::EPSILON, 200 * k)
        .ok_or_else(|| Error::Convergence(format!("Jacobi matrix eigensolve (k={k}, alpha={alpha})")))?;
    let mut nodes: Vec<f64> = eig.eigenvalues.iter().copied().collect();
    nodes.sort_by(|a, b| a.partial_cmp(b).expect("finite eigenvalues"));

    let derivative = |x: f64| -> (f64, f64) {
        let (lk, lkm1) = laguerre_pair(k, alpha, x);
        (lk, (k as f64 * lk - (k as f64 + alpha) * lkm1) / x)
    };

    let mut log_w = Vec::with_capacity(k);
    for x in nodes.iter_mut() {
        for _ in 0..8 {
            let (p, dp) = derivative(*x);
            let step = p / dp;
            *x -= step;
            if step.abs() <= 4.0 * f64::EPSILON * x.abs() {
                break;
            }
        }
        if !(*x > 0.0) || !x.is_finite() {
            return Err(Error::Convergence(format!("node refinement failed (k={k}, alpha={alpha})")));
        }
        let (_, dp) = derivative(*x);
        log_w.push(-x.ln() - 2.0 * dp.abs().ln());
    }
    for pair in nodes.windows(2) {
        if !(pair[1] > pair[0]) {
            return Err(Error::Convergence(format!("nodes not distinct (k={k}, alpha={alpha})")));
        }
    }
    let max_log = log_w.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut weights: Vec<f64> = log_w.iter().map(|lw| (lw - max_log).exp()).collect();
    // summing smallest first
    let total: f64 = weights.iter().rev().sum();
    for w in weights.iter_mut() {
        *w *= mu0 / total;
    }
    Ok(QuadratureRule { order: k, alpha, nodes, weights })
}

type RuleCache = Mutex<HashMap<(usize, u64), Arc<QuadratureRule>>>;

/// Shared, lazily built rules; each `(k, alpha)` is solved once per process.
pub fn cached_rule(k: usize, alpha: f64) -> Result<Arc<QuadratureRule>> {
    static CACHE: OnceLock<RuleCache> = OnceLock::new();
    let cache = CACHE.get_or_init(Default::default);
    let key = (k, alpha.to_bits());
    if let Some(rule) = cache.lock().expect("rule cache poisoned").get(&key) {
        return Ok(Arc::clone(rule));
    }
    let rule = Arc::new(gauss_gen_laguerre(k, alpha)?);
    cache.lock().expect("rule cache poisoned").entry(key).or_insert_with(|| Arc::clone(&rule));
    Ok(rule)
}
