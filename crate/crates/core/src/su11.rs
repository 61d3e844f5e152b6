//! SU(1,1) ladder algebra on the radial functions of one angular momentum.
//!
//! `T3 S_nl = (n+l+3/2) S_nl`, `T+ S_nl = sqrt((n+1)(n+2l+3)) S_(n+1,l)`,
//! `T- S_nl = sqrt(n(n+2l+2)) S_(n-1,l)`. The operators `r` and `r d/dr`
//! are linear in the generators; `1/r` and `d/dr` follow from the recurrence
//! for `<m|1/r|n>`.

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use serde::{Deserialize, Serialize};

use crate::radial_basis::BasisIndex;
use crate::special_fn::sqrt_factorial_ratio;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct LadderCoefficients {
    pub t3: f64,
    pub t_plus: f64,
    pub t_minus: f64,
}

pub fn ladder_coeffs(idx: BasisIndex) -> LadderCoefficients {
    let n = idx.n as f64;
    let l = idx.l as f64;
    LadderCoefficients { t3: n + l + 1.5, t_plus: ((n + 1.0) * (n + 2.0 * l + 3.0)).sqrt(), t_minus: (n * (n + 2.0 * l + 2.0)).sqrt() }
}

/// `t(t-1)` with `t = l + 3/2`.
pub fn casimir_eigenvalue(l: u32) -> f64 {
    let l = l as f64;
    (l + 1.5) * (l + 0.5)
}

/// Finite coefficient list `{(n', l') -> value}`.
#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
pub struct SparseExpansion {
    terms: BTreeMap<BasisIndex, f64>,
    /// Set when an infinite series was cut at `n_max`.
    pub truncated: bool,
    pub n_max: Option<u32>,
}

impl SparseExpansion {
    pub fn exact() -> Self {
        SparseExpansion::default()
    }

    pub fn truncated_at(n_max: u32) -> Self {
        SparseExpansion { terms: BTreeMap::new(), truncated: true, n_max: Some(n_max) }
    }

    /// Accumulates into an entry, dropping it if the sum vanishes.
    pub fn add(&mut self, idx: BasisIndex, value: f64) {
        let key = BasisIndex { m: None, ..idx };
        let entry = self.terms.entry(key).or_insert(0.0);
        *entry += value;
        if *entry == 0.0 {
            self.terms.remove(&key);
        }
    }

    pub fn coeff(&self, n: u32, l: u32) -> f64 {
        self.terms.get(&BasisIndex::new(n, l)).copied().unwrap_or(0.0)
    }

    pub fn iter(&self) -> impl Iterator<Item = (BasisIndex, f64)> + '_ {
        self.terms.iter().map(|(k, v)| (*k, *v))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn norm_squared(&self) -> f64 {
        self.terms.values().map(|c| c * c).sum()
    }
}

/// Operators whose action on `S_nl` follows from the ladder algebra.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ActionOp {
    R,
    RDdr,
    RInv,
    Ddr,
}

/// `sqrt(i! (n+2l+2)! / (n! (i+2l+2)!))` for `i >= n`; the shared radical of
/// the `1/r` and `d/dr` series.
fn upper_radical(i: u32, n: u32, l: u32) -> f64 {
    let (i, n, l) = (i as u64, n as u64, l as u64);
    sqrt_factorial_ratio(&[i, n + 2 * l + 2], &[n, i + 2 * l + 2])
}

/// Expansion of `op S_nl` over `{S_il}` (b = 1). `r` and `r d/dr` are exact
/// and ignore `n_max`; `1/r` and `d/dr` are cut at `i <= n_max`.
pub fn expand_action(op: ActionOp, idx: BasisIndex, n_max: u32) -> SparseExpansion {
    let (n, l) = (idx.n, idx.l);
    let lc = ladder_coeffs(idx);
    match op {
        ActionOp::R | ActionOp::RDdr => {
            let mut e = SparseExpansion::exact();
            let (diag, up, down) =
                if op == ActionOp::R { (lc.t3, -0.5 * lc.t_plus, -0.5 * lc.t_minus) } else { (-0.5, 0.5 * lc.t_plus, -0.5 * lc.t_minus) };
            e.add(BasisIndex::new(n, l), diag);
            e.add(BasisIndex::new(n + 1, l), up);
            if n > 0 {
                e.add(BasisIndex::new(n - 1, l), down);
            }
            e
        }
        ActionOp::RInv => {
            let mut e = SparseExpansion::truncated_at(n_max);
            let inv = 1.0 / (l as f64 + 1.0);
            for i in 0..=n_max {
                let rad = if i >= n { upper_radical(i, n, l) } else { upper_radical(n, i, l) };
                e.add(BasisIndex::new(i, l), inv * rad);
            }
            e
        }
        ActionOp::Ddr => {
            let mut e = SparseExpansion::truncated_at(n_max);
            for i in 0..=n_max {
                if i > n {
                    e.add(BasisIndex::new(i, l), upper_radical(i, n, l));
                } else if i < n {
                    e.add(BasisIndex::new(i, l), -upper_radical(n, i, l));
                }
            }
            e
        }
    }
}

/// Truncated `(T3, T+, T-)` on `n = 0..=n_max` at fixed `l`.
pub fn ladder_matrices(l: u32, n_max: u32) -> (DMatrix<f64>, DMatrix<f64>, DMatrix<f64>) {
    let dim = n_max as usize + 1;
    let mut t3 = DMatrix::zeros(dim, dim);
    let mut tp = DMatrix::zeros(dim, dim);
    let mut tm = DMatrix::zeros(dim, dim);
    for n in 0..dim {
        let c = ladder_coeffs(BasisIndex::new(n as u32, l));
        t3[(n, n)] = c.t3;
        if n + 1 < dim {
            tp[(n + 1, n)] = c.t_plus;
        }
        if n > 0 {
            tm[(n - 1, n)] = c.t_minus;
        }
    }
    (t3, tp, tm)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CommutatorResiduals {
    /// `[T3, T+] - T+`
    pub t3_plus: f64,
    /// `[T3, T-] + T-`
    pub t3_minus: f64,
    /// `[T+, T-] + 2 T3`
    pub plus_minus: f64,
    /// `T3^2 - (T+T- + T-T+)/2 - t(t-1)`
    pub casimir: f64,
}

impl CommutatorResiduals {
    pub fn max(&self) -> f64 {
        self.t3_plus.max(self.t3_minus).max(self.plus_minus).max(self.casimir)
    }
}

fn interior_max(m: &DMatrix<f64>, last: usize) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..=last {
        for j in 0..=last {
            worst = worst.max(m[(i, j)].abs());
        }
    }
    worst
}

/// Checks the algebra on truncated matrices, ignoring the rows and columns
/// spoiled by the cutoff (indices above `n_max - 2`).
pub fn verify_commutators(l: u32, n_max: u32) -> CommutatorResiduals {
    let n_max = n_max.max(3);
    let (t3, tp, tm) = ladder_matrices(l, n_max);
    let last = n_max as usize - 2;
    let id = DMatrix::<f64>::identity(t3.nrows(), t3.ncols());
    let c3p = &t3 * &tp - &tp * &t3 - &tp;
    let c3m = &t3 * &tm - &tm * &t3 + &tm;
    let cpm = &tp * &tm - &tm * &tp + 2.0 * &t3;
    let cas = &t3 * &t3 - 0.5 * (&tp * &tm + &tm * &tp) - casimir_eigenvalue(l) * id;
    CommutatorResiduals {
        t3_plus: interior_max(&c3p, last),
        t3_minus: interior_max(&c3m, last),
        plus_minus: interior_max(&cpm, last),
        casimir: interior_max(&cas, last),
    }
}
