//! Shift operators between the `S_nl` families of neighbouring `l`.
//!
//! `S_(n,l+1) = A_(n+1,l) S_(n+1,l)` and `S_nl = A+_nl S_(n-1,l+1)` with
//!
//! ```text
//! A_nl  = -(l+3/2)/sqrt(n(n+2l+3)) * ( d/dr - (l+1)/r + alpha_nl/(l+3/2))
//! A+_nl = -(l+3/2)/sqrt(n(n+2l+3)) * (-d/dr - (l+2)/r + alpha_nl/(l+3/2))
//! ```
//!
//! and `alpha_nl = n + l + 3/2`. The tilde variants act on `R_nl = r^(1/2) S_nl`
//! and carry `-(l+3/2)/r` in both operators.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::radial_basis::{BasisIndex, LengthScale, RadialFunction};
use crate::special_fn::sqrt_factorial_ratio;
use crate::su11::SparseExpansion;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum ShiftKind {
    /// `A_nl`: `S_nl -> S_(n-1,l+1)`.
    A,
    /// `A+_nl`: `S_(n-1,l+1) -> S_nl`.
    ADagger,
}

/// `prefactor * (derivative_coeff d/dr + inverse_r_coeff / r + constant_coeff)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ShiftOperatorSpec {
    pub n: u32,
    pub l: u32,
    pub kind: ShiftKind,
    pub prefactor: f64,
    pub derivative_coeff: f64,
    pub inverse_r_coeff: f64,
    pub constant_coeff: f64,
}

fn alpha(n: u32, l: u32) -> f64 {
    n as f64 + l as f64 + 1.5
}

/// `K_nl = -alpha_nl^2 / (l+3/2)^2`.
pub fn factorization_constant(n: u32, l: u32) -> f64 {
    let t = l as f64 + 1.5;
    -(alpha(n, l) / t).powi(2)
}

/// `E - K_nl = n(n+2l+3)/(l+3/2)^2`, the squared norm of the unnormalized
/// shift image.
pub fn shift_norm_squared(n: u32, l: u32) -> f64 {
    let t = l as f64 + 1.5;
    (n as f64 * (n + 2 * l + 3) as f64) / (t * t)
}

pub fn shift_spec(n: u32, l: u32, kind: ShiftKind) -> Result<ShiftOperatorSpec> {
    if n == 0 {
        return Err(Error::Annihilated { l });
    }
    let t = l as f64 + 1.5;
    let (derivative_coeff, inverse_r_coeff) = match kind {
        ShiftKind::A => (1.0, -(l as f64 + 1.0)),
        ShiftKind::ADagger => (-1.0, -(l as f64 + 2.0)),
    };
    Ok(ShiftOperatorSpec {
        n,
        l,
        kind,
        prefactor: -t / (n as f64 * (n + 2 * l + 3) as f64).sqrt(),
        derivative_coeff,
        inverse_r_coeff,
        constant_coeff: alpha(n, l) / t,
    })
}

impl ShiftOperatorSpec {
    /// The operator acting on `R = r^(1/2) S`.
    pub fn tilde(self) -> Self {
        ShiftOperatorSpec { inverse_r_coeff: -(self.l as f64 + 1.5), ..self }
    }

    /// Drops the normalization, leaving the bare factorization operator.
    pub fn unnormalized(self) -> Self {
        ShiftOperatorSpec { prefactor: 1.0, ..self }
    }

    /// Applies the operator analytically. At scale `b` the radial variable is
    /// `r/b`, so `d/dr` and `1/r` pick up a factor `b`.
    pub fn apply(&self, f: &RadialFunction) -> RadialFunction {
        let b = f.scale().get();
        f.derivative()
            .scaled(self.derivative_coeff * b)
            .add(&f.mul_r_pow(-1.0).scaled(self.inverse_r_coeff * b))
            .add(&f.scaled(self.constant_coeff))
            .scaled(self.prefactor)
    }
}

/// `S_(n,l+1)` over `{S_il : i <= n+1}`.
pub fn expand_l_plus_1(n: u32, l: u32) -> SparseExpansion {
    let (nu, lu) = (n as u64, l as u64);
    let t = l as f64 + 1.5;
    let pre = -t / ((n as f64 + 1.0) * (n + 2 * l + 4) as f64).sqrt();
    let mut e = SparseExpansion::exact();
    e.add(BasisIndex::new(n + 1, l), pre * (n as f64 + 1.0) / t);
    for i in 0..=n {
        let iu = i as u64;
        let rad = sqrt_factorial_ratio(&[nu + 1, iu + 2 * lu + 2], &[iu, nu + 2 * lu + 3]);
        e.add(BasisIndex::new(i, l), -2.0 * pre * rad);
    }
    e
}

/// `S_(n,l+2)` over `{S_il : i <= n+2}`.
pub fn expand_l_plus_2(n: u32, l: u32) -> SparseExpansion {
    let (nu, lu) = (n as u64, l as u64);
    let mut e = SparseExpansion::exact();
    let lead = ((n + 1) as f64 * (n + 2) as f64 / ((n + 2 * l + 6) as f64 * (n + 2 * l + 5) as f64)).sqrt();
    e.add(BasisIndex::new(n + 2, l), lead);
    let (nf, lf) = (n as f64, l as f64);
    for i in 0..=n + 1 {
        let c =
            (2.0 * lf + 4.0) * (2.0 * lf + 3.0) * nf - (2.0 * lf + 5.0) * (2.0 * lf + 4.0) * i as f64 + (2.0 * lf + 4.0) * (2.0 * lf + 3.0);
        let iu = i as u64;
        let rad = sqrt_factorial_ratio(&[nu, iu + 2 * lu + 2], &[iu, nu + 2 * lu + 6]);
        e.add(BasisIndex::new(i, l), c * rad);
    }
    e
}

/// `S_(n,l+k)` over `{S_il}`, composed from `k` single shifts.
pub fn expand_l_plus_k(n: u32, l: u32, k: u32) -> SparseExpansion {
    let mut current = SparseExpansion::exact();
    current.add(BasisIndex::new(n, l + k), 1.0);
    for step in (0..k).rev() {
        let target = l + step;
        let mut next = SparseExpansion::exact();
        for (idx, c) in current.iter() {
            for (j, d) in expand_l_plus_1(idx.n, target).iter() {
                next.add(j, c * d);
            }
        }
        current = next;
    }
    current
}

/// Applies the shift to its source state and returns the largest pointwise
/// deviation from the target state on `grid`.
///
/// For [`ShiftKind::A`] the pair is `A_nl S_nl` vs `S_(n-1,l+1)`; for
/// [`ShiftKind::ADagger`] it is `A+_nl S_(n-1,l+1)` vs `S_nl`.
pub fn verify_shift_with(kind: ShiftKind, n: u32, l: u32, grid: &[f64]) -> Result<f64> {
    let spec = shift_spec(n, l, kind)?;
    let (src, dst) = match kind {
        ShiftKind::A => (BasisIndex::new(n, l), BasisIndex::new(n - 1, l + 1)),
        ShiftKind::ADagger => (BasisIndex::new(n - 1, l + 1), BasisIndex::new(n, l)),
    };
    let b = LengthScale::UNIT;
    let image = spec.apply(&RadialFunction::basis(src, b));
    let target = RadialFunction::basis(dst, b);
    let mut worst: f64 = 0.0;
    for &r in grid {
        if !(r > 0.0) {
            return Err(Error::domain(format!("grid point {r} is not positive")));
        }
        worst = worst.max((image.eval(r) - target.eval(r)).abs());
    }
    Ok(worst)
}

/// `max |A_nl S_nl - S_(n-1,l+1)|` on `grid`.
pub fn verify_shift_pointwise(n: u32, l: u32, grid: &[f64]) -> Result<f64> {
    verify_shift_with(ShiftKind::A, n, l, grid)
}

/// Largest deviation of `(A~+ A~ + K_nl) R_nl` from `-R_nl` on `grid`.
///
/// Unlike the normalized operators this also holds at `n = 0`, where
/// `A~_0l R_0l = 0`.
pub fn factorized_hamiltonian_residual(n: u32, l: u32, grid: &[f64]) -> Result<f64> {
    let t = l as f64 + 1.5;
    let c0 = alpha(n, l) / t;
    let bare = |d: f64| ShiftOperatorSpec {
        n,
        l,
        kind: ShiftKind::A,
        prefactor: 1.0,
        derivative_coeff: d,
        inverse_r_coeff: -t,
        constant_coeff: c0,
    };
    let r_nl = RadialFunction::basis(BasisIndex::new(n, l), LengthScale::UNIT).mul_r_pow(0.5);
    let h = bare(-1.0).apply(&bare(1.0).apply(&r_nl)).add(&r_nl.scaled(factorization_constant(n, l)));
    let mut worst: f64 = 0.0;
    for &r in grid {
        if !(r > 0.0) {
            return Err(Error::domain(format!("grid point {r} is not positive")));
        }
        worst = worst.max((h.eval(r) + r_nl.eval(r)).abs());
    }
    Ok(worst)
}

/// Projections `<S_il | A+_(n+1,l) A_(n+1,l) S_(n+1,l)>` for `i <= n+2`,
/// which should be `delta_(i,n+1)`.
pub fn round_trip_projections(n: u32, l: u32) -> Result<Vec<f64>> {
    let b = LengthScale::UNIT;
    let a = shift_spec(n + 1, l, ShiftKind::A)?;
    let ad = shift_spec(n + 1, l, ShiftKind::ADagger)?;
    let back = ad.apply(&a.apply(&RadialFunction::basis(BasisIndex::new(n + 1, l), b)));
    (0..=n + 2).map(|i| RadialFunction::basis(BasisIndex::new(i, l), b).inner(&back, 0)).collect()
}
