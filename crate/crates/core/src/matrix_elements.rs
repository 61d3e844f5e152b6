//! Closed-form radial matrix elements `<n' l'|op|n l>` for `l' - l` in
//! `{0, ±1, ±2}`.
//!
//! Every entry at `b = 1` is a rational times the square root of a ratio of
//! factorials and integers, kept symbolically as a [`ClosedForm`] so that it
//! can be evaluated in floating point or rendered exactly as a [`Surd`].

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::Zero;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{OperatorTag, RadialOperator};
use crate::radial_basis::{quadrature_me, BasisIndex, LengthScale};
use crate::special_fn::{sqrt_factorial_ratio, sqrt_int_ratio};
use crate::surd::Surd;

type Q = Ratio<i128>;

fn q(a: i128, b: i128) -> Q {
    Q::new(a, b)
}

/// `sqrt(prod num_fact! * prod num_int / (prod den_fact! * prod den_int))`.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct Radical {
    pub num_fact: Vec<u64>,
    pub den_fact: Vec<u64>,
    pub num_int: Vec<u64>,
    pub den_int: Vec<u64>,
}

impl Radical {
    pub fn one() -> Self {
        Radical::default()
    }

    pub fn factorials(num: &[u64], den: &[u64]) -> Self {
        Radical { num_fact: num.to_vec(), den_fact: den.to_vec(), ..Default::default() }
    }

    pub fn ints(num: &[u64], den: &[u64]) -> Self {
        Radical { num_int: num.to_vec(), den_int: den.to_vec(), ..Default::default() }
    }

    fn with_ints(mut self, num: &[u64], den: &[u64]) -> Self {
        self.num_int.extend_from_slice(num);
        self.den_int.extend_from_slice(den);
        self
    }

    pub fn is_zero(&self) -> bool {
        self.num_int.contains(&0)
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        sqrt_factorial_ratio(&self.num_fact, &self.den_fact) * sqrt_int_ratio(&self.num_int, &self.den_int)
    }

    /// Prime factorization of the radicand.
    pub fn prime_exponents(&self) -> BTreeMap<u64, i64> {
        let mut exps = BTreeMap::new();
        for (list, sign) in [(&self.num_fact, 1), (&self.den_fact, -1)] {
            for &n in list {
                for p in primes_up_to(n) {
                    let mut e = 0;
                    let mut pk = p;
                    while pk <= n {
                        e += (n / pk) as i64;
                        pk = match pk.checked_mul(p) {
                            Some(v) => v,
                            None => break,
                        };
                    }
                    *exps.entry(p).or_insert(0) += sign * e;
                }
            }
        }
        for (list, sign) in [(&self.num_int, 1), (&self.den_int, -1)] {
            for &n in list {
                let mut m = n;
                let mut p = 2;
                while p * p <= m {
                    while m % p == 0 {
                        m /= p;
                        *exps.entry(p).or_insert(0) += sign;
                    }
                    p += 1;
                }
                if m > 1 {
                    *exps.entry(m).or_insert(0) += sign;
                }
            }
        }
        exps.retain(|_, e| *e != 0);
        exps
    }
}

fn primes_up_to(n: u64) -> Vec<u64> {
    if n < 2 {
        return Vec::new();
    }
    let n = n as usize;
    let mut sieve = vec![true; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if sieve[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                sieve[j] = false;
                j += i;
            }
        }
    }
    out
}

/// `coeff * radical`, an exact table entry at `b = 1`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ClosedForm {
    pub coeff: Q,
    pub radical: Radical,
}

impl ClosedForm {
    pub fn zero() -> Self {
        ClosedForm { coeff: Q::zero(), radical: Radical::one() }
    }

    pub fn rational(c: Q) -> Self {
        ClosedForm { coeff: c, radical: Radical::one() }
    }

    pub fn new(coeff: Q, radical: Radical) -> Self {
        ClosedForm { coeff, radical }
    }

    pub fn is_zero(&self) -> bool {
        self.coeff.is_zero() || self.radical.is_zero()
    }

    pub fn negated(mut self) -> Self {
        self.coeff = -self.coeff;
        self
    }

    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let c = *self.coeff.numer() as f64 / *self.coeff.denom() as f64;
        c * self.radical.to_f64()
    }

    pub fn to_surd(&self) -> Surd {
        if self.is_zero() {
            return Surd::zero();
        }
        let c = BigRational::new(BigInt::from(*self.coeff.numer()), BigInt::from(*self.coeff.denom()));
        Surd::from_prime_exponents(c, &self.radical.prime_exponents())
    }
}

impl fmt::Display for ClosedForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_surd())
    }
}

fn cf(c: Q, radical: Radical) -> ClosedForm {
    ClosedForm::new(c, radical)
}

fn int(c: i128) -> Q {
    Q::from_integer(c)
}

/// `<p l|op|n l>`.
fn table_same_l(op: OperatorTag, p: u64, n: u64, l: u64) -> ClosedForm {
    use OperatorTag::*;
    let d = p as i64 - n as i64;
    let (hi, lo) = if p >= n { (p, n) } else { (n, p) };
    let full = Radical::factorials(&[hi, lo + 2 * l + 2], &[lo, hi + 2 * l + 2]);
    let (ni, li) = (n as i128, l as i128);
    let (hii, loi) = (hi as i128, lo as i128);
    match op {
        Overlap => ClosedForm::rational(int((p == n) as i128)),
        R => match d {
            1 => cf(q(-1, 2), Radical::ints(&[n + 1, n + 2 * l + 3], &[])),
            0 => ClosedForm::rational(q(2 * ni + 2 * li + 3, 2)),
            -1 => cf(q(-1, 2), Radical::ints(&[n, n + 2 * l + 2], &[])),
            _ => ClosedForm::zero(),
        },
        R2 => match d {
            2 => cf(q(1, 4), Radical::ints(&[n + 1, n + 2, n + 2 * l + 3, n + 2 * l + 4], &[])),
            1 => cf(int(-(ni + li + 2)), Radical::ints(&[n + 1, n + 2 * l + 3], &[])),
            0 => ClosedForm::rational(q(2 * ni + 2 * li + 3, 2) * int(ni + li + 2) + q(ni * (ni + 2 * li + 2), 2)),
            -1 => cf(int(-(ni + li + 1)), Radical::ints(&[n, n + 2 * l + 2], &[])),
            -2 if n >= 2 => cf(q(1, 4), Radical::ints(&[n, n - 1, n + 2 * l + 2, n + 2 * l + 1], &[])),
            _ => ClosedForm::zero(),
        },
        RInv => cf(q(1, li + 1), full),
        RInv2 => cf(q(2 * hii * (2 * li + 3) - 2 * loi * (2 * li + 1) + 4 * li + 6, (li + 1) * (2 * li + 1) * (2 * li + 3)), full),
        RDdr => match d {
            1 => cf(q(1, 2), Radical::ints(&[n + 1, n + 2 * l + 3], &[])),
            0 => ClosedForm::rational(q(-1, 2)),
            -1 => cf(q(-1, 2), Radical::ints(&[n, n + 2 * l + 2], &[])),
            _ => ClosedForm::zero(),
        },
        Ddr => match d {
            0 => ClosedForm::zero(),
            d if d > 0 => cf(int(1), full),
            _ => cf(int(-1), full),
        },
        D2dr2 => {
            let den = (2 * li + 3) * (2 * li + 1);
            if d == 0 {
                ClosedForm::rational(q(-(4 * ni * (li + 1) + 2 * li + 3), den))
            } else {
                let num = (2 * li + 4) * (2 * li + 1) * loi - 2 * li * (2 * li + 3) * hii + (2 * li + 3) * (2 * li + 2);
                cf(q(-num, den), full)
            }
        }
    }
}

/// `<p l|op|n, l+1>`.
fn table_l_plus_1(op: OperatorTag, p: u64, n: u64, l: u64) -> Option<ClosedForm> {
    use OperatorTag::*;
    let d = p as i64 - n as i64;
    let rt = Radical::factorials(&[n, p + 2 * l + 2], &[p, n + 2 * l + 4]);
    let (pi, ni, li) = (p as i128, n as i128, l as i128);
    let v = match op {
        Overlap => match d {
            1 => cf(int(-1), Radical::ints(&[n + 1], &[n + 2 * l + 4])),
            d if d <= 0 => cf(int(2 * li + 3), rt),
            _ => ClosedForm::zero(),
        },
        R => match d {
            2 => cf(q(1, 2), Radical::ints(&[n + 1, n + 2], &[])),
            1 => cf(int(-1), Radical::ints(&[n + 1, n + 2 * l + 4], &[])),
            0 => cf(q(1, 2), Radical::ints(&[n + 2 * l + 4, n + 2 * l + 3], &[])),
            _ => ClosedForm::zero(),
        },
        RInv => match d {
            d if d <= 0 => cf(int(2 * (ni + 1) - 2 * pi), rt),
            _ => ClosedForm::zero(),
        },
        Ddr => match d {
            1 => cf(int(1), Radical::ints(&[n + 1], &[n + 2 * l + 4])),
            d if d <= 0 => cf(int(pi * (2 * li + 4) - ni * (2 * li + 2) + 1), rt),
            _ => ClosedForm::zero(),
        },
        _ => return None,
    };
    Some(v)
}

fn c_poly(n: i128, p: i128, l: i128) -> i128 {
    (2 * l + 4) * (2 * l + 3) * n - (2 * l + 5) * (2 * l + 4) * p + (2 * l + 4) * (2 * l + 3)
}

fn d_poly(n: i128, p: i128, l: i128) -> i128 {
    p * (4 * n * (l + 2) * (l + 2) + l * (2 * l + 9) + 11 - p * (2 * l + 5) * (l + 3)) - (n + 1) * (2 * l + 3) * (n * (l + 1) - 2)
}

fn f_poly(n: i128, p: i128, l: i128) -> Q {
    let inner = p * ((l + 3) * p * ((l + 4) * p - 3 * ((l + 2) * n + 1)) + (l + 2) * n * (3 * n * (l + 1) - 6) - l * (l + 7) - 9)
        - n * ((l + 1) * n * (n * l - 9) - l * (l + 13) - 9)
        + 3 * l;
    q(-2 * inner, 3)
}

/// `<p l|op|n, l+2>`.
fn table_l_plus_2(op: OperatorTag, p: u64, n: u64, l: u64) -> Option<ClosedForm> {
    use OperatorTag::*;
    let d = p as i64 - n as i64;
    let rt = Radical::factorials(&[n, p + 2 * l + 2], &[p, n + 2 * l + 6]);
    let (pi, ni, li) = (p as i128, n as i128, l as i128);
    let band2 = Radical::factorials(&[n + 2, n + 2 * l + 4], &[n, n + 2 * l + 6]);
    let v = match op {
        Overlap => match d {
            2 => cf(int(1), Radical::ints(&[n + 1, n + 2], &[n + 2 * l + 6, n + 2 * l + 5])),
            d if d <= 1 => cf(int(c_poly(ni, pi, li)), rt),
            _ => ClosedForm::zero(),
        },
        R => match d {
            3 => cf(q(-1, 2), Radical::factorials(&[n + 3], &[n]).with_ints(&[], &[n + 2 * l + 6])),
            2 => cf(q(2 * ni + 6 * li + 15, 2), band2),
            1 => cf(
                q(-(ni * (ni + 14) + 6 * li * (ni + 2 * li + 9) + 60), 2),
                Radical::factorials(&[n + 2 * l + 3], &[n + 2 * l + 6]).with_ints(&[n + 1], &[]),
            ),
            d if d <= 0 => cf(int((li + 2) * (2 * li + 3) * (2 * li + 5)), rt),
            _ => ClosedForm::zero(),
        },
        R2 => match d {
            4 => cf(q(1, 4), Radical::factorials(&[n + 4], &[n])),
            3 => cf(int(-1), Radical::factorials(&[n + 3], &[n]).with_ints(&[n + 2 * l + 6], &[])),
            2 => cf(q(3, 2), Radical::factorials(&[n + 2 * l + 6, n + 2], &[n, n + 2 * l + 4])),
            1 => cf(int(-1), Radical::factorials(&[n + 2 * l + 6], &[n + 2 * l + 3]).with_ints(&[n + 1], &[])),
            0 => cf(q(1, 4), Radical::factorials(&[n + 2 * l + 6], &[n + 2 * l + 2])),
            _ => ClosedForm::zero(),
        },
        RInv2 => match d {
            d if d <= 0 => {
                let k = ni - pi;
                cf(q(2 * (k + 1) * (k + 2) * (k + 3), 3), rt)
            }
            _ => ClosedForm::zero(),
        },
        Ddr => match d {
            2 => cf(int(-1), band2),
            d if d <= 1 => cf(int(d_poly(ni, pi, li)), rt),
            _ => ClosedForm::zero(),
        },
        D2dr2 => match d {
            2 => cf(int(1), band2),
            d if d <= 1 => cf(f_poly(ni, pi, li), rt),
            _ => ClosedForm::zero(),
        },
        _ => return None,
    };
    Some(v)
}

/// Whether `<n', l|op|n, l+dl>` has a closed form.
pub fn supports(op: OperatorTag, dl: i32) -> bool {
    use OperatorTag::*;
    match dl.abs() {
        0 => true,
        1 => matches!(op, Overlap | R | RInv | Ddr),
        2 => matches!(op, Overlap | R | R2 | RInv2 | Ddr | D2dr2),
        _ => false,
    }
}

fn unsupported(op: OperatorTag, dl: i32) -> Error {
    Error::Unsupported { op: op.name().to_string(), dl }
}

/// Exact `<n_bra, l_bra|op|n_ket, l_ket>` at `b = 1`.
///
/// Negative `l_ket - l_bra` is obtained by conjugation: every `d/dr` factor
/// contributes a sign.
pub fn closed_form(op: OperatorTag, bra: BasisIndex, ket: BasisIndex) -> Result<ClosedForm> {
    let dl = ket.l as i32 - bra.l as i32;
    if !supports(op, dl) {
        return Err(unsupported(op, dl));
    }
    if dl < 0 {
        let v = closed_form(op, ket, bra)?;
        return Ok(if op.derivative_order() % 2 == 1 { v.negated() } else { v });
    }
    let (p, n, l) = (bra.n as u64, ket.n as u64, bra.l as u64);
    let v = match dl {
        0 => Some(table_same_l(op, p, n, l)),
        1 => table_l_plus_1(op, p, n, l),
        _ => table_l_plus_2(op, p, n, l),
    };
    v.ok_or_else(|| unsupported(op, dl))
}

fn scaled(v: &ClosedForm, op: OperatorTag, b: LengthScale) -> f64 {
    v.to_f64() * b.get().powi(op.scale_exponent())
}

/// `<n' l|op|n l>`.
pub fn me_same_l(op: OperatorTag, n_bra: u32, n_ket: u32, l: u32, b: LengthScale) -> Result<f64> {
    let v = closed_form(op, BasisIndex::new(n_bra, l), BasisIndex::new(n_ket, l))?;
    Ok(scaled(&v, op, b))
}

/// `<n' l|op|n, l+1>`.
pub fn me_l_plus_1(op: OperatorTag, n_bra: u32, n_ket: u32, l: u32, b: LengthScale) -> Result<f64> {
    let v = closed_form(op, BasisIndex::new(n_bra, l), BasisIndex::new(n_ket, l + 1))?;
    Ok(scaled(&v, op, b))
}

/// `<n' l|op|n, l+2>`.
pub fn me_l_plus_2(op: OperatorTag, n_bra: u32, n_ket: u32, l: u32, b: LengthScale) -> Result<f64> {
    let v = closed_form(op, BasisIndex::new(n_bra, l), BasisIndex::new(n_ket, l + 2))?;
    Ok(scaled(&v, op, b))
}

/// `<bra|op|ket>` from the closed-form tables.
pub fn me_general(op: OperatorTag, bra: BasisIndex, ket: BasisIndex, b: LengthScale) -> Result<f64> {
    let v = closed_form(op, bra, ket)?;
    Ok(scaled(&v, op, b))
}

/// Exact `<bra|op|ket>` at `b = 1`.
pub fn me_exact(op: OperatorTag, bra: BasisIndex, ket: BasisIndex) -> Result<Surd> {
    Ok(closed_form(op, bra, ket)?.to_surd())
}

/// Where a value came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Source {
    ClosedForm,
    Quadrature,
}

impl Source {
    pub fn as_str(self) -> &'static str {
        match self {
            Source::ClosedForm => "closed_form",
            Source::Quadrature => "quadrature",
        }
    }
}

/// Like [`me_general`], but also accepts operator words and unsupported
/// `(op, dl)` pairs, which go to the quadrature oracle when `allow_quadrature`
/// is set.
pub fn me_general_with(
    op: &RadialOperator,
    bra: BasisIndex,
    ket: BasisIndex,
    b: LengthScale,
    allow_quadrature: bool,
) -> Result<(f64, Source)> {
    let tag = match op {
        RadialOperator::Tag(t) => Some(*t),
        RadialOperator::Word(w) => OperatorTag::ALL.into_iter().find(|t| t.to_word() == *w),
    };
    let dl = ket.l as i32 - bra.l as i32;
    if let Some(t) = tag {
        if supports(t, dl) {
            return Ok((me_general(t, bra, ket, b)?, Source::ClosedForm));
        }
    }
    if allow_quadrature {
        return Ok((quadrature_me(bra, ket, op, b)?, Source::Quadrature));
    }
    Err(Error::Unsupported { op: tag.map_or_else(|| "word".to_string(), |t| t.name().to_string()), dl })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::su11::{expand_action, ActionOp};
    use OperatorTag::*;

    const B1: LengthScale = LengthScale::UNIT;

    fn idx(n: u32, l: u32) -> BasisIndex {
        BasisIndex::new(n, l)
    }

    #[test]
    fn table_one_examples() {
        assert_eq!(me_same_l(R, 0, 0, 0, B1).unwrap(), 1.5);
        assert!((me_same_l(R, 1, 0, 0, B1).unwrap() + 0.75f64.sqrt()).abs() < 1e-15);
        for n in 0..6 {
            for l in 0..4 {
                assert_eq!(me_same_l(Ddr, n, n, l, B1).unwrap(), 0.0);
            }
        }
        let third = (1.0f64 / 3.0).sqrt();
        assert!((me_same_l(RInv, 1, 0, 0, B1).unwrap() - third).abs() < 1e-15);
        let b2 = LengthScale::new(2.0).unwrap();
        assert!((me_same_l(RInv, 1, 0, 0, b2).unwrap() - third / 2.0).abs() < 1e-15);
        assert!((me_same_l(RDdr, 1, 0, 0, B1).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn cross_l_examples() {
        assert_eq!(me_l_plus_1(Overlap, 1, 0, 0, B1).unwrap(), -0.5);
        assert!((me_l_plus_1(Overlap, 0, 0, 0, B1).unwrap() - 0.75f64.sqrt()).abs() < 1e-15);
        assert!((me_l_plus_1(R, 0, 0, 0, B1).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((me_l_plus_1(Ddr, 1, 0, 0, B1).unwrap() - 0.5).abs() < 1e-15);
        assert!((me_l_plus_2(Overlap, 2, 0, 0, B1).unwrap() - (1.0f64 / 15.0).sqrt()).abs() < 1e-15);
        assert!((me_l_plus_2(R2, 0, 0, 0, B1).unwrap() - 0.25 * 360f64.sqrt()).abs() < 1e-14);
        assert!((me_l_plus_2(RInv2, 0, 0, 0, B1).unwrap() - 4.0 / 360f64.sqrt()).abs() < 1e-15);
        // substitution route equals the direct table
        assert!((me_general(R, idx(0, 0), idx(0, 1), B1).unwrap() - 3f64.sqrt()).abs() < 1e-15);
        assert!((me_general(R, idx(0, 1), idx(0, 0), B1).unwrap() - 3f64.sqrt()).abs() < 1e-15);
    }

    #[test]
    fn unsupported_pairs_are_errors() {
        assert!(matches!(me_l_plus_1(RInv2, 0, 0, 0, B1), Err(Error::Unsupported { dl: 1, .. })));
        assert!(matches!(me_l_plus_1(R2, 0, 0, 0, B1), Err(Error::Unsupported { .. })));
        assert!(matches!(me_general(R, idx(0, 0), idx(0, 3), B1), Err(Error::Unsupported { dl: 3, .. })));
        let (v, src) = me_general_with(&RInv2.into(), idx(1, 0), idx(2, 1), B1, true).unwrap();
        assert_eq!(src, Source::Quadrature);
        assert!(v.is_finite());
        assert!(me_general_with(&RInv2.into(), idx(1, 0), idx(2, 1), B1, false).is_err());
    }

    #[test]
    fn exact_examples() {
        let s = me_exact(RInv, idx(1, 0), idx(0, 0)).unwrap();
        assert_eq!(s.to_string(), "1/3*sqrt(3/1)");
        assert_eq!(me_exact(R, idx(0, 0), idx(0, 0)).unwrap().to_string(), "3/2*sqrt(1/1)");
        assert_eq!(me_exact(Overlap, idx(2, 0), idx(0, 2)).unwrap().to_string(), "1/15*sqrt(15/1)");
        assert_eq!(me_exact(Overlap, idx(0, 0), idx(0, 1)).unwrap().to_string(), "1/2*sqrt(3/1)");
    }

    #[test]
    fn exact_matches_float() {
        for op in OperatorTag::ALL {
            for dl in -2i32..=2 {
                if !supports(op, dl) {
                    continue;
                }
                for l in 0..4u32 {
                    let lk = l as i32 + dl;
                    if lk < 0 {
                        continue;
                    }
                    for p in 0..8 {
                        for n in 0..8 {
                            let (bra, ket) = (idx(p, l), idx(n, lk as u32));
                            let f = me_general(op, bra, ket, B1).unwrap();
                            let e = me_exact(op, bra, ket).unwrap().to_f64();
                            assert!((f - e).abs() <= 1e-13 * f.abs().max(1e-300), "{op} {bra:?} {ket:?}: {f} {e}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn closed_forms_match_quadrature() {
        for op in OperatorTag::ALL {
            for dl in -2i32..=2 {
                if !supports(op, dl) {
                    continue;
                }
                for l in 0..3u32 {
                    let lk = l as i32 + dl;
                    if lk < 0 {
                        continue;
                    }
                    for p in 0..6 {
                        for n in 0..6 {
                            let (bra, ket) = (idx(p, l), idx(n, lk as u32));
                            let a = me_general(op, bra, ket, B1).unwrap();
                            let o = quadrature_me(bra, ket, &op.into(), B1).unwrap();
                            assert!((a - o).abs() <= 1e-11 * (1.0 + a.abs()), "{op} {bra:?} {ket:?}: {a} vs {o}");
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn bands() {
        for l in 0..4 {
            for n in 0..10u32 {
                for p in 0..14u32 {
                    let d = p as i64 - n as i64;
                    if d.abs() >= 2 {
                        assert_eq!(me_same_l(R, p, n, l, B1).unwrap(), 0.0);
                        assert_eq!(me_same_l(RDdr, p, n, l, B1).unwrap(), 0.0);
                    }
                    if d.abs() >= 3 {
                        assert_eq!(me_same_l(R2, p, n, l, B1).unwrap(), 0.0);
                    }
                    if d <= -1 || d >= 5 {
                        assert_eq!(me_l_plus_2(R2, p, n, l, B1).unwrap(), 0.0);
                    }
                    if d >= 3 {
                        assert_eq!(me_l_plus_2(Overlap, p, n, l, B1).unwrap(), 0.0);
                        assert_eq!(me_l_plus_1(R, p, n, l, B1).unwrap(), 0.0);
                    }
                }
            }
        }
    }

    #[test]
    fn agrees_with_ladder_algebra() {
        for l in 0..5 {
            for n in 0..12 {
                let e = expand_action(ActionOp::R, idx(n, l), 0);
                let f = expand_action(ActionOp::RDdr, idx(n, l), 0);
                for p in 0..14 {
                    assert!((me_same_l(R, p, n, l, B1).unwrap() - e.coeff(p, l)).abs() < 1e-14);
                    assert!((me_same_l(RDdr, p, n, l, B1).unwrap() - f.coeff(p, l)).abs() < 1e-14);
                }
            }
        }
    }

    #[test]
    fn cross_l_from_shift_expansion() {
        for op in [Overlap, R, RInv, Ddr] {
            for l in 0..4 {
                for n in 0..8 {
                    let e = crate::shift_ops::expand_l_plus_1(n, l);
                    for p in 0..10 {
                        let via: f64 = e.iter().map(|(i, c)| c * me_same_l(op, p, i.n, l, B1).unwrap()).sum();
                        let direct = me_l_plus_1(op, p, n, l, B1).unwrap();
                        assert!((via - direct).abs() < 1e-11 * (1.0 + direct.abs()), "{op} p={p} n={n} l={l}");
                    }
                }
            }
        }
    }

    #[test]
    fn rddr_plus_transpose_is_minus_identity() {
        for l in 0..5 {
            for p in 0..15 {
                for n in 0..15 {
                    let s = me_same_l(RDdr, p, n, l, B1).unwrap() + me_same_l(RDdr, n, p, l, B1).unwrap();
                    let want = if p == n { -1.0 } else { 0.0 };
                    assert_eq!(s, want);
                }
            }
        }
    }

    #[test]
    fn conjugation_symmetries() {
        for l in 0..4 {
            for p in 0..11 {
                for n in 0..11 {
                    let a = me_same_l(Ddr, p, n, l, B1).unwrap();
                    assert_eq!(a, -me_same_l(Ddr, n, p, l, B1).unwrap());
                    assert_eq!(me_same_l(R, p, n, l, B1).unwrap(), me_same_l(R, n, p, l, B1).unwrap());
                    assert_eq!(me_same_l(D2dr2, p, n, l, B1).unwrap(), me_same_l(D2dr2, n, p, l, B1).unwrap());
                }
            }
        }
    }
}
