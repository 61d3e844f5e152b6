//! Exact values `c * sqrt(r)` with rational `c` and square-free integer `r`.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// `coefficient * sqrt(radicand)` in canonical form: the radicand is a
/// square-free positive integer, and zero is `0 * sqrt(1)`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Surd {
    coefficient: BigRational,
    radicand: BigUint,
}

const TRIAL_LIMIT: u64 = 100_000;

impl Surd {
    pub fn zero() -> Self {
        Surd { coefficient: BigRational::zero(), radicand: BigUint::one() }
    }

    pub fn rational(coefficient: BigRational) -> Self {
        Surd::new(coefficient, BigRational::one()).expect("unit radicand")
    }

    /// Canonicalizes `coefficient * sqrt(radicand)`.
    ///
    /// Square factors are found by trial division up to 1e5 plus a
    /// perfect-square test of the cofactor, which covers every radicand the
    /// matrix-element tables produce.
    pub fn new(coefficient: BigRational, radicand: BigRational) -> Result<Self> {
        if radicand.is_negative() {
            return Err(Error::domain("negative radicand"));
        }
        if coefficient.is_zero() || radicand.is_zero() {
            return Ok(Surd::zero());
        }
        // sqrt(p/q) = sqrt(p q) / q
        let p = radicand.numer().to_biguint().expect("positive");
        let q = radicand.denom().to_biguint().expect("positive");
        let (outside, inside) = split_square(p * &q);
        let coefficient = coefficient * BigRational::new(BigInt::from(outside), BigInt::from(q));
        Ok(Surd { coefficient, radicand: inside })
    }

    /// Builds `coefficient * prod p^(e/2)` from prime exponents.
    pub fn from_prime_exponents(coefficient: BigRational, exponents: &BTreeMap<u64, i64>) -> Self {
        if coefficient.is_zero() {
            return Surd::zero();
        }
        let mut num = BigUint::one();
        let mut den = BigUint::one();
        let mut radicand = BigUint::one();
        for (&p, &e) in exponents {
            let bp = BigUint::from(p);
            if e >= 0 {
                num *= bp.pow((e / 2) as u32);
                if e % 2 == 1 {
                    radicand *= &bp;
                }
            } else {
                // p^(e/2) = p^(-k) * p^((2k+e)/2), with 2k+e in {0,1}
                let k = (-e + 1) / 2;
                den *= bp.pow(k as u32);
                if (2 * k + e) == 1 {
                    radicand *= &bp;
                }
            }
        }
        let coefficient = coefficient * BigRational::new(BigInt::from(num), BigInt::from(den));
        Surd { coefficient, radicand }
    }

    pub fn coefficient(&self) -> &BigRational {
        &self.coefficient
    }

    pub fn radicand(&self) -> &BigUint {
        &self.radicand
    }

    pub fn is_zero(&self) -> bool {
        self.coefficient.is_zero()
    }

    pub fn to_f64(&self) -> f64 {
        let c = self.coefficient.to_f64().unwrap_or(f64::NAN);
        let r = self.radicand.to_f64().unwrap_or(f64::INFINITY);
        c * r.sqrt()
    }

    /// Sum of two surds with the same radicand (or either zero).
    pub fn checked_add(&self, other: &Surd) -> Option<Surd> {
        if self.is_zero() {
            return Some(other.clone());
        }
        if other.is_zero() {
            return Some(self.clone());
        }
        if self.radicand != other.radicand {
            return None;
        }
        let coefficient = &self.coefficient + &other.coefficient;
        if coefficient.is_zero() {
            return Some(Surd::zero());
        }
        Some(Surd { coefficient, radicand: self.radicand.clone() })
    }

    pub fn mul(&self, other: &Surd) -> Surd {
        if self.is_zero() || other.is_zero() {
            return Surd::zero();
        }
        let radicand = BigRational::from_integer(BigInt::from(&self.radicand * &other.radicand));
        Surd::new(&self.coefficient * &other.coefficient, radicand).expect("positive radicand")
    }

    pub fn neg(&self) -> Surd {
        Surd { coefficient: -self.coefficient.clone(), radicand: self.radicand.clone() }
    }
}

/// `n = outside^2 * inside` with `inside` square-free.
fn split_square(mut n: BigUint) -> (BigUint, BigUint) {
    let mut outside = BigUint::one();
    let mut inside = BigUint::one();
    let mut p = 2u64;
    while p <= TRIAL_LIMIT {
        let bp = BigUint::from(p);
        if &bp * &bp > n {
            break;
        }
        let mut e = 0u32;
        while (&n % &bp).is_zero() {
            n /= &bp;
            e += 1;
        }
        if e > 0 {
            outside *= bp.pow(e / 2);
            if e % 2 == 1 {
                inside *= &bp;
            }
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > BigUint::one() {
        let root = n.sqrt();
        if &root * &root == n {
            outside *= root;
        } else {
            inside *= n;
        }
    }
    (outside, inside)
}

impl fmt::Display for Surd {
    /// `<sign><p>/<q>*sqrt(<r>/<s>)`, always with `s = 1`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let sign = if self.coefficient.is_negative() { "-" } else { "" };
        write!(f, "{sign}{}/{}*sqrt({}/1)", self.coefficient.numer().abs(), self.coefficient.denom(), self.radicand)
    }
}

fn parse_ratio(s: &str) -> Result<(BigInt, BigInt)> {
    let (a, b) = s.split_once('/').ok_or_else(|| Error::Parse(format!("expected p/q, got `{s}`")))?;
    let digits = |t: &str| -> Result<BigInt> {
        if t.is_empty() || !t.bytes().all(|c| c.is_ascii_digit()) {
            return Err(Error::Parse(format!("expected digits, got `{t}`")));
        }
        t.parse::<BigInt>().map_err(|e| Error::Parse(e.to_string()))
    };
    let (p, q) = (digits(a)?, digits(b)?);
    if q.is_zero() {
        return Err(Error::Parse("zero denominator".into()));
    }
    Ok((p, q))
}

impl FromStr for Surd {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let (negative, body) = match s.as_bytes().first() {
            Some(b'-') => (true, &s[1..]),
            Some(b'+') => (false, &s[1..]),
            _ => (false, s),
        };
        let (coeff, rest) = body.split_once("*sqrt(").ok_or_else(|| Error::Parse(format!("expected `p/q*sqrt(r/s)`, got `{s}`")))?;
        let radicand = rest.strip_suffix(')').ok_or_else(|| Error::Parse(format!("missing `)` in `{s}`")))?;
        let (p, q) = parse_ratio(coeff)?;
        let (r, t) = parse_ratio(radicand)?;
        let mut c = BigRational::new(p, q);
        if negative {
            c = -c;
        }
        Surd::new(c, BigRational::new(r, t))
    }
}
