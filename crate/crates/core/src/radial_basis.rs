//! Laguerre radial functions `S_nl` and the quadrature oracle for their matrix
//! elements.
//!
//! With `x = 2r/b`,
//! `S_nl(r) = sqrt(2/b) sqrt(n!/(n+2l+2)!) x^(l+1) L_n^(2l+2)(x) e^(-x/2)`,
//! orthonormal under `dr` for each fixed `l`.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::operator::{Factor, RadialOperator};
use crate::special_fn::{cached_rule, laguerre_pair, sqrt_factorial_ratio};

/// Labels `(n, l[, m])` of a basis function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct BasisIndex {
    pub n: u32,
    pub l: u32,
    pub m: Option<i32>,
}

impl BasisIndex {
    pub const fn new(n: u32, l: u32) -> Self {
        BasisIndex { n, l, m: None }
    }

    pub fn with_m(n: u32, l: u32, m: i32) -> Result<Self> {
        if m.unsigned_abs() > l {
            return Err(Error::domain(format!("|m|={} exceeds l={l}", m.abs())));
        }
        Ok(BasisIndex { n, l, m: Some(m) })
    }

    /// Lowest weight `t = l + 3/2` of the SU(1,1) irrep.
    pub fn irrep_label(&self) -> f64 {
        self.l as f64 + 1.5
    }

    /// Weight `m_t = n + l + 3/2`; also the coefficient `alpha_nl` of the
    /// radial equation.
    pub fn weight(&self) -> f64 {
        self.n as f64 + self.l as f64 + 1.5
    }
}

/// Radial length scale `b > 0`.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LengthScale(f64);

impl LengthScale {
    pub const UNIT: LengthScale = LengthScale(1.0);

    pub fn new(b: f64) -> Result<Self> {
        if b > 0.0 && b.is_finite() {
            Ok(LengthScale(b))
        } else {
            Err(Error::domain(format!("length scale must be positive, got {b}")))
        }
    }

    pub fn get(self) -> f64 {
        self.0
    }
}

impl Default for LengthScale {
    fn default() -> Self {
        LengthScale::UNIT
    }
}

/// `coeff * x^power * L_degree^alpha(x)`
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Term {
    pub coeff: f64,
    pub power: f64,
    pub degree: u32,
    pub alpha: f64,
}

/// `e^(-x/2) * sum(terms)` with `x = 2r/b`.
///
/// Closed under multiplication by powers of `r` and under `d/dr` (via
/// `d/dx L_m^a = -L_(m-1)^(a+1)`), so any operator word applied to `S_nl`
/// stays exact without finite differences.
#[derive(Debug, Clone, PartialEq)]
pub struct RadialFunction {
    b: f64,
    terms: Vec<Term>,
}

impl RadialFunction {
    pub fn basis(idx: BasisIndex, b: LengthScale) -> Self {
        let (n, l) = (idx.n as u64, idx.l as u64);
        let norm = (2.0 / b.get()).sqrt() * sqrt_factorial_ratio(&[n], &[n + 2 * l + 2]);
        RadialFunction { b: b.get(), terms: vec![Term { coeff: norm, power: (l + 1) as f64, degree: idx.n, alpha: (2 * l + 2) as f64 }] }
    }

    pub fn zero(b: LengthScale) -> Self {
        RadialFunction { b: b.get(), terms: Vec::new() }
    }

    pub fn terms(&self) -> &[Term] {
        &self.terms
    }

    pub fn scale(&self) -> LengthScale {
        LengthScale(self.b)
    }

    fn from_terms(b: f64, terms: impl IntoIterator<Item = Term>) -> Self {
        let mut merged: BTreeMap<(u64, u32, u64), f64> = BTreeMap::new();
        for t in terms {
            *merged.entry((t.power.to_bits(), t.degree, t.alpha.to_bits())).or_default() += t.coeff;
        }
        let terms = merged
            .into_iter()
            .filter(|(_, c)| *c != 0.0)
            .map(|((p, degree, a), coeff)| Term { coeff, power: f64::from_bits(p), degree, alpha: f64::from_bits(a) })
            .collect();
        RadialFunction { b, terms }
    }

    pub fn scaled(&self, c: f64) -> Self {
        Self::from_terms(self.b, self.terms.iter().map(|t| Term { coeff: t.coeff * c, ..*t }))
    }

    pub fn add(&self, other: &RadialFunction) -> Self {
        debug_assert_eq!(self.b, other.b, "mixing length scales");
        Self::from_terms(self.b, self.terms.iter().chain(&other.terms).copied())
    }

    /// Multiply by `r^a` (real `a`).
    pub fn mul_r_pow(&self, a: f64) -> Self {
        let factor = (self.b / 2.0).powf(a);
        Self::from_terms(self.b, self.terms.iter().map(|t| Term { coeff: t.coeff * factor, power: t.power + a, ..*t }))
    }

    pub fn derivative(&self) -> Self {
        let chain = 2.0 / self.b;
        let mut out = Vec::with_capacity(3 * self.terms.len());
        for t in &self.terms {
            let c = t.coeff * chain;
            if t.power != 0.0 {
                out.push(Term { coeff: c * t.power, power: t.power - 1.0, ..*t });
            }
            if t.degree > 0 {
                out.push(Term { coeff: -c, degree: t.degree - 1, alpha: t.alpha + 1.0, ..*t });
            }
            out.push(Term { coeff: -0.5 * c, ..*t });
        }
        Self::from_terms(self.b, out)
    }

    pub fn apply_factor(&self, f: Factor) -> Self {
        match f {
            Factor::Pow(a) => self.mul_r_pow(a as f64),
            Factor::Ddr => self.derivative(),
        }
    }

    pub fn apply(&self, op: &RadialOperator) -> Self {
        op.factors().iter().rev().fold(self.clone(), |f, &factor| f.apply_factor(factor))
    }

    /// `sum(terms)` at `x`, without the exponential.
    fn polynomial_part(&self, x: f64) -> f64 {
        self.terms.iter().map(|t| t.coeff * x.powf(t.power) * laguerre_pair(t.degree as usize, t.alpha, x).0).sum()
    }

    /// Point value at `r > 0`.
    pub fn eval(&self, r: f64) -> f64 {
        let x = 2.0 * r / self.b;
        let lnx = x.ln();
        self.terms.iter().map(|t| t.coeff * (t.power * lnx - 0.5 * x).exp() * laguerre_pair(t.degree as usize, t.alpha, x).0).sum()
    }

    /// `int_0^inf self(r) other(r) dr` by Gauss–Laguerre quadrature that is
    /// exact for the polynomial integrand. `min_order` lets callers raise the
    /// rule order above what the degree audit requires.
    pub fn inner(&self, other: &RadialFunction, min_order: usize) -> Result<f64> {
        if self.b != other.b {
            return Err(Error::domain("inner product across different length scales"));
        }
        if self.terms.is_empty() || other.terms.is_empty() {
            return Ok(0.0);
        }
        let mut degree = 0i64;
        for s in &self.terms {
            for o in &other.terms {
                let p = s.power + o.power;
                if p < 0.0 || p.fract() != 0.0 {
                    return Err(Error::DegreeAudit(format!("integrand carries x^{p}; not polynomial against e^-x")));
                }
                degree = degree.max(p as i64 + s.degree as i64 + o.degree as i64);
            }
        }
        let order = (degree as usize / 2 + 1).max(min_order);
        let rule = cached_rule(order, 0.0)?;
        let sum = rule.integrate(|x| self.polynomial_part(x) * other.polynomial_part(x));
        // dr = (b/2) dx
        Ok(sum * self.b / 2.0)
    }
}

/// `S_nl(r)` at scale `b`.
#[allow(non_snake_case)]
pub fn eval_S(idx: BasisIndex, b: LengthScale, r: f64) -> Result<f64> {
    if !(r > 0.0) {
        return Err(Error::domain(format!("radius must be positive, got {r}")));
    }
    Ok(RadialFunction::basis(idx, b).eval(r))
}

/// `<bra| op |ket>` by exact-degree quadrature; the independent oracle for
/// every closed form in the crate.
pub fn quadrature_me(bra: BasisIndex, ket: BasisIndex, op: &RadialOperator, b: LengthScale) -> Result<f64> {
    let left = RadialFunction::basis(bra, b);
    let right = RadialFunction::basis(ket, b).apply(op);
    let order = (bra.n + ket.n + bra.l + ket.l + 12 + op.polynomial_degree()) as usize;
    left.inner(&right, order)
}
