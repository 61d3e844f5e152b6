//! Spherical-tensor matrix elements in the `Lambda_nlm = r^-1 S_nl Y_lm` basis.
//!
//! A separable operator `R(r) Theta_a` has reduced elements
//! `<n'l'||O_a||nl> = <n'l'|gamma(R)|nl> <l'||Theta_a||l>` with
//! `gamma(R) = r R r^-1`, and full elements
//! `<n'l'm'|O_a,alpha|nlm> = (l m; a alpha|l' m') <n'l'||O_a||nl> / sqrt(2l'+1)`.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_rational::{BigRational, Ratio};
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_elements::{closed_form, me_general, me_general_with, me_same_l, ClosedForm, Radical, Source};
use crate::operator::{Factor, OperatorTag, RadialOperator};
use crate::radial_basis::{BasisIndex, LengthScale};
use crate::special_fn::sqrt_factorial_ratio;
use crate::surd::Surd;

type Q = Ratio<i128>;

/// Sum of monomials `c r^a (d/dr)^j`, kept in normal form (derivatives to
/// the right).
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct RadialWord {
    terms: BTreeMap<(i32, u32), Q>,
}

fn falling(b: i32, i: u32) -> i128 {
    (0..i as i32).map(|k| (b - k) as i128).product()
}

fn binomial(j: u32, i: u32) -> i128 {
    (0..i).fold(1i128, |acc, k| acc * (j - k) as i128 / (k + 1) as i128)
}

impl RadialWord {
    pub fn identity() -> Self {
        RadialWord::monomial(Q::one(), 0, 0)
    }

    pub fn monomial(c: Q, power: i32, derivs: u32) -> Self {
        let mut w = RadialWord::default();
        w.push(c, power, derivs);
        w
    }

    pub fn r_pow(a: i32) -> Self {
        RadialWord::monomial(Q::one(), a, 0)
    }

    pub fn ddr() -> Self {
        RadialWord::monomial(Q::one(), 0, 1)
    }

    /// Normal form of a product of factors, rightmost acting first.
    pub fn from_factors(factors: &[Factor]) -> Self {
        factors.iter().fold(RadialWord::identity(), |w, f| {
            w.mul(&match f {
                Factor::Pow(a) => RadialWord::r_pow(*a),
                Factor::Ddr => RadialWord::ddr(),
            })
        })
    }

    fn push(&mut self, c: Q, power: i32, derivs: u32) {
        if c.is_zero() {
            return;
        }
        let e = self.terms.entry((power, derivs)).or_insert_with(Q::zero);
        *e += c;
        if e.is_zero() {
            self.terms.remove(&(power, derivs));
        }
    }

    pub fn add(&self, other: &RadialWord) -> Self {
        let mut out = self.clone();
        for (&(a, j), &c) in &other.terms {
            out.push(c, a, j);
        }
        out
    }

    pub fn scale(&self, c: Q) -> Self {
        let mut out = RadialWord::default();
        for (&(a, j), &v) in &self.terms {
            out.push(v * c, a, j);
        }
        out
    }

    /// Operator product `self * other`, using
    /// `D^j r^b = sum_i C(j,i) b(b-1)..(b-i+1) r^(b-i) D^(j-i)`.
    pub fn mul(&self, other: &RadialWord) -> Self {
        let mut out = RadialWord::default();
        for (&(a, j), &c1) in &self.terms {
            for (&(b, k), &c2) in &other.terms {
                for i in 0..=j {
                    let coef = binomial(j, i) * falling(b, i);
                    if coef != 0 {
                        out.push(c1 * c2 * Q::from_integer(coef), a + b - i as i32, j - i + k);
                    }
                }
            }
        }
        out
    }

    /// `r * self * r^-1`.
    pub fn gamma(&self) -> Self {
        RadialWord::r_pow(1).mul(self).mul(&RadialWord::r_pow(-1))
    }

    /// Monomials `(c, a, j)` ordered by `a` descending, then `j` descending.
    pub fn monomials(&self) -> impl Iterator<Item = (Q, i32, u32)> + '_ {
        self.terms.iter().rev().map(|(&(a, j), &c)| (c, a, j))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// `<bra|self|ket>` summed monomial by monomial. Monomials without a
    /// closed form need `allow_quadrature`.
    pub fn matrix_element(&self, bra: BasisIndex, ket: BasisIndex, b: LengthScale, allow_quadrature: bool) -> Result<(f64, Source)> {
        let mut total = 0.0;
        let mut source = Source::ClosedForm;
        for (c, a, j) in self.monomials() {
            let mut factors = Vec::new();
            if a != 0 {
                factors.push(Factor::Pow(a));
            }
            factors.extend(std::iter::repeat_n(Factor::Ddr, j as usize));
            let (v, s) = me_general_with(&RadialOperator::Word(factors), bra, ket, b, allow_quadrature)?;
            if s == Source::Quadrature {
                source = s;
            }
            total += (*c.numer() as f64 / *c.denom() as f64) * v;
        }
        Ok((total, source))
    }
}

impl fmt::Display for RadialWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        for (k, (c, a, j)) in self.monomials().enumerate() {
            if k > 0 {
                f.write_str(" + ")?;
            }
            write!(f, "({c})")?;
            if a != 0 {
                write!(f, "*r^{a}")?;
            }
            if j == 1 {
                f.write_str("*D")?;
            } else if j > 1 {
                write!(f, "*D^{j}")?;
            }
        }
        Ok(())
    }
}

/// Normal form of `gamma(word)`.
pub fn gamma_normalize(word: &RadialWord) -> RadialWord {
    word.gamma()
}

/// `<j1 m1; j2 m2|j m>` with every argument given doubled, so half-integers
/// are odd integers. Condon–Shortley phases; zero outside the selection rules.
pub fn clebsch_gordan2(tj1: i64, tm1: i64, tj2: i64, tm2: i64, tj: i64, tm: i64) -> f64 {
    if tm1 + tm2 != tm || tj1 < 0 || tj2 < 0 || tj < 0 {
        return 0.0;
    }
    if tm1.abs() > tj1 || tm2.abs() > tj2 || tm.abs() > tj {
        return 0.0;
    }
    if (tj1 + tm1) % 2 != 0 || (tj2 + tm2) % 2 != 0 || (tj + tm) % 2 != 0 {
        return 0.0;
    }
    if tj < (tj1 - tj2).abs() || tj > tj1 + tj2 || (tj1 + tj2 + tj) % 2 != 0 {
        return 0.0;
    }
    let h = |x: i64| (x / 2) as u64;
    let (a, b, c) = (h(tj1 + tj2 - tj), h(tj1 - tm1), h(tj2 + tm2));
    let (d, e) = (tj - tj2 + tm1, tj - tj1 - tm2);
    let kmin = 0.max(-d / 2).max(-e / 2);
    let kmax = (a as i64).min(b as i64).min(c as i64);
    let outer = ((tj + 1) as f64).sqrt()
        * sqrt_factorial_ratio(
            &[h(tj + tj1 - tj2), h(tj - tj1 + tj2), a, h(tj + tm), h(tj - tm), b, h(tj1 + tm1), h(tj2 - tm2), c],
            &[h(tj1 + tj2 + tj + 2)],
        );
    let mut sum = 0.0;
    for k in kmin..=kmax {
        let ku = k as u64;
        let den = [ku, a - ku, b - ku, c - ku, (d / 2 + k) as u64, (e / 2 + k) as u64];
        let term = sqrt_factorial_ratio(&[], &den).powi(2);
        sum += if k % 2 == 0 { term } else { -term };
    }
    outer * sum
}

/// `<j1 m1; j2 m2|j m>` for integer or half-integer arguments.
pub fn clebsch_gordan(j1: f64, m1: f64, j2: f64, m2: f64, j: f64, m: f64) -> f64 {
    let twice = |x: f64| {
        let t = 2.0 * x;
        (t.fract() == 0.0).then_some(t as i64)
    };
    match (twice(j1), twice(m1), twice(j2), twice(m2), twice(j), twice(m)) {
        (Some(a), Some(b), Some(c), Some(d), Some(e), Some(f)) => clebsch_gordan2(a, b, c, d, e, f),
        _ => 0.0,
    }
}

fn lhat(l: u32) -> f64 {
    ((2 * l + 1) as f64).sqrt()
}

/// A reduced matrix element `<bra||O_rank||ket>`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ReducedME {
    pub bra: BasisIndex,
    pub ket: BasisIndex,
    pub rank: u32,
    pub value: f64,
}

/// `<n'l'm'|O_rank,alpha|nlm> = (l m; rank alpha|l' m') red / sqrt(2l'+1)`.
pub fn wigner_eckart_project(red: &ReducedME, m_bra: i32, alpha: i32, m_ket: i32) -> f64 {
    let (lb, lk, a) = (red.bra.l as i64, red.ket.l as i64, red.rank as i64);
    let cg = clebsch_gordan2(2 * lk, 2 * m_ket as i64, 2 * a, 2 * alpha as i64, 2 * lb, 2 * m_bra as i64);
    cg * red.value / lhat(red.bra.l)
}

/// `<n'l'||r^k||nl> = sqrt(2l+1) delta_(l'l) <n'l|r^k|nl>` for `k` in `-2..=2`.
pub fn reduced_me_rk(k: i32, bra: BasisIndex, ket: BasisIndex, b: LengthScale) -> Result<f64> {
    let tag =
        OperatorTag::from_monomial(k, 0).ok_or_else(|| Error::Unsupported { op: format!("r^{k}"), dl: ket.l as i32 - bra.l as i32 })?;
    if bra.l != ket.l {
        return Ok(0.0);
    }
    Ok(lhat(bra.l) * me_same_l(tag, bra.n, ket.n, bra.l, b)?)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum LaplacianForm {
    /// `sqrt(2l+1) (<d^2/dr^2> - l(l+1) <r^-2>)` from the same-`l` table.
    #[default]
    Assembled,
    /// The closed case formula with `+` on the off-diagonal, which disagrees
    /// with direct integration. Kept for comparison only.
    Printed,
}

/// `<n'l||nabla^2||nl>`.
pub fn reduced_me_laplacian(n_bra: u32, n_ket: u32, l: u32, b: LengthScale, form: LaplacianForm) -> f64 {
    match form {
        LaplacianForm::Assembled => {
            let d2 = me_same_l(OperatorTag::D2dr2, n_bra, n_ket, l, b).expect("same-l table is total");
            let r2 = me_same_l(OperatorTag::RInv2, n_bra, n_ket, l, b).expect("same-l table is total");
            lhat(l) * (d2 - (l * (l + 1)) as f64 * r2)
        }
        LaplacianForm::Printed => {
            let (p, n, lu) = (n_bra as u64, n_ket as u64, l as u64);
            let lf = l as f64;
            let v = if p == n {
                -(4.0 * n as f64 + 2.0 * lf + 3.0) / (2.0 * lf + 3.0)
            } else {
                let (hi, lo) = if p > n { (p, n) } else { (n, p) };
                let rad = sqrt_factorial_ratio(&[hi, lo + 2 * lu + 2], &[lo, hi + 2 * lu + 2]);
                (4.0 * lo as f64 + 4.0 * lf + 6.0) / (2.0 * lf + 3.0) * rad
            };
            lhat(l) * v * b.get().powi(-2)
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
pub enum GradientForm {
    /// Case formulas that agree with the radial route below.
    #[default]
    Corrected,
    /// The `l' = l+1` cases with `n'` in the prefactor and a `+` on the
    /// `n' = n-1` entry. Kept for comparison only.
    Printed,
}

/// Exact `<n'l'||nabla_1||nl>` at `b = 1`; zero unless `|l' - l| = 1`.
pub fn gradient_closed_form(bra: BasisIndex, ket: BasisIndex, form: GradientForm) -> ClosedForm {
    let (p, n, l) = (bra.n as u64, ket.n as u64, ket.l as u64);
    let (pi, ni, li) = (p as i128, n as i128, l as i128);
    if bra.l == ket.l + 1 {
        let ang = Radical::ints(&[l + 1], &[2 * l + 3]);
        if p >= n {
            let lead = match form {
                GradientForm::Corrected => ni,
                GradientForm::Printed => pi,
            };
            let mut rad = Radical::factorials(&[p, n + 2 * l + 2], &[n, p + 2 * l + 4]);
            rad.num_int = ang.num_int;
            rad.den_int = ang.den_int;
            ClosedForm::new(Q::from_integer(-(2 * lead + 2 * li + 3)), rad)
        } else if p + 1 == n {
            let sign = match form {
                GradientForm::Corrected => -1,
                GradientForm::Printed => 1,
            };
            ClosedForm::new(Q::from_integer(sign), Radical::ints(&[n, l + 1], &[2 * l + 3, n + 2 * l + 3]))
        } else {
            ClosedForm::zero()
        }
    } else if l >= 1 && bra.l + 1 == ket.l {
        if p >= n + 2 {
            ClosedForm::zero()
        } else if p == n + 1 {
            ClosedForm::new(Q::from_integer(-1), Radical::ints(&[n + 1, l], &[2 * l - 1, n + 2 * l + 2]))
        } else {
            let mut rad = Radical::factorials(&[n, p + 2 * l], &[p, n + 2 * l + 2]);
            rad.num_int = vec![l];
            rad.den_int = vec![2 * l - 1];
            ClosedForm::new(Q::from_integer(-(2 * pi + 2 * li + 1)), rad)
        }
    } else {
        ClosedForm::zero()
    }
}

/// `<n'l'||nabla_1||nl>`; zero unless `|l' - l| = 1`.
pub fn reduced_me_gradient(bra: BasisIndex, ket: BasisIndex, b: LengthScale, form: GradientForm) -> f64 {
    gradient_closed_form(bra, ket, form).to_f64() / b.get()
}

/// Exact assembled `<n'l||nabla^2||nl>` at `b = 1`.
pub fn laplacian_exact(n_bra: u32, n_ket: u32, l: u32) -> Surd {
    let (bra, ket) = (BasisIndex::new(n_bra, l), BasisIndex::new(n_ket, l));
    let d2 = closed_form(OperatorTag::D2dr2, bra, ket).expect("same-l table is total").to_surd();
    let r2 = closed_form(OperatorTag::RInv2, bra, ket).expect("same-l table is total").to_surd();
    let ll = BigRational::from_integer(BigInt::from(-((l * (l + 1)) as i64)));
    let r2 = r2.mul(&Surd::rational(ll));
    let lhat = Surd::new(BigRational::one(), BigRational::from_integer(BigInt::from(2 * l + 1))).expect("positive");
    // both constituents share the same radical
    d2.checked_add(&r2).expect("shared radical").mul(&lhat)
}

/// The same element from radial tables:
/// `sqrt((l+1)/(2l+3)) <n',l+1|d/dr - (l+1)/r|nl>` or
/// `-sqrt(l/(2l-1)) <n',l-1|d/dr + l/r|nl>`.
pub fn gradient_via_radial(bra: BasisIndex, ket: BasisIndex, b: LengthScale) -> Result<f64> {
    let lf = ket.l as f64;
    if bra.l.abs_diff(ket.l) != 1 {
        return Ok(0.0);
    }
    let ddr = me_general(OperatorTag::Ddr, bra, ket, b)?;
    let rinv = me_general(OperatorTag::RInv, bra, ket, b)?;
    if bra.l == ket.l + 1 {
        Ok(((lf + 1.0) / (2.0 * lf + 3.0)).sqrt() * (ddr - (lf + 1.0) * rinv))
    } else {
        Ok(-(lf / (2.0 * lf - 1.0)).sqrt() * (ddr + lf * rinv))
    }
}

/// Full element `<n'l'm'|nabla_mu|nlm>`.
///
/// The gradient's reduced elements above are normalized so that the full
/// element is `(l m; 1 mu|l' m') <n'l'||nabla_1||nl>`, without the
/// `1/sqrt(2l'+1)` used for scalars: for `l = 0`,
/// `<n'10|d/dz|n00> = <n'1|d/dr - 1/r|n0> / sqrt(3)`, which is exactly
/// `<n'1||nabla_1||n0>`.
pub fn gradient_component(bra: BasisIndex, m_bra: i32, mu: i32, ket: BasisIndex, m_ket: i32, b: LengthScale) -> f64 {
    let red = ReducedME { bra, ket, rank: 1, value: reduced_me_gradient(bra, ket, b, GradientForm::Corrected) };
    wigner_eckart_project(&red, m_bra, mu, m_ket) * lhat(bra.l)
}

/// `<n' l m|sum_mu (-1)^mu nabla_mu nabla_-mu|n l m>` with the intermediate
/// sum over `n1 <= n_inter`. The `l+1` channel is an infinite series whose
/// tail falls off like `n_inter^-(2l+3)`, so this only approaches the
/// Laplacian element as `n_inter` grows.
pub fn laplacian_via_gradient(n_bra: u32, n_ket: u32, l: u32, m: i32, n_inter: u32, b: LengthScale) -> f64 {
    let bra = BasisIndex::new(n_bra, l);
    let ket = BasisIndex::new(n_ket, l);
    let mut total = 0.0;
    for mu in -1i32..=1 {
        let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
        let m1 = m - mu;
        for l1 in [l as i64 - 1, l as i64 + 1] {
            if l1 < 0 || (m1.unsigned_abs() as i64) > l1 {
                continue;
            }
            for n1 in 0..=n_inter {
                let mid = BasisIndex::new(n1, l1 as u32);
                let right = gradient_component(mid, m1, -mu, ket, m, b);
                if right != 0.0 {
                    total += sign * gradient_component(bra, m, mu, mid, m1, b) * right;
                }
            }
        }
    }
    total
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    const B1: LengthScale = LengthScale::UNIT;

    fn idx(n: u32, l: u32) -> BasisIndex {
        BasisIndex::new(n, l)
    }

    #[test]
    fn gamma_examples() {
        for k in -3..4 {
            assert_eq!(gamma_normalize(&RadialWord::r_pow(k)), RadialWord::r_pow(k));
        }
        let lap = RadialWord::from_factors(&[Factor::Pow(-2), Factor::Ddr, Factor::Pow(2), Factor::Ddr]);
        assert_eq!(gamma_normalize(&lap), RadialWord::monomial(Q::one(), 0, 2));
        let g = gamma_normalize(&RadialWord::ddr());
        assert_eq!(g, RadialWord::ddr().add(&RadialWord::monomial(-Q::one(), -1, 0)));
        assert_eq!(g.to_string(), "(1)*D + (-1)*r^-1");
    }

    #[test]
    fn word_matrix_elements() {
        // r d/dr as a word equals the catalog entry
        let w = RadialWord::from_factors(&[Factor::Pow(1), Factor::Ddr]);
        let (v, s) = w.matrix_element(idx(1, 0), idx(0, 0), B1, false).unwrap();
        assert_eq!(s, Source::ClosedForm);
        assert_relative_eq!(v, me_same_l(OperatorTag::RDdr, 1, 0, 0, B1).unwrap());
        // r^3 has no table entry
        assert!(RadialWord::r_pow(3).matrix_element(idx(0, 0), idx(0, 0), B1, false).is_err());
        let (v, s) = RadialWord::r_pow(3).matrix_element(idx(0, 0), idx(0, 0), B1, true).unwrap();
        assert_eq!(s, Source::Quadrature);
        // <00|r^3|00> = (b/2)^3 * 5!/2! = 7.5
        assert_relative_eq!(v, 7.5, max_relative = 1e-13);
    }

    #[test]
    fn clebsch_gordan_examples() {
        for l in 0..5 {
            for m in -l..=l {
                assert_relative_eq!(clebsch_gordan(l as f64, m as f64, 0.0, 0.0, l as f64, m as f64), 1.0, max_relative = 1e-14);
            }
        }
        assert_relative_eq!(clebsch_gordan(1.0, 0.0, 1.0, 0.0, 2.0, 0.0), (2.0f64 / 3.0).sqrt(), max_relative = 1e-14);
        assert_relative_eq!(clebsch_gordan(1.0, 1.0, 1.0, -1.0, 0.0, 0.0), 1.0 / 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 1.0, 0.0), 0.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(clebsch_gordan(0.5, 0.5, 0.5, -0.5, 0.0, 0.0), 0.5f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(clebsch_gordan(0.5, -0.5, 0.5, 0.5, 0.0, 0.0), -(0.5f64.sqrt()), max_relative = 1e-14);
        assert_eq!(clebsch_gordan(1.0, 0.0, 1.0, 0.0, 1.0, 0.0), 0.0);
        assert_eq!(clebsch_gordan(1.0, 1.0, 1.0, 1.0, 1.0, 1.0), 0.0);
        assert_eq!(clebsch_gordan(1.0, 0.0, 1.0, 0.0, 3.0, 0.0), 0.0);
        assert_eq!(clebsch_gordan(0.3, 0.0, 1.0, 0.0, 1.0, 0.0), 0.0);
    }

    #[test]
    fn clebsch_gordan_orthogonality() {
        for tj1 in 0..6i64 {
            for tj2 in 0..5i64 {
                let mut tj = (tj1 - tj2).abs();
                while tj <= tj1 + tj2 {
                    for tjp in [tj, tj + 2] {
                        if tjp > tj1 + tj2 {
                            continue;
                        }
                        let mut s = 0.0;
                        for tm1 in (-tj1..=tj1).step_by(2) {
                            for tm2 in (-tj2..=tj2).step_by(2) {
                                let tm = tm1 + tm2;
                                if tm.abs() > tj.min(tjp) || tm != tj.min(tjp) {
                                    continue;
                                }
                                s += clebsch_gordan2(tj1, tm1, tj2, tm2, tj, tm) * clebsch_gordan2(tj1, tm1, tj2, tm2, tjp, tm);
                            }
                        }
                        let want = if tjp == tj { 1.0 } else { 0.0 };
                        assert!((s - want).abs() < 1e-13, "{tj1} {tj2} {tj} {tjp}: {s}");
                    }
                    tj += 2;
                }
            }
        }
    }

    #[test]
    fn reduced_rk() {
        assert_eq!(reduced_me_rk(1, idx(0, 0), idx(0, 0), B1).unwrap(), 1.5);
        for l in 0..4 {
            for n in 0..4 {
                for p in 0..4 {
                    let want = if p == n { lhat(l) } else { 0.0 };
                    assert_relative_eq!(reduced_me_rk(0, idx(p, l), idx(n, l), B1).unwrap(), want);
                }
            }
        }
        assert_eq!(reduced_me_rk(1, idx(0, 1), idx(0, 0), B1).unwrap(), 0.0);
        assert!(reduced_me_rk(3, idx(0, 0), idx(0, 0), B1).is_err());
    }

    #[test]
    fn laplacian_examples() {
        let f = LaplacianForm::Assembled;
        assert_relative_eq!(reduced_me_laplacian(0, 0, 0, B1, f), -1.0, max_relative = 1e-15);
        assert_relative_eq!(reduced_me_laplacian(1, 0, 0, B1, f), -2.0 / 3f64.sqrt(), max_relative = 1e-14);
        assert_relative_eq!(reduced_me_laplacian(2, 2, 1, B1, f), -2.6 * 3f64.sqrt(), max_relative = 1e-14);
        // the printed off-diagonal differs only by sign; diagonal agrees
        for l in 0..4 {
            for p in 0..6 {
                for n in 0..6 {
                    let a = reduced_me_laplacian(p, n, l, B1, LaplacianForm::Assembled);
                    let q = reduced_me_laplacian(p, n, l, B1, LaplacianForm::Printed);
                    let want = if p == n { a } else { -a };
                    assert!((q - want).abs() < 1e-12 * (1.0 + a.abs()));
                }
            }
        }
    }

    #[test]
    fn gradient_examples() {
        let c = GradientForm::Corrected;
        assert_relative_eq!(reduced_me_gradient(idx(0, 1), idx(0, 0), B1, c), -0.5, max_relative = 1e-15);
        assert_relative_eq!(reduced_me_gradient(idx(0, 0), idx(1, 1), B1, c), -(15f64.sqrt()) / 10.0, max_relative = 1e-14);
        assert!(reduced_me_gradient(idx(5, 1), idx(3, 0), B1, c) != 0.0);
        assert_eq!(reduced_me_gradient(idx(1, 1), idx(3, 0), B1, c), 0.0);
        assert_eq!(reduced_me_gradient(idx(2, 0), idx(0, 1), B1, c), 0.0);
        assert_eq!(reduced_me_gradient(idx(0, 2), idx(0, 0), B1, c), 0.0);
        assert_eq!(reduced_me_gradient(idx(0, 0), idx(0, 0), B1, c), 0.0);
        let b2 = LengthScale::new(2.0).unwrap();
        assert_relative_eq!(reduced_me_gradient(idx(0, 1), idx(0, 0), b2, c), -0.25, max_relative = 1e-15);
    }

    #[test]
    fn exact_forms_match_floats() {
        for l in 0..4u32 {
            for p in 0..7 {
                for n in 0..7 {
                    let a = reduced_me_laplacian(p, n, l, B1, LaplacianForm::Assembled);
                    let e = laplacian_exact(p, n, l).to_f64();
                    assert!((a - e).abs() <= 1e-13 * a.abs().max(1e-300), "{p} {n} {l}");
                }
            }
        }
        assert_eq!(laplacian_exact(0, 0, 0).to_string(), "-1/1*sqrt(1/1)");
        assert_eq!(gradient_closed_form(idx(0, 1), idx(0, 0), GradientForm::Corrected).to_surd().to_string(), "-1/2*sqrt(1/1)");
        assert_eq!(gradient_closed_form(idx(0, 0), idx(1, 1), GradientForm::Corrected).to_surd().to_string(), "-1/10*sqrt(15/1)");
    }

    #[test]
    fn gradient_matches_radial_route() {
        for l in 0..4u32 {
            for lb in [l as i64 - 1, l as i64 + 1] {
                if lb < 0 {
                    continue;
                }
                for p in 0..8 {
                    for n in 0..8 {
                        let (bra, ket) = (idx(p, lb as u32), idx(n, l));
                        let a = reduced_me_gradient(bra, ket, B1, GradientForm::Corrected);
                        let r = gradient_via_radial(bra, ket, B1).unwrap();
                        assert!((a - r).abs() < 1e-13 * (1.0 + a.abs()), "{bra:?} {ket:?}: {a} vs {r}");
                    }
                }
            }
        }
    }

    #[test]
    fn gradient_component_is_d_dz() {
        // <n'10|d/dz|n00> = <n'1|d/dr - 1/r|n0> / sqrt(3)
        for p in 0..5 {
            for n in 0..5 {
                let (bra, ket) = (idx(p, 1), idx(n, 0));
                let radial = me_general(OperatorTag::Ddr, bra, ket, B1).unwrap() - me_general(OperatorTag::RInv, bra, ket, B1).unwrap();
                assert!((gradient_component(bra, 0, 0, ket, 0, B1) - radial / 3f64.sqrt()).abs() < 1e-14);
            }
        }
    }

    #[test]
    fn gradient_is_anti_hermitian() {
        // nabla_mu^dagger = (-1)^mu nabla_-mu and nabla^dagger = -nabla
        for l in 0..3u32 {
            for lb in [l + 1, l.wrapping_sub(1)] {
                if lb > 10 {
                    continue;
                }
                for p in 0..5 {
                    for n in 0..5 {
                        for m in -(l as i32)..=(l as i32) {
                            for mu in -1..=1 {
                                let mb = m + mu;
                                if mb.unsigned_abs() > lb {
                                    continue;
                                }
                                let (a, c) = (idx(p, lb), idx(n, l));
                                let fwd = gradient_component(a, mb, mu, c, m, B1);
                                let sign = if mu % 2 == 0 { 1.0 } else { -1.0 };
                                let back = gradient_component(c, m, -mu, a, mb, B1);
                                assert!((fwd + sign * back).abs() < 1e-13, "{a:?} {c:?} m={m} mu={mu}");
                            }
                        }
                    }
                }
            }
        }
    }

    #[test]
    fn gradient_contraction_gives_laplacian() {
        for l in 0..3u32 {
            for p in 0..3 {
                for n in 0..3 {
                    let want = reduced_me_laplacian(p, n, l, B1, LaplacianForm::Assembled) / lhat(l);
                    for m in -(l as i32)..=(l as i32) {
                        let v = laplacian_via_gradient(p, n, l, m, 10_000, B1);
                        assert!((v - want).abs() < 1e-9, "p={p} n={n} l={l} m={m}: {v} vs {want}");
                    }
                }
            }
        }
    }

    #[test]
    fn projection_examples() {
        let red = ReducedME { bra: idx(0, 2), ket: idx(0, 2), rank: 0, value: 3.0 };
        assert_relative_eq!(wigner_eckart_project(&red, 1, 0, 1), 3.0 / 5f64.sqrt());
        assert_eq!(wigner_eckart_project(&red, 1, 0, 0), 0.0);
        let red = ReducedME { bra: idx(0, 1), ket: idx(0, 0), rank: 1, value: -0.5 };
        assert_relative_eq!(wigner_eckart_project(&red, 0, 0, 0), -0.5 / 3f64.sqrt());
        // sum over m', alpha of |full|^2 is |red|^2 / (2l+1) for each m
        let red = ReducedME { bra: idx(0, 2), ket: idx(1, 1), rank: 1, value: 1.7 };
        for m in -1..=1 {
            let mut s = 0.0;
            for mp in -2..=2 {
                for a in -1..=1 {
                    s += wigner_eckart_project(&red, mp, a, m).powi(2);
                }
            }
            assert_relative_eq!(s, 1.7f64.powi(2) / 3.0, max_relative = 1e-13);
        }
    }

    fn factor() -> impl proptest::strategy::Strategy<Value = Factor> {
        use proptest::prelude::*;
        prop_oneof![(-3i32..=3).prop_map(Factor::Pow), Just(Factor::Ddr)]
    }

    proptest::proptest! {
        #[test]
        fn gamma_is_multiplicative(
            a in proptest::collection::vec(factor(), 0..=4),
            b in proptest::collection::vec(factor(), 0..=4),
        ) {
            let (wa, wb) = (RadialWord::from_factors(&a), RadialWord::from_factors(&b));
            let ab: Vec<Factor> = a.iter().chain(&b).copied().collect();
            proptest::prop_assert_eq!(gamma_normalize(&RadialWord::from_factors(&ab)), gamma_normalize(&wa).mul(&gamma_normalize(&wb)));
        }
    }
}
