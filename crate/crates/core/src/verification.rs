//! Closed forms against the quadrature oracle over index ranges.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_elements::{me_exact, me_general, supports};
use crate::operator::{OperatorTag, RadialOperator};
use crate::radial_basis::{quadrature_me, BasisIndex, LengthScale};
use crate::surd::Surd;
use crate::tensor_me::{gradient_closed_form, laplacian_exact, reduced_me_gradient, reduced_me_laplacian, GradientForm, LaplacianForm};

/// Anything with a closed-form table: a radial operator, or a reduced
/// element of `nabla^2` or `nabla_1`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum TableOp {
    Radial(OperatorTag),
    Laplacian,
    Gradient,
}

impl TableOp {
    pub fn all() -> Vec<TableOp> {
        let mut v: Vec<TableOp> = OperatorTag::ALL.into_iter().map(TableOp::Radial).collect();
        v.push(TableOp::Laplacian);
        v.push(TableOp::Gradient);
        v
    }

    pub fn name(self) -> &'static str {
        match self {
            TableOp::Radial(t) => t.name(),
            TableOp::Laplacian => "laplacian",
            TableOp::Gradient => "gradient",
        }
    }

    /// `dl = l_ket - l_bra`.
    pub fn supports(self, dl: i32) -> bool {
        match self {
            TableOp::Radial(t) => supports(t, dl),
            TableOp::Laplacian => dl == 0,
            TableOp::Gradient => dl.abs() == 1,
        }
    }

    fn check(self, bra: BasisIndex, ket: BasisIndex) -> Result<()> {
        let dl = ket.l as i32 - bra.l as i32;
        if self.supports(dl) {
            Ok(())
        } else {
            Err(Error::Unsupported { op: self.name().to_string(), dl })
        }
    }

    pub fn closed_form(self, bra: BasisIndex, ket: BasisIndex, b: LengthScale) -> Result<f64> {
        self.check(bra, ket)?;
        Ok(match self {
            TableOp::Radial(t) => me_general(t, bra, ket, b)?,
            TableOp::Laplacian => reduced_me_laplacian(bra.n, ket.n, bra.l, b, LaplacianForm::Assembled),
            TableOp::Gradient => reduced_me_gradient(bra, ket, b, GradientForm::Corrected),
        })
    }

    /// Exact value at `b = 1`.
    pub fn exact(self, bra: BasisIndex, ket: BasisIndex) -> Result<Surd> {
        self.check(bra, ket)?;
        Ok(match self {
            TableOp::Radial(t) => me_exact(t, bra, ket)?,
            TableOp::Laplacian => laplacian_exact(bra.n, ket.n, bra.l),
            TableOp::Gradient => gradient_closed_form(bra, ket, GradientForm::Corrected).to_surd(),
        })
    }

    /// Direct numerical integration of the same element.
    pub fn oracle(self, bra: BasisIndex, ket: BasisIndex, b: LengthScale) -> Result<f64> {
        let q = |t: OperatorTag| quadrature_me(bra, ket, &RadialOperator::Tag(t), b);
        Ok(match self {
            TableOp::Radial(t) => q(t)?,
            TableOp::Laplacian => {
                let l = bra.l as f64;
                (2.0 * l + 1.0).sqrt() * (q(OperatorTag::D2dr2)? - l * (l + 1.0) * q(OperatorTag::RInv2)?)
            }
            TableOp::Gradient => {
                let l = ket.l as f64;
                if bra.l == ket.l + 1 {
                    ((l + 1.0) / (2.0 * l + 3.0)).sqrt() * (q(OperatorTag::Ddr)? - (l + 1.0) * q(OperatorTag::RInv)?)
                } else if ket.l >= 1 && bra.l + 1 == ket.l {
                    -(l / (2.0 * l - 1.0)).sqrt() * (q(OperatorTag::Ddr)? + l * q(OperatorTag::RInv)?)
                } else {
                    0.0
                }
            }
        })
    }
}

impl fmt::Display for TableOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for TableOp {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "laplacian" => Ok(TableOp::Laplacian),
            "gradient" => Ok(TableOp::Gradient),
            _ => s.parse().map(TableOp::Radial),
        }
    }
}

/// One closed-form/oracle comparison.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Comparison {
    pub op: TableOp,
    pub bra: BasisIndex,
    pub ket: BasisIndex,
    pub b: f64,
    pub closed_form: f64,
    pub oracle: f64,
    /// `|closed_form - oracle| / (1 + |closed_form|)`
    pub deviation: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SweepReport {
    pub checked: usize,
    pub max_deviation: f64,
    pub worst: Option<Comparison>,
}

impl SweepReport {
    pub fn passes(&self, tol: f64) -> bool {
        self.max_deviation <= tol
    }
}

/// Every supported `(op, dl)` with bra `l <= l_max`, `n, n' <= n_max` and each
/// scale in `scales`. Work fans out over `(op, dl, l, b)`; the report does not
/// depend on scheduling.
pub fn sweep(ops: &[TableOp], n_max: u32, l_max: u32, scales: &[LengthScale]) -> Result<SweepReport> {
    let mut jobs = Vec::new();
    for &op in ops {
        for dl in -2i32..=2 {
            if !op.supports(dl) {
                continue;
            }
            for l in 0..=l_max {
                if l as i32 + dl < 0 {
                    continue;
                }
                for &b in scales {
                    jobs.push((op, dl, l, b));
                }
            }
        }
    }
    let results: Vec<Result<(usize, Option<Comparison>)>> = jobs
        .par_iter()
        .map(|&(op, dl, l, b)| {
            let mut worst: Option<Comparison> = None;
            let mut count = 0;
            for p in 0..=n_max {
                for n in 0..=n_max {
                    let bra = BasisIndex::new(p, l);
                    let ket = BasisIndex::new(n, (l as i32 + dl) as u32);
                    let closed_form = op.closed_form(bra, ket, b)?;
                    let oracle = op.oracle(bra, ket, b)?;
                    let deviation = (closed_form - oracle).abs() / (1.0 + closed_form.abs());
                    count += 1;
                    if worst.as_ref().is_none_or(|w| deviation > w.deviation) {
                        worst = Some(Comparison { op, bra, ket, b: b.get(), closed_form, oracle, deviation });
                    }
                }
            }
            Ok((count, worst))
        })
        .collect();
    let mut report = SweepReport { checked: 0, max_deviation: 0.0, worst: None };
    for r in results {
        let (count, worst) = r?;
        report.checked += count;
        if let Some(w) = worst {
            if report.worst.is_none() || w.deviation > report.max_deviation {
                report.max_deviation = w.deviation;
                report.worst = Some(w);
            }
        }
    }
    Ok(report)
}
