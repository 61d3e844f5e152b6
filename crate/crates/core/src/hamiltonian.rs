//! Operator matrices on a truncated `{S_nl : n <= n_max}` block and the
//! Coulomb problem `H = -1/2 nabla^2 - Z/r` (hartree units).

use nalgebra::{DMatrix, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::matrix_elements::{me_same_l, Source};
use crate::operator::OperatorTag;
use crate::radial_basis::{quadrature_me, BasisIndex, LengthScale};
use crate::tensor_me::{reduced_me_laplacian, LaplacianForm};

/// Operators with a same-`l` block.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum BlockOperator {
    Radial(OperatorTag),
    /// Radial part of `nabla^2` on the `S_nl`: `d^2/dr^2 - l(l+1)/r^2`.
    Laplacian,
}

impl From<OperatorTag> for BlockOperator {
    fn from(t: OperatorTag) -> Self {
        BlockOperator::Radial(t)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct OperatorMatrix {
    pub l: u32,
    pub n_max: u32,
    pub b: LengthScale,
    pub entries: DMatrix<f64>,
}

impl OperatorMatrix {
    pub fn dim(&self) -> usize {
        self.entries.nrows()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let m = &self.entries;
        (m - m.transpose()).amax()
    }
}

fn entry(op: BlockOperator, p: u32, n: u32, l: u32, b: LengthScale, source: Source) -> Result<f64> {
    match (op, source) {
        (BlockOperator::Radial(t), Source::ClosedForm) => me_same_l(t, p, n, l, b),
        (BlockOperator::Laplacian, Source::ClosedForm) => {
            Ok(reduced_me_laplacian(p, n, l, b, LaplacianForm::Assembled) / ((2 * l + 1) as f64).sqrt())
        }
        (BlockOperator::Radial(t), Source::Quadrature) => quadrature_me(BasisIndex::new(p, l), BasisIndex::new(n, l), &t.into(), b),
        (BlockOperator::Laplacian, Source::Quadrature) => {
            let (bra, ket) = (BasisIndex::new(p, l), BasisIndex::new(n, l));
            let d2 = quadrature_me(bra, ket, &OperatorTag::D2dr2.into(), b)?;
            let r2 = quadrature_me(bra, ket, &OperatorTag::RInv2.into(), b)?;
            Ok(d2 - (l * (l + 1)) as f64 * r2)
        }
    }
}

/// `(n_max+1) x (n_max+1)` matrix of `<n' l|op|n l>` from the closed forms.
pub fn assemble(op: impl Into<BlockOperator>, l: u32, n_max: u32, b: LengthScale) -> Result<OperatorMatrix> {
    assemble_from(op.into(), l, n_max, b, Source::ClosedForm)
}

/// As [`assemble`], with every entry taken from `source`.
pub fn assemble_from(op: BlockOperator, l: u32, n_max: u32, b: LengthScale, source: Source) -> Result<OperatorMatrix> {
    let dim = n_max as usize + 1;
    let mut entries = DMatrix::zeros(dim, dim);
    for p in 0..=n_max {
        for n in 0..=n_max {
            entries[(p as usize, n as usize)] = entry(op, p, n, l, b, source)?;
        }
    }
    Ok(OperatorMatrix { l, n_max, b, entries })
}

/// `-1/2 b^-2 M(nabla^2) - Z b^-1 M(1/r)`, both constituents at `b = 1`.
pub fn coulomb_hamiltonian(z: f64, b: LengthScale, l: u32, n_max: u32) -> Result<OperatorMatrix> {
    if !(z > 0.0 && z.is_finite()) {
        return Err(Error::domain(format!("nuclear charge must be positive, got {z}")));
    }
    let lap = assemble(BlockOperator::Laplacian, l, n_max, LengthScale::UNIT)?;
    let rinv = assemble(OperatorTag::RInv, l, n_max, LengthScale::UNIT)?;
    let bv = b.get();
    let entries = lap.entries * (-0.5 / (bv * bv)) - rinv.entries * (z / bv);
    Ok(OperatorMatrix { l, n_max, b, entries })
}

/// Lowest `count` eigenvalues (fewer if the block is smaller), ascending.
///
/// Rejects matrices whose asymmetry exceeds `1e-13 max(1, |H|)` and checks
/// `|Hv - lambda v| <= 1e-10 |H|` for every returned pair.
pub fn solve_spectrum(h: &OperatorMatrix, count: usize) -> Result<Vec<f64>> {
    if count == 0 {
        return Err(Error::domain("requested zero eigenvalues"));
    }
    let norm = h.entries.norm();
    let asym = h.max_asymmetry();
    if asym > 1e-13 * norm.max(1.0) {
        return Err(Error::NotSymmetric(asym));
    }
    let eig = SymmetricEigen::try_new(h.entries.clone(), 1e-15, 10_000)
        .ok_or_else(|| Error::Convergence(format!("{}x{} block did not converge", h.dim(), h.dim())))?;
    let mut order: Vec<usize> = (0..h.dim()).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let mut out = Vec::with_capacity(count.min(h.dim()));
    for &k in order.iter().take(count) {
        let lambda = eig.eigenvalues[k];
        let v = eig.eigenvectors.column(k);
        let residual = (&h.entries * v - v * lambda).norm();
        if residual > 1e-10 * norm.max(f64::MIN_POSITIVE) {
            return Err(Error::Convergence(format!("eigenpair residual {residual:e} for eigenvalue {lambda}")));
        }
        out.push(lambda);
    }
    Ok(out)
}

/// `-Z^2 / (2 (k+l+1)^2)`.
pub fn coulomb_reference(z: f64, l: u32, k: u32) -> f64 {
    let n = (k + l + 1) as f64;
    -z * z / (2.0 * n * n)
}

/// Lowest eigenvalues against the exact Coulomb levels for a list of cutoffs.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SpectrumReport {
    pub z: f64,
    pub b: f64,
    pub l: u32,
    pub n_max: Vec<u32>,
    pub reference: Vec<f64>,
    /// `eigenvalues[i]` belongs to `n_max[i]`.
    pub eigenvalues: Vec<Vec<f64>>,
    /// `errors[i][k] = eigenvalues[i][k] - reference[k]`.
    pub errors: Vec<Vec<f64>>,
}

pub fn convergence_report(z: f64, b: LengthScale, l: u32, n_max_list: &[u32], levels: usize) -> Result<SpectrumReport> {
    let reference: Vec<f64> = (0..levels as u32).map(|k| coulomb_reference(z, l, k)).collect();
    let mut eigenvalues = Vec::with_capacity(n_max_list.len());
    let mut errors = Vec::with_capacity(n_max_list.len());
    for &n_max in n_max_list {
        let ev = solve_spectrum(&coulomb_hamiltonian(z, b, l, n_max)?, levels)?;
        errors.push(ev.iter().zip(&reference).map(|(e, r)| e - r).collect());
        eigenvalues.push(ev);
    }
    Ok(SpectrumReport { z, b: b.get(), l, n_max: n_max_list.to_vec(), reference, eigenvalues, errors })
}
