//! The radial operator catalog.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Operators with closed-form matrix elements.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum OperatorTag {
    Overlap,
    R,
    R2,
    RInv,
    RInv2,
    RDdr,
    Ddr,
    D2dr2,
}

impl OperatorTag {
    pub const ALL: [OperatorTag; 8] = [
        OperatorTag::Overlap,
        OperatorTag::R,
        OperatorTag::R2,
        OperatorTag::RInv,
        OperatorTag::RInv2,
        OperatorTag::RDdr,
        OperatorTag::Ddr,
        OperatorTag::D2dr2,
    ];

    /// Net power of length: matrix elements at scale `b` carry `b^s`.
    pub fn scale_exponent(self) -> i32 {
        match self {
            OperatorTag::Overlap | OperatorTag::RDdr => 0,
            OperatorTag::R => 1,
            OperatorTag::R2 => 2,
            OperatorTag::RInv | OperatorTag::Ddr => -1,
            OperatorTag::RInv2 | OperatorTag::D2dr2 => -2,
        }
    }

    /// Number of `d/dr` factors; each flips sign under transposition.
    pub fn derivative_order(self) -> u32 {
        match self {
            OperatorTag::RDdr | OperatorTag::Ddr => 1,
            OperatorTag::D2dr2 => 2,
            _ => 0,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            OperatorTag::Overlap => "overlap",
            OperatorTag::R => "r",
            OperatorTag::R2 => "r2",
            OperatorTag::RInv => "rinv",
            OperatorTag::RInv2 => "rinv2",
            OperatorTag::RDdr => "rddr",
            OperatorTag::Ddr => "ddr",
            OperatorTag::D2dr2 => "d2dr2",
        }
    }

    /// The same operator written as a word, rightmost factor acting first.
    pub fn to_word(self) -> Vec<Factor> {
        match self {
            OperatorTag::Overlap => vec![],
            OperatorTag::R => vec![Factor::Pow(1)],
            OperatorTag::R2 => vec![Factor::Pow(2)],
            OperatorTag::RInv => vec![Factor::Pow(-1)],
            OperatorTag::RInv2 => vec![Factor::Pow(-2)],
            OperatorTag::RDdr => vec![Factor::Pow(1), Factor::Ddr],
            OperatorTag::Ddr => vec![Factor::Ddr],
            OperatorTag::D2dr2 => vec![Factor::Ddr, Factor::Ddr],
        }
    }

    /// Inverse of [`OperatorTag::to_word`] for words in normal form.
    pub fn from_monomial(power: i32, derivs: u32) -> Option<Self> {
        Some(match (power, derivs) {
            (0, 0) => OperatorTag::Overlap,
            (1, 0) => OperatorTag::R,
            (2, 0) => OperatorTag::R2,
            (-1, 0) => OperatorTag::RInv,
            (-2, 0) => OperatorTag::RInv2,
            (1, 1) => OperatorTag::RDdr,
            (0, 1) => OperatorTag::Ddr,
            (0, 2) => OperatorTag::D2dr2,
            _ => return None,
        })
    }
}

impl fmt::Display for OperatorTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for OperatorTag {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        OperatorTag::ALL.into_iter().find(|t| t.name() == s).ok_or_else(|| Error::Parse(format!("unknown operator `{s}`")))
    }
}

/// One factor of an operator word.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Factor {
    /// `r^a`
    Pow(i32),
    /// `d/dr`
    Ddr,
}

/// A catalog operator or an arbitrary product of `r^a` and `d/dr` factors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum RadialOperator {
    Tag(OperatorTag),
    /// Ordered left to right as written; the rightmost factor acts first.
    Word(Vec<Factor>),
}

impl RadialOperator {
    pub fn scale_exponent(&self) -> i32 {
        match self {
            RadialOperator::Tag(t) => t.scale_exponent(),
            RadialOperator::Word(w) => w
                .iter()
                .map(|f| match f {
                    Factor::Pow(a) => *a,
                    Factor::Ddr => -1,
                })
                .sum(),
        }
    }

    pub fn factors(&self) -> Vec<Factor> {
        match self {
            RadialOperator::Tag(t) => t.to_word(),
            RadialOperator::Word(w) => w.clone(),
        }
    }

    /// Highest power of `r` the operator can raise an integrand by.
    pub fn polynomial_degree(&self) -> u32 {
        let mut degree = 0i32;
        let mut best = 0i32;
        for f in self.factors().iter().rev() {
            if let Factor::Pow(a) = f {
                degree += a;
                best = best.max(degree);
            }
        }
        best as u32
    }
}

impl From<OperatorTag> for RadialOperator {
    fn from(t: OperatorTag) -> Self {
        RadialOperator::Tag(t)
    }
}
