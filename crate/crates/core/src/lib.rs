//! Matrix elements of radial operators in the Laguerre function basis.

// `!(x > 0.0)` is used on purpose so that NaN is rejected too.
#![allow(clippy::neg_cmp_op_on_partial_ord)]

pub mod cli;
pub mod error;
pub mod hamiltonian;
pub mod matrix_elements;
pub mod operator;
pub mod radial_basis;
pub mod shift_ops;
pub mod special_fn;
pub mod su11;
pub mod surd;
pub mod tensor_me;
pub mod verification;

pub use error::{Error, Result};
pub use operator::{Factor, OperatorTag, RadialOperator};
pub use radial_basis::{eval_S, quadrature_me, BasisIndex, LengthScale, RadialFunction};
pub use surd::Surd;
