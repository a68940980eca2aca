//! Exact Clebsch-Gordan coefficients for simple Lie algebras.
//!
//! The crate is layered bottom-up:
//!
//! * [`exactnum`]: rationals and the field `ℚ(√2, √3, ...)`,
//! * [`linalg`]: sparse labelled vectors, Gaussian elimination, Gram-Schmidt,
//! * [`liealg`]: Cartan data, weight systems, Freudenthal multiplicities,
//! * [`irrep`]: orthonormal weight bases with lowering operators,
//! * [`tensor`]: tensor products and their decomposition into irreps,
//! * [`multitensor`]: nested products of several irreps.

pub mod exactnum;
pub mod irrep;
pub mod liealg;
pub mod linalg;
pub mod multitensor;
pub mod par;
pub mod tensor;

pub use exactnum::{FieldElem, Rational, SqrtSum};

/// Errors reported by every layer of the library.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum Error {
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("division by zero")]
    DivisionByZero,
    #[error("linear system has no solution")]
    NoSolution,
    #[error("matrix is singular")]
    SingularMatrix,
    #[error("unsupported irrep: {0}")]
    UnsupportedIrrep(String),
    #[error("invalid imported irrep: {0}")]
    InvalidImport(String),
    #[error("inconsistent lowering data: {0}")]
    Inconsistent(String),
    #[error("decomposition failed: {0}")]
    DecompositionFailure(String),
    #[error("parse error: {0}")]
    Parse(String),
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
