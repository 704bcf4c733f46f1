//! Exact sparse multivariate polynomials over ℚ and GF(p), their text
//! syntax, and ideal presentations.

mod field;
mod ideal;
mod monomial;
mod parse;
mod polynomial;

use thiserror::Error;

pub use field::{format_rational, parse_rational, FieldSpec};
pub use ideal::{IdealPresentation, TextFormatError};
pub use monomial::{Monomial, MAX_EXPONENT};
pub use parse::{parse_polynomial, ParseError, ParseErrorKind};
pub use polynomial::{PolyRing, Polynomial};

pub(crate) use field::mod_inverse;
pub(crate) use ideal::{content_lines, split_list};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolyError {
    #[error("characteristic {0} is neither 0 nor a prime below 2^31")]
    BadCharacteristic(u64),
    #[error("division by zero in the coefficient field")]
    DivisionByZero,
    #[error("operands are over different fields")]
    FieldMismatch,
    #[error("operands live in different polynomial rings")]
    RingMismatch,
    #[error("no image given for variable `{0}`")]
    MissingImage(String),
    #[error("`{0}` is not a valid variable name")]
    InvalidVariableName(String),
    #[error("variable `{0}` listed twice")]
    DuplicateVariable(String),
    #[error("expected {expected} values, got {got}")]
    ArityMismatch { expected: usize, got: usize },
    #[error("codimension {codim} invalid for {generators} generators in {nvars} variables")]
    BadCodimension {
        codim: usize,
        generators: usize,
        nvars: usize,
    },
    #[error(transparent)]
    Parse(#[from] ParseError),
}
