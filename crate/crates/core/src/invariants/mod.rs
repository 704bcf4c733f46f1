//! Singularity invariants read off jet-scheme dimensions, resolution data
//! and closed forms.
//!
//! Every number is an exact rational. Infinite values are explicit
//! ([`ExtRational`]) and serialize as `"inf"` / `"-inf"`.

mod asymptotic;
mod lci;
mod lct;
mod mld;
mod resolution;

use std::collections::BTreeMap;
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use num_bigint::BigInt;
use num_rational::BigRational;
use serde::{Serialize, Serializer};
use thiserror::Error;

pub use asymptotic::{
    alpha_pq, alpha_table, beta_m, beta_monomial, beta_monomial_limit, beta_table, gamma_estimate,
    homog_fiber_dims, prop54_check, AlphaCell, AlphaTable, BetaCell, BetaTable, GammaEntry,
    GammaEstimate, HomogFiberDims, Prop54Report, Prop54Row,
};
pub use lci::{lci_jet_check, LciVerdict};
pub use lct::{
    closed_form_lct, lct_diagonal, lct_estimate, lct_monomial, monotonicity_check, Certificate,
    LctEstimate,
};
pub use mld::{mld_estimate, MldEstimate, MldTerm};
pub use resolution::{
    contact_codim, contact_codim_bruteforce, lct_from_resolution, mld_from_resolution, Divisor,
    ResolutionData, ResolutionError, BRUTEFORCE_MAX_DIVISORS, BRUTEFORCE_MAX_M,
};

use crate::groebner::{Context, GroebnerError};
use crate::jetgen::{generate_jet_equations, JetError};
use crate::localalgebra::{AlgebraError, LocalAlgebra};
use crate::polyring::{format_rational, IdealPresentation, PolyError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum InvariantError {
    #[error(transparent)]
    Groebner(#[from] GroebnerError),
    #[error(transparent)]
    Jet(#[from] JetError),
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Resolution(#[from] ResolutionError),
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("internal inconsistency: {0}")]
    Internal(String),
    #[error("dimension bound violated: {jet_dim} not in [{lower}, {upper}] for {algebra}")]
    SandwichViolation {
        jet_dim: i64,
        lower: i64,
        upper: i64,
        algebra: String,
    },
}

impl InvariantError {
    pub fn is_budget_exhausted(&self) -> bool {
        matches!(
            self,
            InvariantError::Groebner(GroebnerError::BudgetExhausted { .. })
        )
    }
}

pub type Result<T> = std::result::Result<T, InvariantError>;

/// A rational number or one of the two infinities.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum ExtRational {
    NegInfinity,
    Finite(BigRational),
    Infinity,
}

impl ExtRational {
    pub fn from_int(n: i64) -> Self {
        ExtRational::Finite(BigRational::from_integer(BigInt::from(n)))
    }

    pub fn finite(&self) -> Option<&BigRational> {
        match self {
            ExtRational::Finite(q) => Some(q),
            _ => None,
        }
    }
}

impl From<BigRational> for ExtRational {
    fn from(q: BigRational) -> Self {
        ExtRational::Finite(q)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::NegInfinity => f.write_str("-inf"),
            ExtRational::Infinity => f.write_str("inf"),
            ExtRational::Finite(q) => f.write_str(&format_rational(q)),
        }
    }
}

impl Serialize for ExtRational {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// Serialize a rational as `"p/q"`.
pub fn ser_rational<S: Serializer>(q: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.serialize_str(&format_rational(q))
}

pub fn ser_opt_rational<S: Serializer>(
    q: &Option<BigRational>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_str(&format_rational(q)),
        None => s.serialize_none(),
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    JetDimension,
    ResolutionFormula,
    ClosedForm,
    Recursion,
    Stratification,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Bound {
    Exact,
    LowerBound,
    UpperBound,
}

/// One computed quantity with how it was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct InvariantReport {
    pub quantity: String,
    pub value: ExtRational,
    pub bound: Bound,
    pub method: Method,
    pub inputs: BTreeMap<String, String>,
}

impl InvariantReport {
    pub fn new(quantity: &str, value: ExtRational, bound: Bound, method: Method) -> Self {
        InvariantReport {
            quantity: quantity.to_string(),
            value,
            bound,
            method,
            inputs: BTreeMap::new(),
        }
    }

    pub fn with_input(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.inputs.insert(key.to_string(), value.to_string());
        self
    }
}

/// `dim J_m(W)` for consecutive `m`, with `dim / (m + 1)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DimensionSequence {
    pub ambient_dim: usize,
    pub entries: Vec<SequenceEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SequenceEntry {
    pub m: u32,
    pub dim: i64,
    #[serde(serialize_with = "ser_rational")]
    pub normalized: BigRational,
}

impl SequenceEntry {
    pub fn new(m: u32, dim: i64) -> Self {
        SequenceEntry {
            m,
            dim,
            normalized: BigRational::new(dim.into(), (m as i64 + 1).into()),
        }
    }
}

impl DimensionSequence {
    pub fn get(&self, m: u32) -> Option<&SequenceEntry> {
        self.entries.iter().find(|e| e.m == m)
    }

    pub fn max_normalized(&self) -> Option<&BigRational> {
        self.entries.iter().map(|e| &e.normalized).max()
    }
}

static SANDWICH_CHECKS: AtomicU64 = AtomicU64::new(0);
static SANDWICH_VIOLATIONS: AtomicU64 = AtomicU64::new(0);

/// `(checks, violations)` of the jet-dimension bounds since process start.
pub fn sandwich_stats() -> (u64, u64) {
    (
        SANDWICH_CHECKS.load(Ordering::SeqCst),
        SANDWICH_VIOLATIONS.load(Ordering::SeqCst),
    )
}

/// `dim J_A(X)`. Also computes `dim X` and checks
/// `dim(X)·dim_k(A) <= dim J_A(X) <= N·dim_k(A)`; a violation is an error.
pub fn jet_dimension(
    ctx: &Context,
    ideal: &IdealPresentation,
    algebra: &LocalAlgebra,
) -> Result<i64> {
    let jets = generate_jet_equations(ideal, algebra)?;
    let jet_dim = ctx.ideal_dimension(&jets.to_ideal())?.dimension;
    let base_dim = ctx.ideal_dimension(ideal)?.dimension;
    check_sandwich(jet_dim, base_dim, ideal.nvars(), algebra)?;
    Ok(jet_dim)
}

fn check_sandwich(jet_dim: i64, base_dim: i64, nvars: usize, algebra: &LocalAlgebra) -> Result<()> {
    SANDWICH_CHECKS.fetch_add(1, Ordering::SeqCst);
    let l = algebra.dim() as i64;
    let (lower, upper) = if base_dim < 0 {
        (-1, -1)
    } else {
        (base_dim * l, nvars as i64 * l)
    };
    if jet_dim < lower || jet_dim > upper {
        SANDWICH_VIOLATIONS.fetch_add(1, Ordering::SeqCst);
        return Err(InvariantError::SandwichViolation {
            jet_dim,
            lower,
            upper,
            algebra: algebra.to_string(),
        });
    }
    Ok(())
}

fn rational(n: i64, d: i64) -> BigRational {
    BigRational::new(n.into(), d.into())
}
