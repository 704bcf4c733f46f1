//! Generalized jet schemes `J_A(X)` of affine schemes and the singularity
//! invariants that can be read off their dimensions.
//!
//! The crate is layered bottom-up:
//!
//! * [`polyring`]: exact polynomials over ℚ or GF(p) and their text syntax.
//! * [`localalgebra`]: finite local algebras `k[t_1..t_r]/I` with `I` a
//!   cofinite monomial ideal.
//! * [`jetgen`]: the defining equations of `J_A(X)` for an affine `X`.
//! * [`groebner`]: Buchberger's algorithm and Krull dimension.
//! * [`invariants`]: log canonical thresholds, minimal log discrepancies,
//!   contact loci and the asymptotic invariants of jets over
//!   embedding-dimension-two algebras.

pub mod groebner;
pub mod invariants;
pub mod jetgen;
pub mod localalgebra;
pub mod polyring;

pub use groebner::{Context, GroebnerError, MonomialOrder, OrderKind};
pub use jetgen::JetSystem;
pub use localalgebra::LocalAlgebra;
pub use polyring::{FieldSpec, IdealPresentation, PolyRing, Polynomial};
