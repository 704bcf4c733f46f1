//! Minimal log discrepancy along a closed subset `Z` from the dimensions of
//! jets of `W` lying over `Z`.

use num_rational::BigRational;
use num_traits::Signed;
use rayon::prelude::*;
use serde::Serialize;

use super::{rational, Bound, ExtRational, InvariantError, InvariantReport, Method, Result};
use crate::groebner::Context;
use crate::jetgen::generate_jet_equations;
use crate::localalgebra::LocalAlgebra;
use crate::polyring::{format_rational, IdealPresentation};

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MldTerm {
    pub m: u32,
    /// `dim(J_m(W) ∩ π_m^{-1}(Z))`, `-1` when empty.
    pub fiber_dim: i64,
    /// `(m+1)(n-q) - fiber_dim`, absent for an empty fiber.
    #[serde(serialize_with = "super::ser_opt_rational")]
    pub value: Option<BigRational>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MldEstimate {
    pub terms: Vec<MldTerm>,
    pub mld: ExtRational,
    pub certified: bool,
    pub partial: bool,
    pub failed_at: Option<u32>,
    #[serde(skip)]
    pub failure: Option<InvariantError>,
    pub report: InvariantReport,
}

/// `min_m (m+1)(n-q) - dim(J_m(W) ∩ π_m^{-1}(Z))` over `m <= m_max`.
///
/// A negative term certifies `-inf`. Otherwise the minimum found is an
/// upper bound, equal to the mld once `m_max` is large enough.
pub fn mld_estimate(
    ctx: &Context,
    w: &IdealPresentation,
    z: &IdealPresentation,
    q: &BigRational,
    m_max: u32,
) -> Result<MldEstimate> {
    let n = w.nvars();
    if n < 2 {
        return Err(InvariantError::InvalidInput(
            "ambient dimension must be at least 2".into(),
        ));
    }
    if !q.is_positive() {
        return Err(InvariantError::InvalidInput("q must be positive".into()));
    }
    if ctx.ideal_dimension(z)?.unit_ideal {
        return Err(InvariantError::InvalidInput("the center Z is empty".into()));
    }
    let slope = rational(n as i64, 1) - q;
    let fibers: Vec<Result<i64>> = (0..=m_max)
        .into_par_iter()
        .map(|m| {
            let jets = generate_jet_equations(w, &LocalAlgebra::truncation(m))?;
            Ok(ctx.ideal_dimension(&jets.fiber_ideal(z)?)?.dimension)
        })
        .collect();

    let mut terms = Vec::new();
    let mut failure = None;
    for (m, d) in (0..=m_max).zip(fibers) {
        match d {
            Ok(fiber_dim) => {
                let value = (fiber_dim >= 0)
                    .then(|| rational(m as i64 + 1, 1) * &slope - rational(fiber_dim, 1));
                terms.push(MldTerm {
                    m,
                    fiber_dim,
                    value,
                });
            }
            Err(e) if e.is_budget_exhausted() => {
                failure = Some((m, e));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    if terms.is_empty() {
        return Err(failure
            .expect("an empty prefix means the first index failed")
            .1);
    }

    let min = terms.iter().filter_map(|t| t.value.clone()).min();
    let (mld, bound) = match min {
        Some(v) if v.is_negative() => (ExtRational::NegInfinity, Bound::Exact),
        Some(v) => (ExtRational::Finite(v), Bound::UpperBound),
        None => (ExtRational::Infinity, Bound::UpperBound),
    };
    let report = InvariantReport::new("mld", mld.clone(), bound, Method::JetDimension)
        .with_input("q", format_rational(q))
        .with_input("m_max", m_max)
        .with_input("ambient_dim", n);
    let (failed_at, failure) = match failure {
        Some((m, e)) => (Some(m), Some(e)),
        None => (None, None),
    };
    Ok(MldEstimate {
        terms,
        mld,
        certified: bound == Bound::Exact,
        partial: failed_at.is_some(),
        failed_at,
        failure,
        report,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::FieldSpec;

    fn ideal(gens: &[&str]) -> IdealPresentation {
        IdealPresentation::from_strings(&["x", "y"], FieldSpec::RATIONALS, gens).unwrap()
    }

    #[test]
    fn line_through_the_origin() {
        let ctx = Context::default();
        let (w, z) = (ideal(&["x"]), ideal(&["x", "y"]));
        let e = mld_estimate(&ctx, &w, &z, &rational(1, 1), 4).unwrap();
        let fibers: Vec<i64> = e.terms.iter().map(|t| t.fiber_dim).collect();
        assert_eq!(fibers, vec![0, 1, 2, 3, 4]);
        assert!(e.terms.iter().all(|t| t.value == Some(rational(1, 1))));
        assert_eq!(e.mld, ExtRational::from_int(1));
        assert!(!e.certified);

        let e = mld_estimate(&ctx, &w, &z, &rational(3, 1), 4).unwrap();
        assert_eq!(e.terms[0].value, Some(rational(-1, 1)));
        assert_eq!(e.mld, ExtRational::NegInfinity);
        assert!(e.certified);
    }

    #[test]
    fn disjoint_center_has_empty_fibers() {
        let ctx = Context::default();
        let e = mld_estimate(
            &ctx,
            &ideal(&["x"]),
            &ideal(&["x - 1", "y"]),
            &rational(1, 1),
            2,
        )
        .unwrap();
        assert!(e
            .terms
            .iter()
            .all(|t| t.fiber_dim == -1 && t.value.is_none()));
        assert_eq!(e.mld, ExtRational::Infinity);
    }

    #[test]
    fn rejects_bad_input() {
        let ctx = Context::default();
        let w = ideal(&["x"]);
        assert!(mld_estimate(&ctx, &w, &ideal(&["1"]), &rational(1, 1), 2).is_err());
        assert!(mld_estimate(&ctx, &w, &ideal(&["x"]), &rational(0, 1), 2).is_err());
        let line = IdealPresentation::from_strings(&["x"], FieldSpec::RATIONALS, &["x"]).unwrap();
        assert!(mld_estimate(&ctx, &line, &line, &rational(1, 1), 2).is_err());
    }
}
