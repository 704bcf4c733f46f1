//! Log canonical thresholds: the jet-dimension estimate and the closed
//! forms for monomials and diagonal hypersurfaces.

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    jet_dimension, rational, Bound, DimensionSequence, ExtRational, InvariantError,
    InvariantReport, Method, Result, SequenceEntry,
};
use crate::groebner::Context;
use crate::localalgebra::LocalAlgebra;
use crate::polyring::IdealPresentation;

/// `min 1/a_i` over the nonzero exponents of `x^a`.
pub fn lct_monomial(exponents: &[u32]) -> Result<BigRational> {
    exponents
        .iter()
        .filter(|&&a| a > 0)
        .map(|&a| rational(1, a as i64))
        .min()
        .ok_or_else(|| InvariantError::InvalidInput("exponent vector is zero".into()))
}

/// `min(1, Σ 1/a_i)` for `Σ c_i x_i^{a_i}`.
pub fn lct_diagonal(exponents: &[u32]) -> Result<BigRational> {
    if exponents.is_empty() || exponents.contains(&0) {
        return Err(InvariantError::InvalidInput(
            "diagonal exponents must be positive".into(),
        ));
    }
    let sum: BigRational = exponents.iter().map(|&a| rational(1, a as i64)).sum();
    Ok(sum.min(BigRational::one()))
}

/// The lct of a single monomial or diagonal hypersurface over a field of
/// characteristic zero, read off its generator; `None` for anything else.
pub fn closed_form_lct(ideal: &IdealPresentation) -> Option<BigRational> {
    if !ideal.field().is_rational() {
        return None;
    }
    let gens: Vec<_> = ideal.generators().iter().filter(|g| !g.is_zero()).collect();
    let [f] = gens.as_slice() else {
        return None;
    };
    let terms: Vec<&[u32]> = f.terms().map(|(m, _)| m.exponents()).collect();
    if let [single] = terms.as_slice() {
        return lct_monomial(single).ok();
    }
    let mut seen = vec![false; ideal.nvars()];
    let mut powers = Vec::with_capacity(terms.len());
    for e in terms {
        let mut support = e.iter().enumerate().filter(|(_, &x)| x > 0);
        let (Some((v, &a)), None) = (support.next(), support.next()) else {
            return None;
        };
        if seen[v] {
            return None;
        }
        seen[v] = true;
        powers.push(a);
    }
    lct_diagonal(&powers).ok()
}

/// Why an estimate is exact.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum Certificate {
    /// The maximum is attained at `m` and `m2` with `(m + 1) | (m2 + 1)`.
    Repetition { m: u32, m2: u32 },
    /// `n - max` equals the closed-form threshold.
    ClosedForm {
        #[serde(serialize_with = "super::ser_rational")]
        value: BigRational,
    },
    /// Unit or zero ideal.
    Convention,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LctEstimate {
    pub sequence: DimensionSequence,
    pub lct: ExtRational,
    pub certified: bool,
    pub certificate: Option<Certificate>,
    pub partial: bool,
    pub failed_at: Option<u32>,
    #[serde(skip)]
    pub failure: Option<InvariantError>,
    pub report: InvariantReport,
}

/// `true` when `dim J_{m-1}/m <= dim J_{mp-1}/(mp)` for every pair of
/// entries whose indices plus one divide each other.
pub fn monotonicity_check(seq: &DimensionSequence) -> bool {
    seq.entries.iter().all(|a| {
        seq.entries
            .iter()
            .filter(|b| b.m > a.m && (b.m + 1) % (a.m + 1) == 0)
            .all(|b| a.normalized <= b.normalized)
    })
}

/// `dim J_m(W)` for `m = 0..=m_max`, in parallel. Stops at the first index
/// whose computation exhausts the budget.
pub(crate) fn jet_sequence(
    ctx: &Context,
    ideal: &IdealPresentation,
    m_max: u32,
) -> Result<(DimensionSequence, Option<(u32, InvariantError)>)> {
    let dims: Vec<Result<i64>> = (0..=m_max)
        .into_par_iter()
        .map(|m| jet_dimension(ctx, ideal, &LocalAlgebra::truncation(m)))
        .collect();
    let mut entries = Vec::new();
    let mut failure = None;
    for (m, d) in (0..=m_max).zip(dims) {
        match d {
            Ok(d) => entries.push(SequenceEntry::new(m, d)),
            Err(e) if e.is_budget_exhausted() => {
                failure = Some((m, e));
                break;
            }
            Err(e) => return Err(e),
        }
    }
    Ok((
        DimensionSequence {
            ambient_dim: ideal.nvars(),
            entries,
        },
        failure,
    ))
}

/// `n - max_m dim J_m(W)/(m+1)` over `m <= m_max`.
///
/// When a closed form applies the value is exact iff it agrees with it.
/// Otherwise it is reported exact when the maximum repeats at indices
/// `m, m2` with `(m+1) | (m2+1)`, and as an upper bound for the lct when it
/// does not.
pub fn lct_estimate(ctx: &Context, ideal: &IdealPresentation, m_max: u32) -> Result<LctEstimate> {
    let n = ideal.nvars();
    let finish = |sequence,
                  lct,
                  certificate: Option<Certificate>,
                  failure: Option<(u32, InvariantError)>| {
        let bound = if certificate.is_some() {
            Bound::Exact
        } else {
            Bound::UpperBound
        };
        let report = InvariantReport::new("lct", lct, bound, Method::JetDimension)
            .with_input("m_max", m_max)
            .with_input("ambient_dim", n);
        let (failed_at, failure) = match failure {
            Some((m, e)) => (Some(m), Some(e)),
            None => (None, None),
        };
        LctEstimate {
            sequence,
            lct: report.value.clone(),
            certified: certificate.is_some(),
            certificate,
            partial: failed_at.is_some(),
            failed_at,
            failure,
            report,
        }
    };
    let empty = DimensionSequence {
        ambient_dim: n,
        entries: Vec::new(),
    };
    if ideal.generators().iter().all(|g| g.is_zero()) {
        return Ok(finish(
            empty,
            ExtRational::Finite(BigRational::zero()),
            Some(Certificate::Convention),
            None,
        ));
    }
    if ctx.ideal_dimension(ideal)?.unit_ideal {
        return Ok(finish(
            empty,
            ExtRational::Infinity,
            Some(Certificate::Convention),
            None,
        ));
    }

    let (sequence, failure) = jet_sequence(ctx, ideal, m_max)?;
    if !monotonicity_check(&sequence) {
        return Err(InvariantError::Internal(
            "jet dimensions violate the divisibility monotonicity".into(),
        ));
    }
    let Some(max) = sequence.max_normalized().cloned() else {
        return Err(failure
            .expect("an empty sequence means the first index failed")
            .1);
    };
    let lct = rational(n as i64, 1) - &max;
    let at_max: Vec<u32> = sequence
        .entries
        .iter()
        .filter(|e| e.normalized == max)
        .map(|e| e.m)
        .collect();
    let repetition = at_max.iter().find_map(|&m| {
        at_max
            .iter()
            .find(|&&m2| m2 > m && (m2 + 1) % (m + 1) == 0)
            .map(|&m2| Certificate::Repetition { m, m2 })
    });
    // a repeated maximum is only evidence; a known closed form overrules it
    let certificate = match closed_form_lct(ideal) {
        Some(value) if value == lct => Some(Certificate::ClosedForm { value }),
        Some(_) => None,
        None => repetition,
    };
    Ok(finish(
        sequence,
        ExtRational::Finite(lct),
        certificate,
        failure,
    ))
}
