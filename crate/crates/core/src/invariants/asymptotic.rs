//! Asymptotic invariants built from jet dimensions over families of
//! algebras: `α` (box algebras), `β` (fat points in the plane) and `γ`
//! (arbitrary graded algebras of embedding dimension at most two), plus the
//! closed-form model for homogeneous isolated singularities and the
//! necessary condition for iterated jets to be pure-dimensional.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Pow};
use rayon::prelude::*;
use serde::Serialize;

use super::{
    jet_dimension, rational, ser_opt_rational, ser_rational, Bound, ExtRational, InvariantError,
    InvariantReport, Method, Result,
};
use crate::groebner::Context;
use crate::localalgebra::LocalAlgebra;
use crate::polyring::IdealPresentation;

/// `dim J_{A_{p,q}}(X)` for `A_{p,q} = k[s,t]/(s^p, t^q)`.
pub fn alpha_pq(ctx: &Context, ideal: &IdealPresentation, p: u32, q: u32) -> Result<i64> {
    jet_dimension(ctx, ideal, &LocalAlgebra::box_algebra(p, q)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaCell {
    pub p: u32,
    pub q: u32,
    pub dim: Option<i64>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub normalized: Option<BigRational>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlphaTable {
    pub cells: Vec<AlphaCell>,
    /// Running maximum of `α_{p,q}/(pq)` over the computed cells; a lower
    /// bound for `α`.
    #[serde(serialize_with = "ser_opt_rational")]
    pub sup: Option<BigRational>,
    pub monotone: bool,
    /// Pairs `((p,q), (p',q'))` where the divisibility monotonicity fails.
    pub violations: Vec<((u32, u32), (u32, u32))>,
}

impl AlphaTable {
    pub fn get(&self, p: u32, q: u32) -> Option<&AlphaCell> {
        self.cells.iter().find(|c| c.p == p && c.q == q)
    }
}

/// `α_{p,q}` for `1 <= p <= p_max`, `1 <= q <= q_max`, row by row. Cells that
/// exhaust the budget are marked rather than failing the table.
pub fn alpha_table(
    ctx: &Context,
    ideal: &IdealPresentation,
    p_max: u32,
    q_max: u32,
) -> Result<AlphaTable> {
    if p_max == 0 || q_max == 0 {
        return Err(InvariantError::InvalidInput("p and q start at 1".into()));
    }
    let index: Vec<(u32, u32)> = (1..=p_max)
        .flat_map(|p| (1..=q_max).map(move |q| (p, q)))
        .collect();
    let dims: Vec<Result<i64>> = index
        .par_iter()
        .map(|&(p, q)| alpha_pq(ctx, ideal, p, q))
        .collect();
    let mut cells = Vec::with_capacity(index.len());
    for (&(p, q), d) in index.iter().zip(dims) {
        let (dim, exhausted) = match d {
            Ok(d) => (Some(d), false),
            Err(e) if e.is_budget_exhausted() => (None, true),
            Err(e) => return Err(e),
        };
        cells.push(AlphaCell {
            p,
            q,
            dim,
            normalized: dim.map(|d| rational(d, (p * q) as i64)),
            exhausted,
        });
    }
    let sup = cells.iter().filter_map(|c| c.normalized.clone()).max();
    let mut violations = Vec::new();
    for a in &cells {
        let Some(na) = &a.normalized else { continue };
        for b in &cells {
            let Some(nb) = &b.normalized else { continue };
            let scaled_p = b.q == a.q && b.p > a.p && b.p % a.p == 0;
            let scaled_q = b.p == a.p && b.q > a.q && b.q % a.q == 0;
            if (scaled_p || scaled_q) && na > nb {
                violations.push(((a.p, a.q), (b.p, b.q)));
            }
        }
    }
    Ok(AlphaTable {
        cells,
        sup,
        monotone: violations.is_empty(),
        violations,
    })
}

/// `dim J_{A_m}(X)` for `A_m = k[s,t]/(s,t)^m`, of dimension `m(m+1)/2`.
pub fn beta_m(ctx: &Context, ideal: &IdealPresentation, m: u32) -> Result<i64> {
    jet_dimension(ctx, ideal, &LocalAlgebra::fat_point(2, m)?)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaCell {
    pub m: u32,
    pub dim: Option<i64>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub normalized: Option<BigRational>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BetaTable {
    pub cells: Vec<BetaCell>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub sup: Option<BigRational>,
}

pub fn beta_table(ctx: &Context, ideal: &IdealPresentation, m_max: u32) -> Result<BetaTable> {
    if m_max == 0 {
        return Err(InvariantError::InvalidInput("m starts at 1".into()));
    }
    let dims: Vec<Result<i64>> = (1..=m_max)
        .into_par_iter()
        .map(|m| beta_m(ctx, ideal, m))
        .collect();
    let mut cells = Vec::new();
    for (m, d) in (1..=m_max).zip(dims) {
        let (dim, exhausted) = match d {
            Ok(d) => (Some(d), false),
            Err(e) if e.is_budget_exhausted() => (None, true),
            Err(e) => return Err(e),
        };
        let ell = (m * (m + 1) / 2) as i64;
        cells.push(BetaCell {
            m,
            dim,
            normalized: dim.map(|d| rational(d, ell)),
            exhausted,
        });
    }
    let sup = cells.iter().filter_map(|c| c.normalized.clone()).max();
    Ok(BetaTable { cells, sup })
}

/// `β_m` of the monomial hypersurface `x^a`, by stratifying according to
/// the orders `ν_i` of the coordinate jets:
/// `max { n·m(m+1)/2 - Σ ν_i(ν_i+1)/2 : ν ∈ {0..m}^n, Σ a_i ν_i >= m }`.
pub fn beta_monomial(exponents: &[u32], m: u32) -> Result<i64> {
    if exponents.iter().all(|&a| a == 0) {
        return Err(InvariantError::InvalidInput(
            "exponent vector is zero".into(),
        ));
    }
    if m == 0 {
        return Err(InvariantError::InvalidInput("m starts at 1".into()));
    }
    let demand = m as usize;
    let cost = |nu: u64| nu * (nu + 1) / 2;
    // cheapest[j]: least Σ ν_i(ν_i+1)/2 reaching Σ a_i ν_i >= j so far
    let mut cheapest: Vec<Option<u64>> = vec![None; demand + 1];
    cheapest[0] = Some(0);
    for &a in exponents {
        let mut next = cheapest.clone();
        for (j, slot) in next.iter_mut().enumerate() {
            for nu in 1..=m as u64 {
                let prev = j.saturating_sub((a as u64 * nu) as usize);
                if let Some(c) = cheapest[prev] {
                    let c = c + cost(nu);
                    if slot.is_none_or(|s| c < s) {
                        *slot = Some(c);
                    }
                }
            }
        }
        cheapest = next;
    }
    let n = exponents.len() as i64;
    let best = cheapest[demand].expect("some exponent is positive") as i64;
    Ok(n * cost(m as u64) as i64 - best)
}

/// `n - 1/Σ a_i^2`.
pub fn beta_monomial_limit(exponents: &[u32]) -> Result<BigRational> {
    let s: i64 = exponents.iter().map(|&a| (a as i64) * (a as i64)).sum();
    if s == 0 {
        return Err(InvariantError::InvalidInput(
            "exponent vector is zero".into(),
        ));
    }
    Ok(rational(exponents.len() as i64, 1) - rational(1, s))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaEntry {
    pub algebra: String,
    pub algebra_dim: usize,
    pub dim: Option<i64>,
    #[serde(serialize_with = "ser_opt_rational")]
    pub normalized: Option<BigRational>,
    pub exhausted: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct GammaEstimate {
    pub entries: Vec<GammaEntry>,
    pub report: InvariantReport,
}

/// The largest `dim J_A(X)/dim_k(A)` over the supplied algebras, a lower
/// bound for `γ`.
pub fn gamma_estimate(
    ctx: &Context,
    ideal: &IdealPresentation,
    algebras: &[LocalAlgebra],
) -> Result<GammaEstimate> {
    if algebras.is_empty() {
        return Err(InvariantError::InvalidInput("no algebras supplied".into()));
    }
    if let Some(a) = algebras.iter().find(|a| a.num_generators() > 2) {
        return Err(InvariantError::InvalidInput(format!(
            "{a} has more than two generators"
        )));
    }
    let dims: Vec<Result<i64>> = algebras
        .par_iter()
        .map(|a| jet_dimension(ctx, ideal, a))
        .collect();
    let mut entries = Vec::new();
    for (a, d) in algebras.iter().zip(dims) {
        let (dim, exhausted) = match d {
            Ok(d) => (Some(d), false),
            Err(e) if e.is_budget_exhausted() => (None, true),
            Err(e) => return Err(e),
        };
        entries.push(GammaEntry {
            algebra: a.to_string(),
            algebra_dim: a.dim(),
            dim,
            normalized: dim.map(|d| rational(d, a.dim() as i64)),
            exhausted,
        });
    }
    let value = match entries.iter().filter_map(|e| e.normalized.clone()).max() {
        Some(v) => ExtRational::Finite(v),
        None => ExtRational::NegInfinity,
    };
    let report = InvariantReport::new("gamma", value, Bound::LowerBound, Method::JetDimension)
        .with_input("algebras", algebras.len());
    Ok(GammaEstimate { entries, report })
}

/// Fiber and jet-scheme dimensions for a degree-`d` homogeneous
/// hypersurface in `A^n` with an isolated singularity at the origin.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HomogFiberDims {
    pub n: u32,
    pub d: u32,
    /// `dim π_m^{-1}(0)` for `m = 0..=m_max`.
    pub fiber: Vec<i64>,
    /// `dim J_m(X)` for `m = 0..=m_max`.
    pub dims: Vec<i64>,
    /// Every `J_m(X)` is pure-dimensional (`d <= n`).
    pub pure_dimensional: bool,
    /// Every `J_m(X)` is irreducible (`d < n`).
    pub irreducible: bool,
    /// The same verdicts read off the computed range: the fiber never
    /// exceeds, resp. always stays below, the main component.
    pub pure_in_range: bool,
    pub irreducible_in_range: bool,
}

pub fn homog_fiber_dims(n: u32, d: u32, m_max: u32) -> Result<HomogFiberDims> {
    if n < 2 || d < 1 {
        return Err(InvariantError::InvalidInput(
            "needs n >= 2 and d >= 1".into(),
        ));
    }
    let (n64, d64) = (n as i64, d as i64);
    let mut fiber = Vec::new();
    let mut dims: Vec<i64> = Vec::new();
    for m in 0..=m_max as i64 {
        let f = if m < d64 {
            m * n64
        } else {
            n64 * (d64 - 1) + dims[(m - d64) as usize]
        };
        fiber.push(f);
        dims.push(((m + 1) * (n64 - 1)).max(f));
    }
    let main = |m: usize| (m as i64 + 1) * (n64 - 1);
    let pure_in_range = fiber.iter().enumerate().all(|(m, &f)| f <= main(m));
    let irreducible_in_range = fiber.iter().enumerate().all(|(m, &f)| f < main(m));
    Ok(HomogFiberDims {
        n,
        d,
        fiber,
        dims,
        pure_dimensional: d <= n,
        irreducible: d < n,
        pure_in_range,
        irreducible_in_range,
    })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop54Row {
    pub j: u32,
    /// `d·Π_{i=1}^{r-1} (jd+i)/(j+i)`, the least `n` compatible with
    /// pure-dimensional iterated jets at level `j`.
    #[serde(serialize_with = "ser_rational")]
    pub rhs: BigRational,
    pub satisfied: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct Prop54Report {
    pub n: u32,
    pub d: u32,
    pub r: u32,
    pub rows: Vec<Prop54Row>,
    pub nondecreasing: bool,
    pub below_limit: bool,
    #[serde(serialize_with = "ser_rational")]
    pub limit: BigRational,
    /// `d^r <= n`.
    pub necessary_condition: bool,
    /// `true` when `d^r > n`: the iterated jet schemes cannot all be
    /// pure-dimensional.
    pub not_pure_dimensional: bool,
}

/// Necessary condition for the `r`-fold iterated jet schemes of a degree-`d`
/// hypersurface in `A^n` with isolated singularity to be pure-dimensional.
pub fn prop54_check(n: u32, d: u32, r: u32, j_max: u32) -> Result<Prop54Report> {
    if d < 1 || r < 2 {
        return Err(InvariantError::InvalidInput(
            "needs d >= 1 and r >= 2".into(),
        ));
    }
    let limit = BigRational::from_integer(Pow::pow(BigInt::from(d), r));
    let nq = rational(n as i64, 1);
    let rows: Vec<Prop54Row> = (1..=j_max)
        .map(|j| {
            let (j, dd) = (j as i64, d as i64);
            let rhs =
                (1..r as i64).fold(rational(dd, 1), |acc, i| acc * rational(j * dd + i, j + i));
            debug_assert_eq!(rhs, binomial_ratio(j, dd, r as i64));
            Prop54Row {
                j: j as u32,
                satisfied: rhs <= nq,
                rhs,
            }
        })
        .collect();
    let nondecreasing = rows.windows(2).all(|w| w[0].rhs <= w[1].rhs);
    let below_limit = rows.iter().all(|row| row.rhs <= limit);
    let necessary_condition = limit <= nq;
    Ok(Prop54Report {
        n,
        d,
        r,
        rows,
        nondecreasing,
        below_limit,
        limit,
        necessary_condition,
        not_pure_dimensional: !necessary_condition,
    })
}

/// `C(jd+r-1, r) / C(j+r-1, r)`.
fn binomial_ratio(j: i64, d: i64, r: i64) -> BigRational {
    let binom =
        |n: i64, k: i64| (0..k).fold(BigRational::one(), |acc, i| acc * rational(n - i, i + 1));
    binom(j * d + r - 1, r) / binom(j + r - 1, r)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::FieldSpec;

    fn ideal(vars: &[&str], gens: &[&str]) -> IdealPresentation {
        IdealPresentation::from_strings(vars, FieldSpec::RATIONALS, gens).unwrap()
    }

    #[test]
    fn alpha_values() {
        let ctx = Context::default();
        let line = IdealPresentation::from_strings(&["x"], FieldSpec::RATIONALS, &[]).unwrap();
        let t = alpha_table(&ctx, &line, 2, 3).unwrap();
        assert!(t.cells.iter().all(|c| c.normalized == Some(rational(1, 1))));
        let node = ideal(&["x", "y"], &["x*y"]);
        assert_eq!(alpha_pq(&ctx, &node, 1, 1).unwrap(), 1);
        let t = alpha_table(&ctx, &node, 2, 2).unwrap();
        assert_eq!(t.get(2, 2).unwrap().dim, Some(5));
        assert_eq!(t.sup, Some(rational(5, 4)));
        assert!(t.monotone);
        assert!(alpha_pq(&ctx, &node, 0, 1).is_err());
    }

    #[test]
    fn beta_values() {
        let ctx = Context::default();
        let plane =
            IdealPresentation::from_strings(&["x", "y"], FieldSpec::RATIONALS, &[]).unwrap();
        for m in 1..=3 {
            assert_eq!(beta_m(&ctx, &plane, m).unwrap(), (m * (m + 1)) as i64);
        }
        let node = ideal(&["x", "y"], &["x*y"]);
        assert_eq!(beta_m(&ctx, &node, 1).unwrap(), 1);
        assert_eq!(beta_m(&ctx, &node, 2).unwrap(), 4);
        let t = beta_table(&ctx, &node, 2).unwrap();
        assert_eq!(t.sup, Some(rational(4, 3)));
    }

    #[test]
    fn beta_stratification() {
        assert_eq!(beta_monomial(&[1, 1], 2).unwrap(), 4);
        assert_eq!(beta_monomial(&[1, 1], 1).unwrap(), 1);
        assert_eq!(beta_monomial_limit(&[1, 1]).unwrap(), rational(3, 2));
        for m in 1..=5 {
            assert_eq!(beta_monomial(&[1], m).unwrap(), 0);
        }
        assert_eq!(beta_monomial_limit(&[1]).unwrap(), rational(0, 1));
        assert_eq!(beta_monomial(&[1, 2], 3).unwrap(), 10);
        assert!(beta_monomial(&[0, 0], 2).is_err());
    }

    #[test]
    fn beta_monomial_matches_brute_force() {
        fn brute(a: &[u32], m: u32) -> i64 {
            let n = a.len();
            let mut best = i64::MIN;
            let mut nu = vec![0u32; n];
            loop {
                let reach: u64 = a.iter().zip(&nu).map(|(&a, &v)| a as u64 * v as u64).sum();
                if reach >= m as u64 {
                    let lost: i64 = nu.iter().map(|&v| (v * (v + 1) / 2) as i64).sum();
                    best = best.max(n as i64 * (m * (m + 1) / 2) as i64 - lost);
                }
                let mut k = 0;
                while k < n && nu[k] == m {
                    nu[k] = 0;
                    k += 1;
                }
                if k == n {
                    return best;
                }
                nu[k] += 1;
            }
        }
        for a in [[1, 1, 0], [1, 2, 3], [2, 2, 1], [0, 3, 1], [4, 1, 1]] {
            for m in 1..=6 {
                assert_eq!(beta_monomial(&a, m).unwrap(), brute(&a, m), "{a:?} {m}");
            }
        }
    }

    #[test]
    fn gamma_values() {
        let ctx = Context::default();
        let plane =
            IdealPresentation::from_strings(&["x", "y"], FieldSpec::RATIONALS, &[]).unwrap();
        let algebras = vec![
            LocalAlgebra::box_algebra(2, 2).unwrap(),
            LocalAlgebra::fat_point(2, 2).unwrap(),
            LocalAlgebra::truncation(3),
        ];
        let g = gamma_estimate(&ctx, &plane, &algebras).unwrap();
        assert_eq!(g.report.value, ExtRational::from_int(2));
        let node = ideal(&["x", "y"], &["x*y"]);
        let g = gamma_estimate(&ctx, &node, &algebras[..1]).unwrap();
        assert_eq!(g.report.value, ExtRational::Finite(rational(5, 4)));
        assert_eq!(g.report.bound, Bound::LowerBound);
        assert!(gamma_estimate(&ctx, &node, &[]).is_err());
        let three = LocalAlgebra::fat_point(3, 2).unwrap();
        assert!(gamma_estimate(&ctx, &node, &[three]).is_err());
    }

    #[test]
    fn homogeneous_recursion() {
        let h = homog_fiber_dims(2, 2, 3).unwrap();
        assert_eq!(h.dims, vec![1, 2, 3, 4]);
        assert!(h.pure_dimensional && !h.irreducible);
        let h = homog_fiber_dims(3, 2, 3).unwrap();
        assert_eq!(h.fiber[1], 3);
        assert_eq!(h.dims, vec![2, 4, 6, 8]);
        assert!(h.irreducible);
        let h = homog_fiber_dims(4, 1, 5).unwrap();
        assert!(h
            .dims
            .iter()
            .enumerate()
            .all(|(m, &d)| d == 3 * (m as i64 + 1)));
        assert!(homog_fiber_dims(1, 2, 3).is_err());
    }

    #[test]
    fn recursion_verdicts_agree_with_the_criterion() {
        for n in 2..=6 {
            for d in 1..=8 {
                let h = homog_fiber_dims(n, d, 40).unwrap();
                assert_eq!(h.pure_in_range, h.pure_dimensional, "n={n} d={d}");
                assert_eq!(h.irreducible_in_range, h.irreducible, "n={n} d={d}");
            }
        }
    }

    #[test]
    fn prop54_values() {
        let p = prop54_check(2, 2, 2, 6).unwrap();
        assert_eq!(p.rows[0].rhs, rational(3, 1));
        assert_eq!(p.rows[1].rhs, rational(10, 3));
        assert_eq!(p.limit, rational(4, 1));
        assert!(p.nondecreasing && p.below_limit);
        assert!(p.not_pure_dimensional);
        assert!(!prop54_check(4, 2, 2, 6).unwrap().not_pure_dimensional);
        for n in 1..5 {
            let p = prop54_check(n, 1, 3, 5).unwrap();
            assert_eq!(p.limit, rational(1, 1));
            assert!(p.necessary_condition);
        }
        assert!(prop54_check(2, 0, 2, 3).is_err());
        assert!(prop54_check(2, 2, 1, 3).is_err());
    }

    #[test]
    fn prop54_rhs_is_a_binomial_ratio() {
        for d in 1..5 {
            for r in 2..5 {
                for j in 1..8 {
                    let p = prop54_check(1, d, r, j).unwrap();
                    assert_eq!(
                        p.rows.last().unwrap().rhs,
                        binomial_ratio(j as i64, d as i64, r as i64)
                    );
                }
            }
        }
    }
}
