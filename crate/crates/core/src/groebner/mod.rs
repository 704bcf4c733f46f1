//! Gröbner bases, ideal membership and Krull dimension.
//!
//! Everything downstream asks one question of this module: what is the
//! dimension of `V(I)`? [`Context::ideal_dimension`] answers it from the
//! leading-term ideal of a reduced basis, optionally through a cache.

mod dimension;
mod engine;
mod grading;
pub mod traced;

use std::fmt;
use std::sync::Arc;

use num_rational::BigRational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

pub use dimension::{min_hitting_set, monomial_dimension, monomial_dimension_exhaustive};
pub use grading::positive_grading;

use crate::polyring::{FieldSpec, IdealPresentation, Monomial, PolyRing, Polynomial};
use engine::{Arith, Engine, IntArith, ModArith, Mon, Poly};

/// Default cap on S-pair reductions per basis computation.
pub const DEFAULT_BUDGET: u64 = 200_000;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GroebnerError {
    #[error("budget exhausted after {pairs} pair reductions (budget {budget})")]
    BudgetExhausted { pairs: u64, budget: u64 },
    #[error("order is for {expected} variables, the ring has {got}")]
    OrderMismatch { expected: usize, got: usize },
    #[error("`{0:?}` is not a permutation")]
    BadPermutation(Vec<usize>),
    #[error("weights {0:?} must be positive")]
    BadWeights(Vec<u32>),
    #[error("polynomial and basis live in different rings")]
    RingMismatch,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OrderKind {
    Degrevlex,
    Lex,
}

impl fmt::Display for OrderKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            OrderKind::Degrevlex => "degrevlex",
            OrderKind::Lex => "lex",
        })
    }
}

impl std::str::FromStr for OrderKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "degrevlex" | "grevlex" => Ok(OrderKind::Degrevlex),
            "lex" => Ok(OrderKind::Lex),
            other => Err(format!("unknown monomial order `{other}`")),
        }
    }
}

/// A monomial order: `kind` applied after reordering the variables so that
/// `permutation[0]` is the largest. Degrevlex compares weighted degrees
/// first; the weights are all one unless set.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MonomialOrder {
    kind: OrderKind,
    permutation: Vec<usize>,
    /// Weights in internal position order.
    weights: Vec<u32>,
}

impl MonomialOrder {
    /// `kind` with `x_1 > x_2 > ... > x_n`.
    pub fn new(kind: OrderKind, nvars: usize) -> Self {
        MonomialOrder {
            kind,
            permutation: (0..nvars).collect(),
            weights: vec![1; nvars],
        }
    }

    /// Weighted degrevlex: `Σ w_i a_i` first, ties broken by degrevlex.
    pub fn weighted_degrevlex(weights: Vec<u32>) -> Result<Self, GroebnerError> {
        if weights.contains(&0) {
            return Err(GroebnerError::BadWeights(weights));
        }
        Ok(MonomialOrder {
            kind: OrderKind::Degrevlex,
            permutation: (0..weights.len()).collect(),
            weights,
        })
    }

    pub fn degrevlex(nvars: usize) -> Self {
        Self::new(OrderKind::Degrevlex, nvars)
    }

    pub fn lex(nvars: usize) -> Self {
        Self::new(OrderKind::Lex, nvars)
    }

    pub fn with_permutation(
        kind: OrderKind,
        permutation: Vec<usize>,
    ) -> Result<Self, GroebnerError> {
        let mut seen = vec![false; permutation.len()];
        for &p in &permutation {
            if p >= seen.len() || seen[p] {
                return Err(GroebnerError::BadPermutation(permutation));
            }
            seen[p] = true;
        }
        let weights = vec![1; permutation.len()];
        Ok(MonomialOrder {
            kind,
            permutation,
            weights,
        })
    }

    pub fn kind(&self) -> OrderKind {
        self.kind
    }

    pub fn permutation(&self) -> &[usize] {
        &self.permutation
    }

    pub fn nvars(&self) -> usize {
        self.permutation.len()
    }

    /// Weight of each variable, in ring order.
    pub fn weights(&self) -> Vec<u32> {
        let mut w = vec![0; self.weights.len()];
        for (k, &v) in self.permutation.iter().enumerate() {
            w[v] = self.weights[k];
        }
        w
    }

    fn to_internal(&self, m: &Monomial) -> Mon {
        let e = m.exponents();
        Mon::new(
            self.permutation.iter().map(|&v| e[v]).collect(),
            &self.weights,
        )
    }

    fn to_external(&self, m: &Mon) -> Monomial {
        let mut e = vec![0; m.e.len()];
        for (k, &v) in self.permutation.iter().enumerate() {
            e[v] = m.e[k];
        }
        Monomial::new(e)
    }
}

/// A reduced Gröbner basis.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GroebnerBasis {
    ring: Arc<PolyRing>,
    order: MonomialOrder,
    /// Monic, ascending by leading monomial under `order`.
    generators: Vec<Polynomial>,
    leading: Vec<Monomial>,
    pairs_reduced: u64,
}

impl GroebnerBasis {
    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn leading_monomials(&self) -> &[Monomial] {
        &self.leading
    }

    pub fn order(&self) -> &MonomialOrder {
        &self.order
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn len(&self) -> usize {
        self.generators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.generators.is_empty()
    }

    pub fn is_unit(&self) -> bool {
        self.leading.iter().any(|m| m.is_one())
    }

    pub fn pairs_reduced(&self) -> u64 {
        self.pairs_reduced
    }

    /// Krull dimension of the quotient ring, `-1` for the unit ideal.
    pub fn dimension(&self) -> i64 {
        let supports: Vec<Vec<usize>> =
            self.leading.iter().map(|m| m.support().collect()).collect();
        monomial_dimension(self.ring.nvars(), &supports)
    }

    /// Normal form of `p`, made monic.
    pub fn normal_form(&self, p: &Polynomial) -> Result<Polynomial, GroebnerError> {
        if !(p.ring().vars() == self.ring.vars() && p.field() == self.field()) {
            return Err(GroebnerError::RingMismatch);
        }
        let ring = self.ring.clone();
        let order = &self.order;
        Ok(match self.field().characteristic() {
            0 => normal_form_with(&IntArith, order, &ring, &self.generators, p),
            c => normal_form_with(&ModArith { p: c as u64 }, order, &ring, &self.generators, p),
        })
    }

    pub fn contains(&self, p: &Polynomial) -> Result<bool, GroebnerError> {
        Ok(self.normal_form(p)?.is_zero())
    }
}

fn to_poly<A: Arith>(
    arith: &A,
    engine: &Engine<A>,
    order: &MonomialOrder,
    p: &Polynomial,
) -> Poly<A::C> {
    let (monos, coeffs): (Vec<&Monomial>, Vec<BigRational>) =
        p.terms().map(|(m, c)| (m, c.clone())).unzip();
    let cs = arith.lift_rationals(&coeffs);
    let mut out: Poly<A::C> = monos
        .into_iter()
        .map(|m| order.to_internal(m))
        .zip(cs)
        .collect();
    engine.sort(&mut out);
    out
}

fn from_poly<A: Arith>(
    arith: &A,
    order: &MonomialOrder,
    ring: &Arc<PolyRing>,
    p: &Poly<A::C>,
) -> Polynomial {
    let cs: Vec<&A::C> = p.iter().map(|(_, c)| c).collect();
    let qs = arith.to_rationals(&cs);
    Polynomial::from_terms(ring, p.iter().map(|(m, _)| order.to_external(m)).zip(qs))
}

fn normal_form_with<A: Arith>(
    arith: &A,
    order: &MonomialOrder,
    ring: &Arc<PolyRing>,
    basis: &[Polynomial],
    p: &Polynomial,
) -> Polynomial {
    let engine = Engine {
        arith,
        kind: order.kind,
        weights: &order.weights,
    };
    let gs: Vec<Poly<A::C>> = basis
        .iter()
        .map(|g| to_poly(arith, &engine, order, g))
        .collect();
    let refs: Vec<&Poly<A::C>> = gs.iter().collect();
    let r = engine.reduce(to_poly(arith, &engine, order, p), &refs);
    from_poly(arith, order, ring, &r)
}

fn run<A: Arith>(
    arith: &A,
    ideal: &IdealPresentation,
    order: &MonomialOrder,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    let engine = Engine {
        arith,
        kind: order.kind,
        weights: &order.weights,
    };
    let inputs: Vec<Poly<A::C>> = ideal
        .generators()
        .iter()
        .filter(|g| !g.is_zero())
        .map(|g| to_poly(arith, &engine, order, g))
        .collect();
    let res = engine
        .buchberger(inputs, ideal.nvars(), budget)
        .map_err(|e| GroebnerError::BudgetExhausted {
            pairs: e.pairs,
            budget,
        })?;
    let ring = ideal.ring().clone();
    let leading = res
        .basis
        .iter()
        .map(|p| order.to_external(&p.last().unwrap().0))
        .collect();
    let generators = res
        .basis
        .iter()
        .map(|p| from_poly(arith, order, &ring, p))
        .collect();
    Ok(GroebnerBasis {
        ring,
        order: order.clone(),
        generators,
        leading,
        pairs_reduced: res.pairs_reduced,
    })
}

/// Reduced Gröbner basis of `ideal` under `order`, giving up after `budget`
/// S-pair reductions.
pub fn buchberger(
    ideal: &IdealPresentation,
    order: &MonomialOrder,
    budget: u64,
) -> Result<GroebnerBasis, GroebnerError> {
    if order.nvars() != ideal.nvars() {
        return Err(GroebnerError::OrderMismatch {
            expected: order.nvars(),
            got: ideal.nvars(),
        });
    }
    match ideal.field().characteristic() {
        0 => run(&IntArith, ideal, order, budget),
        c => run(&ModArith { p: c as u64 }, ideal, order, budget),
    }
}

/// Krull dimension of `k[x]/I`, `-1` for the unit ideal.
pub fn krull_dimension(
    ideal: &IdealPresentation,
    order: &MonomialOrder,
    budget: u64,
) -> Result<i64, GroebnerError> {
    Ok(buchberger(ideal, order, budget)?.dimension())
}

/// Whether `p` lies in the ideal with basis `basis`.
pub fn ideal_membership(p: &Polynomial, basis: &GroebnerBasis) -> Result<bool, GroebnerError> {
    basis.contains(p)
}

/// What [`Context::ideal_dimension`] reports.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionResult {
    pub dimension: i64,
    pub unit_ideal: bool,
    pub basis_size: usize,
}

/// Storage for dimension results keyed by [`Context::cache_key`].
pub trait DimensionCache: Send + Sync {
    fn get(&self, key: &str) -> Option<DimensionResult>;
    fn put(&self, key: &str, value: &DimensionResult);
}

/// Settings shared by every dimension computation.
#[derive(Clone)]
pub struct Context {
    pub order: OrderKind,
    pub budget: u64,
    cache: Option<Arc<dyn DimensionCache>>,
}

impl Default for Context {
    fn default() -> Self {
        Context {
            order: OrderKind::Degrevlex,
            budget: DEFAULT_BUDGET,
            cache: None,
        }
    }
}

impl fmt::Debug for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("Context")
            .field("order", &self.order)
            .field("budget", &self.budget)
            .field("cached", &self.cache.is_some())
            .finish()
    }
}

impl Context {
    pub fn new(order: OrderKind, budget: u64) -> Self {
        Context {
            order,
            budget,
            cache: None,
        }
    }

    pub fn with_cache(mut self, cache: Arc<dyn DimensionCache>) -> Self {
        self.cache = Some(cache);
        self
    }

    pub fn without_cache(mut self) -> Self {
        self.cache = None;
        self
    }

    pub fn has_cache(&self) -> bool {
        self.cache.is_some()
    }

    /// Everything the answer depends on, as text; callers hash it.
    pub fn cache_key(&self, ideal: &IdealPresentation) -> String {
        format!(
            "{}order: {}\nbudget: {}\n",
            ideal.to_text(),
            self.order,
            self.budget
        )
    }

    pub fn groebner(&self, ideal: &IdealPresentation) -> Result<GroebnerBasis, GroebnerError> {
        buchberger(
            ideal,
            &MonomialOrder::new(self.order, ideal.nvars()),
            self.budget,
        )
    }

    /// Dimension of `V(ideal)`, consulting the cache first.
    pub fn ideal_dimension(
        &self,
        ideal: &IdealPresentation,
    ) -> Result<DimensionResult, GroebnerError> {
        let key = self.cache.as_ref().map(|_| self.cache_key(ideal));
        if let (Some(cache), Some(key)) = (&self.cache, &key) {
            if let Some(hit) = cache.get(key) {
                return Ok(hit);
            }
        }
        let result = self.compute_dimension(ideal)?;
        if let (Some(cache), Some(key)) = (&self.cache, &key) {
            cache.put(key, &result);
        }
        Ok(result)
    }

    /// Dimension without touching the cache. Under degrevlex, an ideal
    /// that is homogeneous for some positive grading is computed under the
    /// weighted order for that grading; the dimension does not depend on
    /// the order.
    pub fn compute_dimension(
        &self,
        ideal: &IdealPresentation,
    ) -> Result<DimensionResult, GroebnerError> {
        let graded = match self.order {
            OrderKind::Degrevlex => positive_grading(ideal),
            OrderKind::Lex => None,
        };
        let gb = match graded {
            Some(w) => buchberger(ideal, &MonomialOrder::weighted_degrevlex(w)?, self.budget)?,
            None => self.groebner(ideal)?,
        };
        Ok(DimensionResult {
            dimension: gb.dimension(),
            unit_ideal: gb.is_unit(),
            basis_size: gb.len(),
        })
    }
}
