//! Finite local k-algebras `k[t_1..t_r]/I` with `I` a cofinite monomial
//! ideal.
//!
//! The basis is the set of standard monomials (those outside `I`), ordered by
//! total degree and then lexicographically with `t_1 > t_2 > ...`, so the
//! unit monomial is always basis element 0 and the residue map `A -> k` keeps
//! coordinate 0. Multiplication is stored as general structure constants
//! `e_i * e_j = sum_l c[i][j][l] e_l`; for monomial quotients every product is
//! either a single basis element with coefficient 1 or zero.

use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use crate::polyring::{
    content_lines, parse_polynomial, split_list, FieldSpec, PolyRing, TextFormatError,
};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AlgebraError {
    #[error("an algebra needs at least one generator")]
    NoGenerators,
    #[error("the relation list is empty")]
    NoRelations,
    #[error("relation {index} has {got} exponents, expected {expected}")]
    RelationArity {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("ideal is not cofinite: no power of `{0}` lies in it")]
    NotCofinite(String),
    #[error("the unit monomial is a relation, so the quotient is zero")]
    ZeroAlgebra,
    #[error("invalid parameter: {0}")]
    BadParameter(String),
    #[error("no surjection: generator counts differ ({source_gens} vs {target_gens})")]
    GeneratorMismatch {
        source_gens: usize,
        target_gens: usize,
    },
    #[error("no surjection: source relation {0} is not in the target ideal")]
    NotContained(String),
}

/// A finite local algebra presented by a cofinite monomial ideal.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalAlgebra {
    generators: Vec<String>,
    relations: Vec<Vec<u32>>,
    basis: Vec<Vec<u32>>,
    // row-major: structure[i * dim + j] lists (l, c_{i,j,l}) with c != 0
    structure: Vec<Vec<(usize, i64)>>,
    degrees: Vec<u32>,
}

/// The families of algebras with their own constructors.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum StandardAlgebra {
    /// `k[t]/(t^{m+1})`: m-jets.
    Truncation(u32),
    /// `k[s,t]/(s^p, t^q)`.
    Box(u32, u32),
    /// `k[x_1..x_r]/(x_1..x_r)^m`.
    FatPoint(u32, u32),
}

fn default_names(r: usize) -> Vec<String> {
    match r {
        1 => vec!["t".into()],
        2 => vec!["s".into(), "t".into()],
        _ => (1..=r).map(|i| format!("t{i}")).collect(),
    }
}

fn divides(a: &[u32], b: &[u32]) -> bool {
    a.iter().zip(b).all(|(x, y)| x <= y)
}

fn degree(m: &[u32]) -> u32 {
    m.iter().sum()
}

/// All exponent vectors of length `r` and total degree `d`, descending lex.
fn monomials_of_degree(r: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(i: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if i + 1 == cur.len() {
            cur[i] = left;
            out.push(cur.clone());
            return;
        }
        for e in (0..=left).rev() {
            cur[i] = e;
            go(i + 1, left - e, cur, out);
        }
    }
    let mut out = Vec::new();
    if r == 0 {
        return out;
    }
    go(0, d, &mut vec![0; r], &mut out);
    out
}

impl LocalAlgebra {
    /// Quotient of `k[t_1..t_r]` by the ideal generated by `relations`, with
    /// default generator names.
    pub fn from_relations(r: usize, relations: Vec<Vec<u32>>) -> Result<Self, AlgebraError> {
        Self::with_names(default_names(r), relations)
    }

    pub fn with_names(
        generators: Vec<String>,
        relations: Vec<Vec<u32>>,
    ) -> Result<Self, AlgebraError> {
        let r = generators.len();
        if r == 0 {
            return Err(AlgebraError::NoGenerators);
        }
        if relations.is_empty() {
            return Err(AlgebraError::NoRelations);
        }
        for (index, rel) in relations.iter().enumerate() {
            if rel.len() != r {
                return Err(AlgebraError::RelationArity {
                    index,
                    expected: r,
                    got: rel.len(),
                });
            }
        }
        if relations.iter().any(|m| degree(m) == 0) {
            return Err(AlgebraError::ZeroAlgebra);
        }
        // minimal generators, sorted for a canonical presentation
        let mut minimal: Vec<Vec<u32>> = Vec::new();
        for (i, m) in relations.iter().enumerate() {
            let redundant = relations
                .iter()
                .enumerate()
                .any(|(j, other)| j != i && divides(other, m) && (other != m || j < i));
            if !redundant {
                minimal.push(m.clone());
            }
        }
        minimal.sort_by(|a, b| degree(a).cmp(&degree(b)).then_with(|| b.cmp(a)));

        let mut bounds = Vec::with_capacity(r);
        for (i, name) in generators.iter().enumerate() {
            let pure = minimal
                .iter()
                .filter(|m| m.iter().enumerate().all(|(j, &e)| j == i || e == 0))
                .map(|m| m[i])
                .min();
            match pure {
                Some(b) => bounds.push(b),
                None => return Err(AlgebraError::NotCofinite(name.clone())),
            }
        }

        let in_ideal = |m: &[u32]| minimal.iter().any(|rel| divides(rel, m));
        let max_degree: u32 = bounds.iter().map(|b| b - 1).sum();
        let mut basis = Vec::new();
        for d in 0..=max_degree {
            for m in monomials_of_degree(r, d) {
                if m.iter().zip(&bounds).all(|(e, b)| e < b) && !in_ideal(&m) {
                    basis.push(m);
                }
            }
        }

        let dim = basis.len();
        let mut structure = Vec::with_capacity(dim * dim);
        for a in &basis {
            for b in &basis {
                let prod: Vec<u32> = a.iter().zip(b).map(|(x, y)| x + y).collect();
                match basis.iter().position(|m| *m == prod) {
                    Some(l) => structure.push(vec![(l, 1)]),
                    None => structure.push(Vec::new()),
                }
            }
        }
        let degrees = basis.iter().map(|m| degree(m)).collect();
        Ok(LocalAlgebra {
            generators,
            relations: minimal,
            basis,
            structure,
            degrees,
        })
    }

    pub fn standard(kind: StandardAlgebra) -> Result<Self, AlgebraError> {
        match kind {
            StandardAlgebra::Truncation(m) => Self::from_relations(1, vec![vec![m + 1]]),
            StandardAlgebra::Box(p, q) => {
                if p == 0 || q == 0 {
                    return Err(AlgebraError::BadParameter(format!(
                        "box({p},{q}) needs p, q >= 1"
                    )));
                }
                Self::from_relations(2, vec![vec![p, 0], vec![0, q]])
            }
            StandardAlgebra::FatPoint(r, m) => {
                if r == 0 || m == 0 {
                    return Err(AlgebraError::BadParameter(format!(
                        "fat_point({r},{m}) needs r, m >= 1"
                    )));
                }
                Self::from_relations(r as usize, monomials_of_degree(r as usize, m))
            }
        }
    }

    /// `k[t]/(t^{m+1})`.
    pub fn truncation(m: u32) -> Self {
        Self::standard(StandardAlgebra::Truncation(m)).expect("always valid")
    }

    /// `k[s,t]/(s^p, t^q)`.
    pub fn box_algebra(p: u32, q: u32) -> Result<Self, AlgebraError> {
        Self::standard(StandardAlgebra::Box(p, q))
    }

    /// `k[x_1..x_r]/(x_1..x_r)^m`.
    pub fn fat_point(r: u32, m: u32) -> Result<Self, AlgebraError> {
        Self::standard(StandardAlgebra::FatPoint(r, m))
    }

    pub fn generators(&self) -> &[String] {
        &self.generators
    }

    /// Number of generators of the presentation (an upper bound for the
    /// embedding dimension).
    pub fn num_generators(&self) -> usize {
        self.generators.len()
    }

    pub fn relations(&self) -> &[Vec<u32>] {
        &self.relations
    }

    pub fn basis(&self) -> &[Vec<u32>] {
        &self.basis
    }

    /// `dim_k(A)`.
    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn degrees(&self) -> &[u32] {
        &self.degrees
    }

    /// Nonzero structure constants `(l, c_{i,j,l})` of `e_i * e_j`.
    pub fn structure_constants(&self, i: usize, j: usize) -> &[(usize, i64)] {
        &self.structure[i * self.dim() + j]
    }

    /// Index of `e_i * e_j` when it is a single basis element with
    /// coefficient 1, `None` when the product vanishes.
    pub fn product(&self, i: usize, j: usize) -> Option<usize> {
        match self.structure_constants(i, j) {
            [] => None,
            [(l, 1)] => Some(*l),
            _ => panic!("product of basis elements is not a basis monomial"),
        }
    }

    pub fn contains_monomial(&self, m: &[u32]) -> bool {
        self.relations.iter().any(|rel| divides(rel, m))
    }

    pub fn basis_index(&self, m: &[u32]) -> Option<usize> {
        self.basis.iter().position(|b| b == m)
    }

    /// Monomial quotients are graded by total degree; the weights are
    /// `deg(e_i)`.
    pub fn is_graded(&self) -> (bool, Vec<u32>) {
        (true, self.degrees.clone())
    }

    pub fn monomial_string(&self, m: &[u32]) -> String {
        let parts: Vec<String> = m
            .iter()
            .zip(&self.generators)
            .filter(|(e, _)| **e > 0)
            .map(|(e, g)| {
                if *e == 1 {
                    g.clone()
                } else {
                    format!("{g}^{e}")
                }
            })
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }

    /// Algebra text format:
    ///
    /// ```text
    /// algvars: s,t
    /// relations: s^2, t^3
    /// ```
    ///
    /// or `power: 3` in place of `relations:` for `(s,t)^3`.
    pub fn parse_text(text: &str) -> Result<Self, TextFormatError> {
        let mut lines = content_lines(text);
        let (ln, first) = lines
            .next()
            .ok_or_else(|| TextFormatError::new(1, "missing `algvars:` line"))?;
        let names = split_list(
            first
                .strip_prefix("algvars:")
                .ok_or_else(|| TextFormatError::new(ln, "expected `algvars: <names>`"))?,
        );
        let ring = PolyRing::new(names.clone(), FieldSpec::RATIONALS)
            .map_err(|e| TextFormatError::new(ln, e.to_string()))?;
        let (ln2, second) = lines
            .next()
            .ok_or_else(|| TextFormatError::new(ln + 1, "missing `relations:` or `power:` line"))?;
        let relations = if let Some(rest) = second.strip_prefix("relations:") {
            let mut rels = Vec::new();
            for item in split_list(rest) {
                let p = parse_polynomial(&item, &ring)
                    .map_err(|e| TextFormatError::new(ln2, format!("`{item}`: {e}")))?;
                let mut terms = p.terms();
                match (terms.next(), terms.next()) {
                    (Some((m, c)), None) if num_traits::One::is_one(c) => {
                        rels.push(m.exponents().to_vec())
                    }
                    _ => {
                        return Err(TextFormatError::new(
                            ln2,
                            format!("relation `{item}` is not a monomial"),
                        ))
                    }
                }
            }
            rels
        } else if let Some(rest) = second.strip_prefix("power:") {
            let m: u32 = rest
                .trim()
                .parse()
                .map_err(|_| TextFormatError::new(ln2, format!("bad power `{}`", rest.trim())))?;
            if m == 0 {
                return Err(TextFormatError::new(ln2, "power must be at least 1"));
            }
            monomials_of_degree(names.len(), m)
        } else {
            return Err(TextFormatError::new(
                ln2,
                "expected `relations: ...` or `power: <m>`",
            ));
        };
        if let Some((extra, _)) = lines.next() {
            return Err(TextFormatError::new(extra, "unexpected trailing content"));
        }
        Self::with_names(names, relations).map_err(|e| TextFormatError::new(ln2, e.to_string()))
    }

    pub fn to_text(&self) -> String {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|m| self.monomial_string(m))
            .collect();
        format!(
            "algvars: {}\nrelations: {}\n",
            self.generators.join(","),
            rels.join(", ")
        )
    }
}

impl fmt::Display for LocalAlgebra {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rels: Vec<String> = self
            .relations
            .iter()
            .map(|m| self.monomial_string(m))
            .collect();
        write!(f, "k[{}]/({})", self.generators.join(","), rels.join(", "))
    }
}

/// A surjection `A -> A'` induced by the identity on generators.
#[derive(Clone, Debug)]
pub struct AlgebraSurjection {
    source: Arc<LocalAlgebra>,
    target: Arc<LocalAlgebra>,
    embedding: Vec<usize>,
}

impl AlgebraSurjection {
    /// Requires equal generator counts and every source relation to lie in
    /// the target ideal.
    pub fn new(source: &LocalAlgebra, target: &LocalAlgebra) -> Result<Self, AlgebraError> {
        if source.num_generators() != target.num_generators() {
            return Err(AlgebraError::GeneratorMismatch {
                source_gens: source.num_generators(),
                target_gens: target.num_generators(),
            });
        }
        for rel in &source.relations {
            if !target.contains_monomial(rel) {
                return Err(AlgebraError::NotContained(source.monomial_string(rel)));
            }
        }
        let embedding = target
            .basis
            .iter()
            .map(|m| {
                source
                    .basis_index(m)
                    .expect("target standard monomials are standard in the source")
            })
            .collect();
        Ok(AlgebraSurjection {
            source: Arc::new(source.clone()),
            target: Arc::new(target.clone()),
            embedding,
        })
    }

    pub fn source(&self) -> &LocalAlgebra {
        &self.source
    }

    pub fn target(&self) -> &LocalAlgebra {
        &self.target
    }

    /// Target basis index -> source basis index.
    pub fn basis_embedding(&self) -> &[usize] {
        &self.embedding
    }
}

/// Every monomial algebra with `r` generators whose relations are drawn from
/// the given candidate pure powers and mixed monomials, up to `max_dim`.
/// Used to sweep small algebras exhaustively.
pub fn small_monomial_algebras(r: usize, max_exponent: u32, max_dim: usize) -> Vec<LocalAlgebra> {
    // staircases in a box of side max_exponent: enumerate subsets of the
    // box's monomials as minimal generators would explode, so walk the
    // antichains generated by one pure power per variable plus at most one
    // mixed monomial.
    let mut out: Vec<LocalAlgebra> = Vec::new();
    let mut powers = vec![1u32; r];
    loop {
        let pure: Vec<Vec<u32>> = (0..r)
            .map(|i| {
                let mut e = vec![0; r];
                e[i] = powers[i];
                e
            })
            .collect();
        let mut candidates: Vec<Vec<Vec<u32>>> = vec![pure.clone()];
        if r >= 2 {
            for d in 2..=max_exponent {
                for m in monomials_of_degree(r, d) {
                    if m.iter().filter(|&&e| e > 0).count() >= 2 {
                        let mut rels = pure.clone();
                        rels.push(m);
                        candidates.push(rels);
                    }
                }
            }
        }
        for rels in candidates {
            if let Ok(a) = LocalAlgebra::from_relations(r, rels) {
                if a.dim() <= max_dim && !out.contains(&a) {
                    out.push(a);
                }
            }
        }
        let mut i = 0;
        loop {
            if i == r {
                return out;
            }
            powers[i] += 1;
            if powers[i] <= max_exponent {
                break;
            }
            powers[i] = 1;
            i += 1;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names(a: &LocalAlgebra) -> Vec<String> {
        a.basis().iter().map(|m| a.monomial_string(m)).collect()
    }

    #[test]
    fn dual_numbers() {
        let a = LocalAlgebra::from_relations(1, vec![vec![2]]).unwrap();
        assert_eq!(names(&a), ["1", "t"]);
        assert_eq!(a.product(1, 1), None);
        assert_eq!(a.product(0, 1), Some(1));
    }

    #[test]
    fn box_two_three() {
        let a = LocalAlgebra::from_relations(2, vec![vec![2, 0], vec![0, 3]]).unwrap();
        assert_eq!(names(&a), ["1", "s", "t", "s*t", "t^2", "s*t^2"]);
        assert_eq!(a.dim(), 6);
    }

    #[test]
    fn non_cofinite_names_generator() {
        let e = LocalAlgebra::from_relations(2, vec![vec![2, 0]]).unwrap_err();
        assert_eq!(e, AlgebraError::NotCofinite("t".into()));
        assert_eq!(
            LocalAlgebra::from_relations(1, vec![]).unwrap_err(),
            AlgebraError::NoRelations
        );
    }

    #[test]
    fn standard_families() {
        let b = LocalAlgebra::box_algebra(2, 2).unwrap();
        assert_eq!(b.dim(), 4);
        assert_eq!(names(&b), ["1", "s", "t", "s*t"]);
        let f = LocalAlgebra::fat_point(2, 2).unwrap();
        assert_eq!(f.dim(), 3);
        assert_eq!(names(&f), ["1", "s", "t"]);
        let k = LocalAlgebra::truncation(0);
        assert_eq!(k.dim(), 1);
        assert!(LocalAlgebra::box_algebra(0, 2).is_err());
    }

    #[test]
    fn gradings() {
        assert_eq!(
            LocalAlgebra::truncation(2).is_graded(),
            (true, vec![0, 1, 2])
        );
        assert_eq!(
            LocalAlgebra::box_algebra(2, 2).unwrap().is_graded().1,
            [0, 1, 1, 2]
        );
        assert_eq!(
            LocalAlgebra::fat_point(2, 3).unwrap().is_graded().1,
            [0, 1, 1, 2, 2, 2]
        );
    }

    #[test]
    fn surjections() {
        let s = AlgebraSurjection::new(&LocalAlgebra::truncation(2), &LocalAlgebra::truncation(1))
            .unwrap();
        assert_eq!(s.basis_embedding(), [0, 1]);

        let s = AlgebraSurjection::new(
            &LocalAlgebra::box_algebra(2, 2).unwrap(),
            &LocalAlgebra::fat_point(2, 2).unwrap(),
        )
        .unwrap();
        assert_eq!(s.basis_embedding(), [0, 1, 2]);

        let e = AlgebraSurjection::new(
            &LocalAlgebra::truncation(1),
            &LocalAlgebra::fat_point(2, 2).unwrap(),
        )
        .unwrap_err();
        assert!(matches!(e, AlgebraError::GeneratorMismatch { .. }));

        let e = AlgebraSurjection::new(&LocalAlgebra::truncation(1), &LocalAlgebra::truncation(2))
            .unwrap_err();
        assert!(matches!(e, AlgebraError::NotContained(_)));
    }

    fn binomial(n: u64, k: u64) -> u64 {
        (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn fat_point_dimension_is_binomial() {
        for r in 1..=3u32 {
            for m in 1..=5u32 {
                let a = LocalAlgebra::fat_point(r, m).unwrap();
                assert_eq!(
                    a.dim() as u64,
                    binomial((m - 1 + r) as u64, r as u64),
                    "r={r} m={m}"
                );
            }
        }
    }

    #[test]
    fn multiplication_is_associative_and_unital() {
        for a in small_monomial_algebras(2, 4, 20)
            .into_iter()
            .chain(small_monomial_algebras(1, 20, 20))
            .chain(small_monomial_algebras(3, 2, 20))
        {
            let n = a.dim();
            for i in 0..n {
                assert_eq!(a.product(0, i), Some(i));
                assert_eq!(a.product(i, 0), Some(i));
                for j in 0..n {
                    for l in 0..n {
                        let left = a.product(i, j).and_then(|ij| a.product(ij, l));
                        let right = a.product(j, l).and_then(|jl| a.product(i, jl));
                        assert_eq!(left, right, "{a}: ({i},{j},{l})");
                    }
                }
            }
            // locality: only the unit has degree zero
            assert!(a.degrees()[1..].iter().all(|&d| d >= 1));
        }
    }

    #[test]
    fn surjection_keeps_exactly_target_standard_monomials() {
        let algebras = small_monomial_algebras(2, 3, 9);
        for src in &algebras {
            for tgt in &algebras {
                if let Ok(s) = AlgebraSurjection::new(src, tgt) {
                    let kept: Vec<&Vec<u32>> = src
                        .basis()
                        .iter()
                        .filter(|m| !tgt.contains_monomial(m))
                        .collect();
                    let embedded: Vec<&Vec<u32>> = s
                        .basis_embedding()
                        .iter()
                        .map(|&i| &src.basis()[i])
                        .collect();
                    assert_eq!(kept, embedded);
                }
            }
        }
    }

    #[test]
    fn text_format() {
        let a = LocalAlgebra::parse_text("algvars: s,t\nrelations: s^2, t^3\n").unwrap();
        assert_eq!(a.dim(), 6);
        let b = LocalAlgebra::parse_text("# fat point\nalgvars: s,t\npower: 3\n").unwrap();
        assert_eq!(b, LocalAlgebra::fat_point(2, 3).unwrap());
        assert_eq!(LocalAlgebra::parse_text(&b.to_text()).unwrap(), b);
        let e = LocalAlgebra::parse_text("algvars: s,t\nrelations: s^2\n").unwrap_err();
        assert_eq!(e.line, 2);
        assert!(LocalAlgebra::parse_text("algvars: s\nrelations: s + 1\n").is_err());
    }
}
