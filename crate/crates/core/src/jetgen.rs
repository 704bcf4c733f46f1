//! Equations of the jet scheme `J_A(X)` of an affine `X ⊂ A^N`.
//!
//! Substituting `x_j ↦ Σ_i a_{i,j} e_i` into a generator `f_α` and expanding
//! in `A` gives `f_α = Σ_i P_α^{(i)} e_i`; the `P_α^{(i)}` cut out `J_A(X)` in
//! the affine space of coordinates `a_{i,j}`. Coordinates are named
//! `a_<i>_<j>` (1-based) and ordered with all coordinates of `x_1` first.

use std::sync::Arc;

use num_rational::BigRational;
use num_traits::Zero;
use rayon::prelude::*;
use thiserror::Error;

use crate::localalgebra::{AlgebraSurjection, LocalAlgebra};
use crate::polyring::{IdealPresentation, PolyError, PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum JetError {
    #[error(transparent)]
    Poly(#[from] PolyError),
    #[error("jet system was built over {built}, the surjection starts at {expected}")]
    AlgebraMismatch { built: String, expected: String },
    #[error("subscheme variables {got:?} differ from the ambient variables {expected:?}")]
    VariableMismatch {
        expected: Vec<String>,
        got: Vec<String>,
    },
    #[error("point does not lie on X: generator {0} does not vanish")]
    NotOnX(usize),
    #[error("point has {got} coordinates, expected {expected}")]
    PointArity { expected: usize, got: usize },
}

/// The defining equations of `J_A(X)`.
#[derive(Clone, Debug)]
pub struct JetSystem {
    source: IdealPresentation,
    algebra: LocalAlgebra,
    ring: Arc<PolyRing>,
    equations: Vec<Polynomial>,
    weights: Vec<u32>,
}

pub fn coordinate_name(i: usize, j: usize) -> String {
    format!("a_{}_{}", i + 1, j + 1)
}

fn jet_ring(
    ambient: usize,
    algebra: &LocalAlgebra,
    field: crate::FieldSpec,
) -> Result<Arc<PolyRing>, PolyError> {
    let m = algebra.dim();
    PolyRing::new(
        (0..ambient).flat_map(|j| (0..m).map(move |i| coordinate_name(i, j))),
        field,
    )
}

/// An element of `A ⊗ k[a]`: one polynomial per basis element.
type AlgElem = Vec<Polynomial>;

fn alg_mul(alg: &LocalAlgebra, ring: &Arc<PolyRing>, u: &AlgElem, v: &AlgElem) -> AlgElem {
    let m = alg.dim();
    let mut out = vec![Polynomial::zero(ring); m];
    for (i, ui) in u.iter().enumerate() {
        if ui.is_zero() {
            continue;
        }
        for (j, vj) in v.iter().enumerate() {
            if vj.is_zero() {
                continue;
            }
            let sc = alg.structure_constants(i, j);
            if sc.is_empty() {
                continue;
            }
            let prod = ui * vj;
            for &(l, c) in sc {
                let term = if c == 1 {
                    prod.clone()
                } else {
                    prod.scale(&BigRational::from_integer(c.into()))
                };
                out[l] = &out[l] + &term;
            }
        }
    }
    out
}

fn expand(f: &Polynomial, alg: &LocalAlgebra, ring: &Arc<PolyRing>, images: &[AlgElem]) -> AlgElem {
    let m = alg.dim();
    let mut unit = vec![Polynomial::zero(ring); m];
    unit[0] = Polynomial::one(ring);
    let mut powers: Vec<Vec<AlgElem>> = images
        .iter()
        .map(|x| vec![unit.clone(), x.clone()])
        .collect();
    let mut acc = vec![Polynomial::zero(ring); m];
    for (mono, c) in f.terms() {
        let mut term = unit.clone();
        term[0] = Polynomial::constant(ring, c.clone());
        for (j, &e) in mono.exponents().iter().enumerate() {
            if e == 0 {
                continue;
            }
            let e = e as usize;
            while powers[j].len() <= e {
                let next = alg_mul(alg, ring, powers[j].last().unwrap(), &images[j]);
                powers[j].push(next);
            }
            term = alg_mul(alg, ring, &term, &powers[j][e]);
            if term.iter().all(Polynomial::is_zero) {
                break;
            }
        }
        for (a, t) in acc.iter_mut().zip(&term) {
            *a = &*a + t;
        }
    }
    acc
}

/// Build the `r · dim_k(A)` equations `P_α^{(i)}`, generator-major then in
/// basis order. Zero polynomials are kept.
pub fn generate_jet_equations(
    ideal: &IdealPresentation,
    algebra: &LocalAlgebra,
) -> Result<JetSystem, JetError> {
    let n = ideal.nvars();
    let m = algebra.dim();
    let ring = jet_ring(n, algebra, ideal.field())?;
    let images: Vec<AlgElem> = (0..n)
        .map(|j| (0..m).map(|i| Polynomial::var(&ring, j * m + i)).collect())
        .collect();
    let equations: Vec<Polynomial> = ideal
        .generators()
        .par_iter()
        .map(|f| expand(f, algebra, &ring, &images))
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    assert_eq!(
        equations.len(),
        ideal.generators().len() * m,
        "jet system must have r * dim(A) equations"
    );
    let weights = (0..n)
        .flat_map(|_| algebra.degrees().iter().copied())
        .collect();
    Ok(JetSystem {
        source: ideal.clone(),
        algebra: algebra.clone(),
        ring,
        equations,
        weights,
    })
}

impl JetSystem {
    pub fn source(&self) -> &IdealPresentation {
        &self.source
    }

    pub fn algebra(&self) -> &LocalAlgebra {
        &self.algebra
    }

    /// `N`.
    pub fn ambient_vars(&self) -> usize {
        self.source.nvars()
    }

    /// The polynomial ring on the jet coordinates.
    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    /// Variable index of `a_{i,j}` (0-based `i` over the basis, `j` over the
    /// ambient variables).
    pub fn coordinate(&self, i: usize, j: usize) -> usize {
        j * self.algebra.dim() + i
    }

    pub fn equations(&self) -> &[Polynomial] {
        &self.equations
    }

    /// `P_α^{(i)}`, both indices 0-based.
    pub fn equation(&self, alpha: usize, i: usize) -> &Polynomial {
        &self.equations[alpha * self.algebra.dim() + i]
    }

    /// Weight `deg(e_i)` of each coordinate, in variable order.
    pub fn weights(&self) -> &[u32] {
        &self.weights
    }

    /// The jet equations as an ideal in the coordinate ring.
    pub fn to_ideal(&self) -> IdealPresentation {
        IdealPresentation::new(&self.ring, self.equations.clone())
            .expect("equations live in the jet ring")
    }

    /// Jet equations plus the pullback of `Z` along `π_A`, i.e. each
    /// generator of `Z` with `x_j ↦ a_{1,j}`.
    pub fn fiber_ideal(&self, z: &IdealPresentation) -> Result<IdealPresentation, JetError> {
        if z.ring().vars() != self.source.ring().vars() || z.field() != self.source.field() {
            return Err(JetError::VariableMismatch {
                expected: self.source.ring().vars().to_vec(),
                got: z.ring().vars().to_vec(),
            });
        }
        let mapping: Vec<usize> = (0..self.ambient_vars())
            .map(|j| self.coordinate(0, j))
            .collect();
        let pulled = z
            .generators()
            .iter()
            .map(|g| g.rename_into(&self.ring, &mapping))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(self.to_ideal().with_generators(pulled))
    }

    /// The constant jet at `point`: `a_{1,j} = point_j`, every other
    /// coordinate zero.
    pub fn zero_section(&self, point: &[BigRational]) -> Result<Vec<BigRational>, JetError> {
        let n = self.ambient_vars();
        if point.len() != n {
            return Err(JetError::PointArity {
                expected: n,
                got: point.len(),
            });
        }
        let field = self.source.field();
        let point = point
            .iter()
            .map(|c| field.normalize(c))
            .collect::<Result<Vec<_>, _>>()?;
        for (alpha, g) in self.source.generators().iter().enumerate() {
            if !g.evaluate(&point)?.is_zero() {
                return Err(JetError::NotOnX(alpha));
            }
        }
        let m = self.algebra.dim();
        let mut out = vec![BigRational::zero(); n * m];
        for (j, c) in point.into_iter().enumerate() {
            out[j * m] = c;
        }
        Ok(out)
    }
}

/// The coordinate projection `J_A(X) -> J_{A'}(X)` induced by a surjection
/// `A -> A'`.
#[derive(Clone, Debug)]
pub struct CoordinateProjection {
    target: JetSystemShape,
    /// Source coordinate index -> target coordinate index, for kept
    /// coordinates.
    map: Vec<Option<usize>>,
    kept_equations: Vec<usize>,
}

#[derive(Clone, Debug)]
struct JetSystemShape {
    ring: Arc<PolyRing>,
}

/// Build the projection for `jets` (over `σ.source()`).
pub fn truncation_substitution(
    jets: &JetSystem,
    sigma: &AlgebraSurjection,
) -> Result<CoordinateProjection, JetError> {
    if jets.algebra() != sigma.source() {
        return Err(JetError::AlgebraMismatch {
            built: jets.algebra().to_string(),
            expected: sigma.source().to_string(),
        });
    }
    let n = jets.ambient_vars();
    let m = jets.algebra().dim();
    let m2 = sigma.target().dim();
    let ring = jet_ring(n, sigma.target(), jets.source().field())?;
    let mut map = vec![None; n * m];
    for j in 0..n {
        for (i2, &i) in sigma.basis_embedding().iter().enumerate() {
            map[j * m + i] = Some(j * m2 + i2);
        }
    }
    let r = jets.source().generators().len();
    let kept_equations = (0..r)
        .flat_map(|alpha| sigma.basis_embedding().iter().map(move |&i| alpha * m + i))
        .collect();
    Ok(CoordinateProjection {
        target: JetSystemShape { ring },
        map,
        kept_equations,
    })
}

impl CoordinateProjection {
    pub fn target_ring(&self) -> &Arc<PolyRing> {
        &self.target.ring
    }

    pub fn coordinate_map(&self) -> &[Option<usize>] {
        &self.map
    }

    /// Project a point of the source coordinate space.
    pub fn project_point(&self, point: &[BigRational]) -> Vec<BigRational> {
        let mut out = vec![BigRational::zero(); self.target.ring.nvars()];
        for (s, t) in self.map.iter().enumerate() {
            if let Some(t) = t {
                out[*t] = point[s].clone();
            }
        }
        out
    }

    /// Rewrite `p` in target coordinates; `None` when `p` involves a
    /// coordinate that the projection forgets.
    pub fn apply(&self, p: &Polynomial) -> Option<Polynomial> {
        if p.variables_used().iter().any(|&v| self.map[v].is_none()) {
            return None;
        }
        let mapping: Vec<usize> = self.map.iter().map(|t| t.unwrap_or(0)).collect();
        Some(
            p.rename_into(&self.target.ring, &mapping)
                .expect("same field by construction"),
        )
    }

    /// The source equations indexed by the embedded basis elements, rewritten
    /// in target coordinates. These are the target system's equations.
    pub fn restricted_equations(&self, jets: &JetSystem) -> Option<Vec<Polynomial>> {
        self.kept_equations
            .iter()
            .map(|&k| self.apply(&jets.equations()[k]))
            .collect()
    }
}

/// Weighted degree of `p` under `weights` when every term has the same one.
pub fn quasi_homogeneous_weight(p: &Polynomial, weights: &[u32]) -> Option<u64> {
    let mut degs = p.terms().map(|(m, _)| {
        m.exponents()
            .iter()
            .zip(weights)
            .map(|(&e, &w)| e as u64 * w as u64)
            .sum::<u64>()
    });
    let first = degs.next()?;
    degs.all(|d| d == first).then_some(first)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::localalgebra::small_monomial_algebras;
    use crate::polyring::{parse_polynomial, FieldSpec};

    fn ideal(vars: &[&str], gens: &[&str]) -> IdealPresentation {
        IdealPresentation::from_strings(vars, FieldSpec::RATIONALS, gens).unwrap()
    }

    fn texts(ps: &[Polynomial]) -> Vec<String> {
        ps.iter().map(|p| p.to_string()).collect()
    }

    fn q(n: i64) -> BigRational {
        BigRational::from_integer(n.into())
    }

    #[test]
    fn square_over_dual_numbers() {
        let j =
            generate_jet_equations(&ideal(&["x"], &["x^2"]), &LocalAlgebra::truncation(1)).unwrap();
        assert_eq!(j.ring().vars(), ["a_1_1", "a_2_1"]);
        assert_eq!(texts(j.equations()), ["a_1_1^2", "2*a_1_1*a_2_1"]);
    }

    #[test]
    fn linear_generator_kills_every_coordinate() {
        let a = LocalAlgebra::box_algebra(2, 3).unwrap();
        let j = generate_jet_equations(&ideal(&["x"], &["x"]), &a).unwrap();
        let expected: Vec<String> = (1..=6).map(|i| format!("a_{i}_1")).collect();
        assert_eq!(texts(j.equations()), expected);
    }

    #[test]
    fn parabola_over_dual_numbers() {
        let j = generate_jet_equations(
            &ideal(&["x", "y"], &["y - x^2"]),
            &LocalAlgebra::truncation(1),
        )
        .unwrap();
        assert_eq!(
            texts(j.equations()),
            ["-a_1_1^2 + a_1_2", "-2*a_1_1*a_2_1 + a_2_2"]
        );
    }

    #[test]
    fn zero_equations_are_kept() {
        let a = LocalAlgebra::fat_point(2, 2).unwrap();
        let j = generate_jet_equations(&ideal(&["x", "y"], &["0", "5"]), &a).unwrap();
        assert_eq!(texts(j.equations()), ["0", "0", "0", "5", "0", "0"]);
    }

    #[test]
    fn truncation_of_square() {
        let i = ideal(&["x"], &["x^2"]);
        let src = generate_jet_equations(&i, &LocalAlgebra::truncation(2)).unwrap();
        assert_eq!(
            texts(src.equations()),
            ["a_1_1^2", "2*a_1_1*a_2_1", "a_2_1^2 + 2*a_1_1*a_3_1"]
        );
        let sigma =
            AlgebraSurjection::new(&LocalAlgebra::truncation(2), &LocalAlgebra::truncation(1))
                .unwrap();
        let proj = truncation_substitution(&src, &sigma).unwrap();
        let tgt = generate_jet_equations(&i, &LocalAlgebra::truncation(1)).unwrap();
        assert_eq!(proj.restricted_equations(&src).unwrap(), tgt.equations());

        let to_k =
            AlgebraSurjection::new(&LocalAlgebra::truncation(2), &LocalAlgebra::truncation(0))
                .unwrap();
        let proj = truncation_substitution(&src, &to_k).unwrap();
        assert_eq!(
            texts(&proj.restricted_equations(&src).unwrap()),
            ["a_1_1^2"]
        );

        let bad =
            AlgebraSurjection::new(&LocalAlgebra::truncation(1), &LocalAlgebra::truncation(0))
                .unwrap();
        assert!(truncation_substitution(&src, &bad).is_err());
    }

    #[test]
    fn identity_projection() {
        let a = LocalAlgebra::box_algebra(2, 2).unwrap();
        let src = generate_jet_equations(&ideal(&["x", "y"], &["x^2 + y^3"]), &a).unwrap();
        let id = AlgebraSurjection::new(&a, &a).unwrap();
        let proj = truncation_substitution(&src, &id).unwrap();
        let expected: Vec<Option<usize>> = (0..8).map(Some).collect();
        assert_eq!(proj.coordinate_map(), expected);
        assert_eq!(proj.restricted_equations(&src).unwrap(), src.equations());
    }

    #[test]
    fn fiber_over_origin_of_node() {
        let i = ideal(&["x", "y"], &["x*y"]);
        let j = generate_jet_equations(&i, &LocalAlgebra::truncation(1)).unwrap();
        let z = ideal(&["x", "y"], &["x", "y"]);
        let f = j.fiber_ideal(&z).unwrap();
        assert_eq!(
            texts(f.generators()),
            ["a_1_1*a_1_2", "a_2_1*a_1_2 + a_1_1*a_2_2", "a_1_1", "a_1_2"]
        );
        let unit = j.fiber_ideal(&ideal(&["x", "y"], &["1"])).unwrap();
        assert!(unit.generators().last().unwrap().is_unit());
        let zero = j.fiber_ideal(&ideal(&["x", "y"], &["0"])).unwrap();
        assert!(zero.generators().last().unwrap().is_zero());
        assert!(j.fiber_ideal(&ideal(&["x", "z"], &["x"])).is_err());
    }

    #[test]
    fn zero_sections() {
        let node = ideal(&["x", "y"], &["x*y"]);
        let j = generate_jet_equations(&node, &LocalAlgebra::box_algebra(2, 2).unwrap()).unwrap();
        let s = j.zero_section(&[q(0), q(0)]).unwrap();
        assert_eq!(s, vec![q(0); 8]);
        assert!(matches!(
            j.zero_section(&[q(1), q(1)]),
            Err(JetError::NotOnX(0))
        ));

        let par = ideal(&["x", "y"], &["y - x^2"]);
        let j = generate_jet_equations(&par, &LocalAlgebra::truncation(1)).unwrap();
        let s = j.zero_section(&[q(2), q(4)]).unwrap();
        assert_eq!(s, [q(2), q(0), q(4), q(0)]);
        for e in j.equations() {
            assert!(e.evaluate(&s).unwrap().is_zero());
        }
    }

    #[test]
    fn equations_are_quasi_homogeneous() {
        let i = ideal(&["x", "y"], &["x^2 + y^3 - x*y + 1", "x - 2*y^2"]);
        for a in small_monomial_algebras(2, 3, 8) {
            let j = generate_jet_equations(&i, &a).unwrap();
            for alpha in 0..2 {
                for (k, &d) in a.degrees().iter().enumerate() {
                    let p = j.equation(alpha, k);
                    if !p.is_zero() {
                        assert_eq!(quasi_homogeneous_weight(p, j.weights()), Some(d as u64));
                    }
                }
            }
        }
    }

    #[test]
    fn scaling_by_lambda_multiplies_by_weight() {
        let i = ideal(&["x", "y"], &["x^3 - y^2 + x*y - 5"]);
        let a = LocalAlgebra::box_algebra(2, 3).unwrap();
        let j = generate_jet_equations(&i, &a).unwrap();
        let mut names: Vec<String> = j.ring().vars().to_vec();
        names.push("lambda".into());
        let big = PolyRing::new(names, FieldSpec::RATIONALS).unwrap();
        let lambda = Polynomial::var(&big, big.nvars() - 1);
        let images: Vec<Polynomial> = (0..j.ring().nvars())
            .map(|v| &Polynomial::var(&big, v) * &lambda.pow(j.weights()[v]))
            .collect();
        let embed: Vec<usize> = (0..j.ring().nvars()).collect();
        for alpha in 0..1 {
            for (k, &d) in a.degrees().iter().enumerate() {
                let p = j.equation(alpha, k);
                let scaled = p.substitute_all(&images).unwrap();
                let expected = &p.rename_into(&big, &embed).unwrap() * &lambda.pow(d);
                assert_eq!(scaled, expected);
            }
        }
    }

    #[test]
    fn truncation_compatibility_over_small_algebras() {
        let i = ideal(&["x", "y"], &["x^2 - y^3", "x*y + y"]);
        let mut algebras = small_monomial_algebras(2, 4, 8);
        algebras.extend(small_monomial_algebras(1, 8, 8));
        let systems: Vec<JetSystem> = algebras
            .iter()
            .map(|a| generate_jet_equations(&i, a).unwrap())
            .collect();
        let mut pairs = 0;
        for (src, js) in algebras.iter().zip(&systems) {
            for (tgt, jt) in algebras.iter().zip(&systems) {
                let Ok(sigma) = AlgebraSurjection::new(src, tgt) else {
                    continue;
                };
                let proj = truncation_substitution(js, &sigma).unwrap();
                assert_eq!(
                    proj.restricted_equations(js).as_deref(),
                    Some(jt.equations()),
                    "{src} -> {tgt}"
                );
                pairs += 1;
            }
        }
        assert!(pairs > 50);
    }

    #[test]
    fn dual_number_square() {
        let a = LocalAlgebra::truncation(1);
        let ring = PolyRing::new(["u", "v"], FieldSpec::RATIONALS).unwrap();
        let u = vec![Polynomial::var(&ring, 0), Polynomial::var(&ring, 1)];
        let sq = alg_mul(&a, &ring, &u, &u);
        assert_eq!(sq[0], parse_polynomial("u^2", &ring).unwrap());
        assert_eq!(sq[1], parse_polynomial("2*u*v", &ring).unwrap());
    }
}
