//! Pure-dimensionality and irreducibility of `J_A(X)` for a complete
//! intersection `X`, decided by dimension counts.

use serde::Serialize;

use super::{jet_dimension, InvariantError, Result};
use crate::groebner::Context;
use crate::jetgen::generate_jet_equations;
use crate::localalgebra::LocalAlgebra;
use crate::polyring::IdealPresentation;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct LciVerdict {
    /// `dim J_A(X) = ℓ·dim X`. Decided on total dimension only, so a
    /// smaller embedded component would go unnoticed.
    pub pure_dimensional: bool,
    /// Pure-dimensional, and the jets over the singular locus have
    /// dimension `< ℓ·dim X`.
    pub irreducible: bool,
    pub jet_dim: i64,
    /// Dimension of the jets over the singular locus, `-1` when `X` is
    /// smooth.
    pub fiber_dim: i64,
    /// `ℓ·dim X`.
    pub expected: i64,
}

/// `ideal` must be cut out by exactly `N - dim X` equations.
pub fn lci_jet_check(
    ctx: &Context,
    ideal: &IdealPresentation,
    dim: usize,
    algebra: &LocalAlgebra,
) -> Result<LciVerdict> {
    let n = ideal.nvars();
    let r = ideal.generators().iter().filter(|g| !g.is_zero()).count();
    if dim > n || r != n - dim {
        return Err(InvariantError::InvalidInput(format!(
            "{r} equations in {n} variables do not present a complete intersection of dimension {dim}"
        )));
    }
    let actual = ctx.ideal_dimension(ideal)?.dimension;
    if actual != dim as i64 {
        return Err(InvariantError::InvalidInput(format!(
            "declared dimension {dim} but the ideal has dimension {actual}"
        )));
    }
    let expected = (algebra.dim() * dim) as i64;
    let jet_dim = jet_dimension(ctx, ideal, algebra)?;
    let fiber_dim = if r == 0 {
        -1
    } else {
        let singular = ideal.jacobian_generators(r)?;
        let jets = generate_jet_equations(ideal, algebra)?;
        ctx.ideal_dimension(&jets.fiber_ideal(&singular)?)?
            .dimension
    };
    let pure_dimensional = jet_dim == expected;
    Ok(LciVerdict {
        pure_dimensional,
        irreducible: pure_dimensional && fiber_dim < expected,
        jet_dim,
        fiber_dim,
        expected,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::FieldSpec;

    fn ideal(vars: &[&str], gens: &[&str]) -> IdealPresentation {
        IdealPresentation::from_strings(vars, FieldSpec::RATIONALS, gens).unwrap()
    }

    #[test]
    fn node_is_pure_but_reducible() {
        let ctx = Context::default();
        let v = lci_jet_check(
            &ctx,
            &ideal(&["x", "y"], &["x*y"]),
            1,
            &LocalAlgebra::truncation(1),
        )
        .unwrap();
        assert_eq!((v.jet_dim, v.fiber_dim, v.expected), (2, 2, 2));
        assert!(v.pure_dimensional && !v.irreducible);
    }

    #[test]
    fn quadric_cone_first_jets() {
        let ctx = Context::default();
        let cone = ideal(&["x", "y", "z"], &["x^2 + y^2 + z^2"]);
        let v = lci_jet_check(&ctx, &cone, 2, &LocalAlgebra::truncation(1)).unwrap();
        assert_eq!((v.jet_dim, v.fiber_dim, v.expected), (4, 3, 4));
        assert!(v.pure_dimensional && v.irreducible);
    }

    #[test]
    fn quadric_cone_over_the_planar_fat_point() {
        // with (s,t)^2 = 0 every jet through the vertex solves the equations
        let ctx = Context::default();
        let cone = ideal(&["x", "y", "z"], &["x^2 + y^2 + z^2"]);
        let v = lci_jet_check(&ctx, &cone, 2, &LocalAlgebra::fat_point(2, 2).unwrap()).unwrap();
        assert_eq!((v.jet_dim, v.fiber_dim, v.expected), (6, 6, 6));
        assert!(v.pure_dimensional && !v.irreducible);
    }

    #[test]
    fn smooth_and_malformed() {
        let ctx = Context::default();
        let line = ideal(&["x", "y"], &["x"]);
        for a in [
            LocalAlgebra::truncation(2),
            LocalAlgebra::box_algebra(2, 2).unwrap(),
        ] {
            let v = lci_jet_check(&ctx, &line, 1, &a).unwrap();
            assert!(v.pure_dimensional && v.irreducible);
            assert_eq!(v.fiber_dim, -1);
        }
        assert!(lci_jet_check(&ctx, &line, 0, &LocalAlgebra::truncation(1)).is_err());
        let twice = ideal(&["x", "y"], &["x", "x^2"]);
        assert!(lci_jet_check(&ctx, &twice, 0, &LocalAlgebra::truncation(1)).is_err());
    }
}
