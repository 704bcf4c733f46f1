//! A deliberately plain Buchberger over rational coefficients that records,
//! for every basis element, cofactors expressing it in the input
//! generators. It shares no code with the main engine and serves as its
//! cross-check: its reduced basis must coincide with the engine's degrevlex
//! basis, and every recorded identity `g = Σ h_i f_i` can be checked by
//! expansion.

use num_rational::BigRational;
use num_traits::One;

use crate::polyring::{IdealPresentation, Monomial, Polynomial};

#[derive(Clone, Debug)]
pub struct TracedBasis {
    inputs: Vec<Polynomial>,
    /// Reduced, monic, ascending by leading monomial.
    pub basis: Vec<Polynomial>,
    /// `cofactors[k][i]` multiplies input `i` in the expression of
    /// `basis[k]`.
    pub cofactors: Vec<Vec<Polynomial>>,
}

impl TracedBasis {
    /// Expand every recorded identity.
    pub fn verify(&self) -> bool {
        self.basis.iter().zip(&self.cofactors).all(|(g, hs)| {
            let mut sum = Polynomial::zero(g.ring());
            for (h, f) in hs.iter().zip(&self.inputs) {
                sum = &sum + &(h * f);
            }
            sum == *g
        })
    }
}

#[derive(Clone)]
struct Tracked {
    p: Polynomial,
    cof: Vec<Polynomial>,
}

impl Tracked {
    fn lead(&self) -> Option<(&Monomial, &BigRational)> {
        self.p.leading_term()
    }

    fn axpy(&self, c: &BigRational, mono: &Monomial, other: &Tracked) -> Tracked {
        // self - c * mono * other
        let ring = self.p.ring();
        let t = Polynomial::from_terms(ring, [(mono.clone(), c.clone())]);
        Tracked {
            p: &self.p - &(&t * &other.p),
            cof: self
                .cof
                .iter()
                .zip(&other.cof)
                .map(|(a, b)| a - &(&t * b))
                .collect(),
        }
    }

    fn scale(&self, c: &BigRational) -> Tracked {
        Tracked {
            p: self.p.scale(c),
            cof: self.cof.iter().map(|h| h.scale(c)).collect(),
        }
    }

    fn shifted(&self, mono: &Monomial) -> Tracked {
        let t = Polynomial::from_terms(self.p.ring(), [(mono.clone(), BigRational::one())]);
        Tracked {
            p: &self.p * &t,
            cof: self.cof.iter().map(|h| h * &t).collect(),
        }
    }

    fn monic(&self) -> Tracked {
        match self.lead() {
            Some((_, c)) => self.scale(&(BigRational::one() / c)),
            None => self.clone(),
        }
    }
}

fn quotient(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::new(
        a.exponents()
            .iter()
            .zip(b.exponents())
            .map(|(x, y)| x - y)
            .collect(),
    )
}

fn lcm(a: &Monomial, b: &Monomial) -> Monomial {
    Monomial::new(
        a.exponents()
            .iter()
            .zip(b.exponents())
            .map(|(x, y)| *x.max(y))
            .collect(),
    )
}

/// Reduce every term, largest first, until none is divisible.
fn reduce(mut f: Tracked, by: &[Tracked]) -> Tracked {
    'outer: loop {
        let terms: Vec<(Monomial, BigRational)> =
            f.p.terms()
                .rev()
                .map(|(m, c)| (m.clone(), c.clone()))
                .collect();
        for (m, c) in terms {
            for g in by {
                let (lm, lc) = g.lead().expect("reducers are nonzero");
                if lm.divides(&m) {
                    f = f.axpy(&(&c / lc), &quotient(&m, lm), g);
                    continue 'outer;
                }
            }
        }
        return f;
    }
}

/// Reduced degrevlex basis with cofactors.
pub fn traced_buchberger(ideal: &IdealPresentation) -> TracedBasis {
    let ring = ideal.ring();
    let inputs = ideal.generators().to_vec();
    let r = inputs.len();
    let mut g: Vec<Tracked> = inputs
        .iter()
        .enumerate()
        .filter(|(_, f)| !f.is_zero())
        .map(|(i, f)| {
            let mut cof = vec![Polynomial::zero(ring); r];
            cof[i] = Polynomial::one(ring);
            Tracked { p: f.clone(), cof }
        })
        .collect();
    let mut pairs: Vec<(usize, usize)> = (0..g.len())
        .flat_map(|j| (0..j).map(move |i| (i, j)))
        .collect();
    while let Some((i, j)) = pairs.pop() {
        let (li, ci) = g[i].lead().unwrap();
        let (lj, cj) = g[j].lead().unwrap();
        let l = lcm(li, lj);
        let a = g[i].scale(&(BigRational::one() / ci));
        let b = g[j].scale(&(BigRational::one() / cj));
        let s = a.shifted(&quotient(&l, li));
        let s = s.axpy(&BigRational::one(), &quotient(&l, lj), &b);
        let h = reduce(s, &g);
        if !h.p.is_zero() {
            let k = g.len();
            g.push(h);
            pairs.extend((0..k).map(|i| (i, k)));
        }
    }
    // minimize
    let mut minimal: Vec<Tracked> = Vec::new();
    for (k, t) in g.iter().enumerate() {
        let lt = t.lead().unwrap().0;
        let redundant = g.iter().enumerate().any(|(k2, u)| {
            let lu = u.lead().unwrap().0;
            k2 != k && lu.divides(lt) && (lu != lt || k2 < k)
        });
        if !redundant {
            minimal.push(t.monic());
        }
    }
    // interreduce
    let mut reduced: Vec<Tracked> = Vec::new();
    for k in 0..minimal.len() {
        let others: Vec<Tracked> = minimal
            .iter()
            .enumerate()
            .filter(|(k2, _)| *k2 != k)
            .map(|(_, t)| t.clone())
            .collect();
        reduced.push(reduce(minimal[k].clone(), &others).monic());
    }
    reduced.sort_by(|a, b| a.lead().unwrap().0.cmp(b.lead().unwrap().0));
    TracedBasis {
        inputs,
        basis: reduced.iter().map(|t| t.p.clone()).collect(),
        cofactors: reduced.into_iter().map(|t| t.cof).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::polyring::FieldSpec;

    #[test]
    fn unit_ideal_with_witness() {
        let i =
            IdealPresentation::from_strings(&["x", "y"], FieldSpec::RATIONALS, &["x*y - 1", "x^2"])
                .unwrap();
        let t = traced_buchberger(&i);
        assert_eq!(t.basis.len(), 1);
        assert!(t.basis[0].is_unit());
        assert!(t.verify());
    }

    #[test]
    fn twisted_cubic() {
        let i = IdealPresentation::from_strings(
            &["x", "y", "z"],
            FieldSpec::RATIONALS,
            &["y - x^2", "z - x^3"],
        )
        .unwrap();
        let t = traced_buchberger(&i);
        assert!(t.verify());
        assert!(t.basis.len() >= 2);
    }
}
