use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::sync::Arc;

use num_rational::BigRational;
use num_traits::{One, Zero};

use super::field::{format_rational, FieldSpec};
use super::monomial::Monomial;
use super::PolyError;

/// An ordered list of variable names over a coefficient field.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyRing {
    vars: Vec<String>,
    field: FieldSpec,
}

impl PolyRing {
    pub fn new<S: Into<String>>(
        vars: impl IntoIterator<Item = S>,
        field: FieldSpec,
    ) -> Result<Arc<PolyRing>, PolyError> {
        let vars: Vec<String> = vars.into_iter().map(Into::into).collect();
        for (i, v) in vars.iter().enumerate() {
            if !is_identifier(v) {
                return Err(PolyError::InvalidVariableName(v.clone()));
            }
            if vars[..i].contains(v) {
                return Err(PolyError::DuplicateVariable(v.clone()));
            }
        }
        Ok(Arc::new(PolyRing { vars, field }))
    }

    pub fn vars(&self) -> &[String] {
        &self.vars
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn index_of(&self, name: &str) -> Option<usize> {
        self.vars.iter().position(|v| v == name)
    }
}

pub(crate) fn is_identifier(s: &str) -> bool {
    let mut chars = s.chars();
    match chars.next() {
        Some(c) if c.is_ascii_alphabetic() || c == '_' => {}
        _ => return false,
    }
    chars.all(|c| c.is_ascii_alphanumeric() || c == '_')
}

/// Sparse multivariate polynomial with exact coefficients.
///
/// No stored coefficient is zero and every exponent vector has one entry per
/// ring variable. Arithmetic operators panic when the operands live in
/// different rings; use [`Polynomial::same_ring`] first when that is not
/// known statically.
#[derive(Clone, Debug)]
pub struct Polynomial {
    ring: Arc<PolyRing>,
    terms: BTreeMap<Monomial, BigRational>,
}

impl PartialEq for Polynomial {
    fn eq(&self, other: &Self) -> bool {
        self.same_ring(other) && self.terms == other.terms
    }
}

impl Eq for Polynomial {}

impl Polynomial {
    pub fn zero(ring: &Arc<PolyRing>) -> Self {
        Polynomial {
            ring: ring.clone(),
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring: &Arc<PolyRing>) -> Self {
        Self::constant(ring, BigRational::one())
    }

    pub fn constant(ring: &Arc<PolyRing>, c: BigRational) -> Self {
        Self::from_terms(ring, [(Monomial::one(ring.nvars()), c)])
    }

    pub fn var(ring: &Arc<PolyRing>, index: usize) -> Self {
        Self::from_terms(
            ring,
            [(Monomial::var(ring.nvars(), index), BigRational::one())],
        )
    }

    /// Collect terms, summing duplicates, normalizing coefficients into the
    /// ring's field and dropping zeros.
    ///
    /// Panics on exponent vectors of the wrong length or on coefficients
    /// with a denominator divisible by the characteristic.
    pub fn from_terms(
        ring: &Arc<PolyRing>,
        terms: impl IntoIterator<Item = (Monomial, BigRational)>,
    ) -> Self {
        let field = ring.field();
        let mut map: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (m, c) in terms {
            assert_eq!(m.nvars(), ring.nvars(), "exponent vector length");
            let c = field
                .normalize(&c)
                .expect("coefficient not representable in field");
            if c.is_zero() {
                continue;
            }
            let entry = map.entry(m).or_insert_with(BigRational::zero);
            *entry = field.add(entry, &c);
        }
        map.retain(|_, c| !c.is_zero());
        Polynomial {
            ring: ring.clone(),
            terms: map,
        }
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn same_ring(&self, other: &Polynomial) -> bool {
        Arc::ptr_eq(&self.ring, &other.ring) || self.ring == other.ring
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    /// Nonzero constant.
    pub fn is_unit(&self) -> bool {
        self.terms.len() == 1 && self.terms.keys().next().unwrap().is_one()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms in increasing monomial order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Monomial, &BigRational)> {
        self.terms.iter()
    }

    pub fn coefficient(&self, m: &Monomial) -> BigRational {
        self.terms.get(m).cloned().unwrap_or_else(BigRational::zero)
    }

    /// Largest term under the graded reverse lexicographic order.
    pub fn leading_term(&self) -> Option<(&Monomial, &BigRational)> {
        self.terms.iter().next_back()
    }

    pub fn total_degree(&self) -> Option<u64> {
        self.terms.keys().map(Monomial::degree).max()
    }

    /// Indices of variables that occur in some term.
    pub fn variables_used(&self) -> Vec<usize> {
        let mut used = vec![false; self.ring.nvars()];
        for m in self.terms.keys() {
            for i in m.support() {
                used[i] = true;
            }
        }
        used.iter()
            .enumerate()
            .filter(|(_, &u)| u)
            .map(|(i, _)| i)
            .collect()
    }

    pub fn scale(&self, c: &BigRational) -> Polynomial {
        let field = self.field();
        let c = field
            .normalize(c)
            .expect("scalar not representable in field");
        Polynomial::from_terms(
            &self.ring,
            self.terms
                .iter()
                .map(|(m, a)| (m.clone(), field.mul(a, &c))),
        )
    }

    pub fn pow(&self, mut e: u32) -> Polynomial {
        let mut base = self.clone();
        let mut acc = Polynomial::one(&self.ring);
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            e >>= 1;
            if e > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Partial derivative with respect to variable `index`.
    pub fn derivative(&self, index: usize) -> Polynomial {
        let field = self.field();
        Polynomial::from_terms(
            &self.ring,
            self.terms.iter().filter_map(|(m, c)| {
                let e = m.exponents()[index];
                if e == 0 {
                    return None;
                }
                let mut exps = m.exponents().to_vec();
                exps[index] -= 1;
                Some((Monomial::new(exps), field.mul(c, &field.int(e as i64))))
            }),
        )
    }

    /// Evaluate at a point given as field elements, one per variable.
    pub fn evaluate(&self, point: &[BigRational]) -> Result<BigRational, PolyError> {
        if point.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.nvars(),
                got: point.len(),
            });
        }
        let field = self.field();
        let point: Vec<BigRational> = point
            .iter()
            .map(|x| field.normalize(x))
            .collect::<Result<_, _>>()?;
        let mut total = BigRational::zero();
        for (m, c) in &self.terms {
            let mut v = c.clone();
            for (x, &e) in point.iter().zip(m.exponents()) {
                for _ in 0..e {
                    v = field.mul(&v, x);
                }
            }
            total = field.add(&total, &v);
        }
        Ok(total)
    }

    /// Substitute `images[i]` for variable `i`. All images must share one
    /// ring over the same field.
    pub fn substitute_all(&self, images: &[Polynomial]) -> Result<Polynomial, PolyError> {
        if images.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.nvars(),
                got: images.len(),
            });
        }
        let target = match images.first() {
            Some(p) => p.ring.clone(),
            None => {
                // no variables: p is a constant, keep it in its own ring
                return Ok(self.clone());
            }
        };
        for img in images {
            if img.field() != self.field() {
                return Err(PolyError::FieldMismatch);
            }
            if !(Arc::ptr_eq(&img.ring, &target) || *img.ring == *target) {
                return Err(PolyError::RingMismatch);
            }
        }
        // cache powers per variable
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|p| vec![Polynomial::one(&target), p.clone()])
            .collect();
        let mut out = Polynomial::zero(&target);
        for (m, c) in &self.terms {
            let mut term = Polynomial::constant(&target, c.clone());
            for (i, &e) in m.exponents().iter().enumerate() {
                if e == 0 {
                    continue;
                }
                let e = e as usize;
                while powers[i].len() <= e {
                    let next = &powers[i][powers[i].len() - 1] * &images[i];
                    powers[i].push(next);
                }
                term = &term * &powers[i][e];
                if term.is_zero() {
                    break;
                }
            }
            out = &out + &term;
        }
        Ok(out)
    }

    /// Substitute by variable name. Every variable of the ring needs an image.
    pub fn substitute(
        &self,
        images: &BTreeMap<String, Polynomial>,
    ) -> Result<Polynomial, PolyError> {
        let ordered = self
            .ring
            .vars()
            .iter()
            .map(|v| {
                images
                    .get(v)
                    .cloned()
                    .ok_or_else(|| PolyError::MissingImage(v.clone()))
            })
            .collect::<Result<Vec<_>, _>>()?;
        if ordered.is_empty() {
            if let Some(img) = images.values().next() {
                return Ok(Polynomial::from_terms(
                    img.ring(),
                    self.terms
                        .values()
                        .map(|c| (Monomial::one(img.ring().nvars()), c.clone())),
                ));
            }
        }
        self.substitute_all(&ordered)
    }

    /// Re-index into another ring: variable `i` becomes `target` variable
    /// `mapping[i]`. The fields must agree.
    pub fn rename_into(
        &self,
        target: &Arc<PolyRing>,
        mapping: &[usize],
    ) -> Result<Polynomial, PolyError> {
        if target.field() != self.field() {
            return Err(PolyError::FieldMismatch);
        }
        if mapping.len() != self.ring.nvars() {
            return Err(PolyError::ArityMismatch {
                expected: self.ring.nvars(),
                got: mapping.len(),
            });
        }
        let n = target.nvars();
        let terms = self.terms.iter().map(|(m, c)| {
            let mut e = vec![0; n];
            for (i, &x) in m.exponents().iter().enumerate() {
                e[mapping[i]] += x;
            }
            (Monomial::new(e), c.clone())
        });
        Ok(Polynomial::from_terms(target, terms))
    }

    fn check_ring(&self, other: &Polynomial) {
        assert!(
            self.same_ring(other),
            "polynomials from different rings: {:?} vs {:?}",
            self.ring.vars(),
            other.ring.vars()
        );
    }
}

impl Add for &Polynomial {
    type Output = Polynomial;

    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let field = self.field();
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            match terms.get_mut(m) {
                Some(a) => {
                    *a = field.add(a, c);
                    if a.is_zero() {
                        terms.remove(m);
                    }
                }
                None => {
                    terms.insert(m.clone(), c.clone());
                }
            }
        }
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        let field = self.field();
        Polynomial {
            ring: self.ring.clone(),
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (m.clone(), field.neg(c)))
                .collect(),
        }
    }
}

impl Sub for &Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self + &(-rhs)
    }
}

impl Mul for &Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.check_ring(rhs);
        let field = self.field();
        let mut terms: BTreeMap<Monomial, BigRational> = BTreeMap::new();
        for (ma, ca) in &self.terms {
            for (mb, cb) in &rhs.terms {
                let m = ma.mul(mb);
                let c = field.mul(ca, cb);
                let entry = terms.entry(m).or_insert_with(BigRational::zero);
                *entry = field.add(entry, &c);
            }
        }
        terms.retain(|_, c| !c.is_zero());
        Polynomial {
            ring: self.ring.clone(),
            terms,
        }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $m:ident) => {
        impl $tr for Polynomial {
            type Output = Polynomial;
            fn $m(self, rhs: Polynomial) -> Polynomial {
                (&self).$m(&rhs)
            }
        }
    };
}

forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl fmt::Display for Polynomial {
    /// Terms from largest to smallest, e.g. `x^2 - 1/2*x*y + 3`; the zero
    /// polynomial prints as `0`.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let vars = self.ring.vars();
        for (k, (m, c)) in self.terms.iter().rev().enumerate() {
            let negative = c < &BigRational::zero();
            let abs = if negative { -c } else { c.clone() };
            if k == 0 {
                if negative {
                    write!(f, "-")?;
                }
            } else if negative {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            let mut factors: Vec<String> = Vec::new();
            if !abs.is_one() || m.is_one() {
                factors.push(format_rational(&abs));
            }
            for (i, &e) in m.exponents().iter().enumerate() {
                match e {
                    0 => {}
                    1 => factors.push(vars[i].clone()),
                    _ => factors.push(format!("{}^{}", vars[i], e)),
                }
            }
            write!(f, "{}", factors.join("*"))?;
        }
        Ok(())
    }
}
