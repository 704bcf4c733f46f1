//! Buchberger's algorithm with the Gebauer–Möller pair update.
//!
//! Polynomials are stored with exponents permuted into order position and
//! terms ascending, so the leading term is the last element. Over ℚ the
//! arithmetic is fraction-free on integers with content removal; over GF(p)
//! it is on `u64` residues with monic normalization.

use std::cmp::Ordering;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;

use super::OrderKind;
use crate::polyring::mod_inverse;

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub(crate) struct Mon {
    pub e: Box<[u32]>,
    /// Weighted degree under the engine's grading.
    pub deg: u64,
    mask: u64,
}

fn mask_of(e: &[u32]) -> u64 {
    e.iter()
        .enumerate()
        .filter(|(_, &x)| x > 0)
        .fold(0u64, |m, (i, _)| m | (1u64 << (i % 64)))
}

impl Mon {
    pub fn new(e: Vec<u32>, weights: &[u32]) -> Mon {
        let deg = e
            .iter()
            .zip(weights)
            .map(|(&x, &w)| x as u64 * w as u64)
            .sum();
        let mask = mask_of(&e);
        Mon {
            e: e.into_boxed_slice(),
            deg,
            mask,
        }
    }

    fn mul(&self, o: &Mon) -> Mon {
        Mon {
            e: self.e.iter().zip(o.e.iter()).map(|(a, b)| a + b).collect(),
            deg: self.deg + o.deg,
            mask: self.mask | o.mask,
        }
    }

    pub fn divides(&self, o: &Mon) -> bool {
        self.mask & !o.mask == 0 && self.e.iter().zip(o.e.iter()).all(|(a, b)| a <= b)
    }

    /// `self / o`, assuming `o | self`.
    fn div(&self, o: &Mon) -> Mon {
        let e: Box<[u32]> = self.e.iter().zip(o.e.iter()).map(|(a, b)| a - b).collect();
        Mon {
            mask: mask_of(&e),
            e,
            deg: self.deg - o.deg,
        }
    }

    fn lcm(&self, o: &Mon, weights: &[u32]) -> Mon {
        Mon::new(
            self.e
                .iter()
                .zip(o.e.iter())
                .map(|(a, b)| *a.max(b))
                .collect(),
            weights,
        )
    }

    fn coprime(&self, o: &Mon) -> bool {
        self.mask & o.mask == 0
            || self
                .e
                .iter()
                .zip(o.e.iter())
                .all(|(a, b)| *a == 0 || *b == 0)
    }

    fn is_one(&self) -> bool {
        self.deg == 0
    }
}

pub(crate) fn mon_cmp(kind: OrderKind, a: &Mon, b: &Mon) -> Ordering {
    match kind {
        OrderKind::Degrevlex => a.deg.cmp(&b.deg).then_with(|| {
            for i in (0..a.e.len()).rev() {
                if a.e[i] != b.e[i] {
                    return b.e[i].cmp(&a.e[i]);
                }
            }
            Ordering::Equal
        }),
        OrderKind::Lex => a.e.cmp(&b.e),
    }
}

/// Coefficient arithmetic for the engine.
pub(crate) trait Arith: Sync {
    type C: Clone + PartialEq + Send + Sync + std::fmt::Debug;

    fn is_zero(&self, c: &Self::C) -> bool;
    fn is_one(&self, c: &Self::C) -> bool;
    fn mul(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn sub(&self, a: &Self::C, b: &Self::C) -> Self::C;
    fn neg(&self, a: &Self::C) -> Self::C;
    /// `(a, b)` with `a * lp = b * lg` and `a` as small as possible.
    fn cancel(&self, lp: &Self::C, lg: &Self::C) -> (Self::C, Self::C);
    /// Scale so the polynomial is primitive with positive leading
    /// coefficient (integers) or monic (prime field).
    fn normalize(&self, p: &mut [(Mon, Self::C)]);
    /// Bit size of a coefficient, zero when sizes do not grow.
    fn size(&self, _c: &Self::C) -> u64 {
        0
    }
    /// Divide `done` and `rest` jointly by their content, if any.
    fn shrink(&self, _done: &mut [(Mon, Self::C)], _rest: &mut [(Mon, Self::C)]) {}
    fn lift_rationals(&self, cs: &[BigRational]) -> Vec<Self::C>;
    /// Monic rational coefficients.
    fn to_rationals(&self, cs: &[&Self::C]) -> Vec<BigRational>;
}

pub(crate) struct IntArith;

impl Arith for IntArith {
    type C = BigInt;

    fn is_zero(&self, c: &BigInt) -> bool {
        c.is_zero()
    }

    fn is_one(&self, c: &BigInt) -> bool {
        c.is_one()
    }

    fn mul(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a * b
    }

    fn sub(&self, a: &BigInt, b: &BigInt) -> BigInt {
        a - b
    }

    fn neg(&self, a: &BigInt) -> BigInt {
        -a
    }

    fn cancel(&self, lp: &BigInt, lg: &BigInt) -> (BigInt, BigInt) {
        let g = lp.gcd(lg);
        let (mut a, mut b) = (lg / &g, lp / &g);
        if a.is_negative() {
            a = -a;
            b = -b;
        }
        (a, b)
    }

    fn normalize(&self, p: &mut [(Mon, BigInt)]) {
        let mut g = BigInt::zero();
        for (_, c) in p.iter() {
            g = g.gcd(c);
            if g.is_one() {
                break;
            }
        }
        if g.is_zero() {
            return;
        }
        if p.last().is_some_and(|(_, c)| c.is_negative()) {
            g = -g;
        }
        if !g.is_one() {
            for (_, c) in p.iter_mut() {
                *c = &*c / &g;
            }
        }
    }

    fn size(&self, c: &BigInt) -> u64 {
        c.bits()
    }

    fn shrink(&self, done: &mut [(Mon, BigInt)], rest: &mut [(Mon, BigInt)]) {
        let mut g = BigInt::zero();
        for (_, c) in done.iter().chain(rest.iter()) {
            g = g.gcd(c);
            if g.is_one() {
                return;
            }
        }
        if g.is_zero() {
            return;
        }
        for (_, c) in done.iter_mut().chain(rest.iter_mut()) {
            *c = &*c / &g;
        }
    }

    fn lift_rationals(&self, cs: &[BigRational]) -> Vec<BigInt> {
        let l = cs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
        cs.iter().map(|c| c.numer() * (&l / c.denom())).collect()
    }

    fn to_rationals(&self, cs: &[&BigInt]) -> Vec<BigRational> {
        let lc = cs.last().map(|c| (*c).clone()).unwrap_or_else(BigInt::one);
        cs.iter()
            .map(|c| BigRational::new((*c).clone(), lc.clone()))
            .collect()
    }
}

pub(crate) struct ModArith {
    pub p: u64,
}

impl Arith for ModArith {
    type C = u64;

    fn is_zero(&self, c: &u64) -> bool {
        *c == 0
    }

    fn is_one(&self, c: &u64) -> bool {
        *c == 1
    }

    fn mul(&self, a: &u64, b: &u64) -> u64 {
        a * b % self.p
    }

    fn sub(&self, a: &u64, b: &u64) -> u64 {
        (a + self.p - b) % self.p
    }

    fn neg(&self, a: &u64) -> u64 {
        (self.p - a) % self.p
    }

    fn cancel(&self, lp: &u64, lg: &u64) -> (u64, u64) {
        (1, lp * mod_inverse(*lg, self.p) % self.p)
    }

    fn normalize(&self, p: &mut [(Mon, u64)]) {
        if let Some((_, lc)) = p.last() {
            if *lc != 1 {
                let inv = mod_inverse(*lc, self.p);
                for (_, c) in p.iter_mut() {
                    *c = *c * inv % self.p;
                }
            }
        }
    }

    fn lift_rationals(&self, cs: &[BigRational]) -> Vec<u64> {
        // coefficients are already normalized residues
        cs.iter()
            .map(|c| {
                let n = c.to_integer() % BigInt::from(self.p);
                let n = if n.is_negative() {
                    n + BigInt::from(self.p)
                } else {
                    n
                };
                u64::try_from(n).expect("residue fits in u64")
            })
            .collect()
    }

    fn to_rationals(&self, cs: &[&u64]) -> Vec<BigRational> {
        let inv = cs.last().map(|c| mod_inverse(**c, self.p)).unwrap_or(1);
        cs.iter()
            .map(|c| BigRational::from_integer(BigInt::from(**c * inv % self.p)))
            .collect()
    }
}

pub(crate) type Poly<C> = Vec<(Mon, C)>;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub(crate) struct Exhausted {
    pub pairs: u64,
}

#[derive(Debug)]
pub(crate) struct EngineResult<C> {
    /// Reduced basis, normalized, ascending by leading monomial.
    pub basis: Vec<Poly<C>>,
    pub pairs_reduced: u64,
}

#[derive(Clone, Debug)]
struct Pair {
    i: usize,
    j: usize,
    lcm: Mon,
    sugar: u64,
}

pub(crate) struct Engine<'a, A: Arith> {
    pub arith: &'a A,
    pub kind: OrderKind,
    /// Positive variable weights in internal position order.
    pub weights: &'a [u32],
}

impl<'a, A: Arith> Engine<'a, A> {
    fn cmp(&self, a: &Mon, b: &Mon) -> Ordering {
        mon_cmp(self.kind, a, b)
    }

    pub fn sort(&self, p: &mut Poly<A::C>) {
        p.sort_by(|a, b| self.cmp(&a.0, &b.0));
    }

    /// `a * p - b * shift * g`, all ascending. Consumes `p`.
    fn combine(
        &self,
        a: &A::C,
        p: Poly<A::C>,
        b: &A::C,
        shift: &Mon,
        g: &[(Mon, A::C)],
    ) -> Poly<A::C> {
        let ar = self.arith;
        let scale_p = !ar.is_one(a);
        let scale = |c: A::C| if scale_p { ar.mul(a, &c) } else { c };
        let mut out = Vec::with_capacity(p.len() + g.len());
        let mut p = p.into_iter().peekable();
        let mut g = g.iter().map(|(m, c)| (m.mul(shift), c)).peekable();
        loop {
            let ord = match (p.peek(), g.peek()) {
                (Some(pt), Some(gt)) => self.cmp(&pt.0, &gt.0),
                (Some(_), None) => Ordering::Less,
                (None, Some(_)) => Ordering::Greater,
                (None, None) => break,
            };
            match ord {
                Ordering::Less => {
                    let (m, c) = p.next().unwrap();
                    out.push((m, scale(c)));
                }
                Ordering::Greater => {
                    let (m, c) = g.next().unwrap();
                    out.push((m, ar.neg(&ar.mul(b, c))));
                }
                Ordering::Equal => {
                    let (m, pc) = p.next().unwrap();
                    let (_, gc) = g.next().unwrap();
                    let c = ar.sub(&scale(pc), &ar.mul(b, gc));
                    if !ar.is_zero(&c) {
                        out.push((m, c));
                    }
                }
            }
        }
        out
    }

    /// Full reduction of `p` by `reducers`, normalized.
    pub fn reduce(&self, p: Poly<A::C>, reducers: &[&Poly<A::C>]) -> Poly<A::C> {
        let ar = self.arith;
        let mut done: Vec<(Mon, A::C)> = Vec::new(); // descending
        let mut rest = p;
        let mut limit = 256;
        while let Some((t, c)) = rest.pop() {
            let found = reducers.iter().find(|g| g.last().unwrap().0.divides(&t));
            match found {
                Some(g) => {
                    let (lm, lc) = g.last().unwrap();
                    let (a, b) = ar.cancel(&c, lc);
                    let shift = t.div(lm);
                    rest = self.combine(&a, rest, &b, &shift, &g[..g.len() - 1]);
                    if !ar.is_one(&a) {
                        for (_, d) in done.iter_mut() {
                            *d = ar.mul(&a, d);
                        }
                    }
                    // content removal is costly; only when coefficients have grown
                    if ar.size(&c) > limit {
                        ar.shrink(&mut done, &mut rest);
                        limit = limit.max(2 * rest.last().map_or(0, |t| ar.size(&t.1)));
                    }
                }
                None => done.push((t, c)),
            }
        }
        done.reverse();
        ar.normalize(&mut done);
        done
    }

    fn spoly(&self, f: &Poly<A::C>, g: &Poly<A::C>, lcm: &Mon) -> Poly<A::C> {
        let (lf, cf) = f.last().unwrap();
        let (lg, cg) = g.last().unwrap();
        let (a, b) = self.arith.cancel(cf, cg);
        let sf = lcm.div(lf);
        let sg = lcm.div(lg);
        let fshift: Poly<A::C> = f[..f.len() - 1]
            .iter()
            .map(|(m, c)| (m.mul(&sf), c.clone()))
            .collect();
        self.combine(&a, fshift, &b, &sg, &g[..g.len() - 1])
    }

    fn pair_cmp(&self, p: &Pair, q: &Pair) -> Ordering {
        p.sugar
            .cmp(&q.sugar)
            .then_with(|| p.lcm.deg.cmp(&q.lcm.deg))
            .then_with(|| self.cmp(&p.lcm, &q.lcm))
            .then_with(|| (p.j, p.i).cmp(&(q.j, q.i)))
    }

    /// Gebauer–Möller update with new element `h`.
    fn update(
        &self,
        polys: &[Poly<A::C>],
        sugar: &[u64],
        active: &mut Vec<usize>,
        pairs: &mut Vec<Pair>,
        h: usize,
    ) {
        let w = self.weights;
        let lh = &polys[h].last().unwrap().0;
        let lm = |k: usize| &polys[k].last().unwrap().0;

        let mut c: Vec<(usize, Mon, bool)> = active
            .iter()
            .map(|&g| (g, lh.lcm(lm(g), w), lh.coprime(lm(g))))
            .collect();
        let mut d: Vec<(usize, Mon, bool)> = Vec::new();
        while let Some((g1, l1, cop)) = c.pop() {
            let killed = !cop && c.iter().chain(d.iter()).any(|(_, l2, _)| l2.divides(&l1));
            if !killed {
                d.push((g1, l1, cop));
            }
        }
        pairs.retain(|p| {
            !(lh.divides(&p.lcm) && lh.lcm(lm(p.i), w) != p.lcm && lh.lcm(lm(p.j), w) != p.lcm)
        });
        for (g, l, cop) in d {
            if !cop {
                // sugar of the S-polynomial: the larger shifted sugar
                let s = (sugar[g] + l.deg - lm(g).deg).max(sugar[h] + l.deg - lh.deg);
                pairs.push(Pair {
                    i: g,
                    j: h,
                    lcm: l,
                    sugar: s,
                });
            }
        }
        active.retain(|&g| !lh.divides(lm(g)));
        active.push(h);
    }

    /// Reduced Gröbner basis of the (sorted, nonzero) inputs.
    pub fn buchberger(
        &self,
        inputs: Vec<Poly<A::C>>,
        nvars: usize,
        budget: u64,
    ) -> Result<EngineResult<A::C>, Exhausted> {
        let mut polys: Vec<Poly<A::C>> = Vec::new();
        let mut sugar: Vec<u64> = Vec::new();
        let mut active: Vec<usize> = Vec::new();
        let mut pairs: Vec<Pair> = Vec::new();
        let mut pairs_reduced = 0u64;

        let mut inputs = inputs;
        inputs.retain(|p| !p.is_empty());
        inputs.sort_by(|a, b| {
            let (la, lb) = (&a.last().unwrap().0, &b.last().unwrap().0);
            self.cmp(la, lb)
        });

        let mut unit = false;
        let add = |h: Poly<A::C>,
                   s: u64,
                   polys: &mut Vec<Poly<A::C>>,
                   sugar: &mut Vec<u64>,
                   active: &mut Vec<usize>,
                   pairs: &mut Vec<Pair>|
         -> bool {
            if h.last().unwrap().0.is_one() {
                return true;
            }
            polys.push(h);
            sugar.push(s);
            self.update(polys, sugar, active, pairs, polys.len() - 1);
            false
        };

        for f in inputs {
            let s = f.iter().map(|t| t.0.deg).max().unwrap_or(0);
            let reducers: Vec<&Poly<A::C>> = active.iter().map(|&k| &polys[k]).collect();
            let h = self.reduce(f, &reducers);
            if !h.is_empty() && add(h, s, &mut polys, &mut sugar, &mut active, &mut pairs) {
                unit = true;
                break;
            }
        }

        while !unit && !pairs.is_empty() {
            if pairs_reduced >= budget {
                return Err(Exhausted {
                    pairs: pairs_reduced,
                });
            }
            let best = (0..pairs.len())
                .min_by(|&x, &y| self.pair_cmp(&pairs[x], &pairs[y]))
                .unwrap();
            let pair = pairs.swap_remove(best);
            let s = self.spoly(&polys[pair.i], &polys[pair.j], &pair.lcm);
            pairs_reduced += 1;
            let reducers: Vec<&Poly<A::C>> = active.iter().map(|&k| &polys[k]).collect();
            let h = self.reduce(s, &reducers);
            if !h.is_empty()
                && add(
                    h,
                    pair.sugar,
                    &mut polys,
                    &mut sugar,
                    &mut active,
                    &mut pairs,
                )
            {
                unit = true;
            }
        }

        if unit {
            let one = Mon::new(vec![0; nvars], self.weights);
            let mut p = vec![(
                one,
                self.arith.lift_rationals(&[BigRational::one()])[0].clone(),
            )];
            self.arith.normalize(&mut p);
            return Ok(EngineResult {
                basis: vec![p],
                pairs_reduced,
            });
        }

        // active is minimal; reduce tails against the others
        let mut minimal: Vec<Poly<A::C>> = active.iter().map(|&k| polys[k].clone()).collect();
        minimal.sort_by(|a, b| self.cmp(&a.last().unwrap().0, &b.last().unwrap().0));
        let basis: Vec<Poly<A::C>> = (0..minimal.len())
            .into_par_iter()
            .map(|k| {
                let others: Vec<&Poly<A::C>> = minimal
                    .iter()
                    .enumerate()
                    .filter(|(i, _)| *i != k)
                    .map(|(_, p)| p)
                    .collect();
                self.reduce(minimal[k].clone(), &others)
            })
            .collect();
        Ok(EngineResult {
            basis,
            pairs_reduced,
        })
    }
}
