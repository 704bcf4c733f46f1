use std::fmt;
use std::sync::Arc;

use thiserror::Error;

use super::field::FieldSpec;
use super::parse::{parse_polynomial, ParseError};
use super::polynomial::{PolyRing, Polynomial};
use super::PolyError;

/// Generators of an ideal in a fixed ambient polynomial ring.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IdealPresentation {
    ring: Arc<PolyRing>,
    generators: Vec<Polynomial>,
}

/// A problem in ideal or algebra text, with its 1-based line number.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct TextFormatError {
    pub line: usize,
    pub message: String,
}

impl TextFormatError {
    pub(crate) fn new(line: usize, message: impl Into<String>) -> Self {
        TextFormatError {
            line,
            message: message.into(),
        }
    }

    pub(crate) fn from_parse(line: usize, e: ParseError) -> Self {
        Self::new(line, e.to_string())
    }
}

/// Non-empty, non-comment lines with their 1-based numbers.
pub(crate) fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}

pub(crate) fn split_list(s: &str) -> Vec<String> {
    s.split(',')
        .map(|v| v.trim().to_string())
        .filter(|v| !v.is_empty())
        .collect()
}

impl IdealPresentation {
    pub fn new(ring: &Arc<PolyRing>, generators: Vec<Polynomial>) -> Result<Self, PolyError> {
        for g in &generators {
            if !g.same_ring(&Polynomial::zero(ring)) {
                return Err(PolyError::RingMismatch);
            }
        }
        Ok(IdealPresentation {
            ring: ring.clone(),
            generators,
        })
    }

    /// Parse each string as a generator in a fresh ring on `vars`.
    pub fn from_strings(
        vars: &[&str],
        field: FieldSpec,
        generators: &[&str],
    ) -> Result<Self, PolyError> {
        let ring = PolyRing::new(vars.iter().copied(), field)?;
        let gens = generators
            .iter()
            .map(|g| parse_polynomial(g, &ring))
            .collect::<Result<Vec<_>, _>>()?;
        Self::new(&ring, gens)
    }

    pub fn ring(&self) -> &Arc<PolyRing> {
        &self.ring
    }

    pub fn field(&self) -> FieldSpec {
        self.ring.field()
    }

    pub fn nvars(&self) -> usize {
        self.ring.nvars()
    }

    pub fn generators(&self) -> &[Polynomial] {
        &self.generators
    }

    pub fn with_generators(&self, extra: impl IntoIterator<Item = Polynomial>) -> Self {
        let mut generators = self.generators.clone();
        generators.extend(extra);
        IdealPresentation {
            ring: self.ring.clone(),
            generators,
        }
    }

    /// Read the ideal text format:
    ///
    /// ```text
    /// vars: x,y,z
    /// char: 0
    /// x^2 + y^3
    /// ```
    ///
    /// Blank lines and lines starting with `#` are skipped.
    pub fn parse_text(text: &str) -> Result<Self, TextFormatError> {
        let mut lines = content_lines(text);
        let (ln, first) = lines
            .next()
            .ok_or_else(|| TextFormatError::new(1, "missing `vars:` line"))?;
        let vars = first
            .strip_prefix("vars:")
            .ok_or_else(|| TextFormatError::new(ln, "expected `vars: <names>`"))?;
        let vars = split_list(vars);
        let (ln2, second) = lines
            .next()
            .ok_or_else(|| TextFormatError::new(ln + 1, "missing `char:` line"))?;
        let ch = second
            .strip_prefix("char:")
            .ok_or_else(|| TextFormatError::new(ln2, "expected `char: <0 or prime>`"))?
            .trim();
        let ch: u64 = ch
            .parse()
            .map_err(|_| TextFormatError::new(ln2, format!("bad characteristic `{ch}`")))?;
        let field = FieldSpec::new(ch).map_err(|e| TextFormatError::new(ln2, e.to_string()))?;
        let ring =
            PolyRing::new(vars, field).map_err(|e| TextFormatError::new(ln, e.to_string()))?;
        let mut generators = Vec::new();
        for (n, line) in lines {
            generators.push(
                parse_polynomial(line, &ring).map_err(|e| TextFormatError::from_parse(n, e))?,
            );
        }
        Ok(IdealPresentation { ring, generators })
    }

    pub fn to_text(&self) -> String {
        self.to_string()
    }

    /// The generators together with all `codim × codim` minors of the
    /// Jacobian matrix, minors enumerated by row subset then column subset
    /// in lexicographic order.
    pub fn jacobian_generators(&self, codim: usize) -> Result<IdealPresentation, PolyError> {
        let r = self.generators.len();
        let n = self.nvars();
        if codim == 0 || codim > r || codim > n {
            return Err(PolyError::BadCodimension {
                codim,
                generators: r,
                nvars: n,
            });
        }
        let jac: Vec<Vec<Polynomial>> = self
            .generators
            .iter()
            .map(|f| (0..n).map(|j| f.derivative(j)).collect())
            .collect();
        let mut out = self.generators.clone();
        for rows in combinations(r, codim) {
            for cols in combinations(n, codim) {
                let sub: Vec<Vec<Polynomial>> = rows
                    .iter()
                    .map(|&i| cols.iter().map(|&j| jac[i][j].clone()).collect())
                    .collect();
                out.push(determinant(&sub, &self.ring));
            }
        }
        Ok(IdealPresentation {
            ring: self.ring.clone(),
            generators: out,
        })
    }
}

impl fmt::Display for IdealPresentation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "vars: {}", self.ring.vars().join(","))?;
        writeln!(f, "char: {}", self.field().characteristic())?;
        for g in &self.generators {
            writeln!(f, "{g}")?;
        }
        Ok(())
    }
}

/// k-subsets of `0..n` in lexicographic order.
pub(crate) fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

// Laplace expansion along the first row; the matrices are codim × codim.
fn determinant(m: &[Vec<Polynomial>], ring: &Arc<PolyRing>) -> Polynomial {
    match m.len() {
        0 => Polynomial::one(ring),
        1 => m[0][0].clone(),
        k => {
            let mut acc = Polynomial::zero(ring);
            for c in 0..k {
                if m[0][c].is_zero() {
                    continue;
                }
                let minor: Vec<Vec<Polynomial>> = m[1..]
                    .iter()
                    .map(|row| {
                        row.iter()
                            .enumerate()
                            .filter(|(j, _)| *j != c)
                            .map(|(_, p)| p.clone())
                            .collect()
                    })
                    .collect();
                let term = &m[0][c] * &determinant(&minor, ring);
                acc = if c % 2 == 0 {
                    &acc + &term
                } else {
                    &acc - &term
                };
            }
            acc
        }
    }
}
