//! Recursive-descent parser for polynomial text.
//!
//! Grammar:
//!
//! ```text
//! expr   := ['+'|'-'] term (('+'|'-') term)*
//! term   := factor ('*' factor)*
//! factor := '-' factor | atom ('^' integer)?
//! atom   := integer ['/' integer] | identifier | '(' expr ')'
//! ```
//!
//! Multiplication must be written explicitly. `a/b` is only accepted between
//! two integer literals so that printed polynomials parse back.

use std::sync::Arc;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;
use thiserror::Error;

use super::monomial::MAX_EXPONENT;
use super::polynomial::{PolyRing, Polynomial};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{kind} at column {column}")]
pub struct ParseError {
    pub kind: ParseErrorKind,
    /// 1-based character column of the offending token.
    pub column: usize,
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ParseErrorKind {
    #[error("unknown variable `{0}`")]
    UnknownVariable(String),
    #[error("unexpected character `{0}`")]
    UnexpectedChar(char),
    #[error("unexpected end of input")]
    UnexpectedEnd,
    #[error("expected {0}")]
    Expected(&'static str),
    #[error("exponent exceeds {MAX_EXPONENT}")]
    ExponentOverflow,
    #[error("division by zero")]
    DivisionByZero,
    #[error("coefficient denominator vanishes in the field")]
    NotInField,
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    Slash,
    LParen,
    RParen,
}

fn lex(text: &str) -> Result<Vec<(Tok, usize)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let col = i + 1;
        if c.is_whitespace() {
            i += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            out.push((Tok::Int(s.parse().unwrap()), col));
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((Tok::Ident(chars[start..i].iter().collect()), col));
            continue;
        }
        let tok = match c {
            '+' => Tok::Plus,
            '-' | '−' => Tok::Minus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            '/' => Tok::Slash,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            other => {
                return Err(ParseError {
                    kind: ParseErrorKind::UnexpectedChar(other),
                    column: col,
                })
            }
        };
        out.push((tok, col));
        i += 1;
    }
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<(Tok, usize)>,
    pos: usize,
    end_col: usize,
    ring: &'a Arc<PolyRing>,
}

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.pos).map(|(t, _)| t)
    }

    fn col(&self) -> usize {
        self.toks
            .get(self.pos)
            .map(|(_, c)| *c)
            .unwrap_or(self.end_col)
    }

    fn err(&self, kind: ParseErrorKind) -> ParseError {
        ParseError {
            kind,
            column: self.col(),
        }
    }

    fn bump(&mut self) -> Option<Tok> {
        let t = self.toks.get(self.pos).map(|(t, _)| t.clone());
        self.pos += 1;
        t
    }

    fn expr(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = match self.peek() {
            Some(Tok::Plus) => {
                self.bump();
                self.term()?
            }
            Some(Tok::Minus) => {
                self.bump();
                -&self.term()?
            }
            _ => self.term()?,
        };
        loop {
            match self.peek() {
                Some(Tok::Plus) => {
                    self.bump();
                    acc = &acc + &self.term()?;
                }
                Some(Tok::Minus) => {
                    self.bump();
                    acc = &acc - &self.term()?;
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Polynomial, ParseError> {
        let mut acc = self.factor()?;
        while let Some(Tok::Star) = self.peek() {
            self.bump();
            acc = &acc * &self.factor()?;
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Polynomial, ParseError> {
        if let Some(Tok::Minus) = self.peek() {
            self.bump();
            return Ok(-&self.factor()?);
        }
        let base = self.atom()?;
        if let Some(Tok::Caret) = self.peek() {
            self.bump();
            let col = self.col();
            match self.bump() {
                Some(Tok::Int(n)) => {
                    let e: u32 = match u32::try_from(&n) {
                        Ok(e) if e <= MAX_EXPONENT => e,
                        _ => {
                            return Err(ParseError {
                                kind: ParseErrorKind::ExponentOverflow,
                                column: col,
                            })
                        }
                    };
                    if let Some(d) = base.total_degree() {
                        if d.saturating_mul(e as u64) > MAX_EXPONENT as u64 {
                            return Err(ParseError {
                                kind: ParseErrorKind::ExponentOverflow,
                                column: col,
                            });
                        }
                    }
                    return Ok(base.pow(e));
                }
                Some(_) => {
                    return Err(ParseError {
                        kind: ParseErrorKind::Expected("integer exponent"),
                        column: col,
                    })
                }
                None => {
                    return Err(ParseError {
                        kind: ParseErrorKind::UnexpectedEnd,
                        column: col,
                    })
                }
            }
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Polynomial, ParseError> {
        let col = self.col();
        match self.bump() {
            Some(Tok::Int(n)) => {
                let mut value = BigRational::from_integer(n);
                if let Some(Tok::Slash) = self.peek() {
                    self.bump();
                    let dcol = self.col();
                    match self.bump() {
                        Some(Tok::Int(d)) if d.is_zero() => {
                            return Err(ParseError {
                                kind: ParseErrorKind::DivisionByZero,
                                column: dcol,
                            })
                        }
                        Some(Tok::Int(d)) => value /= BigRational::from_integer(d),
                        _ => {
                            return Err(ParseError {
                                kind: ParseErrorKind::Expected("integer denominator"),
                                column: dcol,
                            })
                        }
                    }
                }
                if self.ring.field().normalize(&value).is_err() {
                    return Err(ParseError {
                        kind: ParseErrorKind::NotInField,
                        column: col,
                    });
                }
                Ok(Polynomial::constant(self.ring, value))
            }
            Some(Tok::Ident(name)) => match self.ring.index_of(&name) {
                Some(i) => Ok(Polynomial::var(self.ring, i)),
                None => Err(ParseError {
                    kind: ParseErrorKind::UnknownVariable(name),
                    column: col,
                }),
            },
            Some(Tok::LParen) => {
                let inner = self.expr()?;
                match self.bump() {
                    Some(Tok::RParen) => Ok(inner),
                    Some(_) => {
                        self.pos -= 1;
                        Err(self.err(ParseErrorKind::Expected("`)`")))
                    }
                    None => Err(ParseError {
                        kind: ParseErrorKind::UnexpectedEnd,
                        column: self.end_col,
                    }),
                }
            }
            Some(_) => {
                self.pos -= 1;
                Err(self.err(ParseErrorKind::Expected("a number, variable or `(`")))
            }
            None => Err(ParseError {
                kind: ParseErrorKind::UnexpectedEnd,
                column: col,
            }),
        }
    }
}

/// Parse `text` as a polynomial in `ring`.
pub fn parse_polynomial(text: &str, ring: &Arc<PolyRing>) -> Result<Polynomial, ParseError> {
    let toks = lex(text)?;
    let end_col = text.chars().count() + 1;
    let mut p = Parser {
        toks,
        pos: 0,
        end_col,
        ring,
    };
    if p.toks.is_empty() {
        return Err(ParseError {
            kind: ParseErrorKind::UnexpectedEnd,
            column: 1,
        });
    }
    let poly = p.expr()?;
    if p.pos < p.toks.len() {
        return Err(p.err(match p.peek() {
            Some(Tok::Int(_) | Tok::Ident(_) | Tok::LParen) => {
                ParseErrorKind::Expected("`*` between factors")
            }
            _ => ParseErrorKind::Expected("operator or end of input"),
        }));
    }
    Ok(poly)
}
