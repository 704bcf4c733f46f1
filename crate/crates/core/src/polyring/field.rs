//! Coefficient fields: the rationals and prime fields GF(p).

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use super::PolyError;

/// Exact coefficient field: `characteristic == 0` is ℚ, otherwise GF(p).
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FieldSpec {
    characteristic: u32,
}

impl Default for FieldSpec {
    fn default() -> Self {
        Self::RATIONALS
    }
}

impl FieldSpec {
    pub const RATIONALS: FieldSpec = FieldSpec { characteristic: 0 };

    /// Build a field specification; `p` must be 0 or a prime below 2^31.
    pub fn new(characteristic: u64) -> Result<Self, PolyError> {
        if characteristic == 0 {
            return Ok(Self::RATIONALS);
        }
        if characteristic >= 1 << 31 || !is_prime(characteristic) {
            return Err(PolyError::BadCharacteristic(characteristic));
        }
        Ok(FieldSpec {
            characteristic: characteristic as u32,
        })
    }

    pub fn characteristic(&self) -> u32 {
        self.characteristic
    }

    pub fn is_rational(&self) -> bool {
        self.characteristic == 0
    }

    /// Canonical representative of `x` in this field. Over GF(p) this is an
    /// integer in `[0, p)`; a denominator divisible by p is a division by zero.
    pub fn normalize(&self, x: &BigRational) -> Result<BigRational, PolyError> {
        if self.is_rational() {
            return Ok(x.clone());
        }
        let p = BigInt::from(self.characteristic);
        let num = x.numer().mod_floor(&p);
        let den = x.denom().mod_floor(&p);
        if den.is_zero() {
            return Err(PolyError::DivisionByZero);
        }
        let inv = mod_inverse(den.to_u64().unwrap(), self.characteristic as u64);
        let v = (num.to_u64().unwrap() * inv) % self.characteristic as u64;
        Ok(BigRational::from_integer(BigInt::from(v)))
    }

    pub(crate) fn int(&self, n: i64) -> BigRational {
        self.normalize(&BigRational::from_integer(BigInt::from(n)))
            .expect("integers are always representable")
    }

    pub(crate) fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a + b)
    }

    pub(crate) fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        self.reduce(a * b)
    }

    pub(crate) fn neg(&self, a: &BigRational) -> BigRational {
        self.reduce(-a)
    }

    // Inputs are already field elements, so over GF(p) only the integer
    // numerator can leave [0, p).
    fn reduce(&self, x: BigRational) -> BigRational {
        if self.is_rational() {
            x
        } else {
            debug_assert!(x.is_integer());
            let p = BigInt::from(self.characteristic);
            BigRational::from_integer(x.to_integer().mod_floor(&p))
        }
    }
}

impl fmt::Display for FieldSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_rational() {
            write!(f, "QQ")
        } else {
            write!(f, "GF({})", self.characteristic)
        }
    }
}

fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    let mut d = 2;
    while d * d <= n {
        if n.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

pub(crate) fn mod_inverse(a: u64, p: u64) -> u64 {
    let e = BigInt::from(a).extended_gcd(&BigInt::from(p));
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

/// Render a rational as `a` or `a/b`.
pub fn format_rational(x: &BigRational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Parse `a` or `a/b` (optionally signed) into a rational.
pub fn parse_rational(s: &str) -> Option<BigRational> {
    let s = s.trim();
    let (num, den) = match s.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (s, "1"),
    };
    let num: BigInt = num.parse().ok()?;
    let den: BigInt = den.parse().ok()?;
    if !den.is_positive() {
        return None;
    }
    Some(BigRational::new(num, den))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn characteristic_validation() {
        assert!(FieldSpec::new(0).unwrap().is_rational());
        assert_eq!(FieldSpec::new(7).unwrap().characteristic(), 7);
        assert!(FieldSpec::new(8).is_err());
        assert!(FieldSpec::new(1).is_err());
        assert!(FieldSpec::new(2147483659).is_err());
        assert!(FieldSpec::new(2147483647).is_ok());
    }

    #[test]
    fn prime_field_normalization() {
        let f = FieldSpec::new(7).unwrap();
        let half = BigRational::new(1.into(), 2.into());
        // 2 * 4 = 8 = 1 mod 7
        assert_eq!(
            f.normalize(&half).unwrap(),
            BigRational::from_integer(4.into())
        );
        let bad = BigRational::new(1.into(), 7.into());
        assert!(f.normalize(&bad).is_err());
        assert_eq!(f.int(-1), BigRational::from_integer(6.into()));
        let three = f.int(3);
        let inv = f.int(mod_inverse(3, 7) as i64);
        assert_eq!(f.mul(&three, &inv), f.int(1));
    }

    #[test]
    fn rational_text_round_trip() {
        for s in ["0", "-3", "5/6", "-1/2"] {
            assert_eq!(format_rational(&parse_rational(s).unwrap()), s);
        }
        assert_eq!(format_rational(&parse_rational("4/6").unwrap()), "2/3");
        assert!(parse_rational("1/0").is_none());
        assert!(parse_rational("x").is_none());
    }
}
