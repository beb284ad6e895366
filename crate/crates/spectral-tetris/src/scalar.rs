//! Exact scalars: arbitrary-precision rationals with a float fallback.
//!
//! All spectra and radicands produced from rational input stay in
//! [`Scalar::Exact`] and every arithmetic step is exact. A [`Scalar::Float`]
//! anywhere in an expression makes the result a float; constructions then
//! carry the 1e-9/1e-12 tolerances documented on the operations that use them.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{FrameError, Result};

pub type Rational = BigRational;

/// Convenience constructor for small rationals.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

#[derive(Clone, Debug)]
pub enum Scalar {
    Exact(Rational),
    Float(f64),
}

impl Scalar {
    pub fn zero() -> Self {
        Scalar::Exact(Rational::zero())
    }

    pub fn one() -> Self {
        Scalar::Exact(Rational::one())
    }

    pub fn from_int(v: i64) -> Self {
        Scalar::Exact(Rational::from(BigInt::from(v)))
    }

    pub fn from_rat(num: i64, den: i64) -> Self {
        Scalar::Exact(rat(num, den))
    }

    pub fn is_exact(&self) -> bool {
        matches!(self, Scalar::Exact(_))
    }

    pub fn as_exact(&self) -> Option<&Rational> {
        match self {
            Scalar::Exact(r) => Some(r),
            Scalar::Float(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Scalar::Exact(r) => r.to_f64().unwrap_or(f64::NAN),
            Scalar::Float(f) => *f,
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => *f == 0.0,
        }
    }

    /// Zero test with a float slack; exact values ignore `eps`.
    pub fn is_zero_within(&self, eps: f64) -> bool {
        match self {
            Scalar::Exact(r) => r.is_zero(),
            Scalar::Float(f) => f.abs() <= eps,
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_positive(),
            Scalar::Float(f) => *f > 0.0,
        }
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_negative(),
            Scalar::Float(f) => *f < 0.0,
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Exact(r) => r.is_integer(),
            Scalar::Float(f) => f.fract() == 0.0,
        }
    }

    /// Integrality test with a float slack; exact values ignore `eps`.
    pub fn is_integer_within(&self, eps: f64) -> bool {
        match self {
            Scalar::Exact(r) => r.is_integer(),
            Scalar::Float(f) => (f - f.round()).abs() <= eps,
        }
    }

    /// Nearest integer, if the value is integral within `eps`.
    pub fn to_integer_within(&self, eps: f64) -> Option<BigInt> {
        match self {
            Scalar::Exact(r) => r.is_integer().then(|| r.to_integer()),
            Scalar::Float(f) => {
                ((f - f.round()).abs() <= eps).then(|| BigInt::from(f.round() as i64))
            }
        }
    }

    /// Fractional part in [0, 1); exact input stays exact.
    pub fn fract(&self) -> Scalar {
        match self {
            Scalar::Exact(r) => Scalar::Exact(r - r.floor()),
            Scalar::Float(f) => Scalar::Float(f - f.floor()),
        }
    }

    fn binop(
        &self,
        other: &Scalar,
        exact: impl Fn(&Rational, &Rational) -> Rational,
        float: impl Fn(f64, f64) -> f64,
    ) -> Scalar {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => Scalar::Exact(exact(a, b)),
            _ => Scalar::Float(float(self.to_f64(), other.to_f64())),
        }
    }

    pub fn div_int(&self, den: u64) -> Scalar {
        self.binop(
            &Scalar::from_int(den as i64),
            |a, b| a / b,
            |a, b| a / b,
        )
    }

    pub fn compare(&self, other: &Scalar) -> Ordering {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a.cmp(b),
            _ => self
                .to_f64()
                .partial_cmp(&other.to_f64())
                .unwrap_or(Ordering::Equal),
        }
    }

    /// Parses "a/b", an integer, or a decimal string into an exact rational.
    pub fn parse(text: &str) -> Result<Scalar> {
        let s = text.trim();
        if s.is_empty() {
            return Err(FrameError::Parse("empty scalar token".into()));
        }
        if let Some((num, den)) = s.split_once('/') {
            let num: BigInt = num
                .trim()
                .parse()
                .map_err(|_| FrameError::Parse(format!("bad numerator in {s:?}")))?;
            let den: BigInt = den
                .trim()
                .parse()
                .map_err(|_| FrameError::Parse(format!("bad denominator in {s:?}")))?;
            if den.is_zero() {
                return Err(FrameError::Parse(format!("zero denominator in {s:?}")));
            }
            return Ok(Scalar::Exact(Rational::new(num, den)));
        }
        if let Some((int_part, frac_part)) = s.split_once('.') {
            let sign = if int_part.trim_start().starts_with('-') { -1 } else { 1 };
            let int: BigInt = if int_part.is_empty() || int_part == "-" {
                BigInt::zero()
            } else {
                int_part
                    .parse()
                    .map_err(|_| FrameError::Parse(format!("bad decimal in {s:?}")))?
            };
            if frac_part.is_empty() || !frac_part.bytes().all(|b| b.is_ascii_digit()) {
                return Err(FrameError::Parse(format!("bad decimal in {s:?}")));
            }
            let digits: BigInt = frac_part
                .parse()
                .map_err(|_| FrameError::Parse(format!("bad decimal in {s:?}")))?;
            let scale = BigInt::from(10u32).pow(frac_part.len() as u32);
            let frac = Rational::new(digits * sign, scale);
            return Ok(Scalar::Exact(Rational::from(int) + frac));
        }
        let int: BigInt = s
            .parse()
            .map_err(|_| FrameError::Parse(format!("bad scalar token {s:?}")))?;
        Ok(Scalar::Exact(Rational::from(int)))
    }
}

impl PartialEq for Scalar {
    fn eq(&self, other: &Self) -> bool {
        match (self, other) {
            (Scalar::Exact(a), Scalar::Exact(b)) => a == b,
            _ => self.to_f64() == other.to_f64(),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.compare(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Exact(r) => write!(f, "{r}"),
            Scalar::Float(v) => write!(f, "{v}"),
        }
    }
}

macro_rules! scalar_binop {
    ($trait:ident, $method:ident, $op:tt) => {
        impl $trait<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, rhs: &Scalar) -> Scalar {
                self.binop(rhs, |a, b| a $op b, |a, b| a $op b)
            }
        }
        impl $trait<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, rhs: Scalar) -> Scalar {
                (&self).$method(&rhs)
            }
        }
    };
}

scalar_binop!(Add, add, +);
scalar_binop!(Sub, sub, -);
scalar_binop!(Mul, mul, *);
scalar_binop!(Div, div, /);

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_forms() {
        assert_eq!(Scalar::parse("5/2").unwrap(), Scalar::from_rat(5, 2));
        assert_eq!(Scalar::parse("3").unwrap(), Scalar::from_int(3));
        assert_eq!(Scalar::parse("1.5").unwrap(), Scalar::from_rat(3, 2));
        assert_eq!(Scalar::parse("-0.25").unwrap(), Scalar::from_rat(-1, 4));
        assert_eq!(Scalar::parse("10/3").unwrap(), Scalar::from_rat(10, 3));
        assert!(Scalar::parse("a/b").is_err());
        assert!(Scalar::parse("1/0").is_err());
        assert!(Scalar::parse("1.2.3").is_err());
    }

    #[test]
    fn exact_arithmetic_stays_exact() {
        let a = Scalar::from_rat(5, 2);
        let b = Scalar::from_rat(1, 3);
        let sum = &a + &b;
        assert_eq!(sum, Scalar::from_rat(17, 6));
        assert!(sum.is_exact());
    }

    #[test]
    fn float_contaminates() {
        let a = Scalar::from_rat(1, 2);
        let b = Scalar::Float(0.5);
        assert!(!(&a + &b).is_exact());
        assert_eq!((&a + &b).to_f64(), 1.0);
    }

    #[test]
    fn fract_and_integrality() {
        assert!(Scalar::from_int(4).is_integer());
        assert!(!Scalar::from_rat(5, 2).is_integer());
        assert_eq!(Scalar::from_rat(5, 2).fract(), Scalar::from_rat(1, 2));
        assert!(Scalar::Float(3.0 + 1e-13).is_integer_within(1e-12));
    }
}
