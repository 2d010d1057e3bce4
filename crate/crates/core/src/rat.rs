//! Exact rational scalars and their extension with the two infinities.
//!
//! Every utility value, coefficient, and sum in the engine is a [`Rat`].
//! There is no floating point anywhere: overflow and rounding are not
//! acceptable failure modes, so the numerator and denominator are
//! arbitrary-precision integers kept in lowest terms.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, AddAssign, Div, Mul, Neg, Sub, SubAssign};
use std::str::FromStr;

use num_bigint::{BigInt, Sign as BigSign};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::Error;

/// An exact rational number, always in lowest terms with a positive
/// denominator.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Rat(BigRational);

impl Rat {
    pub fn zero() -> Self {
        Rat(BigRational::zero())
    }

    pub fn one() -> Self {
        Rat(BigRational::one())
    }

    pub fn from_int(n: i64) -> Self {
        Rat(BigRational::from_integer(BigInt::from(n)))
    }

    /// `num/den` reduced to lowest terms. Panics if `den == 0`.
    pub fn new(num: i64, den: i64) -> Self {
        assert!(den != 0, "rational with zero denominator");
        Rat(BigRational::new(BigInt::from(num), BigInt::from(den)))
    }

    pub fn from_big(num: BigInt, den: BigInt) -> Self {
        assert!(!den.is_zero(), "rational with zero denominator");
        Rat(BigRational::new(num, den))
    }

    pub fn numer(&self) -> &BigInt {
        self.0.numer()
    }

    pub fn denom(&self) -> &BigInt {
        self.0.denom()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn is_integer(&self) -> bool {
        self.0.is_integer()
    }

    pub fn is_positive(&self) -> bool {
        self.0.is_positive()
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_negative()
    }

    /// -1, 0, or +1 as an [`Ordering`] against zero.
    pub fn sign(&self) -> Ordering {
        match self.0.numer().sign() {
            BigSign::Minus => Ordering::Less,
            BigSign::NoSign => Ordering::Equal,
            BigSign::Plus => Ordering::Greater,
        }
    }

    pub fn abs(&self) -> Self {
        Rat(self.0.abs())
    }

    pub fn recip(&self) -> Self {
        assert!(!self.is_zero(), "reciprocal of zero");
        Rat(self.0.recip())
    }

    /// Exact integer power, `exp` may be any signed integer. Panics on
    /// `0^e` with `e <= 0`.
    pub fn pow(&self, exp: i64) -> Self {
        if exp == 0 {
            return Rat::one();
        }
        if self.is_zero() {
            assert!(exp > 0, "zero to a non-positive power");
            return Rat::zero();
        }
        let e = exp.unsigned_abs() as u32;
        // num's Pow for BigRational takes u32 exponents; split larger
        // powers into chunks so indices beyond u32::MAX still work.
        let mut total = exp.unsigned_abs();
        let mut acc = BigRational::one();
        let base = if exp > 0 { self.0.clone() } else { self.0.recip() };
        while total > 0 {
            let chunk = total.min(u32::MAX as u64) as u32;
            acc *= num_traits::Pow::pow(&base, chunk);
            total -= chunk as u64;
        }
        let _ = e;
        Rat(acc)
    }

    /// Truncating conversion to i64 of an integral rational.
    pub fn to_integer(&self) -> Option<i64> {
        if !self.is_integer() {
            return None;
        }
        self.0.numer().to_i64()
    }

    pub fn min(self, other: Self) -> Self {
        if self <= other {
            self
        } else {
            other
        }
    }

    pub fn max(self, other: Self) -> Self {
        if self >= other {
            self
        } else {
            other
        }
    }
}

impl fmt::Display for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_integer() {
            write!(f, "{}", self.0.numer())
        } else {
            write!(f, "{}/{}", self.0.numer(), self.0.denom())
        }
    }
}

impl fmt::Debug for Rat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for Rat {
    type Err = Error;

    /// Parses `p` or `p/q` with an optional leading sign.
    fn from_str(s: &str) -> Result<Self, Error> {
        let s = s.trim();
        let bad = || Error::BadRational(s.to_string());
        match s.split_once('/') {
            None => {
                let n: BigInt = s.parse().map_err(|_| bad())?;
                Ok(Rat(BigRational::from_integer(n)))
            }
            Some((num, den)) => {
                let n: BigInt = num.trim().parse().map_err(|_| bad())?;
                let d: BigInt = den.trim().parse().map_err(|_| bad())?;
                if d.is_zero() {
                    return Err(bad());
                }
                Ok(Rat(BigRational::new(n, d)))
            }
        }
    }
}

macro_rules! forward_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Rat {
            type Output = Rat;
            fn $method(self, rhs: Rat) -> Rat {
                Rat((self.0).$method(rhs.0))
            }
        }
        impl<'a> $trait<&'a Rat> for &Rat {
            type Output = Rat;
            fn $method(self, rhs: &'a Rat) -> Rat {
                Rat((&self.0).$method(&rhs.0))
            }
        }
        impl $trait<&Rat> for Rat {
            type Output = Rat;
            fn $method(self, rhs: &Rat) -> Rat {
                Rat((self.0).$method(&rhs.0))
            }
        }
    };
}

forward_binop!(Add, add);
forward_binop!(Sub, sub);
forward_binop!(Mul, mul);
forward_binop!(Div, div);

impl AddAssign<&Rat> for Rat {
    fn add_assign(&mut self, rhs: &Rat) {
        self.0 += &rhs.0;
    }
}

impl SubAssign<&Rat> for Rat {
    fn sub_assign(&mut self, rhs: &Rat) {
        self.0 -= &rhs.0;
    }
}

impl Neg for Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-self.0)
    }
}

impl Neg for &Rat {
    type Output = Rat;
    fn neg(self) -> Rat {
        Rat(-&self.0)
    }
}

/// A rational extended with the two infinities, totally ordered as
/// `MinusInfinity < Finite(_) < PlusInfinity`.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub enum ExtRat {
    MinusInfinity,
    Finite(Rat),
    PlusInfinity,
}

impl ExtRat {
    pub fn finite(&self) -> Option<&Rat> {
        match self {
            ExtRat::Finite(r) => Some(r),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, ExtRat::Finite(_))
    }
}

impl PartialOrd for ExtRat {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRat {
    fn cmp(&self, other: &Self) -> Ordering {
        use ExtRat::*;
        match (self, other) {
            (MinusInfinity, MinusInfinity) => Ordering::Equal,
            (MinusInfinity, _) => Ordering::Less,
            (_, MinusInfinity) => Ordering::Greater,
            (PlusInfinity, PlusInfinity) => Ordering::Equal,
            (PlusInfinity, _) => Ordering::Greater,
            (_, PlusInfinity) => Ordering::Less,
            (Finite(a), Finite(b)) => a.cmp(b),
        }
    }
}

impl fmt::Display for ExtRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRat::MinusInfinity => write!(f, "-inf"),
            ExtRat::Finite(r) => write!(f, "{}", r),
            ExtRat::PlusInfinity => write!(f, "+inf"),
        }
    }
}

impl From<Rat> for ExtRat {
    fn from(r: Rat) -> Self {
        ExtRat::Finite(r)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn lowest_terms_and_display() {
        let r = Rat::new(6, -8);
        assert_eq!(r.to_string(), "-3/4");
        assert_eq!(r.denom().to_string(), "4");
        assert_eq!(Rat::new(8, 4).to_string(), "2");
    }

    #[test]
    fn parse_round_trip() {
        for s in ["0", "-2", "7/3", "-1/4", "22"] {
            let r: Rat = s.parse().unwrap();
            assert_eq!(r.to_string(), s);
        }
        assert!("1/0".parse::<Rat>().is_err());
        assert!("x".parse::<Rat>().is_err());
    }

    #[test]
    fn powers_are_exact() {
        let half = Rat::new(1, 2);
        assert_eq!(half.pow(10), Rat::new(1, 1024));
        assert_eq!(half.pow(-2), Rat::from_int(4));
        assert_eq!(Rat::from_int(4).pow(0), Rat::one());
        // large exponents stay exact
        let big = Rat::from_int(2).pow(200);
        assert_eq!(big.numer().to_string().len(), 61);
    }

    #[test]
    fn ext_rat_total_order() {
        use ExtRat::*;
        let vals = [
            MinusInfinity,
            Finite(Rat::from_int(-3)),
            Finite(Rat::zero()),
            Finite(Rat::new(1, 2)),
            PlusInfinity,
        ];
        for w in vals.windows(2) {
            assert!(w[0] < w[1]);
        }
    }
}
