//! Exact rationals extended by a single point at `+inf`.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::ExponentError;

pub type Rational = BigRational;

/// Build a rational from a small numerator/denominator pair.
pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// `num/den` form used in every CSV and report.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

pub fn to_f64(r: &Rational) -> f64 {
    r.to_f64().unwrap_or_else(|| {
        // Very large numerators and denominators: divide in log space.
        let n = r.numer().to_f64().unwrap_or(f64::INFINITY);
        let d = r.denom().to_f64().unwrap_or(f64::INFINITY);
        n / d
    })
}

/// Parse `3/4`, `2`, `-1/2` or an exact decimal such as `0.75`.
pub fn parse_rational(text: &str) -> Result<Rational, ExponentError> {
    let t = text.trim();
    let bad = || ExponentError::Parse(text.to_string());
    if t.is_empty() {
        return Err(bad());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n = BigInt::from_str(n.trim()).map_err(|_| bad())?;
        let d = BigInt::from_str(d.trim()).map_err(|_| bad())?;
        if d.is_zero() {
            return Err(ExponentError::DivisionByZero);
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((whole, frac)) = t.split_once('.') {
        let negative = whole.trim_start().starts_with('-');
        let digits = whole.trim_start_matches(['-', '+']);
        if !frac.chars().all(|c| c.is_ascii_digit()) || frac.is_empty() {
            return Err(bad());
        }
        let w = if digits.is_empty() {
            BigInt::zero()
        } else {
            BigInt::from_str(digits).map_err(|_| bad())?
        };
        let f = BigInt::from_str(frac).map_err(|_| bad())?;
        let scale = num_traits::pow(BigInt::from(10), frac.len());
        let mut value = Rational::new(w * &scale + f, scale);
        if negative {
            value = -value;
        }
        return Ok(value);
    }
    BigInt::from_str(t)
        .map(Rational::from_integer)
        .map_err(|_| bad())
}

/// A rational or `+inf`. Used for the data exponents `m` and `sigma`, where
/// `inf` encodes bounded data.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum ExtRational {
    Finite(Rational),
    Infinity,
}

impl ExtRational {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            ExtRational::Finite(r) => Some(r),
            ExtRational::Infinity => None,
        }
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, ExtRational::Infinity)
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            ExtRational::Finite(r) => to_f64(r),
            ExtRational::Infinity => f64::INFINITY,
        }
    }

    pub fn parse(text: &str) -> Result<Self, ExponentError> {
        match text.trim() {
            "inf" | "+inf" | "infinity" | "∞" => Ok(ExtRational::Infinity),
            other => parse_rational(other).map(ExtRational::Finite),
        }
    }
}

impl From<Rational> for ExtRational {
    fn from(r: Rational) -> Self {
        ExtRational::Finite(r)
    }
}

impl fmt::Display for ExtRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ExtRational::Finite(r) => f.write_str(&fmt_rational(r)),
            ExtRational::Infinity => f.write_str("inf"),
        }
    }
}

impl PartialOrd for ExtRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for ExtRational {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ExtRational::Finite(a), ExtRational::Finite(b)) => a.cmp(b),
            (ExtRational::Finite(_), ExtRational::Infinity) => Ordering::Less,
            (ExtRational::Infinity, ExtRational::Finite(_)) => Ordering::Greater,
            (ExtRational::Infinity, ExtRational::Infinity) => Ordering::Equal,
        }
    }
}

/// Exact square root of a non-negative rational when it is a perfect square.
pub fn exact_sqrt(r: &Rational) -> Option<Rational> {
    if r.is_negative() {
        return None;
    }
    let n = r.numer().sqrt();
    let d = r.denom().sqrt();
    if &(&n * &n) == r.numer() && &(&d * &d) == r.denom() {
        Some(Rational::new(n, d))
    } else {
        None
    }
}

/// Smallest-denominator rational in the closed interval `[lo, hi]`
/// (Stern-Brocot descent). Used to turn tight floating brackets into exact
/// candidates that are then verified exactly.
pub fn simplest_between(lo: &Rational, hi: &Rational) -> Rational {
    debug_assert!(lo <= hi);
    if lo.is_negative() && hi.is_positive() || lo.is_zero() || hi.is_zero() {
        return Rational::zero();
    }
    if hi.is_negative() {
        return -simplest_between(&-hi.clone(), &-lo.clone());
    }
    let fl = lo.floor();
    if &fl == lo {
        return fl;
    }
    if fl.clone() + Rational::one() <= *hi {
        return fl + Rational::one();
    }
    // lo and hi share the integer part: recurse on reciprocals of the fractions.
    let a = lo - &fl;
    let b = hi - &fl;
    let inner = simplest_between(&b.recip(), &a.recip());
    fl + inner.recip()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_fractions_decimals_and_infinity() {
        assert_eq!(parse_rational("3/4").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("6/8").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("0.75").unwrap(), rat(3, 4));
        assert_eq!(parse_rational("-1.5").unwrap(), rat(-3, 2));
        assert_eq!(parse_rational("7").unwrap(), int(7));
        assert_eq!(ExtRational::parse("inf").unwrap(), ExtRational::Infinity);
        assert!(matches!(
            parse_rational("1/0"),
            Err(ExponentError::DivisionByZero)
        ));
        assert!(parse_rational("x").is_err());
        assert!(parse_rational("1.").is_err());
    }

    #[test]
    fn extended_order_puts_infinity_last() {
        let big = ExtRational::Finite(int(1_000_000));
        assert!(big < ExtRational::Infinity);
        assert_eq!(
            ExtRational::Infinity.cmp(&ExtRational::Infinity),
            Ordering::Equal
        );
    }

    #[test]
    fn formatting_uses_num_den() {
        assert_eq!(fmt_rational(&rat(20, 16)), "5/4");
        assert_eq!(fmt_rational(&int(3)), "3");
        assert_eq!(ExtRational::Infinity.to_string(), "inf");
    }

    #[test]
    fn simplest_rational_in_interval() {
        assert_eq!(simplest_between(&rat(17, 10), &rat(19, 10)), rat(7, 4));
        assert_eq!(simplest_between(&rat(179, 100), &rat(181, 100)), rat(9, 5));
        assert_eq!(simplest_between(&rat(333, 1000), &rat(334, 1000)), rat(1, 3));
        assert_eq!(simplest_between(&rat(2, 1), &rat(5, 2)), int(2));
        assert_eq!(simplest_between(&rat(-19, 10), &rat(-17, 10)), rat(-7, 4));
    }

    #[test]
    fn perfect_square_roots() {
        assert_eq!(exact_sqrt(&rat(9, 4)), Some(rat(3, 2)));
        assert_eq!(exact_sqrt(&rat(129, 1)), None);
        assert_eq!(exact_sqrt(&rat(-1, 4)), None);
    }
}
