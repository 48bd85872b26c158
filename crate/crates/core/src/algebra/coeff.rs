use std::fmt::Debug;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

/// Zero-detection threshold for floating-point coefficients.
pub const FLOAT_ZERO_TOL: f64 = 1e-12;

/// Coefficient field of the polynomial algebra.
///
/// Implemented exactly for [`BigRational`] and approximately for `f64`,
/// where magnitudes below [`FLOAT_ZERO_TOL`] count as zero and are dropped.
pub trait Coeff:
    Clone
    + Debug
    + PartialEq
    + Send
    + Sync
    + 'static
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn zero() -> Self;
    fn one() -> Self;
    fn from_int(v: i64) -> Self;
    fn is_zero(&self) -> bool;
    fn is_negative(&self) -> bool;
    fn to_f64(&self) -> f64;
    /// Parses an unsigned literal such as `3`, `0.25` or `1e-3`.
    fn parse_literal(s: &str) -> Option<Self>;
    /// Text form of a non-negative value that [`Coeff::parse_literal`]
    /// (possibly followed by a division) reads back exactly.
    fn render(&self) -> String;
}

impl Coeff for BigRational {
    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn from_int(v: i64) -> Self {
        BigRational::from_integer(BigInt::from(v))
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn is_negative(&self) -> bool {
        Signed::is_negative(self)
    }
    fn to_f64(&self) -> f64 {
        ToPrimitive::to_f64(self).unwrap_or(f64::NAN)
    }
    fn parse_literal(s: &str) -> Option<Self> {
        let (mantissa, exp) = match s.find(['e', 'E']) {
            Some(i) => (&s[..i], s[i + 1..].parse::<i32>().ok()?),
            None => (s, 0),
        };
        let (int_part, frac_part) = match mantissa.split_once('.') {
            Some((a, b)) => (a, b),
            None => (mantissa, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return None;
        }
        if !int_part
            .chars()
            .chain(frac_part.chars())
            .all(|c| c.is_ascii_digit())
        {
            return None;
        }
        let digits: BigInt = format!("{int_part}{frac_part}0").parse().ok()?;
        let scale = exp - frac_part.len() as i32 - 1;
        let ten = BigRational::from_integer(BigInt::from(10));
        let mut v = BigRational::from_integer(digits);
        if scale >= 0 {
            v *= num_traits::pow(ten, scale as usize);
        } else {
            v /= num_traits::pow(ten, (-scale) as usize);
        }
        Some(v)
    }
    fn render(&self) -> String {
        let numer = self.numer().abs();
        let denom = self.denom().clone();
        if denom.is_one() {
            return numer.to_string();
        }
        // Terminating decimal when the denominator is 2^a 5^b.
        let mut d = denom.clone();
        let (two, five) = (BigInt::from(2), BigInt::from(5));
        let mut twos = 0usize;
        let mut fives = 0usize;
        while (&d % &two).is_zero() {
            d /= &two;
            twos += 1;
        }
        while (&d % &five).is_zero() {
            d /= &five;
            fives += 1;
        }
        if !d.is_one() {
            return format!("{numer}/{denom}");
        }
        let places = twos.max(fives);
        let scaled = numer * num_traits::pow(BigInt::from(10), places) / denom;
        let s = format!("{:0>width$}", scaled.to_string(), width = places + 1);
        let (a, b) = s.split_at(s.len() - places);
        format!("{a}.{b}")
    }
}

impl Coeff for f64 {
    fn zero() -> Self {
        0.0
    }
    fn one() -> Self {
        1.0
    }
    fn from_int(v: i64) -> Self {
        v as f64
    }
    fn is_zero(&self) -> bool {
        self.abs() < FLOAT_ZERO_TOL
    }
    fn is_negative(&self) -> bool {
        *self < 0.0
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn parse_literal(s: &str) -> Option<Self> {
        if s.starts_with(['+', '-']) {
            return None;
        }
        s.parse().ok()
    }
    fn render(&self) -> String {
        format!("{:?}", self.abs())
    }
}

/// Converts an `f64` to the rational with the same value.
pub fn rational_from_f64(v: f64) -> Option<BigRational> {
    BigRational::from_float(v)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(n: i64, d: i64) -> BigRational {
        BigRational::new(BigInt::from(n), BigInt::from(d))
    }

    #[test]
    fn rational_literals() {
        assert_eq!(BigRational::parse_literal("0.5"), Some(q(1, 2)));
        assert_eq!(BigRational::parse_literal("3"), Some(q(3, 1)));
        assert_eq!(BigRational::parse_literal("2.5e-1"), Some(q(1, 4)));
        assert_eq!(BigRational::parse_literal("12E2"), Some(q(1200, 1)));
        assert_eq!(BigRational::parse_literal(".3"), Some(q(3, 10)));
        assert_eq!(BigRational::parse_literal("x"), None);
        assert_eq!(BigRational::parse_literal("."), None);
    }

    #[test]
    fn rational_render_round_trips() {
        for v in [
            q(1, 2),
            q(3, 1),
            q(1, 3),
            q(7, 40),
            q(1, 1000),
            q(22, 7),
            q(0, 1),
        ] {
            let s = v.render();
            let back = match s.split_once('/') {
                Some((a, b)) => {
                    BigRational::parse_literal(a).unwrap() / BigRational::parse_literal(b).unwrap()
                }
                None => BigRational::parse_literal(&s).unwrap(),
            };
            assert_eq!(back, v, "{s}");
        }
        assert_eq!(q(7, 40).render(), "0.175");
        assert_eq!(q(1, 3).render(), "1/3");
        assert_eq!(q(-5, 2).render(), "2.5");
    }

    #[test]
    fn float_zero_threshold() {
        assert!(Coeff::is_zero(&1e-13));
        assert!(!Coeff::is_zero(&1e-11));
        assert_eq!(<f64 as Coeff>::parse_literal("1e-3"), Some(1e-3));
        assert_eq!(0.1f64.render(), "0.1");
    }
}
