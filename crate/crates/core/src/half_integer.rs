//! Exact half-integer arithmetic on the doubled-integer lattice.
//!
//! Angular momenta and projections are integers or half-odd-integers. Storing
//! twice the value keeps every operation in `i64` arithmetic: parity checks
//! become evenness checks and range endpoints never leave the lattice.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, AddAssign, Neg, Sub, SubAssign};
use std::str::FromStr;

use thiserror::Error;

/// A half-integer stored as twice its value.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct HalfInt {
    twice: i64,
}

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum HalfIntError {
    #[error("`{0}` is not a half-integer: expected an integer, a /2 fraction or a .0/.5 decimal")]
    Parse(String),
    #[error("value {0} is not an integer multiple of 1/2 after halving")]
    Parity(HalfInt),
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { twice: 0 };
    pub const HALF: HalfInt = HalfInt { twice: 1 };
    pub const ONE: HalfInt = HalfInt { twice: 2 };

    /// Builds the value `twice / 2`.
    pub const fn from_twice(twice: i64) -> Self {
        HalfInt { twice }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { twice: 2 * n }
    }

    pub const fn twice(self) -> i64 {
        self.twice
    }

    pub const fn is_integer(self) -> bool {
        self.twice % 2 == 0
    }

    pub const fn is_negative(self) -> bool {
        self.twice < 0
    }

    pub fn abs(self) -> Self {
        HalfInt {
            twice: self.twice.abs(),
        }
    }

    pub fn signum(self) -> i64 {
        self.twice.signum()
    }

    /// Exact halving; errors when the result would leave the lattice.
    pub fn try_half(self) -> Result<Self, HalfIntError> {
        if self.twice % 2 == 0 {
            Ok(HalfInt {
                twice: self.twice / 2,
            })
        } else {
            Err(HalfIntError::Parity(self))
        }
    }

    /// Integer value, if this is one.
    pub fn as_integer(self) -> Option<i64> {
        if self.is_integer() {
            Some(self.twice / 2)
        } else {
            None
        }
    }

    pub fn to_f64(self) -> f64 {
        self.twice as f64 / 2.0
    }

    /// x(x+1), exact in binary64 for any lattice value met in practice.
    pub fn squared_plus_self(self) -> f64 {
        (self.twice as f64) * (self.twice as f64 + 2.0) / 4.0
    }

    /// Decimal rendering `"2.0"` / `"-1.5"`, safe for file names and CSV.
    pub fn to_decimal_string(self) -> String {
        let sign = if self.twice < 0 { "-" } else { "" };
        let mag = self.twice.unsigned_abs();
        format!(
            "{}{}.{}",
            sign,
            mag / 2,
            if mag % 2 == 1 { "5" } else { "0" }
        )
    }

    /// Inclusive lattice walk from `self` to `hi` in unit steps.
    pub fn range_to(self, hi: HalfInt) -> impl Iterator<Item = HalfInt> {
        (self.twice..=hi.twice).step_by(2).map(HalfInt::from_twice)
    }
}

impl Add for HalfInt {
    type Output = HalfInt;
    fn add(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice + rhs.twice,
        }
    }
}

impl AddAssign for HalfInt {
    fn add_assign(&mut self, rhs: HalfInt) {
        self.twice += rhs.twice;
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;
    fn sub(self, rhs: HalfInt) -> HalfInt {
        HalfInt {
            twice: self.twice - rhs.twice,
        }
    }
}

impl SubAssign for HalfInt {
    fn sub_assign(&mut self, rhs: HalfInt) {
        self.twice -= rhs.twice;
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;
    fn neg(self) -> HalfInt {
        HalfInt { twice: -self.twice }
    }
}

impl Sum for HalfInt {
    fn sum<I: Iterator<Item = HalfInt>>(iter: I) -> HalfInt {
        iter.fold(HalfInt::ZERO, |acc, v| acc + v)
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.twice % 2 == 0 {
            write!(f, "{}", self.twice / 2)
        } else {
            write!(f, "{}/2", self.twice)
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self)
    }
}

impl FromStr for HalfInt {
    type Err = HalfIntError;

    /// Accepts `"3"`, `"-3"`, `"3/2"`, `"1.5"`, `"-0.5"`, `"2.0"`.
    /// Fractions must have denominator 2; decimals must end in `.0` or `.5`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || HalfIntError::Parse(s.to_string());
        let t = s.trim();
        if let Some((num, den)) = t.split_once('/') {
            if den.trim() != "2" {
                return Err(err());
            }
            let n: i64 = num.trim().parse().map_err(|_| err())?;
            return Ok(HalfInt::from_twice(n));
        }
        if let Some((int, frac)) = t.split_once('.') {
            let negative = t.trim_start().starts_with('-');
            let whole: i64 = if int.is_empty() || int == "-" || int == "+" {
                0
            } else {
                int.parse().map_err(|_| err())?
            };
            let half = match frac {
                "0" | "00" => 0,
                "5" | "50" => 1,
                _ => return Err(err()),
            };
            let mag = 2 * whole.abs() + half;
            return Ok(HalfInt::from_twice(if negative { -mag } else { mag }));
        }
        let n: i64 = t.parse().map_err(|_| err())?;
        Ok(HalfInt::from_int(n))
    }
}

/// max of two half-integers.
pub fn max(a: HalfInt, b: HalfInt) -> HalfInt {
    if a >= b {
        a
    } else {
        b
    }
}

/// min of two half-integers.
pub fn min(a: HalfInt, b: HalfInt) -> HalfInt {
    if a <= b {
        a
    } else {
        b
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn arithmetic_closes_over_lattice() {
        let a = HalfInt::from_twice(3); // 3/2
        let b = HalfInt::from_int(2);
        assert_eq!((a + b).twice(), 7);
        assert_eq!((a - b).twice(), -1);
        assert_eq!((-a).twice(), -3);
        assert!(b > a);
        assert!(a.abs() == a && (-a).abs() == a);
    }

    #[test]
    fn parse_accepted_forms() {
        for (s, t) in [
            ("3", 6),
            ("-3", -6),
            ("3/2", 3),
            ("-1/2", -1),
            ("1.5", 3),
            ("-0.5", -1),
            ("2.0", 4),
            ("0", 0),
            (".5", 1),
        ] {
            assert_eq!(s.parse::<HalfInt>().unwrap().twice(), t, "token {s}");
        }
    }

    #[test]
    fn parse_rejects_off_lattice_tokens() {
        for s in ["2/4", "1/3", "0.25", "1.51", "x", "", "3/ 2x", "1.05"] {
            assert!(s.parse::<HalfInt>().is_err(), "token {s}");
        }
    }

    #[test]
    fn decimal_string_is_filename_safe() {
        assert_eq!(HalfInt::from_twice(-3).to_decimal_string(), "-1.5");
        assert_eq!(HalfInt::from_int(2).to_decimal_string(), "2.0");
        assert_eq!(HalfInt::ZERO.to_decimal_string(), "0.0");
    }

    #[test]
    fn range_walk_is_inclusive_unit_step() {
        let lo = HalfInt::from_twice(-3);
        let hi = HalfInt::from_twice(3);
        let walked: Vec<i64> = lo.range_to(hi).map(|h| h.twice()).collect();
        assert_eq!(walked, vec![-3, -1, 1, 3]);
    }

    proptest! {
        #[test]
        fn display_parse_round_trip(t in -10_000i64..10_000) {
            let h = HalfInt::from_twice(t);
            prop_assert_eq!(h.to_string().parse::<HalfInt>().unwrap(), h);
            prop_assert_eq!(h.to_decimal_string().parse::<HalfInt>().unwrap(), h);
        }

        #[test]
        fn squared_plus_self_matches_rational(t in -2_000i64..2_000) {
            let h = HalfInt::from_twice(t);
            let expected = (t as f64 / 2.0) * (t as f64 / 2.0 + 1.0);
            prop_assert_eq!(h.squared_plus_self(), expected);
        }
    }
}
