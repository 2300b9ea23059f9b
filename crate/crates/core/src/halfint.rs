//! Exact half-integer scalars used as exponents of `ν`.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Neg, Sub};
use std::str::FromStr;

use crate::error::Error;

/// Whether a half-integer is an integer or lies in `ℤ + 1/2`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Parity {
    Integer,
    HalfInteger,
}

/// Parity of a sum: integer + integer and half + half are integers.
impl std::ops::Add for Parity {
    type Output = Parity;

    fn add(self, other: Parity) -> Parity {
        if self == other {
            Parity::Integer
        } else {
            Parity::HalfInteger
        }
    }
}

impl Parity {
    /// Parity of the Jordan-block sizes `a` attached to this parity class:
    /// `(a - 1)/2` is an integer exactly when `a` is odd.
    pub fn block_is_odd(self) -> bool {
        self == Parity::Integer
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Parity::Integer => "integer",
            Parity::HalfInteger => "half-integer",
        }
    }
}

impl FromStr for Parity {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "integer" | "int" => Ok(Parity::Integer),
            "half-integer" | "half" => Ok(Parity::HalfInteger),
            other => Err(Error::Parse(format!("unknown parity `{other}`"))),
        }
    }
}

/// A number of the form `n/2`, stored as the integer `n`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Default)]
pub struct HalfInt {
    doubled: i64,
}

impl HalfInt {
    pub const ZERO: HalfInt = HalfInt { doubled: 0 };
    pub const HALF: HalfInt = HalfInt { doubled: 1 };
    pub const ONE: HalfInt = HalfInt { doubled: 2 };

    pub const fn from_doubled(doubled: i64) -> Self {
        HalfInt { doubled }
    }

    pub const fn from_int(n: i64) -> Self {
        HalfInt { doubled: 2 * n }
    }

    pub const fn doubled(self) -> i64 {
        self.doubled
    }

    pub fn parity(self) -> Parity {
        if self.doubled.rem_euclid(2) == 0 {
            Parity::Integer
        } else {
            Parity::HalfInteger
        }
    }

    pub fn is_integer(self) -> bool {
        self.parity() == Parity::Integer
    }

    /// The integer value, if this is an integer.
    pub fn to_int(self) -> Option<i64> {
        self.is_integer().then_some(self.doubled / 2)
    }

    pub fn checked_add(self, other: HalfInt) -> Result<HalfInt, Error> {
        self.doubled
            .checked_add(other.doubled)
            .map(HalfInt::from_doubled)
            .ok_or(Error::Overflow)
    }

    pub fn checked_sub(self, other: HalfInt) -> Result<HalfInt, Error> {
        self.doubled
            .checked_sub(other.doubled)
            .map(HalfInt::from_doubled)
            .ok_or(Error::Overflow)
    }

    pub fn checked_neg(self) -> Result<HalfInt, Error> {
        self.doubled
            .checked_neg()
            .map(HalfInt::from_doubled)
            .ok_or(Error::Overflow)
    }

    /// `(self + other) / 2`, defined when the sum is an integer.
    pub fn midpoint(self, other: HalfInt) -> Option<HalfInt> {
        let sum = self.doubled.checked_add(other.doubled)?;
        (sum % 2 == 0).then_some(HalfInt::from_doubled(sum / 2))
    }

    pub fn abs(self) -> HalfInt {
        HalfInt::from_doubled(self.doubled.abs())
    }

    pub fn is_positive(self) -> bool {
        self.doubled > 0
    }

    pub fn is_negative(self) -> bool {
        self.doubled < 0
    }
}

pub fn halfint_add(a: HalfInt, b: HalfInt) -> HalfInt {
    a + b
}

impl Add for HalfInt {
    type Output = HalfInt;

    fn add(self, rhs: HalfInt) -> HalfInt {
        self.checked_add(rhs).expect("half-integer overflow")
    }
}

impl Sub for HalfInt {
    type Output = HalfInt;

    fn sub(self, rhs: HalfInt) -> HalfInt {
        self.checked_sub(rhs).expect("half-integer overflow")
    }
}

impl Neg for HalfInt {
    type Output = HalfInt;

    fn neg(self) -> HalfInt {
        self.checked_neg().expect("half-integer overflow")
    }
}

impl Ord for HalfInt {
    fn cmp(&self, other: &Self) -> Ordering {
        self.doubled.cmp(&other.doubled)
    }
}

impl PartialOrd for HalfInt {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl From<i64> for HalfInt {
    fn from(n: i64) -> Self {
        HalfInt::from_int(n)
    }
}

impl fmt::Display for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_int() {
            Some(n) => write!(f, "{n}"),
            None => write!(f, "{}/2", self.doubled),
        }
    }
}

impl fmt::Debug for HalfInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfInt {
    type Err = Error;

    /// Accepts `n` or `p/2` with `p` odd (reduced form).
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let s = s.trim();
        let bad = || Error::Parse(format!("invalid half-integer `{s}`"));
        match s.split_once('/') {
            None => {
                let n: i64 = s.parse().map_err(|_| bad())?;
                n.checked_mul(2)
                    .map(HalfInt::from_doubled)
                    .ok_or(Error::Overflow)
            }
            Some((num, den)) => {
                if den.trim() != "2" {
                    return Err(bad());
                }
                let p: i64 = num.trim().parse().map_err(|_| bad())?;
                if p % 2 == 0 {
                    // "4/2" is not reduced
                    return Err(bad());
                }
                Ok(HalfInt::from_doubled(p))
            }
        }
    }
}

impl serde::Serialize for HalfInt {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> serde::Deserialize<'de> for HalfInt {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}
