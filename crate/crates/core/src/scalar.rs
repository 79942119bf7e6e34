//! Exact dyadic rationals `n / 2^k`.
//!
//! Every coordinate that shows up in the constructions is an integer or a
//! half-integer, and products of such values only ever introduce further powers
//! of two in the denominator. [`HalfRational`] keeps those values exact with a
//! checked `i128` numerator. Operator impls panic on overflow; the `checked_*`
//! methods surface it as an error instead.

use std::cmp::Ordering;
use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// Largest supported `k` in `n / 2^k`.
pub const MAX_LOG2_DENOMINATOR: u32 = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ScalarError {
    #[error("arithmetic overflow in exact scalar")]
    Overflow,
    #[error("denominator 2^{0} exceeds the supported bound")]
    DenominatorTooLarge(u32),
    #[error("cannot parse {0:?} as a dyadic rational (expected \"n\" or \"n/2^k\")")]
    Parse(String),
    #[error("{0} is not an integer")]
    NotIntegral(HalfRational),
}

/// Exact scalar `numerator / 2^log2_denominator` in canonical form
/// (odd numerator, or denominator 1).
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct HalfRational {
    numerator: i128,
    log2_denominator: u32,
}

impl HalfRational {
    pub const ZERO: Self = Self { numerator: 0, log2_denominator: 0 };
    pub const ONE: Self = Self { numerator: 1, log2_denominator: 0 };
    pub const HALF: Self = Self { numerator: 1, log2_denominator: 1 };

    pub fn new(numerator: i128, log2_denominator: u32) -> Result<Self, ScalarError> {
        if log2_denominator > MAX_LOG2_DENOMINATOR {
            return Err(ScalarError::DenominatorTooLarge(log2_denominator));
        }
        Ok(Self::canonical(numerator, log2_denominator))
    }

    pub const fn from_int(n: i128) -> Self {
        Self { numerator: n, log2_denominator: 0 }
    }

    /// `n / 2`, the coordinate form used for half-integer parameters.
    pub fn halves(n: i128) -> Self {
        Self::canonical(n, 1)
    }

    fn canonical(mut numerator: i128, mut k: u32) -> Self {
        if numerator == 0 {
            return Self::ZERO;
        }
        let tz = numerator.trailing_zeros().min(k);
        numerator >>= tz;
        k -= tz;
        Self { numerator, log2_denominator: k }
    }

    pub fn numerator(&self) -> i128 {
        self.numerator
    }

    pub fn log2_denominator(&self) -> u32 {
        self.log2_denominator
    }

    pub fn is_zero(&self) -> bool {
        self.numerator == 0
    }

    pub fn is_integer(&self) -> bool {
        self.log2_denominator == 0
    }

    pub fn to_integer(&self) -> Result<i128, ScalarError> {
        if self.is_integer() {
            Ok(self.numerator)
        } else {
            Err(ScalarError::NotIntegral(*self))
        }
    }

    pub fn abs(&self) -> Self {
        Self { numerator: self.numerator.abs(), ..*self }
    }

    pub fn signum(&self) -> i32 {
        self.numerator.signum() as i32
    }

    /// Numerator after rescaling to denominator `2^k` (`k >= log2_denominator`).
    fn scaled_numerator(&self, k: u32) -> Result<i128, ScalarError> {
        let shift = k - self.log2_denominator;
        if shift >= 127 {
            return if self.numerator == 0 { Ok(0) } else { Err(ScalarError::Overflow) };
        }
        self.numerator
            .checked_mul(1i128 << shift)
            .ok_or(ScalarError::Overflow)
    }

    pub fn checked_add(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let k = self.log2_denominator.max(rhs.log2_denominator);
        let n = self
            .scaled_numerator(k)?
            .checked_add(rhs.scaled_numerator(k)?)
            .ok_or(ScalarError::Overflow)?;
        Ok(Self::canonical(n, k))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Result<Self, ScalarError> {
        self.checked_add(&rhs.checked_neg()?)
    }

    pub fn checked_neg(&self) -> Result<Self, ScalarError> {
        Ok(Self {
            numerator: self.numerator.checked_neg().ok_or(ScalarError::Overflow)?,
            ..*self
        })
    }

    pub fn checked_mul(&self, rhs: &Self) -> Result<Self, ScalarError> {
        let n = self
            .numerator
            .checked_mul(rhs.numerator)
            .ok_or(ScalarError::Overflow)?;
        Self::new(n, self.log2_denominator + rhs.log2_denominator)
    }

    pub fn square(&self) -> Self {
        *self * *self
    }
}

impl From<i128> for HalfRational {
    fn from(n: i128) -> Self {
        Self::from_int(n)
    }
}

impl From<i64> for HalfRational {
    fn from(n: i64) -> Self {
        Self::from_int(n as i128)
    }
}

impl From<i32> for HalfRational {
    fn from(n: i32) -> Self {
        Self::from_int(n as i128)
    }
}

impl Default for HalfRational {
    fn default() -> Self {
        Self::ZERO
    }
}

impl Add for HalfRational {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs).expect("HalfRational addition overflowed")
    }
}

impl Sub for HalfRational {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs).expect("HalfRational subtraction overflowed")
    }
}

impl Mul for HalfRational {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs).expect("HalfRational multiplication overflowed")
    }
}

impl Neg for HalfRational {
    type Output = Self;
    fn neg(self) -> Self {
        self.checked_neg().expect("HalfRational negation overflowed")
    }
}

impl Sum for HalfRational {
    fn sum<I: Iterator<Item = Self>>(iter: I) -> Self {
        iter.fold(Self::ZERO, |acc, x| acc + x)
    }
}

impl Ord for HalfRational {
    fn cmp(&self, other: &Self) -> Ordering {
        let (sa, sb) = (self.numerator.signum(), other.numerator.signum());
        if sa != sb {
            return sa.cmp(&sb);
        }
        let k = self.log2_denominator.max(other.log2_denominator);
        match (self.scaled_numerator(k), other.scaled_numerator(k)) {
            (Ok(a), Ok(b)) => a.cmp(&b),
            // A rescaled numerator that overflows i128 outweighs any unscaled one.
            (Err(_), _) => sa.cmp(&0),
            (_, Err(_)) => 0.cmp(&sb),
        }
    }
}

impl PartialOrd for HalfRational {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for HalfRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.log2_denominator == 0 {
            write!(f, "{}", self.numerator)
        } else if self.log2_denominator < 127 {
            write!(f, "{}/{}", self.numerator, 1u128 << self.log2_denominator)
        } else {
            write!(f, "{}/2^{}", self.numerator, self.log2_denominator)
        }
    }
}

impl fmt::Debug for HalfRational {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl FromStr for HalfRational {
    type Err = ScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let bad = || ScalarError::Parse(s.to_string());
        let s_trim = s.trim();
        match s_trim.split_once('/') {
            None => s_trim.parse::<i128>().map(Self::from_int).map_err(|_| bad()),
            Some((num, den)) => {
                let num: i128 = num.trim().parse().map_err(|_| bad())?;
                let den: u128 = den.trim().parse().map_err(|_| bad())?;
                if den == 0 || !den.is_power_of_two() {
                    return Err(bad());
                }
                Self::new(num, den.trailing_zeros())
            }
        }
    }
}

impl Serialize for HalfRational {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for HalfRational {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct HalfVisitor;

        impl Visitor<'_> for HalfVisitor {
            type Value = HalfRational;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a string \"n\" or \"n/2^k\", or an integer")
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Self::Value, E> {
                v.parse().map_err(E::custom)
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Self::Value, E> {
                Ok(HalfRational::from(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Self::Value, E> {
                Ok(HalfRational::from_int(v as i128))
            }
        }

        deserializer.deserialize_any(HalfVisitor)
    }
}
