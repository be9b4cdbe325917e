//! Exact decimal scalars.
//!
//! Every coefficient, right-hand side, cost and solution component is held as an
//! exact base-10 decimal. The row classification compares `a_ii` against `b_i`
//! for strict order and equality, so binary floating point is never used on the
//! solve path.

use std::fmt;
use std::iter::Sum;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rust_decimal::prelude::*;
use rust_decimal::Decimal;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::Error;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Scalar(Decimal);

impl Scalar {
    pub const ZERO: Scalar = Scalar(Decimal::ZERO);
    pub const ONE: Scalar = Scalar(Decimal::ONE);

    pub fn from_decimal(d: Decimal) -> Self {
        Scalar(d)
    }

    /// `mantissa * 10^-scale`, e.g. `Scalar::new(66, 2)` is `0.66`.
    pub fn new(mantissa: i64, scale: u32) -> Self {
        Scalar(Decimal::new(mantissa, scale))
    }

    pub fn as_decimal(&self) -> Decimal {
        self.0
    }

    /// Number of digits after the decimal point once trailing zeros are dropped.
    pub fn precision(&self) -> u32 {
        self.0.normalize().scale()
    }

    pub fn is_unit_interval(&self) -> bool {
        self.0 >= Decimal::ZERO && self.0 <= Decimal::ONE
    }

    pub fn is_negative(&self) -> bool {
        self.0.is_sign_negative() && !self.0.is_zero()
    }

    pub fn min(self, other: Scalar) -> Scalar {
        if other < self {
            other
        } else {
            self
        }
    }

    pub fn max(self, other: Scalar) -> Scalar {
        if other > self {
            other
        } else {
            self
        }
    }

    /// Rounded rendering used for human-facing reports (half away from zero).
    pub fn display_rounded(&self, places: u32) -> String {
        let r = self
            .0
            .round_dp_with_strategy(places, RoundingStrategy::MidpointAwayFromZero);
        format!("{:.*}", places as usize, r)
    }

    /// Lossy conversion for diagnostics only.
    pub fn to_f64(&self) -> f64 {
        self.0.to_f64().unwrap_or(f64::NAN)
    }
}

impl FromStr for Scalar {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t = s.trim();
        let parsed = if t.contains(['e', 'E']) {
            Decimal::from_scientific(t)
        } else {
            Decimal::from_str_exact(t)
        };
        parsed
            .map(Scalar)
            .map_err(|e| Error::Parse(format!("invalid decimal {s:?}: {e}")))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(&self.0, f)
    }
}

impl Add for Scalar {
    type Output = Scalar;
    fn add(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 + rhs.0)
    }
}

impl Sub for Scalar {
    type Output = Scalar;
    fn sub(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 - rhs.0)
    }
}

impl Mul for Scalar {
    type Output = Scalar;
    fn mul(self, rhs: Scalar) -> Scalar {
        Scalar(self.0 * rhs.0)
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        Scalar(-self.0)
    }
}

impl Sum for Scalar {
    fn sum<I: Iterator<Item = Scalar>>(iter: I) -> Scalar {
        iter.fold(Scalar::ZERO, Add::add)
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar(Decimal::from(v))
    }
}

// Written as a decimal string so documents survive a JSON round trip exactly.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(&self.0)
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        use serde::de::Error as _;
        let v = serde_json::Value::deserialize(deserializer)?;
        let text = match v {
            serde_json::Value::String(s) => s,
            // arbitrary_precision keeps the literal digits of JSON numbers
            serde_json::Value::Number(n) => n.to_string(),
            other => return Err(D::Error::custom(format!("expected a decimal, got {other}"))),
        };
        text.parse().map_err(D::Error::custom)
    }
}

/// Componentwise helpers on vectors of scalars.
pub mod vec_ops {
    use super::Scalar;

    pub fn zeros(n: usize) -> Vec<Scalar> {
        vec![Scalar::ZERO; n]
    }

    pub fn ones(n: usize) -> Vec<Scalar> {
        vec![Scalar::ONE; n]
    }

    pub fn max_into(acc: &mut [Scalar], v: &[Scalar]) {
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = (*a).max(b);
        }
    }

    pub fn min_into(acc: &mut [Scalar], v: &[Scalar]) {
        for (a, &b) in acc.iter_mut().zip(v) {
            *a = (*a).min(b);
        }
    }

    /// `u <= v` componentwise.
    pub fn leq(u: &[Scalar], v: &[Scalar]) -> bool {
        u.iter().zip(v).all(|(a, b)| a <= b)
    }

    pub fn dot(u: &[Scalar], v: &[Scalar]) -> Scalar {
        u.iter().zip(v).map(|(&a, &b)| a * b).sum()
    }
}
