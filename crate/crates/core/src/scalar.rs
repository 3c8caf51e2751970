//! Exact coordinates.
//!
//! Integer variants only ever add and subtract, so the common case is a
//! machine integer. Anything that overflows `i64` or is not an integer is
//! promoted to an arbitrary-precision rational. The representation is
//! canonical: a value that fits in `Small` is never stored as `Big`, which
//! keeps the derived `Eq`/`Hash` consistent with numeric equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, ToPrimitive, Zero};
use serde::de::{self, Visitor};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, PartialEq, Eq, Hash)]
pub enum Scalar {
    Small(i64),
    Big(Box<BigRational>),
}

impl Scalar {
    pub const ZERO: Scalar = Scalar::Small(0);
    pub const ONE: Scalar = Scalar::Small(1);

    pub fn from_ratio(value: BigRational) -> Self {
        if value.is_integer() {
            if let Some(v) = value.numer().to_i64() {
                return Scalar::Small(v);
            }
        }
        Scalar::Big(Box::new(value))
    }

    /// `numer / denom`; panics on a zero denominator.
    pub fn ratio(numer: i64, denom: i64) -> Self {
        Scalar::from_ratio(BigRational::new(numer.into(), denom.into()))
    }

    pub fn to_ratio(&self) -> BigRational {
        match self {
            Scalar::Small(v) => BigRational::from_integer(BigInt::from(*v)),
            Scalar::Big(r) => (**r).clone(),
        }
    }

    pub fn is_integer(&self) -> bool {
        match self {
            Scalar::Small(_) => true,
            Scalar::Big(r) => r.is_integer(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Scalar::Small(0))
    }

    pub fn is_negative(&self) -> bool {
        match self {
            Scalar::Small(v) => *v < 0,
            Scalar::Big(r) => r.is_negative(),
        }
    }

    pub fn is_positive(&self) -> bool {
        match self {
            Scalar::Small(v) => *v > 0,
            Scalar::Big(r) => r.is_positive(),
        }
    }

    pub fn as_i64(&self) -> Option<i64> {
        match self {
            Scalar::Small(v) => Some(*v),
            Scalar::Big(_) => None,
        }
    }

    /// Largest integer not exceeding the value.
    pub fn floor(&self) -> Scalar {
        match self {
            Scalar::Small(_) => self.clone(),
            Scalar::Big(r) => Scalar::from_ratio(r.floor()),
        }
    }

    pub fn add(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(s) = a.checked_add(*b) {
                return Scalar::Small(s);
            }
        }
        Scalar::from_ratio(self.to_ratio() + other.to_ratio())
    }

    pub fn sub(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(s) = a.checked_sub(*b) {
                return Scalar::Small(s);
            }
        }
        Scalar::from_ratio(self.to_ratio() - other.to_ratio())
    }

    pub fn mul(&self, other: &Scalar) -> Scalar {
        if let (Scalar::Small(a), Scalar::Small(b)) = (self, other) {
            if let Some(s) = a.checked_mul(*b) {
                return Scalar::Small(s);
            }
        }
        Scalar::from_ratio(self.to_ratio() * other.to_ratio())
    }
}

impl From<i64> for Scalar {
    fn from(v: i64) -> Self {
        Scalar::Small(v)
    }
}

impl From<BigInt> for Scalar {
    fn from(v: BigInt) -> Self {
        Scalar::from_ratio(BigRational::from_integer(v))
    }
}

impl Default for Scalar {
    fn default() -> Self {
        Scalar::ZERO
    }
}

impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (Scalar::Small(a), Scalar::Small(b)) => a.cmp(b),
            _ => self.to_ratio().cmp(&other.to_ratio()),
        }
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Scalar::Small(v) => write!(f, "{v}"),
            Scalar::Big(r) if r.is_integer() => write!(f, "{}", r.numer()),
            Scalar::Big(r) => write!(f, "{}/{}", r.numer(), r.denom()),
        }
    }
}

impl fmt::Debug for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("invalid exact number `{0}`")]
pub struct ParseScalarError(pub String);

impl FromStr for Scalar {
    type Err = ParseScalarError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let err = || ParseScalarError(s.to_string());
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Scalar::Small(v));
        }
        match s.split_once('/') {
            Some((n, d)) => {
                let n: BigInt = n.trim().parse().map_err(|_| err())?;
                let d: BigInt = d.trim().parse().map_err(|_| err())?;
                if d.is_zero() {
                    return Err(err());
                }
                Ok(Scalar::from_ratio(BigRational::new(n, d)))
            }
            None => {
                let n: BigInt = s.parse().map_err(|_| err())?;
                Ok(Scalar::from(n))
            }
        }
    }
}

// Integers that fit in i64 travel as JSON numbers, everything else as a
// "p" or "p/q" string.
impl Serialize for Scalar {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        match self {
            Scalar::Small(v) => serializer.serialize_i64(*v),
            Scalar::Big(_) => serializer.serialize_str(&self.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Scalar {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct ScalarVisitor;

        impl Visitor<'_> for ScalarVisitor {
            type Value = Scalar;

            fn expecting(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
                f.write_str("an integer or a \"p/q\" string")
            }

            fn visit_i64<E: de::Error>(self, v: i64) -> Result<Scalar, E> {
                Ok(Scalar::Small(v))
            }

            fn visit_u64<E: de::Error>(self, v: u64) -> Result<Scalar, E> {
                Ok(Scalar::from(BigInt::from(v)))
            }

            fn visit_str<E: de::Error>(self, v: &str) -> Result<Scalar, E> {
                v.parse().map_err(E::custom)
            }
        }

        deserializer.deserialize_any(ScalarVisitor)
    }
}
