//! Arbitrary-precision integers with an `i64` fast path.
//!
//! Enumeration heights stay small, so almost every value lives in the
//! `Small` variant; products of long matrix words promote to GMP integers
//! transparently.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use rug::Integer;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

#[derive(Clone, Debug)]
pub enum Int {
    Small(i64),
    /// Invariant: the value does not fit in an `i64`.
    Large(Integer),
}

impl Int {
    pub const ZERO: Int = Int::Small(0);
    pub const ONE: Int = Int::Small(1);

    fn from_big(n: Integer) -> Int {
        match n.to_i64() {
            Some(v) => Int::Small(v),
            None => Int::Large(n),
        }
    }

    pub fn to_integer(&self) -> Integer {
        match self {
            Int::Small(v) => Integer::from(*v),
            Int::Large(n) => n.clone(),
        }
    }

    pub fn to_i64(&self) -> Option<i64> {
        match self {
            Int::Small(v) => Some(*v),
            Int::Large(_) => None,
        }
    }

    pub fn to_f64(&self) -> f64 {
        match self {
            Int::Small(v) => *v as f64,
            Int::Large(n) => n.to_f64(),
        }
    }

    pub fn is_zero(&self) -> bool {
        matches!(self, Int::Small(0))
    }

    pub fn is_one(&self) -> bool {
        matches!(self, Int::Small(1))
    }

    pub fn signum(&self) -> i32 {
        match self {
            Int::Small(v) => v.signum() as i32,
            Int::Large(n) => n.cmp0() as i32,
        }
    }

    pub fn abs(&self) -> Int {
        if self.signum() < 0 {
            -self
        } else {
            self.clone()
        }
    }

    pub fn gcd(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *a != i64::MIN && *b != i64::MIN => {
                let (mut a, mut b) = (a.unsigned_abs(), b.unsigned_abs());
                while b != 0 {
                    let t = a % b;
                    a = b;
                    b = t;
                }
                Int::from_big(Integer::from(a))
            }
            _ => Int::from_big(self.to_integer().gcd(&other.to_integer())),
        }
    }

    /// Exact division; the caller guarantees `other` divides `self`.
    pub fn div_exact(&self, other: &Int) -> Int {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) if *b != 0 => match a.checked_div(*b) {
                Some(q) => {
                    debug_assert_eq!(a % b, 0, "inexact division {a}/{b}");
                    Int::Small(q)
                }
                None => Int::from_big(self.to_integer().div_exact(&other.to_integer())),
            },
            _ => Int::from_big(self.to_integer().div_exact(&other.to_integer())),
        }
    }

    /// Quotient rounded to the nearest integer (ties away from zero).
    pub fn div_round(&self, other: &Int) -> Int {
        let (q, _) = self.to_integer().div_rem_round(other.to_integer());
        Int::from_big(q)
    }

    pub fn is_divisible(&self, other: &Int) -> bool {
        match (self, other) {
            (_, o) if o.is_zero() => self.is_zero(),
            (Int::Small(a), Int::Small(b)) => a.checked_rem(*b).map_or(true, |r| r == 0),
            _ => self.to_integer().is_divisible(&other.to_integer()),
        }
    }

    pub fn pow(&self, e: u32) -> Int {
        let mut acc = Int::ONE;
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

impl From<i64> for Int {
    fn from(v: i64) -> Int {
        Int::Small(v)
    }
}

impl From<i32> for Int {
    fn from(v: i32) -> Int {
        Int::Small(v as i64)
    }
}

impl From<Integer> for Int {
    fn from(n: Integer) -> Int {
        Int::from_big(n)
    }
}

impl PartialEq for Int {
    fn eq(&self, other: &Int) -> bool {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a == b,
            (Int::Large(a), Int::Large(b)) => a == b,
            _ => false,
        }
    }
}

impl Eq for Int {}

impl std::hash::Hash for Int {
    fn hash<H: std::hash::Hasher>(&self, state: &mut H) {
        match self {
            Int::Small(v) => v.hash(state),
            Int::Large(n) => n.hash(state),
        }
    }
}

impl Ord for Int {
    fn cmp(&self, other: &Int) -> Ordering {
        match (self, other) {
            (Int::Small(a), Int::Small(b)) => a.cmp(b),
            (Int::Small(_), Int::Large(b)) => 0i64.cmp(&(b.cmp0() as i64)).then(Ordering::Equal),
            (Int::Large(a), Int::Small(_)) => (a.cmp0() as i64).cmp(&0).then(Ordering::Equal),
            (Int::Large(a), Int::Large(b)) => a.cmp(b),
        }
    }
}

impl PartialOrd for Int {
    fn partial_cmp(&self, other: &Int) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Int::Small(v) => write!(f, "{v}"),
            Int::Large(n) => write!(f, "{n}"),
        }
    }
}

impl FromStr for Int {
    type Err = String;

    fn from_str(s: &str) -> Result<Int, String> {
        let s = s.trim();
        if let Ok(v) = s.parse::<i64>() {
            return Ok(Int::Small(v));
        }
        Integer::from_str_radix(s, 10)
            .map(Int::from_big)
            .map_err(|e| format!("invalid integer {s:?}: {e}"))
    }
}

impl Serialize for Int {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        match self {
            Int::Small(v) => s.serialize_i64(*v),
            Int::Large(n) => s.serialize_str(&n.to_string()),
        }
    }
}

impl<'de> Deserialize<'de> for Int {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Int, D::Error> {
        #[derive(Deserialize)]
        #[serde(untagged)]
        enum Repr {
            Num(i64),
            Text(String),
        }
        match Repr::deserialize(d)? {
            Repr::Num(v) => Ok(Int::Small(v)),
            Repr::Text(s) => s.parse().map_err(serde::de::Error::custom),
        }
    }
}

macro_rules! binop {
    ($trait:ident, $method:ident, $checked:ident) => {
        impl<'a, 'b> $trait<&'b Int> for &'a Int {
            type Output = Int;

            fn $method(self, rhs: &'b Int) -> Int {
                if let (Int::Small(a), Int::Small(b)) = (self, rhs) {
                    if let Some(v) = a.$checked(*b) {
                        return Int::Small(v);
                    }
                }
                Int::from_big(Integer::from(self.to_integer().$method(rhs.to_integer())))
            }
        }

        impl $trait<Int> for Int {
            type Output = Int;

            fn $method(self, rhs: Int) -> Int {
                (&self).$method(&rhs)
            }
        }

        impl<'b> $trait<&'b Int> for Int {
            type Output = Int;

            fn $method(self, rhs: &'b Int) -> Int {
                (&self).$method(rhs)
            }
        }

        impl<'a> $trait<Int> for &'a Int {
            type Output = Int;

            fn $method(self, rhs: Int) -> Int {
                self.$method(&rhs)
            }
        }
    };
}

binop!(Add, add, checked_add);
binop!(Sub, sub, checked_sub);
binop!(Mul, mul, checked_mul);

impl Neg for &Int {
    type Output = Int;

    fn neg(self) -> Int {
        match self {
            Int::Small(v) => match v.checked_neg() {
                Some(n) => Int::Small(n),
                None => Int::from_big(-Integer::from(*v)),
            },
            Int::Large(n) => Int::from_big(Integer::from(-n)),
        }
    }
}

impl Neg for Int {
    type Output = Int;

    fn neg(self) -> Int {
        -&self
    }
}
