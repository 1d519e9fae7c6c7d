//! Real scalars for geometry: plain `f64` for bulk Monte Carlo and an
//! MPFR-backed [`Hp`] for residual checks far below double precision.
//!
//! Geometry code is generic over [`Real`]; constants are created through a
//! [`Precision`] so the same routine runs at 53 bits or at hundreds.

use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use rug::float::Constant;
use rug::{Float, Rational};
use serde::{Deserialize, Serialize};

use crate::ring::QuadRat;

/// Working precision in decimal digits.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Precision {
    pub digits: u32,
}

impl Precision {
    pub const DEFAULT_DIGITS: u32 = 100;

    pub fn digits(digits: u32) -> Precision {
        Precision { digits: digits.max(1) }
    }

    /// Significand bits: ⌈digits · log₂10⌉ plus guard bits.
    pub fn bits(self) -> u32 {
        (self.digits as f64 * std::f64::consts::LOG2_10).ceil() as u32 + 8
    }

    /// Roughly the smallest relative difference representable.
    pub fn epsilon(self) -> f64 {
        10f64.powi(-(self.digits as i32))
    }
}

impl Default for Precision {
    fn default() -> Precision {
        Precision::digits(Self::DEFAULT_DIGITS)
    }
}

pub trait Real:
    Clone
    + fmt::Debug
    + PartialOrd
    + Send
    + Sync
    + Add<Output = Self>
    + Sub<Output = Self>
    + Mul<Output = Self>
    + Div<Output = Self>
    + Neg<Output = Self>
{
    fn from_f64(prec: Precision, v: f64) -> Self;
    fn from_rational(prec: Precision, q: &Rational) -> Self;
    fn pi(prec: Precision) -> Self;
    fn from_decimal(prec: Precision, s: &str) -> Option<Self>;
    fn precision(&self) -> Precision;

    fn to_f64(&self) -> f64;
    fn sqrt(&self) -> Self;
    fn exp(&self) -> Self;
    fn ln(&self) -> Self;
    fn sin(&self) -> Self;
    fn cos(&self) -> Self;
    fn sinh(&self) -> Self;
    fn cosh(&self) -> Self;
    fn tanh(&self) -> Self;
    fn acosh(&self) -> Self;
    fn asinh(&self) -> Self;
    fn abs(&self) -> Self;

    fn zero_like(&self) -> Self {
        Self::from_f64(self.precision(), 0.0)
    }

    fn one_like(&self) -> Self {
        Self::from_f64(self.precision(), 1.0)
    }

    fn lit(&self, v: f64) -> Self {
        Self::from_f64(self.precision(), v)
    }

    fn max(self, other: Self) -> Self {
        if other > self {
            other
        } else {
            self
        }
    }
}

impl Real for f64 {
    fn from_f64(_: Precision, v: f64) -> f64 {
        v
    }
    fn from_rational(_: Precision, q: &Rational) -> f64 {
        q.to_f64()
    }
    fn pi(_: Precision) -> f64 {
        std::f64::consts::PI
    }
    fn from_decimal(_: Precision, s: &str) -> Option<f64> {
        s.trim().parse().ok()
    }
    fn precision(&self) -> Precision {
        Precision::digits(15)
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn sqrt(&self) -> f64 {
        f64::sqrt(*self)
    }
    fn exp(&self) -> f64 {
        f64::exp(*self)
    }
    fn ln(&self) -> f64 {
        f64::ln(*self)
    }
    fn sin(&self) -> f64 {
        f64::sin(*self)
    }
    fn cos(&self) -> f64 {
        f64::cos(*self)
    }
    fn sinh(&self) -> f64 {
        f64::sinh(*self)
    }
    fn cosh(&self) -> f64 {
        f64::cosh(*self)
    }
    fn tanh(&self) -> f64 {
        f64::tanh(*self)
    }
    fn acosh(&self) -> f64 {
        f64::acosh(*self)
    }
    fn asinh(&self) -> f64 {
        f64::asinh(*self)
    }
    fn abs(&self) -> f64 {
        f64::abs(*self)
    }
}

/// An MPFR float. Binary operations keep the left operand's precision.
#[derive(Clone, Debug, PartialEq, PartialOrd)]
pub struct Hp(pub Float);

impl Hp {
    pub fn with_prec(prec: Precision, v: f64) -> Hp {
        Hp(Float::with_val(prec.bits(), v))
    }

    pub fn to_string_digits(&self, digits: usize) -> String {
        self.0.to_string_radix(10, Some(digits))
    }
}

impl fmt::Display for Hp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

macro_rules! hp_unary {
    ($($name:ident),*) => {
        $(fn $name(&self) -> Hp {
            Hp(self.0.clone().$name())
        })*
    };
}

impl Real for Hp {
    fn from_f64(prec: Precision, v: f64) -> Hp {
        Hp::with_prec(prec, v)
    }
    fn from_rational(prec: Precision, q: &Rational) -> Hp {
        Hp(Float::with_val(prec.bits(), q))
    }
    fn pi(prec: Precision) -> Hp {
        Hp(Float::with_val(prec.bits(), Constant::Pi))
    }
    fn from_decimal(prec: Precision, s: &str) -> Option<Hp> {
        Float::parse(s.trim()).ok().map(|p| Hp(Float::with_val(prec.bits(), p)))
    }
    fn precision(&self) -> Precision {
        let digits = ((self.0.prec().saturating_sub(8)) as f64 / std::f64::consts::LOG2_10).floor();
        Precision::digits(digits as u32)
    }
    fn to_f64(&self) -> f64 {
        self.0.to_f64()
    }
    hp_unary!(sqrt, exp, ln, sin, cos, sinh, cosh, tanh, acosh, asinh, abs);
}

macro_rules! hp_binop {
    ($trait:ident, $method:ident) => {
        impl $trait for Hp {
            type Output = Hp;
            fn $method(self, rhs: Hp) -> Hp {
                Hp(self.0.$method(rhs.0))
            }
        }
    };
}

hp_binop!(Add, add);
hp_binop!(Sub, sub);
hp_binop!(Mul, mul);
hp_binop!(Div, div);

impl Neg for Hp {
    type Output = Hp;
    fn neg(self) -> Hp {
        Hp(-self.0)
    }
}

/// A complex number over a [`Real`].
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Cx<T> {
    pub re: T,
    pub im: T,
}

impl<T: Real> Cx<T> {
    pub fn new(re: T, im: T) -> Cx<T> {
        Cx { re, im }
    }

    pub fn real(re: T) -> Cx<T> {
        let im = re.zero_like();
        Cx { re, im }
    }

    pub fn zero(prec: Precision) -> Cx<T> {
        Cx { re: T::from_f64(prec, 0.0), im: T::from_f64(prec, 0.0) }
    }

    pub fn one(prec: Precision) -> Cx<T> {
        Cx { re: T::from_f64(prec, 1.0), im: T::from_f64(prec, 0.0) }
    }

    pub fn from_f64(prec: Precision, re: f64, im: f64) -> Cx<T> {
        Cx { re: T::from_f64(prec, re), im: T::from_f64(prec, im) }
    }

    pub fn from_quad(prec: Precision, q: &QuadRat) -> Cx<T> {
        Cx { re: T::from_rational(prec, &q.re()), im: T::from_rational(prec, &q.im()) }
    }

    /// e^{iθ}
    pub fn cis(theta: &T) -> Cx<T> {
        Cx { re: theta.cos(), im: theta.sin() }
    }

    pub fn conj(&self) -> Cx<T> {
        Cx { re: self.re.clone(), im: -self.im.clone() }
    }

    pub fn norm_sqr(&self) -> T {
        self.re.clone() * self.re.clone() + self.im.clone() * self.im.clone()
    }

    pub fn abs(&self) -> T {
        self.norm_sqr().sqrt()
    }

    pub fn scale(&self, k: &T) -> Cx<T> {
        Cx { re: self.re.clone() * k.clone(), im: self.im.clone() * k.clone() }
    }

    pub fn add(&self, o: &Cx<T>) -> Cx<T> {
        Cx { re: self.re.clone() + o.re.clone(), im: self.im.clone() + o.im.clone() }
    }

    pub fn sub(&self, o: &Cx<T>) -> Cx<T> {
        Cx { re: self.re.clone() - o.re.clone(), im: self.im.clone() - o.im.clone() }
    }

    pub fn mul(&self, o: &Cx<T>) -> Cx<T> {
        Cx {
            re: self.re.clone() * o.re.clone() - self.im.clone() * o.im.clone(),
            im: self.re.clone() * o.im.clone() + self.im.clone() * o.re.clone(),
        }
    }

    pub fn div(&self, o: &Cx<T>) -> Cx<T> {
        let n = o.norm_sqr();
        let num = self.mul(&o.conj());
        Cx { re: num.re / n.clone(), im: num.im / n }
    }

    pub fn neg(&self) -> Cx<T> {
        Cx { re: -self.re.clone(), im: -self.im.clone() }
    }

    pub fn to_f64(&self) -> Cx<f64> {
        Cx { re: self.re.to_f64(), im: self.im.to_f64() }
    }
}

impl Cx<f64> {
    /// Lift to another scalar type (exactly, for binary-representable input).
    pub fn lift<T: Real>(&self, prec: Precision) -> Cx<T> {
        Cx::from_f64(prec, self.re, self.im)
    }
}

pub type Vec3<T> = [Cx<T>; 3];
pub type Mat3<T> = [[Cx<T>; 3]; 3];

pub fn mat3_from_quad<T: Real>(prec: Precision, m: &crate::linalg::Matrix<QuadRat>) -> Mat3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| Cx::from_quad(prec, &m[(i, j)])))
}

pub fn mat3_mul_vec<T: Real>(m: &Mat3<T>, v: &Vec3<T>) -> Vec3<T> {
    std::array::from_fn(|i| m[i][0].mul(&v[0]).add(&m[i][1].mul(&v[1])).add(&m[i][2].mul(&v[2])))
}

pub fn mat3_mul<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| {
        std::array::from_fn(|j| a[i][0].mul(&b[0][j]).add(&a[i][1].mul(&b[1][j])).add(&a[i][2].mul(&b[2][j])))
    })
}

pub fn mat3_conj_transpose<T: Real>(a: &Mat3<T>) -> Mat3<T> {
    std::array::from_fn(|i| std::array::from_fn(|j| a[j][i].conj()))
}

/// Largest |entry| of `a − b`, as f64.
pub fn mat3_max_diff<T: Real>(a: &Mat3<T>, b: &Mat3<T>) -> f64 {
    let mut worst = 0.0f64;
    for i in 0..3 {
        for j in 0..3 {
            worst = worst.max(a[i][j].sub(&b[i][j]).abs().to_f64());
        }
    }
    worst
}
