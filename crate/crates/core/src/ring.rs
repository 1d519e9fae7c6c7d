//! Exact arithmetic in the Gaussian integers ℤ[i] and the field ℚ(i).
//!
//! ℤ[i] is the fixed quadratic order of the Picard-type instance; complex
//! conjugation is the involution of the second kind. Norm residues are taken
//! in ℚ*/N(ℚ(i)*), where a positive rational is a norm exactly when every
//! prime ≡ 3 (mod 4) occurs to an even power.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::int::Int;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RingError {
    #[error("zero vector has no primitive class")]
    ZeroVector,
    #[error("norm residue class needs a positive rational, got {0}")]
    NonPositive(String),
    #[error("division by zero")]
    DivisionByZero,
}

/// `re + im·i` with arbitrary-precision components.
/// Serialized as the pair `[re, im]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(from = "(Int, Int)", into = "(Int, Int)")]
pub struct QuadInt {
    pub re: Int,
    pub im: Int,
}

impl QuadInt {
    pub fn new(re: impl Into<Int>, im: impl Into<Int>) -> QuadInt {
        QuadInt { re: re.into(), im: im.into() }
    }

    pub fn zero() -> QuadInt {
        QuadInt::new(0, 0)
    }

    pub fn one() -> QuadInt {
        QuadInt::new(1, 0)
    }

    pub fn i() -> QuadInt {
        QuadInt::new(0, 1)
    }

    /// The four units 1, i, −1, −i.
    pub fn units() -> [QuadInt; 4] {
        [QuadInt::new(1, 0), QuadInt::new(0, 1), QuadInt::new(-1, 0), QuadInt::new(0, -1)]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        self.norm().is_one()
    }

    pub fn conj(&self) -> QuadInt {
        QuadInt { re: self.re.clone(), im: -&self.im }
    }

    /// N(x) = x·σ(x) = re² + im².
    pub fn norm(&self) -> Int {
        &(&self.re * &self.re) + &(&self.im * &self.im)
    }

    /// max(|re|, |im|), the coordinate magnitude used as enumeration height.
    pub fn magnitude(&self) -> Int {
        self.re.abs().max(self.im.abs())
    }

    pub fn scale(&self, k: &Int) -> QuadInt {
        QuadInt { re: &self.re * k, im: &self.im * k }
    }

    /// Nearest-integer Euclidean division: `self = q·d + r` with N(r) < N(d).
    pub fn div_rem(&self, d: &QuadInt) -> (QuadInt, QuadInt) {
        let n = d.norm();
        let num = self * &d.conj();
        let q = QuadInt { re: num.re.div_round(&n), im: num.im.div_round(&n) };
        let r = self - &(&q * d);
        (q, r)
    }

    /// `Some(self / d)` when `d` divides `self` in ℤ[i].
    pub fn checked_div(&self, d: &QuadInt) -> Option<QuadInt> {
        if d.is_zero() {
            return None;
        }
        let n = d.norm();
        let num = self * &d.conj();
        if num.re.is_divisible(&n) && num.im.is_divisible(&n) {
            Some(QuadInt { re: num.re.div_exact(&n), im: num.im.div_exact(&n) })
        } else {
            None
        }
    }

    /// Euclidean gcd, normalized to its canonical associate.
    pub fn gcd(&self, other: &QuadInt) -> QuadInt {
        let (mut a, mut b) = (self.clone(), other.clone());
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.canonical_associate().0
    }

    /// The associate `u·self` with `re > 0, im ≥ 0`, together with the unit `u`.
    pub fn canonical_associate(&self) -> (QuadInt, QuadInt) {
        if self.is_zero() {
            return (self.clone(), QuadInt::one());
        }
        for u in QuadInt::units() {
            let c = &u * self;
            if c.re.signum() > 0 && c.im.signum() >= 0 {
                return (c, u);
            }
        }
        unreachable!("every nonzero Gaussian integer has a first-quadrant associate")
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}

impl fmt::Display for QuadInt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.signum()) {
            (_, 0) => write!(f, "{}", self.re),
            (true, _) => write!(f, "{}i", self.im),
            (false, s) if s > 0 => write!(f, "{}+{}i", self.re, self.im),
            _ => write!(f, "{}{}i", self.re, self.im),
        }
    }
}

impl From<(Int, Int)> for QuadInt {
    fn from((re, im): (Int, Int)) -> QuadInt {
        QuadInt { re, im }
    }
}

impl From<QuadInt> for (Int, Int) {
    fn from(q: QuadInt) -> (Int, Int) {
        (q.re, q.im)
    }
}

impl From<i64> for QuadInt {
    fn from(v: i64) -> QuadInt {
        QuadInt::new(v, 0)
    }
}

impl<'a, 'b> Add<&'b QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: &'b QuadInt) -> QuadInt {
        QuadInt { re: &self.re + &rhs.re, im: &self.im + &rhs.im }
    }
}

impl<'a, 'b> Sub<&'b QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: &'b QuadInt) -> QuadInt {
        QuadInt { re: &self.re - &rhs.re, im: &self.im - &rhs.im }
    }
}

impl<'a, 'b> Mul<&'b QuadInt> for &'a QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: &'b QuadInt) -> QuadInt {
        QuadInt {
            re: &(&self.re * &rhs.re) - &(&self.im * &rhs.im),
            im: &(&self.re * &rhs.im) + &(&self.im * &rhs.re),
        }
    }
}

impl Neg for &QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        QuadInt { re: -&self.re, im: -&self.im }
    }
}

impl Add for QuadInt {
    type Output = QuadInt;
    fn add(self, rhs: QuadInt) -> QuadInt {
        &self + &rhs
    }
}

impl Sub for QuadInt {
    type Output = QuadInt;
    fn sub(self, rhs: QuadInt) -> QuadInt {
        &self - &rhs
    }
}

impl Mul for QuadInt {
    type Output = QuadInt;
    fn mul(self, rhs: QuadInt) -> QuadInt {
        &self * &rhs
    }
}

impl Neg for QuadInt {
    type Output = QuadInt;
    fn neg(self) -> QuadInt {
        -&self
    }
}

/// An element `num / den` of ℚ(i), `den > 0`, gcd(re, im, den) = 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct QuadRat {
    num: QuadInt,
    den: Int,
}

impl QuadRat {
    pub fn new(num: QuadInt, den: Int) -> Result<QuadRat, RingError> {
        if den.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        Ok(Self::normalized(num, den))
    }

    fn normalized(num: QuadInt, den: Int) -> QuadRat {
        let (num, den) = if den.signum() < 0 { (-&num, -&den) } else { (num, den) };
        if num.is_zero() {
            return QuadRat { num, den: Int::ONE };
        }
        let g = num.re.gcd(&num.im).gcd(&den);
        if g.is_one() {
            QuadRat { num, den }
        } else {
            QuadRat {
                num: QuadInt { re: num.re.div_exact(&g), im: num.im.div_exact(&g) },
                den: den.div_exact(&g),
            }
        }
    }

    pub fn zero() -> QuadRat {
        QuadRat { num: QuadInt::zero(), den: Int::ONE }
    }

    pub fn one() -> QuadRat {
        QuadRat { num: QuadInt::one(), den: Int::ONE }
    }

    pub fn from_int(v: i64) -> QuadRat {
        QuadRat { num: QuadInt::from(v), den: Int::ONE }
    }

    pub fn from_gauss(re: i64, im: i64) -> QuadRat {
        QuadRat { num: QuadInt::new(re, im), den: Int::ONE }
    }

    pub fn from_rational(q: &Rational) -> QuadRat {
        QuadRat {
            num: QuadInt { re: Int::from(q.numer().clone()), im: Int::ZERO },
            den: Int::from(q.denom().clone()),
        }
    }

    pub fn num(&self) -> &QuadInt {
        &self.num
    }

    pub fn den(&self) -> &Int {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn is_one(&self) -> bool {
        self.den.is_one() && self.num.re.is_one() && self.num.im.is_zero()
    }

    pub fn is_real(&self) -> bool {
        self.num.im.is_zero()
    }

    pub fn is_integral(&self) -> bool {
        self.den.is_one()
    }

    /// The Gaussian integer this element equals, if integral.
    pub fn to_quad_int(&self) -> Option<QuadInt> {
        self.is_integral().then(|| self.num.clone())
    }

    pub fn re(&self) -> Rational {
        Rational::from((self.num.re.to_integer(), self.den.to_integer()))
    }

    pub fn im(&self) -> Rational {
        Rational::from((self.num.im.to_integer(), self.den.to_integer()))
    }

    /// Sign of the real part (exact).
    pub fn re_signum(&self) -> i32 {
        self.num.re.signum()
    }

    pub fn conj(&self) -> QuadRat {
        QuadRat { num: self.num.conj(), den: self.den.clone() }
    }

    pub fn norm(&self) -> Rational {
        Rational::from((self.num.norm().to_integer(), (&self.den * &self.den).to_integer()))
    }

    pub fn inv(&self) -> Result<QuadRat, RingError> {
        if self.is_zero() {
            return Err(RingError::DivisionByZero);
        }
        // (a/d)^{-1} = d·σ(a)/N(a)
        Ok(Self::normalized(self.num.conj().scale(&self.den), self.num.norm()))
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re().to_f64(), self.im().to_f64())
    }
}

impl Default for QuadRat {
    fn default() -> Self {
        QuadRat::zero()
    }
}

impl From<QuadInt> for QuadRat {
    fn from(num: QuadInt) -> QuadRat {
        QuadRat { num, den: Int::ONE }
    }
}

impl From<&QuadInt> for QuadRat {
    fn from(num: &QuadInt) -> QuadRat {
        QuadRat { num: num.clone(), den: Int::ONE }
    }
}

impl fmt::Display for QuadRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "({})/{}", self.num, self.den)
        }
    }
}

impl<'a, 'b> Add<&'b QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: &'b QuadRat) -> QuadRat {
        if self.den == rhs.den {
            return QuadRat::normalized(&self.num + &rhs.num, self.den.clone());
        }
        QuadRat::normalized(
            &self.num.scale(&rhs.den) + &rhs.num.scale(&self.den),
            &self.den * &rhs.den,
        )
    }
}

impl<'a, 'b> Sub<&'b QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: &'b QuadRat) -> QuadRat {
        self + &(-rhs)
    }
}

impl<'a, 'b> Mul<&'b QuadRat> for &'a QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: &'b QuadRat) -> QuadRat {
        QuadRat::normalized(&self.num * &rhs.num, &self.den * &rhs.den)
    }
}

impl Neg for &QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        QuadRat { num: -&self.num, den: self.den.clone() }
    }
}

impl Add for QuadRat {
    type Output = QuadRat;
    fn add(self, rhs: QuadRat) -> QuadRat {
        &self + &rhs
    }
}

impl Sub for QuadRat {
    type Output = QuadRat;
    fn sub(self, rhs: QuadRat) -> QuadRat {
        &self - &rhs
    }
}

impl Mul for QuadRat {
    type Output = QuadRat;
    fn mul(self, rhs: QuadRat) -> QuadRat {
        &self * &rhs
    }
}

impl Neg for QuadRat {
    type Output = QuadRat;
    fn neg(self) -> QuadRat {
        -&self
    }
}

pub fn conj(x: &QuadInt) -> QuadInt {
    x.conj()
}

pub fn norm(x: &QuadInt) -> Int {
    x.norm()
}

/// True iff the ideal generated by the coordinates is all of ℤ[i].
pub fn is_primitive(v: &[QuadInt]) -> Result<bool, RingError> {
    if v.iter().all(QuadInt::is_zero) {
        return Err(RingError::ZeroVector);
    }
    let g = v.iter().fold(QuadInt::zero(), |acc, x| acc.gcd(x));
    Ok(g.is_unit())
}

/// Divide a nonzero vector by the gcd of its coordinates and normalize the
/// first nonzero coordinate to its canonical associate.
pub fn primitive_part(v: &[QuadInt]) -> Result<Vec<QuadInt>, RingError> {
    if v.iter().all(QuadInt::is_zero) {
        return Err(RingError::ZeroVector);
    }
    let g = v.iter().fold(QuadInt::zero(), |acc, x| acc.gcd(x));
    let reduced: Vec<QuadInt> = v
        .iter()
        .map(|x| x.checked_div(&g).expect("gcd divides every coordinate"))
        .collect();
    Ok(canonical_unit_multiple(&reduced))
}

/// The unit multiple of `v` whose first nonzero coordinate has `re > 0, im ≥ 0`.
pub fn canonical_unit_multiple(v: &[QuadInt]) -> Vec<QuadInt> {
    match v.iter().find(|x| !x.is_zero()) {
        None => v.to_vec(),
        Some(lead) => {
            let (_, u) = lead.canonical_associate();
            v.iter().map(|x| &u * x).collect()
        }
    }
}

/// Class of a positive rational in ℚ*/N(ℚ(i)*).
///
/// The representative is the squarefree product of the primes ≡ 3 (mod 4)
/// that divide the numerator or denominator to an odd power.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct NormResidueClass {
    representative: Int,
}

impl NormResidueClass {
    pub fn representative(&self) -> &Int {
        &self.representative
    }

    pub fn is_trivial(&self) -> bool {
        self.representative.is_one()
    }
}

impl fmt::Display for NormResidueClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative)
    }
}

pub fn norm_residue_class(q: &Rational) -> Result<NormResidueClass, RingError> {
    if q.cmp0() != std::cmp::Ordering::Greater {
        return Err(RingError::NonPositive(q.to_string()));
    }
    let mut rep = rug::Integer::from(1);
    for part in [q.numer(), q.denom()] {
        for (p, e) in factorize(part) {
            if e % 2 == 1 && p.mod_u(4) == 3 {
                rep *= &p;
            }
        }
    }
    Ok(NormResidueClass { representative: Int::from(rep) })
}

/// Trial-division factorization; heights in this crate keep inputs small.
fn factorize(n: &rug::Integer) -> Vec<(rug::Integer, u32)> {
    let mut n = n.clone().abs();
    let mut out = Vec::new();
    let mut p = rug::Integer::from(2);
    while rug::Integer::from(&p * &p) <= n {
        let mut e = 0;
        while n.is_divisible(&p) {
            n.div_exact_mut(&p);
            e += 1;
        }
        if e > 0 {
            out.push((p.clone(), e));
        }
        p += if p == 2 { 1 } else { 2 };
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}
