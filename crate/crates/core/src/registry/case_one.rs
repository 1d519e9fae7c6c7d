//! Diagonal-type curves on the Hilbert modular surface of F = ℚ(√5).
//!
//! Elements of F are a + bω with ω = (1 + √5)/2, ω² = ω + 1, and Galois
//! conjugation ω ↦ 1 − ω.

use std::collections::HashSet;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use rug::Rational;
use serde::{Serialize, Serializer};

use crate::registry::{CurveCase, RegistryError};

#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct RealQuad {
    pub a: Rational,
    pub b: Rational,
}

impl RealQuad {
    pub fn new(a: impl Into<Rational>, b: impl Into<Rational>) -> RealQuad {
        RealQuad { a: a.into(), b: b.into() }
    }

    pub fn zero() -> RealQuad {
        RealQuad::new(0, 0)
    }

    pub fn one() -> RealQuad {
        RealQuad::new(1, 0)
    }

    pub fn omega() -> RealQuad {
        RealQuad::new(0, 1)
    }

    /// √5 = 2ω − 1.
    pub fn sqrt5() -> RealQuad {
        RealQuad::new(-1, 2)
    }

    pub fn is_zero(&self) -> bool {
        self.a == 0 && self.b == 0
    }

    pub fn sigma(&self) -> RealQuad {
        RealQuad { a: Rational::from(&self.a + &self.b), b: Rational::from(-&self.b) }
    }

    /// N(a + bω) = a² + ab − b².
    pub fn norm(&self) -> Rational {
        Rational::from(&self.a * &self.a) + Rational::from(&self.a * &self.b) - Rational::from(&self.b * &self.b)
    }

    pub fn trace(&self) -> Rational {
        Rational::from(&self.a * 2u32) + &self.b
    }

    /// Positive under both real embeddings, decided exactly.
    pub fn is_totally_positive(&self) -> bool {
        self.norm() > 0 && self.trace() > 0
    }

    pub fn is_integral(&self) -> bool {
        *self.a.denom() == 1 && *self.b.denom() == 1
    }

    pub fn inv(&self) -> Option<RealQuad> {
        let n = self.norm();
        if n == 0 {
            return None;
        }
        let s = self.sigma();
        Some(RealQuad { a: Rational::from(&s.a / &n), b: Rational::from(&s.b / &n) })
    }

    /// The two real embeddings (ω ↦ (1 ± √5)/2).
    pub fn embeddings(&self) -> (f64, f64) {
        let r5 = 5f64.sqrt();
        let (a, b) = (self.a.to_f64(), self.b.to_f64());
        (a + b * (1.0 + r5) / 2.0, a + b * (1.0 - r5) / 2.0)
    }
}

impl fmt::Display for RealQuad {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} + {}w", self.a, self.b)
    }
}

impl Serialize for RealQuad {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        [self.a.to_string(), self.b.to_string()].serialize(s)
    }
}

impl<'a> Add for &'a RealQuad {
    type Output = RealQuad;
    fn add(self, o: &RealQuad) -> RealQuad {
        RealQuad { a: Rational::from(&self.a + &o.a), b: Rational::from(&self.b + &o.b) }
    }
}

impl<'a> Sub for &'a RealQuad {
    type Output = RealQuad;
    fn sub(self, o: &RealQuad) -> RealQuad {
        RealQuad { a: Rational::from(&self.a - &o.a), b: Rational::from(&self.b - &o.b) }
    }
}

impl<'a> Mul for &'a RealQuad {
    type Output = RealQuad;
    fn mul(self, o: &RealQuad) -> RealQuad {
        let bd = Rational::from(&self.b * &o.b);
        RealQuad {
            a: Rational::from(&self.a * &o.a) + &bd,
            b: Rational::from(&self.a * &o.b) + Rational::from(&self.b * &o.a) + bd,
        }
    }
}

impl<'a> Neg for &'a RealQuad {
    type Output = RealQuad;
    fn neg(self) -> RealQuad {
        RealQuad { a: Rational::from(-&self.a), b: Rational::from(-&self.b) }
    }
}

/// A 2×2 matrix over F, row-major.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Sl2Quad(pub [[RealQuad; 2]; 2]);

impl Sl2Quad {
    pub fn identity() -> Sl2Quad {
        Sl2Quad([[RealQuad::one(), RealQuad::zero()], [RealQuad::zero(), RealQuad::one()]])
    }

    pub fn from_ints(m: [[(i64, i64); 2]; 2]) -> Sl2Quad {
        Sl2Quad(m.map(|row| row.map(|(a, b)| RealQuad::new(a, b))))
    }

    pub fn mul(&self, o: &Sl2Quad) -> Sl2Quad {
        let (x, y) = (&self.0, &o.0);
        Sl2Quad(std::array::from_fn(|i| {
            std::array::from_fn(|j| &(&x[i][0] * &y[0][j]) + &(&x[i][1] * &y[1][j]))
        }))
    }

    pub fn det(&self) -> RealQuad {
        let m = &self.0;
        &(&m[0][0] * &m[1][1]) - &(&m[0][1] * &m[1][0])
    }

    pub fn inverse(&self) -> Option<Sl2Quad> {
        let d = self.det().inv()?;
        let m = &self.0;
        Some(Sl2Quad([
            [&m[1][1] * &d, &(-&m[0][1]) * &d],
            [&(-&m[1][0]) * &d, &m[0][0] * &d],
        ]))
    }

    pub fn sigma(&self) -> Sl2Quad {
        Sl2Quad(self.0.clone().map(|row| row.map(|e| e.sigma())))
    }

    pub fn neg(&self) -> Sl2Quad {
        Sl2Quad(self.0.clone().map(|row| row.map(|e| -&e)))
    }

    pub fn is_integral(&self) -> bool {
        self.0.iter().flatten().all(RealQuad::is_integral)
    }

    /// The pair of real matrices under the two embeddings.
    pub fn embeddings(&self) -> ([[f64; 2]; 2], [[f64; 2]; 2]) {
        let e = self.0.clone().map(|row| row.map(|x| x.embeddings()));
        (e.map(|row| row.map(|p| p.0)), e.map(|row| row.map(|p| p.1)))
    }
}

/// T = [[1,1],[0,1]], T_ω = [[1,ω],[0,1]] and S = [[0,−1],[1,0]] in SL₂(ℤ[ω]).
pub fn surface_generators() -> Vec<Sl2Quad> {
    vec![
        Sl2Quad::from_ints([[(1, 0), (1, 0)], [(0, 0), (1, 0)]]),
        Sl2Quad::from_ints([[(1, 0), (0, 1)], [(0, 0), (1, 0)]]),
        Sl2Quad::from_ints([[(0, 0), (-1, 0)], [(1, 0), (0, 0)]]),
    ]
}

/// The curve z ↦ (μ⁽¹⁾z, μ⁽²⁾z) with the stabilizer elements found.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CaseOneCurve {
    pub case: CurveCase,
    pub mu: Sl2Quad,
    #[serde(serialize_with = "ser_embedded")]
    pub mu_embedded: ([[f64; 2]; 2], [[f64; 2]; 2]),
    /// Identity first, then in order of discovery (shortest words first).
    pub stabilizer: Vec<Sl2Quad>,
    pub words_examined: usize,
}

fn ser_embedded<S: Serializer>(m: &([[f64; 2]; 2], [[f64; 2]; 2]), s: S) -> Result<S::Ok, S::Error> {
    let fmt = |x: &[[f64; 2]; 2]| x.map(|r| r.map(|v| format!("{v:.17e}")));
    [fmt(&m.0), fmt(&m.1)].serialize(s)
}

/// Stabilizer of the μ-twisted diagonal among words of length ≤ `word_bound`
/// in `surface_gens` and their inverses.
///
/// γ preserves the curve iff M = μ⁻¹γμ acts identically under both
/// embeddings, that is M = ±σ(M).
pub fn diagonal_curve_case_one(
    mu: &Sl2Quad,
    surface_gens: &[Sl2Quad],
    word_bound: u32,
) -> Result<CaseOneCurve, RegistryError> {
    if !mu.det().is_totally_positive() {
        return Err(RegistryError::NotTotallyPositive);
    }
    let mu_inv = mu.inverse().ok_or(RegistryError::NotTotallyPositive)?;
    let mut gens: Vec<Sl2Quad> = Vec::new();
    for g in surface_gens {
        for m in [g.clone(), g.inverse().expect("surface generators are invertible")] {
            if !gens.contains(&m) {
                gens.push(m);
            }
        }
    }
    let mut seen: HashSet<Sl2Quad> = HashSet::from([Sl2Quad::identity()]);
    let mut order = vec![Sl2Quad::identity()];
    let mut frontier = vec![Sl2Quad::identity()];
    for _ in 0..word_bound {
        let mut next = Vec::new();
        for w in &frontier {
            for g in &gens {
                let p = w.mul(g);
                if !seen.contains(&p) && !seen.contains(&p.neg()) {
                    seen.insert(p.clone());
                    order.push(p.clone());
                    next.push(p);
                }
            }
        }
        frontier = next;
    }
    let stabilizer: Vec<Sl2Quad> = order
        .iter()
        .filter(|g| {
            let m = mu_inv.mul(g).mul(mu);
            let s = m.sigma();
            m == s || m == s.neg()
        })
        .cloned()
        .collect();
    Ok(CaseOneCurve {
        case: CurveCase::One,
        mu: mu.clone(),
        mu_embedded: mu.embeddings(),
        stabilizer,
        words_examined: order.len(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn field_arithmetic() {
        let w = RealQuad::omega();
        assert_eq!(&w * &w, &w + &RealQuad::one());
        assert_eq!(&RealQuad::sqrt5() * &RealQuad::sqrt5(), RealQuad::new(5, 0));
        assert_eq!(RealQuad::sqrt5().norm(), -5);
        let x = RealQuad::new(3, -1);
        assert_eq!(&x * &x.inv().unwrap(), RealQuad::one());
        let (e1, e2) = w.embeddings();
        assert!((e1 * e2 + 1.0).abs() < 1e-15);
        // ω is a unit of norm −1, so not totally positive; ω² is
        assert!(!w.is_totally_positive());
        assert!((&w * &w).is_totally_positive());
    }

    #[test]
    fn identity_gives_the_diagonal_modular_curve() {
        let c = diagonal_curve_case_one(&Sl2Quad::identity(), &surface_generators(), 3).unwrap();
        let t = surface_generators()[0].clone();
        assert!(c.stabilizer.contains(&t));
        assert!(!c.stabilizer.contains(&surface_generators()[1]));
        for g in &c.stabilizer {
            assert!(g.is_integral());
            assert_eq!(g.det(), RealQuad::one());
            // Galois-fixed up to sign means rational entries up to sign
            assert!(*g == g.sigma() || *g == g.sigma().neg());
        }
    }

    #[test]
    fn non_totally_positive_determinant_is_rejected() {
        let mu = Sl2Quad([[RealQuad::sqrt5(), RealQuad::zero()], [RealQuad::zero(), RealQuad::one()]]);
        assert_eq!(
            diagonal_curve_case_one(&mu, &surface_generators(), 2).unwrap_err(),
            RegistryError::NotTotallyPositive
        );
    }

    #[test]
    fn twisted_diagonal_stabilizer_is_conjugated() {
        // μ = diag(ω², 1): the stabilizer is μ·(rational elements)·μ⁻¹ ∩ SL₂(ℤ[ω])
        let w2 = &RealQuad::omega() * &RealQuad::omega();
        let mu = Sl2Quad([[w2, RealQuad::zero()], [RealQuad::zero(), RealQuad::one()]]);
        let c = diagonal_curve_case_one(&mu, &surface_generators(), 4).unwrap();
        assert!(c.stabilizer.len() >= 1);
        let mu_inv = mu.inverse().unwrap();
        for g in &c.stabilizer {
            let m = mu_inv.mul(g).mul(&mu);
            assert!(m == m.sigma() || m == m.sigma().neg());
        }
    }
}
