//! Ball and bidisk models, the function φ_α on (sub-)projectivized tangent
//! spaces, and the metric normalization.
//!
//! The ball 𝔹² is the set of h-negative lines (z₁, z₂, 1) for
//! h = diag(1, 1, −1). Its metric
//!
//!   g = s·[(1 − |z|²)|dz|² + |⟨z, dz⟩|²] / (1 − |z|²)²,   s = 4,
//!
//! has holomorphic sectional curvature −1, so complex geodesics carry the
//! curvature −1 Poincaré metric s|dz|²/(1 − |z|²)².

use gauss_quad::GaussLegendre;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermitian::{conjugator, orthogonal_completion, HermitianError, HermitianForm, LatticeVector};
use crate::real::{mat3_mul_vec, Cx, Mat3, Precision, Real};

/// Metric scale s giving holomorphic sectional curvature −1.
pub const DEFAULT_KAHLER_SCALE: f64 = 4.0;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum SymSpaceError {
    #[error("tangent direction is zero")]
    ZeroDirection,
    #[error("point lies outside the model domain")]
    OutsideDomain,
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    /// ℍ × ℍ
    One,
    /// 𝔹²
    Two,
}

#[derive(Clone, Debug, PartialEq)]
pub struct BallPoint<T> {
    pub z1: Cx<T>,
    pub z2: Cx<T>,
}

impl<T: Real> BallPoint<T> {
    pub fn new(z1: Cx<T>, z2: Cx<T>) -> Result<BallPoint<T>, SymSpaceError> {
        let p = BallPoint { z1, z2 };
        if p.norm_sqr().to_f64() < 1.0 {
            Ok(p)
        } else {
            Err(SymSpaceError::OutsideDomain)
        }
    }

    pub fn norm_sqr(&self) -> T {
        self.z1.norm_sqr() + self.z2.norm_sqr()
    }

    /// Affine point of a negative line (x₁ : x₂ : x₃).
    pub fn from_line(x: &[Cx<T>; 3]) -> Result<BallPoint<T>, SymSpaceError> {
        if x[2].norm_sqr().to_f64() == 0.0 {
            return Err(SymSpaceError::OutsideDomain);
        }
        BallPoint::new(x[0].div(&x[2]), x[1].div(&x[2]))
    }

    pub fn to_line(&self) -> [Cx<T>; 3] {
        let one = Cx::real(self.z1.re.one_like());
        [self.z1.clone(), self.z2.clone(), one]
    }

    /// Hyperbolic distance to the origin: cosh²(d/2) = 1/(1 − |z|²).
    pub fn distance_to_origin(&self) -> T {
        let one = self.z1.re.one_like();
        let c = (one.clone() / (one - self.norm_sqr())).sqrt();
        (c.acosh()) * self.z1.re.lit(2.0)
    }
}

/// cosh²(d/2) = |h(Z, W)|² / (h(Z, Z)·h(W, W)) for lifts Z = (z, 1), W = (w, 1).
pub fn ball_distance<T: Real>(a: &BallPoint<T>, b: &BallPoint<T>) -> T {
    let one = a.z1.re.one_like();
    let pair = a.z1.conj().mul(&b.z1).add(&a.z2.conj().mul(&b.z2)).sub(&Cx::real(one.clone()));
    let na = one.clone() - a.norm_sqr();
    let nb = one.clone() - b.norm_sqr();
    let c2 = pair.norm_sqr() / (na * nb);
    let c = c2.sqrt().max(one);
    c.acosh() * a.z1.re.lit(2.0)
}

#[derive(Clone, Debug, PartialEq)]
pub struct BidiskPoint<T> {
    pub w1: Cx<T>,
    pub w2: Cx<T>,
}

impl<T: Real> BidiskPoint<T> {
    pub fn new(w1: Cx<T>, w2: Cx<T>) -> Result<BidiskPoint<T>, SymSpaceError> {
        if w1.im.to_f64() > 0.0 && w2.im.to_f64() > 0.0 {
            Ok(BidiskPoint { w1, w2 })
        } else {
            Err(SymSpaceError::OutsideDomain)
        }
    }
}

/// A (1,1)-form at a point, α = (i/2) Σ α_{ij̄} dzᵢ ∧ dz̄ⱼ, stored by its
/// Hermitian coefficient matrix (α₂₁ = conj α₁₂).
#[derive(Clone, Debug, PartialEq)]
pub struct OneOneForm<T> {
    pub a11: T,
    pub a22: T,
    pub a12: Cx<T>,
}

impl<T: Real> OneOneForm<T> {
    /// The Kähler form ω (identity coefficients).
    pub fn kahler(prec: Precision) -> OneOneForm<T> {
        OneOneForm { a11: T::from_f64(prec, 1.0), a22: T::from_f64(prec, 1.0), a12: Cx::zero(prec) }
    }

    pub fn trace(&self) -> T {
        self.a11.clone() + self.a22.clone()
    }

    pub fn linear(&self, a: &T, other: &OneOneForm<T>, b: &T) -> OneOneForm<T> {
        OneOneForm {
            a11: self.a11.clone() * a.clone() + other.a11.clone() * b.clone(),
            a22: self.a22.clone() * a.clone() + other.a22.clone() * b.clone(),
            a12: self.a12.scale(a).add(&other.a12.scale(b)),
        }
    }
}

impl OneOneForm<f64> {
    pub fn new(a11: f64, a22: f64, a12: (f64, f64)) -> OneOneForm<f64> {
        OneOneForm { a11, a22, a12: Cx::new(a12.0, a12.1) }
    }
}

/// A tangent direction, normalized to |v₁|² + |v₂|² = 1.
#[derive(Clone, Debug, PartialEq)]
pub struct TangentDirection<T> {
    pub v1: Cx<T>,
    pub v2: Cx<T>,
}

impl<T: Real> TangentDirection<T> {
    pub fn new(v1: Cx<T>, v2: Cx<T>) -> Result<TangentDirection<T>, SymSpaceError> {
        let n = v1.norm_sqr() + v2.norm_sqr();
        if n.to_f64() == 0.0 {
            return Err(SymSpaceError::ZeroDirection);
        }
        let inv = n.one_like() / n.sqrt();
        Ok(TangentDirection { v1: v1.scale(&inv), v2: v2.scale(&inv) })
    }
}

/// φ_α([v]) = (α₁₁|v₁|² + α₂₂|v₂|² + 2·Im(α₁₂ v₁ v̄₂)) / |v|².
///
/// Accepts unnormalized components so scale invariance can be tested.
pub fn phi_alpha<T: Real>(alpha: &OneOneForm<T>, v1: &Cx<T>, v2: &Cx<T>) -> Result<T, SymSpaceError> {
    let n1 = v1.norm_sqr();
    let n2 = v2.norm_sqr();
    let total = n1.clone() + n2.clone();
    if total.to_f64() == 0.0 {
        return Err(SymSpaceError::ZeroDirection);
    }
    let cross = alpha.a12.mul(v1).mul(&v2.conj()).im;
    let num = alpha.a11.clone() * n1 + alpha.a22.clone() * n2 + cross.clone() + cross;
    Ok(num / total)
}

pub fn phi_alpha_dir<T: Real>(alpha: &OneOneForm<T>, dir: &TangentDirection<T>) -> T {
    phi_alpha(alpha, &dir.v1, &dir.v2).expect("normalized directions are nonzero")
}

/// Average of φ_α over a fiber with unit total mass.
///
/// Case Two integrates over ℙ¹ with the Fubini–Study area, using
/// [v] = (cos(θ/2), e^{iϕ} sin(θ/2)) and dA = sin θ dθ dϕ / 4π with Gauss–Legendre
/// rules in both variables. Case One averages over the circle (1 : e^{iθ})
/// with the trapezoid rule.
pub fn fiber_average(alpha: &OneOneForm<f64>, case: Case, order: usize) -> f64 {
    let order = order.max(4);
    match case {
        Case::Two => {
            let rule = GaussLegendre::new(std::num::NonZeroUsize::new(order).expect("order ≥ 4"));
            let inner = |theta: f64| {
                let (c, s) = ((theta / 2.0).cos(), (theta / 2.0).sin());
                let ring = rule.integrate(0.0, 2.0 * std::f64::consts::PI, |ph: f64| {
                    let v2 = Cx::new(s * ph.cos(), s * ph.sin());
                    phi_alpha(alpha, &Cx::new(c, 0.0), &v2).expect("unit vector")
                });
                ring * theta.sin()
            };
            rule.integrate(0.0, std::f64::consts::PI, inner) / (4.0 * std::f64::consts::PI)
        }
        Case::One => {
            let n = order;
            let mut sum = 0.0;
            for k in 0..n {
                let t = 2.0 * std::f64::consts::PI * k as f64 / n as f64;
                sum += phi_alpha(alpha, &Cx::new(1.0, 0.0), &Cx::new(t.cos(), t.sin())).expect("nonzero");
            }
            sum / n as f64
        }
    }
}

/// A point of either model.
#[derive(Clone, Debug, PartialEq)]
pub enum ModelPoint<T> {
    Ball(BallPoint<T>),
    Bidisk(BidiskPoint<T>),
}

/// Riemannian volume density against Lebesgue measure in the model
/// coordinates.
///
/// Ball: det g = s² / (1 − |z|²)³. Bidisk: (Im w₁ · Im w₂)⁻², each factor
/// of curvature −1.
pub fn kahler_area_density<T: Real>(point: &ModelPoint<T>, scale: f64) -> Result<T, SymSpaceError> {
    match point {
        ModelPoint::Ball(p) => {
            let one = p.z1.re.one_like();
            let d = one - p.norm_sqr();
            if d.to_f64() <= 0.0 {
                return Err(SymSpaceError::OutsideDomain);
            }
            let s = d.lit(scale);
            Ok(s.clone() * s / (d.clone() * d.clone() * d))
        }
        ModelPoint::Bidisk(p) => {
            if p.w1.im.to_f64() <= 0.0 || p.w2.im.to_f64() <= 0.0 {
                return Err(SymSpaceError::OutsideDomain);
            }
            let y = p.w1.im.clone() * p.w2.im.clone();
            Ok(y.one_like() / (y.clone() * y))
        }
    }
}

/// Area density s / (1 − |z|²)² of a complex geodesic in its unit-disk chart.
pub fn curve_area_density<T: Real>(z: &Cx<T>, scale: f64) -> Result<T, SymSpaceError> {
    let d = z.re.one_like() - z.norm_sqr();
    if d.to_f64() <= 0.0 {
        return Err(SymSpaceError::OutsideDomain);
    }
    Ok(d.lit(scale) / (d.clone() * d))
}

/// Holomorphic isometric embedding 𝔻 → 𝔹² onto the negative lines in ℓ⊥.
#[derive(Clone, Debug)]
pub struct GeodesicDisk<T> {
    pub conjugator: Mat3<T>,
    pub line: LatticeVector,
}

impl<T: Real> GeodesicDisk<T> {
    /// Image of z: the line g·(0, z, 1) = z·v₂/a₂ + v₃/a₃.
    pub fn point(&self, z: &Cx<T>) -> Result<BallPoint<T>, SymSpaceError> {
        let zero = Cx::real(z.re.zero_like());
        let one = Cx::real(z.re.one_like());
        let x = mat3_mul_vec(&self.conjugator, &[zero, z.clone(), one]);
        BallPoint::from_line(&x)
    }

    /// |h(ℓ, P)| / (|ℓ|·|P|) for the lifted image point P.
    pub fn orthogonality_residual(&self, p: &BallPoint<T>, prec: Precision) -> f64 {
        let l: Vec<Cx<T>> = self.line.coords.iter().map(|c| Cx::from_quad(prec, &crate::ring::QuadRat::from(c))).collect();
        let x = p.to_line();
        let pair = l[0].conj().mul(&x[0]).add(&l[1].conj().mul(&x[1])).sub(&l[2].conj().mul(&x[2]));
        let nl = l.iter().fold(z_like(&x[0]), |a, c| a + c.norm_sqr()).sqrt();
        let nx = x.iter().fold(z_like(&x[0]), |a, c| a + c.norm_sqr()).sqrt();
        (pair.abs() / (nl * nx)).to_f64()
    }
}

fn z_like<T: Real>(c: &Cx<T>) -> T {
    c.re.zero_like()
}

/// Builds the disk of ℓ from its orthogonal completion and conjugator.
pub fn geodesic_disk<T: Real>(
    h: &HermitianForm,
    line: &LatticeVector,
    prec: Precision,
    tolerance: f64,
) -> Result<GeodesicDisk<T>, SymSpaceError> {
    let basis = orthogonal_completion(h, line)?;
    let g = conjugator::<T>(h, &basis, prec, tolerance)?;
    Ok(GeodesicDisk { conjugator: g.matrix, line: line.clone() })
}
