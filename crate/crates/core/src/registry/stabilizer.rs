//! Stabilizers of positive lines and the lines fixed by hyperbolic elements.

use crate::hermitian::{char_poly_at_one, HermitianError, HermitianForm, IsometryMatrix, LatticeVector, VectorKind};
use crate::linalg::Matrix;
use crate::registry::fast::{self, G};
use crate::registry::RegistryError;
use crate::ring::{QuadRat, RingError};

/// Cap on candidate column pairs examined before the search gives up.
pub const DEFAULT_PAIR_BUDGET: u64 = 50_000_000;

#[derive(Clone, Debug, PartialEq)]
pub struct StabilizerSearch {
    /// Identity first, then by entry height and entries.
    pub elements: Vec<IsometryMatrix>,
    pub budget_exceeded: bool,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ElementKind {
    Identity,
    Elliptic,
    Parabolic,
    Hyperbolic,
    /// Not a stabilizer-type element (trace of the perpendicular block is not real).
    Other,
}

/// Type of γ restricted to the perpendicular plane, read off from
/// t = tr γ − 1 (the trace of the 2×2 block when γ fixes a positive vector).
pub fn classify_stabilizer_element(g: &IsometryMatrix) -> ElementKind {
    if g.is_identity() {
        return ElementKind::Identity;
    }
    let t = &g.trace() - &QuadRat::one();
    if !t.is_real() {
        return ElementKind::Other;
    }
    let t2 = t.re().square();
    match t2.cmp(&rug::Rational::from(4)) {
        std::cmp::Ordering::Greater => ElementKind::Hyperbolic,
        std::cmp::Ordering::Equal => ElementKind::Parabolic,
        std::cmp::Ordering::Less => ElementKind::Elliptic,
    }
}

pub fn stabilizer_generators(
    h: &HermitianForm,
    v: &LatticeVector,
    entry_bound: u32,
) -> Result<StabilizerSearch, RegistryError> {
    stabilizer_search(h, v, entry_bound, DEFAULT_PAIR_BUDGET)
}

/// All γ ∈ SU(h, ℤ[i]) with γv = v whose restriction to M₁ = v⊥ ∩ ℤ[i]³,
/// written in the basis from `perp_lattice`, has entries of magnitude
/// ≤ `entry_bound`.
///
/// Such γ preserve M₁, so γ = P·diag(1, A)·P⁻¹ with P = [v | w₁ | w₂] and A
/// an integral isometry of the binary form on M₁ with det A = 1. A is found
/// column by column; γ is kept when it is integral.
pub fn stabilizer_search(
    h: &HermitianForm,
    v: &LatticeVector,
    entry_bound: u32,
    pair_budget: u64,
) -> Result<StabilizerSearch, RegistryError> {
    if v.is_zero() {
        return Err(HermitianError::ZeroVector.into());
    }
    if !v.is_primitive().map_err(HermitianError::from)? {
        return Err(HermitianError::NotPrimitive.into());
    }
    if h.classify(v) != VectorKind::Positive {
        return Err(HermitianError::NotPositive.into());
    }
    let [w1, w2] = crate::hermitian::perp_lattice(h, v)?;
    let cols = [v.to_quad_rat(), w1.to_quad_rat(), w2.to_quad_rat()];
    let p = Matrix::from_fn(3, 3, |i, j| cols[j][i].clone());
    let p_inv = p.inverse().ok_or(HermitianError::Singular)?;
    let gram1 = |a: &[QuadRat], b: &[QuadRat]| -> Result<G, RegistryError> {
        let e = h.eval(a, b);
        let q = e
            .to_quad_int()
            .ok_or_else(|| RegistryError::Malformed("form is not integral on the lattice".into()))?;
        Ok((
            q.re.to_i64().ok_or(RegistryError::Malformed("form value too large".into()))?,
            q.im.to_i64().ok_or(RegistryError::Malformed("form value too large".into()))?,
        ))
    };
    let g00 = gram1(&cols[1], &cols[1])?;
    let g01 = gram1(&cols[1], &cols[2])?;
    let g11 = gram1(&cols[2], &cols[2])?;
    let g10 = fast::conj(g01);
    // h₁(x, y) = σ(x)ᵀ G₁ y on ℤ[i]²
    let h1 = |x: [G; 2], y: [G; 2]| -> Option<G> {
        let gy0 = fast::add(fast::mul(g00, y[0])?, fast::mul(g01, y[1])?)?;
        let gy1 = fast::add(fast::mul(g10, y[0])?, fast::mul(g11, y[1])?)?;
        fast::add(fast::mul(fast::conj(x[0]), gy0)?, fast::mul(fast::conj(x[1]), gy1)?)
    };

    let b = entry_bound as i64;
    let coords: Vec<G> = (-b..=b).flat_map(|re| (-b..=b).map(move |im| (re, im))).collect();
    let mut first = Vec::new();
    let mut second = Vec::new();
    for &a in &coords {
        for &c in &coords {
            let x = [a, c];
            let Some(n) = h1(x, x) else { continue };
            if n == g00 {
                first.push(x);
            }
            if n == g11 {
                second.push(x);
            }
        }
    }

    let mut elements = vec![IsometryMatrix::identity()];
    let mut budget_exceeded = false;
    let mut examined: u64 = 0;
    'outer: for x in &first {
        for y in &second {
            examined += 1;
            if examined > pair_budget {
                budget_exceeded = true;
                break 'outer;
            }
            if h1(*x, *y) != Some(g01) {
                continue;
            }
            let det = fast::mul(x[0], y[1]).zip(fast::mul(x[1], y[0])).and_then(|(p, q)| fast::sub(p, q));
            if det != Some((1, 0)) {
                continue;
            }
            if *x == [(1, 0), (0, 0)] && *y == [(0, 0), (1, 0)] {
                continue;
            }
            let q = |g: G| QuadRat::from_gauss(g.0, g.1);
            let mut block = Matrix::identity(3);
            block[(1, 1)] = q(x[0]);
            block[(2, 1)] = q(x[1]);
            block[(1, 2)] = q(y[0]);
            block[(2, 2)] = q(y[1]);
            let gamma = IsometryMatrix::new(p.mul(&block).mul(&p_inv));
            if gamma.is_integral() {
                elements.push(gamma);
            }
        }
    }
    elements[1..].sort_by(|a, b| {
        let key = |m: &IsometryMatrix| {
            let ints = m.to_quad_ints().expect("kept elements are integral");
            (m.entry_height(), ints)
        };
        key(a).cmp(&key(b))
    });
    Ok(StabilizerSearch { elements, budget_exceeded })
}

/// Primitive integral generator of the fixed line ker(γ − 1).
pub fn rational_line_from_element(h: &HermitianForm, g: &IsometryMatrix) -> Result<LatticeVector, RegistryError> {
    let (p1, dp1) = char_poly_at_one(g);
    if !p1.is_zero() || dp1.is_zero() {
        return Err(RegistryError::DegenerateElement);
    }
    let shifted = g.entries().sub(&Matrix::identity(3));
    let kernel = shifted.kernel();
    if kernel.len() != 1 {
        return Err(RegistryError::DegenerateElement);
    }
    let v = LatticeVector::primitive_from_rat(&kernel[0]).map_err(|e| match e {
        HermitianError::ZeroVector => RegistryError::DegenerateElement,
        other => other.into(),
    })?;
    if h.classify(&v) != VectorKind::Positive {
        return Err(RegistryError::NotPositiveLine);
    }
    Ok(v.canonical())
}

impl From<RingError> for RegistryError {
    fn from(e: RingError) -> Self {
        RegistryError::Hermitian(e.into())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hermitian::is_in_su;
    use crate::registry::GammaGenerators;

    fn seed() -> IsometryMatrix {
        IsometryMatrix::block([[(2, 1), (2, 0)], [(2, 0), (2, -1)]])
    }

    #[test]
    fn seed_witness_is_found_for_e1() {
        let h = HermitianForm::standard();
        let s = stabilizer_generators(&h, &LatticeVector::basis(0), 3).unwrap();
        assert!(!s.budget_exceeded);
        assert!(s.elements[0].is_identity());
        assert!(s.elements.contains(&seed()));
        for g in &s.elements {
            assert!(is_in_su(&h, g));
            assert_eq!(g.apply_lattice(&LatticeVector::basis(0)).unwrap(), LatticeVector::basis(0));
        }
        assert_eq!(classify_stabilizer_element(&seed()), ElementKind::Hyperbolic);
    }

    #[test]
    fn stabilizer_search_is_complete_for_small_bound() {
        // oracle: brute force over all 2×2 blocks with entries in [-1, 1]²
        let h = HermitianForm::standard();
        let found = stabilizer_generators(&h, &LatticeVector::basis(0), 1).unwrap().elements;
        let c: Vec<(i64, i64)> = (-1..=1).flat_map(|a| (-1..=1).map(move |b| (a, b))).collect();
        let mut brute = 0;
        for &a in &c { for &b in &c { for &d in &c { for &e in &c {
            let m = IsometryMatrix::block([[a, b], [d, e]]);
            if is_in_su(&h, &m) {
                brute += 1;
                assert!(found.contains(&m), "{:?}", m);
            }
        }}}}
        assert_eq!(brute, found.len());
    }

    #[test]
    fn stabilizer_errors() {
        let h = HermitianForm::standard();
        let v = LatticeVector::from_pairs([(2, 0), (0, 0), (0, 0)]);
        assert_eq!(
            stabilizer_generators(&h, &v, 2).unwrap_err(),
            RegistryError::Hermitian(HermitianError::NotPrimitive)
        );
        assert_eq!(
            stabilizer_generators(&h, &LatticeVector::basis(2), 2).unwrap_err(),
            RegistryError::Hermitian(HermitianError::NotPositive)
        );
    }

    #[test]
    fn line_recovery_examples() {
        let h = HermitianForm::standard();
        assert_eq!(rational_line_from_element(&h, &seed()).unwrap(), LatticeVector::basis(0));
        assert_eq!(
            rational_line_from_element(&h, &IsometryMatrix::identity()),
            Err(RegistryError::DegenerateElement)
        );
        let gens = GammaGenerators::default_set();
        for g in &gens.symmetric() {
            let conj = g.mul(&seed()).mul(&g.inverse().unwrap());
            let want = g.apply_lattice(&LatticeVector::basis(0)).unwrap().canonical();
            assert_eq!(rational_line_from_element(&h, &conj).unwrap(), want);
        }
    }

    #[test]
    fn elliptic_rotation_of_negative_line_is_rejected() {
        // fixes e₃ only (a rotation about a point of the ball)
        let h = HermitianForm::standard();
        let g = IsometryMatrix::from_gauss([
            [(0, 0), (-1, 0), (0, 0)],
            [(1, 0), (0, 0), (0, 0)],
            [(0, 0), (0, 0), (1, 0)],
        ]);
        assert_eq!(rational_line_from_element(&h, &g), Err(RegistryError::NotPositiveLine));
    }
}
