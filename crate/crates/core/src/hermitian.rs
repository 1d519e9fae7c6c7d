//! The Hermitian space (ℤ[i]³, h) of signature (2,1).
//!
//! Vectors are classified by the exact sign of h(v,v). Negative lines form
//! the complex ball; a positive line ℓ cuts out the totally geodesic disk
//! of negative lines inside ℓ⊥.

use std::fmt;

use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::int::Int;
use crate::linalg::{symmetric_inertia, Matrix};
use crate::real::{mat3_conj_transpose, mat3_max_diff, mat3_mul, Cx, Mat3, Precision, Real};
use crate::ring::{canonical_unit_multiple, is_primitive, QuadInt, QuadRat, RingError};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum HermitianError {
    #[error("gram matrix is not 3x3 Hermitian")]
    NotHermitian,
    #[error("form has signature ({0},{1}) with {2} null directions, expected (2,1)")]
    WrongSignature(usize, usize, usize),
    #[error("vector is not h-positive")]
    NotPositive,
    #[error("every completion order hits an isotropic vector")]
    IsotropicStep,
    #[error("basis does not have signature (+,+,-) or is not orthogonal")]
    SignatureViolated,
    #[error("conjugator residual {residual:e} exceeds tolerance {tolerance:e}")]
    PrecisionLoss { residual: f64, tolerance: f64 },
    #[error("zero vector")]
    ZeroVector,
    #[error("vector is not primitive")]
    NotPrimitive,
    #[error("matrix is not invertible")]
    Singular,
}

impl From<RingError> for HermitianError {
    fn from(e: RingError) -> Self {
        match e {
            RingError::ZeroVector => HermitianError::ZeroVector,
            _ => HermitianError::NotHermitian,
        }
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct HermitianForm {
    gram: Matrix<QuadRat>,
}

impl HermitianForm {
    /// Validates Hermitian symmetry and signature (2,1) exactly.
    pub fn new(gram: Matrix<QuadRat>) -> Result<HermitianForm, HermitianError> {
        if gram.rows() != 3 || !gram.is_square() || gram.conj_transpose() != gram {
            return Err(HermitianError::NotHermitian);
        }
        // realification [[A, -B], [B, A]] of A + iB doubles every inertia count
        let real = Matrix::from_fn(6, 6, |i, j| {
            let e = &gram[(i % 3, j % 3)];
            match (i < 3, j < 3) {
                (true, true) | (false, false) => e.re(),
                (true, false) => Rational::from(-e.im()),
                (false, true) => e.im(),
            }
        });
        let (p, n, z) = symmetric_inertia(&real);
        if (p, n, z) != (4, 2, 0) {
            return Err(HermitianError::WrongSignature(p / 2, n / 2, z / 2));
        }
        Ok(HermitianForm { gram })
    }

    /// diag(1, 1, −1).
    pub fn standard() -> HermitianForm {
        let mut g = Matrix::identity(3);
        g[(2, 2)] = QuadRat::from_int(-1);
        HermitianForm { gram: g }
    }

    pub fn gram(&self) -> &Matrix<QuadRat> {
        &self.gram
    }

    /// h(v, w) = σ(v)ᵀ·G·w.
    pub fn eval(&self, v: &[QuadRat], w: &[QuadRat]) -> QuadRat {
        let gw = self.gram.mul_vec(w);
        v.iter().zip(&gw).fold(QuadRat::zero(), |acc, (a, b)| &acc + &(&a.conj() * b))
    }

    pub fn eval_lattice(&self, v: &LatticeVector, w: &LatticeVector) -> QuadRat {
        self.eval(&v.to_quad_rat(), &w.to_quad_rat())
    }

    /// h(v, v) as an exact rational (its imaginary part vanishes).
    pub fn norm(&self, v: &[QuadRat]) -> Rational {
        let e = self.eval(v, v);
        debug_assert!(e.is_real());
        e.re()
    }

    pub fn classify(&self, v: &LatticeVector) -> VectorKind {
        match self.norm(&v.to_quad_rat()).cmp0() {
            std::cmp::Ordering::Greater => VectorKind::Positive,
            std::cmp::Ordering::Less => VectorKind::Negative,
            std::cmp::Ordering::Equal => VectorKind::Isotropic,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum VectorKind {
    Positive,
    Negative,
    Isotropic,
}

/// A vector of ℤ[i]³, serialized as `[[re, im], [re, im], [re, im]]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct LatticeVector {
    pub coords: [QuadInt; 3],
}

impl LatticeVector {
    pub fn new(coords: [QuadInt; 3]) -> LatticeVector {
        LatticeVector { coords }
    }

    pub fn from_pairs(p: [(i64, i64); 3]) -> LatticeVector {
        LatticeVector { coords: p.map(|(a, b)| QuadInt::new(a, b)) }
    }

    pub fn basis(i: usize) -> LatticeVector {
        let mut coords = [QuadInt::zero(), QuadInt::zero(), QuadInt::zero()];
        coords[i] = QuadInt::one();
        LatticeVector { coords }
    }

    pub fn to_quad_rat(&self) -> Vec<QuadRat> {
        self.coords.iter().map(QuadRat::from).collect()
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(QuadInt::is_zero)
    }

    pub fn is_primitive(&self) -> Result<bool, RingError> {
        is_primitive(&self.coords)
    }

    /// The unit multiple with canonical leading coordinate.
    pub fn canonical(&self) -> LatticeVector {
        let c = canonical_unit_multiple(&self.coords);
        LatticeVector { coords: [c[0].clone(), c[1].clone(), c[2].clone()] }
    }

    /// Largest coordinate magnitude max(|Re|, |Im|).
    pub fn height(&self) -> Int {
        self.coords.iter().map(QuadInt::magnitude).max().unwrap_or(Int::ZERO)
    }

    /// Integral primitive generator of the F-line through `v`.
    pub fn primitive_from_rat(v: &[QuadRat]) -> Result<LatticeVector, HermitianError> {
        if v.iter().all(QuadRat::is_zero) {
            return Err(HermitianError::ZeroVector);
        }
        let l = v.iter().fold(Int::ONE, |acc, x| {
            let g = acc.gcd(x.den());
            (&acc * x.den()).div_exact(&g)
        });
        let ints: Vec<QuadInt> = v
            .iter()
            .map(|x| x.num().scale(&l.div_exact(x.den())))
            .collect();
        let p = crate::ring::primitive_part(&ints)?;
        Ok(LatticeVector { coords: [p[0].clone(), p[1].clone(), p[2].clone()] })
    }

    pub fn same_line(&self, other: &LatticeVector) -> bool {
        self.canonical() == other.canonical()
    }
}

impl fmt::Display for LatticeVector {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {}, {})", self.coords[0], self.coords[1], self.coords[2])
    }
}

/// A 3×3 matrix over ℚ(i) acting on column vectors.
#[derive(Clone, Debug, PartialEq)]
pub struct IsometryMatrix {
    entries: Matrix<QuadRat>,
}

impl IsometryMatrix {
    pub fn new(entries: Matrix<QuadRat>) -> IsometryMatrix {
        assert!(entries.rows() == 3 && entries.cols() == 3, "isometries are 3x3");
        IsometryMatrix { entries }
    }

    pub fn identity() -> IsometryMatrix {
        IsometryMatrix { entries: Matrix::identity(3) }
    }

    pub fn from_gauss(rows: [[(i64, i64); 3]; 3]) -> IsometryMatrix {
        IsometryMatrix {
            entries: Matrix::from_fn(3, 3, |i, j| QuadRat::from_gauss(rows[i][j].0, rows[i][j].1)),
        }
    }

    pub fn from_quad_ints(rows: [[QuadInt; 3]; 3]) -> IsometryMatrix {
        IsometryMatrix { entries: Matrix::from_fn(3, 3, |i, j| QuadRat::from(&rows[i][j])) }
    }

    /// diag(1, A) for a 2×2 block A.
    pub fn block(a: [[(i64, i64); 2]; 2]) -> IsometryMatrix {
        Self::from_gauss([
            [(1, 0), (0, 0), (0, 0)],
            [(0, 0), a[0][0], a[0][1]],
            [(0, 0), a[1][0], a[1][1]],
        ])
    }

    pub fn entries(&self) -> &Matrix<QuadRat> {
        &self.entries
    }

    pub fn is_identity(&self) -> bool {
        self.entries == Matrix::identity(3)
    }

    pub fn is_integral(&self) -> bool {
        self.entries.to_rows().iter().flatten().all(QuadRat::is_integral)
    }

    /// Integer entries, if integral.
    pub fn to_quad_ints(&self) -> Option<[[QuadInt; 3]; 3]> {
        if !self.is_integral() {
            return None;
        }
        Some(std::array::from_fn(|i| {
            std::array::from_fn(|j| self.entries[(i, j)].to_quad_int().unwrap())
        }))
    }

    pub fn mul(&self, rhs: &IsometryMatrix) -> IsometryMatrix {
        IsometryMatrix { entries: self.entries.mul(&rhs.entries) }
    }

    pub fn inverse(&self) -> Result<IsometryMatrix, HermitianError> {
        self.entries
            .inverse()
            .map(|entries| IsometryMatrix { entries })
            .ok_or(HermitianError::Singular)
    }

    pub fn det(&self) -> QuadRat {
        self.entries.det()
    }

    pub fn trace(&self) -> QuadRat {
        self.entries.trace()
    }

    pub fn apply(&self, v: &[QuadRat]) -> Vec<QuadRat> {
        self.entries.mul_vec(v)
    }

    /// γ·v for an integral γ.
    pub fn apply_lattice(&self, v: &LatticeVector) -> Option<LatticeVector> {
        let w = self.apply(&v.to_quad_rat());
        let c: Option<Vec<QuadInt>> = w.iter().map(QuadRat::to_quad_int).collect();
        c.map(|c| LatticeVector { coords: [c[0].clone(), c[1].clone(), c[2].clone()] })
    }

    /// Largest coordinate magnitude of the entries (integral matrices only).
    pub fn entry_height(&self) -> Option<Int> {
        self.to_quad_ints()
            .map(|m| m.iter().flatten().map(QuadInt::magnitude).max().unwrap_or(Int::ZERO))
    }

    pub fn to_mat3<T: Real>(&self, prec: Precision) -> Mat3<T> {
        crate::real::mat3_from_quad(prec, &self.entries)
    }
}

/// True iff σ(g)ᵀ·G·g = G and det g = 1, decided exactly.
pub fn is_in_su(h: &HermitianForm, g: &IsometryMatrix) -> bool {
    let lhs = g.entries.conj_transpose().mul(&h.gram).mul(&g.entries);
    lhs == h.gram && g.det().is_one()
}

pub fn eval_h(h: &HermitianForm, v: &LatticeVector, w: &LatticeVector) -> QuadRat {
    h.eval_lattice(v, w)
}

/// An h-orthogonal basis (v₁, v₂, v₃) with signs (+, +, −), v₁ on the input line.
#[derive(Clone, Debug, PartialEq)]
pub struct OrthogonalBasis {
    pub vectors: [Vec<QuadRat>; 3],
    /// h(vᵢ, vᵢ).
    pub norms: [Rational; 3],
}

/// Exact Gram–Schmidt completion of a positive vector.
///
/// The complement is drawn from the standard basis in every order until no
/// intermediate vector is isotropic. Each output vector is scaled to a
/// primitive integral vector.
pub fn orthogonal_completion(
    h: &HermitianForm,
    v: &LatticeVector,
) -> Result<OrthogonalBasis, HermitianError> {
    if v.is_zero() {
        return Err(HermitianError::ZeroVector);
    }
    let v1 = v.to_quad_rat();
    let n1 = h.norm(&v1);
    if n1.cmp0() != std::cmp::Ordering::Greater {
        return Err(HermitianError::NotPositive);
    }
    const ORDERS: [[usize; 3]; 6] = [[0, 1, 2], [0, 2, 1], [1, 0, 2], [1, 2, 0], [2, 0, 1], [2, 1, 0]];
    'order: for order in ORDERS {
        let mut found: Vec<(Vec<QuadRat>, Rational)> = vec![(v1.clone(), n1.clone())];
        for &idx in &order {
            if found.len() == 3 {
                break;
            }
            let mut w = LatticeVector::basis(idx).to_quad_rat();
            for (u, nu) in &found {
                let coef = &h.eval(u, &w) * &QuadRat::from_rational(&Rational::from(nu.recip_ref()));
                w = sub_scaled(&w, u, &coef);
            }
            if w.iter().all(QuadRat::is_zero) {
                continue;
            }
            let w = LatticeVector::primitive_from_rat(&w)?.to_quad_rat();
            let nw = h.norm(&w);
            if nw.cmp0() == std::cmp::Ordering::Equal {
                continue 'order;
            }
            found.push((w, nw));
        }
        if found.len() < 3 {
            continue;
        }
        let (pos, neg): (Vec<_>, Vec<_>) =
            found.drain(1..).partition(|(_, n)| n.cmp0() == std::cmp::Ordering::Greater);
        if pos.len() != 1 || neg.len() != 1 {
            return Err(HermitianError::SignatureViolated);
        }
        let (v2, n2) = pos.into_iter().next().unwrap();
        let (v3, n3) = neg.into_iter().next().unwrap();
        return Ok(OrthogonalBasis { vectors: [v1, v2, v3], norms: [n1, n2, n3] });
    }
    Err(HermitianError::IsotropicStep)
}

fn sub_scaled(w: &[QuadRat], u: &[QuadRat], c: &QuadRat) -> Vec<QuadRat> {
    w.iter().zip(u).map(|(a, b)| a - &(c * b)).collect()
}

impl OrthogonalBasis {
    /// Rebuild from explicit vectors, checking orthogonality and the (+,+,−) signs.
    pub fn from_vectors(h: &HermitianForm, vectors: [Vec<QuadRat>; 3]) -> Result<OrthogonalBasis, HermitianError> {
        for i in 0..3 {
            for j in 0..i {
                if !h.eval(&vectors[i], &vectors[j]).is_zero() {
                    return Err(HermitianError::SignatureViolated);
                }
            }
        }
        let norms: [Rational; 3] = std::array::from_fn(|i| h.norm(&vectors[i]));
        let signs = norms.clone().map(|n| n.cmp0());
        use std::cmp::Ordering::*;
        if signs != [Greater, Greater, Less] {
            return Err(HermitianError::SignatureViolated);
        }
        Ok(OrthogonalBasis { vectors, norms })
    }
}

/// Floating conjugator g with g·eᵢ = vᵢ/aᵢ, aᵢ = √|h(vᵢ,vᵢ)|.
#[derive(Clone, Debug)]
pub struct Conjugator<T> {
    pub matrix: Mat3<T>,
    /// max |σ(g)ᵀ·G·g − J| with J = diag(1,1,−1).
    pub residual: f64,
}

/// Builds the conjugator of an orthogonal completion.
///
/// g carries the standard form J = diag(1,1,−1) to h, so σ(g)ᵀ·G·g = J; with
/// the default form this is the residual against the gram matrix itself.
pub fn conjugator<T: Real>(
    h: &HermitianForm,
    basis: &OrthogonalBasis,
    prec: Precision,
    tolerance: f64,
) -> Result<Conjugator<T>, HermitianError> {
    let checked = OrthogonalBasis::from_vectors(h, basis.vectors.clone())?;
    let scales: [T; 3] = std::array::from_fn(|i| {
        T::from_rational(prec, &Rational::from(checked.norms[i].abs_ref())).sqrt()
    });
    let matrix: Mat3<T> = std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let e = Cx::<T>::from_quad(prec, &checked.vectors[c][r]);
            Cx::new(e.re / scales[c].clone(), e.im / scales[c].clone())
        })
    });
    let gram: Mat3<T> = crate::real::mat3_from_quad(prec, &h.gram);
    let pulled = mat3_mul(&mat3_conj_transpose(&matrix), &mat3_mul(&gram, &matrix));
    let j: Mat3<T> = std::array::from_fn(|r| {
        std::array::from_fn(|c| {
            let v = if r != c { 0.0 } else if r == 2 { -1.0 } else { 1.0 };
            Cx::from_f64(prec, v, 0.0)
        })
    });
    let residual = mat3_max_diff(&pulled, &j);
    if !(residual <= tolerance) {
        return Err(HermitianError::PrecisionLoss { residual, tolerance });
    }
    Ok(Conjugator { matrix, residual })
}

/// ℤ[i]-basis of M₁ = v⊥ ∩ ℤ[i]³.
///
/// Column operations over the Euclidean ring ℤ[i] reduce the linear form
/// w ↦ h(v, w) to (g, 0, 0); the last two columns of the accumulated
/// unimodular transform span its kernel.
pub fn perp_lattice(h: &HermitianForm, v: &LatticeVector) -> Result<[LatticeVector; 2], HermitianError> {
    if v.is_zero() {
        return Err(HermitianError::ZeroVector);
    }
    if !v.is_primitive()? {
        return Err(HermitianError::NotPrimitive);
    }
    let vr = v.to_quad_rat();
    // row vector σ(v)ᵀ G
    let form: Vec<QuadRat> = (0..3)
        .map(|j| (0..3).fold(QuadRat::zero(), |acc, k| &acc + &(&vr[k].conj() * &h.gram[(k, j)])))
        .collect();
    let l = form.iter().fold(Int::ONE, |acc, x| {
        let g = acc.gcd(x.den());
        (&acc * x.den()).div_exact(&g)
    });
    let mut c: Vec<QuadInt> = form.iter().map(|x| x.num().scale(&l.div_exact(x.den()))).collect();
    let mut u: [[QuadInt; 3]; 3] = std::array::from_fn(|i| {
        std::array::from_fn(|j| if i == j { QuadInt::one() } else { QuadInt::zero() })
    });
    loop {
        let nonzero: Vec<usize> = (0..3).filter(|&j| !c[j].is_zero()).collect();
        if nonzero.len() <= 1 {
            if let Some(&j) = nonzero.first() {
                swap_cols(&mut c, &mut u, 0, j);
            }
            break;
        }
        let p = *nonzero.iter().min_by_key(|&&j| c[j].norm()).unwrap();
        swap_cols(&mut c, &mut u, 0, p);
        for j in 1..3 {
            if c[j].is_zero() {
                continue;
            }
            let (q, r) = c[j].div_rem(&c[0]);
            c[j] = r;
            for row in u.iter_mut() {
                let t = &q * &row[0];
                row[j] = &row[j] - &t;
            }
        }
    }
    let col = |j: usize| [u[0][j].clone(), u[1][j].clone(), u[2][j].clone()];
    let (a, b) = gauss_reduce(col(1), col(2));
    Ok([LatticeVector::new(a).canonical(), LatticeVector::new(b).canonical()])
}

/// Lagrange–Gauss reduction of a rank-2 ℤ[i]-lattice for the standard
/// Euclidean inner product on ℂ³; the span is unchanged.
fn gauss_reduce(mut a: [QuadInt; 3], mut b: [QuadInt; 3]) -> ([QuadInt; 3], [QuadInt; 3]) {
    let dot = |x: &[QuadInt; 3], y: &[QuadInt; 3]| {
        x.iter().zip(y).fold(QuadInt::zero(), |acc, (p, q)| &acc + &(&p.conj() * q))
    };
    loop {
        if dot(&b, &b).re < dot(&a, &a).re {
            std::mem::swap(&mut a, &mut b);
        }
        // nearest Gaussian integer to ⟨a, b⟩ / ⟨a, a⟩
        let (q, _) = dot(&a, &b).div_rem(&dot(&a, &a));
        let next: [QuadInt; 3] = std::array::from_fn(|k| &b[k] - &(&q * &a[k]));
        // stop unless strictly shorter (rounding ties could cycle)
        if q.is_zero() || dot(&next, &next).re >= dot(&b, &b).re {
            return (a, b);
        }
        b = next;
    }
}

fn swap_cols(c: &mut [QuadInt], u: &mut [[QuadInt; 3]; 3], a: usize, b: usize) {
    if a == b {
        return;
    }
    c.swap(a, b);
    for row in u.iter_mut() {
        row.swap(a, b);
    }
}

/// The identity-fixing check used across modules: γ·v = v exactly.
pub fn fixes(g: &IsometryMatrix, v: &LatticeVector) -> bool {
    g.apply(&v.to_quad_rat()) == v.to_quad_rat()
}

/// Exact characteristic data of γ − 1: returns (p(1), p'(1)) for the
/// characteristic polynomial p(t) = det(t − γ).
pub fn char_poly_at_one(g: &IsometryMatrix) -> (QuadRat, QuadRat) {
    let m = g.entries();
    let tr = m.trace();
    let c2 = {
        let minor = |a: usize, b: usize| &(&m[(a, a)] * &m[(b, b)]) - &(&m[(a, b)] * &m[(b, a)]);
        &(&minor(0, 1) + &minor(0, 2)) + &minor(1, 2)
    };
    let det = g.det();
    // p(t) = t³ − tr·t² + c2·t − det
    let one = QuadRat::one();
    let p1 = &(&(&one - &tr) + &c2) - &det;
    let three = QuadRat::from_int(3);
    let two_tr = &tr + &tr;
    let dp1 = &(&three - &two_tr) + &c2;
    (p1, dp1)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::real::Hp;

    fn lv(p: [(i64, i64); 3]) -> LatticeVector {
        LatticeVector::from_pairs(p)
    }

    fn seed_witness() -> IsometryMatrix {
        IsometryMatrix::block([[(2, 1), (2, 0)], [(2, 0), (2, -1)]])
    }

    #[test]
    fn eval_examples() {
        let h = HermitianForm::standard();
        let e1 = lv([(1, 0), (0, 0), (0, 0)]);
        let e3 = lv([(0, 0), (0, 0), (1, 0)]);
        assert_eq!(eval_h(&h, &e1, &e1), QuadRat::from_int(1));
        assert_eq!(eval_h(&h, &e3, &e3), QuadRat::from_int(-1));
        let v = lv([(1, 1), (1, 0), (0, 0)]);
        assert_eq!(eval_h(&h, &v, &v), QuadRat::from_int(3));
    }

    #[test]
    fn form_validation() {
        assert!(HermitianForm::new(HermitianForm::standard().gram().clone()).is_ok());
        let definite = Matrix::identity(3);
        assert!(matches!(HermitianForm::new(definite), Err(HermitianError::WrongSignature(3, 0, 0))));
        let mut skew = HermitianForm::standard().gram().clone();
        skew[(0, 1)] = QuadRat::from_gauss(0, 1);
        assert_eq!(HermitianForm::new(skew), Err(HermitianError::NotHermitian));
        // a Hermitian form with off-diagonal imaginary entries and signature (2,1)
        let mut g = HermitianForm::standard().gram().clone();
        g[(0, 1)] = QuadRat::from_gauss(0, 1);
        g[(1, 0)] = QuadRat::from_gauss(0, -1);
        g[(1, 1)] = QuadRat::from_int(2);
        assert!(HermitianForm::new(g).is_ok());
    }

    #[test]
    fn su_membership_examples() {
        let h = HermitianForm::standard();
        assert!(is_in_su(&h, &IsometryMatrix::identity()));
        let scalar_i = IsometryMatrix::from_gauss([
            [(0, 1), (0, 0), (0, 0)],
            [(0, 0), (0, 1), (0, 0)],
            [(0, 0), (0, 0), (0, 1)],
        ]);
        assert_eq!(scalar_i.det(), QuadRat::from_gauss(0, -1));
        assert!(!is_in_su(&h, &scalar_i));
        let g = seed_witness();
        assert_eq!(g.det(), QuadRat::one());
        assert!(is_in_su(&h, &g));
    }

    #[test]
    fn completion_examples() {
        let h = HermitianForm::standard();
        let b = orthogonal_completion(&h, &lv([(1, 0), (0, 0), (0, 0)])).unwrap();
        let e = |i| LatticeVector::basis(i).to_quad_rat();
        assert_eq!(b.vectors, [e(0), e(1), e(2)]);
        let b = orthogonal_completion(&h, &lv([(1, 0), (1, 0), (0, 0)])).unwrap();
        assert_eq!(b.vectors[1], lv([(1, 0), (-1, 0), (0, 0)]).to_quad_rat());
        assert_eq!(b.vectors[2], e(2));
        assert_eq!(
            orthogonal_completion(&h, &lv([(0, 0), (0, 0), (1, 0)])),
            Err(HermitianError::NotPositive)
        );
    }

    #[test]
    fn completion_spans_and_is_orthogonal_for_many_vectors() {
        let h = HermitianForm::standard();
        let mut checked = 0;
        for a in -2..=2 {
            for b in -2..=2 {
                for c in -1..=1 {
                    let v = lv([(a, b), (b - a, 1), (c, a)]);
                    if h.classify(&v) != VectorKind::Positive {
                        continue;
                    }
                    let basis = orthogonal_completion(&h, &v).unwrap();
                    let m = Matrix::from_fn(3, 3, |i, j| basis.vectors[j][i].clone());
                    assert!(!m.det().is_zero());
                    OrthogonalBasis::from_vectors(&h, basis.vectors.clone()).unwrap();
                    let conj = conjugator::<Hp>(&h, &basis, Precision::digits(100), 1e-25).unwrap();
                    assert!(conj.residual <= 1e-25);
                    checked += 1;
                }
            }
        }
        assert!(checked > 20);
    }

    #[test]
    fn conjugator_examples() {
        let h = HermitianForm::standard();
        let prec = Precision::digits(100);
        let b = orthogonal_completion(&h, &LatticeVector::basis(0)).unwrap();
        let g = conjugator::<Hp>(&h, &b, prec, 1e-25).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let want = if i == j { 1.0 } else { 0.0 };
                assert!((g.matrix[i][j].re.to_f64() - want).abs() < 1e-30);
            }
        }
        let b = orthogonal_completion(&h, &lv([(1, 0), (1, 0), (0, 0)])).unwrap();
        let g = conjugator::<Hp>(&h, &b, prec, 1e-25).unwrap();
        let s = std::f64::consts::FRAC_1_SQRT_2;
        let want = [[s, s, 0.0], [s, -s, 0.0], [0.0, 0.0, 1.0]];
        for i in 0..3 {
            for j in 0..3 {
                assert!((g.matrix[i][j].re.to_f64() - want[i][j]).abs() < 1e-15);
            }
        }
        assert!(g.residual < 1e-90);
        let bad = OrthogonalBasis {
            vectors: [b.vectors[0].clone(), b.vectors[2].clone(), b.vectors[1].clone()],
            norms: [b.norms[0].clone(), b.norms[2].clone(), b.norms[1].clone()],
        };
        assert_eq!(conjugator::<Hp>(&h, &bad, prec, 1e-25).unwrap_err(), HermitianError::SignatureViolated);
    }

    #[test]
    fn conjugator_tolerance_is_enforced() {
        let h = HermitianForm::standard();
        let b = orthogonal_completion(&h, &lv([(1, 1), (1, 0), (0, 0)])).unwrap();
        let err = conjugator::<Hp>(&h, &b, Precision::digits(30), 1e-40).unwrap_err();
        assert!(matches!(err, HermitianError::PrecisionLoss { .. }));
    }

    #[test]
    fn perp_lattice_examples() {
        let h = HermitianForm::standard();
        let [a, b] = perp_lattice(&h, &LatticeVector::basis(0)).unwrap();
        assert_eq!([a, b], [LatticeVector::basis(1), LatticeVector::basis(2)]);
        let v = lv([(1, 0), (1, 0), (0, 0)]);
        let pair = perp_lattice(&h, &v).unwrap();
        assert!(pair.contains(&lv([(1, 0), (-1, 0), (0, 0)])));
        assert!(pair.contains(&LatticeVector::basis(2)));
        assert_eq!(perp_lattice(&h, &lv([(2, 0), (0, 0), (0, 0)])), Err(HermitianError::NotPrimitive));
    }

    #[test]
    fn perp_lattice_is_saturated_kernel() {
        let h = HermitianForm::standard();
        let v = lv([(2, 1), (1, -1), (1, 1)]);
        let [a, b] = perp_lattice(&h, &v).unwrap();
        assert!(eval_h(&h, &v, &a).is_zero() && eval_h(&h, &v, &b).is_zero());
        // a brute-force kernel vector must lie in the ℤ[i]-span of (a, b)
        let m = Matrix::from_fn(3, 2, |i, j| if j == 0 { a.to_quad_rat()[i].clone() } else { b.to_quad_rat()[i].clone() });
        let mut tested = 0;
        let box_: Vec<(i64, i64)> = (-2..=2).flat_map(|a| (-2..=2).map(move |b| (a, b))).collect();
        for &p in &box_ {
            for &q in &box_ {
                for &r in &box_ {
                    let w = lv([p, q, r]);
                    if w.is_zero() || !eval_h(&h, &v, &w).is_zero() {
                        continue;
                    }
                    // solve m·c = w over ℚ(i) using two independent rows
                    let rows = [[0, 1], [0, 2], [1, 2]];
                    let coeffs = rows.iter().find_map(|r| {
                        let sub = m.select(r, &[0, 1]);
                        let rhs: Vec<QuadRat> = r.iter().map(|&i| w.to_quad_rat()[i].clone()).collect();
                        sub.solve(&rhs)
                    });
                    let c = coeffs.unwrap();
                    assert!(c.iter().all(QuadRat::is_integral), "{w} not in span");
                    tested += 1;
                }
            }
        }
        assert!(tested > 0);
    }

    #[test]
    fn hermitian_symmetry_random_pairs() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(7);
        let mut g = HermitianForm::standard().gram().clone();
        g[(0, 2)] = QuadRat::from_gauss(1, 2);
        g[(2, 0)] = QuadRat::from_gauss(1, -2);
        let h = HermitianForm::new(g).unwrap();
        for _ in 0..1000 {
            let mut r = || rng.gen_range(-9..=9i64);
            let v = lv([(r(), r()), (r(), r()), (r(), r())]);
            let w = lv([(r(), r()), (r(), r()), (r(), r())]);
            assert_eq!(eval_h(&h, &v, &w), eval_h(&h, &w, &v).conj());
            assert!(eval_h(&h, &v, &v).is_real());
        }
    }

    #[test]
    fn char_poly_detects_simple_eigenvalue() {
        let (p, dp) = char_poly_at_one(&seed_witness());
        assert!(p.is_zero());
        assert!(!dp.is_zero());
        let (p, dp) = char_poly_at_one(&IsometryMatrix::identity());
        assert!(p.is_zero() && dp.is_zero());
    }
}
