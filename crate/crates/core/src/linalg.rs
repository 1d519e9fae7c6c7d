//! Small dense linear algebra over exact and floating fields.
//!
//! Everything here is Gauss–Jordan elimination on row-major matrices. Exact
//! fields test pivots for zero; `f64` uses partial pivoting with a relative
//! singularity threshold.

use std::fmt;

use rug::Rational;

use crate::ring::QuadRat;

pub trait Field: Clone + PartialEq + fmt::Debug {
    /// Pivots are tested for exact zero when true.
    const EXACT: bool;

    fn zero() -> Self;
    fn one() -> Self;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn inv(&self) -> Option<Self>;
    fn is_zero(&self) -> bool;
    /// Size used for pivot choice and float tolerances.
    fn magnitude(&self) -> f64;

    fn div(&self, rhs: &Self) -> Option<Self> {
        rhs.inv().map(|r| self.mul(&r))
    }
}

impl Field for f64 {
    const EXACT: bool = false;

    fn zero() -> f64 {
        0.0
    }
    fn one() -> f64 {
        1.0
    }
    fn add(&self, rhs: &f64) -> f64 {
        self + rhs
    }
    fn sub(&self, rhs: &f64) -> f64 {
        self - rhs
    }
    fn mul(&self, rhs: &f64) -> f64 {
        self * rhs
    }
    fn neg(&self) -> f64 {
        -self
    }
    fn inv(&self) -> Option<f64> {
        (*self != 0.0).then(|| 1.0 / self)
    }
    fn is_zero(&self) -> bool {
        *self == 0.0
    }
    fn magnitude(&self) -> f64 {
        self.abs()
    }
}

impl Field for Rational {
    const EXACT: bool = true;

    fn zero() -> Rational {
        Rational::new()
    }
    fn one() -> Rational {
        Rational::from(1)
    }
    fn add(&self, rhs: &Rational) -> Rational {
        Rational::from(self + rhs)
    }
    fn sub(&self, rhs: &Rational) -> Rational {
        Rational::from(self - rhs)
    }
    fn mul(&self, rhs: &Rational) -> Rational {
        Rational::from(self * rhs)
    }
    fn neg(&self) -> Rational {
        Rational::from(-self)
    }
    fn inv(&self) -> Option<Rational> {
        (self.cmp0() != std::cmp::Ordering::Equal).then(|| Rational::from(self.recip_ref()))
    }
    fn is_zero(&self) -> bool {
        self.cmp0() == std::cmp::Ordering::Equal
    }
    fn magnitude(&self) -> f64 {
        self.to_f64().abs()
    }
}

impl Field for QuadRat {
    const EXACT: bool = true;

    fn zero() -> QuadRat {
        QuadRat::zero()
    }
    fn one() -> QuadRat {
        QuadRat::one()
    }
    fn add(&self, rhs: &QuadRat) -> QuadRat {
        self + rhs
    }
    fn sub(&self, rhs: &QuadRat) -> QuadRat {
        self - rhs
    }
    fn mul(&self, rhs: &QuadRat) -> QuadRat {
        self * rhs
    }
    fn neg(&self) -> QuadRat {
        -self
    }
    fn inv(&self) -> Option<QuadRat> {
        QuadRat::inv(self).ok()
    }
    fn is_zero(&self) -> bool {
        QuadRat::is_zero(self)
    }
    fn magnitude(&self) -> f64 {
        self.norm().to_f64().sqrt()
    }
}

#[derive(Clone, PartialEq)]
pub struct Matrix<F> {
    rows: usize,
    cols: usize,
    data: Vec<F>,
}

impl<F: fmt::Debug> fmt::Debug for Matrix<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<&[F]> = self.data.chunks(self.cols.max(1)).collect();
        f.debug_list().entries(rows).finish()
    }
}

/// Relative pivot threshold for `f64` elimination.
const FLOAT_RANK_EPS: f64 = 1e-12;

impl<F: Field> Matrix<F> {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Matrix { rows, cols, data: vec![F::zero(); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = F::one();
        }
        m
    }

    pub fn from_rows(rows: Vec<Vec<F>>) -> Self {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        assert!(rows.iter().all(|row| row.len() == c), "ragged rows");
        Matrix { rows: r, cols: c, data: rows.into_iter().flatten().collect() }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> F) -> Self {
        let data = (0..rows * cols).map(|k| f(k / cols, k % cols)).collect();
        Matrix { rows, cols, data }
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn row(&self, i: usize) -> &[F] {
        &self.data[i * self.cols..(i + 1) * self.cols]
    }

    pub fn col(&self, j: usize) -> Vec<F> {
        (0..self.rows).map(|i| self[(i, j)].clone()).collect()
    }

    pub fn to_rows(&self) -> Vec<Vec<F>> {
        (0..self.rows).map(|i| self.row(i).to_vec()).collect()
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].clone())
    }

    pub fn map(&self, f: impl Fn(&F) -> F) -> Self {
        Matrix { rows: self.rows, cols: self.cols, data: self.data.iter().map(f).collect() }
    }

    pub fn mul(&self, rhs: &Self) -> Self {
        assert_eq!(self.cols, rhs.rows, "shape mismatch in product");
        Self::from_fn(self.rows, rhs.cols, |i, j| {
            (0..self.cols).fold(F::zero(), |acc, k| acc.add(&self[(i, k)].mul(&rhs[(k, j)])))
        })
    }

    pub fn mul_vec(&self, v: &[F]) -> Vec<F> {
        assert_eq!(self.cols, v.len());
        (0..self.rows)
            .map(|i| (0..self.cols).fold(F::zero(), |acc, k| acc.add(&self[(i, k)].mul(&v[k]))))
            .collect()
    }

    pub fn add(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].add(&rhs[(i, j)]))
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        assert_eq!((self.rows, self.cols), (rhs.rows, rhs.cols));
        Self::from_fn(self.rows, self.cols, |i, j| self[(i, j)].sub(&rhs[(i, j)]))
    }

    pub fn scale(&self, s: &F) -> Self {
        self.map(|x| x.mul(s))
    }

    pub fn is_zero(&self) -> bool {
        self.data.iter().all(F::is_zero)
    }

    pub fn trace(&self) -> F {
        (0..self.rows.min(self.cols)).fold(F::zero(), |acc, i| acc.add(&self[(i, i)]))
    }

    pub fn max_magnitude(&self) -> f64 {
        self.data.iter().map(F::magnitude).fold(0.0, f64::max)
    }

    /// Reduced row echelon form and pivot columns.
    pub fn rref(&self) -> (Self, Vec<usize>) {
        let mut m = self.clone();
        let scale = self.max_magnitude().max(f64::MIN_POSITIVE);
        let mut pivots = Vec::new();
        let mut r = 0;
        for c in 0..m.cols {
            if r == m.rows {
                break;
            }
            let candidate = if F::EXACT {
                (r..m.rows).find(|&i| !m[(i, c)].is_zero())
            } else {
                (r..m.rows)
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
                    .filter(|&i| m[(i, c)].magnitude() > FLOAT_RANK_EPS * scale)
            };
            let Some(p) = candidate else { continue };
            m.swap_rows(r, p);
            let inv = m[(r, c)].inv().expect("pivot is nonzero");
            for j in 0..m.cols {
                m[(r, j)] = m[(r, j)].mul(&inv);
            }
            for i in 0..m.rows {
                if i != r && !m[(i, c)].is_zero() {
                    let f = m[(i, c)].clone();
                    for j in 0..m.cols {
                        let t = m[(r, j)].mul(&f);
                        m[(i, j)] = m[(i, j)].sub(&t);
                    }
                }
            }
            pivots.push(c);
            r += 1;
        }
        (m, pivots)
    }

    pub fn rank(&self) -> usize {
        self.rref().1.len()
    }

    /// Basis of the right kernel {x : A x = 0}.
    pub fn kernel(&self) -> Vec<Vec<F>> {
        let (r, pivots) = self.rref();
        let free: Vec<usize> = (0..self.cols).filter(|c| !pivots.contains(c)).collect();
        free.iter()
            .map(|&f| {
                let mut x = vec![F::zero(); self.cols];
                x[f] = F::one();
                for (i, &p) in pivots.iter().enumerate() {
                    x[p] = r[(i, f)].neg();
                }
                x
            })
            .collect()
    }

    pub fn inverse(&self) -> Option<Self> {
        if !self.is_square() {
            return None;
        }
        let n = self.rows;
        let aug = Self::from_fn(n, 2 * n, |i, j| {
            if j < n {
                self[(i, j)].clone()
            } else if j - n == i {
                F::one()
            } else {
                F::zero()
            }
        });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some(Self::from_fn(n, n, |i, j| r[(i, j + n)].clone()))
    }

    /// Solve `A x = b` for square invertible `A`.
    pub fn solve(&self, b: &[F]) -> Option<Vec<F>> {
        let n = self.rows;
        if !self.is_square() || b.len() != n {
            return None;
        }
        let aug = Self::from_fn(n, n + 1, |i, j| if j < n { self[(i, j)].clone() } else { b[i].clone() });
        let (r, pivots) = aug.rref();
        if pivots.len() < n || pivots[n - 1] != n - 1 {
            return None;
        }
        Some((0..n).map(|i| r[(i, n)].clone()).collect())
    }

    /// Determinant by Gaussian elimination.
    pub fn det(&self) -> F {
        assert!(self.is_square());
        let mut m = self.clone();
        let n = self.rows;
        let mut det = F::one();
        for c in 0..n {
            let candidate = if F::EXACT {
                (c..n).find(|&i| !m[(i, c)].is_zero())
            } else {
                (c..n)
                    .max_by(|&a, &b| m[(a, c)].magnitude().total_cmp(&m[(b, c)].magnitude()))
                    .filter(|&i| !m[(i, c)].is_zero())
            };
            let Some(p) = candidate else { return F::zero() };
            if p != c {
                m.swap_rows(c, p);
                det = det.neg();
            }
            det = det.mul(&m[(c, c)]);
            let inv = m[(c, c)].inv().expect("pivot is nonzero");
            for i in c + 1..n {
                let f = m[(i, c)].mul(&inv);
                if f.is_zero() {
                    continue;
                }
                for j in c..n {
                    let t = m[(c, j)].mul(&f);
                    m[(i, j)] = m[(i, j)].sub(&t);
                }
            }
        }
        det
    }

    pub fn swap_rows(&mut self, a: usize, b: usize) {
        if a != b {
            for j in 0..self.cols {
                self.data.swap(a * self.cols + j, b * self.cols + j);
            }
        }
    }

    /// Submatrix on the given row and column index lists.
    pub fn select(&self, rows: &[usize], cols: &[usize]) -> Self {
        Self::from_fn(rows.len(), cols.len(), |i, j| self[(rows[i], cols[j])].clone())
    }
}

impl<F> std::ops::Index<(usize, usize)> for Matrix<F> {
    type Output = F;
    fn index(&self, (i, j): (usize, usize)) -> &F {
        &self.data[i * self.cols + j]
    }
}

impl<F> std::ops::IndexMut<(usize, usize)> for Matrix<F> {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut F {
        &mut self.data[i * self.cols + j]
    }
}

impl Matrix<QuadRat> {
    /// σ(A)ᵀ.
    pub fn conj_transpose(&self) -> Self {
        Self::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn conj(&self) -> Self {
        self.map(QuadRat::conj)
    }
}

pub fn dot<F: Field>(a: &[F], b: &[F]) -> F {
    a.iter().zip(b).fold(F::zero(), |acc, (x, y)| acc.add(&x.mul(y)))
}

/// Signs of the pivots of a symmetric congruence (LDLᵀ) diagonalization.
///
/// Works for real symmetric input over an exact field; zero pivots are
/// resolved by a symmetric row/column combination. Returns (positive,
/// negative, zero) counts.
pub fn symmetric_inertia(m: &Matrix<Rational>) -> (usize, usize, usize) {
    assert!(m.is_square());
    let n = m.rows();
    let mut a = m.clone();
    let (mut pos, mut neg, mut zero) = (0, 0, 0);
    let mut active: Vec<usize> = (0..n).collect();
    while let Some(&k) = active.first() {
        if Field::is_zero(&a[(k, k)]) {
            // find j with a_kj != 0 and replace row/col k by k + j (or k - j)
            let partner = active.iter().copied().find(|&j| j != k && !Field::is_zero(&a[(k, j)]));
            match partner {
                None => {
                    zero += 1;
                    active.remove(0);
                    continue;
                }
                Some(j) => {
                    let two_akj = Rational::from(&a[(k, j)] * 2u32);
                    let sign = if Field::is_zero(&Rational::from(&a[(j, j)] + &two_akj)) { -1 } else { 1 };
                    for c in 0..n {
                        let v = Rational::from(&a[(j, c)] * sign);
                        a[(k, c)] = Field::add(&a[(k, c)], &v);
                    }
                    for r in 0..n {
                        let v = Rational::from(&a[(r, j)] * sign);
                        a[(r, k)] = Field::add(&a[(r, k)], &v);
                    }
                }
            }
        }
        let pivot = a[(k, k)].clone();
        match pivot.cmp0() {
            std::cmp::Ordering::Greater => pos += 1,
            std::cmp::Ordering::Less => neg += 1,
            std::cmp::Ordering::Equal => unreachable!("pivot repaired above"),
        }
        active.remove(0);
        let inv = Field::inv(&pivot).unwrap();
        for &i in &active {
            let f = Rational::from(&a[(i, k)] * &inv);
            for &j in &active {
                let t = Rational::from(&a[(k, j)] * &f);
                a[(i, j)] = Field::sub(&a[(i, j)], &t);
            }
        }
    }
    (pos, neg, zero)
}
