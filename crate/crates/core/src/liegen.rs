//! Bracket closure in the two model Lie algebras.
//!
//! Case One is sl₂ ⊕ sl₂ as block-diagonal 4×4 real matrices with h the
//! diagonal sl₂. Case Two is su(2,1) for diag(1,1,−1) with h the su(1,1)
//! acting on span(e₂, e₃) and killing e₁. Matrices have ℚ(i) entries and
//! spans are taken over ℚ on the real and imaginary parts, so every rank is
//! exact.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::linalg::{Field, Matrix};
use crate::ring::QuadRat;

pub type LieMatrix = Matrix<QuadRat>;

/// Random trial coefficients are drawn from -COEFF_RANGE..=COEFF_RANGE.
pub const COEFF_RANGE: i64 = 3;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum LieError {
    #[error("matrices of shapes {0:?} and {1:?} cannot be bracketed")]
    ShapeMismatch((usize, usize), (usize, usize)),
    #[error("seed {0} is not in the span of the algebra basis")]
    NotInAlgebra(usize),
    #[error("{0}")]
    InvalidArgument(String),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Case {
    One,
    Two,
}

pub fn bracket(x: &LieMatrix, y: &LieMatrix) -> Result<LieMatrix, LieError> {
    if !x.is_square() || (x.rows(), x.cols()) != (y.rows(), y.cols()) {
        return Err(LieError::ShapeMismatch((x.rows(), x.cols()), (y.rows(), y.cols())));
    }
    Ok(x.mul(y).sub(&y.mul(x)))
}

/// Real and imaginary parts of every entry, row-major.
fn coords(m: &LieMatrix) -> Vec<Rational> {
    m.to_rows().iter().flatten().flat_map(|z| [z.re(), z.im()]).collect()
}

fn from_coords(v: &[Rational], n: usize) -> LieMatrix {
    Matrix::from_fn(n, n, |i, j| {
        let k = 2 * (i * n + j);
        QuadRat::from_rational(&v[k]).add(&QuadRat::from_rational(&v[k + 1]).mul(&QuadRat::from_gauss(0, 1)))
    })
}

/// Incrementally maintained reduced row echelon basis over ℚ.
#[derive(Clone, Debug, Default)]
struct Span {
    rows: Vec<Vec<Rational>>,
    pivots: Vec<usize>,
}

impl Span {
    fn reduce(&self, v: &[Rational]) -> Vec<Rational> {
        let mut v = v.to_vec();
        for (row, &p) in self.rows.iter().zip(&self.pivots) {
            if !Field::is_zero(&v[p]) {
                let f = v[p].clone();
                for (x, r) in v.iter_mut().zip(row) {
                    *x = Field::sub(x, &Field::mul(r, &f));
                }
            }
        }
        v
    }

    fn contains(&self, v: &[Rational]) -> bool {
        self.reduce(v).iter().all(Field::is_zero)
    }

    /// Returns false if `v` was already in the span.
    fn insert(&mut self, v: &[Rational]) -> bool {
        let mut v = self.reduce(v);
        let Some(p) = v.iter().position(|x| !Field::is_zero(x)) else { return false };
        let inv = Field::inv(&v[p]).unwrap();
        for x in &mut v {
            *x = Field::mul(x, &inv);
        }
        for row in &mut self.rows {
            if !Field::is_zero(&row[p]) {
                let f = row[p].clone();
                for (x, r) in row.iter_mut().zip(&v) {
                    *x = Field::sub(x, &Field::mul(r, &f));
                }
            }
        }
        let at = self.pivots.partition_point(|&q| q < p);
        self.rows.insert(at, v);
        self.pivots.insert(at, p);
        true
    }

    fn dim(&self) -> usize {
        self.rows.len()
    }
}

#[derive(Clone, Debug)]
pub struct LieAlgebraModel {
    pub case: Case,
    pub basis: Vec<LieMatrix>,
    pub h_basis: Vec<LieMatrix>,
    span: Span,
    h_span: Span,
}

fn unit(n: usize, i: usize, j: usize, z: QuadRat) -> LieMatrix {
    let mut m = Matrix::zeros(n, n);
    m[(i, j)] = z;
    m
}

fn q(v: i64) -> QuadRat {
    QuadRat::from_int(v)
}

fn iq(v: i64) -> QuadRat {
    QuadRat::from_gauss(0, v)
}

fn sl2_block(offset: usize, which: usize) -> LieMatrix {
    let o = offset;
    match which {
        0 => unit(4, o, o + 1, q(1)),
        1 => unit(4, o + 1, o, q(1)),
        _ => unit(4, o, o, q(1)).add(&unit(4, o + 1, o + 1, q(-1))),
    }
}

impl LieAlgebraModel {
    pub fn new(case: Case) -> LieAlgebraModel {
        let (basis, h_basis) = match case {
            Case::One => {
                let basis: Vec<LieMatrix> =
                    [0, 2].iter().flat_map(|&o| (0..3).map(move |w| sl2_block(o, w))).collect();
                let h = (0..3).map(|w| sl2_block(0, w).add(&sl2_block(2, w))).collect();
                (basis, h)
            }
            Case::Two => {
                let e = |i, j, z| unit(3, i, j, z);
                let basis = vec![
                    e(0, 0, iq(1)).add(&e(1, 1, iq(-1))),
                    e(1, 1, iq(1)).add(&e(2, 2, iq(-1))),
                    e(0, 1, q(1)).add(&e(1, 0, q(-1))),
                    e(0, 1, iq(1)).add(&e(1, 0, iq(1))),
                    e(0, 2, q(1)).add(&e(2, 0, q(1))),
                    e(0, 2, iq(1)).add(&e(2, 0, iq(-1))),
                    e(1, 2, q(1)).add(&e(2, 1, q(1))),
                    e(1, 2, iq(1)).add(&e(2, 1, iq(-1))),
                ];
                let h = vec![basis[1].clone(), basis[6].clone(), basis[7].clone()];
                (basis, h)
            }
        };
        let mut span = Span::default();
        for b in &basis {
            span.insert(&coords(b));
        }
        let mut h_span = Span::default();
        for b in &h_basis {
            h_span.insert(&coords(b));
        }
        LieAlgebraModel { case, basis, h_basis, span, h_span }
    }

    pub fn size(&self) -> usize {
        self.basis[0].rows()
    }

    /// Dimension of the span of the basis over ℝ.
    pub fn dim(&self) -> usize {
        self.span.dim()
    }

    pub fn h_dim(&self) -> usize {
        self.h_span.dim()
    }

    pub fn contains(&self, x: &LieMatrix) -> bool {
        x.rows() == self.size() && self.span.contains(&coords(x))
    }

    pub fn in_h(&self, x: &LieMatrix) -> bool {
        x.rows() == self.size() && self.h_span.contains(&coords(x))
    }

    /// Σ c_k·basis_k.
    pub fn combine(&self, coeffs: &[i64]) -> LieMatrix {
        self.basis
            .iter()
            .zip(coeffs)
            .fold(Matrix::zeros(self.size(), self.size()), |acc, (b, &c)| acc.add(&b.scale(&q(c))))
    }
}

#[derive(Clone, Debug)]
pub struct Generated {
    pub dim: usize,
    /// Echelonized over ℚ in the real/imaginary entry coordinates.
    pub basis: Vec<LieMatrix>,
}

/// Closes span(seeds) under brackets until the span stops growing.
pub fn generated_subalgebra(model: &LieAlgebraModel, seeds: &[LieMatrix]) -> Result<Generated, LieError> {
    let mut span = Span::default();
    let mut elems: Vec<LieMatrix> = Vec::new();
    for (k, s) in seeds.iter().enumerate() {
        if !model.contains(s) {
            if s.rows() != model.size() || !s.is_square() {
                return Err(LieError::ShapeMismatch((s.rows(), s.cols()), (model.size(), model.size())));
            }
            return Err(LieError::NotInAlgebra(k));
        }
        if span.insert(&coords(s)) {
            elems.push(s.clone());
        }
    }
    // brackets of every new element against everything found so far
    let mut done = 0;
    while done < elems.len() {
        let x = elems[done].clone();
        for j in 0..=done {
            let b = bracket(&x, &elems[j])?;
            if span.insert(&coords(&b)) {
                elems.push(b);
            }
        }
        done += 1;
    }
    let n = model.size();
    Ok(Generated { dim: span.dim(), basis: span.rows.iter().map(|r| from_coords(r, n)).collect() })
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Trial {
    pub index: usize,
    pub coefficients: Vec<i64>,
    /// Entries rendered as `a+bi` strings.
    pub matrix: Vec<Vec<String>>,
    pub rejected_draws: usize,
    pub dimension: usize,
    pub passed: bool,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct SupergroupReport {
    pub case: Case,
    pub seed: u64,
    pub dim_g: usize,
    pub dim_h: usize,
    pub passes: usize,
    pub failures: usize,
    pub trials: Vec<Trial>,
}

impl SupergroupReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Draws X = Σ c_k·basis_k with c_k uniform in [-3, 3], redrawing while X ∈ h.
pub fn random_outside_h(model: &LieAlgebraModel, rng: &mut impl Rng) -> (Vec<i64>, LieMatrix, usize) {
    let mut rejected = 0;
    loop {
        let c: Vec<i64> = (0..model.basis.len()).map(|_| rng.gen_range(-COEFF_RANGE..=COEFF_RANGE)).collect();
        let x = model.combine(&c);
        if !model.in_h(&x) {
            return (c, x, rejected);
        }
        rejected += 1;
    }
}

/// Trial k uses ChaCha8 stream k under `seed`, so results do not depend on
/// scheduling.
pub fn supergroup_check(model: &LieAlgebraModel, trials: usize, seed: u64) -> Result<SupergroupReport, LieError> {
    if trials == 0 {
        return Err(LieError::InvalidArgument("trials must be at least 1".into()));
    }
    let results: Vec<Trial> = (0..trials)
        .into_par_iter()
        .map(|k| {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            rng.set_stream(k as u64);
            let (coefficients, x, rejected_draws) = random_outside_h(model, &mut rng);
            let mut seeds = model.h_basis.clone();
            seeds.push(x.clone());
            let dimension = generated_subalgebra(model, &seeds).expect("seeds lie in the algebra").dim;
            Trial {
                index: k,
                coefficients,
                matrix: x.to_rows().iter().map(|r| r.iter().map(|z| z.to_string()).collect()).collect(),
                rejected_draws,
                dimension,
                passed: dimension == model.dim(),
            }
        })
        .collect();
    let passes = results.iter().filter(|t| t.passed).count();
    Ok(SupergroupReport {
        case: model.case,
        seed,
        dim_g: model.dim(),
        dim_h: model.h_dim(),
        passes,
        failures: trials - passes,
        trials: results,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn j() -> LieMatrix {
        Matrix::from_fn(3, 3, |i, k| if i != k { q(0) } else if i == 2 { q(-1) } else { q(1) })
    }

    #[test]
    fn bases_have_expected_dimensions() {
        let one = LieAlgebraModel::new(Case::One);
        let two = LieAlgebraModel::new(Case::Two);
        assert_eq!((one.dim(), one.h_dim()), (6, 3));
        assert_eq!((two.dim(), two.h_dim()), (8, 3));
    }

    #[test]
    fn case_two_basis_is_in_su21() {
        let m = LieAlgebraModel::new(Case::Two);
        let j = j();
        for x in &m.basis {
            assert!(x.conj_transpose().mul(&j).add(&j.mul(x)).is_zero());
            assert!(x.trace().is_zero());
        }
        for x in &m.h_basis {
            assert!(x.col(0).iter().all(QuadRat::is_zero), "h must kill e1");
        }
    }

    #[test]
    fn sl2_triple_and_antisymmetry() {
        let (e, f, h) = (sl2_block(0, 0), sl2_block(0, 1), sl2_block(0, 2));
        assert_eq!(bracket(&e, &f).unwrap(), h);
        assert!(bracket(&e, &e).unwrap().is_zero());
        assert_eq!(bracket(&h, &e).unwrap(), e.scale(&q(2)));
        let m = LieAlgebraModel::new(Case::Two);
        let (x, y) = (m.combine(&[1, -2, 3, 0, 1, 2, -1, 3]), m.combine(&[0, 2, -3, 1, 1, 0, 2, -2]));
        assert!(bracket(&x, &y).unwrap().add(&bracket(&y, &x).unwrap()).is_zero());
        let small: LieMatrix = Matrix::zeros(2, 2);
        assert!(matches!(bracket(&x, &small), Err(LieError::ShapeMismatch(..))));
    }

    #[test]
    fn jacobi_on_basis_triples() {
        for case in [Case::One, Case::Two] {
            let b = LieAlgebraModel::new(case).basis;
            for x in &b {
                for y in &b {
                    for z in &b {
                        let t1 = bracket(x, &bracket(y, z).unwrap()).unwrap();
                        let t2 = bracket(y, &bracket(z, x).unwrap()).unwrap();
                        let t3 = bracket(z, &bracket(x, y).unwrap()).unwrap();
                        assert!(t1.add(&t2).add(&t3).is_zero());
                    }
                }
            }
        }
    }

    #[test]
    fn h_is_a_subalgebra() {
        for case in [Case::One, Case::Two] {
            let m = LieAlgebraModel::new(case);
            for x in &m.h_basis {
                for y in &m.h_basis {
                    assert!(m.in_h(&bracket(x, y).unwrap()));
                }
            }
            assert_eq!(generated_subalgebra(&m, &m.h_basis).unwrap().dim, 3);
        }
    }

    #[test]
    fn nilpotent_in_one_factor_generates_case_one() {
        let m = LieAlgebraModel::new(Case::One);
        let mut seeds = m.h_basis.clone();
        seeds.push(sl2_block(0, 0));
        let g = generated_subalgebra(&m, &seeds).unwrap();
        assert_eq!(g.dim, 6);
        // idempotent: closing the output basis again changes nothing
        assert_eq!(generated_subalgebra(&m, &g.basis).unwrap().dim, 6);
    }

    #[test]
    fn centralizer_of_h_gives_a_proper_supergroup() {
        // diag(2i, -i, -i) commutes with h, so h + R·X is already closed
        let m = LieAlgebraModel::new(Case::Two);
        let z = m.combine(&[2, 1, 0, 0, 0, 0, 0, 0]);
        assert!(!m.in_h(&z));
        for x in &m.h_basis {
            assert!(bracket(&z, x).unwrap().is_zero());
        }
        let mut seeds = m.h_basis.clone();
        seeds.push(z);
        assert_eq!(generated_subalgebra(&m, &seeds).unwrap().dim, 4);
    }

    #[test]
    fn rejects_seed_outside_algebra() {
        let m = LieAlgebraModel::new(Case::Two);
        assert_eq!(generated_subalgebra(&m, &[j()]).unwrap_err(), LieError::NotInAlgebra(0));
    }

    #[test]
    fn check_is_deterministic_and_rejects_h() {
        let m = LieAlgebraModel::new(Case::One);
        let a = supergroup_check(&m, 20, 11).unwrap();
        let b = supergroup_check(&m, 20, 11).unwrap();
        assert_eq!(a, b);
        assert!(a.trials.iter().all(|t| !m.in_h(&m.combine(&t.coefficients))));
        assert!(supergroup_check(&m, 0, 1).is_err());
    }
}
