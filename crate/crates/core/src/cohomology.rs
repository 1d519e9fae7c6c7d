//! Intersection-pairing linear algebra for curve classes on a surface.
//!
//! A model is the Gram matrix of the cup-product pairing on a basis
//! γ₀ = ω, γ₁, …, γ_s of H^{1,1} with γ₀ orthogonal to the rest. A curve is
//! seen only through its periods p_i = ∫_C γ_i; its Poincaré dual is
//! Σ p_i γ_i^∨ and its self-intersection is pᵀ·gram⁻¹·p.
//!
//! Everything is generic over [`Scalar`], implemented for `f64` and exact
//! `rug::Rational`.

use std::fmt::Write as _;

use rug::{Integer, Rational};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use thiserror::Error;

use crate::linalg::{dot, Field, Matrix};

pub const MODEL_SCHEMA_VERSION: u32 = 1;

/// Relative tolerance for float symmetry, orthogonality and biorthogonality checks.
const FLOAT_TOL: f64 = 1e-12;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum CohomologyError {
    #[error("gram matrix is singular")]
    SingularGram,
    #[error("gram matrix is not square and symmetric")]
    NotSymmetric,
    #[error("gamma_0 is not orthogonal to gamma_{0}")]
    KahlerNotOrthogonal(usize),
    #[error("lambda = gram[0][0] must be positive")]
    NonPositiveLambda,
    #[error("cusp block is not negative definite")]
    NotNegativeDefinite,
    #[error("invalid cusp block: {0}")]
    InvalidCuspBlock(String),
    #[error("model has no cusp block")]
    NoCuspBlock,
    #[error("curve volume must be positive (term {0})")]
    ZeroVolume(usize),
    #[error("expected {expected} coordinates, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("need at least 2 period vectors, got {0}")]
    TooShort(usize),
    #[error("malformed file: {0}")]
    Parse(String),
}

pub trait Scalar: Field + PartialOrd {
    fn from_i64(v: i64) -> Self;
    fn to_f64(&self) -> f64;
    /// Integer, fraction `p/q` or decimal literal such as `-1.25e-3`.
    fn parse(s: &str) -> Option<Self>;
    fn render(&self) -> String;

    /// Exact equality, or closeness relative to `scale` for floats.
    fn near(&self, other: &Self, scale: f64) -> bool {
        if Self::EXACT {
            self == other
        } else {
            (self.to_f64() - other.to_f64()).abs() <= FLOAT_TOL * scale.max(1.0)
        }
    }
}

impl Scalar for f64 {
    fn from_i64(v: i64) -> f64 {
        v as f64
    }
    fn to_f64(&self) -> f64 {
        *self
    }
    fn parse(s: &str) -> Option<f64> {
        match s.split_once('/') {
            Some((p, q)) => Some(p.trim().parse::<f64>().ok()? / q.trim().parse::<f64>().ok()?),
            None => s.trim().parse().ok(),
        }
    }
    fn render(&self) -> String {
        format!("{self:e}")
    }
}

impl Scalar for Rational {
    fn from_i64(v: i64) -> Rational {
        Rational::from(v)
    }
    fn to_f64(&self) -> f64 {
        Rational::to_f64(self)
    }
    fn parse(s: &str) -> Option<Rational> {
        parse_exact(s.trim())
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

fn parse_exact(s: &str) -> Option<Rational> {
    if let Some((p, q)) = s.split_once('/') {
        let q: Integer = q.trim().parse().ok()?;
        if q == 0 {
            return None;
        }
        return Some(Rational::from((p.trim().parse::<Integer>().ok()?, q)));
    }
    let (mant, exp) = match s.find(['e', 'E']) {
        Some(k) => (&s[..k], s[k + 1..].parse::<i32>().ok()?),
        None => (s, 0),
    };
    let (int_part, frac) = mant.split_once('.').unwrap_or((mant, ""));
    if frac.starts_with(['+', '-']) || (int_part.is_empty() && frac.is_empty()) {
        return None;
    }
    let num: Integer = format!("{int_part}{frac}").parse().ok()?;
    let shift = exp - frac.len() as i32;
    let ten = Integer::from(Integer::u_pow_u(10, shift.unsigned_abs()));
    Some(if shift >= 0 { Rational::from(num * ten) } else { Rational::from((num, ten)) })
}

#[derive(Clone, Debug, PartialEq)]
pub struct PeriodVector<F> {
    pub periods: Vec<F>,
}

impl<F: Scalar> PeriodVector<F> {
    pub fn new(periods: Vec<F>) -> Self {
        PeriodVector { periods }
    }

    /// ∫_C ω, the first period.
    pub fn volume(&self) -> &F {
        &self.periods[0]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct CohomologyModel<F> {
    gram: Matrix<F>,
    inverse: Matrix<F>,
    cusp_block: Option<Vec<usize>>,
}

impl<F: Scalar> CohomologyModel<F> {
    pub fn new(gram: Matrix<F>) -> Result<Self, CohomologyError> {
        if !gram.is_square() || gram.rows() == 0 {
            return Err(CohomologyError::NotSymmetric);
        }
        let n = gram.rows();
        let scale = gram.max_magnitude();
        for i in 0..n {
            for j in i + 1..n {
                if !gram[(i, j)].near(&gram[(j, i)], scale) {
                    return Err(CohomologyError::NotSymmetric);
                }
            }
        }
        if let Some(j) = (1..n).find(|&j| !gram[(0, j)].near(&F::zero(), scale)) {
            return Err(CohomologyError::KahlerNotOrthogonal(j));
        }
        if gram[(0, 0)] <= F::zero() {
            return Err(CohomologyError::NonPositiveLambda);
        }
        let inverse = gram.inverse().ok_or(CohomologyError::SingularGram)?;
        Ok(CohomologyModel { gram, inverse, cusp_block: None })
    }

    /// Marks the span of `block` as the cusp part. Indices must be distinct,
    /// avoid 0 and be gram-orthogonal to their complement. Definiteness is
    /// checked by [`Self::cusp_projection`].
    pub fn with_cusp_block(mut self, mut block: Vec<usize>) -> Result<Self, CohomologyError> {
        let n = self.dim();
        block.sort_unstable();
        block.dedup();
        if block.is_empty() || block.iter().any(|&b| b == 0 || b >= n) {
            return Err(CohomologyError::InvalidCuspBlock(format!("indices must lie in 1..{n}")));
        }
        let scale = self.gram.max_magnitude();
        for &b in &block {
            for c in (0..n).filter(|c| !block.contains(c)) {
                if !self.gram[(b, c)].near(&F::zero(), scale) {
                    return Err(CohomologyError::InvalidCuspBlock(format!(
                        "gamma_{b} pairs with gamma_{c} outside the block"
                    )));
                }
            }
        }
        self.cusp_block = Some(block);
        Ok(self)
    }

    pub fn dim(&self) -> usize {
        self.gram.rows()
    }

    pub fn gram(&self) -> &Matrix<F> {
        &self.gram
    }

    pub fn cusp_block(&self) -> Option<&[usize]> {
        self.cusp_block.as_deref()
    }

    /// λ = ∫ω∧ω.
    pub fn lambda(&self) -> &F {
        &self.gram[(0, 0)]
    }

    /// Limit of C²/vol(C)² for curves whose normalized periods tend to
    /// (1, 0, …, 0).
    pub fn limit_ratio(&self) -> F {
        self.lambda().inv().expect("lambda is positive")
    }

    /// Columns are the dual classes γ_i^∨ in the primal basis. The pairing
    /// ⟨γ_i^∨, γ_j⟩ = δ_ij is re-verified before returning.
    pub fn dual_basis(&self) -> Result<Matrix<F>, CohomologyError> {
        let prod = self.inverse.transpose().mul(&self.gram);
        let scale = self.inverse.max_magnitude() * self.gram.max_magnitude() * self.dim() as f64;
        let id = Matrix::<F>::identity(self.dim());
        for i in 0..self.dim() {
            for j in 0..self.dim() {
                if !prod[(i, j)].near(&id[(i, j)], scale) {
                    return Err(CohomologyError::SingularGram);
                }
            }
        }
        Ok(self.inverse.clone())
    }

    pub fn pairing(&self, x: &[F], y: &[F]) -> F {
        dot(x, &self.gram.mul_vec(y))
    }

    /// Square of a class given in primal coordinates.
    pub fn square(&self, class: &[F]) -> F {
        self.pairing(class, class)
    }

    fn check_len(&self, v: &[F]) -> Result<(), CohomologyError> {
        if v.len() != self.dim() {
            return Err(CohomologyError::DimensionMismatch { expected: self.dim(), got: v.len() });
        }
        Ok(())
    }

    /// Primal coordinates of PD(C) = Σ p_i γ_i^∨.
    pub fn poincare_dual(&self, p: &PeriodVector<F>) -> Result<Vec<F>, CohomologyError> {
        self.check_len(&p.periods)?;
        let mut class = vec![F::zero(); self.dim()];
        for (i, pi) in p.periods.iter().enumerate() {
            for (k, c) in class.iter_mut().enumerate() {
                *c = c.add(&pi.mul(&self.inverse[(k, i)]));
            }
        }
        Ok(class)
    }

    /// C² = ∫_C PD(C), evaluated by pairing the dual expansion with the periods.
    pub fn self_intersection(&self, p: &PeriodVector<F>) -> Result<F, CohomologyError> {
        let class = self.poincare_dual(p)?;
        Ok(dot(&class, &p.periods))
    }

    /// pᵀ·gram⁻¹·p through a fresh linear solve, independent of the stored inverse.
    pub fn self_intersection_direct(&self, p: &PeriodVector<F>) -> Result<F, CohomologyError> {
        self.check_len(&p.periods)?;
        let x = self.gram.solve(&p.periods).ok_or(CohomologyError::SingularGram)?;
        Ok(dot(&p.periods, &x))
    }

    /// r_n = C_n² / vol(C_n)² for each term.
    pub fn asymptotic_ratio(&self, seq: &[PeriodVector<F>]) -> Result<Vec<F>, CohomologyError> {
        if seq.len() < 2 {
            return Err(CohomologyError::TooShort(seq.len()));
        }
        seq.iter()
            .enumerate()
            .map(|(n, p)| {
                self.check_len(&p.periods)?;
                let a = p.volume();
                if *a <= F::zero() {
                    return Err(CohomologyError::ZeroVolume(n));
                }
                let c2 = self.self_intersection(p)?;
                Ok(c2.div(&a.mul(a)).expect("volume is nonzero"))
            })
            .collect()
    }

    pub fn cusp_block_is_negative_definite(&self) -> Option<bool> {
        let b = self.cusp_block.as_ref()?;
        Some(negative_definite(&self.gram.select(b, b)))
    }

    /// Gram-orthogonal projection of a class (primal coordinates) away from
    /// the span of the cusp block.
    pub fn cusp_projection(&self, class: &[F]) -> Result<Vec<F>, CohomologyError> {
        let b = self.cusp_block.as_ref().ok_or(CohomologyError::NoCuspBlock)?;
        self.check_len(class)?;
        let gbb = self.gram.select(b, b);
        if !negative_definite(&gbb) {
            return Err(CohomologyError::NotNegativeDefinite);
        }
        let g_class = self.gram.mul_vec(class);
        let rhs: Vec<F> = b.iter().map(|&i| g_class[i].clone()).collect();
        let coeff = gbb.solve(&rhs).ok_or(CohomologyError::NotNegativeDefinite)?;
        let mut out = class.to_vec();
        for (&i, c) in b.iter().zip(&coeff) {
            out[i] = out[i].sub(c);
        }
        Ok(out)
    }
}

/// Leading pivots of an unpivoted LDLᵀ of a symmetric matrix are all
/// negative iff the matrix is negative definite.
fn negative_definite<F: Scalar>(m: &Matrix<F>) -> bool {
    let n = m.rows();
    let mut a = m.clone();
    for k in 0..n {
        let pivot = a[(k, k)].clone();
        let tiny = !F::EXACT && pivot.magnitude() <= FLOAT_TOL * m.max_magnitude();
        if pivot >= F::zero() || tiny {
            return false;
        }
        let inv = pivot.inv().expect("pivot is nonzero");
        for i in k + 1..n {
            let f = a[(i, k)].mul(&inv);
            for j in k + 1..n {
                let t = a[(k, j)].mul(&f);
                a[(i, j)] = a[(i, j)].sub(&t);
            }
        }
    }
    true
}

#[derive(Serialize, Deserialize)]
struct ModelFile {
    schema_version: u32,
    gram: Vec<Vec<Value>>,
    #[serde(default)]
    cusp_block: Option<Vec<usize>>,
}

#[derive(Serialize, Deserialize)]
struct PeriodsFile {
    schema_version: u32,
    periods: Vec<Vec<Value>>,
}

fn scalar_from_json<F: Scalar>(v: &Value) -> Result<F, CohomologyError> {
    let text = match v {
        Value::String(s) => s.clone(),
        Value::Number(n) => n.to_string(),
        other => return Err(CohomologyError::Parse(format!("not a number: {other}"))),
    };
    F::parse(&text).ok_or_else(|| CohomologyError::Parse(format!("bad scalar {text:?}")))
}

fn check_version(v: u32) -> Result<(), CohomologyError> {
    if v != MODEL_SCHEMA_VERSION {
        return Err(CohomologyError::Parse(format!("unsupported schema_version {v}")));
    }
    Ok(())
}

/// Parses `{"schema_version": 1, "gram": [[...]], "cusp_block": [...]}`.
/// Entries may be JSON numbers or strings like `"3/2"`.
pub fn model_from_json<F: Scalar>(text: &str) -> Result<CohomologyModel<F>, CohomologyError> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| CohomologyError::Parse(e.to_string()))?;
    check_version(file.schema_version)?;
    let rows = file
        .gram
        .iter()
        .map(|r| r.iter().map(scalar_from_json).collect::<Result<Vec<F>, _>>())
        .collect::<Result<Vec<_>, _>>()?;
    if rows.iter().any(|r| r.len() != rows.len()) {
        return Err(CohomologyError::NotSymmetric);
    }
    let model = CohomologyModel::new(Matrix::from_rows(rows))?;
    match file.cusp_block {
        Some(b) => model.with_cusp_block(b),
        None => Ok(model),
    }
}

pub fn model_to_json<F: Scalar>(model: &CohomologyModel<F>) -> String {
    let file = ModelFile {
        schema_version: MODEL_SCHEMA_VERSION,
        gram: model.gram.to_rows().iter().map(|r| r.iter().map(|x| Value::String(x.render())).collect()).collect(),
        cusp_block: model.cusp_block.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("model serializes");
    s.push('\n');
    s
}

/// Parses `{"schema_version": 1, "periods": [[p0, p1, ...], ...]}`.
pub fn periods_from_json<F: Scalar>(text: &str) -> Result<Vec<PeriodVector<F>>, CohomologyError> {
    let file: PeriodsFile = serde_json::from_str(text).map_err(|e| CohomologyError::Parse(e.to_string()))?;
    check_version(file.schema_version)?;
    file.periods
        .iter()
        .map(|r| r.iter().map(scalar_from_json).collect::<Result<Vec<F>, _>>().map(PeriodVector::new))
        .collect()
}

pub fn periods_to_json<F: Scalar>(seq: &[PeriodVector<F>]) -> String {
    let file = PeriodsFile {
        schema_version: MODEL_SCHEMA_VERSION,
        periods: seq.iter().map(|p| p.periods.iter().map(|x| Value::String(x.render())).collect()).collect(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("periods serialize");
    s.push('\n');
    s
}

/// One row per period vector: exact values plus float ratio and its
/// deviation from the limit 1/λ.
pub fn ratios_csv<F: Scalar>(model: &CohomologyModel<F>, seq: &[PeriodVector<F>]) -> Result<String, CohomologyError> {
    let ratios = model.asymptotic_ratio(seq)?;
    let limit = model.limit_ratio();
    let mut s = String::from("n,volume,self_intersection,ratio,ratio_f64,deviation_f64\n");
    for (n, (p, r)) in seq.iter().zip(&ratios).enumerate() {
        let c2 = model.self_intersection(p)?;
        writeln!(
            s,
            "{n},{},{},{},{:.17e},{:.17e}",
            p.volume().render(),
            c2.render(),
            r.render(),
            r.to_f64(),
            r.sub(&limit).to_f64()
        )
        .unwrap();
    }
    Ok(s)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(s: &str) -> Rational {
        <Rational as Scalar>::parse(s).unwrap()
    }

    fn diag(v: &[i64]) -> CohomologyModel<Rational> {
        let n = v.len();
        CohomologyModel::new(Matrix::from_fn(n, n, |i, j| if i == j { Rational::from(v[i]) } else { Rational::new() }))
            .unwrap()
    }

    #[test]
    fn parses_exact_literals() {
        assert_eq!(q("3/2"), Rational::from((3, 2)));
        assert_eq!(q("-1.25"), Rational::from((-5, 4)));
        assert_eq!(q("2e3"), Rational::from(2000));
        assert_eq!(q("1.5E-2"), Rational::from((3, 200)));
        assert_eq!(q(".5"), Rational::from((1, 2)));
        assert!(<Rational as Scalar>::parse("1/0").is_none());
        assert!(<Rational as Scalar>::parse("abc").is_none());
        assert!(<Rational as Scalar>::parse("-").is_none());
    }

    #[test]
    fn dual_basis_examples() {
        let m = diag(&[2, -1]);
        let d = m.dual_basis().unwrap();
        assert_eq!(d[(0, 0)], Rational::from((1, 2)));
        assert_eq!(d[(1, 1)], Rational::from(-1));
        assert_eq!(d[(0, 1)], Rational::new());
        assert_eq!(diag(&[1, 1, 1]).dual_basis().unwrap(), Matrix::identity(3));
        let singular = Matrix::from_rows(vec![vec![Rational::from(1), Rational::new()], vec![Rational::new(), Rational::new()]]);
        assert_eq!(CohomologyModel::new(singular), Err(CohomologyError::SingularGram));
    }

    #[test]
    fn self_intersection_examples() {
        let m = diag(&[2, -1]);
        let p = |a: i64, b: i64| PeriodVector::new(vec![Rational::from(a), Rational::from(b)]);
        assert_eq!(m.self_intersection(&p(4, 0)).unwrap(), Rational::from(8));
        assert_eq!(m.self_intersection(&p(4, 1)).unwrap(), Rational::from(7));
        assert_eq!(m.self_intersection(&p(0, 0)).unwrap(), Rational::new());
        assert_eq!(m.self_intersection_direct(&p(4, 1)).unwrap(), Rational::from(7));
        // PD(C) = 4·(1/2)γ₀ + 1·(−1)γ₁ pairs with itself to 8 − 1
        let pd = m.poincare_dual(&p(4, 1)).unwrap();
        assert_eq!(pd, vec![Rational::from(2), Rational::from(-1)]);
        assert_eq!(m.square(&pd), Rational::from(7));
    }

    #[test]
    fn ratio_errors() {
        let m = diag(&[2, -1]);
        let one = vec![PeriodVector::new(vec![Rational::from(1), Rational::new()])];
        assert_eq!(m.asymptotic_ratio(&one), Err(CohomologyError::TooShort(1)));
        let zero = vec![one[0].clone(), PeriodVector::new(vec![Rational::new(), Rational::from(1)])];
        assert_eq!(m.asymptotic_ratio(&zero), Err(CohomologyError::ZeroVolume(1)));
    }

    #[test]
    fn model_validation() {
        let r = |v: i64| Rational::from(v);
        let asym = Matrix::from_rows(vec![vec![r(1), r(0)], vec![r(1), r(-1)]]);
        assert_eq!(CohomologyModel::new(asym), Err(CohomologyError::NotSymmetric));
        let coupled = Matrix::from_rows(vec![vec![r(1), r(1)], vec![r(1), r(-1)]]);
        assert_eq!(CohomologyModel::new(coupled), Err(CohomologyError::KahlerNotOrthogonal(1)));
        assert_eq!(
            CohomologyModel::new(Matrix::from_rows(vec![vec![r(-1)]])),
            Err(CohomologyError::NonPositiveLambda)
        );
        assert!(matches!(diag(&[2, -1]).with_cusp_block(vec![0]), Err(CohomologyError::InvalidCuspBlock(_))));
    }

    #[test]
    fn cusp_projection_examples() {
        let m = diag(&[2, -1]).with_cusp_block(vec![1]).unwrap();
        let c = vec![q("5/3"), q("7")];
        assert_eq!(m.cusp_projection(&c).unwrap(), vec![q("5/3"), Rational::new()]);
        assert_eq!(m.cusp_projection(&[Rational::new(), q("2")]).unwrap(), vec![Rational::new(); 2]);
        let planted = diag(&[2, -1, 1]).with_cusp_block(vec![1, 2]).unwrap();
        assert_eq!(planted.cusp_projection(&[q("1"), q("1"), q("1")]), Err(CohomologyError::NotNegativeDefinite));
        assert_eq!(diag(&[1, -1]).cusp_projection(&[q("1"), q("1")]), Err(CohomologyError::NoCuspBlock));
    }

    #[test]
    fn json_roundtrip() {
        let text = r#"{"schema_version": 1, "gram": [[2, 0, 0], ["0", "-3/2", 0.5], [0, 0.5, -1]], "cusp_block": [1, 2]}"#;
        let m: CohomologyModel<Rational> = model_from_json(text).unwrap();
        assert_eq!(m.gram()[(1, 2)], q("1/2"));
        assert_eq!(m.cusp_block_is_negative_definite(), Some(true));
        let back: CohomologyModel<Rational> = model_from_json(&model_to_json(&m)).unwrap();
        assert_eq!(back, m);
        let f: CohomologyModel<f64> = model_from_json(text).unwrap();
        assert_eq!(f.gram()[(1, 1)], -1.5);
        assert!(matches!(
            model_from_json::<Rational>(r#"{"schema_version": 9, "gram": [[1]]}"#),
            Err(CohomologyError::Parse(_))
        ));
        let seq = vec![PeriodVector::new(vec![q("3"), q("1/7")]), PeriodVector::new(vec![q("9"), q("-2")])];
        assert_eq!(periods_from_json::<Rational>(&periods_to_json(&seq)).unwrap(), seq);
    }
}
