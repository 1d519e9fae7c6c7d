//! Shimura curves on the ball quotient by Γ = SU(h, ℤ[i]), indexed by
//! primitive h-positive vectors up to Γ, plus diagonal-type curves on the
//! Hilbert modular surface of ℚ(√5).

mod case_one;
mod catalog;
mod enumerate;
pub(crate) mod fast;
mod io;
mod stabilizer;

use rayon::prelude::*;
use rug::Rational;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::hermitian::{
    conjugator, is_in_su, orthogonal_completion, HermitianError, HermitianForm, IsometryMatrix, LatticeVector,
};
use crate::real::{Hp, Precision};
use crate::ring::{norm_residue_class, NormResidueClass};

pub use catalog::{origin_moving_elements, origin_stabilizer};
pub use case_one::{diagonal_curve_case_one, surface_generators, CaseOneCurve, RealQuad, Sl2Quad};
pub use enumerate::{enumerate_positive_vectors, reduce_mod_gamma, Reduction};
pub use io::{read_registry, write_registry, REGISTRY_SCHEMA_VERSION};
pub use stabilizer::{
    classify_stabilizer_element, rational_line_from_element, stabilizer_generators, stabilizer_search, ElementKind,
    StabilizerSearch,
};

#[derive(Debug, Error, Clone, PartialEq)]
pub enum RegistryError {
    #[error(transparent)]
    Hermitian(#[from] HermitianError),
    #[error("eigenvalue 1 is not simple with a one-dimensional eigenspace")]
    DegenerateElement,
    #[error("fixed line is not h-positive")]
    NotPositiveLine,
    #[error("determinant is not totally positive")]
    NotTotallyPositive,
    #[error("generator {0} is not in SU(h, Z[i])")]
    NotInGroup(usize),
    #[error("malformed data: {0}")]
    Malformed(String),
}

/// Γ = SU(h, ℤ[i]) given by explicit generators.
#[derive(Clone, Debug)]
pub struct GammaGenerators {
    pub form: HermitianForm,
    pub names: Vec<String>,
    pub matrices: Vec<IsometryMatrix>,
}

#[derive(Deserialize)]
struct GeneratorFile {
    schema_version: u32,
    kind: String,
    form: Vec<Vec<(i64, i64)>>,
    generators: Vec<NamedGenerator>,
}

#[derive(Deserialize)]
struct NamedGenerator {
    name: String,
    matrix: Vec<Vec<(i64, i64)>>,
}

impl GammaGenerators {
    /// Parses a generator file; every matrix is checked exactly against the form.
    pub fn from_json(text: &str) -> Result<GammaGenerators, RegistryError> {
        let file: GeneratorFile =
            serde_json::from_str(text).map_err(|e| RegistryError::Malformed(e.to_string()))?;
        if file.schema_version != 1 || file.kind != "gamma-generators" {
            return Err(RegistryError::Malformed(format!(
                "unsupported generator file {} v{}",
                file.kind, file.schema_version
            )));
        }
        let to3 = |rows: &Vec<Vec<(i64, i64)>>| -> Result<[[(i64, i64); 3]; 3], RegistryError> {
            if rows.len() != 3 || rows.iter().any(|r| r.len() != 3) {
                return Err(RegistryError::Malformed("expected a 3x3 matrix".into()));
            }
            Ok(std::array::from_fn(|i| std::array::from_fn(|j| rows[i][j])))
        };
        let form = HermitianForm::new(IsometryMatrix::from_gauss(to3(&file.form)?).entries().clone())?;
        let mut names = Vec::new();
        let mut matrices = Vec::new();
        for (k, g) in file.generators.iter().enumerate() {
            let m = IsometryMatrix::from_gauss(to3(&g.matrix)?);
            if !is_in_su(&form, &m) {
                return Err(RegistryError::NotInGroup(k));
            }
            names.push(g.name.clone());
            matrices.push(m);
        }
        Ok(GammaGenerators { form, names, matrices })
    }

    /// The bundled generators for h = diag(1, 1, −1).
    pub fn default_set() -> GammaGenerators {
        Self::from_json(include_str!("../../data/gamma_generators.json")).expect("bundled generators are valid")
    }

    /// Generators followed by their inverses, without duplicates.
    pub fn symmetric(&self) -> Vec<IsometryMatrix> {
        let mut out: Vec<IsometryMatrix> = Vec::new();
        for g in &self.matrices {
            for m in [g.clone(), g.inverse().expect("group elements are invertible")] {
                if !out.contains(&m) {
                    out.push(m);
                }
            }
        }
        out
    }
}

/// Search budget for registry construction.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct RegistryBudget {
    pub height: u32,
    pub word_bound: u32,
    pub entry_bound: u32,
    pub max_stabilizer_gens: usize,
    pub precision_digits: u32,
}

impl Default for RegistryBudget {
    fn default() -> RegistryBudget {
        RegistryBudget { height: 2, word_bound: 6, entry_bound: 20, max_stabilizer_gens: 512, precision_digits: 100 }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CurveCase {
    One,
    Two,
}

/// Conjugator entries as decimal strings `[re, im]`, row-major.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConjugatorData {
    pub digits: u32,
    pub residual: f64,
    pub entries: Vec<Vec<[String; 2]>>,
}

impl ConjugatorData {
    pub fn to_f64(&self) -> Vec<Vec<(f64, f64)>> {
        self.entries
            .iter()
            .map(|row| {
                row.iter()
                    .map(|[a, b]| (a.parse().unwrap_or(f64::NAN), b.parse().unwrap_or(f64::NAN)))
                    .collect()
            })
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct VolumeEstimate {
    pub value: f64,
    /// Bootstrap standard error.
    pub std_error: f64,
    pub radius: f64,
    pub truncation_gap: f64,
    pub converged: bool,
}

impl VolumeEstimate {
    pub fn total_error(&self) -> f64 {
        self.std_error.hypot(self.truncation_gap)
    }
}

/// A Case Two curve attached to a primitive positive vector.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ShimuraCurveRecord {
    pub id: String,
    pub case: CurveCase,
    pub defining_vector: LatticeVector,
    #[serde(with = "io::rational_str")]
    pub h_value: Rational,
    #[serde(with = "io::residue_str")]
    pub residue_class: NormResidueClass,
    pub height: u64,
    #[serde(with = "io::isometry_list")]
    pub stabilizer_gens: Vec<IsometryMatrix>,
    pub stabilizer_truncated: bool,
    pub stabilizer_budget_exceeded: bool,
    pub has_hyperbolic: bool,
    pub conjugator: ConjugatorData,
    pub volume_estimate: Option<VolumeEstimate>,
}

impl ShimuraCurveRecord {
    /// First stabilizer generator that acts hyperbolically on the fixed disk.
    pub fn hyperbolic_witness(&self) -> Option<&IsometryMatrix> {
        self.stabilizer_gens
            .iter()
            .find(|g| classify_stabilizer_element(g) == ElementKind::Hyperbolic)
    }

    pub fn conjugator_f64(&self) -> [[crate::real::Cx<f64>; 3]; 3] {
        let m = self.conjugator.to_f64();
        std::array::from_fn(|i| std::array::from_fn(|j| crate::real::Cx::new(m[i][j].0, m[i][j].1)))
    }

    /// The stored conjugator at precision `prec`; `None` if absent or unreadable.
    pub fn conjugator_mat3<T: crate::real::Real>(&self, prec: Precision) -> Option<crate::real::Mat3<T>> {
        let e = &self.conjugator.entries;
        if e.len() != 3 || e.iter().any(|r| r.len() != 3) {
            return None;
        }
        let mut out: Vec<crate::real::Cx<T>> = Vec::with_capacity(9);
        for row in e {
            for [re, im] in row {
                out.push(crate::real::Cx::new(T::from_decimal(prec, re)?, T::from_decimal(prec, im)?));
            }
        }
        let mut it = out.into_iter();
        Some(std::array::from_fn(|_| std::array::from_fn(|_| it.next().expect("nine entries"))))
    }
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct DedupPolicy {
    pub budget: RegistryBudget,
    pub generators: Vec<String>,
    /// Inputs merged into an earlier representative.
    pub merged: usize,
}

#[derive(Clone, Debug)]
pub struct CurveRegistry {
    pub form: HermitianForm,
    pub dedup_policy: DedupPolicy,
    pub curves: Vec<ShimuraCurveRecord>,
}

/// Builds one record for a primitive positive vector.
pub fn curve_record(
    h: &HermitianForm,
    v: &LatticeVector,
    budget: &RegistryBudget,
) -> Result<ShimuraCurveRecord, RegistryError> {
    let v = v.canonical();
    let h_value = h.norm(&v.to_quad_rat());
    let residue_class = norm_residue_class(&h_value).map_err(|_| HermitianError::NotPositive)?;
    let search = stabilizer_search(h, &v, budget.entry_bound, stabilizer::DEFAULT_PAIR_BUDGET)?;
    let has_hyperbolic = search
        .elements
        .iter()
        .any(|g| classify_stabilizer_element(g) == ElementKind::Hyperbolic);
    let truncated = search.elements.len() > budget.max_stabilizer_gens;
    let mut gens = search.elements;
    if truncated {
        // keep the smallest elements but never drop every hyperbolic one
        let first_hyp = gens.iter().position(|g| classify_stabilizer_element(g) == ElementKind::Hyperbolic);
        let mut kept: Vec<IsometryMatrix> = gens.iter().take(budget.max_stabilizer_gens).cloned().collect();
        if let Some(p) = first_hyp.filter(|&p| p >= budget.max_stabilizer_gens) {
            kept.pop();
            kept.push(gens[p].clone());
        }
        gens = kept;
    }
    let prec = Precision::digits(budget.precision_digits);
    let basis = orthogonal_completion(h, &v)?;
    let conj = conjugator::<Hp>(h, &basis, prec, conjugator_tolerance(prec))?;
    let digits = budget.precision_digits.min(40) as usize;
    let entries = conj
        .matrix
        .iter()
        .map(|row| row.iter().map(|c| [c.re.to_string_digits(digits), c.im.to_string_digits(digits)]).collect())
        .collect();
    Ok(ShimuraCurveRecord {
        id: String::new(),
        case: CurveCase::Two,
        height: v.height().to_i64().unwrap_or(i64::MAX) as u64,
        defining_vector: v,
        h_value,
        residue_class,
        stabilizer_gens: gens,
        stabilizer_truncated: truncated,
        stabilizer_budget_exceeded: search.budget_exceeded,
        has_hyperbolic,
        conjugator: ConjugatorData { digits: budget.precision_digits, residual: conj.residual, entries },
        volume_estimate: None,
    })
}

/// 10⁻²⁵ at 100 digits, scaled with the working precision.
pub fn conjugator_tolerance(prec: Precision) -> f64 {
    10f64.powi(-((prec.digits as i32) / 4).max(1))
}

/// Enumerate, reduce modulo Γ and describe every surviving curve.
pub fn build_registry(
    gens: &GammaGenerators,
    budget: &RegistryBudget,
) -> Result<CurveRegistry, RegistryError> {
    let h = &gens.form;
    let mut vectors = enumerate_positive_vectors(h, budget.height);
    // representatives: lowest height, then fewest nonzero coordinates, then
    // lexicographically largest, so that (1, 0, 0) stands for its class
    let support = |v: &LatticeVector| v.coords.iter().filter(|c| !c.is_zero()).count();
    vectors.sort_by(|a, b| {
        (a.height(), support(a)).cmp(&(b.height(), support(b))).then_with(|| b.cmp(a))
    });
    let reduction = reduce_mod_gamma(h, &vectors, &gens.symmetric(), budget.word_bound);
    let mut curves: Vec<ShimuraCurveRecord> = reduction
        .representatives
        .par_iter()
        .map(|v| curve_record(h, v, budget))
        .collect::<Result<_, _>>()?;
    curves.sort_by(|a, b| {
        (a.height, &a.h_value, &a.defining_vector).cmp(&(b.height, &b.h_value, &b.defining_vector))
    });
    for (k, c) in curves.iter_mut().enumerate() {
        c.id = format!("c{:04}", k + 1);
    }
    Ok(CurveRegistry {
        form: h.clone(),
        dedup_policy: DedupPolicy {
            budget: budget.clone(),
            generators: gens.names.clone(),
            merged: vectors.len() - reduction.representatives.len(),
        },
        curves,
    })
}
