//! JSON registry files. Matrix entries are `[re, im]` integer pairs; exact
//! rationals and residue classes are strings.

use rug::Rational;
use serde::{Deserialize, Serialize};

use crate::hermitian::{HermitianForm, IsometryMatrix};
use crate::linalg::Matrix;
use crate::registry::{CurveRegistry, DedupPolicy, RegistryError, ShimuraCurveRecord};
use crate::ring::QuadRat;

pub const REGISTRY_SCHEMA_VERSION: u32 = 1;

#[derive(Serialize, Deserialize)]
struct RegistryFile {
    schema_version: u32,
    kind: String,
    form: Vec<Vec<[String; 2]>>,
    dedup_policy: DedupPolicy,
    curves: Vec<ShimuraCurveRecord>,
}

fn parse_rational(s: &str) -> Result<Rational, String> {
    Rational::from_str_radix(s, 10).map_err(|e| format!("invalid rational {s:?}: {e}"))
}

pub fn write_registry(reg: &CurveRegistry) -> String {
    let g = reg.form.gram();
    let form = (0..3)
        .map(|i| (0..3).map(|j| [g[(i, j)].re().to_string(), g[(i, j)].im().to_string()]).collect())
        .collect();
    let file = RegistryFile {
        schema_version: REGISTRY_SCHEMA_VERSION,
        kind: "curve-registry".into(),
        form,
        dedup_policy: reg.dedup_policy.clone(),
        curves: reg.curves.clone(),
    };
    let mut s = serde_json::to_string_pretty(&file).expect("registry serializes");
    s.push('\n');
    s
}

pub fn read_registry(text: &str) -> Result<CurveRegistry, RegistryError> {
    let file: RegistryFile = serde_json::from_str(text).map_err(|e| RegistryError::Malformed(e.to_string()))?;
    if file.schema_version != REGISTRY_SCHEMA_VERSION || file.kind != "curve-registry" {
        return Err(RegistryError::Malformed(format!(
            "unsupported registry {} v{}",
            file.kind, file.schema_version
        )));
    }
    if file.form.len() != 3 || file.form.iter().any(|r| r.len() != 3) {
        return Err(RegistryError::Malformed("form must be 3x3".into()));
    }
    let mut gram = Matrix::zeros(3, 3);
    for i in 0..3 {
        for j in 0..3 {
            let [re, im] = &file.form[i][j];
            let re = QuadRat::from_rational(&parse_rational(re).map_err(RegistryError::Malformed)?);
            let im = QuadRat::from_rational(&parse_rational(im).map_err(RegistryError::Malformed)?);
            gram[(i, j)] = &re + &(&im * &QuadRat::from_gauss(0, 1));
        }
    }
    Ok(CurveRegistry { form: HermitianForm::new(gram)?, dedup_policy: file.dedup_policy, curves: file.curves })
}

pub(crate) mod rational_str {
    use super::*;
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(q: &Rational, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&q.to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Rational, D::Error> {
        let s = String::deserialize(d)?;
        parse_rational(&s).map_err(serde::de::Error::custom)
    }
}

pub(crate) mod residue_str {
    use super::*;
    use crate::ring::{norm_residue_class, NormResidueClass};
    use serde::{Deserializer, Serializer};

    pub fn serialize<S: Serializer>(c: &NormResidueClass, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&c.representative().to_string())
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<NormResidueClass, D::Error> {
        let s = String::deserialize(d)?;
        let q = parse_rational(&s).map_err(serde::de::Error::custom)?;
        let c = norm_residue_class(&q).map_err(serde::de::Error::custom)?;
        if c.representative().to_string() != s {
            return Err(serde::de::Error::custom(format!("{s} is not a canonical residue representative")));
        }
        Ok(c)
    }
}

pub(crate) mod isometry_list {
    use super::*;
    use crate::ring::QuadInt;
    use serde::{Deserializer, Serializer};

    type Rows = Vec<Vec<QuadInt>>;

    pub fn serialize<S: Serializer>(gs: &[IsometryMatrix], s: S) -> Result<S::Ok, S::Error> {
        let rows: Vec<Rows> = gs
            .iter()
            .map(|g| {
                g.to_quad_ints()
                    .map(|m| m.iter().map(|r| r.to_vec()).collect())
                    .ok_or_else(|| serde::ser::Error::custom("only integral matrices are stored"))
            })
            .collect::<Result<_, _>>()?;
        rows.serialize(s)
    }

    pub fn deserialize<'de, D: Deserializer<'de>>(d: D) -> Result<Vec<IsometryMatrix>, D::Error> {
        let rows: Vec<Rows> = Vec::deserialize(d)?;
        rows.into_iter()
            .map(|m| {
                if m.len() != 3 || m.iter().any(|r| r.len() != 3) {
                    return Err(serde::de::Error::custom("expected a 3x3 matrix"));
                }
                Ok(IsometryMatrix::from_quad_ints(std::array::from_fn(|i| {
                    std::array::from_fn(|j| m[i][j].clone())
                })))
            })
            .collect()
    }
}
