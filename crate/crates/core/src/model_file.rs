//! JSON model files.
//!
//! ```json
//! {"name": "c2",
//!  "basis": [{"name": "1", "degree": 0}, {"name": "h", "degree": 2}, {"name": "x", "degree": 4}],
//!  "products": [{"left": "h", "right": "h", "result": [{"name": "x", "coeff": "1/1"}]}],
//!  "unit": "1", "point": "x", "euler": [{"name": "x", "coeff": "3"}],
//!  "canonical": [{"name": "h", "coeff": "-3"}], "ideal": ["h"]}
//! ```
//!
//! A class expression is either a basis name or a list of `{name, coeff}`.

use std::path::Path;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::error::{Error, Result};
use crate::rational::{self, Q};
use crate::surface::{BasisElement, GradedClass, ModelSpec, SurfaceModel};

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ModelFile {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub name: Option<String>,
    pub basis: Vec<BasisJson>,
    #[serde(default)]
    pub products: Vec<ProductJson>,
    pub unit: String,
    pub point: String,
    #[serde(default = "ClassExpr::zero")]
    pub euler: ClassExpr,
    #[serde(default = "ClassExpr::zero")]
    pub canonical: ClassExpr,
    #[serde(default)]
    pub ideal: Vec<ClassExpr>,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct BasisJson {
    pub name: String,
    pub degree: u8,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ProductJson {
    pub left: String,
    pub right: String,
    pub result: ClassExpr,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct TermJson {
    pub name: String,
    #[serde(with = "rational::serde_q")]
    pub coeff: Q,
}

#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ClassExpr {
    Name(String),
    Terms(Vec<TermJson>),
}

impl ClassExpr {
    fn zero() -> Self {
        ClassExpr::Terms(Vec::new())
    }
}

fn index(basis: &[BasisElement], name: &str) -> Result<usize> {
    basis
        .iter()
        .position(|b| b.name == name)
        .ok_or_else(|| Error::UnknownBasis(name.to_string()))
}

fn class_of(basis: &[BasisElement], e: &ClassExpr) -> Result<GradedClass> {
    match e {
        ClassExpr::Name(n) => Ok(GradedClass::basis(index(basis, n)?)),
        ClassExpr::Terms(ts) => {
            let mut g = GradedClass::zero();
            for t in ts {
                g.add_term(index(basis, &t.name)?, t.coeff.clone());
            }
            Ok(g)
        }
    }
}

fn expr_of(basis: &[BasisElement], g: &GradedClass) -> ClassExpr {
    ClassExpr::Terms(
        g.iter()
            .map(|(i, c)| TermJson {
                name: basis[i].name.clone(),
                coeff: c.clone(),
            })
            .collect(),
    )
}

impl ModelFile {
    pub fn to_spec(&self, fallback_name: &str) -> Result<ModelSpec> {
        let basis: Vec<BasisElement> = self
            .basis
            .iter()
            .map(|b| BasisElement {
                name: b.name.clone(),
                degree: b.degree,
            })
            .collect();
        let products = self
            .products
            .iter()
            .map(|p| {
                Ok((
                    index(&basis, &p.left)?,
                    index(&basis, &p.right)?,
                    class_of(&basis, &p.result)?,
                ))
            })
            .collect::<Result<_>>()?;
        Ok(ModelSpec {
            name: self
                .name
                .clone()
                .unwrap_or_else(|| fallback_name.to_string()),
            unit: index(&basis, &self.unit)?,
            point: index(&basis, &self.point)?,
            euler: class_of(&basis, &self.euler)?,
            canonical: class_of(&basis, &self.canonical)?,
            ideal: self
                .ideal
                .iter()
                .map(|e| class_of(&basis, e))
                .collect::<Result<_>>()?,
            products,
            basis,
        })
    }

    pub fn from_spec(spec: &ModelSpec) -> Self {
        let b = &spec.basis;
        ModelFile {
            name: Some(spec.name.clone()),
            basis: b
                .iter()
                .map(|e| BasisJson {
                    name: e.name.clone(),
                    degree: e.degree,
                })
                .collect(),
            products: spec
                .products
                .iter()
                .map(|(l, r, c)| ProductJson {
                    left: b[*l].name.clone(),
                    right: b[*r].name.clone(),
                    result: expr_of(b, c),
                })
                .collect(),
            unit: b[spec.unit].name.clone(),
            point: b[spec.point].name.clone(),
            euler: expr_of(b, &spec.euler),
            canonical: expr_of(b, &spec.canonical),
            ideal: spec.ideal.iter().map(|g| expr_of(b, g)).collect(),
        }
    }
}

/// Hex SHA-256 of the canonical JSON form of a `ModelSpec`. Formatting and the
/// choice between name and term-list expressions do not affect it.
pub fn spec_hash(spec: &ModelSpec) -> String {
    let canonical = serde_json::to_vec(&ModelFile::from_spec(spec)).expect("model serializes");
    hex::encode(Sha256::digest(&canonical))
}

/// A model parsed from JSON text, with its content hash.
pub fn parse_model(text: &str, fallback_name: &str) -> Result<(SurfaceModel, String)> {
    let file: ModelFile = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    let spec = file.to_spec(fallback_name)?;
    let hash = spec_hash(&spec);
    Ok((SurfaceModel::new(spec)?, hash))
}

pub fn load_model(path: &Path) -> Result<(SurfaceModel, String)> {
    let text = std::fs::read_to_string(path)?;
    let stem = path.file_stem().and_then(|s| s.to_str()).unwrap_or("model");
    parse_model(&text, stem)
}

pub fn to_json_pretty(spec: &ModelSpec) -> String {
    serde_json::to_string_pretty(&ModelFile::from_spec(spec)).expect("model serializes")
}
