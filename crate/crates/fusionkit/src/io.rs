//! JSON interchange for fusion systems and operators.
//!
//! The system file schema (version 1): top-level keys `schema_version`,
//! `field` ("complex" | "real"), `ambient_dim`, `subspaces` (array of
//! objects with `weight` and `basis`, the basis a list of columns), and an
//! optional free-form `metadata` object. Real scalars are plain numbers;
//! complex scalars are `[re, im]` pairs. Basis columns need not be
//! orthonormal in the file — they are orthonormalized on load.
//!
//! Operator files use the same envelope with a single `matrix` key holding
//! an array of rows.

use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};
use crate::frame::FusionSystem;
use crate::hilbert::{orthonormalize, CMatrix, Scalar, Tolerances};

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FieldKind {
    Complex,
    Real,
}

/// One scalar as encoded on disk.
#[derive(Debug, Clone, Copy, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ScalarRepr {
    Real(f64),
    Complex([f64; 2]),
}

impl ScalarRepr {
    fn to_scalar(self, field: FieldKind, locus: &str) -> Result<Scalar> {
        match (field, self) {
            (FieldKind::Real, ScalarRepr::Real(x)) => Ok(Scalar::new(x, 0.0)),
            (FieldKind::Complex, ScalarRepr::Complex([re, im])) => Ok(Scalar::new(re, im)),
            (FieldKind::Real, ScalarRepr::Complex(_)) => Err(FusionError::MalformedFile(format!(
                "{locus}: field is \"real\" but scalar is a [re, im] pair"
            ))),
            (FieldKind::Complex, ScalarRepr::Real(_)) => Err(FusionError::MalformedFile(format!(
                "{locus}: field is \"complex\" but scalar is a bare number"
            ))),
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SubspaceBlock {
    pub weight: f64,
    /// Column-major: a list of columns, each a list of scalars.
    pub basis: Vec<Vec<ScalarRepr>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SystemFile {
    pub schema_version: u32,
    pub field: FieldKind,
    pub ambient_dim: usize,
    pub subspaces: Vec<SubspaceBlock>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub metadata: Option<serde_json::Map<String, serde_json::Value>>,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OperatorFile {
    pub schema_version: u32,
    pub field: FieldKind,
    /// Row-major: a list of rows.
    pub matrix: Vec<Vec<ScalarRepr>>,
}

fn syntax_error(e: &serde_json::Error) -> FusionError {
    FusionError::MalformedFile(format!("line {}, column {}: {e}", e.line(), e.column()))
}

impl SystemFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: SystemFile = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(FusionError::MalformedFile(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("system file serializes");
        s.push('\n');
        s
    }

    /// Orthonormalizes each block and assembles the fusion system,
    /// preserving member order and weights.
    pub fn into_system(&self, tol: &Tolerances) -> Result<FusionSystem> {
        if self.subspaces.is_empty() {
            return Err(FusionError::MalformedFile(
                "subspaces: need at least one entry".into(),
            ));
        }
        let n = self.ambient_dim;
        let mut members = Vec::with_capacity(self.subspaces.len());
        for (si, block) in self.subspaces.iter().enumerate() {
            if !block.weight.is_finite() || block.weight <= 0.0 {
                return Err(FusionError::NonpositiveWeight(block.weight));
            }
            if block.basis.is_empty() {
                return Err(FusionError::MalformedFile(format!(
                    "subspaces[{si}].basis: need at least one column"
                )));
            }
            let cols = block.basis.len();
            let mut raw = CMatrix::zeros(n, cols);
            for (ci, col) in block.basis.iter().enumerate() {
                if col.len() != n {
                    return Err(FusionError::MalformedFile(format!(
                        "subspaces[{si}].basis[{ci}]: column length {} != ambient_dim {n}",
                        col.len()
                    )));
                }
                for (ri, s) in col.iter().enumerate() {
                    let locus = format!("subspaces[{si}].basis[{ci}][{ri}]");
                    raw[(ri, ci)] = s.to_scalar(self.field, &locus)?;
                }
            }
            let subspace = orthonormalize(&raw, tol)?;
            members.push((subspace, block.weight));
        }
        FusionSystem::new(members)
    }

    /// Encodes a system. The field is "real" exactly when every basis entry
    /// has zero imaginary part, so real examples stay diff-friendly.
    pub fn from_system(sys: &FusionSystem) -> Self {
        let all_real = sys.members().iter().all(|m| {
            m.subspace().basis().iter().all(|z| z.im == 0.0)
        });
        let field = if all_real {
            FieldKind::Real
        } else {
            FieldKind::Complex
        };
        let subspaces = sys
            .members()
            .iter()
            .map(|m| {
                let b = m.subspace().basis();
                let basis = (0..b.ncols())
                    .map(|ci| {
                        (0..b.nrows())
                            .map(|ri| {
                                let z = b[(ri, ci)];
                                match field {
                                    FieldKind::Real => ScalarRepr::Real(z.re),
                                    FieldKind::Complex => ScalarRepr::Complex([z.re, z.im]),
                                }
                            })
                            .collect()
                    })
                    .collect();
                SubspaceBlock {
                    weight: m.weight(),
                    basis,
                }
            })
            .collect();
        SystemFile {
            schema_version: SCHEMA_VERSION,
            field,
            ambient_dim: sys.ambient_dim(),
            subspaces,
            metadata: None,
        }
    }
}

impl OperatorFile {
    pub fn from_json(text: &str) -> Result<Self> {
        let file: OperatorFile = serde_json::from_str(text).map_err(|e| syntax_error(&e))?;
        if file.schema_version != SCHEMA_VERSION {
            return Err(FusionError::MalformedFile(format!(
                "schema_version: expected {SCHEMA_VERSION}, got {}",
                file.schema_version
            )));
        }
        Ok(file)
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("operator file serializes");
        s.push('\n');
        s
    }

    pub fn into_matrix(&self) -> Result<CMatrix> {
        let rows = self.matrix.len();
        if rows == 0 {
            return Err(FusionError::MalformedFile("matrix: empty".into()));
        }
        let cols = self.matrix[0].len();
        let mut out = CMatrix::zeros(rows, cols);
        for (ri, row) in self.matrix.iter().enumerate() {
            if row.len() != cols {
                return Err(FusionError::MalformedFile(format!(
                    "matrix[{ri}]: ragged row of length {} (expected {cols})",
                    row.len()
                )));
            }
            for (ci, s) in row.iter().enumerate() {
                let locus = format!("matrix[{ri}][{ci}]");
                out[(ri, ci)] = s.to_scalar(self.field, &locus)?;
            }
        }
        Ok(out)
    }

    pub fn from_matrix(m: &CMatrix) -> Self {
        let all_real = m.iter().all(|z| z.im == 0.0);
        let field = if all_real {
            FieldKind::Real
        } else {
            FieldKind::Complex
        };
        let matrix = (0..m.nrows())
            .map(|ri| {
                (0..m.ncols())
                    .map(|ci| {
                        let z = m[(ri, ci)];
                        match field {
                            FieldKind::Real => ScalarRepr::Real(z.re),
                            FieldKind::Complex => ScalarRepr::Complex([z.re, z.im]),
                        }
                    })
                    .collect()
            })
            .collect();
        OperatorFile {
            schema_version: SCHEMA_VERSION,
            field,
            matrix,
        }
    }
}

/// Parses a system file and orthonormalizes its blocks.
pub fn parse_system(text: &str, tol: &Tolerances) -> Result<FusionSystem> {
    SystemFile::from_json(text)?.into_system(tol)
}

/// Serializes a system to schema-version-1 JSON.
pub fn serialize_system(sys: &FusionSystem) -> String {
    SystemFile::from_system(sys).to_json()
}

pub fn parse_operator(text: &str) -> Result<CMatrix> {
    OperatorFile::from_json(text)?.into_matrix()
}
