//! The analysis report: classification flags plus every computed constant,
//! each carrying the name of the operation that produced it. Constants that
//! were not computed are explicitly null, never zero.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

use crate::basis::{
    basis_constant, bessel_hilbert_constants, f_dual, is_f_basis, DEFAULT_BASIS_CONSTANT_CAP,
};
use crate::error::Result;
use crate::frame::{classify, dimension_audit, is_complete, is_exact, is_minimal, FusionSystem};
use crate::hilbert::{operator_norm, CMatrix, Tolerances};
use crate::riesz::{gram_orthonormality_check, max_cross_gram, orthonormal_classify, riesz_analyze, OrthonormalClass};

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct ConstantEntry {
    pub value: f64,
    pub operation: String,
}

fn entry(value: f64, operation: &str) -> Option<ConstantEntry> {
    Some(ConstantEntry {
        value,
        operation: operation.to_string(),
    })
}

/// Constants of the analysis; absent values serialize as `null`.
#[derive(Debug, Clone, Default, Serialize, Deserialize, PartialEq)]
pub struct ReportConstants {
    #[serde(rename = "C")]
    pub c: Option<ConstantEntry>,
    #[serde(rename = "D")]
    pub d: Option<ConstantEntry>,
    #[serde(rename = "A")]
    pub a: Option<ConstantEntry>,
    #[serde(rename = "B")]
    pub b: Option<ConstantEntry>,
    #[serde(rename = "M")]
    pub m: Option<ConstantEntry>,
    pub lambda: Option<ConstantEntry>,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct ReportFlags {
    pub complete: bool,
    pub minimal: bool,
    /// Null when the system is not a fusion frame (exactness undefined).
    pub exact: Option<bool>,
    pub f_basis: bool,
    pub orthonormal_system: bool,
    pub orthonormal_basis: bool,
    pub riesz: bool,
    pub frame: bool,
    pub bessel: bool,
    pub tight: bool,
    pub parseval: bool,
    pub uniform_weight: bool,
}

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct AnalysisReport {
    pub schema_version: u32,
    pub ambient_dim: usize,
    pub members: usize,
    pub member_dims: Vec<usize>,
    pub sum_dims: usize,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
    pub flags: ReportFlags,
    pub constants: ReportConstants,
    /// Per-check numeric residuals, so near-threshold classifications stay
    /// auditable.
    pub residuals: BTreeMap<String, f64>,
}

impl AnalysisReport {
    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}

/// Runs every applicable check on a system and assembles the report.
pub fn analyze(sys: &FusionSystem, tol: &Tolerances, seed: Option<u64>) -> Result<AnalysisReport> {
    analyze_with_cap(sys, tol, seed, DEFAULT_BASIS_CONSTANT_CAP)
}

pub fn analyze_with_cap(
    sys: &FusionSystem,
    tol: &Tolerances,
    seed: Option<u64>,
    basis_cap: usize,
) -> Result<AnalysisReport> {
    tol.validate()?;
    let mut residuals = BTreeMap::new();

    let audit = dimension_audit(sys);
    let (class, bounds) = classify(sys, tol);
    residuals.insert("bounds_gap".into(), bounds.upper - bounds.lower);

    let complete = is_complete(sys, tol);
    let minimal = is_minimal(sys, tol).minimal;
    let exact = if class.frame {
        Some(is_exact(sys, tol)?)
    } else {
        None
    };

    let fcheck = is_f_basis(sys, tol);
    let cross_gram = max_cross_gram(sys);
    residuals.insert("max_cross_gram".into(), cross_gram);
    let ortho_class = orthonormal_classify(sys, tol);
    let cert = riesz_analyze(sys, tol);

    let mut constants = ReportConstants {
        c: entry(bounds.lower, "frame_bounds"),
        d: entry(bounds.upper, "frame_bounds"),
        ..Default::default()
    };

    if fcheck.verdict {
        let fd = f_dual(sys, tol)?;
        fd.validate(tol)?;
        let n = sys.ambient_dim();
        let mut sum = CMatrix::zeros(n, n);
        for p in fd.projectors() {
            sum += p;
        }
        residuals.insert(
            "projector_sum_identity".into(),
            operator_norm(&(sum - CMatrix::identity(n, n))),
        );
        let (a, b) = bessel_hilbert_constants(&fd);
        constants.a = entry(a, "bessel_hilbert_constants");
        constants.b = entry(b, "bessel_hilbert_constants");
        match basis_constant(&fd, basis_cap) {
            Ok(bc) => {
                constants.m = entry(bc.value, "basis_constant");
            }
            Err(crate::FusionError::TooManyMembers { .. }) => {
                // M stays null: the exhaustive method refused.
            }
            Err(e) => return Err(e),
        }
    }
    if cert.is_riesz {
        let residual = gram_orthonormality_check(&cert, sys, tol)?;
        residuals.insert("gram_orthonormality".into(), residual);
    }

    let flags = ReportFlags {
        complete,
        minimal,
        exact,
        f_basis: fcheck.verdict,
        orthonormal_system: ortho_class >= OrthonormalClass::System,
        orthonormal_basis: ortho_class == OrthonormalClass::Basis,
        riesz: cert.is_riesz,
        frame: class.frame,
        bessel: class.bessel,
        tight: class.tight,
        parseval: class.parseval,
        uniform_weight: class.uniform_weight,
    };

    Ok(AnalysisReport {
        schema_version: crate::io::SCHEMA_VERSION,
        ambient_dim: sys.ambient_dim(),
        members: sys.len(),
        member_dims: audit_dims(sys),
        sum_dims: audit.sum_dims,
        tolerances: *tol,
        seed,
        flags,
        constants,
        residuals,
    })
}

fn audit_dims(sys: &FusionSystem) -> Vec<usize> {
    sys.dims()
}

/// Serializable form of a perturbation certificate.
#[derive(Debug, Clone, Serialize, Deserialize, PartialEq)]
pub struct PerturbationReportJson {
    pub schema_version: u32,
    pub method: String,
    pub lambda_global: f64,
    pub lambda_subsetwise: Option<f64>,
    pub conclusive: bool,
    pub verdict: Option<bool>,
    pub tolerances: Tolerances,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub theta: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub seed: Option<u64>,
}

impl PerturbationReportJson {
    pub fn new(
        report: &crate::perturb::PerturbationReport,
        tol: &Tolerances,
        theta: Option<f64>,
        seed: Option<u64>,
    ) -> Self {
        Self {
            schema_version: crate::io::SCHEMA_VERSION,
            method: match report.method {
                crate::perturb::PerturbationMethod::GlobalOperator => "global_operator".into(),
                crate::perturb::PerturbationMethod::SubsetExhaustive => "subset_exhaustive".into(),
            },
            lambda_global: report.lambda_global,
            lambda_subsetwise: report.lambda_subsetwise,
            conclusive: report.conclusive,
            verdict: report.verdict,
            tolerances: *tol,
            theta,
            seed,
        }
    }

    pub fn to_json(&self) -> String {
        let mut s = serde_json::to_string_pretty(self).expect("report serializes");
        s.push('\n');
        s
    }
}
