//! Paley–Wiener-type stability certificates for f-bases.
//!
//! Given a known f-basis {W_j}_j and a candidate family {V_j}_j, the
//! certificates compute a perturbation constant λ and, when λ < 1, conclude
//! that {V_j}_j is an f-basis. Every positive verdict is cross-checked
//! against the direct f-basis test; the certificates are one-directional, so
//! λ ≥ 1 yields an inconclusive report rather than a refutation.

use crate::basis::{is_f_basis, verify_biorthogonality, BiorthogonalFamily, FDualSystem};
use crate::error::{FusionError, Result};
use crate::frame::FusionSystem;
use crate::hilbert::{
    hermitian_inv_sqrt, hstack, null_space_basis, operator_norm, pseudo_inverse, CMatrix,
    Subspace, Tolerances,
};

/// Default member cap for the exhaustive subsetwise certificates.
pub const DEFAULT_SUBSET_CAP: usize = 12;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PerturbationMethod {
    GlobalOperator,
    SubsetExhaustive,
}

/// Outcome of a perturbation certificate.
///
/// `lambda_global` is the constant of the full-index operator; the
/// subsetwise methods additionally report the maximum over all nonempty
/// subsets. `conclusive` is true only when the λ used by the method is
/// strictly below 1 − eq_tol, in which case `verdict` records the certified
/// (and cross-checked) f-basis claim for the candidate family.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PerturbationReport {
    pub lambda_global: f64,
    pub lambda_subsetwise: Option<f64>,
    pub conclusive: bool,
    pub verdict: Option<bool>,
    pub method: PerturbationMethod,
}

fn check_candidates(w: &FDualSystem, v: &[Subspace], per_member_dims: bool) -> Result<()> {
    if v.len() != w.len() {
        return Err(FusionError::ShapeMismatch(format!(
            "candidate family has {} members, base has {}",
            v.len(),
            w.len()
        )));
    }
    let n = w.ambient_dim();
    for (j, vj) in v.iter().enumerate() {
        if vj.ambient_dim() != n {
            return Err(FusionError::DimensionMismatch {
                left: vj.ambient_dim(),
                right: n,
            });
        }
        if per_member_dims {
            let expected = w.system().subspace(j).dim();
            if vj.dim() != expected {
                return Err(FusionError::DimMismatchPerMember {
                    index: j,
                    got: vj.dim(),
                    expected,
                });
            }
        }
    }
    Ok(())
}

fn candidate_system(v: &[Subspace]) -> Result<FusionSystem> {
    FusionSystem::unweighted(v.to_vec())
}

fn certify(
    lambda_used: f64,
    lambda_global: f64,
    lambda_subsetwise: Option<f64>,
    method: PerturbationMethod,
    v: &[Subspace],
    tol: &Tolerances,
) -> Result<PerturbationReport> {
    let conclusive = lambda_used < 1.0 - tol.eq_tol;
    let verdict = if conclusive {
        let direct = is_f_basis(&candidate_system(v)?, tol);
        if !direct.verdict {
            return Err(FusionError::InternalCheck(format!(
                "certificate concluded λ = {lambda_used:.6e} < 1 but the direct f-basis test fails ({})",
                direct.reason
            )));
        }
        Some(true)
    } else {
        None
    };
    Ok(PerturbationReport {
        lambda_global,
        lambda_subsetwise,
        conclusive,
        verdict,
        method,
    })
}

/// Global certificate: λ = ‖Σ_j (I − π_{V_j})·P_{W_j}‖.
///
/// The operator is the one built in the stability proof: it maps the unique
/// expansion f = Σ g_j to Σ (g_j − π_{V_j}g_j), so ‖T‖ < 1 makes I − T
/// invertible with (I − T)·W_j = V_j.
pub fn paley_wiener_global(
    w: &FDualSystem,
    v: &[Subspace],
    tol: &Tolerances,
) -> Result<PerturbationReport> {
    check_candidates(w, v, true)?;
    let n = w.ambient_dim();
    let id = CMatrix::identity(n, n);
    let mut t = CMatrix::zeros(n, n);
    for (vj, p) in v.iter().zip(w.projectors()) {
        t += (&id - vj.projector()) * p;
    }
    let lambda = operator_norm(&t);
    certify(lambda, lambda, None, PerturbationMethod::GlobalOperator, v, tol)
}

fn subset_members(mask: usize, m: usize) -> Vec<usize> {
    (0..m).filter(|j| mask & (1 << j) != 0).collect()
}

/// Subsetwise certificate: λ_F = ‖C_F·(D_Fᴴ·D_F)^{−1/2}‖ for every nonempty
/// subset F, where D_F stacks the member bases of F and C_F their defects
/// (I − π_{V_j})·B_j. This is the exact supremum of
/// ‖Σ_F (g_j − π_{V_j}g_j)‖ / ‖Σ_F g_j‖, since D_F has full column rank for
/// a verified f-basis.
pub fn paley_wiener_subsetwise(
    w: &FDualSystem,
    v: &[Subspace],
    max_members: usize,
    tol: &Tolerances,
) -> Result<PerturbationReport> {
    check_candidates(w, v, true)?;
    let m = w.len();
    if m > max_members {
        return Err(FusionError::TooManyMembers {
            members: m,
            cap: max_members,
        });
    }
    let n = w.ambient_dim();
    let id = CMatrix::identity(n, n);
    let defects: Vec<CMatrix> = v
        .iter()
        .zip(w.system().members())
        .map(|(vj, mem)| (&id - vj.projector()) * mem.subspace().basis())
        .collect();

    let full_mask = (1_usize << m) - 1;
    let mut lambda_max = 0.0_f64;
    let mut lambda_full = 0.0_f64;
    for mask in 1..=full_mask {
        let idx = subset_members(mask, m);
        let c_blocks: Vec<&CMatrix> = idx.iter().map(|&j| &defects[j]).collect();
        let d_blocks: Vec<&CMatrix> = idx
            .iter()
            .map(|&j| w.system().subspace(j).basis())
            .collect();
        let c_f = hstack(&c_blocks);
        let d_f = hstack(&d_blocks);
        let gram = d_f.adjoint() * &d_f;
        let whiten = hermitian_inv_sqrt(&gram, tol.rank_tol)?;
        let lambda_f = operator_norm(&(c_f * whiten));
        lambda_max = lambda_max.max(lambda_f);
        if mask == full_mask {
            lambda_full = lambda_f;
        }
    }
    certify(
        lambda_max,
        lambda_full,
        Some(lambda_max),
        PerturbationMethod::SubsetExhaustive,
        v,
        tol,
    )
}

/// Biorthogonal certificate: per subset F, with A_F = Σ_F (P_j − Q_j) and
/// B_F = Σ_F P_j, λ_F = ‖A_F·B_F⁺‖ — valid only when null(B_F) ⊆ null(A_F).
/// A subset violating that containment makes the hypothesis unsatisfiable
/// for any finite λ and the report is inconclusive.
pub fn biorthogonal_perturbation(
    w: &FDualSystem,
    v: &FusionSystem,
    q: &BiorthogonalFamily,
    max_members: usize,
    tol: &Tolerances,
) -> Result<PerturbationReport> {
    let m = w.len();
    if v.len() != m || q.len() != m {
        return Err(FusionError::ShapeMismatch(format!(
            "expected {m} candidate subspaces and operators, got {} and {}",
            v.len(),
            q.len()
        )));
    }
    if v.ambient_dim() != w.ambient_dim() {
        return Err(FusionError::DimensionMismatch {
            left: v.ambient_dim(),
            right: w.ambient_dim(),
        });
    }
    if !verify_biorthogonality(v, q, tol)? {
        return Err(FusionError::NotBiorthogonal);
    }
    if m > max_members {
        return Err(FusionError::TooManyMembers {
            members: m,
            cap: max_members,
        });
    }
    let n = w.ambient_dim();
    let full_mask = (1_usize << m) - 1;
    let mut lambda_max = 0.0_f64;
    let mut lambda_full = 0.0_f64;
    let mut kernel_ok = true;
    for mask in 1..=full_mask {
        let mut a_f = CMatrix::zeros(n, n);
        let mut b_f = CMatrix::zeros(n, n);
        for j in subset_members(mask, m) {
            a_f += w.projector(j) - q.operator(j);
            b_f += w.projector(j);
        }
        let nullity = null_space_basis(&b_f, tol.rank_tol);
        if nullity.ncols() > 0 {
            let leak = operator_norm(&(&a_f * &nullity));
            if leak > tol.eq_tol * (1.0 + operator_norm(&a_f)) {
                kernel_ok = false;
            }
        }
        let lambda_f = operator_norm(&(&a_f * pseudo_inverse(&b_f, tol.rank_tol)));
        lambda_max = lambda_max.max(lambda_f);
        if mask == full_mask {
            lambda_full = lambda_f;
        }
    }
    if !kernel_ok {
        // The subset-quantified hypothesis cannot hold for any finite λ.
        return Ok(PerturbationReport {
            lambda_global: lambda_full,
            lambda_subsetwise: None,
            conclusive: false,
            verdict: None,
            method: PerturbationMethod::SubsetExhaustive,
        });
    }
    let subspaces: Vec<Subspace> = v
        .members()
        .iter()
        .map(|m| m.subspace().clone())
        .collect();
    certify(
        lambda_max,
        lambda_full,
        Some(lambda_max),
        PerturbationMethod::SubsetExhaustive,
        &subspaces,
        tol,
    )
}
