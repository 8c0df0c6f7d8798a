//! Orthonormal fusion systems and Riesz fusion bases: classification,
//! Pythagoras/Bessel checks, the Riesz certificate (transform, optimal
//! constants, equivalent inner product), resolutions of the identity, and
//! the image of an f-basis system under an invertible operator.

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::basis::{f_dual, is_f_basis, FDualSystem};
use crate::error::{FusionError, Result};
use crate::frame::{is_complete, FusionSystem};
use crate::generate::random_bundle;
use crate::hilbert::{
    operator_norm, orthonormalize, CMatrix, CVector, CoefficientBundle, OperatorMatrix, Scalar,
    Subspace, Tolerances,
};

/// Where a family sits in the orthonormal hierarchy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum OrthonormalClass {
    /// Members are not mutually orthogonal.
    None,
    /// Mutually orthogonal subspaces (the orthogonal projectors are an
    /// f-biorthogonal family).
    System,
    /// A complete orthonormal f-system.
    Basis,
}

/// Largest operator norm among the cross-Gram blocks B_iᴴ·B_j, i ≠ j.
/// Zero exactly when the members are mutually orthogonal.
pub fn max_cross_gram(sys: &FusionSystem) -> f64 {
    let m = sys.len();
    let mut worst = 0.0_f64;
    for i in 0..m {
        for j in (i + 1)..m {
            let block = sys.subspace(i).basis().adjoint() * sys.subspace(j).basis();
            worst = worst.max(operator_norm(&block));
        }
    }
    worst
}

pub fn orthonormal_classify(sys: &FusionSystem, tol: &Tolerances) -> OrthonormalClass {
    if max_cross_gram(sys) > tol.eq_tol {
        return OrthonormalClass::None;
    }
    if is_complete(sys, tol) {
        OrthonormalClass::Basis
    } else {
        OrthonormalClass::System
    }
}

/// |‖Σ_j g_j‖² − Σ_j ‖g_j‖²| for a bundle over an orthonormal f-system.
pub fn pythagoras_check(
    sys: &FusionSystem,
    bundle: &CoefficientBundle,
    tol: &Tolerances,
) -> Result<f64> {
    if orthonormal_classify(sys, tol) == OrthonormalClass::None {
        return Err(FusionError::NotOrthonormalSystem);
    }
    let total = sys.bundle_sum(bundle)?.norm_squared();
    let parts = bundle.norm() * bundle.norm();
    Ok((total - parts).abs())
}

/// Internal seed for the best-approximation spot check below.
const BEST_APPROX_SEED: u64 = 0x0be5_7a11;

/// Bessel margin ‖f‖² − Σ_j ‖π_{W_j}f‖² for an orthonormal f-system.
///
/// The margin is nonnegative up to eq_tol, and zero (Parseval) when the
/// system is an orthonormal f-basis. The best-approximation property of the
/// orthogonal expansion is spot-checked against 20 seeded random bundles;
/// a violation is a numerical inconsistency and is reported as an error.
pub fn bessel_inequality_check(sys: &FusionSystem, f: &CVector, tol: &Tolerances) -> Result<f64> {
    if orthonormal_classify(sys, tol) == OrthonormalClass::None {
        return Err(FusionError::NotOrthonormalSystem);
    }
    if f.len() != sys.ambient_dim() {
        return Err(FusionError::ShapeMismatch(format!(
            "vector has length {}, ambient dimension is {}",
            f.len(),
            sys.ambient_dim()
        )));
    }
    let mut projected_sq = 0.0;
    let mut expansion = CVector::zeros(f.len());
    for m in sys.members() {
        let coords = m.subspace().basis().adjoint() * f;
        projected_sq += coords.norm_squared();
        expansion += m.subspace().basis() * coords;
    }
    let margin = f.norm_squared() - projected_sq;

    let best = (f - &expansion).norm();
    let scale = f.norm().max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(BEST_APPROX_SEED);
    for _ in 0..20 {
        let bundle = random_bundle(sys, &mut rng);
        let candidate = (f - sys.bundle_sum(&bundle)?).norm();
        if best > candidate + tol.eq_tol * scale {
            return Err(FusionError::InternalCheck(format!(
                "orthogonal expansion is not the best approximation ({best:.6e} > {candidate:.6e})"
            )));
        }
    }
    Ok(margin)
}

/// Witness that a family is (or is not) a Riesz f-basis.
///
/// When `is_riesz`, the transform T = E maps the coordinate-block reference
/// orthonormal f-basis V_j onto W_j, (A, B) are the optimal two-sided norm
/// equivalence constants, and `gram` realizes the equivalent inner product
/// ⟨f, g⟩_T = gᴴ·G·f under which the W_j become orthonormal.
#[derive(Debug, Clone)]
pub struct RieszCertificate {
    pub is_riesz: bool,
    pub detail: Option<RieszDetail>,
}

#[derive(Debug, Clone)]
pub struct RieszDetail {
    /// Optimal lower constant A = σ_min(E)².
    pub lower: f64,
    /// Optimal upper constant B = σ_max(E)².
    pub upper: f64,
    /// T = E, invertible-verified; T·V_j = W_j.
    pub transform: OperatorMatrix,
    /// Coordinate-block reference orthonormal f-basis, in member order.
    pub reference_basis: Vec<Subspace>,
    /// G = (E·Eᴴ)⁻¹, Hermitian positive definite.
    pub gram: CMatrix,
}

pub fn riesz_analyze(sys: &FusionSystem, tol: &Tolerances) -> RieszCertificate {
    if !is_f_basis(sys, tol).verdict {
        return RieszCertificate {
            is_riesz: false,
            detail: None,
        };
    }
    let e = sys.stacked();
    let sv = e.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0_f64, |m, &s| m.max(s));
    let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    let transform = match OperatorMatrix::invertible(e.clone(), tol) {
        Ok(t) => t,
        Err(_) => {
            return RieszCertificate {
                is_riesz: false,
                detail: None,
            }
        }
    };
    let n = sys.ambient_dim();
    let mut reference_basis = Vec::with_capacity(sys.len());
    let mut offset = 0;
    for k in sys.dims() {
        reference_basis.push(Subspace::coordinate_block(n, offset, k));
        offset += k;
    }
    let ee = &e * e.adjoint();
    let gram_raw = ee
        .lu()
        .try_inverse()
        .expect("E·Eᴴ of an invertible E is invertible");
    // Symmetrize to keep G exactly Hermitian against rounding drift.
    let gram = (&gram_raw + gram_raw.adjoint()) * Scalar::new(0.5, 0.0);
    RieszCertificate {
        is_riesz: true,
        detail: Some(RieszDetail {
            lower: smin * smin,
            upper: smax * smax,
            transform,
            reference_basis,
            gram,
        }),
    }
}

/// Residual of W_j-orthonormality under the certificate's inner product:
/// max of the cross blocks B_iᴴ·G·B_j (i ≠ j) and the self-adjointness
/// defects P_jᴴ·G − G·P_j of the dual projectors.
pub fn gram_orthonormality_check(
    cert: &RieszCertificate,
    sys: &FusionSystem,
    tol: &Tolerances,
) -> Result<f64> {
    let detail = cert.detail.as_ref().filter(|_| cert.is_riesz).ok_or(FusionError::NotRiesz)?;
    let g = &detail.gram;
    let m = sys.len();
    let mut worst = 0.0_f64;
    for i in 0..m {
        for j in 0..m {
            if i != j {
                let block = sys.subspace(i).basis().adjoint() * g * sys.subspace(j).basis();
                worst = worst.max(operator_norm(&block));
            }
        }
    }
    let fd = f_dual(sys, tol)?;
    for p in fd.projectors() {
        let defect = p.adjoint() * g - g * p;
        worst = worst.max(operator_norm(&defect));
    }
    Ok(worst)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ResolutionKind {
    /// P_j = T·π_{V_j}·T⁻¹ — the f-dual projectors.
    P,
    /// S_j = T⁻¹·π_{V_j}·T.
    S,
    /// U_j = Tᴴ·π_{V_j}·(Tᴴ)⁻¹.
    U,
    /// R_j = (Tᴴ)⁻¹·π_{V_j}·Tᴴ.
    R,
}

/// A family of idempotents summing to the identity.
#[derive(Debug, Clone)]
pub struct ResolutionFamily {
    pub kind: ResolutionKind,
    pub operators: Vec<CMatrix>,
}

impl ResolutionFamily {
    /// Σ_j T_j = I and T_j² = T_j, both within eq_tol.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        if self.operators.is_empty() {
            return Err(FusionError::ShapeMismatch("empty resolution family".into()));
        }
        let n = self.operators[0].nrows();
        let mut sum = CMatrix::zeros(n, n);
        for op in &self.operators {
            sum += op;
            let dev = operator_norm(&(op * op - op));
            if dev > tol.eq_tol {
                return Err(FusionError::InternalCheck(format!(
                    "{:?}-family operator is not idempotent (deviation {dev:.3e})",
                    self.kind
                )));
            }
        }
        let dev = operator_norm(&(sum - CMatrix::identity(n, n)));
        if dev > tol.eq_tol {
            return Err(FusionError::InternalCheck(format!(
                "{:?}-family does not sum to the identity (deviation {dev:.3e})",
                self.kind
            )));
        }
        Ok(())
    }
}

/// The four resolutions of the identity attached to a Riesz certificate.
#[derive(Debug, Clone)]
pub struct Resolutions {
    pub p: ResolutionFamily,
    pub s: ResolutionFamily,
    pub u: ResolutionFamily,
    pub r: ResolutionFamily,
}

pub fn resolutions_of_identity(cert: &RieszCertificate, tol: &Tolerances) -> Result<Resolutions> {
    let detail = cert.detail.as_ref().filter(|_| cert.is_riesz).ok_or(FusionError::NotRiesz)?;
    let t = detail.transform.matrix();
    let t_inv = detail.transform.inverse()?;
    let t_adj = t.adjoint();
    let t_adj_inv = t_inv.adjoint();

    let mut fams = [
        ResolutionFamily { kind: ResolutionKind::P, operators: vec![] },
        ResolutionFamily { kind: ResolutionKind::S, operators: vec![] },
        ResolutionFamily { kind: ResolutionKind::U, operators: vec![] },
        ResolutionFamily { kind: ResolutionKind::R, operators: vec![] },
    ];
    for v in &detail.reference_basis {
        let pi = v.projector();
        fams[0].operators.push(t * &pi * &t_inv);
        fams[1].operators.push(&t_inv * &pi * t);
        fams[2].operators.push(&t_adj * &pi * &t_adj_inv);
        fams[3].operators.push(&t_adj_inv * &pi * &t_adj);
    }
    for fam in &fams {
        fam.validate(tol)?;
    }
    let [p, s, u, r] = fams;
    Ok(Resolutions { p, s, u, r })
}

/// Image {(T·W_j, T·P_j·T⁻¹)}_j of an f-basis system under an invertible T.
pub fn transform_f_basis(
    fd: &FDualSystem,
    t: &OperatorMatrix,
    tol: &Tolerances,
) -> Result<FDualSystem> {
    if !t.is_invertible_verified() {
        return Err(FusionError::SingularOperator);
    }
    if t.dim() != fd.ambient_dim() {
        return Err(FusionError::DimensionMismatch {
            left: t.dim(),
            right: fd.ambient_dim(),
        });
    }
    let t_inv = t.inverse()?;
    let members = fd
        .system()
        .members()
        .iter()
        .map(|m| {
            let mapped = t.matrix() * m.subspace().basis();
            orthonormalize(&mapped, tol).map(|s| (s, m.weight()))
        })
        .collect::<Result<Vec<_>>>()?;
    let system = FusionSystem::new(members)?;
    let out = f_dual(&system, tol)?;
    // The transported projectors T·P_j·T⁻¹ must coincide with the f-dual of
    // the image system (uniqueness of the f-dual sequence).
    for (j, p) in fd.projectors().iter().enumerate() {
        let moved = t.matrix() * p * &t_inv;
        let dev = operator_norm(&(&moved - out.projector(j)));
        if dev > tol.eq_tol {
            return Err(FusionError::InternalCheck(format!(
                "transported projector {j} deviates from the image f-dual by {dev:.3e}"
            )));
        }
    }
    Ok(out)
}
