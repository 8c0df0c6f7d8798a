//! Foundational linear algebra over ℂⁿ: subspaces with orthonormal bases,
//! orthogonal projectors, ranks and intersections, operator norms, and the
//! coefficient bundles that live in the ℓ²-direct-sum of a subspace family.
//!
//! Everything here is immutable after construction and every operation is a
//! pure function, so all types are safe to share across threads.

use nalgebra::{Complex, DMatrix, DVector, SymmetricEigen};
use serde::{Deserialize, Serialize};

use crate::error::{FusionError, Result};

pub type Scalar = Complex<f64>;
pub type CMatrix = DMatrix<Scalar>;
pub type CVector = DVector<Scalar>;

/// Relative tolerances used by every numerical decision in the crate.
///
/// `rank_tol` is applied relative to the largest singular value; rank
/// decisions use singular values only, so every rank-dependent answer has a
/// single mechanism. `ortho_tol` gates orthonormality checks and `eq_tol`
/// gates equality of operators and scalars.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Tolerances {
    pub ortho_tol: f64,
    pub rank_tol: f64,
    pub eq_tol: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self {
            ortho_tol: 1e-10,
            rank_tol: 1e-10,
            eq_tol: 1e-8,
        }
    }
}

impl Tolerances {
    pub fn validate(&self) -> Result<()> {
        for (name, v) in [
            ("ortho_tol", self.ortho_tol),
            ("rank_tol", self.rank_tol),
            ("eq_tol", self.eq_tol),
        ] {
            if !v.is_finite() || v <= 0.0 {
                return Err(FusionError::BadParams(format!(
                    "{name} must be strictly positive and finite, got {v}"
                )));
            }
        }
        Ok(())
    }
}

/// Largest singular value of `a` (the spectral norm). Zero for empty matrices.
pub fn operator_norm(a: &CMatrix) -> f64 {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0.0;
    }
    a.clone()
        .svd(false, false)
        .singular_values
        .iter()
        .fold(0.0_f64, |m, &s| m.max(s))
}

/// Numerical rank by singular-value thresholding at `rank_tol` relative to
/// the largest singular value.
pub fn numerical_rank(a: &CMatrix, rank_tol: f64) -> usize {
    if a.nrows() == 0 || a.ncols() == 0 {
        return 0;
    }
    let sv = a.clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0_f64, |m, &s| m.max(s));
    if smax == 0.0 {
        return 0;
    }
    sv.iter().filter(|&&s| s > rank_tol * smax).count()
}

/// Horizontal concatenation of matrices sharing a row count.
pub fn hstack(blocks: &[&CMatrix]) -> CMatrix {
    assert!(!blocks.is_empty(), "hstack of no blocks");
    let n = blocks[0].nrows();
    let total: usize = blocks.iter().map(|b| b.ncols()).sum();
    let mut out = CMatrix::zeros(n, total);
    let mut col = 0;
    for b in blocks {
        assert_eq!(b.nrows(), n, "hstack row mismatch");
        out.view_mut((0, col), (n, b.ncols())).copy_from(*b);
        col += b.ncols();
    }
    out
}

/// Eigenvalue range (λ_min, λ_max) of a Hermitian matrix.
pub fn hermitian_eigen_range(a: &CMatrix) -> (f64, f64) {
    let eig = SymmetricEigen::new(a.clone());
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &l in eig.eigenvalues.iter() {
        lo = lo.min(l);
        hi = hi.max(l);
    }
    (lo, hi)
}

/// Inverse square root of a Hermitian positive definite matrix.
pub fn hermitian_inv_sqrt(a: &CMatrix, rank_tol: f64) -> Result<CMatrix> {
    let eig = SymmetricEigen::new(a.clone());
    let lmax = eig.eigenvalues.iter().fold(0.0_f64, |m, &l| m.max(l));
    let mut d = CMatrix::zeros(a.nrows(), a.ncols());
    for (i, &l) in eig.eigenvalues.iter().enumerate() {
        if l <= rank_tol * lmax || l <= 0.0 {
            return Err(FusionError::SingularOperator);
        }
        d[(i, i)] = Scalar::new(1.0 / l.sqrt(), 0.0);
    }
    let q = &eig.eigenvectors;
    Ok(q * d * q.adjoint())
}

/// Moore–Penrose pseudo-inverse with singular values below
/// `rank_tol · σ_max` treated as zero.
pub fn pseudo_inverse(a: &CMatrix, rank_tol: f64) -> CMatrix {
    let svd = a.clone().svd(true, true);
    let u = svd.u.as_ref().expect("svd u");
    let v_t = svd.v_t.as_ref().expect("svd v_t");
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, &s| m.max(s));
    let k = svd.singular_values.len();
    let mut sigma_inv = CMatrix::zeros(k, k);
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if smax > 0.0 && s > rank_tol * smax {
            sigma_inv[(i, i)] = Scalar::new(1.0 / s, 0.0);
        }
    }
    v_t.adjoint() * sigma_inv * u.adjoint()
}

/// Orthonormal basis of the null space of a square matrix, by SVD.
/// Returns an n×d matrix (d possibly zero).
pub fn null_space_basis(a: &CMatrix, rank_tol: f64) -> CMatrix {
    let n = a.ncols();
    let svd = a.clone().svd(false, true);
    let v_t = svd.v_t.as_ref().expect("svd v_t");
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, &s| m.max(s));
    let mut cols: Vec<CVector> = Vec::new();
    for (i, &s) in svd.singular_values.iter().enumerate() {
        if smax == 0.0 || s <= rank_tol * smax {
            cols.push(v_t.row(i).adjoint());
        }
    }
    if cols.is_empty() {
        CMatrix::zeros(n, 0)
    } else {
        CMatrix::from_columns(&cols)
    }
}

/// A closed subspace of ℂⁿ, stored as an n×k matrix with orthonormal columns.
#[derive(Debug, Clone)]
pub struct Subspace {
    ambient_dim: usize,
    basis: CMatrix,
    label: Option<String>,
}

impl Subspace {
    /// Wraps a matrix whose columns are already orthonormal.
    pub fn new(basis: CMatrix, tol: &Tolerances) -> Result<Self> {
        let (n, k) = basis.shape();
        if n == 0 || k == 0 {
            return Err(FusionError::ZeroSubspace);
        }
        if k > n {
            return Err(FusionError::ShapeMismatch(format!(
                "{k} columns cannot be orthonormal in ambient dimension {n}"
            )));
        }
        let dev = operator_norm(&(basis.adjoint() * &basis - CMatrix::identity(k, k)));
        if dev > tol.ortho_tol {
            return Err(FusionError::BadParams(format!(
                "columns are not orthonormal (deviation {dev:.3e} > ortho_tol {:.3e})",
                tol.ortho_tol
            )));
        }
        Ok(Self {
            ambient_dim: n,
            basis,
            label: None,
        })
    }

    /// The coordinate subspace span{e_{offset+1}, …, e_{offset+k}} of ℂⁿ.
    pub fn coordinate_block(n: usize, offset: usize, k: usize) -> Self {
        assert!(offset + k <= n && k >= 1);
        let mut basis = CMatrix::zeros(n, k);
        for j in 0..k {
            basis[(offset + j, j)] = Scalar::new(1.0, 0.0);
        }
        Self {
            ambient_dim: n,
            basis,
            label: None,
        }
    }

    pub fn with_label(mut self, label: impl Into<String>) -> Self {
        self.label = Some(label.into());
        self
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    /// Dimension k of the subspace.
    pub fn dim(&self) -> usize {
        self.basis.ncols()
    }

    pub fn basis(&self) -> &CMatrix {
        &self.basis
    }

    pub fn label(&self) -> Option<&str> {
        self.label.as_deref()
    }

    /// Orthogonal projector π_W = B·Bᴴ onto the subspace.
    pub fn projector(&self) -> CMatrix {
        &self.basis * self.basis.adjoint()
    }

    /// dim(W ∩ V), computed as k_W + k_V − rank([B_W | B_V]).
    pub fn intersection_dim(&self, other: &Subspace, tol: &Tolerances) -> Result<usize> {
        if self.ambient_dim != other.ambient_dim {
            return Err(FusionError::DimensionMismatch {
                left: self.ambient_dim,
                right: other.ambient_dim,
            });
        }
        let joint = hstack(&[&self.basis, &other.basis]);
        let r = numerical_rank(&joint, tol.rank_tol);
        Ok(self.dim() + other.dim() - r)
    }
}

/// Builds a [`Subspace`] spanning the column space of an arbitrary matrix.
///
/// Already-orthonormal inputs are passed through unchanged. Otherwise the
/// left singular vectors above the rank threshold are kept, with each column
/// rescaled so its largest-modulus entry is real positive; the result is
/// deterministic for identical inputs.
pub fn orthonormalize(raw: &CMatrix, tol: &Tolerances) -> Result<Subspace> {
    let (n, m) = raw.shape();
    if n == 0 || m == 0 {
        return Err(FusionError::ZeroSubspace);
    }
    if m <= n {
        let dev = operator_norm(&(raw.adjoint() * raw - CMatrix::identity(m, m)));
        if dev <= tol.ortho_tol {
            return Subspace::new(raw.clone(), tol);
        }
    }
    if m == 1 {
        // Plain normalization keeps exact zeros that an SVD would smear.
        let norm = raw.norm();
        if norm <= tol.rank_tol {
            return Err(FusionError::ZeroSubspace);
        }
        let mut basis = raw / Scalar::new(norm, 0.0);
        canonicalize_column_phase(&mut basis, 0);
        return Subspace::new(basis, tol);
    }
    let svd = raw.clone().svd(true, false);
    let smax = svd.singular_values.iter().fold(0.0_f64, |m, &s| m.max(s));
    if smax <= tol.rank_tol {
        return Err(FusionError::ZeroSubspace);
    }
    let rank = svd
        .singular_values
        .iter()
        .filter(|&&s| s > tol.rank_tol * smax)
        .count();
    let u = svd.u.expect("svd u requested");
    let mut basis = u.columns(0, rank).into_owned();
    for j in 0..rank {
        canonicalize_column_phase(&mut basis, j);
    }
    Subspace::new(basis, tol)
}

/// Rescales column `j` so its largest-modulus entry is real positive.
fn canonicalize_column_phase(basis: &mut CMatrix, j: usize) {
    let mut imax = 0;
    let mut best = 0.0_f64;
    for i in 0..basis.nrows() {
        let a = basis[(i, j)].norm();
        if a > best {
            best = a;
            imax = i;
        }
    }
    if best > 0.0 {
        let fix = (basis[(imax, j)] / Scalar::new(best, 0.0)).conj();
        for i in 0..basis.nrows() {
            basis[(i, j)] *= fix;
        }
    }
}

/// How thoroughly an operator matrix has been vetted at construction.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum OperatorTag {
    General,
    InvertibleVerified,
    UnitaryVerified,
}

/// A square operator on ℂⁿ together with its verification tag.
#[derive(Debug, Clone)]
pub struct OperatorMatrix {
    matrix: CMatrix,
    tag: OperatorTag,
}

impl OperatorMatrix {
    pub fn general(matrix: CMatrix) -> Result<Self> {
        Self::check_square(&matrix)?;
        Ok(Self {
            matrix,
            tag: OperatorTag::General,
        })
    }

    /// Verifies σ_min > rank_tol·σ_max before tagging as invertible.
    pub fn invertible(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::check_square(&matrix)?;
        let sv = matrix.clone().svd(false, false).singular_values;
        let smax = sv.iter().fold(0.0_f64, |m, &s| m.max(s));
        let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
        if smax == 0.0 || smin <= tol.rank_tol * smax {
            return Err(FusionError::SingularOperator);
        }
        Ok(Self {
            matrix,
            tag: OperatorTag::InvertibleVerified,
        })
    }

    /// Verifies MᴴM = I within ortho_tol before tagging as unitary.
    pub fn unitary(matrix: CMatrix, tol: &Tolerances) -> Result<Self> {
        Self::check_square(&matrix)?;
        let n = matrix.nrows();
        let dev = operator_norm(&(matrix.adjoint() * &matrix - CMatrix::identity(n, n)));
        if dev > tol.ortho_tol {
            return Err(FusionError::BadParams(format!(
                "matrix is not unitary (deviation {dev:.3e})"
            )));
        }
        Ok(Self {
            matrix,
            tag: OperatorTag::UnitaryVerified,
        })
    }

    fn check_square(matrix: &CMatrix) -> Result<()> {
        if matrix.nrows() != matrix.ncols() || matrix.nrows() == 0 {
            return Err(FusionError::ShapeMismatch(format!(
                "operator must be square and nonempty, got {}x{}",
                matrix.nrows(),
                matrix.ncols()
            )));
        }
        Ok(())
    }

    pub fn matrix(&self) -> &CMatrix {
        &self.matrix
    }

    pub fn tag(&self) -> OperatorTag {
        self.tag
    }

    pub fn dim(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn is_invertible_verified(&self) -> bool {
        matches!(
            self.tag,
            OperatorTag::InvertibleVerified | OperatorTag::UnitaryVerified
        )
    }

    /// ‖T‖, the largest singular value.
    pub fn norm(&self) -> f64 {
        operator_norm(&self.matrix)
    }

    /// ‖T⁻¹‖ = 1/σ_min. Requires the invertible-verified (or unitary) tag.
    pub fn inverse_norm(&self) -> Result<f64> {
        if !self.is_invertible_verified() {
            return Err(FusionError::SingularOperator);
        }
        let sv = self.matrix.clone().svd(false, false).singular_values;
        let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
        Ok(1.0 / smin)
    }

    /// T⁻¹ by LU decomposition. Requires the invertible-verified tag.
    pub fn inverse(&self) -> Result<CMatrix> {
        if !self.is_invertible_verified() {
            return Err(FusionError::SingularOperator);
        }
        self.matrix
            .clone()
            .lu()
            .try_inverse()
            .ok_or(FusionError::SingularOperator)
    }
}

/// An element {g_j}_j of the ℓ²-direct-sum of a subspace family, stored as
/// the coordinate vectors of each g_j in the member's orthonormal basis
/// (so g_j = B_j · parts[j]).
#[derive(Debug, Clone)]
pub struct CoefficientBundle {
    parts: Vec<CVector>,
}

impl CoefficientBundle {
    pub fn new(parts: Vec<CVector>) -> Self {
        Self { parts }
    }

    pub fn parts(&self) -> &[CVector] {
        &self.parts
    }

    pub fn len(&self) -> usize {
        self.parts.len()
    }

    pub fn is_empty(&self) -> bool {
        self.parts.is_empty()
    }

    fn same_shape(&self, other: &Self) -> bool {
        self.parts.len() == other.parts.len()
            && self
                .parts
                .iter()
                .zip(&other.parts)
                .all(|(a, b)| a.len() == b.len())
    }

    /// ℓ²-direct-sum norm: (Σ_j ‖g_j‖²)^{1/2}.
    pub fn norm(&self) -> f64 {
        self.parts
            .iter()
            .map(|p| p.norm_squared())
            .sum::<f64>()
            .sqrt()
    }

    /// Direct-sum inner product Σ_j ⟨f_j, g_j⟩, conjugate-linear in `self`.
    pub fn inner(&self, other: &Self) -> Result<Scalar> {
        if !self.same_shape(other) {
            return Err(FusionError::ShapeMismatch(
                "bundles do not conform to the same system".into(),
            ));
        }
        let mut acc = Scalar::new(0.0, 0.0);
        for (f, g) in self.parts.iter().zip(&other.parts) {
            acc += f.dotc(g);
        }
        Ok(acc)
    }
}
