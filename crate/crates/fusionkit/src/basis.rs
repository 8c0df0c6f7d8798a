//! Fusion (Schauder) basis machinery: the f-basis test, the f-dual sequence
//! of oblique projections, the basis constant M, the optimal Bessel/Hilbert
//! constants, the dual f-basis system, and f-biorthogonal families.
//!
//! A family {W_j}_j with Σ_j dim W_j = n is an f-basis of ℂⁿ exactly when the
//! stacked matrix E = [B_1 | … | B_m] is invertible. Every construction here
//! is written in terms of E and its inverse.

use crate::error::{FBasisReason, FusionError, Result};
use crate::frame::{is_complete, is_minimal, FusionSystem};
use crate::hilbert::{
    hstack, operator_norm, orthonormalize, CMatrix, Tolerances,
};

/// Default member cap for the exhaustive subset enumeration in
/// [`basis_constant`].
pub const DEFAULT_BASIS_CONSTANT_CAP: usize = 16;

/// Verdict of the f-basis test.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct FBasisCheck {
    pub verdict: bool,
    pub reason: FBasisReason,
}

/// A family is an f-basis iff the member dimensions sum to n and the stacked
/// basis matrix is invertible (smallest singular value above the rank
/// threshold).
pub fn is_f_basis(sys: &FusionSystem, tol: &Tolerances) -> FBasisCheck {
    if sys.sum_dims() != sys.ambient_dim() {
        return FBasisCheck {
            verdict: false,
            reason: FBasisReason::DimMismatch,
        };
    }
    let e = sys.stacked();
    let sv = e.svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0_f64, |m, &s| m.max(s));
    let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    if smax == 0.0 || smin <= tol.rank_tol * smax {
        return FBasisCheck {
            verdict: false,
            reason: FBasisReason::SingularStack,
        };
    }
    FBasisCheck {
        verdict: true,
        reason: FBasisReason::Ok,
    }
}

/// An f-basis together with its f-dual sequence of oblique projections
/// P_j = B_j · (block j of E⁻¹).
///
/// The projectors resolve the identity, satisfy P_i·P_j = δ_ij·P_j, and
/// each P_j has range W_j.
#[derive(Debug, Clone)]
pub struct FDualSystem {
    system: FusionSystem,
    stacked: CMatrix,
    projectors: Vec<CMatrix>,
}

impl FDualSystem {
    pub fn system(&self) -> &FusionSystem {
        &self.system
    }

    /// E = [B_1 | … | B_m], square and invertible.
    pub fn stacked(&self) -> &CMatrix {
        &self.stacked
    }

    pub fn projectors(&self) -> &[CMatrix] {
        &self.projectors
    }

    pub fn projector(&self, j: usize) -> &CMatrix {
        &self.projectors[j]
    }

    pub fn len(&self) -> usize {
        self.projectors.len()
    }

    pub fn is_empty(&self) -> bool {
        self.projectors.is_empty()
    }

    pub fn ambient_dim(&self) -> usize {
        self.system.ambient_dim()
    }

    /// Checks the defining invariants: Σ_j P_j = I, P_i·P_j = δ_ij·P_j, and
    /// range(P_j) = W_j via the block formula against E⁻¹.
    pub fn validate(&self, tol: &Tolerances) -> Result<()> {
        let n = self.ambient_dim();
        let id = CMatrix::identity(n, n);
        let mut sum = CMatrix::zeros(n, n);
        for p in &self.projectors {
            sum += p;
        }
        let dev = operator_norm(&(&sum - &id));
        if dev > tol.eq_tol {
            return Err(FusionError::InternalCheck(format!(
                "projectors do not resolve the identity (deviation {dev:.3e})"
            )));
        }
        for i in 0..self.len() {
            for j in 0..self.len() {
                let prod = &self.projectors[i] * &self.projectors[j];
                let expect = if i == j {
                    self.projectors[j].clone()
                } else {
                    CMatrix::zeros(n, n)
                };
                let dev = operator_norm(&(prod - expect));
                if dev > tol.eq_tol {
                    return Err(FusionError::InternalCheck(format!(
                        "projector algebra P_{i}·P_{j} deviates by {dev:.3e}"
                    )));
                }
            }
        }
        let inv = self
            .stacked
            .clone()
            .lu()
            .try_inverse()
            .ok_or(FusionError::SingularOperator)?;
        for j in 0..self.len() {
            let block = block_projector(&self.system, &inv, j);
            let dev = operator_norm(&(&self.projectors[j] - &block));
            if dev > tol.eq_tol {
                return Err(FusionError::InternalCheck(format!(
                    "projector {j} deviates from the block formula by {dev:.3e}"
                )));
            }
        }
        Ok(())
    }
}

fn block_projector(sys: &FusionSystem, stacked_inv: &CMatrix, j: usize) -> CMatrix {
    let offset = sys.block_offset(j);
    let k = sys.subspace(j).dim();
    let rows = stacked_inv.rows(offset, k);
    sys.subspace(j).basis() * rows
}

/// Constructs the f-dual sequence of an f-basis.
pub fn f_dual(sys: &FusionSystem, tol: &Tolerances) -> Result<FDualSystem> {
    let check = is_f_basis(sys, tol);
    if !check.verdict {
        return Err(FusionError::NotFBasis {
            reason: check.reason,
        });
    }
    let stacked = sys.stacked();
    let inv = stacked
        .clone()
        .lu()
        .try_inverse()
        .ok_or(FusionError::SingularOperator)?;
    let projectors = (0..sys.len())
        .map(|j| block_projector(sys, &inv, j))
        .collect();
    Ok(FDualSystem {
        system: sys.clone(),
        stacked,
        projectors,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisConstantMethod {
    Exhaustive,
    NotComputed,
}

/// The basis constant M = sup_F ‖S_F‖ over nonempty subsets F, where
/// S_F = Σ_{j∈F} P_j is the partial-sum operator.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BasisConstant {
    pub value: f64,
    pub method: BasisConstantMethod,
    pub subset_count: usize,
}

/// Exhaustive evaluation of M over all 2ᵐ−1 nonempty subsets.
///
/// M is a supremum over subsets and no sub-exponential exact method is
/// available, so the enumeration refuses above `max_members` instead of
/// silently approximating.
pub fn basis_constant(fd: &FDualSystem, max_members: usize) -> Result<BasisConstant> {
    let m = fd.len();
    if m > max_members {
        return Err(FusionError::TooManyMembers {
            members: m,
            cap: max_members,
        });
    }
    let n = fd.ambient_dim();
    let mut best = 0.0_f64;
    let total = (1_usize << m) - 1;
    for mask in 1..=total {
        let mut s = CMatrix::zeros(n, n);
        for (j, p) in fd.projectors().iter().enumerate() {
            if mask & (1 << j) != 0 {
                s += p;
            }
        }
        best = best.max(operator_norm(&s));
    }
    Ok(BasisConstant {
        value: best,
        method: BasisConstantMethod::Exhaustive,
        subset_count: total,
    })
}

/// Optimal Bessel and Hilbert constants (A, B) of the f-basis.
///
/// With g_j = B_j·c_j one has Σ_j‖g_j‖² = ‖c‖² and ‖Σ_j g_j‖ = ‖E·c‖, so the
/// optimal constants in A·Σ‖g_j‖² ≤ ‖Σ g_j‖² ≤ B·Σ‖g_j‖² are the extreme
/// squared singular values of E.
pub fn bessel_hilbert_constants(fd: &FDualSystem) -> (f64, f64) {
    let sv = fd.stacked().clone().svd(false, false).singular_values;
    let smax = sv.iter().fold(0.0_f64, |m, &s| m.max(s));
    let smin = sv.iter().fold(f64::INFINITY, |m, &s| m.min(s));
    (smin * smin, smax * smax)
}

/// The dual f-basis system {(P_jᴴ(W_j), P_jᴴ)}_j.
pub fn dual_system(fd: &FDualSystem, tol: &Tolerances) -> Result<FDualSystem> {
    let members = fd
        .system()
        .members()
        .iter()
        .enumerate()
        .map(|(j, m)| {
            let mapped = fd.projector(j).adjoint() * m.subspace().basis();
            orthonormalize(&mapped, tol).map(|s| (s, m.weight()))
        })
        .collect::<Result<Vec<_>>>()?;
    let system = FusionSystem::new(members)?;
    let dual = FDualSystem {
        stacked: system.stacked(),
        system,
        projectors: fd.projectors().iter().map(|p| p.adjoint()).collect(),
    };
    dual.validate(tol)?;
    Ok(dual)
}

/// Operators Q_j with Q_i·g = δ_ij·g for every g ∈ W_j, together with a flag
/// recording whether the family is the unique one (true exactly when the
/// system is complete).
#[derive(Debug, Clone)]
pub struct BiorthogonalFamily {
    operators: Vec<CMatrix>,
    unique: bool,
}

impl BiorthogonalFamily {
    pub fn new(operators: Vec<CMatrix>, unique: bool) -> Self {
        Self { operators, unique }
    }

    pub fn operators(&self) -> &[CMatrix] {
        &self.operators
    }

    pub fn operator(&self, j: usize) -> &CMatrix {
        &self.operators[j]
    }

    pub fn len(&self) -> usize {
        self.operators.len()
    }

    pub fn is_empty(&self) -> bool {
        self.operators.is_empty()
    }

    pub fn unique(&self) -> bool {
        self.unique
    }
}

/// Builds an f-biorthogonal family for a minimal system.
///
/// For a complete system this is the f-dual sequence and it is unique. For
/// an incomplete one the f-dual inside H₀ = span{W_j}_j composed with π_{H₀}
/// is returned as the canonical representative, flagged non-unique.
pub fn biorthogonal_family(sys: &FusionSystem, tol: &Tolerances) -> Result<BiorthogonalFamily> {
    let report = is_minimal(sys, tol);
    if !report.minimal {
        return Err(FusionError::NotMinimal(report.violations));
    }
    if is_complete(sys, tol) {
        let fd = f_dual(sys, tol)?;
        return Ok(BiorthogonalFamily {
            operators: fd.projectors,
            unique: true,
        });
    }
    let blocks: Vec<&CMatrix> = sys.members().iter().map(|m| m.subspace().basis()).collect();
    let h0 = orthonormalize(&hstack(&blocks), tol)?;
    let h = h0.basis(); // n×r
    let r = h0.dim();
    // W_j expressed in H₀ coordinates keeps orthonormal columns.
    let coords: Vec<CMatrix> = sys
        .members()
        .iter()
        .map(|m| h.adjoint() * m.subspace().basis())
        .collect();
    if sys.sum_dims() != r {
        return Err(FusionError::InternalCheck(
            "minimal family dimensions do not sum to the span dimension".into(),
        ));
    }
    let coord_refs: Vec<&CMatrix> = coords.iter().collect();
    let stacked = hstack(&coord_refs);
    let inv = stacked
        .lu()
        .try_inverse()
        .ok_or(FusionError::SingularOperator)?;
    let mut operators = Vec::with_capacity(sys.len());
    let mut offset = 0;
    for c in &coords {
        let k = c.ncols();
        let p_coord = c * inv.rows(offset, k); // r×r
        operators.push(h * p_coord * h.adjoint());
        offset += k;
    }
    Ok(BiorthogonalFamily {
        operators,
        unique: false,
    })
}

/// Checks Q_i·g_j = δ_ij·g_j on the basis columns of every member.
pub fn verify_biorthogonality(
    sys: &FusionSystem,
    fam: &BiorthogonalFamily,
    tol: &Tolerances,
) -> Result<bool> {
    if fam.len() != sys.len() {
        return Err(FusionError::ShapeMismatch(format!(
            "family has {} operators for {} members",
            fam.len(),
            sys.len()
        )));
    }
    let n = sys.ambient_dim();
    for q in fam.operators() {
        if q.shape() != (n, n) {
            return Err(FusionError::ShapeMismatch(format!(
                "operator is {}x{}, ambient dimension is {n}",
                q.nrows(),
                q.ncols()
            )));
        }
    }
    let mut worst = 0.0_f64;
    for (i, q) in fam.operators().iter().enumerate() {
        for j in 0..sys.len() {
            let b = sys.subspace(j).basis();
            let image = q * b;
            let expect = if i == j { b.clone() } else { CMatrix::zeros(n, b.ncols()) };
            worst = worst.max(operator_norm(&(image - expect)));
        }
    }
    Ok(worst <= tol.eq_tol)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::{CVector, Scalar, Subspace};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn c(re: f64, im: f64) -> Scalar {
        Scalar::new(re, im)
    }

    fn tol() -> Tolerances {
        Tolerances::default()
    }

    fn line(n: usize, coords: &[f64]) -> Subspace {
        let raw = CMatrix::from_fn(n, 1, |i, _| c(coords[i], 0.0));
        orthonormalize(&raw, &tol()).unwrap()
    }

    /// SYS-B: {span{e1}, span{(e1+e2)/√2}} in ℂ².
    fn sys_b() -> FusionSystem {
        FusionSystem::unweighted(vec![line(2, &[1.0, 0.0]), line(2, &[1.0, 1.0])]).unwrap()
    }

    fn coordinate_lines(n: usize) -> FusionSystem {
        FusionSystem::unweighted((0..n).map(|i| Subspace::coordinate_block(n, i, 1)).collect())
            .unwrap()
    }

    /// The family W_j = span{Σ_{i≠j} e_i} in ℂⁿ.
    fn complement_sum_family(n: usize) -> FusionSystem {
        let subspaces = (0..n)
            .map(|j| {
                let raw = CMatrix::from_fn(n, 1, |i, _| {
                    if i == j {
                        c(0.0, 0.0)
                    } else {
                        c(1.0, 0.0)
                    }
                });
                orthonormalize(&raw, &tol()).unwrap()
            })
            .collect();
        FusionSystem::unweighted(subspaces).unwrap()
    }

    /// Independent oracle: solve E·x = e_k by Gaussian elimination with
    /// partial pivoting for every standard basis vector, then read the
    /// projector P_j from the block rows of the assembled inverse.
    fn gauss_solve(a: &CMatrix, b: &CVector) -> CVector {
        let n = a.nrows();
        let mut m = a.clone();
        let mut rhs = b.clone();
        for col in 0..n {
            let mut piv = col;
            let mut best = m[(col, col)].norm();
            for row in (col + 1)..n {
                if m[(row, col)].norm() > best {
                    best = m[(row, col)].norm();
                    piv = row;
                }
            }
            assert!(best > 0.0, "oracle hit a singular matrix");
            if piv != col {
                m.swap_rows(piv, col);
                rhs.swap_rows(piv, col);
            }
            let d = m[(col, col)];
            for row in (col + 1)..n {
                let factor = m[(row, col)] / d;
                for k in col..n {
                    let sub = factor * m[(col, k)];
                    m[(row, k)] -= sub;
                }
                let sub = factor * rhs[col];
                rhs[row] -= sub;
            }
        }
        let mut x = CVector::zeros(n);
        for row in (0..n).rev() {
            let mut acc = rhs[row];
            for k in (row + 1)..n {
                acc -= m[(row, k)] * x[k];
            }
            x[row] = acc / m[(row, row)];
        }
        x
    }

    fn oracle_projectors(sys: &FusionSystem) -> Vec<CMatrix> {
        let e = sys.stacked();
        let n = sys.ambient_dim();
        let mut inv = CMatrix::zeros(n, n);
        for k in 0..n {
            let mut rhs = CVector::zeros(n);
            rhs[k] = c(1.0, 0.0);
            inv.set_column(k, &gauss_solve(&e, &rhs));
        }
        (0..sys.len())
            .map(|j| {
                let offset = sys.block_offset(j);
                let kj = sys.subspace(j).dim();
                sys.subspace(j).basis() * inv.rows(offset, kj)
            })
            .collect()
    }

    pub(crate) fn random_f_basis(n: usize, dims: &[usize], seed: u64) -> FusionSystem {
        crate::generate::random_riesz(n, dims, 4.0, seed, &tol()).unwrap()
    }

    #[test]
    fn f_basis_examples() {
        assert!(is_f_basis(&complement_sum_family(3), &tol()).verdict);

        let planes = FusionSystem::unweighted(vec![
            Subspace::coordinate_block(3, 0, 2),
            {
                let raw = CMatrix::from_column_slice(
                    3,
                    2,
                    &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
                );
                Subspace::new(raw, &tol()).unwrap()
            },
        ])
        .unwrap();
        let check = is_f_basis(&planes, &tol());
        assert!(!check.verdict);
        assert_eq!(check.reason, FBasisReason::DimMismatch);

        let repeated = FusionSystem::unweighted(vec![
            Subspace::coordinate_block(2, 0, 1),
            Subspace::coordinate_block(2, 0, 1),
        ])
        .unwrap();
        let check = is_f_basis(&repeated, &tol());
        assert!(!check.verdict);
        assert_eq!(check.reason, FBasisReason::SingularStack);
    }

    #[test]
    fn f_dual_of_orthogonal_decomposition_is_orthogonal_projectors() {
        let sys = coordinate_lines(2);
        let fd = f_dual(&sys, &tol()).unwrap();
        for (j, p) in fd.projectors().iter().enumerate() {
            let dev = operator_norm(&(p - sys.subspace(j).projector()));
            assert!(dev <= 1e-12);
        }
        fd.validate(&tol()).unwrap();
    }

    #[test]
    fn f_dual_of_sys_b_matches_hand_computation() {
        let fd = f_dual(&sys_b(), &tol()).unwrap();
        let p1 = CMatrix::from_row_slice(2, 2, &[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0)]);
        let p2 = CMatrix::from_row_slice(2, 2, &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)]);
        assert!(operator_norm(&(fd.projector(0) - &p1)) <= 1e-10);
        assert!(operator_norm(&(fd.projector(1) - &p2)) <= 1e-10);
        // Column-solve oracle agrees.
        for (p, q) in fd.projectors().iter().zip(oracle_projectors(&sys_b())) {
            assert!(operator_norm(&(p - q)) <= 1e-10);
        }
    }

    #[test]
    fn f_dual_requires_f_basis() {
        let repeated = FusionSystem::unweighted(vec![
            Subspace::coordinate_block(2, 0, 1),
            Subspace::coordinate_block(2, 0, 1),
        ])
        .unwrap();
        assert!(matches!(
            f_dual(&repeated, &tol()),
            Err(FusionError::NotFBasis { .. })
        ));
    }

    #[test]
    fn f_dual_agrees_with_solve_oracle_on_random_bases() {
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(900 + seed);
            let n = rng.gen_range(2..=8usize);
            let m = rng.gen_range(1..=4usize.min(n));
            let dims = crate::generate::random_partition(n, m, &mut rng);
            let sys = random_f_basis(n, &dims, 7000 + seed);
            let fd = f_dual(&sys, &tol()).unwrap();
            for (p, q) in fd.projectors().iter().zip(oracle_projectors(&sys)) {
                assert!(operator_norm(&(p - q)) <= 1e-10);
            }
        }
    }

    #[test]
    fn basis_constant_examples() {
        let ortho = f_dual(&coordinate_lines(3), &tol()).unwrap();
        let m = basis_constant(&ortho, DEFAULT_BASIS_CONSTANT_CAP).unwrap();
        assert!((m.value - 1.0).abs() <= 1e-9);
        assert_eq!(m.subset_count, 7);

        let b = f_dual(&sys_b(), &tol()).unwrap();
        let m = basis_constant(&b, DEFAULT_BASIS_CONSTANT_CAP).unwrap();
        assert!((m.value - 2.0_f64.sqrt()).abs() <= 1e-9);

        let single =
            f_dual(&FusionSystem::unweighted(vec![Subspace::coordinate_block(2, 0, 2)]).unwrap(), &tol())
                .unwrap();
        let m = basis_constant(&single, DEFAULT_BASIS_CONSTANT_CAP).unwrap();
        assert!((m.value - 1.0).abs() <= 1e-9);
        assert!(m.value >= 1.0 - 1e-9);
    }

    #[test]
    fn basis_constant_refuses_beyond_cap() {
        let fd = f_dual(&coordinate_lines(3), &tol()).unwrap();
        assert!(matches!(
            basis_constant(&fd, 2),
            Err(FusionError::TooManyMembers { members: 3, cap: 2 })
        ));
    }

    #[test]
    fn bessel_hilbert_examples() {
        let ortho = f_dual(&coordinate_lines(2), &tol()).unwrap();
        let (a, b) = bessel_hilbert_constants(&ortho);
        assert!((a - 1.0).abs() <= 1e-10 && (b - 1.0).abs() <= 1e-10);

        let (a, b) = bessel_hilbert_constants(&f_dual(&sys_b(), &tol()).unwrap());
        let half_sqrt2 = 0.5_f64.sqrt();
        assert!((a - (1.0 - half_sqrt2)).abs() <= 1e-10);
        assert!((b - (1.0 + half_sqrt2)).abs() <= 1e-10);

        let (a, b) = bessel_hilbert_constants(&f_dual(&complement_sum_family(3), &tol()).unwrap());
        assert!((a - 0.5).abs() <= 1e-10);
        assert!((b - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn nested_subset_inequality_with_computed_m() {
        // Nested-subset inequality ‖Σ_F g_j‖ ≤ M·‖Σ_G g_j‖ for F ⊂ G on
        // random bundles.
        let sys = sys_b();
        let fd = f_dual(&sys, &tol()).unwrap();
        let m = basis_constant(&fd, DEFAULT_BASIS_CONSTANT_CAP).unwrap().value;
        let mut rng = ChaCha8Rng::seed_from_u64(42);
        for _ in 0..100 {
            let bundle = crate::generate::random_bundle(&sys, &mut rng);
            let gs = sys.bundle_vectors(&bundle).unwrap();
            let full: CVector = &gs[0] + &gs[1];
            for sub in [&gs[0], &gs[1]] {
                assert!(sub.norm() <= m * full.norm() + 1e-8);
            }
        }
    }

    #[test]
    fn dual_system_of_orthogonal_is_self_dual() {
        let fd = f_dual(&coordinate_lines(2), &tol()).unwrap();
        let dual = dual_system(&fd, &tol()).unwrap();
        for j in 0..2 {
            let dev = operator_norm(
                &(dual.system().subspace(j).projector() - fd.system().subspace(j).projector()),
            );
            assert!(dev <= 1e-10);
        }
    }

    #[test]
    fn dual_system_of_sys_b() {
        let fd = f_dual(&sys_b(), &tol()).unwrap();
        let dual = dual_system(&fd, &tol()).unwrap();
        // Expected dual subspaces: span{(1,−1)/√2} and span{e2}.
        let d1 = line(2, &[1.0, -1.0]).projector();
        let d2 = Subspace::coordinate_block(2, 1, 1).projector();
        assert!(operator_norm(&(dual.system().subspace(0).projector() - d1)) <= 1e-10);
        assert!(operator_norm(&(dual.system().subspace(1).projector() - d2)) <= 1e-10);
    }

    #[test]
    fn double_dual_restores_spans() {
        for seed in 0..100u64 {
            let mut rng = ChaCha8Rng::seed_from_u64(1700 + seed);
            let n = rng.gen_range(2..=8usize);
            let m = rng.gen_range(1..=4usize.min(n));
            let dims = crate::generate::random_partition(n, m, &mut rng);
            let sys = random_f_basis(n, &dims, 8100 + seed);
            let fd = f_dual(&sys, &tol()).unwrap();
            let dd = dual_system(&dual_system(&fd, &tol()).unwrap(), &tol()).unwrap();
            for j in 0..sys.len() {
                let dev = operator_norm(
                    &(dd.system().subspace(j).projector() - sys.subspace(j).projector()),
                );
                assert!(dev <= 1e-8, "seed {seed}, member {j}: {dev:.3e}");
            }
        }
    }

    #[test]
    fn biorthogonal_family_complete_case() {
        let sys = sys_b();
        let fam = biorthogonal_family(&sys, &tol()).unwrap();
        assert!(fam.unique());
        assert!(verify_biorthogonality(&sys, &fam, &tol()).unwrap());
        let fd = f_dual(&sys, &tol()).unwrap();
        for (q, p) in fam.operators().iter().zip(fd.projectors()) {
            assert!(operator_norm(&(q - p)) <= 1e-10);
        }
    }

    #[test]
    fn biorthogonal_family_incomplete_case() {
        let sys = FusionSystem::unweighted(vec![line(2, &[1.0, 1.0])]).unwrap();
        let fam = biorthogonal_family(&sys, &tol()).unwrap();
        assert!(!fam.unique());
        let pi = sys.subspace(0).projector();
        assert!(operator_norm(&(fam.operator(0) - pi)) <= 1e-10);
        assert!(verify_biorthogonality(&sys, &fam, &tol()).unwrap());
    }

    #[test]
    fn biorthogonal_family_requires_minimality() {
        let planes = FusionSystem::unweighted(vec![
            Subspace::coordinate_block(3, 0, 2),
            {
                let raw = CMatrix::from_column_slice(
                    3,
                    2,
                    &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
                );
                Subspace::new(raw, &tol()).unwrap()
            },
        ])
        .unwrap();
        assert!(matches!(
            biorthogonal_family(&planes, &tol()),
            Err(FusionError::NotMinimal(v)) if v == vec![0, 1]
        ));
    }

    #[test]
    fn verify_biorthogonality_examples() {
        let sys = coordinate_lines(2);
        let fd = f_dual(&sys, &tol()).unwrap();
        let fam = BiorthogonalFamily::new(fd.projectors().to_vec(), true);
        assert!(verify_biorthogonality(&sys, &fam, &tol()).unwrap());

        let swapped = BiorthogonalFamily::new(
            vec![fd.projector(1).clone(), fd.projector(0).clone()],
            true,
        );
        assert!(!verify_biorthogonality(&sys, &swapped, &tol()).unwrap());

        let b = sys_b();
        let fdb = f_dual(&b, &tol()).unwrap();
        let famb = BiorthogonalFamily::new(fdb.projectors().to_vec(), true);
        assert!(verify_biorthogonality(&b, &famb, &tol()).unwrap());
    }

    #[test]
    fn unique_biorthogonal_family_equals_f_dual() {
        // Uniqueness: any family passing the biorthogonality check on
        // a complete f-basis coincides with the f-dual.
        for seed in 0..20u64 {
            let sys = random_f_basis(4, &[2, 1, 1], 300 + seed);
            let fd = f_dual(&sys, &tol()).unwrap();
            let fam = biorthogonal_family(&sys, &tol()).unwrap();
            for (q, p) in fam.operators().iter().zip(fd.projectors()) {
                assert!(operator_norm(&(q - p)) <= 1e-9);
            }
        }
    }

    #[test]
    fn bessel_hilbert_duality_inequalities() {
        // Two-sided inequalities with the computed optimal constants, on
        // random bundles, for both the system and its dual.
        let mut rng = ChaCha8Rng::seed_from_u64(77);
        for seed in 0..20u64 {
            let sys = random_f_basis(5, &[2, 2, 1], 500 + seed);
            let fd = f_dual(&sys, &tol()).unwrap();
            let dual = dual_system(&fd, &tol()).unwrap();
            for target in [&fd, &dual] {
                let (a, b) = bessel_hilbert_constants(target);
                assert!(a > 0.0 && b.is_finite());
                for _ in 0..100 {
                    let bundle = crate::generate::random_bundle(target.system(), &mut rng);
                    let sum_sq: f64 = bundle.norm() * bundle.norm();
                    let total = target.system().bundle_sum(&bundle).unwrap().norm_squared();
                    assert!(a * sum_sq <= total + 1e-8);
                    assert!(total <= b * sum_sq + 1e-8);
                }
            }
        }
    }
}
