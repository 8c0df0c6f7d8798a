//! Fusion-frame analysis of weighted subspace families: optimal frame bounds
//! from the spectrum of S = Σ_j α_j²·π_{W_j}, the completeness / minimality /
//! exactness predicates, and the bound-transformation rule under invertible
//! operators.

use crate::error::{FusionError, Result};
use crate::hilbert::{
    hermitian_eigen_range, hstack, numerical_rank, orthonormalize, CMatrix,
    CVector, CoefficientBundle, OperatorMatrix, Scalar, Subspace, Tolerances,
};

/// One member (W_j, α_j) of a fusion system.
#[derive(Debug, Clone)]
pub struct WeightedSubspace {
    subspace: Subspace,
    weight: f64,
}

impl WeightedSubspace {
    pub fn new(subspace: Subspace, weight: f64) -> Result<Self> {
        if !weight.is_finite() || weight <= 0.0 {
            return Err(FusionError::NonpositiveWeight(weight));
        }
        Ok(Self { subspace, weight })
    }

    pub fn subspace(&self) -> &Subspace {
        &self.subspace
    }

    pub fn weight(&self) -> f64 {
        self.weight
    }
}

/// An ordered, finite family {(W_j, α_j)}_j of weighted subspaces of ℂⁿ.
/// The index set is realized as list position.
#[derive(Debug, Clone)]
pub struct FusionSystem {
    ambient_dim: usize,
    members: Vec<WeightedSubspace>,
}

impl FusionSystem {
    pub fn new(members: Vec<(Subspace, f64)>) -> Result<Self> {
        if members.is_empty() {
            return Err(FusionError::BadParams(
                "a fusion system needs at least one member".into(),
            ));
        }
        let ambient_dim = members[0].0.ambient_dim();
        for (w, _) in &members {
            if w.ambient_dim() != ambient_dim {
                return Err(FusionError::DimensionMismatch {
                    left: ambient_dim,
                    right: w.ambient_dim(),
                });
            }
        }
        let members = members
            .into_iter()
            .map(|(s, a)| WeightedSubspace::new(s, a))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self {
            ambient_dim,
            members,
        })
    }

    /// All weights equal to one.
    pub fn unweighted(subspaces: Vec<Subspace>) -> Result<Self> {
        Self::new(subspaces.into_iter().map(|s| (s, 1.0)).collect())
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient_dim
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    pub fn members(&self) -> &[WeightedSubspace] {
        &self.members
    }

    pub fn subspace(&self, j: usize) -> &Subspace {
        self.members[j].subspace()
    }

    pub fn weight(&self, j: usize) -> f64 {
        self.members[j].weight()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.members.iter().map(|m| m.subspace().dim()).collect()
    }

    pub fn sum_dims(&self) -> usize {
        self.members.iter().map(|m| m.subspace().dim()).sum()
    }

    /// Horizontal concatenation [B_1 | … | B_m] of the member bases.
    pub fn stacked(&self) -> CMatrix {
        let blocks: Vec<&CMatrix> = self.members.iter().map(|m| m.subspace().basis()).collect();
        hstack(&blocks)
    }

    /// Column offset of member j inside [`Self::stacked`].
    pub fn block_offset(&self, j: usize) -> usize {
        self.members[..j].iter().map(|m| m.subspace().dim()).sum()
    }

    /// The system with member `i` removed, or None when only one member exists.
    pub fn with_member_removed(&self, i: usize) -> Option<FusionSystem> {
        if self.members.len() <= 1 {
            return None;
        }
        let members = self
            .members
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != i)
            .map(|(_, m)| (m.subspace().clone(), m.weight()))
            .collect();
        Some(FusionSystem::new(members).expect("removing a member keeps the system valid"))
    }

    /// Whether a coefficient bundle has one part per member with matching lengths.
    pub fn bundle_conforms(&self, bundle: &CoefficientBundle) -> bool {
        bundle.len() == self.members.len()
            && bundle
                .parts()
                .iter()
                .zip(&self.members)
                .all(|(p, m)| p.len() == m.subspace().dim())
    }

    /// The ambient vectors g_j = B_j · parts[j] of a bundle.
    pub fn bundle_vectors(&self, bundle: &CoefficientBundle) -> Result<Vec<CVector>> {
        if !self.bundle_conforms(bundle) {
            return Err(FusionError::ShapeMismatch(
                "bundle does not conform to the system".into(),
            ));
        }
        Ok(self
            .members
            .iter()
            .zip(bundle.parts())
            .map(|(m, p)| m.subspace().basis() * p)
            .collect())
    }

    /// Σ_j g_j for a conforming bundle.
    pub fn bundle_sum(&self, bundle: &CoefficientBundle) -> Result<CVector> {
        let gs = self.bundle_vectors(bundle)?;
        let mut acc = CVector::zeros(self.ambient_dim);
        for g in gs {
            acc += g;
        }
        Ok(acc)
    }
}

/// Optimal fusion frame bounds C ≤ D for Σ_j α_j²‖π_{W_j}f‖².
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FrameBounds {
    pub lower: f64,
    pub upper: f64,
    pub is_frame: bool,
}

/// S = Σ_j α_j²·π_{W_j}, the Hermitian positive semidefinite operator whose
/// Rayleigh quotient is the frame functional of the system.
pub fn frame_operator(sys: &FusionSystem) -> CMatrix {
    let n = sys.ambient_dim();
    let mut s = CMatrix::zeros(n, n);
    for m in sys.members() {
        let a2 = m.weight() * m.weight();
        s += m.subspace().projector() * Scalar::new(a2, 0.0);
    }
    s
}

/// Optimal bounds as the extreme eigenvalues of the frame operator.
///
/// Since Σ_j α_j²‖π_{W_j}f‖² = ⟨Sf, f⟩, the extreme eigenvalues of S are the
/// best possible constants in the two-sided frame inequality.
pub fn frame_bounds(sys: &FusionSystem, tol: &Tolerances) -> FrameBounds {
    let (lo, hi) = hermitian_eigen_range(&frame_operator(sys));
    let lower = lo.max(0.0);
    let upper = hi.max(0.0);
    FrameBounds {
        lower,
        upper,
        is_frame: lower > tol.rank_tol * upper,
    }
}

/// Frame classification flags for a weighted family.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Classification {
    /// Always true for a finite family (the upper bound is finite).
    pub bessel: bool,
    pub frame: bool,
    pub tight: bool,
    pub parseval: bool,
    pub uniform_weight: bool,
}

pub fn classify(sys: &FusionSystem, tol: &Tolerances) -> (Classification, FrameBounds) {
    let bounds = frame_bounds(sys, tol);
    let tight = bounds.is_frame && (bounds.upper - bounds.lower).abs() <= tol.eq_tol * bounds.upper;
    let parseval = tight && (bounds.lower - 1.0).abs() <= tol.eq_tol;
    let wmax = sys
        .members()
        .iter()
        .map(|m| m.weight())
        .fold(0.0_f64, f64::max);
    let uniform_weight = sys
        .members()
        .iter()
        .all(|m| (m.weight() - wmax).abs() <= tol.eq_tol * wmax);
    (
        Classification {
            bessel: true,
            frame: bounds.is_frame,
            tight,
            parseval,
            uniform_weight,
        },
        bounds,
    )
}

/// Whether span{W_j}_j = ℂⁿ, decided by the rank of the stacked bases.
pub fn is_complete(sys: &FusionSystem, tol: &Tolerances) -> bool {
    numerical_rank(&sys.stacked(), tol.rank_tol) == sys.ambient_dim()
}

/// Outcome of the minimality test, with the violating member indices.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MinimalityReport {
    pub minimal: bool,
    pub violations: Vec<usize>,
}

/// A family is minimal when every member meets the span of the others only
/// at zero.
pub fn is_minimal(sys: &FusionSystem, tol: &Tolerances) -> MinimalityReport {
    let m = sys.len();
    if m == 1 {
        return MinimalityReport {
            minimal: true,
            violations: vec![],
        };
    }
    let mut violations = Vec::new();
    for i in 0..m {
        let others: Vec<&CMatrix> = (0..m)
            .filter(|&j| j != i)
            .map(|j| sys.subspace(j).basis())
            .collect();
        let span_others = orthonormalize(&hstack(&others), tol)
            .expect("orthonormal member bases cannot all be null");
        let d = sys
            .subspace(i)
            .intersection_dim(&span_others, tol)
            .expect("members share the ambient dimension");
        if d != 0 {
            violations.push(i);
        }
    }
    MinimalityReport {
        minimal: violations.is_empty(),
        violations,
    }
}

/// A fusion frame is exact when deleting any single member destroys the
/// frame property; in finite dimension that is the completeness of the
/// reduced family.
pub fn is_exact(sys: &FusionSystem, tol: &Tolerances) -> Result<bool> {
    if !frame_bounds(sys, tol).is_frame {
        return Err(FusionError::NotAFrame);
    }
    for i in 0..sys.len() {
        // Removing the only member leaves nothing, which never spans.
        if let Some(reduced) = sys.with_member_removed(i) {
            if is_complete(&reduced, tol) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DimensionAudit {
    pub sum_dims: usize,
    pub ambient_dim: usize,
    pub f_basis_possible: bool,
}

/// Σ_j dim W_j versus dim ℂⁿ; equality is necessary for an f-basis.
pub fn dimension_audit(sys: &FusionSystem) -> DimensionAudit {
    let sum_dims = sys.sum_dims();
    DimensionAudit {
        sum_dims,
        ambient_dim: sys.ambient_dim(),
        f_basis_possible: sum_dims == sys.ambient_dim(),
    }
}

/// Predicted bounds [C·‖T‖⁻²‖T⁻¹‖⁻², D·‖T‖²‖T⁻¹‖²] for the transformed
/// family {(T·W_j, α_j)}_j under an invertible T.
pub fn predict_transformed_bounds(
    bounds: &FrameBounds,
    t: &OperatorMatrix,
) -> Result<(f64, f64)> {
    if !t.is_invertible_verified() {
        return Err(FusionError::SingularOperator);
    }
    let tn = t.norm();
    let tin = t.inverse_norm()?;
    let factor = tn * tn * tin * tin;
    Ok((bounds.lower / factor, bounds.upper * factor))
}

/// {(orthonormalize(T·B_j), α_j)}_j — the image family under T.
pub fn transform_system(
    sys: &FusionSystem,
    t: &OperatorMatrix,
    tol: &Tolerances,
) -> Result<FusionSystem> {
    if !t.is_invertible_verified() {
        return Err(FusionError::SingularOperator);
    }
    if t.dim() != sys.ambient_dim() {
        return Err(FusionError::DimensionMismatch {
            left: t.dim(),
            right: sys.ambient_dim(),
        });
    }
    let members = sys
        .members()
        .iter()
        .map(|m| {
            let mapped = t.matrix() * m.subspace().basis();
            orthonormalize(&mapped, tol).map(|s| (s, m.weight()))
        })
        .collect::<Result<Vec<_>>>()?;
    FusionSystem::new(members)
}

/// The frame functional Σ_j α_j²‖π_{W_j}f‖² at a single vector; sampling it
/// gives a direct audit that the computed bounds sandwich it.
pub fn frame_functional(sys: &FusionSystem, f: &CVector) -> f64 {
    sys.members()
        .iter()
        .map(|m| {
            let p = m.subspace().basis().adjoint() * f;
            m.weight() * m.weight() * p.norm_squared()
        })
        .sum()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hilbert::operator_norm;

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

    /// {span{e1,e2}, span{e2,e3}} in ℂ³: C = 1, D = 2, exact but not a basis.
    fn c3_pair() -> FusionSystem {
        let w1 = Subspace::coordinate_block(3, 0, 2);
        let raw = CMatrix::from_column_slice(
            3,
            2,
            &[c(0.0, 0.0), c(1.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(0.0, 0.0), c(1.0, 0.0)],
        );
        let w2 = Subspace::new(raw, &tol()).unwrap();
        FusionSystem::unweighted(vec![w1, w2]).unwrap()
    }

    fn coordinate_lines(n: usize) -> FusionSystem {
        FusionSystem::unweighted((0..n).map(|i| Subspace::coordinate_block(n, i, 1)).collect())
            .unwrap()
    }

    #[test]
    fn bounds_of_orthonormal_line_decomposition() {
        let b = frame_bounds(&coordinate_lines(2), &tol());
        assert!((b.lower - 1.0).abs() <= 1e-12);
        assert!((b.upper - 1.0).abs() <= 1e-12);
        assert!(b.is_frame);
    }

    #[test]
    fn bounds_of_c3_pair() {
        // Direct projector sum: S = diag(1, 2, 1).
        let s = frame_operator(&c3_pair());
        let expect = CMatrix::from_diagonal(&CVector::from_vec(vec![
            c(1.0, 0.0),
            c(2.0, 0.0),
            c(1.0, 0.0),
        ]));
        assert!(operator_norm(&(&s - &expect)) <= 1e-12);
        let b = frame_bounds(&c3_pair(), &tol());
        assert!((b.lower - 1.0).abs() <= 1e-10);
        assert!((b.upper - 2.0).abs() <= 1e-10);
    }

    #[test]
    fn bounds_of_line_pair_with_overlap() {
        // Eigenvalues of [[1.5, 0.5], [0.5, 0.5]]: 1 ± √2/2 by the quadratic
        // formula (trace 2, det 0.5).
        let sys = FusionSystem::unweighted(vec![line(2, &[1.0, 0.0]), line(2, &[1.0, 1.0])]).unwrap();
        let b = frame_bounds(&sys, &tol());
        let half_sqrt2 = 0.5_f64.sqrt();
        assert!((b.lower - (1.0 - half_sqrt2)).abs() <= 1e-10);
        assert!((b.upper - (1.0 + half_sqrt2)).abs() <= 1e-10);
    }

    #[test]
    fn classify_orthonormal_plane_decomposition() {
        let w1 = Subspace::coordinate_block(4, 0, 2);
        let w2 = Subspace::coordinate_block(4, 2, 2);
        let sys = FusionSystem::unweighted(vec![w1, w2]).unwrap();
        let (flags, bounds) = classify(&sys, &tol());
        assert!(flags.bessel && flags.frame && flags.tight && flags.parseval && flags.uniform_weight);
        assert!((bounds.lower - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn classify_c3_pair_not_tight() {
        let (flags, _) = classify(&c3_pair(), &tol());
        assert!(flags.frame && !flags.tight && !flags.parseval);
    }

    #[test]
    fn classify_weighted_lines() {
        // S = diag(1, 4): frame with C = 1, D = 4, weights not uniform.
        let sys = FusionSystem::new(vec![
            (Subspace::coordinate_block(2, 0, 1), 1.0),
            (Subspace::coordinate_block(2, 1, 1), 2.0),
        ])
        .unwrap();
        let (flags, bounds) = classify(&sys, &tol());
        assert!(flags.frame && !flags.uniform_weight);
        assert!((bounds.lower - 1.0).abs() <= 1e-12);
        assert!((bounds.upper - 4.0).abs() <= 1e-12);
    }

    #[test]
    fn nonpositive_weight_rejected() {
        assert!(matches!(
            FusionSystem::new(vec![(Subspace::coordinate_block(2, 0, 1), 0.0)]),
            Err(FusionError::NonpositiveWeight(_))
        ));
    }

    #[test]
    fn completeness_examples() {
        assert!(is_complete(&coordinate_lines(2), &tol()));
        assert!(is_complete(&c3_pair(), &tol()));
        // Two diagonal lines inside ℂ⁴ leave two directions uncovered.
        let sys = FusionSystem::unweighted(vec![
            line(4, &[1.0, 1.0, 0.0, 0.0]),
            line(4, &[0.0, 0.0, 1.0, 1.0]),
        ])
        .unwrap();
        assert!(!is_complete(&sys, &tol()));
    }

    #[test]
    fn minimality_examples() {
        let report = is_minimal(&c3_pair(), &tol());
        assert!(!report.minimal);
        assert_eq!(report.violations, vec![0, 1]);

        assert!(is_minimal(&coordinate_lines(2), &tol()).minimal);

        let sys = FusionSystem::unweighted(vec![line(2, &[1.0, 0.0]), line(2, &[1.0, 1.0])]).unwrap();
        assert!(is_minimal(&sys, &tol()).minimal);
    }

    #[test]
    fn exactness_examples() {
        assert!(is_exact(&c3_pair(), &tol()).unwrap());
        assert!(is_exact(&coordinate_lines(2), &tol()).unwrap());

        let redundant = FusionSystem::unweighted(vec![
            Subspace::coordinate_block(2, 0, 1),
            Subspace::coordinate_block(2, 1, 1),
            line(2, &[1.0, 1.0]),
        ])
        .unwrap();
        assert!(!is_exact(&redundant, &tol()).unwrap());
    }

    #[test]
    fn exactness_requires_frame() {
        let sys = FusionSystem::unweighted(vec![line(2, &[1.0, 0.0])]).unwrap();
        assert!(matches!(is_exact(&sys, &tol()), Err(FusionError::NotAFrame)));
    }

    #[test]
    fn dimension_audit_examples() {
        let a = dimension_audit(&c3_pair());
        assert_eq!((a.sum_dims, a.ambient_dim, a.f_basis_possible), (4, 3, false));

        let full = FusionSystem::unweighted(vec![Subspace::coordinate_block(3, 0, 3)]).unwrap();
        let a = dimension_audit(&full);
        assert!(a.f_basis_possible);
    }

    #[test]
    fn predicted_bounds_unitary_and_scaling() {
        let bounds = frame_bounds(&coordinate_lines(2), &tol());
        let u = OperatorMatrix::unitary(CMatrix::identity(2, 2), &tol()).unwrap();
        let (c1, d1) = predict_transformed_bounds(&bounds, &u).unwrap();
        assert!((c1 - bounds.lower).abs() <= 1e-12 && (d1 - bounds.upper).abs() <= 1e-12);

        let two_i = OperatorMatrix::invertible(CMatrix::identity(2, 2) * c(2.0, 0.0), &tol()).unwrap();
        let (c2, d2) = predict_transformed_bounds(&bounds, &two_i).unwrap();
        assert!((c2 - bounds.lower).abs() <= 1e-12 && (d2 - bounds.upper).abs() <= 1e-12);
    }

    #[test]
    fn predicted_bounds_contain_actual_for_diagonal() {
        let sys = coordinate_lines(2);
        let bounds = frame_bounds(&sys, &tol());
        let t = OperatorMatrix::invertible(
            CMatrix::from_diagonal(&CVector::from_vec(vec![c(2.0, 0.0), c(1.0, 0.0)])),
            &tol(),
        )
        .unwrap();
        let (lo, hi) = predict_transformed_bounds(&bounds, &t).unwrap();
        assert!((lo - 0.25).abs() <= 1e-12 && (hi - 4.0).abs() <= 1e-12);
        // Diagonal T fixes the coordinate lines, so actual bounds stay 1.
        let moved = transform_system(&sys, &t, &tol()).unwrap();
        let after = frame_bounds(&moved, &tol());
        assert!((after.lower - 1.0).abs() <= 1e-10 && (after.upper - 1.0).abs() <= 1e-10);
        assert!(after.lower >= lo - 1e-10 && after.upper <= hi + 1e-10);
    }

    #[test]
    fn non_spanning_system_is_not_a_frame() {
        let sys = FusionSystem::unweighted(vec![line(3, &[1.0, 0.0, 0.0])]).unwrap();
        let b = frame_bounds(&sys, &tol());
        assert!(!b.is_frame);
        assert!(b.lower.abs() <= 1e-12);
    }

    #[test]
    fn complete_iff_frame() {
        let instances = vec![
            c3_pair(),
            coordinate_lines(3),
            FusionSystem::unweighted(vec![line(3, &[1.0, 0.0, 0.0]), line(3, &[1.0, 1.0, 0.0])])
                .unwrap(),
        ];
        for sys in instances {
            assert_eq!(is_complete(&sys, &tol()), frame_bounds(&sys, &tol()).is_frame);
        }
    }
}
