//! Generators for the named example families and for seeded random instances.
//!
//! All randomness flows through `ChaCha8Rng` seeded with `seed_from_u64`, so
//! every generated object is reproducible from its parameters and seed.

use rand::Rng;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::error::{FusionError, Result};
use crate::frame::FusionSystem;
use crate::hilbert::{CMatrix, CVector, CoefficientBundle, Scalar, Subspace, Tolerances};

/// Name and version of the pseudo-random generator behind every seeded
/// fixture, recorded so reports can state their provenance.
pub const GENERATOR_NAME: &str = "ChaCha8Rng/seed_from_u64 (rand_chacha 0.3)";

fn real(v: f64) -> Scalar {
    Scalar::new(v, 0.0)
}

/// Standard normal via Box–Muller, driven by the seeded generator.
fn standard_normal(rng: &mut ChaCha8Rng) -> f64 {
    let u1: f64 = rng.gen::<f64>().max(f64::MIN_POSITIVE);
    let u2: f64 = rng.gen();
    (-2.0 * u1.ln()).sqrt() * (std::f64::consts::TAU * u2).cos()
}

fn complex_normal(rng: &mut ChaCha8Rng) -> Scalar {
    Scalar::new(standard_normal(rng), standard_normal(rng))
}

/// Complex Ginibre matrix with iid standard normal entries.
pub fn ginibre(n: usize, m: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    CMatrix::from_fn(n, m, |_, _| complex_normal(rng))
}

/// Haar-distributed unitary: QR of a Ginibre matrix with the R-diagonal
/// phases folded into Q.
pub fn haar_unitary(n: usize, rng: &mut ChaCha8Rng) -> CMatrix {
    let qr = ginibre(n, n, rng).qr();
    let r = qr.r();
    let mut q = qr.q();
    for j in 0..n {
        let d = r[(j, j)];
        let phase = if d.norm() > 0.0 { d / real(d.norm()) } else { real(1.0) };
        for i in 0..n {
            q[(i, j)] *= phase;
        }
    }
    q
}

/// Random invertible matrix with prescribed condition number: U·Σ·Vᴴ with
/// singular values log-spaced from 1 to `cond`.
pub fn random_invertible(n: usize, cond: f64, rng: &mut ChaCha8Rng) -> Result<CMatrix> {
    if !cond.is_finite() || cond < 1.0 {
        return Err(FusionError::BadParams(format!(
            "condition number must be ≥ 1, got {cond}"
        )));
    }
    let u = haar_unitary(n, rng);
    let v = haar_unitary(n, rng);
    let mut sigma = CMatrix::zeros(n, n);
    for i in 0..n {
        let t = if n == 1 { 0.0 } else { i as f64 / (n - 1) as f64 };
        sigma[(i, i)] = real(cond.powf(t));
    }
    Ok(u * sigma * v.adjoint())
}

/// Random unit vector in ℂⁿ.
pub fn random_unit_vector(n: usize, rng: &mut ChaCha8Rng) -> CVector {
    loop {
        let v = CVector::from_fn(n, |_, _| complex_normal(rng));
        let norm = v.norm();
        if norm > 1e-6 {
            return v / real(norm);
        }
    }
}

/// Random coefficient bundle conforming to `sys`, iid complex normal parts.
pub fn random_bundle(sys: &FusionSystem, rng: &mut ChaCha8Rng) -> CoefficientBundle {
    CoefficientBundle::new(
        sys.members()
            .iter()
            .map(|m| CVector::from_fn(m.subspace().dim(), |_, _| complex_normal(rng)))
            .collect(),
    )
}

/// Random partition of `n` into `m` positive parts.
pub fn random_partition(n: usize, m: usize, rng: &mut ChaCha8Rng) -> Vec<usize> {
    assert!(m >= 1 && m <= n);
    let mut dims = vec![1usize; m];
    for _ in 0..(n - m) {
        let j = rng.gen_range(0..m);
        dims[j] += 1;
    }
    dims
}

/// The family W_j = span{Σ_{i≠j} e_i}, j = 1..n, an f-basis of ℂⁿ that is
/// far from orthogonal.
pub fn example_2_2(n: usize, tol: &Tolerances) -> Result<FusionSystem> {
    if n < 2 {
        return Err(FusionError::BadParams(
            "complement-sum family needs ambient dimension ≥ 2".into(),
        ));
    }
    let subspaces = (0..n)
        .map(|j| {
            let raw = CMatrix::from_fn(n, 1, |i, _| if i == j { real(0.0) } else { real(1.0) });
            crate::hilbert::orthonormalize(&raw, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    FusionSystem::unweighted(subspaces)
}

/// Coordinate-pair planes W_j = span{e_{2j−1}, e_{2j}} in ℂ²ᵐ, an
/// orthonormal f-basis.
pub fn example_2_3(m: usize, _tol: &Tolerances) -> Result<FusionSystem> {
    if m < 1 {
        return Err(FusionError::BadParams("need at least one plane".into()));
    }
    let n = 2 * m;
    let subspaces = (0..m)
        .map(|j| Subspace::coordinate_block(n, 2 * j, 2))
        .collect();
    FusionSystem::unweighted(subspaces)
}

/// Diagonal lines W_j = span{(e_{2j−1}+e_{2j})/√2} in ℂ²ᵐ, an orthonormal
/// f-system that is not complete.
pub fn example_3_2i(m: usize, tol: &Tolerances) -> Result<FusionSystem> {
    if m < 1 {
        return Err(FusionError::BadParams("need at least one line".into()));
    }
    let n = 2 * m;
    let subspaces = (0..m)
        .map(|j| {
            let raw = CMatrix::from_fn(n, 1, |i, _| {
                if i == 2 * j || i == 2 * j + 1 {
                    real(1.0)
                } else {
                    real(0.0)
                }
            });
            crate::hilbert::orthonormalize(&raw, tol)
        })
        .collect::<Result<Vec<_>>>()?;
    FusionSystem::unweighted(subspaces)
}

/// {span{e1,e2}, span{e2,e3}} in ℂ³: a 1-uniform exact fusion frame that is
/// not an f-basis (the finite witness that exactness does not imply Riesz).
pub fn exact_not_riesz(tol: &Tolerances) -> Result<FusionSystem> {
    let w1 = Subspace::coordinate_block(3, 0, 2);
    let mut basis = CMatrix::zeros(3, 2);
    basis[(1, 0)] = real(1.0);
    basis[(2, 1)] = real(1.0);
    let w2 = Subspace::new(basis, tol)?;
    FusionSystem::unweighted(vec![w1, w2])
}

/// Random orthonormal decomposition of ℂⁿ (or part of it, when the dims sum
/// to less than n): blocks of a Haar unitary.
pub fn random_orthonormal(n: usize, dims: &[usize], seed: u64, tol: &Tolerances) -> Result<FusionSystem> {
    if dims.is_empty() || dims.contains(&0) {
        return Err(FusionError::BadParams("dims must be nonempty and positive".into()));
    }
    let total: usize = dims.iter().sum();
    if total > n {
        return Err(FusionError::BadParams(format!(
            "dims sum to {total} > ambient dimension {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(n, &mut rng);
    let mut subspaces = Vec::with_capacity(dims.len());
    let mut offset = 0;
    for &k in dims {
        let block = u.columns(offset, k).into_owned();
        subspaces.push(Subspace::new(block, tol)?);
        offset += k;
    }
    FusionSystem::unweighted(subspaces)
}

/// Random Riesz f-basis: an orthonormal decomposition pushed through a
/// seeded invertible matrix of target condition number `cond`.
pub fn random_riesz(
    n: usize,
    dims: &[usize],
    cond: f64,
    seed: u64,
    tol: &Tolerances,
) -> Result<FusionSystem> {
    let total: usize = dims.iter().sum();
    if total != n {
        return Err(FusionError::BadParams(format!(
            "dims sum to {total}, need exactly the ambient dimension {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let u = haar_unitary(n, &mut rng);
    let t = random_invertible(n, cond, &mut rng)?;
    let mut subspaces = Vec::with_capacity(dims.len());
    let mut offset = 0;
    for &k in dims {
        let block = &t * u.columns(offset, k).into_owned();
        subspaces.push(crate::hilbert::orthonormalize(&block, tol)?);
        offset += k;
    }
    FusionSystem::unweighted(subspaces)
}

/// Applies one rotation of angle `theta`, in a seeded coordinate plane, to
/// every member of the system. In ℂ² the plane is necessarily (e1, e2), so
/// the rotated family matches the closed-form fixtures.
pub fn rotate(sys: &FusionSystem, theta: f64, seed: u64, tol: &Tolerances) -> Result<FusionSystem> {
    let n = sys.ambient_dim();
    if n < 2 {
        return Err(FusionError::BadParams(
            "rotation needs ambient dimension ≥ 2".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let p = rng.gen_range(0..n);
    let mut q = rng.gen_range(0..n - 1);
    if q >= p {
        q += 1;
    }
    let (p, q) = (p.min(q), p.max(q));
    let (s, c) = theta.sin_cos();
    let mut r = CMatrix::identity(n, n);
    r[(p, p)] = real(c);
    r[(q, q)] = real(c);
    r[(p, q)] = real(-s);
    r[(q, p)] = real(s);
    let members = sys
        .members()
        .iter()
        .map(|m| Subspace::new(&r * m.subspace().basis(), tol).map(|s| (s, m.weight())))
        .collect::<Result<Vec<_>>>()?;
    FusionSystem::new(members)
}
