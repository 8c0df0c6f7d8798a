//! Numerical toolkit for fusion systems in finite-dimensional complex Hilbert
//! spaces: fusion frames, fusion (Schauder) bases, orthonormal fusion systems,
//! Riesz fusion bases, and perturbation stability certificates.
//!
//! Every object is represented concretely: a subspace of ℂⁿ is an n×k matrix
//! with orthonormal columns, a weighted family of such subspaces is a
//! [`FusionSystem`], and each analysis returns computed constants (frame
//! bounds, Bessel/Hilbert constants, basis constant, perturbation λ) rather
//! than bare yes/no answers.

pub mod basis;
pub mod error;
pub mod frame;
pub mod generate;
pub mod hilbert;
pub mod io;
pub mod perturb;
pub mod report;
pub mod riesz;

pub use error::{FusionError, Result};
pub use frame::{FrameBounds, FusionSystem, WeightedSubspace};
pub use hilbert::{CMatrix, CVector, CoefficientBundle, OperatorMatrix, Scalar, Subspace, Tolerances};
