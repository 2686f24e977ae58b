//! Error identities shared by every module.
//!
//! The two standing hypotheses on the direction operator `A` have distinct
//! failure witnesses: [`OpError::KernelVector`] reports a unit vector nearly
//! annihilated by `A` (so `λ(f)` is undefined), while
//! [`OpError::NumericalRangeZero`] reports `0 ∈ W(A)` up to tolerance (so
//! `λ̃(f)` is undefined). Callers rely on the distinction to say which
//! hypothesis failed.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, OpError>;

#[derive(Debug, Clone, Error)]
pub enum OpError {
    #[error("matrix has non-finite entries")]
    InvalidMatrix,
    #[error("vector has non-finite entries or zero norm")]
    InvalidVector,
    #[error("dimension mismatch: {0}x{1} vs {2}x{3}")]
    DimensionMismatch(usize, usize, usize, usize),
    #[error("matrix is not Hermitian within tolerance (‖M − M*‖ = {defect:.3e})")]
    NotHermitian { defect: f64 },
    #[error("invalid tolerance set: {0}")]
    InvalidTolerance(String),
    #[error("‖Af‖ = {norm:.3e} ≤ rank tolerance; f is nearly annihilated by A")]
    KernelVector { norm: f64 },
    #[error("|(Af,f)| = {modulus:.3e} ≤ rank tolerance; 0 lies in W(A) up to tolerance")]
    NumericalRangeZero { modulus: f64 },
    #[error("A is singular within rank tolerance (σ_min = {sigma_min:.3e})")]
    SingularDirection { sigma_min: f64 },
    #[error("no start converged within the iteration budget")]
    NonConvergence,
    #[error("operation requires dimension {expected}, got {got}")]
    UnsupportedDimension { expected: usize, got: usize },
    #[error("deviation vanishes at the maximizer (h ≈ 0); T is a scalar multiple of A")]
    DegenerateMaximizer,
    #[error("operator is not selfadjoint within tolerance (‖M − M*‖ = {defect:.3e})")]
    NotSelfadjoint { defect: f64 },
    #[error("(Tf,Af) is not real within tolerance (Im = {imag:.3e})")]
    HypothesisViolated { imag: f64 },
    #[error("h ≈ 0 at the stationary vector; f is already an eigenvector")]
    DegenerateStationary,
    #[error("state has g(A*A) = {denominator:.3e} ≤ rank tolerance; outside the admissible set")]
    StateOutsideP { denominator: f64 },
    #[error("matrix is not a density matrix: {0}")]
    NotAState(String),
    #[error("minimal-norm translation of T is T itself, but no zero-trace state was found on the top eigenspace (best |tr(ρT)| = {best:.3e})")]
    CertificateNotFound { best: f64 },
    #[error("dense eigensolver failed: {0}")]
    NumericalFailure(String),
}
