//! Translatable radii of an operator in the direction of another operator.
//!
//! Given two complex n×n matrices `T` and `A`, this crate computes the
//! quantities attached to the generalized eigenvalue problem `Tf = λAf`:
//!
//! - the pointwise deviation `M_T(f) = ‖Tf − λ(f)·Af‖` with
//!   `λ(f) = (Tf,Af)/(Af,Af)`, and its variant `M̃_T(f)` built from
//!   `λ̃(f) = (Tf,f)/(Af,f)` ([`deviation`]);
//! - the translatable radii `M_T(A)` and `M̃_T(A)` — the suprema of those
//!   deviations over the unit sphere — with certified maximizers and a
//!   dense grid oracle at n = 2 ([`radii`]);
//! - the minimal-norm translation `T − λ₀A`, i.e. the unique `λ₀`
//!   minimizing the spectral norm `‖T − λA‖`, which equals `M_T(A)`
//!   ([`translation`]);
//! - stationary distance vectors, characterized by
//!   `(T*−λ̄A*)(T−λA)f = ‖h‖²f`, the adjoint attainment of `M_{T*}(A*)`
//!   at `h/‖h‖`, and the two-eigenvector decomposition in the selfadjoint
//!   case ([`stationary`]);
//! - the state-functional form `M_T(A)² = sup g(T*T) − |g(A*T)|²/g(A*A)`
//!   over density matrices, and the Williams certificate at `A = I`
//!   ([`states`]);
//! - numerical-range geometry: smallest enclosing circles, the distance
//!   of the origin to `W(A)`, sampled generalized ranges `W_T(A)`, and
//!   the chain inequality `M̃_T(A) ≥ M_T(A) ≥ m_T(A)·σ_min(A)`
//!   ([`georange`]).
//!
//! All searches are seeded and deterministic; with the `parallel` feature
//! (default) the independent starts, grids and scans run on rayon with a
//! reduction that is invariant to scheduling order.

pub mod deviation;
pub mod error;
mod exec;
pub mod georange;
pub mod linalg;
pub mod pair;
mod psd;
pub mod radii;
pub mod states;
pub mod stationary;
pub mod translation;

pub use error::{OpError, Result};
pub use linalg::{hermitian_eigensystem, spectral_norm, ComplexMatrix, HermitianEigen, UnitVector};
pub use pair::{validate_pair, OperatorPair, ToleranceSet};

/// Complex scalar used throughout the crate.
pub type C64 = num_complex::Complex64;
