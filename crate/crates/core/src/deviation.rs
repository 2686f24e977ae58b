//! Pointwise deviation functionals of the generalized eigenvalue problem
//! `Tf = λAf`.
//!
//! For a unit vector `f`, `λ(f) = (Tf,Af)/(Af,Af)` is the least-squares
//! optimal coefficient, `h = Tf − λ(f)·Af` the residual (the component of
//! `Tf` perpendicular to `Af`), and `M_T(f) = ‖h‖` the deviation of `f`
//! from being an eigenvector. The tilde variant uses
//! `λ̃(f) = (Tf,f)/(Af,f)` instead; it is defined only where `(Af,f)`
//! stays away from zero.

use num_complex::Complex64;

use crate::error::{OpError, Result};
use crate::linalg::{inner, CVec, UnitVector};
use crate::pair::OperatorPair;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DeviationVariant {
    Standard,
    Tilde,
}

/// Coefficient, residual and deviation value at one unit vector.
#[derive(Debug, Clone)]
pub struct DeviationReport {
    pub lambda: Complex64,
    pub h: CVec,
    pub value: f64,
    pub variant: DeviationVariant,
}

impl DeviationReport {
    /// `h/‖h‖`, or `None` when the residual is numerically zero.
    pub fn residual_direction(&self, rank_tol: f64) -> Option<UnitVector> {
        if self.value <= rank_tol {
            None
        } else {
            UnitVector::from_dvector(self.h.clone()).ok()
        }
    }
}

/// `M_T(f)`: deviation with the orthogonal-projection coefficient.
///
/// The residual satisfies `(h, Af) = 0` and
/// `‖h‖² = ‖Tf‖² − |(Tf,Af)|²/(Af,Af)`; the value is computed as `‖h‖`
/// directly, the squared form is kept as a cross-check invariant in the
/// tests since it cancels badly near zero.
pub fn deviation_at(pair: &OperatorPair, f: &UnitVector) -> Result<DeviationReport> {
    let tf = pair.t().mul_vec(f);
    let af = pair.a().mul_vec(f);
    let af_sq = af.norm_squared();
    if af_sq.sqrt() <= pair.tol().rank_tol {
        return Err(OpError::KernelVector { norm: af_sq.sqrt() });
    }
    let lambda = inner(&tf, &af) / Complex64::from(af_sq);
    finish(tf, af, lambda, DeviationVariant::Standard)
}

/// `M̃_T(f)`: deviation with the coefficient `λ̃(f) = (Tf,f)/(Af,f)`.
pub fn deviation_tilde_at(pair: &OperatorPair, f: &UnitVector) -> Result<DeviationReport> {
    let tf = pair.t().mul_vec(f);
    let af = pair.a().mul_vec(f);
    let af_f = inner(&af, f.as_dvector());
    if af_f.norm() <= pair.tol().rank_tol {
        return Err(OpError::NumericalRangeZero {
            modulus: af_f.norm(),
        });
    }
    let lambda = inner(&tf, f.as_dvector()) / af_f;
    finish(tf, af, lambda, DeviationVariant::Tilde)
}

fn finish(
    tf: CVec,
    af: CVec,
    lambda: Complex64,
    variant: DeviationVariant,
) -> Result<DeviationReport> {
    let h = &tf - &af * lambda;
    let value = h.norm();
    if !value.is_finite() {
        return Err(OpError::InvalidVector);
    }
    Ok(DeviationReport {
        lambda,
        h,
        value,
        variant,
    })
}

/// Checks `M̃_T(f) ≥ M_T(f) − identity_tol` at one vector.
///
/// Must always return true: the orthogonal projection coefficient
/// minimizes `‖Tf − μAf‖` over all μ, so any other coefficient can only
/// increase the residual.
pub fn pointwise_dominance_check(pair: &OperatorPair, f: &UnitVector) -> Result<bool> {
    let standard = deviation_at(pair, f)?;
    let tilde = deviation_tilde_at(pair, f)?;
    Ok(tilde.value >= standard.value - pair.tol().identity_tol)
}
