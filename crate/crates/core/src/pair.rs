//! Validated `(T, A)` operator pairs and the tolerance set shared by all
//! numeric comparisons.
//!
//! Validation never rejects a singular `A`: the radius `M_T(A)` needs
//! `σ_min(A) > 0` while the variant `M̃_T(A)` needs `0 ∉ W(A)`, and those
//! are different facts. Each consumer checks the one it depends on.

use std::sync::OnceLock;

use crate::error::{OpError, Result};
use crate::georange;
use crate::linalg::{singular_values, ComplexMatrix};

/// Numeric tolerances, overridable per pair.
///
/// `identity_tol` guards algebraic identities, `opt_tol` is the target for
/// iterative searches, and `rank_tol` decides when a quantity counts as
/// zero. Comparisons are relative wherever a scale exists.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ToleranceSet {
    pub identity_tol: f64,
    pub opt_tol: f64,
    pub rank_tol: f64,
}

impl Default for ToleranceSet {
    fn default() -> Self {
        Self {
            identity_tol: 1e-9,
            opt_tol: 1e-8,
            rank_tol: 1e-12,
        }
    }
}

impl ToleranceSet {
    pub fn new(identity_tol: f64, opt_tol: f64, rank_tol: f64) -> Result<Self> {
        let t = Self {
            identity_tol,
            opt_tol,
            rank_tol,
        };
        t.validate()?;
        Ok(t)
    }

    pub fn validate(&self) -> Result<()> {
        let all_pos = [self.identity_tol, self.opt_tol, self.rank_tol]
            .iter()
            .all(|&t| t.is_finite() && t > 0.0);
        if !all_pos {
            return Err(OpError::InvalidTolerance(
                "tolerances must be strictly positive".into(),
            ));
        }
        if self.identity_tol < self.rank_tol {
            return Err(OpError::InvalidTolerance(
                "identity_tol must be ≥ rank_tol".into(),
            ));
        }
        Ok(())
    }
}

/// A validated pair `(T, A)` of complex n×n matrices with cached facts
/// about the direction operator `A`.
#[derive(Debug, Clone)]
pub struct OperatorPair {
    t: ComplexMatrix,
    a: ComplexMatrix,
    sigma_min_a: f64,
    wrange_dist_a: OnceLock<f64>,
    tol: ToleranceSet,
}

/// Checks shapes, computes `σ_min(A)`, and assembles the pair.
///
/// A singular `A` is accepted here; operations that need invertibility
/// report [`OpError::SingularDirection`] themselves.
pub fn validate_pair(t: ComplexMatrix, a: ComplexMatrix, tol: ToleranceSet) -> Result<OperatorPair> {
    tol.validate()?;
    if !t.is_square() || !a.is_square() || t.nrows() != a.nrows() {
        return Err(OpError::DimensionMismatch(
            t.nrows(),
            t.ncols(),
            a.nrows(),
            a.ncols(),
        ));
    }
    let sigma_min_a = *singular_values(&a)?.last().expect("square matrix is nonempty");
    Ok(OperatorPair {
        t,
        a,
        sigma_min_a,
        wrange_dist_a: OnceLock::new(),
        tol,
    })
}

impl OperatorPair {
    pub fn n(&self) -> usize {
        self.t.nrows()
    }

    pub fn t(&self) -> &ComplexMatrix {
        &self.t
    }

    pub fn a(&self) -> &ComplexMatrix {
        &self.a
    }

    pub fn tol(&self) -> &ToleranceSet {
        &self.tol
    }

    /// Smallest singular value of `A`; equals `1/‖A⁻¹‖` when `A` is
    /// invertible.
    pub fn sigma_min_a(&self) -> f64 {
        self.sigma_min_a
    }

    /// Whether `0 ∉ σ_app(A)`, which in C^n means `A` invertible.
    pub fn is_invertible_a(&self) -> bool {
        self.sigma_min_a > self.tol.rank_tol
    }

    /// Distance of 0 to the numerical range `W(A)`, computed lazily with
    /// the default θ-scan resolution and cached.
    pub fn wrange_dist_a(&self) -> f64 {
        *self.wrange_dist_a.get_or_init(|| {
            georange::wrange_distance(&self.a, georange::DEFAULT_THETA_STEPS)
                .map(|w| w.distance)
                .unwrap_or(0.0)
        })
    }

    /// Whether `0 ∉ W(A)` up to the rank tolerance, the standing
    /// hypothesis of the tilde variant.
    pub fn zero_outside_wrange_a(&self) -> bool {
        self.wrange_dist_a() > self.tol.rank_tol
    }

    /// Same tolerances, swapped roles: the pair `(T*, A*)`.
    pub fn adjoint_pair(&self) -> OperatorPair {
        validate_pair(self.t.adjoint(), self.a.adjoint(), self.tol)
            .expect("adjoint of a valid pair is valid")
    }

    /// Requires `σ_min(A) > rank_tol`.
    pub(crate) fn require_invertible_a(&self) -> Result<()> {
        if self.is_invertible_a() {
            Ok(())
        } else {
            Err(OpError::SingularDirection {
                sigma_min: self.sigma_min_a,
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::ComplexMatrix;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn identity_pair_has_unit_sigma_min() {
        let pair = validate_pair(
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(2),
            ToleranceSet::default(),
        )
        .unwrap();
        assert_relative_eq!(pair.sigma_min_a(), 1.0, max_relative = 1e-12);
        assert!(pair.is_invertible_a());
    }

    #[test]
    fn singular_direction_is_accepted_but_flagged() {
        let t = ComplexMatrix::from_rows(&[
            vec![c(1.0, 0.0), c(2.0, 0.0)],
            vec![c(3.0, 0.0), c(4.0, 0.0)],
        ])
        .unwrap();
        let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(0.0, 0.0)]).unwrap();
        let pair = validate_pair(t, a, ToleranceSet::default()).unwrap();
        assert!(pair.sigma_min_a().abs() < 1e-14);
        assert!(!pair.is_invertible_a());
    }

    #[test]
    fn diagonal_sigma_min() {
        let t = ComplexMatrix::identity(2);
        let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let pair = validate_pair(t, a, ToleranceSet::default()).unwrap();
        assert_relative_eq!(pair.sigma_min_a(), 1.0, max_relative = 1e-12);
    }

    #[test]
    fn dimension_mismatch_is_rejected() {
        let err = validate_pair(
            ComplexMatrix::identity(2),
            ComplexMatrix::identity(3),
            ToleranceSet::default(),
        )
        .unwrap_err();
        assert!(matches!(err, OpError::DimensionMismatch(..)));
    }

    #[test]
    fn bad_tolerances_are_rejected() {
        assert!(ToleranceSet::new(1e-13, 1e-8, 1e-12).is_err());
        assert!(ToleranceSet::new(-1.0, 1e-8, 1e-12).is_err());
        assert!(ToleranceSet::new(1e-9, 1e-8, 1e-12).is_ok());
    }
}
