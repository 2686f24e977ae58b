//! Complex matrices, unit vectors and the dense decompositions everything
//! else consumes.
//!
//! The decompositions (SVD, Hermitian eigensystem, Schur eigenvalues) are
//! delegated to nalgebra; this module owns the contracts: finite entries,
//! Hermiticity checks, ascending eigenvalue order, and unit normalization.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{OpError, Result};

pub(crate) type CMat = DMatrix<Complex64>;
pub(crate) type CVec = DVector<Complex64>;

fn finite(z: &Complex64) -> bool {
    z.re.is_finite() && z.im.is_finite()
}

/// Dense complex matrix with all entries finite.
#[derive(Debug, Clone, PartialEq)]
pub struct ComplexMatrix {
    pub(crate) m: CMat,
}

impl ComplexMatrix {
    /// Builds a matrix from row-major entries. Fails on non-finite entries
    /// or a length mismatch.
    pub fn from_row_major(rows: usize, cols: usize, entries: &[Complex64]) -> Result<Self> {
        if entries.len() != rows * cols || rows == 0 || cols == 0 {
            return Err(OpError::DimensionMismatch(rows, cols, 0, 0));
        }
        if !entries.iter().all(finite) {
            return Err(OpError::InvalidMatrix);
        }
        Ok(Self {
            m: CMat::from_row_slice(rows, cols, entries),
        })
    }

    /// Builds a matrix from nested rows, as read from matrix files.
    pub fn from_rows(rows: &[Vec<Complex64>]) -> Result<Self> {
        let r = rows.len();
        let c = rows.first().map_or(0, Vec::len);
        if r == 0 || c == 0 || rows.iter().any(|row| row.len() != c) {
            return Err(OpError::DimensionMismatch(r, c, 0, 0));
        }
        let flat: Vec<Complex64> = rows.iter().flatten().copied().collect();
        Self::from_row_major(r, c, &flat)
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> Complex64) -> Result<Self> {
        let m = CMat::from_fn(rows, cols, |i, j| f(i, j));
        if !m.iter().all(finite) {
            return Err(OpError::InvalidMatrix);
        }
        Ok(Self { m })
    }

    pub fn identity(n: usize) -> Self {
        Self {
            m: CMat::identity(n, n),
        }
    }

    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self {
            m: CMat::zeros(rows, cols),
        }
    }

    pub fn from_diagonal(diag: &[Complex64]) -> Result<Self> {
        if diag.is_empty() || !diag.iter().all(finite) {
            return Err(OpError::InvalidMatrix);
        }
        Ok(Self {
            m: CMat::from_diagonal(&CVec::from_column_slice(diag)),
        })
    }

    pub(crate) fn from_dmatrix(m: CMat) -> Result<Self> {
        if !m.iter().all(finite) {
            return Err(OpError::InvalidMatrix);
        }
        Ok(Self { m })
    }

    pub fn nrows(&self) -> usize {
        self.m.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.m.ncols()
    }

    pub fn is_square(&self) -> bool {
        self.m.is_square()
    }

    pub fn entry(&self, i: usize, j: usize) -> Complex64 {
        self.m[(i, j)]
    }

    /// Row-major copy of the entries, the inverse of [`from_row_major`].
    ///
    /// [`from_row_major`]: ComplexMatrix::from_row_major
    pub fn row_major(&self) -> Vec<Complex64> {
        (0..self.nrows())
            .flat_map(|i| (0..self.ncols()).map(move |j| self.m[(i, j)]))
            .collect()
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> Self {
        Self {
            m: self.m.adjoint(),
        }
    }

    pub fn scale(&self, c: Complex64) -> Self {
        Self {
            m: self.m.map(|z| z * c),
        }
    }

    pub fn matmul(&self, rhs: &Self) -> Self {
        Self { m: &self.m * &rhs.m }
    }

    pub fn add(&self, rhs: &Self) -> Self {
        Self { m: &self.m + &rhs.m }
    }

    pub fn sub(&self, rhs: &Self) -> Self {
        Self { m: &self.m - &rhs.m }
    }

    pub fn mul_vec(&self, v: &UnitVector) -> CVec {
        &self.m * v.as_dvector()
    }

    pub fn trace(&self) -> Complex64 {
        self.m.trace()
    }

    /// Frobenius norm; the spectral norm lives in [`spectral_norm`].
    pub fn frobenius_norm(&self) -> f64 {
        self.m.norm()
    }

    /// Hermiticity defect `‖M − M*‖_F`.
    pub fn hermitian_defect(&self) -> f64 {
        (&self.m - self.m.adjoint()).norm()
    }

    pub(crate) fn as_dmatrix(&self) -> &CMat {
        &self.m
    }
}

/// Unit vector in C^n; construction normalizes, so `|‖f‖ − 1| ≤ 1e−12`.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitVector {
    v: CVec,
}

impl UnitVector {
    pub fn new(components: &[Complex64]) -> Result<Self> {
        if components.is_empty() || !components.iter().all(finite) {
            return Err(OpError::InvalidVector);
        }
        Self::from_dvector(CVec::from_column_slice(components))
    }

    pub(crate) fn from_dvector(v: CVec) -> Result<Self> {
        let n = v.norm();
        if !(n.is_finite() && n > 0.0) {
            return Err(OpError::InvalidVector);
        }
        Ok(Self { v: v / Complex64::from(n) })
    }

    /// k-th standard basis vector of C^n.
    pub fn standard_basis(n: usize, k: usize) -> Self {
        let mut v = CVec::zeros(n);
        v[k] = Complex64::new(1.0, 0.0);
        Self { v }
    }

    pub fn dim(&self) -> usize {
        self.v.len()
    }

    pub fn components(&self) -> &[Complex64] {
        self.v.as_slice()
    }

    pub fn as_dvector(&self) -> &CVec {
        &self.v
    }

    /// Phase gauge: rotates so the first component of modulus > 1e−12 is
    /// real and positive. Keeps multi-start reductions and reported
    /// maximizers reproducible.
    pub fn gauge_fixed(&self) -> Self {
        for z in self.v.iter() {
            let m = z.norm();
            if m > 1e-12 {
                let phase = z.conj() / Complex64::from(m);
                return Self {
                    v: self.v.map(|w| w * phase),
                };
            }
        }
        self.clone()
    }

    /// Inner product `(self, other)`, conjugate-linear in `other`.
    pub fn inner(&self, other: &UnitVector) -> Complex64 {
        other.v.dotc(&self.v)
    }
}

/// Inner product `(x, y) = Σ x_i ȳ_i`, conjugate-linear in `y`.
pub(crate) fn inner(x: &CVec, y: &CVec) -> Complex64 {
    y.dotc(x)
}

/// Largest singular value.
///
/// Accuracy is limited only by the dense SVD, well within the identity
/// tolerance for the sizes this crate targets.
pub fn spectral_norm(m: &ComplexMatrix) -> Result<f64> {
    spectral_norm_dmatrix(&m.m)
}

pub(crate) fn spectral_norm_dmatrix(m: &CMat) -> Result<f64> {
    if !m.iter().all(finite) {
        return Err(OpError::InvalidMatrix);
    }
    let sv = m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| OpError::NumericalFailure("SVD did not converge".into()))?;
    Ok(sv.singular_values.iter().copied().fold(0.0, f64::max))
}

/// Singular values in descending order.
pub fn singular_values(m: &ComplexMatrix) -> Result<Vec<f64>> {
    let sv = m
        .m
        .clone()
        .try_svd(false, false, f64::EPSILON, 0)
        .ok_or_else(|| OpError::NumericalFailure("SVD did not converge".into()))?;
    let mut s: Vec<f64> = sv.singular_values.iter().copied().collect();
    s.sort_by(|a, b| b.partial_cmp(a).unwrap());
    Ok(s)
}

/// Right singular vector for the largest singular value.
pub(crate) fn top_right_singular_vector(m: &CMat) -> Result<CVec> {
    let svd = m
        .clone()
        .try_svd(false, true, f64::EPSILON, 0)
        .ok_or_else(|| OpError::NumericalFailure("SVD did not converge".into()))?;
    let v_t = svd.v_t.expect("requested V^H");
    let k = svd
        .singular_values
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.partial_cmp(b.1).unwrap())
        .map(|(i, _)| i)
        .unwrap_or(0);
    Ok(v_t.row(k).adjoint())
}

/// Eigensystem of a Hermitian matrix.
#[derive(Debug, Clone)]
pub struct HermitianEigen {
    /// Real eigenvalues in ascending order.
    pub eigenvalues: Vec<f64>,
    /// Orthonormal eigenvectors, column k paired with `eigenvalues[k]`.
    pub eigenvectors: ComplexMatrix,
}

impl HermitianEigen {
    pub fn eigenvector(&self, k: usize) -> CVec {
        self.eigenvectors.m.column(k).into_owned()
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues[0]
    }

    pub fn max_eigenvalue(&self) -> f64 {
        *self.eigenvalues.last().unwrap()
    }
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian
/// matrix. Rejects inputs with `‖M − M*‖ > hermitian_tol·max(1, ‖M‖)`.
pub fn hermitian_eigensystem(m: &ComplexMatrix, hermitian_tol: f64) -> Result<HermitianEigen> {
    if !m.is_square() {
        return Err(OpError::DimensionMismatch(m.nrows(), m.ncols(), m.nrows(), m.nrows()));
    }
    let scale = m.m.norm().max(1.0);
    let defect = m.hermitian_defect();
    if defect > hermitian_tol * scale {
        return Err(OpError::NotHermitian { defect });
    }
    hermitian_eigensystem_dmatrix(&m.m)
}

/// Same as [`hermitian_eigensystem`] but trusts Hermiticity; the input is
/// symmetrized before factoring so stray fp asymmetry cannot leak in.
pub(crate) fn hermitian_eigensystem_dmatrix(m: &CMat) -> Result<HermitianEigen> {
    let sym = (m + m.adjoint()).map(|z| z * Complex64::from(0.5));
    let n = sym.nrows();
    let eig = nalgebra::SymmetricEigen::try_new(sym, f64::EPSILON, 0)
        .ok_or_else(|| OpError::NumericalFailure("Hermitian eigensolver did not converge".into()))?;
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].partial_cmp(&eig.eigenvalues[b]).unwrap());
    let eigenvalues: Vec<f64> = order.iter().map(|&k| eig.eigenvalues[k]).collect();
    let mut vectors = CMat::zeros(n, n);
    for (dst, &src) in order.iter().enumerate() {
        vectors.set_column(dst, &eig.eigenvectors.column(src));
    }
    Ok(HermitianEigen {
        eigenvalues,
        eigenvectors: ComplexMatrix { m: vectors },
    })
}

/// Eigenvalues of a general square complex matrix via the Schur form.
pub fn general_eigenvalues(m: &ComplexMatrix) -> Result<Vec<Complex64>> {
    if !m.is_square() {
        return Err(OpError::DimensionMismatch(m.nrows(), m.ncols(), m.nrows(), m.nrows()));
    }
    let schur = nalgebra::Schur::try_new(m.m.clone(), f64::EPSILON, 0)
        .ok_or_else(|| OpError::NumericalFailure("Schur iteration did not converge".into()))?;
    let (_, t) = schur.unpack();
    Ok((0..t.nrows()).map(|i| t[(i, i)]).collect())
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    #[test]
    fn spectral_norm_of_diagonal_is_max_modulus() {
        let m = ComplexMatrix::from_diagonal(&[c(2.0, 0.0), c(0.0, 0.0)]).unwrap();
        assert_relative_eq!(spectral_norm(&m).unwrap(), 2.0, max_relative = 1e-12);
    }

    #[test]
    fn spectral_norm_of_zero_matrix() {
        let m = ComplexMatrix::zeros(3, 3);
        assert_eq!(spectral_norm(&m).unwrap(), 0.0);
    }

    #[test]
    fn spectral_norm_of_nilpotent_jordan_block() {
        // σ(M) = {1, 0} for the 2×2 Jordan block at 0.
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert_relative_eq!(spectral_norm(&m).unwrap(), 1.0, max_relative = 1e-12);
        let s = singular_values(&m).unwrap();
        assert_relative_eq!(s[0], 1.0, max_relative = 1e-12);
        assert!(s[1].abs() < 1e-14);
    }

    #[test]
    fn non_finite_entries_are_rejected() {
        let err = ComplexMatrix::from_row_major(1, 1, &[c(f64::NAN, 0.0)]).unwrap_err();
        assert!(matches!(err, OpError::InvalidMatrix));
    }

    #[test]
    fn hermitian_eigensystem_of_diag() {
        let m = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let eig = hermitian_eigensystem(&m, 1e-9).unwrap();
        assert_relative_eq!(eig.eigenvalues[0], -1.0, max_relative = 1e-12);
        assert_relative_eq!(eig.eigenvalues[1], 1.0, max_relative = 1e-12);
    }

    #[test]
    fn hermitian_eigensystem_of_identity() {
        let eig = hermitian_eigensystem(&ComplexMatrix::identity(3), 1e-9).unwrap();
        for lam in eig.eigenvalues {
            assert_relative_eq!(lam, 1.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn hermitian_eigensystem_of_pauli_x() {
        // [[0,1],[1,0]]: eigenpairs (−1, (1,−1)/√2) and (1, (1,1)/√2).
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(1.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let eig = hermitian_eigensystem(&m, 1e-9).unwrap();
        assert_relative_eq!(eig.eigenvalues[0], -1.0, max_relative = 1e-12);
        assert_relative_eq!(eig.eigenvalues[1], 1.0, max_relative = 1e-12);
        let minus = eig.eigenvector(0);
        let overlap = (minus[0] - minus[1]).norm() / 2.0_f64.sqrt();
        assert_relative_eq!(overlap, 1.0, max_relative = 1e-10);
    }

    #[test]
    fn non_hermitian_input_is_rejected() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        assert!(matches!(
            hermitian_eigensystem(&m, 1e-9),
            Err(OpError::NotHermitian { .. })
        ));
    }

    #[test]
    fn unit_vector_normalizes() {
        let f = UnitVector::new(&[c(3.0, 0.0), c(4.0, 0.0)]).unwrap();
        let norm: f64 = f.components().iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
        assert!((norm - 1.0).abs() <= 1e-12);
    }

    #[test]
    fn zero_vector_is_rejected() {
        assert!(matches!(
            UnitVector::new(&[c(0.0, 0.0)]),
            Err(OpError::InvalidVector)
        ));
    }

    #[test]
    fn gauge_fix_makes_leading_component_real_positive() {
        let f = UnitVector::new(&[c(0.0, 1.0), c(1.0, 0.0)]).unwrap().gauge_fixed();
        let lead = f.components()[0];
        assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
    }

    #[test]
    fn general_eigenvalues_of_jordan_block() {
        let m = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let ev = general_eigenvalues(&m).unwrap();
        assert!(ev.iter().all(|z| z.norm() < 1e-12));
    }
}
