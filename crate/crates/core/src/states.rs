//! The state-functional form of the radius.
//!
//! Every state on B(C^n) is `U ↦ tr(ρU)` for a density matrix ρ, so the
//! supremum `M_T(A)² = sup { g(T*T) − |g(A*T)|²/g(A*A) : g(A*A) ≠ 0 }`
//! becomes an optimization over the trace-one positive cone. Pure states
//! `ρ = ff*` recover the pointwise deviation: `G(ff*) = M_T(f)²`.
//!
//! `williams_certificate` handles the `A = I` specialization: `T` is its
//! own minimal-norm translation iff some state has `g(T*T) = ‖T*T‖` and
//! `g(T) = 0`; the certificate is a density matrix supported on the top
//! eigenspace of `T*T` with zero trace against `T`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{OpError, Result};
use crate::exec;
use crate::linalg::{hermitian_eigensystem_dmatrix, spectral_norm, CMat, ComplexMatrix, UnitVector};
use crate::pair::{validate_pair, OperatorPair, ToleranceSet};
use crate::psd::{min_trace_state, project_density, trace_product};
use crate::radii;
use crate::translation::minimal_translation;

const SUPREMUM_SALT: u64 = 0x73746174;
const MAX_ASCENT_ITERS: usize = 500;

/// Trace-one positive-semidefinite Hermitian matrix.
#[derive(Debug, Clone)]
pub struct DensityMatrix {
    rho: ComplexMatrix,
}

impl DensityMatrix {
    /// Validates Hermiticity, positive semidefiniteness (eigenvalues
    /// ≥ −identity_tol) and unit trace.
    pub fn new(rho: ComplexMatrix, tol: &ToleranceSet) -> Result<Self> {
        if !rho.is_square() {
            return Err(OpError::NotAState("not square".into()));
        }
        let scale = rho.frobenius_norm().max(1.0);
        if rho.hermitian_defect() > tol.identity_tol * scale {
            return Err(OpError::NotAState("not Hermitian".into()));
        }
        let trace = rho.trace();
        if (trace.re - 1.0).abs() > tol.identity_tol || trace.im.abs() > tol.identity_tol {
            return Err(OpError::NotAState(format!("trace = {trace} ≠ 1")));
        }
        let eig = hermitian_eigensystem_dmatrix(rho.as_dmatrix())?;
        if eig.min_eigenvalue() < -tol.identity_tol {
            return Err(OpError::NotAState(format!(
                "negative eigenvalue {:.3e}",
                eig.min_eigenvalue()
            )));
        }
        Ok(Self { rho })
    }

    /// Pure state `ρ = f f*`.
    pub fn pure(f: &UnitVector) -> Self {
        let v = f.as_dvector();
        let n = v.len();
        let m = CMat::from_fn(n, n, |i, j| v[i] * v[j].conj());
        Self {
            rho: ComplexMatrix::from_dmatrix(m).expect("outer product of finite vector"),
        }
    }

    /// `I/n`.
    pub fn maximally_mixed(n: usize) -> Self {
        Self {
            rho: ComplexMatrix::identity(n).scale(Complex64::from(1.0 / n as f64)),
        }
    }

    /// Hilbert–Schmidt-style random density `GG*/tr(GG*)`.
    pub fn random(n: usize, rng: &mut ChaCha8Rng) -> Self {
        loop {
            let g = CMat::from_fn(n, n, |_, _| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            });
            let m = &g * g.adjoint();
            let tr = m.trace().re;
            if tr > 1e-12 {
                let rho = m.map(|z| z / Complex64::from(tr));
                return Self {
                    rho: ComplexMatrix::from_dmatrix(rho).expect("finite"),
                };
            }
        }
    }

    pub fn rho(&self) -> &ComplexMatrix {
        &self.rho
    }

    pub fn dim(&self) -> usize {
        self.rho.nrows()
    }
}

/// Value of the functional at one state.
#[derive(Debug, Clone)]
pub struct StateFunctionalResult {
    /// `g(T*T) − |g(A*T)|²/g(A*A)`.
    pub value: f64,
    pub rho: DensityMatrix,
    /// `g(A*A)`; membership in the admissible set requires it > rank_tol.
    pub denominator: f64,
}

struct Functional {
    tt: CMat,
    at: CMat,
    aa: CMat,
    rank_tol: f64,
}

impl Functional {
    fn new(pair: &OperatorPair) -> Self {
        let t = pair.t().as_dmatrix();
        let a = pair.a().as_dmatrix();
        Self {
            tt: t.adjoint() * t,
            at: a.adjoint() * t,
            aa: a.adjoint() * a,
            rank_tol: pair.tol().rank_tol,
        }
    }

    fn eval(&self, rho: &CMat) -> Result<(f64, f64)> {
        let den = trace_product(rho, &self.aa).re;
        if den <= self.rank_tol {
            return Err(OpError::StateOutsideP { denominator: den });
        }
        let num = trace_product(rho, &self.tt).re;
        let z = trace_product(rho, &self.at);
        Ok((num - z.norm_sqr() / den, den))
    }

    /// Euclidean gradient as a Hermitian matrix:
    /// `T*T − (z̄·A*T + z·T*A)/d + (|z|²/d²)·A*A` with `z = tr(ρA*T)`,
    /// `d = tr(ρA*A)`.
    fn gradient(&self, rho: &CMat) -> CMat {
        let den = trace_product(rho, &self.aa).re;
        let z = trace_product(rho, &self.at);
        let mid = self.at.map(|w| w * z.conj()) + self.at.adjoint().map(|w| w * z);
        &self.tt - mid.map(|w| w / Complex64::from(den))
            + self.aa.map(|w| w * Complex64::from(z.norm_sqr() / (den * den)))
    }
}

/// Evaluates `G(ρ) = tr(ρT*T) − |tr(ρA*T)|²/tr(ρA*A)`.
///
/// For a rank-one `ρ = ff*` this equals `M_T(f)²`.
pub fn state_value(pair: &OperatorPair, rho: &DensityMatrix) -> Result<StateFunctionalResult> {
    if rho.dim() != pair.n() {
        return Err(OpError::DimensionMismatch(
            rho.dim(),
            rho.dim(),
            pair.n(),
            pair.n(),
        ));
    }
    let functional = Functional::new(pair);
    let (value, denominator) = functional.eval(rho.rho.as_dmatrix())?;
    Ok(StateFunctionalResult {
        value,
        rho: rho.clone(),
        denominator,
    })
}

/// Maximizes the state functional over density matrices by projected
/// ascent (numeric-gradient step, spectral projection back onto the
/// trace-one positive cone).
///
/// Multi-start: seeded random densities, the maximally mixed state, and
/// the rank-one state at the radius maximizer — so the expected equality
/// `sup = M_T(A)²` cannot fail merely because the ascent was weak.
pub fn state_supremum(pair: &OperatorPair, starts: usize, seed: u64) -> Result<StateFunctionalResult> {
    pair.require_invertible_a()?;
    let n = pair.n();
    let functional = Functional::new(pair);
    let radius = radii::radius(pair, radii::DEFAULT_STARTS, seed ^ SUPREMUM_SALT)?;
    let mut initial: Vec<CMat> = vec![
        DensityMatrix::pure(&radius.maximizer).rho.as_dmatrix().clone(),
        DensityMatrix::maximally_mixed(n).rho.as_dmatrix().clone(),
    ];
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..starts {
        initial.push(DensityMatrix::random(n, &mut rng).rho.as_dmatrix().clone());
    }
    let outcomes = exec::map_slice(&initial, |rho0| ascend_state(&functional, rho0.clone()));
    let mut best: Option<(f64, CMat)> = None;
    for outcome in outcomes {
        let (value, rho) = outcome?;
        let better = match &best {
            None => true,
            Some((bv, brho)) => value > *bv || (value == *bv && lex_less_mat(&rho, brho)),
        };
        if better {
            best = Some((value, rho));
        }
    }
    let (_, rho) = best.expect("at least one start");
    let rho = DensityMatrix::new(ComplexMatrix::from_dmatrix(rho)?, pair.tol())?;
    state_value(pair, &rho)
}

fn lex_less_mat(a: &CMat, b: &CMat) -> bool {
    for (x, y) in a.iter().zip(b.iter()) {
        if x.re != y.re {
            return x.re < y.re;
        }
        if x.im != y.im {
            return x.im < y.im;
        }
    }
    false
}

fn ascend_state(functional: &Functional, rho0: CMat) -> Result<(f64, CMat)> {
    let mut rho = project_density(&rho0)?;
    let (mut value, _) = functional.eval(&rho)?;
    let mut step = 1.0;
    for _ in 0..MAX_ASCENT_ITERS {
        let grad = functional.gradient(&rho);
        let mut accepted = false;
        while step > 1e-13 {
            let cand = project_density(&(&rho + grad.map(|z| z * Complex64::from(step))))?;
            match functional.eval(&cand) {
                Ok((v, _)) if v > value + 1e-14 * value.abs().max(1.0) => {
                    rho = cand;
                    value = v;
                    step = (step * 2.0).min(1e3);
                    accepted = true;
                    break;
                }
                _ => step *= 0.5,
            }
        }
        if !accepted {
            break;
        }
    }
    Ok((value, rho))
}

/// Williams certificate outcome at `A = I`.
#[derive(Debug, Clone)]
pub struct WilliamsReport {
    /// Whether `‖T‖ ≤ ‖T − λI‖` for all λ, i.e. `λ₀ ≈ 0`.
    pub minimal_at_zero: bool,
    /// Computed minimal translation `λ₀` of `(T, I)`.
    pub lambda0: Complex64,
    /// State with `tr(ρT*T) = ‖T*T‖` and `tr(ρT) = 0`, when the left
    /// side holds.
    pub certificate: Option<DensityMatrix>,
    /// `|tr(ρT)|` at the certificate.
    pub trace_t_modulus: f64,
    /// `tr(ρT*T)` at the certificate.
    pub top_mass: f64,
}

/// Decides whether `T` is its own minimal-norm translation and, if so,
/// produces the Williams state.
///
/// The search space is exact: a state with `g(T*T) = ‖T*T‖` must be
/// supported on the top eigenspace `V` of `T*T`, so the problem reduces
/// to a density `S` on C^k with `tr(S·V*TV) = 0` — a point of the convex
/// set `W(V*TV)` hitting the origin. Candidates come from support-line
/// eigenvectors of the compression; a pure hit, a two-point mixture, or
/// an exact barycentric triangle is taken when available, and a projected
/// descent on `|tr(S·V*TV)|²` polishes the rest. Failure to certify when
/// the left side holds is a loud error, never a silent pass.
pub fn williams_certificate(t: &ComplexMatrix, tol: &ToleranceSet) -> Result<WilliamsReport> {
    if !t.is_square() {
        return Err(OpError::DimensionMismatch(t.nrows(), t.ncols(), t.nrows(), t.nrows()));
    }
    let n = t.nrows();
    let pair = validate_pair(t.clone(), ComplexMatrix::identity(n), *tol)?;
    let translation = minimal_translation(&pair)?;
    let norm_t = spectral_norm(t)?;
    if translation.lambda0.norm() > tol.opt_tol * norm_t.max(1.0) {
        return Ok(WilliamsReport {
            minimal_at_zero: false,
            lambda0: translation.lambda0,
            certificate: None,
            trace_t_modulus: f64::NAN,
            top_mass: f64::NAN,
        });
    }

    let tm = t.as_dmatrix();
    let tt = tm.adjoint() * tm;
    let eig = hermitian_eigensystem_dmatrix(&tt)?;
    let mu_max = eig.max_eigenvalue();
    let band = tol.identity_tol * mu_max.max(1.0);
    let kept: Vec<usize> = (0..n)
        .filter(|&k| mu_max - eig.eigenvalues[k] <= band)
        .collect();
    let k = kept.len();
    let mut basis = CMat::zeros(n, k);
    for (col, &src) in kept.iter().enumerate() {
        basis.set_column(col, &eig.eigenvector(src));
    }
    let compressed = basis.adjoint() * tm * &basis;

    let target = tol.opt_tol.min(1e-8) * norm_t.max(1.0);
    let s = zero_trace_state(&compressed, target)?;
    let rho_mat = &basis * &s * basis.adjoint();
    let rho = DensityMatrix::new(ComplexMatrix::from_dmatrix(rho_mat)?, tol)?;
    let trace_t_modulus = trace_product(rho.rho.as_dmatrix(), tm).norm();
    let top_mass = trace_product(rho.rho.as_dmatrix(), &tt).re;
    if trace_t_modulus > target {
        return Err(OpError::CertificateNotFound {
            best: trace_t_modulus,
        });
    }
    Ok(WilliamsReport {
        minimal_at_zero: true,
        lambda0: translation.lambda0,
        certificate: Some(rho),
        trace_t_modulus,
        top_mass,
    })
}

/// Finds a k×k density `S` with `|tr(S·M)| ≤ target`.
fn zero_trace_state(m: &CMat, target: f64) -> Result<CMat> {
    min_trace_state(m, target).map(|(s, _)| s)
}
