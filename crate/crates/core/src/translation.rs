//! The minimal-norm translation of `T` in the direction of `A`: the unique
//! `λ₀` with `‖T − λ₀A‖ ≤ ‖T − λA‖` for every complex `λ`, whose optimal
//! value equals the radius `M_T(A)`. At `A = I` the optimum is the center
//! of mass `c_T`.
//!
//! `φ(λ) = σ_max(T − λA)` is convex in `(Re λ, Im λ)` as a maximum of
//! convex functions of an affine family, and coercive when `A` is
//! invertible: `φ(λ) ≥ |λ|σ_min(A) − ‖T‖`, so every minimizer lies in the
//! disk `|λ| ≤ 2‖T‖/σ_min(A)`. The search is derivative-free — σ_max is
//! not smooth where the top singular value is multiple, which is exactly
//! where minima like to sit — in two stages. An adaptive shrinking grid
//! (17×17 stencil, recenter on the best point, shrink only when it is
//! interior) localizes the minimizer; a subgradient polish then exploits
//! the structure of `∂φ`: at a top singular band `(U, V)` of `T − λA` the
//! subgradients are `{tr(S·U*AV) : S density}`, so the minimal-modulus
//! element is an exact first-order optimality measure and its conjugate
//! direction is the steepest descent — this resolves λ₀ far below the
//! `√ε` floor that function values alone allow in flat valley directions.
//! A seeded probe pass afterwards gives a falsifiable optimality
//! certificate instead of a convergence flag.

use num_complex::Complex64;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{OpError, Result};
use crate::exec;
use crate::linalg::{spectral_norm_dmatrix, CMat, ComplexMatrix};
use crate::pair::{validate_pair, OperatorPair, ToleranceSet};
use crate::psd::min_trace_state;
use crate::radii::RadiusResult;

const GRID_HALF: i32 = 8; // 17×17 stencil per level
const MAX_LEVELS: usize = 200;
const MAX_POLISH_STEPS: usize = 500;
const PROBE_COUNT: usize = 64;
const PROBE_SEED: u64 = 0x6c616d30;

/// Optimal translation with its falsifiable certificate.
#[derive(Debug, Clone)]
pub struct TranslationResult {
    pub lambda0: Complex64,
    /// `‖T − λ₀A‖`.
    pub min_norm: f64,
    /// `max over probe λ of (min_norm − ‖T − λA‖)`; ≤ 0 when no probe
    /// beats the reported optimum.
    pub probe_gap: f64,
    /// Refinement levels spent.
    pub iterations: usize,
}

fn phi(t: &CMat, a: &CMat, lambda: Complex64) -> Result<f64> {
    spectral_norm_dmatrix(&(t - a.map(|z| z * lambda)))
}

struct GridMin {
    lambda: Complex64,
    value: f64,
    on_boundary: bool,
}

fn grid_min(t: &CMat, a: &CMat, center: Complex64, half_width: f64) -> Result<GridMin> {
    let span = 2 * GRID_HALF + 1;
    let spacing = half_width / GRID_HALF as f64;
    let values = exec::map_indices((span * span) as usize, |idx| {
        let u = (idx as i32 % span) - GRID_HALF;
        let v = (idx as i32 / span) - GRID_HALF;
        let lam = center + Complex64::new(u as f64 * spacing, v as f64 * spacing);
        phi(t, a, lam).map(|val| (val, lam, u.abs() == GRID_HALF || v.abs() == GRID_HALF))
    });
    let mut best: Option<GridMin> = None;
    for item in values {
        let (value, lambda, on_boundary) = item?;
        let better = match &best {
            None => true,
            Some(b) => {
                value < b.value
                    || (value == b.value
                        && (lambda.re < b.lambda.re
                            || (lambda.re == b.lambda.re && lambda.im < b.lambda.im)))
            }
        };
        if better {
            best = Some(GridMin {
                lambda,
                value,
                on_boundary,
            });
        }
    }
    Ok(best.expect("grid is nonempty"))
}

fn minimize(t: &CMat, a: &CMat, start: Complex64, initial_half_width: f64) -> Result<(Complex64, f64, usize)> {
    let mut center = start;
    let mut half_width = initial_half_width;
    let mut levels = 0;
    while levels < MAX_LEVELS {
        let m = grid_min(t, a, center, half_width)?;
        levels += 1;
        center = m.lambda;
        if !m.on_boundary {
            // True minimizer sits within one spacing of an interior
            // argmin; keep a margin of 2.5 spacings.
            half_width *= 2.5 / GRID_HALF as f64;
        }
        // Grid values cannot resolve the flat valley directions below the
        // √ε floor; the subgradient polish owns the rest.
        if half_width <= 1e-6 * center.norm().max(1.0) {
            break;
        }
    }
    let (center, value, polish_steps) = subgradient_polish(t, a, center)?;
    Ok((center, value, levels + polish_steps))
}

/// Steepest-descent polish on the nonsmooth `φ(λ) = σ_max(T − λA)`.
///
/// At each iterate the top singular band `(U, V)` of `T − λA` yields the
/// subdifferential `{tr(S·U*AV)}`; its minimal-modulus element `w`
/// certifies optimality (`|w|` bounds the gradient of every smooth branch)
/// and `conj(w)/|w|` is the steepest descent direction, with guaranteed
/// slope `−|w|`.
fn subgradient_polish(t: &CMat, a: &CMat, start: Complex64) -> Result<(Complex64, f64, usize)> {
    let norm_a = spectral_norm_dmatrix(a)?;
    let mut lambda = start;
    let (mut value, mut w, mut band) = subgradient_measure(t, a, lambda)?;
    let stop = 1e-12 * norm_a.max(1.0) * value.max(1.0);
    let mut steps = 0;
    let mut trust = value.max(1e-6) * 0.1;
    for _ in 0..MAX_POLISH_STEPS {
        steps += 1;
        if value <= stop || w.norm() <= stop {
            break;
        }
        // Simple top singular value: φ is smooth here and w is its exact
        // gradient (up to sign conventions), so a finite-difference
        // Newton step on the gradient field converges quadratically where
        // plain descent zigzags on ill-conditioned bowls.
        if band == 1 {
            if let Some((cand, cand_value, cand_w, cand_band)) =
                newton_on_gradient(t, a, lambda, value, w)?
            {
                lambda = cand;
                value = cand_value;
                w = cand_w;
                band = cand_band;
                continue;
            }
        }
        let direction = w.conj() / Complex64::from(w.norm());
        // φ differences sink below fp long before λ converges (the valley
        // is quadratically flat), so acceptance switches to the
        // subgradient modulus, which is linear in the distance to λ₀ and
        // computed at fp accuracy. Steps shrink from the trust radius and
        // then grow past it: far below the remaining distance no step
        // contracts the measure, so the useful scale may sit above trust.
        let floor = 1e-15 * lambda.norm().max(1.0);
        let mut trial_steps = Vec::with_capacity(64);
        let mut s = trust;
        while s > floor {
            trial_steps.push(s);
            s *= 0.5;
        }
        let mut s = trust * 2.0;
        while s < value.max(1.0) {
            trial_steps.push(s);
            s *= 2.0;
        }
        let mut moved = false;
        for step in trial_steps {
            let cand = lambda + direction * Complex64::from(step);
            let (cand_value, cand_w, cand_band) = subgradient_measure(t, a, cand)?;
            let value_drop = cand_value <= value - 0.3 * step * w.norm();
            let measure_drop =
                cand_value <= value + 1e-13 * value.max(1.0) && cand_w.norm() <= 0.9 * w.norm();
            if value_drop || measure_drop {
                lambda = cand;
                value = cand_value;
                w = cand_w;
                band = cand_band;
                trust = step * 2.0;
                moved = true;
                break;
            }
        }
        if !moved {
            break;
        }
    }
    Ok((lambda, value, steps))
}

/// One Newton step on the 2-real-variable gradient field of `φ` at a
/// simple top singular value, with central-difference Jacobian. Returns
/// the accepted iterate only when it halves the gradient modulus without
/// raising φ beyond fp noise.
#[allow(clippy::type_complexity)]
fn newton_on_gradient(
    t: &CMat,
    a: &CMat,
    lambda: Complex64,
    value: f64,
    w: Complex64,
) -> Result<Option<(Complex64, f64, Complex64, usize)>> {
    let h = 1e-6 * lambda.norm().max(1.0);
    let (_, wxp, kxp) = subgradient_measure(t, a, lambda + Complex64::new(h, 0.0))?;
    let (_, wxm, kxm) = subgradient_measure(t, a, lambda - Complex64::new(h, 0.0))?;
    let (_, wyp, kyp) = subgradient_measure(t, a, lambda + Complex64::new(0.0, h))?;
    let (_, wym, kym) = subgradient_measure(t, a, lambda - Complex64::new(0.0, h))?;
    if kxp != 1 || kxm != 1 || kyp != 1 || kym != 1 {
        return Ok(None);
    }
    // Gradient of φ in (x, y) is (−Re w, Im w).
    let j11 = -(wxp.re - wxm.re) / (2.0 * h);
    let j12 = -(wyp.re - wym.re) / (2.0 * h);
    let j21 = (wxp.im - wxm.im) / (2.0 * h);
    let j22 = (wyp.im - wym.im) / (2.0 * h);
    let det = j11 * j22 - j12 * j21;
    let scale = (j11.abs() + j12.abs() + j21.abs() + j22.abs()).max(1e-300);
    if det.abs() <= 1e-10 * scale * scale {
        return Ok(None);
    }
    let (gx, gy) = (-w.re, w.im);
    let dx = (-gx * j22 + gy * j12) / det;
    let dy = (gx * j21 - gy * j11) / det;
    let cand = lambda + Complex64::new(dx, dy);
    let (cand_value, cand_w, cand_band) = subgradient_measure(t, a, cand)?;
    if cand_w.norm() <= 0.5 * w.norm() && cand_value <= value + 1e-12 * value.max(1.0) {
        Ok(Some((cand, cand_value, cand_w, cand_band)))
    } else {
        Ok(None)
    }
}

/// `φ(λ)` together with the minimal-modulus subgradient element
/// `w = tr(S·U*AV)` over densities `S` on the top singular band, and the
/// band size.
fn subgradient_measure(t: &CMat, a: &CMat, lambda: Complex64) -> Result<(f64, Complex64, usize)> {
    let m = t - a.map(|z| z * lambda);
    let svd = m
        .clone()
        .try_svd(true, true, f64::EPSILON, 0)
        .ok_or_else(|| OpError::NumericalFailure("SVD did not converge".into()))?;
    let u = svd.u.as_ref().expect("requested U");
    let v_t = svd.v_t.as_ref().expect("requested V^H");
    let sigma_max = svd.singular_values.iter().copied().fold(0.0, f64::max);
    if sigma_max == 0.0 {
        return Ok((0.0, Complex64::new(0.0, 0.0), 1));
    }
    let band: Vec<usize> = (0..svd.singular_values.len())
        .filter(|&i| sigma_max - svd.singular_values[i] <= 1e-9 * sigma_max)
        .collect();
    let k = band.len();
    let mut u_band = CMat::zeros(m.nrows(), k);
    let mut v_band = CMat::zeros(m.ncols(), k);
    for (col, &i) in band.iter().enumerate() {
        u_band.set_column(col, &u.column(i));
        v_band.set_column(col, &v_t.row(i).adjoint());
    }
    let g = u_band.adjoint() * a * v_band;
    let (_, w) = min_trace_state(&g, 0.0)?;
    Ok((sigma_max, w, k))
}

/// Minimizes `‖T − λA‖` over complex λ.
pub fn minimal_translation(pair: &OperatorPair) -> Result<TranslationResult> {
    pair.require_invertible_a()?;
    let t = pair.t().as_dmatrix();
    let a = pair.a().as_dmatrix();
    let norm_t = spectral_norm_dmatrix(t)?;
    let coercivity_radius = 2.0 * norm_t / pair.sigma_min_a() + 1.0;

    let (mut lambda0, mut min_norm, mut iterations) =
        minimize(t, a, Complex64::new(0.0, 0.0), coercivity_radius)?;

    // Falsification pass: seeded probes over the coercivity disk. A probe
    // that beats the optimum restarts the refinement from that probe.
    let mut probe_gap = f64::NEG_INFINITY;
    for _round in 0..3 {
        let mut rng = ChaCha8Rng::seed_from_u64(PROBE_SEED);
        let probes: Vec<Complex64> = (0..PROBE_COUNT)
            .map(|_| {
                let radius = coercivity_radius * rng.random::<f64>().sqrt();
                let angle = rng.random::<f64>() * std::f64::consts::TAU;
                Complex64::from_polar(radius, angle)
            })
            .collect();
        let values = exec::map_slice(&probes, |lam| phi(t, a, *lam));
        let mut best_probe: Option<(f64, Complex64)> = None;
        for (lam, value) in probes.iter().zip(values) {
            let value = value?;
            probe_gap = probe_gap.max(min_norm - value);
            if best_probe.as_ref().map_or(true, |(bv, _)| value < *bv) {
                best_probe = Some((value, *lam));
            }
        }
        match best_probe {
            Some((bv, lam)) if bv < min_norm - 1e-12 * min_norm.max(1.0) => {
                let (l2, v2, it2) = minimize(t, a, lam, coercivity_radius / 8.0)?;
                lambda0 = l2;
                min_norm = v2;
                iterations += it2;
            }
            _ => break,
        }
    }

    Ok(TranslationResult {
        lambda0,
        min_norm,
        probe_gap,
        iterations,
    })
}

/// `|‖T − λ₀A‖ − M_T(A)|`, the central cross-check. Expected
/// ≤ `10·opt_tol·max(1, value)` on converged inputs.
pub fn translation_radius_equality(pair: &OperatorPair, radius_result: &RadiusResult) -> Result<f64> {
    let translation = minimal_translation(pair)?;
    Ok((translation.min_norm - radius_result.value).abs())
}

/// Checks `‖T − c_T I‖² + |λ|² ≤ ‖T − c_T I + λI‖²` at seeded random λ
/// from the disk `|λ| ≤ 2‖T‖`, within `identity_tol·max(1, ‖T‖²)`.
/// The center of mass `c_T` is obtained as the minimal translation in the
/// direction `A = I`; the inequality characterizes it, so this must
/// always return true.
pub fn stampfli_inequality_check(t: &ComplexMatrix, trials: usize, seed: u64) -> Result<bool> {
    let tol = ToleranceSet::default();
    let pair = validate_pair(t.clone(), ComplexMatrix::identity(t.nrows()), tol)?;
    let translation = minimal_translation(&pair)?;
    let c_t = translation.lambda0;
    let tm = pair.t().as_dmatrix();
    let id = pair.a().as_dmatrix();
    let base = tm - id.map(|z| z * c_t);
    let base_sq = spectral_norm_dmatrix(&base)?.powi(2);
    let norm_t = spectral_norm_dmatrix(tm)?;
    let slack = tol.identity_tol * (norm_t * norm_t).max(1.0);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..trials {
        let radius = 2.0 * norm_t.max(0.5) * rng.random::<f64>().sqrt();
        let angle = rng.random::<f64>() * std::f64::consts::TAU;
        let lam = Complex64::from_polar(radius, angle);
        let shifted = &base + id.map(|z| z * lam);
        let rhs = spectral_norm_dmatrix(&shifted)?.powi(2);
        if base_sq + lam.norm_sqr() > rhs + slack {
            return Ok(false);
        }
    }
    Ok(true)
}
