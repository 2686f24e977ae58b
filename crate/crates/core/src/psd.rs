//! Optimization primitives over the density-matrix set (trace-one
//! positive-semidefinite Hermitian matrices).
//!
//! Used by the state-functional ascent, the Williams certificate, and the
//! subgradient step of the λ-plane norm minimization: the subdifferential
//! of `σ_max(T − λA)` at a top singular band `(U, V)` is exactly
//! `{tr(S·U*AV) : S density}`, so first-order certificates reduce to
//! minimizing `|tr(S·G)|` over densities.

use num_complex::Complex64;

use crate::error::Result;
use crate::linalg::{hermitian_eigensystem_dmatrix, CMat};

/// `tr(ρM) = Σ_{ij} ρ_ij M_ji` without forming the product.
pub(crate) fn trace_product(rho: &CMat, m: &CMat) -> Complex64 {
    let n = rho.nrows();
    let mut acc = Complex64::new(0.0, 0.0);
    for i in 0..n {
        for j in 0..n {
            acc += rho[(i, j)] * m[(j, i)];
        }
    }
    acc
}

/// Frobenius projection onto the density set: eigenvalues onto the
/// probability simplex, eigenbasis unchanged.
pub(crate) fn project_density(x: &CMat) -> Result<CMat> {
    let eig = hermitian_eigensystem_dmatrix(x)?;
    let n = eig.eigenvalues.len();
    let mut sorted = eig.eigenvalues.clone();
    sorted.sort_by(|a, b| b.partial_cmp(a).unwrap());
    let mut cumulative = 0.0;
    let mut theta = 0.0;
    for (k, v) in sorted.iter().enumerate() {
        cumulative += v;
        let candidate = (cumulative - 1.0) / (k + 1) as f64;
        if v - candidate > 0.0 {
            theta = candidate;
        }
    }
    let mut out = CMat::zeros(n, n);
    for k in 0..n {
        let w = (eig.eigenvalues[k] - theta).max(0.0);
        if w > 0.0 {
            let v = eig.eigenvector(k);
            out += CMat::from_fn(n, n, |i, j| v[i] * v[j].conj() * Complex64::from(w));
        }
    }
    Ok(out)
}

/// Minimizes `|tr(S·G)|` over k×k densities `S`.
///
/// The reachable values `tr(S·G)` sweep the numerical range `W(G)`
/// (convex), so the minimum is the distance of the origin to `W(G)`.
/// Strategy: support-line eigenvector candidates, two-point chord
/// projections, exact barycentric triangles when the origin lies inside,
/// then a projected-descent polish. Stops early at `target`.
pub(crate) fn min_trace_state(g: &CMat, target: f64) -> Result<(CMat, Complex64)> {
    let k = g.nrows();
    if k == 1 {
        return Ok((CMat::identity(1, 1), g[(0, 0)]));
    }

    let mut candidates: Vec<(CMat, Complex64)> = Vec::new();
    let mut push = |v: nalgebra::DVector<Complex64>| {
        let norm = v.norm();
        if norm > 1e-14 {
            let u = v.map(|z| z / Complex64::from(norm));
            let z = (u.adjoint() * g * &u)[(0, 0)];
            let outer = CMat::from_fn(k, k, |i, j| u[i] * u[j].conj());
            candidates.push((outer, z));
        }
    };
    let theta_count = 128;
    for i in 0..theta_count {
        let theta = i as f64 * std::f64::consts::TAU / theta_count as f64;
        let rot = Complex64::from_polar(1.0, -theta);
        let rotated = g.map(|z| z * rot);
        let herm = (&rotated + rotated.adjoint()).map(|z| z * Complex64::from(0.5));
        push(hermitian_eigensystem_dmatrix(&herm)?.eigenvector(0));
    }
    for i in 0..k {
        let mut e = nalgebra::DVector::<Complex64>::zeros(k);
        e[i] = Complex64::new(1.0, 0.0);
        push(e);
    }

    let mut best: (f64, CMat, Complex64) = candidates
        .iter()
        .map(|(s, z)| (z.norm(), s.clone(), *z))
        .min_by(|a, b| a.0.partial_cmp(&b.0).unwrap())
        .expect("candidates nonempty");
    if best.0 <= target {
        return Ok((best.1, best.2));
    }

    // Chords: project the origin on each candidate segment.
    for i in 0..candidates.len() {
        for j in (i + 1)..candidates.len() {
            let (si, zi) = &candidates[i];
            let (sj, zj) = &candidates[j];
            let d = zi - zj;
            if d.norm_sqr() < 1e-30 {
                continue;
            }
            let t = (-(zj.re * d.re + zj.im * d.im) / d.norm_sqr()).clamp(0.0, 1.0);
            let z = zj + d * Complex64::from(t);
            if z.norm() < best.0 {
                let s = si.map(|w| w * Complex64::from(t)) + sj.map(|w| w * Complex64::from(1.0 - t));
                best = (z.norm(), s, z);
            }
        }
    }
    if best.0 <= target {
        return Ok((best.1, best.2));
    }

    // Exact triangles: weights solving 0 = w₁z₁ + w₂z₂ + w₃z₃.
    let zs: Vec<Complex64> = candidates.iter().map(|(_, z)| *z).collect();
    'outer: for i in 0..zs.len() {
        for j in (i + 1)..zs.len() {
            for l in (j + 1)..zs.len() {
                if let Some((w1, w2, w3)) = barycentric_origin(zs[i], zs[j], zs[l]) {
                    let z = zs[i] * Complex64::from(w1)
                        + zs[j] * Complex64::from(w2)
                        + zs[l] * Complex64::from(w3);
                    if z.norm() < best.0 {
                        let s = candidates[i].0.map(|w| w * Complex64::from(w1))
                            + candidates[j].0.map(|w| w * Complex64::from(w2))
                            + candidates[l].0.map(|w| w * Complex64::from(w3));
                        best = (z.norm(), s, z);
                    }
                    if best.0 <= target {
                        break 'outer;
                    }
                }
            }
        }
    }
    if best.0 <= target {
        return Ok((best.1, best.2));
    }

    // Projected descent on |tr(SG)|², convex over the density set.
    let mut s = project_density(&best.1)?;
    let mut z = trace_product(&s, g);
    let mut step = 1.0;
    for _ in 0..2000 {
        if z.norm() <= target * 0.5 {
            break;
        }
        let grad = g.map(|w| w * z.conj()) + g.adjoint().map(|w| w * z);
        let mut accepted = false;
        while step > 1e-14 {
            let cand = project_density(&(&s - grad.map(|w| w * Complex64::from(step))))?;
            let cand_z = trace_product(&cand, g);
            if cand_z.norm() < z.norm() {
                s = cand;
                z = cand_z;
                step *= 2.0;
                accepted = true;
                break;
            }
            step *= 0.5;
        }
        if !accepted {
            break;
        }
    }
    if z.norm() < best.0 {
        best = (z.norm(), s, z);
    }
    Ok((best.1, best.2))
}

/// Barycentric weights of the origin inside the triangle `(p, q, r)`.
fn barycentric_origin(p: Complex64, q: Complex64, r: Complex64) -> Option<(f64, f64, f64)> {
    let d11 = q.re - p.re;
    let d12 = r.re - p.re;
    let d21 = q.im - p.im;
    let d22 = r.im - p.im;
    let det = d11 * d22 - d12 * d21;
    let scale = (p.norm() + q.norm() + r.norm()).max(1e-300);
    if det.abs() <= 1e-14 * scale * scale {
        return None;
    }
    let (bx, by) = (-p.re, -p.im);
    let w2 = (bx * d22 - d12 * by) / det;
    let w3 = (d11 * by - bx * d21) / det;
    let w1 = 1.0 - w2 - w3;
    let eps = 1e-12;
    if w1 >= eps && w2 >= eps && w3 >= eps {
        Some((w1, w2, w3))
    } else {
        None
    }
}
