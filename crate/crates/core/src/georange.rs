//! Geometry of the numerical range and its relatives.
//!
//! Provides the smallest enclosing circle of a finite point set (the radii
//! `R_T`, `w_T` and `m_T(A)` are all of this shape), the distance of the
//! origin to `W(A)` via a support-line scan, sampling of the generalized
//! range `W_T(A) = {(Tf,Af)/(Af,Af)}`, and the chain inequality
//! `M̃_T(A) ≥ M_T(A) ≥ m_T(A)·σ_min(A)`.

use num_complex::Complex64;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::deviation::deviation_at;
use crate::error::{OpError, Result};
use crate::exec;
use crate::linalg::{general_eigenvalues, hermitian_eigensystem_dmatrix, ComplexMatrix, UnitVector};
use crate::pair::OperatorPair;
use crate::radii;

/// Default θ resolution for the `W(A)` distance scan.
pub const DEFAULT_THETA_STEPS: usize = 512;

/// Default sample count for generalized-range clouds. High on purpose:
/// the sampled cloud is a lower bound for `m_T(A)` and the chain test
/// leans on it.
pub const DEFAULT_RANGE_SAMPLES: usize = 10_000;

const SHUFFLE_SEED: u64 = 0x57_45_4c_5a; // fixed: enclosing circles must be reproducible

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CloudSource {
    Spectrum,
    NumericalRange,
    GeneralizedRange,
}

/// Nonempty finite set of points in C.
#[derive(Debug, Clone)]
pub struct PointCloud {
    pub points: Vec<Complex64>,
    pub source: CloudSource,
}

impl PointCloud {
    pub fn new(points: Vec<Complex64>, source: CloudSource) -> Result<Self> {
        if points.is_empty() {
            return Err(OpError::InvalidVector);
        }
        if !points.iter().all(|z| z.re.is_finite() && z.im.is_finite()) {
            return Err(OpError::InvalidVector);
        }
        Ok(Self { points, source })
    }
}

/// A circle together with the ≤ 3 cloud indices that determine it.
#[derive(Debug, Clone)]
pub struct Circle {
    pub center: Complex64,
    pub radius: f64,
    pub support: Vec<usize>,
}

impl Circle {
    pub fn contains(&self, p: Complex64, slack: f64) -> bool {
        (p - self.center).norm() <= self.radius * (1.0 + 1e-14) + slack
    }
}

// Containment slack used inside the incremental construction; keeps the
// algorithm from cycling on points that sit on the boundary.
fn inc_contains(c: &Circle, p: Complex64) -> bool {
    c.contains(p, 1e-14)
}

fn diameter_circle(pts: &[Complex64], i: usize, j: usize) -> Circle {
    let center = (pts[i] + pts[j]) * 0.5;
    let radius = (pts[i] - center).norm().max((pts[j] - center).norm());
    Circle {
        center,
        radius,
        support: vec![i, j],
    }
}

fn cross(a: Complex64, b: Complex64) -> f64 {
    a.re * b.im - a.im * b.re
}

fn circumcircle(pts: &[Complex64], i: usize, j: usize, k: usize) -> Option<Circle> {
    // Translate to the local midpoint first; the raw formula loses digits
    // for far-away clusters.
    let ox = (pts[i].re.min(pts[j].re).min(pts[k].re) + pts[i].re.max(pts[j].re).max(pts[k].re)) / 2.0;
    let oy = (pts[i].im.min(pts[j].im).min(pts[k].im) + pts[i].im.max(pts[j].im).max(pts[k].im)) / 2.0;
    let (ax, ay) = (pts[i].re - ox, pts[i].im - oy);
    let (bx, by) = (pts[j].re - ox, pts[j].im - oy);
    let (cx, cy) = (pts[k].re - ox, pts[k].im - oy);
    let d = (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by)) * 2.0;
    if d == 0.0 {
        return None;
    }
    let asq = ax * ax + ay * ay;
    let bsq = bx * bx + by * by;
    let csq = cx * cx + cy * cy;
    let x = ox + (asq * (by - cy) + bsq * (cy - ay) + csq * (ay - by)) / d;
    let y = oy + (asq * (cx - bx) + bsq * (ax - cx) + csq * (bx - ax)) / d;
    let center = Complex64::new(x, y);
    let radius = (pts[i] - center)
        .norm()
        .max((pts[j] - center).norm())
        .max((pts[k] - center).norm());
    Some(Circle {
        center,
        radius,
        support: vec![i, j, k],
    })
}

fn circle_two_points(pts: &[Complex64], prefix: &[usize], i: usize, j: usize) -> Circle {
    let base = diameter_circle(pts, i, j);
    let mut left: Option<Circle> = None;
    let mut right: Option<Circle> = None;
    let pq = pts[j] - pts[i];
    for &k in prefix {
        if inc_contains(&base, pts[k]) {
            continue;
        }
        let side = cross(pq, pts[k] - pts[i]);
        let Some(c) = circumcircle(pts, i, j, k) else {
            continue;
        };
        let reach = cross(pq, c.center - pts[i]);
        if side > 0.0 && left.as_ref().map_or(true, |l| reach > cross(pq, l.center - pts[i])) {
            left = Some(c);
        } else if side < 0.0 && right.as_ref().map_or(true, |r| reach < cross(pq, r.center - pts[i])) {
            right = Some(c);
        }
    }
    match (left, right) {
        (None, None) => base,
        (Some(l), None) => l,
        (None, Some(r)) => r,
        (Some(l), Some(r)) => {
            if l.radius <= r.radius {
                l
            } else {
                r
            }
        }
    }
}

fn circle_one_point(pts: &[Complex64], prefix: &[usize], i: usize) -> Circle {
    let mut c = Circle {
        center: pts[i],
        radius: 0.0,
        support: vec![i],
    };
    for (pos, &j) in prefix.iter().enumerate() {
        if inc_contains(&c, pts[j]) {
            continue;
        }
        c = if c.radius == 0.0 {
            diameter_circle(pts, i, j)
        } else {
            circle_two_points(pts, &prefix[..=pos], i, j)
        };
    }
    c
}

/// Smallest enclosing circle of the cloud, expected O(n) randomized
/// incremental construction with a fixed shuffle seed.
pub fn enclosing_circle(cloud: &PointCloud) -> Circle {
    let pts = &cloud.points;
    let mut order: Vec<usize> = (0..pts.len()).collect();
    let mut rng = ChaCha8Rng::seed_from_u64(SHUFFLE_SEED);
    for i in (1..order.len()).rev() {
        let j = rand::Rng::random_range(&mut rng, 0..=i);
        order.swap(i, j);
    }
    let mut circle: Option<Circle> = None;
    for pos in 0..order.len() {
        let p = order[pos];
        let needs_rebuild = circle.as_ref().map_or(true, |c| !inc_contains(c, pts[p]));
        if needs_rebuild {
            circle = Some(circle_one_point(pts, &order[..pos], p));
        }
    }
    circle.expect("cloud is nonempty")
}

/// Result of the `W(A)` origin-distance scan.
#[derive(Debug, Clone, Copy)]
pub struct WrangeDistance {
    /// `max(signed, 0)`: the distance of 0 to `W(A)` when positive.
    pub distance: f64,
    /// Pre-clamp value `max_θ λ_min(Re(e^{iθ}A))`; negative means 0 lies
    /// inside the range, and by how much in the deepest direction.
    pub signed: f64,
    /// θ attaining the maximum.
    pub theta: f64,
}

fn support_min(a: &ComplexMatrix, theta: f64) -> Result<f64> {
    let rot = Complex64::from_polar(1.0, theta);
    let m = a.as_dmatrix().map(|z| z * rot);
    let herm = (&m + m.adjoint()).map(|z| z * Complex64::from(0.5));
    Ok(hermitian_eigensystem_dmatrix(&herm)?.min_eigenvalue())
}

/// Distance of the origin to the numerical range `W(A)`.
///
/// `W(A)` is convex and compact, so
/// `d = max_θ λ_min(Re(e^{iθ}A))` is positive exactly when `0 ∉ W(A)`,
/// and then equals the distance. The θ grid is refined locally by
/// golden-section search around the best grid point.
pub fn wrange_distance(a: &ComplexMatrix, theta_steps: usize) -> Result<WrangeDistance> {
    if !a.is_square() {
        return Err(OpError::DimensionMismatch(a.nrows(), a.ncols(), a.nrows(), a.nrows()));
    }
    let steps = theta_steps.max(4);
    let spacing = std::f64::consts::TAU / steps as f64;
    let values = exec::map_indices(steps, |i| support_min(a, i as f64 * spacing));
    let mut best_i = 0;
    let mut best = f64::NEG_INFINITY;
    for (i, v) in values.iter().enumerate() {
        let v = (*v).clone()?;
        if v > best {
            best = v;
            best_i = i;
        }
    }
    // Golden-section refinement on the bracketing cell.
    let mut lo = best_i as f64 * spacing - spacing;
    let mut hi = best_i as f64 * spacing + spacing;
    let inv_phi = 0.5 * (5.0_f64.sqrt() - 1.0);
    let mut x1 = hi - inv_phi * (hi - lo);
    let mut x2 = lo + inv_phi * (hi - lo);
    let mut f1 = support_min(a, x1)?;
    let mut f2 = support_min(a, x2)?;
    for _ in 0..60 {
        if f1 < f2 {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + inv_phi * (hi - lo);
            f2 = support_min(a, x2)?;
        } else {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - inv_phi * (hi - lo);
            f1 = support_min(a, x1)?;
        }
        if hi - lo < 1e-12 {
            break;
        }
    }
    let (theta, signed) = if f1 >= f2 { (x1, f1) } else { (x2, f2) };
    let (theta, signed) = if signed >= best {
        (theta, signed)
    } else {
        (best_i as f64 * spacing, best)
    };
    Ok(WrangeDistance {
        distance: signed.max(0.0),
        signed,
        theta: theta.rem_euclid(std::f64::consts::TAU),
    })
}

/// Samples `W_T(A)` at seeded random unit vectors plus all standard basis
/// vectors. The cloud is an inner approximation: every point is an exact
/// member of `W_T(A)`, so circles over it lower-bound `m_T(A)`.
pub fn sample_generalized_range(
    pair: &OperatorPair,
    samples: usize,
    seed: u64,
) -> Result<PointCloud> {
    pair.require_invertible_a()?;
    let n = pair.n();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<UnitVector> = (0..n).map(|k| UnitVector::standard_basis(n, k)).collect();
    starts.extend((0..samples).map(|_| random_unit(&mut rng, n)));
    let points = exec::map_slice(&starts, |f| deviation_at(pair, f).map(|rep| rep.lambda));
    let mut out = Vec::with_capacity(points.len());
    for p in points {
        out.push(p?);
    }
    PointCloud::new(out, CloudSource::GeneralizedRange)
}

/// Samples the numerical range `W(M) = {(Mf, f) : ‖f‖ = 1}`.
pub fn sample_numerical_range(m: &ComplexMatrix, samples: usize, seed: u64) -> Result<PointCloud> {
    if !m.is_square() {
        return Err(OpError::DimensionMismatch(m.nrows(), m.ncols(), m.nrows(), m.nrows()));
    }
    let n = m.nrows();
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut starts: Vec<UnitVector> = (0..n).map(|k| UnitVector::standard_basis(n, k)).collect();
    starts.extend((0..samples).map(|_| random_unit(&mut rng, n)));
    let points: Vec<Complex64> = exec::map_slice(&starts, |f| {
        let mf = m.mul_vec(f);
        crate::linalg::inner(&mf, f.as_dvector())
    });
    PointCloud::new(points, CloudSource::NumericalRange)
}

/// Haar-uniform random unit vector.
pub(crate) fn random_unit(rng: &mut ChaCha8Rng, n: usize) -> UnitVector {
    use rand_distr::{Distribution, StandardNormal};
    loop {
        let comps: Vec<Complex64> = (0..n)
            .map(|_| {
                let re: f64 = StandardNormal.sample(rng);
                let im: f64 = StandardNormal.sample(rng);
                Complex64::new(re, im)
            })
            .collect();
        if let Ok(u) = UnitVector::new(&comps) {
            return u;
        }
    }
}

/// Smallest circle containing the spectrum of `T` (the radius `R_T`).
pub fn spectrum_radius(t: &ComplexMatrix) -> Result<Circle> {
    if !t.is_square() {
        return Err(OpError::DimensionMismatch(t.nrows(), t.ncols(), t.nrows(), t.nrows()));
    }
    let eigenvalues = general_eigenvalues(t)?;
    let cloud = PointCloud::new(eigenvalues, CloudSource::Spectrum)?;
    Ok(enclosing_circle(&cloud))
}

/// The three members of the chain `M̃_T(A) ≥ M_T(A) ≥ m_T(A)·σ_min(A)`.
#[derive(Debug, Clone)]
pub struct ChainReport {
    /// `M̃_T(A)`, absent when `0 ∈ W(A)` makes the tilde radius undefined.
    pub tilde: Option<f64>,
    /// `M_T(A)`.
    pub standard: f64,
    /// Sampled `m_T(A)` (a certified lower bound of the true value).
    pub m_radius: f64,
    /// `m_T(A)·σ_min(A) = m_T(A)/‖A⁻¹‖`.
    pub m_scaled: f64,
    /// Whether each adjacent inequality holds within `10·opt_tol` slack.
    pub holds: bool,
}

/// Evaluates the chain inequality on one pair.
///
/// The sampled `m_T(A)` is only a lower bound of the true circle radius,
/// which makes the middle link weaker, never wrong; the radius maximizer's
/// coefficient is always added to the cloud.
pub fn chain_check(pair: &OperatorPair, samples: usize, seed: u64) -> Result<ChainReport> {
    pair.require_invertible_a()?;
    let standard = radii::radius(pair, radii::DEFAULT_STARTS, seed ^ 0x5354_4400)?;
    let tilde = if pair.zero_outside_wrange_a() {
        Some(radii::radius_tilde(pair, radii::DEFAULT_STARTS, seed ^ 0x5449_4c00)?.value)
    } else {
        None
    };
    let mut cloud = sample_generalized_range(pair, samples, seed)?;
    cloud.points.push(standard.report.lambda);
    let circle = enclosing_circle(&cloud);
    let m_scaled = circle.radius * pair.sigma_min_a();
    let scale = standard.value.max(1.0);
    let slack = 10.0 * pair.tol().opt_tol * scale;
    let lower_ok = standard.value >= m_scaled - slack;
    let upper_ok = tilde.map_or(true, |t| t >= standard.value - slack);
    Ok(ChainReport {
        tilde,
        standard: standard.value,
        m_radius: circle.radius,
        m_scaled,
        holds: lower_ok && upper_ok,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn cloud(points: &[Complex64]) -> PointCloud {
        PointCloud::new(points.to_vec(), CloudSource::Spectrum).unwrap()
    }

    #[test]
    fn single_point_circle() {
        let circ = enclosing_circle(&cloud(&[c(2.0, -1.0)]));
        assert_eq!(circ.center, c(2.0, -1.0));
        assert_eq!(circ.radius, 0.0);
        assert_eq!(circ.support, vec![0]);
    }

    #[test]
    fn fourth_roots_of_unity_circle() {
        let circ = enclosing_circle(&cloud(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)]));
        assert!(circ.center.norm() < 1e-12);
        assert_relative_eq!(circ.radius, 1.0, max_relative = 1e-12);
    }

    #[test]
    fn two_point_diameter_circle() {
        let circ = enclosing_circle(&cloud(&[c(0.0, 0.0), c(2.0, 0.0)]));
        assert_relative_eq!(circ.center.re, 1.0, max_relative = 1e-12);
        assert!(circ.center.im.abs() < 1e-14);
        assert_relative_eq!(circ.radius, 1.0, max_relative = 1e-12);
        assert_eq!(circ.support.len(), 2);
    }

    #[test]
    fn circle_invariants_on_random_clouds() {
        use rand::Rng;
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        for trial in 0..40 {
            let n = 1 + (trial % 30);
            let pts: Vec<Complex64> = (0..n)
                .map(|_| c(rng.random::<f64>() * 4.0 - 2.0, rng.random::<f64>() * 4.0 - 2.0))
                .collect();
            let cl = cloud(&pts);
            let circ = enclosing_circle(&cl);
            assert!(circ.support.len() <= 3);
            for p in &cl.points {
                assert!(circ.contains(*p, 1e-9));
            }
            for &s in &circ.support {
                let gap = (circ.radius - (cl.points[s] - circ.center).norm()).abs();
                assert!(gap <= 1e-9 * (1.0 + circ.radius), "support off boundary by {gap}");
            }
        }
    }

    #[test]
    fn wrange_distance_identity() {
        let w = wrange_distance(&ComplexMatrix::identity(2), 128).unwrap();
        assert_relative_eq!(w.distance, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn wrange_distance_sign_diagonal_is_zero() {
        // W(diag(1,−1)) = [−1,1] contains 0.
        let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0)]).unwrap();
        let w = wrange_distance(&a, 128).unwrap();
        assert_eq!(w.distance, 0.0);
        assert!(w.signed <= 1e-12);
    }

    #[test]
    fn wrange_distance_shifted_diagonal() {
        // W(diag(1,2)) = [1,2]; distance 1.
        let a = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(2.0, 0.0)]).unwrap();
        let w = wrange_distance(&a, 128).unwrap();
        assert_relative_eq!(w.distance, 1.0, epsilon = 1e-9);
    }

    #[test]
    fn spectrum_radius_cases() {
        let four = ComplexMatrix::from_diagonal(&[c(1.0, 0.0), c(-1.0, 0.0), c(0.0, 1.0), c(0.0, -1.0)])
            .unwrap();
        let circ = spectrum_radius(&four).unwrap();
        assert!(circ.center.norm() < 1e-10);
        assert_relative_eq!(circ.radius, 1.0, max_relative = 1e-10);

        let circ = spectrum_radius(&ComplexMatrix::identity(3)).unwrap();
        assert_relative_eq!(circ.center.re, 1.0, max_relative = 1e-12);
        assert!(circ.radius < 1e-12);

        let jordan = ComplexMatrix::from_rows(&[
            vec![c(0.0, 0.0), c(1.0, 0.0)],
            vec![c(0.0, 0.0), c(0.0, 0.0)],
        ])
        .unwrap();
        let circ = spectrum_radius(&jordan).unwrap();
        assert!(circ.center.norm() < 1e-10 && circ.radius < 1e-10);
    }
}
