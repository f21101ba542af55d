//! Numerical witnesses for the geometry of Cauchy divergences.
//!
//! - metrization: triangle scans for `D^α` and an explicit counterexample
//!   search along the imaginary axis for `α > 1/2`;
//! - embeddability: conditional negative definiteness of KL and positive
//!   semidefiniteness of Bhattacharyya-coefficient kernels;
//! - a Gromov four-point probe showing the defect grows without bound;
//! - the Fisher-Rao to Bhattacharyya transform;
//! - the Chernoff exponent located numerically (it sits at `a = 1/2`);
//! - the Chebyshev centre `argmin_c max_i chi(p_i, c)`;
//! - polynomial regression of quadrature data against powers of `chi`.

use std::f64::consts::{PI, SQRT_2};

use nalgebra::{DMatrix, DVector, SymmetricEigen};
use rayon::prelude::*;

use crate::cauchy_core::{chi, density, lambda_from_chi, mobius_apply, reduce_to_standard_pair, CauchyParam};
use crate::closed_form::{bc_skewed_angular, divergence, h_of_chi, DivergenceKind};
use crate::error::{domain, Error, Result};
use crate::oracle::{quad_f_divergence, quad_skewed_bc, DensitySpec, GeneratorSpec};
use crate::quadrature::{integrate_line, QuadOptions};
use crate::sampling::{log_uniform, rng, uniform};
use crate::special_fn::agm;

/// `D^α` for a base divergence, `α ∈ (0, 1]`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MetricSpec {
    base: DivergenceKind,
    alpha: f64,
}

impl MetricSpec {
    /// Accepts KL, Bhattacharyya, LeCam, HellingerSq, JS and TV bases.
    pub fn new(base: DivergenceKind, alpha: f64) -> Result<Self> {
        use DivergenceKind::*;
        if !matches!(base, KL | Bhattacharyya | LeCam | HellingerSq | JS | TV) {
            return Err(Error::Unsupported(format!("'{base}' is not a metric-spec base")));
        }
        if !(alpha > 0.0 && alpha <= 1.0) {
            return Err(domain(format!("metric exponent must lie in (0, 1], got {alpha}")));
        }
        Ok(Self { base, alpha })
    }

    /// Base divergence.
    pub fn base(&self) -> DivergenceKind {
        self.base
    }

    /// Exponent `α`.
    pub fn alpha(&self) -> f64 {
        self.alpha
    }

    /// `D(p, q)^α`.
    pub fn distance(&self, p: &CauchyParam, q: &CauchyParam) -> f64 {
        divergence(&self.base, p, q).expect("metric bases have closed forms").powf(self.alpha)
    }
}

/// A triple breaking the triangle inequality.
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleViolation {
    pub points: [CauchyParam; 3],
    /// `d(x, z) - d(x, y) - d(y, z)` for the worst arrangement.
    pub excess: f64,
}

/// Checks `d(x, z) ≤ d(x, y) + d(y, z) + 1e-12` on seeded triples
/// (locations uniform on `[-10, 10]`, scales log-uniform on `[e^-3, e^3]`),
/// for all three choices of the middle point.
pub fn triangle_scan(m: &MetricSpec, n_triples: usize, seed: u64) -> Vec<TriangleViolation> {
    let mut r = rng(seed);
    let (e3, em3) = (3f64.exp(), (-3f64).exp());
    let triples: Vec<[CauchyParam; 3]> = (0..n_triples)
        .map(|_| {
            let mut draw = || CauchyParam::new(uniform(&mut r, -10.0, 10.0), log_uniform(&mut r, em3, e3)).unwrap();
            [draw(), draw(), draw()]
        })
        .collect();
    triples
        .par_iter()
        .filter_map(|t| {
            let d01 = m.distance(&t[0], &t[1]);
            let d12 = m.distance(&t[1], &t[2]);
            let d02 = m.distance(&t[0], &t[2]);
            let excess = (d02 - d01 - d12).max(d01 - d02 - d12).max(d12 - d01 - d02);
            (excess > 1e-12).then_some(TriangleViolation { points: *t, excess })
        })
        .collect()
}

/// `t(u) = log((1 + cosh(√2 u))/2)`: KL between `i` and `e^{√2 u} i`
/// (`u` is their Fisher-Rao distance), computed as `log1p(sinh²(u/√2))`.
pub fn axis_kl(u: f64) -> f64 {
    (u / SQRT_2).sinh().powi(2).ln_1p()
}

/// Counterexample to the triangle inequality on the imaginary axis.
#[derive(Debug, Clone, PartialEq)]
pub struct AxisWitness {
    /// Fisher-Rao step `u`.
    pub u: f64,
    /// `(i, e^{√2u} i, e^{2√2u} i)`.
    pub points: [CauchyParam; 3],
    /// `d(p₀, p₂) - d(p₀, p₁) - d(p₁, p₂)`.
    pub excess: f64,
}

/// Scans `u` downward from 2 to `1e-4` (200 log-spaced steps) for
/// `d(i, e^{√2u}i) + d(e^{√2u}i, e^{2√2u}i) < d(i, e^{2√2u}i)`.
pub fn metric_violation_search(m: &MetricSpec) -> Option<AxisWitness> {
    let steps = 200;
    (0..=steps).find_map(|k| {
        let u = 2.0 * (1e-4f64 / 2.0).powf(k as f64 / steps as f64);
        let pts = [0.0, 1.0, 2.0].map(|j| CauchyParam::new(0.0, (j * SQRT_2 * u).exp()).unwrap());
        let excess = m.distance(&pts[0], &pts[2]) - m.distance(&pts[0], &pts[1]) - m.distance(&pts[1], &pts[2]);
        (excess > 0.0).then_some(AxisWitness { u, points: pts, excess })
    })
}

/// Largest `Σ c_i c_j KL(p_i : p_j)` over `trials` seeded centred weight
/// vectors (uniform on `[-1, 1]`, then mean-subtracted).
pub fn negative_definiteness_check(points: &[CauchyParam], trials: usize, seed: u64) -> Result<f64> {
    if points.len() < 2 {
        return Err(domain("negative-definiteness check needs at least 2 points"));
    }
    let n = points.len();
    let mut d = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in 0..n {
            d[(i, j)] = divergence(&DivergenceKind::KL, &points[i], &points[j])?;
        }
    }
    let mut r = rng(seed);
    let mut worst = f64::NEG_INFINITY;
    for _ in 0..trials {
        let mut c = DVector::from_fn(n, |_, _| uniform(&mut r, -1.0, 1.0));
        let mean = c.mean();
        c.add_scalar_mut(-mean);
        worst = worst.max(c.dot(&(&d * &c)));
    }
    Ok(worst)
}

/// Smallest eigenvalue of the Gram matrix `[∫ p_i^s p_j^{1-s}]`.
pub fn bc_kernel_psd_check(points: &[CauchyParam], s_exp: f64) -> Result<f64> {
    if points.is_empty() {
        return Err(domain("kernel check needs at least one point"));
    }
    let n = points.len();
    let mut g = DMatrix::zeros(n, n);
    for i in 0..n {
        g[(i, i)] = 1.0;
        for j in 0..i {
            let v = bc_skewed_angular(s_exp, &points[i], &points[j])?;
            g[(i, j)] = v;
            g[(j, i)] = v;
        }
    }
    Ok(SymmetricEigen::new(g).eigenvalues.min())
}

/// Base divergence of the Gromov probe.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum GromovKind {
    KL,
    Bhattacharyya,
}

/// Four-point defect `S₁ - max(S₂, S₃)` of `√D` at `(i, ni, n²i, n³i)`,
/// with `S₁ = d₀₂ + d₁₃`, `S₂ = d₀₁ + d₂₃`, `S₃ = d₀₃ + d₁₂`.
///
/// Gromov hyperbolicity would bound this by `2δ` uniformly in `n`.
pub fn gromov_four_point_probe(kind: GromovKind, n: f64) -> Result<f64> {
    if !(n >= 1.0 && n.is_finite()) {
        return Err(domain(format!("Gromov probe needs n >= 1, got {n}")));
    }
    let base = match kind {
        GromovKind::KL => DivergenceKind::KL,
        GromovKind::Bhattacharyya => DivergenceKind::Bhattacharyya,
    };
    let pts: Vec<CauchyParam> = (0..4).map(|k| CauchyParam::new(0.0, n.powi(k)).unwrap()).collect();
    let d = |a: usize, b: usize| -> Result<f64> { Ok(divergence(&base, &pts[a], &pts[b])?.sqrt()) };
    let s1 = d(0, 2)? + d(1, 3)?;
    let s2 = d(0, 1)? + d(2, 3)?;
    let s3 = d(0, 3)? + d(1, 2)?;
    Ok(s1 - s2.max(s3))
}

/// `t(s)`: the Bhattacharyya distance between two Cauchy densities at
/// Fisher-Rao distance `s`, and the ratio `√t(s)/s`.
///
/// `t(s) = -log(2 e^{-s/√2} K(1 - e^{-2√2 s})/π)`; evaluated through `chi =
/// 2 sinh²(s/√2)` and the offset AGM. At `s = 0` the ratio is its limit
/// `1/(2√2)`.
pub fn fr_to_bhat_transform(s: f64) -> Result<(f64, f64)> {
    if !(s >= 0.0 && s.is_finite()) {
        return Err(domain(format!("Fisher-Rao distance must be finite and >= 0, got {s}")));
    }
    if s == 0.0 {
        return Ok((0.0, 0.5 / SQRT_2));
    }
    let t = if s <= 20.0 {
        let u = 2.0 * (s / SQRT_2).sinh().powi(2);
        h_of_chi(&DivergenceKind::Bhattacharyya, u)?
    } else {
        // Far out chi overflows; use t = s/√2 + log AGM(1, e^{-√2 s}) and,
        // once the second argument underflows, AGM(1, b) ≈ π/(2 log(4/b)).
        let b = (-SQRT_2 * s).exp();
        let log_agm = if b < 1e-20 { (0.5 * PI).ln() - (4f64.ln() + SQRT_2 * s).ln() } else { agm(1.0, b)?.ln() };
        s / SQRT_2 + log_agm
    };
    Ok((t, t.sqrt() / s))
}

/// `(log ∫ p^a q^{1-a}, ∫ p^a q^{1-a} log(p/q))` by line quadrature.
fn chernoff_parts(p: &CauchyParam, q: &CauchyParam, a: f64, want_slope: bool) -> Result<(f64, f64)> {
    let opts = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-12, max_panels: 10_000 };
    let breaks = [p.location() - p.scale(), p.location(), p.location() + p.scale(), q.location() - q.scale(), q.location(), q.location() + q.scale()];
    let ratio = |x: f64| density(q, x) / density(p, x);
    let mass = integrate_line(|x| density(p, x) * ratio(x).powf(1.0 - a), p.location(), p.scale(), &breaks, opts)?;
    let slope = if want_slope {
        integrate_line(
            |x| {
                let r = ratio(x);
                -density(p, x) * r.powf(1.0 - a) * r.ln()
            },
            p.location(),
            p.scale(),
            &breaks,
            QuadOptions { abs_tol: 1e-13, ..opts },
        )?
        .value
    } else {
        0.0
    };
    Ok((mass.value.ln(), slope))
}

/// Minimizer `a*` of `Λ(a) = log ∫ p^a q^{1-a}` and the Chernoff information `-Λ(a*)`.
///
/// Golden-section search on the numerically integrated `Λ` narrows the
/// bracket to width `1e-3`; the root of `Λ'(a) ∝ ∫ p^a q^{1-a} log(p/q)` is
/// then bisected to `1e-10` (when the slope changes sign across the bracket).
/// Identical inputs return `(1/2, 0)`.
pub fn chernoff_optimizer(p: &CauchyParam, q: &CauchyParam) -> Result<(f64, f64)> {
    if p == q {
        return Ok((0.5, 0.0));
    }
    let lam = |a: f64| chernoff_parts(p, q, a, false).map(|v| v.0);
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let (mut lo, mut hi) = (1e-6, 1.0 - 1e-6);
    let mut x1 = hi - g * (hi - lo);
    let mut x2 = lo + g * (hi - lo);
    let (mut f1, mut f2) = (lam(x1)?, lam(x2)?);
    while hi - lo > 1e-3 {
        if f1 < f2 {
            hi = x2;
            x2 = x1;
            f2 = f1;
            x1 = hi - g * (hi - lo);
            f1 = lam(x1)?;
        } else {
            lo = x1;
            x1 = x2;
            f1 = f2;
            x2 = lo + g * (hi - lo);
            f2 = lam(x2)?;
        }
    }
    let slope = |a: f64| chernoff_parts(p, q, a, true).map(|v| v.1);
    let (mut a, mut b) = (lo, hi);
    let (sa, sb) = (slope(a)?, slope(b)?);
    let a_star = if sa < 0.0 && sb > 0.0 {
        for _ in 0..60 {
            let m = 0.5 * (a + b);
            if slope(m)? < 0.0 {
                a = m;
            } else {
                b = m;
            }
            if b - a < 1e-10 {
                break;
            }
        }
        0.5 * (a + b)
    } else {
        // Slope too flat to resolve in sign: keep the golden-section bracket.
        0.5 * (lo + hi)
    };
    Ok((a_star, -lam(a_star)?))
}

/// Smallest hyperbolic ball through the given boundary points, as
/// `(centre, chi-radius)`.
fn ball_two(p: &CauchyParam, q: &CauchyParam) -> (CauchyParam, f64) {
    let (lambda, map) = reduce_to_standard_pair(p, q);
    let mid = CauchyParam::new(0.0, lambda.sqrt()).unwrap();
    let c = mobius_apply(&map.inverse(), &mid);
    (c, chi(&c, p).max(chi(&c, q)))
}

fn ball_three(a: &CauchyParam, b: &CauchyParam, c: &CauchyParam) -> Option<(CauchyParam, f64)> {
    // Euclidean circumcircle; a hyperbolic circle when it stays in ℍ.
    let (ax, ay, bx, by, cx, cy) = (a.location(), a.scale(), b.location(), b.scale(), c.location(), c.scale());
    let d = 2.0 * (ax * (by - cy) + bx * (cy - ay) + cx * (ay - by));
    if d == 0.0 {
        return None;
    }
    let (a2, b2, c2) = (ax * ax + ay * ay, bx * bx + by * by, cx * cx + cy * cy);
    let ux = (a2 * (by - cy) + b2 * (cy - ay) + c2 * (ay - by)) / d;
    let uy = (a2 * (cx - bx) + b2 * (ax - cx) + c2 * (bx - ax)) / d;
    let r2 = (ax - ux).powi(2) + (ay - uy).powi(2);
    if !(uy > 0.0 && uy * uy > r2) {
        return None;
    }
    let centre = CauchyParam::new(ux, (uy * uy - r2).sqrt()).ok()?;
    let radius = chi(&centre, a).max(chi(&centre, b)).max(chi(&centre, c));
    Some((centre, radius))
}

fn covers(ball: &(CauchyParam, f64), p: &CauchyParam) -> bool {
    chi(&ball.0, p) <= ball.1 * (1.0 + 1e-12) + 1e-300
}

/// Chebyshev centre `argmin_c max_i chi(p_i, c)`.
///
/// Hyperbolic balls in the half-plane are Euclidean discs, so the minimum
/// enclosing ball is found exactly by Welzl's incremental algorithm with
/// two-point balls centred at hyperbolic midpoints and three-point balls from
/// circumcircles. Because every `h_f` is increasing, the centre is the same
/// for every divergence.
pub fn chebyshev_center(points: &[CauchyParam]) -> Result<CauchyParam> {
    let Some(first) = points.first() else {
        return Err(domain("Chebyshev centre needs at least one point"));
    };
    let mut ball = (*first, 0.0);
    for i in 1..points.len() {
        if covers(&ball, &points[i]) {
            continue;
        }
        ball = (points[i], 0.0);
        for j in 0..i {
            if covers(&ball, &points[j]) {
                continue;
            }
            ball = ball_two(&points[i], &points[j]);
            for k in 0..j {
                if covers(&ball, &points[k]) {
                    continue;
                }
                let (pi, pj, pk) = (&points[i], &points[j], &points[k]);
                ball = match ball_three(pi, pj, pk) {
                    Some(b) => b,
                    None => {
                        // Degenerate: keep the smallest pairwise ball covering all three.
                        let cands = [ball_two(pi, pj), ball_two(pi, pk), ball_two(pj, pk)];
                        cands
                            .into_iter()
                            .filter(|b| covers(b, pi) && covers(b, pj) && covers(b, pk))
                            .min_by(|x, y| x.1.total_cmp(&y.1))
                            .unwrap_or_else(|| ball_two(pi, pk))
                    }
                };
            }
        }
    }
    Ok(ball.0)
}

/// `max_i h_f(chi(p_i, c))`: the Chebyshev objective under a divergence.
pub fn chebyshev_radius(center: &CauchyParam, points: &[CauchyParam], kind: &DivergenceKind) -> Result<f64> {
    points.iter().try_fold(0.0_f64, |acc, p| Ok(acc.max(divergence(kind, p, center)?)))
}

/// Least-squares polynomial fit `y ≈ Σ_k c_k x^{powers[k]}` with relative
/// row weights (`1/|y|`, or 1 where `y = 0`) and column equilibration,
/// solved through the SVD pseudo-inverse.
///
/// Errors with a conditioning error when the scaled design is numerically
/// rank deficient.
pub fn weighted_polyfit(xs: &[f64], ys: &[f64], powers: &[u32], relative: bool) -> Result<Vec<f64>> {
    if xs.len() != ys.len() || xs.len() < powers.len() {
        return Err(domain("polynomial fit needs at least as many samples as coefficients"));
    }
    let (n, m) = (xs.len(), powers.len());
    let weight = |y: f64| if relative && y != 0.0 { 1.0 / y.abs() } else { 1.0 };
    let mut a = DMatrix::from_fn(n, m, |i, j| xs[i].powi(powers[j] as i32) * weight(ys[i]));
    let b = DVector::from_fn(n, |i, _| ys[i] * weight(ys[i]));
    let scales: Vec<f64> = (0..m).map(|j| a.column(j).norm()).collect();
    for (j, s) in scales.iter().enumerate() {
        if *s == 0.0 {
            return Err(Error::Conditioning(format!("column {j} of the design matrix is zero")));
        }
        a.column_mut(j).scale_mut(1.0 / s);
    }
    let svd = a.svd(true, true);
    let sv = &svd.singular_values;
    let (smax, smin) = (sv.max(), sv.min());
    if !(smin > 1e-13 * smax) {
        return Err(Error::Conditioning(format!(
            "design matrix is rank deficient (singular values {smax:e} .. {smin:e}); sample chi over a wider range"
        )));
    }
    let sol = svd.solve(&b, 1e-13 * smax).map_err(|e| Error::Conditioning(e.to_string()))?;
    Ok((0..m).map(|j| sol[j] / scales[j]).collect())
}

/// Target integral for [`fit_h_polynomial`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FitTarget {
    /// `J_d(chi) = ∫ p^d q^{1-d}`.
    J(u32),
    /// Power chi divergence `D_{chi,k}`.
    ChiK(u32),
}

/// Recovers the polynomial `h(chi)` of an integral from quadrature samples.
///
/// `chi` is drawn log-uniformly on `[1e-2, 10]`; each sample integrates the
/// target between `(0, 1)` and `(0, λ(chi))`. Returns coefficients of
/// `chi^0 … chi^degree`.
pub fn fit_h_polynomial(target: FitTarget, degree: u32, n_samples: usize, seed: u64) -> Result<Vec<f64>> {
    if n_samples < degree as usize + 1 {
        return Err(domain(format!("need at least {} samples for degree {degree}", degree + 1)));
    }
    let mut r = rng(seed);
    let chis: Vec<f64> = (0..n_samples).map(|_| log_uniform(&mut r, 1e-2, 10.0)).collect();
    let p = DensitySpec::Cauchy(CauchyParam::standard());
    let values: Vec<f64> = chis
        .par_iter()
        .map(|&u| {
            let q = DensitySpec::Cauchy(CauchyParam::new(0.0, lambda_from_chi(u))?);
            match target {
                FitTarget::J(d) => quad_skewed_bc(d as f64, &p, &q, 1e-15),
                FitTarget::ChiK(k) => quad_f_divergence(&GeneratorSpec::power_chi(k), &p, &q, 1e-15),
            }
        })
        .collect::<Result<_>>()?;
    let powers: Vec<u32> = (0..=degree).collect();
    weighted_polyfit(&chis, &values, &powers, true)
}

/// `{w : chi(z, w) ≤ δ}` is the Euclidean disc with centre
/// `(Re z, (1 + δ) Im z)` and radius `√(δ(δ + 2)) Im z`.
pub fn chi_ball_disc(z: &CauchyParam, delta: f64) -> ((f64, f64), f64) {
    let s = z.scale();
    ((z.location(), (1.0 + delta) * s), (delta * (delta + 2.0)).sqrt() * s)
}

/// Largest `|chi(z, w) - δ|` over `samples` points `w` on the boundary of
/// [`chi_ball_disc`].
pub fn chi_ball_residual(z: &CauchyParam, delta: f64, samples: usize) -> f64 {
    let ((cx, cy), r) = chi_ball_disc(z, delta);
    (0..samples)
        .map(|k| {
            let t = 2.0 * PI * k as f64 / samples as f64;
            let w = CauchyParam::new(cx + r * t.cos(), cy + r * t.sin()).unwrap();
            (chi(z, &w) - delta).abs()
        })
        .fold(0.0, f64::max)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cp(l: f64, s: f64) -> CauchyParam {
        CauchyParam::new(l, s).unwrap()
    }

    #[test]
    fn gromov_degenerate() {
        assert_eq!(gromov_four_point_probe(GromovKind::KL, 1.0).unwrap(), 0.0);
    }

    #[test]
    fn two_point_centre_is_equidistant() {
        let (a, b) = (cp(-1.0, 0.5), cp(3.0, 2.0));
        let c = chebyshev_center(&[a, b]).unwrap();
        assert!((chi(&c, &a) - chi(&c, &b)).abs() < 1e-12);
        assert_eq!(chebyshev_center(&[a]).unwrap(), a);
    }

    #[test]
    fn axis_kl_matches_closed_form() {
        let u = 0.7;
        let kl = divergence(&DivergenceKind::KL, &cp(0.0, 1.0), &cp(0.0, (SQRT_2 * u).exp())).unwrap();
        assert!((axis_kl(u) - kl).abs() < 1e-14);
    }

    #[test]
    fn fr_to_bhat_at_zero() {
        assert_eq!(fr_to_bhat_transform(0.0).unwrap().0, 0.0);
    }

    #[test]
    fn polyfit_exact() {
        let xs: Vec<f64> = (1..20).map(|k| k as f64 * 0.3).collect();
        let ys: Vec<f64> = xs.iter().map(|x| 1.0 + 2.0 * x - 0.5 * x * x).collect();
        let c = weighted_polyfit(&xs, &ys, &[0, 1, 2], true).unwrap();
        for (got, want) in c.iter().zip([1.0, 2.0, -0.5]) {
            assert!((got - want).abs() < 1e-10);
        }
        assert!(weighted_polyfit(&[1.0, 1.0, 1.0], &[1.0, 2.0, 3.0], &[0, 1], false).is_err());
    }

    #[test]
    fn disc_boundary_has_constant_chi() {
        assert!(chi_ball_residual(&cp(0.3, 2.0), 0.7, 64) < 1e-13);
    }
}
