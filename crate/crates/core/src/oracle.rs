//! Ground-truth divergence integrals by quadrature and Monte Carlo.
//!
//! Nothing here uses the closed forms: densities are evaluated pointwise and
//! integrated directly, so every closed form and series can be validated
//! against this module. It is also the only path for the bivariate case and
//! for the Kumar-Chhina divergence.
//!
//! - Line supports use the tangent substitution of
//!   [`crate::quadrature::integrate_line`], centred on `p`, with initial
//!   breakpoints at every component's `l - s`, `l`, `l + s`.
//! - Log-Cauchy densities are integrated in `t = log y` (the measure
//!   `y p(y) dt`), which keeps both tails finite.
//! - Circle supports use the periodic trapezoid rule for smooth integrands
//!   and adaptive Gauss-Kronrod split at the density crossings for kinked
//!   generators such as total variation.
//! - Generators are integrated in the normalized form
//!   `f(u) - f'(1)(u - 1)`, which leaves the divergence unchanged and makes
//!   the integrand sign-definite for convex `f`.

use std::cell::Cell;
use std::f64::consts::{FRAC_PI_2, PI};
use std::fmt;
use std::sync::Arc;

use rand::Rng;
use rayon::prelude::*;

use crate::cauchy_core::{density, CauchyParam};
use crate::closed_form::{tv_crossings, DivergenceKind, MixtureTwo};
use crate::error::{domain, Error, Result};
use crate::families::{theta_from_disk, CircularParam, LogCauchyParam, WrappedParam};
use crate::quadrature::{integrate, integrate_line, integrate_periodic, integrate_unchecked, QuadEstimate, QuadOptions};
use crate::sampling::{rng_stream, sample_cauchy};

/// Support of a density.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Support {
    /// The real line.
    Line,
    /// `(0, ∞)`, integrated in `log y`.
    HalfLine,
    /// `[-π, π)`.
    Circle,
    /// `ℝ²`.
    Plane,
}

/// Bivariate Cauchy density `(1/2π) det(Σ)^{-1/2} (1 + (x-μ)ᵀΣ⁻¹(x-μ))^{-3/2}`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BivariateCauchy {
    mu: [f64; 2],
    /// Upper triangle `(σ11, σ12, σ22)`.
    sigma: [f64; 3],
}

impl BivariateCauchy {
    /// Validates that `Σ = [[s11, s12], [s12, s22]]` is symmetric positive definite.
    pub fn new(mu: [f64; 2], s11: f64, s12: f64, s22: f64) -> Result<Self> {
        let all = [mu[0], mu[1], s11, s12, s22];
        if all.iter().any(|v| !v.is_finite()) {
            return Err(domain("bivariate parameters must be finite"));
        }
        if !(s11 > 0.0 && s11 * s22 - s12 * s12 > 0.0) {
            return Err(domain(format!("scale matrix [[{s11}, {s12}], [{s12}, {s22}]] is not positive definite")));
        }
        Ok(Self { mu, sigma: [s11, s12, s22] })
    }

    /// Location vector.
    pub fn mu(&self) -> [f64; 2] {
        self.mu
    }

    /// Scale matrix upper triangle `(σ11, σ12, σ22)`.
    pub fn sigma(&self) -> [f64; 3] {
        self.sigma
    }

    fn det(&self) -> f64 {
        self.sigma[0] * self.sigma[2] - self.sigma[1] * self.sigma[1]
    }

    /// `(x - μ)ᵀ Σ⁻¹ (x - μ)`.
    fn form(&self, x: f64, y: f64) -> f64 {
        let (dx, dy) = (x - self.mu[0], y - self.mu[1]);
        let [a, b, c] = self.sigma;
        (c * dx * dx - 2.0 * b * dx * dy + a * dy * dy) / self.det()
    }

    /// Density at `(x, y)`.
    pub fn pdf(&self, x: f64, y: f64) -> f64 {
        (1.0 + self.form(x, y)).powf(-1.5) / (2.0 * PI * self.det().sqrt())
    }

    fn log_pdf(&self, x: f64, y: f64) -> f64 {
        -(2.0 * PI).ln() - 0.5 * self.det().ln() - 1.5 * self.form(x, y).ln_1p()
    }
}

/// A density together with its support.
#[derive(Debug, Clone, PartialEq)]
pub enum DensitySpec {
    Cauchy(CauchyParam),
    Mixture(MixtureTwo),
    LogCauchy(LogCauchyParam),
    Circular(CircularParam),
    Wrapped(WrappedParam),
    Bivariate(BivariateCauchy),
}

impl DensitySpec {
    /// Support of the density.
    pub fn support(&self) -> Support {
        match self {
            DensitySpec::Cauchy(_) | DensitySpec::Mixture(_) => Support::Line,
            DensitySpec::LogCauchy(_) => Support::HalfLine,
            DensitySpec::Circular(_) | DensitySpec::Wrapped(_) => Support::Circle,
            DensitySpec::Bivariate(_) => Support::Plane,
        }
    }

    /// Univariate density at `x` (in `y` itself for log-Cauchy).
    pub fn pdf(&self, x: f64) -> Result<f64> {
        Ok(match self {
            DensitySpec::Cauchy(p) => density(p, x),
            DensitySpec::Mixture(m) => m.pdf(x),
            DensitySpec::LogCauchy(lc) => lc.pdf(x),
            DensitySpec::Circular(c) => c.pdf(x),
            DensitySpec::Wrapped(w) => w.pdf(x),
            DensitySpec::Bivariate(_) => return Err(Error::Contract("bivariate density needs two coordinates".into())),
        })
    }

    /// Density with respect to the integration variable of the support
    /// (`t = log y` on the half-line).
    fn native_pdf(&self, t: f64) -> f64 {
        match self {
            DensitySpec::LogCauchy(lc) => lc.pdf_log_measure(t),
            DensitySpec::Bivariate(_) => f64::NAN,
            other => other.pdf(t).unwrap_or(f64::NAN),
        }
    }

    /// `(centre, width)` of each component in the integration variable.
    fn components(&self) -> Vec<(f64, f64)> {
        match self {
            DensitySpec::Cauchy(p) => vec![(p.location(), p.scale())],
            DensitySpec::Mixture(m) => m.components().iter().map(|c| (c.location(), c.scale())).collect(),
            DensitySpec::LogCauchy(lc) => vec![(lc.mu(), lc.sigma())],
            DensitySpec::Circular(c) => vec![(c.w().arg(), 1.0 - c.w().norm())],
            DensitySpec::Wrapped(w) => vec![(w.mu(), w.gamma())],
            DensitySpec::Bivariate(_) => Vec::new(),
        }
    }

    /// One draw in the integration variable (`log y` for log-Cauchy).
    fn sample_native<R: Rng>(&self, rng: &mut R) -> Result<f64> {
        Ok(match self {
            DensitySpec::Cauchy(p) => sample_cauchy(rng, p),
            DensitySpec::Mixture(m) => {
                let pick = if rng.random::<f64>() < m.weight() { 1 } else { 0 };
                sample_cauchy(rng, &m.components()[pick])
            }
            DensitySpec::LogCauchy(lc) => sample_cauchy(rng, &CauchyParam::new(lc.mu(), lc.sigma())?),
            DensitySpec::Circular(c) => 2.0 * sample_cauchy(rng, &theta_from_disk(c)).atan(),
            DensitySpec::Wrapped(w) => 2.0 * sample_cauchy(rng, &theta_from_disk(&w.to_circular())).atan(),
            DensitySpec::Bivariate(_) => {
                return Err(Error::Contract("Monte Carlo sampling is not provided for bivariate densities".into()))
            }
        })
    }
}

type GenFn = Arc<dyn Fn(f64) -> f64 + Send + Sync>;

/// A divergence generator `f` with `f(1) = 0`.
#[derive(Clone)]
pub struct GeneratorSpec {
    name: String,
    raw: GenFn,
    normalized: GenFn,
    kinked: bool,
}

impl fmt::Debug for GeneratorSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("GeneratorSpec").field("name", &self.name).field("kinked", &self.kinked).finish()
    }
}

/// `d - log(1 + d)` with full relative accuracy near `d = 0`.
fn d_minus_ln1p(d: f64) -> f64 {
    if d.abs() < 0.05 {
        // Σ_{k≥2} (-1)^k d^k / k
        let mut term = d * d;
        let mut sum = 0.0;
        for k in 2..40 {
            let sign = if k % 2 == 0 { 1.0 } else { -1.0 };
            sum += sign * term / k as f64;
            term *= d;
            if term.abs() < 1e-18 * sum.abs() {
                break;
            }
        }
        sum
    } else {
        d - d.ln_1p()
    }
}

impl GeneratorSpec {
    fn catalog(name: impl Into<String>, raw: GenFn, normalized: GenFn, kinked: bool) -> Self {
        Self { name: name.into(), raw, normalized, kinked }
    }

    /// Registers a user generator.
    ///
    /// Requires `|f(1)| ≤ 1e-12`. `kinked` marks generators that are not
    /// differentiable at `u = 1` so quadrature splits at density crossings.
    /// The normalizing slope `f'(1)` is taken by a central difference (its
    /// error does not affect the divergence since `∫ p (q/p - 1) = 0`).
    pub fn custom<F>(name: impl Into<String>, f: F, kinked: bool) -> Result<Self>
    where
        F: Fn(f64) -> f64 + Send + Sync + 'static,
    {
        let at_one = f(1.0);
        if !(at_one.abs() <= 1e-12) {
            return Err(Error::Contract(format!("generator must satisfy f(1) = 0, got f(1) = {at_one}")));
        }
        let h = 1e-6;
        let slope = (f(1.0 + h) - f(1.0 - h)) / (2.0 * h);
        let raw: GenFn = Arc::new(f);
        let r2 = raw.clone();
        Ok(Self::catalog(name, raw, Arc::new(move |u| r2(u) - slope * (u - 1.0)), kinked))
    }

    /// Catalog generator of an f-divergence kind.
    ///
    /// Errors for kinds that are not f-divergences (Bhattacharyya, Chernoff, `QDiv2`).
    pub fn for_kind(kind: &DivergenceKind) -> Result<Self> {
        use DivergenceKind::*;
        kind.validate()?;
        let name = kind.to_string();
        let g = |raw: GenFn, norm: GenFn| Self::catalog(name.clone(), raw, norm, false);
        Ok(match *kind {
            ChiSquared => {
                let f: GenFn = Arc::new(|u| (u - 1.0) * (u - 1.0));
                g(f.clone(), f)
            }
            KL => g(Arc::new(|u: f64| -u.ln()), Arc::new(|u| d_minus_ln1p(u - 1.0))),
            TV => {
                let f: GenFn = Arc::new(|u: f64| 0.5 * (u - 1.0).abs());
                Self::catalog(name, f.clone(), f, true)
            }
            JS => {
                let f: GenFn = Arc::new(|u: f64| {
                    let half = 0.5 * (1.0 + u);
                    0.5 * u * (u / half).ln() - 0.5 * half.ln()
                });
                g(f.clone(), f)
            }
            Taneja => {
                let f: GenFn = Arc::new(|u: f64| 0.5 * (1.0 + u) * ((1.0 + u) / (2.0 * u.sqrt())).ln());
                g(f.clone(), f)
            }
            LeCam => {
                let f: GenFn = Arc::new(|u: f64| (u - 1.0) * (u - 1.0) / (1.0 + u));
                g(f.clone(), f)
            }
            HellingerSq => {
                let f: GenFn = Arc::new(|u: f64| 0.5 * (u.sqrt() - 1.0).powi(2));
                g(f.clone(), f)
            }
            Jeffreys => {
                let f: GenFn = Arc::new(|u: f64| (u - 1.0) * u.ln());
                g(f.clone(), f)
            }
            HarmonicMean => {
                g(Arc::new(|u: f64| (1.0 - u) / (1.0 + u)), Arc::new(|u: f64| (u - 1.0) * (u - 1.0) / (2.0 * (1.0 + u))))
            }
            SkewedKL(a) => g(
                Arc::new(move |u: f64| -(a * (u - 1.0)).ln_1p()),
                Arc::new(move |u: f64| d_minus_ln1p(a * (u - 1.0))),
            ),
            SkewedJS(a) => {
                let f: GenFn = Arc::new(move |u: f64| {
                    let m = 1.0 - a + a * u;
                    let tail = if u > 0.0 { a * u * (u / m).ln() } else { 0.0 };
                    -(1.0 - a) * m.ln() + tail
                });
                g(f.clone(), f)
            }
            KumarChhina => {
                let f: GenFn = Arc::new(|u: f64| {
                    (u + 1.0) * (u - 1.0) * (u - 1.0) / u * ((u + 1.0) / (2.0 * u.sqrt())).ln()
                });
                g(f.clone(), f)
            }
            Alpha(al) => {
                let beta = 0.5 * (1.0 + al);
                let c = 4.0 / (1.0 - al * al);
                g(
                    Arc::new(move |u: f64| c * (1.0 - u.powf(beta))),
                    Arc::new(move |u: f64| c * (1.0 - u.powf(beta)) + c * beta * (u - 1.0)),
                )
            }
            Bhattacharyya | Chernoff | QDiv2 => {
                return Err(Error::Unsupported(format!("'{kind}' is not an f-divergence; use the dedicated oracle")))
            }
        })
    }

    /// Generator `(u - 1)^n` of the order-`n` power chi divergence.
    pub fn power_chi(n: u32) -> Self {
        let f: GenFn = Arc::new(move |u: f64| (u - 1.0).powi(n as i32));
        Self::catalog(format!("chi-power:{n}"), f.clone(), f, false)
    }

    /// Display name.
    pub fn name(&self) -> &str {
        &self.name
    }

    /// Whether the generator has a kink at `u = 1`.
    pub fn is_kinked(&self) -> bool {
        self.kinked
    }

    /// `f(u)` as registered.
    pub fn eval(&self, u: f64) -> f64 {
        (self.raw)(u)
    }

    /// `f(u) - f'(1)(u - 1)`.
    pub fn eval_normalized(&self, u: f64) -> f64 {
        (self.normalized)(u)
    }
}

fn opts_for(tol: f64) -> Result<QuadOptions> {
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    Ok(QuadOptions { abs_tol: tol, rel_tol: 1e-12, max_panels: 10_000 })
}

fn layout(p: &DensitySpec, q: &DensitySpec) -> (f64, f64, Vec<f64>) {
    let comps: Vec<(f64, f64)> = p.components().into_iter().chain(q.components()).collect();
    let (center, width) = comps[0];
    let breaks = comps.iter().flat_map(|&(c, w)| [c - w, c, c + w]).collect();
    (center, width, breaks)
}

/// Sign changes of `g` located by a grid scan plus bisection.
fn numeric_roots<G: Fn(f64) -> f64>(g: G, support: Support, center: f64, width: f64) -> Vec<f64> {
    let n = 4096;
    let (lo, hi) = match support {
        Support::Circle => (-PI, PI),
        _ => (-FRAC_PI_2, FRAC_PI_2),
    };
    let to_x = |t: f64| match support {
        Support::Circle => t,
        _ => center + width * t.tan(),
    };
    let h = |t: f64| g(to_x(t));
    let mut roots = Vec::new();
    let step = (hi - lo) / n as f64;
    let mut prev_t = lo + 0.5 * step;
    let mut prev_v = h(prev_t);
    for k in 1..n {
        let t = lo + (k as f64 + 0.5) * step;
        let v = h(t);
        if prev_v.signum() != v.signum() && prev_v != 0.0 && v != 0.0 {
            let (mut a, mut b, fa) = (prev_t, t, prev_v);
            for _ in 0..80 {
                let m = 0.5 * (a + b);
                let fm = h(m);
                if fm.signum() == fa.signum() {
                    a = m;
                } else {
                    b = m;
                }
            }
            roots.push(to_x(0.5 * (a + b)));
        }
        prev_t = t;
        prev_v = v;
    }
    roots
}

fn crossings(p: &DensitySpec, q: &DensitySpec, center: f64, width: f64) -> Vec<f64> {
    match (p, q) {
        (DensitySpec::Cauchy(a), DensitySpec::Cauchy(b)) => tv_crossings(a, b),
        _ => numeric_roots(|t| p.native_pdf(t) - q.native_pdf(t), p.support(), center, width),
    }
}

fn check_pair(p: &DensitySpec, q: &DensitySpec) -> Result<Support> {
    let s = p.support();
    if s != q.support() {
        return Err(Error::Contract(format!("densities have different supports: {s:?} vs {:?}", q.support())));
    }
    if s == Support::Plane {
        return Err(Error::Contract("use quad_kl_bivariate for bivariate densities".into()));
    }
    Ok(s)
}

/// Integrates `h` over the native support of `p`, with the given layout.
fn integrate_native<H: Fn(f64) -> f64>(
    support: Support,
    h: H,
    center: f64,
    width: f64,
    breaks: &[f64],
    smooth: bool,
    opts: QuadOptions,
) -> Result<QuadEstimate> {
    match support {
        Support::Line | Support::HalfLine => integrate_line(h, center, width, breaks, opts),
        Support::Circle if smooth => integrate_periodic(h, -PI, 2.0 * PI, opts),
        Support::Circle => integrate(h, -PI, PI, breaks, opts),
        Support::Plane => Err(Error::Contract("plane support needs quad_plane".into())),
    }
}

/// `I_f(p : q) = ∫ p f(q/p)` by adaptive quadrature with absolute tolerance `tol`.
pub fn quad_f_divergence(f: &GeneratorSpec, p: &DensitySpec, q: &DensitySpec, tol: f64) -> Result<f64> {
    let support = check_pair(p, q)?;
    let opts = opts_for(tol)?;
    let (center, width, mut breaks) = layout(p, q);
    if f.is_kinked() {
        breaks.extend(crossings(p, q, center, width));
    }
    let integrand = |t: f64| {
        let a = p.native_pdf(t);
        if a == 0.0 {
            return 0.0;
        }
        a * f.eval_normalized(q.native_pdf(t) / a)
    };
    Ok(integrate_native(support, integrand, center, width, &breaks, !f.is_kinked(), opts)?.value)
}

/// `∫ p f(q/p)` over the real line for arbitrary densities given as closures.
///
/// `center`/`width` set the tangent substitution; `breaks` seed the panels.
/// Kinked generators additionally split at numerically located crossings.
pub fn quad_f_divergence_fn(
    f: &GeneratorSpec,
    p: &dyn Fn(f64) -> f64,
    q: &dyn Fn(f64) -> f64,
    center: f64,
    width: f64,
    breaks: &[f64],
    tol: f64,
) -> Result<f64> {
    let opts = opts_for(tol)?;
    let mut breaks = breaks.to_vec();
    if f.is_kinked() {
        breaks.extend(numeric_roots(|x| p(x) - q(x), Support::Line, center, width));
    }
    let integrand = |x: f64| {
        let a = p(x);
        if a == 0.0 {
            0.0
        } else {
            a * f.eval_normalized(q(x) / a)
        }
    };
    Ok(integrate_line(integrand, center, width, &breaks, opts)?.value)
}

const MC_CHUNK: usize = 1 << 16;

/// Monte Carlo estimate of `E_p[f(q/p)]` with its standard error.
///
/// Draws are split into fixed-size chunks, each with its own ChaCha stream of
/// `seed`, and reduced in chunk order, so results do not depend on the number
/// of threads.
pub fn mc_f_divergence(
    f: &GeneratorSpec,
    p: &DensitySpec,
    q: &DensitySpec,
    n: usize,
    seed: u64,
) -> Result<(f64, f64)> {
    check_pair(p, q)?;
    if n == 0 {
        return Err(domain("Monte Carlo needs at least one sample"));
    }
    let chunks = n.div_ceil(MC_CHUNK);
    let parts: Vec<Result<(f64, f64, f64)>> = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut rng = rng_stream(seed, c as u64);
            let len = MC_CHUNK.min(n - c * MC_CHUNK);
            let (mut mean, mut m2) = (0.0, 0.0);
            for k in 0..len {
                let t = p.sample_native(&mut rng)?;
                let a = p.native_pdf(t);
                let v = f.eval(q.native_pdf(t) / a);
                let delta = v - mean;
                mean += delta / (k + 1) as f64;
                m2 += delta * (v - mean);
            }
            Ok((len as f64, mean, m2))
        })
        .collect();
    let (mut count, mut mean, mut m2) = (0.0, 0.0, 0.0);
    for part in parts {
        let (nb, mb, m2b) = part?;
        let total = count + nb;
        let delta = mb - mean;
        mean += delta * nb / total;
        m2 += m2b + delta * delta * count * nb / total;
        count = total;
    }
    let var = if count > 1.0 { m2 / (count - 1.0) } else { 0.0 };
    Ok((mean, (var / count).sqrt()))
}

/// Nested adaptive quadrature over `ℝ²` after `x = tan u`, `y = tan v`.
///
/// `x_breaks` seed the outer panels; `y_breaks(x)` seeds the inner panels
/// for each outer node. The reported error adds the outer error to `π`
/// times the largest Jacobian-weighted inner error.
pub fn quad_plane<F, B>(f: F, x_breaks: &[f64], y_breaks: B, tol: f64) -> Result<QuadEstimate>
where
    F: Fn(f64, f64) -> f64,
    B: Fn(f64) -> Vec<f64>,
{
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    let inner_opts = QuadOptions { abs_tol: tol / (10.0 * PI), rel_tol: 1e-11, max_panels: 4_000 };
    let outer_opts = QuadOptions { abs_tol: tol, rel_tol: 1e-11, max_panels: 4_000 };
    let worst_inner = Cell::new(0.0_f64);
    let inner = |u: f64| {
        let x = u.tan();
        let jx = 1.0 + x * x;
        let vb: Vec<f64> = y_breaks(x).into_iter().map(f64::atan).collect();
        let g = |v: f64| {
            let y = v.tan();
            let val = f(x, y);
            if val == 0.0 {
                0.0
            } else {
                val * (1.0 + y * y)
            }
        };
        // Tighten the inner target by the outer Jacobian so every weighted
        // inner error stays below tol/(10π).
        let opts = QuadOptions { abs_tol: inner_opts.abs_tol / jx, ..inner_opts };
        let est = integrate_unchecked(&g, -FRAC_PI_2, FRAC_PI_2, &vb, opts);
        let weighted = est.error * jx;
        if weighted > worst_inner.get() {
            worst_inner.set(weighted);
        }
        est.value * jx
    };
    let ub: Vec<f64> = x_breaks.iter().map(|x| x.atan()).collect();
    let mut est = integrate(inner, -FRAC_PI_2, FRAC_PI_2, &ub, outer_opts)?;
    // The outer rule's weights sum to the interval length π.
    est.error += PI * worst_inner.get();
    if est.error > tol.max(1e-11 * est.value.abs()) {
        return Err(Error::Convergence { what: "plane quadrature".into(), achieved: est.error });
    }
    Ok(est)
}

/// `KL(p : q)` between bivariate Cauchy densities.
///
/// The pair is standardized by the Cholesky factor `L` of `Σ_p`
/// (`x = μ_p + L z`), after which `p` is the standard density `p₀` and the
/// integrand is `p₀ (log p₀ - log q')`. Inner panels are seeded at the
/// conditional centre of `q'` so narrow `q'` ridges are resolved.
pub fn quad_kl_bivariate(p: &BivariateCauchy, q: &BivariateCauchy, tol: f64) -> Result<f64> {
    if p == q {
        return Ok(0.0);
    }
    let [a, b, c] = p.sigma;
    let l11 = a.sqrt();
    let l21 = b / l11;
    let l22 = (c - l21 * l21).sqrt();
    // z = L⁻¹ (x - μ_p)
    let inv = |x: f64, y: f64| {
        let z1 = x / l11;
        (z1, (y - l21 * z1) / l22)
    };
    let (m1, m2) = inv(q.mu[0] - p.mu[0], q.mu[1] - p.mu[1]);
    // Σ' = L⁻¹ Σ_q L⁻ᵀ, via its columns.
    let [qa, qb, qc] = q.sigma;
    let (c1x, c1y) = inv(qa, qb);
    let (c2x, c2y) = inv(qb, qc);
    let (s11, s12a) = inv(c1x, c2x);
    let (_, s22) = inv(c1y, c2y);
    let s12 = s12a;
    let std_q = BivariateCauchy::new([m1, m2], s11, s12, s22)?;
    let std_p = BivariateCauchy::new([0.0, 0.0], 1.0, 0.0, 1.0)?;
    let det = s11 * s22 - s12 * s12;
    let (p11, p12, p22) = (s22 / det, -s12 / det, s11 / det);
    let integrand = |x: f64, y: f64| {
        let lp = std_p.log_pdf(x, y);
        lp.exp() * (lp - std_q.log_pdf(x, y))
    };
    let sd1 = s11.sqrt();
    let x_breaks = vec![-1.0, 0.0, 1.0, m1 - 10.0 * sd1, m1 - sd1, m1, m1 + sd1, m1 + 10.0 * sd1];
    let y_breaks = move |x: f64| {
        let dx = x - m1;
        let center = m2 - p12 / p22 * dx;
        let floor = dx * dx * (p11 - p12 * p12 / p22);
        let w = ((1.0 + floor) / p22).sqrt();
        vec![-1.0, 0.0, 1.0, center - 10.0 * w, center - w, center, center + w, center + 10.0 * w]
    };
    Ok(quad_plane(integrand, &x_breaks, y_breaks, tol)?.value)
}

/// Grid maximum of `q(x)/p(x)` over `10⁵` points on a `sinh` grid plus the
/// tail limit `s₂/s₁`, refined by golden section around the best cell.
pub fn sup_ratio_grid(p: &CauchyParam, q: &CauchyParam) -> f64 {
    let (l1, s1, l2, s2) = (p.location(), p.scale(), q.location(), q.scale());
    let r = |x: f64| (s2 / s1) * ((x - l1).powi(2) + s1 * s1) / ((x - l2).powi(2) + s2 * s2);
    let center = 0.5 * (l1 + l2);
    let width = s1.min(s2);
    let n = 100_000;
    let t_max = 40.0_f64;
    let node = |k: usize| center + width * (t_max * (2.0 * k as f64 / (n - 1) as f64 - 1.0)).sinh();
    let mut best_k = 0;
    let mut best = f64::NEG_INFINITY;
    for k in 0..n {
        let v = r(node(k));
        if v > best {
            best = v;
            best_k = k;
        }
    }
    let (mut a, mut b) = (node(best_k.saturating_sub(1)), node((best_k + 1).min(n - 1)));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut x1 = b - g * (b - a);
    let mut x2 = a + g * (b - a);
    let (mut f1, mut f2) = (r(x1), r(x2));
    for _ in 0..200 {
        if f1 > f2 {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - g * (b - a);
            f1 = r(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + g * (b - a);
            f2 = r(x2);
        }
    }
    best.max(f1).max(f2).max(s2 / s1)
}

/// `K(t) = ∫_0^{π/2} (1 - t sin²θ)^{-1/2} dθ` by adaptive quadrature.
pub fn quad_elliptic_k(t: f64) -> Result<f64> {
    if !(0.0..1.0).contains(&t) {
        return Err(domain(format!("K(t) needs t in [0, 1), got {t}")));
    }
    let o = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 10_000 };
    Ok(integrate(|th: f64| (1.0 - t * th.sin().powi(2)).powf(-0.5), 0.0, FRAC_PI_2, &[], o)?.value)
}

/// `E(t) = ∫_0^{π/2} (1 - t sin²θ)^{1/2} dθ` by adaptive quadrature.
pub fn quad_elliptic_e(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("E(t) needs t in [0, 1], got {t}")));
    }
    let o = QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 10_000 };
    Ok(integrate(|th: f64| (1.0 - t * th.sin().powi(2)).max(0.0).sqrt(), 0.0, FRAC_PI_2, &[], o)?.value)
}

/// Differential entropy `-∫ p log p` on the line or the circle.
///
/// Log-Cauchy laws are refused: their entropy involves `E[log Y]`, which
/// does not exist.
pub fn quad_entropy(p: &DensitySpec, tol: f64) -> Result<f64> {
    let support = p.support();
    if matches!(support, Support::HalfLine | Support::Plane) {
        return Err(Error::Unsupported(format!("entropy quadrature is not provided for {support:?} support")));
    }
    let opts = opts_for(tol)?;
    let (center, width, breaks) = layout(p, p);
    let h = |t: f64| {
        let a = p.native_pdf(t);
        if a > 0.0 {
            -a * a.ln()
        } else {
            0.0
        }
    };
    Ok(integrate_native(support, h, center, width, &breaks, true, opts)?.value)
}

/// Total mass of a density on its support (should be 1).
pub fn quad_normalization(p: &DensitySpec, tol: f64) -> Result<f64> {
    if let DensitySpec::Bivariate(b) = p {
        let m = b.mu;
        return Ok(quad_plane(|x, y| b.pdf(x, y), &[m[0]], |_| vec![m[1]], tol)?.value);
    }
    let opts = opts_for(tol)?;
    let (center, width, breaks) = layout(p, p);
    Ok(integrate_native(p.support(), |t| p.native_pdf(t), center, width, &breaks, true, opts)?.value)
}

/// `∫ p^a q^{1-a}` for any real `a` (integer `a` gives `J_a`), evaluated as
/// `p (q/p)^{1-a}`.
pub fn quad_skewed_bc(a: f64, p: &DensitySpec, q: &DensitySpec, tol: f64) -> Result<f64> {
    let support = check_pair(p, q)?;
    let opts = QuadOptions { rel_tol: 1e-13, ..opts_for(tol)? };
    let (center, width, breaks) = layout(p, q);
    let h = |t: f64| {
        let x = p.native_pdf(t);
        if x == 0.0 {
            return 0.0;
        }
        x * (q.native_pdf(t) / x).powf(1.0 - a)
    };
    Ok(integrate_native(support, h, center, width, &breaks, true, opts)?.value)
}

/// Bhattacharyya distance `-log ∫√(pq) = -log(1 - H²)` with `H²` by quadrature.
pub fn quad_bhattacharyya(p: &DensitySpec, q: &DensitySpec, tol: f64) -> Result<f64> {
    let h2 = quad_f_divergence(&GeneratorSpec::for_kind(&DivergenceKind::HellingerSq)?, p, q, tol)?;
    Ok(-(-h2).ln_1p())
}

/// `(∫ p²/q - 1)/∫ p²`, with the numerator integrated as `∫ (p - q)²/q`.
pub fn quad_q_divergence_2(p: &CauchyParam, q: &CauchyParam, tol: f64) -> Result<f64> {
    let opts = opts_for(tol)?;
    let breaks = [p.location() - p.scale(), p.location(), p.location() + p.scale(), q.location() - q.scale(), q.location(), q.location() + q.scale()];
    let num = integrate_line(
        |x| {
            let (a, b) = (density(p, x), density(q, x));
            (a - b) * (a - b) / b
        },
        p.location(),
        p.scale(),
        &breaks,
        opts,
    )?
    .value;
    let sq = integrate_line(|x| density(p, x).powi(2), p.location(), p.scale(), &breaks, opts)?.value;
    Ok(num / sq)
}
