//! Circular, wrapped and log-Cauchy families, and pushforward identities.
//!
//! Each family is the image of the Cauchy family under a bijection, so every
//! f-divergence reduces to the Cauchy one on mapped parameters:
//!
//! | family | parameter | Cauchy parameter |
//! |--------|-----------|------------------|
//! | circular `cc_w` | `w`, `|w| < 1` | `θ = i(1 - w)/(1 + w)` |
//! | wrapped `wc_{μ,γ}` | `μ`, `γ > 0` | via `w = e^{-γ + iμ}` |
//! | log-Cauchy `lc_{μ,σ}` | `μ`, `σ > 0` | `(μ, σ)` |
//!
//! The Boole map `x ↦ a(x - 1/x)` is two-to-one but still sends Cauchy laws
//! to Cauchy laws; [`boole_pushforward_check`] verifies the two-branch density
//! identity and [`boole_kl_gap`] shows that divergences are *not* preserved.

use std::f64::consts::PI;
use std::fmt;
use std::str::FromStr;

use num_complex::Complex64;

use crate::cauchy_core::{density, mobius_apply, CauchyParam, MoebiusMap};
use crate::closed_form::{divergence, DivergenceKind};
use crate::error::{domain, Error, Result};
use crate::oracle::{quad_f_divergence_fn, GeneratorSpec};

/// Circular Cauchy parameter `w` in the open unit disk.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CircularParam {
    w: Complex64,
}

impl CircularParam {
    /// Validates `|w| < 1`.
    pub fn new(w: Complex64) -> Result<Self> {
        if !(w.norm() < 1.0) {
            return Err(domain(format!("circular parameter must satisfy |w| < 1, got {w}")));
        }
        Ok(Self { w })
    }

    /// From polar form `ρ e^{iφ₀}`.
    pub fn from_polar(rho: f64, phi0: f64) -> Result<Self> {
        if !(0.0..1.0).contains(&rho) {
            return Err(domain(format!("circular radius must lie in [0, 1), got {rho}")));
        }
        Self::new(Complex64::from_polar(rho, phi0))
    }

    /// The disk point `w`.
    pub fn w(&self) -> Complex64 {
        self.w
    }

    /// Density `(1/2π)(1 - |w|²)/|e^{iφ} - w|²`.
    pub fn pdf(&self, phi: f64) -> f64 {
        let z = Complex64::from_polar(1.0, phi) - self.w;
        (1.0 - self.w.norm_sqr()) / (2.0 * PI * z.norm_sqr())
    }
}

/// Wrapped Cauchy parameter `(μ, γ)`, `γ > 0`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct WrappedParam {
    mu: f64,
    gamma: f64,
}

impl WrappedParam {
    /// Validates `γ > 0`.
    pub fn new(mu: f64, gamma: f64) -> Result<Self> {
        if !(gamma > 0.0 && gamma.is_finite() && mu.is_finite()) {
            return Err(domain(format!("wrapped parameters need finite μ and γ > 0, got ({mu}, {gamma})")));
        }
        Ok(Self { mu, gamma })
    }

    /// Location `μ`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Concentration `γ`.
    pub fn gamma(&self) -> f64 {
        self.gamma
    }

    /// Density `(1/2π) sinh γ / (cosh γ - cos(φ - μ))`.
    pub fn pdf(&self, phi: f64) -> f64 {
        // cosh γ - cos t = 2 sinh²(γ/2) + 2 sin²(t/2), free of cancellation.
        let a = (0.5 * self.gamma).sinh();
        let b = (0.5 * (phi - self.mu)).sin();
        self.gamma.sinh() / (2.0 * PI * 2.0 * (a * a + b * b))
    }

    /// The equivalent circular parameter `w = e^{-γ + iμ}`.
    pub fn to_circular(&self) -> CircularParam {
        CircularParam { w: Complex64::from_polar((-self.gamma).exp(), self.mu) }
    }
}

/// Log-Cauchy parameter `(μ, σ)`: `log Y` is Cauchy with location `μ`, scale `σ`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogCauchyParam {
    mu: f64,
    sigma: f64,
}

impl LogCauchyParam {
    /// Validates `σ > 0`.
    pub fn new(mu: f64, sigma: f64) -> Result<Self> {
        if !(sigma > 0.0 && sigma.is_finite() && mu.is_finite()) {
            return Err(domain(format!("log-Cauchy parameters need finite μ and σ > 0, got ({mu}, {sigma})")));
        }
        Ok(Self { mu, sigma })
    }

    /// Location of `log Y`.
    pub fn mu(&self) -> f64 {
        self.mu
    }

    /// Scale of `log Y`.
    pub fn sigma(&self) -> f64 {
        self.sigma
    }

    /// Density `σ / (π y ((log y - μ)² + σ²))` for `y > 0`.
    pub fn pdf(&self, y: f64) -> f64 {
        if !(y > 0.0) {
            return 0.0;
        }
        let t = y.ln() - self.mu;
        self.sigma / (PI * y * (t * t + self.sigma * self.sigma))
    }

    /// `y p(y)` at `y = e^t`: the density with respect to `d(log y)`.
    ///
    /// Evaluated through `y` itself while `e^t` is representable, and through
    /// `t` beyond that.
    pub fn pdf_log_measure(&self, t: f64) -> f64 {
        if t.abs() < 600.0 {
            let y = t.exp();
            y * self.pdf(y)
        } else {
            let d = t - self.mu;
            self.sigma / (PI * (d * d + self.sigma * self.sigma))
        }
    }
}

/// `θ(w) = i(1 - w)/(1 + w)`, written as `(2 Im w + i(1 - |w|²))/|1 + w|²`.
pub fn theta_from_disk(w: &CircularParam) -> CauchyParam {
    let z = w.w;
    let den = (1.0 + z).norm_sqr();
    CauchyParam::new(2.0 * z.im / den, (1.0 - z.norm_sqr()) / den).expect("|w| < 1 maps into the upper half-plane")
}

/// `w(θ) = (1 + iθ)/(1 - iθ) = ((1 - l² - s²) + 2il)/((1 + s)² + l²)`.
pub fn disk_from_theta(theta: &CauchyParam) -> CircularParam {
    let (l, s) = (theta.location(), theta.scale());
    let den = (1.0 + s).powi(2) + l * l;
    CircularParam { w: Complex64::new((1.0 - l * l - s * s) / den, 2.0 * l / den) }
}

/// Disk automorphism `t(w) = e^{iφ}(w - a)/(1 - ā w)`, `|a| < 1`.
pub fn disk_automorphism(phi: f64, a: Complex64, w: &CircularParam) -> Result<CircularParam> {
    if !(a.norm() < 1.0) {
        return Err(domain(format!("automorphism centre must satisfy |a| < 1, got {a}")));
    }
    let z = w.w;
    let image = Complex64::from_polar(1.0, phi) * (z - a) / (1.0 - a.conj() * z);
    // Rounding can push |image| to 1 only for |w| within an ulp of the circle.
    CircularParam::new(image)
}

/// The three reduced families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Family {
    Circular,
    Wrapped,
    LogCauchy,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::Circular => "circular",
            Family::Wrapped => "wrapped",
            Family::LogCauchy => "log-cauchy",
        })
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_lowercase().as_str() {
            "circular" | "cc" => Ok(Family::Circular),
            "wrapped" | "wc" => Ok(Family::Wrapped),
            "log-cauchy" | "logcauchy" | "lc" => Ok(Family::LogCauchy),
            other => Err(Error::Parse(format!("unknown family '{other}'"))),
        }
    }
}

/// A parameter of one of the reduced families.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum FamilyParam {
    Circular(CircularParam),
    Wrapped(WrappedParam),
    LogCauchy(LogCauchyParam),
}

impl FamilyParam {
    /// Builds a parameter from two reals: `(Re w, Im w)`, `(μ, γ)` or `(μ, σ)`.
    pub fn from_pair(family: Family, a: f64, b: f64) -> Result<Self> {
        Ok(match family {
            Family::Circular => FamilyParam::Circular(CircularParam::new(Complex64::new(a, b))?),
            Family::Wrapped => FamilyParam::Wrapped(WrappedParam::new(a, b)?),
            Family::LogCauchy => FamilyParam::LogCauchy(LogCauchyParam::new(a, b)?),
        })
    }

    /// The family this parameter belongs to.
    pub fn family(&self) -> Family {
        match self {
            FamilyParam::Circular(_) => Family::Circular,
            FamilyParam::Wrapped(_) => Family::Wrapped,
            FamilyParam::LogCauchy(_) => Family::LogCauchy,
        }
    }

    /// The Cauchy parameter carrying the same divergences.
    pub fn to_cauchy(&self) -> CauchyParam {
        match self {
            FamilyParam::Circular(c) => theta_from_disk(c),
            FamilyParam::Wrapped(w) => theta_from_disk(&w.to_circular()),
            FamilyParam::LogCauchy(lc) => CauchyParam::new(lc.mu, lc.sigma).expect("validated"),
        }
    }
}

/// Divergence between two members of the same family via the Cauchy reduction.
///
/// `QDiv2` is refused: it is not an f-divergence and is not preserved.
pub fn family_divergence(kind: &DivergenceKind, a: &FamilyParam, b: &FamilyParam) -> Result<f64> {
    if a.family() != b.family() {
        return Err(Error::Contract(format!("parameters from different families: {} vs {}", a.family(), b.family())));
    }
    if matches!(kind, DivergenceKind::QDiv2) {
        return Err(Error::Unsupported("the q2 divergence is not invariant under the family reductions".into()));
    }
    divergence(kind, &a.to_cauchy(), &b.to_cauchy())
}

/// Density of a family member at a point of its support
/// (`φ ∈ [-π, π]` for the circle, `y > 0` for log-Cauchy).
pub fn family_density(param: &FamilyParam, point: f64) -> Result<f64> {
    match param {
        FamilyParam::Circular(_) | FamilyParam::Wrapped(_) if !(-PI..=PI).contains(&point) => {
            Err(domain(format!("angle must lie in [-π, π], got {point}")))
        }
        FamilyParam::LogCauchy(_) if !(point > 0.0 && point.is_finite()) => {
            Err(domain(format!("log-Cauchy support is y > 0, got {point}")))
        }
        FamilyParam::Circular(c) => Ok(c.pdf(point)),
        FamilyParam::Wrapped(w) => Ok(w.pdf(point)),
        FamilyParam::LogCauchy(lc) => Ok(lc.pdf(point)),
    }
}

/// Candidate maps from the disk parameter `w` to a wrapped parameter
/// `η = μ + iγ` such that `cc_w = wc_η`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum WrappedMapCandidate {
    /// The Cayley-type map `η = (w - i)/(w + i)`.
    Cayley,
    /// The logarithmic map `η = -i Log w`, i.e. `μ = arg w`, `γ = -log|w|`.
    Logarithm,
}

impl WrappedMapCandidate {
    /// Evaluates the candidate map.
    pub fn eta(&self, w: Complex64) -> Complex64 {
        let i = Complex64::i();
        match self {
            WrappedMapCandidate::Cayley => (w - i) / (w + i),
            WrappedMapCandidate::Logarithm => -i * w.ln(),
        }
    }
}

/// Outcome of checking `cc_w(φ) = wc_{η(w)}(φ)` on a grid.
#[derive(Debug, Clone, PartialEq)]
pub struct WrappedMapReport {
    pub candidate: WrappedMapCandidate,
    /// Whether every `η(w)` had `Im η > 0`.
    pub lands_in_upper_half: bool,
    /// Largest absolute density mismatch (infinite if `η` left the domain).
    pub max_residual: f64,
    /// `lands_in_upper_half && max_residual ≤ 1e-12`.
    pub holds: bool,
}

/// Checks a candidate wrapped map on `grid` angles for each disk point
/// (points with `w = 0` are skipped: the uniform law has `γ = ∞`).
pub fn verify_wrapped_map(candidate: WrappedMapCandidate, points: &[CircularParam], grid: usize) -> WrappedMapReport {
    let mut lands = true;
    let mut worst = 0.0_f64;
    for c in points.iter().filter(|c| c.w.norm() > 0.0) {
        let eta = candidate.eta(c.w);
        let Ok(wp) = WrappedParam::new(eta.re, eta.im) else {
            lands = false;
            worst = f64::INFINITY;
            continue;
        };
        for k in 0..grid {
            let phi = -PI + 2.0 * PI * k as f64 / grid as f64;
            let (a, b) = (c.pdf(phi), wp.pdf(phi));
            worst = worst.max((a - b).abs() / a.max(b).max(1.0));
        }
    }
    WrappedMapReport { candidate, lands_in_upper_half: lands, max_residual: worst, holds: lands && worst <= 1e-12 }
}

/// Image of a Cauchy parameter under the Boole map `φ_a(z) = a(z - 1/z)`:
/// `s' = a s (l² + s² + 1)/(l² + s²)`.
pub fn boole_map_param(a: f64, theta: &CauchyParam) -> Result<CauchyParam> {
    if !(a > 0.0 && a.is_finite()) {
        return Err(domain(format!("Boole parameter must be positive, got {a}")));
    }
    let z = theta.theta();
    CauchyParam::from_theta(a * (z - z.inv()))
}

/// Density at `x'` of the pushforward of `C(θ)` under `φ_a`, summed over
/// both preimages `x = (x' ± √(x'² + 4a²))/(2a)`.
pub fn boole_pushforward_density(a: f64, theta: &CauchyParam, x_image: f64) -> f64 {
    let root = x_image.hypot(2.0 * a);
    // Stable pair of roots of a x² - x' x - a = 0 (product -1).
    let big = if x_image >= 0.0 { (x_image + root) / (2.0 * a) } else { (x_image - root) / (2.0 * a) };
    let small = -1.0 / big;
    [big, small].iter().map(|&x| density(theta, x) / (a * (1.0 + 1.0 / (x * x)))).sum()
}

/// `|C(x'; φ_a(θ)) - C(x; θ)/|φ'_a(x)| - C(-1/x; θ)/|φ'_a(-1/x)||` at `x' = φ_a(x)`.
pub fn boole_pushforward_check(a: f64, theta: &CauchyParam, x: f64) -> Result<f64> {
    if x == 0.0 || !x.is_finite() {
        return Err(domain("Boole check needs a finite x != 0"));
    }
    let image = boole_map_param(a, theta)?;
    let xp = a * (x - 1.0 / x);
    let deriv = |t: f64| a * (1.0 + 1.0 / (t * t));
    let lhs = density(&image, xp);
    let rhs = density(theta, x) / deriv(x) + density(theta, -1.0 / x) / deriv(-1.0 / x);
    Ok((lhs - rhs).abs())
}

/// Single-branch analogue for a Möbius map: `|C(A x; Aθ) - C(x; θ)/|A'(x)||`.
pub fn mobius_pushforward_check(map: &MoebiusMap, theta: &CauchyParam, x: f64) -> Result<f64> {
    let (_, _, c, d) = map.entries();
    if c * x + d == 0.0 {
        return Err(domain("x is the pole of the Möbius map"));
    }
    let image = mobius_apply(map, theta);
    Ok((density(&image, map.apply_point(x)) - density(theta, x) / map.derivative(x).abs()).abs())
}

/// KL before and after the Boole map: `(KL(θ₁ : θ₂), KL(push θ₁ : push θ₂))`,
/// the latter by quadrature of the two-branch pushforward densities.
pub fn boole_kl_gap(a: f64, theta1: &CauchyParam, theta2: &CauchyParam) -> Result<(f64, f64)> {
    let before = divergence(&DivergenceKind::KL, theta1, theta2)?;
    let (i1, i2) = (boole_map_param(a, theta1)?, boole_map_param(a, theta2)?);
    let f = GeneratorSpec::for_kind(&DivergenceKind::KL)?;
    let breaks: Vec<f64> =
        [i1, i2].iter().flat_map(|p| [p.location() - p.scale(), p.location(), p.location() + p.scale()]).collect();
    let after = quad_f_divergence_fn(
        &f,
        &|x| boole_pushforward_density(a, theta1, x),
        &|x| boole_pushforward_density(a, theta2, x),
        i1.location(),
        i1.scale(),
        &breaks,
        1e-12,
    )?;
    Ok((before, after))
}
