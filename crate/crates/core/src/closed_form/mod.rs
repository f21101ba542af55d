//! Closed-form divergences between Cauchy densities.
//!
//! Every f-divergence between two univariate Cauchy densities equals
//! `h_f(chi)` for a scalar function `h_f`; [`h_of_chi`] is the catalog and
//! [`divergence`] evaluates it on parameter pairs. The module also carries
//! the pieces that are not functions of `chi` alone (the `q = 2` divergence),
//! mixtures and their entropies, the integer-order skewed Bhattacharyya
//! integrals, and the angular representation of `∫ p^s q^{1-s}`.
//!
//! Formulas are written in cancellation-free forms (`ln_1p`, offset AGM), so
//! relative accuracy is kept when `chi → 0`.

pub mod jpoly;

use std::f64::consts::{FRAC_PI_2, PI, SQRT_2};
use std::fmt;
use std::str::FromStr;

pub use jpoly::{chi_power_polynomial, eval_f64, j_polynomial, ExactChiPowers, MAX_POLY_ORDER};

use crate::cauchy_core::{chi, density, lambda_from_chi, poincare_distance, CauchyParam};
use crate::error::{domain, Error, Result};
use crate::quadrature::{integrate, QuadOptions};
use crate::special_fn::{agm_one_plus_minus_one, elliptic_k};

/// Divergence generators known to the library.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum DivergenceKind {
    /// Neyman/Pearson chi-square, `f(u) = (u - 1)²`.
    ChiSquared,
    /// Kullback-Leibler, `f(u) = -log u`.
    KL,
    /// Total variation, `f(u) = |u - 1|/2`.
    TV,
    /// Jensen-Shannon, `½KL(p:m) + ½KL(q:m)` with `m = (p + q)/2`.
    JS,
    /// Taneja arithmetic-geometric divergence.
    Taneja,
    /// LeCam-Vincze triangular divergence, `f(u) = (u - 1)²/(1 + u)`.
    LeCam,
    /// Squared Hellinger, `f(u) = ½(√u - 1)²`, i.e. `1 - ∫√(pq)`.
    HellingerSq,
    /// Jeffreys, `KL(p:q) + KL(q:p)`.
    Jeffreys,
    /// Bhattacharyya distance `-log ∫√(pq)` (not an f-divergence).
    Bhattacharyya,
    /// Chernoff information `max_a -log ∫ p^a q^{1-a}`.
    Chernoff,
    /// `KL(p : (1-α)p + αq)`, `α ∈ (0, 1)`.
    SkewedKL(f64),
    /// `(1-α)KL(p : m) + αKL(q : m)` with `m = (1-α)p + αq`, `α ∈ (0, 1)`.
    SkewedJS(f64),
    /// `1 - ∫ 2pq/(p + q)`, generator `f(u) = (1 - u)/(1 + u)`.
    HarmonicMean,
    /// The statistical `q`-divergence at `q = 2` (asymmetric; not an f-divergence).
    QDiv2,
    /// Kumar-Chhina divergence (no closed form; quadrature only).
    KumarChhina,
    /// Amari alpha-divergence, `f(u) = 4/(1-α²)(1 - u^{(1+α)/2})`, `|α| < 1`
    /// (series and quadrature only).
    Alpha(f64),
}

impl DivergenceKind {
    /// Kinds with a closed form on parameter pairs, with representative skews.
    pub fn closed_form_catalog() -> Vec<DivergenceKind> {
        use DivergenceKind::*;
        vec![
            ChiSquared,
            KL,
            TV,
            JS,
            Taneja,
            LeCam,
            HellingerSq,
            Jeffreys,
            Bhattacharyya,
            Chernoff,
            HarmonicMean,
            SkewedKL(0.3),
            SkewedJS(0.3),
        ]
    }

    /// Whether [`h_of_chi`] supports this kind.
    pub fn has_closed_form(&self) -> bool {
        !matches!(self, DivergenceKind::QDiv2 | DivergenceKind::KumarChhina | DivergenceKind::Alpha(_))
    }

    /// Radius of convergence of the generator's Taylor series at `u = 1`,
    /// where a power-chi expansion is available.
    pub fn convergence_radius(&self) -> Option<f64> {
        match self {
            DivergenceKind::KL | DivergenceKind::JS | DivergenceKind::HellingerSq | DivergenceKind::Alpha(_) => {
                Some(1.0)
            }
            DivergenceKind::HarmonicMean => Some(2.0),
            _ => None,
        }
    }

    /// Validates embedded parameters.
    pub fn validate(&self) -> Result<()> {
        match *self {
            DivergenceKind::SkewedKL(a) | DivergenceKind::SkewedJS(a) if !(a > 0.0 && a < 1.0) => {
                Err(domain(format!("skew must lie in (0, 1), got {a}")))
            }
            DivergenceKind::Alpha(a) if !(a > -1.0 && a < 1.0) => {
                Err(domain(format!("alpha must lie in (-1, 1), got {a}")))
            }
            _ => Ok(()),
        }
    }
}

impl fmt::Display for DivergenceKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        use DivergenceKind::*;
        match self {
            ChiSquared => write!(f, "chi2"),
            KL => write!(f, "kl"),
            TV => write!(f, "tv"),
            JS => write!(f, "js"),
            Taneja => write!(f, "taneja"),
            LeCam => write!(f, "lecam"),
            HellingerSq => write!(f, "hellinger"),
            Jeffreys => write!(f, "jeffreys"),
            Bhattacharyya => write!(f, "bhattacharyya"),
            Chernoff => write!(f, "chernoff"),
            SkewedKL(a) => write!(f, "skewed-kl:{a}"),
            SkewedJS(a) => write!(f, "skewed-js:{a}"),
            HarmonicMean => write!(f, "hm"),
            QDiv2 => write!(f, "q2"),
            KumarChhina => write!(f, "kc"),
            Alpha(a) => write!(f, "alpha:{a}"),
        }
    }
}

impl FromStr for DivergenceKind {
    type Err = Error;

    /// Parses names such as `kl`, `hellinger`, `skewed-js:0.25`, `alpha:-0.5`.
    fn from_str(s: &str) -> Result<Self> {
        use DivergenceKind::*;
        let lower = s.trim().to_ascii_lowercase();
        let (name, arg) = match lower.split_once(':') {
            Some((n, a)) => (n.to_string(), Some(a.to_string())),
            None => (lower.clone(), None),
        };
        let number = |what: &str| -> Result<f64> {
            let a = arg.as_deref().ok_or_else(|| Error::Parse(format!("{what} needs a parameter, e.g. {what}:0.5")))?;
            a.parse::<f64>().map_err(|_| Error::Parse(format!("bad {what} parameter '{a}'")))
        };
        let kind = match name.as_str() {
            "chi2" | "chi-squared" | "chisquared" => ChiSquared,
            "kl" | "kullback-leibler" => KL,
            "tv" | "total-variation" => TV,
            "js" | "jensen-shannon" => JS,
            "taneja" => Taneja,
            "lecam" | "le-cam" | "triangular" => LeCam,
            "hellinger" | "hellinger-sq" => HellingerSq,
            "jeffreys" => Jeffreys,
            "bhattacharyya" | "bhat" => Bhattacharyya,
            "chernoff" => Chernoff,
            "skewed-kl" => SkewedKL(number("skewed-kl")?),
            "skewed-js" => SkewedJS(number("skewed-js")?),
            "hm" | "harmonic-mean" => HarmonicMean,
            "q2" | "qdiv2" => QDiv2,
            "kc" | "kumar-chhina" => KumarChhina,
            "alpha" => Alpha(number("alpha")?),
            other => return Err(Error::Parse(format!("unknown divergence kind '{other}'"))),
        };
        if arg.is_some() && !matches!(kind, SkewedKL(_) | SkewedJS(_) | Alpha(_)) {
            return Err(Error::Parse(format!("kind '{name}' takes no parameter")));
        }
        kind.validate()?;
        Ok(kind)
    }
}

/// `1 - √(2/(u + 2))` without cancellation.
fn one_minus_sqrt_two_over(u: f64) -> f64 {
    let r = (2.0 / (u + 2.0)).sqrt();
    (u / (u + 2.0)) / (1.0 + r)
}

/// `AGM(1, √(1 + u/2)) - 1`.
///
/// The Bhattacharyya coefficient between Cauchy densities is
/// `1 / AGM(1, √(1 + chi/2))`, an equivalent form of the elliptic expression
/// `2 K(1 - L^{-2}) / (π √L)`, `L = λ(chi)`, after one Landen step.
fn bc_agm_offset(u: f64) -> f64 {
    let half = 0.5 * u;
    agm_one_plus_minus_one(half / ((1.0 + half).sqrt() + 1.0))
}

/// Bhattacharyya coefficient `∫√(pq)` as a function of `chi`.
pub fn bhattacharyya_coefficient_of_chi(u: f64) -> f64 {
    1.0 / (1.0 + bc_agm_offset(u))
}

/// Squared Hellinger in its elliptic-integral form
/// `1 - 2K(1 - L^{-2})/(π√L)` with `L = 1 + u + √(u(2 + u))`.
///
/// Kept as a reference; [`h_of_chi`] uses the equivalent AGM form.
pub fn hellinger_sq_elliptic(u: f64) -> Result<f64> {
    let l = lambda_from_chi(u);
    Ok(1.0 - 2.0 * elliptic_k(1.0 - (l * l).recip())? / (PI * l.sqrt()))
}

/// `h_f(u)` with `I_f(p:q) = h_f(chi(p, q))`.
///
/// Errors for kinds without a closed form (`QDiv2`, `KumarChhina`, `Alpha`)
/// and for `u < 0`.
pub fn h_of_chi(kind: &DivergenceKind, u: f64) -> Result<f64> {
    kind.validate()?;
    if !(u >= 0.0) {
        return Err(domain(format!("chi must be >= 0, got {u}")));
    }
    if u.is_infinite() {
        return Err(domain("chi must be finite"));
    }
    use DivergenceKind::*;
    Ok(match *kind {
        ChiSquared => u,
        TV => (2.0 / PI) * (0.5 * u).sqrt().atan(),
        KL => (0.5 * u).ln_1p(),
        Jeffreys => 2.0 * (0.5 * u).ln_1p(),
        JS => {
            let r = (2.0 + u).sqrt() + SQRT_2;
            (u / (r * r)).ln_1p()
        }
        Taneja => {
            let half = 0.5 * u;
            (0.5 * half / ((1.0 + half).sqrt() + 1.0)).ln_1p()
        }
        LeCam => 2.0 * one_minus_sqrt_two_over(u),
        HarmonicMean => one_minus_sqrt_two_over(u),
        HellingerSq => {
            let m1 = bc_agm_offset(u);
            m1 / (1.0 + m1)
        }
        Bhattacharyya | Chernoff => bc_agm_offset(u).ln_1p(),
        SkewedKL(w) => skewed_kl_of_chi(w, u),
        SkewedJS(a) => (1.0 - a) * skewed_kl_of_chi(a, u) + a * skewed_kl_of_chi(1.0 - a, u),
        QDiv2 => return Err(Error::Unsupported("q2 divergence is not a function of chi; use q_divergence_2".into())),
        KumarChhina => {
            return Err(Error::Unsupported("Kumar-Chhina has no closed form; use the quadrature oracle".into()))
        }
        Alpha(_) => {
            return Err(Error::Unsupported("alpha-divergence has no closed form; use the series or oracle".into()))
        }
    })
}

/// `KL(p : (1-w)p + wq)` on the canonical pair `(0, 1)`, `(0, λ(u))`,
/// through [`kl_point_to_mixture`].
fn skewed_kl_of_chi(w: f64, u: f64) -> f64 {
    let p = CauchyParam::standard();
    let q = CauchyParam::new(0.0, lambda_from_chi(u)).expect("λ >= 1 is a valid scale");
    kl_mixture_raw(&p, &q, w)
}

/// Divergence between two Cauchy densities.
///
/// Symmetric in `(p, q)` for every kind except [`DivergenceKind::QDiv2`].
/// `KumarChhina` and `Alpha` are refused: use [`crate::oracle`].
pub fn divergence(kind: &DivergenceKind, p: &CauchyParam, q: &CauchyParam) -> Result<f64> {
    kind.validate()?;
    match *kind {
        DivergenceKind::QDiv2 => Ok(q_divergence_2(p, q)),
        DivergenceKind::SkewedKL(w) => kl_point_to_mixture(p, &MixtureTwo::new(w, *p, *q)?),
        DivergenceKind::SkewedJS(a) => skewed_js(a, p, q),
        _ => h_of_chi(kind, chi(p, q)),
    }
}

/// Real crossing points of two Cauchy densities, ascending.
///
/// Solves `s1((x - l2)² + s2²) = s2((x - l1)² + s1²)`: two roots when the
/// scales differ, the midpoint when only the locations differ, none when the
/// densities coincide.
pub fn tv_crossings(p: &CauchyParam, q: &CauchyParam) -> Vec<f64> {
    let (l1, s1, l2, s2) = (p.location(), p.scale(), q.location(), q.scale());
    let a = s1 - s2;
    let half_b = s2 * l1 - s1 * l2;
    let c = s1 * (l2 * l2 + s2 * s2) - s2 * (l1 * l1 + s1 * s1);
    if a == 0.0 {
        if l1 == l2 {
            return Vec::new();
        }
        return vec![0.5 * (l1 + l2)];
    }
    let disc = s1 * s2 * ((s1 - s2).powi(2) + (l1 - l2).powi(2));
    let root = disc.sqrt();
    let qq = -(half_b + half_b.signum() * root);
    let qq = if qq == 0.0 { -root } else { qq };
    let mut r = vec![qq / a, c / qq];
    r.sort_by(f64::total_cmp);
    r
}

/// `Φ_p(x) - Φ_q(x)` via a single `atan2`, exact in its branch.
fn cdf_gap(p: &CauchyParam, q: &CauchyParam, x: f64) -> f64 {
    if x.is_infinite() {
        return 0.0;
    }
    let a1 = (x - p.location()) / p.scale();
    let a2 = (x - q.location()) / q.scale();
    (a1 - a2).atan2(1.0 + a1 * a2) / PI
}

/// Total variation from the crossing points and CDF differences.
///
/// `p - q` keeps one sign between the crossings and the other outside, so
/// `TV = |(Φ_p - Φ_q)(r_hi) - (Φ_p - Φ_q)(r_lo)|`.
pub fn tv_two_root(p: &CauchyParam, q: &CauchyParam) -> f64 {
    let roots = tv_crossings(p, q);
    match roots.len() {
        0 => 0.0,
        1 => cdf_gap(p, q, roots[0]).abs(),
        _ => (cdf_gap(p, q, roots[1]) - cdf_gap(p, q, roots[0])).abs(),
    }
}

/// `∫ p^a q^{1-a}` for integer `a ≥ 2`, via the exact polynomial `J_a(chi)`.
pub fn bc_skewed_integer(a: u32, p: &CauchyParam, q: &CauchyParam) -> Result<f64> {
    let poly = j_polynomial(a)?;
    Ok(eval_f64(&poly, chi(p, q)))
}

/// Differential entropy `log(4πs)` of a Cauchy density.
pub fn cauchy_entropy(s: f64) -> Result<f64> {
    if !(s > 0.0 && s.is_finite()) {
        return Err(domain(format!("entropy needs a positive scale, got {s}")));
    }
    Ok((4.0 * PI * s).ln())
}

/// Two-component Cauchy mixture `(1 - w) p₀ + w p₁`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct MixtureTwo {
    weight: f64,
    components: [CauchyParam; 2],
}

impl MixtureTwo {
    /// Builds a mixture, requiring `w ∈ [0, 1]`.
    pub fn new(weight: f64, first: CauchyParam, second: CauchyParam) -> Result<Self> {
        if !(0.0..=1.0).contains(&weight) {
            return Err(domain(format!("mixture weight must lie in [0, 1], got {weight}")));
        }
        Ok(Self { weight, components: [first, second] })
    }

    /// Weight `w` of the second component.
    pub fn weight(&self) -> f64 {
        self.weight
    }

    /// The two components.
    pub fn components(&self) -> &[CauchyParam; 2] {
        &self.components
    }

    /// Mixture density.
    pub fn pdf(&self, x: f64) -> f64 {
        (1.0 - self.weight) * density(&self.components[0], x) + self.weight * density(&self.components[1], x)
    }
}

/// `KL(p : (1 - w)p + wq)` in closed form.
///
/// The textbook ratio `(Δl² + (s1+s2)²) / den` is rewritten as
/// `ln_1p((num - den)/den)` with the difference expanded analytically.
fn kl_mixture_raw(p: &CauchyParam, q: &CauchyParam, w: f64) -> f64 {
    let (l1, s1, l2, s2) = (p.location(), p.scale(), q.location(), q.scale());
    let dl2 = (l1 - l2).powi(2);
    let qsum = (s1 - s2).powi(2) + dl2;
    let ss = s1 * s2;
    let r = (ss * ss + ss * qsum * w * (1.0 - w)).sqrt();
    let den = (1.0 - w) * (s1 * s1 + s2 * s2 + dl2) + 2.0 * w * ss + 2.0 * r;
    // num - den = wQ (1 - 2 s1 s2 (1 - w) / (R + s1 s2))
    let gap = w * qsum * (1.0 - 2.0 * ss * (1.0 - w) / (r + ss));
    (gap / den).ln_1p()
}

/// `KL(p : m)` where `m` is a two-component mixture whose first component is `p`.
pub fn kl_point_to_mixture(p: &CauchyParam, mix: &MixtureTwo) -> Result<f64> {
    if mix.components[0] != *p {
        return Err(Error::Contract("the mixture's first component must equal p".into()));
    }
    Ok(kl_mixture_raw(p, &mix.components[1], mix.weight))
}

/// Skewed Jensen-Shannon `(1-α)KL(p : m) + αKL(q : m)`, `m = (1-α)p + αq`.
pub fn skewed_js(alpha: f64, p: &CauchyParam, q: &CauchyParam) -> Result<f64> {
    if !(0.0..=1.0).contains(&alpha) {
        return Err(domain(format!("skew must lie in [0, 1], got {alpha}")));
    }
    let to_p = kl_point_to_mixture(p, &MixtureTwo::new(alpha, *p, *q)?)?;
    let to_q = kl_point_to_mixture(q, &MixtureTwo::new(1.0 - alpha, *q, *p)?)?;
    Ok((1.0 - alpha) * to_p + alpha * to_q)
}

/// Differential entropy of a two-component Cauchy mixture:
/// `h(m) = JS_α(p:q) + (1-α)h(p) + αh(q)` with `α = w`.
pub fn two_mixture_entropy(mix: &MixtureTwo) -> f64 {
    let [p, q] = mix.components;
    let w = mix.weight;
    let js = skewed_js(w, &p, &q).expect("weight validated at construction");
    js + (1.0 - w) * (4.0 * PI * p.scale()).ln() + w * (4.0 * PI * q.scale()).ln()
}

/// `F(θ) = -h(m_θ)` for the mixture family `m_θ = (1-θ)p₀ + θp₁`.
fn mixture_family_potential(theta: f64, components: &[CauchyParam; 2]) -> Result<f64> {
    let mix = MixtureTwo::new(theta, components[0], components[1])?;
    Ok(-two_mixture_entropy(&mix))
}

/// KL between two members of a two-component mixture family, as the Bregman
/// divergence `F(θ₁) - F(θ₂) - (θ₁ - θ₂)F'(θ₂)` of `F = -h`.
///
/// `F'` is a central difference with step `1e-6` (shrunk near the ends).
pub fn mixture_family_kl(theta1: f64, theta2: f64, components: &[CauchyParam; 2]) -> Result<f64> {
    for t in [theta1, theta2] {
        if !(t > 0.0 && t < 1.0) {
            return Err(domain(format!("mixture-family parameter must lie in (0, 1), got {t}")));
        }
    }
    let h = 1e-6_f64.min(0.5 * theta2).min(0.5 * (1.0 - theta2));
    let slope = (mixture_family_potential(theta2 + h, components)? - mixture_family_potential(theta2 - h, components)?)
        / (2.0 * h);
    Ok(mixture_family_potential(theta1, components)? - mixture_family_potential(theta2, components)?
        - (theta1 - theta2) * slope)
}

/// Analytic gradient `η(θ) = F'(θ)` for the components `(0,1)`, `(1,1)`:
/// `log((2√(1+θ-θ²) + θ + 2) / (2√(1+θ-θ²) - θ + 3))`.
pub fn mixture_family_eta_unit_shift(theta: f64) -> f64 {
    let r = 2.0 * (1.0 + theta - theta * theta).sqrt();
    ((r + theta + 2.0) / (r - theta + 3.0)).ln()
}

/// The statistical 2-divergence `(π/s₂)‖λ₁ - λ₂‖²` (asymmetric when `s₁ ≠ s₂`).
pub fn q_divergence_2(p: &CauchyParam, q: &CauchyParam) -> f64 {
    let dl = p.location() - q.location();
    let ds = p.scale() - q.scale();
    PI / q.scale() * (dl * dl + ds * ds)
}

/// `∫ p^s q^{1-s}` through the angular kernel
/// `(1/2π) ∫_{-π}^{π} (cosh d + cos θ sinh d)^{-s} dθ`, `d` the Poincaré distance.
///
/// The base is written as `e^d cos²(θ/2) + e^{-d} sin²(θ/2)`, exact near
/// `θ = π` where the integrand peaks for distant pairs.
pub fn bc_skewed_angular(s_exp: f64, p: &CauchyParam, q: &CauchyParam) -> Result<f64> {
    if !(s_exp > 0.0 && s_exp < 1.0) {
        return Err(domain(format!("skew exponent must lie in (0, 1), got {s_exp}")));
    }
    let d = poincare_distance(p, q);
    if d == 0.0 {
        return Ok(1.0);
    }
    let (ep, em) = (d.exp(), (-d).exp());
    let kernel = |theta: f64| {
        let (sh, ch) = (0.5 * theta).sin_cos();
        (ep * ch * ch + em * sh * sh).powf(-s_exp)
    };
    // Integrand is even in θ; its peak near π has width ~ e^{-d}.
    let mut breaks = Vec::new();
    for k in [100.0, 10.0, 1.0] {
        let b = PI - k * em;
        if b > 0.0 {
            breaks.push(b);
        }
    }
    breaks.push(FRAC_PI_2);
    let est = integrate(kernel, 0.0, PI, &breaks, QuadOptions { abs_tol: 1e-15, rel_tol: 1e-13, max_panels: 10_000 })?;
    Ok(est.value / PI)
}
