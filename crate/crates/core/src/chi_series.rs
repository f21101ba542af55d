//! Power-chi expansions of f-divergences.
//!
//! For a generator analytic at `u = 1` with Taylor coefficients `a_n` and
//! radius `r_f`,
//!
//! ```text
//! I_f(p : q) = Σ_{n≥2} a_n D_{chi,n}(p : q),   D_{chi,n} = ∫ p (q/p - 1)^n,
//! ```
//!
//! whenever `q/p < 1 + r_f` everywhere; otherwise the terms blow up. Each
//! `D_{chi,n}` is a polynomial in `chi` evaluated exactly by
//! [`ExactChiPowers`], so no cancellation accumulates across hundreds of
//! terms.
//!
//! Coefficients are stated in their customary normalizations; the
//! [`SeriesRule::scale`] factor maps the raw sum onto the divergences of
//! [`crate::closed_form`] (e.g. the Jensen-Shannon coefficients sum to twice
//! the divergence).

use crate::cauchy_core::{chi, sup_density_ratio, CauchyParam};
use crate::closed_form::{h_of_chi, DivergenceKind, ExactChiPowers, MAX_POLY_ORDER};
use crate::error::{domain, Error, Result};

/// Outcome of a series evaluation.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SeriesVerdict {
    /// The gate passed and the last term fell below the tolerance.
    Converged,
    /// The gate failed and the terms grew for 5 consecutive orders.
    Diverged,
    /// The term budget ran out without a decision.
    Truncated,
}

/// Partial sum, verdict and the individual terms `scale·a_n·D_{chi,n}`.
#[derive(Debug, Clone, PartialEq)]
pub struct SeriesResult {
    pub value: f64,
    pub terms_used: usize,
    pub verdict: SeriesVerdict,
    /// Whether the sup-ratio convergence condition held.
    pub gate: bool,
    pub term_trace: Vec<f64>,
}

/// Exact `D_{chi,n}(p : q)` for `2 ≤ n ≤ 30`.
pub fn chi_power_divergence(n: u32, p: &CauchyParam, q: &CauchyParam) -> Result<f64> {
    if !(2..=MAX_POLY_ORDER).contains(&n) {
        return Err(Error::Unsupported(format!("power-chi order must lie in [2, {MAX_POLY_ORDER}], got {n}")));
    }
    Ok(ExactChiPowers::new(chi(p, q), n as usize)?.chi_power(n as usize))
}

/// Taylor coefficients of a generator at `u = 1`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesRule {
    kind: DivergenceKind,
    scale: f64,
    radius: f64,
}

impl SeriesRule {
    /// The divergence kind.
    pub fn kind(&self) -> DivergenceKind {
        self.kind
    }

    /// Factor mapping `Σ a_n D_{chi,n}` onto the library's divergence value.
    pub fn scale(&self) -> f64 {
        self.scale
    }

    /// Convergence radius `r_f`.
    pub fn radius(&self) -> f64 {
        self.radius
    }

    /// Raw coefficient `a_n`, `n ≥ 2`:
    ///
    /// | kind | `a_n` |
    /// |------|-------|
    /// | KL | `(-1)^n / n` |
    /// | Alpha(α) | `-4/(1-α²) binom((1+α)/2, n)` |
    /// | JS | `(-1)^n (2^{n-1} - 1) / (n(n-1) 2^{n-1})` |
    /// | HellingerSq | `(-1)^n (2n-3)!! / (2^{n-1} n!)` |
    /// | HarmonicMean | `(-1)^{n+1} / 2^n` |
    pub fn raw_coefficient(&self, n: u32) -> f64 {
        let nf = n as f64;
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        match self.kind {
            DivergenceKind::KL => sign / nf,
            DivergenceKind::Alpha(a) => {
                let beta = 0.5 * (1.0 + a);
                let mut binom = 1.0;
                for k in 1..=n {
                    binom *= (beta - (k - 1) as f64) / k as f64;
                }
                -4.0 / (1.0 - a * a) * binom
            }
            DivergenceKind::JS => sign * (1.0 - 2f64.powi(1 - n as i32)) / (nf * (nf - 1.0)),
            DivergenceKind::HellingerSq => {
                // (2n-3)!!/(2^{n-1} n!) = Π_{k=2}^{n} (2k-3)/(2k) times 1/2 at n = 2.
                let mut c = 0.25;
                for k in 3..=n {
                    c *= (2 * k - 3) as f64 / (2 * k) as f64;
                }
                sign * c
            }
            DivergenceKind::HarmonicMean => -sign * 0.5f64.powi(n as i32),
            _ => f64::NAN,
        }
    }

    /// `scale · a_n`.
    pub fn coefficient(&self, n: u32) -> f64 {
        self.scale * self.raw_coefficient(n)
    }
}

/// Coefficient rule for the kinds with an analytic generator at `u = 1`.
pub fn series_coefficients(kind: &DivergenceKind) -> Result<SeriesRule> {
    kind.validate()?;
    let scale = match kind {
        DivergenceKind::KL | DivergenceKind::Alpha(_) => 1.0,
        DivergenceKind::JS | DivergenceKind::HellingerSq => 0.5,
        DivergenceKind::HarmonicMean => -1.0,
        other => {
            return Err(Error::Unsupported(format!("no power-chi expansion is provided for '{other}'")));
        }
    };
    let radius = kind.convergence_radius().expect("series kinds carry a radius");
    Ok(SeriesRule { kind: *kind, scale, radius })
}

/// `sup q/p < 1 + r_f`: the hypothesis under which the expansion converges.
pub fn convergence_gate(kind: &DivergenceKind, p: &CauchyParam, q: &CauchyParam) -> Result<bool> {
    let rule = series_coefficients(kind)?;
    Ok(sup_density_ratio(p, q) < 1.0 + rule.radius)
}

/// Sums `scale · a_n D_{chi,n}` for `n = 2, …, max_terms`.
///
/// With the gate passing, stops at the first term below `tol` (Converged) or
/// at `max_terms` (Truncated). With the gate failing, stops after 5
/// consecutive growing terms (Diverged) or at `max_terms` (Truncated).
pub fn taylor_f_divergence(
    kind: &DivergenceKind,
    p: &CauchyParam,
    q: &CauchyParam,
    tol: f64,
    max_terms: usize,
) -> Result<SeriesResult> {
    let rule = series_coefficients(kind)?;
    if !(tol > 0.0) {
        return Err(domain(format!("tolerance must be positive, got {tol}")));
    }
    if max_terms < 2 {
        return Err(domain(format!("max_terms is the highest order and must be >= 2, got {max_terms}")));
    }
    let u = chi(p, q);
    let gate = sup_density_ratio(p, q) < 1.0 + rule.radius;
    if u == 0.0 {
        return Ok(SeriesResult { value: 0.0, terms_used: 0, verdict: SeriesVerdict::Converged, gate, term_trace: vec![] });
    }
    let powers = ExactChiPowers::new(u, max_terms)?;
    let mut value = 0.0;
    let mut trace = Vec::new();
    let mut growing = 0;
    let mut verdict = SeriesVerdict::Truncated;
    for n in 2..=max_terms {
        let term = rule.coefficient(n as u32) * powers.chi_power(n);
        value += term;
        if let Some(prev) = trace.last() {
            let prev: &f64 = prev;
            growing = if term.abs() > prev.abs() { growing + 1 } else { 0 };
        }
        trace.push(term);
        if gate && term.abs() < tol {
            verdict = SeriesVerdict::Converged;
            break;
        }
        if !gate && growing >= 5 {
            verdict = SeriesVerdict::Diverged;
            break;
        }
    }
    Ok(SeriesResult { value, terms_used: trace.len(), verdict, gate, term_trace: trace })
}

/// Evidence that total variation has no power-chi expansion.
#[derive(Debug, Clone, PartialEq)]
pub struct TvProbeReport {
    /// Location offsets of the probe points from `p0`.
    pub distances: Vec<f64>,
    pub chi: Vec<f64>,
    pub tv: Vec<f64>,
    /// `TV / D_{chi,2}`: bounded if an expansion `Σ a_n D_{chi,n}` existed.
    pub ratio: Vec<f64>,
    /// Ratios strictly increasing and the last one above 10× the first.
    pub blows_up: bool,
}

/// Approaches `p0` along the location axis (offsets `radius·10^{-k}`,
/// `k = 0..6`) and tracks `TV / D_{chi,2}`.
///
/// If TV had an expansion in power-chi divergences its leading term would be
/// `O(chi)`, keeping the ratio bounded; instead `TV ~ √(2 chi)/π`.
pub fn tv_no_expansion_probe(p0: &CauchyParam, radius: f64) -> Result<TvProbeReport> {
    if !(radius > 0.0 && radius.is_finite()) {
        return Err(domain(format!("probe radius must be positive, got {radius}")));
    }
    let mut rep = TvProbeReport { distances: vec![], chi: vec![], tv: vec![], ratio: vec![], blows_up: false };
    for k in 0..7 {
        let d = radius * 10f64.powi(-k);
        let q = CauchyParam::new(p0.location() + d, p0.scale())?;
        let u = chi(p0, &q);
        let tv = h_of_chi(&DivergenceKind::TV, u)?;
        rep.distances.push(d);
        rep.chi.push(u);
        rep.tv.push(tv);
        rep.ratio.push(tv / u);
    }
    let r = &rep.ratio;
    rep.blows_up = r.windows(2).all(|w| w[1] > w[0]) && r[r.len() - 1] > 10.0 * r[0];
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn coefficient_examples() {
        let kl = series_coefficients(&DivergenceKind::KL).unwrap();
        assert_eq!(kl.raw_coefficient(2), 0.5);
        let js = series_coefficients(&DivergenceKind::JS).unwrap();
        assert_eq!(js.raw_coefficient(2), 0.25);
        let hm = series_coefficients(&DivergenceKind::HarmonicMean).unwrap();
        assert_eq!(hm.raw_coefficient(3), 0.125);
        let he = series_coefficients(&DivergenceKind::HellingerSq).unwrap();
        assert_eq!(he.raw_coefficient(3), -0.125);
        assert!(series_coefficients(&DivergenceKind::TV).is_err());
    }

    #[test]
    fn identical_pair_converges_immediately() {
        let p = CauchyParam::standard();
        let r = taylor_f_divergence(&DivergenceKind::KL, &p, &p, 1e-10, 50).unwrap();
        assert_eq!((r.value, r.terms_used, r.verdict), (0.0, 0, SeriesVerdict::Converged));
    }

    #[test]
    fn low_orders() {
        let p = CauchyParam::standard();
        let q = CauchyParam::new(1.0, 2.0).unwrap();
        let u = chi(&p, &q);
        assert!((chi_power_divergence(2, &p, &q).unwrap() - u).abs() < 1e-15);
        assert!((chi_power_divergence(3, &p, &q).unwrap() - 1.5 * u * u).abs() < 1e-15);
        assert!(chi_power_divergence(31, &p, &q).is_err());
    }
}
