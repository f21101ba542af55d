//! Arithmetic-geometric mean and complete elliptic integrals.
//!
//! Parameter convention throughout:
//!
//! ```text
//! K(t) = ∫_0^{π/2} (1 - t sin²θ)^{-1/2} dθ,   E(t) = ∫_0^{π/2} (1 - t sin²θ)^{1/2} dθ.
//! ```
//!
//! `K(t) = π / (2 AGM(1, √(1 - t)))` and `E` follows from Gauss's series for
//! the deficit `1 - E/K = t/2 + Σ_{n≥1} 2^{n-1} c_n²` with
//! `c_n = (a_{n-1} - b_{n-1})/2` along the AGM iteration started at
//! `(1, √(1 - t))`.

use std::f64::consts::FRAC_PI_2;

use crate::error::{domain, Error, Result};

const AGM_MAX_ITER: usize = 60;

/// Full AGM iteration trace `[(a_0, g_0), (a_1, g_1), …]` until
/// `|a - g| <= 1e-15·a`.
pub fn agm_sequence(a: f64, b: f64) -> Result<Vec<(f64, f64)>> {
    if !(a > 0.0 && b > 0.0 && a.is_finite() && b.is_finite()) {
        return Err(domain(format!("AGM needs positive finite arguments, got ({a}, {b})")));
    }
    let (mut x, mut y) = if a >= b { (a, b) } else { (b, a) };
    let mut trace = vec![(x, y)];
    for _ in 0..AGM_MAX_ITER {
        if (x - y).abs() <= 1e-15 * x {
            return Ok(trace);
        }
        let nx = 0.5 * (x + y);
        let ny = (x * y).sqrt();
        x = nx;
        y = ny.min(nx);
        trace.push((x, y));
    }
    Err(Error::Convergence { what: "AGM iteration".into(), achieved: (x - y).abs() })
}

/// Arithmetic-geometric mean of two positive numbers.
pub fn agm(a: f64, b: f64) -> Result<f64> {
    let trace = agm_sequence(a, b)?;
    let (x, y) = trace[trace.len() - 1];
    Ok(0.5 * (x + y))
}

/// `AGM(1, 1 + δ) - 1` without cancellation, for `δ > -1`.
///
/// Runs the iteration on the offsets `a_n - 1`, `g_n - 1`.
pub fn agm_one_plus_minus_one(delta: f64) -> f64 {
    let (mut x, mut y) = (0.0_f64, delta);
    for _ in 0..AGM_MAX_ITER {
        if (x - y).abs() <= 1e-16 * (1.0 + x.abs().max(y.abs())) {
            break;
        }
        let nx = 0.5 * (x + y);
        let prod = x + y + x * y;
        let ny = prod / ((1.0 + prod).sqrt() + 1.0);
        x = nx;
        y = ny;
    }
    0.5 * (x + y)
}

fn check_open_unit(t: f64, what: &str) -> Result<()> {
    if !(0.0..1.0).contains(&t) {
        return Err(domain(format!("{what} needs t in [0, 1), got {t}")));
    }
    Ok(())
}

/// Complete elliptic integral of the first kind `K(t)`, `t ∈ [0, 1)`.
pub fn elliptic_k(t: f64) -> Result<f64> {
    check_open_unit(t, "K(t)")?;
    Ok(FRAC_PI_2 / agm(1.0, (1.0 - t).sqrt())?)
}

/// Gauss's series for `1 - E(x)/K(x)`, `x ∈ (0, 1)`.
///
/// The AGM differences are propagated as `d_n = a_n - b_n` through
/// `d_n = d_{n-1}² / (2 (√a_{n-1} + √b_{n-1})²)`, which keeps full relative
/// accuracy when `x` is small.
pub fn gauss_ek_deficit(x: f64) -> Result<f64> {
    if !(x > 0.0 && x < 1.0) {
        return Err(domain(format!("Gauss deficit needs x in (0, 1), got {x}")));
    }
    let mut a = 1.0_f64;
    let mut b = (1.0 - x).sqrt();
    let mut d = x / (1.0 + b);
    let mut sum = 0.5 * x;
    let mut weight = 1.0; // 2^{n-1} for n = 1
    for _ in 0..AGM_MAX_ITER {
        let c = 0.5 * d;
        let term = weight * c * c;
        sum += term;
        if term <= 1e-18 * sum {
            return Ok(sum);
        }
        let root = a.sqrt() + b.sqrt();
        let nd = d * d / (2.0 * root * root);
        let na = 0.5 * (a + b);
        b = (a * b).sqrt();
        a = na;
        d = nd;
        weight *= 2.0;
    }
    Err(Error::Convergence { what: "Gauss deficit series".into(), achieved: d })
}

/// Complete elliptic integral of the second kind `E(t)`, `t ∈ [0, 1]`.
pub fn elliptic_e(t: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&t) {
        return Err(domain(format!("E(t) needs t in [0, 1], got {t}")));
    }
    if t == 1.0 {
        return Ok(1.0);
    }
    if t == 0.0 {
        return Ok(FRAC_PI_2);
    }
    Ok(elliptic_k(t)? * (1.0 - gauss_ek_deficit(t)?))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn agm_examples() {
        assert_eq!(agm(1.0, 1.0).unwrap(), 1.0);
        assert_eq!(agm(1.0, 2f64.sqrt()).unwrap(), agm(2f64.sqrt(), 1.0).unwrap());
        assert!((agm(1.0, 2f64.sqrt()).unwrap() - 1.198_140_234_735_592_2).abs() < 1e-15);
        assert!(agm(0.0, 1.0).is_err());
        assert!(agm(-1.0, 1.0).is_err());
    }

    #[test]
    fn k_and_e_endpoints() {
        assert!((elliptic_k(0.0).unwrap() - FRAC_PI_2).abs() < 1e-16);
        assert!((elliptic_e(0.0).unwrap() - FRAC_PI_2).abs() < 1e-16);
        assert_eq!(elliptic_e(1.0).unwrap(), 1.0);
        assert!(elliptic_k(1.0).is_err());
        assert!(elliptic_e(1.5).is_err());
        assert!((elliptic_k(0.75).unwrap() - 2.156_515_647_499_643).abs() < 1e-13);
    }

    #[test]
    fn offset_agm_matches_plain_agm() {
        for &d in &[1e-9, 1e-3, 0.5, 3.0] {
            let direct = agm(1.0, 1.0 + d).unwrap() - 1.0;
            let stable = agm_one_plus_minus_one(d);
            assert!((direct - stable).abs() < 1e-15 * (1.0 + direct), "{d}");
        }
        // Small offsets keep relative accuracy: AGM(1, 1+δ) - 1 ≈ δ/2 - δ²/16.
        let d = 1e-12;
        let v = agm_one_plus_minus_one(d);
        assert!((v / (0.5 * d) - 1.0).abs() < 1e-12);
    }

    #[test]
    fn deficit_small_argument_slope() {
        let x = 1e-8;
        assert!((gauss_ek_deficit(x).unwrap() / x - 0.5).abs() < 1e-8);
        assert!(gauss_ek_deficit(0.0).is_err());
        assert!(gauss_ek_deficit(1.0).is_err());
    }
}
