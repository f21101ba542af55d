//! Numerical integration engines used by the oracle.
//!
//! - [`integrate`]: globally adaptive bisection with the 15-point
//!   Gauss–Kronrod rule (7-point Gauss embedded) on a finite interval.
//! - [`integrate_line`]: the same on `(-∞, ∞)` after `x = c + w tan θ`, which
//!   maps Cauchy-like tails to bounded, smooth integrands.
//! - [`integrate_periodic`]: trapezoid rule with doubling, spectrally
//!   accurate for smooth periodic integrands.

use std::cmp::Ordering;
use std::collections::BinaryHeap;
use std::f64::consts::FRAC_PI_2;

use crate::error::{Error, Result};

const XGK: [f64; 8] = [
    0.991_455_371_120_812_6,
    0.949_107_912_342_758_5,
    0.864_864_423_359_769_1,
    0.741_531_185_599_394_4,
    0.586_087_235_467_691_1,
    0.405_845_151_377_397_2,
    0.207_784_955_007_898_5,
    0.0,
];
const WGK: [f64; 8] = [
    0.022_935_322_010_529_22,
    0.063_092_092_629_978_55,
    0.104_790_010_322_250_18,
    0.140_653_259_715_525_92,
    0.169_004_726_639_267_9,
    0.190_350_578_064_785_4,
    0.204_432_940_075_298_9,
    0.209_482_141_084_727_83,
];
const WG: [f64; 4] = [
    0.129_484_966_168_869_7,
    0.279_705_391_489_276_7,
    0.381_830_050_505_118_9,
    0.417_959_183_673_469_4,
];

/// Tolerances and budget for adaptive integration.
#[derive(Debug, Clone, Copy)]
pub struct QuadOptions {
    /// Absolute error target.
    pub abs_tol: f64,
    /// Relative error target (applied to the running estimate).
    pub rel_tol: f64,
    /// Maximum number of panels before giving up.
    pub max_panels: usize,
}

impl Default for QuadOptions {
    fn default() -> Self {
        Self { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 10_000 }
    }
}

impl QuadOptions {
    /// Options with the given absolute tolerance and default remaining fields.
    pub fn with_abs(abs_tol: f64) -> Self {
        Self { abs_tol, ..Self::default() }
    }
}

/// Integral estimate with its error bound.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadEstimate {
    pub value: f64,
    pub error: f64,
    pub panels: usize,
}

#[derive(Debug, Clone, Copy)]
struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error.total_cmp(&other.error) == Ordering::Equal
    }
}
impl Eq for Panel {}
impl PartialOrd for Panel {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl Ord for Panel {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.total_cmp(&other.error)
    }
}

/// One application of the Gauss–Kronrod 7/15 pair on `[a, b]`.
///
/// Returns `(kronrod estimate, error estimate)` using the customary
/// conservative error heuristic.
pub fn gauss_kronrod_15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> (f64, f64) {
    let center = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(center);
    let mut res_g = fc * WG[3];
    let mut res_k = fc * WGK[7];
    let mut res_abs = res_k.abs();
    let mut fv1 = [0.0; 7];
    let mut fv2 = [0.0; 7];
    for j in 0..7 {
        let dx = half * XGK[j];
        let f1 = f(center - dx);
        let f2 = f(center + dx);
        fv1[j] = f1;
        fv2[j] = f2;
        res_k += WGK[j] * (f1 + f2);
        res_abs += WGK[j] * (f1.abs() + f2.abs());
        if j % 2 == 1 {
            res_g += WG[j / 2] * (f1 + f2);
        }
    }
    let mean = 0.5 * res_k;
    let mut res_asc = WGK[7] * (fc - mean).abs();
    for j in 0..7 {
        res_asc += WGK[j] * ((fv1[j] - mean).abs() + (fv2[j] - mean).abs());
    }
    let result = res_k * half;
    let res_abs = res_abs * half.abs();
    let res_asc = res_asc * half.abs();
    let mut err = ((res_k - res_g) * half).abs();
    if res_asc != 0.0 && err != 0.0 {
        err = res_asc * (200.0 * err / res_asc).powf(1.5).min(1.0);
    }
    if res_abs > f64::MIN_POSITIVE / (50.0 * f64::EPSILON) {
        err = err.max(50.0 * f64::EPSILON * res_abs);
    }
    (result, err)
}

/// Adaptive integration over `[a, b]` split first at the given breakpoints.
///
/// Breakpoints outside `(a, b)` are ignored. Returns a convergence error when
/// the panel budget is exhausted before `error <= max(abs_tol, rel_tol·|value|)`.
pub fn integrate<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadEstimate> {
    let est = integrate_unchecked(&f, a, b, breaks, opts);
    if !est.value.is_finite() {
        return Err(Error::Convergence { what: "adaptive quadrature (non-finite integrand)".into(), achieved: f64::NAN });
    }
    if est.error > target(opts, est.value) {
        return Err(Error::Convergence { what: "adaptive quadrature".into(), achieved: est.error });
    }
    Ok(est)
}

fn target(opts: QuadOptions, value: f64) -> f64 {
    opts.abs_tol.max(opts.rel_tol * value.abs())
}

/// Like [`integrate`] but always returns the best estimate reached.
pub fn integrate_unchecked<F: Fn(f64) -> f64>(
    f: &F,
    a: f64,
    b: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> QuadEstimate {
    let mut cuts: Vec<f64> = breaks.iter().copied().filter(|x| *x > a && *x < b && x.is_finite()).collect();
    cuts.push(a);
    cuts.push(b);
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut heap = BinaryHeap::new();
    for w in cuts.windows(2) {
        let (value, error) = gauss_kronrod_15(f, w[0], w[1]);
        heap.push(Panel { a: w[0], b: w[1], value, error });
    }
    let (mut total, mut err) = sums(&heap);
    // Error of panels too small to bisect in floating point.
    let mut stuck = 0.0;
    while err + stuck > target(opts, total) && heap.len() < opts.max_panels {
        let worst = match heap.pop() {
            Some(p) if p.error > 0.0 => p,
            Some(p) => {
                heap.push(p);
                break;
            }
            None => break,
        };
        let mid = 0.5 * (worst.a + worst.b);
        if !(mid > worst.a && mid < worst.b) {
            stuck += worst.error;
            err -= worst.error;
            heap.push(Panel { error: 0.0, ..worst });
            continue;
        }
        let (v1, e1) = gauss_kronrod_15(f, worst.a, mid);
        let (v2, e2) = gauss_kronrod_15(f, mid, worst.b);
        total += v1 + v2 - worst.value;
        err += e1 + e2 - worst.error;
        heap.push(Panel { a: worst.a, b: mid, value: v1, error: e1 });
        heap.push(Panel { a: mid, b: worst.b, value: v2, error: e2 });
        if heap.len() % 256 == 0 {
            let s = sums(&heap);
            total = s.0;
            err = s.1;
        }
    }
    let (total, err) = sums(&heap);
    QuadEstimate { value: total, error: err + stuck, panels: heap.len() }
}

fn sums(heap: &BinaryHeap<Panel>) -> (f64, f64) {
    let mut panels: Vec<&Panel> = heap.iter().collect();
    panels.sort_by(|x, y| x.a.total_cmp(&y.a));
    let mut v = 0.0;
    let mut e = 0.0;
    for p in panels {
        v += p.value;
        e += p.error;
    }
    (v, e)
}

/// Integral over the whole real line via `x = center + width·tan θ`.
///
/// `breaks` are given in the `x` variable and become initial panel ends.
pub fn integrate_line<F: Fn(f64) -> f64>(
    f: F,
    center: f64,
    width: f64,
    breaks: &[f64],
    opts: QuadOptions,
) -> Result<QuadEstimate> {
    let g = |theta: f64| {
        let t = theta.tan();
        let v = f(center + width * t);
        if v == 0.0 {
            0.0
        } else {
            v * width * (1.0 + t * t)
        }
    };
    let tb: Vec<f64> = breaks.iter().map(|x| ((x - center) / width).atan()).collect();
    integrate(g, -FRAC_PI_2, FRAC_PI_2, &tb, opts)
}

/// Integral of a `period`-periodic function over one period starting at `a`.
///
/// Trapezoid rule with point doubling from 64 up to 2²¹ points; the error
/// estimate is the change between the last two levels.
pub fn integrate_periodic<F: Fn(f64) -> f64>(f: F, a: f64, period: f64, opts: QuadOptions) -> Result<QuadEstimate> {
    let mut n = 64usize;
    let h0 = period / n as f64;
    let mut sum: f64 = (0..n).map(|k| f(a + h0 * k as f64)).sum();
    let mut prev = sum * h0;
    loop {
        // Add the midpoints of the current grid.
        let h = period / n as f64;
        let mids: f64 = (0..n).map(|k| f(a + h * (k as f64 + 0.5))).sum();
        sum += mids;
        n *= 2;
        let cur = sum * period / n as f64;
        let err = (cur - prev).abs();
        if err <= target(opts, cur) && n >= 256 {
            return Ok(QuadEstimate { value: cur, error: err, panels: n });
        }
        if n >= (1 << 21) {
            return Err(Error::Convergence { what: "periodic trapezoid".into(), achieved: err });
        }
        prev = cur;
    }
}
