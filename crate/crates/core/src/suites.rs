//! Executable acceptance checks.
//!
//! Each numbered criterion is a self-contained, seeded computation returning a
//! [`CheckReport`]: a verdict, a one-line summary, the headline metrics and a
//! dump of every failing case. The integration test-suite and the CLI's
//! `check` subcommand both run these functions, so the two can never drift.
//!
//! | id | criterion | suite |
//! |----|-----------|-------|
//! | 1 | closed forms agree with quadrature | `closed-form` |
//! | 2 | f-divergences are symmetric | `symmetry` |
//! | 3 | SL(2,R) invariance of `chi` and KL | `invariance` |
//! | 4 | exact J-polynomials | `series` |
//! | 5 | regression recovers polynomial coefficients | `series` |
//! | 6 | power-chi Taylor series and its gate | `series` |
//! | 7 | bivariate KL is asymmetric | `bivariate` |
//! | 8 | elliptic integrals and their bounds | `elliptic` |
//! | 9 | `√KL`, `√Bhat` are metrics, `KL^α` (α > 1/2) is not | `metric` |
//! | 10 | negative definiteness / positive semidefinite kernels | `negdef` |
//! | 11 | Chernoff exponent sits at 1/2 | `chernoff` |
//! | 12 | every `h_f` is strictly increasing | `monotone` |
//! | 13 | the Gromov defect grows without bound | `metric` |
//! | 14 | circular, wrapped and log-Cauchy reductions; Boole map | `families` |
//! | 15 | angular Bhattacharyya-coefficient integral | `angular` |
//! | 16 | differential entropies | `entropy` |

use std::fmt;
use std::str::FromStr;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use rayon::prelude::*;

use crate::cauchy_core::{chi, lambda_from_chi, mobius_apply, CauchyParam, MoebiusMap};
use crate::chi_series::{taylor_f_divergence, SeriesVerdict};
use crate::closed_form::{
    bc_skewed_angular, cauchy_entropy, divergence, eval_f64, h_of_chi, j_polynomial, mixture_family_kl,
    two_mixture_entropy, DivergenceKind, MixtureTwo,
};
use crate::error::{Error, Result};
use crate::families::{
    boole_kl_gap, boole_pushforward_check, family_divergence, verify_wrapped_map, CircularParam, FamilyParam,
    LogCauchyParam, WrappedMapCandidate, WrappedParam,
};
use crate::geometry_analysis::{
    bc_kernel_psd_check, chernoff_optimizer, fit_h_polynomial, gromov_four_point_probe, metric_violation_search,
    negative_definiteness_check, triangle_scan, weighted_polyfit, FitTarget, GromovKind, MetricSpec,
};
use crate::oracle::{
    quad_bhattacharyya, quad_elliptic_e, quad_elliptic_k, quad_entropy, quad_f_divergence, quad_kl_bivariate,
    quad_plane, quad_skewed_bc, BivariateCauchy, DensitySpec, GeneratorSpec,
};
use crate::sampling::{random_pairs, random_points, rng, uniform};
use crate::special_fn::{elliptic_e, elliptic_k, gauss_ek_deficit};

/// Location and scale ranges of the seeded parameter draws.
pub const LOC_RANGE: (f64, f64) = (-5.0, 5.0);
pub const SCALE_RANGE: (f64, f64) = (0.1, 10.0);

/// Maximum number of failing cases kept in a report.
const MAX_FAILURES: usize = 20;

/// Outcome of one acceptance criterion.
#[derive(Debug, Clone, PartialEq)]
pub struct CheckReport {
    pub id: u8,
    pub name: &'static str,
    pub passed: bool,
    pub summary: String,
    /// Headline numbers in a stable order.
    pub metrics: Vec<(String, f64)>,
    /// Human-readable description of failing cases (truncated).
    pub failures: Vec<String>,
}

impl CheckReport {
    /// Looks up a metric by name.
    pub fn metric(&self, name: &str) -> Option<f64> {
        self.metrics.iter().find(|(k, _)| k == name).map(|(_, v)| *v)
    }

    /// `[PASS] 01 name: summary`.
    pub fn line(&self) -> String {
        format!("[{}] {:02} {}: {}", if self.passed { "PASS" } else { "FAIL" }, self.id, self.name, self.summary)
    }
}

/// Metric and failure accumulator behind every check.
struct Acc {
    metrics: Vec<(String, f64)>,
    failures: Vec<String>,
    failed: usize,
}

impl Acc {
    fn new() -> Self {
        Self { metrics: vec![], failures: vec![], failed: 0 }
    }

    fn metric(&mut self, name: impl Into<String>, value: f64) {
        self.metrics.push((name.into(), value));
    }

    fn require(&mut self, ok: bool, describe: impl FnOnce() -> String) {
        if !ok {
            self.failed += 1;
            if self.failures.len() < MAX_FAILURES {
                self.failures.push(describe());
            }
        }
    }

    fn finish(self, id: u8, name: &'static str, summary: String) -> CheckReport {
        let passed = self.failed == 0;
        let summary = if passed { summary } else { format!("{summary}; {} failing case(s)", self.failed) };
        CheckReport { id, name, passed, summary, metrics: self.metrics, failures: self.failures }
    }
}

fn errored(id: u8, name: &'static str, err: Error) -> CheckReport {
    CheckReport {
        id,
        name,
        passed: false,
        summary: format!("aborted: {err}"),
        metrics: vec![],
        failures: vec![err.to_string()],
    }
}

fn rel_err(value: f64, reference: f64) -> f64 {
    if value == reference {
        0.0
    } else {
        (value - reference).abs() / reference.abs().max(f64::MIN_POSITIVE)
    }
}

fn fmt_pair(p: &CauchyParam, q: &CauchyParam) -> String {
    format!("p=({}, {}) q=({}, {})", p.location(), p.scale(), q.location(), q.scale())
}

/// Named groups of criteria, as exposed by `check --suite`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    ClosedForm,
    Symmetry,
    Invariance,
    Series,
    Bivariate,
    Elliptic,
    Metric,
    Negdef,
    Chernoff,
    Monotone,
    Families,
    Angular,
    Entropy,
    All,
}

impl Suite {
    /// Every suite, in criterion order.
    pub const ALL: [Suite; 14] = [
        Suite::ClosedForm,
        Suite::Symmetry,
        Suite::Invariance,
        Suite::Series,
        Suite::Bivariate,
        Suite::Elliptic,
        Suite::Metric,
        Suite::Negdef,
        Suite::Chernoff,
        Suite::Monotone,
        Suite::Families,
        Suite::Angular,
        Suite::Entropy,
        Suite::All,
    ];

    /// Criterion ids covered by the suite.
    pub fn criteria(&self) -> Vec<u8> {
        match self {
            Suite::ClosedForm => vec![1],
            Suite::Symmetry => vec![2],
            Suite::Invariance => vec![3],
            Suite::Series => vec![4, 5, 6],
            Suite::Bivariate => vec![7],
            Suite::Elliptic => vec![8],
            Suite::Metric => vec![9, 13],
            Suite::Negdef => vec![10],
            Suite::Chernoff => vec![11],
            Suite::Monotone => vec![12],
            Suite::Families => vec![14],
            Suite::Angular => vec![15],
            Suite::Entropy => vec![16],
            Suite::All => (1..=16).collect(),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::ClosedForm => "closed-form",
            Suite::Symmetry => "symmetry",
            Suite::Invariance => "invariance",
            Suite::Series => "series",
            Suite::Bivariate => "bivariate",
            Suite::Elliptic => "elliptic",
            Suite::Metric => "metric",
            Suite::Negdef => "negdef",
            Suite::Chernoff => "chernoff",
            Suite::Monotone => "monotone",
            Suite::Families => "families",
            Suite::Angular => "angular",
            Suite::Entropy => "entropy",
            Suite::All => "all",
        })
    }
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Suite::ALL
            .into_iter()
            .find(|suite| suite.to_string() == s)
            .ok_or_else(|| {
                let names: Vec<String> = Suite::ALL.iter().map(|s| s.to_string()).collect();
                Error::Parse(format!("unknown suite '{s}' (expected one of {})", names.join(", ")))
            })
    }
}

/// Runs one criterion by id (1..=16).
pub fn run_criterion(id: u8) -> Result<CheckReport> {
    let (name, f): (&'static str, fn() -> Result<CheckReport>) = match id {
        1 => ("closed forms vs quadrature", check_closed_forms),
        2 => ("symmetry of f-divergences", check_symmetry),
        3 => ("SL(2,R) invariance", check_invariance),
        4 => ("J-polynomials", check_j_polynomials),
        5 => ("polynomial regression", check_regression),
        6 => ("power-chi Taylor series", check_taylor_series),
        7 => ("bivariate asymmetry", check_bivariate),
        8 => ("elliptic integrals", check_elliptic),
        9 => ("metrization exponent", check_metrization),
        10 => ("embeddability kernels", check_embeddability),
        11 => ("Chernoff exponent", check_chernoff),
        12 => ("monotone h_f", check_monotone),
        13 => ("Gromov four-point probe", check_gromov),
        14 => ("Cauchy-type families", check_families),
        15 => ("angular BC integral", check_angular),
        16 => ("differential entropy", check_entropy),
        _ => return Err(Error::Parse(format!("criterion id must lie in 1..=16, got {id}"))),
    };
    Ok(f().unwrap_or_else(|e| errored(id, name, e)))
}

/// Runs every criterion of a suite, in id order.
pub fn run_suite(suite: Suite) -> Vec<CheckReport> {
    suite.criteria().into_iter().map(|id| run_criterion(id).expect("suite ids are valid")).collect()
}

fn check_closed_forms() -> Result<CheckReport> {
    let start = Instant::now();
    let pairs = random_pairs(1, 100, LOC_RANGE, SCALE_RANGE);
    let kinds = DivergenceKind::closed_form_catalog();
    let mut acc = Acc::new();
    let rows: Vec<(String, f64)> = pairs
        .par_iter()
        .flat_map_iter(|(p, q)| kinds.iter().map(move |k| (*p, *q, *k)))
        .map(|(p, q, kind)| -> Result<(String, f64)> {
            let closed = divergence(&kind, &p, &q)?;
            let tol = (1e-10 * closed.abs()).max(5e-14);
            let (ps, qs) = (DensitySpec::Cauchy(p), DensitySpec::Cauchy(q));
            let oracle = match kind {
                DivergenceKind::Bhattacharyya => quad_bhattacharyya(&ps, &qs, tol)?,
                DivergenceKind::Chernoff => chernoff_optimizer(&p, &q)?.1,
                _ => quad_f_divergence(&GeneratorSpec::for_kind(&kind)?, &ps, &qs, tol)?,
            };
            Ok((format!("{kind} {}: closed {closed:e} oracle {oracle:e}", fmt_pair(&p, &q)), rel_err(closed, oracle)))
        })
        .collect::<Result<_>>()?;
    let mut worst = 0.0f64;
    for (label, err) in &rows {
        worst = worst.max(*err);
        acc.require(*err <= 1e-7, || format!("{label} rel err {err:e}"));
    }
    let secs = start.elapsed().as_secs_f64();
    acc.require(secs < 60.0, || format!("runtime {secs:.1} s exceeds 60 s"));
    acc.metric("cases", rows.len() as f64);
    acc.metric("max_rel_err", worst);
    acc.metric("seconds", secs);
    Ok(acc.finish(
        1,
        "closed forms vs quadrature",
        format!("{} kinds x 100 pairs, max rel err {worst:.2e} (<= 1e-7), {secs:.1} s", kinds.len()),
    ))
}

/// Kumar-Chhina plus five more generators, one of them user-registered.
fn symmetry_generators() -> Result<Vec<GeneratorSpec>> {
    Ok(vec![
        GeneratorSpec::for_kind(&DivergenceKind::KumarChhina)?,
        GeneratorSpec::for_kind(&DivergenceKind::KL)?,
        GeneratorSpec::for_kind(&DivergenceKind::ChiSquared)?,
        GeneratorSpec::for_kind(&DivergenceKind::TV)?,
        GeneratorSpec::for_kind(&DivergenceKind::Alpha(0.5))?,
        GeneratorSpec::custom("arctan", |u: f64| (u - 1.0) * (u - 1.0).atan(), false)?,
    ])
}

fn check_symmetry() -> Result<CheckReport> {
    let gens = symmetry_generators()?;
    let pairs = random_pairs(2, 20, LOC_RANGE, SCALE_RANGE);
    let mut acc = Acc::new();
    let mut worst = 0.0f64;
    for g in &gens {
        for (p, q) in &pairs {
            let (ps, qs) = (DensitySpec::Cauchy(*p), DensitySpec::Cauchy(*q));
            let fwd = quad_f_divergence(g, &ps, &qs, 1e-11)?;
            let rev = quad_f_divergence(g, &qs, &ps, 1e-11)?;
            let err = rel_err(fwd, rev);
            worst = worst.max(err);
            acc.require(err <= 1e-7, || format!("{} {}: {fwd:e} vs {rev:e}", g.name(), fmt_pair(p, q)));
        }
    }
    acc.metric("max_rel_gap", worst);
    let names: Vec<&str> = gens.iter().map(|g| g.name()).collect();
    Ok(acc.finish(
        2,
        "symmetry of f-divergences",
        format!("[{}] on 20 pairs, max forward/reverse rel gap {worst:.2e} (<= 1e-7)", names.join(", ")),
    ))
}

fn check_invariance() -> Result<CheckReport> {
    let mut r = rng(3);
    let mut acc = Acc::new();
    let (mut worst_chi, mut worst_kl) = (0.0f64, 0.0f64);
    for _ in 0..100 {
        let p = crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE);
        let q = crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE);
        // a ∈ ±[0.2, 2], b, c ∈ [-2, 2], d chosen for det = 1.
        let a = uniform(&mut r, 0.2, 2.0) * if uniform(&mut r, 0.0, 1.0) < 0.5 { -1.0 } else { 1.0 };
        let (b, c) = (uniform(&mut r, -2.0, 2.0), uniform(&mut r, -2.0, 2.0));
        let map = MoebiusMap::new(a, b, c, (1.0 + b * c) / a)?;
        let (mp, mq) = (mobius_apply(&map, &p), mobius_apply(&map, &q));
        let e_chi = rel_err(chi(&mp, &mq), chi(&p, &q));
        let kl = divergence(&DivergenceKind::KL, &p, &q)?;
        let e_kl = rel_err(divergence(&DivergenceKind::KL, &mp, &mq)?, kl);
        worst_chi = worst_chi.max(e_chi);
        worst_kl = worst_kl.max(e_kl);
        acc.require(e_chi <= 1e-10 && e_kl <= 1e-9, || {
            format!("{} map ({a}, {b}, {c}): chi err {e_chi:e}, KL err {e_kl:e}", fmt_pair(&p, &q))
        });
    }
    acc.metric("max_rel_err_chi", worst_chi);
    acc.metric("max_rel_err_kl", worst_kl);
    Ok(acc.finish(
        3,
        "SL(2,R) invariance",
        format!("100 maps, max rel err chi {worst_chi:.2e} (<= 1e-10), KL {worst_kl:.2e} (<= 1e-9)"),
    ))
}

fn rationals(list: &[(i64, i64)]) -> Vec<BigRational> {
    list.iter().map(|&(n, d)| BigRational::new(BigInt::from(n), BigInt::from(d))).collect()
}

fn check_j_polynomials() -> Result<CheckReport> {
    let expected = [
        (2, rationals(&[(1, 1), (1, 1)])),
        (3, rationals(&[(1, 1), (3, 1), (3, 2)])),
        (4, rationals(&[(1, 1), (6, 1), (15, 2), (5, 2)])),
        (5, rationals(&[(1, 1), (10, 1), (45, 2), (35, 2), (35, 8)])),
    ];
    let mut acc = Acc::new();
    for (a, want) in &expected {
        let got = j_polynomial(*a)?;
        acc.require(&got == want, || format!("J_{a} = {got:?}, expected {want:?}"));
    }
    let j6 = j_polynomial(6)?;
    let p = DensitySpec::Cauchy(CauchyParam::standard());
    let mut worst = 0.0f64;
    for u in [0.1, 0.5, 1.0, 2.0, 5.0] {
        let q = DensitySpec::Cauchy(CauchyParam::new(0.0, lambda_from_chi(u))?);
        let poly = eval_f64(&j6, u);
        let quad = quad_skewed_bc(6.0, &p, &q, 1e-12 * poly)?;
        let err = rel_err(poly, quad);
        worst = worst.max(err);
        acc.require(err <= 1e-7, || format!("J_6({u}) = {poly:e}, quadrature {quad:e}"));
    }
    acc.metric("j6_max_rel_err", worst);
    acc.metric("j6_leading", eval_f64(&j6[5..], 1.0));
    Ok(acc.finish(
        4,
        "J-polynomials",
        format!("J_2..J_5 exact; J_6 vs quadrature at 5 chi values, max rel err {worst:.2e} (<= 1e-7)"),
    ))
}

fn check_regression() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let j6 = fit_h_polynomial(FitTarget::J(6), 5, 60, 5)?;
    let c6 = fit_h_polynomial(FitTarget::ChiK(6), 5, 60, 5)?;
    acc.require((0.99..=1.01).contains(&j6[0]), || format!("J_6 constant {} outside [0.99, 1.01]", j6[0]));
    acc.require(c6[0].abs() <= 1e-2, || format!("order-6 chi constant {} exceeds 1e-2", c6[0]));
    acc.metric("j6_constant", j6[0]);
    acc.metric("j6_leading", j6[5]);
    acc.metric("chi6_constant", c6[0]);
    Ok(acc.finish(
        5,
        "polynomial regression",
        format!("J_6 constant {:.12}, leading {:.9}; order-6 chi constant {:.3e}", j6[0], j6[5], c6[0]),
    ))
}

fn check_taylor_series() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let p = CauchyParam::new(0.6, 1.2)?;
    let q = CauchyParam::standard();
    let run = taylor_f_divergence(&DivergenceKind::KL, &p, &q, 1e-7, 40)?;
    let target = (13.0f64 / 12.0).ln();
    let err = (run.value - target).abs();
    acc.require(err <= 1e-6, || format!("40-term KL series {} vs log(13/12) {target}", run.value));
    acc.metric("kl_series_value", run.value);
    acc.metric("kl_series_abs_err", err);
    acc.metric("kl_series_terms", run.terms_used as f64);
    let sweep = [
        (0.2, SeriesVerdict::Converged),
        (0.24, SeriesVerdict::Converged),
        (0.26, SeriesVerdict::Diverged),
        (0.3, SeriesVerdict::Diverged),
    ];
    let mut verdicts = Vec::new();
    for (u, want) in sweep {
        let q = CauchyParam::new(0.0, lambda_from_chi(u))?;
        let r = taylor_f_divergence(&DivergenceKind::KL, &CauchyParam::standard(), &q, 1e-7, 600)?;
        acc.require(r.verdict == want, || format!("chi = {u}: {:?} after {} terms, expected {want:?}", r.verdict, r.terms_used));
        acc.metric(format!("terms_at_chi_{u}"), r.terms_used as f64);
        verdicts.push(format!("{u}:{:?}", r.verdict));
    }
    Ok(acc.finish(
        6,
        "power-chi Taylor series",
        format!("KL series {:.10} (err {err:.1e}); gate sweep {}", run.value, verdicts.join(" ")),
    ))
}

/// The two planar integrals `∬ log(1 + x²/100 + 100 (y - c)²) / (1 + x² + y²)^{3/2}`.
pub fn bivariate_log_integral(shift: f64, tol: f64) -> Result<f64> {
    let f = |x: f64, y: f64| {
        let r2 = 1.0 + x * x + y * y;
        (x * x / 100.0 + 100.0 * (y - shift) * (y - shift)).ln_1p() / (r2 * r2.sqrt())
    };
    let y_breaks = move |_x: f64| vec![-1.0, 0.0, 1.0, shift - 1.0, shift - 0.1, shift, shift + 0.1, shift + 1.0];
    Ok(quad_plane(f, &[-10.0, -1.0, 0.0, 1.0, 10.0], y_breaks, tol)?.value)
}

fn check_bivariate() -> Result<CheckReport> {
    let start = Instant::now();
    let mut acc = Acc::new();
    let shifted = bivariate_log_integral(-10.0, 1e-4)?;
    let centered = bivariate_log_integral(0.0, 1e-4)?;
    acc.require((shifted - 57.953).abs() <= 0.05, || format!("shifted integral {shifted} vs 57.953"));
    acc.require((centered - 30.1523).abs() <= 0.05, || format!("centred integral {centered} vs 30.1523"));
    let p0 = BivariateCauchy::new([0.0, 0.0], 1.0, 0.0, 1.0)?;
    let q = BivariateCauchy::new([0.0, -10.0], 100.0, 0.0, 0.01)?;
    let fwd = quad_kl_bivariate(&p0, &q, 1e-6)?;
    let rev = quad_kl_bivariate(&q, &p0, 1e-6)?;
    acc.require(fwd - rev > 1.0, || format!("forward {fwd} - reverse {rev} <= 1"));
    let secs = start.elapsed().as_secs_f64();
    acc.require(secs < 300.0, || format!("runtime {secs:.1} s exceeds 300 s"));
    acc.metric("integral_shifted", shifted);
    acc.metric("integral_centered", centered);
    acc.metric("kl_forward", fwd);
    acc.metric("kl_reverse", rev);
    acc.metric("seconds", secs);
    Ok(acc.finish(
        7,
        "bivariate asymmetry",
        format!("integrals {shifted:.6} / {centered:.6}; KL forward {fwd:.6} vs reverse {rev:.6} (gap {:.3})", fwd - rev),
    ))
}

fn check_elliptic() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let mut grid: Vec<f64> = (0..10).map(|k| k as f64 / 10.0).collect();
    grid.push(0.99);
    let (mut worst_k, mut worst_def) = (0.0f64, 0.0f64);
    for &t in &grid {
        let (k, kq) = (elliptic_k(t)?, quad_elliptic_k(t)?);
        worst_k = worst_k.max((k - kq).abs());
        acc.require((k - kq).abs() <= 1e-10, || format!("K({t}) = {k} vs quadrature {kq}"));
        if t > 0.0 {
            let direct = 1.0 - quad_elliptic_e(t)? / kq;
            let series = gauss_ek_deficit(t)?;
            worst_def = worst_def.max((series - direct).abs());
            acc.require((series - direct).abs() <= 1e-10, || format!("deficit({t}) = {series} vs {direct}"));
            let lo = (4.0 / (1.0 - t).sqrt()).ln();
            acc.require(lo <= k && k <= 4.0 / (3.0 + t) * lo, || format!("K({t}) = {k} outside [{lo}, {}]", 4.0 / (3.0 + t) * lo));
        }
    }
    // Taylor coefficients of the deficit from a fit on small x.
    let xs: Vec<f64> = (1..=200).map(|k| 0.1 * k as f64 / 200.0).collect();
    let ys: Vec<f64> = xs.iter().map(|&x| gauss_ek_deficit(x)).collect::<Result<_>>()?;
    let coef = weighted_polyfit(&xs, &ys, &[1, 2, 3, 4, 5, 6, 7, 8], true)?;
    let want = [0.5, 1.0 / 16.0, 1.0 / 32.0, 41.0 / 2048.0];
    for (i, w) in want.iter().enumerate() {
        acc.require((coef[i] - w).abs() <= 1e-4, || format!("deficit coefficient x^{} = {} vs {w}", i + 1, coef[i]));
        acc.metric(format!("deficit_coef_{}", i + 1), coef[i]);
    }
    // Ratio bounds and monotonicity on 10³ interior points.
    let mut prev = f64::INFINITY;
    for k in 1..=1000 {
        let x = k as f64 / 1001.0;
        let ratio = elliptic_e(x)? / elliptic_k(x)?;
        let gauss_bound = 0.5 - x / 4.0 + 0.5 * (1.0 - x).sqrt();
        let r = x.sqrt();
        let log_bound = 2.0 * r / (r.ln_1p() - (-r).ln_1p());
        acc.require(ratio < prev, || format!("E/K not decreasing at x = {x}"));
        acc.require(ratio <= gauss_bound, || format!("E/K = {ratio} above {gauss_bound} at x = {x}"));
        acc.require(ratio <= log_bound, || format!("E/K = {ratio} above {log_bound} at x = {x}"));
        prev = ratio;
    }
    acc.metric("max_abs_err_k", worst_k);
    acc.metric("max_abs_err_deficit", worst_def);
    Ok(acc.finish(
        8,
        "elliptic integrals",
        format!(
            "K err {worst_k:.1e}, deficit err {worst_def:.1e}, fitted x^4 coefficient {:.6} (41/2048 = {:.6}), bounds hold",
            coef[3],
            41.0 / 2048.0
        ),
    ))
}

fn check_metrization() -> Result<CheckReport> {
    let mut acc = Acc::new();
    for (base, tag) in [(DivergenceKind::KL, "kl"), (DivergenceKind::Bhattacharyya, "bhat")] {
        let v = triangle_scan(&MetricSpec::new(base, 0.5)?, 100_000, 9);
        acc.metric(format!("sqrt_{tag}_violations"), v.len() as f64);
        acc.require(v.is_empty(), || format!("sqrt {base}: {} violations, first excess {:e}", v.len(), v[0].excess));
    }
    let mut found = Vec::new();
    for alpha in [0.55, 0.6, 0.75, 1.0] {
        match metric_violation_search(&MetricSpec::new(DivergenceKind::KL, alpha)?) {
            Some(w) => {
                acc.metric(format!("witness_excess_alpha_{alpha}"), w.excess);
                found.push(format!("{alpha}:{:.2e}", w.excess));
            }
            None => acc.require(false, || format!("no violation witness for KL^{alpha}")),
        }
    }
    Ok(acc.finish(
        9,
        "metrization exponent",
        format!("10^5 triples, zero violations for sqrt KL and sqrt Bhat; KL^alpha witnesses {}", found.join(" ")),
    ))
}

fn check_embeddability() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let points = random_points(10, 12, LOC_RANGE, SCALE_RANGE);
    let form = negative_definiteness_check(&points, 1000, 10)?;
    acc.require(form <= 1e-9, || format!("max centred quadratic form {form:e} > 1e-9"));
    let eig = bc_kernel_psd_check(&points, 0.5)?;
    acc.require(eig >= -1e-9, || format!("Hellinger kernel min eigenvalue {eig:e} < -1e-9"));
    // Reported only: positive definiteness for s != 1/2 is an open question.
    let eig_skew = bc_kernel_psd_check(&points, 0.25)?;
    acc.metric("max_quadratic_form", form);
    acc.metric("hellinger_kernel_min_eig", eig);
    acc.metric("skew_0.25_kernel_min_eig", eig_skew);
    Ok(acc.finish(
        10,
        "embeddability kernels",
        format!("max centred form {form:.3e} (<= 1e-9); Hellinger kernel min eigenvalue {eig:.3e} (s = 0.25: {eig_skew:.3e}, reported)"),
    ))
}

fn check_chernoff() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let pairs = random_pairs(11, 20, LOC_RANGE, SCALE_RANGE);
    let rows: Vec<_> = pairs
        .par_iter()
        .map(|(p, q)| -> Result<_> {
            let (a, v) = chernoff_optimizer(p, q)?;
            Ok((*p, *q, a, v, divergence(&DivergenceKind::Bhattacharyya, p, q)?))
        })
        .collect::<Result<_>>()?;
    let (mut worst_a, mut worst_v) = (0.0f64, 0.0f64);
    for (p, q, a, v, bhat) in rows {
        worst_a = worst_a.max((a - 0.5).abs());
        worst_v = worst_v.max((v - bhat).abs());
        acc.require((a - 0.5).abs() <= 1e-6 && (v - bhat).abs() <= 1e-8, || {
            format!("{}: a* = {a}, value {v} vs Bhattacharyya {bhat}", fmt_pair(&p, &q))
        });
    }
    acc.metric("max_abs_dev_a_star", worst_a);
    acc.metric("max_abs_err_value", worst_v);
    Ok(acc.finish(
        11,
        "Chernoff exponent",
        format!("20 pairs, |a* - 1/2| <= {worst_a:.2e}, |value - Bhat| <= {worst_v:.2e}"),
    ))
}

fn check_monotone() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let kinds = DivergenceKind::closed_form_catalog();
    for kind in &kinds {
        let mut prev = f64::NEG_INFINITY;
        for k in 0..=10_000 {
            let u = k as f64 / 100.0;
            let h = h_of_chi(kind, u)?;
            acc.require(h > prev, || format!("h_{kind} not increasing at u = {u}: {h} <= {prev}"));
            prev = h;
        }
    }
    acc.metric("kinds", kinds.len() as f64);
    Ok(acc.finish(12, "monotone h_f", format!("{} kinds strictly increasing on u = 0, 0.01, ..., 100", kinds.len())))
}

fn check_gromov() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let mut summary = Vec::new();
    for (kind, tag) in [(GromovKind::KL, "kl"), (GromovKind::Bhattacharyya, "bhat")] {
        let defects: Vec<f64> =
            [10.0, 100.0, 1000.0, 10_000.0].iter().map(|&n| gromov_four_point_probe(kind, n)).collect::<Result<_>>()?;
        acc.require(defects.windows(2).all(|w| w[1] > w[0]), || format!("{tag} defects not increasing: {defects:?}"));
        for (n, d) in [1, 2, 3, 4].iter().zip(&defects) {
            acc.metric(format!("{tag}_defect_1e{n}"), *d);
        }
        summary.push(format!("{tag} {:.3}..{:.3}", defects[0], defects[3]));
    }
    Ok(acc.finish(13, "Gromov four-point probe", format!("defect increasing over n = 10..10^4: {}", summary.join(", "))))
}

fn family_samples(seed: u64) -> Result<Vec<(FamilyParam, FamilyParam)>> {
    let mut r = rng(seed);
    let mut out = Vec::new();
    for _ in 0..4 {
        let mut circ = || CircularParam::from_polar(uniform(&mut r, 0.0, 0.9), uniform(&mut r, -3.0, 3.0));
        out.push((FamilyParam::Circular(circ()?), FamilyParam::Circular(circ()?)));
    }
    for _ in 0..4 {
        let mut wrap = || WrappedParam::new(uniform(&mut r, -3.0, 3.0), uniform(&mut r, 0.1, 2.0));
        out.push((FamilyParam::Wrapped(wrap()?), FamilyParam::Wrapped(wrap()?)));
    }
    for _ in 0..4 {
        let mut logc = || LogCauchyParam::new(uniform(&mut r, -2.0, 2.0), uniform(&mut r, 0.2, 2.0));
        out.push((FamilyParam::LogCauchy(logc()?), FamilyParam::LogCauchy(logc()?)));
    }
    Ok(out)
}

fn native_spec(p: &FamilyParam) -> DensitySpec {
    match p {
        FamilyParam::Circular(c) => DensitySpec::Circular(*c),
        FamilyParam::Wrapped(w) => DensitySpec::Wrapped(*w),
        FamilyParam::LogCauchy(l) => DensitySpec::LogCauchy(*l),
    }
}

fn check_families() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let kinds = [DivergenceKind::KL, DivergenceKind::TV, DivergenceKind::JS, DivergenceKind::HellingerSq, DivergenceKind::LeCam];
    let mut worst = 0.0f64;
    for (a, b) in family_samples(14)? {
        for kind in &kinds {
            let reduced = family_divergence(kind, &a, &b)?;
            let native = quad_f_divergence(&GeneratorSpec::for_kind(kind)?, &native_spec(&a), &native_spec(&b), 1e-11)?;
            worst = worst.max((reduced - native).abs());
            acc.require((reduced - native).abs() <= 1e-6, || {
                format!("{kind} {a:?} vs {b:?}: reduced {reduced} native {native}")
            });
        }
    }
    acc.metric("max_abs_err_native", worst);

    let mut r = rng(140);
    let mut worst_boole = 0.0f64;
    for _ in 0..1000 {
        let a = uniform(&mut r, 0.1, 5.0);
        let theta = crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE);
        let mut x = uniform(&mut r, -10.0, 10.0);
        if x == 0.0 {
            x = 1.0;
        }
        let res = boole_pushforward_check(a, &theta, x)?;
        worst_boole = worst_boole.max(res);
        acc.require(res <= 1e-10, || format!("Boole a = {a}, theta = {theta:?}, x = {x}: residual {res:e}"));
    }
    acc.metric("max_boole_residual", worst_boole);

    let (before, after) = boole_kl_gap(2.0, &CauchyParam::new(0.0, 1.0)?, &CauchyParam::new(0.0, 2.0)?)?;
    acc.require((before - after).abs() > 1e-3, || format!("Boole KL gap {before} vs {after} not above 1e-3"));
    acc.metric("boole_kl_before", before);
    acc.metric("boole_kl_after", after);

    let disk: Vec<CircularParam> =
        (1..10).map(|k| CircularParam::from_polar(0.1 * k as f64, k as f64 - 5.0)).collect::<Result<_>>()?;
    let log_map = verify_wrapped_map(WrappedMapCandidate::Logarithm, &disk, 64);
    let cayley = verify_wrapped_map(WrappedMapCandidate::Cayley, &disk, 64);
    acc.require(log_map.holds, || format!("logarithmic wrapped map fails: {log_map:?}"));
    acc.metric("wrapped_map_residual", log_map.max_residual);
    acc.metric("cayley_candidate_holds", if cayley.holds { 1.0 } else { 0.0 });
    Ok(acc.finish(
        14,
        "Cauchy-type families",
        format!(
            "native quadrature err {worst:.1e}; Boole residual {worst_boole:.1e} on 10^3 triples; KL {before:.6} -> {after:.6} under Boole map"
        ),
    ))
}

fn check_angular() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let pairs = random_pairs(15, 10, LOC_RANGE, SCALE_RANGE);
    let mut worst = 0.0f64;
    for (p, q) in &pairs {
        for s in [0.25, 0.5, 0.75] {
            let angular = bc_skewed_angular(s, p, q)?;
            let line = quad_skewed_bc(s, &DensitySpec::Cauchy(*p), &DensitySpec::Cauchy(*q), 1e-13)?;
            worst = worst.max((angular - line).abs());
            acc.require((angular - line).abs() <= 1e-8, || format!("s = {s} {}: {angular} vs {line}", fmt_pair(p, q)));
        }
        let elliptic = crate::closed_form::bhattacharyya_coefficient_of_chi(chi(p, q));
        let angular = bc_skewed_angular(0.5, p, q)?;
        worst = worst.max((angular - elliptic).abs());
        acc.require((angular - elliptic).abs() <= 1e-8, || format!("s = 1/2 {}: {angular} vs elliptic {elliptic}", fmt_pair(p, q)));
    }
    acc.metric("max_abs_err", worst);
    Ok(acc.finish(15, "angular BC integral", format!("10 pairs x s in {{0.25, 0.5, 0.75}}, max abs err {worst:.2e} (<= 1e-8)")))
}

fn check_entropy() -> Result<CheckReport> {
    let mut acc = Acc::new();
    let mut worst_single = 0.0f64;
    for p in random_points(16, 10, LOC_RANGE, SCALE_RANGE) {
        let exact = cauchy_entropy(p.scale())?;
        let quad = quad_entropy(&DensitySpec::Cauchy(p), 1e-12)?;
        worst_single = worst_single.max((exact - quad).abs());
        acc.require((exact - quad).abs() <= 1e-9, || format!("entropy {p:?}: {exact} vs {quad}"));
    }
    let mut r = rng(160);
    let mut worst_mix = 0.0f64;
    for _ in 0..10 {
        let w = uniform(&mut r, 0.05, 0.95);
        let a = crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE);
        let b = crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE);
        let mix = MixtureTwo::new(w, a, b)?;
        let exact = two_mixture_entropy(&mix);
        let quad = quad_entropy(&DensitySpec::Mixture(mix), 1e-12)?;
        worst_mix = worst_mix.max((exact - quad).abs());
        acc.require((exact - quad).abs() <= 1e-7, || format!("mixture entropy {mix:?}: {exact} vs {quad}"));
    }
    let mut worst_family = 0.0f64;
    let kl = GeneratorSpec::for_kind(&DivergenceKind::KL)?;
    for _ in 0..10 {
        let comps = [
            crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE),
            crate::sampling::random_param(&mut r, LOC_RANGE, SCALE_RANGE),
        ];
        let (t1, t2) = (uniform(&mut r, 0.05, 0.95), uniform(&mut r, 0.05, 0.95));
        let bregman = mixture_family_kl(t1, t2, &comps)?;
        let m1 = DensitySpec::Mixture(MixtureTwo::new(t1, comps[0], comps[1])?);
        let m2 = DensitySpec::Mixture(MixtureTwo::new(t2, comps[0], comps[1])?);
        let quad = quad_f_divergence(&kl, &m1, &m2, 1e-12)?;
        worst_family = worst_family.max((bregman - quad).abs());
        acc.require((bregman - quad).abs() <= 1e-6, || format!("mixture family {comps:?} ({t1}, {t2}): {bregman} vs {quad}"));
    }
    acc.metric("max_abs_err_cauchy", worst_single);
    acc.metric("max_abs_err_mixture", worst_mix);
    acc.metric("max_abs_err_mixture_family_kl", worst_family);
    Ok(acc.finish(
        16,
        "differential entropy",
        format!("log(4 pi s) err {worst_single:.1e}; mixture entropy err {worst_mix:.1e}; mixture-family KL err {worst_family:.1e}"),
    ))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn suite_names_round_trip() {
        for s in Suite::ALL {
            assert_eq!(s.to_string().parse::<Suite>().unwrap(), s);
        }
        assert!("nope".parse::<Suite>().is_err());
        let mut all: Vec<u8> = Suite::ALL[..13].iter().flat_map(|s| s.criteria()).collect();
        all.sort();
        assert_eq!(all, (1..=16).collect::<Vec<u8>>());
    }

    #[test]
    fn unknown_criterion_is_rejected() {
        assert!(run_criterion(0).is_err());
        assert!(run_criterion(17).is_err());
    }
}
