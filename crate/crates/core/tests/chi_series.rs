use cauchy_fdiv::cauchy_core::{chi, lambda_from_chi, CauchyParam};
use cauchy_fdiv::chi_series::*;
use cauchy_fdiv::closed_form::{h_of_chi, DivergenceKind};
use cauchy_fdiv::oracle::{quad_f_divergence, DensitySpec, GeneratorSpec};
use cauchy_fdiv::sampling::random_pairs;

fn cp(l: f64, s: f64) -> CauchyParam {
    CauchyParam::new(l, s).unwrap()
}

#[test]
fn chi_power_examples() {
    let (p, q) = (cp(0.0, 1.0), cp(0.5, 1.5));
    let u = chi(&p, &q);
    assert!((chi_power_divergence(2, &p, &q).unwrap() - u).abs() < 1e-15);
    assert!((chi_power_divergence(3, &p, &q).unwrap() - 1.5 * u * u).abs() < 1e-15);
    for n in 2..=10 {
        assert_eq!(chi_power_divergence(n, &p, &p).unwrap(), 0.0);
    }
    assert!(chi_power_divergence(1, &p, &q).is_err());
}

#[test]
fn chi_power_matches_quadrature() {
    let pairs: Vec<_> = random_pairs(41, 200, (-2.0, 2.0), (0.3, 3.0)).into_iter().filter(|(p, q)| chi(p, q) <= 1.0).take(10).collect();
    assert!(pairs.len() == 10);
    for (p, q) in pairs {
        for n in 2..=8 {
            let exact = chi_power_divergence(n, &p, &q).unwrap();
            let quad = quad_f_divergence(&GeneratorSpec::power_chi(n), &DensitySpec::Cauchy(p), &DensitySpec::Cauchy(q), 1e-14).unwrap();
            assert!((exact - quad).abs() <= 1e-8 * exact.abs().max(1e-6), "n = {n}: {exact} vs {quad}");
        }
    }
}

#[test]
fn coefficient_examples() {
    assert_eq!(series_coefficients(&DivergenceKind::KL).unwrap().raw_coefficient(2), 0.5);
    assert_eq!(series_coefficients(&DivergenceKind::JS).unwrap().raw_coefficient(2), 0.25);
    assert_eq!(series_coefficients(&DivergenceKind::HarmonicMean).unwrap().raw_coefficient(3), 0.125);
    assert!(series_coefficients(&DivergenceKind::TV).is_err());
}

#[test]
fn alpha_limits_recover_kl_coefficients() {
    let kl = series_coefficients(&DivergenceKind::KL).unwrap();
    let near_kl = series_coefficients(&DivergenceKind::Alpha(-0.999)).unwrap();
    let near_rev = series_coefficients(&DivergenceKind::Alpha(0.999)).unwrap();
    for n in 2..=8 {
        // Reverse KL: f(u) = u log u has a_n = (-1)^n / (n (n - 1)).
        let sign = if n % 2 == 0 { 1.0 } else { -1.0 };
        let rev = sign / (n as f64 * (n as f64 - 1.0));
        assert!((near_kl.coefficient(n) - kl.coefficient(n)).abs() < 1e-3, "n = {n}");
        assert!((near_rev.coefficient(n) - rev).abs() < 1e-3, "n = {n}");
    }
}

#[test]
fn gate_examples() {
    assert!(convergence_gate(&DivergenceKind::KL, &cp(0.6, 1.2), &cp(0.0, 1.0)).unwrap());
    let p = cp(0.3, 0.7);
    assert!(convergence_gate(&DivergenceKind::KL, &p, &p).unwrap());
    // Harmonic-mean gate: disc l² + (s - 5/3)² < 16/9 around the standard parameter.
    let q = CauchyParam::standard();
    for (l, s, inside) in [(0.0, 2.9, true), (0.0, 3.1, false), (1.3, 1.66, true), (1.4, 1.66, false)] {
        let disc = l * l + (s - 5.0 / 3.0) * (s - 5.0 / 3.0) < 16.0 / 9.0;
        assert_eq!(disc, inside);
        assert_eq!(convergence_gate(&DivergenceKind::HarmonicMean, &cp(l, s), &q).unwrap(), inside, "({l}, {s})");
    }
}

#[test]
fn gate_equivalent_to_chi_quarter() {
    for (p, q) in random_pairs(42, 1000, (-1.0, 1.0), (0.5, 2.0)) {
        let gate = convergence_gate(&DivergenceKind::KL, &p, &q).unwrap();
        assert_eq!(gate, chi(&p, &q) < 0.25, "{p:?} {q:?}");
    }
}

#[test]
fn taylor_examples() {
    let r = taylor_f_divergence(&DivergenceKind::KL, &cp(0.6, 1.2), &cp(0.0, 1.0), 1e-7, 40).unwrap();
    assert!((r.value - (13.0f64 / 12.0).ln()).abs() < 1e-6);
    assert_eq!(r.verdict, SeriesVerdict::Converged);
    let r = taylor_f_divergence(&DivergenceKind::KL, &cp(0.0, 3.0), &cp(0.0, 1.0), 1e-7, 200).unwrap();
    assert_eq!(r.verdict, SeriesVerdict::Diverged);
    assert!(!r.gate);
    for kind in [DivergenceKind::KL, DivergenceKind::JS, DivergenceKind::HarmonicMean] {
        let r = taylor_f_divergence(&kind, &cp(1.0, 1.0), &cp(1.0, 1.0), 1e-7, 40).unwrap();
        assert_eq!((r.value, r.verdict), (0.0, SeriesVerdict::Converged));
    }
    assert!(taylor_f_divergence(&DivergenceKind::TV, &cp(0.0, 1.0), &cp(0.1, 1.0), 1e-7, 40).is_err());
}

#[test]
fn converged_series_match_closed_forms() {
    let tol = 1e-10;
    for kind in [DivergenceKind::KL, DivergenceKind::JS, DivergenceKind::HellingerSq, DivergenceKind::HarmonicMean] {
        let radius = kind.convergence_radius().unwrap();
        for frac in [0.1, 0.5, 0.8] {
            // chi below the gate: sup ratio λ(chi) < 1 + r.
            let lam = 1.0 + frac * radius;
            let u = (lam - 1.0) * (lam - 1.0) / (2.0 * lam);
            let q = CauchyParam::new(0.0, lambda_from_chi(u)).unwrap();
            let r = taylor_f_divergence(&kind, &CauchyParam::standard(), &q, tol, 600).unwrap();
            assert_eq!(r.verdict, SeriesVerdict::Converged, "{kind} at chi = {u}");
            let exact = h_of_chi(&kind, u).unwrap();
            assert!((r.value - exact).abs() <= 10.0 * tol, "{kind} at chi = {u}: {} vs {exact}", r.value);
        }
    }
}

#[test]
fn tv_has_no_expansion() {
    let rep = tv_no_expansion_probe(&CauchyParam::standard(), 1.0).unwrap();
    assert!(rep.blows_up);
    assert!(rep.ratio[2] > rep.ratio[1]);
    assert!(rep.tv.iter().all(|&t| t > 0.0 && t < 1.0));
    assert!(tv_no_expansion_probe(&CauchyParam::standard(), 0.0).is_err());
}
