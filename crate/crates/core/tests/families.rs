use std::f64::consts::PI;

use cauchy_fdiv::cauchy_core::{chi, MoebiusMap, CauchyParam};
use cauchy_fdiv::closed_form::{divergence, DivergenceKind};
use cauchy_fdiv::families::*;
use cauchy_fdiv::oracle::{quad_f_divergence, quad_normalization, DensitySpec, GeneratorSpec};
use cauchy_fdiv::sampling::{random_param, rng, uniform};
use num_complex::Complex64;

fn disk(re: f64, im: f64) -> CircularParam {
    CircularParam::new(Complex64::new(re, im)).unwrap()
}

#[test]
fn disk_round_trip() {
    let t = theta_from_disk(&disk(0.0, 0.0));
    assert!(t.location().abs() < 1e-15 && (t.scale() - 1.0).abs() < 1e-15);
    let mut r = rng(61);
    for _ in 0..100 {
        let w = CircularParam::from_polar(uniform(&mut r, 0.0, 0.99), uniform(&mut r, -PI, PI)).unwrap();
        let back = disk_from_theta(&theta_from_disk(&w));
        assert!((back.w() - w.w()).norm() < 1e-12);
    }
    assert!(CircularParam::new(Complex64::new(1.0, 0.0)).is_err());
}

#[test]
fn disk_automorphisms_preserve_chi_and_divergences() {
    let mut r = rng(62);
    let kl = GeneratorSpec::for_kind(&DivergenceKind::KL).unwrap();
    for _ in 0..10 {
        let w1 = CircularParam::from_polar(uniform(&mut r, 0.0, 0.8), uniform(&mut r, -PI, PI)).unwrap();
        let w2 = CircularParam::from_polar(uniform(&mut r, 0.0, 0.8), uniform(&mut r, -PI, PI)).unwrap();
        let a = Complex64::from_polar(uniform(&mut r, 0.0, 0.7), uniform(&mut r, -PI, PI));
        let phi = uniform(&mut r, -PI, PI);
        let (t1, t2) = (disk_automorphism(phi, a, &w1).unwrap(), disk_automorphism(phi, a, &w2).unwrap());
        let before = chi(&theta_from_disk(&w1), &theta_from_disk(&w2));
        let after = chi(&theta_from_disk(&t1), &theta_from_disk(&t2));
        assert!((before - after).abs() <= 1e-10 * (1.0 + before));
        let qb = quad_f_divergence(&kl, &DensitySpec::Circular(w1), &DensitySpec::Circular(w2), 1e-12).unwrap();
        let qa = quad_f_divergence(&kl, &DensitySpec::Circular(t1), &DensitySpec::Circular(t2), 1e-12).unwrap();
        assert!((qb - qa).abs() < 1e-7);
    }
    assert!(disk_automorphism(0.0, Complex64::new(1.0, 0.0), &disk(0.1, 0.1)).is_err());
}

#[test]
fn family_divergence_examples() {
    let a = FamilyParam::from_pair(Family::LogCauchy, 0.0, 1.0).unwrap();
    let b = FamilyParam::from_pair(Family::LogCauchy, 1.0, 1.0).unwrap();
    let kl = family_divergence(&DivergenceKind::KL, &a, &b).unwrap();
    assert!((kl - 1.25f64.ln()).abs() < 1e-15);
    let f = GeneratorSpec::for_kind(&DivergenceKind::KL).unwrap();
    let native = quad_f_divergence(&f, &DensitySpec::LogCauchy(LogCauchyParam::new(0.0, 1.0).unwrap()), &DensitySpec::LogCauchy(LogCauchyParam::new(1.0, 1.0).unwrap()), 1e-12).unwrap();
    assert!((kl - native).abs() < 1e-9);
    let c = FamilyParam::from_pair(Family::Circular, 0.2, -0.3).unwrap();
    assert_eq!(family_divergence(&DivergenceKind::TV, &c, &c).unwrap(), 0.0);
    assert!(family_divergence(&DivergenceKind::KL, &a, &c).is_err());
    assert!(family_divergence(&DivergenceKind::QDiv2, &a, &b).is_err());
}

#[test]
fn reduction_matches_native_quadrature() {
    let mut r = rng(63);
    for kind in [DivergenceKind::KL, DivergenceKind::TV, DivergenceKind::JS, DivergenceKind::HellingerSq] {
        let f = GeneratorSpec::for_kind(&kind).unwrap();
        for _ in 0..3 {
            let w = WrappedParam::new(uniform(&mut r, -3.0, 3.0), uniform(&mut r, 0.1, 2.0)).unwrap();
            let v = WrappedParam::new(uniform(&mut r, -3.0, 3.0), uniform(&mut r, 0.1, 2.0)).unwrap();
            let reduced = family_divergence(&kind, &FamilyParam::Wrapped(w), &FamilyParam::Wrapped(v)).unwrap();
            let native = quad_f_divergence(&f, &DensitySpec::Wrapped(w), &DensitySpec::Wrapped(v), 1e-11).unwrap();
            assert!((reduced - native).abs() < 1e-6, "{kind}: {reduced} vs {native}");
        }
    }
}

#[test]
fn density_examples() {
    let uniform_disk = FamilyParam::from_pair(Family::Circular, 0.0, 0.0).unwrap();
    assert!((family_density(&uniform_disk, 1.0).unwrap() - 0.5 / PI).abs() < 1e-16);
    let (mu, g) = (0.7, 0.4);
    let w = FamilyParam::from_pair(Family::Wrapped, mu, g).unwrap();
    let at_mu = 0.5 / PI * g.sinh() / (g.cosh() - 1.0);
    assert!((family_density(&w, mu).unwrap() - at_mu).abs() < 1e-13 * at_mu);
    assert!(family_density(&w, 4.0).is_err());
    let lc = LogCauchyParam::new(0.3, 0.8).unwrap();
    assert!((quad_normalization(&DensitySpec::LogCauchy(lc), 1e-11).unwrap() - 1.0).abs() < 1e-9);
    assert!(family_density(&FamilyParam::LogCauchy(lc), -1.0).is_err());
    assert_eq!("log-cauchy".parse::<Family>().unwrap(), Family::LogCauchy);
}

#[test]
fn wrapped_map_is_the_logarithm() {
    let pts: Vec<CircularParam> = (0..8).map(|k| CircularParam::from_polar(0.1 + 0.1 * k as f64, k as f64).unwrap()).collect();
    assert!(verify_wrapped_map(WrappedMapCandidate::Logarithm, &pts, 128).holds);
    assert!(!verify_wrapped_map(WrappedMapCandidate::Cayley, &pts, 128).holds);
    let w = WrappedParam::new(0.4, 0.9).unwrap();
    let eta = WrappedMapCandidate::Logarithm.eta(w.to_circular().w());
    assert!((eta.re - 0.4).abs() < 1e-14 && (eta.im - 0.9).abs() < 1e-14);
}

#[test]
fn boole_map() {
    let i = CauchyParam::standard();
    let img = boole_map_param(0.5, &i).unwrap();
    assert!(img.location().abs() < 1e-15 && (img.scale() - 1.0).abs() < 1e-15);
    assert!(boole_map_param(0.0, &i).is_err());
    let mut r = rng(64);
    for _ in 0..1000 {
        let a = uniform(&mut r, 0.1, 5.0);
        let th = random_param(&mut r, (-5.0, 5.0), (0.1, 10.0));
        let x = uniform(&mut r, -10.0, 10.0);
        assert!(boole_pushforward_check(a, &th, x).unwrap() < 1e-10);
    }
    for _ in 0..100 {
        let (a, b, c) = (uniform(&mut r, 0.3, 2.0), uniform(&mut r, -2.0, 2.0), uniform(&mut r, -2.0, 2.0));
        let m = MoebiusMap::new(a, b, c, (1.0 + b * c) / a).unwrap();
        let th = random_param(&mut r, (-5.0, 5.0), (0.1, 10.0));
        let x = uniform(&mut r, -10.0, 10.0);
        assert!(mobius_pushforward_check(&m, &th, x).unwrap() < 1e-10);
    }
    let (before, after) = boole_kl_gap(2.0, &i, &CauchyParam::new(0.0, 2.0).unwrap()).unwrap();
    assert!((before - divergence(&DivergenceKind::KL, &i, &CauchyParam::new(0.0, 2.0).unwrap()).unwrap()).abs() < 1e-15);
    assert!((before - after).abs() > 1e-3);
}
