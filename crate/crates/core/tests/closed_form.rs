use std::f64::consts::PI;

use cauchy_fdiv::cauchy_core::{chi, lambda_from_chi, CauchyParam};
use cauchy_fdiv::closed_form::*;
use cauchy_fdiv::oracle::{quad_entropy, quad_f_divergence, quad_q_divergence_2, quad_skewed_bc, DensitySpec, GeneratorSpec};
use cauchy_fdiv::sampling::random_pairs;
use cauchy_fdiv::special_fn::elliptic_k;
use num_bigint::BigInt;
use num_rational::BigRational;
use proptest::prelude::*;

fn cp(l: f64, s: f64) -> CauchyParam {
    CauchyParam::new(l, s).unwrap()
}

fn cauchy(p: CauchyParam) -> DensitySpec {
    DensitySpec::Cauchy(p)
}

#[test]
fn every_closed_form_vanishes_at_zero() {
    for kind in DivergenceKind::closed_form_catalog() {
        assert!(h_of_chi(&kind, 0.0).unwrap().abs() <= 1e-14, "{kind}");
    }
    assert!(!DivergenceKind::KumarChhina.has_closed_form());
    assert!(h_of_chi(&DivergenceKind::KumarChhina, 1.0).is_err());
}

#[test]
fn h_examples() {
    assert!((h_of_chi(&DivergenceKind::KL, 1.0).unwrap() - 1.5f64.ln()).abs() < 1e-15);
    for u in [0.01, 0.5, 3.0, 100.0] {
        let tv = h_of_chi(&DivergenceKind::TV, u).unwrap();
        assert!((tv - 2.0 / PI * (u / 2.0).sqrt().atan()).abs() < 1e-15);
    }
    let p = cp(0.0, 1.0);
    let q = cp(1.0, 1.0);
    let kl = divergence(&DivergenceKind::KL, &p, &q).unwrap();
    assert!((kl - 1.25f64.ln()).abs() < 1e-15);
    let quad = quad_f_divergence(&GeneratorSpec::for_kind(&DivergenceKind::KL).unwrap(), &cauchy(p), &cauchy(q), 1e-12).unwrap();
    assert!((kl - quad).abs() < 1e-9);
    assert_eq!(divergence(&DivergenceKind::TV, &p, &p).unwrap(), 0.0);
}

#[test]
fn chernoff_example() {
    let v = divergence(&DivergenceKind::Chernoff, &cp(0.0, 1.0), &cp(0.0, 2.0)).unwrap();
    let elliptic = -(2f64.sqrt() * elliptic_k(0.75).unwrap() / PI).ln();
    assert!((v - elliptic).abs() < 1e-14);
    assert!((v - 0.029_662_502_519_834_325).abs() < 1e-13);
}

#[test]
fn tv_two_root_paths() {
    let (p, q) = (cp(0.0, 2.0), cp(3.0, 2.0));
    assert!((tv_two_root(&p, &q) - 2.0 / PI * (3.0f64 / 4.0).atan()).abs() < 1e-15);
    let (p, q) = (cp(0.0, 1.0), cp(0.0, 2.0));
    assert!((tv_two_root(&p, &q) - h_of_chi(&DivergenceKind::TV, 0.25).unwrap()).abs() < 1e-15);
    assert_eq!(tv_two_root(&p, &p), 0.0);
    for (p, q) in random_pairs(31, 200, (-5.0, 5.0), (0.1, 10.0)) {
        let h = divergence(&DivergenceKind::TV, &p, &q).unwrap();
        assert!((tv_two_root(&p, &q) - h).abs() <= 1e-12, "{p:?} {q:?}");
    }
}

#[test]
fn j_polynomials_and_integer_bc() {
    let r = |n: i64, d: i64| BigRational::new(BigInt::from(n), BigInt::from(d));
    assert_eq!(j_polynomial(2).unwrap(), vec![r(1, 1), r(1, 1)]);
    assert_eq!(j_polynomial(4).unwrap(), vec![r(1, 1), r(6, 1), r(15, 2), r(5, 2)]);
    assert_eq!(j_polynomial(6).unwrap()[5], r(63, 8));
    assert!(j_polynomial(31).is_err());
    let (l, s) = (0.7, 1.8);
    let bc2 = bc_skewed_integer(2, &cp(l, s), &CauchyParam::standard()).unwrap();
    assert!((bc2 - (s * s + l * l + 1.0) / (2.0 * s)).abs() < 1e-14);
    assert_eq!(bc_skewed_integer(4, &cp(l, s), &cp(l, s)).unwrap(), 1.0);
    assert_eq!(eval_f64(&j_polynomial(5).unwrap(), 1.0), 55.375);
    let q = cp(0.0, lambda_from_chi(1.0));
    let quad = quad_skewed_bc(5.0, &cauchy(CauchyParam::standard()), &cauchy(q), 1e-10).unwrap();
    assert!((quad - 55.375).abs() < 1e-8);
}

#[test]
fn integer_bc_exponent_swap() {
    for (p, q) in random_pairs(32, 10, (-2.0, 2.0), (0.5, 2.0)) {
        for a in [2u32, 3, 4] {
            let fwd = quad_skewed_bc(a as f64, &cauchy(p), &cauchy(q), 1e-12).unwrap();
            let swap = quad_skewed_bc(1.0 - a as f64, &cauchy(p), &cauchy(q), 1e-12).unwrap();
            assert!((fwd - swap).abs() <= 1e-9 * fwd);
            assert!((bc_skewed_integer(a, &p, &q).unwrap() - fwd).abs() <= 1e-9 * fwd);
        }
    }
}

#[test]
fn identities_between_kinds() {
    for k in 0..=2000 {
        let u = k as f64 * 0.05;
        let kl = h_of_chi(&DivergenceKind::KL, u).unwrap();
        let jeff = h_of_chi(&DivergenceKind::Jeffreys, u).unwrap();
        assert!((jeff - 2.0 * kl).abs() <= 1e-12 * (1.0 + jeff));
        let js = h_of_chi(&DivergenceKind::JS, u).unwrap();
        let taneja = h_of_chi(&DivergenceKind::Taneja, u).unwrap();
        assert!((taneja - (0.5 * kl - js)).abs() <= 1e-12 * (1.0 + kl), "u = {u}");
        let lecam = h_of_chi(&DivergenceKind::LeCam, u).unwrap();
        let hm = h_of_chi(&DivergenceKind::HarmonicMean, u).unwrap();
        assert!((hm - 0.5 * lecam).abs() <= 1e-15 * (1.0 + lecam));
    }
    assert!(hellinger_sq_elliptic(0.0).unwrap().abs() <= 1e-14);
}

#[test]
fn entropy_examples() {
    assert!((cauchy_entropy(1.0).unwrap() - 2.531_024_246_969_290_7).abs() < 1e-14);
    assert!(cauchy_entropy(1.0 / (4.0 * PI)).unwrap().abs() < 1e-15);
    assert!(cauchy_entropy(0.0).is_err());
    let q = quad_entropy(&cauchy(cp(-1.0, 0.3)), 1e-12).unwrap();
    assert!((q - cauchy_entropy(0.3).unwrap()).abs() < 1e-9);
}

#[test]
fn mixture_examples() {
    let (a, b) = (cp(0.0, 1.0), cp(1.0, 1.0));
    let m0 = MixtureTwo::new(0.0, a, b).unwrap();
    assert_eq!(kl_point_to_mixture(&a, &m0).unwrap(), 0.0);
    for w in [0.1, 0.5, 0.9, 1.0] {
        let m = MixtureTwo::new(w, a, b).unwrap();
        let formula = 5f64.ln() - (3.0 - w + 2.0 * (1.0 + w - w * w).sqrt()).ln();
        assert!((kl_point_to_mixture(&a, &m).unwrap() - formula).abs() < 1e-14, "w = {w}");
    }
    let half = MixtureTwo::new(0.5, a, b).unwrap();
    let kl = GeneratorSpec::for_kind(&DivergenceKind::KL).unwrap();
    let quad = quad_f_divergence(&kl, &cauchy(a), &DensitySpec::Mixture(half), 1e-13).unwrap();
    assert!((kl_point_to_mixture(&a, &half).unwrap() - quad).abs() < 1e-9);
    assert!(kl_point_to_mixture(&b, &half).is_err());
    assert!(MixtureTwo::new(1.5, a, b).is_err());

    assert!((two_mixture_entropy(&m0) - cauchy_entropy(1.0).unwrap()).abs() < 1e-14);
    let same = MixtureTwo::new(0.3, cp(2.0, 0.5), cp(2.0, 0.5)).unwrap();
    assert!((two_mixture_entropy(&same) - cauchy_entropy(0.5).unwrap()).abs() < 1e-14);
    let quad = quad_entropy(&DensitySpec::Mixture(half), 1e-12).unwrap();
    assert!((two_mixture_entropy(&half) - quad).abs() < 1e-7);
}

#[test]
fn mixture_family_examples() {
    let comps = [cp(0.0, 1.0), cp(1.0, 1.0)];
    assert_eq!(mixture_family_kl(0.4, 0.4, &comps).unwrap(), 0.0);
    for theta in [0.2f64, 0.5, 0.8] {
        let r = (1.0 + theta - theta * theta).sqrt();
        let eta = ((2.0 * r + theta + 2.0) / (2.0 * r - theta + 3.0)).ln();
        assert!((mixture_family_eta_unit_shift(theta) - eta).abs() < 1e-14);
        // η is the derivative of the negative mixture entropy.
        let h = 1e-6;
        let ent = |t: f64| two_mixture_entropy(&MixtureTwo::new(t, comps[0], comps[1]).unwrap());
        let fd = -(ent(theta + h) - ent(theta - h)) / (2.0 * h);
        assert!((fd - eta).abs() < 1e-8, "theta = {theta}: {fd} vs {eta}");
    }
}

#[test]
fn q_divergence_examples() {
    let (p, q) = (cp(0.0, 1.0), cp(0.0, 2.0));
    assert_eq!(q_divergence_2(&p, &p), 0.0);
    assert!((q_divergence_2(&p, &q) - PI / 2.0).abs() < 1e-14);
    assert!((q_divergence_2(&q, &p) - PI).abs() < 1e-14);
    assert!((quad_q_divergence_2(&p, &q, 1e-12).unwrap() - PI / 2.0).abs() < 1e-9);
    for (p, q) in random_pairs(33, 50, (-3.0, 3.0), (0.2, 5.0)) {
        let eq = CauchyParam::new(q.location(), p.scale()).unwrap();
        assert!((q_divergence_2(&p, &eq) - q_divergence_2(&eq, &p)).abs() <= 1e-12 * q_divergence_2(&p, &eq));
        assert!((q_divergence_2(&p, &q) - q_divergence_2(&q, &p)).abs() > 1e-9);
    }
}

#[test]
fn angular_examples() {
    let p = cp(0.3, 0.8);
    assert!((bc_skewed_angular(0.3, &p, &p).unwrap() - 1.0).abs() < 1e-14);
    let v = bc_skewed_angular(0.5, &cp(0.0, 1.0), &cp(0.0, 2.0)).unwrap();
    assert!((v - 2f64.sqrt() * elliptic_k(0.75).unwrap() / PI).abs() < 1e-13);
    assert!((v - 0.9707).abs() < 1e-4);
    let (p, q) = (cp(-1.0, 0.4), cp(2.0, 3.0));
    let line = quad_skewed_bc(0.25, &cauchy(p), &cauchy(q), 1e-13).unwrap();
    assert!((bc_skewed_angular(0.25, &p, &q).unwrap() - line).abs() < 1e-8);
}

#[test]
fn kind_tags_parse() {
    for kind in DivergenceKind::closed_form_catalog() {
        assert_eq!(kind.to_string().parse::<DivergenceKind>().unwrap(), kind);
    }
    assert_eq!("alpha:0.5".parse::<DivergenceKind>().unwrap(), DivergenceKind::Alpha(0.5));
    assert!("kl:0.3".parse::<DivergenceKind>().is_err());
    assert!("skewed-kl:1.5".parse::<DivergenceKind>().and_then(|k| k.validate()).is_err());
    assert!("nonsense".parse::<DivergenceKind>().is_err());
}

proptest! {
    #[test]
    fn closed_forms_are_symmetric(l1 in -5.0..5.0f64, s1 in 0.1..10.0f64, l2 in -5.0..5.0f64, s2 in 0.1..10.0f64) {
        let (p, q) = (cp(l1, s1), cp(l2, s2));
        for kind in DivergenceKind::closed_form_catalog() {
            if matches!(kind, DivergenceKind::SkewedKL(_) | DivergenceKind::SkewedJS(_)) {
                continue;
            }
            prop_assert_eq!(divergence(&kind, &p, &q).unwrap(), divergence(&kind, &q, &p).unwrap());
        }
        prop_assert!(chi(&p, &q) >= 0.0);
    }

    #[test]
    fn hellinger_forms_agree(u in 0.0..80.0f64) {
        let agm = h_of_chi(&DivergenceKind::HellingerSq, u).unwrap();
        let ell = hellinger_sq_elliptic(u).unwrap();
        prop_assert!((agm - ell).abs() <= 1e-14 * (1.0 + u));
        prop_assert!((1.0 - bhattacharyya_coefficient_of_chi(u) - agm).abs() <= 1e-15);
    }
}
