use std::f64::consts::{PI, SQRT_2};

use cauchy_fdiv::cauchy_core::*;
use cauchy_fdiv::closed_form::{divergence, DivergenceKind};
use cauchy_fdiv::oracle::sup_ratio_grid;
use cauchy_fdiv::quadrature::{integrate_line, QuadOptions};
use cauchy_fdiv::sampling::{random_pairs, random_points};
use proptest::prelude::*;

fn cp(l: f64, s: f64) -> CauchyParam {
    CauchyParam::new(l, s).unwrap()
}

#[test]
fn construction_rejects_non_positive_scale() {
    assert!(CauchyParam::new(0.0, 0.0).is_err());
    assert!(CauchyParam::new(0.0, -1.0).is_err());
    assert!(CauchyParam::new(f64::NAN, 1.0).is_err());
    assert!(cp(0.3, 2.0).theta().im > 0.0);
}

#[test]
fn chi_examples() {
    assert_eq!(chi(&cp(0.0, 1.0), &cp(0.0, 1.0)), 0.0);
    assert!((chi(&cp(0.6, 1.2), &cp(0.0, 1.0)) - 1.0 / 6.0).abs() < 1e-15);
    let inv = MoebiusMap::inversion();
    let (p, q) = (cp(0.3, 0.7), cp(-1.0, 2.5));
    assert!((chi(&mobius_apply(&inv, &p), &mobius_apply(&inv, &q)) - chi(&p, &q)).abs() < 1e-14);
}

#[test]
fn density_and_cdf_examples() {
    assert!((density(&cp(0.0, 1.0), 0.0) - 1.0 / PI).abs() < 1e-16);
    assert!((density(&cp(0.0, 1.0), 1.0) - 0.5 / PI).abs() < 1e-16);
    let p = cp(2.0, 3.0);
    let opts = QuadOptions { abs_tol: 1e-13, rel_tol: 1e-12, max_panels: 1000 };
    let mass = integrate_line(|x| density(&p, x), 2.0, 3.0, &[], opts).unwrap().value;
    assert!((mass - 1.0).abs() < 1e-10);
    let std = CauchyParam::standard();
    assert_eq!(cauchy_cdf(&std, 0.0), 0.5);
    assert!((cauchy_cdf(&std, 1.0) - 0.75).abs() < 1e-15);
    // Equal scales: TV = 2Φ(|Δl|/(2s)) - 1.
    let (a, b) = (cp(0.0, 2.0), cp(3.0, 2.0));
    let tv = divergence(&DivergenceKind::TV, &a, &b).unwrap();
    assert!((tv - (2.0 * cauchy_cdf(&std, 3.0 / 4.0) - 1.0)).abs() < 1e-14);
}

#[test]
fn mobius_examples() {
    let p = cp(0.4, 1.7);
    assert_eq!(mobius_apply(&MoebiusMap::identity(), &p), p);
    let r = mobius_apply(&MoebiusMap::inversion(), &cp(0.0, 4.0));
    assert!(r.location().abs() < 1e-15 && (r.scale() - 0.25).abs() < 1e-15);
    let t = mobius_apply(&MoebiusMap::translation(2.5), &p);
    assert!((t.location() - 2.9).abs() < 1e-15 && (t.scale() - 1.7).abs() < 1e-15);
    let m = MoebiusMap::new(2.0, 1.0, 1.0, 3.0).unwrap();
    let (a, b, c, d) = m.entries();
    assert!((a * d - b * c - 1.0).abs() < 1e-12);
    assert!(MoebiusMap::new(1.0, 2.0, 3.0, 4.0).is_err());
}

#[test]
fn standard_pair_reduction() {
    let (lam, _) = reduce_to_standard_pair(&cp(0.0, 1.0), &cp(0.0, 1.0));
    assert!((lam - 1.0).abs() < 1e-15);
    let (lam, _) = reduce_to_standard_pair(&cp(0.0, 2.0), &cp(0.0, 1.0));
    assert!((lam - 2.0).abs() < 1e-14);
    for (p, q) in random_pairs(21, 200, (-5.0, 5.0), (0.1, 10.0)) {
        let (lam, a) = reduce_to_standard_pair(&p, &q);
        let (ip, iq) = (mobius_apply(&a, &p), mobius_apply(&a, &q));
        assert!(ip.location().abs() < 1e-10 * lam && (ip.scale() - lam).abs() < 1e-10 * lam, "{ip:?} vs {lam}");
        assert!(iq.location().abs() < 1e-10 && (iq.scale() - 1.0).abs() < 1e-10, "{iq:?}");
        assert!((chi(&ip, &iq) - chi(&p, &q)).abs() <= 1e-10 * (1.0 + chi(&p, &q)));
    }
}

#[test]
fn sup_ratio_matches_grid_oracle() {
    assert_eq!(sup_density_ratio(&cp(1.0, 2.0), &cp(1.0, 2.0)), 1.0);
    let lam = sup_density_ratio(&cp(0.0, 2.0), &cp(0.0, 1.0));
    assert!((lam - 2.0).abs() < 1e-14);
    for (p, q) in random_pairs(22, 100, (-5.0, 5.0), (0.1, 10.0)) {
        let exact = sup_density_ratio(&p, &q);
        assert!((exact - sup_ratio_grid(&p, &q)).abs() <= 1e-8 * exact, "{p:?} {q:?}");
        assert_eq!(exact, sup_density_ratio(&q, &p));
    }
}

#[test]
fn fisher_rao_examples() {
    let i = CauchyParam::standard();
    assert_eq!(fisher_rao_distance(&i, &i), 0.0);
    assert!((fisher_rao_distance(&i, &cp(0.0, SQRT_2.exp())) - 1.0).abs() < 1e-14);
    for a in [1.5, 3.0, 10.0] {
        let d1 = fisher_rao_distance(&i, &cp(0.0, a));
        let d2 = fisher_rao_distance(&i, &cp(0.0, a * a));
        assert!((d2 - 2.0 * d1).abs() < 1e-13);
    }
    let (p, q) = (cp(0.2, 0.5), cp(-1.0, 3.0));
    assert!((SQRT_2 * fisher_rao_distance(&p, &q) - poincare_distance(&p, &q)).abs() < 1e-14);
}

#[test]
fn fisher_rao_triangle_inequality() {
    let pts = random_points(23, 300_000, (-5.0, 5.0), (0.1, 10.0));
    for t in pts.chunks(3) {
        let (a, b, c) = (&t[0], &t[1], &t[2]);
        let ab = fisher_rao_distance(a, b);
        let bc = fisher_rao_distance(b, c);
        let ac = fisher_rao_distance(a, c);
        assert!(ac <= ab + bc + 1e-12 * (ab + bc), "{a:?} {b:?} {c:?}");
    }
}

#[test]
#[allow(clippy::needless_range_loop)]
fn christoffel_matches_metric_finite_differences() {
    for s in [0.3, 1.0, 4.0] {
        let p = cp(0.7, s);
        let g = christoffel(&p);
        if s == 1.0 {
            assert_eq!(g[1][0][0], 1.0);
        }
        assert_eq!([g[0][0][0], g[0][1][1], g[1][0][1], g[1][1][0]], [0.0; 4]);
        // Γ^k_ij = ½ g^{kk} (∂_i g_kj + ∂_j g_ki - ∂_k g_ij), g = diag(1/(2s²)), depends on s only.
        let h = 1e-5;
        let dg = (0.5 / ((s + h) * (s + h)) - 0.5 / ((s - h) * (s - h))) / (2.0 * h);
        let ginv = 2.0 * s * s;
        let d = |i: usize| if i == 1 { dg } else { 0.0 };
        for k in 0..2 {
            for i in 0..2 {
                for j in 0..2 {
                    let term = |a: usize, b: usize, c: usize| if b == c { d(a) } else { 0.0 };
                    let fd = 0.5 * ginv * (term(i, k, j) + term(j, k, i) - term(k, i, j));
                    assert!((g[k][i][j] - fd).abs() < 1e-6, "Γ[{k}][{i}][{j}] = {} vs {fd}", g[k][i][j]);
                }
            }
        }
    }
}

proptest! {
    #[test]
    fn chi_is_maximal_invariant(
        l1 in -5.0..5.0f64, s1 in 0.1..10.0f64, l2 in -5.0..5.0f64, s2 in 0.1..10.0f64,
        a in 0.2..3.0f64, b in -2.0..2.0f64, c in -2.0..2.0f64,
    ) {
        let (p, q) = (cp(l1, s1), cp(l2, s2));
        let m = MoebiusMap::new(a, b, c, (1.0 + b * c) / a).unwrap();
        let u = chi(&p, &q);
        prop_assert!((chi(&mobius_apply(&m, &p), &mobius_apply(&m, &q)) - u).abs() <= 1e-10 * (1.0 + u));
        prop_assert_eq!(u, chi(&q, &p));
        prop_assert!((chi_from_lambda(lambda_from_chi(u)) - u).abs() <= 1e-12 * (1.0 + u));
    }
}
