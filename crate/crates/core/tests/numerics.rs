use lame_weyl::numerics::*;
use proptest::prelude::*;
use std::f64::consts::{LN_2, PI};

/// `J_0` from its power series, independent of the crate.
fn j0_series(x: f64) -> f64 {
    let q = -x * x / 4.0;
    let (mut term, mut sum) = (1.0, 1.0);
    for k in 1..60 {
        term *= q / (k * k) as f64;
        sum += term;
    }
    sum
}

fn bisect(f: impl Fn(f64) -> f64, mut lo: f64, mut hi: f64) -> f64 {
    for _ in 0..200 {
        let mid = 0.5 * (lo + hi);
        if f(lo).signum() == f(mid).signum() {
            lo = mid;
        } else {
            hi = mid;
        }
    }
    0.5 * (lo + hi)
}

#[test]
fn bessel_values_at_origin() {
    assert_eq!(bessel_j(0, 0.0).unwrap(), 1.0);
    assert_eq!(bessel_j(1, 0.0).unwrap(), 0.0);
}

#[test]
fn first_zero_of_j0_matches_series_bisection() {
    let z = bisect(j0_series, 2.0, 3.0);
    assert!((z - 2.404826).abs() < 1e-6);
    assert!(bessel_j(0, z).unwrap().abs() < 1e-10);
}

#[test]
fn bessel_matches_series_on_moderate_arguments() {
    for i in 0..40 {
        let x = 0.25 * i as f64;
        assert!((bessel_j(0, x).unwrap() - j0_series(x)).abs() < 1e-12, "x = {x}");
    }
}

#[test]
fn bessel_rejects_negative_argument() {
    assert!(bessel_j(0, -1.0).is_err());
}

#[test]
fn order_table_agrees_with_single_orders() {
    let x = 37.5;
    let table = bessel_j_orders(60, x).unwrap();
    for m in [0, 1, 5, 30, 37, 45, 60] {
        let single = bessel_j(m, x).unwrap();
        assert!(
            (table[m as usize] - single).abs() < 1e-12 * (1.0 + single.abs()),
            "m = {m}"
        );
    }
}

#[test]
fn derivative_matches_recurrence() {
    let x = 7.3;
    // J_m' = (J_{m-1} − J_{m+1}) / 2
    for m in 1..10 {
        let want = 0.5 * (bessel_j(m - 1, x).unwrap() - bessel_j(m + 1, x).unwrap());
        assert!((bessel_j_prime(m, x).unwrap() - want).abs() < 1e-13);
    }
}

#[test]
fn quadrature_examples() {
    let r = integrate_adaptive(|x| x, 0.0, 1.0, 1e-13).unwrap();
    assert!((r.value - 0.5).abs() < 1e-12);
    let r = integrate_adaptive(|_| f64::NAN, 1.0, 1.0, 1e-13).unwrap();
    assert_eq!(r.value, 0.0);
    let r = integrate_adaptive(|x| 2.0 * x / (1.0 + x * x), 0.0, 1.0, 1e-13).unwrap();
    assert!((r.value - LN_2).abs() < 1e-12);
}

#[test]
fn quadrature_handles_endpoint_singularity() {
    // ∫₀¹ x^{-1/2} dx = 2
    let r = integrate_adaptive(|x| 1.0 / x.sqrt(), 0.0, 1.0, 1e-9).unwrap();
    assert!((r.value - 2.0).abs() < 1e-8);
}

#[test]
fn quadrature_reports_budget_exhaustion() {
    let opts = QuadratureOptions {
        abs_tol: 1e-15,
        max_evaluations: 100,
    };
    assert!(integrate_adaptive_with(|x| (1.0 / x).sin(), 1e-6, 1.0, &[], opts).is_err());
}

#[test]
fn root_examples() {
    let r = refine_root(|x| x * x - 2.0, Bracket::new(1.0, 2.0).unwrap(), 1e-13).unwrap();
    assert!((r - 2f64.sqrt()).abs() < 1e-12);
    let r = refine_root(f64::cos, Bracket::new(1.0, 2.0).unwrap(), 1e-13).unwrap();
    assert!((r - PI / 2.0).abs() < 1e-12);
    let r = refine_root(|x| bessel_j(0, x).unwrap(), Bracket::new(2.0, 3.0).unwrap(), 1e-12).unwrap();
    assert!((r - bisect(j0_series, 2.0, 3.0)).abs() < 1e-9);
}

#[test]
fn root_rejects_bad_brackets() {
    assert!(Bracket::new(2.0, 1.0).is_err());
    assert!(refine_root(|x| x * x + 1.0, Bracket::new(-1.0, 1.0).unwrap(), 1e-12).is_err());
}

#[test]
fn cubic_examples() {
    let r = solve_cubic_real(-8.0, 8.0, 0.0);
    let want = [0.0, 4.0 - 2.0 * 2f64.sqrt(), 4.0 + 2.0 * 2f64.sqrt()];
    assert_eq!(r.len(), 3);
    for (root, w) in r.iter().zip(want) {
        assert!((root.value - w).abs() < 1e-12);
        assert_eq!(root.multiplicity, 1);
    }

    let r = solve_cubic_real(0.0, 0.0, 0.0);
    assert_eq!(
        r,
        vec![CubicRoot {
            value: 0.0,
            multiplicity: 3
        }]
    );

    let r = solve_cubic_real(-6.0, 11.0, -6.0);
    let values: Vec<f64> = r.iter().map(|c| c.value).collect();
    for (v, w) in values.iter().zip([1.0, 2.0, 3.0]) {
        assert!((v - w).abs() < 1e-12);
    }
}

proptest! {
    #[test]
    fn cubic_recovers_constructed_roots(a in -5.0f64..5.0, b in -5.0f64..5.0, c in -5.0f64..5.0) {
        prop_assume!((a - b).abs() > 1e-3 && (b - c).abs() > 1e-3 && (a - c).abs() > 1e-3);
        let p = -(a + b + c);
        let q = a * b + b * c + a * c;
        let r = -a * b * c;
        let mut want = [a, b, c];
        want.sort_by(f64::total_cmp);
        let got = solve_cubic_real(p, q, r);
        prop_assert_eq!(got.len(), 3);
        for (g, w) in got.iter().zip(want) {
            prop_assert!((g.value - w).abs() < 1e-8 * (1.0 + w.abs()));
        }
    }

    #[test]
    fn quadrature_integrates_cubics_exactly(c0 in -3.0f64..3.0, c1 in -3.0f64..3.0, c3 in -3.0f64..3.0, hi in 0.1f64..4.0) {
        let r = integrate_adaptive(|x| c0 + c1 * x + c3 * x * x * x, 0.0, hi, 1e-12).unwrap();
        let want = c0 * hi + c1 * hi * hi / 2.0 + c3 * hi.powi(4) / 4.0;
        prop_assert!((r.value - want).abs() < 1e-10 * (1.0 + want.abs()));
    }
}
