//! Real roots of monic cubics `s³ + p s² + q s + r`.

use super::roots::{refine_root, Bracket};
use serde::{Deserialize, Serialize};

/// Relative distance below which two computed roots are merged.
pub const CLUSTER_TOL: f64 = 1e-8;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CubicRoot {
    pub value: f64,
    pub multiplicity: u32,
}

fn eval(p: f64, q: f64, r: f64, s: f64) -> f64 {
    ((s + p) * s + q) * s + r
}

fn polish(p: f64, q: f64, r: f64, mut s: f64) -> f64 {
    let mut res = eval(p, q, r, s).abs();
    for _ in 0..8 {
        let d = (3.0 * s + 2.0 * p) * s + q;
        if d == 0.0 || res == 0.0 {
            break;
        }
        let t = s - eval(p, q, r, s) / d;
        let rt = eval(p, q, r, t).abs();
        if !(rt < res) {
            break;
        }
        s = t;
        res = rt;
    }
    s
}

/// All real roots, ascending, with multiplicities.
///
/// One real root is isolated by bracketing on the Cauchy bound, the cubic is
/// deflated to a quadratic, and every root is polished with Newton steps on
/// the original polynomial. Roots closer than [`CLUSTER_TOL`] (relative) are
/// reported once with their combined multiplicity; a complex pair whose
/// discriminant vanishes to round-off counts as a double real root.
pub fn solve_cubic_real(p: f64, q: f64, r: f64) -> Vec<CubicRoot> {
    let bound = 1.0 + p.abs().max(q.abs()).max(r.abs());
    let f = |s: f64| eval(p, q, r, s);
    let first = if r == 0.0 {
        0.0
    } else {
        // f(-bound) < 0 < f(bound) for a monic cubic
        refine_root(f, Bracket::new(-bound, bound).expect("bound > 0"), 0.0).unwrap_or(0.0)
    };
    let first = polish(p, q, r, first);

    // (s - first)(s² + b s + c)
    let b = p + first;
    let c = q + first * b;
    let mut roots = vec![first];
    let disc = b * b - 4.0 * c;
    let scale = (b * b).max((4.0 * c).abs());
    if disc >= 0.0 {
        let sq = disc.sqrt();
        let t = -0.5 * (b + sq.copysign(b));
        if t != 0.0 {
            roots.push(t);
            roots.push(c / t);
        } else {
            roots.push(0.0);
            roots.push(0.0);
        }
    } else if -disc <= 1e-14 * scale {
        roots.push(-0.5 * b);
        roots.push(-0.5 * b);
    }
    let mut roots: Vec<f64> = roots.into_iter().map(|s| polish(p, q, r, s)).collect();
    roots.sort_by(f64::total_cmp);

    let mut out: Vec<CubicRoot> = Vec::new();
    let mut sums: Vec<f64> = Vec::new();
    for s in roots {
        if let Some(last) = out.last_mut() {
            if (s - last.value).abs() <= CLUSTER_TOL * 1f64.max(s.abs()) {
                last.multiplicity += 1;
                let sum = sums.last_mut().unwrap();
                *sum += s;
                last.value = *sum / last.multiplicity as f64;
                continue;
            }
        }
        out.push(CubicRoot {
            value: s,
            multiplicity: 1,
        });
        sums.push(s);
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn values(rs: &[CubicRoot]) -> Vec<(f64, u32)> {
        rs.iter().map(|r| (r.value, r.multiplicity)).collect()
    }

    #[test]
    fn factored_cubic() {
        let rs = solve_cubic_real(-6.0, 11.0, -6.0);
        let v = values(&rs);
        assert_eq!(v.len(), 3);
        for (got, want) in v.iter().zip([1.0, 2.0, 3.0]) {
            assert!((got.0 - want).abs() < 1e-12 && got.1 == 1);
        }
    }

    #[test]
    fn triple_root_at_origin() {
        assert_eq!(values(&solve_cubic_real(0.0, 0.0, 0.0)), vec![(0.0, 3)]);
    }

    #[test]
    fn rayleigh_cubic_at_alpha_one() {
        // s³ - 8s² + 8s: roots 0 and 4 ∓ 2√2
        let rs = solve_cubic_real(-8.0, 8.0, 0.0);
        let want = [0.0, 4.0 - 2.0 * 2f64.sqrt(), 4.0 + 2.0 * 2f64.sqrt()];
        assert_eq!(rs.len(), 3);
        for (r, w) in rs.iter().zip(want) {
            assert!((r.value - w).abs() < 1e-13, "{} vs {w}", r.value);
            assert_eq!(r.multiplicity, 1);
        }
    }

    #[test]
    fn double_root_is_detected() {
        // (s - 1)² (s + 2) = s³ - 3s + 2
        let rs = solve_cubic_real(0.0, -3.0, 2.0);
        assert_eq!(rs.len(), 2);
        assert!((rs[0].value + 2.0).abs() < 1e-12 && rs[0].multiplicity == 1);
        assert!((rs[1].value - 1.0).abs() < 1e-8 && rs[1].multiplicity == 2);
    }

    #[test]
    fn single_real_root() {
        // s³ + s + 1 has one real root
        let rs = solve_cubic_real(0.0, 1.0, 1.0);
        assert_eq!(rs.len(), 1);
        assert!(eval(0.0, 1.0, 1.0, rs[0].value).abs() < 1e-14);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(10_000))]
        #[test]
        fn residual_bound(p in -10.0f64..10.0, q in -10.0f64..10.0, r in -10.0f64..10.0) {
            let rs = solve_cubic_real(p, q, r);
            prop_assert!(!rs.is_empty());
            for root in rs {
                let s = root.value;
                prop_assert!(eval(p, q, r, s).abs() <= 1e-10 * 1f64.max(s.abs().powi(3)),
                    "p={p} q={q} r={r} s={s} res={}", eval(p, q, r, s));
            }
        }
    }
}
