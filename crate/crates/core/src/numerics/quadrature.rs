//! Globally adaptive Gauss–Kronrod (7/15) quadrature.
//!
//! The interval with the largest error estimate is bisected until the summed
//! estimate drops below the absolute tolerance. Callers that know where the
//! integrand misbehaves pass those points as initial breakpoints.

use crate::error::{Error, Result};
use std::cmp::Ordering;
use std::collections::BinaryHeap;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct QuadratureResult {
    pub value: f64,
    /// Absolute error estimate, always `>= 0`.
    pub error_estimate: f64,
    pub evaluations: usize,
}

#[derive(Debug, Clone, Copy)]
pub struct QuadratureOptions {
    pub abs_tol: f64,
    pub max_evaluations: usize,
}

impl QuadratureOptions {
    pub fn new(abs_tol: f64) -> Self {
        Self {
            abs_tol,
            max_evaluations: 500_000,
        }
    }
}

// Kronrod abscissae on [-1, 1], ordered from the endpoint towards the centre.
// Odd indices are the Gauss–Legendre 7-point nodes.
const XGK: [f64; 8] = [
    0.991455371120812639206854697526329,
    0.949107912342758524526189684047851,
    0.864864423359769072789712788640926,
    0.741531185599394439863864773280788,
    0.586087235467691130294144845693013,
    0.405845151377397166906606412076961,
    0.207784955007898467600689403773245,
    0.000000000000000000000000000000000,
];
const WGK: [f64; 8] = [
    0.022935322010529224963732008058970,
    0.063092092629978553290700663189204,
    0.104790010322250183839876322541518,
    0.140653259715525918745189590510238,
    0.169004726639267902826583426598550,
    0.190350578064785409913256402421014,
    0.204432940075298892414161999234649,
    0.209482141084727828012999174891714,
];
const WG: [f64; 4] = [
    0.129484966168869693270611432679082,
    0.279705391489276667901467771423780,
    0.381830050505118944950369775488975,
    0.417959183673469387755102040816327,
];

struct Panel {
    a: f64,
    b: f64,
    value: f64,
    error: f64,
}

impl PartialEq for Panel {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
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
        self.error
            .total_cmp(&other.error)
            .then_with(|| other.a.total_cmp(&self.a))
    }
}

fn gk15<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64) -> Panel {
    let centre = 0.5 * (a + b);
    let half = 0.5 * (b - a);
    let fc = f(centre);
    let mut kronrod = fc * WGK[7];
    let mut gauss = fc * WG[3];
    for j in 0..7 {
        let dx = half * XGK[j];
        let s = f(centre - dx) + f(centre + dx);
        kronrod += WGK[j] * s;
        if j % 2 == 1 {
            gauss += WG[j / 2] * s;
        }
    }
    Panel {
        a,
        b,
        value: kronrod * half,
        error: ((kronrod - gauss) * half).abs(),
    }
}

/// `∫_a^b f` to absolute tolerance `abs_tol`.
pub fn integrate_adaptive<F: Fn(f64) -> f64>(f: F, a: f64, b: f64, abs_tol: f64) -> Result<QuadratureResult> {
    integrate_adaptive_with(f, a, b, &[], QuadratureOptions::new(abs_tol))
}

/// As [`integrate_adaptive`], splitting first at `breakpoints` (points outside
/// `(a, b)` are ignored).
pub fn integrate_adaptive_with<F: Fn(f64) -> f64>(
    f: F,
    a: f64,
    b: f64,
    breakpoints: &[f64],
    opts: QuadratureOptions,
) -> Result<QuadratureResult> {
    if !(a <= b) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!("quadrature needs finite a <= b, got [{a}, {b}]")));
    }
    if !(opts.abs_tol > 0.0) {
        return Err(Error::Domain(format!(
            "quadrature tolerance must be positive, got {}",
            opts.abs_tol
        )));
    }
    if a == b {
        return Ok(QuadratureResult {
            value: 0.0,
            error_estimate: 0.0,
            evaluations: 1,
        });
    }

    let mut cuts: Vec<f64> = breakpoints.iter().copied().filter(|&p| p > a && p < b).collect();
    cuts.sort_by(f64::total_cmp);
    cuts.dedup();
    let mut edges = Vec::with_capacity(cuts.len() + 2);
    edges.push(a);
    edges.extend(cuts);
    edges.push(b);

    let mut heap = BinaryHeap::new();
    let mut evaluations = 0;
    for w in edges.windows(2) {
        heap.push(gk15(&f, w[0], w[1]));
        evaluations += 15;
    }

    loop {
        let (value, error) = heap.iter().fold((0.0, 0.0), |(v, e), p| (v + p.value, e + p.error));
        if error <= opts.abs_tol {
            return Ok(QuadratureResult {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        if evaluations + 30 > opts.max_evaluations {
            return Err(Error::NonConvergence {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        let worst = heap.pop().expect("at least one panel");
        let mid = 0.5 * (worst.a + worst.b);
        if mid <= worst.a || mid >= worst.b {
            // cannot split further; accept the panel as is
            return Err(Error::NonConvergence {
                value,
                error_estimate: error,
                evaluations,
            });
        }
        heap.push(gk15(&f, worst.a, mid));
        heap.push(gk15(&f, mid, worst.b));
        evaluations += 30;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn polynomial_and_log() {
        let r = integrate_adaptive(|x| x, 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - 0.5).abs() < 1e-12);
        assert!(r.error_estimate >= 0.0 && r.evaluations >= 1);

        let r = integrate_adaptive(|x| 2.0 * x / (1.0 + x * x), 0.0, 1.0, 1e-12).unwrap();
        assert!((r.value - std::f64::consts::LN_2).abs() < 1e-12);
    }

    #[test]
    fn empty_interval_is_exactly_zero() {
        let r = integrate_adaptive(|x| 1.0 / x, 1.0, 1.0, 1e-12).unwrap();
        assert_eq!(r.value, 0.0);
        assert_eq!(r.error_estimate, 0.0);
        assert_eq!(r.evaluations, 1);
    }

    #[test]
    fn reversed_interval_is_rejected() {
        assert!(integrate_adaptive(|x| x, 1.0, 0.0, 1e-9).is_err());
    }

    #[test]
    fn square_root_endpoint() {
        // ∫_0^1 sqrt(x) dx = 2/3
        let r = integrate_adaptive(f64::sqrt, 0.0, 1.0, 1e-11).unwrap();
        assert!((r.value - 2.0 / 3.0).abs() < 1e-11);
    }

    #[test]
    fn jump_handled_by_breakpoint() {
        let step = |x: f64| if x < 0.3 { 1.0 } else { 2.0 };
        let r = integrate_adaptive_with(step, 0.0, 1.0, &[0.3], QuadratureOptions::new(1e-13)).unwrap();
        assert!((r.value - 1.7).abs() < 1e-13);
        // one Kronrod panel per piece is enough when the jump is a breakpoint
        assert_eq!(r.evaluations, 30);
    }

    #[test]
    fn budget_exhaustion_reports_non_convergence() {
        let opts = QuadratureOptions {
            abs_tol: 1e-15,
            max_evaluations: 100,
        };
        let r = integrate_adaptive_with(|x: f64| (1.0 / x).sin(), 1e-6, 1.0, &[], opts);
        assert!(matches!(r, Err(Error::NonConvergence { .. })));
    }

    proptest! {
        #[test]
        fn linear_in_the_integrand(
            p in proptest::collection::vec(-5.0f64..5.0, 4),
            q in proptest::collection::vec(-5.0f64..5.0, 4),
            s in -3.0f64..3.0,
            t in -3.0f64..3.0,
        ) {
            let poly = |c: &[f64], x: f64| c.iter().rev().fold(0.0, |acc, &k| acc * x + k);
            let tol = 1e-12;
            let fp = integrate_adaptive(|x| poly(&p, x), -1.0, 2.0, tol).unwrap();
            let fq = integrate_adaptive(|x| poly(&q, x), -1.0, 2.0, tol).unwrap();
            let fc = integrate_adaptive(|x| s * poly(&p, x) + t * poly(&q, x), -1.0, 2.0, tol).unwrap();
            let slack = fc.error_estimate + s.abs() * fp.error_estimate + t.abs() * fq.error_estimate + 1e-12;
            prop_assert!((fc.value - (s * fp.value + t * fq.value)).abs() <= slack);
        }
    }
}
