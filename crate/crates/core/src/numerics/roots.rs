//! Bracketed root refinement.

use crate::error::{Error, Result};

/// A closed interval `[lo, hi]` with `lo < hi`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Bracket {
    lo: f64,
    hi: f64,
}

impl Bracket {
    pub fn new(lo: f64, hi: f64) -> Result<Self> {
        if !(lo < hi) || !lo.is_finite() || !hi.is_finite() {
            return Err(Error::InvalidBracket {
                lo,
                hi,
                reason: "need finite lo < hi".into(),
            });
        }
        Ok(Self { lo, hi })
    }

    pub fn lo(&self) -> f64 {
        self.lo
    }

    pub fn hi(&self) -> f64 {
        self.hi
    }

    pub fn width(&self) -> f64 {
        self.hi - self.lo
    }
}

fn same_sign(a: f64, b: f64) -> bool {
    (a > 0.0 && b > 0.0) || (a < 0.0 && b < 0.0)
}

/// Narrows a sign-changing bracket of `f` to width `<= tol` and returns its
/// midpoint (or an exact zero if one is hit).
///
/// Secant steps are taken while they keep halving the bracket; otherwise the
/// step is a bisection. The bracket always contains the sign change.
pub fn refine_root<F: FnMut(f64) -> f64>(mut f: F, bracket: Bracket, tol: f64) -> Result<f64> {
    let (mut a, mut b) = (bracket.lo, bracket.hi);
    let mut fa = f(a);
    let mut fb = f(b);
    if fa.is_nan() || fb.is_nan() {
        return Err(Error::InvalidBracket {
            lo: a,
            hi: b,
            reason: "function is NaN at an endpoint".into(),
        });
    }
    if fa == 0.0 {
        return Ok(a);
    }
    if fb == 0.0 {
        return Ok(b);
    }
    if same_sign(fa, fb) {
        return Err(Error::InvalidBracket {
            lo: a,
            hi: b,
            reason: format!("no sign change: f(lo) = {fa}, f(hi) = {fb}"),
        });
    }

    let mut force_bisect = false;
    let mut iterations = 0;
    while b - a > tol && iterations < 400 {
        iterations += 1;
        let width = b - a;
        let mid = a + 0.5 * width;
        if mid <= a || mid >= b {
            break;
        }
        let x = if force_bisect {
            mid
        } else {
            let s = b - fb * (b - a) / (fb - fa);
            let guard = width / 64.0;
            if s > a + guard && s < b - guard {
                s
            } else {
                mid
            }
        };
        let fx = f(x);
        if fx == 0.0 {
            return Ok(x);
        }
        if fx.is_nan() {
            return Err(Error::InvalidBracket {
                lo: a,
                hi: b,
                reason: format!("function is NaN at {x}"),
            });
        }
        if same_sign(fx, fa) {
            a = x;
            fa = fx;
        } else {
            b = x;
            fb = fx;
        }
        force_bisect = b - a > 0.5 * width;
    }
    Ok(a + 0.5 * (b - a))
}
