//! Bessel functions of the first kind `J_m(x)` for integer order and real
//! argument `x >= 0`.
//!
//! Three evaluation regimes are used:
//!
//! * power series when `x` is small compared with the order,
//! * Hankel's asymptotic expansion when `x` is large compared with `m²`,
//! * Miller's backward recurrence otherwise, normalized with
//!   `J_0² + 2 Σ J_k² = 1` (sign fixed by `J_0 + 2 Σ J_2k = 1`).
//!
//! Derivatives follow from `J_m' = (J_{m-1} - J_{m+1}) / 2` and `J_0' = -J_1`.

use crate::error::{Error, Result};
use std::f64::consts::{FRAC_PI_2, FRAC_PI_4, PI};

/// Below this argument the power series is always used.
pub const SERIES_MAX_X: f64 = 2.0;
/// Above this argument (and `2 m² <= x`) the Hankel expansion is used.
pub const ASYMPTOTIC_MIN_X: f64 = 50.0;

const RESCALE_ABOVE: f64 = 1e100;
const RESCALE_BY: f64 = 1e-100;

fn check_arg(x: f64) -> Result<()> {
    if x.is_nan() || x < 0.0 {
        return Err(Error::Domain(format!("Bessel argument must be >= 0, got {x}")));
    }
    if !x.is_finite() {
        return Err(Error::Domain("Bessel argument must be finite".into()));
    }
    Ok(())
}

/// `J_m(x)`.
pub fn bessel_j(m: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(eval(m, x))
}

/// `J_m'(x)`.
pub fn bessel_j_prime(m: u32, x: f64) -> Result<f64> {
    check_arg(x)?;
    Ok(if m == 0 {
        -eval(1, x)
    } else {
        0.5 * (eval(m - 1, x) - eval(m + 1, x))
    })
}

/// `J_0(x), ..., J_{max_order}(x)` in one pass.
pub fn bessel_j_orders(max_order: u32, x: f64) -> Result<Vec<f64>> {
    check_arg(x)?;
    if x == 0.0 {
        let mut v = vec![0.0; max_order as usize + 1];
        v[0] = 1.0;
        return Ok(v);
    }
    if x <= SERIES_MAX_X {
        return Ok((0..=max_order).map(|m| series(m, x)).collect());
    }
    Ok(miller(max_order, x))
}

fn eval(m: u32, x: f64) -> f64 {
    if x == 0.0 {
        return if m == 0 { 1.0 } else { 0.0 };
    }
    let mf = m as f64;
    if x <= SERIES_MAX_X || 0.25 * x * x <= mf + 1.0 {
        series(m, x)
    } else if x >= ASYMPTOTIC_MIN_X && 2.0 * mf * mf <= x {
        hankel(m, x)
    } else {
        miller(m, x)[m as usize]
    }
}

fn series(m: u32, x: f64) -> f64 {
    let half = 0.5 * x;
    let mut term = 1.0;
    for j in 1..=m {
        term *= half / j as f64;
    }
    if term == 0.0 {
        return 0.0;
    }
    let q = -half * half;
    let mut sum = term;
    let mut k = 1.0;
    loop {
        term *= q / (k * (k + m as f64));
        sum += term;
        if term.abs() <= 1e-17 * sum.abs() {
            break;
        }
        k += 1.0;
        if k > 500.0 {
            break;
        }
    }
    sum
}

fn hankel(m: u32, x: f64) -> f64 {
    let mu = 4.0 * (m as f64) * (m as f64);
    let z = 8.0 * x;
    // P ~ sum_{even k} (-1)^{k/2} a_k / z^k, Q ~ sum_{odd k} (-1)^{(k-1)/2} a_k / z^k,
    // a_k = prod_{j=1..k} (mu - (2j-1)^2) / k!
    let mut p = 1.0;
    let mut q = 0.0;
    let mut term = 1.0;
    let mut last = f64::INFINITY;
    for k in 1..60 {
        let odd = (2 * k - 1) as f64;
        term *= (mu - odd * odd) / (k as f64 * z);
        let mag = term.abs();
        if mag > last {
            break;
        }
        last = mag;
        match k % 4 {
            1 => q += term,
            2 => p -= term,
            3 => q -= term,
            _ => p += term,
        }
        if mag < 1e-17 {
            break;
        }
    }
    // reduce the phase in two pieces to keep absolute accuracy for large x
    let shift = (m as f64) * FRAC_PI_2 + FRAC_PI_4;
    let turns = (x / (2.0 * PI)).floor();
    let reduced = (x - turns * 2.0 * PI) - shift;
    let (s, c) = reduced.sin_cos();
    (2.0 / (PI * x)).sqrt() * (p * c - q * s)
}

/// Starting order for the backward recurrence.
fn miller_start(max_order: u32, x: f64) -> usize {
    let big = (max_order as f64).max(x);
    (big + 8.0 * big.cbrt() + 25.0).ceil() as usize
}

/// Normalized backward recurrence returning `J_0..=J_{max_order}`.
fn miller(max_order: u32, x: f64) -> Vec<f64> {
    let top = miller_start(max_order, x);
    let keep = max_order as usize;
    let mut vals = vec![0.0; keep + 1];
    let mut f_next = 0.0;
    let mut f = 1.0;
    let mut sum_sq = 0.0;
    let mut sum_lin = 0.0;
    let two_over_x = 2.0 / x;
    let mut k = top;
    loop {
        if k <= keep {
            vals[k] = f;
        }
        if k == 0 {
            sum_sq += f * f;
            sum_lin += f;
            break;
        }
        sum_sq += 2.0 * f * f;
        if k.is_multiple_of(2) {
            sum_lin += 2.0 * f;
        }
        let f_prev = (k as f64) * two_over_x * f - f_next;
        f_next = f;
        f = f_prev;
        k -= 1;
        if f.abs() > RESCALE_ABOVE {
            f *= RESCALE_BY;
            f_next *= RESCALE_BY;
            sum_sq *= RESCALE_BY * RESCALE_BY;
            sum_lin *= RESCALE_BY;
            for v in vals.iter_mut().skip(k + 1) {
                *v *= RESCALE_BY;
            }
        }
    }
    let norm = sum_sq.sqrt().copysign(sum_lin);
    for v in &mut vals {
        *v /= norm;
    }
    vals
}

/// Direction of `(J_m(x), x J_m'(x))` as a unit vector.
///
/// Only ratios of Bessel values are needed, so the backward recurrence stops
/// at order `m - 1` and no normalization sum is formed. Large orders at
/// small arguments therefore never underflow.
pub(crate) fn bessel_direction(m: u32, x: f64) -> (f64, f64) {
    if x == 0.0 {
        let (a, b) = (1.0f64, m as f64);
        let n = a.hypot(b);
        return (a / n, b / n);
    }
    let top = miller_start(m + 1, x);
    let stop = m.saturating_sub(1) as usize;
    let mut f_next = 0.0;
    let mut f = 1.0;
    let mut k = top;
    // f holds the value at order k, f_next at k + 1
    while k > stop {
        let f_prev = (k as f64) * 2.0 / x * f - f_next;
        f_next = f;
        f = f_prev;
        k -= 1;
        if f.abs() > RESCALE_ABOVE {
            f *= RESCALE_BY;
            f_next *= RESCALE_BY;
        }
    }
    let (j, xjp) = if m == 0 {
        // k == 0: f = J_0, f_next = J_1
        (f, -x * f_next)
    } else {
        // k == m - 1: f = J_{m-1}, f_next = J_m
        (f_next, x * f - m as f64 * f_next)
    };
    let n = j.hypot(xjp);
    (j / n, xjp / n)
}
