use super::heat::{heat_samples, HeatSample, TGrid};
use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

/// Fewest samples any fit may use.
pub const MIN_FIT_SAMPLES: usize = 8;
/// Multiplies the heat-route bias bound, which leaves out every power past
/// the next two.
pub const BIAS_SAFETY: f64 = 2.0;
/// Blocks in the dispersion estimate of the counting route.
const COUNTING_BLOCKS: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitTarget {
    CountingB,
    HeatC,
    HeatD,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum FitMethod {
    LinearInSqrtT,
    CesaroCounting,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct FitResult {
    pub target: FitTarget,
    pub estimate: f64,
    /// `sqrt(statistical² + model_bias² + tail_error²)`.
    pub stderr: f64,
    /// In `t` for heat fits, in `τ` for counting fits.
    pub window: (f64, f64),
    pub method: FitMethod,
    pub samples: usize,
    /// Least-squares standard error of the intercept, or the standard error
    /// of the block means.
    pub statistical: f64,
    /// Bound on the intercept shift caused by the next two powers of `√t`.
    pub model_bias: f64,
    /// Largest shift of the intercept the truncated spectrum tail can cause.
    pub tail_error: f64,
    pub slope: Option<f64>,
}

struct PolyFit {
    intercept: f64,
    intercept_se: f64,
    slope: f64,
    /// `intercept = Σ weights[i] · y[i]`.
    weights: Vec<f64>,
    /// Coefficients of `1, s, s², …`.
    coeffs: Vec<f64>,
}

fn binomial(n: usize, k: usize) -> f64 {
    (0..k).fold(1.0, |acc, i| acc * (n - i) as f64 / (i + 1) as f64)
}

/// Least squares of `y` on `1, s, …, s^degree`, evaluated at `s = 0`.
fn poly_at_zero(s: &[f64], y: &[f64], degree: usize) -> Option<PolyFit> {
    let n = s.len();
    let p = degree + 1;
    if n <= p {
        return None;
    }
    // map the window to [-1, 1] for conditioning
    let (lo, hi) = (s[0].min(s[n - 1]), s[0].max(s[n - 1]));
    let mid = 0.5 * (lo + hi);
    let half = 0.5 * (hi - lo);
    if !(half > 0.0) {
        return None;
    }
    let x = DMatrix::from_fn(n, p, |i, j| ((s[i] - mid) / half).powi(j as i32));
    let yv = DVector::from_column_slice(y);
    let xtx = x.transpose() * &x;
    let inv = xtx.try_inverse()?;
    let beta = &inv * (x.transpose() * &yv);
    let resid = &yv - &x * &beta;
    let sigma2 = resid.norm_squared() / (n - p) as f64;

    let u0 = -mid / half;
    let g = DVector::from_fn(p, |j, _| u0.powi(j as i32));
    let intercept = g.dot(&beta);
    let var = (g.transpose() * &inv * &g)[(0, 0)] * sigma2;
    let slope = (1..p).map(|j| j as f64 * beta[j] * u0.powi(j as i32 - 1)).sum::<f64>() / half;
    let weights = (x * (inv * g)).iter().copied().collect();
    // u = s/half − mid/half
    let (scale, shift) = (1.0 / half, u0);
    let coeffs = (0..p)
        .map(|k| {
            (k..p)
                .map(|j| beta[j] * binomial(j, k) * scale.powi(k as i32) * shift.powi((j - k) as i32))
                .sum()
        })
        .collect();
    Some(PolyFit {
        intercept,
        intercept_se: var.max(0.0).sqrt(),
        slope,
        weights,
        coeffs,
    })
}

struct WindowFit {
    range: (usize, usize),
    estimate: f64,
    statistical: f64,
    bias: f64,
    tail: f64,
    slope: f64,
}

impl WindowFit {
    fn stderr(&self) -> f64 {
        self.statistical.hypot(self.bias).hypot(self.tail)
    }
}

/// Fits `y = Σ_{j≤degree} β_j s^j` on every contiguous window of usable
/// samples with at least `min_len` points and keeps the one with the
/// smallest `stderr · sqrt(1 + min_len/len)`. `tail[i]` is the largest
/// change of `y[i]` the missing tail can cause.
///
/// The bias bound takes the next two powers from a fit two degrees higher
/// and adds the intercept shift each one causes in absolute value, so the
/// two cannot cancel by accident.
fn best_window(
    samples: &[HeatSample],
    s: &[f64],
    y: &[f64],
    tail: &[f64],
    degree: usize,
    min_len: usize,
) -> Option<WindowFit> {
    let mut best: Option<(f64, WindowFit)> = None;
    let n = samples.len();
    // unusable[i] = number of unusable samples before i
    let mut unusable = vec![0usize; n + 1];
    for (i, p) in samples.iter().enumerate() {
        unusable[i + 1] = unusable[i] + usize::from(!p.usable);
    }
    for i in 0..n {
        for j in (i + min_len)..=n {
            if unusable[j] > unusable[i] {
                break;
            }
            let (Some(f), Some(g)) = (
                poly_at_zero(&s[i..j], &y[i..j], degree),
                poly_at_zero(&s[i..j], &y[i..j], degree + 2),
            ) else {
                continue;
            };
            let bias = (degree + 1..=degree + 2)
                .map(|k| {
                    let shift: f64 = f.weights.iter().zip(&s[i..j]).map(|(w, x)| w * x.powi(k as i32)).sum();
                    (g.coeffs[k] * shift).abs()
                })
                .sum::<f64>()
                * BIAS_SAFETY;
            let fit = WindowFit {
                range: (i, j),
                estimate: f.intercept,
                statistical: f.intercept_se,
                bias,
                tail: f.weights.iter().zip(&tail[i..j]).map(|(w, e)| w.abs() * e).sum(),
                slope: f.slope,
            };
            let score = fit.stderr() * (1.0 + min_len as f64 / (j - i) as f64).sqrt();
            if score.is_finite() && best.as_ref().is_none_or(|(b, _)| score < *b) {
                best = Some((score, fit));
            }
        }
    }
    best.map(|(_, f)| f)
}

fn min_window(grid: &TGrid) -> usize {
    MIN_FIT_SAMPLES.max(grid.per_decade as usize / 2)
}

fn heat_fit(
    spectrum: &Spectrum,
    grid: &TGrid,
    target: FitTarget,
    degree: usize,
    transform: impl Fn(&HeatSample) -> f64,
    dy_dz: impl Fn(f64) -> f64,
) -> Result<FitResult> {
    let samples = heat_samples(spectrum, grid)?;
    let s: Vec<f64> = samples.iter().map(|p| p.t.sqrt()).collect();
    let y: Vec<f64> = samples.iter().map(transform).collect();
    let tail: Vec<f64> = samples.iter().map(|p| p.tail_bound * dy_dz(p.t)).collect();
    let min_len = min_window(grid);
    let w = best_window(&samples, &s, &y, &tail, degree, min_len).ok_or_else(|| {
        Error::InsufficientSpectrum(format!(
            "no window of {min_len} usable heat samples in t = [{:.3e}, {:.3e}]; raise tau_max",
            grid.t_lo, grid.t_hi
        ))
    })?;
    let (i, j) = w.range;
    Ok(FitResult {
        target,
        estimate: w.estimate,
        stderr: w.stderr(),
        window: (samples[i].t, samples[j - 1].t),
        method: FitMethod::LinearInSqrtT,
        samples: j - i,
        statistical: w.statistical,
        model_bias: w.bias,
        tail_error: w.tail,
        slope: Some(w.slope),
    })
}

/// Second heat coefficient `d` from `(Z − c_known/t)√t ≈ d + e√t`.
pub fn fit_heat_second_coeff(spectrum: &Spectrum, c_known: f64, grid: &TGrid) -> Result<FitResult> {
    heat_fit(
        spectrum,
        grid,
        FitTarget::HeatD,
        1,
        |p| (p.z - c_known / p.t) * p.t.sqrt(),
        f64::sqrt,
    )
}

/// Leading heat coefficient `c` from `Z t ≈ c + d√t + e t`.
pub fn fit_heat_leading(spectrum: &Spectrum, grid: &TGrid) -> Result<FitResult> {
    heat_fit(spectrum, grid, FitTarget::HeatC, 2, |p| p.z * p.t, |t| t)
}

/// `∫_u^v (N(τ) − aτ)/√τ dτ`, exact for the piecewise constant `N`.
fn excess_integral(spectrum: &Spectrum, a: f64, u: f64, v: f64) -> f64 {
    let entries = &spectrum.entries;
    let mut i = entries.partition_point(|e| e.tau <= u);
    let mut k: u64 = entries[..i].iter().map(|e| e.multiplicity as u64).sum();
    let mut x = u;
    let mut acc = 0.0;
    loop {
        let next = match entries.get(i) {
            Some(e) if e.tau < v => e.tau,
            _ => v,
        };
        acc += 2.0 * k as f64 * (next.sqrt() - x.sqrt());
        if next >= v {
            break;
        }
        k += entries[i].multiplicity as u64;
        x = next;
        i += 1;
    }
    acc - 2.0 * a / 3.0 * (v.powf(1.5) - u.powf(1.5))
}

/// `[τ_max/4, τ_max]`.
pub fn default_counting_window(spectrum: &Spectrum) -> (f64, f64) {
    (0.25 * spectrum.tau_max, spectrum.tau_max)
}

/// Second counting coefficient `b` as the mean of `(N(τ) − a_known τ)/√τ`
/// over `window`. The stderr combines the spread of 16 equal block means
/// with the distance to the `1/√τ → 0` extrapolation of those means, which
/// bounds the lower-order bias.
pub fn fit_counting_second_coeff(spectrum: &Spectrum, a_known: f64, window: (f64, f64)) -> Result<FitResult> {
    let (lo, hi) = window;
    if !(lo > 0.0 && hi > lo && hi <= spectrum.tau_max) {
        return Err(Error::InsufficientSpectrum(format!(
            "counting window [{lo}, {hi}] must lie in (0, {}]",
            spectrum.tau_max
        )));
    }
    let width = (hi - lo) / COUNTING_BLOCKS as f64;
    let mut means = Vec::with_capacity(COUNTING_BLOCKS);
    let mut inv_sqrt: Vec<f64> = Vec::with_capacity(COUNTING_BLOCKS);
    for i in 0..COUNTING_BLOCKS {
        let u = lo + i as f64 * width;
        let v = if i + 1 == COUNTING_BLOCKS { hi } else { u + width };
        means.push(excess_integral(spectrum, a_known, u, v) / (v - u));
        inv_sqrt.push(2.0 * (v.sqrt() - u.sqrt()) / (v - u));
    }
    let m = COUNTING_BLOCKS as f64;
    let mean = means.iter().sum::<f64>() / m;
    let var = means.iter().map(|x| (x - mean).powi(2)).sum::<f64>() / (m - 1.0);
    let se = (var / m).sqrt();
    let bias = poly_at_zero(&inv_sqrt, &means, 1).map_or(0.0, |f| (f.intercept - mean).abs());
    Ok(FitResult {
        target: FitTarget::CountingB,
        estimate: mean,
        stderr: se.hypot(bias),
        window,
        method: FitMethod::CesaroCounting,
        samples: COUNTING_BLOCKS,
        statistical: se,
        model_bias: bias,
        tail_error: 0.0,
        slope: None,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomial_intercept_is_exact_on_a_line() {
        let s: Vec<f64> = (0..20).map(|i| 0.1 + 0.01 * i as f64).collect();
        let y: Vec<f64> = s.iter().map(|x| -0.5 + 2.0 * x).collect();
        let f = poly_at_zero(&s, &y, 1).unwrap();
        assert!((f.intercept + 0.5).abs() < 1e-12);
        assert!((f.slope - 2.0).abs() < 1e-10);
        assert!(f.intercept_se < 1e-10);
    }
}
