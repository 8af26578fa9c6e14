use crate::error::{Error, Result};
use crate::spectrum::Spectrum;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use std::io::Write;

/// A heat-trace value is usable when its tail bound is at most this
/// fraction of the value.
pub const TAIL_REL_LIMIT: f64 = 1e-6;

/// Number of eigenvalues strictly below `tau`, with multiplicity.
pub fn counting_function(spectrum: &Spectrum, tau: f64) -> Result<u64> {
    if tau > spectrum.tau_max {
        return Err(Error::OutOfRange {
            tau,
            tau_max: spectrum.tau_max,
        });
    }
    Ok(spectrum.count_below(tau))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatValue {
    pub value: f64,
    /// `(a/t) e^{−t τ_max}`, the leading-order mass of the missing tail.
    pub tail_bound: f64,
    pub usable: bool,
}

/// `Σ multiplicity · e^{−tτ}` over the computed entries.
pub fn heat_trace(spectrum: &Spectrum, t: f64) -> Result<HeatValue> {
    if !(t > 0.0) || !t.is_finite() {
        return Err(Error::Domain(format!("heat trace needs t > 0, got {t}")));
    }
    // largest terms last
    let value: f64 = spectrum
        .entries
        .iter()
        .rev()
        .map(|e| e.multiplicity as f64 * (-t * e.tau).exp())
        .sum();
    let tail_bound = spectrum.leading_coefficient() / t * (-t * spectrum.tau_max).exp();
    Ok(HeatValue {
        value,
        tail_bound,
        usable: tail_bound <= TAIL_REL_LIMIT * value,
    })
}

/// How the `t` grid is laid out.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct TGridSettings {
    pub per_decade: u32,
    /// `t_lo = tail_factor / τ_max`; 14 puts the tail bound just under 1e-6.
    pub tail_factor: f64,
    /// `t_hi = time_fraction · ℓ²/c_max²`, where the next boundary order
    /// stops being small.
    pub time_fraction: f64,
    /// `t_hi` is at least `t_lo` times this.
    pub min_ratio: f64,
    pub t_lo: Option<f64>,
    pub t_hi: Option<f64>,
}

impl Default for TGridSettings {
    fn default() -> Self {
        Self {
            per_decade: 40,
            tail_factor: 14.0,
            time_fraction: 0.02,
            min_ratio: 40.0,
            t_lo: None,
            t_hi: None,
        }
    }
}

impl TGridSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        if self.per_decade < 4 {
            return Err(Error::Config(format!(
                "per_decade must be at least 4, got {}",
                self.per_decade
            )));
        }
        if !positive(self.tail_factor) || !positive(self.time_fraction) || !(self.min_ratio > 1.0) {
            return Err(Error::Config("t-grid factors must be positive (min_ratio > 1)".into()));
        }
        if let (Some(lo), Some(hi)) = (self.t_lo, self.t_hi) {
            if !(positive(lo) && hi > lo && hi.is_finite()) {
                return Err(Error::Config(format!("t grid needs 0 < t_lo < t_hi, got [{lo}, {hi}]")));
            }
        }
        Ok(())
    }

    pub fn resolve(&self, spectrum: &Spectrum) -> Result<TGrid> {
        self.validate()?;
        let t_lo = self.t_lo.unwrap_or(self.tail_factor / spectrum.tau_max);
        let floor = self.min_ratio * t_lo;
        let t_hi = self.t_hi.unwrap_or_else(|| {
            spectrum
                .time_scale()
                .map_or(floor, |s| (self.time_fraction * s).max(floor))
        });
        TGrid::new(t_lo, t_hi, self.per_decade)
    }
}

/// Geometric grid `t_lo · 10^{i/per_decade}` up to `t_hi`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct TGrid {
    pub t_lo: f64,
    pub t_hi: f64,
    pub per_decade: u32,
}

impl TGrid {
    pub fn new(t_lo: f64, t_hi: f64, per_decade: u32) -> Result<Self> {
        if !(t_lo > 0.0 && t_hi > t_lo && t_hi.is_finite()) || per_decade == 0 {
            return Err(Error::Config(format!(
                "bad t grid [{t_lo}, {t_hi}] at {per_decade} per decade"
            )));
        }
        Ok(Self { t_lo, t_hi, per_decade })
    }

    pub fn points(&self) -> Vec<f64> {
        let decades = (self.t_hi / self.t_lo).log10();
        let n = (decades * self.per_decade as f64 + 1e-9).floor() as usize;
        (0..=n)
            .map(|i| self.t_lo * 10f64.powf(i as f64 / self.per_decade as f64))
            .collect()
    }

    /// The same range at half the density.
    pub fn halved(&self) -> Self {
        Self {
            per_decade: (self.per_decade / 2).max(1),
            ..*self
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct HeatSample {
    pub t: f64,
    pub z: f64,
    pub tail_bound: f64,
    pub usable: bool,
}

/// Heat trace at every grid point, evaluated concurrently.
pub fn heat_samples(spectrum: &Spectrum, grid: &TGrid) -> Result<Vec<HeatSample>> {
    grid.points()
        .into_par_iter()
        .map(|t| {
            heat_trace(spectrum, t).map(|h| HeatSample {
                t,
                z: h.value,
                tail_bound: h.tail_bound,
                usable: h.usable,
            })
        })
        .collect()
}

/// Plot data with columns `t, Z, Z_minus_lead_times_sqrt_t, tail_bound`,
/// where the third is `(Z − c_lead/t)√t`.
pub fn write_plot_csv<W: Write>(out: &mut W, samples: &[HeatSample], c_lead: f64) -> Result<()> {
    writeln!(out, "t,Z,Z_minus_lead_times_sqrt_t,tail_bound")?;
    for s in samples {
        let y = (s.z - c_lead / s.t) * s.t.sqrt();
        writeln!(out, "{:.16e},{:.16e},{:.16e},{:.16e}", s.t, s.z, y, s.tail_bound)?;
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grid_spacing_is_geometric() {
        let g = TGrid::new(1e-4, 1e-2, 40).unwrap();
        let p = g.points();
        assert_eq!(p.len(), 81);
        assert!((p[80] - 1e-2).abs() < 1e-15);
        assert_eq!(g.halved().points().len(), 41);
    }
}
