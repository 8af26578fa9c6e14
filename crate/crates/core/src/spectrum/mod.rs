//! Eigenvalues of the scalar Laplacian and of the Lamé operator on the unit
//! disk, a rectangle baseline, eigenpair verification and the spectrum cache.
//!
//! Eigenvalues are reported as `τ = ω²`. Entries are sorted by `(τ, m, k)`;
//! distinct modes that happen to share an eigenvalue keep separate entries,
//! so `τ` is nondecreasing rather than strictly increasing.

mod cache;
mod elastic;
mod scalar;
mod scan;
mod synthetic;
mod verify;

pub use cache::{
    canonical_json, read_spectrum, write_spectrum, CacheStatus, SpectrumCache, SpectrumRequest, CACHE_VERSION,
};
pub use elastic::{
    boundary_matrix, elastic_disk_determinant, elastic_disk_spectrum, elastic_disk_spectrum_with, null_vector,
};
pub use scalar::{rectangle_scalar_spectrum, scalar_disk_spectrum, scalar_disk_spectrum_with};
pub use synthetic::synthetic_spectrum;
pub use verify::verify_eigenpair;

use crate::domain::{BoundaryCondition, DomainDescriptor};
use crate::error::{Error, Result};
use crate::material::{rayleigh_roots, ElasticMaterial};
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum OperatorKind {
    ScalarLaplace,
    Lame,
    /// Eigenvalues placed by an exact two-term counting law.
    Synthetic,
}

/// What the operator acts on.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum Medium {
    /// `−c²Δ` acting on `components` uncoupled copies.
    Scalar {
        c2: f64,
        components: u32,
    },
    Elastic {
        material: ElasticMaterial,
    },
    /// `N(τ_k) = a τ_k + b √τ_k = k`.
    Synthetic {
        a: f64,
        b: f64,
    },
}

/// `(m, k)` for disk modes (angular order, radial index), `(p, q)` for the
/// rectangle. Zero modes carry `k = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
pub struct ModeLabel {
    pub m: u32,
    pub k: u32,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumEntry {
    pub tau: f64,
    pub multiplicity: u32,
    pub label: ModeLabel,
    /// Verification residual; zero for analytically inserted modes.
    pub residual: f64,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CompletenessCert {
    pub weyl_band_ok: bool,
    /// `max |N(τ) − aτ| / √τ` over the checked range.
    pub max_band_deviation: f64,
    /// The slack `C` in `|N(τ) − aτ| ≤ C √τ`.
    pub band_constant: f64,
    /// The band is checked for `τ ≥ band_from`.
    pub band_from: f64,
    pub scan_step: f64,
    pub residual_max: f64,
    /// Determinant zeros discarded by the residual gate.
    pub dropped_roots: u64,
    /// Sign changes ignored because the function was below the noise floor.
    pub noise_rejected: u64,
    /// Whether halving the scan step left every per-order root count unchanged.
    pub step_halving_stable: Option<bool>,
}

/// Scan and certification settings.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default)]
pub struct ScanSettings {
    /// Scan step as a fraction of the Bessel-zero spacing `π c_min`.
    pub step_fraction: f64,
    /// Root refinement width relative to `ω`.
    pub refine_rel_tol: f64,
    /// Eigenpairs with a larger verification residual are dropped.
    pub residual_gate: f64,
    /// Sign changes with `max(|f(lo)|, |f(hi)|)` below this fraction of the
    /// largest `|f|` seen on the scan grid are ignored.
    pub noise_floor: f64,
    /// Levels of subdivision around dips of `|f|` without a sign change.
    pub dip_depth: u32,
    pub band_slack: f64,
    /// The Weyl band is checked for `τ ≥ band_start_fraction · τ_max`.
    pub band_start_fraction: f64,
    pub max_order: u32,
    pub check_step_halving: bool,
}

impl Default for ScanSettings {
    fn default() -> Self {
        Self {
            step_fraction: 1.0 / 16.0,
            refine_rel_tol: 1e-14,
            residual_gate: 1e-8,
            noise_floor: 1e-10,
            dip_depth: 4,
            band_slack: 2.0,
            band_start_fraction: 0.05,
            max_order: 100_000,
            check_step_halving: true,
        }
    }
}

impl ScanSettings {
    pub fn validate(&self) -> Result<()> {
        let positive = [
            ("step_fraction", self.step_fraction),
            ("refine_rel_tol", self.refine_rel_tol),
            ("residual_gate", self.residual_gate),
            ("noise_floor", self.noise_floor),
            ("band_slack", self.band_slack),
        ];
        for (name, v) in positive {
            if !(v > 0.0) || !v.is_finite() {
                return Err(Error::Config(format!("{name} must be positive, got {v}")));
            }
        }
        if !(0.0..1.0).contains(&self.band_start_fraction) {
            return Err(Error::Config(format!(
                "band_start_fraction must lie in [0, 1), got {}",
                self.band_start_fraction
            )));
        }
        Ok(())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Spectrum {
    pub operator: OperatorKind,
    pub bc: BoundaryCondition,
    pub medium: Medium,
    pub domain: Option<DomainDescriptor>,
    pub tau_max: f64,
    pub entries: Vec<SpectrumEntry>,
    pub completeness: CompletenessCert,
}

impl Spectrum {
    /// Leading counting coefficient `a` in `N(τ) ≈ aτ`.
    pub fn leading_coefficient(&self) -> f64 {
        let area = self.domain.map_or(0.0, |d| d.vol_n);
        match self.medium {
            Medium::Scalar { c2, components } => components as f64 * area / (4.0 * PI * c2),
            Medium::Elastic { material } => (1.0 / material.cl2 + 1.0 / material.ct2) * area / (4.0 * PI),
            Medium::Synthetic { a, .. } => a,
        }
    }

    /// `ℓ² / c_max²`, the time after which the boundary expansion stops being
    /// meaningful; `None` for synthetic spectra.
    pub fn time_scale(&self) -> Option<f64> {
        let ell = self.domain?.length_scale();
        let c2 = match self.medium {
            Medium::Scalar { c2, .. } => c2,
            Medium::Elastic { material } => material.ct2.max(material.cl2),
            Medium::Synthetic { .. } => return None,
        };
        Some(ell * ell / c2)
    }

    pub fn total_count(&self) -> u64 {
        self.entries.iter().map(|e| e.multiplicity as u64).sum()
    }

    /// Number of eigenvalues strictly below `tau`, with multiplicity.
    pub fn count_below(&self, tau: f64) -> u64 {
        let end = self.entries.partition_point(|e| e.tau < tau);
        self.entries[..end].iter().map(|e| e.multiplicity as u64).sum()
    }

    /// Multiplicity-expanded eigenvalue list.
    pub fn expanded(&self) -> Vec<f64> {
        self.entries
            .iter()
            .flat_map(|e| std::iter::repeat_n(e.tau, e.multiplicity as usize))
            .collect()
    }

    pub fn zero_multiplicity(&self) -> u32 {
        self.entries
            .iter()
            .filter(|e| e.tau == 0.0)
            .map(|e| e.multiplicity)
            .sum()
    }

    pub fn max_residual(&self) -> f64 {
        self.entries.iter().map(|e| e.residual).fold(0.0, f64::max)
    }

    /// Checks ordering, ranges and the zero-mode rules.
    pub fn check_invariants(&self) -> Result<()> {
        let bad = |msg: String| Err(Error::Completeness(msg));
        for w in self.entries.windows(2) {
            if w[1].tau < w[0].tau {
                return bad(format!("entries out of order at tau = {}", w[1].tau));
            }
        }
        for e in &self.entries {
            if e.multiplicity == 0 {
                return bad(format!("zero multiplicity at tau = {}", e.tau));
            }
            if !(e.tau >= 0.0) || e.tau > self.tau_max {
                return bad(format!("tau = {} outside [0, {}]", e.tau, self.tau_max));
            }
        }
        let zeros = self.zero_multiplicity();
        let expected = match (self.operator, self.bc, self.medium) {
            (OperatorKind::Synthetic, _, _) => return Ok(()),
            (_, BoundaryCondition::Dirichlet, _) => 0,
            (OperatorKind::Lame, BoundaryCondition::Free, _) => 3,
            (OperatorKind::ScalarLaplace, BoundaryCondition::Neumann, Medium::Scalar { components, .. }) => components,
            _ => zeros,
        };
        if zeros != expected {
            return bad(format!("zero eigenvalue has multiplicity {zeros}, expected {expected}"));
        }
        Ok(())
    }
}

/// Sorts entries by `(τ, m, k)`.
pub(crate) fn sort_entries(entries: &mut [SpectrumEntry]) {
    entries.sort_by(|a, b| a.tau.total_cmp(&b.tau).then(a.label.cmp(&b.label)));
}

/// Boundary slack `C` for the Weyl band of a medium before `band_slack`.
pub(crate) fn band_scale(medium: &Medium, domain: &DomainDescriptor, bc: BoundaryCondition) -> f64 {
    let len = domain.vol_bdry;
    match *medium {
        Medium::Scalar { c2, components } => components as f64 * len / (4.0 * PI * c2.sqrt()),
        Medium::Elastic { material } => {
            let base = len / (4.0 * PI * material.c_min());
            match bc {
                BoundaryCondition::Free => {
                    let gamma = rayleigh_roots(material.alpha)
                        .ok()
                        .and_then(|r| r.roots.iter().map(|s| s.gamma).filter(|&g| g > 0.0).reduce(f64::min))
                        .unwrap_or(1.0);
                    base * (3.0 + 4.0 / gamma)
                }
                _ => base * 3.0,
            }
        }
        Medium::Synthetic { b, .. } => b.abs() + 1.0,
    }
}

/// Checks `|N(τ) − aτ| ≤ C √τ` at both one-sided limits of every jump in
/// `[band_from, τ_max]` and at both ends of that range.
pub(crate) fn weyl_band(entries: &[SpectrumEntry], a: f64, c: f64, band_from: f64, tau_max: f64) -> (bool, f64) {
    let mut worst: f64 = 0.0;
    let mut below: u64 = 0;
    let mut check = |n: u64, tau: f64| {
        if tau >= band_from && tau > 0.0 {
            worst = worst.max((n as f64 - a * tau).abs() / tau.sqrt());
        }
    };
    for e in entries {
        check(below, e.tau);
        below += e.multiplicity as u64;
        check(below, e.tau);
    }
    let n_from = entries
        .iter()
        .filter(|e| e.tau < band_from)
        .map(|e| e.multiplicity as u64)
        .sum();
    check(n_from, band_from);
    check(below, tau_max);
    (worst <= c, worst)
}

/// Builds the certificate and rejects spectra outside the Weyl band.
pub(crate) fn certify(
    spectrum: &mut Spectrum,
    settings: &ScanSettings,
    scan_step: f64,
    dropped_roots: u64,
    noise_rejected: u64,
    step_halving_stable: Option<bool>,
) -> Result<()> {
    let domain = spectrum.domain.expect("computed spectra carry a domain");
    let c = settings.band_slack * band_scale(&spectrum.medium, &domain, spectrum.bc);
    let band_from = settings.band_start_fraction * spectrum.tau_max;
    let (ok, worst) = weyl_band(
        &spectrum.entries,
        spectrum.leading_coefficient(),
        c,
        band_from,
        spectrum.tau_max,
    );
    spectrum.completeness = CompletenessCert {
        weyl_band_ok: ok,
        max_band_deviation: worst,
        band_constant: c,
        band_from,
        scan_step,
        residual_max: spectrum.max_residual(),
        dropped_roots,
        noise_rejected,
        step_halving_stable,
    };
    if !ok {
        return Err(Error::Completeness(format!(
            "Weyl band violated: max |N - a tau| / sqrt(tau) = {worst:.4} > {c:.4}; rerun with a smaller scan step"
        )));
    }
    if step_halving_stable == Some(false) {
        return Err(Error::Completeness(
            "halving the scan step changed a per-order root count; rerun with a smaller scan step".into(),
        ));
    }
    spectrum.check_invariants()
}

pub(crate) fn empty_cert(scan_step: f64) -> CompletenessCert {
    CompletenessCert {
        weyl_band_ok: false,
        max_band_deviation: 0.0,
        band_constant: 0.0,
        band_from: 0.0,
        scan_step,
        residual_max: 0.0,
        dropped_roots: 0,
        noise_rejected: 0,
        step_halving_stable: None,
    }
}

pub(crate) fn check_tau_max(tau_max: f64) -> Result<()> {
    if !(tau_max > 0.0) || !tau_max.is_finite() {
        return Err(Error::Domain(format!(
            "tau_max must be positive and finite, got {tau_max}"
        )));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn entry(tau: f64, multiplicity: u32) -> SpectrumEntry {
        SpectrumEntry {
            tau,
            multiplicity,
            label: ModeLabel { m: 0, k: 1 },
            residual: 0.0,
        }
    }

    fn toy(entries: Vec<SpectrumEntry>) -> Spectrum {
        Spectrum {
            operator: OperatorKind::ScalarLaplace,
            bc: BoundaryCondition::Dirichlet,
            medium: Medium::Scalar { c2: 1.0, components: 1 },
            domain: Some(DomainDescriptor::unit_disk()),
            tau_max: 10.0,
            entries,
            completeness: empty_cert(0.1),
        }
    }

    #[test]
    fn counting_is_strict_and_right_continuous() {
        let s = toy(vec![entry(1.0, 1), entry(2.0, 2), entry(2.0, 1), entry(5.0, 2)]);
        assert_eq!(s.count_below(1.0), 0);
        assert_eq!(s.count_below(1.0 + 1e-12), 1);
        assert_eq!(s.count_below(2.0), 1);
        assert_eq!(s.count_below(3.0), 4);
        assert_eq!(s.count_below(10.0), 6);
        assert_eq!(s.total_count(), 6);
        assert_eq!(s.expanded(), vec![1.0, 2.0, 2.0, 2.0, 5.0, 5.0]);
    }

    #[test]
    fn invariants_catch_disorder_and_zero_modes() {
        assert!(toy(vec![entry(1.0, 1), entry(2.0, 1)]).check_invariants().is_ok());
        assert!(toy(vec![entry(2.0, 1), entry(1.0, 1)]).check_invariants().is_err());
        assert!(toy(vec![entry(0.0, 1)]).check_invariants().is_err());
        assert!(toy(vec![entry(11.0, 1)]).check_invariants().is_err());
    }

    #[test]
    fn band_uses_both_sides_of_each_jump() {
        // a = 1: just below tau = 4 the count is 1, off by 3 / sqrt(4)
        let e = vec![entry(1.0, 1), entry(4.0, 3)];
        let (ok, worst) = weyl_band(&e, 1.0, 1.5, 0.0, 4.0);
        assert!(ok);
        assert!((worst - 1.5).abs() < 1e-15);
        assert!(!weyl_band(&e, 1.0, 1.4, 0.0, 4.0).0);
    }

    #[test]
    fn default_settings_are_valid() {
        ScanSettings::default().validate().unwrap();
        let bad = ScanSettings {
            residual_gate: 0.0,
            ..ScanSettings::default()
        };
        assert!(matches!(bad.validate(), Err(Error::Config(_))));
    }
}
