//! Spectra placed by an exact two-term counting law.

use super::{
    band_scale, check_tau_max, sort_entries, weyl_band, CompletenessCert, Medium, ModeLabel, OperatorKind,
    ScanSettings, Spectrum, SpectrumEntry,
};
use crate::domain::{BoundaryCondition, DomainDescriptor};
use crate::error::{Error, Result};

/// Eigenvalues `τ_k` solving `a τ_k + b √τ_k = k` for `k = 1, 2, …` up to
/// `tau_max`, each simple. The boundary condition is only a label: the sign
/// of `b` is what matters.
pub fn synthetic_spectrum(a: f64, b: f64, tau_max: f64, bc: BoundaryCondition) -> Result<Spectrum> {
    if !(a > 0.0) || !a.is_finite() || !b.is_finite() {
        return Err(Error::Domain(format!(
            "synthetic law needs a > 0 and finite b, got a = {a}, b = {b}"
        )));
    }
    check_tau_max(tau_max)?;
    let mut entries = Vec::new();
    for k in 1u64.. {
        let s = (-b + (b * b + 4.0 * a * k as f64).sqrt()) / (2.0 * a);
        let tau = s * s;
        if tau > tau_max {
            break;
        }
        entries.push(SpectrumEntry {
            tau,
            multiplicity: 1,
            label: ModeLabel { m: 0, k: k as u32 },
            residual: 0.0,
        });
    }
    sort_entries(&mut entries);
    let medium = Medium::Synthetic { a, b };
    let settings = ScanSettings::default();
    let c = settings.band_slack * band_scale(&medium, &DomainDescriptor::unit_disk(), bc);
    let band_from = settings.band_start_fraction * tau_max;
    let (ok, worst) = weyl_band(&entries, a, c, band_from, tau_max);
    Ok(Spectrum {
        operator: OperatorKind::Synthetic,
        bc,
        medium,
        domain: None,
        tau_max,
        entries,
        completeness: CompletenessCert {
            weyl_band_ok: ok,
            max_band_deviation: worst,
            band_constant: c,
            band_from,
            scan_step: 0.0,
            residual_max: 0.0,
            dropped_roots: 0,
            noise_rejected: 0,
            step_halving_stable: None,
        },
    })
}
