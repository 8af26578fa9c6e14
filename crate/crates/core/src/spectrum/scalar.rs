//! Scalar baselines: `−c²Δ` on the unit disk and on a rectangle.

use super::scan::{scan_zeros, sweep_orders, ScanParams};
use super::{
    certify, check_tau_max, empty_cert, sort_entries, Medium, ModeLabel, OperatorKind, ScanSettings, Spectrum,
    SpectrumEntry,
};
use crate::domain::{BoundaryCondition, DomainDescriptor};
use crate::error::{Error, Result};
use crate::numerics::bessel::bessel_direction;
use std::f64::consts::PI;

fn check_scalar(c2: f64, bc: BoundaryCondition, components: u32) -> Result<()> {
    if !(c2 > 0.0) || !c2.is_finite() {
        return Err(Error::Domain(format!("c^2 must be positive, got {c2}")));
    }
    if components == 0 {
        return Err(Error::Domain("at least one component is needed".into()));
    }
    if bc == BoundaryCondition::Free {
        return Err(Error::Domain(
            "the traction condition applies to the elastic operator only".into(),
        ));
    }
    Ok(())
}

/// `J_m(x)` (Dirichlet) or `x J_m'(x)` (Neumann), both divided by
/// `hypot(J_m, x J_m')`.
fn disk_factor(m: u32, x: f64, bc: BoundaryCondition) -> f64 {
    let (j, xjp) = bessel_direction(m, x);
    match bc {
        BoundaryCondition::Dirichlet => j,
        _ => xjp,
    }
}

struct OrderRoots {
    roots: Vec<f64>,
    noise_rejected: u64,
}

fn disk_order(m: u32, bc: BoundaryCondition, x_max: f64, params: &ScanParams) -> OrderRoots {
    // no zero of J_m or J_m' lies below m
    let lo = (0.9 * m as f64).max(0.25 * params.step);
    let out = scan_zeros(&|x| disk_factor(m, x, bc), lo, x_max, params);
    OrderRoots {
        roots: out.roots.into_iter().filter(|&x| x <= x_max).collect(),
        noise_rejected: out.noise_rejected,
    }
}

/// Spectrum of `−c²Δ` on the unit disk for `components` uncoupled copies,
/// with default scan settings.
pub fn scalar_disk_spectrum(c2: f64, bc: BoundaryCondition, tau_max: f64, components: u32) -> Result<Spectrum> {
    scalar_disk_spectrum_with(c2, bc, tau_max, components, &ScanSettings::default())
}

pub fn scalar_disk_spectrum_with(
    c2: f64,
    bc: BoundaryCondition,
    tau_max: f64,
    components: u32,
    settings: &ScanSettings,
) -> Result<Spectrum> {
    check_scalar(c2, bc, components)?;
    check_tau_max(tau_max)?;
    settings.validate()?;
    let x_max = (tau_max / c2).sqrt();
    let params = ScanParams {
        step: settings.step_fraction * PI,
        rel_tol: settings.refine_rel_tol,
        noise_floor: settings.noise_floor,
        dip_depth: settings.dip_depth,
    };
    let orders = sweep_orders(
        settings.max_order,
        |m| disk_order(m, bc, x_max, &params),
        |r| r.roots.is_empty(),
    )?;

    let stable = if settings.check_step_halving {
        let half = ScanParams {
            step: 0.5 * params.step,
            ..params
        };
        let mut same = true;
        for m in 0..=orders.len() as u32 {
            let want = orders.get(m as usize).map_or(0, |r| r.roots.len());
            same &= disk_order(m, bc, x_max, &half).roots.len() == want;
        }
        Some(same)
    } else {
        None
    };

    let mut entries = Vec::new();
    let mut noise_rejected = 0;
    if bc == BoundaryCondition::Neumann {
        entries.push(SpectrumEntry {
            tau: 0.0,
            multiplicity: components,
            label: ModeLabel { m: 0, k: 0 },
            residual: 0.0,
        });
    }
    for (m, order) in orders.iter().enumerate() {
        noise_rejected += order.noise_rejected;
        let mult = if m == 0 { components } else { 2 * components };
        for (k, &x) in order.roots.iter().enumerate() {
            let tau = c2 * x * x;
            if tau > tau_max {
                continue;
            }
            entries.push(SpectrumEntry {
                tau,
                multiplicity: mult,
                label: ModeLabel {
                    m: m as u32,
                    k: k as u32 + 1,
                },
                residual: disk_factor(m as u32, x, bc).abs(),
            });
        }
    }
    sort_entries(&mut entries);
    let mut spectrum = Spectrum {
        operator: OperatorKind::ScalarLaplace,
        bc,
        medium: Medium::Scalar { c2, components },
        domain: Some(DomainDescriptor::unit_disk()),
        tau_max,
        entries,
        completeness: empty_cert(params.step),
    };
    certify(&mut spectrum, settings, params.step, 0, noise_rejected, stable)?;
    Ok(spectrum)
}

/// `c²π²(p²/a² + q²/b²)` for `p, q ≥ 1` (Dirichlet) or `p, q ≥ 0` (Neumann).
pub fn rectangle_scalar_spectrum(a: f64, b: f64, c2: f64, bc: BoundaryCondition, tau_max: f64) -> Result<Spectrum> {
    check_scalar(c2, bc, 1)?;
    check_tau_max(tau_max)?;
    let domain = DomainDescriptor::rectangle(a, b)?;
    let first = if bc == BoundaryCondition::Dirichlet { 1u32 } else { 0 };
    let unit_p = c2 * (PI / a).powi(2);
    let unit_q = c2 * (PI / b).powi(2);
    let mut entries = Vec::new();
    let mut p = first;
    while unit_p * (p as f64).powi(2) <= tau_max {
        let tp = unit_p * (p as f64).powi(2);
        let mut q = first;
        loop {
            let tau = tp + unit_q * (q as f64).powi(2);
            if tau > tau_max {
                break;
            }
            entries.push(SpectrumEntry {
                tau,
                multiplicity: 1,
                label: ModeLabel { m: p, k: q },
                residual: 0.0,
            });
            q += 1;
        }
        p += 1;
    }
    sort_entries(&mut entries);
    let settings = ScanSettings::default();
    let mut spectrum = Spectrum {
        operator: OperatorKind::ScalarLaplace,
        bc,
        medium: Medium::Scalar { c2, components: 1 },
        domain: Some(domain),
        tau_max,
        entries,
        completeness: empty_cert(0.0),
    };
    certify(&mut spectrum, &settings, 0.0, 0, 0, None)?;
    Ok(spectrum)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn disk_factor_sign_matches_bessel() {
        for m in 0..5 {
            for i in 1..40 {
                let x = 0.37 * i as f64;
                let j = crate::numerics::bessel_j(m, x).unwrap();
                assert_eq!(disk_factor(m, x, BoundaryCondition::Dirichlet).signum(), j.signum());
            }
        }
    }
}
