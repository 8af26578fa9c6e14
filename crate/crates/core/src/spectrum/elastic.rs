//! Lamé spectrum of the unit disk from the Helmholtz ansatz
//! `u = ∇φ + (∂_y ψ, −∂_x ψ)`, `φ = A J_m(ωr/c_l) cos mθ`,
//! `ψ = B J_m(ωr/c_t) sin mθ` (`ψ = B J_0(ωr/c_t)` for the torsional `m = 0` modes).
//!
//! With `x = ω/c_l` and `y = ω/c_t` the boundary rows at `r = 1` are
//!
//! ```text
//! clamped:  [ x J_m'(x),  m J_m(y) ]
//!           [ m J_m(x),   y J_m'(y) ]
//! free:     [ (2m² − y²) J_m(x) − 2x J_m'(x),   2m (y J_m'(y) − J_m(y)) ]
//!           [ 2m (J_m(x) − x J_m'(x)),          2y J_m'(y) + (y² − 2m²) J_m(y) ]
//! ```
//!
//! Each column is divided by `hypot(J_m, ξ J_m')` at its own argument, and
//! each row by the Euclidean norm of its coefficient magnitudes, a smooth
//! positive envelope, so the determinant has unit scale and its zeros are
//! those of the unscaled system. For `m = 0` the system is diagonal: radial
//! (`φ` only) and torsional (`ψ` only) modes. Where the determinant splits
//! into factors, each factor is scanned on its own so that roots of
//! different factors cannot cancel in a sign test.

use super::scan::{scan_zeros, sweep_orders, ScanParams};
use super::verify::verify_eigenpair;
use super::{
    certify, check_tau_max, empty_cert, sort_entries, Medium, ModeLabel, OperatorKind, ScanSettings, Spectrum,
    SpectrumEntry,
};
use crate::domain::{BoundaryCondition, DomainDescriptor};
use crate::error::{Error, Result};
use crate::material::ElasticMaterial;
use crate::numerics::bessel::bessel_direction;
use crate::numerics::{bessel_j, bessel_j_prime};
use std::f64::consts::PI;

fn check_bc(bc: BoundaryCondition) -> Result<()> {
    if bc == BoundaryCondition::Neumann {
        return Err(Error::Domain(
            "the elastic problem takes the clamped or the traction condition; componentwise Neumann is a scalar baseline".into(),
        ));
    }
    Ok(())
}

/// The scaled 2×2 boundary system described in the module docs. Columns act
/// on the coefficients of `φ` and `ψ`.
pub fn boundary_matrix(m: u32, omega: f64, material: &ElasticMaterial, bc: BoundaryCondition) -> [[f64; 2]; 2] {
    let x = omega / material.cl();
    let y = omega / material.ct();
    let (jx, px) = bessel_direction(m, x);
    let (jy, py) = bessel_direction(m, y);
    let mf = m as f64;
    match bc {
        BoundaryCondition::Dirichlet => {
            let env = (1.0 + mf * mf).sqrt();
            [[px / env, mf * jy / env], [mf * jx / env, py / env]]
        }
        _ => {
            let s = 2.0 * mf * mf - y * y;
            let env = (s * s + 4.0 + 8.0 * mf * mf).sqrt();
            [
                [(s * jx - 2.0 * px) / env, 2.0 * mf * (py - jy) / env],
                [2.0 * mf * (jx - px) / env, (2.0 * py - s * jy) / env],
            ]
        }
    }
}

/// Determinant of [`boundary_matrix`].
pub fn elastic_disk_determinant(m: u32, omega: f64, material: &ElasticMaterial, bc: BoundaryCondition) -> f64 {
    let a = boundary_matrix(m, omega, material, bc);
    a[0][0] * a[1][1] - a[0][1] * a[1][0]
}

/// Potential amplitudes `(A, B)` spanning the kernel of the boundary system
/// at `omega`, taken from the row of larger norm.
pub fn null_vector(m: u32, omega: f64, material: &ElasticMaterial, bc: BoundaryCondition) -> (f64, f64) {
    let a = boundary_matrix(m, omega, material, bc);
    let r = if a[0][0].hypot(a[0][1]) >= a[1][0].hypot(a[1][1]) {
        0
    } else {
        1
    };
    let (mut u, mut v) = (a[r][1], -a[r][0]);
    let n = u.hypot(v);
    if n > 0.0 {
        u /= n;
        v /= n;
    }
    let scale = |k: f64| {
        let j = bessel_j(m, k).unwrap_or(0.0);
        let jp = bessel_j_prime(m, k).unwrap_or(0.0);
        j.hypot(k * jp)
    };
    (u / scale(omega / material.cl()), v / scale(omega / material.ct()))
}

struct OrderRoots {
    /// `(ω, residual)` of retained eigenpairs.
    kept: Vec<(f64, f64)>,
    raw_count: usize,
    dropped: u64,
    noise_rejected: u64,
}

/// Factors of the determinant whose product is [`elastic_disk_determinant`]
/// (up to sign), where it splits: the diagonal at `m = 0`, and at
/// `c_l = c_t` the pair `P̂ ∓ mĴ` (clamped) or `H ∓ G` (free), with
/// `G = (2m² − y²)Ĵ − 2P̂` and `H = 2m(P̂ − Ĵ)`.
fn determinant_factors(m: u32, omega: f64, material: &ElasticMaterial, bc: BoundaryCondition) -> Option<[f64; 2]> {
    if m == 0 {
        let a = boundary_matrix(0, omega, material, bc);
        return Some([a[0][0], a[1][1]]);
    }
    if !material.is_degenerate() {
        return None;
    }
    let y = omega / material.ct();
    let (j, p) = bessel_direction(m, y);
    let mf = m as f64;
    Some(match bc {
        BoundaryCondition::Dirichlet => {
            let env = (1.0 + mf * mf).sqrt();
            [(p - mf * j) / env, (p + mf * j) / env]
        }
        _ => {
            let s = 2.0 * mf * mf - y * y;
            let env = (s * s + 4.0 + 8.0 * mf * mf).sqrt();
            let g = s * j - 2.0 * p;
            let h = 2.0 * mf * (p - j);
            [(h - g) / env, (h + g) / env]
        }
    })
}

fn raw_roots(
    m: u32,
    material: &ElasticMaterial,
    bc: BoundaryCondition,
    omega_max: f64,
    params: &ScanParams,
) -> (Vec<f64>, u64) {
    let lo = 0.25 * params.step;
    if determinant_factors(m, lo, material, bc).is_some() {
        let factor = |i: usize| move |w: f64| determinant_factors(m, w, material, bc).expect("factorizable")[i];
        let first = scan_zeros(&factor(0), lo, omega_max, params);
        let second = scan_zeros(&factor(1), lo, omega_max, params);
        let mut roots = first.roots;
        roots.extend(second.roots);
        roots.sort_by(f64::total_cmp);
        (roots, first.noise_rejected + second.noise_rejected)
    } else {
        let out = scan_zeros(&|w| elastic_disk_determinant(m, w, material, bc), lo, omega_max, params);
        (out.roots, out.noise_rejected)
    }
}

fn elastic_order(
    m: u32,
    material: &ElasticMaterial,
    bc: BoundaryCondition,
    omega_max: f64,
    params: &ScanParams,
    gate: f64,
) -> OrderRoots {
    let (roots, noise_rejected) = raw_roots(m, material, bc, omega_max, params);
    let roots: Vec<f64> = roots.into_iter().filter(|&w| w <= omega_max).collect();
    let mut kept = Vec::with_capacity(roots.len());
    let mut dropped = 0;
    for &w in &roots {
        let nv = null_vector(m, w, material, bc);
        let residual = verify_eigenpair(material, bc, m, w, nv);
        if residual <= gate {
            kept.push((w, residual));
        } else {
            dropped += 1;
        }
    }
    OrderRoots {
        kept,
        raw_count: roots.len(),
        dropped,
        noise_rejected,
    }
}

/// Lamé spectrum of the unit disk with default scan settings.
pub fn elastic_disk_spectrum(material: &ElasticMaterial, bc: BoundaryCondition, tau_max: f64) -> Result<Spectrum> {
    elastic_disk_spectrum_with(material, bc, tau_max, &ScanSettings::default())
}

/// Lamé spectrum of the unit disk.
///
/// Every determinant zero is verified with [`verify_eigenpair`]; pairs above
/// the residual gate are dropped and counted in the certificate. The free
/// condition contributes `τ = 0` with multiplicity 3 (two translations and
/// a rotation), inserted analytically.
pub fn elastic_disk_spectrum_with(
    material: &ElasticMaterial,
    bc: BoundaryCondition,
    tau_max: f64,
    settings: &ScanSettings,
) -> Result<Spectrum> {
    check_bc(bc)?;
    check_tau_max(tau_max)?;
    settings.validate()?;
    if material.dim != 2 {
        return Err(Error::Domain(format!(
            "the disk solver is planar; got n = {}",
            material.dim
        )));
    }
    let omega_max = tau_max.sqrt();
    let params = ScanParams {
        step: settings.step_fraction * PI * material.c_min(),
        rel_tol: settings.refine_rel_tol,
        noise_floor: settings.noise_floor,
        dip_depth: settings.dip_depth,
    };
    let gate = settings.residual_gate;
    let orders = sweep_orders(
        settings.max_order,
        |m| elastic_order(m, material, bc, omega_max, &params, gate),
        |r| r.raw_count == 0,
    )?;

    let stable = if settings.check_step_halving {
        let half = ScanParams {
            step: 0.5 * params.step,
            ..params
        };
        let counts: Vec<bool> = {
            use rayon::prelude::*;
            (0..=orders.len() as u32)
                .into_par_iter()
                .map(|m| {
                    let want = orders.get(m as usize).map_or(0, |r| r.raw_count);
                    let (roots, _) = raw_roots(m, material, bc, omega_max, &half);
                    roots.iter().filter(|&&w| w <= omega_max).count() == want
                })
                .collect()
        };
        Some(counts.into_iter().all(|x| x))
    } else {
        None
    };

    let mut entries = Vec::new();
    if bc == BoundaryCondition::Free {
        entries.push(SpectrumEntry {
            tau: 0.0,
            multiplicity: 3,
            label: ModeLabel { m: 0, k: 0 },
            residual: 0.0,
        });
    }
    let (mut dropped, mut noise_rejected) = (0, 0);
    for (m, order) in orders.iter().enumerate() {
        dropped += order.dropped;
        noise_rejected += order.noise_rejected;
        let mult = if m == 0 { 1 } else { 2 };
        for (k, &(w, residual)) in order.kept.iter().enumerate() {
            let tau = w * w;
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
                residual,
            });
        }
    }
    sort_entries(&mut entries);
    let mut spectrum = Spectrum {
        operator: OperatorKind::Lame,
        bc,
        medium: Medium::Elastic { material: *material },
        domain: Some(DomainDescriptor::unit_disk()),
        tau_max,
        entries,
        completeness: empty_cert(params.step),
    };
    certify(&mut spectrum, settings, params.step, dropped, noise_rejected, stable)?;
    Ok(spectrum)
}
