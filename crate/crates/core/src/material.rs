//! Isotropic elastic media and the Rayleigh surface-wave sextic.
//!
//! A medium is described by its squared wave speeds `c_t²` (transverse) and
//! `c_l²` (longitudinal); `α = c_t² / c_l²`. Strong ellipticity only needs
//! both squares positive. The narrower parameter ranges used elsewhere in the
//! literature are recorded as flags, never enforced.

use crate::error::{Error, Result};
use crate::numerics::solve_cubic_real;
use serde::{Deserialize, Serialize};

/// Admissible-range flags for a material.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct RangeFlags {
    /// `α < 1/2`, i.e. `c_l² > 2 c_t²`.
    pub sv_range: bool,
    /// `α < 1`, i.e. `c_l² > c_t²`.
    pub cflv_range: bool,
    /// `n (c_l² - 2 c_t²) + 2 c_t² > 0`: the energy form is convex.
    pub strong_convexity: bool,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct ElasticMaterial {
    pub ct2: f64,
    pub cl2: f64,
    pub alpha: f64,
    pub dim: u32,
    pub flags: RangeFlags,
}

impl ElasticMaterial {
    pub fn ct(&self) -> f64 {
        self.ct2.sqrt()
    }

    pub fn cl(&self) -> f64 {
        self.cl2.sqrt()
    }

    /// Smaller of the two wave speeds.
    pub fn c_min(&self) -> f64 {
        self.ct2.min(self.cl2).sqrt()
    }

    pub fn c_max(&self) -> f64 {
        self.ct2.max(self.cl2).sqrt()
    }

    /// Same medium with both squared speeds multiplied by `sigma`.
    pub fn scaled(&self, sigma: f64) -> Result<Self> {
        make_material(sigma * self.ct2, sigma * self.cl2, self.dim)
    }

    /// Lamé parameters `(λ, μ)` at unit density.
    pub fn lame_parameters(&self) -> (f64, f64) {
        (self.cl2 - 2.0 * self.ct2, self.ct2)
    }

    /// Whether `c_l² = c_t²` to round-off.
    pub fn is_degenerate(&self) -> bool {
        (self.alpha - 1.0).abs() <= 1e-12
    }
}

/// Builds a material, rejecting anything that is not strongly elliptic.
pub fn make_material(ct2: f64, cl2: f64, n: u32) -> Result<ElasticMaterial> {
    if !(ct2 > 0.0) || !ct2.is_finite() {
        return Err(Error::InvalidMaterial(format!(
            "c_t^2 must be positive and finite, got {ct2}"
        )));
    }
    if !(cl2 > 0.0) || !cl2.is_finite() {
        return Err(Error::InvalidMaterial(format!(
            "c_l^2 must be positive and finite, got {cl2}"
        )));
    }
    if n == 0 {
        return Err(Error::InvalidMaterial("dimension must be at least 1".into()));
    }
    let alpha = ct2 / cl2;
    let nf = n as f64;
    Ok(ElasticMaterial {
        ct2,
        cl2,
        alpha,
        dim: n,
        flags: RangeFlags {
            sv_range: alpha < 0.5,
            cflv_range: alpha < 1.0,
            strong_convexity: nf * (cl2 - 2.0 * ct2) + 2.0 * ct2 > 0.0,
        },
    })
}

/// The sextic `γ⁶ − 8γ⁴ + 8(3−2α)γ² − 16(1−α)`.
pub fn rayleigh_sextic(alpha: f64, gamma: f64) -> f64 {
    let s = gamma * gamma;
    ((s - 8.0) * s + 8.0 * (3.0 - 2.0 * alpha)) * s - 16.0 * (1.0 - alpha)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SexticRoot {
    pub gamma: f64,
    pub multiplicity: u32,
}

/// Real roots of the Rayleigh sextic, ascending.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RayleighRoots {
    pub alpha: f64,
    pub roots: Vec<SexticRoot>,
    /// The root in `(0, 1)`, when there is one: the Rayleigh speed over `c_t`.
    pub unit_interval_root: Option<f64>,
}

impl RayleighRoots {
    pub fn residual(&self, gamma: f64) -> f64 {
        rayleigh_sextic(self.alpha, gamma).abs()
    }

    pub fn total_multiplicity(&self) -> u32 {
        self.roots.iter().map(|r| r.multiplicity).sum()
    }
}

/// Values of `s = γ²` below this are treated as the double root `γ = 0`.
const ZERO_S: f64 = 1e-15;

/// Solves the sextic through the cubic in `s = γ²` and pairs `γ = ±√s`.
pub fn rayleigh_roots(alpha: f64) -> Result<RayleighRoots> {
    if !(alpha > 0.0) || !alpha.is_finite() {
        return Err(Error::Domain(format!("alpha must be positive and finite, got {alpha}")));
    }
    let cubic = solve_cubic_real(-8.0, 8.0 * (3.0 - 2.0 * alpha), -16.0 * (1.0 - alpha));
    let mut roots = Vec::new();
    for r in cubic {
        if r.value.abs() <= ZERO_S {
            roots.push(SexticRoot {
                gamma: 0.0,
                multiplicity: 2 * r.multiplicity,
            });
        } else if r.value > 0.0 {
            let g = r.value.sqrt();
            roots.push(SexticRoot {
                gamma: -g,
                multiplicity: r.multiplicity,
            });
            roots.push(SexticRoot {
                gamma: g,
                multiplicity: r.multiplicity,
            });
        }
    }
    roots.sort_by(|a, b| a.gamma.total_cmp(&b.gamma));
    let unit_interval_root = roots
        .iter()
        .map(|r| r.gamma)
        .filter(|&g| g > 0.0 && g < 1.0)
        .fold(None, |acc: Option<f64>, g| Some(acc.map_or(g, |a| a.min(g))));
    Ok(RayleighRoots {
        alpha,
        roots,
        unit_interval_root,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::numerics::{refine_root, Bracket};

    #[test]
    fn material_examples() {
        let m = make_material(1.0, 3.0, 2).unwrap();
        assert_eq!(m.alpha, 1.0 / 3.0);
        assert!(m.flags.sv_range && m.flags.cflv_range);

        let m = make_material(1.0, 1.0, 2).unwrap();
        assert_eq!(m.alpha, 1.0);
        assert!(!m.flags.sv_range && !m.flags.cflv_range);
        // 2(1 − 2) + 2 = 0: on the boundary, not strictly convex
        assert!(!m.flags.strong_convexity);
        assert!(make_material(1.0, 3.0, 2).unwrap().flags.strong_convexity);

        assert!(matches!(make_material(-1.0, 1.0, 2), Err(Error::InvalidMaterial(_))));
        assert!(make_material(1.0, 0.0, 2).is_err());
    }

    #[test]
    fn convexity_flag_can_fail_while_material_is_valid() {
        // n(c_l² − 2c_t²) + 2c_t² = 2(0.5 − 2) + 2 < 0
        let m = make_material(1.0, 0.5, 2).unwrap();
        assert!(!m.flags.strong_convexity);
        assert_eq!(m.ct2 / m.cl2, m.alpha);
    }

    #[test]
    fn sextic_at_alpha_one() {
        let r = rayleigh_roots(1.0).unwrap();
        let big = (4.0 + 2.0 * 2f64.sqrt()).sqrt();
        let small = (4.0 - 2.0 * 2f64.sqrt()).sqrt();
        let want = [(-big, 1), (-small, 1), (0.0, 2), (small, 1), (big, 1)];
        assert_eq!(r.roots.len(), 5);
        for (root, (g, k)) in r.roots.iter().zip(want) {
            assert!((root.gamma - g).abs() <= 1e-12, "{} vs {g}", root.gamma);
            assert_eq!(root.multiplicity, k);
        }
        assert_eq!(r.unit_interval_root, None);
        assert_eq!(r.total_multiplicity(), 6);
    }

    #[test]
    fn unit_root_at_one_third() {
        // oracle: bisection on the cubic in s over (0, 1)
        let a = 1.0 / 3.0;
        let cubic = |s: f64| ((s - 8.0) * s + 8.0 * (3.0 - 2.0 * a)) * s - 16.0 * (1.0 - a);
        let s = refine_root(cubic, Bracket::new(1e-9, 1.0).unwrap(), 1e-15).unwrap();
        let oracle = s.sqrt();
        assert!((oracle - 0.919402).abs() < 1e-6);
        let got = rayleigh_roots(a).unwrap().unit_interval_root.unwrap();
        assert!((got - oracle).abs() < 1e-12);
        assert!(rayleigh_sextic(a, got).abs() < 1e-9);
    }

    #[test]
    fn unit_root_at_nine_tenths() {
        let cubic = |s: f64| ((s - 8.0) * s + 9.6) * s - 1.6;
        let s = refine_root(cubic, Bracket::new(0.0, 1.0).unwrap(), 1e-15).unwrap();
        let got = rayleigh_roots(0.9).unwrap().unit_interval_root.unwrap();
        assert!((got - s.sqrt()).abs() < 1e-12);
        assert!(rayleigh_sextic(0.9, got).abs() <= 1e-9);
    }

    #[test]
    fn residuals_and_symmetry_over_alpha_grid() {
        for i in 1..=19 {
            let a = 0.05 * i as f64;
            let r = rayleigh_roots(a).unwrap();
            for root in &r.roots {
                let g = root.gamma;
                assert!(r.residual(g) <= 1e-9 * 1f64.max(g.powi(6)), "alpha={a} gamma={g}");
                if g != 0.0 {
                    assert!(r
                        .roots
                        .iter()
                        .any(|o| o.gamma == -g && o.multiplicity == root.multiplicity));
                }
            }
            let u = r.unit_interval_root.expect("a Rayleigh root exists for alpha < 1");
            assert!(u > 0.0 && u < 1.0);
        }
    }

    #[test]
    fn small_root_balance_as_alpha_tends_to_one() {
        let mut prev_gap = f64::INFINITY;
        let mut prev_root = f64::INFINITY;
        for k in 1..=6 {
            let a = 1.0 - 10f64.powi(-k);
            let g = rayleigh_roots(a).unwrap().unit_interval_root.unwrap();
            let balance = g * g * (3.0 - 2.0 * a) / (2.0 * (1.0 - a));
            let gap = (balance - 1.0).abs();
            assert!(g < prev_root);
            assert!(gap < prev_gap, "k={k}: balance {balance}");
            prev_gap = gap;
            prev_root = g;
        }
        assert!(prev_gap < 1e-5);
        assert!(prev_root < 2e-3);
    }

    #[test]
    fn rejects_nonpositive_alpha() {
        assert!(rayleigh_roots(-1.0).is_err());
        assert!(rayleigh_roots(0.0).is_err());
    }
}
