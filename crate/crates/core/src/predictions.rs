//! Closed-form predictions for the two-term counting and heat-trace
//! coefficients of the Lamé operator.
//!
//! Conventions, for dimension `n` and eigenvalues `τ`:
//!
//! ```text
//! N(τ) ≈ a τ^{n/2} + b τ^{(n-1)/2}        Z(t) ≈ c t^{-n/2} + d t^{-(n-1)/2}
//! c = Γ(1 + n/2) a,  d = Γ(1 + (n-1)/2) b
//! ```
//!
//! Four sources are evaluated side by side:
//!
//! * `SV`: the Safarov–Vassiliev counting coefficients, with `β` given by the
//!   Dirichlet or free-boundary integral, carried to the heat trace through
//!   the Gamma factors above;
//! * `SV_A26_as_printed`: the free-boundary heat coefficient at `c_l = c_t`
//!   exactly as displayed in the critique, `L/(4√π c_t)·[1 + (4/γ − 3)]`;
//! * `Thm3_1`: `c = [(n−1)/(4πc_t²)^{n/2} + 1/(4πc_l²)^{n/2}]·Vol_n`,
//!   `d = ∓¼[(n−1)/(4πc_t²)^{(n−1)/2} + 1/(4πc_l²)^{(n−1)/2}]·Vol_{n−1}`;
//! * `MS_limit`: the componentwise heat coefficients of `−c_t²Δ`, which is
//!   what the Lamé operator reduces to when `c_l = c_t`.

use crate::domain::{BoundaryCondition, DomainDescriptor};
use crate::error::{Error, Result};
use crate::material::{rayleigh_roots, ElasticMaterial};
use crate::numerics::{gamma, integrate_adaptive_with, QuadratureOptions, QuadratureResult};
use serde::{Deserialize, Serialize};
use std::f64::consts::{FRAC_1_SQRT_2, FRAC_PI_2, PI};
use std::fmt;

/// Absolute quadrature tolerance for the `β` integrals.
pub const BETA_ABS_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct WeylCoefficients {
    pub n: u32,
    /// Counting coefficient of `τ^{n/2}`.
    pub a: Option<f64>,
    /// Counting coefficient of `τ^{(n-1)/2}`.
    pub b: Option<f64>,
    /// Heat coefficient of `t^{-n/2}`.
    pub c: Option<f64>,
    /// Heat coefficient of `t^{-(n-1)/2}`.
    pub d: Option<f64>,
}

impl WeylCoefficients {
    fn counting(n: u32, a: f64, b: f64) -> Self {
        let (c, d) = tauberian(a, b, n);
        Self {
            n,
            a: Some(a),
            b: Some(b),
            c: Some(c),
            d: Some(d),
        }
    }

    fn heat(n: u32, c: f64, d: f64) -> Self {
        Self {
            n,
            a: None,
            b: None,
            c: Some(c),
            d: Some(d),
        }
    }
}

/// `(c, d) = (Γ(1 + n/2) a, Γ(1 + (n−1)/2) b)`.
pub fn tauberian(a: f64, b: f64, n: u32) -> (f64, f64) {
    let nf = n as f64;
    (gamma(1.0 + 0.5 * nf) * a, gamma(1.0 + 0.5 * (nf - 1.0)) * b)
}

fn check_alpha(alpha: f64) -> Result<()> {
    if !(alpha > 0.0 && alpha <= 1.0) {
        return Err(Error::Domain(format!(
            "beta integrals are defined for 0 < alpha <= 1, got {alpha}"
        )));
    }
    Ok(())
}

/// Integrates `g` over `[lo, hi]` after the substitution
/// `ξ = lo + (hi − lo)(3u² − 2u³)`, which removes square-root behaviour at
/// both ends. `splits` are interior points where `g` has a kink or a dip.
fn integrate_smoothed<G: Fn(f64) -> f64>(g: G, lo: f64, hi: f64, splits: &[f64], tol: f64) -> Result<QuadratureResult> {
    let mut edges = vec![lo];
    edges.extend(splits.iter().copied().filter(|&p| p > lo && p < hi));
    edges.push(hi);
    let pieces = (edges.len() - 1) as f64;
    let mut total = QuadratureResult {
        value: 0.0,
        error_estimate: 0.0,
        evaluations: 0,
    };
    for w in edges.windows(2) {
        let (a, b) = (w[0], w[1]);
        let width = b - a;
        let h = |u: f64| {
            let xi = a + width * u * u * (3.0 - 2.0 * u);
            g(xi) * 6.0 * width * u * (1.0 - u)
        };
        let r = integrate_adaptive_with(h, 0.0, 1.0, &[], QuadratureOptions::new(tol / pieces))?;
        total.value += r.value;
        total.error_estimate += r.error_estimate;
        total.evaluations += r.evaluations;
    }
    total.evaluations = total.evaluations.max(1);
    Ok(total)
}

/// `(1 − α ξ⁻²)(ξ⁻² − 1)`, clamped at zero outside `(√α, 1)`.
fn slowness_product(alpha: f64, xi: f64) -> f64 {
    let inv2 = 1.0 / (xi * xi);
    ((1.0 - alpha * inv2) * (inv2 - 1.0)).max(0.0)
}

/// Integrand of the clamped-boundary `β`.
pub fn beta_dirichlet_integrand(alpha: f64, xi: f64) -> f64 {
    slowness_product(alpha, xi).sqrt().atan()
}

/// Integrand of the free-boundary `β`; tends to `π/2` at both ends and
/// vanishes at `ξ = 1/√2`.
pub fn beta_free_integrand(alpha: f64, xi: f64) -> f64 {
    let inv2 = 1.0 / (xi * xi);
    let num = (2.0 - inv2) * (2.0 - inv2);
    let den = 4.0 * slowness_product(alpha, xi).sqrt();
    if den == 0.0 {
        return if num == 0.0 { 0.0 } else { FRAC_PI_2 };
    }
    (num / den).atan()
}

fn check_tol(tol: f64) -> Result<()> {
    if !(tol > 0.0) || !tol.is_finite() {
        return Err(Error::Domain(format!(
            "quadrature tolerance must be positive, got {tol}"
        )));
    }
    Ok(())
}

fn dirichlet_integral(alpha: f64, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    integrate_smoothed(
        |xi| beta_dirichlet_integrand(alpha, xi),
        alpha.sqrt(),
        1.0,
        &[],
        tol * PI / 4.0,
    )
}

fn free_integral(alpha: f64, tol: f64) -> Result<QuadratureResult> {
    check_tol(tol)?;
    integrate_smoothed(
        |xi| beta_free_integrand(alpha, xi),
        alpha.sqrt(),
        1.0,
        &[FRAC_1_SQRT_2],
        tol * PI / 4.0,
    )
}

/// `β = −1 − √α − (4/π) ∫_{√α}^1 atan √((1 − αξ⁻²)(ξ⁻² − 1)) dξ`.
pub fn beta_dirichlet(alpha: f64) -> Result<f64> {
    beta_dirichlet_with(alpha, BETA_ABS_TOL)
}

/// [`beta_dirichlet`] with absolute tolerance `tol` on `β`.
pub fn beta_dirichlet_with(alpha: f64, tol: f64) -> Result<f64> {
    check_alpha(alpha)?;
    let integral = dirichlet_integral(alpha, tol)?;
    Ok(-1.0 - alpha.sqrt() - 4.0 / PI * integral.value)
}

/// A free-boundary `β`, which diverges when `γ = 0`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum BetaValue {
    Finite(f64),
    PlusInfinity,
}

impl BetaValue {
    pub fn finite(self) -> Option<f64> {
        match self {
            BetaValue::Finite(v) => Some(v),
            BetaValue::PlusInfinity => None,
        }
    }
}

impl fmt::Display for BetaValue {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BetaValue::Finite(v) => write!(f, "{v:.12}"),
            BetaValue::PlusInfinity => f.write_str("+inf"),
        }
    }
}

/// `β = 4/γ − 3 + √α + (4/π) ∫_{√α}^1 atan[(2 − ξ⁻²)² / (4√((1 − αξ⁻²)(ξ⁻² − 1)))] dξ`.
///
/// Any nonzero real `γ` is accepted, so every root of the sextic can be
/// plugged in; `γ = 0` yields [`BetaValue::PlusInfinity`].
pub fn beta_free(alpha: f64, gamma: f64) -> Result<BetaValue> {
    beta_free_with(alpha, gamma, BETA_ABS_TOL)
}

/// [`beta_free`] with absolute tolerance `tol` on `β`.
pub fn beta_free_with(alpha: f64, gamma: f64, tol: f64) -> Result<BetaValue> {
    check_alpha(alpha)?;
    if !gamma.is_finite() {
        return Err(Error::Domain(format!("gamma must be finite, got {gamma}")));
    }
    if gamma == 0.0 {
        return Ok(BetaValue::PlusInfinity);
    }
    let integral = free_integral(alpha, tol)?;
    Ok(BetaValue::Finite(
        4.0 / gamma - 3.0 + alpha.sqrt() + 4.0 / PI * integral.value,
    ))
}

fn require_planar(material: &ElasticMaterial) -> Result<()> {
    if material.dim != 2 {
        return Err(Error::Domain(format!(
            "the two-term counting formula with beta is planar; got n = {}",
            material.dim
        )));
    }
    Ok(())
}

/// Counting coefficients `a = (c_l⁻² + c_t⁻²) S / 4π`, `b = β L / (4π c_t)`,
/// together with their heat-trace images.
///
/// For the free condition `gamma` overrides the Rayleigh root; without it the
/// root in `(0, 1)` is used.
pub fn sv_counting_coeffs(
    material: &ElasticMaterial,
    area: f64,
    perimeter: f64,
    bc: BoundaryCondition,
    gamma: Option<f64>,
) -> Result<WeylCoefficients> {
    sv_counting_coeffs_with(material, area, perimeter, bc, gamma, BETA_ABS_TOL)
}

pub fn sv_counting_coeffs_with(
    material: &ElasticMaterial,
    area: f64,
    perimeter: f64,
    bc: BoundaryCondition,
    gamma: Option<f64>,
    tol: f64,
) -> Result<WeylCoefficients> {
    require_planar(material)?;
    if !(area > 0.0 && perimeter > 0.0) {
        return Err(Error::Domain(format!(
            "S and L must be positive, got {area}, {perimeter}"
        )));
    }
    let beta = match bc {
        BoundaryCondition::Dirichlet => beta_dirichlet_with(material.alpha, tol)?,
        BoundaryCondition::Free => {
            let g = match gamma {
                Some(g) => g,
                None => rayleigh_roots(material.alpha)?
                    .unit_interval_root
                    .ok_or(Error::NoUnitRoot { alpha: material.alpha })?,
            };
            match beta_free_with(material.alpha, g, tol)? {
                BetaValue::Finite(b) => b,
                BetaValue::PlusInfinity => return Err(Error::Divergent(format!("beta is +infinity at gamma = {g}"))),
            }
        }
        BoundaryCondition::Neumann => {
            return Err(Error::Domain(
                "the elastic counting formula covers Dirichlet and free conditions".into(),
            ))
        }
    };
    let a = (1.0 / material.cl2 + 1.0 / material.ct2) * area / (4.0 * PI);
    let b = beta * perimeter / (4.0 * PI * material.ct());
    Ok(WeylCoefficients::counting(2, a, b))
}

fn elastic_bc_sign(bc: BoundaryCondition) -> Result<f64> {
    match bc {
        BoundaryCondition::Dirichlet => Ok(-1.0),
        BoundaryCondition::Free => Ok(1.0),
        BoundaryCondition::Neumann => Err(Error::Domain(
            "elastic heat coefficients are defined for Dirichlet and free conditions".into(),
        )),
    }
}

/// Two-term heat coefficients from the elastic heat-trace theorem.
pub fn thm31_heat_coeffs(
    material: &ElasticMaterial,
    vol_n: f64,
    vol_bdry: f64,
    n: u32,
    bc: BoundaryCondition,
) -> Result<WeylCoefficients> {
    let sign = elastic_bc_sign(bc)?;
    let nf = n as f64;
    let shear = 4.0 * PI * material.ct2;
    let press = 4.0 * PI * material.cl2;
    let c = ((nf - 1.0) / shear.powf(0.5 * nf) + 1.0 / press.powf(0.5 * nf)) * vol_n;
    let d = sign * 0.25 * ((nf - 1.0) / shear.powf(0.5 * (nf - 1.0)) + 1.0 / press.powf(0.5 * (nf - 1.0))) * vol_bdry;
    Ok(WeylCoefficients::heat(n, c, d))
}

/// Heat coefficients of `n` decoupled copies of `−c_t²Δ`.
pub fn ms_limit_heat_coeffs(
    ct2: f64,
    vol_n: f64,
    vol_bdry: f64,
    n: u32,
    bc: BoundaryCondition,
) -> Result<WeylCoefficients> {
    let sign = elastic_bc_sign(bc)?;
    let nf = n as f64;
    let base = 4.0 * PI * ct2;
    let c = nf * vol_n / base.powf(0.5 * nf);
    let d = sign * 0.25 * nf * vol_bdry / base.powf(0.5 * (nf - 1.0));
    Ok(WeylCoefficients::heat(n, c, d))
}

/// Two-term coefficients of `components` copies of the scalar operator
/// `−c²Δ` on a planar domain (Dirichlet or Neumann).
pub fn scalar_weyl_coeffs(
    c2: f64,
    components: u32,
    domain: &DomainDescriptor,
    bc: BoundaryCondition,
) -> WeylCoefficients {
    let k = components as f64;
    let a = k * domain.vol_n / (4.0 * PI * c2);
    let b = bc.boundary_sign() * k * domain.vol_bdry / (4.0 * PI * c2.sqrt());
    WeylCoefficients::counting(2, a, b)
}

/// Leading counting coefficient `(c_l⁻² + c_t⁻²) S / 4π`; every source agrees on it.
pub fn elastic_leading_counting(material: &ElasticMaterial, area: f64) -> f64 {
    (1.0 / material.cl2 + 1.0 / material.ct2) * area / (4.0 * PI)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum SourceTag {
    #[serde(rename = "SV")]
    Sv,
    #[serde(rename = "SV_A26_as_printed")]
    SvA26AsPrinted,
    #[serde(rename = "Thm3_1")]
    Thm31,
    #[serde(rename = "MS_limit")]
    MsLimit,
}

impl SourceTag {
    pub fn as_str(self) -> &'static str {
        match self {
            SourceTag::Sv => "SV",
            SourceTag::SvA26AsPrinted => "SV_A26_as_printed",
            SourceTag::Thm31 => "Thm3_1",
            SourceTag::MsLimit => "MS_limit",
        }
    }
}

impl fmt::Display for SourceTag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// How `γ` is chosen for free-boundary `SV` entries.
#[derive(Debug, Clone, Copy, Default, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GammaPolicy {
    /// The sextic root in `(0, 1)`.
    #[default]
    UnitRoot,
    /// A caller-supplied value.
    Explicit(f64),
    /// One entry per distinct real root of the sextic.
    Family,
}

impl std::str::FromStr for GammaPolicy {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "unit" | "unit_root" => Ok(GammaPolicy::UnitRoot),
            "family" | "all" => Ok(GammaPolicy::Family),
            other => other
                .parse::<f64>()
                .map(GammaPolicy::Explicit)
                .map_err(|_| format!("gamma policy must be 'unit', 'family' or a number, got '{other}'")),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionEntry {
    pub source: SourceTag,
    pub gamma: Option<f64>,
    pub coefficients: Option<WeylCoefficients>,
    pub absent_reason: Option<String>,
    /// Whether the entry is a prediction for this very material (as opposed
    /// to a limit formula evaluated away from its limit).
    pub adjudicable: bool,
}

impl PredictionEntry {
    fn present(source: SourceTag, gamma: Option<f64>, coefficients: WeylCoefficients, adjudicable: bool) -> Self {
        Self {
            source,
            gamma,
            coefficients: Some(coefficients),
            absent_reason: None,
            adjudicable,
        }
    }

    fn absent(source: SourceTag, gamma: Option<f64>, reason: impl Into<String>) -> Self {
        Self {
            source,
            gamma,
            coefficients: None,
            absent_reason: Some(reason.into()),
            adjudicable: false,
        }
    }

    /// Predicted heat coefficient `d`, when present.
    pub fn heat_d(&self) -> Option<f64> {
        self.coefficients.and_then(|c| c.d)
    }

    /// Display label, e.g. `SV[γ=1.082392]`.
    pub fn label(&self) -> String {
        match self.gamma {
            Some(g) => format!("{}[gamma={g:.6}]", self.source),
            None => self.source.to_string(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PredictionSet {
    pub material: ElasticMaterial,
    pub domain: DomainDescriptor,
    pub bc: BoundaryCondition,
    pub gamma_policy: GammaPolicy,
    pub entries: Vec<PredictionEntry>,
    pub notes: Vec<String>,
}

impl PredictionSet {
    pub fn first(&self, source: SourceTag) -> Option<&PredictionEntry> {
        self.entries.iter().find(|e| e.source == source)
    }

    pub fn present(&self) -> impl Iterator<Item = &PredictionEntry> {
        self.entries.iter().filter(|e| e.coefficients.is_some())
    }
}

fn gammas_for(policy: GammaPolicy, alpha: f64) -> Result<Vec<Option<f64>>> {
    Ok(match policy {
        GammaPolicy::Explicit(g) => vec![Some(g)],
        GammaPolicy::UnitRoot => vec![rayleigh_roots(alpha)?.unit_interval_root],
        GammaPolicy::Family => rayleigh_roots(alpha)?.roots.iter().map(|r| Some(r.gamma)).collect(),
    })
}

/// Evaluates every source for one configuration. Undefined entries are kept
/// with the reason they are missing.
pub fn assemble_predictions(
    material: &ElasticMaterial,
    domain: &DomainDescriptor,
    bc: BoundaryCondition,
    gamma_policy: GammaPolicy,
) -> PredictionSet {
    assemble_predictions_with(material, domain, bc, gamma_policy, BETA_ABS_TOL)
}

/// [`assemble_predictions`] with quadrature tolerance `tol` on every `β`.
pub fn assemble_predictions_with(
    material: &ElasticMaterial,
    domain: &DomainDescriptor,
    bc: BoundaryCondition,
    gamma_policy: GammaPolicy,
    tol: f64,
) -> PredictionSet {
    let (s, l) = (domain.vol_n, domain.vol_bdry);
    let n = material.dim;
    let mut entries = Vec::new();
    let mut notes = Vec::new();

    match bc {
        BoundaryCondition::Dirichlet => {
            entries.push(match sv_counting_coeffs_with(material, s, l, bc, None, tol) {
                Ok(c) => PredictionEntry::present(SourceTag::Sv, None, c, true),
                Err(e) => PredictionEntry::absent(SourceTag::Sv, None, e.to_string()),
            });
            entries.push(PredictionEntry::absent(
                SourceTag::SvA26AsPrinted,
                None,
                "the as-printed expression covers the free condition only",
            ));
        }
        BoundaryCondition::Free => match gammas_for(gamma_policy, material.alpha) {
            Err(e) => {
                entries.push(PredictionEntry::absent(SourceTag::Sv, None, e.to_string()));
                entries.push(PredictionEntry::absent(SourceTag::SvA26AsPrinted, None, e.to_string()));
            }
            Ok(gammas) => {
                let mut a26 = Vec::new();
                for g in gammas {
                    let Some(g) = g else {
                        let reason = Error::NoUnitRoot { alpha: material.alpha }.to_string();
                        entries.push(PredictionEntry::absent(SourceTag::Sv, None, reason.clone()));
                        a26.push(PredictionEntry::absent(SourceTag::SvA26AsPrinted, None, reason));
                        continue;
                    };
                    entries.push(match sv_counting_coeffs_with(material, s, l, bc, Some(g), tol) {
                        Ok(c) => PredictionEntry::present(SourceTag::Sv, Some(g), c, true),
                        Err(e) => PredictionEntry::absent(SourceTag::Sv, Some(g), e.to_string()),
                    });
                    a26.push(if !material.is_degenerate() {
                        PredictionEntry::absent(
                            SourceTag::SvA26AsPrinted,
                            Some(g),
                            "the as-printed expression is the c_l = c_t specialization",
                        )
                    } else if g == 0.0 {
                        PredictionEntry::absent(SourceTag::SvA26AsPrinted, Some(g), "diverges at gamma = 0")
                    } else if n != 2 {
                        PredictionEntry::absent(SourceTag::SvA26AsPrinted, Some(g), "planar formula")
                    } else {
                        let c = 2.0 * s / (4.0 * PI * material.ct2);
                        let d = l / (4.0 * PI.sqrt() * material.ct()) * (1.0 + (4.0 / g - 3.0));
                        PredictionEntry::present(
                            SourceTag::SvA26AsPrinted,
                            Some(g),
                            WeylCoefficients::heat(2, c, d),
                            true,
                        )
                    });
                }
                entries.extend(a26);
                if material.is_degenerate() {
                    notes.push(
                        "SV_A26_as_printed differs from the SV entry (beta carried through the Gamma factor) \
                         by a factor of 2 in d; both are reported"
                            .into(),
                    );
                }
            }
        },
        BoundaryCondition::Neumann => {
            let reason = "elastic predictions cover Dirichlet and free conditions";
            for src in [
                SourceTag::Sv,
                SourceTag::SvA26AsPrinted,
                SourceTag::Thm31,
                SourceTag::MsLimit,
            ] {
                entries.push(PredictionEntry::absent(src, None, reason));
            }
            return PredictionSet {
                material: *material,
                domain: *domain,
                bc,
                gamma_policy,
                entries,
                notes,
            };
        }
    }

    entries.push(match thm31_heat_coeffs(material, s, l, n, bc) {
        Ok(c) => PredictionEntry::present(SourceTag::Thm31, None, c, true),
        Err(e) => PredictionEntry::absent(SourceTag::Thm31, None, e.to_string()),
    });
    let degenerate = material.is_degenerate();
    entries.push(match ms_limit_heat_coeffs(material.ct2, s, l, n, bc) {
        Ok(c) => PredictionEntry::present(SourceTag::MsLimit, None, c, degenerate),
        Err(e) => PredictionEntry::absent(SourceTag::MsLimit, None, e.to_string()),
    });
    if !degenerate {
        notes.push("MS_limit is the c_l = c_t limit formula; it is shown but not adjudicated here".into());
    }

    PredictionSet {
        material: *material,
        domain: *domain,
        bc,
        gamma_policy,
        entries,
        notes,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::material::make_material;
    use proptest::prelude::*;

    const SQRT_PI: f64 = 1.772_453_850_905_516;

    fn disk() -> DomainDescriptor {
        DomainDescriptor::unit_disk()
    }

    #[test]
    fn beta_dirichlet_limit() {
        assert_eq!(beta_dirichlet(1.0).unwrap(), -2.0);
        assert!((beta_dirichlet(0.999999).unwrap() + 2.0).abs() < 1e-3);
        assert!(beta_dirichlet(0.0).is_err());
        assert!(beta_dirichlet(1.5).is_err());
    }

    #[test]
    fn beta_dirichlet_cross_scheme() {
        // oracle: 10^6-panel midpoint rule on the raw integrand
        let alpha: f64 = 1.0 / 3.0;
        let lo = alpha.sqrt();
        let panels = 1_000_000;
        let h = (1.0 - lo) / panels as f64;
        let mid: f64 = (0..panels)
            .map(|i| beta_dirichlet_integrand(alpha, lo + (i as f64 + 0.5) * h))
            .sum::<f64>()
            * h;
        let oracle = -1.0 - lo - 4.0 / PI * mid;
        assert!((beta_dirichlet(alpha).unwrap() - oracle).abs() < 1e-7);
    }

    #[test]
    fn beta_dirichlet_approaches_minus_two() {
        let mut prev = f64::INFINITY;
        for k in 1..=6 {
            let dist = (beta_dirichlet(1.0 - 10f64.powi(-k)).unwrap() + 2.0).abs();
            assert!(dist < prev);
            prev = dist;
        }
    }

    #[test]
    fn beta_free_at_alpha_one() {
        let g4 = (4.0 - 2.0 * 2f64.sqrt()).sqrt();
        let g2 = (4.0 + 2.0 * 2f64.sqrt()).sqrt();
        let b4 = beta_free(1.0, g4).unwrap().finite().unwrap();
        let b2 = beta_free(1.0, g2).unwrap().finite().unwrap();
        assert!((b4 - (-2.0 + 4.0 / g4)).abs() < 1e-12);
        assert!((b4 - 1.695518).abs() < 1e-6);
        assert!((b2 - (-2.0 + 4.0 / g2)).abs() < 1e-12);
        assert!((b2 + 0.469266).abs() < 1e-6);
        assert_eq!(beta_free(1.0, 0.0).unwrap(), BetaValue::PlusInfinity);
    }

    #[test]
    fn beta_free_cross_scheme() {
        let alpha: f64 = 0.3;
        let lo = alpha.sqrt();
        let panels = 1_000_000;
        let h = (1.0 - lo) / panels as f64;
        let mid: f64 = (0..panels)
            .map(|i| beta_free_integrand(alpha, lo + (i as f64 + 0.5) * h))
            .sum::<f64>()
            * h;
        let g = 0.9;
        let oracle = 4.0 / g - 3.0 + lo + 4.0 / PI * mid;
        let got = beta_free(alpha, g).unwrap().finite().unwrap();
        assert!((got - oracle).abs() < 1e-7, "{got} vs {oracle}");
    }

    #[test]
    fn tauberian_examples() {
        let (c, d) = tauberian(1.0, 0.0, 2);
        assert!((c - 1.0).abs() < 1e-14 && d == 0.0);
        let (c, d) = tauberian(0.0, 1.0, 2);
        assert!(c == 0.0 && (d - SQRT_PI / 2.0).abs() < 1e-14);
        let (c, d) = tauberian(0.5, -1.0, 2);
        assert!((c - 0.5).abs() < 1e-14 && (d + SQRT_PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn sv_counting_examples() {
        let d = disk();
        let m = make_material(1.0, 1.0, 2).unwrap();
        let w = sv_counting_coeffs(&m, d.vol_n, d.vol_bdry, BoundaryCondition::Dirichlet, None).unwrap();
        assert!((w.a.unwrap() - 0.5).abs() < 1e-14);
        assert!((w.b.unwrap() + 1.0).abs() < 1e-14);

        let m3 = make_material(1.0, 3.0, 2).unwrap();
        let w = sv_counting_coeffs(&m3, d.vol_n, d.vol_bdry, BoundaryCondition::Dirichlet, None).unwrap();
        assert!((w.a.unwrap() - 1.0 / 3.0).abs() < 1e-14);

        let g4 = (4.0 - 2.0 * 2f64.sqrt()).sqrt();
        let w = sv_counting_coeffs(&m, d.vol_n, d.vol_bdry, BoundaryCondition::Free, Some(g4)).unwrap();
        let b4 = -2.0 + 4.0 / g4;
        assert!((w.b.unwrap() - b4 / 2.0).abs() < 1e-12);
        assert!((w.b.unwrap() - 0.847759).abs() < 1e-6);

        // no root in (0, 1) at alpha = 1 and no override
        assert!(matches!(
            sv_counting_coeffs(&m, d.vol_n, d.vol_bdry, BoundaryCondition::Free, None),
            Err(Error::NoUnitRoot { .. })
        ));
    }

    #[test]
    fn heat_examples() {
        let d = disk();
        let m = make_material(1.0, 1.0, 2).unwrap();
        let dir = thm31_heat_coeffs(&m, d.vol_n, d.vol_bdry, 2, BoundaryCondition::Dirichlet).unwrap();
        let free = thm31_heat_coeffs(&m, d.vol_n, d.vol_bdry, 2, BoundaryCondition::Free).unwrap();
        assert!((dir.c.unwrap() - 0.5).abs() < 1e-14);
        assert!((dir.d.unwrap() + SQRT_PI / 2.0).abs() < 1e-14);
        assert!((free.d.unwrap() - SQRT_PI / 2.0).abs() < 1e-14);

        let ms = ms_limit_heat_coeffs(1.0, d.vol_n, d.vol_bdry, 2, BoundaryCondition::Dirichlet).unwrap();
        assert!((ms.c.unwrap() - 0.5).abs() < 1e-14);
        assert!((ms.d.unwrap() + SQRT_PI / 2.0).abs() < 1e-14);
    }

    #[test]
    fn assembled_dirichlet_agrees_at_alpha_one() {
        let m = make_material(1.0, 1.0, 2).unwrap();
        let set = assemble_predictions(&m, &disk(), BoundaryCondition::Dirichlet, GammaPolicy::UnitRoot);
        for src in [SourceTag::Sv, SourceTag::Thm31, SourceTag::MsLimit] {
            let d = set.first(src).unwrap().heat_d().unwrap();
            assert!((d + SQRT_PI / 2.0).abs() < 1e-9, "{src}: {d}");
        }
        assert!(set.first(SourceTag::SvA26AsPrinted).unwrap().coefficients.is_none());
    }

    #[test]
    fn assembled_free_at_alpha_one() {
        let m = make_material(1.0, 1.0, 2).unwrap();
        let g4 = (4.0 - 2.0 * 2f64.sqrt()).sqrt();
        let set = assemble_predictions(&m, &disk(), BoundaryCondition::Free, GammaPolicy::Explicit(g4));
        let sv = set.first(SourceTag::Sv).unwrap().heat_d().unwrap();
        let b4 = -2.0 + 4.0 / g4;
        assert!((sv - gamma(1.5) * b4 / 2.0).abs() < 1e-12);
        assert!((sv - 0.751).abs() < 1e-3);
        let thm = set.first(SourceTag::Thm31).unwrap().heat_d().unwrap();
        assert!((thm - 0.886).abs() < 1e-3);
        let a26 = set.first(SourceTag::SvA26AsPrinted).unwrap().heat_d().unwrap();
        assert!((a26 - 2.0 * PI / (4.0 * SQRT_PI) * (4.0 / g4 - 2.0)).abs() < 1e-12);
        assert!((a26 / sv - 2.0).abs() < 1e-12);
    }

    #[test]
    fn family_policy_enumerates_all_roots() {
        let m = make_material(1.0, 1.0, 2).unwrap();
        let set = assemble_predictions(&m, &disk(), BoundaryCondition::Free, GammaPolicy::Family);
        let sv: Vec<_> = set.entries.iter().filter(|e| e.source == SourceTag::Sv).collect();
        assert_eq!(sv.len(), 5);
        let divergent = sv.iter().filter(|e| e.coefficients.is_none()).count();
        assert_eq!(divergent, 1);
    }

    #[test]
    fn missing_unit_root_is_absence_not_error() {
        let m = make_material(1.0, 1.0, 2).unwrap();
        let set = assemble_predictions(&m, &disk(), BoundaryCondition::Free, GammaPolicy::UnitRoot);
        let sv = set.first(SourceTag::Sv).unwrap();
        assert!(sv.coefficients.is_none());
        assert!(sv.absent_reason.as_ref().unwrap().contains("no Rayleigh root"));
        assert!(set.first(SourceTag::Thm31).unwrap().coefficients.is_some());
    }

    #[test]
    fn scalar_control_coefficients() {
        let w = scalar_weyl_coeffs(1.0, 1, &disk(), BoundaryCondition::Dirichlet);
        assert!((w.c.unwrap() - 0.25).abs() < 1e-15);
        assert!((w.d.unwrap() + SQRT_PI / 4.0).abs() < 1e-15);
        let rect = DomainDescriptor::rectangle(PI, PI).unwrap();
        let w = scalar_weyl_coeffs(1.0, 1, &rect, BoundaryCondition::Dirichlet);
        assert!((w.b.unwrap() + 1.0).abs() < 1e-15);
    }

    proptest! {
        #[test]
        fn thm31_is_antisymmetric(ct2 in 0.1f64..10.0, cl2 in 0.1f64..10.0, s in 0.5f64..5.0, l in 0.5f64..10.0, n in 2u32..5) {
            let m = make_material(ct2, cl2, n).unwrap();
            let dir = thm31_heat_coeffs(&m, s, l, n, BoundaryCondition::Dirichlet).unwrap();
            let free = thm31_heat_coeffs(&m, s, l, n, BoundaryCondition::Free).unwrap();
            prop_assert_eq!(dir.d.unwrap(), -free.d.unwrap());
            prop_assert_eq!(dir.c, free.c);
        }

        #[test]
        fn thm31_matches_ms_limit_when_speeds_coincide(ct2 in 0.1f64..10.0, s in 0.5f64..5.0, l in 0.5f64..10.0, n in 1u32..5) {
            let m = make_material(ct2, ct2, n).unwrap();
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Free] {
                let t = thm31_heat_coeffs(&m, s, l, n, bc).unwrap();
                let ms = ms_limit_heat_coeffs(ct2, s, l, n, bc).unwrap();
                prop_assert!((t.c.unwrap() - ms.c.unwrap()).abs() <= 1e-12 * ms.c.unwrap().abs());
                prop_assert!((t.d.unwrap() - ms.d.unwrap()).abs() <= 1e-12 * ms.d.unwrap().abs());
            }
        }

        #[test]
        fn sv_entries_satisfy_tauberian(alpha in 0.05f64..0.95) {
            let m = make_material(1.0, 1.0 / alpha, 2).unwrap();
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Free] {
                let set = assemble_predictions(&m, &disk(), bc, GammaPolicy::UnitRoot);
                for e in set.present() {
                    let w = e.coefficients.unwrap();
                    if let (Some(a), Some(b)) = (w.a, w.b) {
                        let (c, d) = tauberian(a, b, w.n);
                        prop_assert_eq!(Some(c), w.c);
                        prop_assert_eq!(Some(d), w.d);
                    }
                }
            }
        }

        #[test]
        fn scaling_covariance(alpha in 0.05f64..1.0, sigma in 0.1f64..10.0) {
            let base = make_material(1.0, 1.0 / alpha, 2).unwrap();
            let scaled = base.scaled(sigma).unwrap();
            prop_assert!((scaled.alpha - base.alpha).abs() <= 1e-15);
            let d = disk();
            for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Free] {
                let w0 = sv_counting_coeffs(&base, d.vol_n, d.vol_bdry, bc, None).unwrap();
                let w1 = sv_counting_coeffs(&scaled, d.vol_n, d.vol_bdry, bc, None).unwrap();
                prop_assert!((w1.a.unwrap() * sigma - w0.a.unwrap()).abs() <= 1e-12 * w0.a.unwrap().abs());
                prop_assert!((w1.b.unwrap() * sigma.sqrt() - w0.b.unwrap()).abs() <= 1e-9 * w0.b.unwrap().abs().max(1.0));
            }
        }
    }
}
