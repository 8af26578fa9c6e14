use super::fit::{default_counting_window, fit_counting_second_coeff, fit_heat_second_coeff, FitResult};
use super::heat::{TGrid, TGridSettings};
use crate::domain::BoundaryCondition;
use crate::error::{Error, Result};
use crate::numerics::gamma;
use crate::predictions::{PredictionSet, SourceTag};
use crate::spectrum::{Medium, Spectrum};
use serde::{Deserialize, Serialize};

/// A report is decisive when the heat-route stderr is below this fraction
/// of the smallest gap between distinct predictions.
pub const DECISIVE_GAP_FRACTION: f64 = 0.5;
/// A prediction wins when it is the only one within this many stderrs.
pub const WINNER_STDERRS: f64 = 2.0;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceDistance {
    pub source: SourceTag,
    pub label: String,
    pub gamma: Option<f64>,
    pub predicted_d: f64,
    /// `|measured − predicted|`.
    pub distance: f64,
    pub in_stderr: f64,
    pub adjudicable: bool,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AdjudicationReport {
    pub predictions: PredictionSet,
    pub t_grid: TGrid,
    /// Leading heat coefficient subtracted before the fit.
    pub c_known: f64,
    pub measured: FitResult,
    pub measured_counting: Option<FitResult>,
    /// `Γ(3/2)` times the counting-route `b`, comparable with `measured`.
    pub counting_as_heat_d: Option<f64>,
    pub distances: Vec<SourceDistance>,
    /// Smallest gap between distinct adjudicable predictions.
    pub min_gap: Option<f64>,
    pub decisive: bool,
    pub winner: Option<SourceTag>,
    /// Labels of every adjudicable entry sharing the winning value.
    pub winner_group: Vec<String>,
    pub decisive_gap_fraction: f64,
    pub winner_stderrs: f64,
    pub notes: Vec<String>,
}

fn check_shared(spectrum: &Spectrum, predictions: &PredictionSet) -> Result<()> {
    let Medium::Elastic { material } = spectrum.medium else {
        return Err(Error::Config("adjudication needs an elastic spectrum".into()));
    };
    if material != predictions.material || spectrum.bc != predictions.bc || spectrum.domain != Some(predictions.domain)
    {
        return Err(Error::Config(
            "spectrum and predictions were made for different material, domain or boundary condition".into(),
        ));
    }
    Ok(())
}

fn same_value(x: f64, y: f64) -> bool {
    (x - y).abs() <= 1e-9 * x.abs().max(y.abs()).max(1.0)
}

/// Heat-route `d` and counting-route `b` for one spectrum.
fn measure(spectrum: &Spectrum, grid: &TGrid) -> Result<(f64, FitResult, Option<FitResult>)> {
    let c = spectrum.leading_coefficient();
    let heat = fit_heat_second_coeff(spectrum, c, grid)?;
    let counting = fit_counting_second_coeff(spectrum, c, default_counting_window(spectrum)).ok();
    Ok((c, heat, counting))
}

/// Compares the measured second coefficient of `spectrum` with every entry
/// of `predictions`, using the default `t` grid.
pub fn adjudicate(spectrum: &Spectrum, predictions: &PredictionSet) -> Result<AdjudicationReport> {
    adjudicate_with(spectrum, predictions, &TGridSettings::default())
}

pub fn adjudicate_with(
    spectrum: &Spectrum,
    predictions: &PredictionSet,
    grid: &TGridSettings,
) -> Result<AdjudicationReport> {
    check_shared(spectrum, predictions)?;
    let grid = grid.resolve(spectrum)?;
    let (c_known, measured, counting) = measure(spectrum, &grid)?;
    let se = measured.stderr;

    let distances: Vec<SourceDistance> = predictions
        .entries
        .iter()
        .filter_map(|e| {
            let d = e.heat_d()?;
            let distance = (measured.estimate - d).abs();
            Some(SourceDistance {
                source: e.source,
                label: e.label(),
                gamma: e.gamma,
                predicted_d: d,
                distance,
                in_stderr: if se > 0.0 { distance / se } else { f64::INFINITY },
                adjudicable: e.adjudicable,
            })
        })
        .collect();

    // distinct adjudicable values
    let mut values: Vec<f64> = distances
        .iter()
        .filter(|s| s.adjudicable)
        .map(|s| s.predicted_d)
        .collect();
    values.sort_by(f64::total_cmp);
    values.dedup_by(|a, b| same_value(*a, *b));
    let min_gap = values.windows(2).map(|w| w[1] - w[0]).reduce(f64::min);
    let decisive = min_gap.is_some_and(|g| se < DECISIVE_GAP_FRACTION * g);

    let mut winner = None;
    let mut winner_group = Vec::new();
    if decisive {
        let close: Vec<f64> = values
            .iter()
            .copied()
            .filter(|&v| (measured.estimate - v).abs() <= WINNER_STDERRS * se)
            .collect();
        if let [v] = close[..] {
            let group: Vec<&SourceDistance> = distances
                .iter()
                .filter(|s| s.adjudicable && same_value(s.predicted_d, v))
                .collect();
            winner = group.first().map(|s| s.source);
            winner_group = group.iter().map(|s| s.label.clone()).collect();
        }
    }

    let mut notes = predictions.notes.clone();
    if decisive && winner.is_none() {
        notes.push(format!(
            "decisive but no prediction lies within {WINNER_STDERRS} stderr of the measured d = {:.6}",
            measured.estimate
        ));
    }
    if spectrum.bc == BoundaryCondition::Free && predictions.material.is_degenerate() {
        notes.push(
            "at c_l = c_t the free problem has an infinite-dimensional zero eigenspace; only the three rigid \
             motions are counted, and the positive spectrum coincides with the clamped one"
                .into(),
        );
    }
    let counting_as_heat_d = counting.map(|f| gamma(1.5) * f.estimate);

    Ok(AdjudicationReport {
        predictions: predictions.clone(),
        t_grid: grid,
        c_known,
        measured,
        measured_counting: counting,
        counting_as_heat_d,
        distances,
        min_gap,
        decisive,
        winner,
        winner_group,
        decisive_gap_fraction: DECISIVE_GAP_FRACTION,
        winner_stderrs: WINNER_STDERRS,
        notes,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceSum {
    pub source: SourceTag,
    pub label: String,
    pub predicted_sum: f64,
    /// `|measured − predicted| / stderr`.
    pub in_stderr: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SumRuleReport {
    pub d_dirichlet: FitResult,
    pub d_free: FitResult,
    pub measured_sum: f64,
    /// Dirichlet and free stderrs added in quadrature.
    pub stderr: f64,
    /// `|measured_sum| / stderr`.
    pub zero_in_stderr: f64,
    pub vanishes: bool,
    pub predicted: Vec<SourceSum>,
}

/// Measured `d^Dir + d^free` with combined stderr, set against the sums
/// each source predicts. `predictions` holds the Dirichlet and free sets;
/// it may be omitted for synthetic spectra.
pub fn check_sum_rule(
    spec_dir: &Spectrum,
    spec_free: &Spectrum,
    predictions: Option<(&PredictionSet, &PredictionSet)>,
) -> Result<SumRuleReport> {
    check_sum_rule_with(spec_dir, spec_free, predictions, &TGridSettings::default())
}

pub fn check_sum_rule_with(
    spec_dir: &Spectrum,
    spec_free: &Spectrum,
    predictions: Option<(&PredictionSet, &PredictionSet)>,
    grid: &TGridSettings,
) -> Result<SumRuleReport> {
    if spec_dir.bc != BoundaryCondition::Dirichlet || spec_free.bc == BoundaryCondition::Dirichlet {
        return Err(Error::Config(
            "the sum rule needs a Dirichlet and a non-Dirichlet spectrum".into(),
        ));
    }
    let shared = match (spec_dir.medium, spec_free.medium) {
        (Medium::Synthetic { a: a1, .. }, Medium::Synthetic { a: a2, .. }) => a1 == a2,
        (m1, m2) => m1 == m2,
    };
    if !shared || spec_dir.domain != spec_free.domain {
        return Err(Error::Config("sum-rule spectra must share medium and domain".into()));
    }
    if let Some((pd, pf)) = predictions {
        check_shared(spec_dir, pd)?;
        check_shared(spec_free, pf)?;
    }
    let (_, d_dir, _) = measure(spec_dir, &grid.resolve(spec_dir)?)?;
    let (_, d_free, _) = measure(spec_free, &grid.resolve(spec_free)?)?;
    let sum = d_dir.estimate + d_free.estimate;
    let se = d_dir.stderr.hypot(d_free.stderr);
    let units = |x: f64| if se > 0.0 { x / se } else { f64::INFINITY };

    let mut predicted = Vec::new();
    let (dir_entries, free_entries) = predictions.map_or((&[][..], &[][..]), |(d, f)| (&d.entries[..], &f.entries[..]));
    for f in free_entries {
        let Some(df) = f.heat_d() else { continue };
        let Some(dd) = dir_entries
            .iter()
            .filter(|e| e.source == f.source)
            .find_map(|e| e.heat_d())
        else {
            continue;
        };
        let s = dd + df;
        predicted.push(SourceSum {
            source: f.source,
            label: f.label(),
            predicted_sum: s,
            in_stderr: units((sum - s).abs()),
        });
    }
    Ok(SumRuleReport {
        d_dirichlet: d_dir,
        d_free,
        measured_sum: sum,
        stderr: se,
        zero_in_stderr: units(sum.abs()),
        vanishes: sum.abs() <= WINNER_STDERRS * se,
        predicted,
    })
}
