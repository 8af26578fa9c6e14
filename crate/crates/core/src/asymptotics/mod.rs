//! Counting functions, heat traces and the fitted two-term coefficients.
//!
//! The heat route is the primary measurement: `y(t) = (Z(t) − c/t)√t` is
//! fitted by `d + e√t` over a window of a geometric `t` grid. The counting
//! route averages `(N(τ) − aτ)/√τ` over a `τ` window and is confirmatory.

mod adjudicate;
mod fit;
mod heat;

pub use adjudicate::{
    adjudicate, adjudicate_with, check_sum_rule, check_sum_rule_with, AdjudicationReport, SourceDistance, SourceSum,
    SumRuleReport, DECISIVE_GAP_FRACTION, WINNER_STDERRS,
};
pub use fit::{
    default_counting_window, fit_counting_second_coeff, fit_heat_leading, fit_heat_second_coeff, FitMethod, FitResult,
    FitTarget, BIAS_SAFETY, MIN_FIT_SAMPLES,
};
pub use heat::{
    counting_function, heat_samples, heat_trace, write_plot_csv, HeatSample, HeatValue, TGrid, TGridSettings,
    TAIL_REL_LIMIT,
};
