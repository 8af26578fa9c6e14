use super::config::ExperimentConfig;
use crate::asymptotics::{
    adjudicate_with, check_sum_rule_with, default_counting_window, fit_counting_second_coeff, fit_heat_leading,
    fit_heat_second_coeff, heat_samples, write_plot_csv, AdjudicationReport, FitResult, SumRuleReport, TGrid,
};
use crate::domain::{BoundaryCondition, DomainKind};
use crate::error::{Error, Result};
use crate::material::{make_material, rayleigh_roots, ElasticMaterial};
use crate::numerics::gamma;
use crate::predictions::{
    assemble_predictions_with, beta_dirichlet_with, beta_free_with, scalar_weyl_coeffs, BetaValue, GammaPolicy,
    PredictionSet, SourceTag, WeylCoefficients,
};
use crate::spectrum::{CacheStatus, CompletenessCert, Medium, OperatorKind, Spectrum, SpectrumCache, SpectrumRequest};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};
use std::fmt::Write as _;
use std::path::PathBuf;

/// What a command hands back to the driver.
#[derive(Debug, Clone)]
pub struct CommandOutput {
    pub command: &'static str,
    pub result: Value,
    pub text: String,
    /// `(file name suffix, contents)` of CSV side outputs.
    pub csv: Vec<(String, String)>,
    /// Set by `adjudicate` when the report is not decisive.
    pub indecisive: bool,
}

impl CommandOutput {
    fn new<T: Serialize>(command: &'static str, result: &T, text: String) -> Result<Self> {
        Ok(Self {
            command,
            result: serde_json::to_value(result)?,
            text,
            csv: Vec::new(),
            indecisive: false,
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
pub enum OperatorArg {
    /// The elastic operator.
    Lame,
    /// `components` copies of `−c_t²Δ`.
    Scalar,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize, clap::ValueEnum)]
#[serde(rename_all = "snake_case")]
#[value(rename_all = "snake_case")]
pub enum SweepTarget {
    Beta,
    SvD,
    Thm31D,
    MeasuredD,
}

impl SweepTarget {
    fn name(self) -> &'static str {
        match self {
            SweepTarget::Beta => "beta",
            SweepTarget::SvD => "sv_d",
            SweepTarget::Thm31D => "thm31_d",
            SweepTarget::MeasuredD => "measured_d",
        }
    }
}

fn fmt_opt(x: Option<f64>) -> String {
    x.map_or_else(|| "-".to_string(), |v| format!("{v:.9}"))
}

pub fn rayleigh(alpha: f64) -> Result<CommandOutput> {
    let roots = rayleigh_roots(alpha)?;
    let rows: Vec<Value> = roots
        .roots
        .iter()
        .map(|r| json!({"gamma": r.gamma, "multiplicity": r.multiplicity, "residual": roots.residual(r.gamma)}))
        .collect();
    let mut text = format!(
        "Rayleigh sextic roots, alpha = {alpha}\n{:>22}  {:>4}  {:>9}\n",
        "gamma", "mult", "residual"
    );
    for r in &roots.roots {
        writeln!(
            text,
            "{:>22.15}  {:>4}  {:>9.1e}",
            r.gamma,
            r.multiplicity,
            roots.residual(r.gamma)
        )
        .unwrap();
    }
    writeln!(text, "unit-interval root: {}", fmt_opt(roots.unit_interval_root)).unwrap();
    let result = json!({
        "alpha": alpha,
        "roots": rows,
        "total_multiplicity": roots.total_multiplicity(),
        "unit_interval_root": roots.unit_interval_root,
    });
    CommandOutput::new("rayleigh", &result, text)
}

fn gammas(policy: GammaPolicy, alpha: f64) -> Result<Vec<f64>> {
    Ok(match policy {
        GammaPolicy::Explicit(g) => vec![g],
        GammaPolicy::UnitRoot => vec![rayleigh_roots(alpha)?
            .unit_interval_root
            .ok_or(Error::NoUnitRoot { alpha })?],
        GammaPolicy::Family => rayleigh_roots(alpha)?.roots.iter().map(|r| r.gamma).collect(),
    })
}

pub fn beta(alpha: f64, bc: BoundaryCondition, policy: GammaPolicy, tol: f64) -> Result<CommandOutput> {
    let mut text = String::new();
    let result = match bc {
        BoundaryCondition::Dirichlet => {
            let b = beta_dirichlet_with(alpha, tol)?;
            writeln!(text, "beta_dir(alpha = {alpha}) = {b:.12}").unwrap();
            json!({"alpha": alpha, "bc": bc, "values": [{"gamma": null, "beta": BetaValue::Finite(b)}]})
        }
        BoundaryCondition::Free => {
            let mut values = Vec::new();
            for g in gammas(policy, alpha)? {
                let b = beta_free_with(alpha, g, tol)?;
                writeln!(text, "beta_free(alpha = {alpha}, gamma = {g:.12}) = {b}").unwrap();
                values.push(json!({"gamma": g, "beta": b}));
            }
            json!({"alpha": alpha, "bc": bc, "values": values})
        }
        BoundaryCondition::Neumann => {
            return Err(Error::Config("beta is defined for the dir and free conditions".into()));
        }
    };
    CommandOutput::new("beta", &result, text)
}

fn prediction_table(set: &PredictionSet) -> String {
    let mut text = format!(
        "{:<30} {:>15} {:>15} {:>15} {:>15}  {}\n",
        "source", "a", "b", "c", "d", "note"
    );
    for e in &set.entries {
        let c = e.coefficients;
        let note = match (&e.absent_reason, e.adjudicable) {
            (Some(r), _) => format!("absent: {r}"),
            (None, false) => "not adjudicated".to_string(),
            (None, true) => String::new(),
        };
        writeln!(
            text,
            "{:<30} {:>15} {:>15} {:>15} {:>15}  {note}",
            e.label(),
            fmt_opt(c.and_then(|c| c.a)),
            fmt_opt(c.and_then(|c| c.b)),
            fmt_opt(c.and_then(|c| c.c)),
            fmt_opt(c.and_then(|c| c.d)),
        )
        .unwrap();
    }
    for n in &set.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    text
}

fn predictions_for(cfg: &ExperimentConfig, material: &ElasticMaterial, bc: BoundaryCondition) -> Result<PredictionSet> {
    Ok(assemble_predictions_with(
        material,
        &cfg.domain_descriptor()?,
        bc,
        cfg.gamma_policy,
        cfg.tolerances.quadrature,
    ))
}

pub fn predict(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let material = cfg.material()?;
    let set = predictions_for(cfg, &material, cfg.bc)?;
    let text = format!(
        "predictions: alpha = {}, bc = {}, S = {:.6}, L = {:.6}\n{}",
        material.alpha,
        cfg.bc,
        set.domain.vol_n,
        set.domain.vol_bdry,
        prediction_table(&set)
    );
    CommandOutput::new("predict", &set, text)
}

fn request(
    cfg: &ExperimentConfig,
    operator: OperatorArg,
    components: u32,
    bc: BoundaryCondition,
    medium: Option<Medium>,
) -> Result<SpectrumRequest> {
    let (op, medium) = match (operator, medium) {
        (_, Some(m @ Medium::Elastic { .. })) => (OperatorKind::Lame, m),
        (_, Some(m)) => (OperatorKind::ScalarLaplace, m),
        (OperatorArg::Lame, None) => (
            OperatorKind::Lame,
            Medium::Elastic {
                material: cfg.material()?,
            },
        ),
        (OperatorArg::Scalar, None) => (
            OperatorKind::ScalarLaplace,
            Medium::Scalar {
                c2: cfg.ct2,
                components,
            },
        ),
    };
    if op == OperatorKind::Lame && cfg.domain != DomainKind::UnitDisk {
        return Err(Error::Config(
            "elastic spectra are computed on the unit disk only".into(),
        ));
    }
    Ok(SpectrumRequest {
        operator: op,
        bc,
        medium,
        domain: cfg.domain_descriptor()?,
        tau_max: cfg.tau_max,
        settings: cfg.scan_settings(),
    })
}

#[derive(Debug, Clone, Serialize)]
pub struct SpectrumSummary {
    pub key: String,
    pub cache_status: CacheStatus,
    pub cache_path: PathBuf,
    pub operator: OperatorKind,
    pub bc: BoundaryCondition,
    pub medium: Medium,
    pub tau_max: f64,
    pub entries: usize,
    pub eigenvalues: u64,
    pub zero_multiplicity: u32,
    pub max_residual: f64,
    pub completeness: CompletenessCert,
}

fn load(cache: &SpectrumCache, req: &SpectrumRequest) -> Result<(Spectrum, SpectrumSummary)> {
    let (spectrum, status, path) = cache.load_or_compute(req)?;
    let summary = SpectrumSummary {
        key: req.key()?,
        cache_status: status,
        cache_path: path,
        operator: spectrum.operator,
        bc: spectrum.bc,
        medium: spectrum.medium,
        tau_max: spectrum.tau_max,
        entries: spectrum.entries.len(),
        eigenvalues: spectrum.total_count(),
        zero_multiplicity: spectrum.zero_multiplicity(),
        max_residual: spectrum.max_residual(),
        completeness: spectrum.completeness,
    };
    Ok((spectrum, summary))
}

fn summary_text(s: &SpectrumSummary) -> String {
    let c = &s.completeness;
    format!(
        "spectrum {:?}/{} up to tau = {}: {} entries, {} eigenvalues ({} zero), cache {:?} at {}\n\
         max residual {:.2e}; Weyl band max |N - a tau|/sqrt(tau) = {:.4} <= {:.4}; dropped {}; step halving {}\n",
        s.operator,
        s.bc,
        s.tau_max,
        s.entries,
        s.eigenvalues,
        s.zero_multiplicity,
        s.cache_status,
        s.cache_path.display(),
        s.max_residual,
        c.max_band_deviation,
        c.band_constant,
        c.dropped_roots,
        c.step_halving_stable
            .map_or("not checked", |b| if b { "stable" } else { "UNSTABLE" }),
    )
}

/// Per-label-row CSV: `m, modes, eigenvalues, first_tau, last_tau, max_residual`.
fn order_csv(spectrum: &Spectrum) -> String {
    use std::collections::BTreeMap;
    let mut rows: BTreeMap<u32, (u64, u64, f64, f64, f64)> = BTreeMap::new();
    for e in &spectrum.entries {
        let r = rows.entry(e.label.m).or_insert((0, 0, f64::INFINITY, 0.0, 0.0));
        r.0 += 1;
        r.1 += e.multiplicity as u64;
        r.2 = r.2.min(e.tau);
        r.3 = r.3.max(e.tau);
        r.4 = r.4.max(e.residual);
    }
    let mut out = String::from("m,modes,eigenvalues,first_tau,last_tau,max_residual\n");
    for (m, (n, k, lo, hi, res)) in rows {
        writeln!(out, "{m},{n},{k},{lo:.16e},{hi:.16e},{res:.3e}").unwrap();
    }
    out
}

pub fn spectrum(cfg: &ExperimentConfig, operator: OperatorArg, components: u32) -> Result<CommandOutput> {
    let cache = SpectrumCache::new(&cfg.cache_dir);
    let req = request(cfg, operator, components, cfg.bc, None)?;
    let (spec, summary) = load(&cache, &req)?;
    let mut out = CommandOutput::new("spectrum", &summary, summary_text(&summary))?;
    out.csv.push(("orders".into(), order_csv(&spec)));
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct FitReport {
    spectrum: SpectrumSummary,
    t_grid: TGrid,
    c_known: f64,
    heat_c: FitResult,
    heat_d: FitResult,
    counting_b: FitResult,
    counting_as_heat_d: f64,
    /// Closed-form coefficients for scalar spectra.
    expected: Option<WeylCoefficients>,
}

fn fit_text(r: &FitReport) -> String {
    let mut text = summary_text(&r.spectrum);
    let line = |name: &str, f: &FitResult| {
        format!(
            "{name:<11} {:>12.6} +- {:.2e}  ({:?} over [{:.3e}, {:.3e}], {} samples)\n",
            f.estimate, f.stderr, f.method, f.window.0, f.window.1, f.samples
        )
    };
    text += &line("heat c", &r.heat_c);
    text += &line("heat d", &r.heat_d);
    text += &line("counting b", &r.counting_b);
    writeln!(text, "Gamma(3/2) b = {:.6}", r.counting_as_heat_d).unwrap();
    if let Some(e) = r.expected {
        writeln!(
            text,
            "closed form: c = {}, d = {}, b = {}",
            fmt_opt(e.c),
            fmt_opt(e.d),
            fmt_opt(e.b)
        )
        .unwrap();
    }
    text
}

fn plot_csv(spectrum: &Spectrum, grid: &TGrid) -> Result<String> {
    let samples = heat_samples(spectrum, grid)?;
    let mut buf = Vec::new();
    write_plot_csv(&mut buf, &samples, spectrum.leading_coefficient())?;
    Ok(String::from_utf8(buf).expect("CSV is ASCII"))
}

pub fn fit(cfg: &ExperimentConfig, operator: OperatorArg, components: u32) -> Result<CommandOutput> {
    let cache = SpectrumCache::new(&cfg.cache_dir);
    let req = request(cfg, operator, components, cfg.bc, None)?;
    let (spec, summary) = load(&cache, &req)?;
    let grid = cfg.t_grid.resolve(&spec)?;
    let c_known = spec.leading_coefficient();
    let heat_c = fit_heat_leading(&spec, &grid)?;
    let heat_d = fit_heat_second_coeff(&spec, c_known, &grid)?;
    let counting_b = fit_counting_second_coeff(&spec, c_known, default_counting_window(&spec))?;
    let expected = match spec.medium {
        Medium::Scalar { c2, components } => {
            Some(scalar_weyl_coeffs(c2, components, &cfg.domain_descriptor()?, spec.bc))
        }
        _ => None,
    };
    let report = FitReport {
        spectrum: summary,
        t_grid: grid,
        c_known,
        heat_c,
        heat_d,
        counting_as_heat_d: gamma(1.5) * counting_b.estimate,
        counting_b,
        expected,
    };
    let mut out = CommandOutput::new("fit", &report, fit_text(&report))?;
    out.csv.push(("plot".into(), plot_csv(&spec, &grid)?));
    Ok(out)
}

/// Relative tolerance of the scalar control fits.
pub const CONTROL_REL_TOL: f64 = 0.02;

#[derive(Debug, Clone, Serialize)]
pub struct ControlCheck {
    pub name: String,
    pub measured: f64,
    pub stderr: f64,
    pub expected: f64,
    pub rel_error: f64,
    pub pass: bool,
}

/// Scalar disk fits at the configured cutoff, compared with their closed
/// forms. Elastic adjudication runs only after these pass.
pub fn scalar_controls(cfg: &ExperimentConfig, cache: &SpectrumCache) -> Result<Vec<ControlCheck>> {
    let control = ExperimentConfig {
        ct2: 1.0,
        cl2: 1.0,
        domain: DomainKind::UnitDisk,
        ..cfg.clone()
    };
    let mut checks = Vec::new();
    for bc in [BoundaryCondition::Dirichlet, BoundaryCondition::Neumann] {
        let req = request(&control, OperatorArg::Scalar, 1, bc, None)?;
        let (spec, _) = load(cache, &req)?;
        let grid = control.t_grid.resolve(&spec)?;
        let expected = scalar_weyl_coeffs(1.0, 1, &control.domain_descriptor()?, bc)
            .d
            .expect("counting coefficients carry d");
        let f = fit_heat_second_coeff(&spec, spec.leading_coefficient(), &grid)?;
        let rel_error = ((f.estimate - expected) / expected).abs();
        checks.push(ControlCheck {
            name: format!("scalar disk {bc} heat d"),
            measured: f.estimate,
            stderr: f.stderr,
            expected,
            rel_error,
            pass: rel_error <= CONTROL_REL_TOL,
        });
    }
    Ok(checks)
}

fn require_controls(checks: &[ControlCheck]) -> Result<()> {
    if let Some(c) = checks.iter().find(|c| !c.pass) {
        return Err(Error::Completeness(format!(
            "control '{}' failed: measured {:.6}, expected {:.6} (relative error {:.2e} > {CONTROL_REL_TOL})",
            c.name, c.measured, c.expected, c.rel_error
        )));
    }
    Ok(())
}

fn controls_text(checks: &[ControlCheck]) -> String {
    let mut text = String::new();
    for c in checks {
        writeln!(
            text,
            "control {:<26} {:>10.6} +- {:.1e} vs {:>10.6}  {}",
            c.name,
            c.measured,
            c.stderr,
            c.expected,
            if c.pass { "ok" } else { "FAILED" }
        )
        .unwrap();
    }
    text
}

#[derive(Debug, Clone, Serialize)]
struct AdjudicateOutput {
    controls: Vec<ControlCheck>,
    spectrum: SpectrumSummary,
    report: AdjudicationReport,
}

fn report_text(r: &AdjudicationReport) -> String {
    let m = &r.measured;
    let mut text = format!(
        "measured d = {:.6} +- {:.2e} (heat, t in [{:.3e}, {:.3e}], {} samples)\n",
        m.estimate, m.stderr, m.window.0, m.window.1, m.samples
    );
    if let (Some(b), Some(d)) = (&r.measured_counting, r.counting_as_heat_d) {
        writeln!(
            text,
            "counting route: b = {:.6} +- {:.2e}, Gamma(3/2) b = {d:.6}",
            b.estimate, b.stderr
        )
        .unwrap();
    }
    writeln!(
        text,
        "{:<34} {:>12} {:>12} {:>12}",
        "source", "predicted d", "distance", "stderrs"
    )
    .unwrap();
    for s in &r.distances {
        writeln!(
            text,
            "{:<34} {:>12.6} {:>12.3e} {:>12.1}{}",
            s.label,
            s.predicted_d,
            s.distance,
            s.in_stderr,
            if s.adjudicable { "" } else { "  (not adjudicated)" }
        )
        .unwrap();
    }
    writeln!(
        text,
        "min gap {}, decisive: {}, winner: {}",
        fmt_opt(r.min_gap),
        r.decisive,
        if r.winner.is_some() {
            r.winner_group.join(", ")
        } else {
            "none".to_string()
        }
    )
    .unwrap();
    for n in &r.notes {
        writeln!(text, "note: {n}").unwrap();
    }
    text
}

pub fn adjudicate(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let cache = SpectrumCache::new(&cfg.cache_dir);
    let controls = scalar_controls(cfg, &cache)?;
    require_controls(&controls)?;
    let material = cfg.material()?;
    let req = request(cfg, OperatorArg::Lame, 1, cfg.bc, None)?;
    let (spec, summary) = load(&cache, &req)?;
    let predictions = predictions_for(cfg, &material, cfg.bc)?;
    let report = adjudicate_with(&spec, &predictions, &cfg.t_grid)?;
    let text = format!(
        "{}{}{}",
        controls_text(&controls),
        summary_text(&summary),
        report_text(&report)
    );
    let indecisive = !report.decisive;
    let grid = report.t_grid;
    let output = AdjudicateOutput {
        controls,
        spectrum: summary,
        report,
    };
    let mut out = CommandOutput::new("adjudicate", &output, text)?;
    out.csv.push(("plot".into(), plot_csv(&spec, &grid)?));
    out.indecisive = indecisive;
    Ok(out)
}

#[derive(Debug, Clone, Serialize)]
struct SumRuleOutput {
    controls: Vec<ControlCheck>,
    dirichlet: SpectrumSummary,
    free: SpectrumSummary,
    report: SumRuleReport,
}

pub fn sum_rule(cfg: &ExperimentConfig) -> Result<CommandOutput> {
    let cache = SpectrumCache::new(&cfg.cache_dir);
    let controls = scalar_controls(cfg, &cache)?;
    require_controls(&controls)?;
    let material = cfg.material()?;
    let (sd, dir) = load(
        &cache,
        &request(cfg, OperatorArg::Lame, 1, BoundaryCondition::Dirichlet, None)?,
    )?;
    let (sf, free) = load(
        &cache,
        &request(cfg, OperatorArg::Lame, 1, BoundaryCondition::Free, None)?,
    )?;
    let pd = predictions_for(cfg, &material, BoundaryCondition::Dirichlet)?;
    let pf = predictions_for(cfg, &material, BoundaryCondition::Free)?;
    let report = check_sum_rule_with(&sd, &sf, Some((&pd, &pf)), &cfg.t_grid)?;
    let mut text = controls_text(&controls);
    writeln!(
        text,
        "d_dir = {:.6} +- {:.2e}, d_free = {:.6} +- {:.2e}\nsum = {:.6} +- {:.2e} ({:.1} stderrs from 0): {}",
        report.d_dirichlet.estimate,
        report.d_dirichlet.stderr,
        report.d_free.estimate,
        report.d_free.stderr,
        report.measured_sum,
        report.stderr,
        report.zero_in_stderr,
        if report.vanishes { "vanishes" } else { "does not vanish" }
    )
    .unwrap();
    for p in &report.predicted {
        writeln!(
            text,
            "predicted by {:<30} {:>12.6} ({:.1} stderrs away)",
            p.label, p.predicted_sum, p.in_stderr
        )
        .unwrap();
    }
    let output = SumRuleOutput {
        controls,
        dirichlet: dir,
        free,
        report,
    };
    CommandOutput::new("sum-rule", &output, text)
}

#[derive(Debug, Clone, Serialize)]
struct SweepRow {
    alpha: f64,
    target: &'static str,
    bc: BoundaryCondition,
    value: Option<f64>,
    stderr: Option<f64>,
    note: String,
}

fn sweep_row(cfg: &ExperimentConfig, cache: &SpectrumCache, alpha: f64, target: SweepTarget) -> Result<SweepRow> {
    let mut row = SweepRow {
        alpha,
        target: target.name(),
        bc: cfg.bc,
        value: None,
        stderr: None,
        note: String::new(),
    };
    let material = make_material(cfg.ct2, cfg.ct2 / alpha, 2)?;
    let source_d = |source: SourceTag, row: &mut SweepRow| -> Result<()> {
        let policy = match cfg.gamma_policy {
            GammaPolicy::Family => GammaPolicy::UnitRoot,
            p => p,
        };
        let set = assemble_predictions_with(
            &material,
            &cfg.domain_descriptor()?,
            cfg.bc,
            policy,
            cfg.tolerances.quadrature,
        );
        match set.first(source) {
            Some(e) if e.heat_d().is_some() => row.value = e.heat_d(),
            Some(e) => row.note = e.absent_reason.clone().unwrap_or_default(),
            None => row.note = "no entry".into(),
        }
        Ok(())
    };
    match target {
        SweepTarget::Beta => match cfg.bc {
            BoundaryCondition::Dirichlet => row.value = Some(beta_dirichlet_with(alpha, cfg.tolerances.quadrature)?),
            BoundaryCondition::Free => {
                let g = match cfg.gamma_policy {
                    GammaPolicy::Explicit(g) => Some(g),
                    _ => rayleigh_roots(alpha)?.unit_interval_root,
                };
                match g {
                    None => row.note = Error::NoUnitRoot { alpha }.to_string(),
                    Some(g) => match beta_free_with(alpha, g, cfg.tolerances.quadrature)? {
                        BetaValue::Finite(b) => {
                            row.value = Some(b);
                            row.note = format!("gamma = {g:.12}");
                        }
                        BetaValue::PlusInfinity => {
                            row.value = Some(f64::INFINITY);
                            row.note = "gamma = 0".into();
                        }
                    },
                }
            }
            BoundaryCondition::Neumann => row.note = "no elastic beta for neu".into(),
        },
        SweepTarget::SvD => source_d(SourceTag::Sv, &mut row)?,
        SweepTarget::Thm31D => source_d(SourceTag::Thm31, &mut row)?,
        SweepTarget::MeasuredD => {
            let req = request(cfg, OperatorArg::Lame, 1, cfg.bc, Some(Medium::Elastic { material }))?;
            let (spec, _) = load(cache, &req)?;
            let grid = cfg.t_grid.resolve(&spec)?;
            let f = fit_heat_second_coeff(&spec, spec.leading_coefficient(), &grid)?;
            row.value = Some(f.estimate);
            row.stderr = Some(f.stderr);
        }
    }
    Ok(row)
}

pub fn sweep(cfg: &ExperimentConfig, alphas: &[f64], targets: &[SweepTarget]) -> Result<CommandOutput> {
    if alphas.is_empty() || targets.is_empty() {
        return Err(Error::Config("sweep needs at least one alpha and one target".into()));
    }
    let cache = SpectrumCache::new(&cfg.cache_dir);
    let mut rows = Vec::with_capacity(alphas.len() * targets.len());
    for &alpha in alphas {
        for &t in targets {
            rows.push(sweep_row(cfg, &cache, alpha, t)?);
        }
    }
    let mut csv = String::from("alpha,target,bc,value,stderr,note\n");
    let cell = |x: Option<f64>| x.map_or(String::new(), |v| format!("{v:.12e}"));
    for r in &rows {
        writeln!(
            csv,
            "{},{},{},{},{},\"{}\"",
            r.alpha,
            r.target,
            r.bc,
            cell(r.value),
            cell(r.stderr),
            r.note.replace('"', "'")
        )
        .unwrap();
    }
    let mut out = CommandOutput::new("sweep", &json!({ "rows": rows }), csv.clone())?;
    out.csv.push(("sweep".into(), csv));
    Ok(out)
}
