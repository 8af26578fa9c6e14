use crate::asymptotics::TGridSettings;
use crate::domain::{BoundaryCondition, DomainDescriptor, DomainKind};
use crate::error::{Error, Result};
use crate::material::{make_material, ElasticMaterial};
use crate::predictions::{GammaPolicy, BETA_ABS_TOL};
use crate::spectrum::{canonical_json, ScanSettings};
use serde::{Deserialize, Serialize};
use serde_json::Value;
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::path::{Path, PathBuf};

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct Tolerances {
    /// Absolute tolerance on `β`.
    pub quadrature: f64,
    /// Relative tolerance of root refinement.
    pub refinement: f64,
    /// Largest accepted eigenpair residual.
    pub residual_gate: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        let scan = ScanSettings::default();
        Self {
            quadrature: BETA_ABS_TOL,
            refinement: scan.refine_rel_tol,
            residual_gate: scan.residual_gate,
        }
    }
}

/// Everything a command needs. Files may give any subset of the fields.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ExperimentConfig {
    pub ct2: f64,
    pub cl2: f64,
    pub domain: DomainKind,
    pub bc: BoundaryCondition,
    pub tau_max: f64,
    pub tolerances: Tolerances,
    pub gamma_policy: GammaPolicy,
    pub t_grid: TGridSettings,
    pub cache_dir: PathBuf,
    pub out_dir: PathBuf,
}

impl Default for ExperimentConfig {
    fn default() -> Self {
        Self {
            ct2: 1.0,
            cl2: 1.0,
            domain: DomainKind::UnitDisk,
            bc: BoundaryCondition::Dirichlet,
            tau_max: 4e4,
            tolerances: Tolerances::default(),
            gamma_policy: GammaPolicy::UnitRoot,
            t_grid: TGridSettings::default(),
            cache_dir: PathBuf::from(".weyl-cache"),
            out_dir: PathBuf::from("weyl-out"),
        }
    }
}

/// The fields that determine results, i.e. everything but the paths.
#[derive(Serialize)]
struct HashedFields<'a> {
    ct2: f64,
    cl2: f64,
    domain: &'a DomainKind,
    bc: BoundaryCondition,
    tau_max: f64,
    tolerances: &'a Tolerances,
    gamma_policy: &'a GammaPolicy,
    t_grid: &'a TGridSettings,
}

impl ExperimentConfig {
    pub fn from_file(path: &Path) -> Result<Self> {
        Self::default().overlay_file(path)
    }

    /// `self` with every field present in the JSON file at `path` replaced;
    /// nested objects merge field by field.
    pub fn overlay_file(&self, path: &Path) -> Result<Self> {
        let bad = |e: &dyn std::fmt::Display| Error::Config(format!("config {}: {e}", path.display()));
        let text = std::fs::read_to_string(path).map_err(|e| bad(&e))?;
        let file: Value = serde_json::from_str(&text).map_err(|e| bad(&e))?;
        if !file.is_object() {
            return Err(bad(&"expected a JSON object"));
        }
        let mut base = serde_json::to_value(self)?;
        merge(&mut base, file);
        serde_json::from_value(base).map_err(|e| bad(&e))
    }

    pub fn validate(&self) -> Result<()> {
        let positive = |x: f64| x > 0.0 && x.is_finite();
        let t = &self.tolerances;
        if !(positive(t.quadrature) && positive(t.refinement) && positive(t.residual_gate)) {
            return Err(Error::Config(format!("tolerances must be positive, got {t:?}")));
        }
        if !positive(self.tau_max) {
            return Err(Error::Config(format!("tau_max must be positive, got {}", self.tau_max)));
        }
        self.material()?;
        self.domain_descriptor()?;
        self.t_grid.validate()?;
        self.scan_settings().validate()
    }

    pub fn material(&self) -> Result<ElasticMaterial> {
        make_material(self.ct2, self.cl2, 2)
    }

    pub fn domain_descriptor(&self) -> Result<DomainDescriptor> {
        match self.domain {
            DomainKind::UnitDisk => Ok(DomainDescriptor::unit_disk()),
            DomainKind::Rectangle { a, b } => DomainDescriptor::rectangle(a, b),
        }
    }

    pub fn scan_settings(&self) -> ScanSettings {
        ScanSettings {
            refine_rel_tol: self.tolerances.refinement,
            residual_gate: self.tolerances.residual_gate,
            ..ScanSettings::default()
        }
    }

    /// Hex SHA-256 of the canonical JSON of the result-determining fields.
    /// Key order in the source file does not matter; paths are left out.
    pub fn hash(&self) -> Result<String> {
        let fields = HashedFields {
            ct2: self.ct2,
            cl2: self.cl2,
            domain: &self.domain,
            bc: self.bc,
            tau_max: self.tau_max,
            tolerances: &self.tolerances,
            gamma_policy: &self.gamma_policy,
            t_grid: &self.t_grid,
        };
        let digest = Sha256::digest(canonical_json(&fields)?.as_bytes());
        let mut out = String::with_capacity(64);
        for b in digest {
            write!(out, "{b:02x}").expect("writing to a String");
        }
        Ok(out)
    }
}

fn merge(base: &mut Value, over: Value) {
    match (base, over) {
        (Value::Object(b), Value::Object(o)) => {
            for (k, v) in o {
                match b.get_mut(&k) {
                    // tagged enums are replaced whole
                    Some(slot) if slot.is_object() && v.get("kind").is_none() && k != "gamma_policy" => merge(slot, v),
                    _ => {
                        b.insert(k, v);
                    }
                }
            }
        }
        (b, o) => *b = o,
    }
}

/// `disk`, or `rect:A,B` for an `A × B` rectangle.
pub fn parse_domain(s: &str) -> std::result::Result<DomainKind, String> {
    let s = s.trim().to_ascii_lowercase();
    if s == "disk" || s == "unit_disk" {
        return Ok(DomainKind::UnitDisk);
    }
    let rest = s
        .strip_prefix("rect:")
        .or_else(|| s.strip_prefix("rectangle:"))
        .ok_or_else(|| format!("domain must be 'disk' or 'rect:A,B', got '{s}'"))?;
    let (a, b) = rest
        .split_once(',')
        .ok_or_else(|| format!("rectangle needs two sides, got '{rest}'"))?;
    let side = |x: &str| x.trim().parse::<f64>().map_err(|_| format!("bad rectangle side '{x}'"));
    Ok(DomainKind::Rectangle {
        a: side(a)?,
        b: side(b)?,
    })
}
