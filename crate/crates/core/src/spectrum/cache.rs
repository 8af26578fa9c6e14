//! Content-addressed spectrum cache.
//!
//! A cache file is one JSON header line followed by one line per entry,
//! `tau<TAB>multiplicity<TAB>m<TAB>k<TAB>residual`, floats printed with 17
//! significant digits so they parse back to the same bits. Files are named by
//! the SHA-256 of the canonical request JSON and never rewritten.

use super::elastic::elastic_disk_spectrum_with;
use super::scalar::{rectangle_scalar_spectrum, scalar_disk_spectrum_with};
use super::synthetic::synthetic_spectrum;
use super::{CompletenessCert, Medium, ModeLabel, OperatorKind, ScanSettings, Spectrum, SpectrumEntry};
use crate::domain::{BoundaryCondition, DomainDescriptor, DomainKind};
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use std::fmt::Write as _;
use std::fs;
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};

/// Bumped whenever a code change can alter computed spectra.
pub const CACHE_VERSION: &str = "lame-weyl-spectrum/1";

/// Everything that determines a computed spectrum.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct SpectrumRequest {
    pub operator: OperatorKind,
    pub bc: BoundaryCondition,
    pub medium: Medium,
    pub domain: DomainDescriptor,
    pub tau_max: f64,
    pub settings: ScanSettings,
}

impl SpectrumRequest {
    pub fn compute(&self) -> Result<Spectrum> {
        match (self.operator, self.medium, self.domain.kind) {
            (OperatorKind::Lame, Medium::Elastic { material }, DomainKind::UnitDisk) => {
                elastic_disk_spectrum_with(&material, self.bc, self.tau_max, &self.settings)
            }
            (OperatorKind::ScalarLaplace, Medium::Scalar { c2, components }, DomainKind::UnitDisk) => {
                scalar_disk_spectrum_with(c2, self.bc, self.tau_max, components, &self.settings)
            }
            (OperatorKind::ScalarLaplace, Medium::Scalar { c2, components: 1 }, DomainKind::Rectangle { a, b }) => {
                rectangle_scalar_spectrum(a, b, c2, self.bc, self.tau_max)
            }
            (OperatorKind::Synthetic, Medium::Synthetic { a, b }, _) => synthetic_spectrum(a, b, self.tau_max, self.bc),
            _ => Err(Error::Config(format!(
                "no solver for {:?} / {:?} on {:?}",
                self.operator, self.medium, self.domain.kind
            ))),
        }
    }

    /// Hex SHA-256 of the version tag and the canonical request JSON.
    pub fn key(&self) -> Result<String> {
        let mut h = Sha256::new();
        h.update(CACHE_VERSION.as_bytes());
        h.update(b"\n");
        h.update(canonical_json(self)?.as_bytes());
        let mut out = String::with_capacity(64);
        for b in h.finalize() {
            write!(out, "{b:02x}").expect("writing to a String");
        }
        Ok(out)
    }
}

/// JSON with object keys sorted at every level.
pub fn canonical_json<T: Serialize>(value: &T) -> Result<String> {
    // serde_json's default map is ordered by key
    let v: serde_json::Value = serde_json::to_value(value)?;
    Ok(serde_json::to_string(&v)?)
}

#[derive(Debug, Clone, Serialize, Deserialize)]
struct Header {
    version: String,
    key: String,
    request: Option<SpectrumRequest>,
    operator: OperatorKind,
    bc: BoundaryCondition,
    medium: Medium,
    domain: Option<DomainDescriptor>,
    tau_max: f64,
    entry_count: usize,
    completeness: CompletenessCert,
}

fn format_f64(x: f64) -> String {
    format!("{x:.16e}")
}

/// Writes `spectrum` to `path`. Fails if the file already exists.
pub fn write_spectrum(path: &Path, spectrum: &Spectrum, key: &str, request: Option<&SpectrumRequest>) -> Result<()> {
    let header = Header {
        version: CACHE_VERSION.to_string(),
        key: key.to_string(),
        request: request.copied(),
        operator: spectrum.operator,
        bc: spectrum.bc,
        medium: spectrum.medium,
        domain: spectrum.domain,
        tau_max: spectrum.tau_max,
        entry_count: spectrum.entries.len(),
        completeness: spectrum.completeness,
    };
    let mut text = canonical_json(&header)?;
    text.push('\n');
    for e in &spectrum.entries {
        writeln!(
            text,
            "{}\t{}\t{}\t{}\t{}",
            format_f64(e.tau),
            e.multiplicity,
            e.label.m,
            e.label.k,
            format_f64(e.residual)
        )
        .expect("writing to a String");
    }
    let dir = path.parent().unwrap_or(Path::new("."));
    fs::create_dir_all(dir)?;
    let tmp = dir.join(format!(
        ".{}.{}.tmp",
        path.file_name().and_then(|s| s.to_str()).unwrap_or("spectrum"),
        std::process::id()
    ));
    {
        let mut f = fs::File::create(&tmp)?;
        f.write_all(text.as_bytes())?;
        f.sync_all()?;
    }
    // hard_link refuses to replace an existing file
    let linked = fs::hard_link(&tmp, path);
    fs::remove_file(&tmp)?;
    linked?;
    Ok(())
}

fn parse<T: std::str::FromStr>(field: Option<&str>, line: usize, what: &str) -> Result<T> {
    field
        .ok_or_else(|| Error::Cache(format!("line {line}: missing {what}")))?
        .parse()
        .map_err(|_| Error::Cache(format!("line {line}: bad {what}")))
}

/// Reads a cache file written by [`write_spectrum`].
pub fn read_spectrum(path: &Path) -> Result<Spectrum> {
    let file = fs::File::open(path)?;
    let mut lines = BufReader::new(file).lines();
    let first = lines.next().ok_or_else(|| Error::Cache("empty cache file".into()))??;
    let header: Header = serde_json::from_str(&first)?;
    if header.version != CACHE_VERSION {
        return Err(Error::Cache(format!("version {} != {CACHE_VERSION}", header.version)));
    }
    let mut entries = Vec::with_capacity(header.entry_count);
    for (i, line) in lines.enumerate() {
        let line = line?;
        let n = i + 2;
        let mut f = line.split('\t');
        let tau: f64 = parse(f.next(), n, "tau")?;
        let multiplicity: u32 = parse(f.next(), n, "multiplicity")?;
        let m: u32 = parse(f.next(), n, "m")?;
        let k: u32 = parse(f.next(), n, "k")?;
        let residual: f64 = parse(f.next(), n, "residual")?;
        entries.push(SpectrumEntry {
            tau,
            multiplicity,
            label: ModeLabel { m, k },
            residual,
        });
    }
    if entries.len() != header.entry_count {
        return Err(Error::Cache(format!(
            "expected {} entries, found {}",
            header.entry_count,
            entries.len()
        )));
    }
    Ok(Spectrum {
        operator: header.operator,
        bc: header.bc,
        medium: header.medium,
        domain: header.domain,
        tau_max: header.tau_max,
        entries,
        completeness: header.completeness,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum CacheStatus {
    Hit,
    Miss,
}

/// A directory of cache files.
#[derive(Debug, Clone)]
pub struct SpectrumCache {
    dir: PathBuf,
}

impl SpectrumCache {
    pub fn new(dir: impl Into<PathBuf>) -> Self {
        Self { dir: dir.into() }
    }

    pub fn path_for(&self, key: &str) -> PathBuf {
        self.dir.join(format!("{key}.spectrum"))
    }

    /// Returns the cached spectrum for `request`, computing and storing it
    /// on a miss. Spectra that fail certification are not stored.
    pub fn load_or_compute(&self, request: &SpectrumRequest) -> Result<(Spectrum, CacheStatus, PathBuf)> {
        let key = request.key()?;
        let path = self.path_for(&key);
        if path.exists() {
            return Ok((read_spectrum(&path)?, CacheStatus::Hit, path));
        }
        let spectrum = request.compute()?;
        match write_spectrum(&path, &spectrum, &key, Some(request)) {
            Ok(()) => {}
            // another writer got there first; its file is equivalent
            Err(Error::Io(e)) if e.kind() == std::io::ErrorKind::AlreadyExists => {}
            Err(e) => return Err(e),
        }
        Ok((spectrum, CacheStatus::Miss, path))
    }
}
