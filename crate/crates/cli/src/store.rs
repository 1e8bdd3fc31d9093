//! Append-only JSONL curve store.
//!
//! One JSON record per line. The record id is the SHA-256 of the canonical
//! key, which is the normalized moduli point together with the exponent m,
//! the degree and the weights. Two curves get the same id exactly when they
//! differ by a coordinate rescaling and a scalar twist, so adding an inflated
//! or twisted copy of a stored curve reports a duplicate instead of growing
//! the file.
//!
//! Writers take a sibling `<store>.lock` file (advisory, create-exclusive)
//! for the read-check-append critical section. All big integers are stored
//! as decimal strings.

use std::fs::{self, OpenOptions};
use std::io::{BufRead, BufReader, Write};
use std::path::{Path, PathBuf};
use std::thread;
use std::time::Duration;

use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};
use wmod_core::reduction::{is_minimal, SuperellipticCurve};
use wmod_core::weighted::WeightedPoint;
use wmod_core::Error as CoreError;

use crate::error::CliError;

#[derive(Debug, Clone, Serialize, Deserialize, PartialEq, Eq)]
pub struct HeightInfo {
    pub decimal: String,
    pub argmax_index: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct CurveRecord {
    pub id: String,
    pub m: u32,
    pub d: usize,
    pub form_coeffs: Vec<String>,
    pub twist_scalar: String,
    pub canonical_key: String,
    pub height: HeightInfo,
    /// Whether the stored model itself is minimal; null when the moduli
    /// point is non-integral and minimality is not defined.
    pub minimal: Option<bool>,
    pub provenance: String,
    pub created_at: String,
}

/// Deterministic rendering of the canonical key for a normalized point.
pub fn canonical_key(m: u32, d: usize, point: &WeightedPoint) -> String {
    let weights: Vec<String> = point
        .weights()
        .weights()
        .iter()
        .map(|w| w.to_string())
        .collect();
    format!("m={m};d={d};w={};p={point}", weights.join(","))
}

pub fn record_id(key: &str) -> String {
    let digest = Sha256::digest(key.as_bytes());
    digest.iter().map(|b| format!("{b:02x}")).collect()
}

/// The canonical key and id of a curve, derived from its normalized moduli
/// point.
pub fn curve_key(curve: &SuperellipticCurve) -> Result<(String, WeightedPoint), CliError> {
    let point = curve.canonical_point()?;
    let key = canonical_key(curve.exponent(), curve.degree(), &point);
    Ok((key, point))
}

/// Build the full record for a curve (id, canonical key, height, minimality).
pub fn record_for_curve(
    curve: &SuperellipticCurve,
    provenance: &str,
) -> Result<CurveRecord, CliError> {
    let (key, point) = curve_key(curve)?;
    let height = point.weighted_height()?;
    let minimal = match is_minimal(curve) {
        Ok(b) => Some(b),
        Err(CoreError::NonIntegralModuliPoint) => None,
        Err(e) => return Err(e.into()),
    };
    let coeffs = curve.form().integer_coeffs()?;
    Ok(CurveRecord {
        id: record_id(&key),
        m: curve.exponent(),
        d: curve.degree(),
        form_coeffs: coeffs.iter().map(|c| c.to_string()).collect(),
        twist_scalar: curve.twist_scalar().to_string(),
        canonical_key: key,
        height: HeightInfo {
            decimal: height.decimal(12),
            argmax_index: height.argmax(),
        },
        minimal,
        provenance: provenance.to_string(),
        created_at: chrono::Utc::now().to_rfc3339_opts(chrono::SecondsFormat::Secs, true),
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AddOutcome {
    Added(String),
    /// The store already holds a record with the same canonical key.
    Duplicate(String),
}

struct LockGuard {
    path: PathBuf,
}

impl Drop for LockGuard {
    fn drop(&mut self) {
        let _ = fs::remove_file(&self.path);
    }
}

fn acquire_lock(store: &Path) -> Result<LockGuard, CliError> {
    let mut name = store.file_name().unwrap_or_default().to_os_string();
    name.push(".lock");
    let path = store.with_file_name(name);
    for _ in 0..100 {
        match OpenOptions::new().write(true).create_new(true).open(&path) {
            Ok(_) => return Ok(LockGuard { path }),
            Err(e) if e.kind() == std::io::ErrorKind::AlreadyExists => {
                thread::sleep(Duration::from_millis(20));
            }
            Err(e) => {
                return Err(CliError::Io(format!(
                    "cannot create lock file {}: {e}",
                    path.display()
                )))
            }
        }
    }
    Err(CliError::Io(format!(
        "store is locked (stale {}?)",
        path.display()
    )))
}

fn read_lines(store: &Path) -> Result<Vec<CurveRecord>, CliError> {
    let file = fs::File::open(store)
        .map_err(|e| CliError::Io(format!("cannot open store {}: {e}", store.display())))?;
    let mut records = Vec::new();
    for (i, line) in BufReader::new(file).lines().enumerate() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let record: CurveRecord = serde_json::from_str(&line).map_err(|e| CliError::Store {
            line: i + 1,
            message: e.to_string(),
        })?;
        records.push(record);
    }
    Ok(records)
}

/// Append a record unless its id is already present. Creates the store file
/// when missing.
pub fn db_add(record: &CurveRecord, store: &Path) -> Result<AddOutcome, CliError> {
    let _lock = acquire_lock(store)?;
    let existing = if store.exists() {
        read_lines(store)?
    } else {
        Vec::new()
    };
    if let Some(found) = existing.iter().find(|r| r.id == record.id) {
        return Ok(AddOutcome::Duplicate(found.id.clone()));
    }
    let mut file = OpenOptions::new()
        .append(true)
        .create(true)
        .open(store)
        .map_err(|e| CliError::Io(format!("cannot open store {}: {e}", store.display())))?;
    let line = serde_json::to_string(record).expect("record serializes");
    writeln!(file, "{line}")?;
    Ok(AddOutcome::Added(record.id.clone()))
}

/// Look a record up by id. A missing store file is an I/O error.
pub fn db_find(id: &str, store: &Path) -> Result<Option<CurveRecord>, CliError> {
    Ok(read_lines(store)?.into_iter().find(|r| r.id == id))
}

pub fn db_list(store: &Path) -> Result<Vec<CurveRecord>, CliError> {
    read_lines(store)
}
