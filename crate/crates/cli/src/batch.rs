//! Deterministic seeded batch execution and the run manifest.
//!
//! A batch is `n_samples` independent work units; unit `i` draws from the
//! stream `(master seed, i)`, so contents never depend on the worker
//! count. Units run on a dedicated thread pool, results are merged in
//! unit order, and every output file lands in the manifest with its
//! SHA-256 digest so a later run can prove bit-identity.

use std::path::Path;
use std::time::{SystemTime, UNIX_EPOCH};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct OutputRecord {
    pub path: String,
    pub sha256: String,
    pub bytes: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct UnitFailure {
    pub unit: usize,
    pub error: String,
}

/// Everything needed to reproduce a run bit-exactly (plus timestamps,
/// which are informational and deliberately excluded from any
/// byte-identity contract).
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RunManifest {
    pub tool_version: String,
    pub command: String,
    pub config: serde_json::Value,
    pub master_seed: u64,
    pub parallelism: usize,
    /// How per-unit streams derive from the master seed.
    pub seed_rule: String,
    /// Derived seeds actually used (per suite test for verify runs).
    pub derived_seeds: Vec<u64>,
    pub started_at_unix_ms: u128,
    pub finished_at_unix_ms: u128,
    pub outputs: Vec<OutputRecord>,
    pub failed_units: Vec<UnitFailure>,
}

pub fn now_ms() -> u128 {
    SystemTime::now().duration_since(UNIX_EPOCH).map(|d| d.as_millis()).unwrap_or(0)
}

pub fn sha256_hex(bytes: &[u8]) -> String {
    let mut hasher = Sha256::new();
    hasher.update(bytes);
    hex::encode(hasher.finalize())
}

/// Run `n_units` independent units on `parallelism` workers
/// (0 = rayon default) and collect their results in unit order.
pub fn run_units<T, F>(
    n_units: usize,
    parallelism: usize,
    unit: F,
) -> Result<(Vec<(usize, T)>, Vec<UnitFailure>), CliError>
where
    T: Send,
    F: Fn(usize) -> Result<T, CliError> + Sync,
{
    let mut builder = rayon::ThreadPoolBuilder::new();
    if parallelism > 0 {
        builder = builder.num_threads(parallelism);
    }
    let pool = builder
        .build()
        .map_err(|e| CliError::Io(format!("cannot build thread pool: {e}")))?;
    let results: Vec<Result<T, CliError>> =
        pool.install(|| (0..n_units).into_par_iter().map(|u| unit(u)).collect());
    let mut outputs = Vec::new();
    let mut failures = Vec::new();
    for (u, res) in results.into_iter().enumerate() {
        match res {
            Ok(value) => outputs.push((u, value)),
            Err(e) => failures.push(UnitFailure { unit: u, error: e.to_string() }),
        }
    }
    Ok((outputs, failures))
}

/// Write named contents under `out_dir` and record them in the manifest.
pub fn write_outputs(
    out_dir: &Path,
    files: &[(String, String)],
) -> Result<Vec<OutputRecord>, CliError> {
    std::fs::create_dir_all(out_dir)
        .map_err(|e| CliError::Io(format!("cannot create {}: {e}", out_dir.display())))?;
    let mut records = Vec::with_capacity(files.len());
    for (name, content) in files {
        let path = out_dir.join(name);
        std::fs::write(&path, content)
            .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))?;
        records.push(OutputRecord {
            path: name.clone(),
            sha256: sha256_hex(content.as_bytes()),
            bytes: content.len(),
        });
    }
    Ok(records)
}

/// Persist the manifest itself (not listed among its own outputs).
pub fn write_manifest(out_dir: &Path, manifest: &RunManifest) -> Result<(), CliError> {
    let path = out_dir.join("manifest.json");
    let mut text = serde_json::to_string_pretty(manifest)
        .map_err(|e| CliError::Io(format!("manifest serialization: {e}")))?;
    text.push('\n');
    std::fs::write(&path, text)
        .map_err(|e| CliError::Io(format!("cannot write {}: {e}", path.display())))
}

/// Re-hash every output recorded in a manifest and report mismatches.
pub fn verify_manifest(out_dir: &Path) -> Result<Vec<String>, CliError> {
    let path = out_dir.join("manifest.json");
    let text = std::fs::read_to_string(&path)
        .map_err(|e| CliError::Io(format!("cannot read {}: {e}", path.display())))?;
    let manifest: RunManifest = serde_json::from_str(&text)
        .map_err(|e| CliError::Io(format!("bad manifest: {e}")))?;
    let mut mismatches = Vec::new();
    for rec in &manifest.outputs {
        let p = out_dir.join(&rec.path);
        match std::fs::read(&p) {
            Ok(bytes) => {
                if sha256_hex(&bytes) != rec.sha256 {
                    mismatches.push(format!("{}: digest mismatch", rec.path));
                }
            }
            Err(e) => mismatches.push(format!("{}: {e}", rec.path)),
        }
    }
    Ok(mismatches)
}
