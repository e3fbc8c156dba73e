//! `manifest.json`: the effective config, format versions and a digest of
//! every artifact in the run directory.

use std::collections::BTreeMap;
use std::fs;

use serde::{Deserialize, Serialize};
use simrepair_core::corpus::INDEX_FORMAT_VERSION;
use simrepair_core::metrics::embedding::EMBEDDING_FORMAT_VERSION;

use crate::config::RunConfig;
use crate::error::CliError;
use crate::files::{self, sha256_hex, write_output};

pub const REPORT_FORMAT_VERSION: u32 = 1;
pub const TASKS_FORMAT_VERSION: u32 = 1;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Manifest {
    pub tool: String,
    pub tool_version: String,
    pub config: RunConfig,
    pub formats: BTreeMap<String, u32>,
    /// Artifact path (relative to the run directory) to its sha256.
    pub artifacts: BTreeMap<String, String>,
}

fn formats() -> BTreeMap<String, u32> {
    [("index", INDEX_FORMAT_VERSION), ("embedding", EMBEDDING_FORMAT_VERSION), ("tasks", TASKS_FORMAT_VERSION), ("report", REPORT_FORMAT_VERSION)]
        .into_iter()
        .map(|(k, v)| (k.to_string(), v))
        .collect()
}

/// Record `artifacts` (run-relative paths) in the manifest, keeping entries
/// written by earlier commands.
pub fn record(cfg: &RunConfig, artifacts: &[&str]) -> Result<(), CliError> {
    let path = cfg.run_dir.join(files::MANIFEST);
    let previous: Option<Manifest> = fs::read(&path).ok().and_then(|b| serde_json::from_slice(&b).ok());
    let mut entries = previous.map(|m| m.artifacts).unwrap_or_default();
    for &name in artifacts {
        let full = cfg.run_dir.join(name);
        match fs::read(&full) {
            Ok(bytes) => {
                entries.insert(name.to_string(), sha256_hex(&bytes));
            }
            Err(_) => {
                entries.remove(name);
            }
        }
    }
    let manifest = Manifest {
        tool: "simrepair".into(),
        tool_version: env!("CARGO_PKG_VERSION").into(),
        config: cfg.clone(),
        formats: formats(),
        artifacts: entries,
    };
    let mut bytes = serde_json::to_vec_pretty(&manifest).expect("manifest serializes");
    bytes.push(b'\n');
    write_output(&path, &bytes)
}
