//! Run-directory layout and file helpers.

use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicU64, Ordering};

use sha2::{Digest, Sha256};

use crate::error::CliError;

pub const INDEX: &str = "index.jsonl";
pub const STATEMENT_MODEL: &str = "models/statement.model.json";
pub const METHOD_MODEL: &str = "models/method.model.json";
pub const TASKS: &str = "tasks.jsonl";
pub const REJECTIONS: &str = "rejections.jsonl";
pub const REPORT: &str = "report.json";
pub const INGREDIENT_STATS: &str = "tables/ingredient_stats.csv";
pub const CONTEXT_STATS: &str = "tables/context_stats.csv";
pub const WILCOXON_INGREDIENT: &str = "tables/wilcoxon_ingredient.csv";
pub const WILCOXON_CONTEXT: &str = "tables/wilcoxon_context.csv";
pub const DENSITY: &str = "tables/density.csv";
pub const NORMALIZED_RANKS: &str = "tables/normalized_ranks.csv";
pub const RANKINGS: &str = "tables/rankings.csv";
pub const MANIFEST: &str = "manifest.json";

pub fn sha256_hex(bytes: &[u8]) -> String {
    hex::encode(Sha256::digest(bytes))
}

static TMP_COUNTER: AtomicU64 = AtomicU64::new(0);

/// Write through a temporary sibling and rename into place. Concurrent
/// writers of the same path each use their own temporary file.
pub fn write_atomic(path: &Path, bytes: &[u8]) -> io::Result<()> {
    if let Some(dir) = path.parent() {
        fs::create_dir_all(dir)?;
    }
    let mut tmp = path.as_os_str().to_owned();
    tmp.push(format!(".tmp{}-{}", std::process::id(), TMP_COUNTER.fetch_add(1, Ordering::Relaxed)));
    let tmp = PathBuf::from(tmp);
    fs::write(&tmp, bytes)?;
    fs::rename(&tmp, path)
}

pub fn write_output(path: &Path, bytes: &[u8]) -> Result<(), CliError> {
    write_atomic(path, bytes).map_err(|e| CliError::data(format!("cannot write {}: {e}", path.display())))
}

pub fn read_prerequisite(path: &Path, produced_by: &str) -> Result<Vec<u8>, CliError> {
    fs::read(path).map_err(|e| match e.kind() {
        io::ErrorKind::NotFound => CliError::data(format!("missing {}; run `simrepair {produced_by}` first", path.display())),
        _ => CliError::data(format!("cannot read {}: {e}", path.display())),
    })
}

/// Refuse to replace an existing output unless forced.
pub fn check_overwrite(path: &Path, force: bool, what: &str) -> Result<(), CliError> {
    if path.exists() && !force {
        return Err(CliError::usage(format!("{what} exists at {}; pass --force to overwrite", path.display())));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn concurrent_writers_of_one_path_all_succeed() {
        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("x/y.bin");
        std::thread::scope(|s| {
            for i in 0..16u8 {
                let path = &path;
                s.spawn(move || write_atomic(path, &[i; 64]).unwrap());
            }
        });
        let bytes = fs::read(&path).unwrap();
        assert!(bytes.iter().all(|&b| b == bytes[0]));
        assert_eq!(fs::read_dir(path.parent().unwrap()).unwrap().count(), 1, "no temporary files left");
    }
}
