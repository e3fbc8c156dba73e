//! On-disk cache of per-task score vectors.

use std::collections::BTreeMap;
use std::fs;
use std::io;
use std::path::{Path, PathBuf};
use std::sync::atomic::{AtomicUsize, Ordering};

use simrepair_core::corpus::{CorpusIndex, Role};
use simrepair_core::metrics::MetricKind;
use simrepair_core::ranking::{DirectScorer, RankError, ScoreProvider};
use simrepair_core::tasks::RepairTask;

use crate::files::{sha256_hex, write_atomic};

pub struct ScoreCache {
    dir: PathBuf,
    hits: AtomicUsize,
    misses: AtomicUsize,
}

impl ScoreCache {
    pub fn open(dir: &Path) -> io::Result<Self> {
        fs::create_dir_all(dir)?;
        Ok(ScoreCache { dir: dir.to_path_buf(), hits: AtomicUsize::new(0), misses: AtomicUsize::new(0) })
    }

    pub fn key(parts: &[&str]) -> String {
        sha256_hex(parts.join("\u{0}").as_bytes())
    }

    fn path(&self, key: &str) -> PathBuf {
        self.dir.join(&key[..2]).join(format!("{key}.bin"))
    }

    /// Cached scores, if present and of the expected length.
    pub fn get(&self, key: &str, len: usize) -> Option<Vec<f64>> {
        let bytes = fs::read(self.path(key)).ok()?;
        if bytes.len() != len * 8 {
            return None;
        }
        Some(bytes.chunks_exact(8).map(|c| f64::from_le_bytes(c.try_into().unwrap())).collect())
    }

    pub fn put(&self, key: &str, scores: &[f64]) -> io::Result<()> {
        let bytes: Vec<u8> = scores.iter().flat_map(|s| s.to_le_bytes()).collect();
        write_atomic(&self.path(key), &bytes)
    }

    pub fn hits(&self) -> usize {
        self.hits.load(Ordering::Relaxed)
    }

    pub fn misses(&self) -> usize {
        self.misses.load(Ordering::Relaxed)
    }
}

/// Wraps the direct scorer with the cache. Keys combine the index hash, a
/// fingerprint of the model the metric uses, the task and the metric.
pub struct CachedScorer<'a> {
    inner: DirectScorer<'a>,
    corpus: &'a CorpusIndex,
    cache: &'a ScoreCache,
    index_hash: String,
    fingerprints: BTreeMap<(Role, MetricKind), String>,
}

impl<'a> CachedScorer<'a> {
    pub fn new(
        inner: DirectScorer<'a>,
        corpus: &'a CorpusIndex,
        cache: &'a ScoreCache,
        index_hash: String,
        fingerprints: BTreeMap<(Role, MetricKind), String>,
    ) -> Self {
        CachedScorer { inner, corpus, cache, index_hash, fingerprints }
    }

    fn cached(
        &self,
        task: &RepairTask,
        kind: MetricKind,
        role: Role,
        len: usize,
        compute: impl FnOnce() -> Result<Vec<f64>, RankError>,
    ) -> Result<Vec<f64>, RankError> {
        let model = self.fingerprints.get(&(role, kind)).map(String::as_str).unwrap_or("-");
        let task_key = format!(
            "{}|{}|{}|{}",
            task.id, task.modification_point, task.recipient_context, task.correct_ingredient.raw_text
        );
        let level = match role {
            Role::Statement => "ingredient",
            Role::Method => "context",
        };
        let key = ScoreCache::key(&[&self.index_hash, model, &task_key, kind.name(), level]);
        if let Some(scores) = self.cache.get(&key, len) {
            self.cache.hits.fetch_add(1, Ordering::Relaxed);
            return Ok(scores);
        }
        self.cache.misses.fetch_add(1, Ordering::Relaxed);
        let scores = compute()?;
        self.cache.put(&key, &scores).map_err(|e| RankError::Provider(format!("cache write failed: {e}")))?;
        Ok(scores)
    }
}

impl ScoreProvider for CachedScorer<'_> {
    fn ingredient_scores(&self, task: &RepairTask, kind: MetricKind) -> Result<Vec<f64>, RankError> {
        let len = self.corpus.statement_pool().len();
        self.cached(task, kind, Role::Statement, len, || self.inner.ingredient_scores(task, kind))
    }

    fn context_scores(&self, task: &RepairTask, kind: MetricKind) -> Result<Vec<f64>, RankError> {
        let len = self.corpus.context_pool().len();
        self.cached(task, kind, Role::Method, len, || self.inner.context_scores(task, kind))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn round_trips_exact_bits() {
        let dir = tempfile::tempdir().unwrap();
        let cache = ScoreCache::open(dir.path()).unwrap();
        let key = ScoreCache::key(&["a", "b"]);
        let scores = [0.1 + 0.2, -1.0, 1e-300, 0.0];
        cache.put(&key, &scores).unwrap();
        let back = cache.get(&key, 4).unwrap();
        assert!(back.iter().zip(&scores).all(|(a, b)| a.to_bits() == b.to_bits()));
        assert_eq!(cache.get(&key, 5), None);
        assert_eq!(cache.get(&ScoreCache::key(&["a", "c"]), 4), None);
    }

    #[test]
    fn key_parts_are_separated() {
        assert_ne!(ScoreCache::key(&["ab", "c"]), ScoreCache::key(&["a", "bc"]));
    }
}
