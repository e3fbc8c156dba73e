//! Run configuration: TOML file, then command-line overrides.

use std::fs;
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};
use simrepair_core::metrics::{DeckardMode, EmbeddingConfig, MetricKind, METHOD_DIMENSION, STATEMENT_DIMENSION};
use simrepair_core::ranking::TieMode;

use crate::error::CliError;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CombinedPair {
    pub context: MetricKind,
    pub ingredient: MetricKind,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RunConfig {
    pub corpus: Option<PathBuf>,
    pub filters: Vec<String>,
    pub diffs: Option<PathBuf>,
    /// Project name recorded on tasks; defaults to the corpus directory name.
    pub project: Option<String>,
    pub run_dir: PathBuf,
    pub cache_dir: Option<PathBuf>,
    pub seed: u64,
    /// Scoring threads; 0 uses every core.
    pub jobs: usize,
    pub metrics: Vec<MetricKind>,
    pub combined: Option<CombinedPair>,
    pub tie_mode: TieMode,
    pub deckard: DeckardMode,
    pub deckard_tasks: Option<Vec<String>>,
    pub bins: usize,
    pub sample_limit: usize,
    pub statement_embedding: EmbeddingConfig,
    pub method_embedding: EmbeddingConfig,
}

impl Default for RunConfig {
    fn default() -> Self {
        RunConfig {
            corpus: None,
            filters: vec!["**/*.java".into()],
            diffs: None,
            project: None,
            run_dir: PathBuf::from("run"),
            cache_dir: None,
            seed: 0,
            jobs: 0,
            metrics: MetricKind::ALL.to_vec(),
            combined: Some(CombinedPair { context: MetricKind::Tfidf, ingredient: MetricKind::Tfidf }),
            tie_mode: TieMode::Positional,
            deckard: DeckardMode::Kinds,
            deckard_tasks: None,
            bins: 20,
            sample_limit: 10,
            statement_embedding: EmbeddingConfig::with_dimension(STATEMENT_DIMENSION),
            method_embedding: EmbeddingConfig::with_dimension(METHOD_DIMENSION),
        }
    }
}

fn anchor(base: &Path, p: &mut PathBuf) {
    if p.is_relative() {
        *p = base.join(&*p);
    }
}

impl RunConfig {
    /// Read a config file; relative paths in it are taken from the file's directory.
    pub fn load(path: &Path) -> Result<Self, CliError> {
        let text = fs::read_to_string(path).map_err(|e| CliError::usage(format!("cannot read config {}: {e}", path.display())))?;
        let invalid = |e: toml::de::Error| CliError::usage(format!("invalid config {}: {e}", path.display()));
        let mut table: toml::Table = toml::from_str(&text).map_err(invalid)?;
        // a partial embedding table keeps its level's dimension
        for (key, dim) in [("statement_embedding", STATEMENT_DIMENSION), ("method_embedding", METHOD_DIMENSION)] {
            if let Some(toml::Value::Table(t)) = table.get_mut(key) {
                t.entry("dimension").or_insert(toml::Value::Integer(dim as i64));
            }
        }
        let mut cfg: RunConfig = table.try_into().map_err(invalid)?;
        let base = path.parent().unwrap_or(Path::new("."));
        for p in [&mut cfg.corpus, &mut cfg.diffs, &mut cfg.cache_dir].into_iter().flatten() {
            anchor(base, p);
        }
        anchor(base, &mut cfg.run_dir);
        Ok(cfg)
    }

    /// Embedding configs carrying the run seed.
    pub fn embedding_configs(&self) -> (EmbeddingConfig, EmbeddingConfig) {
        let s = EmbeddingConfig { seed: self.seed, ..self.statement_embedding.clone() };
        let m = EmbeddingConfig { seed: self.seed, ..self.method_embedding.clone() };
        (s, m)
    }

    pub fn cache_dir(&self) -> PathBuf {
        self.cache_dir.clone().unwrap_or_else(|| self.run_dir.join("cache"))
    }

    pub fn validate(&self) -> Result<(), CliError> {
        if self.metrics.is_empty() {
            return Err(CliError::usage("metric set is empty"));
        }
        if self.bins < 2 {
            return Err(CliError::usage("bins must be at least 2"));
        }
        if self.sample_limit == 0 {
            return Err(CliError::usage("sample_limit must be positive"));
        }
        for (name, e) in [("statement_embedding", &self.statement_embedding), ("method_embedding", &self.method_embedding)] {
            if e.dimension == 0 || e.epochs == 0 {
                return Err(CliError::usage(format!("{name}: dimension and epochs must be positive")));
            }
        }
        Ok(())
    }

    pub fn require_corpus(&self) -> Result<&Path, CliError> {
        let p = self.corpus.as_deref().ok_or_else(|| CliError::usage("no corpus given (use --corpus or `corpus` in the config)"))?;
        if !p.is_dir() {
            return Err(CliError::usage(format!("corpus directory {} does not exist", p.display())));
        }
        Ok(p)
    }

    pub fn require_diffs(&self) -> Result<&Path, CliError> {
        let p = self.diffs.as_deref().ok_or_else(|| CliError::usage("no diff directory given (use --diffs or `diffs` in the config)"))?;
        if !p.is_dir() {
            return Err(CliError::usage(format!("diff directory {} does not exist", p.display())));
        }
        Ok(p)
    }
}

/// Parse `ctx:ing` (e.g. `tfidf:tfidf`) or `none`.
pub fn parse_combined(s: &str) -> Result<Option<CombinedPair>, String> {
    if s.eq_ignore_ascii_case("none") {
        return Ok(None);
    }
    let (c, i) = s.split_once(':').ok_or_else(|| format!("expected CONTEXT:INGREDIENT or none, got `{s}`"))?;
    Ok(Some(CombinedPair { context: c.parse()?, ingredient: i.parse()? }))
}
