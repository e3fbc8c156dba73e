//! The four similarity metrics behind one interface.

pub mod deckard;
pub mod embedding;
pub mod lcs;
pub mod tfidf;

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{CorpusIndex, Role, SourceComponent};

pub use deckard::{deckard_vector, DeckardMode};
pub use embedding::{EmbeddingConfig, EmbeddingModel, METHOD_DIMENSION, STATEMENT_DIMENSION};
pub use lcs::{lcs_len, lcs_similarity};
pub use tfidf::{tfidf_fit, TfidfModel};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum MetricError {
    #[error("empty component text")]
    EmptyText,
    #[error("undefined cosine: zero vector")]
    UndefinedCosine,
    #[error("cannot compare {0} vector with {1} vector")]
    KindMismatch(MetricKind, MetricKind),
    #[error("dimension mismatch: {0} vs {1}")]
    DimensionMismatch(usize, usize),
    #[error("cannot compare a {0:?} with a {1:?}")]
    RoleMismatch(Role, Role),
    #[error("no {kind} model fitted for {role:?} components")]
    MissingModel { kind: MetricKind, role: Role },
    #[error("empty pool")]
    EmptyPool,
    #[error("corpus too small for embedding training: {documents} documents, {distinct_tokens} distinct tokens")]
    CorpusTooSmall { documents: usize, distinct_tokens: usize },
    #[error("invalid embedding config: {0}")]
    BadConfig(String),
    #[error("malformed embedding model: {0}")]
    BadModel(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum MetricKind {
    Lcs,
    Tfidf,
    Doc2vec,
    Deckard,
}

impl MetricKind {
    pub const ALL: [MetricKind; 4] = [MetricKind::Lcs, MetricKind::Tfidf, MetricKind::Doc2vec, MetricKind::Deckard];

    pub fn name(self) -> &'static str {
        match self {
            MetricKind::Lcs => "LCS",
            MetricKind::Tfidf => "TFIDF",
            MetricKind::Doc2vec => "DOC2VEC",
            MetricKind::Deckard => "DECKARD",
        }
    }

    /// Lowest score the metric can produce; stands in for undefined scores.
    pub fn floor(self) -> f64 {
        match self {
            MetricKind::Doc2vec => -1.0,
            _ => 0.0,
        }
    }
}

impl fmt::Display for MetricKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for MetricKind {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        MetricKind::ALL
            .into_iter()
            .find(|k| k.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| format!("unknown metric `{s}` (expected one of lcs, tfidf, doc2vec, deckard)"))
    }
}

/// Sparse term weights, sorted by term.
#[derive(Debug, Clone, Default, PartialEq, Serialize, Deserialize)]
pub struct SparseVector(Vec<(String, f64)>);

impl SparseVector {
    pub fn from_sorted(entries: Vec<(String, f64)>) -> Self {
        debug_assert!(entries.windows(2).all(|w| w[0].0 < w[1].0));
        SparseVector(entries)
    }

    pub fn entries(&self) -> &[(String, f64)] {
        &self.0
    }

    pub fn get(&self, term: &str) -> f64 {
        self.0.binary_search_by(|(t, _)| t.as_str().cmp(term)).map_or(0.0, |i| self.0[i].1)
    }

    fn dot(&self, other: &SparseVector) -> f64 {
        let (mut i, mut j, mut sum) = (0, 0, 0.0);
        while i < self.0.len() && j < other.0.len() {
            match self.0[i].0.cmp(&other.0[j].0) {
                std::cmp::Ordering::Less => i += 1,
                std::cmp::Ordering::Greater => j += 1,
                std::cmp::Ordering::Equal => {
                    sum += self.0[i].1 * other.0[j].1;
                    i += 1;
                    j += 1;
                }
            }
        }
        sum
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase", tag = "kind", content = "payload")]
pub enum MetricVector {
    Tfidf(SparseVector),
    Doc2vec(Vec<f32>),
    Deckard(Vec<u32>),
}

impl MetricVector {
    pub fn kind(&self) -> MetricKind {
        match self {
            MetricVector::Tfidf(_) => MetricKind::Tfidf,
            MetricVector::Doc2vec(_) => MetricKind::Doc2vec,
            MetricVector::Deckard(_) => MetricKind::Deckard,
        }
    }

    pub fn dimension(&self) -> Option<usize> {
        match self {
            MetricVector::Tfidf(_) => None,
            MetricVector::Doc2vec(v) => Some(v.len()),
            MetricVector::Deckard(v) => Some(v.len()),
        }
    }

    pub fn is_zero(&self) -> bool {
        match self {
            MetricVector::Tfidf(v) => v.0.iter().all(|(_, w)| *w == 0.0),
            MetricVector::Doc2vec(v) => v.iter().all(|&x| x == 0.0),
            MetricVector::Deckard(v) => v.iter().all(|&x| x == 0),
        }
    }

    /// Multiply every weight by `c`.
    pub fn scaled(&self, c: f64) -> MetricVector {
        match self {
            MetricVector::Tfidf(v) => MetricVector::Tfidf(SparseVector(v.0.iter().map(|(t, w)| (t.clone(), w * c)).collect())),
            MetricVector::Doc2vec(v) => MetricVector::Doc2vec(v.iter().map(|&x| (x as f64 * c) as f32).collect()),
            MetricVector::Deckard(v) => MetricVector::Deckard(v.iter().map(|&x| (x as f64 * c).round() as u32).collect()),
        }
    }
}

/// Why a vector came out as all zeros.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum VectorFlag {
    NoTokens,
    OutOfVocabulary,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Flagged {
    pub vector: MetricVector,
    pub flag: Option<VectorFlag>,
}

fn dense_cosine(dot: f64, uu: f64, vv: f64) -> Result<f64, MetricError> {
    if uu == 0.0 || vv == 0.0 {
        return Err(MetricError::UndefinedCosine);
    }
    Ok((dot / (uu.sqrt() * vv.sqrt())).clamp(-1.0, 1.0))
}

pub fn cosine(u: &MetricVector, v: &MetricVector) -> Result<f64, MetricError> {
    if u.kind() != v.kind() {
        return Err(MetricError::KindMismatch(u.kind(), v.kind()));
    }
    if let (Some(a), Some(b)) = (u.dimension(), v.dimension()) {
        if a != b {
            return Err(MetricError::DimensionMismatch(a, b));
        }
    }
    match (u, v) {
        (MetricVector::Tfidf(a), MetricVector::Tfidf(b)) => dense_cosine(a.dot(b), a.dot(a), b.dot(b)),
        (MetricVector::Doc2vec(a), MetricVector::Doc2vec(b)) => {
            let (mut dot, mut aa, mut bb) = (0.0, 0.0, 0.0);
            for (&x, &y) in a.iter().zip(b) {
                let (x, y) = (x as f64, y as f64);
                dot += x * y;
                aa += x * x;
                bb += y * y;
            }
            dense_cosine(dot, aa, bb)
        }
        (MetricVector::Deckard(a), MetricVector::Deckard(b)) => {
            let (mut dot, mut aa, mut bb) = (0.0, 0.0, 0.0);
            for (&x, &y) in a.iter().zip(b) {
                let (x, y) = (x as f64, y as f64);
                dot += x * y;
                aa += x * x;
                bb += y * y;
            }
            dense_cosine(dot, aa, bb)
        }
        _ => unreachable!("kinds checked above"),
    }
}

/// Models fitted for one component role.
#[derive(Debug, Clone, Default)]
pub struct LevelModels {
    pub tfidf: Option<TfidfModel>,
    pub embedding: Option<EmbeddingModel>,
}

/// Everything the pool-dependent metrics need.
#[derive(Debug, Clone, Default)]
pub struct ModelContext {
    pub statement: LevelModels,
    pub method: LevelModels,
    pub deckard: DeckardMode,
}

/// A component prepared for scoring by one metric.
#[derive(Debug, Clone, PartialEq)]
pub enum Representation {
    Text(Vec<char>),
    Vector(MetricVector),
}

impl ModelContext {
    /// Fit TF-IDF on the statement pool and on the method pool.
    pub fn fit_tfidf(&mut self, corpus: &CorpusIndex) -> Result<(), MetricError> {
        let docs = |ids: &[crate::corpus::ComponentId]| -> Vec<Vec<&str>> {
            ids.iter().map(|&id| corpus.component(id).token_texts().collect()).collect()
        };
        if !corpus.statement_pool().is_empty() {
            self.statement.tfidf = Some(TfidfModel::fit(&docs(corpus.statement_pool()))?);
        }
        if !corpus.context_pool().is_empty() {
            self.method.tfidf = Some(TfidfModel::fit(&docs(corpus.context_pool()))?);
        }
        Ok(())
    }

    pub fn level(&self, role: Role) -> &LevelModels {
        match role {
            Role::Statement => &self.statement,
            Role::Method => &self.method,
        }
    }

    pub fn level_mut(&mut self, role: Role) -> &mut LevelModels {
        match role {
            Role::Statement => &mut self.statement,
            Role::Method => &mut self.method,
        }
    }

    pub fn represent(&self, kind: MetricKind, c: &SourceComponent) -> Result<Representation, MetricError> {
        let missing = || MetricError::MissingModel { kind, role: c.role };
        let texts: Vec<&str> = c.token_texts().collect();
        Ok(match kind {
            MetricKind::Lcs => Representation::Text(c.raw_text.chars().collect()),
            MetricKind::Tfidf => Representation::Vector(self.level(c.role).tfidf.as_ref().ok_or_else(missing)?.transform(&texts).vector),
            MetricKind::Doc2vec => Representation::Vector(self.level(c.role).embedding.as_ref().ok_or_else(missing)?.infer(&texts).vector),
            MetricKind::Deckard => Representation::Vector(MetricVector::Deckard(deckard_vector(&c.ast, self.deckard))),
        })
    }
}

/// Score two prepared representations.
pub fn compare(a: &Representation, b: &Representation) -> Result<f64, MetricError> {
    match (a, b) {
        (Representation::Text(x), Representation::Text(y)) => lcs::lcs_ratio(x, y),
        (Representation::Vector(x), Representation::Vector(y)) => cosine(x, y),
        (Representation::Text(_), Representation::Vector(v)) | (Representation::Vector(v), Representation::Text(_)) => {
            Err(MetricError::KindMismatch(MetricKind::Lcs, v.kind()))
        }
    }
}

pub fn similarity(kind: MetricKind, a: &SourceComponent, b: &SourceComponent, ctx: &ModelContext) -> Result<f64, MetricError> {
    if a.role != b.role && matches!(kind, MetricKind::Tfidf | MetricKind::Doc2vec) {
        return Err(MetricError::RoleMismatch(a.role, b.role));
    }
    compare(&ctx.represent(kind, a)?, &ctx.represent(kind, b)?)
}

/// Embedding model for each role, trained on that role's pool.
pub fn train_embeddings(
    corpus: &CorpusIndex,
    statement: &EmbeddingConfig,
    method: &EmbeddingConfig,
) -> Result<(EmbeddingModel, EmbeddingModel), MetricError> {
    let docs = |ids: &[crate::corpus::ComponentId]| -> Vec<Vec<&str>> {
        ids.iter().map(|&id| corpus.component(id).token_texts().collect()).collect()
    };
    let s = EmbeddingModel::train(&docs(corpus.statement_pool()), statement)?;
    let m = EmbeddingModel::train(&docs(corpus.context_pool()), method)?;
    Ok((s, m))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::JavaLike;

    fn stmt(text: &str) -> SourceComponent {
        SourceComponent::detached(&JavaLike, Role::Statement, "T.java", 1, text).unwrap()
    }

    #[test]
    fn cosine_hand_values() {
        let u = MetricVector::Deckard(vec![1, 1, 0]);
        let v = MetricVector::Deckard(vec![1, 0, 1]);
        assert!((cosine(&u, &v).unwrap() - 0.5).abs() < 1e-12);
        assert!((cosine(&u, &u).unwrap() - 1.0).abs() < 1e-12);
        let x = MetricVector::Doc2vec(vec![1.0, 0.0]);
        let y = MetricVector::Doc2vec(vec![0.0, 1.0]);
        assert_eq!(cosine(&x, &y).unwrap(), 0.0);
    }

    #[test]
    fn cosine_errors() {
        let zero = MetricVector::Deckard(vec![0, 0]);
        let one = MetricVector::Deckard(vec![1, 0]);
        assert_eq!(cosine(&zero, &one), Err(MetricError::UndefinedCosine));
        assert_eq!(cosine(&one, &MetricVector::Deckard(vec![1, 0, 0])), Err(MetricError::DimensionMismatch(2, 3)));
        assert_eq!(
            cosine(&one, &MetricVector::Doc2vec(vec![1.0, 0.0])),
            Err(MetricError::KindMismatch(MetricKind::Deckard, MetricKind::Doc2vec))
        );
    }

    #[test]
    fn metric_names_round_trip() {
        for k in MetricKind::ALL {
            assert_eq!(k.name().parse::<MetricKind>().unwrap(), k);
            assert_eq!(k.name().to_lowercase().parse::<MetricKind>().unwrap(), k);
        }
        assert!("combined".parse::<MetricKind>().is_err());
    }

    #[test]
    fn dispatcher_examples() {
        let corpus = CorpusIndex::from_sources(
            &JavaLike,
            vec![("A.java".into(), "class A { void f() { x = f(a); y = g(b); return; } }".into())],
        )
        .unwrap();
        let mut ctx = ModelContext::default();
        ctx.fit_tfidf(&corpus).unwrap();
        let a = stmt("x = f(a);");
        assert_eq!(similarity(MetricKind::Lcs, &a, &a, &ctx).unwrap(), 1.0);
        assert_eq!(similarity(MetricKind::Tfidf, &stmt("alpha + 1"), &stmt("beta(gamma)"), &ctx).unwrap(), 0.0);
        let renamed = stmt("total = compute(values);");
        assert!((similarity(MetricKind::Deckard, &a, &renamed, &ctx).unwrap() - 1.0).abs() < 1e-12);
        assert_eq!(
            similarity(MetricKind::Doc2vec, &a, &a, &ctx),
            Err(MetricError::MissingModel { kind: MetricKind::Doc2vec, role: Role::Statement })
        );
    }

    #[test]
    fn tfidf_needs_matching_roles() {
        let mut ctx = ModelContext::default();
        ctx.statement.tfidf = Some(TfidfModel::fit(&[vec!["x"]]).unwrap());
        let m = SourceComponent::detached(&JavaLike, Role::Method, "T.java", 1, "void f() { x(); }").unwrap();
        assert_eq!(similarity(MetricKind::Tfidf, &stmt("x();"), &m, &ctx), Err(MetricError::RoleMismatch(Role::Statement, Role::Method)));
    }
}
