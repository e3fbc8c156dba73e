use std::sync::OnceLock;

use rayon::prelude::*;

use super::{RankError, ScoreProvider};
use crate::corpus::{ComponentId, CorpusIndex, Role};
use crate::metrics::{compare, MetricError, MetricKind, ModelContext, Representation};
use crate::tasks::RepairTask;

type Prepared = OnceLock<Result<Vec<Representation>, MetricError>>;

/// Scores computed on demand from the models, with every pooled component's
/// representation prepared once per metric.
pub struct DirectScorer<'a> {
    corpus: &'a CorpusIndex,
    models: &'a ModelContext,
    prepared: [[Prepared; 4]; 2],
}

fn slot(kind: MetricKind) -> usize {
    MetricKind::ALL.iter().position(|&k| k == kind).unwrap_or(0)
}

/// Undefined similarities (empty text, zero vectors) rank last. Scores are
/// rounded to 12 decimals so mathematically equal similarities tie exactly.
fn score_or_floor(kind: MetricKind, result: Result<f64, MetricError>) -> Result<f64, MetricError> {
    match result {
        Err(MetricError::EmptyText | MetricError::UndefinedCosine) => Ok(kind.floor()),
        Ok(score) => Ok((score * 1e12).round() / 1e12),
        other => other,
    }
}

impl<'a> DirectScorer<'a> {
    pub fn new(corpus: &'a CorpusIndex, models: &'a ModelContext) -> Self {
        DirectScorer { corpus, models, prepared: Default::default() }
    }

    fn pool(&self, role: Role) -> &'a [ComponentId] {
        match role {
            Role::Statement => self.corpus.statement_pool(),
            Role::Method => self.corpus.context_pool(),
        }
    }

    fn prepared(&self, role: Role, kind: MetricKind) -> Result<&[Representation], RankError> {
        let cell = &self.prepared[role as usize][slot(kind)];
        let reps = cell.get_or_init(|| {
            self.pool(role).par_iter().map(|&id| self.models.represent(kind, self.corpus.component(id))).collect()
        });
        reps.as_deref().map_err(|e| RankError::Metric(e.clone()))
    }

    fn scores(&self, role: Role, query: ComponentId, kind: MetricKind) -> Result<Vec<f64>, RankError> {
        let pool = self.pool(role);
        let reps = self.prepared(role, kind)?;
        let at = pool.binary_search(&query).map_err(|_| RankError::Provider(format!("{query} is not pooled")))?;
        let q = &reps[at];
        let scores: Result<Vec<f64>, MetricError> = reps.par_iter().map(|r| score_or_floor(kind, compare(q, r))).collect();
        Ok(scores?)
    }
}

impl ScoreProvider for DirectScorer<'_> {
    fn ingredient_scores(&self, task: &RepairTask, kind: MetricKind) -> Result<Vec<f64>, RankError> {
        self.scores(Role::Statement, task.modification_point, kind)
    }

    fn context_scores(&self, task: &RepairTask, kind: MetricKind) -> Result<Vec<f64>, RankError> {
        self.scores(Role::Method, task.recipient_context, kind)
    }
}
