//! Ingredient rankings, donor-context rankings and the combined two-level
//! ranking, with exclusion of candidates equivalent to the query.

mod export;
mod scorer;

use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{ComponentId, ContextRef, CorpusIndex};
use crate::metrics::{MetricError, MetricKind};
use crate::tasks::RepairTask;

pub use export::{export_rows, write_csv, RankingRow};
pub use scorer::DirectScorer;

#[derive(Debug, Error)]
pub enum RankError {
    #[error(transparent)]
    Metric(#[from] MetricError),
    #[error("score provider: {0}")]
    Provider(String),
}

/// What a ranking ranks.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Level {
    Ingredient,
    Context,
    Combined,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RankMetric {
    Single(MetricKind),
    Combined { context: MetricKind, ingredient: MetricKind },
}

impl fmt::Display for RankMetric {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RankMetric::Single(k) => write!(f, "{k}"),
            RankMetric::Combined { context, ingredient } => write!(f, "COMBINED({context},{ingredient})"),
        }
    }
}

/// How a correct candidate tied with others is ranked.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TieMode {
    /// Its position after tie-breaking by corpus position.
    #[default]
    Positional,
    /// The last position of its tie group.
    Pessimistic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExclusionReason {
    EquivalentToModificationPoint,
    EquivalentToRecipientContext,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub id: ComponentId,
    pub score: f64,
    /// Donor context of a combined-ranking entry.
    #[serde(skip_serializing_if = "Option::is_none")]
    pub donor: Option<ComponentId>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Ranking {
    pub task_id: String,
    pub metric: RankMetric,
    pub level: Level,
    pub candidates: Vec<Candidate>,
    pub excluded: Vec<(ComponentId, ExclusionReason)>,
    /// 1-based; `None` when no candidate matches.
    pub correct_rank: Option<usize>,
    pub pool_size: usize,
}

impl Ranking {
    pub fn normalized_rank(&self) -> Option<f64> {
        self.correct_rank.map(|r| r as f64 / self.pool_size as f64)
    }
}

/// Scores of every pooled component against a task's query component.
///
/// Results are aligned with `CorpusIndex::statement_pool` and
/// `CorpusIndex::context_pool` respectively.
pub trait ScoreProvider: Sync {
    fn ingredient_scores(&self, task: &RepairTask, kind: MetricKind) -> Result<Vec<f64>, RankError>;
    fn context_scores(&self, task: &RepairTask, kind: MetricKind) -> Result<Vec<f64>, RankError>;
}

/// Sort by score, highest first; equal scores keep corpus order
/// (file path, line, id).
pub fn order_candidates(corpus: &CorpusIndex, candidates: &mut [Candidate]) {
    candidates.sort_by(|a, b| b.score.total_cmp(&a.score).then_with(|| corpus.position_key(a.id).cmp(&corpus.position_key(b.id))));
}

/// 1-based rank of the candidate at `index`, widened to the end of its tie
/// group in pessimistic mode. `same_group` decides whether two adjacent
/// positions belong to one group.
fn rank_at(candidates: &[Candidate], index: usize, mode: TieMode, same_group: impl Fn(&Candidate, &Candidate) -> bool) -> usize {
    let mut end = index;
    if mode == TieMode::Pessimistic {
        while end + 1 < candidates.len() && same_group(&candidates[index], &candidates[end + 1]) {
            end += 1;
        }
    }
    end + 1
}

pub struct Ranker<'a, P: ScoreProvider + ?Sized> {
    corpus: &'a CorpusIndex,
    scores: &'a P,
    tie_mode: TieMode,
}

impl<'a, P: ScoreProvider + ?Sized> Ranker<'a, P> {
    pub fn new(corpus: &'a CorpusIndex, scores: &'a P) -> Self {
        Ranker { corpus, scores, tie_mode: TieMode::default() }
    }

    pub fn with_tie_mode(mut self, mode: TieMode) -> Self {
        self.tie_mode = mode;
        self
    }

    pub fn corpus(&self) -> &'a CorpusIndex {
        self.corpus
    }

    fn is_correct(&self, task: &RepairTask, id: ComponentId) -> bool {
        self.corpus.component(id).equivalent(&task.correct_ingredient)
    }

    /// Donors holding a statement equivalent to the correct ingredient.
    fn correct_donors(&self, task: &RepairTask) -> BTreeSet<ComponentId> {
        self.corpus
            .statement_pool()
            .iter()
            .filter(|&&s| self.is_correct(task, s))
            .filter_map(|&s| match self.corpus.context_of(s) {
                Some(ContextRef::Method(m)) => Some(m),
                _ => None,
            })
            .collect()
    }

    fn finish(&self, task: &RepairTask, metric: RankMetric, level: Level, candidates: Vec<Candidate>, excluded: Vec<(ComponentId, ExclusionReason)>, correct: impl Fn(&Candidate) -> bool) -> Ranking {
        let correct_rank = candidates.iter().position(correct).map(|i| {
            rank_at(&candidates, i, self.tie_mode, |a, b| a.score == b.score && (level != Level::Combined || a.donor == b.donor))
        });
        Ranking { task_id: task.id.clone(), metric, level, pool_size: candidates.len(), candidates, excluded, correct_rank }
    }

    fn ingredient_candidates(&self, task: &RepairTask, scores: &[f64], excluded: &mut Vec<(ComponentId, ExclusionReason)>) -> Vec<Candidate> {
        let mp = task.modification_point(self.corpus);
        let mut candidates = Vec::with_capacity(scores.len());
        for (&id, &score) in self.corpus.statement_pool().iter().zip(scores) {
            if self.corpus.component(id).equivalent(mp) {
                excluded.push((id, ExclusionReason::EquivalentToModificationPoint));
            } else {
                candidates.push(Candidate { id, score, donor: None });
            }
        }
        candidates
    }

    fn context_candidates(&self, task: &RepairTask, scores: &[f64], excluded: &mut Vec<(ComponentId, ExclusionReason)>) -> Vec<Candidate> {
        let recipient = task.recipient_context(self.corpus);
        let mut candidates = Vec::with_capacity(scores.len());
        for (&id, &score) in self.corpus.context_pool().iter().zip(scores) {
            if self.corpus.component(id).equivalent(recipient) {
                excluded.push((id, ExclusionReason::EquivalentToRecipientContext));
            } else {
                candidates.push(Candidate { id, score, donor: None });
            }
        }
        candidates
    }

    pub fn rank_ingredients(&self, task: &RepairTask, kind: MetricKind) -> Result<Ranking, RankError> {
        let scores = self.scores.ingredient_scores(task, kind)?;
        let mut excluded = Vec::new();
        let mut candidates = self.ingredient_candidates(task, &scores, &mut excluded);
        order_candidates(self.corpus, &mut candidates);
        Ok(self.finish(task, RankMetric::Single(kind), Level::Ingredient, candidates, excluded, |c| self.is_correct(task, c.id)))
    }

    pub fn rank_contexts(&self, task: &RepairTask, kind: MetricKind) -> Result<Ranking, RankError> {
        let scores = self.scores.context_scores(task, kind)?;
        let mut excluded = Vec::new();
        let mut candidates = self.context_candidates(task, &scores, &mut excluded);
        order_candidates(self.corpus, &mut candidates);
        let donors = self.correct_donors(task);
        Ok(self.finish(task, RankMetric::Single(kind), Level::Context, candidates, excluded, |c| donors.contains(&c.id)))
    }

    /// Donors ordered by `context`, each followed by its own statements
    /// ordered by `ingredient`.
    pub fn rank_combined(&self, task: &RepairTask, context: MetricKind, ingredient: MetricKind) -> Result<Ranking, RankError> {
        let context_scores = self.scores.context_scores(task, context)?;
        let ingredient_scores = self.scores.ingredient_scores(task, ingredient)?;
        let mut excluded = Vec::new();
        let mut donors = self.context_candidates(task, &context_scores, &mut excluded);
        order_candidates(self.corpus, &mut donors);

        let mut by_donor: std::collections::BTreeMap<ComponentId, Vec<Candidate>> = std::collections::BTreeMap::new();
        for c in self.ingredient_candidates(task, &ingredient_scores, &mut excluded) {
            if let Some(ContextRef::Method(m)) = self.corpus.context_of(c.id) {
                by_donor.entry(m).or_default().push(Candidate { donor: Some(m), ..c });
            }
        }
        let mut candidates = Vec::new();
        for donor in &donors {
            if let Some(mut members) = by_donor.remove(&donor.id) {
                order_candidates(self.corpus, &mut members);
                candidates.extend(members);
            }
        }
        let metric = RankMetric::Combined { context, ingredient };
        Ok(self.finish(task, metric, Level::Combined, candidates, excluded, |c| self.is_correct(task, c.id)))
    }
}

#[cfg(test)]
mod tests;
