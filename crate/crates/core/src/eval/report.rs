use std::collections::{BTreeMap, BTreeSet};

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use super::{distribution_export, rank_stats, wilcoxon, DensityTable, EvalError, RankStats, WilcoxonResult, ALPHA, EXACT_MAX_N, MIN_PAIRS};
use crate::corpus::CorpusIndex;
use crate::metrics::MetricKind;
use crate::ranking::{Level, RankMetric, Ranker, Ranking, ScoreProvider, TieMode};
use crate::tasks::{RepairTask, TaskRecord};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportOptions {
    pub metrics: Vec<MetricKind>,
    /// (context metric, ingredient metric) of the combined ranking.
    pub combined: Option<(MetricKind, MetricKind)>,
    pub tie_mode: TieMode,
    /// When set, rankings that use DECKARD cover only these task ids.
    pub deckard_tasks: Option<BTreeSet<String>>,
    pub bins: usize,
    /// Keep full candidate lists in the returned evaluation.
    pub keep_rankings: bool,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions {
            metrics: MetricKind::ALL.to_vec(),
            combined: Some((MetricKind::Tfidf, MetricKind::Tfidf)),
            tie_mode: TieMode::Positional,
            deckard_tasks: None,
            bins: 20,
            keep_rankings: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ReportMetadata {
    pub alpha: f64,
    pub zero_differences: String,
    pub median: String,
    pub space_reduction: String,
    pub tie_mode: TieMode,
    pub exact_p_max_n: usize,
    pub min_pairs: usize,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ExcludedTask {
    pub task_id: String,
    pub metric: String,
    pub level: Level,
    pub reason: String,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "status", rename_all = "kebab-case")]
pub enum PairOutcome {
    Tested(WilcoxonResult),
    Untested { pairs: usize, error: String },
}

/// Symmetric matrix of pairwise tests; the diagonal is empty.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WilcoxonMatrix {
    pub labels: Vec<String>,
    pub cells: Vec<Vec<Option<PairOutcome>>>,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EvalReport {
    pub metadata: ReportMetadata,
    pub tasks: Vec<TaskRecord>,
    pub ingredient: Vec<RankStats>,
    pub context: Vec<RankStats>,
    pub excluded: Vec<ExcludedTask>,
    pub wilcoxon_ingredient: WilcoxonMatrix,
    pub wilcoxon_context: WilcoxonMatrix,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Evaluation {
    pub report: EvalReport,
    pub densities: Vec<DensityTable>,
    /// Empty unless `ReportOptions::keep_rankings`.
    pub rankings: Vec<Ranking>,
}

#[derive(Clone, Copy)]
struct Series {
    level: Level,
    metric: RankMetric,
}

impl Series {
    fn uses(&self, kind: MetricKind) -> bool {
        match self.metric {
            RankMetric::Single(k) => k == kind,
            RankMetric::Combined { context, ingredient } => context == kind || ingredient == kind,
        }
    }
}

fn matrix(series: &[(String, Vec<Ranking>)]) -> WilcoxonMatrix {
    let n = series.len();
    let mut cells = vec![vec![None; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let ranks_j: BTreeMap<&str, usize> =
                series[j].1.iter().filter_map(|r| r.correct_rank.map(|k| (r.task_id.as_str(), k))).collect();
            let (mut x, mut y) = (Vec::new(), Vec::new());
            for r in &series[i].1 {
                if let (Some(a), Some(&b)) = (r.correct_rank, ranks_j.get(r.task_id.as_str())) {
                    x.push(a as f64);
                    y.push(b as f64);
                }
            }
            let outcome = match wilcoxon(&x, &y) {
                Ok(result) => PairOutcome::Tested(result),
                Err(e) => PairOutcome::Untested { pairs: x.len(), error: e.to_string() },
            };
            cells[i][j] = Some(outcome.clone());
            cells[j][i] = Some(outcome);
        }
    }
    WilcoxonMatrix { labels: series.iter().map(|(l, _)| l.clone()).collect(), cells }
}

/// Rank every task under every configured metric at both levels, then
/// aggregate statistics and pairwise tests.
pub fn build_report<P: ScoreProvider + ?Sized>(
    corpus: &CorpusIndex,
    tasks: &[RepairTask],
    scores: &P,
    options: &ReportOptions,
) -> Result<Evaluation, EvalError> {
    let ranker = Ranker::new(corpus, scores).with_tie_mode(options.tie_mode);
    let mut series: Vec<Series> = options.metrics.iter().map(|&k| Series { level: Level::Ingredient, metric: RankMetric::Single(k) }).collect();
    if let Some((context, ingredient)) = options.combined {
        series.push(Series { level: Level::Combined, metric: RankMetric::Combined { context, ingredient } });
    }
    series.extend(options.metrics.iter().map(|&k| Series { level: Level::Context, metric: RankMetric::Single(k) }));

    let eligible = |s: &Series, t: &RepairTask| match &options.deckard_tasks {
        Some(subset) if s.uses(MetricKind::Deckard) => subset.contains(&t.id),
        _ => true,
    };
    let jobs: Vec<(usize, &RepairTask)> =
        series.iter().enumerate().flat_map(|(i, s)| tasks.iter().filter(move |t| eligible(s, t)).map(move |t| (i, t))).collect();
    let results: Vec<Result<Ranking, EvalError>> = jobs
        .par_iter()
        .map(|&(i, task)| {
            let s = series[i];
            let mut r = match (s.level, s.metric) {
                (Level::Context, RankMetric::Single(k)) => ranker.rank_contexts(task, k)?,
                (_, RankMetric::Single(k)) => ranker.rank_ingredients(task, k)?,
                (_, RankMetric::Combined { context, ingredient }) => ranker.rank_combined(task, context, ingredient)?,
            };
            if !options.keep_rankings {
                r.candidates = Vec::new();
                r.excluded = Vec::new();
            }
            Ok(r)
        })
        .collect();

    let mut per_series: Vec<Vec<Ranking>> = vec![Vec::new(); series.len()];
    for ((i, _), r) in jobs.iter().zip(results) {
        per_series[*i].push(r?);
    }

    let mut excluded = Vec::new();
    let mut ingredient = Vec::new();
    let mut context = Vec::new();
    let mut densities = Vec::new();
    let mut ingredient_ranks = Vec::new();
    let mut context_ranks = Vec::new();
    let mut kept = Vec::new();
    for (s, rankings) in series.iter().zip(per_series) {
        let label = s.metric.to_string();
        for r in rankings.iter().filter(|r| r.correct_rank.is_none()) {
            excluded.push(ExcludedTask { task_id: r.task_id.clone(), metric: label.clone(), level: s.level, reason: "absent correct rank".into() });
        }
        let present: Vec<Ranking> = rankings.iter().filter(|r| r.correct_rank.is_some()).cloned().collect();
        if !present.is_empty() {
            let stats = rank_stats(&present)?;
            densities.push(distribution_export(&present, options.bins.max(2))?);
            match s.level {
                Level::Context => context.push(stats),
                _ => ingredient.push(stats),
            }
        }
        match s.level {
            Level::Context => context_ranks.push((label, present)),
            _ => ingredient_ranks.push((label, present)),
        }
        if options.keep_rankings {
            kept.extend(rankings);
        }
    }

    let report = EvalReport {
        metadata: ReportMetadata {
            alpha: ALPHA,
            zero_differences: "dropped".into(),
            median: "lower".into(),
            space_reduction: "1 - mean rank / mean pool size".into(),
            tie_mode: options.tie_mode,
            exact_p_max_n: EXACT_MAX_N,
            min_pairs: MIN_PAIRS,
        },
        tasks: tasks.iter().map(|t| t.to_record(corpus)).collect(),
        ingredient,
        context,
        excluded,
        wilcoxon_ingredient: matrix(&ingredient_ranks),
        wilcoxon_context: matrix(&context_ranks),
    };
    Ok(Evaluation { report, densities, rankings: kept })
}
