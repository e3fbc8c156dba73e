//! Rank statistics, paired significance tests and density tables.

mod report;
mod wilcoxon;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::ranking::{Level, RankError, Ranking};

pub use report::{build_report, EvalReport, Evaluation, ExcludedTask, PairOutcome, ReportMetadata, ReportOptions, WilcoxonMatrix};
pub use wilcoxon::{wilcoxon, wilcoxon_with, PMethod, WilcoxonResult, ALPHA, EXACT_MAX_N, MIN_PAIRS};

#[derive(Debug, Error, PartialEq)]
pub enum EvalError {
    #[error("no rankings to aggregate")]
    NoRankings,
    #[error("task {0} has no correct rank")]
    AbsentRank(String),
    #[error("samples differ in length: {0} vs {1}")]
    LengthMismatch(usize, usize),
    #[error("need at least 6 pairs, got {0}")]
    TooFewPairs(usize),
    #[error("degenerate sample: all differences are zero")]
    DegenerateSample,
    #[error("exact p-value enumeration is limited to 24 pairs, got {0}")]
    ExactTooLarge(usize),
    #[error("need at least 2 bins, got {0}")]
    TooFewBins(usize),
    #[error("{0}")]
    Rank(String),
}

impl From<RankError> for EvalError {
    fn from(e: RankError) -> Self {
        EvalError::Rank(e.to_string())
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RankStats {
    pub metric: String,
    pub level: Level,
    pub tasks: usize,
    /// Lower median of the correct ranks.
    pub median_rank: usize,
    pub mean_rank: f64,
    pub mean_pool_size: f64,
    /// `1 - mean_rank / mean_pool_size`.
    pub space_reduction: f64,
    /// Mean over tasks of `1 - rank / pool_size`.
    pub mean_task_reduction: f64,
    pub perfect_repair_rate: f64,
    pub normalized_ranks: Vec<f64>,
}

pub fn rank_stats(rankings: &[Ranking]) -> Result<RankStats, EvalError> {
    let first = rankings.first().ok_or(EvalError::NoRankings)?;
    let mut ranks = Vec::with_capacity(rankings.len());
    for r in rankings {
        ranks.push(r.correct_rank.ok_or_else(|| EvalError::AbsentRank(r.task_id.clone()))?);
    }
    let n = rankings.len() as f64;
    let mean_rank = ranks.iter().sum::<usize>() as f64 / n;
    let mean_pool_size = rankings.iter().map(|r| r.pool_size).sum::<usize>() as f64 / n;
    let normalized_ranks: Vec<f64> = rankings.iter().zip(&ranks).map(|(r, &k)| k as f64 / r.pool_size as f64).collect();
    let mut sorted = ranks.clone();
    sorted.sort_unstable();
    Ok(RankStats {
        metric: first.metric.to_string(),
        level: first.level,
        tasks: rankings.len(),
        median_rank: sorted[(sorted.len() - 1) / 2],
        mean_rank,
        mean_pool_size,
        space_reduction: 1.0 - mean_rank / mean_pool_size,
        mean_task_reduction: normalized_ranks.iter().map(|v| 1.0 - v).sum::<f64>() / n,
        perfect_repair_rate: ranks.iter().filter(|&&k| k == 1).count() as f64 / n,
        normalized_ranks,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityBin {
    pub lower: f64,
    pub upper: f64,
    pub count: usize,
    /// Count divided by (total × bin width), so the bins integrate to 1.
    pub density: f64,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DensityTable {
    pub metric: String,
    pub level: Level,
    pub bins: Vec<DensityBin>,
    pub normalized_ranks: Vec<f64>,
}

/// Histogram of normalized ranks over `bins` equal bins of (0, 1]; bin `k`
/// covers (k/bins, (k+1)/bins].
pub fn distribution_export(rankings: &[Ranking], bins: usize) -> Result<DensityTable, EvalError> {
    if bins < 2 {
        return Err(EvalError::TooFewBins(bins));
    }
    let first = rankings.first().ok_or(EvalError::NoRankings)?;
    let mut counts = vec![0usize; bins];
    let mut values = Vec::with_capacity(rankings.len());
    for r in rankings {
        let rank = r.correct_rank.ok_or_else(|| EvalError::AbsentRank(r.task_id.clone()))?;
        // integer form of ceil(rank / pool × bins) - 1
        let bin = ((rank * bins).div_ceil(r.pool_size)).clamp(1, bins) - 1;
        counts[bin] += 1;
        values.push(rank as f64 / r.pool_size as f64);
    }
    let width = 1.0 / bins as f64;
    let total = values.len() as f64;
    Ok(DensityTable {
        metric: first.metric.to_string(),
        level: first.level,
        bins: counts
            .into_iter()
            .enumerate()
            .map(|(k, count)| DensityBin { lower: k as f64 * width, upper: (k + 1) as f64 * width, count, density: count as f64 / (total * width) })
            .collect(),
        normalized_ranks: values,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::metrics::MetricKind;
    use crate::ranking::RankMetric;

    pub(crate) fn ranking(task: &str, rank: usize, pool: usize) -> Ranking {
        Ranking {
            task_id: task.into(),
            metric: RankMetric::Single(MetricKind::Tfidf),
            level: Level::Ingredient,
            candidates: Vec::new(),
            excluded: Vec::new(),
            correct_rank: Some(rank),
            pool_size: pool,
        }
    }

    fn sample(ranks: &[usize], pools: &[usize]) -> Vec<Ranking> {
        ranks.iter().zip(pools).enumerate().map(|(i, (&r, &p))| ranking(&format!("t{i}"), r, p)).collect()
    }

    #[test]
    fn all_first_in_pools_of_hundred() {
        let s = rank_stats(&sample(&[1, 1, 1], &[100, 100, 100])).unwrap();
        assert_eq!(s.median_rank, 1);
        assert!((s.space_reduction - 0.99).abs() < 1e-12);
        assert_eq!(s.perfect_repair_rate, 1.0);
    }

    #[test]
    fn hand_computed_row() {
        let s = rank_stats(&sample(&[2, 4, 9], &[10, 10, 10])).unwrap();
        assert_eq!(s.median_rank, 4);
        assert_eq!(s.mean_rank, 5.0);
        assert_eq!(s.mean_pool_size, 10.0);
        assert!((s.space_reduction - 0.5).abs() < 1e-12);
        assert_eq!(s.perfect_repair_rate, 0.0);
        assert_eq!(s.normalized_ranks, [0.2, 0.4, 0.9]);
    }

    #[test]
    fn lower_median_for_even_counts() {
        assert_eq!(rank_stats(&sample(&[7, 1, 3, 5], &[10; 4])).unwrap().median_rank, 3);
    }

    #[test]
    fn ratio_of_means_and_mean_of_ratios_differ() {
        let s = rank_stats(&sample(&[1, 10], &[10, 100])).unwrap();
        assert!((s.space_reduction - (1.0 - 5.5 / 55.0)).abs() < 1e-12);
        assert!((s.mean_task_reduction - 0.9).abs() < 1e-12);
    }

    #[test]
    fn absent_rank_is_an_error() {
        let mut rs = sample(&[1, 2], &[5, 5]);
        rs[1].correct_rank = None;
        assert_eq!(rank_stats(&rs), Err(EvalError::AbsentRank("t1".into())));
        assert_eq!(rank_stats(&[]), Err(EvalError::NoRankings));
    }

    #[test]
    fn density_of_first_ranks() {
        let t = distribution_export(&sample(&[1, 1, 1], &[100, 100, 100]), 10).unwrap();
        assert_eq!(t.bins[0].count, 3);
        assert!(t.bins[1..].iter().all(|b| b.count == 0));
        assert!((t.bins[0].density - 10.0).abs() < 1e-12);
    }

    #[test]
    fn bin_edges_are_exact() {
        // 3/10 sits on the upper edge of the third bin
        let t = distribution_export(&sample(&[3, 10, 4], &[10, 10, 10]), 10).unwrap();
        let counts: Vec<usize> = t.bins.iter().map(|b| b.count).collect();
        assert_eq!(counts, [0, 0, 1, 1, 0, 0, 0, 0, 0, 1]);
    }

    #[test]
    fn density_errors() {
        assert_eq!(distribution_export(&[], 10), Err(EvalError::NoRankings));
        assert_eq!(distribution_export(&sample(&[1], &[2]), 1), Err(EvalError::TooFewBins(1)));
    }
}
