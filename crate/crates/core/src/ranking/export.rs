use std::io::Write;

use serde::Serialize;

use super::Ranking;
use crate::corpus::ComponentId;

/// One ranked candidate in plotting-friendly form.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RankingRow {
    pub task_id: String,
    pub metric: String,
    pub level: String,
    pub rank: usize,
    pub component_id: ComponentId,
    pub score: f64,
    pub normalized_rank: f64,
}

pub fn export_rows(ranking: &Ranking) -> Vec<RankingRow> {
    let level = serde_json::to_value(ranking.level).ok().and_then(|v| v.as_str().map(String::from)).unwrap_or_default();
    ranking
        .candidates
        .iter()
        .enumerate()
        .map(|(i, c)| RankingRow {
            task_id: ranking.task_id.clone(),
            metric: ranking.metric.to_string(),
            level: level.clone(),
            rank: i + 1,
            component_id: c.id,
            score: c.score,
            normalized_rank: (i + 1) as f64 / ranking.pool_size as f64,
        })
        .collect()
}

pub fn write_csv<'a, W: Write>(out: W, rankings: impl IntoIterator<Item = &'a Ranking>) -> csv::Result<()> {
    let mut w = csv::Writer::from_writer(out);
    for r in rankings {
        for row in export_rows(r) {
            w.serialize(row)?;
        }
    }
    w.flush()?;
    Ok(())
}
