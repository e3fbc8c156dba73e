//! CSV tables and the plain-text summary of a report.

use std::fmt::Write as _;

use simrepair_core::eval::{DensityTable, EvalReport, PairOutcome, RankStats, WilcoxonMatrix};

fn csv_bytes(header: &[&str], rows: impl IntoIterator<Item = Vec<String>>) -> Vec<u8> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(header).expect("in-memory write");
    for row in rows {
        w.write_record(&row).expect("in-memory write");
    }
    w.into_inner().expect("in-memory flush")
}

pub fn stats_csv(stats: &[RankStats]) -> Vec<u8> {
    csv_bytes(
        &["metric", "tasks", "median_rank", "mean_rank", "mean_pool_size", "space_reduction", "mean_task_reduction", "perfect_repair_rate"],
        stats.iter().map(|s| {
            vec![
                s.metric.clone(),
                s.tasks.to_string(),
                s.median_rank.to_string(),
                s.mean_rank.to_string(),
                s.mean_pool_size.to_string(),
                s.space_reduction.to_string(),
                s.mean_task_reduction.to_string(),
                s.perfect_repair_rate.to_string(),
            ]
        }),
    )
}

/// One row per unordered pair.
pub fn wilcoxon_csv(matrix: &WilcoxonMatrix) -> Vec<u8> {
    let mut rows = Vec::new();
    for (i, a) in matrix.labels.iter().enumerate() {
        for (j, b) in matrix.labels.iter().enumerate().skip(i + 1) {
            let row = match &matrix.cells[i][j] {
                Some(PairOutcome::Tested(r)) => {
                    vec![a.clone(), b.clone(), r.pairs.to_string(), r.n.to_string(), r.t.to_string(), r.p.to_string(), r.reject.to_string(), r.exact.to_string(), String::new()]
                }
                Some(PairOutcome::Untested { pairs, error }) => {
                    vec![a.clone(), b.clone(), pairs.to_string(), String::new(), String::new(), String::new(), String::new(), String::new(), error.clone()]
                }
                None => continue,
            };
            rows.push(row);
        }
    }
    csv_bytes(&["metric_a", "metric_b", "pairs", "n", "t", "p", "reject", "exact", "error"], rows)
}

fn level_name(t: &DensityTable) -> String {
    serde_json::to_value(t.level).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default()
}

pub fn density_csv(tables: &[DensityTable]) -> Vec<u8> {
    csv_bytes(
        &["metric", "level", "lower", "upper", "count", "density"],
        tables.iter().flat_map(|t| {
            let level = level_name(t);
            t.bins.iter().map(move |b| {
                vec![t.metric.clone(), level.clone(), b.lower.to_string(), b.upper.to_string(), b.count.to_string(), b.density.to_string()]
            })
        }),
    )
}

pub fn normalized_ranks_csv(tables: &[DensityTable]) -> Vec<u8> {
    csv_bytes(
        &["metric", "level", "normalized_rank"],
        tables.iter().flat_map(|t| {
            let level = level_name(t);
            t.normalized_ranks.iter().map(move |v| vec![t.metric.clone(), level.clone(), v.to_string()])
        }),
    )
}

fn stats_block(out: &mut String, title: &str, stats: &[RankStats]) {
    let _ = writeln!(out, "{title}");
    let _ = writeln!(out, "  {:<24} {:>6} {:>8} {:>10} {:>10} {:>9}", "metric", "tasks", "median", "mean", "reduction", "perfect");
    for s in stats {
        let _ = writeln!(
            out,
            "  {:<24} {:>6} {:>8} {:>10.2} {:>9.2}% {:>8.1}%",
            s.metric,
            s.tasks,
            s.median_rank,
            s.mean_rank,
            100.0 * s.space_reduction,
            100.0 * s.perfect_repair_rate
        );
    }
}

fn format_p(p: f64) -> String {
    if p >= 1e-3 { format!("{p:.4}") } else { format!("{p:.2e}") }
}

fn wilcoxon_block(out: &mut String, title: &str, matrix: &WilcoxonMatrix) {
    let _ = writeln!(out, "{title}");
    for (i, a) in matrix.labels.iter().enumerate() {
        for (j, b) in matrix.labels.iter().enumerate().skip(i + 1) {
            let pair = format!("{a} vs {b}");
            match &matrix.cells[i][j] {
                Some(PairOutcome::Tested(r)) => {
                    let verdict = if r.reject { "differ" } else { "-" };
                    let method = if r.exact { "exact" } else { "normal" };
                    let _ = writeln!(out, "  {pair:<40} n={:<4} T={:<8} p={:<10} ({method}, {} non-zero) {verdict}", r.pairs, r.t, format_p(r.p), r.n);
                }
                Some(PairOutcome::Untested { pairs, error }) => {
                    let _ = writeln!(out, "  {pair:<40} n={pairs:<4} untested: {error}");
                }
                None => {}
            }
        }
    }
}

pub fn summary(report: &EvalReport) -> String {
    let mut out = String::new();
    let tasks = report.tasks.len();
    stats_block(&mut out, &format!("Ingredient ranking ({tasks} tasks)"), &report.ingredient);
    stats_block(&mut out, &format!("Context ranking ({tasks} tasks)"), &report.context);
    if !report.excluded.is_empty() {
        let _ = writeln!(out, "Excluded: {} task/metric pairs without a correct rank", report.excluded.len());
    }
    let alpha = report.metadata.alpha;
    wilcoxon_block(&mut out, &format!("Wilcoxon signed-rank, ingredient level (alpha {alpha})"), &report.wilcoxon_ingredient);
    wilcoxon_block(&mut out, &format!("Wilcoxon signed-rank, context level (alpha {alpha})"), &report.wilcoxon_context);
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use simrepair_core::eval::WilcoxonResult;

    #[test]
    fn wilcoxon_rows_cover_each_pair_once() {
        let tested = PairOutcome::Tested(WilcoxonResult { pairs: 9, n: 8, t: 3.0, p: 0.0234375, reject: false, exact: true });
        let untested = PairOutcome::Untested { pairs: 2, error: "too few".into() };
        let m = WilcoxonMatrix {
            labels: vec!["A".into(), "B".into(), "C".into()],
            cells: vec![
                vec![None, Some(tested.clone()), Some(untested.clone())],
                vec![Some(tested), None, None],
                vec![Some(untested), None, None],
            ],
        };
        let text = String::from_utf8(wilcoxon_csv(&m)).unwrap();
        let lines: Vec<_> = text.lines().collect();
        assert_eq!(lines.len(), 3);
        assert_eq!(lines[1], "A,B,9,8,3,0.0234375,false,true,");
        assert_eq!(lines[2], "A,C,2,,,,,,too few");
    }
}
