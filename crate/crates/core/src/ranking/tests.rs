use std::collections::HashMap;

use super::*;
use crate::corpus::JavaLike;
use crate::metrics::ModelContext;
use crate::tasks::{extract_tasks, DiffHunk, DiffLine};

const SRC: &str = "\
class R {
    void recipient() {
        total = compute(a, b);
        log(total);
    }
    void donorOne() {
        total = compute(a, b);
        total = computeAll(a, b);
    }
    void donorTwo() {
        x = 1;
        total = computeAll(a, b);
    }
}
";

const COPY: &str = "\
class S {
    void recipient() {
        total = compute(a, b);
        log(total);
    }
}
";

fn corpus() -> CorpusIndex {
    CorpusIndex::from_sources(&JavaLike, vec![("R.java".into(), SRC.into()), ("S.java".into(), COPY.into())]).unwrap()
}

fn task(corpus: &CorpusIndex) -> RepairTask {
    let hunk = DiffHunk {
        file: "R.java".into(),
        old_start: 3,
        new_start: 3,
        removed: vec![DiffLine { line: 3, text: "        total = compute(a, b);".into() }],
        added: vec![DiffLine { line: 3, text: "        total = computeAll(a, b);".into() }],
    };
    let mut x = extract_tasks("p", "c", &[hunk], corpus);
    assert_eq!(x.rejections, []);
    x.tasks.remove(0)
}

/// Scores fixed per component, keyed by `file:line`.
struct Fixed<'a> {
    corpus: &'a CorpusIndex,
    by_line: HashMap<&'static str, f64>,
}

fn key(c: &crate::corpus::SourceComponent) -> String {
    format!("{}:{}", &c.file[..1], c.span.0)
}

impl Fixed<'_> {
    fn lookup(&self, ids: &[ComponentId]) -> Vec<f64> {
        ids.iter().map(|&id| self.by_line.get(key(self.corpus.component(id)).as_str()).copied().unwrap_or(0.0)).collect()
    }
}

impl ScoreProvider for Fixed<'_> {
    fn ingredient_scores(&self, _: &RepairTask, _: MetricKind) -> Result<Vec<f64>, RankError> {
        Ok(self.lookup(self.corpus.statement_pool()))
    }
    fn context_scores(&self, _: &RepairTask, _: MetricKind) -> Result<Vec<f64>, RankError> {
        Ok(self.lookup(self.corpus.context_pool()))
    }
}

fn lines(corpus: &CorpusIndex, r: &Ranking) -> Vec<String> {
    r.candidates.iter().map(|c| key(corpus.component(c.id))).collect()
}

fn excluded(corpus: &CorpusIndex, r: &Ranking) -> Vec<String> {
    r.excluded.iter().map(|(id, _)| key(corpus.component(*id))).collect()
}

#[test]
fn ingredients_exclude_copies_of_the_modification_point() {
    let idx = corpus();
    let t = task(&idx);
    let scores = Fixed { corpus: &idx, by_line: HashMap::from([("R:4", 0.9), ("R:8", 0.5), ("R:11", 0.7), ("R:12", 0.5)]) };
    let r = Ranker::new(&idx, &scores).rank_ingredients(&t, MetricKind::Tfidf).unwrap();
    assert_eq!(excluded(&idx, &r), ["R:3", "R:7", "S:3"]);
    assert!(r.excluded.iter().all(|(_, why)| *why == ExclusionReason::EquivalentToModificationPoint));
    assert_eq!(lines(&idx, &r), ["R:4", "R:11", "R:8", "R:12", "S:4"]);
    assert_eq!(r.pool_size, 5);
    assert_eq!(r.correct_rank, Some(3));
    assert_eq!(r.normalized_rank(), Some(0.6));

    let pessimistic = Ranker::new(&idx, &scores).with_tie_mode(TieMode::Pessimistic).rank_ingredients(&t, MetricKind::Tfidf).unwrap();
    assert_eq!(pessimistic.correct_rank, Some(4));
}

#[test]
fn contexts_exclude_recipient_and_its_copies() {
    let idx = corpus();
    let t = task(&idx);
    let scores = Fixed { corpus: &idx, by_line: HashMap::from([("R:6", 0.2), ("R:10", 0.4), ("S:2", 1.0)]) };
    let r = Ranker::new(&idx, &scores).rank_contexts(&t, MetricKind::Lcs).unwrap();
    assert_eq!(excluded(&idx, &r), ["R:2", "S:2"]);
    assert_eq!(lines(&idx, &r), ["R:10", "R:6"]);
    // both donors contain the ingredient; the better ranked one counts
    assert_eq!(r.correct_rank, Some(1));
}

#[test]
fn combined_flattens_donor_by_donor() {
    let idx = corpus();
    let t = task(&idx);
    let scores = Fixed { corpus: &idx, by_line: HashMap::from([("R:6", 0.9), ("R:10", 0.1), ("R:8", 0.2), ("R:11", 0.8), ("R:12", 0.3)]) };
    let r = Ranker::new(&idx, &scores).rank_combined(&t, MetricKind::Tfidf, MetricKind::Tfidf).unwrap();
    // donorOne (line 6) first; its copy of the modification point is excluded
    assert_eq!(lines(&idx, &r), ["R:8", "R:11", "R:12"]);
    assert_eq!(r.candidates.iter().map(|c| key(idx.component(c.donor.unwrap()))).collect::<Vec<_>>(), ["R:6", "R:10", "R:10"]);
    assert_eq!(r.correct_rank, Some(1));
    assert_eq!(r.metric.to_string(), "COMBINED(TFIDF,TFIDF)");
}

#[test]
fn direct_scorer_ranks_near_copy_first() {
    let idx = corpus();
    let t = task(&idx);
    let mut models = ModelContext::default();
    models.fit_tfidf(&idx).unwrap();
    let scorer = DirectScorer::new(&idx, &models);
    let ranker = Ranker::new(&idx, &scorer);
    for kind in [MetricKind::Tfidf, MetricKind::Lcs] {
        let r = ranker.rank_ingredients(&t, kind).unwrap();
        assert_eq!(r.correct_rank, Some(1), "{kind}");
        assert!(r.candidates.windows(2).all(|w| w[0].score >= w[1].score));
    }
    let again = ranker.rank_ingredients(&t, MetricKind::Tfidf).unwrap();
    assert_eq!(again, ranker.rank_ingredients(&t, MetricKind::Tfidf).unwrap());
}

#[test]
fn export_has_one_row_per_candidate() {
    let idx = corpus();
    let t = task(&idx);
    let mut models = ModelContext::default();
    models.fit_tfidf(&idx).unwrap();
    let scorer = DirectScorer::new(&idx, &models);
    let r = Ranker::new(&idx, &scorer).rank_ingredients(&t, MetricKind::Tfidf).unwrap();
    let mut buf = Vec::new();
    write_csv(&mut buf, [&r]).unwrap();
    let text = String::from_utf8(buf).unwrap();
    let mut rows = text.lines();
    assert_eq!(rows.next(), Some("task_id,metric,level,rank,component_id,score,normalized_rank"));
    assert_eq!(rows.count(), r.pool_size);
}
