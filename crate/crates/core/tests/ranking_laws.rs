use std::collections::BTreeSet;
use std::path::Path;
use std::sync::OnceLock;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use simrepair_core::corpus::{build_index, ContextRef, CorpusIndex};
use simrepair_core::metrics::{MetricKind, ModelContext};
use simrepair_core::ranking::{order_candidates, Candidate, DirectScorer, RankError, Ranker, ScoreProvider, TieMode};
use simrepair_core::tasks::{extract_tasks, parse_diff, RepairTask};

struct Fixture {
    corpus: CorpusIndex,
    tasks: Vec<RepairTask>,
    models: ModelContext,
}

fn fixture() -> &'static Fixture {
    static F: OnceLock<Fixture> = OnceLock::new();
    F.get_or_init(|| {
        let root = Path::new(env!("CARGO_MANIFEST_DIR")).join("../../fixtures/planted");
        let corpus = build_index(&root, &["**/*.java".to_string()]).unwrap();
        let mut tasks = Vec::new();
        let mut paths: Vec<_> = std::fs::read_dir(root.join("diffs")).unwrap().map(|e| e.unwrap().path()).collect();
        paths.sort();
        for p in paths {
            let hunks = parse_diff(&std::fs::read_to_string(&p).unwrap()).unwrap();
            tasks.extend(extract_tasks("planted", &p.file_stem().unwrap().to_string_lossy(), &hunks, &corpus).tasks);
        }
        let mut models = ModelContext::default();
        models.fit_tfidf(&corpus).unwrap();
        Fixture { corpus, tasks, models }
    })
}

/// Random scores drawn from a small set of values so ties are common.
struct RandomScores {
    seed: u64,
    levels: u32,
}

impl RandomScores {
    fn draw(&self, n: usize, salt: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(self.seed ^ salt);
        (0..n).map(|_| rng.gen_range(0..self.levels) as f64 / self.levels as f64).collect()
    }
}

impl ScoreProvider for RandomScores {
    fn ingredient_scores(&self, _: &RepairTask, _: MetricKind) -> Result<Vec<f64>, RankError> {
        Ok(self.draw(fixture().corpus.statement_pool().len(), 1))
    }
    fn context_scores(&self, _: &RepairTask, _: MetricKind) -> Result<Vec<f64>, RankError> {
        Ok(self.draw(fixture().corpus.context_pool().len(), 2))
    }
}

/// Another provider with every score multiplied by a positive constant.
struct Scaled<'a, P> {
    inner: &'a P,
    factor: f64,
}

impl<P: ScoreProvider> ScoreProvider for Scaled<'_, P> {
    fn ingredient_scores(&self, t: &RepairTask, k: MetricKind) -> Result<Vec<f64>, RankError> {
        Ok(self.inner.ingredient_scores(t, k)?.into_iter().map(|s| s * self.factor).collect())
    }
    fn context_scores(&self, t: &RepairTask, k: MetricKind) -> Result<Vec<f64>, RankError> {
        Ok(self.inner.context_scores(t, k)?.into_iter().map(|s| s * self.factor).collect())
    }
}

fn ids(c: &[Candidate]) -> Vec<u32> {
    c.iter().map(|c| c.id.0).collect()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn rankings_are_sorted_permutations(seed in any::<u64>(), levels in 1u32..20, task in 0usize..10, pessimistic in any::<bool>()) {
        let f = fixture();
        let t = &f.tasks[task];
        let scores = RandomScores { seed, levels };
        let mode = if pessimistic { TieMode::Pessimistic } else { TieMode::Positional };
        let ranker = Ranker::new(&f.corpus, &scores).with_tie_mode(mode);

        let r = ranker.rank_ingredients(t, MetricKind::Tfidf).unwrap();
        let mut seen: Vec<u32> = ids(&r.candidates);
        seen.extend(r.excluded.iter().map(|(id, _)| id.0));
        seen.sort_unstable();
        let pool: Vec<u32> = f.corpus.statement_pool().iter().map(|id| id.0).collect();
        prop_assert_eq!(seen, pool);
        prop_assert_eq!(r.pool_size, r.candidates.len());
        prop_assert!(r.candidates.windows(2).all(|w| w[0].score >= w[1].score));
        let mp = t.modification_point(&f.corpus);
        prop_assert!(r.candidates.iter().all(|c| !f.corpus.component(c.id).equivalent(mp)));
        let first = r.candidates.iter().position(|c| f.corpus.component(c.id).equivalent(&t.correct_ingredient)).unwrap();
        match mode {
            TieMode::Positional => prop_assert_eq!(r.correct_rank, Some(first + 1)),
            TieMode::Pessimistic => prop_assert!(r.correct_rank.unwrap() > first),
        }

        let c = ranker.rank_contexts(t, MetricKind::Tfidf).unwrap();
        let mut seen: Vec<u32> = ids(&c.candidates);
        seen.extend(c.excluded.iter().map(|(id, _)| id.0));
        seen.sort_unstable();
        let pool: Vec<u32> = f.corpus.context_pool().iter().map(|id| id.0).collect();
        prop_assert_eq!(seen, pool);
        prop_assert!(c.candidates.windows(2).all(|w| w[0].score >= w[1].score));

        prop_assert_eq!(&r, &ranker.rank_ingredients(t, MetricKind::Tfidf).unwrap());
    }

    #[test]
    fn combined_length_is_sum_of_donor_members(seed in any::<u64>(), levels in 1u32..20, task in 0usize..10) {
        let f = fixture();
        let t = &f.tasks[task];
        let scores = RandomScores { seed, levels };
        let ranker = Ranker::new(&f.corpus, &scores);
        let donors = ranker.rank_contexts(t, MetricKind::Tfidf).unwrap();
        let combined = ranker.rank_combined(t, MetricKind::Tfidf, MetricKind::Tfidf).unwrap();
        let mp = t.modification_point(&f.corpus);
        let expected: usize = donors
            .candidates
            .iter()
            .map(|d| f.corpus.members_of(d.id).iter().filter(|&&s| !f.corpus.component(s).equivalent(mp)).count())
            .sum();
        prop_assert_eq!(combined.candidates.len(), expected);
        // donors appear as contiguous blocks in donor order
        let mut order: Vec<u32> = combined.candidates.iter().map(|c| c.donor.unwrap().0).collect();
        order.dedup();
        let donor_order: Vec<u32> = donors.candidates.iter().map(|d| d.id.0).filter(|d| order.contains(d)).collect();
        prop_assert_eq!(order, donor_order);
        for c in &combined.candidates {
            prop_assert_eq!(f.corpus.context_of(c.id), Some(ContextRef::Method(c.donor.unwrap())));
        }
    }

    #[test]
    fn positive_scaling_keeps_the_order(task in 0usize..10, factor in 0.001f64..1000.0) {
        let f = fixture();
        let t = &f.tasks[task];
        let direct = DirectScorer::new(&f.corpus, &f.models);
        let scaled = Scaled { inner: &direct, factor };
        for kind in [MetricKind::Tfidf, MetricKind::Lcs, MetricKind::Deckard] {
            let a = Ranker::new(&f.corpus, &direct).rank_ingredients(t, kind).unwrap();
            let b = Ranker::new(&f.corpus, &scaled).rank_ingredients(t, kind).unwrap();
            prop_assert_eq!(ids(&a.candidates), ids(&b.candidates));
            prop_assert_eq!(a.correct_rank, b.correct_rank);
        }
    }

    #[test]
    fn ordering_is_independent_of_input_order(seed in any::<u64>(), levels in 1u32..6) {
        let f = fixture();
        let scores = RandomScores { seed, levels }.draw(f.corpus.statement_pool().len(), 3);
        let mut a: Vec<Candidate> = f.corpus.statement_pool().iter().zip(&scores).map(|(&id, &score)| Candidate { id, score, donor: None }).collect();
        let mut b = a.clone();
        b.reverse();
        order_candidates(&f.corpus, &mut a);
        order_candidates(&f.corpus, &mut b);
        prop_assert_eq!(ids(&a), ids(&b));
    }
}

#[test]
fn duplicated_modification_point_is_excluded() {
    let f = fixture();
    let t = f.tasks.iter().find(|t| t.modification_point(&f.corpus).raw_text.starts_with("total = computeTotal")).unwrap();
    let scorer = DirectScorer::new(&f.corpus, &f.models);
    let r = Ranker::new(&f.corpus, &scorer).rank_ingredients(t, MetricKind::Tfidf).unwrap();
    let files: BTreeSet<&str> = r.excluded.iter().map(|(id, _)| f.corpus.component(*id).file.as_str()).collect();
    assert_eq!(r.excluded.len(), 2);
    assert!(files.contains("src/shop/Pricing.java"));
    assert_eq!(r.correct_rank, Some(1));
}
