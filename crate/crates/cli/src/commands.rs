use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::Write as _;
use std::path::Path;

use simrepair_core::corpus::{build_index, CorpusIndex, IndexError, Role};
use simrepair_core::eval::{build_report, ReportOptions};
use simrepair_core::metrics::{train_embeddings, EmbeddingModel, MetricError, MetricKind, ModelContext};
use simrepair_core::ranking::{self, DirectScorer, Level, Ranker, Ranking};
use simrepair_core::tasks::{extract_tasks, parse_diff, sample_tasks, Extraction, RepairTask, TaskRecord};

use crate::cache::{CachedScorer, ScoreCache};
use crate::config::{CombinedPair, RunConfig};
use crate::error::CliError;
use crate::files::{self, check_overwrite, read_prerequisite, sha256_hex, write_output};
use crate::manifest;
use crate::tables;

fn index_error(e: IndexError) -> CliError {
    match e {
        IndexError::BadFilter { .. } => CliError::usage(e.to_string()),
        _ => CliError::data(e.to_string()),
    }
}

fn jsonl<T: serde::Serialize>(items: &[T]) -> Vec<u8> {
    let mut out = Vec::new();
    for item in items {
        serde_json::to_writer(&mut out, item).expect("record serializes");
        out.push(b'\n');
    }
    out
}

pub fn index(cfg: &RunConfig, force: bool) -> Result<(), CliError> {
    let root = cfg.require_corpus()?;
    let out = cfg.run_dir.join(files::INDEX);
    check_overwrite(&out, force, "index")?;
    let corpus = build_index(root, &cfg.filters).map_err(index_error)?;
    let mut bytes = Vec::new();
    corpus.write_jsonl(&mut bytes).map_err(|e| CliError::data(e.to_string()))?;
    write_output(&out, &bytes)?;
    manifest::record(cfg, &[files::INDEX])?;
    for d in corpus.diagnostics() {
        eprintln!("warning: skipped {}:{}: {}", d.file, d.line, d.message);
    }
    println!(
        "indexed {} files: {} methods, {} statements ({} files skipped)",
        corpus.files().len(),
        corpus.context_pool().len(),
        corpus.statement_pool().len(),
        corpus.diagnostics().len()
    );
    Ok(())
}

/// The index and the sha256 of its file.
fn load_index(cfg: &RunConfig) -> Result<(CorpusIndex, String), CliError> {
    let path = cfg.run_dir.join(files::INDEX);
    let bytes = read_prerequisite(&path, "index")?;
    let corpus = CorpusIndex::read_jsonl(&bytes[..]).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    Ok((corpus, sha256_hex(&bytes)))
}

fn metric_error(e: MetricError) -> CliError {
    match e {
        MetricError::BadConfig(_) => CliError::usage(e.to_string()),
        _ => CliError::data(e.to_string()),
    }
}

pub fn train(cfg: &RunConfig, force: bool) -> Result<(), CliError> {
    let (corpus, _) = load_index(cfg)?;
    let outputs = [files::STATEMENT_MODEL, files::METHOD_MODEL];
    for name in outputs {
        check_overwrite(&cfg.run_dir.join(name), force, "model")?;
    }
    let (stmt_cfg, method_cfg) = cfg.embedding_configs();
    let (statement, method) = train_embeddings(&corpus, &stmt_cfg, &method_cfg).map_err(metric_error)?;
    for (name, model) in outputs.into_iter().zip([&statement, &method]) {
        let mut bytes = Vec::new();
        model.write_json(&mut bytes).map_err(|e| CliError::data(e.to_string()))?;
        write_output(&cfg.run_dir.join(name), &bytes)?;
    }
    manifest::record(cfg, &outputs)?;
    for (level, model) in [("statement", &statement), ("method", &method)] {
        println!("{level} model: dimension {}, vocabulary {}", model.dimension(), model.vocabulary().len());
    }
    Ok(())
}

pub fn tasks(cfg: &RunConfig, force: bool) -> Result<(), CliError> {
    let dir = cfg.require_diffs()?;
    let (corpus, _) = load_index(cfg)?;
    let out = cfg.run_dir.join(files::TASKS);
    check_overwrite(&out, force, "task list")?;
    let project = cfg
        .project
        .clone()
        .or_else(|| cfg.corpus.as_deref().and_then(Path::file_name).map(|n| n.to_string_lossy().into_owned()))
        .unwrap_or_else(|| "project".into());

    let mut diffs: Vec<_> = fs::read_dir(dir)
        .map_err(|e| CliError::usage(format!("cannot read {}: {e}", dir.display())))?
        .filter_map(|e| e.ok().map(|e| e.path()))
        .filter(|p| p.is_file() && p.extension().is_some_and(|x| x == "diff" || x == "patch"))
        .collect();
    diffs.sort();
    if diffs.is_empty() {
        return Err(CliError::data(format!("no .diff or .patch files in {}", dir.display())));
    }

    let mut all = Extraction::default();
    let mut hunks_seen = 0;
    for path in &diffs {
        let text = fs::read_to_string(path).map_err(|e| CliError::data(format!("cannot read {}: {e}", path.display())))?;
        let hunks = parse_diff(&text).map_err(|e| CliError::data(format!("{}:{}: {}", path.display(), e.line, e.message)))?;
        hunks_seen += hunks.len();
        let commit = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
        let x = extract_tasks(&project, &commit, &hunks, &corpus);
        all.tasks.extend(x.tasks);
        all.rejections.extend(x.rejections);
    }
    let sampled = sample_tasks(&all.tasks, cfg.sample_limit, cfg.seed);
    let records: Vec<TaskRecord> = sampled.iter().map(|t| t.to_record(&corpus)).collect();
    write_output(&out, &jsonl(&records))?;
    write_output(&cfg.run_dir.join(files::REJECTIONS), &jsonl(&all.rejections))?;
    manifest::record(cfg, &[files::TASKS, files::REJECTIONS])?;

    println!(
        "{} hunks in {} diffs: {} tasks ({} sampled), {} rejected",
        hunks_seen,
        diffs.len(),
        all.tasks.len(),
        sampled.len(),
        all.rejections.len()
    );
    let mut reasons: BTreeMap<&str, usize> = BTreeMap::new();
    for r in &all.rejections {
        *reasons.entry(r.reason.code()).or_default() += 1;
    }
    for (code, n) in reasons {
        println!("  {code}: {n}");
    }
    Ok(())
}

fn load_tasks(cfg: &RunConfig, corpus: &CorpusIndex) -> Result<Vec<RepairTask>, CliError> {
    let path = cfg.run_dir.join(files::TASKS);
    let bytes = read_prerequisite(&path, "tasks")?;
    let text = String::from_utf8(bytes).map_err(|_| CliError::data(format!("{} is not UTF-8", path.display())))?;
    let mut tasks = Vec::new();
    for (i, line) in text.lines().enumerate().filter(|(_, l)| !l.trim().is_empty()) {
        let bad = |m: String| CliError::data(format!("{}:{}: {m}", path.display(), i + 1));
        let record: TaskRecord = serde_json::from_str(line).map_err(|e| bad(e.to_string()))?;
        tasks.push(RepairTask::from_record(&record, corpus).map_err(|e| bad(e.to_string()))?);
    }
    if tasks.is_empty() {
        return Err(CliError::data(format!("{} holds no tasks", path.display())));
    }
    Ok(tasks)
}

type Fingerprints = BTreeMap<(Role, MetricKind), String>;

/// Models for the requested metrics, plus the per-level model fingerprints
/// that key the score cache.
fn load_models(
    cfg: &RunConfig,
    corpus: &CorpusIndex,
    kinds: &BTreeSet<MetricKind>,
) -> Result<(ModelContext, Fingerprints), CliError> {
    let mut ctx = ModelContext { deckard: cfg.deckard, ..Default::default() };
    ctx.fit_tfidf(corpus).map_err(metric_error)?;
    let mut fingerprints = BTreeMap::new();
    let deckard = serde_json::to_value(cfg.deckard).ok().and_then(|v| v.as_str().map(str::to_string)).unwrap_or_default();
    for role in [Role::Statement, Role::Method] {
        fingerprints.insert((role, MetricKind::Lcs), "lcs".to_string());
        fingerprints.insert((role, MetricKind::Tfidf), "tfidf".to_string());
        fingerprints.insert((role, MetricKind::Deckard), format!("deckard-{deckard}"));
    }
    if kinds.contains(&MetricKind::Doc2vec) {
        for (role, name) in [(Role::Statement, files::STATEMENT_MODEL), (Role::Method, files::METHOD_MODEL)] {
            let path = cfg.run_dir.join(name);
            let bytes = read_prerequisite(&path, "train")?;
            let model = EmbeddingModel::read_json(&bytes[..]).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
            ctx.level_mut(role).embedding = Some(model);
            fingerprints.insert((role, MetricKind::Doc2vec), sha256_hex(&bytes));
        }
    }
    Ok((ctx, fingerprints))
}

fn open_cache(cfg: &RunConfig) -> Result<ScoreCache, CliError> {
    let dir = cfg.cache_dir();
    ScoreCache::open(&dir).map_err(|e| CliError::usage(format!("cannot use cache directory {}: {e}", dir.display())))
}

pub struct RankRequest {
    pub task: String,
    pub level: Level,
    pub metric: MetricKind,
    pub top: usize,
    pub out: Option<std::path::PathBuf>,
}

pub fn rank(cfg: &RunConfig, req: &RankRequest) -> Result<(), CliError> {
    let (corpus, index_hash) = load_index(cfg)?;
    let tasks = load_tasks(cfg, &corpus)?;
    let task = tasks
        .iter()
        .find(|t| t.id == req.task)
        .ok_or_else(|| CliError::usage(format!("no task `{}` in {}", req.task, cfg.run_dir.join(files::TASKS).display())))?;
    let pair = match req.level {
        Level::Combined => Some(cfg.combined.unwrap_or(CombinedPair { context: MetricKind::Tfidf, ingredient: MetricKind::Tfidf })),
        _ => None,
    };
    let kinds: BTreeSet<MetricKind> = match pair {
        Some(p) => [p.context, p.ingredient].into(),
        None => [req.metric].into(),
    };
    let (models, fingerprints) = load_models(cfg, &corpus, &kinds)?;
    let cache = open_cache(cfg)?;
    let scorer = CachedScorer::new(DirectScorer::new(&corpus, &models), &corpus, &cache, index_hash, fingerprints);
    let ranker = Ranker::new(&corpus, &scorer).with_tie_mode(cfg.tie_mode);
    let ranking = match (req.level, pair) {
        (Level::Context, _) => ranker.rank_contexts(task, req.metric),
        (_, Some(p)) => ranker.rank_combined(task, p.context, p.ingredient),
        _ => ranker.rank_ingredients(task, req.metric),
    }
    .map_err(|e| CliError::data(e.to_string()))?;

    print_ranking(&corpus, &ranking, req.top);
    if let Some(out) = &req.out {
        let mut bytes = Vec::new();
        ranking::write_csv(&mut bytes, [&ranking]).map_err(|e| CliError::data(e.to_string()))?;
        write_output(out, &bytes)?;
    }
    Ok(())
}

fn print_ranking(corpus: &CorpusIndex, ranking: &Ranking, top: usize) {
    let stdout = std::io::stdout();
    let mut out = stdout.lock();
    let _ = writeln!(out, "task {} {} ranking by {} ({} candidates)", ranking.task_id, level_label(ranking.level), ranking.metric, ranking.pool_size);
    for (i, c) in ranking.candidates.iter().take(top).enumerate() {
        let comp = corpus.component(c.id);
        let first_line = comp.raw_text.lines().next().unwrap_or("").trim();
        let marker = if ranking.correct_rank == Some(i + 1) { "*" } else { " " };
        let _ = writeln!(out, "{marker}{:>5}  {:>9.6}  {}:{}  {first_line}", i + 1, c.score, comp.file, comp.span.0);
    }
    match ranking.correct_rank {
        Some(k) => {
            let _ = writeln!(out, "correct rank: {k} of {} (normalized {:.4})", ranking.pool_size, k as f64 / ranking.pool_size as f64);
        }
        None => {
            let _ = writeln!(out, "correct rank: absent");
        }
    }
}

fn level_label(level: Level) -> &'static str {
    match level {
        Level::Ingredient => "ingredient",
        Level::Context => "context",
        Level::Combined => "combined",
    }
}

pub fn evaluate(cfg: &RunConfig, force: bool, export_rankings: bool) -> Result<(), CliError> {
    let (corpus, index_hash) = load_index(cfg)?;
    let tasks = load_tasks(cfg, &corpus)?;
    let report_path = cfg.run_dir.join(files::REPORT);
    check_overwrite(&report_path, force, "report")?;

    let mut kinds: BTreeSet<MetricKind> = cfg.metrics.iter().copied().collect();
    if let Some(p) = cfg.combined {
        kinds.extend([p.context, p.ingredient]);
    }
    let (models, fingerprints) = load_models(cfg, &corpus, &kinds)?;
    let cache = open_cache(cfg)?;
    let scorer = CachedScorer::new(DirectScorer::new(&corpus, &models), &corpus, &cache, index_hash, fingerprints);
    let options = ReportOptions {
        metrics: cfg.metrics.clone(),
        combined: cfg.combined.map(|p| (p.context, p.ingredient)),
        tie_mode: cfg.tie_mode,
        deckard_tasks: cfg.deckard_tasks.as_ref().map(|ids| ids.iter().cloned().collect()),
        bins: cfg.bins,
        keep_rankings: export_rankings,
    };
    let eval = build_report(&corpus, &tasks, &scorer, &options).map_err(|e| CliError::data(e.to_string()))?;

    let mut report = serde_json::to_vec_pretty(&eval.report).expect("report serializes");
    report.push(b'\n');
    let mut written = vec![
        (files::INGREDIENT_STATS, tables::stats_csv(&eval.report.ingredient)),
        (files::CONTEXT_STATS, tables::stats_csv(&eval.report.context)),
        (files::WILCOXON_INGREDIENT, tables::wilcoxon_csv(&eval.report.wilcoxon_ingredient)),
        (files::WILCOXON_CONTEXT, tables::wilcoxon_csv(&eval.report.wilcoxon_context)),
        (files::DENSITY, tables::density_csv(&eval.densities)),
        (files::NORMALIZED_RANKS, tables::normalized_ranks_csv(&eval.densities)),
    ];
    if export_rankings {
        let mut bytes = Vec::new();
        ranking::write_csv(&mut bytes, &eval.rankings).map_err(|e| CliError::data(e.to_string()))?;
        written.push((files::RANKINGS, bytes));
    }
    for (name, bytes) in &written {
        write_output(&cfg.run_dir.join(name), bytes)?;
    }
    // the report goes last so that its presence marks a finished run
    write_output(&report_path, &report)?;
    let mut names: Vec<&str> = written.iter().map(|(n, _)| *n).collect();
    names.push(files::REPORT);
    manifest::record(cfg, &names)?;

    eprintln!("score cache: {} hits, {} misses", cache.hits(), cache.misses());
    print!("{}", tables::summary(&eval.report));
    Ok(())
}

pub fn stats(cfg: &RunConfig) -> Result<(), CliError> {
    let path = cfg.run_dir.join(files::REPORT);
    let bytes = read_prerequisite(&path, "evaluate")?;
    let report = serde_json::from_slice(&bytes).map_err(|e| CliError::data(format!("{}: {e}", path.display())))?;
    print!("{}", tables::summary(&report));
    Ok(())
}
