//! Repair tasks mined from one-statement replacement diffs.

mod diff;

use std::collections::BTreeMap;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::corpus::{tokens_equivalent, ComponentId, ContextRef, CorpusIndex, Role, SourceComponent, Token};

pub use diff::{parse_diff, DiffError, DiffHunk, DiffLine};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum RejectReason {
    NotOneStatementReplacement,
    FileNotInCorpus,
    NotAStatement,
    NoRecipientContext,
    IngredientEqualsModificationPoint,
    IngredientInRecipientContext,
    IngredientNotInApplication,
}

impl RejectReason {
    pub fn code(self) -> &'static str {
        match self {
            RejectReason::NotOneStatementReplacement => "not-one-statement-replacement",
            RejectReason::FileNotInCorpus => "file-not-in-corpus",
            RejectReason::NotAStatement => "not-a-statement",
            RejectReason::NoRecipientContext => "no-recipient-context",
            RejectReason::IngredientEqualsModificationPoint => "ingredient-equals-modification-point",
            RejectReason::IngredientInRecipientContext => "ingredient-in-recipient-context",
            RejectReason::IngredientNotInApplication => "ingredient-not-in-application",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    pub commit: String,
    pub hunk: usize,
    pub file: String,
    /// First removed line, or the hunk start when nothing was removed.
    pub line: u32,
    pub reason: RejectReason,
}

#[derive(Debug, Clone, PartialEq)]
pub struct RepairTask {
    pub id: String,
    pub project: String,
    pub commit: String,
    pub modification_point: ComponentId,
    pub recipient_context: ComponentId,
    /// The inserted statement; not part of the index.
    pub correct_ingredient: SourceComponent,
}

/// Serialized form of a task.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TaskRecord {
    pub id: String,
    pub project: String,
    pub commit: String,
    pub file: String,
    pub line: u32,
    pub removed: String,
    pub added: String,
    pub added_line: u32,
}

#[derive(Debug, Error)]
pub enum TaskError {
    #[error("task {id}: {reason}")]
    Invalid { id: String, reason: &'static str },
}

#[derive(Debug, Clone, Default, PartialEq)]
pub struct Extraction {
    pub tasks: Vec<RepairTask>,
    pub rejections: Vec<Rejection>,
}

impl RepairTask {
    pub fn modification_point<'a>(&self, corpus: &'a CorpusIndex) -> &'a SourceComponent {
        corpus.component(self.modification_point)
    }

    pub fn recipient_context<'a>(&self, corpus: &'a CorpusIndex) -> &'a SourceComponent {
        corpus.component(self.recipient_context)
    }

    pub fn to_record(&self, corpus: &CorpusIndex) -> TaskRecord {
        let mp = self.modification_point(corpus);
        TaskRecord {
            id: self.id.clone(),
            project: self.project.clone(),
            commit: self.commit.clone(),
            file: mp.file.clone(),
            line: mp.span.0,
            removed: mp.raw_text.clone(),
            added: self.correct_ingredient.raw_text.clone(),
            added_line: self.correct_ingredient.span.0,
        }
    }

    /// Rebuild a task against `corpus`, re-checking every task invariant.
    pub fn from_record(record: &TaskRecord, corpus: &CorpusIndex) -> Result<RepairTask, TaskError> {
        let invalid = |reason| TaskError::Invalid { id: record.id.clone(), reason };
        let frontend = corpus.frontend();
        let removed = frontend.lex(&record.removed).map_err(|_| invalid("removed text does not lex"))?;
        let mp = find_statement(corpus, &record.file, record.line, &removed).ok_or_else(|| invalid("modification point not in corpus"))?;
        let ingredient = SourceComponent::detached(frontend, Role::Statement, &record.file, record.added_line, &record.added)
            .map_err(|_| invalid("added text does not lex"))?;
        let Some(ContextRef::Method(recipient)) = corpus.context_of(mp.id) else {
            return Err(invalid("modification point has no enclosing method"));
        };
        if let Some(reason) = check_filters(corpus, mp, recipient, &ingredient) {
            return Err(invalid(reason.code()));
        }
        Ok(RepairTask {
            id: record.id.clone(),
            project: record.project.clone(),
            commit: record.commit.clone(),
            modification_point: mp.id,
            recipient_context: recipient,
            correct_ingredient: ingredient,
        })
    }
}

/// The single-line statement at `file:line` whose tokens equal `tokens`.
fn find_statement<'a>(corpus: &'a CorpusIndex, file: &str, line: u32, tokens: &[Token]) -> Option<&'a SourceComponent> {
    corpus.covering(file, line, Role::Statement).find(|c| c.span == (line, line) && tokens_equivalent(&c.tokens, tokens))
}

/// Inclusion filters, checked as: ingredient differs from the modification
/// point, is absent from the recipient context, and exists elsewhere.
fn check_filters(corpus: &CorpusIndex, mp: &SourceComponent, recipient: ComponentId, ingredient: &SourceComponent) -> Option<RejectReason> {
    if mp.equivalent(ingredient) {
        return Some(RejectReason::IngredientEqualsModificationPoint);
    }
    if corpus.members_of(recipient).iter().any(|&s| corpus.component(s).equivalent(ingredient)) {
        return Some(RejectReason::IngredientInRecipientContext);
    }
    let elsewhere = corpus.statement_pool().iter().any(|&s| {
        corpus.context_of(s) != Some(ContextRef::Method(recipient)) && corpus.component(s).equivalent(ingredient)
    });
    (!elsewhere).then_some(RejectReason::IngredientNotInApplication)
}

fn statement_text(line: &str, tokens: &[Token]) -> String {
    match (tokens.first(), tokens.last()) {
        (Some(first), Some(last)) => line[first.span.0..last.span.1].to_string(),
        _ => String::new(),
    }
}

/// Turn the hunks of one commit into repair tasks. Every hunk ends up either
/// as a task or as a rejection.
pub fn extract_tasks(project: &str, commit: &str, hunks: &[DiffHunk], corpus: &CorpusIndex) -> Extraction {
    let frontend = corpus.frontend();
    let mut out = Extraction::default();
    for (n, hunk) in hunks.iter().enumerate() {
        let line = hunk.removed.first().map_or(hunk.old_start, |l| l.line);
        let reject = |reason| Rejection { commit: commit.to_string(), hunk: n, file: hunk.file.clone(), line, reason };
        let result = (|| {
            let ([removed], [added]) = (hunk.removed.as_slice(), hunk.added.as_slice()) else {
                return Err(RejectReason::NotOneStatementReplacement);
            };
            if !corpus.files().contains(&hunk.file) {
                return Err(RejectReason::FileNotInCorpus);
            }
            let removed_tokens = frontend.line_statement(&removed.text).ok_or(RejectReason::NotAStatement)?;
            let mp = find_statement(corpus, &hunk.file, removed.line, &removed_tokens).ok_or(RejectReason::NotAStatement)?;
            let added_tokens = frontend.line_statement(&added.text).ok_or(RejectReason::NotAStatement)?;
            let text = statement_text(&added.text, &added_tokens);
            let ingredient = SourceComponent::detached(frontend, Role::Statement, &hunk.file, added.line, &text)
                .map_err(|_| RejectReason::NotAStatement)?;
            let Some(ContextRef::Method(recipient)) = corpus.context_of(mp.id) else {
                return Err(RejectReason::NoRecipientContext);
            };
            if let Some(reason) = check_filters(corpus, mp, recipient, &ingredient) {
                return Err(reason);
            }
            Ok(RepairTask {
                id: format!("{commit}-{n}"),
                project: project.to_string(),
                commit: commit.to_string(),
                modification_point: mp.id,
                recipient_context: recipient,
                correct_ingredient: ingredient,
            })
        })();
        match result {
            Ok(task) => out.tasks.push(task),
            Err(reason) => out.rejections.push(reject(reason)),
        }
    }
    out
}

/// At most `limit` tasks per project, chosen with a generator seeded from
/// `seed` and the project name. Input order is kept.
pub fn sample_tasks(tasks: &[RepairTask], limit: usize, seed: u64) -> Vec<RepairTask> {
    let mut by_project: BTreeMap<&str, Vec<usize>> = BTreeMap::new();
    for (i, t) in tasks.iter().enumerate() {
        by_project.entry(t.project.as_str()).or_default().push(i);
    }
    let mut keep = Vec::new();
    for (project, members) in by_project {
        if members.len() <= limit {
            keep.extend(members);
            continue;
        }
        let mut rng = ChaCha8Rng::seed_from_u64(seed ^ crate::fnv1a([project]));
        let mut picked = rand::seq::index::sample(&mut rng, members.len(), limit).into_vec();
        picked.sort_unstable();
        keep.extend(picked.into_iter().map(|k| members[k]));
    }
    keep.sort_unstable();
    keep.into_iter().map(|i| tasks[i].clone()).collect()
}
