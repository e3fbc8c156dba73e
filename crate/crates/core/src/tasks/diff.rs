//! Unified-diff parsing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("line {line}: {message}")]
pub struct DiffError {
    pub line: usize,
    pub message: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffLine {
    /// Line number in the old file for removed lines, new file for added ones.
    pub line: u32,
    pub text: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiffHunk {
    /// Path of the file before the change (after it, for created files).
    pub file: String,
    pub old_start: u32,
    pub new_start: u32,
    pub removed: Vec<DiffLine>,
    pub added: Vec<DiffLine>,
}

fn strip_path(raw: &str) -> Option<String> {
    let path = raw.split('\t').next().unwrap_or("").trim_end();
    if path == "/dev/null" || path.is_empty() {
        return None;
    }
    let path = path.strip_prefix("a/").or_else(|| path.strip_prefix("b/")).unwrap_or(path);
    Some(path.to_string())
}

/// `-12,3` or `+7` into (start, count).
fn parse_range(s: &str, sign: char) -> Option<(u32, u32)> {
    let s = s.strip_prefix(sign)?;
    match s.split_once(',') {
        Some((a, b)) => Some((a.parse().ok()?, b.parse().ok()?)),
        None => Some((s.parse().ok()?, 1)),
    }
}

fn parse_header(line: &str) -> Option<(u32, u32, u32, u32)> {
    let rest = line.strip_prefix("@@ ")?;
    let end = rest.find(" @@")?;
    let mut parts = rest[..end].split(' ');
    let (os, oc) = parse_range(parts.next()?, '-')?;
    let (ns, nc) = parse_range(parts.next()?, '+')?;
    parts.next().is_none().then_some((os, oc, ns, nc))
}

/// Parse every hunk of a unified diff. Context lines are dropped.
pub fn parse_diff(text: &str) -> Result<Vec<DiffHunk>, DiffError> {
    let lines: Vec<&str> = text.lines().collect();
    let mut hunks = Vec::new();
    let (mut old_path, mut new_path): (Option<String>, Option<String>) = (None, None);
    let mut i = 0;
    while i < lines.len() {
        let line = lines[i];
        let err = |message: &str| DiffError { line: i + 1, message: message.to_string() };
        if let Some(rest) = line.strip_prefix("--- ") {
            old_path = strip_path(rest);
            new_path = None;
        } else if let Some(rest) = line.strip_prefix("+++ ") {
            new_path = strip_path(rest);
        } else if line.starts_with("@@") {
            let (old_start, mut old_left, new_start, mut new_left) = parse_header(line).ok_or_else(|| err("malformed hunk header"))?;
            let file = old_path.clone().or_else(|| new_path.clone()).ok_or_else(|| err("hunk without file header"))?;
            let mut hunk = DiffHunk { file, old_start, new_start, removed: Vec::new(), added: Vec::new() };
            let (mut old_line, mut new_line) = (old_start, new_start);
            i += 1;
            while old_left > 0 || new_left > 0 {
                let Some(&body) = lines.get(i) else {
                    return Err(DiffError { line: i, message: "hunk ends early".into() });
                };
                let bad = || DiffError { line: i + 1, message: "line does not fit the hunk header counts".into() };
                match body.chars().next() {
                    Some('-') if old_left > 0 => {
                        hunk.removed.push(DiffLine { line: old_line, text: body[1..].to_string() });
                        old_line += 1;
                        old_left -= 1;
                    }
                    Some('+') if new_left > 0 => {
                        hunk.added.push(DiffLine { line: new_line, text: body[1..].to_string() });
                        new_line += 1;
                        new_left -= 1;
                    }
                    // an empty line is a context line whose leading space was stripped
                    Some(' ') | None if old_left > 0 && new_left > 0 => {
                        old_line += 1;
                        new_line += 1;
                        old_left -= 1;
                        new_left -= 1;
                    }
                    Some('\\') => {}
                    _ => return Err(bad()),
                }
                i += 1;
            }
            hunks.push(hunk);
            continue;
        }
        i += 1;
    }
    Ok(hunks)
}
