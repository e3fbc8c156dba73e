use std::collections::BTreeMap;
use std::fs;
use std::io::{self, BufRead, Write};
use std::path::{Path, PathBuf};

use globset::{Glob, GlobSet, GlobSetBuilder};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};
use thiserror::Error;
use walkdir::WalkDir;

use super::{frontend_by_name, ComponentId, Frontend, JavaLike, RawComponent, Role, SourceComponent};

pub const INDEX_FORMAT_VERSION: u32 = 1;
const INDEX_FORMAT_NAME: &str = "simrepair-index";

#[derive(Debug, Error)]
pub enum IndexError {
    #[error("empty corpus")]
    EmptyCorpus,
    #[error("invalid file filter `{pattern}`: {message}")]
    BadFilter { pattern: String, message: String },
    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: io::Error,
    },
    #[error("malformed index at line {line}: {message}")]
    Format { line: usize, message: String },
}

/// Enclosing context of a statement.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ContextRef {
    Method(ComponentId),
    TopLevel,
}

/// A file that was skipped during ingestion.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub file: String,
    pub line: u32,
    pub message: String,
}

/// Immutable, queryable store of every component in a corpus.
#[derive(Debug, Clone, PartialEq)]
pub struct CorpusIndex {
    frontend: &'static str,
    files: Vec<String>,
    components: Vec<SourceComponent>,
    statement_pool: Vec<ComponentId>,
    context_pool: Vec<ComponentId>,
    containment: BTreeMap<ComponentId, ContextRef>,
    members: BTreeMap<ComponentId, Vec<ComponentId>>,
    diagnostics: Vec<Diagnostic>,
}

/// Collect files under `root` matching any of `patterns` (relative paths,
/// `/`-separated), sorted by path, and index them.
pub fn build_index(root: &Path, patterns: &[String]) -> Result<CorpusIndex, IndexError> {
    let filter = compile_filter(patterns)?;
    let mut paths = Vec::new();
    for entry in WalkDir::new(root).sort_by_file_name() {
        let entry = entry.map_err(|e| IndexError::Io {
            path: e.path().map(Path::to_path_buf).unwrap_or_else(|| root.to_path_buf()),
            source: e.into_io_error().unwrap_or_else(|| io::Error::other("walk error")),
        })?;
        if !entry.file_type().is_file() {
            continue;
        }
        let rel = relative_path(root, entry.path());
        if filter.is_match(&rel) {
            paths.push((rel, entry.into_path()));
        }
    }
    paths.sort();

    let mut sources = Vec::with_capacity(paths.len());
    let mut unreadable = Vec::new();
    for (rel, path) in paths {
        match fs::read(&path) {
            Ok(bytes) => match String::from_utf8(bytes) {
                Ok(text) => sources.push((rel, text)),
                Err(_) => unreadable.push(Diagnostic { file: rel, line: 0, message: "not valid UTF-8".into() }),
            },
            Err(source) => return Err(IndexError::Io { path, source }),
        }
    }
    let mut index = CorpusIndex::from_sources(&JavaLike, sources)?;
    index.diagnostics.extend(unreadable);
    index.diagnostics.sort_by(|a, b| a.file.cmp(&b.file));
    Ok(index)
}

fn compile_filter(patterns: &[String]) -> Result<GlobSet, IndexError> {
    let mut builder = GlobSetBuilder::new();
    for p in patterns {
        let glob = Glob::new(p).map_err(|e| IndexError::BadFilter { pattern: p.clone(), message: e.to_string() })?;
        builder.add(glob);
        // `**/*.java` should also match files at the root
        if let Some(rest) = p.strip_prefix("**/") {
            if let Ok(glob) = Glob::new(rest) {
                builder.add(glob);
            }
        }
    }
    builder.build().map_err(|e| IndexError::BadFilter { pattern: patterns.join(","), message: e.to_string() })
}

fn relative_path(root: &Path, path: &Path) -> String {
    let rel = path.strip_prefix(root).unwrap_or(path);
    rel.components().map(|c| c.as_os_str().to_string_lossy()).collect::<Vec<_>>().join("/")
}

impl CorpusIndex {
    /// Index in-memory `(path, source)` pairs; paths are sorted first.
    pub fn from_sources(frontend: &dyn Frontend, mut sources: Vec<(String, String)>) -> Result<Self, IndexError> {
        sources.sort_by(|a, b| a.0.cmp(&b.0));
        let segmented: Vec<Result<Vec<RawComponent>, Diagnostic>> = sources
            .par_iter()
            .map(|(path, text)| {
                frontend.segment(path, text).map_err(|e| Diagnostic { file: path.clone(), line: e.line(), message: e.to_string() })
            })
            .collect();

        let mut index = CorpusIndex {
            frontend: frontend.name(),
            files: Vec::new(),
            components: Vec::new(),
            statement_pool: Vec::new(),
            context_pool: Vec::new(),
            containment: BTreeMap::new(),
            members: BTreeMap::new(),
            diagnostics: Vec::new(),
        };
        for ((path, _), result) in sources.iter().zip(segmented) {
            let raws = match result {
                Ok(raws) => raws,
                Err(diag) => {
                    index.diagnostics.push(diag);
                    continue;
                }
            };
            index.files.push(path.clone());
            let base = index.components.len();
            let built: Vec<SourceComponent> = raws
                .par_iter()
                .enumerate()
                .map(|(k, raw)| SourceComponent {
                    id: ComponentId((base + k) as u32),
                    role: raw.role,
                    file: path.clone(),
                    span: (raw.start_line, raw.end_line),
                    raw_text: raw.raw_text.clone(),
                    tokens: raw.tokens.clone(),
                    ast: frontend.parse_ast(raw.role, &raw.tokens),
                })
                .collect();
            for (raw, comp) in raws.iter().zip(&built) {
                match raw.role {
                    Role::Method => index.context_pool.push(comp.id),
                    Role::Statement => {
                        let ctx = raw.enclosing.map_or(ContextRef::TopLevel, |m| ContextRef::Method(ComponentId((base + m) as u32)));
                        index.statement_pool.push(comp.id);
                        index.containment.insert(comp.id, ctx);
                    }
                }
            }
            index.components.extend(built);
        }
        if index.files.is_empty() {
            return Err(IndexError::EmptyCorpus);
        }
        index.rebuild_members();
        Ok(index)
    }

    fn rebuild_members(&mut self) {
        self.members.clear();
        for &m in &self.context_pool {
            self.members.insert(m, Vec::new());
        }
        for (&s, ctx) in &self.containment {
            if let ContextRef::Method(m) = ctx {
                self.members.entry(*m).or_default().push(s);
            }
        }
    }

    pub fn frontend(&self) -> &'static dyn Frontend {
        frontend_by_name(self.frontend).unwrap_or(&JavaLike)
    }

    pub fn files(&self) -> &[String] {
        &self.files
    }

    pub fn components(&self) -> &[SourceComponent] {
        &self.components
    }

    pub fn component(&self, id: ComponentId) -> &SourceComponent {
        &self.components[id.0 as usize]
    }

    pub fn get(&self, id: ComponentId) -> Option<&SourceComponent> {
        self.components.get(id.0 as usize)
    }

    pub fn statement_pool(&self) -> &[ComponentId] {
        &self.statement_pool
    }

    pub fn context_pool(&self) -> &[ComponentId] {
        &self.context_pool
    }

    pub fn context_of(&self, statement: ComponentId) -> Option<ContextRef> {
        self.containment.get(&statement).copied()
    }

    pub fn containment(&self) -> &BTreeMap<ComponentId, ContextRef> {
        &self.containment
    }

    /// Statements whose innermost enclosing method is `method`, in source order.
    pub fn members_of(&self, method: ComponentId) -> &[ComponentId] {
        self.members.get(&method).map(Vec::as_slice).unwrap_or(&[])
    }

    pub fn diagnostics(&self) -> &[Diagnostic] {
        &self.diagnostics
    }

    /// Components of `role` in `file` whose span covers `line`.
    pub fn covering(&self, file: &str, line: u32, role: Role) -> impl Iterator<Item = &SourceComponent> + '_ {
        let file = file.to_string();
        self.components
            .iter()
            .filter(move |c| c.role == role && c.file == file && c.span.0 <= line && line <= c.span.1)
    }

    /// Tie-break key: file path, start line, then id.
    pub fn position_key(&self, id: ComponentId) -> (&str, u32, ComponentId) {
        let c = self.component(id);
        (c.file.as_str(), c.span.0, id)
    }

    // ---- persistence ----

    /// Write as line-delimited JSON: a header line, then one line per component.
    pub fn write_jsonl<W: Write>(&self, mut out: W) -> io::Result<()> {
        let header = IndexHeader {
            format: INDEX_FORMAT_NAME.to_string(),
            format_version: INDEX_FORMAT_VERSION,
            frontend: self.frontend.to_string(),
            files: self.files.clone(),
            statements: self.statement_pool.len(),
            methods: self.context_pool.len(),
            diagnostics: self.diagnostics.clone(),
        };
        serde_json::to_writer(&mut out, &header)?;
        out.write_all(b"\n")?;
        for c in &self.components {
            let record = ComponentRecord { component: c, context: self.containment.get(&c.id).copied() };
            serde_json::to_writer(&mut out, &record)?;
            out.write_all(b"\n")?;
        }
        out.flush()
    }

    pub fn read_jsonl<R: BufRead>(input: R) -> Result<Self, IndexError> {
        let mut lines = input.lines().enumerate();
        let bad = |line: usize, message: String| IndexError::Format { line: line + 1, message };
        let (_, first) = lines.next().ok_or_else(|| bad(0, "missing header".into()))?;
        let first = first.map_err(|e| bad(0, e.to_string()))?;
        let header: IndexHeader = serde_json::from_str(&first).map_err(|e| bad(0, e.to_string()))?;
        if header.format != INDEX_FORMAT_NAME || header.format_version != INDEX_FORMAT_VERSION {
            return Err(bad(0, format!("unsupported format {} v{}", header.format, header.format_version)));
        }
        let frontend = frontend_by_name(&header.frontend).ok_or_else(|| bad(0, format!("unknown frontend {}", header.frontend)))?;

        let mut index = CorpusIndex {
            frontend: frontend.name(),
            files: header.files,
            components: Vec::new(),
            statement_pool: Vec::new(),
            context_pool: Vec::new(),
            containment: BTreeMap::new(),
            members: BTreeMap::new(),
            diagnostics: header.diagnostics,
        };
        for (n, line) in lines {
            let line = line.map_err(|e| bad(n, e.to_string()))?;
            if line.is_empty() {
                continue;
            }
            let OwnedRecord { component: mut c, context } = serde_json::from_str(&line).map_err(|e| bad(n, e.to_string()))?;
            if c.id.0 as usize != index.components.len() {
                return Err(bad(n, format!("component id {} out of sequence", c.id)));
            }
            c.ast = frontend.parse_ast(c.role, &c.tokens);
            match c.role {
                Role::Method => index.context_pool.push(c.id),
                Role::Statement => {
                    index.statement_pool.push(c.id);
                    index.containment.insert(c.id, context.unwrap_or(ContextRef::TopLevel));
                }
            }
            index.components.push(c);
        }
        if index.statement_pool.len() != header.statements || index.context_pool.len() != header.methods {
            return Err(bad(0, "component counts disagree with header".into()));
        }
        index.rebuild_members();
        Ok(index)
    }
}

#[derive(Serialize, Deserialize)]
struct IndexHeader {
    format: String,
    format_version: u32,
    frontend: String,
    files: Vec<String>,
    statements: usize,
    methods: usize,
    diagnostics: Vec<Diagnostic>,
}

#[derive(Serialize)]
struct ComponentRecord<'a> {
    #[serde(flatten)]
    component: &'a SourceComponent,
    #[serde(skip_serializing_if = "Option::is_none")]
    context: Option<ContextRef>,
}

#[derive(Deserialize)]
struct OwnedRecord {
    #[serde(flatten)]
    component: SourceComponent,
    context: Option<ContextRef>,
}
