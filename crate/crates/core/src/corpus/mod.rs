//! Source ingestion: lexing, segmentation into statements and methods,
//! coarse ASTs, and the immutable component index.

pub mod ast;
mod index;
pub mod lexer;
pub mod segment;

use std::fmt;

use serde::{Deserialize, Serialize};

pub use ast::{AstNode, NodeKind};
pub use index::{build_index, ContextRef, CorpusIndex, Diagnostic, IndexError, INDEX_FORMAT_VERSION};
pub use lexer::{LexError, Token, TokenKind};
pub use segment::{RawComponent, SegmentError};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Role {
    Statement,
    Method,
}

/// Position of a component in its corpus. Ids follow file path order, then
/// source order, so comparing ids compares corpus positions.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ComponentId(pub u32);

impl fmt::Display for ComponentId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "c{}", self.0)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SourceComponent {
    pub id: ComponentId,
    pub role: Role,
    pub file: String,
    /// First and last line, 1-based, inclusive.
    pub span: (u32, u32),
    pub raw_text: String,
    pub tokens: Vec<Token>,
    #[serde(skip, default = "AstNode::unknown")]
    pub ast: AstNode,
}

impl SourceComponent {
    /// Build a free-standing component (one that is not part of an index),
    /// e.g. the inserted statement of a repair task.
    pub fn detached(frontend: &dyn Frontend, role: Role, file: &str, line: u32, text: &str) -> Result<Self, LexError> {
        let tokens = frontend.lex(text)?;
        let ast = frontend.parse_ast(role, &tokens);
        let lines = text.lines().count().max(1) as u32;
        Ok(SourceComponent {
            id: ComponentId(u32::MAX),
            role,
            file: file.to_string(),
            span: (line, line + lines - 1),
            raw_text: text.to_string(),
            tokens,
            ast,
        })
    }

    /// Token-sequence equality (kind and text), ignoring whitespace,
    /// comments and positions.
    pub fn equivalent(&self, other: &SourceComponent) -> bool {
        tokens_equivalent(&self.tokens, &other.tokens)
    }

    pub fn token_texts(&self) -> impl Iterator<Item = &str> {
        self.tokens.iter().map(|t| t.text.as_str())
    }
}

pub fn tokens_equivalent(a: &[Token], b: &[Token]) -> bool {
    a.len() == b.len() && a.iter().zip(b).all(|(x, y)| x.same_as(y))
}

/// Language frontend: everything language-specific the corpus needs.
pub trait Frontend: Send + Sync {
    fn name(&self) -> &'static str;
    fn lex(&self, source: &str) -> Result<Vec<Token>, LexError>;
    fn segment(&self, file: &str, source: &str) -> Result<Vec<RawComponent>, SegmentError>;
    fn parse_ast(&self, role: Role, tokens: &[Token]) -> AstNode;
    /// Tokens of a single physical line if it holds exactly one statement,
    /// ignoring block punctuation around it (`} else if (x) {` yields the
    /// `if (x)` header).
    fn line_statement(&self, line: &str) -> Option<Vec<Token>>;
}

/// Built-in frontend for Java and similar curly-brace languages.
#[derive(Debug, Clone, Copy, Default)]
pub struct JavaLike;

impl Frontend for JavaLike {
    fn name(&self) -> &'static str {
        "java-like"
    }

    fn lex(&self, source: &str) -> Result<Vec<Token>, LexError> {
        lexer::lex(source)
    }

    fn segment(&self, file: &str, source: &str) -> Result<Vec<RawComponent>, SegmentError> {
        segment::segment(file, source)
    }

    fn parse_ast(&self, role: Role, tokens: &[Token]) -> AstNode {
        ast::parse_component(tokens, role == Role::Method)
    }

    fn line_statement(&self, line: &str) -> Option<Vec<Token>> {
        let mut tokens = lexer::lex(line).ok()?;
        while tokens.first().is_some_and(|t| (t.kind == TokenKind::Separator && t.is("}")) || t.is_keyword("else")) {
            tokens.remove(0);
        }
        if tokens.last().is_some_and(|t| t.kind == TokenKind::Separator && t.is("{")) {
            tokens.pop();
        }
        segment::is_single_statement(&tokens).then_some(tokens)
    }
}

pub fn frontend_by_name(name: &str) -> Option<&'static dyn Frontend> {
    match name {
        "java-like" => Some(&JavaLike),
        _ => None,
    }
}

/// Parse the AST of an indexed component.
pub fn parse_ast(component: &SourceComponent) -> AstNode {
    JavaLike.parse_ast(component.role, &component.tokens)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn line_statement_strips_block_punctuation() {
        let toks = JavaLike.line_statement("  } else if (x > 1) {").unwrap();
        let texts: Vec<_> = toks.iter().map(|t| t.text.as_str()).collect();
        assert_eq!(texts, ["if", "(", "x", ">", "1", ")"]);
        assert!(JavaLike.line_statement("        .map(x -> x + 1)").is_none());
        assert!(JavaLike.line_statement("a(); b();").is_none());
        assert!(JavaLike.line_statement("}").is_none());
    }

    #[test]
    fn detached_components_compare_by_tokens() {
        let a = SourceComponent::detached(&JavaLike, Role::Statement, "A.java", 3, "x = f(a); // why").unwrap();
        let b = SourceComponent::detached(&JavaLike, Role::Statement, "B.java", 9, "x   =  f( a );").unwrap();
        let c = SourceComponent::detached(&JavaLike, Role::Statement, "B.java", 9, "x = f(b);").unwrap();
        assert!(a.equivalent(&b));
        assert!(!a.equivalent(&c));
        assert_eq!(a.ast.node_count(), 6);
    }
}
