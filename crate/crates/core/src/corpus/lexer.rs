//! Tolerant lexer for Java-like curly-brace languages.
//!
//! Comments and whitespace are dropped. String, text-block and char literals
//! are kept as single tokens with their quotes. Characters that belong to no
//! known token class are emitted as single-character operators so that exotic
//! syntax degrades instead of failing.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum TokenKind {
    Identifier,
    Keyword,
    NumberLiteral,
    StringLiteral,
    CharLiteral,
    Operator,
    Separator,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub kind: TokenKind,
    pub text: String,
    /// 1-based.
    pub line: u32,
    /// 1-based, counted in chars.
    pub column: u32,
    /// Byte range of the token in the lexed text.
    #[serde(skip)]
    pub span: (usize, usize),
}

impl Token {
    /// Kind and text equality, ignoring position.
    pub fn same_as(&self, other: &Token) -> bool {
        self.kind == other.kind && self.text == other.text
    }

    pub fn is(&self, text: &str) -> bool {
        self.text == text
    }

    pub fn is_keyword(&self, text: &str) -> bool {
        self.kind == TokenKind::Keyword && self.text == text
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LexError {
    #[error("unterminated string literal starting at line {line}")]
    UnterminatedString { line: u32 },
    #[error("unterminated char literal starting at line {line}")]
    UnterminatedChar { line: u32 },
    #[error("unterminated block comment starting at line {line}")]
    UnterminatedComment { line: u32 },
}

impl LexError {
    pub fn line(&self) -> u32 {
        match self {
            LexError::UnterminatedString { line }
            | LexError::UnterminatedChar { line }
            | LexError::UnterminatedComment { line } => *line,
        }
    }
}

pub const KEYWORDS: &[&str] = &[
    "abstract", "assert", "boolean", "break", "byte", "case", "catch", "char", "class", "const",
    "continue", "default", "do", "double", "else", "enum", "extends", "final", "finally", "float",
    "for", "goto", "if", "implements", "import", "instanceof", "int", "interface", "long",
    "native", "new", "package", "private", "protected", "public", "return", "short", "static",
    "strictfp", "super", "switch", "synchronized", "this", "throw", "throws", "transient", "try",
    "void", "volatile", "while", "true", "false", "null",
];

pub fn is_keyword(word: &str) -> bool {
    KEYWORDS.contains(&word)
}

const SEPARATORS: &[&str] = &["...", "::", "(", ")", "{", "}", "[", "]", ";", ",", ".", "@"];

// Longest first; the matcher takes the first hit.
const OPERATORS: &[&str] = &[
    ">>>=", "<<=", ">>=", ">>>", "->", "==", "!=", "<=", ">=", "&&", "||", "++", "--", "+=", "-=",
    "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "=", "<", ">", "!", "~", "?", ":", "+", "-",
    "*", "/", "&", "|", "^", "%",
];

struct Cursor<'a> {
    src: &'a str,
    pos: usize,
    line: u32,
    column: u32,
}

impl<'a> Cursor<'a> {
    fn rest(&self) -> &'a str {
        &self.src[self.pos..]
    }

    fn peek(&self) -> Option<char> {
        self.rest().chars().next()
    }

    fn peek_at(&self, n: usize) -> Option<char> {
        self.rest().chars().nth(n)
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.pos += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn bump_str(&mut self, s: &str) {
        for _ in s.chars() {
            self.bump();
        }
    }
}

/// Lex `source` into tokens.
pub fn lex(source: &str) -> Result<Vec<Token>, LexError> {
    let mut cur = Cursor { src: source, pos: 0, line: 1, column: 1 };
    let mut tokens = Vec::new();

    while let Some(c) = cur.peek() {
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        let (start, line, column) = (cur.pos, cur.line, cur.column);

        if c == '/' && cur.peek_at(1) == Some('/') {
            while let Some(c) = cur.peek() {
                if c == '\n' {
                    break;
                }
                cur.bump();
            }
            continue;
        }
        if c == '/' && cur.peek_at(1) == Some('*') {
            cur.bump_str("/*");
            loop {
                if cur.rest().starts_with("*/") {
                    cur.bump_str("*/");
                    break;
                }
                if cur.bump().is_none() {
                    return Err(LexError::UnterminatedComment { line });
                }
            }
            continue;
        }

        let kind = if c == '"' {
            lex_string(&mut cur, line)?;
            TokenKind::StringLiteral
        } else if c == '\'' {
            lex_char(&mut cur, line)?;
            TokenKind::CharLiteral
        } else if c.is_ascii_digit() || (c == '.' && cur.peek_at(1).is_some_and(|d| d.is_ascii_digit())) {
            lex_number(&mut cur);
            TokenKind::NumberLiteral
        } else if c.is_alphabetic() || c == '_' || c == '$' {
            while cur.peek().is_some_and(|c| c.is_alphanumeric() || c == '_' || c == '$') {
                cur.bump();
            }
            if is_keyword(&source[start..cur.pos]) {
                TokenKind::Keyword
            } else {
                TokenKind::Identifier
            }
        } else if let Some(sep) = SEPARATORS.iter().find(|s| cur.rest().starts_with(**s)) {
            cur.bump_str(sep);
            TokenKind::Separator
        } else if let Some(op) = OPERATORS.iter().find(|s| cur.rest().starts_with(**s)) {
            cur.bump_str(op);
            TokenKind::Operator
        } else {
            cur.bump();
            TokenKind::Operator
        };

        tokens.push(Token {
            kind,
            text: source[start..cur.pos].to_string(),
            line,
            column,
            span: (start, cur.pos),
        });
    }
    Ok(tokens)
}

fn lex_string(cur: &mut Cursor<'_>, line: u32) -> Result<(), LexError> {
    if cur.rest().starts_with("\"\"\"") {
        cur.bump_str("\"\"\"");
        loop {
            if cur.rest().starts_with("\\") {
                cur.bump();
                cur.bump();
                continue;
            }
            if cur.rest().starts_with("\"\"\"") {
                cur.bump_str("\"\"\"");
                return Ok(());
            }
            if cur.bump().is_none() {
                return Err(LexError::UnterminatedString { line });
            }
        }
    }
    cur.bump();
    loop {
        match cur.peek() {
            None | Some('\n') => return Err(LexError::UnterminatedString { line }),
            Some('\\') => {
                cur.bump();
                if cur.peek().is_none_or(|c| c == '\n') {
                    return Err(LexError::UnterminatedString { line });
                }
                cur.bump();
            }
            Some('"') => {
                cur.bump();
                return Ok(());
            }
            Some(_) => {
                cur.bump();
            }
        }
    }
}

fn lex_char(cur: &mut Cursor<'_>, line: u32) -> Result<(), LexError> {
    cur.bump();
    loop {
        match cur.peek() {
            None | Some('\n') => return Err(LexError::UnterminatedChar { line }),
            Some('\\') => {
                cur.bump();
                if cur.peek().is_none_or(|c| c == '\n') {
                    return Err(LexError::UnterminatedChar { line });
                }
                cur.bump();
            }
            Some('\'') => {
                cur.bump();
                return Ok(());
            }
            Some(_) => {
                cur.bump();
            }
        }
    }
}

fn lex_number(cur: &mut Cursor<'_>) {
    if cur.rest().starts_with("0x") || cur.rest().starts_with("0X") || cur.rest().starts_with("0b") || cur.rest().starts_with("0B") {
        cur.bump();
        cur.bump();
        while cur.peek().is_some_and(|c| c.is_ascii_hexdigit() || c == '_') {
            cur.bump();
        }
    } else {
        while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            cur.bump();
        }
        if cur.peek() == Some('.') && cur.peek_at(1).is_some_and(|c| c.is_ascii_digit()) {
            cur.bump();
        } else if cur.peek() == Some('.') && !cur.peek_at(1).is_some_and(|c| c.is_alphabetic() || c == '.') {
            // `1.` is a double literal; `1.foo` is not something Java allows anyway
            cur.bump();
        }
        while cur.peek().is_some_and(|c| c.is_ascii_digit() || c == '_') {
            cur.bump();
        }
        if matches!(cur.peek(), Some('e' | 'E')) {
            let sign = matches!(cur.peek_at(1), Some('+' | '-'));
            let digit_at = if sign { 2 } else { 1 };
            if cur.peek_at(digit_at).is_some_and(|c| c.is_ascii_digit()) {
                for _ in 0..digit_at {
                    cur.bump();
                }
                while cur.peek().is_some_and(|c| c.is_ascii_digit()) {
                    cur.bump();
                }
            }
        }
    }
    if matches!(cur.peek(), Some('l' | 'L' | 'f' | 'F' | 'd' | 'D')) {
        cur.bump();
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds_and_texts(src: &str) -> Vec<(TokenKind, String)> {
        lex(src).unwrap().into_iter().map(|t| (t.kind, t.text)).collect()
    }

    #[test]
    fn minimal_return_statement() {
        assert_eq!(
            kinds_and_texts("return x;"),
            vec![
                (TokenKind::Keyword, "return".into()),
                (TokenKind::Identifier, "x".into()),
                (TokenKind::Separator, ";".into()),
            ]
        );
    }

    #[test]
    fn line_comment_is_dropped() {
        let toks = kinds_and_texts("a=b+1; // c");
        let texts: Vec<_> = toks.iter().map(|(_, t)| t.as_str()).collect();
        assert_eq!(texts, ["a", "=", "b", "+", "1", ";"]);
        assert_eq!(toks[4].0, TokenKind::NumberLiteral);
    }

    #[test]
    fn empty_input() {
        assert!(lex("").unwrap().is_empty());
        assert!(lex("  \n\t /* only */ // comments\n").unwrap().is_empty());
    }

    #[test]
    fn literals_keep_quotes() {
        let toks = kinds_and_texts(r#"s = "a \"b\" // not a comment"; c = '\''; "#);
        assert_eq!(toks[2], (TokenKind::StringLiteral, r#""a \"b\" // not a comment""#.into()));
        assert_eq!(toks[6], (TokenKind::CharLiteral, r"'\''".into()));
    }

    #[test]
    fn text_block_is_one_token() {
        let toks = kinds_and_texts("s = \"\"\"\n  hi\n  \"\"\";");
        assert_eq!(toks.len(), 4);
        assert_eq!(toks[2].0, TokenKind::StringLiteral);
    }

    #[test]
    fn numbers() {
        let texts: Vec<_> = kinds_and_texts("0x1F 1_000L 3.14f 1e-5 .5 2.")
            .into_iter()
            .map(|(k, t)| {
                assert_eq!(k, TokenKind::NumberLiteral);
                t
            })
            .collect();
        assert_eq!(texts, ["0x1F", "1_000L", "3.14f", "1e-5", ".5", "2."]);
    }

    #[test]
    fn longest_operator_match() {
        let texts: Vec<_> = kinds_and_texts("a >>>= b -> c :: d ... e").into_iter().map(|(_, t)| t).collect();
        assert_eq!(texts, ["a", ">>>=", "b", "->", "c", "::", "d", "...", "e"]);
    }

    #[test]
    fn positions_are_one_based() {
        let toks = lex("int a;\n  b++;").unwrap();
        assert_eq!((toks[0].line, toks[0].column), (1, 1));
        assert_eq!((toks[3].line, toks[3].column), (2, 3));
        assert_eq!(toks[3].span, (9, 10));
    }

    #[test]
    fn unterminated_string_names_line() {
        let err = lex("a;\nb = \"oops;\n").unwrap_err();
        assert_eq!(err, LexError::UnterminatedString { line: 2 });
    }

    #[test]
    fn unterminated_comment_names_line() {
        let err = lex("a;\n\n/* never closed").unwrap_err();
        assert_eq!(err.line(), 3);
    }

    #[test]
    fn unknown_characters_degrade_to_operators() {
        let toks = kinds_and_texts("a # b");
        assert_eq!(toks[1], (TokenKind::Operator, "#".into()));
    }
}
