//! Splits a source file into method and statement components.
//!
//! No grammar is involved: braces are matched on the token stream, a brace is
//! classified by the tokens that precede it (its header), and method bodies
//! are scanned for semicolon-terminated statements and control-flow headers.

use thiserror::Error;

use super::lexer::{lex, LexError, Token, TokenKind};
use super::Role;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SegmentError {
    #[error("{file}: {source}")]
    Lex {
        file: String,
        #[source]
        source: LexError,
    },
    #[error("{file}: unbalanced brace at line {line}")]
    UnbalancedBrace { file: String, line: u32 },
}

impl SegmentError {
    pub fn line(&self) -> u32 {
        match self {
            SegmentError::Lex { source, .. } => source.line(),
            SegmentError::UnbalancedBrace { line, .. } => *line,
        }
    }
}

/// A component as found in one file, before corpus-wide ids exist.
#[derive(Debug, Clone, PartialEq)]
pub struct RawComponent {
    pub role: Role,
    pub start_line: u32,
    pub end_line: u32,
    /// Byte offset of the first token in the file.
    pub start_byte: usize,
    pub raw_text: String,
    pub tokens: Vec<Token>,
    /// For statements: index (into the returned vector) of the innermost
    /// enclosing method.
    pub enclosing: Option<usize>,
}

/// Segment one file.
pub fn segment(file: &str, source: &str) -> Result<Vec<RawComponent>, SegmentError> {
    let tokens = lex(source).map_err(|source| SegmentError::Lex { file: file.to_string(), source })?;
    let braces = match_braces(&tokens).map_err(|line| SegmentError::UnbalancedBrace { file: file.to_string(), line })?;
    let mut seg = Segmenter { source, tokens: &tokens, braces, out: Vec::new() };
    seg.type_body(0, tokens.len());

    // methods and statements interleaved in source order; an index remap keeps
    // `enclosing` valid
    let mut order: Vec<usize> = (0..seg.out.len()).collect();
    order.sort_by_key(|&i| (seg.out[i].start_byte, seg.out[i].role != Role::Method, i));
    let mut remap = vec![0; order.len()];
    for (new, &old) in order.iter().enumerate() {
        remap[old] = new;
    }
    let mut out: Vec<RawComponent> = order.iter().map(|&i| seg.out[i].clone()).collect();
    for c in &mut out {
        c.enclosing = c.enclosing.map(|m| remap[m]);
    }
    Ok(out)
}

/// True when `tokens` form exactly one statement as the body scanner sees it.
pub fn is_single_statement(tokens: &[Token]) -> bool {
    if tokens.is_empty() {
        return false;
    }
    let Ok(braces) = match_braces(tokens) else {
        return false;
    };
    let mut seg = Segmenter { source: "", tokens, braces, out: Vec::new() };
    let mut found = Vec::new();
    seg.scan_statements(0, tokens.len(), None, &mut found);
    matches!(found.as_slice(), [(0, last)] if *last == tokens.len() - 1)
}

/// Matching-brace table; `Err(line)` on imbalance.
fn match_braces(tokens: &[Token]) -> Result<Vec<Option<usize>>, u32> {
    let mut matches = vec![None; tokens.len()];
    let mut stack = Vec::new();
    for (i, t) in tokens.iter().enumerate() {
        if t.kind != TokenKind::Separator {
            continue;
        }
        if t.is("{") {
            stack.push(i);
        } else if t.is("}") {
            let open = stack.pop().ok_or(t.line)?;
            matches[open] = Some(i);
            matches[i] = Some(open);
        }
    }
    match stack.last() {
        Some(&open) => Err(tokens[open].line),
        None => Ok(matches),
    }
}

fn is_sep(t: &Token, text: &str) -> bool {
    t.kind == TokenKind::Separator && t.text == text
}

const CONTROL_KEYWORDS: &[&str] = &["if", "while", "for", "switch", "synchronized", "catch"];

struct Segmenter<'a> {
    source: &'a str,
    tokens: &'a [Token],
    braces: Vec<Option<usize>>,
    out: Vec<RawComponent>,
}

impl<'a> Segmenter<'a> {
    fn close_of(&self, open: usize) -> usize {
        self.braces[open].expect("braces are balanced")
    }

    /// Index of the `)` matching the `(` at `open`, bounded by `hi`. Brace
    /// pairs in between (lambda bodies) are skipped whole.
    fn close_paren(&self, open: usize, hi: usize) -> Option<usize> {
        let mut depth = 0usize;
        let mut i = open;
        while i < hi {
            let t = &self.tokens[i];
            if is_sep(t, "{") {
                i = self.close_of(i) + 1;
                continue;
            }
            if is_sep(t, "(") {
                depth += 1;
            } else if is_sep(t, ")") {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
            i += 1;
        }
        None
    }

    /// Index of the `(` matching the `)` at `close`, searching back to `lo`.
    fn open_paren(&self, close: usize, lo: usize) -> Option<usize> {
        let mut depth = 0usize;
        for i in (lo..=close).rev() {
            let t = &self.tokens[i];
            if is_sep(t, ")") {
                depth += 1;
            } else if is_sep(t, "(") {
                depth -= 1;
                if depth == 0 {
                    return Some(i);
                }
            }
        }
        None
    }

    fn emit(&mut self, role: Role, first: usize, last: usize, enclosing: Option<usize>) -> usize {
        let toks = &self.tokens[first..=last];
        let (start, end) = (toks[0].span.0, toks[toks.len() - 1].span.1);
        self.out.push(RawComponent {
            role,
            start_line: toks[0].line,
            end_line: toks[toks.len() - 1].line,
            start_byte: start,
            raw_text: self.source[start..end].to_string(),
            tokens: toks.to_vec(),
            enclosing,
        });
        self.out.len() - 1
    }

    /// Walk a class-like body (or the whole file) looking for members.
    fn type_body(&mut self, lo: usize, hi: usize) {
        let mut header_start = lo;
        let mut paren_depth = 0usize;
        let mut i = lo;
        while i < hi {
            let t = &self.tokens[i];
            if t.kind == TokenKind::Separator {
                match t.text.as_str() {
                    "(" => paren_depth += 1,
                    ")" => paren_depth = paren_depth.saturating_sub(1),
                    ";" if paren_depth == 0 => header_start = i + 1,
                    "{" => {
                        let close = self.close_of(i);
                        if paren_depth > 0 {
                            // annotation or call argument; may hold an anonymous class
                            self.expression_braces(header_start, i, close, None);
                        } else {
                            self.member_block(header_start, i, close);
                            // a field initialiser continues after its braces up to `;`
                            let continues = has_top_level_assign(&self.tokens[header_start..i])
                                && !self.header_is_member_decl(header_start, i);
                            if !continues {
                                header_start = close + 1;
                            }
                        }
                        i = close + 1;
                        continue;
                    }
                    _ => {}
                }
            }
            i += 1;
        }
    }

    fn header_is_member_decl(&self, lo: usize, open: usize) -> bool {
        let header = &self.tokens[lo..open];
        is_type_header(header) || self.is_method_header(lo, open)
    }

    /// A brace pair directly inside a type body.
    fn member_block(&mut self, header_start: usize, open: usize, close: usize) {
        let header = &self.tokens[header_start..open];
        if is_type_header(header) || self.is_anonymous_class(header_start, open) || self.is_enum_constant_body(header_start, open) {
            self.type_body(open + 1, close);
        } else if self.is_method_header(header_start, open) {
            let method = self.emit(Role::Method, header_start, close, None);
            let mut found = Vec::new();
            self.scan_statements(open + 1, close, Some(method), &mut found);
        } else {
            // initialiser blocks, array initialisers: nothing pooled, but
            // nested anonymous classes still declare methods
            let mut found = Vec::new();
            self.scan_statements(open + 1, close, None, &mut found);
        }
    }

    fn is_method_header(&self, lo: usize, open: usize) -> bool {
        let header = &self.tokens[lo..open];
        if header.is_empty() {
            return false;
        }
        // drop a throws clause
        let mut end = open;
        let mut depth = 0i32;
        for (k, t) in header.iter().enumerate() {
            if is_sep(t, "(") {
                depth += 1;
            } else if is_sep(t, ")") {
                depth -= 1;
            } else if depth == 0 && t.is_keyword("throws") {
                end = lo + k;
                break;
            }
        }
        if end == lo || !is_sep(&self.tokens[end - 1], ")") {
            return false;
        }
        let Some(lparen) = self.open_paren(end - 1, lo) else {
            return false;
        };
        if lparen == lo || self.tokens[lparen - 1].kind != TokenKind::Identifier {
            return false;
        }
        let name = lparen - 1;
        if name > lo && is_sep(&self.tokens[name - 1], ".") {
            return false;
        }
        // modifiers, annotations, type parameters and the return type only
        let mut depth = 0i32;
        for t in &self.tokens[lo..name] {
            if is_sep(t, "(") {
                depth += 1;
            } else if is_sep(t, ")") {
                depth -= 1;
            } else if depth == 0
                && (t.is_keyword("new")
                    || (t.kind == TokenKind::Operator && matches!(t.text.as_str(), "=" | "->" | "?" | ":" | "+"))
                    || t.kind == TokenKind::StringLiteral
                    || t.kind == TokenKind::NumberLiteral
                    || is_sep(t, ","))
            {
                return false;
            }
        }
        true
    }

    /// `CONSTANT(args) {` in an enum: a call-like header whose parentheses
    /// hold arguments rather than parameters.
    fn is_enum_constant_body(&self, lo: usize, open: usize) -> bool {
        if open == lo || !is_sep(&self.tokens[open - 1], ")") {
            return false;
        }
        let Some(lparen) = self.open_paren(open - 1, lo) else {
            return false;
        };
        lparen > lo
            && self.tokens[lparen - 1].kind == TokenKind::Identifier
            && !looks_like_params(&self.tokens[lparen + 1..open - 1])
    }

    /// `new Type<...>(args) {` immediately before `open`.
    fn is_anonymous_class(&self, lo: usize, open: usize) -> bool {
        if open == lo || !is_sep(&self.tokens[open - 1], ")") {
            return false;
        }
        let Some(lparen) = self.open_paren(open - 1, lo) else {
            return false;
        };
        let mut k = lparen;
        while k > lo {
            k -= 1;
            let t = &self.tokens[k];
            if t.is_keyword("new") {
                return true;
            }
            let type_part = t.kind == TokenKind::Identifier
                || (t.kind == TokenKind::Separator && matches!(t.text.as_str(), "." | "," | "[" | "]" | "@"))
                || (t.kind == TokenKind::Operator && matches!(t.text.as_str(), "<" | ">" | ">>" | ">>>" | "?"))
                || t.is_keyword("extends")
                || t.is_keyword("super");
            if !type_part {
                return false;
            }
        }
        false
    }

    /// Braces met inside an expression: anonymous class bodies are walked as
    /// types, lambda bodies are scanned for statements of `method`, anything
    /// else (array initialisers, switch expressions) is skipped.
    fn expression_braces(&mut self, stmt_start: usize, open: usize, close: usize, method: Option<usize>) {
        if self.is_anonymous_class(stmt_start, open) {
            self.type_body(open + 1, close);
        } else if open > 0 && self.tokens[open - 1].is("->") && self.tokens[open - 1].kind == TokenKind::Operator {
            let mut found = Vec::new();
            self.scan_statements(open + 1, close, method, &mut found);
        }
    }

    /// Scan a body region for statements. Emits components when `method` is
    /// set and always records `(first, last)` token ranges in `found`.
    fn scan_statements(&mut self, lo: usize, hi: usize, method: Option<usize>, found: &mut Vec<(usize, usize)>) {
        let mut i = lo;
        while i < hi {
            let t = &self.tokens[i];

            if t.kind == TokenKind::Separator {
                match t.text.as_str() {
                    ";" | "}" => {
                        i += 1;
                        continue;
                    }
                    "{" => {
                        let close = self.close_of(i);
                        self.scan_statements(i + 1, close, method, found);
                        i = close + 1;
                        continue;
                    }
                    _ => {}
                }
            }

            if t.kind == TokenKind::Keyword {
                let kw = t.text.as_str();
                let next_is_paren = self.tokens.get(i + 1).is_some_and(|n| is_sep(n, "("));
                if (CONTROL_KEYWORDS.contains(&kw) || kw == "try") && next_is_paren {
                    let Some(rparen) = self.close_paren(i + 1, hi) else {
                        return;
                    };
                    let mut last = rparen;
                    if self.tokens.get(rparen + 1).is_some_and(|n| is_sep(n, ";")) && rparen + 1 < hi {
                        last = rparen + 1;
                    }
                    self.record(i, last, method, found);
                    // lambdas or anonymous classes inside the condition
                    self.inner_braces(i, i + 1, rparen, method);
                    i = last + 1;
                    continue;
                }
                if matches!(kw, "else" | "do" | "finally" | "try") {
                    i += 1;
                    continue;
                }
                if matches!(kw, "case" | "default") {
                    i = self.skip_label(i + 1, hi);
                    continue;
                }
            }

            if t.kind == TokenKind::Identifier
                && self.tokens.get(i + 1).is_some_and(|n| n.kind == TokenKind::Operator && n.is(":"))
                && i + 1 < hi
            {
                i += 2;
                continue;
            }

            if let Some(open) = self.local_type_decl(i, hi) {
                let close = self.close_of(open);
                self.type_body(open + 1, close);
                i = close + 1;
                continue;
            }

            // simple statement up to `;` at depth 0
            let mut j = i;
            let mut depth = 0i32;
            let mut end = None;
            while j < hi {
                let u = &self.tokens[j];
                if u.kind == TokenKind::Separator {
                    match u.text.as_str() {
                        "(" | "[" => depth += 1,
                        ")" | "]" => depth -= 1,
                        "{" => {
                            let close = self.close_of(j);
                            self.expression_braces(i, j, close, method);
                            j = close + 1;
                            continue;
                        }
                        ";" if depth <= 0 => {
                            end = Some(j);
                            break;
                        }
                        _ => {}
                    }
                }
                j += 1;
            }
            match end {
                Some(end) => {
                    self.record(i, end, method, found);
                    i = end + 1;
                }
                None => return,
            }
        }
    }

    fn inner_braces(&mut self, stmt_start: usize, lo: usize, hi: usize, method: Option<usize>) {
        let mut j = lo;
        while j < hi {
            if is_sep(&self.tokens[j], "{") {
                let close = self.close_of(j);
                self.expression_braces(stmt_start, j, close, method);
                j = close + 1;
            } else {
                j += 1;
            }
        }
    }

    fn record(&mut self, first: usize, last: usize, method: Option<usize>, found: &mut Vec<(usize, usize)>) {
        found.push((first, last));
        if method.is_some() {
            self.emit(Role::Statement, first, last, method);
        }
    }

    /// Skip a `case ...:` / `case ... ->` label; returns the index after it.
    fn skip_label(&self, mut i: usize, hi: usize) -> usize {
        let mut depth = 0i32;
        while i < hi {
            let t = &self.tokens[i];
            if is_sep(t, "(") {
                depth += 1;
            } else if is_sep(t, ")") {
                depth -= 1;
            } else if depth == 0 && t.kind == TokenKind::Operator && (t.is(":") || t.is("->")) {
                return i + 1;
            } else if depth == 0 && (is_sep(t, "{") || is_sep(t, ";")) {
                return i;
            }
            i += 1;
        }
        hi
    }

    /// `class Foo {` / `enum E {` / `record R(...) {` starting at `i`;
    /// returns the index of the body's `{`.
    fn local_type_decl(&self, i: usize, hi: usize) -> Option<usize> {
        let mut j = i;
        while j < hi {
            let t = &self.tokens[j];
            if is_sep(t, "{") {
                return is_type_header(&self.tokens[i..j]).then_some(j);
            }
            if is_sep(t, ";") || is_sep(t, "(") && !is_record_at(&self.tokens[i..], j - i) {
                return None;
            }
            j += 1;
        }
        None
    }
}

fn has_top_level_assign(header: &[Token]) -> bool {
    let mut depth = 0i32;
    for t in header {
        if is_sep(t, "(") {
            depth += 1;
        } else if is_sep(t, ")") {
            depth -= 1;
        } else if depth == 0 && t.kind == TokenKind::Operator && t.is("=") {
            return true;
        }
    }
    false
}

/// Parameter-list shape: comma-separated `Type name` parts (annotations and
/// generics allowed). An empty list counts as parameters.
fn looks_like_params(inner: &[Token]) -> bool {
    let mut parts: Vec<Vec<&Token>> = vec![Vec::new()];
    let (mut angle, mut paren) = (0i32, 0i32);
    for t in inner {
        if paren > 0 {
            if is_sep(t, "(") {
                paren += 1;
            } else if is_sep(t, ")") {
                paren -= 1;
            }
            continue;
        }
        match (t.kind, t.text.as_str()) {
            (TokenKind::Separator, "(") => paren += 1,
            (TokenKind::Operator, "<") => angle += 1,
            (TokenKind::Operator, ">") => angle -= 1,
            (TokenKind::Operator, ">>") => angle -= 2,
            (TokenKind::Separator, ",") if angle == 0 => {
                parts.push(Vec::new());
                continue;
            }
            _ => {}
        }
        parts.last_mut().expect("non-empty").push(t);
    }
    if inner.is_empty() {
        return true;
    }
    parts.iter().all(|p| {
        p.len() >= 2
            && p.last().is_some_and(|t| t.kind == TokenKind::Identifier || is_sep(t, "]"))
            && p.iter().all(|t| match t.kind {
                TokenKind::Identifier | TokenKind::Keyword => true,
                TokenKind::Separator => matches!(t.text.as_str(), "." | "[" | "]" | "@" | "..." | "(" | ")"),
                TokenKind::Operator => matches!(t.text.as_str(), "<" | ">" | ">>" | ">>>" | "?" | "&"),
                _ => false,
            })
    })
}

fn is_record_at(tokens: &[Token], paren: usize) -> bool {
    paren >= 2 && tokens[paren - 2].is("record") && tokens[paren - 1].kind == TokenKind::Identifier
}

fn is_type_header(header: &[Token]) -> bool {
    header.iter().enumerate().any(|(k, t)| {
        let after_dot = k > 0 && is_sep(&header[k - 1], ".");
        let keyword = t.kind == TokenKind::Keyword && matches!(t.text.as_str(), "class" | "interface" | "enum");
        let record = t.kind == TokenKind::Identifier
            && t.text == "record"
            && header.get(k + 1).is_some_and(|n| n.kind == TokenKind::Identifier)
            && header.get(k + 2).is_some_and(|n| is_sep(n, "(") || n.is("<"));
        !after_dot && (keyword || record)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn texts(c: &RawComponent) -> String {
        c.tokens.iter().map(|t| t.text.as_str()).collect::<Vec<_>>().join(" ")
    }

    fn methods(cs: &[RawComponent]) -> Vec<&RawComponent> {
        cs.iter().filter(|c| c.role == Role::Method).collect()
    }

    fn statements(cs: &[RawComponent]) -> Vec<String> {
        cs.iter().filter(|c| c.role == Role::Statement).map(texts).collect()
    }

    #[test]
    fn one_method_three_statements() {
        let src = "class A {\n  int f(int x) {\n    int y = x + 1;\n    y *= 2;\n    return y;\n  }\n}\n";
        let cs = segment("A.java", src).unwrap();
        assert_eq!(methods(&cs).len(), 1);
        assert_eq!(statements(&cs), ["int y = x + 1 ;", "y *= 2 ;", "return y ;"]);
        let m = cs.iter().position(|c| c.role == Role::Method).unwrap();
        assert!(cs.iter().filter(|c| c.role == Role::Statement).all(|c| c.enclosing == Some(m)));
        assert_eq!(cs[m].raw_text, "int f(int x) {\n    int y = x + 1;\n    y *= 2;\n    return y;\n  }");
        assert_eq!((cs[m].start_line, cs[m].end_line), (2, 6));
    }

    #[test]
    fn fields_only() {
        let src = "class C { private int a = 1; static final String[] N = {\"x\", \"y\"}; }";
        let cs = segment("C.java", src).unwrap();
        assert!(cs.is_empty());
    }

    #[test]
    fn nested_class_maps_to_innermost_method() {
        // 10-line fixture; hand-segmented expectations below
        let src = "\
public class Outer {
    void outer() {
        int a = 0;
        Runnable r = new Runnable() {
            public void run() {
                a2();
            }
        };
        r.run();
    }
}";
        let cs = segment("Outer.java", src).unwrap();
        let names: Vec<_> = methods(&cs).iter().map(|m| m.start_line).collect();
        assert_eq!(names, [2, 5]);
        let outer = cs.iter().position(|c| c.role == Role::Method && c.start_line == 2).unwrap();
        let inner = cs.iter().position(|c| c.role == Role::Method && c.start_line == 5).unwrap();
        let by_line = |line: u32| cs.iter().find(|c| c.role == Role::Statement && c.start_line == line).unwrap();
        assert_eq!(by_line(3).enclosing, Some(outer));
        assert_eq!(by_line(6).enclosing, Some(inner));
        assert_eq!(by_line(9).enclosing, Some(outer));
        // the anonymous-class declaration is one multi-line statement
        assert_eq!((by_line(4).start_line, by_line(4).end_line), (4, 8));
    }

    #[test]
    fn control_headers_are_statements() {
        let src = "class K { void g(List<String> xs) throws IOException {
            for (int i = 0; i < xs.size(); i++) {
                if (xs.get(i).isEmpty()) continue;
                else if (i > 3) { break; }
            }
            while (ready()) tick();
            do { step(); } while (more());
            try (Reader r = open()) { use(r); } catch (IOException e) { log(e); } finally { close(); }
            switch (mode) { case A: run(); break; default: stop(); }
            label: for (String s : xs) { }
        } }";
        let cs = segment("K.java", src).unwrap();
        let stmts = statements(&cs);
        assert_eq!(
            stmts,
            [
                "for ( int i = 0 ; i < xs . size ( ) ; i ++ )",
                "if ( xs . get ( i ) . isEmpty ( ) )",
                "continue ;",
                "if ( i > 3 )",
                "break ;",
                "while ( ready ( ) )",
                "tick ( ) ;",
                "step ( ) ;",
                "while ( more ( ) ) ;",
                "try ( Reader r = open ( ) )",
                "use ( r ) ;",
                "catch ( IOException e )",
                "log ( e ) ;",
                "close ( ) ;",
                "switch ( mode )",
                "run ( ) ;",
                "break ;",
                "stop ( ) ;",
                "for ( String s : xs )",
            ]
        );
    }

    #[test]
    fn multi_line_statement_is_joined() {
        let src = "class M { void h() {\n  String s = a\n     + b // tail\n     + c;\n} }";
        let cs = segment("M.java", src).unwrap();
        let st: Vec<_> = cs.iter().filter(|c| c.role == Role::Statement).collect();
        assert_eq!(st.len(), 1);
        assert_eq!((st[0].start_line, st[0].end_line), (2, 4));
        assert_eq!(st[0].raw_text, "String s = a\n     + b // tail\n     + c;");
        // comment stripped when re-lexing
        let relexed = lex(&st[0].raw_text).unwrap();
        assert!(relexed.iter().zip(&st[0].tokens).all(|(a, b)| a.same_as(b)));
        assert_eq!(relexed.len(), st[0].tokens.len());
    }

    #[test]
    fn lambda_bodies_belong_to_enclosing_method() {
        let src = "class L { void m() { xs.forEach(x -> { use(x); }); int[] a = {1, 2}; } }";
        let cs = segment("L.java", src).unwrap();
        assert_eq!(statements(&cs), ["xs . forEach ( x -> { use ( x ) ; } ) ;", "use ( x ) ;", "int [ ] a = { 1 , 2 } ;"]);
    }

    #[test]
    fn interface_and_abstract_methods_are_not_components() {
        let src = "interface I { void a(); default int b() { return 1; } }\nabstract class B { abstract void c(); B() { super(); } }";
        let cs = segment("I.java", src).unwrap();
        assert_eq!(methods(&cs).len(), 2);
        assert_eq!(statements(&cs), ["return 1 ;", "super ( ) ;"]);
    }

    #[test]
    fn static_initializer_statements_are_not_pooled() {
        let src = "class S { static { init(); } static int x() { return 2; } }";
        let cs = segment("S.java", src).unwrap();
        assert_eq!(statements(&cs), ["return 2 ;"]);
    }

    #[test]
    fn annotations_with_braces_in_header() {
        let src = "class A { @Names({\"a\", \"b\"}) @Override public String toString() { return n; } }";
        let cs = segment("A.java", src).unwrap();
        assert_eq!(methods(&cs).len(), 1);
        assert!(methods(&cs)[0].raw_text.starts_with("@Names"));
    }

    #[test]
    fn enum_constant_bodies_hold_methods() {
        let src = "enum Op {\n PLUS(\"+\") { int apply(int a, int b) { return a + b; } },\n MINUS(\"-\") { int apply(int a, int b) { return a - b; } };\n Op(String s) { sym = s; }\n static { warm(); }\n int arity() { return 2; } }";
        let cs = segment("Op.java", src).unwrap();
        assert_eq!(methods(&cs).len(), 4);
        assert_eq!(statements(&cs), ["return a + b ;", "return a - b ;", "sym = s ;", "return 2 ;"]);
    }

    #[test]
    fn unbalanced_braces_name_file_and_line() {
        let err = segment("Bad.java", "class X {\n void f() {\n").unwrap_err();
        assert_eq!(err, SegmentError::UnbalancedBrace { file: "Bad.java".into(), line: 2 });
        let err = segment("Bad.java", "class X { }\n}\n").unwrap_err();
        assert_eq!(err.line(), 2);
    }

    #[test]
    fn lex_failure_is_reported() {
        let err = segment("Q.java", "class Q { String s = \"open; }").unwrap_err();
        assert!(matches!(err, SegmentError::Lex { .. }));
    }

    #[test]
    fn single_statement_check() {
        let ok = |s: &str| is_single_statement(&lex(s).unwrap());
        assert!(ok("return getPct((Comparable<?>) v);"));
        assert!(ok("if (a > b)"));
        assert!(ok("for (int i = 0; i < n; i++)"));
        assert!(!ok("a(); b();"));
        assert!(!ok("foo(a,"));
        assert!(!ok("+ c;  x = 1"));
        assert!(!ok(""));
    }
}
