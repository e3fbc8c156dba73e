//! Coarse syntax trees over a fixed node-kind vocabulary.
//!
//! The parser is a small recursive-descent / precedence-climbing parser for
//! Java-like statements and expressions. It never fails: a statement that
//! cannot be parsed collapses into a childless `Unknown` node.
//!
//! Token attribution: identifiers, literals, `this`, `super` and type names
//! become leaves (a multi-token type name such as `Map<K, V>` is one
//! `Identifier` leaf). Keywords that introduce a construct, operators and
//! punctuation are absorbed by the node they introduce.

use serde::{Deserialize, Serialize};

use super::lexer::{Token, TokenKind};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum NodeKind {
    Block,
    If,
    Loop,
    Return,
    Throw,
    Assignment,
    Declaration,
    Call,
    FieldAccess,
    BinaryOp,
    UnaryOp,
    Literal,
    Identifier,
    ArgumentList,
    Unknown,
}

impl NodeKind {
    /// Fixed vector order used by characteristic vectors.
    pub const ALL: [NodeKind; 15] = [
        NodeKind::Block,
        NodeKind::If,
        NodeKind::Loop,
        NodeKind::Return,
        NodeKind::Throw,
        NodeKind::Assignment,
        NodeKind::Declaration,
        NodeKind::Call,
        NodeKind::FieldAccess,
        NodeKind::BinaryOp,
        NodeKind::UnaryOp,
        NodeKind::Literal,
        NodeKind::Identifier,
        NodeKind::ArgumentList,
        NodeKind::Unknown,
    ];

    pub fn index(self) -> usize {
        self as usize
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct AstNode {
    pub kind: NodeKind,
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub children: Vec<AstNode>,
}

impl AstNode {
    pub fn leaf(kind: NodeKind) -> Self {
        AstNode { kind, children: Vec::new() }
    }

    pub fn new(kind: NodeKind, children: Vec<AstNode>) -> Self {
        AstNode { kind, children }
    }

    pub fn unknown() -> Self {
        Self::leaf(NodeKind::Unknown)
    }

    pub fn node_count(&self) -> usize {
        1 + self.children.iter().map(AstNode::node_count).sum::<usize>()
    }

    /// Pre-order traversal.
    pub fn walk<'a>(&'a self, visit: &mut impl FnMut(&'a AstNode, Option<&'a AstNode>)) {
        fn go<'a>(node: &'a AstNode, parent: Option<&'a AstNode>, visit: &mut impl FnMut(&'a AstNode, Option<&'a AstNode>)) {
            visit(node, parent);
            for child in &node.children {
                go(child, Some(node), visit);
            }
        }
        go(self, None, visit);
    }
}

/// Parse the tokens of a statement component.
///
/// Control-flow headers without a body (`if (x > 0)`) are accepted. Anything
/// left unconsumed or unparseable yields a single `Unknown` node.
pub fn parse_statement(tokens: &[Token]) -> AstNode {
    let mut p = Parser::new(tokens);
    match p.statement() {
        Some(node) if p.at_end() => node,
        _ => AstNode::unknown(),
    }
}

/// Parse the tokens of a method component: header followed by a braced body.
///
/// The result is a `Declaration` whose children are the method name, an
/// `ArgumentList` of parameter declarations and the body `Block`. Statements
/// inside the body that fail to parse become `Unknown` individually.
pub fn parse_method(tokens: &[Token]) -> AstNode {
    let Some(open) = tokens.iter().position(|t| t.is("{")) else {
        return AstNode::unknown();
    };
    let header = &tokens[..open];
    let mut children = Vec::new();

    // name is the identifier right before the parameter list
    if let Some(lparen) = header.iter().position(|t| t.is("(")) {
        if lparen > 0 && header[lparen - 1].kind == TokenKind::Identifier {
            children.push(AstNode::leaf(NodeKind::Identifier));
        }
        let mut p = Parser::new(&header[lparen..]);
        let params = p.parameter_list().unwrap_or_else(|| AstNode::leaf(NodeKind::ArgumentList));
        children.push(params);
    }
    let mut p = Parser::new(&tokens[open..]);
    children.push(p.block_lenient().unwrap_or_else(AstNode::unknown));
    AstNode::new(NodeKind::Declaration, children)
}

/// Generic entry point: method components start with a header ending in `{`.
pub fn parse_component(tokens: &[Token], is_method: bool) -> AstNode {
    if tokens.is_empty() {
        return AstNode::unknown();
    }
    if is_method {
        parse_method(tokens)
    } else {
        parse_statement(tokens)
    }
}

const MODIFIERS: &[&str] = &[
    "final", "static", "public", "private", "protected", "abstract", "transient", "volatile",
    "synchronized", "native", "strictfp",
];

const PRIMITIVES: &[&str] = &["boolean", "byte", "char", "short", "int", "long", "float", "double", "void"];

const ASSIGN_OPS: &[&str] = &["=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<=", ">>=", ">>>="];

fn binary_precedence(op: &str) -> Option<u8> {
    Some(match op {
        "||" => 1,
        "&&" => 2,
        "|" => 3,
        "^" => 4,
        "&" => 5,
        "==" | "!=" => 6,
        "<" | ">" | "<=" | ">=" | "instanceof" => 7,
        "<<" | ">>" | ">>>" => 8,
        "+" | "-" => 9,
        "*" | "/" | "%" => 10,
        _ => return None,
    })
}

struct Parser<'a> {
    toks: &'a [Token],
    pos: usize,
    depth: usize,
}

// Recursion guard; deeper input is treated as unparseable.
const MAX_DEPTH: usize = 200;

impl<'a> Parser<'a> {
    fn new(toks: &'a [Token]) -> Self {
        Parser { toks, pos: 0, depth: 0 }
    }

    fn at_end(&self) -> bool {
        self.pos >= self.toks.len()
    }

    fn peek(&self) -> Option<&'a Token> {
        self.toks.get(self.pos)
    }

    fn peek_at(&self, n: usize) -> Option<&'a Token> {
        self.toks.get(self.pos + n)
    }

    fn check(&self, text: &str) -> bool {
        self.peek().is_some_and(|t| t.is(text) && t.kind != TokenKind::StringLiteral && t.kind != TokenKind::CharLiteral)
    }

    fn eat(&mut self, text: &str) -> bool {
        if self.check(text) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, text: &str) -> Option<()> {
        self.eat(text).then_some(())
    }

    fn enter(&mut self) -> Option<()> {
        self.depth += 1;
        (self.depth <= MAX_DEPTH).then_some(())
    }

    fn leave(&mut self) {
        self.depth -= 1;
    }

    // ---- statements ----

    fn statement(&mut self) -> Option<AstNode> {
        self.enter()?;
        let r = self.statement_inner();
        self.leave();
        r
    }

    fn statement_inner(&mut self) -> Option<AstNode> {
        let tok = self.peek()?;
        if tok.kind == TokenKind::Identifier && self.peek_at(1).is_some_and(|t| t.is(":")) {
            // label
            self.pos += 2;
            return self.statement();
        }
        if tok.kind == TokenKind::Separator && tok.is("{") {
            return self.block();
        }
        if tok.kind == TokenKind::Separator && tok.is(";") {
            self.pos += 1;
            return Some(AstNode::leaf(NodeKind::Block));
        }
        if tok.kind == TokenKind::Keyword {
            match tok.text.as_str() {
                "if" => return self.if_statement(),
                "while" => {
                    self.pos += 1;
                    let cond = self.paren_expr()?;
                    let mut children = vec![cond];
                    if !self.eat(";") {
                        if let Some(body) = self.optional_body()? {
                            children.push(body);
                        }
                    }
                    return Some(AstNode::new(NodeKind::Loop, children));
                }
                "do" => {
                    self.pos += 1;
                    let body = self.statement()?;
                    self.expect("while")?;
                    let cond = self.paren_expr()?;
                    self.expect(";")?;
                    return Some(AstNode::new(NodeKind::Loop, vec![body, cond]));
                }
                "for" => return self.for_statement(),
                "return" => {
                    self.pos += 1;
                    if self.eat(";") || self.at_end() {
                        return Some(AstNode::leaf(NodeKind::Return));
                    }
                    let value = self.expression()?;
                    self.end_statement()?;
                    return Some(AstNode::new(NodeKind::Return, vec![value]));
                }
                "throw" => {
                    self.pos += 1;
                    let value = self.expression()?;
                    self.end_statement()?;
                    return Some(AstNode::new(NodeKind::Throw, vec![value]));
                }
                "switch" => {
                    // a multi-way conditional
                    self.pos += 1;
                    let subject = self.paren_expr()?;
                    let mut children = vec![subject];
                    if self.check("{") {
                        children.push(self.switch_body()?);
                    }
                    return Some(AstNode::new(NodeKind::If, children));
                }
                "synchronized" => {
                    self.pos += 1;
                    let lock = self.paren_expr()?;
                    let mut children = vec![lock];
                    if let Some(body) = self.optional_body()? {
                        children.push(body);
                    }
                    return Some(AstNode::new(NodeKind::Block, children));
                }
                "try" => return self.try_statement(),
                "catch" => {
                    // bare catch header segment
                    self.pos += 1;
                    let param = self.catch_param()?;
                    let mut children = vec![param];
                    if let Some(body) = self.optional_body()? {
                        children.push(body);
                    }
                    return Some(AstNode::new(NodeKind::Block, children));
                }
                "break" | "continue" => {
                    self.pos += 1;
                    if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) {
                        self.pos += 1;
                    }
                    self.end_statement()?;
                    return Some(AstNode::unknown());
                }
                "assert" => {
                    self.pos += 1;
                    let cond = self.expression()?;
                    let mut children = vec![cond];
                    if self.eat(":") {
                        children.push(self.expression()?);
                    }
                    self.end_statement()?;
                    return Some(AstNode::new(NodeKind::Call, children));
                }
                "class" | "interface" | "enum" => return None,
                _ => {}
            }
        }
        if let Some(decl) = self.try_declaration()? {
            return Some(decl);
        }
        let expr = self.expression()?;
        self.end_statement()?;
        Some(expr)
    }

    /// `;` or end of input (statement components may omit nothing, but
    /// headers and lambda bodies are parsed through here too).
    fn end_statement(&mut self) -> Option<()> {
        if self.eat(";") || self.at_end() {
            Some(())
        } else {
            None
        }
    }

    /// Body of a control statement; absent when the header is the whole input.
    fn optional_body(&mut self) -> Option<Option<AstNode>> {
        if self.at_end() {
            return Some(None);
        }
        self.statement().map(Some)
    }

    fn block(&mut self) -> Option<AstNode> {
        self.expect("{")?;
        let mut children = Vec::new();
        while !self.eat("}") {
            if self.at_end() {
                return None;
            }
            children.push(self.statement()?);
        }
        Some(AstNode::new(NodeKind::Block, children))
    }

    /// Like `block`, but a failing statement becomes `Unknown` and parsing
    /// resumes after the next `;` or balanced `{...}` at the same depth.
    fn block_lenient(&mut self) -> Option<AstNode> {
        self.expect("{")?;
        let mut children = Vec::new();
        loop {
            if self.eat("}") {
                return Some(AstNode::new(NodeKind::Block, children));
            }
            if self.at_end() {
                return Some(AstNode::new(NodeKind::Block, children));
            }
            let start = self.pos;
            let saved_depth = self.depth;
            match self.statement() {
                Some(node) => children.push(node),
                None => {
                    self.depth = saved_depth;
                    self.pos = start;
                    self.skip_statement();
                    children.push(AstNode::unknown());
                }
            }
        }
    }

    fn skip_statement(&mut self) {
        let mut depth = 0i32;
        while let Some(t) = self.peek() {
            if t.kind == TokenKind::Separator {
                match t.text.as_str() {
                    "(" | "[" | "{" => depth += 1,
                    ")" | "]" => depth -= 1,
                    "}" => {
                        if depth == 0 {
                            return;
                        }
                        depth -= 1;
                        if depth == 0 {
                            self.pos += 1;
                            return;
                        }
                    }
                    ";" if depth <= 0 => {
                        self.pos += 1;
                        return;
                    }
                    _ => {}
                }
            }
            self.pos += 1;
        }
    }

    fn if_statement(&mut self) -> Option<AstNode> {
        self.expect("if")?;
        let cond = self.paren_expr()?;
        let mut children = vec![cond];
        if let Some(then) = self.optional_body()? {
            children.push(then);
            if self.eat("else") {
                children.push(self.statement()?);
            }
        }
        Some(AstNode::new(NodeKind::If, children))
    }

    fn for_statement(&mut self) -> Option<AstNode> {
        self.expect("for")?;
        self.expect("(")?;
        let mut children = Vec::new();
        // enhanced for: `for (T x : xs)`
        let save = self.pos;
        if let Some(decl) = self.local_var_head() {
            if self.eat(":") {
                let iterable = self.expression()?;
                self.expect(")")?;
                children.push(decl);
                children.push(iterable);
                if let Some(body) = self.optional_body()? {
                    children.push(body);
                }
                return Some(AstNode::new(NodeKind::Loop, children));
            }
        }
        self.pos = save;
        // classic for
        if !self.eat(";") {
            if let Some(decl) = self.try_declaration()? {
                children.push(decl);
            } else {
                children.push(self.expression()?);
                while self.eat(",") {
                    children.push(self.expression()?);
                }
                self.expect(";")?;
            }
        }
        if !self.eat(";") {
            children.push(self.expression()?);
            self.expect(";")?;
        }
        if !self.eat(")") {
            children.push(self.expression()?);
            while self.eat(",") {
                children.push(self.expression()?);
            }
            self.expect(")")?;
        }
        if let Some(body) = self.optional_body()? {
            children.push(body);
        }
        Some(AstNode::new(NodeKind::Loop, children))
    }

    fn try_statement(&mut self) -> Option<AstNode> {
        self.expect("try")?;
        let mut children = Vec::new();
        if self.eat("(") {
            let mut resources = Vec::new();
            while !self.eat(")") {
                if let Some(decl) = self.try_declaration_no_semi()? {
                    resources.push(decl);
                } else {
                    resources.push(self.expression()?);
                }
                self.eat(";");
            }
            children.push(AstNode::new(NodeKind::ArgumentList, resources));
        }
        if self.at_end() {
            return Some(AstNode::new(NodeKind::Block, children));
        }
        children.push(self.block()?);
        while self.eat("catch") {
            let param = self.catch_param()?;
            let body = self.block()?;
            children.push(AstNode::new(NodeKind::Block, vec![param, body]));
        }
        if self.eat("finally") {
            children.push(self.block()?);
        }
        Some(AstNode::new(NodeKind::Block, children))
    }

    fn catch_param(&mut self) -> Option<AstNode> {
        self.expect("(")?;
        while self.peek().is_some_and(|t| MODIFIERS.contains(&t.text.as_str()) && t.kind == TokenKind::Keyword) {
            self.pos += 1;
        }
        self.type_name()?;
        while self.eat("|") {
            self.type_name()?;
        }
        self.ident()?;
        self.expect(")")?;
        Some(AstNode::new(
            NodeKind::Declaration,
            vec![AstNode::leaf(NodeKind::Identifier), AstNode::leaf(NodeKind::Identifier)],
        ))
    }

    fn switch_body(&mut self) -> Option<AstNode> {
        self.expect("{")?;
        let mut children = Vec::new();
        loop {
            if self.eat("}") {
                return Some(AstNode::new(NodeKind::Block, children));
            }
            if self.at_end() {
                return None;
            }
            if self.eat("case") {
                children.push(self.ternary()?);
                while self.eat(",") {
                    children.push(self.ternary()?);
                }
                if !(self.eat(":") || self.eat("->")) {
                    return None;
                }
                continue;
            }
            if self.eat("default") {
                if !(self.eat(":") || self.eat("->")) {
                    return None;
                }
                continue;
            }
            children.push(self.statement()?);
        }
    }

    fn paren_expr(&mut self) -> Option<AstNode> {
        self.expect("(")?;
        let e = self.expression()?;
        self.expect(")")?;
        Some(e)
    }

    fn parameter_list(&mut self) -> Option<AstNode> {
        self.expect("(")?;
        let mut params = Vec::new();
        while !self.eat(")") {
            self.skip_annotations();
            while self.peek().is_some_and(|t| t.is("final")) {
                self.pos += 1;
            }
            self.type_name()?;
            self.eat("...");
            self.ident()?;
            while self.eat("[") {
                self.expect("]")?;
            }
            params.push(AstNode::new(
                NodeKind::Declaration,
                vec![AstNode::leaf(NodeKind::Identifier), AstNode::leaf(NodeKind::Identifier)],
            ));
            if !self.eat(",") {
                self.expect(")")?;
                break;
            }
        }
        Some(AstNode::new(NodeKind::ArgumentList, params))
    }

    fn skip_annotations(&mut self) {
        while self.check("@") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
            self.pos += 2;
            while self.check(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
                self.pos += 2;
            }
            if self.check("(") {
                let mut depth = 0;
                while let Some(t) = self.peek() {
                    self.pos += 1;
                    if t.is("(") {
                        depth += 1;
                    } else if t.is(")") {
                        depth -= 1;
                        if depth == 0 {
                            break;
                        }
                    }
                }
            }
        }
    }

    fn ident(&mut self) -> Option<()> {
        let t = self.peek()?;
        if t.kind == TokenKind::Identifier {
            self.pos += 1;
            Some(())
        } else {
            None
        }
    }

    /// Local variable declaration `[final] Type name [= init] {, name [= init]} ;`.
    /// Returns `Some(None)` (with position restored) when the input is not a declaration.
    fn try_declaration(&mut self) -> Option<Option<AstNode>> {
        let save = self.pos;
        match self.try_declaration_no_semi()? {
            Some(decl) => {
                if self.end_statement().is_some() {
                    Some(Some(decl))
                } else {
                    self.pos = save;
                    Some(None)
                }
            }
            None => Some(None),
        }
    }

    fn try_declaration_no_semi(&mut self) -> Option<Option<AstNode>> {
        let save = self.pos;
        let Some(mut decl) = self.local_var_head() else {
            self.pos = save;
            return Some(None);
        };
        let next_ok = self.at_end() || self.check("=") || self.check(";") || self.check(",") || self.check(")");
        if !next_ok {
            self.pos = save;
            return Some(None);
        }
        if self.eat("=") {
            decl.children.push(self.variable_initializer()?);
        }
        while self.eat(",") {
            self.ident()?;
            while self.eat("[") {
                self.expect("]")?;
            }
            decl.children.push(AstNode::leaf(NodeKind::Identifier));
            if self.eat("=") {
                decl.children.push(self.variable_initializer()?);
            }
        }
        Some(Some(decl))
    }

    /// `[modifiers] Type name` with optional `[]` after the name.
    fn local_var_head(&mut self) -> Option<AstNode> {
        let save = self.pos;
        self.skip_annotations();
        while self.peek().is_some_and(|t| t.kind == TokenKind::Keyword && MODIFIERS.contains(&t.text.as_str())) {
            self.pos += 1;
        }
        let head = (|| {
            self.type_name()?;
            self.ident()?;
            while self.eat("[") {
                self.expect("]")?;
            }
            Some(AstNode::new(
                NodeKind::Declaration,
                vec![AstNode::leaf(NodeKind::Identifier), AstNode::leaf(NodeKind::Identifier)],
            ))
        })();
        if head.is_none() {
            self.pos = save;
        }
        head
    }

    fn variable_initializer(&mut self) -> Option<AstNode> {
        if self.check("{") {
            self.array_literal()
        } else {
            self.expression()
        }
    }

    fn array_literal(&mut self) -> Option<AstNode> {
        self.expect("{")?;
        let mut elems = Vec::new();
        while !self.eat("}") {
            elems.push(self.variable_initializer()?);
            if !self.eat(",") {
                self.expect("}")?;
                break;
            }
        }
        Some(AstNode::new(NodeKind::ArgumentList, elems))
    }

    /// Consumes a type: qualified name, primitive, generic arguments, array
    /// dimensions. Produces no node; callers emit the `Identifier` leaf.
    fn type_name(&mut self) -> Option<()> {
        let t = self.peek()?;
        let is_primitive = t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str());
        if t.kind != TokenKind::Identifier && !is_primitive {
            return None;
        }
        self.pos += 1;
        if !is_primitive {
            loop {
                if self.check("<") {
                    self.type_arguments()?;
                }
                if self.check(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
                    self.pos += 2;
                    continue;
                }
                break;
            }
        }
        while self.check("[") && self.peek_at(1).is_some_and(|t| t.is("]")) {
            self.pos += 2;
        }
        Some(())
    }

    fn type_arguments(&mut self) -> Option<()> {
        self.expect("<")?;
        let mut depth = 1usize;
        while depth > 0 {
            let t = self.peek()?;
            match t.text.as_str() {
                "<" => depth += 1,
                ">" => depth -= 1,
                ">>" => depth = depth.checked_sub(2)?,
                ">>>" => depth = depth.checked_sub(3)?,
                "," | "?" | "." | "[" | "]" | "&" | "extends" | "super" => {}
                _ if t.kind == TokenKind::Identifier => {}
                _ if t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str()) => {}
                _ => return None,
            }
            self.pos += 1;
        }
        Some(())
    }

    // ---- expressions ----

    fn expression(&mut self) -> Option<AstNode> {
        self.enter()?;
        let r = self.assignment();
        self.leave();
        r
    }

    fn assignment(&mut self) -> Option<AstNode> {
        if let Some(lambda) = self.try_lambda()? {
            return Some(lambda);
        }
        let lhs = self.ternary()?;
        if let Some(t) = self.peek() {
            if t.kind == TokenKind::Operator && ASSIGN_OPS.contains(&t.text.as_str()) {
                self.pos += 1;
                let rhs = if self.check("{") { self.array_literal()? } else { self.expression()? };
                return Some(AstNode::new(NodeKind::Assignment, vec![lhs, rhs]));
            }
        }
        Some(lhs)
    }

    /// `x -> body`, `(a, b) -> body`, `(T a) -> body`; modelled as a
    /// declaration of parameters plus body.
    fn try_lambda(&mut self) -> Option<Option<AstNode>> {
        let save = self.pos;
        let mut params = Vec::new();
        if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) && self.peek_at(1).is_some_and(|t| t.is("->")) {
            self.pos += 2;
            params.push(AstNode::leaf(NodeKind::Identifier));
        } else if self.check("(") {
            let mut depth = 0usize;
            let mut end = None;
            for (i, t) in self.toks[self.pos..].iter().enumerate() {
                if t.is("(") {
                    depth += 1;
                } else if t.is(")") {
                    depth -= 1;
                    if depth == 0 {
                        end = Some(self.pos + i);
                        break;
                    }
                }
            }
            let Some(end) = end else { return Some(None) };
            if !self.toks.get(end + 1).is_some_and(|t| t.is("->")) {
                return Some(None);
            }
            for t in &self.toks[self.pos + 1..end] {
                if t.kind == TokenKind::Identifier {
                    params.push(AstNode::leaf(NodeKind::Identifier));
                }
            }
            self.pos = end + 2;
        } else {
            return Some(None);
        }
        let body = if self.check("{") { self.block() } else { self.expression() };
        match body {
            Some(body) => {
                params.push(body);
                Some(Some(AstNode::new(NodeKind::Declaration, params)))
            }
            None => {
                self.pos = save;
                None
            }
        }
    }

    fn ternary(&mut self) -> Option<AstNode> {
        let cond = self.binary(1)?;
        if self.eat("?") {
            let a = self.ternary_branch()?;
            self.expect(":")?;
            let b = self.ternary_branch()?;
            return Some(AstNode::new(NodeKind::If, vec![cond, a, b]));
        }
        Some(cond)
    }

    fn ternary_branch(&mut self) -> Option<AstNode> {
        if let Some(lambda) = self.try_lambda()? {
            return Some(lambda);
        }
        self.ternary()
    }

    fn binary(&mut self, min_prec: u8) -> Option<AstNode> {
        let mut lhs = self.unary()?;
        while let Some(t) = self.peek() {
            if t.kind != TokenKind::Operator && !t.is_keyword("instanceof") {
                break;
            }
            let Some(prec) = binary_precedence(&t.text) else { break };
            if prec < min_prec {
                break;
            }
            self.pos += 1;
            let rhs = if t.text == "instanceof" {
                self.eat("final");
                self.type_name()?;
                // pattern binding `instanceof Foo f`
                if self.peek().is_some_and(|t| t.kind == TokenKind::Identifier) {
                    self.pos += 1;
                }
                AstNode::leaf(NodeKind::Identifier)
            } else {
                self.binary(prec + 1)?
            };
            lhs = AstNode::new(NodeKind::BinaryOp, vec![lhs, rhs]);
        }
        Some(lhs)
    }

    fn unary(&mut self) -> Option<AstNode> {
        self.enter()?;
        let r = self.unary_inner();
        self.leave();
        r
    }

    fn unary_inner(&mut self) -> Option<AstNode> {
        let t = self.peek()?;
        if t.kind == TokenKind::Operator && matches!(t.text.as_str(), "!" | "~" | "-" | "+" | "++" | "--") {
            self.pos += 1;
            let operand = self.unary()?;
            return Some(AstNode::new(NodeKind::UnaryOp, vec![operand]));
        }
        if let Some(cast) = self.try_cast()? {
            return Some(cast);
        }
        self.postfix()
    }

    /// `(Type) operand`, recognised when the parenthesised text is a type and
    /// is either primitive or followed by something that can start an operand.
    fn try_cast(&mut self) -> Option<Option<AstNode>> {
        if !self.check("(") {
            return Some(None);
        }
        let save = self.pos;
        self.pos += 1;
        let primitive = self.peek().is_some_and(|t| t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str()));
        let capitalised = self
            .peek()
            .is_some_and(|t| t.kind == TokenKind::Identifier && t.text.starts_with(|c: char| c.is_uppercase()));
        if !(primitive || capitalised) || self.type_name().is_none() {
            self.pos = save;
            return Some(None);
        }
        while self.eat("&") {
            if self.type_name().is_none() {
                self.pos = save;
                return Some(None);
            }
        }
        if !self.eat(")") {
            self.pos = save;
            return Some(None);
        }
        let starts_operand = self.peek().is_some_and(|t| match t.kind {
            TokenKind::Identifier
            | TokenKind::NumberLiteral
            | TokenKind::StringLiteral
            | TokenKind::CharLiteral => true,
            TokenKind::Keyword => matches!(t.text.as_str(), "new" | "this" | "super" | "true" | "false" | "null"),
            TokenKind::Separator => t.is("("),
            TokenKind::Operator => {
                matches!(t.text.as_str(), "!" | "~") || (primitive && matches!(t.text.as_str(), "-" | "+" | "++" | "--"))
            }
        });
        if !starts_operand {
            self.pos = save;
            return Some(None);
        }
        let operand = self.unary()?;
        Some(Some(AstNode::new(NodeKind::UnaryOp, vec![AstNode::leaf(NodeKind::Identifier), operand])))
    }

    fn postfix(&mut self) -> Option<AstNode> {
        let mut expr = self.primary()?;
        loop {
            if self.check("(") {
                let args = self.arguments()?;
                expr = AstNode::new(NodeKind::Call, vec![expr, args]);
            } else if self.check(".") {
                self.pos += 1;
                if self.check("<") {
                    self.type_arguments()?;
                }
                let t = self.peek()?;
                let ok = t.kind == TokenKind::Identifier
                    || t.is_keyword("class")
                    || t.is_keyword("this")
                    || t.is_keyword("super")
                    || t.is_keyword("new");
                if !ok {
                    return None;
                }
                if t.is_keyword("new") {
                    // inner class creation `outer.new Inner()`
                    let created = self.creation()?;
                    expr = AstNode::new(NodeKind::FieldAccess, vec![expr, created]);
                    continue;
                }
                self.pos += 1;
                expr = AstNode::new(NodeKind::FieldAccess, vec![expr, AstNode::leaf(NodeKind::Identifier)]);
            } else if self.check("::") {
                self.pos += 1;
                let t = self.peek()?;
                if t.kind != TokenKind::Identifier && !t.is_keyword("new") {
                    return None;
                }
                self.pos += 1;
                expr = AstNode::new(NodeKind::FieldAccess, vec![expr, AstNode::leaf(NodeKind::Identifier)]);
            } else if self.check("[") {
                self.pos += 1;
                let index = self.expression()?;
                self.expect("]")?;
                expr = AstNode::new(NodeKind::FieldAccess, vec![expr, index]);
            } else if self.check("++") || self.check("--") {
                self.pos += 1;
                expr = AstNode::new(NodeKind::UnaryOp, vec![expr]);
            } else {
                break;
            }
        }
        Some(expr)
    }

    fn arguments(&mut self) -> Option<AstNode> {
        self.expect("(")?;
        let mut args = Vec::new();
        while !self.eat(")") {
            args.push(self.expression()?);
            if !self.eat(",") {
                self.expect(")")?;
                break;
            }
        }
        Some(AstNode::new(NodeKind::ArgumentList, args))
    }

    fn primary(&mut self) -> Option<AstNode> {
        let t = self.peek()?;
        match t.kind {
            TokenKind::NumberLiteral | TokenKind::StringLiteral | TokenKind::CharLiteral => {
                self.pos += 1;
                Some(AstNode::leaf(NodeKind::Literal))
            }
            TokenKind::Identifier => {
                // generic type used as a qualifier for a method reference: `List<String>::size`
                self.pos += 1;
                Some(AstNode::leaf(NodeKind::Identifier))
            }
            TokenKind::Keyword => match t.text.as_str() {
                "true" | "false" | "null" => {
                    self.pos += 1;
                    Some(AstNode::leaf(NodeKind::Literal))
                }
                "this" | "super" => {
                    self.pos += 1;
                    Some(AstNode::leaf(NodeKind::Identifier))
                }
                "new" => self.creation(),
                _ if PRIMITIVES.contains(&t.text.as_str()) => {
                    // `int.class`, `int[]::new`
                    self.type_name()?;
                    Some(AstNode::leaf(NodeKind::Identifier))
                }
                _ => None,
            },
            TokenKind::Separator if t.is("(") => {
                self.pos += 1;
                let inner = self.expression()?;
                self.expect(")")?;
                Some(inner)
            }
            TokenKind::Separator if t.is("@") => {
                self.skip_annotations();
                self.primary()
            }
            _ => None,
        }
    }

    /// `new T(args) [class body]` or `new T[n]...` / `new T[] {...}`.
    fn creation(&mut self) -> Option<AstNode> {
        self.expect("new")?;
        self.skip_annotations();
        // type name without array dims
        let t = self.peek()?;
        let is_primitive = t.kind == TokenKind::Keyword && PRIMITIVES.contains(&t.text.as_str());
        if t.kind != TokenKind::Identifier && !is_primitive {
            return None;
        }
        self.pos += 1;
        loop {
            if self.check("<") {
                self.type_arguments()?;
            }
            if self.check(".") && self.peek_at(1).is_some_and(|t| t.kind == TokenKind::Identifier) {
                self.pos += 2;
                continue;
            }
            break;
        }
        let type_leaf = AstNode::leaf(NodeKind::Identifier);
        if self.check("[") {
            let mut dims = Vec::new();
            while self.eat("[") {
                if !self.eat("]") {
                    dims.push(self.expression()?);
                    self.expect("]")?;
                }
            }
            if self.check("{") {
                let init = self.array_literal()?;
                dims.extend(init.children);
            }
            return Some(AstNode::new(NodeKind::Call, vec![type_leaf, AstNode::new(NodeKind::ArgumentList, dims)]));
        }
        let args = self.arguments()?;
        let mut children = vec![type_leaf, args];
        if self.check("{") {
            // anonymous class body, kept as an opaque block
            self.skip_balanced_braces()?;
            children.push(AstNode::leaf(NodeKind::Block));
        }
        Some(AstNode::new(NodeKind::Call, children))
    }

    fn skip_balanced_braces(&mut self) -> Option<()> {
        self.expect("{")?;
        let mut depth = 1usize;
        while depth > 0 {
            let t = self.peek()?;
            if t.kind == TokenKind::Separator {
                if t.is("{") {
                    depth += 1;
                } else if t.is("}") {
                    depth -= 1;
                }
            }
            self.pos += 1;
        }
        Some(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus::lexer::lex;
    use NodeKind::*;

    fn stmt(src: &str) -> AstNode {
        parse_statement(&lex(src).unwrap())
    }

    fn n(kind: NodeKind, children: Vec<AstNode>) -> AstNode {
        AstNode::new(kind, children)
    }

    fn l(kind: NodeKind) -> AstNode {
        AstNode::leaf(kind)
    }

    #[test]
    fn assignment_of_call() {
        let expected = n(
            Assignment,
            vec![l(Identifier), n(Call, vec![l(Identifier), n(ArgumentList, vec![l(Identifier)])])],
        );
        assert_eq!(stmt("x = f(a);"), expected);
    }

    #[test]
    fn bare_return() {
        assert_eq!(stmt("return;"), l(Return));
    }

    #[test]
    fn garbage_is_single_unknown() {
        assert_eq!(stmt(") ( ; ] + + {"), l(Unknown));
        assert_eq!(stmt("x = ;"), l(Unknown));
        assert_eq!(parse_component(&[], false), l(Unknown));
    }

    #[test]
    fn return_with_generic_cast() {
        let tree = stmt("return getPct((Comparable<?>) v);");
        let expected = n(
            Return,
            vec![n(
                Call,
                vec![l(Identifier), n(ArgumentList, vec![n(UnaryOp, vec![l(Identifier), l(Identifier)])])],
            )],
        );
        assert_eq!(tree, expected);
    }

    #[test]
    fn declarations() {
        assert_eq!(stmt("int x = 1;"), n(Declaration, vec![l(Identifier), l(Identifier), l(Literal)]));
        assert_eq!(
            stmt("final Map<String, List<Integer>> m = new HashMap<>();"),
            n(
                Declaration,
                vec![l(Identifier), l(Identifier), n(Call, vec![l(Identifier), n(ArgumentList, vec![])])]
            )
        );
        assert_eq!(stmt("int[] a = {1, 2};").kind, Declaration);
        assert_eq!(stmt("String a, b;").children.len(), 3);
    }

    #[test]
    fn control_headers_without_body() {
        assert_eq!(stmt("if (x > 0)"), n(If, vec![n(BinaryOp, vec![l(Identifier), l(Literal)])]));
        assert_eq!(stmt("while (it.hasNext())").kind, Loop);
        assert_eq!(stmt("for (int i = 0; i < n; i++)").kind, Loop);
        assert_eq!(stmt("for (String s : names)").kind, Loop);
        assert_eq!(stmt("switch (mode)").kind, If);
        assert_eq!(stmt("catch (IOException | RuntimeException e)").kind, Block);
    }

    #[test]
    fn full_control_statements() {
        let tree = stmt("if (a) { b(); } else c = 1;");
        assert_eq!(tree.kind, If);
        assert_eq!(tree.children.len(), 3);
        assert_eq!(stmt("do { i++; } while (i < 3);").kind, Loop);
        assert_eq!(stmt("try { a(); } catch (Exception e) { b(); } finally { c(); }").kind, Block);
        assert_eq!(stmt("switch (k) { case 1: a(); break; default: b(); }").kind, If);
    }

    #[test]
    fn expressions() {
        assert_eq!(stmt("a.b.c(d[0]);").kind, Call);
        assert_eq!(stmt("x = a ? b : c;").children[1].kind, If);
        assert_eq!(stmt("i++;"), n(UnaryOp, vec![l(Identifier)]));
        assert_eq!(stmt("ok = x instanceof String s && !s.isEmpty();").kind, Assignment);
        assert_eq!(stmt("list.forEach(x -> System.out.println(x));").kind, Call);
        assert_eq!(stmt("r = (a, b) -> { return a + b; };").children[1].kind, Declaration);
        assert_eq!(stmt("f = String::valueOf;").children[1].kind, FieldAccess);
        assert_eq!(stmt("throw new IllegalStateException(\"bad\");").kind, Throw);
        assert_eq!(stmt("long v = (long) -x;").children[2].kind, UnaryOp);
        // parenthesised expression, not a cast
        assert_eq!(stmt("y = (a) + b;").children[1].kind, BinaryOp);
    }

    #[test]
    fn method_tree() {
        let toks = lex("public int add(int a, final int b) throws X { int c = a + b; return c; ??? }").unwrap();
        let tree = parse_method(&toks);
        assert_eq!(tree.kind, Declaration);
        assert_eq!(tree.children[0], l(Identifier));
        assert_eq!(tree.children[1].children.len(), 2);
        let body = &tree.children[2];
        assert_eq!(body.kind, Block);
        assert_eq!(body.children.len(), 3);
        assert_eq!(body.children[2], l(Unknown));
    }

    #[test]
    fn anonymous_class_body_is_opaque() {
        let tree = stmt("Runnable r = new Runnable() { public void run() { go(); } };");
        assert_eq!(tree.kind, Declaration);
        assert_eq!(tree.children[2].children.last().unwrap(), &l(Block));
    }

    #[test]
    fn deep_nesting_does_not_overflow() {
        let src = format!("x = {}1{};", "(".repeat(5000), ")".repeat(5000));
        assert_eq!(stmt(&src), l(Unknown));
    }
}
