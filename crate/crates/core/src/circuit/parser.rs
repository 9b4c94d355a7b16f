//! Recursive-descent parser for the circuit DSL.
//!
//! Grammar:
//! ```text
//! program := "def" "main" "(" param ("," param)* ")" "->" "bool" "{" stmt* "return" "true" ";" "}"
//! param   := ("private" | "public") ("field" | "u32") ident
//! stmt    := "assert" "(" expr ("==" | "!=") expr ")" ";" | "field" ident "=" expr ";"
//! expr    := term (("+" | "-") term)*
//! term    := atom ("*" atom)*
//! atom    := ident | integer | "(" expr ")"
//! ```
//! `//` comments run to end of line. Identifier scoping (no forward use, no
//! redeclaration) is checked here as well.

use super::ast::*;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum ParseError {
    #[error("syntax error at {line}:{col}: expected {expected}, found {found}")]
    Syntax { line: usize, col: usize, expected: String, found: String },
    #[error("undeclared identifier `{name}` at {line}:{col}")]
    UndeclaredIdentifier { name: String, line: usize, col: usize },
    #[error("duplicate declaration of `{name}` at {line}:{col}")]
    DuplicateDeclaration { name: String, line: usize, col: usize },
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Ident(String),
    Int(u64),
    Sym(&'static str), // punctuation and operators
    Eof,
}

#[derive(Debug, Clone)]
struct Lexed {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(source: &str) -> Result<Vec<Lexed>, ParseError> {
    let mut out = Vec::new();
    let mut line = 1usize;
    let mut col = 1usize;
    let mut chars = source.chars().peekable();
    while let Some(&c) = chars.peek() {
        let (tl, tc) = (line, col);
        let mut bump = |chars: &mut std::iter::Peekable<std::str::Chars>| {
            let c = chars.next().unwrap();
            if c == '\n' {
                line += 1;
                col = 1;
            } else {
                col += 1;
            }
            c
        };
        if c.is_whitespace() {
            bump(&mut chars);
            continue;
        }
        if c == '/' {
            let mut clone = chars.clone();
            clone.next();
            if clone.peek() == Some(&'/') {
                while let Some(&c2) = chars.peek() {
                    if c2 == '\n' {
                        break;
                    }
                    bump(&mut chars);
                }
                continue;
            }
            return Err(ParseError::Syntax {
                line: tl,
                col: tc,
                expected: "token".into(),
                found: "/".into(),
            });
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c2) = chars.peek() {
                if c2.is_ascii_alphanumeric() || c2 == '_' {
                    s.push(bump(&mut chars));
                } else {
                    break;
                }
            }
            out.push(Lexed { tok: Tok::Ident(s), line: tl, col: tc });
            continue;
        }
        if c.is_ascii_digit() {
            let mut v: u64 = 0;
            let mut overflow = false;
            while let Some(&c2) = chars.peek() {
                if let Some(d) = c2.to_digit(10) {
                    bump(&mut chars);
                    let (nv, o1) = v.overflowing_mul(10);
                    let (nv, o2) = nv.overflowing_add(d as u64);
                    overflow |= o1 || o2;
                    v = nv;
                } else {
                    break;
                }
            }
            if overflow {
                return Err(ParseError::Syntax {
                    line: tl,
                    col: tc,
                    expected: "integer < 2^64".into(),
                    found: "oversized literal".into(),
                });
            }
            out.push(Lexed { tok: Tok::Int(v), line: tl, col: tc });
            continue;
        }
        let two: Option<&'static str> = {
            let mut clone = chars.clone();
            let a = clone.next().unwrap();
            match (a, clone.peek()) {
                ('-', Some('>')) => Some("->"),
                ('=', Some('=')) => Some("=="),
                ('!', Some('=')) => Some("!="),
                _ => None,
            }
        };
        if let Some(sym) = two {
            bump(&mut chars);
            bump(&mut chars);
            out.push(Lexed { tok: Tok::Sym(sym), line: tl, col: tc });
            continue;
        }
        let sym = match c {
            '(' => "(",
            ')' => ")",
            '{' => "{",
            '}' => "}",
            ',' => ",",
            ';' => ";",
            '=' => "=",
            '+' => "+",
            '-' => "-",
            '*' => "*",
            other => {
                return Err(ParseError::Syntax {
                    line: tl,
                    col: tc,
                    expected: "token".into(),
                    found: other.to_string(),
                })
            }
        };
        bump(&mut chars);
        out.push(Lexed { tok: Tok::Sym(sym), line: tl, col: tc });
    }
    out.push(Lexed { tok: Tok::Eof, line, col });
    Ok(out)
}

struct Parser {
    toks: Vec<Lexed>,
    pos: usize,
    declared: Vec<String>,
}

impl Parser {
    fn peek(&self) -> &Lexed {
        &self.toks[self.pos]
    }

    fn advance(&mut self) -> Lexed {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err(&self, expected: &str) -> ParseError {
        let t = self.peek();
        let found = match &t.tok {
            Tok::Ident(s) => s.clone(),
            Tok::Int(v) => v.to_string(),
            Tok::Sym(s) => s.to_string(),
            Tok::Eof => "end of input".into(),
        };
        ParseError::Syntax { line: t.line, col: t.col, expected: expected.into(), found }
    }

    fn expect_sym(&mut self, sym: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Sym(s) if *s == sym => {
                self.advance();
                Ok(())
            }
            _ => Err(self.err(&format!("`{sym}`"))),
        }
    }

    fn expect_keyword(&mut self, kw: &str) -> Result<(), ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == kw => {
                self.advance();
                Ok(())
            }
            _ => Err(self.err(&format!("`{kw}`"))),
        }
    }

    fn expect_ident(&mut self) -> Result<(String, usize, usize), ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Ident(s) if !is_keyword(&s) => {
                self.advance();
                Ok((s, t.line, t.col))
            }
            _ => Err(self.err("identifier")),
        }
    }

    fn declare(&mut self, name: String, line: usize, col: usize) -> Result<(), ParseError> {
        if self.declared.contains(&name) {
            return Err(ParseError::DuplicateDeclaration { name, line, col });
        }
        self.declared.push(name);
        Ok(())
    }

    fn param(&mut self) -> Result<Param, ParseError> {
        let visibility = match &self.peek().tok {
            Tok::Ident(s) if s == "private" => Visibility::Private,
            Tok::Ident(s) if s == "public" => Visibility::Public,
            _ => return Err(self.err("`private` or `public`")),
        };
        self.advance();
        let ty = match &self.peek().tok {
            Tok::Ident(s) if s == "field" => ParamType::Field,
            Tok::Ident(s) if s == "u32" => ParamType::U32,
            _ => return Err(self.err("`field` or `u32`")),
        };
        self.advance();
        let (name, line, col) = self.expect_ident()?;
        self.declare(name.clone(), line, col)?;
        Ok(Param { visibility, ty, name })
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let t = self.peek().clone();
        match t.tok {
            Tok::Int(v) => {
                self.advance();
                Ok(Expr::Literal(v))
            }
            Tok::Ident(ref s) if !is_keyword(s) => {
                if !self.declared.contains(s) {
                    return Err(ParseError::UndeclaredIdentifier {
                        name: s.clone(),
                        line: t.line,
                        col: t.col,
                    });
                }
                self.advance();
                Ok(Expr::Ident(s.clone()))
            }
            Tok::Sym("(") => {
                self.advance();
                let e = self.expr()?;
                self.expect_sym(")")?;
                Ok(e)
            }
            _ => Err(self.err("identifier, integer, or `(`")),
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.atom()?;
        while self.peek().tok == Tok::Sym("*") {
            self.advance();
            let rhs = self.atom()?;
            e = Expr::Mul(Box::new(e), Box::new(rhs));
        }
        Ok(e)
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut e = self.term()?;
        loop {
            match self.peek().tok {
                Tok::Sym("+") => {
                    self.advance();
                    let rhs = self.term()?;
                    e = Expr::Add(Box::new(e), Box::new(rhs));
                }
                Tok::Sym("-") => {
                    self.advance();
                    let rhs = self.term()?;
                    e = Expr::Sub(Box::new(e), Box::new(rhs));
                }
                _ => return Ok(e),
            }
        }
    }

    fn stmt(&mut self) -> Result<Stmt, ParseError> {
        match &self.peek().tok {
            Tok::Ident(s) if s == "assert" => {
                self.advance();
                self.expect_sym("(")?;
                let lhs = self.expr()?;
                let op = match self.peek().tok {
                    Tok::Sym("==") => CompareOp::Eq,
                    Tok::Sym("!=") => CompareOp::Neq,
                    _ => return Err(self.err("`==` or `!=`")),
                };
                self.advance();
                let rhs = self.expr()?;
                self.expect_sym(")")?;
                self.expect_sym(";")?;
                Ok(Stmt::Assert { op, lhs, rhs })
            }
            Tok::Ident(s) if s == "field" => {
                self.advance();
                let (name, line, col) = self.expect_ident()?;
                self.expect_sym("=")?;
                let expr = self.expr()?;
                self.expect_sym(";")?;
                self.declare(name.clone(), line, col)?;
                Ok(Stmt::Local { name, expr })
            }
            _ => Err(self.err("`assert`, `field`, or `return`")),
        }
    }
}

fn is_keyword(s: &str) -> bool {
    matches!(
        s,
        "def" | "main" | "private" | "public" | "field" | "u32" | "bool" | "assert" | "return"
            | "true"
    )
}

/// Parses DSL source into a [`Circuit`], validating scoping rules.
pub fn parse_circuit(source: &str) -> Result<Circuit, ParseError> {
    let toks = lex(source)?;
    let mut p = Parser { toks, pos: 0, declared: Vec::new() };
    p.expect_keyword("def")?;
    p.expect_keyword("main")?;
    p.expect_sym("(")?;
    let mut params = vec![p.param()?];
    while p.peek().tok == Tok::Sym(",") {
        p.advance();
        params.push(p.param()?);
    }
    p.expect_sym(")")?;
    p.expect_sym("->")?;
    p.expect_keyword("bool")?;
    p.expect_sym("{")?;
    let mut statements = Vec::new();
    loop {
        if let Tok::Ident(s) = &p.peek().tok {
            if s == "return" {
                break;
            }
        }
        statements.push(p.stmt()?);
    }
    p.expect_keyword("return")?;
    p.expect_keyword("true")?;
    p.expect_sym(";")?;
    p.expect_sym("}")?;
    if p.peek().tok != Tok::Eof {
        return Err(p.err("end of input"));
    }
    Ok(Circuit {
        name: "main".into(),
        params,
        statements,
        canonical_source: canonicalize_source(source),
    })
}
