//! AST for the circuit DSL, a small ZoKrates-like language.
//!
//! A program is a single `main` with visibility-annotated parameters, local
//! `field` definitions, `assert` statements over `+`, `-`, `*`, and a final
//! `return true;`. The `u32` parameter type is accepted for source
//! compatibility but treated as `field` (no range constraints).

use crate::hash::{sha256, Hash256};
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Visibility {
    Public,
    Private,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum ParamType {
    Field,
    U32,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Param {
    pub visibility: Visibility,
    pub ty: ParamType,
    pub name: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Expr {
    Ident(String),
    Literal(u64),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum CompareOp {
    Eq,
    Neq,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub enum Stmt {
    /// `assert(lhs == rhs);` or `assert(lhs != rhs);`
    Assert { op: CompareOp, lhs: Expr, rhs: Expr },
    /// `field name = expr;`
    Local { name: String, expr: Expr },
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Circuit {
    pub name: String,
    pub params: Vec<Param>,
    pub statements: Vec<Stmt>,
    /// The canonicalized source this circuit was parsed from.
    pub canonical_source: String,
}

impl Circuit {
    pub fn public_params(&self) -> impl Iterator<Item = &Param> {
        self.params.iter().filter(|p| p.visibility == Visibility::Public)
    }

    pub fn private_params(&self) -> impl Iterator<Item = &Param> {
        self.params.iter().filter(|p| p.visibility == Visibility::Private)
    }

    pub fn n_public(&self) -> usize {
        self.public_params().count()
    }

    pub fn n_private(&self) -> usize {
        self.private_params().count()
    }

    /// Output locals follow the `out_` naming convention.
    pub fn output_locals(&self) -> Vec<&str> {
        self.statements
            .iter()
            .filter_map(|s| match s {
                Stmt::Local { name, .. } if name.starts_with("out_") => Some(name.as_str()),
                _ => None,
            })
            .collect()
    }

    pub fn id(&self) -> CircuitId {
        CircuitId(sha256(self.canonical_source.as_bytes()))
    }

    /// Renders the AST back to DSL source. Used by circuit transformations to
    /// produce a registrable, content-addressable artifact.
    pub fn to_source(&self) -> String {
        use std::fmt::Write;
        let mut s = String::from("def main(\n");
        for (i, p) in self.params.iter().enumerate() {
            let vis = match p.visibility {
                Visibility::Public => "public",
                Visibility::Private => "private",
            };
            let ty = match p.ty {
                ParamType::Field => "field",
                ParamType::U32 => "u32",
            };
            let sep = if i + 1 < self.params.len() { "," } else { "" };
            writeln!(s, "    {vis} {ty} {}{sep}", p.name).unwrap();
        }
        s.push_str(") -> bool {\n");
        for stmt in &self.statements {
            match stmt {
                Stmt::Assert { op, lhs, rhs } => {
                    let op = match op {
                        CompareOp::Eq => "==",
                        CompareOp::Neq => "!=",
                    };
                    writeln!(s, "    assert({} {op} {});", print_expr(lhs, 0), print_expr(rhs, 0))
                        .unwrap();
                }
                Stmt::Local { name, expr } => {
                    writeln!(s, "    field {name} = {};", print_expr(expr, 0)).unwrap();
                }
            }
        }
        s.push_str("    return true;\n}\n");
        s
    }
}

// prec 0: + and -, prec 1: *
fn print_expr(e: &Expr, prec: u8) -> String {
    let (s, my_prec) = match e {
        Expr::Ident(n) => (n.clone(), 2),
        Expr::Literal(v) => (v.to_string(), 2),
        Expr::Add(a, b) => (format!("{} + {}", print_expr(a, 0), print_expr(b, 1)), 0),
        Expr::Sub(a, b) => (format!("{} - {}", print_expr(a, 0), print_expr(b, 1)), 0),
        Expr::Mul(a, b) => (format!("{} * {}", print_expr(a, 1), print_expr(b, 2)), 1),
    };
    if my_prec < prec {
        format!("({s})")
    } else {
        s
    }
}

/// Content address of a circuit: SHA-256 over the canonicalized source.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct CircuitId(pub Hash256);

impl std::fmt::Display for CircuitId {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        self.0.fmt(f)
    }
}

/// Strips `//` comments, collapses whitespace runs to single spaces, trims.
pub fn canonicalize_source(source: &str) -> String {
    let mut no_comments = String::with_capacity(source.len());
    for line in source.lines() {
        let code = match line.find("//") {
            Some(i) => &line[..i],
            None => line,
        };
        no_comments.push_str(code);
        no_comments.push('\n');
    }
    no_comments.split_whitespace().collect::<Vec<_>>().join(" ")
}
