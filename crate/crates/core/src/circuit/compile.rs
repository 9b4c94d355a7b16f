//! Flattening of circuit ASTs into R1CS plus a witness-generation program.
//!
//! Flattening rules:
//! - var 0 is ONE; public params occupy indices 1..=n_public in declaration
//!   order, then private params, then locals/auxiliaries in first-use order;
//! - additions and subtractions fold into linear combinations for free;
//! - a product of two non-constant linear combinations either feeds directly
//!   into the constraint that consumes it (`assert(a*b == c)` is a single
//!   constraint) or is lowered to an auxiliary variable;
//! - `field x = e;` allocates a variable for `x` and one constraint binding it;
//! - `assert(e1 != e2)` uses the inverse gadget: aux v with (e1-e2) * v = 1.
//!
//! Compilation is byte-deterministic: identical source and field give an
//! identical constraint list.

use super::ast::{Circuit, CompareOp, Expr, Stmt};
use super::r1cs::{Constraint, LinComb, Witness, R1CS};
use crate::field::{FieldElement, PrimeField};
use std::collections::HashMap;
use thiserror::Error;

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum CompileError {
    // Fires only on an internal invariant breach; the lowering above keeps
    // every assert at degree <= 2.
    #[error("assert statement exceeds degree 2 after flattening")]
    DegreeTooHigh,
}

#[derive(Debug, Error, PartialEq, Eq, Clone)]
pub enum WitnessError {
    #[error("expected {expected} {kind} inputs, got {got}")]
    ArityMismatch { kind: &'static str, expected: usize, got: usize },
    #[error("input values belong to a different field than the circuit")]
    FieldMismatch,
    #[error("assertion at statement {0} is not satisfied")]
    UnsatisfiedAssertion(usize),
}

/// One step of the witness-generation program emitted alongside the R1CS.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum WitnessStep {
    /// values[var] = <lc, w>
    Linear { var: usize, lc: LinComb },
    /// values[var] = <a, w> * <b, w>
    Product { var: usize, a: LinComb, b: LinComb },
    /// values[var] = <of, w>^-1, failing the statement if <of, w> = 0
    Inverse { var: usize, of: LinComb, stmt: usize },
    /// check <a, w> = <b, w>
    CheckEq { a: LinComb, b: LinComb, stmt: usize },
    /// check <a, w> * <b, w> = <c, w>
    CheckMul { a: LinComb, b: LinComb, c: LinComb, stmt: usize },
}

/// Compiled form of a circuit: the R1CS together with everything needed to
/// generate witnesses deterministically.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CompiledCircuit {
    pub r1cs: R1CS,
    pub steps: Vec<WitnessStep>,
    pub public_names: Vec<String>,
    pub private_names: Vec<String>,
    /// Local definitions in first-use order, as (name, variable index).
    pub local_vars: Vec<(String, usize)>,
}

enum Flat {
    Linear(LinComb),
    /// A pending product of two non-constant linear combinations, not yet
    /// assigned an auxiliary variable.
    Product(LinComb, LinComb),
}

struct Flattener {
    field: PrimeField,
    env: HashMap<String, LinComb>,
    next_var: usize,
    constraints: Vec<Constraint>,
    steps: Vec<WitnessStep>,
    local_vars: Vec<(String, usize)>,
    cur_stmt: usize,
}

impl Flattener {
    fn alloc(&mut self) -> usize {
        let v = self.next_var;
        self.next_var += 1;
        v
    }

    fn one_lc(&self) -> LinComb {
        LinComb::constant(&self.field, 1)
    }

    /// Lowers a pending product to an auxiliary variable.
    fn linearize(&mut self, flat: Flat) -> LinComb {
        match flat {
            Flat::Linear(lc) => lc,
            Flat::Product(a, b) => {
                let v = self.alloc();
                self.constraints.push(Constraint {
                    a: a.clone(),
                    b: b.clone(),
                    c: LinComb::var(v),
                });
                self.steps.push(WitnessStep::Product { var: v, a, b });
                LinComb::var(v)
            }
        }
    }

    fn flatten(&mut self, expr: &Expr) -> Flat {
        match expr {
            Expr::Ident(name) => {
                Flat::Linear(self.env.get(name).expect("parser checked scoping").clone())
            }
            Expr::Literal(v) => Flat::Linear(LinComb::constant(&self.field, *v)),
            Expr::Add(l, r) => {
                let lf = self.flatten(l);
                let a = self.linearize(lf);
                let rf = self.flatten(r);
                let b = self.linearize(rf);
                Flat::Linear(a.plus(&b, &self.field))
            }
            Expr::Sub(l, r) => {
                let lf = self.flatten(l);
                let a = self.linearize(lf);
                let rf = self.flatten(r);
                let b = self.linearize(rf);
                Flat::Linear(a.minus(&b, &self.field))
            }
            Expr::Mul(l, r) => {
                let lf = self.flatten(l);
                let a = self.linearize(lf);
                let rf = self.flatten(r);
                let b = self.linearize(rf);
                if let Some(c) = a.constant_value(&self.field) {
                    Flat::Linear(b.scaled(c))
                } else if let Some(c) = b.constant_value(&self.field) {
                    Flat::Linear(a.scaled(c))
                } else {
                    Flat::Product(a, b)
                }
            }
        }
    }

    fn stmt(&mut self, stmt: &Stmt) {
        match stmt {
            Stmt::Local { name, expr } => {
                let flat = self.flatten(expr);
                let v = self.alloc();
                match flat {
                    Flat::Linear(lc) => {
                        self.constraints.push(Constraint {
                            a: lc.minus(&LinComb::var(v), &self.field),
                            b: self.one_lc(),
                            c: LinComb::zero(),
                        });
                        self.steps.push(WitnessStep::Linear { var: v, lc });
                    }
                    Flat::Product(a, b) => {
                        self.constraints.push(Constraint {
                            a: a.clone(),
                            b: b.clone(),
                            c: LinComb::var(v),
                        });
                        self.steps.push(WitnessStep::Product { var: v, a, b });
                    }
                }
                self.env.insert(name.clone(), LinComb::var(v));
                self.local_vars.push((name.clone(), v));
            }
            Stmt::Assert { op: CompareOp::Eq, lhs, rhs } => {
                let lf = self.flatten(lhs);
                let rf = self.flatten(rhs);
                match (lf, rf) {
                    (Flat::Linear(a), Flat::Linear(b)) => {
                        self.constraints.push(Constraint {
                            a: a.minus(&b, &self.field),
                            b: self.one_lc(),
                            c: LinComb::zero(),
                        });
                        self.steps.push(WitnessStep::CheckEq { a, b, stmt: self.cur_stmt });
                    }
                    (Flat::Product(a, b), Flat::Linear(c))
                    | (Flat::Linear(c), Flat::Product(a, b)) => {
                        self.constraints.push(Constraint {
                            a: a.clone(),
                            b: b.clone(),
                            c: c.clone(),
                        });
                        self.steps.push(WitnessStep::CheckMul { a, b, c, stmt: self.cur_stmt });
                    }
                    (lp @ Flat::Product(..), Flat::Product(a, b)) => {
                        let c = self.linearize(lp);
                        self.constraints.push(Constraint {
                            a: a.clone(),
                            b: b.clone(),
                            c: c.clone(),
                        });
                        self.steps.push(WitnessStep::CheckMul { a, b, c, stmt: self.cur_stmt });
                    }
                }
            }
            Stmt::Assert { op: CompareOp::Neq, lhs, rhs } => {
                let lf = self.flatten(lhs);
                let a = self.linearize(lf);
                let rf = self.flatten(rhs);
                let b = self.linearize(rf);
                let diff = a.minus(&b, &self.field);
                let v = self.alloc();
                self.constraints.push(Constraint {
                    a: diff.clone(),
                    b: LinComb::var(v),
                    c: self.one_lc(),
                });
                self.steps.push(WitnessStep::Inverse { var: v, of: diff, stmt: self.cur_stmt });
            }
        }
    }
}

/// Compiles a well-formed circuit into R1CS form.
pub fn compile(circuit: &Circuit, field: &PrimeField) -> Result<CompiledCircuit, CompileError> {
    let mut fl = Flattener {
        field: *field,
        env: HashMap::new(),
        next_var: 1,
        constraints: Vec::new(),
        steps: Vec::new(),
        local_vars: Vec::new(),
        cur_stmt: 0,
    };
    let mut public_names = Vec::new();
    let mut private_names = Vec::new();
    for p in circuit.public_params() {
        let v = fl.alloc();
        fl.env.insert(p.name.clone(), LinComb::var(v));
        public_names.push(p.name.clone());
    }
    for p in circuit.private_params() {
        let v = fl.alloc();
        fl.env.insert(p.name.clone(), LinComb::var(v));
        private_names.push(p.name.clone());
    }
    for (i, stmt) in circuit.statements.iter().enumerate() {
        fl.cur_stmt = i;
        fl.stmt(stmt);
    }
    let r1cs = R1CS {
        field: *field,
        n_vars: fl.next_var,
        n_public: public_names.len(),
        constraints: fl.constraints,
    };
    Ok(CompiledCircuit {
        r1cs,
        steps: fl.steps,
        public_names,
        private_names,
        local_vars: fl.local_vars,
    })
}

/// Fills parameter slots and executes the witness program, producing a full
/// assignment or reporting which assert failed.
pub fn generate_witness(
    compiled: &CompiledCircuit,
    public_inputs: &[FieldElement],
    private_inputs: &[FieldElement],
) -> Result<Witness, WitnessError> {
    let r1cs = &compiled.r1cs;
    if public_inputs.len() != compiled.public_names.len() {
        return Err(WitnessError::ArityMismatch {
            kind: "public",
            expected: compiled.public_names.len(),
            got: public_inputs.len(),
        });
    }
    if private_inputs.len() != compiled.private_names.len() {
        return Err(WitnessError::ArityMismatch {
            kind: "private",
            expected: compiled.private_names.len(),
            got: private_inputs.len(),
        });
    }
    if public_inputs
        .iter()
        .chain(private_inputs)
        .any(|v| v.modulus() != r1cs.field.modulus())
    {
        return Err(WitnessError::FieldMismatch);
    }
    let mut values = vec![r1cs.field.zero(); r1cs.n_vars];
    values[0] = r1cs.field.one();
    for (i, v) in public_inputs.iter().enumerate() {
        values[1 + i] = *v;
    }
    for (i, v) in private_inputs.iter().enumerate() {
        values[1 + public_inputs.len() + i] = *v;
    }
    let field = &r1cs.field;
    for step in &compiled.steps {
        match step {
            WitnessStep::Linear { var, lc } => values[*var] = lc.eval(field, &values),
            WitnessStep::Product { var, a, b } => {
                let av = a.eval(field, &values);
                let bv = b.eval(field, &values);
                values[*var] = av.mul(&bv).expect("same field");
            }
            WitnessStep::Inverse { var, of, stmt } => {
                let d = of.eval(field, &values);
                values[*var] =
                    d.inv().map_err(|_| WitnessError::UnsatisfiedAssertion(*stmt))?;
            }
            WitnessStep::CheckEq { a, b, stmt } => {
                if a.eval(field, &values) != b.eval(field, &values) {
                    return Err(WitnessError::UnsatisfiedAssertion(*stmt));
                }
            }
            WitnessStep::CheckMul { a, b, c, stmt } => {
                let av = a.eval(field, &values);
                let bv = b.eval(field, &values);
                if av.mul(&bv).expect("same field") != c.eval(field, &values) {
                    return Err(WitnessError::UnsatisfiedAssertion(*stmt));
                }
            }
        }
    }
    Ok(Witness { values })
}
