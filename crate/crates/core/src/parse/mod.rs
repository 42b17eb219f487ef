//! Operator expression language: tokenizer, recursive-descent parser and
//! lowering to [`OperatorPoly`](crate::algebra::OperatorPoly).
//!
//! ```text
//! expr   := term (("+" | "-") term)*
//! term   := unary (("*" unary) | ("/" NUMBER))*
//! unary  := "-" unary | factor
//! factor := base ("^" INT)?
//! base   := NUMBER | "i" | vecatom "." AXIS | "dot(" vexpr "," vexpr ")"
//!         | "cross(" vexpr "," vexpr ")" "." AXIS | "(" vexpr ")" "." AXIS
//!         | "normfn(" IDENT "," vexpr ")" | "(" expr ")"
//! vexpr  := vterm (("+" | "-") vterm)*
//! vterm  := "-" vterm | (scalar "*")? vprim ("/" NUMBER)?
//! vprim  := vecatom | "cross(" vexpr "," vexpr ")" | "(" vexpr ")"
//! vecatom:= ("z" | "p") "[" INT "]" | "a" | "v" | "theta"
//! scalar := NUMBER ("/" NUMBER)?
//! ```
//!
//! `a`, `v` and `theta` are the formal translation, boost and rotation
//! vectors, so printed residual witnesses parse back.

mod lexer;
mod lower;
mod parser;

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, Kind, OperatorPoly, Space, SymbolFamily};
use crate::coeff::Rational;

pub use lower::lower;
pub use parser::parse_expression;

/// Maximum accepted expression length in bytes.
pub const MAX_EXPRESSION_BYTES: usize = 64 * 1024;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Pos {
    pub line: usize,
    pub column: usize,
}

impl fmt::Display for Pos {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}", self.line, self.column)
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ParseError {
    #[error("{pos}: {message}{}", expected_suffix(.expected))]
    Syntax { pos: Pos, message: String, expected: Vec<String> },
    #[error("{pos}: unknown symbol `{name}`")]
    UnknownSymbol { pos: Pos, name: String },
    #[error("{pos}: `{function}` takes {expected} arguments, got {got}")]
    Arity { pos: Pos, function: String, expected: usize, got: usize },
    #[error("expression is {0} bytes, limit is 65536")]
    TooLong(usize),
    #[error("{0}: expression nested too deeply")]
    TooDeep(Pos),
}

fn expected_suffix(expected: &[String]) -> String {
    if expected.is_empty() {
        String::new()
    } else {
        format!(" (expected {})", expected.join(", "))
    }
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum LowerError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("{pos}: particle {particle} out of range (system has {particles})")]
    ParticleOutOfRange { pos: Pos, particle: usize, particles: usize },
    #[error("{pos}: axis {axis} out of range (dimension {dim})")]
    AxisOutOfRange { pos: Pos, axis: char, dim: usize },
    #[error("{pos}: cross product needs dimension 3, system has {dim}")]
    CrossDimension { pos: Pos, dim: usize },
    #[error("{pos}: normfn argument must be a rational combination of position vectors")]
    NormfnArgument { pos: Pos },
}

#[derive(Clone, Debug, Error, PartialEq)]
pub enum ExprError {
    #[error(transparent)]
    Parse(#[from] ParseError),
    #[error(transparent)]
    Lower(#[from] LowerError),
}

/// Scalar-valued expression.
#[derive(Clone, Debug, PartialEq)]
pub enum Expr {
    Number(Rational),
    ImaginaryUnit,
    Component { vector: VExpr, axis: usize, pos: Pos },
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Neg(Box<Expr>),
    /// Noncommutative product, operand order preserved.
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Rational),
    Pow(Box<Expr>, u32),
    Dot(VExpr, VExpr),
    NormFn { name: String, arg: VExpr, pos: Pos },
}

/// Vector-valued expression.
#[derive(Clone, Debug, PartialEq)]
pub enum VExpr {
    Particle { kind: Kind, particle: usize, pos: Pos },
    Symbol(SymbolFamily),
    Add(Box<VExpr>, Box<VExpr>),
    Sub(Box<VExpr>, Box<VExpr>),
    Neg(Box<VExpr>),
    Scale(Rational, Box<VExpr>),
    Cross(Box<VExpr>, Box<VExpr>, Pos),
}

/// Parse and lower in one step.
pub fn parse_operator(text: &str, space: Space) -> Result<OperatorPoly, ExprError> {
    Ok(lower(&parse_expression(text)?, space)?)
}
