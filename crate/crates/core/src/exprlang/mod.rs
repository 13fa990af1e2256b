//! A small text language for plethystic expressions.
//!
//! ```text
//! e[2][(1-u)/(1-q)]      pair(h[2,1], m[2,1])      pLog(1 + X*Y)
//! ```

mod ast;
mod eval;
mod parser;

pub use ast::{BinOp, Expr, ExprKind, Func};
pub use eval::{check, evaluate, Env, Kind, Value};
pub use parser::parse;

use crate::error::Result;

/// Parses and evaluates `input` in `env`.
pub fn eval_str(input: &str, env: &Env) -> Result<Value> {
    evaluate(&parse(input)?, env)
}
