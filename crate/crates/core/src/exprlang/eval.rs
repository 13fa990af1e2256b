use std::fmt;

use num_bigint::BigInt;
use serde_json::json;

use super::ast::{BinOp, Expr, ExprKind, Func};
use crate::coeff::{registry, BigRat, RatFunc};
use crate::error::{Error, Result, SourceSpan};
use crate::hlv;
use crate::macdonald;
use crate::partition::Partition;
use crate::plethysm::{self, AlphabetExpr, GradedSeries, Grading};
use crate::symfun::{Basis, MultiSymFunc, SymFunc};

/// Evaluation settings.
#[derive(Clone, Debug)]
pub struct Env {
    /// Truncation order of series results.
    pub order: usize,
    /// Coefficient variables counted in the truncation degree.
    pub small: Vec<String>,
}

impl Default for Env {
    fn default() -> Self {
        Env {
            order: 4,
            small: Vec::new(),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Kind {
    Scalar,
    Element,
    Series,
}

impl Kind {
    pub fn name(self) -> &'static str {
        match self {
            Kind::Scalar => "scalar",
            Kind::Element => "element",
            Kind::Series => "series",
        }
    }
}

impl fmt::Display for Kind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Value {
    Scalar(RatFunc),
    Element(MultiSymFunc),
    Series(GradedSeries),
}

fn type_err<T>(span: SourceSpan, message: impl Into<String>) -> Result<T> {
    Err(Error::Type {
        span,
        message: message.into(),
    })
}

/// Attaches `span` to errors raised by the underlying modules.
fn at<T>(span: SourceSpan, r: Result<T>) -> Result<T> {
    r.map_err(|e| match e {
        Error::Type { .. } | Error::Syntax { .. } => e,
        other => Error::Type {
            span,
            message: other.to_string(),
        },
    })
}

/// Static kind of `e`, rejecting ill-typed trees before any computation.
pub fn check(e: &Expr) -> Result<Kind> {
    let sp = e.span;
    Ok(match &e.kind {
        ExprKind::Number(_) => Kind::Scalar,
        ExprKind::Ident(s) => {
            if s.starts_with(|c: char| c.is_ascii_uppercase()) {
                Kind::Element
            } else {
                Kind::Scalar
            }
        }
        ExprKind::Basis { .. } => Kind::Element,
        ExprKind::Neg(x) => check(x)?,
        ExprKind::Pow { base, .. } => check(base)?,
        ExprKind::Binary { op, lhs, rhs } => {
            let (a, b) = (check(lhs)?, check(rhs)?);
            if *op == BinOp::Div && b != Kind::Scalar {
                return type_err(rhs.span, format!("cannot divide by a {b}"));
            }
            a.max(b)
        }
        ExprKind::Pleth { f, arg } => {
            let (a, b) = (check(f)?, check(arg)?);
            if a == Kind::Series {
                return type_err(f.span, "plethysm of a series is not supported");
            }
            if b == Kind::Series {
                return type_err(arg.span, "a series cannot be substituted as an alphabet");
            }
            if a == Kind::Scalar {
                Kind::Scalar
            } else {
                b
            }
        }
        ExprKind::Call { func, args } => {
            let kinds = args.iter().map(check).collect::<Result<Vec<_>>>()?;
            let want_sym = |i: usize| {
                if kinds[i] == Kind::Series {
                    type_err(
                        args[i].span,
                        format!(
                            "{} expects a symmetric function, found a series",
                            func.name()
                        ),
                    )
                } else {
                    Ok(())
                }
            };
            match func {
                Func::PExp | Func::PLog => Kind::Series,
                Func::Pair | Func::MPair => {
                    want_sym(0)?;
                    want_sym(1)?;
                    Kind::Scalar
                }
                Func::Nabla | Func::T => {
                    want_sym(0)?;
                    Kind::Element
                }
                Func::Tstar | Func::V | Func::Vstar => {
                    want_sym(0)?;
                    Kind::Series
                }
                Func::Omega | Func::HH => {
                    let ExprKind::Number(k) = &args[0].kind else {
                        return type_err(sp, "expected an integer literal");
                    };
                    let ok = u64::try_from(k).is_ok_and(|k| (1..=hlv::MAX_K as u64).contains(&k));
                    if !ok {
                        return type_err(
                            args[0].span,
                            format!("number of alphabets must lie in 1..={}", hlv::MAX_K),
                        );
                    }
                    Kind::Series
                }
            }
        }
    })
}

/// Evaluates `e`. Small variables of `env` are declared first.
pub fn evaluate(e: &Expr, env: &Env) -> Result<Value> {
    check(e)?;
    for name in &env.small {
        registry::declare_small(name)?;
    }
    Evaluator { env }.eval(e)
}

struct Evaluator<'a> {
    env: &'a Env,
}

impl Evaluator<'_> {
    fn eval(&self, e: &Expr) -> Result<Value> {
        let sp = e.span;
        match &e.kind {
            ExprKind::Number(n) => Ok(Value::Scalar(RatFunc::from_rational(BigRat::from_integer(
                BigInt::from(n.clone()),
            )))),
            ExprKind::Ident(s) => {
                if s.starts_with(|c: char| c.is_ascii_uppercase()) {
                    Ok(Value::Element(MultiSymFunc::symbol(s)))
                } else {
                    Ok(Value::Scalar(at(sp, RatFunc::named(s))?))
                }
            }
            ExprKind::Basis { basis, parts } => {
                let l = self.partition(parts, sp)?;
                let f = at(sp, SymFunc::from_basis(*basis, &l))?;
                Ok(Value::Element(MultiSymFunc::from_sym(&f, "X")))
            }
            ExprKind::Neg(x) => Ok(match self.eval(x)? {
                Value::Scalar(c) => Value::Scalar(-&c),
                Value::Element(m) => Value::Element(-&m),
                Value::Series(s) => Value::Series(s.neg()),
            }),
            ExprKind::Binary { op, lhs, rhs } => {
                let (a, b) = (self.eval(lhs)?, self.eval(rhs)?);
                at(sp, self.binary(*op, a, b))
            }
            ExprKind::Pow { base, exp } => {
                let b = self.eval(base)?;
                if let Value::Scalar(c) = &b {
                    let e = i32::try_from(*exp).or_else(|_| type_err(sp, "exponent too large"))?;
                    return Ok(Value::Scalar(at(sp, c.pow(e))?));
                }
                let mut acc = Value::Scalar(RatFunc::one());
                for _ in 0..*exp {
                    acc = at(sp, self.binary(BinOp::Mul, acc, b.clone()))?;
                }
                Ok(acc)
            }
            ExprKind::Pleth { f, arg } => {
                let (fv, av) = (self.eval(f)?, self.eval(arg)?);
                let fs = match fv {
                    Value::Scalar(c) => return Ok(Value::Scalar(c)),
                    v => self.sym(v, f.span)?,
                };
                match av {
                    Value::Scalar(c) => Ok(Value::Scalar(plethysm::pleth_scalar(&fs, &c))),
                    Value::Element(m) => {
                        let a = at(arg.span, AlphabetExpr::from_element(&m))?;
                        Ok(Value::Element(plethysm::pleth(&fs, &a)))
                    }
                    Value::Series(_) => type_err(arg.span, "a series cannot be substituted"),
                }
            }
            ExprKind::Call { func, args } => self.call(*func, args, sp),
        }
    }

    fn partition(&self, parts: &[usize], sp: SourceSpan) -> Result<Partition> {
        let nonzero: Vec<usize> = parts.iter().copied().filter(|&x| x > 0).collect();
        if nonzero.len() != parts.len() && nonzero.len() + 1 != parts.len().max(1) {
            return type_err(sp, "zero parts are only allowed as the single index 0");
        }
        at(sp, Partition::new(nonzero))
    }

    fn sym(&self, v: Value, sp: SourceSpan) -> Result<SymFunc> {
        match v {
            Value::Scalar(c) => Ok(SymFunc::constant(c)),
            Value::Element(m) => match m.to_sym() {
                Some(f) => Ok(f),
                None => type_err(
                    sp,
                    format!(
                        "expected a function of one alphabet, found one in {}",
                        m.alphabets().join(", ")
                    ),
                ),
            },
            Value::Series(_) => type_err(sp, "expected a symmetric function, found a series"),
        }
    }

    fn series_like(&self, v: Value, like: &GradedSeries) -> Result<GradedSeries> {
        match v {
            Value::Series(s) => Ok(s),
            Value::Scalar(c) => GradedSeries::from_element(
                &MultiSymFunc::scalar(c),
                like.order(),
                like.grading().clone(),
            ),
            Value::Element(m) => {
                GradedSeries::from_element(&m, like.order(), like.grading().clone())
            }
        }
    }

    fn binary(&self, op: BinOp, a: Value, b: Value) -> Result<Value> {
        use Value::*;
        if op == BinOp::Div {
            let Scalar(c) = b else {
                return Err(Error::Precondition("divisor must be a scalar".into()));
            };
            let r = c.recip()?;
            return Ok(match a {
                Scalar(x) => Scalar(&x * &r),
                Element(m) => Element(m.scale(&r)),
                Series(s) => Series(s.scale(&r)?),
            });
        }
        Ok(match (a, b) {
            (Scalar(x), Scalar(y)) => Scalar(match op {
                BinOp::Add => &x + &y,
                BinOp::Sub => &x - &y,
                _ => &x * &y,
            }),
            (Series(s), Scalar(c)) | (Scalar(c), Series(s)) if op == BinOp::Mul => {
                Series(s.scale(&c)?)
            }
            (Series(s), other) => {
                let o = self.series_like(other, &s)?;
                Series(series_op(op, &s, &o)?)
            }
            (other, Series(s)) => {
                let o = self.series_like(other, &s)?;
                Series(series_op(op, &o, &s)?)
            }
            (x, y) => {
                let (x, y) = (element(x), element(y));
                Element(match op {
                    BinOp::Add => &x + &y,
                    BinOp::Sub => &x - &y,
                    _ => &x * &y,
                })
            }
        })
    }

    fn call(&self, func: Func, args: &[Expr], sp: SourceSpan) -> Result<Value> {
        let n = self.env.order;
        if func.takes_literal() {
            let ExprKind::Number(k) = &args[0].kind else {
                return type_err(sp, "expected an integer literal");
            };
            let k = usize::try_from(k).or_else(|_| type_err(args[0].span, "too many alphabets"))?;
            let m = match func {
                Func::Omega => {
                    let id = hlv::SlotSubstitution::identity(k);
                    let mut acc = MultiSymFunc::zero(MultiSymFunc::default_alphabets(k));
                    for d in 0..=n {
                        acc = acc + at(sp, hlv::omega(d, &id))?;
                    }
                    acc
                }
                _ => (*at(sp, hlv::hh(k, n))?).clone(),
            };
            let first = MultiSymFunc::default_alphabets(k)[0].clone();
            return Ok(Value::Series(GradedSeries::from_element(
                &m,
                n,
                Grading::Alphabet(first),
            )?));
        }
        let vals = args
            .iter()
            .map(|a| self.eval(a))
            .collect::<Result<Vec<_>>>()?;
        let mut vals = vals.into_iter();
        let mut next = || vals.next().expect("arity checked by parser");
        match func {
            Func::PExp => {
                let s = match next() {
                    Value::Series(s) => at(sp, s.pexp())?,
                    v => {
                        let a = at(args[0].span, AlphabetExpr::from_element(&element(v)))?;
                        at(sp, plethysm::pexp(&a, n))?
                    }
                };
                Ok(Value::Series(s))
            }
            Func::PLog => {
                let s = match next() {
                    Value::Series(s) => s,
                    v => at(
                        sp,
                        GradedSeries::from_element(&element(v), n, Grading::Total),
                    )?,
                };
                Ok(Value::Series(at(sp, s.plog())?))
            }
            Func::Pair | Func::MPair => {
                let f = self.sym(next(), args[0].span)?;
                let g = self.sym(next(), args[1].span)?;
                Ok(Value::Scalar(if func == Func::Pair {
                    f.hall_pair(&g)
                } else {
                    macdonald::macdonald_pair(&f, &g)
                }))
            }
            _ => {
                let f = self.sym(next(), args[0].span)?;
                Ok(match func {
                    Func::Nabla => {
                        Value::Element(MultiSymFunc::from_sym(&at(sp, macdonald::nabla(&f))?, "X"))
                    }
                    Func::T => Value::Element(MultiSymFunc::from_sym(&macdonald::op_t(&f), "X")),
                    Func::Tstar => Value::Series(at(sp, macdonald::op_tstar(&f, n))?),
                    Func::V => Value::Series(at(sp, macdonald::op_v(&f, n))?),
                    _ => Value::Series(at(sp, macdonald::op_vstar(&f, n))?),
                })
            }
        }
    }
}

fn element(v: Value) -> MultiSymFunc {
    match v {
        Value::Scalar(c) => MultiSymFunc::scalar(c),
        Value::Element(m) => m,
        Value::Series(s) => s.to_element(),
    }
}

fn series_op(op: BinOp, a: &GradedSeries, b: &GradedSeries) -> Result<GradedSeries> {
    match op {
        BinOp::Add => a.add(b),
        BinOp::Sub => a.sub(b),
        _ => a.mul(b),
    }
}

/// `m` as a function of `X` when its declared alphabets allow it.
fn in_x(m: &MultiSymFunc) -> Option<SymFunc> {
    match m.alphabets() {
        [] => m.to_sym(),
        [a] if a == "X" => m.to_sym(),
        _ => None,
    }
}

fn element_text(m: &MultiSymFunc, b: Basis) -> Result<String> {
    match in_x(m) {
        Some(f) => f.to_text(b),
        None => Ok(m.to_string()),
    }
}

fn element_json(m: &MultiSymFunc, b: Basis) -> Result<serde_json::Value> {
    match in_x(m) {
        Some(f) => f.to_json(b),
        None => Ok(m.to_json(None)),
    }
}

impl Value {
    pub fn kind(&self) -> Kind {
        match self {
            Value::Scalar(_) => Kind::Scalar,
            Value::Element(_) => Kind::Element,
            Value::Series(_) => Kind::Series,
        }
    }

    /// Canonical text; functions of `X` are expanded in `b`.
    pub fn to_text(&self, b: Basis) -> Result<String> {
        match self {
            Value::Scalar(c) => Ok(c.to_string()),
            Value::Element(m) => element_text(m, b),
            Value::Series(s) => Ok(format!(
                "{} + O({})",
                element_text(&s.to_element(), b)?,
                s.order() + 1
            )),
        }
    }

    pub fn to_json(&self, b: Basis) -> Result<serde_json::Value> {
        Ok(match self {
            Value::Scalar(c) => json!({"kind": "scalar", "value": c.to_string()}),
            Value::Element(m) => json!({"kind": "element", "value": element_json(m, b)?}),
            Value::Series(s) => {
                let grading = match s.grading() {
                    Grading::Total => json!("total"),
                    Grading::Alphabet(a) => json!({"alphabet": a}),
                };
                let parts = s
                    .parts()
                    .iter()
                    .map(|p| element_json(p, b))
                    .collect::<Result<Vec<_>>>()?;
                json!({"kind": "series", "order": s.order(), "grading": grading, "parts": parts})
            }
        })
    }
}

impl fmt::Display for Value {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.to_text(Basis::P) {
            Ok(s) => f.write_str(&s),
            Err(_) => Err(fmt::Error),
        }
    }
}
