use std::fmt;

use num_bigint::BigUint;

use crate::error::SourceSpan;
use crate::symfun::Basis;

/// A syntax tree node. Equality ignores spans.
#[derive(Clone, Debug)]
pub struct Expr {
    pub kind: ExprKind,
    pub span: SourceSpan,
}

impl PartialEq for Expr {
    fn eq(&self, other: &Self) -> bool {
        self.kind == other.kind
    }
}

impl Eq for Expr {}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ExprKind {
    Number(BigUint),
    /// Lower-case names are coefficient variables, upper-case ones alphabets.
    Ident(String),
    Basis {
        basis: Basis,
        parts: Vec<usize>,
    },
    Neg(Box<Expr>),
    Binary {
        op: BinOp,
        lhs: Box<Expr>,
        rhs: Box<Expr>,
    },
    Pow {
        base: Box<Expr>,
        exp: u32,
    },
    /// `f[arg]`
    Pleth {
        f: Box<Expr>,
        arg: Box<Expr>,
    },
    Call {
        func: Func,
        args: Vec<Expr>,
    },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
}

impl BinOp {
    fn symbol(self) -> &'static str {
        match self {
            BinOp::Add => " + ",
            BinOp::Sub => " - ",
            BinOp::Mul => "*",
            BinOp::Div => "/",
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Func {
    PExp,
    PLog,
    Pair,
    MPair,
    Nabla,
    T,
    Tstar,
    V,
    Vstar,
    Omega,
    HH,
}

impl Func {
    pub const ALL: [Func; 11] = [
        Func::PExp,
        Func::PLog,
        Func::Pair,
        Func::MPair,
        Func::Nabla,
        Func::T,
        Func::Tstar,
        Func::V,
        Func::Vstar,
        Func::Omega,
        Func::HH,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::PExp => "pExp",
            Func::PLog => "pLog",
            Func::Pair => "pair",
            Func::MPair => "mpair",
            Func::Nabla => "nabla",
            Func::T => "T",
            Func::Tstar => "Tstar",
            Func::V => "V",
            Func::Vstar => "Vstar",
            Func::Omega => "omega",
            Func::HH => "HH",
        }
    }

    pub fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }

    pub fn arity(self) -> usize {
        match self {
            Func::Pair | Func::MPair => 2,
            _ => 1,
        }
    }

    /// `omega(k)` and `HH(k)` take an integer literal.
    pub fn takes_literal(self) -> bool {
        matches!(self, Func::Omega | Func::HH)
    }
}

impl Expr {
    /// A node with an empty span, for building trees by hand.
    pub fn new(kind: ExprKind) -> Expr {
        Expr {
            kind,
            span: SourceSpan::default(),
        }
    }

    pub fn number(n: u64) -> Expr {
        Expr::new(ExprKind::Number(n.into()))
    }

    pub fn ident(s: &str) -> Expr {
        Expr::new(ExprKind::Ident(s.to_string()))
    }

    pub fn basis(basis: Basis, parts: Vec<usize>) -> Expr {
        Expr::new(ExprKind::Basis { basis, parts })
    }

    pub fn negate(e: Expr) -> Expr {
        Expr::new(ExprKind::Neg(Box::new(e)))
    }

    pub fn binary(op: BinOp, lhs: Expr, rhs: Expr) -> Expr {
        Expr::new(ExprKind::Binary {
            op,
            lhs: Box::new(lhs),
            rhs: Box::new(rhs),
        })
    }

    pub fn pow(base: Expr, exp: u32) -> Expr {
        Expr::new(ExprKind::Pow {
            base: Box::new(base),
            exp,
        })
    }

    pub fn pleth(f: Expr, arg: Expr) -> Expr {
        Expr::new(ExprKind::Pleth {
            f: Box::new(f),
            arg: Box::new(arg),
        })
    }

    pub fn call(func: Func, args: Vec<Expr>) -> Expr {
        Expr::new(ExprKind::Call { func, args })
    }

    fn precedence(&self) -> u8 {
        match &self.kind {
            ExprKind::Binary {
                op: BinOp::Add | BinOp::Sub,
                ..
            } => 1,
            ExprKind::Binary { .. } => 2,
            ExprKind::Neg(_) => 3,
            ExprKind::Pow { .. } => 4,
            ExprKind::Pleth { .. } => 5,
            _ => 6,
        }
    }

    fn write(&self, f: &mut fmt::Formatter<'_>, min: u8) -> fmt::Result {
        let paren = self.precedence() < min;
        if paren {
            f.write_str("(")?;
        }
        match &self.kind {
            ExprKind::Number(n) => write!(f, "{n}")?,
            ExprKind::Ident(s) => f.write_str(s)?,
            ExprKind::Basis { basis, parts } => {
                let idx: Vec<String> = parts.iter().map(usize::to_string).collect();
                write!(f, "{}[{}]", basis.letter(), idx.join(","))?;
            }
            ExprKind::Neg(e) => {
                f.write_str("-")?;
                e.write(f, 3)?;
            }
            ExprKind::Binary { op, lhs, rhs } => {
                let p = self.precedence();
                lhs.write(f, p)?;
                f.write_str(op.symbol())?;
                rhs.write(f, p + 1)?;
            }
            ExprKind::Pow { base, exp } => {
                base.write(f, 5)?;
                write!(f, "^{exp}")?;
            }
            ExprKind::Pleth { f: g, arg } => {
                g.write(f, 5)?;
                f.write_str("[")?;
                arg.write(f, 0)?;
                f.write_str("]")?;
            }
            ExprKind::Call { func, args } => {
                write!(f, "{}(", func.name())?;
                for (i, a) in args.iter().enumerate() {
                    if i > 0 {
                        f.write_str(", ")?;
                    }
                    a.write(f, 0)?;
                }
                f.write_str(")")?;
            }
        }
        if paren {
            f.write_str(")")?;
        }
        Ok(())
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.write(f, 0)
    }
}
