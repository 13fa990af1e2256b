use num_bigint::BigUint;

use super::ast::{BinOp, Expr, ExprKind, Func};
use crate::error::{Error, Result, SourceSpan};
use crate::symfun::Basis;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(BigUint),
    Ident(String),
    LParen,
    RParen,
    LBrack,
    RBrack,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    Eof,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Int(n) => format!("integer `{n}`"),
            Tok::Ident(s) => format!("identifier `{s}`"),
            Tok::Eof => "end of input".into(),
            t => format!("`{}`", t.glyph()),
        }
    }

    fn glyph(&self) -> &'static str {
        match self {
            Tok::LParen => "(",
            Tok::RParen => ")",
            Tok::LBrack => "[",
            Tok::RBrack => "]",
            Tok::Comma => ",",
            Tok::Plus => "+",
            Tok::Minus => "-",
            Tok::Star => "*",
            Tok::Slash => "/",
            Tok::Caret => "^",
            _ => "",
        }
    }
}

fn lex(input: &str) -> Result<Vec<(Tok, SourceSpan)>> {
    let bytes = input.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let tok = if c.is_ascii_digit() {
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            Tok::Int(input[start..i].parse().expect("digits"))
        } else if c.is_ascii_alphabetic() {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            Tok::Ident(input[start..i].to_string())
        } else {
            i += 1;
            match c {
                b'(' => Tok::LParen,
                b')' => Tok::RParen,
                b'[' => Tok::LBrack,
                b']' => Tok::RBrack,
                b',' => Tok::Comma,
                b'+' => Tok::Plus,
                b'-' => Tok::Minus,
                b'*' => Tok::Star,
                b'/' => Tok::Slash,
                b'^' => Tok::Caret,
                _ => {
                    let end = start + input[start..].chars().next().map_or(1, char::len_utf8);
                    return Err(Error::Syntax {
                        span: SourceSpan::new(start, end),
                        message: format!("unexpected character `{}`", &input[start..end]),
                        expected: vec!["expression".into()],
                    });
                }
            }
        };
        out.push((tok, SourceSpan::new(start, i)));
    }
    out.push((Tok::Eof, SourceSpan::new(input.len(), input.len())));
    Ok(out)
}

struct Parser {
    toks: Vec<(Tok, SourceSpan)>,
    pos: usize,
}

const PRIMARY: [&str; 5] = ["number", "identifier", "basis atom", "function call", "`(`"];

fn basis_letter(s: &str) -> Option<Basis> {
    match s {
        "e" | "h" | "p" | "m" | "s" | "H" => s.parse().ok(),
        _ => None,
    }
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].0
    }

    fn span(&self) -> SourceSpan {
        self.toks[self.pos].1
    }

    fn prev_end(&self) -> usize {
        self.toks[self.pos.saturating_sub(1)].1.end
    }

    fn bump(&mut self) -> (Tok, SourceSpan) {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn fail<T>(&self, expected: &[&str]) -> Result<T> {
        Err(Error::Syntax {
            span: self.span(),
            message: format!("unexpected {}", self.peek().describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        })
    }

    fn expect(&mut self, t: Tok) -> Result<SourceSpan> {
        if *self.peek() == t {
            Ok(self.bump().1)
        } else {
            let want = format!("`{}`", t.glyph());
            self.fail(&[&want])
        }
    }

    fn int(&mut self) -> Result<(BigUint, SourceSpan)> {
        match self.bump() {
            (Tok::Int(n), sp) => Ok((n, sp)),
            _ => {
                self.pos -= 1;
                self.fail(&["integer"])
            }
        }
    }

    fn small_int<T: TryFrom<u64>>(&mut self) -> Result<T> {
        let (n, span) = self.int()?;
        u64::try_from(&n)
            .ok()
            .and_then(|v| T::try_from(v).ok())
            .ok_or(Error::Syntax {
                span,
                message: format!("integer {n} is too large"),
                expected: vec!["smaller integer".into()],
            })
    }

    fn node(&self, kind: ExprKind, start: usize) -> Expr {
        Expr {
            kind,
            span: SourceSpan::new(start, self.prev_end()),
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let start = self.span().start;
        let mut lhs = self.term()?;
        loop {
            let op = match self.peek() {
                Tok::Plus => BinOp::Add,
                Tok::Minus => BinOp::Sub,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.term()?;
            lhs = self.node(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                start,
            );
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let start = self.span().start;
        let mut lhs = self.unary()?;
        loop {
            let op = match self.peek() {
                Tok::Star => BinOp::Mul,
                Tok::Slash => BinOp::Div,
                _ => return Ok(lhs),
            };
            self.bump();
            let rhs = self.unary()?;
            lhs = self.node(
                ExprKind::Binary {
                    op,
                    lhs: Box::new(lhs),
                    rhs: Box::new(rhs),
                },
                start,
            );
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        let start = self.span().start;
        if *self.peek() == Tok::Minus {
            self.bump();
            let e = self.unary()?;
            return Ok(self.node(ExprKind::Neg(Box::new(e)), start));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let start = self.span().start;
        let base = self.postfix()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let exp = self.small_int::<u32>()?;
        Ok(self.node(
            ExprKind::Pow {
                base: Box::new(base),
                exp,
            },
            start,
        ))
    }

    fn postfix(&mut self) -> Result<Expr> {
        let start = self.span().start;
        let mut e = self.primary()?;
        while *self.peek() == Tok::LBrack {
            self.bump();
            let arg = self.expr()?;
            self.expect(Tok::RBrack)?;
            e = self.node(
                ExprKind::Pleth {
                    f: Box::new(e),
                    arg: Box::new(arg),
                },
                start,
            );
        }
        Ok(e)
    }

    fn primary(&mut self) -> Result<Expr> {
        let start = self.span().start;
        match self.peek().clone() {
            Tok::Int(n) => {
                self.bump();
                Ok(self.node(ExprKind::Number(n), start))
            }
            Tok::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(Tok::RParen)?;
                Ok(e)
            }
            Tok::Ident(name) => {
                self.bump();
                if let Some(basis) = basis_letter(&name) {
                    self.expect(Tok::LBrack)?;
                    let mut parts = vec![self.small_int::<usize>()?];
                    while *self.peek() == Tok::Comma {
                        self.bump();
                        parts.push(self.small_int::<usize>()?);
                    }
                    if *self.peek() != Tok::RBrack {
                        return self.fail(&["`,`", "`]`"]);
                    }
                    self.bump();
                    return Ok(self.node(ExprKind::Basis { basis, parts }, start));
                }
                if let Some(func) = Func::from_name(&name) {
                    return self.call(func, start);
                }
                Ok(self.node(ExprKind::Ident(name), start))
            }
            _ => self.fail(&PRIMARY),
        }
    }

    fn call(&mut self, func: Func, start: usize) -> Result<Expr> {
        self.expect(Tok::LParen)?;
        let mut args = Vec::new();
        loop {
            if func.takes_literal() {
                let (n, sp) = self.int()?;
                args.push(Expr {
                    kind: ExprKind::Number(n),
                    span: sp,
                });
            } else {
                args.push(self.expr()?);
            }
            match self.peek() {
                Tok::Comma if args.len() < func.arity() => {
                    self.bump();
                }
                Tok::RParen if args.len() == func.arity() => {
                    self.bump();
                    break;
                }
                _ if args.len() < func.arity() => return self.fail(&["`,`"]),
                _ => return self.fail(&["`)`"]),
            }
        }
        Ok(self.node(ExprKind::Call { func, args }, start))
    }
}

/// Parses one expression; trailing input is an error.
pub fn parse(input: &str) -> Result<Expr> {
    let mut p = Parser {
        toks: lex(input)?,
        pos: 0,
    };
    let e = p.expr()?;
    if *p.peek() != Tok::Eof {
        return p.fail(&["operator", "end of input"]);
    }
    Ok(e)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn precedence() {
        let e = parse("-x^2 + a*b[X]").unwrap();
        assert_eq!(e.to_string(), "-x^2 + a*b[X]");
        let ExprKind::Binary { lhs, .. } = &e.kind else {
            panic!()
        };
        assert!(matches!(lhs.kind, ExprKind::Neg(_)));
    }

    #[test]
    fn basis_then_plethysm() {
        let e = parse("e[2][(1-u)/(1-q)]").unwrap();
        let ExprKind::Pleth { f, arg } = &e.kind else {
            panic!()
        };
        assert_eq!(
            f.kind,
            ExprKind::Basis {
                basis: Basis::E,
                parts: vec![2]
            }
        );
        assert_eq!(arg.to_string(), "(1 - u)/(1 - q)");
        assert_eq!(e.span, SourceSpan::new(0, 17));
    }

    #[test]
    fn arity_is_checked() {
        assert!(parse("pair(h[1])").is_err());
        assert!(parse("nabla(h[1], h[2])").is_err());
        assert!(parse("HH(x)").is_err());
        assert!(parse("pair(h[2,1], m[2,1])").is_ok());
    }

    #[test]
    fn error_carries_span_and_expected() {
        match parse("1 + * 2") {
            Err(Error::Syntax { span, expected, .. }) => {
                assert_eq!(span, SourceSpan::new(4, 5));
                assert!(expected.contains(&"number".to_string()));
            }
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("h[2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x^y"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("a b"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x ; y"), Err(Error::Syntax { .. })));
    }

    #[test]
    fn whitespace_is_ignored() {
        assert_eq!(
            parse(" h [ 2 , 1 ] [ X ] ").unwrap(),
            parse("h[2,1][X]").unwrap()
        );
    }
}
