//! A small expression language for bound functions of one variable `x`.
//!
//! Grammar, loosest binding first:
//!
//! ```text
//! sum     := product (('+' | '-') product)*
//! product := power (('*' | '/') power)*
//! power   := unary ('^' power)?          right associative
//! unary   := '-' unary | atom
//! atom    := number | 'x' | ('exp' | 'log') '(' sum ')' | '(' sum ')'
//! ```
//!
//! Unary minus binds tighter than `^`, so `-x^2` is `(-x)^2`.

use std::fmt;
use std::str::FromStr;

use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ParseError {
    #[error("syntax error at offset {pos}: {message}")]
    Syntax { pos: usize, message: String },
    #[error("unknown identifier {name:?} at offset {pos}")]
    UnknownIdentifier { pos: usize, name: String },
}

impl ParseError {
    pub fn position(&self) -> usize {
        match self {
            ParseError::Syntax { pos, .. } | ParseError::UnknownIdentifier { pos, .. } => *pos,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
#[error("cannot evaluate {expr} at x = {x}: {reason}")]
pub struct EvalError {
    pub expr: String,
    pub x: f64,
    pub reason: String,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BinOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

impl BinOp {
    fn symbol(self) -> char {
        match self {
            BinOp::Add => '+',
            BinOp::Sub => '-',
            BinOp::Mul => '*',
            BinOp::Div => '/',
            BinOp::Pow => '^',
        }
    }

    fn precedence(self) -> u8 {
        match self {
            BinOp::Add | BinOp::Sub => 1,
            BinOp::Mul | BinOp::Div => 2,
            BinOp::Pow => 3,
        }
    }
}

const NEG_PREC: u8 = 4;
const ATOM_PREC: u8 = 5;

#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Var,
    Num(f64),
    Neg(Box<Expr>),
    Bin(BinOp, Box<Expr>, Box<Expr>),
    Call(Func, Box<Expr>),
}

impl Expr {
    pub fn parse(text: &str) -> Result<Expr, ParseError> {
        let tokens = lex(text)?;
        let mut p = Parser {
            tokens,
            pos: 0,
            end: text.len(),
        };
        if p.tokens.is_empty() {
            return Err(ParseError::Syntax {
                pos: 0,
                message: "empty expression".into(),
            });
        }
        let e = p.sum()?;
        if let Some(tok) = p.peek() {
            return Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("unexpected {}", tok.kind),
            });
        }
        Ok(e)
    }

    pub fn bin(op: BinOp, a: Expr, b: Expr) -> Expr {
        Expr::Bin(op, Box::new(a), Box::new(b))
    }

    /// Evaluates at `x`; any non-finite intermediate is an error.
    pub fn eval(&self, x: f64) -> Result<f64, EvalError> {
        self.eval_inner(x).map_err(|reason| EvalError {
            expr: self.to_string(),
            x,
            reason,
        })
    }

    fn eval_inner(&self, x: f64) -> Result<f64, String> {
        let v = match self {
            Expr::Var => x,
            Expr::Num(v) => *v,
            Expr::Neg(a) => -a.eval_inner(x)?,
            Expr::Bin(op, a, b) => {
                let (a, b) = (a.eval_inner(x)?, b.eval_inner(x)?);
                match op {
                    BinOp::Add => a + b,
                    BinOp::Sub => a - b,
                    BinOp::Mul => a * b,
                    BinOp::Div => {
                        if b == 0.0 {
                            return Err("division by zero".into());
                        }
                        a / b
                    }
                    BinOp::Pow => {
                        let v = a.powf(b);
                        if v.is_nan() {
                            return Err(format!("{a}^{b} is not real"));
                        }
                        v
                    }
                }
            }
            Expr::Call(f, a) => {
                let a = a.eval_inner(x)?;
                match f {
                    Func::Exp => a.exp(),
                    Func::Log => {
                        if a <= 0.0 {
                            return Err(format!("log of nonpositive {a}"));
                        }
                        a.ln()
                    }
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(format!("non-finite result {v} (overflow)"))
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Bin(op, ..) => op.precedence(),
            Expr::Neg(_) => NEG_PREC,
            Expr::Num(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => NEG_PREC,
            _ => ATOM_PREC,
        }
    }

    fn write_at(&self, f: &mut fmt::Formatter<'_>, min_prec: u8) -> fmt::Result {
        let paren = self.precedence() < min_prec;
        if paren {
            f.write_str("(")?;
        }
        match self {
            Expr::Var => f.write_str("x")?,
            Expr::Num(v) => write!(f, "{v:?}")?,
            Expr::Neg(a) => {
                f.write_str("-")?;
                a.write_at(f, NEG_PREC)?;
            }
            Expr::Bin(op, a, b) => {
                let p = op.precedence();
                // left-assoc ops need a tighter right operand; ^ is the mirror
                let (lp, rp) = match op {
                    BinOp::Pow => (NEG_PREC, p),
                    _ => (p, p + 1),
                };
                a.write_at(f, lp)?;
                if *op == BinOp::Pow {
                    write!(f, "{}", op.symbol())?;
                } else {
                    write!(f, " {} ", op.symbol())?;
                }
                b.write_at(f, rp)?;
            }
            Expr::Call(func, a) => {
                write!(f, "{}(", func.name())?;
                a.write_at(f, 0)?;
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
        self.write_at(f, 0)
    }
}

impl FromStr for Expr {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Expr::parse(s)
    }
}

#[derive(Debug, Clone, PartialEq)]
enum TokKind {
    Num(f64),
    Ident(String),
    Op(char),
    LParen,
    RParen,
}

impl fmt::Display for TokKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TokKind::Num(v) => write!(f, "number {v}"),
            TokKind::Ident(s) => write!(f, "identifier {s:?}"),
            TokKind::Op(c) => write!(f, "'{c}'"),
            TokKind::LParen => f.write_str("'('"),
            TokKind::RParen => f.write_str("')'"),
        }
    }
}

#[derive(Debug, Clone)]
struct Token {
    kind: TokKind,
    pos: usize,
}

fn lex(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut out = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i] as char;
        if c.is_ascii_whitespace() {
            i += 1;
            continue;
        }
        let start = i;
        if c.is_ascii_digit() || c == '.' {
            while i < bytes.len() && (bytes[i].is_ascii_digit() || bytes[i] == b'.') {
                i += 1;
            }
            if i < bytes.len() && (bytes[i] == b'e' || bytes[i] == b'E') {
                let mut j = i + 1;
                if j < bytes.len() && (bytes[j] == b'+' || bytes[j] == b'-') {
                    j += 1;
                }
                if j < bytes.len() && bytes[j].is_ascii_digit() {
                    while j < bytes.len() && bytes[j].is_ascii_digit() {
                        j += 1;
                    }
                    i = j;
                }
            }
            let lit = &text[start..i];
            let v: f64 = lit.parse().map_err(|_| ParseError::Syntax {
                pos: start,
                message: format!("malformed number {lit:?}"),
            })?;
            out.push(Token {
                kind: TokKind::Num(v),
                pos: start,
            });
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                i += 1;
            }
            out.push(Token {
                kind: TokKind::Ident(text[start..i].to_string()),
                pos: start,
            });
            continue;
        }
        let kind = match c {
            '+' | '-' | '*' | '/' | '^' => TokKind::Op(c),
            '(' => TokKind::LParen,
            ')' => TokKind::RParen,
            _ => {
                let ch = text[start..].chars().next().unwrap();
                return Err(ParseError::Syntax {
                    pos: start,
                    message: format!("unexpected character {ch:?}"),
                });
            }
        };
        out.push(Token { kind, pos: start });
        i += 1;
    }
    Ok(out)
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos)
    }

    fn peek_op(&self) -> Option<char> {
        match self.peek() {
            Some(Token {
                kind: TokKind::Op(c),
                ..
            }) => Some(*c),
            _ => None,
        }
    }

    fn here(&self) -> usize {
        self.peek().map_or(self.end, |t| t.pos)
    }

    fn sum(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.product()?;
        while let Some(c @ ('+' | '-')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.product()?;
            let op = if c == '+' { BinOp::Add } else { BinOp::Sub };
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.power()?;
        while let Some(c @ ('*' | '/')) = self.peek_op() {
            self.pos += 1;
            let rhs = self.power()?;
            let op = if c == '*' { BinOp::Mul } else { BinOp::Div };
            lhs = Expr::bin(op, lhs, rhs);
        }
        Ok(lhs)
    }

    fn power(&mut self) -> Result<Expr, ParseError> {
        let base = self.unary()?;
        if self.peek_op() == Some('^') {
            self.pos += 1;
            let exp = self.power()?;
            return Ok(Expr::bin(BinOp::Pow, base, exp));
        }
        Ok(base)
    }

    fn unary(&mut self) -> Result<Expr, ParseError> {
        if self.peek_op() == Some('-') {
            self.pos += 1;
            return Ok(Expr::Neg(Box::new(self.unary()?)));
        }
        self.atom()
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        match self.peek() {
            Some(Token {
                kind: TokKind::RParen,
                ..
            }) => {
                self.pos += 1;
                Ok(())
            }
            Some(tok) => Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("expected ')', found {}", tok.kind),
            }),
            None => Err(ParseError::Syntax {
                pos: self.end,
                message: "expected ')', found end of input".into(),
            }),
        }
    }

    fn atom(&mut self) -> Result<Expr, ParseError> {
        let pos = self.here();
        let Some(tok) = self.peek().cloned() else {
            return Err(ParseError::Syntax {
                pos,
                message: "unexpected end of input".into(),
            });
        };
        self.pos += 1;
        match tok.kind {
            TokKind::Num(v) => Ok(Expr::Num(v)),
            TokKind::LParen => {
                let e = self.sum()?;
                self.expect_rparen()?;
                Ok(e)
            }
            TokKind::Ident(name) => {
                let func = match name.as_str() {
                    "x" => return Ok(Expr::Var),
                    "exp" => Func::Exp,
                    "log" => Func::Log,
                    _ => return Err(ParseError::UnknownIdentifier { pos: tok.pos, name }),
                };
                match self.peek() {
                    Some(Token {
                        kind: TokKind::LParen,
                        ..
                    }) => self.pos += 1,
                    _ => {
                        return Err(ParseError::Syntax {
                            pos: self.here(),
                            message: format!("expected '(' after {name}"),
                        })
                    }
                }
                let arg = self.sum()?;
                self.expect_rparen()?;
                Ok(Expr::Call(func, Box::new(arg)))
            }
            other => Err(ParseError::Syntax {
                pos: tok.pos,
                message: format!("unexpected {other}"),
            }),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn parse(s: &str) -> Expr {
        Expr::parse(s).unwrap()
    }

    #[test]
    fn parses_reciprocal_square() {
        assert_eq!(
            parse("1/x^2"),
            Expr::bin(
                BinOp::Div,
                Expr::Num(1.0),
                Expr::bin(BinOp::Pow, Expr::Var, Expr::Num(2.0))
            )
        );
    }

    #[test]
    fn evaluates_examples() {
        assert_eq!(parse("2*x + 3").eval(2.0).unwrap(), 7.0);
        assert_eq!(parse("1/x^2").eval(2.0).unwrap(), 0.25);
        assert_eq!(parse("x").eval(6.0 / 7.0).unwrap(), 6.0 / 7.0);
        assert!(parse("log(x)").eval(0.0).is_err());
        assert!(parse("1/x").eval(0.0).is_err());
        assert!(parse("exp(x)").eval(1000.0).is_err());
        assert!(parse("x^0.5").eval(-1.0).is_err());
    }

    #[test]
    fn unclosed_paren_reports_offset() {
        let e = Expr::parse("1/(x").unwrap_err();
        assert_eq!(e.position(), 4);
        assert!(matches!(e, ParseError::Syntax { .. }));
    }

    #[test]
    fn unknown_identifier() {
        let e = Expr::parse("2*sin(x)").unwrap_err();
        assert_eq!(
            e,
            ParseError::UnknownIdentifier {
                pos: 2,
                name: "sin".into()
            }
        );
    }

    #[test]
    fn precedence_and_associativity() {
        // unary minus binds tighter than ^
        assert_eq!(parse("-x^2").eval(3.0).unwrap(), 9.0);
        assert_eq!(parse("-(x^2)").eval(3.0).unwrap(), -9.0);
        assert_eq!(parse("2^3^2").eval(1.0).unwrap(), 512.0);
        assert_eq!(parse("8 - 3 - 2").eval(1.0).unwrap(), 3.0);
        assert_eq!(parse("8 / 4 / 2").eval(1.0).unwrap(), 1.0);
        assert_eq!(parse("2^-1").eval(1.0).unwrap(), 0.5);
        assert_eq!(parse("1e-3*x").eval(2.0).unwrap(), 2e-3);
    }

    #[test]
    fn printer_inserts_needed_parens() {
        for s in [
            "-(x^2)",
            "(x + 1)*(x - 1)",
            "8 - (3 - 2)",
            "(2^3)^2",
            "-1/x^2",
            "exp(-x)*log(x + 1)",
        ] {
            let e = parse(s);
            let printed = e.to_string();
            assert_eq!(parse(&printed), e, "{s} printed as {printed}");
        }
        assert_eq!(parse("1/x^2").to_string(), "1.0 / x^2.0");
    }

    #[test]
    fn malformed_inputs_are_positioned() {
        for (s, pos) in [
            ("", 0),
            ("x +", 3),
            ("(x", 2),
            ("x)", 1),
            ("2 $ x", 2),
            ("exp x", 4),
            ("1..2", 0),
            ("x ^ ^ 2", 4),
        ] {
            let e = Expr::parse(s).unwrap_err();
            assert_eq!(e.position(), pos, "{s:?}: {e}");
        }
    }
}
