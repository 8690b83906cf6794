//! A small language of analytic expressions in `z`.
//!
//! ```text
//! expr    := expr ('+' | '-') expr | expr ('*' | '/') expr
//!          | '-' expr | expr '^' expr | atom
//! atom    := number | 'pi' | 'e' | 'i' | 'z' | name '(' expr ')' | '(' expr ')'
//! name    := exp | log | sin | cos | tan | sec | sinh | cosh | sqrt
//! number  := digits ['.' digits] [('e' | 'E') ['+' | '-'] digits]
//! ```
//!
//! Precedence from low to high is `+ -`, `* /`, unary `-`, `^`; `^` is
//! right-associative, so `-z^2` is `-(z^2)` and `2^3^2` is `2^9`. There is
//! no implicit multiplication. `log`, `sqrt` and non-integer powers use
//! principal branches, `w^p = exp(p log w)`.

use alloc::boxed::Box;
use alloc::string::{String, ToString};
use alloc::sync::Arc;
use alloc::vec::Vec;
use core::fmt;

use num_complex::Complex64;
#[allow(unused_imports)]
use num_traits::Float;

use crate::quad::AnalyticFunction;

/// Byte range `[start, end)` in the source text.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Span {
    pub start: usize,
    pub end: usize,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Constant {
    Pi,
    E,
    I,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum BinaryOp {
    Add,
    Sub,
    Mul,
    Div,
    Pow,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Func {
    Exp,
    Log,
    Sin,
    Cos,
    Tan,
    Sec,
    Sinh,
    Cosh,
    Sqrt,
}

impl Func {
    const ALL: [Func; 9] = [
        Func::Exp,
        Func::Log,
        Func::Sin,
        Func::Cos,
        Func::Tan,
        Func::Sec,
        Func::Sinh,
        Func::Cosh,
        Func::Sqrt,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
            Func::Tan => "tan",
            Func::Sec => "sec",
            Func::Sinh => "sinh",
            Func::Cosh => "cosh",
            Func::Sqrt => "sqrt",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Func::ALL.into_iter().find(|f| f.name() == s)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Node {
    Number(f64),
    Constant(Constant),
    Var,
    Neg(Box<Expression>),
    Binary(BinaryOp, Box<Expression>, Box<Expression>),
    Call(Func, Box<Expression>),
}

/// A parsed expression; each node keeps the span it was parsed from.
#[derive(Clone, Debug, PartialEq)]
pub struct Expression {
    pub node: Node,
    pub span: Span,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ParseErrorKind {
    UnexpectedCharacter(char),
    UnexpectedToken { found: String, expected: Vec<&'static str> },
    UnknownIdentifier(String),
    InvalidNumber,
    TooDeep,
}

/// Syntax error at a byte offset.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{kind} at byte {offset}")]
pub struct ParseError {
    pub offset: usize,
    pub kind: ParseErrorKind,
}

impl fmt::Display for ParseErrorKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ParseErrorKind::UnexpectedCharacter(c) => write!(f, "unexpected character {c:?}"),
            ParseErrorKind::UnexpectedToken { found, expected } => {
                write!(f, "unexpected {found}, expected one of: {}", expected.join(", "))
            }
            ParseErrorKind::UnknownIdentifier(s) => write!(f, "unknown identifier `{s}`"),
            ParseErrorKind::InvalidNumber => f.write_str("invalid number"),
            ParseErrorKind::TooDeep => f.write_str("expression nested too deeply"),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum EvalErrorKind {
    DivisionByZero,
    LogOfZero,
    NonFinite,
}

/// Evaluation failure at the node covering `span`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, thiserror::Error)]
#[error("{} at bytes {}..{}", match kind {
    EvalErrorKind::DivisionByZero => "division by zero",
    EvalErrorKind::LogOfZero => "logarithm of zero",
    EvalErrorKind::NonFinite => "non-finite value",
}, span.start, span.end)]
pub struct EvalError {
    pub span: Span,
    pub kind: EvalErrorKind,
}

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Num(f64),
    Ident(String),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::Num(_) => "number".to_string(),
            Tok::Ident(s) => alloc::format!("identifier `{s}`"),
            Tok::Plus => "`+`".to_string(),
            Tok::Minus => "`-`".to_string(),
            Tok::Star => "`*`".to_string(),
            Tok::Slash => "`/`".to_string(),
            Tok::Caret => "`^`".to_string(),
            Tok::LParen => "`(`".to_string(),
            Tok::RParen => "`)`".to_string(),
            Tok::End => "end of input".to_string(),
        }
    }
}

const MAX_DEPTH: usize = 256;
const OPERAND: &[&str] = &["number", "identifier", "`(`", "`-`"];
const AFTER_OPERAND: &[&str] = &["`+`", "`-`", "`*`", "`/`", "`^`", "`)`", "end of input"];

struct Lexer<'a> {
    src: &'a str,
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn next(&mut self) -> Result<(Tok, Span), ParseError> {
        let bytes = self.src.as_bytes();
        while self.pos < bytes.len() && bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
        let start = self.pos;
        let Some(&b) = bytes.get(start) else {
            return Ok((Tok::End, Span { start, end: start }));
        };
        let single = match b {
            b'+' => Some(Tok::Plus),
            b'-' => Some(Tok::Minus),
            b'*' => Some(Tok::Star),
            b'/' => Some(Tok::Slash),
            b'^' => Some(Tok::Caret),
            b'(' => Some(Tok::LParen),
            b')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(t) = single {
            self.pos += 1;
            return Ok((t, Span { start, end: self.pos }));
        }
        if b.is_ascii_digit() || b == b'.' {
            return self.number(start);
        }
        if b.is_ascii_alphabetic() || b == b'_' {
            while self.pos < bytes.len() && (bytes[self.pos].is_ascii_alphanumeric() || bytes[self.pos] == b'_') {
                self.pos += 1;
            }
            let s = &self.src[start..self.pos];
            return Ok((Tok::Ident(s.to_string()), Span { start, end: self.pos }));
        }
        let c = self.src[start..].chars().next().unwrap_or('\u{fffd}');
        Err(ParseError {
            offset: start,
            kind: ParseErrorKind::UnexpectedCharacter(c),
        })
    }

    fn number(&mut self, start: usize) -> Result<(Tok, Span), ParseError> {
        let bytes = self.src.as_bytes();
        let digits = |pos: &mut usize| {
            let s = *pos;
            while *pos < bytes.len() && bytes[*pos].is_ascii_digit() {
                *pos += 1;
            }
            *pos - s
        };
        let mut pos = start;
        let mut count = digits(&mut pos);
        if pos < bytes.len() && bytes[pos] == b'.' {
            pos += 1;
            count += digits(&mut pos);
        }
        let invalid = |offset| ParseError {
            offset,
            kind: ParseErrorKind::InvalidNumber,
        };
        if count == 0 {
            return Err(invalid(start));
        }
        if pos < bytes.len() && (bytes[pos] == b'e' || bytes[pos] == b'E') {
            let mut p = pos + 1;
            if p < bytes.len() && (bytes[p] == b'+' || bytes[p] == b'-') {
                p += 1;
            }
            if digits(&mut p) > 0 {
                pos = p;
            } else if p > pos + 1 || bytes.get(p).map_or(true, |c| !c.is_ascii_alphabetic()) {
                // "1e", "1e+" are malformed; "2e" followed by letters is left
                // for the parser to reject as a missing operator.
                return Err(invalid(start));
            }
        }
        self.pos = pos;
        let v: f64 = self.src[start..pos].parse().map_err(|_| invalid(start))?;
        Ok((Tok::Num(v), Span { start, end: pos }))
    }
}

struct Parser<'a> {
    lexer: Lexer<'a>,
    tok: Tok,
    span: Span,
    depth: usize,
    // End of the last closing parenthesis.
    last_end: usize,
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Self {
        Self {
            lexer: Lexer { src, pos: 0 },
            tok: Tok::End,
            span: Span { start: 0, end: 0 },
            depth: 0,
            last_end: 0,
        }
    }

    fn bump(&mut self) -> Result<(), ParseError> {
        let (t, s) = self.lexer.next()?;
        self.tok = t;
        self.span = s;
        Ok(())
    }

    fn unexpected(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.span.start,
            kind: ParseErrorKind::UnexpectedToken {
                found: self.tok.describe(),
                expected: expected.to_vec(),
            },
        }
    }

    fn expr(&mut self, min_bp: u8) -> Result<Expression, ParseError> {
        self.depth += 1;
        if self.depth > MAX_DEPTH {
            return Err(ParseError {
                offset: self.span.start,
                kind: ParseErrorKind::TooDeep,
            });
        }
        let mut lhs = self.prefix()?;
        loop {
            let (op, l_bp, r_bp) = match self.tok {
                Tok::Plus => (BinaryOp::Add, 1, 2),
                Tok::Minus => (BinaryOp::Sub, 1, 2),
                Tok::Star => (BinaryOp::Mul, 3, 4),
                Tok::Slash => (BinaryOp::Div, 3, 4),
                Tok::Caret => (BinaryOp::Pow, 7, 6),
                Tok::RParen | Tok::End => break,
                _ => return Err(self.unexpected(AFTER_OPERAND)),
            };
            if l_bp < min_bp {
                break;
            }
            self.bump()?;
            let rhs = self.expr(r_bp)?;
            let span = Span {
                start: lhs.span.start,
                end: rhs.span.end,
            };
            lhs = Expression {
                node: Node::Binary(op, Box::new(lhs), Box::new(rhs)),
                span,
            };
        }
        self.depth -= 1;
        Ok(lhs)
    }

    fn prefix(&mut self) -> Result<Expression, ParseError> {
        let span = self.span;
        match core::mem::replace(&mut self.tok, Tok::End) {
            Tok::Num(v) => {
                self.bump()?;
                Ok(Expression {
                    node: Node::Number(v),
                    span,
                })
            }
            Tok::Minus => {
                self.bump()?;
                let inner = self.expr(5)?;
                let span = Span {
                    start: span.start,
                    end: inner.span.end,
                };
                Ok(Expression {
                    node: Node::Neg(Box::new(inner)),
                    span,
                })
            }
            Tok::LParen => {
                self.bump()?;
                let inner = self.expr(0)?;
                self.expect_rparen()?;
                Ok(Expression {
                    node: inner.node,
                    span: Span {
                        start: span.start,
                        end: self.span_end_prev(),
                    },
                })
            }
            Tok::Ident(name) => {
                let node = match name.as_str() {
                    "pi" => Some(Node::Constant(Constant::Pi)),
                    "e" => Some(Node::Constant(Constant::E)),
                    "i" => Some(Node::Constant(Constant::I)),
                    "z" => Some(Node::Var),
                    _ => None,
                };
                if let Some(node) = node {
                    self.bump()?;
                    return Ok(Expression { node, span });
                }
                let Some(func) = Func::from_name(&name) else {
                    return Err(ParseError {
                        offset: span.start,
                        kind: ParseErrorKind::UnknownIdentifier(name),
                    });
                };
                self.bump()?;
                if self.tok != Tok::LParen {
                    return Err(self.unexpected(&["`(`"]));
                }
                self.bump()?;
                let arg = self.expr(0)?;
                self.expect_rparen()?;
                Ok(Expression {
                    node: Node::Call(func, Box::new(arg)),
                    span: Span {
                        start: span.start,
                        end: self.span_end_prev(),
                    },
                })
            }
            other => {
                self.tok = other;
                Err(self.unexpected(OPERAND))
            }
        }
    }

    fn expect_rparen(&mut self) -> Result<(), ParseError> {
        if self.tok != Tok::RParen {
            return Err(self.unexpected(&["`)`", "`+`", "`-`", "`*`", "`/`", "`^`"]));
        }
        self.last_end = self.span.end;
        self.bump()
    }

    fn span_end_prev(&self) -> usize {
        self.last_end
    }
}

/// Parses `text` into an expression tree.
pub fn parse(text: &str) -> Result<Expression, ParseError> {
    let mut p = Parser::new(text);
    p.bump()?;
    let e = p.expr(0)?;
    if p.tok != Tok::End {
        return Err(p.unexpected(AFTER_OPERAND));
    }
    Ok(e)
}

impl core::str::FromStr for Expression {
    type Err = ParseError;

    fn from_str(s: &str) -> Result<Self, ParseError> {
        parse(s)
    }
}

fn is_zero(w: Complex64) -> bool {
    w.re == 0.0 && w.im == 0.0
}

fn integer_exponent(p: Complex64) -> Option<i32> {
    (p.im == 0.0 && p.re.fract() == 0.0 && p.re.abs() <= 1024.0).then_some(p.re as i32)
}

impl Expression {
    /// Value at `z`; singular or non-finite intermediate values are errors
    /// located at the offending node.
    pub fn evaluate(&self, z: Complex64) -> Result<Complex64, EvalError> {
        let fail = |kind| EvalError { span: self.span, kind };
        let v = match &self.node {
            Node::Number(v) => Complex64::new(*v, 0.0),
            Node::Constant(Constant::Pi) => Complex64::new(core::f64::consts::PI, 0.0),
            Node::Constant(Constant::E) => Complex64::new(core::f64::consts::E, 0.0),
            Node::Constant(Constant::I) => Complex64::new(0.0, 1.0),
            Node::Var => z,
            Node::Neg(a) => -a.evaluate(z)?,
            Node::Binary(op, a, b) => {
                let x = a.evaluate(z)?;
                let y = b.evaluate(z)?;
                match op {
                    BinaryOp::Add => x + y,
                    BinaryOp::Sub => x - y,
                    BinaryOp::Mul => x * y,
                    BinaryOp::Div => {
                        if is_zero(y) {
                            return Err(fail(EvalErrorKind::DivisionByZero));
                        }
                        x / y
                    }
                    BinaryOp::Pow => power(x, y).map_err(fail)?,
                }
            }
            Node::Call(func, a) => {
                let w = a.evaluate(z)?;
                match func {
                    Func::Exp => w.exp(),
                    Func::Log => {
                        if is_zero(w) {
                            return Err(fail(EvalErrorKind::LogOfZero));
                        }
                        w.ln()
                    }
                    Func::Sin => w.sin(),
                    Func::Cos => w.cos(),
                    Func::Tan => w.tan(),
                    Func::Sec => {
                        let c = w.cos();
                        if is_zero(c) {
                            return Err(fail(EvalErrorKind::DivisionByZero));
                        }
                        c.inv()
                    }
                    Func::Sinh => w.sinh(),
                    Func::Cosh => w.cosh(),
                    Func::Sqrt => w.sqrt(),
                }
            }
        };
        if v.is_finite() {
            Ok(v)
        } else {
            Err(fail(EvalErrorKind::NonFinite))
        }
    }

    /// An [`AnalyticFunction`] evaluating this expression; failures become
    /// NaN, which the sampler reports as an evaluation error.
    pub fn to_function(&self) -> AnalyticFunction {
        let e = Arc::new(self.clone());
        AnalyticFunction::new(move |z| {
            e.evaluate(z)
                .unwrap_or(Complex64::new(f64::NAN, f64::NAN))
        })
    }
}

fn power(x: Complex64, p: Complex64) -> Result<Complex64, EvalErrorKind> {
    if let Some(k) = integer_exponent(p) {
        if k < 0 && is_zero(x) {
            return Err(EvalErrorKind::DivisionByZero);
        }
        return Ok(x.powi(k));
    }
    if is_zero(x) {
        return if p.re > 0.0 {
            Ok(Complex64::new(0.0, 0.0))
        } else {
            Err(EvalErrorKind::LogOfZero)
        };
    }
    Ok((p * x.ln()).exp())
}

fn precedence(e: &Expression) -> u8 {
    match &e.node {
        Node::Binary(BinaryOp::Add | BinaryOp::Sub, ..) => 1,
        Node::Binary(BinaryOp::Mul | BinaryOp::Div, ..) => 2,
        Node::Neg(_) => 3,
        Node::Binary(BinaryOp::Pow, ..) => 4,
        Node::Number(v) if *v < 0.0 || v.is_sign_negative() => 3,
        _ => 5,
    }
}

struct Wrapped<'a>(&'a Expression, bool);

impl fmt::Display for Wrapped<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.1 {
            write!(f, "({})", self.0)
        } else {
            write!(f, "{}", self.0)
        }
    }
}

impl fmt::Display for Expression {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.node {
            Node::Number(v) => {
                if v.is_finite() {
                    write!(f, "{v:?}")
                } else {
                    f.write_str("(1e999)")
                }
            }
            Node::Constant(Constant::Pi) => f.write_str("pi"),
            Node::Constant(Constant::E) => f.write_str("e"),
            Node::Constant(Constant::I) => f.write_str("i"),
            Node::Var => f.write_str("z"),
            Node::Neg(a) => write!(f, "-{}", Wrapped(a, precedence(a) < 3)),
            Node::Call(func, a) => write!(f, "{}({a})", func.name()),
            Node::Binary(op, a, b) => {
                let (p, sym) = match op {
                    BinaryOp::Add => (1, "+"),
                    BinaryOp::Sub => (1, "-"),
                    BinaryOp::Mul => (2, "*"),
                    BinaryOp::Div => (2, "/"),
                    BinaryOp::Pow => (4, "^"),
                };
                let (pa, pb) = (precedence(a), precedence(b));
                let (wrap_a, wrap_b) = if *op == BinaryOp::Pow {
                    (pa <= 4, pb < 4)
                } else {
                    (pa < p, pb <= p)
                };
                write!(f, "{}{sym}{}", Wrapped(a, wrap_a), Wrapped(b, wrap_b))
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sfun::lookup;
    use alloc::format;
    use proptest::prelude::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn eval(s: &str, z: Complex64) -> Complex64 {
        parse(s).unwrap().evaluate(z).unwrap()
    }

    #[test]
    fn spec_examples() {
        let e = parse("1+z").unwrap();
        match &e.node {
            Node::Binary(BinaryOp::Add, a, b) => {
                assert_eq!(a.node, Node::Number(1.0));
                assert_eq!(b.node, Node::Var);
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(e.evaluate(c(1.0, 0.0)).unwrap(), c(2.0, 0.0));
        let want = 1.0 / (core::f64::consts::E - 1.0);
        assert!((eval("z/(exp(z)-1)", c(1.0, 0.0)).re - want).abs() < 1e-15);
        assert!((want - 0.581977).abs() < 1e-6);
        assert_eq!(eval("(1-z)^(11/2)", c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(eval("sec(z)^6", c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(eval("10^6 + 1/(1-z)", c(0.0, 0.0)), c(1000001.0, 0.0));
        assert_eq!(eval("exp(exp(z)-1)", c(0.0, 0.0)), c(1.0, 0.0));
    }

    #[test]
    fn precedence_and_associativity() {
        let z = c(3.0, 0.0);
        assert_eq!(eval("-z^2", z), c(-9.0, 0.0));
        assert_eq!(eval("2^3^2", z), c(512.0, 0.0));
        assert_eq!(eval("1-2-3", z), c(-4.0, 0.0));
        assert_eq!(eval("8/4/2", z), c(1.0, 0.0));
        assert_eq!(eval("1+2*3", z), c(7.0, 0.0));
        assert_eq!(eval("2^-1", z), c(0.5, 0.0));
        assert_eq!(eval("--z", z), z);
        assert_eq!(eval(" ( z ) * i ", z), c(0.0, 3.0));
        assert!((eval("1.5e1 + .5", z).re - 15.5).abs() < 1e-15);
        assert!((eval("pi", z).re - core::f64::consts::PI).abs() == 0.0);
    }

    #[test]
    fn principal_branches() {
        let w = eval("sqrt(z)", c(-4.0, 0.0));
        assert!((w - c(0.0, 2.0)).norm() < 1e-15);
        let l = eval("log(z)", c(-1.0, 0.0));
        assert!((l.im - core::f64::consts::PI).abs() < 1e-15);
        let p = eval("z^(1/2)", c(-4.0, 0.0));
        assert!((p - c(0.0, 2.0)).norm() < 1e-15);
        assert_eq!(eval("z^0", c(0.0, 0.0)), c(1.0, 0.0));
        assert_eq!(eval("z^0.5", c(0.0, 0.0)), c(0.0, 0.0));
    }

    #[test]
    fn syntax_errors_are_located() {
        let err = parse("2z").unwrap_err();
        assert_eq!(err.offset, 1);
        assert!(matches!(err.kind, ParseErrorKind::UnexpectedToken { .. }));
        let err = parse("1 + foo(z)").unwrap_err();
        assert_eq!(err.offset, 4);
        assert_eq!(err.kind, ParseErrorKind::UnknownIdentifier("foo".into()));
        let err = parse("(1+z").unwrap_err();
        assert_eq!(err.offset, 4);
        match err.kind {
            ParseErrorKind::UnexpectedToken { found, expected } => {
                assert_eq!(found, "end of input");
                assert!(expected.contains(&"`)`"));
            }
            other => panic!("{other:?}"),
        }
        assert_eq!(parse("1e+").unwrap_err().kind, ParseErrorKind::InvalidNumber);
        assert_eq!(parse("exp z").unwrap_err().offset, 4);
        assert_eq!(parse("z $").unwrap_err().kind, ParseErrorKind::UnexpectedCharacter('$'));
        assert!(parse("").is_err());
        assert!(parse("abs(z)").is_err());
        let deep = format!("{}z{}", "(".repeat(1000), ")".repeat(1000));
        assert_eq!(parse(&deep).unwrap_err().kind, ParseErrorKind::TooDeep);
        let err = parse("1+z").unwrap();
        assert_eq!(err.span, Span { start: 0, end: 3 });
    }

    #[test]
    fn evaluation_errors_are_located() {
        let e = parse("1 + 1/(z-1)").unwrap();
        let err = e.evaluate(c(1.0, 0.0)).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::DivisionByZero);
        assert_eq!(err.span, Span { start: 4, end: 11 });
        let err = parse("log(z)").unwrap().evaluate(c(0.0, 0.0)).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::LogOfZero);
        let err = parse("exp(exp(z))").unwrap().evaluate(c(10.0, 0.0)).unwrap_err();
        assert_eq!(err.kind, EvalErrorKind::NonFinite);
        assert!(parse("z^-1").unwrap().evaluate(c(0.0, 0.0)).is_err());
        let f = parse("1/z").unwrap().to_function();
        assert!(f.evaluate(c(0.0, 0.0)).re.is_nan());
    }

    #[test]
    fn display_parses_back() {
        for s in ["-z^2", "(-z)^2", "2^3^2", "(2^3)^2", "1-(2-3)", "z/(exp(z)-1)", "-(1+z)*sec(z)^6", "2^-z", "-1.5e-7*z"] {
            let e = parse(s).unwrap();
            let back = parse(&format!("{e}")).unwrap();
            let z = c(0.3, 0.2);
            assert_eq!(e.evaluate(z).unwrap(), back.evaluate(z).unwrap(), "{s} -> {e}");
        }
    }

    fn round_trip(name: &str, radius: f64, frac: f64, angle: f64) {
        let entry = lookup(name).unwrap();
        let text = entry.expression_form().unwrap();
        let e = parse(text).unwrap();
        let z = Complex64::from_polar(radius * frac, angle);
        let want = entry.function().evaluate(z);
        let got = e.evaluate(z).unwrap();
        assert!((got - want).norm() <= 1e-13 * want.norm(), "{name} at {z}: {got} vs {want}");
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(100))]

        #[test]
        fn catalog_round_trip(frac in 0.05f64..0.95, angle in -3.14f64..3.14) {
            round_trip("exp", 5.0, frac, angle);
            round_trip("sec6", core::f64::consts::FRAC_PI_2, frac, angle);
            round_trip("bernoulli", core::f64::consts::TAU, frac, angle);
            round_trip("bell", 3.0, frac, angle);
            round_trip("fornberg_shift", 1.0, frac, angle);
            round_trip("fornberg_log", 1.0, frac, angle);
            round_trip("f_beta:11/2", 1.0, frac, angle);
            round_trip("f_beta:-1", 1.0, frac, angle);
            round_trip("f_beta:-1/2", 1.0, frac, angle);
        }

        #[test]
        fn parser_is_total(bytes in proptest::collection::vec(any::<u8>(), 0..64)) {
            let s = String::from_utf8_lossy(&bytes);
            if let Ok(e) = parse(&s) {
                let _ = e.evaluate(c(0.5, 0.25));
            }
        }

        #[test]
        fn parser_is_total_on_grammar_soup(
            parts in proptest::collection::vec(
                prop::sample::select(alloc::vec!["z", "1", "2.5e3", "pi", "i", "+", "-", "*", "/", "^", "(", ")", "exp", "log", "sqrt", " "]),
                0..40,
            )
        ) {
            let s: String = parts.concat();
            match parse(&s) {
                Ok(e) => {
                    let _ = e.evaluate(c(-0.7, 0.1));
                    let shown = format!("{e}");
                    prop_assert!(parse(&shown).is_ok(), "{}", shown);
                }
                Err(err) => prop_assert!(err.offset <= s.len()),
            }
        }
    }
}
