//! Closed-form scalar fields over chart coordinates `x1..xn`.
//!
//! Grammar (recursive descent, `^` binds tighter than `* /`, which bind tighter
//! than `+ -`; unary minus binds looser than `^`, so `-x1^2 = -(x1^2)`):
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/') unary)*
//! unary  := ('-' | '+') unary | power
//! power  := atom ('^' int | '^' '(' int ')')?
//! atom   := number | 'pi' | 'x' digits | func '(' expr ')' | '(' expr ')'
//! func   := sqrt | exp | log | sin | cos
//! ```
//!
//! Exponents must be integer literals; anything else is a parse error.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

use crate::jets::{JetError, SpatialJet};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ExprError {
    #[error("parse error at column {column}: {message}")]
    Parse { column: usize, message: String },
    #[error("coordinate x{index} out of range for dimension {dim}")]
    BadCoordinate { index: usize, dim: usize },
    #[error("domain error in `{subexpr}`: {reason}")]
    Domain { subexpr: String, reason: String },
    #[error(transparent)]
    Jet(#[from] JetError),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Func {
    Sqrt,
    Exp,
    Log,
    Sin,
    Cos,
}

impl Func {
    fn name(self) -> &'static str {
        match self {
            Func::Sqrt => "sqrt",
            Func::Exp => "exp",
            Func::Log => "log",
            Func::Sin => "sin",
            Func::Cos => "cos",
        }
    }

    fn from_name(s: &str) -> Option<Func> {
        Some(match s {
            "sqrt" => Func::Sqrt,
            "exp" => Func::Exp,
            "log" => Func::Log,
            "sin" => Func::Sin,
            "cos" => Func::Cos,
            _ => return None,
        })
    }
}

/// Expression tree. Coordinates are stored 0-based (`Coord(0)` prints as `x1`).
#[derive(Debug, Clone, PartialEq)]
pub enum ScalarFieldExpr {
    Const(f64),
    Coord(usize),
    Neg(Box<ScalarFieldExpr>),
    Add(Box<ScalarFieldExpr>, Box<ScalarFieldExpr>),
    Sub(Box<ScalarFieldExpr>, Box<ScalarFieldExpr>),
    Mul(Box<ScalarFieldExpr>, Box<ScalarFieldExpr>),
    Div(Box<ScalarFieldExpr>, Box<ScalarFieldExpr>),
    PowI(Box<ScalarFieldExpr>, i32),
    Call(Func, Box<ScalarFieldExpr>),
}

use ScalarFieldExpr as E;

impl ScalarFieldExpr {
    pub fn parse(src: &str) -> Result<Self, ExprError> {
        let mut p = Parser {
            src: src.as_bytes(),
            pos: 0,
        };
        let e = p.expr()?;
        p.skip_ws();
        if p.pos != p.src.len() {
            return Err(p.error("unexpected trailing input"));
        }
        Ok(e)
    }

    pub fn constant(v: f64) -> Self {
        E::Const(v)
    }

    pub fn coord(i: usize) -> Self {
        E::Coord(i)
    }

    pub fn zero() -> Self {
        E::Const(0.0)
    }

    /// True for the literal `0` (used to short-circuit vanishing perturbations).
    pub fn is_zero_literal(&self) -> bool {
        matches!(self, E::Const(v) if *v == 0.0)
    }

    pub fn is_constant(&self) -> bool {
        self.max_coord().is_none()
    }

    /// Largest coordinate index referenced (0-based).
    pub fn max_coord(&self) -> Option<usize> {
        match self {
            E::Const(_) => None,
            E::Coord(i) => Some(*i),
            E::Neg(a) | E::PowI(a, _) | E::Call(_, a) => a.max_coord(),
            E::Add(a, b) | E::Sub(a, b) | E::Mul(a, b) | E::Div(a, b) => {
                match (a.max_coord(), b.max_coord()) {
                    (Some(x), Some(y)) => Some(x.max(y)),
                    (x, y) => x.or(y),
                }
            }
        }
    }

    pub fn check_dim(&self, dim: usize) -> Result<(), ExprError> {
        match self.max_coord() {
            Some(i) if i >= dim => Err(ExprError::BadCoordinate { index: i + 1, dim }),
            _ => Ok(()),
        }
    }

    fn domain(&self, reason: impl Into<String>) -> ExprError {
        ExprError::Domain {
            subexpr: self.to_string(),
            reason: reason.into(),
        }
    }

    /// Plain numeric evaluation.
    pub fn eval(&self, point: &[f64]) -> Result<f64, ExprError> {
        Ok(match self {
            E::Const(v) => *v,
            E::Coord(i) => *point.get(*i).ok_or(ExprError::BadCoordinate {
                index: i + 1,
                dim: point.len(),
            })?,
            E::Neg(a) => -a.eval(point)?,
            E::Add(a, b) => a.eval(point)? + b.eval(point)?,
            E::Sub(a, b) => a.eval(point)? - b.eval(point)?,
            E::Mul(a, b) => a.eval(point)? * b.eval(point)?,
            E::Div(a, b) => {
                let d = b.eval(point)?;
                if d.abs() <= crate::jets::RECIP_FLOOR {
                    return Err(self.domain("division by zero"));
                }
                a.eval(point)? / d
            }
            E::PowI(a, p) => {
                let v = a.eval(point)?;
                if *p < 0 && v.abs() <= crate::jets::RECIP_FLOOR {
                    return Err(self.domain("negative power of zero"));
                }
                v.powi(*p)
            }
            E::Call(f, a) => {
                let v = a.eval(point)?;
                match f {
                    Func::Sqrt if v < 0.0 => return Err(self.domain("sqrt of negative value")),
                    Func::Log if v <= 0.0 => return Err(self.domain("log of non-positive value")),
                    Func::Sqrt => v.sqrt(),
                    Func::Log => v.ln(),
                    Func::Exp => v.exp(),
                    Func::Sin => v.sin(),
                    Func::Cos => v.cos(),
                }
            }
        })
    }

    /// Exact partial derivatives up to `degree` at `point`.
    pub fn eval_jet(&self, point: &[f64], degree: usize) -> Result<SpatialJet, ExprError> {
        let dim = point.len();
        self.check_dim(dim)?;
        if point.iter().any(|v| !v.is_finite()) {
            return Err(ExprError::Domain {
                subexpr: "point".into(),
                reason: "non-finite coordinate".into(),
            });
        }
        let layout = crate::jets::JetLayout::get(dim, degree)?;
        self.jet_in(layout, point)
    }

    fn jet_in(
        &self,
        layout: &'static crate::jets::JetLayout,
        point: &[f64],
    ) -> Result<SpatialJet, ExprError> {
        if let Some(v) = self.as_const() {
            return Ok(SpatialJet::constant_in(layout, v));
        }
        Ok(match self {
            E::Const(v) => SpatialJet::constant_in(layout, *v),
            E::Coord(i) => SpatialJet::coordinate(layout.dim(), layout.degree(), *i, point[*i])?,
            E::Neg(a) => -a.jet_in(layout, point)?,
            E::Add(a, b) => a.jet_in(layout, point)? + b.jet_in(layout, point)?,
            E::Sub(a, b) => a.jet_in(layout, point)? - b.jet_in(layout, point)?,
            E::Mul(a, b) => {
                // scalar-times-field avoids a full Leibniz product
                match (a.as_const(), b.as_const()) {
                    (Some(c), _) => b.jet_in(layout, point)?.scale(c),
                    (_, Some(c)) => a.jet_in(layout, point)?.scale(c),
                    _ => a.jet_in(layout, point)? * b.jet_in(layout, point)?,
                }
            }
            E::Div(a, b) => {
                let den = b.jet_in(layout, point)?;
                let inv = den
                    .try_recip()
                    .map_err(|_| self.domain("division by zero"))?;
                match a.as_const() {
                    Some(c) => inv.scale(c),
                    None => a.jet_in(layout, point)? * inv,
                }
            }
            E::PowI(a, p) => a
                .jet_in(layout, point)?
                .try_powi(*p)
                .map_err(|_| self.domain("negative power of zero"))?,
            E::Call(f, a) => {
                let x = a.jet_in(layout, point)?;
                match f {
                    Func::Exp => x.exp(),
                    Func::Sin => x.sin(),
                    Func::Cos => x.cos(),
                    Func::Sqrt => {
                        if x.value() <= 0.0 {
                            return Err(self.domain("sqrt of non-positive value"));
                        }
                        x.try_sqrt()?
                    }
                    Func::Log => {
                        if x.value() <= 0.0 {
                            return Err(self.domain("log of non-positive value"));
                        }
                        x.try_ln()?
                    }
                }
            }
        })
    }

    fn as_const(&self) -> Option<f64> {
        match self {
            E::Const(v) => Some(*v),
            _ => None,
        }
    }
}

impl fmt::Display for ScalarFieldExpr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            E::Const(v) if *v < 0.0 || (*v == 0.0 && v.is_sign_negative()) => write!(f, "({v:?})"),
            E::Const(v) => write!(f, "{v:?}"),
            E::Coord(i) => write!(f, "x{}", i + 1),
            E::Neg(a) => write!(f, "(-{a})"),
            E::Add(a, b) => write!(f, "({a} + {b})"),
            E::Sub(a, b) => write!(f, "({a} - {b})"),
            E::Mul(a, b) => write!(f, "({a} * {b})"),
            E::Div(a, b) => write!(f, "({a} / {b})"),
            E::PowI(a, p) => match **a {
                E::Const(_) | E::Coord(_) | E::Call(..) => write!(f, "{a}^({p})"),
                _ => write!(f, "({a})^({p})"),
            },
            E::Call(func, a) => write!(f, "{}({a})", func.name()),
        }
    }
}

impl FromStr for ScalarFieldExpr {
    type Err = ExprError;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        Self::parse(s)
    }
}

impl Serialize for ScalarFieldExpr {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for ScalarFieldExpr {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Self::parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl Parser<'_> {
    fn error(&self, message: &str) -> ExprError {
        ExprError::Parse {
            column: self.pos + 1,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.error(&format!("expected `{}`", c as char)))
        }
    }

    fn expr(&mut self) -> Result<ScalarFieldExpr, ExprError> {
        let mut lhs = self.term()?;
        loop {
            if self.eat(b'+') {
                lhs = E::Add(Box::new(lhs), Box::new(self.term()?));
            } else if self.eat(b'-') {
                lhs = E::Sub(Box::new(lhs), Box::new(self.term()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self) -> Result<ScalarFieldExpr, ExprError> {
        let mut lhs = self.unary()?;
        loop {
            if self.eat(b'*') {
                lhs = E::Mul(Box::new(lhs), Box::new(self.unary()?));
            } else if self.eat(b'/') {
                lhs = E::Div(Box::new(lhs), Box::new(self.unary()?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self) -> Result<ScalarFieldExpr, ExprError> {
        if self.eat(b'-') {
            return Ok(match self.unary()? {
                E::Const(v) => E::Const(-v),
                e => E::Neg(Box::new(e)),
            });
        }
        if self.eat(b'+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<ScalarFieldExpr, ExprError> {
        let base = self.atom()?;
        if !self.eat(b'^') {
            return Ok(base);
        }
        let paren = self.eat(b'(');
        let neg = self.eat(b'-');
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.error("exponent must be an integer literal"));
        }
        let digits = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
        let mut p: i32 = digits
            .parse()
            .map_err(|_| self.error("exponent out of range"))?;
        if neg {
            p = -p;
        }
        if matches!(self.src.get(self.pos), Some(b'.') | Some(b'e') | Some(b'E')) {
            return Err(self.error("exponent must be an integer literal"));
        }
        if paren {
            self.expect(b')')?;
        }
        if self.peek() == Some(b'^') {
            return Err(self.error("chained exponents need parentheses"));
        }
        Ok(E::PowI(Box::new(base), p))
    }

    fn atom(&mut self) -> Result<ScalarFieldExpr, ExprError> {
        match self.peek() {
            None => Err(self.error("unexpected end of input")),
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() || c == b'.' => self.number(),
            Some(c) if c.is_ascii_alphabetic() => {
                let start = self.pos;
                while self.pos < self.src.len() && self.src[self.pos].is_ascii_alphanumeric() {
                    self.pos += 1;
                }
                let word = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                if word == "pi" {
                    return Ok(E::Const(std::f64::consts::PI));
                }
                if let Some(rest) = word.strip_prefix('x') {
                    if !rest.is_empty() && rest.bytes().all(|b| b.is_ascii_digit()) {
                        let idx: usize = rest.parse().map_err(|_| self.error("bad coordinate"))?;
                        if idx == 0 {
                            return Err(ExprError::BadCoordinate { index: 0, dim: 0 });
                        }
                        return Ok(E::Coord(idx - 1));
                    }
                }
                match Func::from_name(word) {
                    Some(f) => {
                        self.expect(b'(')?;
                        let arg = self.expr()?;
                        self.expect(b')')?;
                        Ok(E::Call(f, Box::new(arg)))
                    }
                    None => {
                        self.pos = start;
                        Err(self.error(&format!("unknown identifier `{word}`")))
                    }
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character `{}`", c as char))),
        }
    }

    fn number(&mut self) -> Result<ScalarFieldExpr, ExprError> {
        let start = self.pos;
        let s = self.src;
        let digits = |p: &mut usize| {
            while *p < s.len() && s[*p].is_ascii_digit() {
                *p += 1;
            }
        };
        digits(&mut self.pos);
        if self.pos < s.len() && s[self.pos] == b'.' {
            self.pos += 1;
            digits(&mut self.pos);
        }
        if self.pos < s.len() && (s[self.pos] == b'e' || s[self.pos] == b'E') {
            let save = self.pos;
            self.pos += 1;
            if self.pos < s.len() && (s[self.pos] == b'+' || s[self.pos] == b'-') {
                self.pos += 1;
            }
            let exp_start = self.pos;
            digits(&mut self.pos);
            if exp_start == self.pos {
                self.pos = save;
            }
        }
        let text = std::str::from_utf8(&s[start..self.pos]).unwrap();
        text.parse::<f64>().map(E::Const).map_err(|_| {
            self.pos = start;
            self.error(&format!("malformed number `{text}`"))
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn p(s: &str) -> ScalarFieldExpr {
        ScalarFieldExpr::parse(s).unwrap()
    }

    #[test]
    fn precedence() {
        let pt = [2.0, 3.0, 0.0, 0.0];
        assert_eq!(p("1 + 2 * 3").eval(&pt).unwrap(), 7.0);
        assert_eq!(p("2 * x1^2").eval(&pt).unwrap(), 8.0);
        assert_eq!(p("-x1^2").eval(&pt).unwrap(), -4.0);
        assert_eq!(p("x2 - x1 - 1").eval(&pt).unwrap(), 0.0);
        assert_eq!(p("8 / x1 / 2").eval(&pt).unwrap(), 2.0);
        assert_eq!(p("x1^(-2)").eval(&pt).unwrap(), 0.25);
        assert_eq!(p("x1^-1").eval(&pt).unwrap(), 0.5);
        assert!((p("4/(1+x1^2+x2^2+x3^2+x4^2)^2").eval(&[0.0; 4]).unwrap() - 4.0).abs() < 1e-15);
        assert!((p("sin(pi/2)").eval(&pt).unwrap() - 1.0).abs() < 1e-15);
        assert_eq!(p("1.5e-1").eval(&pt).unwrap(), 0.15);
    }

    #[test]
    fn parse_errors() {
        for bad in ["sin(", "x1 +", "2^x1", "x1^1.5", "foo(x1)", "x0", "(x1", "1 2", "x1^2^3"] {
            assert!(ScalarFieldExpr::parse(bad).is_err(), "{bad}");
        }
        match ScalarFieldExpr::parse("sin(") {
            Err(ExprError::Parse { column, .. }) => assert_eq!(column, 5),
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn display_round_trips() {
        for s in [
            "4/(1+x1^2+x2^2+x3^2+x4^2)^2",
            "-x1^2 + exp(x1*x2) - -3",
            "sqrt(2 + cos(x3)) * log(3 + sin(x4))^(-3)",
            "1e-7 * x2 / (0.25 - x1)",
            "-(x1 + 2)^3",
        ] {
            let e = p(s);
            assert_eq!(p(&e.to_string()), e, "{s} -> {e}");
        }
    }

    #[test]
    fn jet_of_polynomial() {
        let j = p("x1^2 + x2").eval_jet(&[1.0, 2.0, 0.0, 0.0], 2).unwrap();
        assert_eq!(j.value(), 3.0);
        assert_eq!(j.d(&[0]), 2.0);
        assert_eq!(j.d(&[0, 0]), 2.0);
        assert_eq!(j.d(&[1]), 1.0);
        assert_eq!(j.d(&[0, 1]), 0.0);
        assert_eq!(j.d(&[1, 1]), 0.0);
        let c = p("5").eval_jet(&[0.3, 0.1, 0.0, 0.0], 3).unwrap();
        assert_eq!(c.value(), 5.0);
        assert!(c.partials()[1..].iter().all(|&v| v == 0.0));
    }

    #[test]
    fn domain_errors_name_subexpression() {
        match p("1 + log(x1 - 1)").eval_jet(&[0.5, 0.0], 2) {
            Err(ExprError::Domain { subexpr, .. }) => assert_eq!(subexpr, "log((x1 - 1.0))"),
            other => panic!("{other:?}"),
        }
        assert!(matches!(p("1/x1").eval_jet(&[0.0, 0.0], 1), Err(ExprError::Domain { .. })));
        assert!(matches!(p("sqrt(x1)").eval(&[-1.0]), Err(ExprError::Domain { .. })));
        assert!(matches!(p("x3").eval_jet(&[0.0, 0.0], 1), Err(ExprError::BadCoordinate { index: 3, dim: 2 })));
    }
}
