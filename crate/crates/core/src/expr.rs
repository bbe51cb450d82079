//! Expression front-end for Novikov scalars and Laurent series.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr     := term (('+' | '-') term)*
//! term     := factor (('*' | '/') factor)*
//! factor   := ('+' | '-') factor | power
//! power    := atom ('^' exponent)?
//! exponent := integer | '(' rational ')'
//! atom     := number | 'i' | 'T' | variable | '(' expr ')'
//! number   := digits ('.' digits)?
//! variable := 'Y' digits | identifier
//! rational := ('+'|'-')? digits ('/' digits)?
//! ```
//!
//! Division is permitted only when the divisor is a monomial.

use std::collections::BTreeMap;

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::novikov::{NovikovScalar, Rational};
use crate::series::LaurentSeries;

#[derive(Clone, Debug)]
pub enum Expr {
    Number(f64),
    Imag,
    TSymbol,
    Var(String),
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    Div(Box<Expr>, Box<Expr>, usize),
    Pow(Box<Expr>, Rational, usize),
}

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn err<T>(&self, msg: impl Into<String>) -> Result<T> {
        Err(Error::ParseError { pos: self.pos, msg: msg.into() })
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

    fn bump(&mut self) -> Option<u8> {
        let c = self.peek();
        if c.is_some() {
            self.pos += 1;
        }
        c
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        match self.bump() {
            Some(got) if got == c => Ok(()),
            Some(got) => self.err(format!("expected '{}', found '{}'", c as char, got as char)),
            None => self.err(format!("expected '{}', found end of input", c as char)),
        }
    }

    fn parse_expr(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                Some(b'-') => {
                    self.bump();
                    let rhs = self.parse_term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_term(&mut self) -> Result<Expr> {
        let mut lhs = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                Some(b'/') => {
                    let at = self.pos;
                    self.bump();
                    let rhs = self.parse_factor()?;
                    lhs = Expr::Div(Box::new(lhs), Box::new(rhs), at);
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'-') => {
                self.bump();
                Ok(Expr::Neg(Box::new(self.parse_factor()?)))
            }
            Some(b'+') => {
                self.bump();
                self.parse_factor()
            }
            _ => self.parse_power(),
        }
    }

    fn parse_power(&mut self) -> Result<Expr> {
        let base = self.parse_atom()?;
        if self.peek() == Some(b'^') {
            let at = self.pos;
            self.bump();
            let exp = self.parse_exponent()?;
            return Ok(Expr::Pow(Box::new(base), exp, at));
        }
        Ok(base)
    }

    fn parse_exponent(&mut self) -> Result<Rational> {
        if self.peek() == Some(b'(') {
            self.bump();
            let r = self.parse_rational()?;
            self.expect(b')')?;
            Ok(r)
        } else {
            self.parse_rational()
        }
    }

    fn parse_rational(&mut self) -> Result<Rational> {
        let mut sign = 1i64;
        match self.peek() {
            Some(b'-') => {
                self.bump();
                sign = -1;
            }
            Some(b'+') => {
                self.bump();
            }
            _ => {}
        }
        let num = self.parse_integer()?;
        if self.peek() == Some(b'/') {
            self.bump();
            let den = self.parse_integer()?;
            if den == 0 {
                return self.err("zero denominator in exponent");
            }
            Ok(Rational::new(sign * num, den))
        } else {
            Ok(Rational::from_int(sign * num))
        }
    }

    fn parse_integer(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return self.err("expected an integer");
        }
        std::str::from_utf8(&self.src[start..self.pos])
            .unwrap()
            .parse()
            .map_err(|e| Error::ParseError { pos: start, msg: format!("bad integer: {e}") })
    }

    fn parse_atom(&mut self) -> Result<Expr> {
        match self.peek() {
            Some(b'(') => {
                self.bump();
                let e = self.parse_expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.pos < self.src.len()
                    && (self.src[self.pos].is_ascii_digit() || self.src[self.pos] == b'.')
                {
                    self.pos += 1;
                }
                let text = std::str::from_utf8(&self.src[start..self.pos]).unwrap();
                let v: f64 = text.parse().map_err(|e| Error::ParseError {
                    pos: start,
                    msg: format!("bad number: {e}"),
                })?;
                Ok(Expr::Number(v))
            }
            Some(b'i') if !is_ident_char(self.src.get(self.pos + 1).copied()) => {
                self.bump();
                Ok(Expr::Imag)
            }
            Some(b'T') if !is_ident_char(self.src.get(self.pos + 1).copied()) => {
                self.bump();
                Ok(Expr::TSymbol)
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                while self.pos < self.src.len() && is_ident_char(Some(self.src[self.pos])) {
                    self.pos += 1;
                }
                Ok(Expr::Var(
                    std::str::from_utf8(&self.src[start..self.pos]).unwrap().to_string(),
                ))
            }
            Some(c) => self.err(format!("unexpected character '{}'", c as char)),
            None => self.err("unexpected end of input"),
        }
    }
}

fn is_ident_char(c: Option<u8>) -> bool {
    matches!(c, Some(c) if c.is_ascii_alphanumeric() || c == b'_')
}

/// Parses the documented grammar; the full input must be consumed.
pub fn parse(input: &str) -> Result<Expr> {
    let mut p = Parser { src: input.as_bytes(), pos: 0 };
    let e = p.parse_expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return p.err("trailing input");
    }
    Ok(e)
}

/// Either a Novikov scalar or a Laurent series.
#[derive(Clone, Debug)]
pub enum Value {
    Scalar(NovikovScalar),
    Series(LaurentSeries),
}

impl Value {
    fn promote(self, rank: usize, cutoff: Rational) -> LaurentSeries {
        match self {
            Value::Series(s) => s,
            Value::Scalar(c) => LaurentSeries::constant_at(rank, c, cutoff),
        }
    }
}

/// Evaluation context: variable bindings, the effective rank for unbound
/// `Y`-variables, truncation order for inversions.
pub struct EvalContext {
    pub bindings: BTreeMap<String, NovikovScalar>,
    pub order: Rational,
}

impl EvalContext {
    pub fn new(order: Rational) -> Self {
        EvalContext { bindings: BTreeMap::new(), order }
    }

    pub fn bind(&mut self, name: impl Into<String>, value: NovikovScalar) {
        self.bindings.insert(name.into(), value);
    }
}

fn y_index(name: &str) -> Option<usize> {
    name.strip_prefix('Y').and_then(|d| d.parse::<usize>().ok()).filter(|k| *k >= 1)
}

fn collect_vars(e: &Expr, out: &mut Vec<String>) {
    match e {
        Expr::Var(v) => {
            if !out.contains(v) {
                out.push(v.clone());
            }
        }
        Expr::Neg(a) => collect_vars(a, out),
        Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) | Expr::Div(a, b, _) => {
            collect_vars(a, out);
            collect_vars(b, out);
        }
        Expr::Pow(a, _, _) => collect_vars(a, out),
        _ => {}
    }
}

/// Evaluates an expression. Variables bound in the context become scalars;
/// unbound `Yk` variables make the result a Laurent series whose rank is the
/// largest index mentioned.
pub fn evaluate(e: &Expr, ctx: &EvalContext) -> Result<Value> {
    let mut vars = Vec::new();
    collect_vars(e, &mut vars);
    let mut rank = 0usize;
    for v in &vars {
        if ctx.bindings.contains_key(v) {
            continue;
        }
        match y_index(v) {
            Some(k) => rank = rank.max(k),
            None => {
                return Err(Error::ParseError {
                    pos: 0,
                    msg: format!("unbound variable '{v}'"),
                })
            }
        }
    }
    eval_node(e, ctx, rank)
}

fn eval_node(e: &Expr, ctx: &EvalContext, rank: usize) -> Result<Value> {
    let cutoff = ctx.order;
    match e {
        Expr::Number(v) => Ok(Value::Scalar(NovikovScalar::from_f64(*v))),
        Expr::Imag => Ok(Value::Scalar(NovikovScalar::from_complex(Complex64::new(0.0, 1.0)))),
        Expr::TSymbol => Ok(Value::Scalar(NovikovScalar::t_power(Rational::one()))),
        Expr::Var(name) => {
            if let Some(v) = ctx.bindings.get(name) {
                return Ok(Value::Scalar(v.clone()));
            }
            let k = y_index(name).expect("checked in evaluate");
            Ok(Value::Series(LaurentSeries::variable_at(rank, k, cutoff)))
        }
        Expr::Neg(a) => Ok(match eval_node(a, ctx, rank)? {
            Value::Scalar(s) => Value::Scalar(s.neg()),
            Value::Series(s) => Value::Series(s.neg()),
        }),
        Expr::Add(a, b) => binary(ctx, rank, a, b, |x, y| x.add(&y), |x, y| x.add(&y)),
        Expr::Sub(a, b) => binary(ctx, rank, a, b, |x, y| x.sub(&y), |x, y| x.sub(&y)),
        Expr::Mul(a, b) => binary(ctx, rank, a, b, |x, y| x.mul(&y), |x, y| x.mul(&y)),
        Expr::Div(a, b, at) => {
            let num = eval_node(a, ctx, rank)?;
            let den = eval_node(b, ctx, rank)?;
            let inv = invert_value(den, ctx.order, *at)?;
            match (num, inv) {
                (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(x.mul(&y))),
                (x, y) => Ok(Value::Series(
                    x.promote(rank, cutoff).mul(&y.promote(rank, cutoff))?,
                )),
            }
        }
        Expr::Pow(a, r, at) => {
            let base = eval_node(a, ctx, rank)?;
            pow_value(base, *r, ctx.order, *at)
        }
    }
}

fn binary(
    ctx: &EvalContext,
    rank: usize,
    a: &Expr,
    b: &Expr,
    fs: impl Fn(LaurentSeries, LaurentSeries) -> Result<LaurentSeries>,
    fc: impl Fn(NovikovScalar, NovikovScalar) -> NovikovScalar,
) -> Result<Value> {
    let x = eval_node(a, ctx, rank)?;
    let y = eval_node(b, ctx, rank)?;
    match (x, y) {
        (Value::Scalar(x), Value::Scalar(y)) => Ok(Value::Scalar(fc(x, y))),
        (x, y) => Ok(Value::Series(fs(
            x.promote(rank, ctx.order),
            y.promote(rank, ctx.order),
        )?)),
    }
}

fn invert_value(v: Value, order: Rational, at: usize) -> Result<Value> {
    match v {
        Value::Scalar(s) => Ok(Value::Scalar(s.invert(order)?)),
        Value::Series(s) => {
            if s.num_terms() != 1 {
                return Err(Error::ParseError {
                    pos: at,
                    msg: "division is only defined for monomial divisors".into(),
                });
            }
            let (alpha, c) = s.terms().next().map(|(a, c)| (a.clone(), c.clone())).unwrap();
            let inv_alpha: Vec<i64> = alpha.iter().map(|a| -a).collect();
            Ok(Value::Series(LaurentSeries::monomial_at(
                s.rank(),
                inv_alpha,
                c.invert(order)?,
                s.cutoff(),
            )))
        }
    }
}

fn pow_value(base: Value, r: Rational, order: Rational, at: usize) -> Result<Value> {
    if r.is_integer() {
        let n = r.numer();
        let positive = |v: Value, k: i64| -> Result<Value> {
            let mut acc = match &v {
                Value::Scalar(_) => Value::Scalar(NovikovScalar::one()),
                Value::Series(s) => Value::Series(LaurentSeries::one_at(s.rank(), s.cutoff())),
            };
            for _ in 0..k {
                acc = match (acc, &v) {
                    (Value::Scalar(a), Value::Scalar(b)) => Value::Scalar(a.mul(b)),
                    (Value::Series(a), Value::Series(b)) => Value::Series(a.mul(b)?),
                    _ => unreachable!("power preserves the value kind"),
                };
            }
            Ok(acc)
        };
        if n >= 0 {
            return positive(base, n);
        }
        let inv = invert_value(base, order, at)?;
        return positive(inv, -n);
    }
    // rational exponent: only for monomials with positive real coefficient
    match base {
        Value::Scalar(s) => {
            if s.terms().len() == 1 {
                let (e, c) = s.terms()[0];
                if c.im.abs() < 1e-12 && c.re > 0.0 {
                    return Ok(Value::Scalar(NovikovScalar::monomial(
                        Complex64::new(c.re.powf(r.to_f64()), 0.0),
                        e * r,
                    )));
                }
            }
            Err(Error::ParseError {
                pos: at,
                msg: "rational exponents need a positive real monomial base".into(),
            })
        }
        Value::Series(s) => {
            if s.num_terms() == 1 {
                let (alpha, c) = s.terms().next().unwrap();
                if alpha.iter().all(|a| *a == 0) {
                    let v = pow_value(Value::Scalar(c.clone()), r, order, at)?;
                    if let Value::Scalar(c) = v {
                        return Ok(Value::Series(LaurentSeries::constant_at(s.rank(), c, s.cutoff())));
                    }
                }
            }
            Err(Error::ParseError {
                pos: at,
                msg: "rational exponents on series are not supported".into(),
            })
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn eval_str(s: &str, order: i64) -> Value {
        let ctx = EvalContext::new(Rational::from_int(order));
        evaluate(&parse(s).unwrap(), &ctx).unwrap()
    }

    #[test]
    fn monomial_product() {
        let v = eval_str("T^(1/2)*T^(1/3)", 4);
        match v {
            Value::Scalar(s) => assert_eq!(s.to_string(), "T^(5/6)"),
            _ => panic!("expected scalar"),
        }
    }

    #[test]
    fn substitution() {
        let mut ctx = EvalContext::new(Rational::from_int(4));
        ctx.bind("Y1", NovikovScalar::t_power(Rational::new(1, 2)));
        let v = evaluate(&parse("Y1 + T*Y1^-1").unwrap(), &ctx).unwrap();
        match v {
            Value::Scalar(s) => assert_eq!(s.to_string(), "2*T^(1/2)"),
            _ => panic!("expected scalar"),
        }
    }

    #[test]
    fn geometric_series_inverse() {
        let v = eval_str("(1+T)^-1", 3);
        match v {
            Value::Scalar(s) => {
                let cut = crate::novikov::Order::Finite(Rational::from_int(3));
                assert_eq!(s.truncate(cut).to_string(), "1 - T + T^2");
            }
            _ => panic!("expected scalar"),
        }
    }

    #[test]
    fn series_variables() {
        let v = eval_str("Y1*Y2^-1 + T^(1/3)", 4);
        match v {
            Value::Series(s) => {
                assert_eq!(s.rank(), 2);
                assert_eq!(s.num_terms(), 2);
            }
            _ => panic!("expected series"),
        }
    }

    #[test]
    fn division_only_by_monomials() {
        let e = parse("Y1/(1+Y2)").unwrap();
        let ctx = EvalContext::new(Rational::from_int(4));
        match evaluate(&e, &ctx) {
            Err(Error::ParseError { msg, .. }) => assert!(msg.contains("monomial")),
            other => panic!("expected monomial-divisor error, got {other:?}"),
        }
    }

    #[test]
    fn parse_errors_carry_position() {
        match parse("T^(1/2") {
            Err(Error::ParseError { pos, .. }) => assert!(pos >= 5),
            other => panic!("expected parse error, got {other:?}"),
        }
        assert!(parse("2 +* 3").is_err());
    }

    #[test]
    fn imaginary_unit() {
        let v = eval_str("(1+i)*(1-i)", 4);
        match v {
            Value::Scalar(s) => assert!(s.approx_eq(&NovikovScalar::from_f64(2.0), 1e-12)),
            _ => panic!("expected scalar"),
        }
    }
}
