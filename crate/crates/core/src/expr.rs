//! Expression syntax for Witt classes and for elements of `A(BN)`.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary ('*' unary | '/' unary)*
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | name | '<' expr (',' expr)* '>' | '(' expr ')'
//! ```
//!
//! Inside `<...>` the entries are rational expressions and may use names
//! bound after a semicolon: `<2> + <2*d>; d = -1`. Outside the brackets an
//! integer `n` stands for `n<1>`; the ring evaluator also knows `e`, `q0`,
//! `et` (for ẽ) and `q1`.

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use crate::bn::{bn_add, bn_mul, twisted_add, twisted_product, twisted_scalar, BNElem, CoeffTheory, RingError, TwistedElem};
use crate::witt::{witt_class, FieldSpec, QForm, WittClass, WittError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ExprError {
    #[error("syntax error at offset {pos}: {msg}")]
    Syntax { pos: usize, msg: String },
    #[error("unknown name {0:?}")]
    UnknownName(String),
    #[error("{0}")]
    Domain(String),
    #[error(transparent)]
    Witt(#[from] WittError),
    #[error(transparent)]
    Ring(#[from] RingError),
    #[error("cannot add an untwisted and a twisted element")]
    TagMismatch,
}

impl ExprError {
    /// True for errors in the input text rather than in the mathematics.
    pub fn is_syntax(&self) -> bool {
        matches!(self, ExprError::Syntax { .. } | ExprError::UnknownName(_))
    }
}

#[derive(Debug, Clone, PartialEq)]
enum Tok {
    Int(BigInt),
    Name(String),
    Sym(char),
}

fn tokenize(text: &str) -> Result<Vec<(usize, Tok)>, ExprError> {
    let mut out = Vec::new();
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    while i < chars.len() {
        let (pos, c) = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].1.is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().map(|(_, c)| c).collect();
            out.push((pos, Tok::Int(s.parse().expect("digits"))));
        } else if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].1.is_alphanumeric() || chars[i].1 == '_') {
                i += 1;
            }
            out.push((pos, Tok::Name(chars[start..i].iter().map(|(_, c)| c).collect())));
        } else {
            let sym = match c {
                '⟨' => '<',
                '⟩' => '>',
                '−' => '-',
                '·' => '*',
                '+' | '-' | '*' | '/' | '^' | '(' | ')' | '<' | '>' | ',' => c,
                _ => return Err(ExprError::Syntax { pos, msg: format!("unexpected character {c:?}") }),
            };
            out.push((pos, Tok::Sym(sym)));
            i += 1;
        }
    }
    Ok(out)
}

#[derive(Debug, Clone)]
enum Ast {
    Int(BigInt),
    Name(String),
    Form(Vec<Ast>),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    at: usize,
    end: usize,
}

impl Parser {
    fn peek(&self) -> Option<&Tok> {
        self.toks.get(self.at).map(|(_, t)| t)
    }

    fn pos(&self) -> usize {
        self.toks.get(self.at).map_or(self.end, |(p, _)| *p)
    }

    fn err<T>(&self, msg: impl Into<String>) -> Result<T, ExprError> {
        Err(ExprError::Syntax { pos: self.pos(), msg: msg.into() })
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Tok::Sym(c)) {
            self.at += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ExprError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.err(format!("expected '{c}'"))
        }
    }

    fn expr(&mut self, in_form: bool) -> Result<Ast, ExprError> {
        let mut lhs = self.term(in_form)?;
        loop {
            if self.eat('+') {
                lhs = Ast::Add(Box::new(lhs), Box::new(self.term(in_form)?));
            } else if self.eat('-') {
                lhs = Ast::Sub(Box::new(lhs), Box::new(self.term(in_form)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn term(&mut self, in_form: bool) -> Result<Ast, ExprError> {
        let mut lhs = self.unary(in_form)?;
        loop {
            if self.eat('*') {
                lhs = Ast::Mul(Box::new(lhs), Box::new(self.unary(in_form)?));
            } else if self.eat('/') {
                lhs = Ast::Div(Box::new(lhs), Box::new(self.unary(in_form)?));
            } else {
                return Ok(lhs);
            }
        }
    }

    fn unary(&mut self, in_form: bool) -> Result<Ast, ExprError> {
        if self.eat('-') {
            return Ok(Ast::Neg(Box::new(self.unary(in_form)?)));
        }
        let base = self.atom(in_form)?;
        if self.eat('^') {
            return match self.peek().cloned() {
                Some(Tok::Int(n)) => {
                    self.at += 1;
                    let k = u32::try_from(&n).or_else(|_| self.err("exponent too large"))?;
                    Ok(Ast::Pow(Box::new(base), k))
                }
                _ => self.err("expected a nonnegative integer exponent"),
            };
        }
        Ok(base)
    }

    fn atom(&mut self, in_form: bool) -> Result<Ast, ExprError> {
        match self.peek().cloned() {
            Some(Tok::Int(n)) => {
                self.at += 1;
                Ok(Ast::Int(n))
            }
            Some(Tok::Name(s)) => {
                self.at += 1;
                Ok(Ast::Name(s))
            }
            Some(Tok::Sym('(')) => {
                self.at += 1;
                let e = self.expr(in_form)?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Tok::Sym('<')) if !in_form => {
                self.at += 1;
                let mut entries = Vec::new();
                if !self.eat('>') {
                    loop {
                        entries.push(self.expr(true)?);
                        if self.eat('>') {
                            break;
                        }
                        self.expect(',')?;
                    }
                }
                Ok(Ast::Form(entries))
            }
            Some(_) => self.err("unexpected token"),
            None => self.err("unexpected end of input"),
        }
    }
}

fn parse_ast(text: &str) -> Result<Ast, ExprError> {
    let toks = tokenize(text)?;
    let mut p = Parser { toks, at: 0, end: text.len() };
    let ast = p.expr(false)?;
    if p.at != p.toks.len() {
        return p.err("trailing input");
    }
    Ok(ast)
}

type Bindings = BTreeMap<String, BigRational>;

fn eval_rational(ast: &Ast, env: &Bindings) -> Result<BigRational, ExprError> {
    let r = |a: &Ast| eval_rational(a, env);
    Ok(match ast {
        Ast::Int(n) => BigRational::from_integer(n.clone()),
        Ast::Name(s) => env.get(s).cloned().ok_or_else(|| ExprError::UnknownName(s.clone()))?,
        Ast::Form(_) => return Err(ExprError::Domain("forms cannot appear inside a form entry".into())),
        Ast::Add(a, b) => r(a)? + r(b)?,
        Ast::Sub(a, b) => r(a)? - r(b)?,
        Ast::Mul(a, b) => r(a)? * r(b)?,
        Ast::Div(a, b) => {
            let d = r(b)?;
            if d.is_zero() {
                return Err(ExprError::Domain("division by zero".into()));
            }
            r(a)? / d
        }
        Ast::Neg(a) => -r(a)?,
        Ast::Pow(a, k) => {
            let base = r(a)?;
            (0..*k).fold(BigRational::one(), |acc, _| acc * &base)
        }
    })
}

/// Splits `"expr; a = 1, b = 2*a"` into the expression and its bindings.
fn split_bindings(text: &str) -> Result<(&str, Bindings), ExprError> {
    let (body, rest) = match text.find(';') {
        Some(i) => (&text[..i], &text[i + 1..]),
        None => (text, ""),
    };
    let mut env = Bindings::new();
    for (k, part) in rest.split([';', ',']).enumerate() {
        if part.trim().is_empty() {
            continue;
        }
        let offset = body.len() + 1 + k;
        let (name, value) = part
            .split_once('=')
            .ok_or(ExprError::Syntax { pos: offset, msg: format!("binding {:?} lacks '='", part.trim()) })?;
        let name = name.trim();
        if name.is_empty() || !name.chars().all(|c| c.is_alphanumeric() || c == '_') {
            return Err(ExprError::Syntax { pos: offset, msg: format!("bad binding name {name:?}") });
        }
        let v = eval_rational(&parse_ast(value)?, &env)?;
        env.insert(name.to_string(), v);
    }
    Ok((body, env))
}

fn form_class(entries: &[Ast], env: &Bindings, field: FieldSpec) -> Result<WittClass, ExprError> {
    let values = entries.iter().map(|a| eval_rational(a, env)).collect::<Result<Vec<_>, _>>()?;
    Ok(witt_class(&QForm::new(field, values)?))
}

fn eval_witt(ast: &Ast, env: &Bindings, field: FieldSpec) -> Result<WittClass, ExprError> {
    let w = |a: &Ast| eval_witt(a, env, field);
    Ok(match ast {
        Ast::Int(n) => {
            let n = i64::try_from(n).map_err(|_| ExprError::Domain("integer too large".into()))?;
            WittClass::from_integer(field, n)
        }
        Ast::Name(s) => return Err(ExprError::UnknownName(s.clone())),
        Ast::Form(entries) => form_class(entries, env, field)?,
        Ast::Add(a, b) => w(a)?.try_add(&w(b)?)?,
        Ast::Sub(a, b) => w(a)?.try_sub(&w(b)?)?,
        Ast::Mul(a, b) => w(a)?.try_mul(&w(b)?)?,
        Ast::Div(..) => return Err(ExprError::Domain("division is not defined in W(k)".into())),
        Ast::Neg(a) => w(a)?.negated(),
        Ast::Pow(a, k) => {
            let base = w(a)?;
            (0..*k).try_fold(WittClass::one(field), |acc, _| acc.try_mul(&base))?
        }
    })
}

/// Evaluates a Witt-class expression such as `"<2> + <2*d>; d = -1"`.
pub fn eval_witt_expr(text: &str, field: FieldSpec) -> Result<WittClass, ExprError> {
    let (body, env) = split_bindings(text)?;
    eval_witt(&parse_ast(body)?, &env, field)
}

/// Parses a Witt-class literal: a sum of integers and forms `<a1,...>`.
pub fn parse_witt(text: &str, field: FieldSpec) -> Result<WittClass, ExprError> {
    if text.contains(';') {
        return Err(ExprError::Syntax { pos: text.find(';').unwrap_or(0), msg: "bindings are not allowed here".into() });
    }
    eval_witt(&parse_ast(text)?, &Bindings::new(), field)
}

/// An element of `A(BN)` or of the twisted module.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum RingValue {
    Untwisted(BNElem),
    Twisted(TwistedElem),
}

impl RingValue {
    pub fn is_zero(&self) -> bool {
        match self {
            RingValue::Untwisted(x) => x.is_zero(),
            RingValue::Twisted(x) => x.is_zero(),
        }
    }

    pub fn is_twisted(&self) -> bool {
        matches!(self, RingValue::Twisted(_))
    }
}

impl std::fmt::Display for RingValue {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            RingValue::Untwisted(x) => write!(f, "{x}"),
            RingValue::Twisted(x) => write!(f, "{x}"),
        }
    }
}

/// Everything the ring evaluator needs besides the expression.
#[derive(Debug, Clone)]
pub struct RingContext {
    pub field: FieldSpec,
    pub theory: CoeffTheory,
    pub truncation: usize,
    /// Value of `ẽ^2` in `A(BN)`.
    pub etilde_square: BNElem,
}

impl RingContext {
    fn constant(&self, c: WittClass) -> RingValue {
        RingValue::Untwisted(BNElem::constant(c, self.theory.clone(), self.truncation))
    }

    pub fn add(&self, a: &RingValue, b: &RingValue) -> Result<RingValue, ExprError> {
        use RingValue::*;
        Ok(match (a, b) {
            (Untwisted(x), Untwisted(y)) => Untwisted(bn_add(x, y)?),
            (Twisted(x), Twisted(y)) => Twisted(twisted_add(x, y)?),
            _ if a.is_zero() => b.clone(),
            _ if b.is_zero() => a.clone(),
            _ => return Err(ExprError::TagMismatch),
        })
    }

    pub fn neg(&self, a: &RingValue) -> RingValue {
        match a {
            RingValue::Untwisted(x) => RingValue::Untwisted(x.neg()),
            RingValue::Twisted(x) => RingValue::Twisted(x.neg()),
        }
    }

    pub fn mul(&self, a: &RingValue, b: &RingValue) -> Result<RingValue, ExprError> {
        use RingValue::*;
        Ok(match (a, b) {
            (Untwisted(x), Untwisted(y)) => Untwisted(bn_mul(x, y)?),
            (Untwisted(x), Twisted(y)) | (Twisted(y), Untwisted(x)) => Twisted(twisted_scalar(x, y)?),
            (Twisted(x), Twisted(y)) => Untwisted(twisted_product(x, y, &self.etilde_square)?),
        })
    }

    fn eval(&self, ast: &Ast) -> Result<RingValue, ExprError> {
        let (field, theory, t) = (self.field, self.theory.clone(), self.truncation);
        Ok(match ast {
            Ast::Int(_) | Ast::Form(_) => self.constant(eval_witt(ast, &Bindings::new(), field)?),
            Ast::Name(s) => match s.as_str() {
                "e" => RingValue::Untwisted(BNElem::e(field, theory, t)),
                "q0" => RingValue::Untwisted(BNElem::q0(field, theory, t)),
                "et" => RingValue::Twisted(TwistedElem::etilde(field, theory, t)),
                "q1" => RingValue::Twisted(TwistedElem::q1(field, theory, t)),
                _ => return Err(ExprError::UnknownName(s.clone())),
            },
            Ast::Add(a, b) => self.add(&self.eval(a)?, &self.eval(b)?)?,
            Ast::Sub(a, b) => self.add(&self.eval(a)?, &self.neg(&self.eval(b)?))?,
            Ast::Mul(a, b) => self.mul(&self.eval(a)?, &self.eval(b)?)?,
            Ast::Div(..) => return Err(ExprError::Domain("division is not defined in A(BN)".into())),
            Ast::Neg(a) => self.neg(&self.eval(a)?),
            Ast::Pow(a, k) => {
                let base = self.eval(a)?;
                let one = self.constant(WittClass::one(field));
                (0..*k).try_fold(one, |acc, _| self.mul(&acc, &base))?
            }
        })
    }
}

/// Evaluates an expression in `A(BN)` or the twisted module, e.g.
/// `"(1+q0)*e"`.
pub fn eval_ring_expr(text: &str, ctx: &RingContext) -> Result<RingValue, ExprError> {
    ctx.eval(&parse_ast(text)?)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn ctx() -> RingContext {
        let s = BNElem::e_power(WittClass::from_integer(Q, -4), 1, CoeffTheory::HW, 8);
        RingContext { field: Q, theory: CoeffTheory::HW, truncation: 8, etilde_square: s }
    }

    fn ring(s: &str) -> String {
        eval_ring_expr(s, &ctx()).unwrap().to_string()
    }

    #[test]
    fn witt_expressions() {
        assert!(eval_witt_expr("<2>+<2*d>; d=-1", Q).unwrap().is_zero());
        assert_eq!(eval_witt_expr("<1,1>*<2>", Q).unwrap(), eval_witt_expr("2", Q).unwrap());
        assert_eq!(eval_witt_expr("⟨3⟩ − ⟨3⟩", Q).unwrap(), WittClass::zero(Q));
        assert_eq!(parse_witt("<1/2>", Q).unwrap(), parse_witt("<2>", Q).unwrap());
        assert!(matches!(eval_witt_expr("<x>", Q), Err(ExprError::UnknownName(_))));
        assert!(matches!(eval_witt_expr("<1", Q), Err(ExprError::Syntax { .. })));
        assert!(matches!(eval_witt_expr("<0>", Q), Err(ExprError::Witt(_))));
    }

    #[test]
    fn ring_relations() {
        assert_eq!(ring("(1+q0)*e"), "0");
        assert_eq!(ring("q0^2"), "1");
        assert_eq!(ring("(1+q0)*et"), "0");
        assert_eq!(ring("(1+q0)*q1"), "0");
        assert_eq!(ring("et*et"), "-4*e");
        assert_eq!(ring("e^2 + 3*q0"), "e^2 + 3*q0");
        assert!(matches!(eval_ring_expr("e*q1", &ctx()), Err(ExprError::Ring(RingError::UnreducedQ1Product))));
        assert_eq!(eval_ring_expr("e + et", &ctx()), Err(ExprError::TagMismatch));
    }
}
