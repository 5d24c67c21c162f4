//! Input grammars.
//!
//! ```text
//! expr   := term (('+' | '-') term)*
//! term   := unary (('*' | '/')? unary)*      juxtaposition multiplies
//! unary  := '-' unary | power
//! power  := atom ('^' integer)?
//! atom   := integer | variable | '(' expr ')'
//! ```
//!
//! Variables are `x1, x2, ...` for quadrics and `t` for rational functions.
//! Forms and points are comma-separated rationals.

use std::collections::BTreeMap;
use std::fmt;

use num_traits::{One, Zero};
use quadric_a1::field::{fmt_rational, parse_rational, Q, Z};
use quadric_a1::forms::QuadraticForm;
use quadric_a1::linalg::Matrix;
use quadric_a1::poly::Poly;
use quadric_a1::quadrics::AffineQuadricPoly;
use quadric_a1::qvt::RationalFunction;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    /// Byte offset into the input.
    pub pos: usize,
    pub msg: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at position {}: {}", self.pos, self.msg)
    }
}

impl std::error::Error for ParseError {}

fn err<T>(pos: usize, msg: impl Into<String>) -> Result<T, ParseError> {
    Err(ParseError { pos, msg: msg.into() })
}

#[derive(Debug, Clone)]
enum Ast {
    Num(Z),
    Var(String, usize),
    Add(Box<Ast>, Box<Ast>),
    Sub(Box<Ast>, Box<Ast>),
    Mul(Box<Ast>, Box<Ast>),
    Div(Box<Ast>, Box<Ast>, usize),
    Neg(Box<Ast>),
    Pow(Box<Ast>, u32),
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(s: &'a str) -> Self {
        Parser { s: s.as_bytes(), pos: 0 }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn digits(&mut self) -> &'a str {
        let start = self.pos;
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos]).expect("ascii")
    }

    fn parse_all(mut self) -> Result<Ast, ParseError> {
        if self.peek().is_none() {
            return err(0, "empty input");
        }
        let e = self.expr()?;
        match self.peek() {
            None => Ok(e),
            Some(c) => err(self.pos, format!("unexpected {:?}", c as char)),
        }
    }

    fn expr(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.term()?;
        loop {
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    acc = Ast::Add(Box::new(acc), Box::new(self.term()?));
                }
                Some(b'-') => {
                    self.pos += 1;
                    acc = Ast::Sub(Box::new(acc), Box::new(self.term()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn term(&mut self) -> Result<Ast, ParseError> {
        let mut acc = self.unary()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    acc = Ast::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                Some(b'/') => {
                    self.pos += 1;
                    let at = self.pos;
                    acc = Ast::Div(Box::new(acc), Box::new(self.unary()?), at);
                }
                Some(c) if c == b'(' || c.is_ascii_alphanumeric() => {
                    acc = Ast::Mul(Box::new(acc), Box::new(self.unary()?));
                }
                _ => return Ok(acc),
            }
        }
    }

    fn unary(&mut self) -> Result<Ast, ParseError> {
        if self.peek() == Some(b'-') {
            self.pos += 1;
            return Ok(Ast::Neg(Box::new(self.unary()?)));
        }
        let base = self.atom()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.skip_ws();
            let at = self.pos;
            let d = self.digits();
            if d.is_empty() {
                return err(at, "expected a nonnegative integer exponent");
            }
            let e: u32 = d.parse().or_else(|_| err(at, "exponent too large"))?;
            return Ok(Ast::Pow(Box::new(base), e));
        }
        Ok(base)
    }

    fn atom(&mut self) -> Result<Ast, ParseError> {
        let at = self.pos;
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                if self.peek() != Some(b')') {
                    return err(self.pos, "expected ')'");
                }
                self.pos += 1;
                Ok(e)
            }
            Some(c) if c.is_ascii_digit() => {
                let at = self.pos;
                let d = self.digits();
                Ok(Ast::Num(d.parse().or_else(|_| err(at, "bad integer"))?))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let at = self.pos;
                let start = self.pos;
                self.pos += 1;
                while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
                    self.pos += 1;
                }
                let name = std::str::from_utf8(&self.s[start..self.pos]).expect("ascii");
                Ok(Ast::Var(name.to_string(), at))
            }
            Some(c) => err(self.pos, format!("unexpected {:?}", c as char)),
            None => err(at.max(self.pos), "unexpected end of input"),
        }
    }
}

/// Sparse polynomial in `x1, x2, ...`: exponent vector -> coefficient.
type Sparse = BTreeMap<Vec<u32>, Q>;

fn sparse_const(c: Q) -> Sparse {
    let mut m = Sparse::new();
    if !c.is_zero() {
        m.insert(Vec::new(), c);
    }
    m
}

fn norm_key(mut k: Vec<u32>) -> Vec<u32> {
    while k.last() == Some(&0) {
        k.pop();
    }
    k
}

fn sparse_add(mut a: Sparse, b: &Sparse, sign: i32) -> Sparse {
    for (k, v) in b {
        let e = a.entry(k.clone()).or_insert_with(Q::zero);
        if sign > 0 {
            *e += v;
        } else {
            *e -= v;
        }
        if e.is_zero() {
            a.remove(k);
        }
    }
    a
}

fn sparse_mul(a: &Sparse, b: &Sparse) -> Sparse {
    let mut out = Sparse::new();
    for (ka, va) in a {
        for (kb, vb) in b {
            let n = ka.len().max(kb.len());
            let k: Vec<u32> = (0..n)
                .map(|i| ka.get(i).copied().unwrap_or(0) + kb.get(i).copied().unwrap_or(0))
                .collect();
            let prod = va * vb;
            out = sparse_add(out, &BTreeMap::from([(norm_key(k), prod)]), 1);
        }
    }
    out
}

fn total_degree(k: &[u32]) -> u32 {
    k.iter().sum()
}

fn eval_sparse(ast: &Ast) -> Result<Sparse, ParseError> {
    Ok(match ast {
        Ast::Num(z) => sparse_const(Q::from_integer(z.clone())),
        Ast::Var(name, at) => {
            let idx = name
                .strip_prefix('x')
                .and_then(|d| d.parse::<usize>().ok())
                .filter(|&i| i >= 1)
                .ok_or_else(|| ParseError {
                    pos: *at,
                    msg: format!("unknown variable {name:?}; expected x1, x2, ..."),
                })?;
            let mut k = vec![0; idx];
            k[idx - 1] = 1;
            BTreeMap::from([(k, Q::one())])
        }
        Ast::Add(a, b) => sparse_add(eval_sparse(a)?, &eval_sparse(b)?, 1),
        Ast::Sub(a, b) => sparse_add(eval_sparse(a)?, &eval_sparse(b)?, -1),
        Ast::Mul(a, b) => sparse_mul(&eval_sparse(a)?, &eval_sparse(b)?),
        Ast::Neg(a) => sparse_add(Sparse::new(), &eval_sparse(a)?, -1),
        Ast::Div(a, b, at) => {
            let d = eval_sparse(b)?;
            let c = match d.len() {
                1 => d.get(&Vec::new()).cloned(),
                _ => None,
            };
            let Some(c) = c else {
                return err(*at, "division by a non-constant or zero");
            };
            let inv = sparse_const(c.recip());
            sparse_mul(&eval_sparse(a)?, &inv)
        }
        Ast::Pow(a, e) => {
            let base = eval_sparse(a)?;
            if *e > 64 {
                return err(0, "exponent too large");
            }
            let mut acc = sparse_const(Q::one());
            for _ in 0..*e {
                acc = sparse_mul(&acc, &base);
            }
            acc
        }
    })
}

/// Parses an affine quadric `x^T A x + b.x + c` in `x1..xn`, where `n` is the
/// largest variable index that occurs.
pub fn parse_polynomial(text: &str) -> Result<AffineQuadricPoly, ParseError> {
    let ast = Parser::new(text).parse_all()?;
    let sparse = eval_sparse(&ast)?;
    let deg = sparse.keys().map(|k| total_degree(k)).max().unwrap_or(0);
    if deg != 2 {
        return err(0, format!("expected a polynomial of degree 2, got degree {deg}"));
    }
    let n = sparse.keys().map(|k| k.len()).max().unwrap_or(0);
    let mut p = AffineQuadricPoly::zero(n);
    for (k, v) in &sparse {
        let vars: Vec<usize> = k
            .iter()
            .enumerate()
            .flat_map(|(i, &e)| std::iter::repeat_n(i, e as usize))
            .collect();
        match vars.as_slice() {
            [] => p.c = v.clone(),
            [i] => p.b[*i] = v.clone(),
            [i, j] => p.add_monomial2(*i, *j, v.clone()),
            _ => unreachable!("degree checked"),
        }
    }
    Ok(p)
}

fn push_term(out: &mut String, coef: &Q, mono: &str) {
    if coef.is_zero() {
        return;
    }
    let neg = coef < &Q::zero();
    let abs = if neg { -coef } else { coef.clone() };
    if out.is_empty() {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    if mono.is_empty() {
        out.push_str(&fmt_rational(&abs));
    } else {
        if !abs.is_one() {
            out.push_str(&fmt_rational(&abs));
            out.push('*');
        }
        out.push_str(mono);
    }
}

/// Inverse of [`parse_polynomial`]: `x1^2 + 2*x1*x2 - 1/2*x3 - 3`.
pub fn print_polynomial(p: &AffineQuadricPoly) -> String {
    let n = p.n();
    let mut out = String::new();
    let two = Q::from_integer(2.into());
    for i in 0..n {
        for j in i..n {
            if i == j {
                push_term(&mut out, &p.a[(i, i)], &format!("x{}^2", i + 1));
            } else {
                push_term(&mut out, &(&p.a[(i, j)] * &two), &format!("x{}*x{}", i + 1, j + 1));
            }
        }
    }
    for i in 0..n {
        push_term(&mut out, &p.b[i], &format!("x{}", i + 1));
    }
    push_term(&mut out, &p.c, "");
    if out.is_empty() {
        out.push('0');
    }
    out
}

fn eval_rf(ast: &Ast) -> Result<RationalFunction, ParseError> {
    let lib = |at: usize, e: quadric_a1::Error| ParseError { pos: at, msg: e.to_string() };
    Ok(match ast {
        Ast::Num(z) => RationalFunction::constant(Q::from_integer(z.clone())),
        Ast::Var(name, at) => {
            if name != "t" {
                return err(*at, format!("unknown variable {name:?}; expected t"));
            }
            RationalFunction::t()
        }
        Ast::Add(a, b) => eval_rf(a)? + eval_rf(b)?,
        Ast::Sub(a, b) => eval_rf(a)? - eval_rf(b)?,
        Ast::Mul(a, b) => eval_rf(a)? * eval_rf(b)?,
        Ast::Neg(a) => -eval_rf(a)?,
        Ast::Div(a, b, at) => {
            let d = eval_rf(b)?;
            if d.is_zero() {
                return err(*at, "division by zero");
            }
            let num = eval_rf(a)?;
            let prod_num = num.numerator().clone() * d.denominator().clone();
            let prod_den = num.denominator().clone() * d.numerator().clone();
            RationalFunction::new(prod_num, prod_den).map_err(|e| lib(*at, e))?
        }
        Ast::Pow(a, e) => eval_rf(a)?.powi(*e as i64).map_err(|e| lib(0, e))?,
    })
}

/// A rational function of `t`, e.g. `(t^2 + 1)/(t + 1)`.
pub fn parse_rational_function(text: &str) -> Result<RationalFunction, ParseError> {
    eval_rf(&Parser::new(text).parse_all()?)
}

/// A polynomial of `t`.
pub fn parse_t_polynomial(text: &str) -> Result<Poly<Q>, ParseError> {
    let f = parse_rational_function(text)?;
    if !f.denominator().is_one() {
        return err(0, "expected a polynomial in t");
    }
    Ok(f.numerator().clone())
}

/// Comma-separated rationals.
pub fn parse_vector(text: &str) -> Result<Vec<Q>, ParseError> {
    let mut out = Vec::new();
    let mut pos = 0;
    for part in text.split(',') {
        match parse_rational(part) {
            Some(x) => out.push(x),
            None => return err(pos, format!("expected a rational, got {:?}", part.trim())),
        }
        pos += part.len() + 1;
    }
    Ok(out)
}

/// `"1,-2,-3"` is the diagonal form `<1, -2, -3>`.
pub fn parse_form(text: &str) -> Result<QuadraticForm, ParseError> {
    let c = parse_vector(text)?;
    QuadraticForm::new(c).map_err(|e| ParseError { pos: 0, msg: e.to_string() })
}

pub fn parse_q(text: &str) -> Result<Q, ParseError> {
    parse_rational(text).ok_or_else(|| ParseError {
        pos: 0,
        msg: format!("expected a rational, got {:?}", text.trim()),
    })
}

pub fn print_vector(v: &[Q]) -> String {
    v.iter().map(fmt_rational).collect::<Vec<_>>().join(",")
}

pub fn matrix_rows(m: &Matrix<Q>) -> Vec<Vec<String>> {
    m.row_vecs()
        .iter()
        .map(|r| r.iter().map(fmt_rational).collect())
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use quadric_a1::field::{q, qf};

    #[test]
    fn quadric_examples() {
        let p = parse_polynomial("x1^2 + x2^2 - x3^2 - 1").unwrap();
        assert_eq!(p.a, Matrix::diagonal(&[q(1), q(1), q(-1)]));
        assert_eq!(p.c, q(-1));
        let p = parse_polynomial("2*x1*x2 - 3").unwrap();
        assert_eq!(p.a[(0, 1)], q(1));
        assert_eq!(p.a[(1, 0)], q(1));
        assert_eq!(p.c, q(-3));
        let e = parse_polynomial("x1^3 - 1").unwrap_err();
        assert!(e.msg.contains("degree 3"), "{e}");
        assert!(parse_polynomial("x1 + 1").is_err());
        let e = parse_polynomial("x1^2 + y").unwrap_err();
        assert_eq!(e.pos, 7);
    }

    #[test]
    fn juxtaposition_and_rationals() {
        let p = parse_polynomial("1/2 x1 x2 - (x3 + 1)^2").unwrap();
        assert_eq!(p.a[(0, 1)], qf(1, 4));
        assert_eq!(p.a[(2, 2)], q(-1));
        assert_eq!(p.b[2], q(-2));
        assert_eq!(print_polynomial(&p), "1/2*x1*x2 - x3^2 - 2*x3 - 1");
    }

    #[test]
    fn rational_functions() {
        let f = parse_rational_function("(t^2 + 1)/(t + 1)").unwrap();
        assert_eq!(f.to_string(), "(t^2 + 1)/(t + 1)");
        let g = parse_rational_function("(1/2)/t").unwrap();
        assert_eq!(parse_rational_function(&g.to_string()).unwrap(), g);
        assert!(parse_rational_function("x").is_err());
        assert!(parse_rational_function("1/(t - t)").is_err());
    }

    #[test]
    fn forms() {
        assert_eq!(parse_form("1,-2,-3").unwrap(), QuadraticForm::from_ints(&[1, -2, -3]).unwrap());
        assert!(parse_form("1,0").is_err());
        assert!(parse_form("1,a").is_err());
    }
}
