//! Dense univariate polynomials over a [`Scalar`] field, and factorization
//! over the rationals.

mod factor;
mod modp;

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::field::{fmt_rational, Scalar, Q};

pub use factor::{factor_over_q, is_irreducible, Factored, DEFAULT_DEGREE_BUDGET};

/// Coefficients stored low degree first, without trailing zeros.
#[derive(Debug, Clone, PartialEq)]
pub struct Poly<F: Scalar = Q> {
    coeffs: Vec<F>,
}

impl<F: Scalar> Poly<F> {
    pub fn new(mut coeffs: Vec<F>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        Poly { coeffs }
    }

    pub fn constant(c: F) -> Self {
        Poly::new(vec![c])
    }

    /// The variable `t`.
    pub fn t() -> Self {
        Poly::new(vec![F::zero(), F::one()])
    }

    /// `t + a`.
    pub fn linear(a: F) -> Self {
        Poly::new(vec![a, F::one()])
    }

    pub fn monomial(c: F, k: usize) -> Self {
        let mut v = vec![F::zero(); k + 1];
        v[k] = c;
        Poly::new(v)
    }

    pub fn coeffs(&self) -> &[F] {
        &self.coeffs
    }

    pub fn coeff(&self, k: usize) -> F {
        self.coeffs.get(k).cloned().unwrap_or_else(F::zero)
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn is_constant(&self) -> bool {
        self.coeffs.len() <= 1
    }

    pub fn leading(&self) -> F {
        self.coeffs.last().cloned().unwrap_or_else(F::zero)
    }

    pub fn scale(&self, k: &F) -> Self {
        Poly::new(self.coeffs.iter().map(|c| c.clone() * k.clone()).collect())
    }

    pub fn monic(&self) -> Self {
        match self.leading().inv() {
            Some(i) => self.scale(&i),
            None => self.clone(),
        }
    }

    pub fn is_monic(&self) -> bool {
        self.leading().is_one()
    }

    pub fn eval(&self, x: &F) -> F {
        self.coeffs
            .iter()
            .rev()
            .fold(F::zero(), |acc, c| acc * x.clone() + c.clone())
    }

    /// `self(g(t))`.
    pub fn compose(&self, g: &Poly<F>) -> Poly<F> {
        self.coeffs
            .iter()
            .rev()
            .fold(Poly::zero(), |acc, c| acc * g.clone() + Poly::constant(c.clone()))
    }

    pub fn derivative(&self) -> Self {
        Poly::new(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(k, c)| c.clone() * F::from_int(k as i64))
                .collect(),
        )
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Poly::one();
        for _ in 0..e {
            acc = acc * self.clone();
        }
        acc
    }

    /// Euclidean division; `None` when dividing by zero.
    pub fn div_rem(&self, d: &Poly<F>) -> Option<(Poly<F>, Poly<F>)> {
        let dd = d.degree()?;
        let inv = d.leading().inv()?;
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return Some((Poly::zero(), self.clone()));
        }
        let mut quo = vec![F::zero(); r.len() - dd];
        for k in (dd..r.len()).rev() {
            let c = r[k].clone() * inv.clone();
            if c.is_zero() {
                continue;
            }
            for (j, dc) in d.coeffs.iter().enumerate() {
                r[k - dd + j] = r[k - dd + j].clone() - c.clone() * dc.clone();
            }
            quo[k - dd] = c;
        }
        r.truncate(dd);
        Some((Poly::new(quo), Poly::new(r)))
    }

    /// Exact quotient, `None` if `d` does not divide `self`.
    pub fn exact_div(&self, d: &Poly<F>) -> Option<Poly<F>> {
        let (q, r) = self.div_rem(d)?;
        r.is_zero().then_some(q)
    }

    /// Monic gcd (zero when both inputs are zero).
    pub fn gcd(&self, other: &Poly<F>) -> Poly<F> {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b).expect("nonzero divisor");
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn map<G: Scalar>(&self, f: impl Fn(&F) -> G) -> Poly<G> {
        Poly::new(self.coeffs.iter().map(f).collect())
    }
}

impl Poly<Q> {
    pub fn from_ints(c: &[i64]) -> Self {
        Poly::new(c.iter().map(|&x| Q::from_int(x)).collect())
    }

    pub fn lift<F: Scalar>(&self) -> Poly<F> {
        self.map(F::from_rational)
    }
}

impl<F: Scalar> Zero for Poly<F> {
    fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }
}

impl<F: Scalar> One for Poly<F> {
    fn one() -> Self {
        Poly::constant(F::one())
    }
}

impl<F: Scalar> Add for Poly<F> {
    type Output = Poly<F>;

    fn add(self, rhs: Poly<F>) -> Poly<F> {
        let (mut long, short) = if self.coeffs.len() >= rhs.coeffs.len() {
            (self.coeffs, rhs.coeffs)
        } else {
            (rhs.coeffs, self.coeffs)
        };
        for (a, b) in long.iter_mut().zip(short) {
            *a = a.clone() + b;
        }
        Poly::new(long)
    }
}

impl<F: Scalar> Neg for Poly<F> {
    type Output = Poly<F>;

    fn neg(self) -> Poly<F> {
        Poly {
            coeffs: self.coeffs.into_iter().map(|c| -c).collect(),
        }
    }
}

impl<F: Scalar> Sub for Poly<F> {
    type Output = Poly<F>;

    fn sub(self, rhs: Poly<F>) -> Poly<F> {
        self + (-rhs)
    }
}

impl<F: Scalar> Mul for Poly<F> {
    type Output = Poly<F>;

    fn mul(self, rhs: Poly<F>) -> Poly<F> {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut out = vec![F::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                out[i + j] = out[i + j].clone() + a.clone() * b.clone();
            }
        }
        Poly::new(out)
    }
}

/// Polynomials form a ring, not a field: only nonzero constants invert.
/// This is enough to evaluate model equations on polynomial points.
impl<F: Scalar> Scalar for Poly<F> {
    fn from_rational(q: &Q) -> Self {
        Poly::constant(F::from_rational(q))
    }

    fn inv(&self) -> Option<Self> {
        if self.is_constant() {
            self.leading().inv().map(Poly::constant)
        } else {
            None
        }
    }
}

/// Renders in the variable `t`, highest degree first.
impl<F: Scalar + fmt::Display> fmt::Display for Poly<F> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write_poly(f, &self.coeffs, |c| c.to_string())
    }
}

/// Rational coefficients as `num/den`, e.g. `t^2 - 1/2*t + 3`.
pub fn fmt_poly_q(p: &Poly<Q>) -> String {
    struct W<'a>(&'a Poly<Q>);
    impl fmt::Display for W<'_> {
        fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
            write_poly(f, &self.0.coeffs, fmt_rational)
        }
    }
    W(p).to_string()
}

fn write_poly<F: Scalar>(
    f: &mut fmt::Formatter<'_>,
    coeffs: &[F],
    show: impl Fn(&F) -> String,
) -> fmt::Result {
    if coeffs.is_empty() {
        return write!(f, "0");
    }
    let mut first = true;
    for (k, c) in coeffs.iter().enumerate().rev() {
        if c.is_zero() {
            continue;
        }
        let mut s = show(c);
        let negative = s.starts_with('-') && !s[1..].contains(['+', '-']);
        if negative {
            s.remove(0);
        }
        if s.contains(['+', '-', ' ']) {
            s = format!("({s})");
        }
        if first {
            if negative {
                write!(f, "-")?;
            }
        } else {
            write!(f, " {} ", if negative { '-' } else { '+' })?;
        }
        first = false;
        match (k, s.as_str()) {
            (0, _) => write!(f, "{s}")?,
            (_, "1") => {}
            _ => write!(f, "{s}*")?,
        }
        match k {
            0 => {}
            1 => write!(f, "t")?,
            _ => write!(f, "t^{k}")?,
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};

    fn p(c: &[i64]) -> Poly<Q> {
        Poly::from_ints(c)
    }

    #[test]
    fn arithmetic() {
        let a = p(&[1, 1]);
        let b = p(&[-1, 1]);
        assert_eq!(a.clone() * b.clone(), p(&[-1, 0, 1]));
        assert_eq!(a.clone() - a.clone(), Poly::zero());
        let (qq, r) = p(&[1, 0, 0, 1]).div_rem(&p(&[1, 1])).unwrap();
        assert_eq!((qq, r), (p(&[1, -1, 1]), Poly::zero()));
        assert_eq!(p(&[-1, 0, 1]).gcd(&p(&[2, 2])), p(&[1, 1]));
        assert_eq!(p(&[1, 2, 3]).derivative(), p(&[2, 6]));
        assert_eq!(p(&[0, 0, 1]).compose(&p(&[1, 1])), p(&[1, 2, 1]));
        assert_eq!(p(&[1, 0, 1]).eval(&q(2)), q(5));
    }

    #[test]
    fn display() {
        assert_eq!(fmt_poly_q(&p(&[-1, 0, 1])), "t^2 - 1");
        assert_eq!(fmt_poly_q(&Poly::new(vec![q(3), qf(-1, 2), q(1)])), "t^2 - 1/2*t + 3");
        assert_eq!(fmt_poly_q(&Poly::zero()), "0");
        assert_eq!(fmt_poly_q(&p(&[0, -1])), "-t");
    }
}
