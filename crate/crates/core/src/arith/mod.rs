//! Number-theoretic substrate: factorization, square classes, local symbols.

mod factor;
mod local;

use std::fmt;

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

pub use factor::{factorize, factorize_with, is_prime, valuation, FactorBudget, Factorization};
pub use local::{
    class_representative, hilbert_local, hilbert_symbol, local_class, square_class_group,
    LocalClass, LocalForm, LocalValueGroup,
};
#[allow(unused_imports)]
pub(crate) use local::legendre;

use crate::error::{domain, Result};
use crate::field::{Q, Z};

/// Canonical representative `sign * radical` of `q * (Q^*)^2`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SquareClass {
    pub sign: i8,
    pub radical: Z,
}

impl SquareClass {
    pub fn one() -> Self {
        SquareClass {
            sign: 1,
            radical: Z::one(),
        }
    }

    pub fn is_trivial(&self) -> bool {
        self.sign == 1 && self.radical.is_one()
    }

    pub fn representative(&self) -> Z {
        Z::from(self.sign) * &self.radical
    }

    pub fn to_rational(&self) -> Q {
        Q::from_integer(self.representative())
    }

    pub fn mul(&self, other: &SquareClass) -> SquareClass {
        let g = self.radical.gcd(&other.radical);
        SquareClass {
            sign: self.sign * other.sign,
            radical: (&self.radical / &g) * (&other.radical / &g),
        }
    }
}

impl fmt::Display for SquareClass {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.representative())
    }
}

/// Squarefree part of a nonzero integer, keeping the sign.
pub fn squarefree_part(n: &Z) -> Result<Z> {
    let fac = factorize(n)?;
    let mut r = Z::from(fac.sign);
    for (p, e) in fac.factors {
        if e % 2 == 1 {
            r *= p;
        }
    }
    Ok(r)
}

pub fn square_class(q: &Q) -> Result<SquareClass> {
    if q.is_zero() {
        return Err(domain!("square class of 0"));
    }
    // q = n/d lies in the class of n*d.
    let nd = q.numer() * q.denom();
    let sf = squarefree_part(&nd)?;
    Ok(SquareClass {
        sign: if sf.is_negative() { -1 } else { 1 },
        radical: sf.abs(),
    })
}

/// Writes a nonzero rational as `s^2 * r` with `r` a squarefree integer.
pub fn split_square(q: &Q) -> Result<(Q, Z)> {
    let class = square_class(q)?;
    let r = class.representative();
    let ratio = q / Q::from_integer(r.clone());
    let s = crate::field::rational_sqrt(&ratio)
        .ok_or_else(|| crate::error::internal!("square class of {q} is not {r}"))?;
    Ok((s, r))
}

/// Completion of the rationals: the real place or a finite prime.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Place {
    Real,
    Finite(Z),
}

impl Place {
    pub fn prime(p: impl Into<Z>) -> Result<Place> {
        let p = p.into();
        if !is_prime(&p) {
            return Err(domain!("{p} is not prime"));
        }
        Ok(Place::Finite(p))
    }
}

impl fmt::Display for Place {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Place::Real => write!(f, "inf"),
            Place::Finite(p) => write!(f, "{p}"),
        }
    }
}

/// Primes dividing the numerator or denominator of any of the given rationals.
pub fn primes_of(values: &[Q]) -> Result<Vec<Z>> {
    let mut out: Vec<Z> = Vec::new();
    for v in values {
        for part in [v.numer(), v.denom()] {
            if part.is_zero() {
                continue;
            }
            for p in factorize(part)?.primes() {
                if !out.contains(p) {
                    out.push(p.clone());
                }
            }
        }
    }
    out.sort();
    Ok(out)
}

/// `{inf, 2} ∪ {p | p divides a numerator or denominator}` in a fixed order.
pub fn bad_places(values: &[Q]) -> Result<Vec<Place>> {
    let mut primes = primes_of(values)?;
    if !primes.contains(&Z::from(2)) {
        primes.push(Z::from(2));
        primes.sort();
    }
    let mut places = vec![Place::Real];
    places.extend(primes.into_iter().map(Place::Finite));
    Ok(places)
}
