//! Quadratic fields Q(sqrt m) and isotropy of rational forms over them.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{is_prime, legendre, square_class, squarefree_part, Place};
use crate::error::{domain, Result};
use crate::field::{q, rational_sqrt, Scalar, Q, Z};
use crate::forms::{is_isotropic, is_isotropic_at, isotropic_vector, represents, QuadraticForm};
use crate::linalg::{diagonalize, Matrix};
use crate::search;

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadField {
    m: Z,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Splitting {
    Split,
    Inert,
    Ramified,
}

impl QuadField {
    pub fn new(m: impl Into<Z>) -> Result<Self> {
        let m = m.into();
        if m.is_zero() || m.is_one() {
            return Err(domain!("Q(sqrt {m}) is not a quadratic field"));
        }
        if squarefree_part(&m)? != m {
            return Err(domain!("{m} is not squarefree"));
        }
        Ok(QuadField { m })
    }

    /// The field `Q(sqrt x)` for a rational `x` that is not a square.
    pub fn of_radicand(x: &Q) -> Result<Self> {
        Self::new(square_class(x)?.representative())
    }

    pub fn m(&self) -> &Z {
        &self.m
    }

    pub fn discriminant(&self) -> Z {
        if self.m.mod_floor(&Z::from(4)) == Z::one() {
            self.m.clone()
        } else {
            &self.m * 4
        }
    }

    pub fn is_real(&self) -> bool {
        self.m.is_positive()
    }

    pub fn sqrt_m(&self) -> QuadElem {
        QuadElem {
            a: Q::zero(),
            b: Q::one(),
            m: self.m.clone(),
        }
    }

    pub fn elem(&self, a: Q, b: Q) -> QuadElem {
        QuadElem {
            a,
            b,
            m: self.m.clone(),
        }
    }

    pub fn splitting_type(&self, p: &Z) -> Result<Splitting> {
        if !is_prime(p) {
            return Err(domain!("{p} is not prime"));
        }
        let d = self.discriminant();
        if p == &Z::from(2) {
            if d.is_even() {
                return Ok(Splitting::Ramified);
            }
            return Ok(if d.mod_floor(&Z::from(8)) == Z::one() {
                Splitting::Split
            } else {
                Splitting::Inert
            });
        }
        Ok(match legendre(&d, p) {
            0 => Splitting::Ramified,
            1 => Splitting::Split,
            _ => Splitting::Inert,
        })
    }
}

impl fmt::Display for QuadField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Q(sqrt({}))", self.m)
    }
}

pub fn splitting_type(p: &Z, k: &QuadField) -> Result<Splitting> {
    k.splitting_type(p)
}

/// `a + b sqrt(m)`. Elements built from rationals carry `m = 0` until they
/// meet an element of a definite field.
#[derive(Debug, Clone)]
pub struct QuadElem {
    pub a: Q,
    pub b: Q,
    m: Z,
}

impl QuadElem {
    pub fn rational(a: Q) -> Self {
        QuadElem {
            a,
            b: Q::zero(),
            m: Z::zero(),
        }
    }

    pub fn radicand(&self) -> &Z {
        &self.m
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    pub fn to_rational(&self) -> Option<Q> {
        self.is_rational().then(|| self.a.clone())
    }

    pub fn conj(&self) -> Self {
        QuadElem {
            a: self.a.clone(),
            b: -&self.b,
            m: self.m.clone(),
        }
    }

    pub fn norm(&self) -> Q {
        &self.a * &self.a - Q::from_integer(self.m.clone()) * &self.b * &self.b
    }

    fn join(&self, other: &Self) -> Z {
        if self.m.is_zero() {
            other.m.clone()
        } else {
            debug_assert!(other.m.is_zero() || other.m == self.m, "mixing quadratic fields");
            self.m.clone()
        }
    }
}

impl PartialEq for QuadElem {
    fn eq(&self, other: &Self) -> bool {
        self.a == other.a && self.b == other.b
    }
}

impl fmt::Display for QuadElem {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if !self.a.is_zero() {
            write!(f, "{}", self.a)?;
            write!(f, "{}", if self.b.is_negative() { "-" } else { "+" })?;
        } else if self.b.is_negative() {
            write!(f, "-")?;
        }
        let b = self.b.abs();
        if !b.is_one() {
            write!(f, "{b}*")?;
        }
        write!(f, "sqrt({})", self.m)
    }
}

impl Add for QuadElem {
    type Output = QuadElem;
    fn add(self, o: QuadElem) -> QuadElem {
        let m = self.join(&o);
        QuadElem {
            a: self.a + o.a,
            b: self.b + o.b,
            m,
        }
    }
}

impl Sub for QuadElem {
    type Output = QuadElem;
    fn sub(self, o: QuadElem) -> QuadElem {
        let m = self.join(&o);
        QuadElem {
            a: self.a - o.a,
            b: self.b - o.b,
            m,
        }
    }
}

impl Mul for QuadElem {
    type Output = QuadElem;
    fn mul(self, o: QuadElem) -> QuadElem {
        let m = self.join(&o);
        let mq = Q::from_integer(m.clone());
        QuadElem {
            a: &self.a * &o.a + mq * &self.b * &o.b,
            b: &self.a * &o.b + &self.b * &o.a,
            m,
        }
    }
}

impl Neg for QuadElem {
    type Output = QuadElem;
    fn neg(self) -> QuadElem {
        QuadElem {
            a: -self.a,
            b: -self.b,
            m: self.m,
        }
    }
}

impl Zero for QuadElem {
    fn zero() -> Self {
        QuadElem::rational(Q::zero())
    }
    fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }
}

impl One for QuadElem {
    fn one() -> Self {
        QuadElem::rational(Q::one())
    }
}

impl Scalar for QuadElem {
    fn from_rational(q: &Q) -> Self {
        QuadElem::rational(q.clone())
    }

    fn inv(&self) -> Option<Self> {
        let n = self.norm();
        if n.is_zero() {
            return None;
        }
        Some(QuadElem {
            a: &self.a / &n,
            b: -&self.b / &n,
            m: self.m.clone(),
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Obstruction {
    /// A one-dimensional form has no nonzero zero.
    Dimension,
    /// Binary `<a, b>`: `-b/a` is not a square in the field.
    NotASquare(Q),
    /// The form is definite and every real embedding preserves that.
    RealEmbeddings,
    /// A prime splitting in the field, over which the form is already
    /// anisotropic over `Q_p`.
    SplitPrime(Place),
}

#[derive(Debug, Clone, PartialEq)]
pub enum IsotropyVerdict {
    Isotropic(Option<Vec<QuadElem>>),
    Anisotropic(Obstruction),
    Unknown(String),
}

impl IsotropyVerdict {
    pub fn is_isotropic(&self) -> Option<bool> {
        match self {
            IsotropyVerdict::Isotropic(_) => Some(true),
            IsotropyVerdict::Anisotropic(_) => Some(false),
            IsotropyVerdict::Unknown(_) => None,
        }
    }
}

/// Number of rational directions tried when building a witness.
const WITNESS_BUDGET: usize = 4000;

/// Isotropy of the rational form `form` over `k`.
///
/// Places of `k` above a prime that is inert or ramified have a quadratic
/// extension of `Q_p` as completion, over which every rational form of
/// dimension at least 3 becomes isotropic; above a split prime the
/// completion is `Q_p` itself. So for dimension at least 3 the form is
/// anisotropic over `k` exactly when it is definite and `k` is real, or it is
/// anisotropic at some prime that splits in `k`.
pub fn is_isotropic_over(form: &QuadraticForm, k: &QuadField) -> Result<IsotropyVerdict> {
    let c = form.coeffs();
    if form.dim() == 1 {
        return Ok(IsotropyVerdict::Anisotropic(Obstruction::Dimension));
    }
    if form.dim() == 2 {
        let t = -(&c[1] / &c[0]);
        if let Some(s) = rational_sqrt(&t) {
            let w = vec![QuadElem::rational(s), QuadElem::one()];
            return Ok(IsotropyVerdict::Isotropic(Some(w)));
        }
        let mq = Q::from_integer(k.m().clone());
        if let Some(s) = rational_sqrt(&(&t / &mq)) {
            let w = vec![k.elem(Q::zero(), s), QuadElem::one()];
            return Ok(IsotropyVerdict::Isotropic(Some(w)));
        }
        if k.is_real() && form.is_definite() {
            return Ok(IsotropyVerdict::Anisotropic(Obstruction::RealEmbeddings));
        }
        return Ok(IsotropyVerdict::Anisotropic(Obstruction::NotASquare(t)));
    }
    if let Some(v) = isotropic_vector(form)? {
        let w = v.into_iter().map(QuadElem::rational).collect();
        return Ok(IsotropyVerdict::Isotropic(Some(w)));
    }
    if k.is_real() && form.is_definite() {
        return Ok(IsotropyVerdict::Anisotropic(Obstruction::RealEmbeddings));
    }
    if form.dim() <= 4 {
        for place in form.bad_places()? {
            let Place::Finite(p) = &place else { continue };
            if !is_isotropic_at(form, &place)? && k.splitting_type(p)? == Splitting::Split {
                return Ok(IsotropyVerdict::Anisotropic(Obstruction::SplitPrime(place)));
            }
        }
    }
    Ok(match witness_over(form, k)? {
        Some(w) => IsotropyVerdict::Isotropic(Some(w)),
        None => IsotropyVerdict::Isotropic(None),
    })
}

/// For `form` anisotropic over Q but isotropic over `k = Q(sqrt m)`: a zero
/// `x + sqrt(m) u` has `x ⟂ u` and `q(x) = -m q(u)`. Search `u`, then ask
/// whether `u^⟂` represents `-m q(u)`.
fn witness_over(form: &QuadraticForm, k: &QuadField) -> Result<Option<Vec<QuadElem>>> {
    let n = form.dim();
    let mq = Q::from_integer(k.m().clone());
    for u in search::height_ordered(n, i64::MAX).take(WITNESS_BUDGET) {
        let u: Vec<Q> = u.into_iter().map(q).collect();
        let qu = form.eval(&u)?;
        let row: Vec<Q> = form.coeffs().iter().zip(&u).map(|(a, x)| a * x).collect();
        let perp = Matrix::from_rows(vec![row])?.nullspace();
        let basis = Matrix::from_columns(&perp)?;
        let d = diagonalize(&basis.congruence(&form.gram())?)?;
        if d.radical_dim != 0 {
            continue;
        }
        let beta = QuadraticForm::new(d.entries.clone())?;
        let Some(y) = represents(&beta, &(-&mq * &qu))? else {
            continue;
        };
        let x = basis.mul(&d.transform)?.mul_vec(&y)?;
        let w: Vec<QuadElem> = x
            .into_iter()
            .zip(u)
            .map(|(xi, ui)| k.elem(xi, ui))
            .collect();
        debug_assert!(form.eval(&w).map(|v| v.is_zero()).unwrap_or(false));
        return Ok(Some(w));
    }
    Ok(None)
}

/// Isotropy over Q presented with the same verdict type.
pub fn is_isotropic_over_q(form: &QuadraticForm) -> Result<IsotropyVerdict> {
    if let Some(v) = isotropic_vector(form)? {
        return Ok(IsotropyVerdict::Isotropic(Some(
            v.into_iter().map(QuadElem::rational).collect(),
        )));
    }
    if form.dim() == 1 {
        return Ok(IsotropyVerdict::Anisotropic(Obstruction::Dimension));
    }
    if form.dim() == 2 {
        let c = form.coeffs();
        return Ok(IsotropyVerdict::Anisotropic(Obstruction::NotASquare(-(&c[1] / &c[0]))));
    }
    debug_assert!(!is_isotropic(form)?);
    for place in form.bad_places()? {
        if !is_isotropic_at(form, &place)? {
            return Ok(IsotropyVerdict::Anisotropic(match place {
                Place::Real => Obstruction::RealEmbeddings,
                p => Obstruction::SplitPrime(p),
            }));
        }
    }
    Ok(IsotropyVerdict::Unknown("local data inconsistent".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f(c: &[i64]) -> QuadraticForm {
        QuadraticForm::from_ints(c).unwrap()
    }

    fn field(m: i64) -> QuadField {
        QuadField::new(m).unwrap()
    }

    #[test]
    fn splitting_examples() {
        let k = field(-1);
        assert_eq!(k.splitting_type(&Z::from(5)).unwrap(), Splitting::Split);
        assert_eq!(k.splitting_type(&Z::from(3)).unwrap(), Splitting::Inert);
        assert_eq!(k.splitting_type(&Z::from(2)).unwrap(), Splitting::Ramified);
        assert_eq!(field(-7).splitting_type(&Z::from(2)).unwrap(), Splitting::Split);
        assert_eq!(field(5).splitting_type(&Z::from(2)).unwrap(), Splitting::Inert);
        assert!(k.splitting_type(&Z::from(9)).is_err());
    }

    #[test]
    fn splitting_matches_factorization_mod_p() {
        // Oracle: the number of roots of the minimal polynomial mod p.
        for m in [-5i64, -3, -2, -1, 2, 3, 5, 6, 7, 13, 17] {
            let k = field(m);
            for p in [3i64, 5, 7, 11, 13, 17, 19, 23, 29, 31] {
                let (poly_b, poly_c) = if m.rem_euclid(4) == 1 {
                    (-1, (1 - m) / 4) // t^2 - t + (1-m)/4
                } else {
                    (0, -m)
                };
                let roots = (0..p)
                    .filter(|t| (t * t + poly_b * t + poly_c).rem_euclid(p) == 0)
                    .count();
                let disc_p = k.discriminant().mod_floor(&Z::from(p)).is_zero();
                let expected = match (roots, disc_p) {
                    (_, true) => Splitting::Ramified,
                    (2, _) => Splitting::Split,
                    _ => Splitting::Inert,
                };
                assert_eq!(k.splitting_type(&Z::from(p)).unwrap(), expected, "m={m} p={p}");
            }
        }
    }

    #[test]
    fn field_arithmetic() {
        let k = field(2);
        let x = k.elem(q(1), q(1));
        let y = x.inv().unwrap();
        assert_eq!(x.clone() * y, QuadElem::one());
        assert_eq!(x.norm(), q(-1));
        assert_eq!(k.sqrt_m() * k.sqrt_m(), QuadElem::from_int(2));
        assert!(QuadField::new(4).is_err());
        assert!(QuadField::new(1).is_err());
    }

    #[test]
    fn verdict_examples() {
        let v = is_isotropic_over(&f(&[1, 1]), &field(-1)).unwrap();
        let IsotropyVerdict::Isotropic(Some(w)) = v else { panic!("{v:?}") };
        assert!(f(&[1, 1]).eval(&w).unwrap().is_zero());
        assert_eq!(
            is_isotropic_over(&f(&[1, 1, 1]), &field(2)).unwrap(),
            IsotropyVerdict::Anisotropic(Obstruction::RealEmbeddings)
        );
        let v = is_isotropic_over(&f(&[1, -2]), &field(2)).unwrap();
        assert_eq!(v, IsotropyVerdict::Isotropic(Some(vec![field(2).sqrt_m(), QuadElem::one()])));
        // 2 splits in Q(sqrt -7), and <1,1,1> is anisotropic over Q_2.
        assert_eq!(
            is_isotropic_over(&f(&[1, 1, 1]), &field(-7)).unwrap(),
            IsotropyVerdict::Anisotropic(Obstruction::SplitPrime(Place::Finite(Z::from(2))))
        );
        assert!(is_isotropic_over(&f(&[2]), &field(3)).unwrap().is_isotropic() == Some(false));
    }

    #[test]
    fn ternary_witnesses_verify() {
        for (c, m) in [
            (vec![1, 1, 1], -1),
            (vec![1, 1, 1], -2),
            (vec![1, -2, -3], 6),
            (vec![1, -2, -3], -1),
            (vec![2, 3, 5], -3),
            (vec![1, 1, 1, 1], -1),
            (vec![1, 3, -7], 5),
        ] {
            let form = f(&c);
            let v = is_isotropic_over(&form, &field(m)).unwrap();
            if let IsotropyVerdict::Isotropic(Some(w)) = &v {
                assert!(form.eval(w).unwrap().is_zero(), "{form} over {m}");
                assert!(w.iter().any(|x| !x.is_zero()));
            }
            assert!(!matches!(v, IsotropyVerdict::Unknown(_)));
        }
    }

    #[test]
    fn positive_scaling_keeps_embedding_verdicts() {
        for s in [q(2), q(7), crate::field::qf(3, 5)] {
            let form = f(&[1, 1, 1]).scale(&s).unwrap();
            assert_eq!(
                is_isotropic_over(&form, &field(3)).unwrap(),
                IsotropyVerdict::Anisotropic(Obstruction::RealEmbeddings)
            );
        }
    }
}
