//! Regular diagonal quadratic forms over Q: isotropy, Witt decomposition,
//! represented values and the group they generate.

mod ternary;
mod values;
mod witt;

use std::fmt;

use num_traits::{Signed, Zero};

use crate::arith::{bad_places, square_class, LocalForm, Place};
use crate::error::{domain, internal, Result};
use crate::field::{q, rational_sqrt, Scalar, Q};
use crate::linalg::Matrix;
use crate::search;

pub use ternary::{legendre_solve, primitive_in_place, ternary_zero};
pub use values::{
    local_value_group, represents, value_group_membership, Certificate, CertificateFactor,
    MembershipOptions, MembershipVerdict, NonMemberReason,
};
pub use witt::{witt_decompose, WittDecomposition};

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct QuadraticForm {
    coeffs: Vec<Q>,
}

impl QuadraticForm {
    pub fn new(coeffs: Vec<Q>) -> Result<Self> {
        if coeffs.is_empty() {
            return Err(domain!("quadratic form of dimension 0"));
        }
        if coeffs.iter().any(|c| c.is_zero()) {
            return Err(domain!("degenerate form: zero coefficient"));
        }
        Ok(QuadraticForm { coeffs })
    }

    pub fn from_ints(coeffs: &[i64]) -> Result<Self> {
        Self::new(coeffs.iter().map(|&c| crate::field::q(c)).collect())
    }

    pub fn coeffs(&self) -> &[Q] {
        &self.coeffs
    }

    pub fn dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn eval<F: Scalar>(&self, x: &[F]) -> Result<F> {
        if x.len() != self.dim() {
            return Err(domain!("vector of length {} for a form of dimension {}", x.len(), self.dim()));
        }
        Ok(self
            .coeffs
            .iter()
            .zip(x)
            .fold(F::zero(), |acc, (a, xi)| acc + F::from_rational(a) * xi.square()))
    }

    /// Polar form `B(x, y)` with `B(x, x) = q(x)`.
    pub fn polar<F: Scalar>(&self, x: &[F], y: &[F]) -> F {
        self.coeffs
            .iter()
            .zip(x.iter().zip(y))
            .fold(F::zero(), |acc, (a, (xi, yi))| {
                acc + F::from_rational(a) * xi.clone() * yi.clone()
            })
    }

    pub fn gram(&self) -> Matrix<Q> {
        Matrix::diagonal(&self.coeffs)
    }

    /// Orthogonal sum `self ⊥ other`.
    pub fn perp(&self, other: &QuadraticForm) -> QuadraticForm {
        let mut c = self.coeffs.clone();
        c.extend(other.coeffs.iter().cloned());
        QuadraticForm { coeffs: c }
    }

    pub fn perp_value(&self, a: Q) -> Result<QuadraticForm> {
        Ok(self.perp(&QuadraticForm::new(vec![a])?))
    }

    pub fn scale(&self, c: &Q) -> Result<QuadraticForm> {
        if c.is_zero() {
            return Err(domain!("scaling a form by 0"));
        }
        Ok(QuadraticForm {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        })
    }

    pub fn negate(&self) -> QuadraticForm {
        QuadraticForm {
            coeffs: self.coeffs.iter().map(|a| -a).collect(),
        }
    }

    pub fn hyperbolic_plane() -> QuadraticForm {
        QuadraticForm::from_ints(&[1, -1]).expect("nonzero")
    }

    pub fn determinant(&self) -> Q {
        self.coeffs.iter().product()
    }

    /// Signed discriminant `(-1)^{n(n-1)/2} det`.
    pub fn discriminant(&self) -> Q {
        let n = self.dim();
        let d = self.determinant();
        if (n * (n - 1) / 2) % 2 == 1 {
            -d
        } else {
            d
        }
    }

    /// `(positive, negative)` counts.
    pub fn signature(&self) -> (usize, usize) {
        let pos = self.coeffs.iter().filter(|a| a.is_positive()).count();
        (pos, self.dim() - pos)
    }

    pub fn is_definite(&self) -> bool {
        let (p, n) = self.signature();
        p == 0 || n == 0
    }

    pub fn local(&self, place: &Place) -> Result<LocalForm> {
        LocalForm::of_diagonal(&self.coeffs, place)
    }

    /// Places where isotropy can fail: infinity, 2 and the primes in the
    /// coefficients.
    pub fn bad_places(&self) -> Result<Vec<Place>> {
        bad_places(&self.coeffs)
    }

    /// The same form with every coefficient replaced by its squarefree
    /// integer representative, and the diagonal change of basis relating
    /// them: `self(s ⊙ y) = reduced(y)`.
    pub fn square_reduced(&self) -> Result<(QuadraticForm, Vec<Q>)> {
        let mut coeffs = Vec::with_capacity(self.dim());
        let mut scale = Vec::with_capacity(self.dim());
        for a in &self.coeffs {
            let r = square_class(a)?.to_rational();
            let s = rational_sqrt(&(&r / a)).ok_or_else(|| internal!("{a} not in class {r}"))?;
            coeffs.push(r);
            scale.push(s);
        }
        Ok((QuadraticForm { coeffs }, scale))
    }
}

impl fmt::Display for QuadraticForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "<")?;
        for (i, a) in self.coeffs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{a}")?;
        }
        write!(f, ">")
    }
}

pub fn is_isotropic_at(form: &QuadraticForm, place: &Place) -> Result<bool> {
    Ok(form.local(place)?.is_isotropic())
}

/// Rational isotropy via Hasse–Minkowski.
pub fn is_isotropic(form: &QuadraticForm) -> Result<bool> {
    let c = form.coeffs();
    match form.dim() {
        1 => Ok(false),
        2 => Ok(rational_sqrt(&-(&c[0] * &c[1])).is_some()),
        n if n >= 5 => {
            let (p, m) = form.signature();
            Ok(p > 0 && m > 0)
        }
        _ => {
            for place in form.bad_places()? {
                if !is_isotropic_at(form, &place)? {
                    return Ok(false);
                }
            }
            Ok(true)
        }
    }
}

/// First place (in bad-place order) where the form is anisotropic.
pub fn anisotropy_witness(form: &QuadraticForm) -> Result<Option<Place>> {
    if form.dim() < 3 {
        return Ok(None);
    }
    for place in form.bad_places()? {
        if !is_isotropic_at(form, &place)? {
            return Ok(Some(place));
        }
    }
    Ok(None)
}

/// Whether the small-height enumeration is cheap enough to run first.
fn enumeration_height(n: usize) -> i64 {
    const CAP: u64 = 4096;
    let mut h = 0;
    while (2 * (h as u64 + 1) + 1).saturating_pow(n as u32) <= CAP {
        h += 1;
    }
    if h == 0 && 3u64.saturating_pow(n as u32) <= 20_000 {
        h = 1;
    }
    h
}

/// Number of tail vectors tried when cutting a form down to a ternary one.
const REDUCTION_BUDGET: usize = 200_000;

/// A nonzero rational zero, `None` iff the form is anisotropic.
///
/// Small vectors are tried first in height order; otherwise binary forms
/// use the square root directly, ternary forms Legendre descent, and larger
/// forms are cut down to a ternary problem.
pub fn isotropic_vector(form: &QuadraticForm) -> Result<Option<Vec<Q>>> {
    if !is_isotropic(form)? {
        return Ok(None);
    }
    let n = form.dim();
    let h = enumeration_height(n);
    for v in search::height_ordered(n, h) {
        let v: Vec<Q> = v.into_iter().map(crate::field::q).collect();
        if form.eval(&v)?.is_zero() {
            return Ok(Some(v));
        }
    }
    let v = reduce_to_ternary(form)?
        .ok_or_else(|| internal!("no zero found for isotropic form {form}"))?;
    debug_assert!(form.eval(&v).map(|x| x.is_zero()).unwrap_or(false));
    Ok(Some(v))
}

fn reduce_to_ternary(form: &QuadraticForm) -> Result<Option<Vec<Q>>> {
    let c = form.coeffs();
    let n = form.dim();
    match n {
        2 => {
            let s = rational_sqrt(&-(&c[1] / &c[0]))
                .ok_or_else(|| internal!("binary form {form} not split"))?;
            let mut v = vec![s, Q::from_integer(1.into())];
            primitive_in_place(&mut v);
            Ok(Some(v))
        }
        3 => Ok(ternary_zero(&[c[0].clone(), c[1].clone(), c[2].clone()])?.map(|v| v.to_vec())),
        4 => match quaternary_split(form)? {
            Some(v) => Ok(Some(v)),
            None => split_off_ternary(form, &[0, 1, 2, 3]),
        },
        _ => {
            // Some indefinite 5-dimensional subform is isotropic.
            let pos: Vec<usize> = (0..n).filter(|&i| c[i].is_positive()).collect();
            let neg: Vec<usize> = (0..n).filter(|&i| c[i].is_negative()).collect();
            let mut idx = vec![pos[0], neg[0]];
            let more: Vec<usize> = (0..n).filter(|i| !idx.contains(i)).take(3).collect();
            idx.extend(more);
            idx.sort_unstable();
            split_off_ternary(form, &idx)
        }
    }
}

/// `<a, b, c, d>` isotropic: find an integer `t` with `<a, b> ∋ t` and
/// `<c, d> ∋ -t`, so both halves reduce to ternary zeros. Small `t` with few
/// prime factors succeed quickly, unlike searching the values of `<c, d>`.
fn quaternary_split(form: &QuadraticForm) -> Result<Option<Vec<Q>>> {
    let c = form.coeffs();
    for (i, j, k, l) in [(0, 1, 2, 3), (0, 2, 1, 3), (0, 3, 1, 2)] {
        let left = [c[i].clone(), c[j].clone()];
        let right = [c[k].clone(), c[l].clone()];
        for m in 1..=QUATERNARY_T_BUDGET {
            for t in [q(m), q(-m)] {
                let lt = QuadraticForm::new(vec![left[0].clone(), left[1].clone(), -&t])?;
                let rt = QuadraticForm::new(vec![right[0].clone(), right[1].clone(), t.clone()])?;
                if !is_isotropic(&lt)? || !is_isotropic(&rt)? {
                    continue;
                }
                let three = |f: &QuadraticForm| [f.coeffs()[0].clone(), f.coeffs()[1].clone(), f.coeffs()[2].clone()];
                let (Some(x), Some(y)) = (ternary_zero(&three(&lt))?, ternary_zero(&three(&rt))?) else {
                    continue;
                };
                // A zero with last entry 0 is a zero of a binary half.
                let mut v = vec![Q::zero(); 4];
                if x[2].is_zero() {
                    (v[i], v[j]) = (x[0].clone(), x[1].clone());
                } else if y[2].is_zero() {
                    (v[k], v[l]) = (y[0].clone(), y[1].clone());
                } else {
                    v[i] = &x[0] / &x[2];
                    v[j] = &x[1] / &x[2];
                    v[k] = &y[0] / &y[2];
                    v[l] = &y[1] / &y[2];
                }
                primitive_in_place(&mut v);
                return Ok(Some(v));
            }
        }
    }
    Ok(None)
}

const QUATERNARY_T_BUDGET: i64 = 20_000;

/// Finds `w` in the span of `idx[2..]` such that `<a, b, q(w)>` is isotropic
/// (with `a, b` the coefficients at `idx[0], idx[1]`) and solves that ternary
/// form.
fn split_off_ternary(form: &QuadraticForm, idx: &[usize]) -> Result<Option<Vec<Q>>> {
    let c = form.coeffs();
    let n = form.dim();
    let (i, j) = (idx[0], idx[1]);
    let rest = &idx[2..];
    let head = QuadraticForm::new(vec![c[i].clone(), c[j].clone()])?;
    for w in search::height_ordered(rest.len(), i64::MAX).take(REDUCTION_BUDGET) {
        let w: Vec<Q> = w.into_iter().map(crate::field::q).collect();
        let tail: Q = rest.iter().zip(&w).map(|(&k, x)| &c[k] * x * x).sum();
        let mut v = vec![Q::zero(); n];
        if tail.is_zero() {
            for (&k, x) in rest.iter().zip(&w) {
                v[k] = x.clone();
            }
            return Ok(Some(v));
        }
        let tern = head.perp_value(tail)?;
        if !is_isotropic(&tern)? {
            continue;
        }
        let z = ternary_zero(&[c[i].clone(), c[j].clone(), tern.coeffs()[2].clone()])?
            .ok_or_else(|| internal!("descent failed on isotropic {tern}"))?;
        v[i] = z[0].clone();
        v[j] = z[1].clone();
        for (&k, x) in rest.iter().zip(&w) {
            v[k] = x * &z[2];
        }
        primitive_in_place(&mut v);
        return Ok(Some(v));
    }
    Ok(None)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};

    fn f(c: &[i64]) -> QuadraticForm {
        QuadraticForm::from_ints(c).unwrap()
    }

    #[test]
    fn isotropy_examples() {
        assert!(is_isotropic(&f(&[1, -1])).unwrap());
        assert!(!is_isotropic(&f(&[1, 1, 1])).unwrap());
        assert!(!is_isotropic(&f(&[1, -2, -3])).unwrap());
        assert!(is_isotropic(&f(&[1, 1, 1, 1, -1])).unwrap());
        assert!(is_isotropic(&f(&[1, 1, 1, 1, -7])).unwrap());
        assert!(QuadraticForm::from_ints(&[1, 0]).is_err());
    }

    #[test]
    fn isotropic_vector_examples() {
        assert_eq!(isotropic_vector(&f(&[1, -1])).unwrap(), Some(vec![q(1), q(1)]));
        assert_eq!(isotropic_vector(&f(&[1, 1, 1])).unwrap(), None);
        assert_eq!(isotropic_vector(&f(&[1, 2, -3])).unwrap(), Some(vec![q(1), q(1), q(1)]));
    }

    #[test]
    fn isotropic_vectors_verify() {
        let forms = [
            vec![q(1), q(-1), q(5), q(7)],
            vec![q(3), q(5), q(-1), q(-15)],
            vec![qf(1, 3), qf(-5, 7), q(11)],
            vec![q(1), q(1), q(1), q(1), q(1), q(1), q(1), q(-1)],
            vec![q(1), q(1), q(1), q(-7)],
            vec![q(101), q(-103), q(107)],
            vec![q(2), q(-9)],
        ];
        for c in forms {
            let form = QuadraticForm::new(c).unwrap();
            match isotropic_vector(&form).unwrap() {
                Some(v) => {
                    assert!(v.iter().any(|x| !x.is_zero()));
                    assert_eq!(form.eval(&v).unwrap(), q(0), "{form}");
                }
                None => assert!(!is_isotropic(&form).unwrap()),
            }
        }
    }

    #[test]
    fn large_reduction_path_is_exercised() {
        // No small zero: 29 x^2 + 31 y^2 - 1073 z^2 - 3 w^2.
        let form = QuadraticForm::new(vec![q(29), q(31), q(-1073), q(-3)]).unwrap();
        if is_isotropic(&form).unwrap() {
            let v = reduce_to_ternary(&form).unwrap().unwrap();
            assert_eq!(form.eval(&v).unwrap(), q(0));
        }
        let tern = QuadraticForm::new(vec![q(1009), q(-1013), q(-17)]).unwrap();
        if is_isotropic(&tern).unwrap() {
            let v = reduce_to_ternary(&tern).unwrap().unwrap();
            assert_eq!(tern.eval(&v).unwrap(), q(0));
        }
    }

    #[test]
    fn scaling_invariance() {
        for c in [[1, 1, -1], [1, -2, -3], [2, 3, 5], [1, 1, 1]] {
            let form = f(&c);
            for s in [q(-1), q(2), qf(3, 5), q(-6)] {
                assert_eq!(
                    is_isotropic(&form).unwrap(),
                    is_isotropic(&form.scale(&s).unwrap()).unwrap()
                );
            }
        }
    }
}
