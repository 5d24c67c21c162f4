use num_traits::{One, Zero};

use super::witt::isotropic_partner;
use super::{is_isotropic, isotropic_vector, QuadraticForm};
use crate::arith::{bad_places, local_class, square_class, LocalValueGroup, Place};
use crate::error::{domain, internal, Result};
use crate::field::{q, rational_sqrt, Q};
use crate::search;

/// A vector `x` with `form(x) = d`, or `None` when `d` is not represented.
///
/// Isotropic forms are universal; otherwise `d` is represented iff
/// `form ⊥ <-d>` is isotropic, and the witness is read off a zero of it.
pub fn represents(form: &QuadraticForm, d: &Q) -> Result<Option<Vec<Q>>> {
    if d.is_zero() {
        return Err(domain!("represents: d = 0"));
    }
    if form.dim() == 1 {
        return Ok(rational_sqrt(&(d / &form.coeffs()[0])).map(|s| vec![s]));
    }
    if let Some(v) = isotropic_vector(form)? {
        let u = isotropic_partner(form, &v)?;
        let w: Vec<Q> = v.iter().zip(&u).map(|(vi, ui)| d * vi + ui).collect();
        return Ok(Some(w));
    }
    let ext = form.perp_value(-d)?;
    let Some(z) = isotropic_vector(&ext)? else {
        return Ok(None);
    };
    let n = form.dim();
    let y = &z[n];
    if y.is_zero() {
        return Err(internal!("anisotropic {form} has a zero"));
    }
    Ok(Some(z[..n].iter().map(|x| x / y).collect()))
}

/// Subgroup of local square classes generated by the classes the form
/// represents at `v` (the whole group when the form is isotropic there).
pub fn local_value_group(form: &QuadraticForm, v: &Place) -> Result<LocalValueGroup> {
    Ok(form.local(v)?.value_group())
}

#[derive(Debug, Clone, PartialEq)]
pub struct CertificateFactor {
    pub value: Q,
    pub witness: Vec<Q>,
}

/// `prod(values) = d * square^2`, every value represented by its witness.
#[derive(Debug, Clone, PartialEq)]
pub struct Certificate {
    pub factors: Vec<CertificateFactor>,
    pub square: Q,
}

impl Certificate {
    pub fn values(&self) -> Vec<Q> {
        self.factors.iter().map(|f| f.value.clone()).collect()
    }

    pub fn verify(&self, form: &QuadraticForm, d: &Q) -> Result<bool> {
        for f in &self.factors {
            if f.value.is_zero() || form.eval(&f.witness)? != f.value {
                return Ok(false);
            }
        }
        let prod: Q = self.factors.iter().map(|f| f.value.clone()).product();
        Ok(!self.square.is_zero() && prod == d * &self.square * &self.square)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum NonMemberReason {
    /// The class of `d` lies outside the local value group at this place.
    Local(Place),
    /// Binary `<a, b>`: the generated group is `<a> · N(K*)` for
    /// `K = Q(sqrt(-ab))`, and neither `d` nor `a d` is a norm.
    NormGroup { radicand: crate::field::Z },
}

impl NonMemberReason {
    pub fn verify(&self, form: &QuadraticForm, d: &Q) -> Result<bool> {
        match self {
            NonMemberReason::Local(place) => {
                Ok(!local_value_group(form, place)?.contains(local_class(d, place)?))
            }
            NonMemberReason::NormGroup { .. } => {
                if form.dim() != 2 || is_isotropic(form)? {
                    return Ok(false);
                }
                let a = &form.coeffs()[0];
                Ok(represents(form, d)?.is_none() && represents(form, &(a * d))?.is_none())
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum MembershipVerdict {
    Member(Certificate),
    NonMember(NonMemberReason),
    Unknown(String),
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct MembershipOptions {
    pub max_factors: usize,
    /// Number of distinct represented square classes tried as cofactors.
    pub candidates: usize,
}

impl Default for MembershipOptions {
    fn default() -> Self {
        MembershipOptions {
            max_factors: 3,
            candidates: 48,
        }
    }
}

/// Membership of `d` in the group generated by the values of `form`.
///
/// Local value groups at the bad places give obstructions; certificates
/// come from a search over products of at most `max_factors` represented
/// values. Binary forms are decided completely through the norm group of
/// the associated quadratic field.
pub fn value_group_membership(
    form: &QuadraticForm,
    d: &Q,
    opts: MembershipOptions,
) -> Result<MembershipVerdict> {
    if d.is_zero() {
        return Err(domain!("value_group_membership: d = 0"));
    }
    if form.dim() < 2 {
        return Err(domain!("value group of a form of dimension {}", form.dim()));
    }
    let single = |x: &Q, w: Vec<Q>| CertificateFactor {
        value: x.clone(),
        witness: w,
    };
    if let Some(w) = represents(form, d)? {
        return Ok(MembershipVerdict::Member(Certificate {
            factors: vec![single(d, w)],
            square: Q::one(),
        }));
    }
    let mut values: Vec<Q> = form.coeffs().to_vec();
    values.push(d.clone());
    for place in bad_places(&values)? {
        if !local_value_group(form, &place)?.contains(local_class(d, &place)?) {
            return Ok(MembershipVerdict::NonMember(NonMemberReason::Local(place)));
        }
    }
    if opts.max_factors < 2 {
        return Ok(MembershipVerdict::Unknown(
            "not represented and a single factor is allowed".into(),
        ));
    }
    if form.dim() == 2 {
        let a = form.coeffs()[0].clone();
        let mut e1 = vec![Q::zero(); 2];
        e1[0] = Q::one();
        let ad = &a * d;
        return Ok(match represents(form, &ad)? {
            Some(w) => MembershipVerdict::Member(Certificate {
                factors: vec![single(&a, e1), single(&ad, w)],
                square: a,
            }),
            None => {
                let m = square_class(&-(&form.coeffs()[0] * &form.coeffs()[1]))?;
                MembershipVerdict::NonMember(NonMemberReason::NormGroup {
                    radicand: m.representative(),
                })
            }
        });
    }
    let cands = candidate_values(form, opts.candidates)?;
    for (r, v) in &cands {
        let dr = d * r;
        if let Some(w) = represents(form, &dr)? {
            return Ok(MembershipVerdict::Member(Certificate {
                factors: vec![single(r, v.clone()), single(&dr, w)],
                square: r.clone(),
            }));
        }
    }
    if opts.max_factors >= 3 {
        for (i, (r1, v1)) in cands.iter().enumerate() {
            for (r2, v2) in &cands[i..] {
                let drr = d * r1 * r2;
                if let Some(w) = represents(form, &drr)? {
                    return Ok(MembershipVerdict::Member(Certificate {
                        factors: vec![single(r1, v1.clone()), single(r2, v2.clone()), single(&drr, w)],
                        square: r1 * r2,
                    }));
                }
            }
        }
    }
    Ok(MembershipVerdict::Unknown(format!(
        "no certificate with at most {} factors among {} represented classes",
        opts.max_factors,
        cands.len()
    )))
}

/// Values of the form at small integer vectors, one per square class.
fn candidate_values(form: &QuadraticForm, count: usize) -> Result<Vec<(Q, Vec<Q>)>> {
    let mut seen = Vec::new();
    let mut out = Vec::new();
    for v in search::height_ordered(form.dim(), i64::MAX).take(200_000) {
        if out.len() >= count {
            break;
        }
        let v: Vec<Q> = v.into_iter().map(q).collect();
        let val = form.eval(&v)?;
        let class = square_class(&val)?;
        if class.is_trivial() || seen.contains(&class) {
            continue;
        }
        seen.push(class);
        out.push((val, v));
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::LocalClass;
    use crate::field::Z;

    fn f(c: &[i64]) -> QuadraticForm {
        QuadraticForm::from_ints(c).unwrap()
    }

    fn member(form: &QuadraticForm, d: i64) -> MembershipVerdict {
        let v = value_group_membership(form, &q(d), MembershipOptions::default()).unwrap();
        match &v {
            MembershipVerdict::Member(c) => assert!(c.verify(form, &q(d)).unwrap()),
            MembershipVerdict::NonMember(r) => assert!(r.verify(form, &q(d)).unwrap()),
            MembershipVerdict::Unknown(_) => {}
        }
        v
    }

    #[test]
    fn represents_examples() {
        assert_eq!(represents(&f(&[1, 1]), &q(5)).unwrap(), Some(vec![q(1), q(2)]));
        assert_eq!(represents(&f(&[1, 1]), &q(3)).unwrap(), None);
        for d in [1, -1, 7, -12] {
            let w = represents(&f(&[1, -1]), &q(d)).unwrap().unwrap();
            assert_eq!(f(&[1, -1]).eval(&w).unwrap(), q(d));
        }
        assert!(represents(&f(&[1, 1]), &q(0)).is_err());
    }

    #[test]
    fn local_groups() {
        let g = local_value_group(&f(&[1, 1, 1]), &Place::Real).unwrap();
        assert_eq!(g.members(), vec![LocalClass(0)]);
        for v in [Place::Real, Place::Finite(Z::from(2)), Place::Finite(Z::from(7))] {
            assert!(local_value_group(&f(&[1, -1]), &v).unwrap().is_full());
        }
    }

    #[test]
    fn sums_of_two_squares() {
        let form = f(&[1, 1]);
        for d in [2, 5, 10, 13] {
            assert!(matches!(member(&form, d), MembershipVerdict::Member(_)));
        }
        assert_eq!(
            member(&form, -1),
            MembershipVerdict::NonMember(NonMemberReason::Local(Place::Real))
        );
        assert_eq!(
            member(&form, 21),
            MembershipVerdict::NonMember(NonMemberReason::Local(Place::Finite(Z::from(3))))
        );
    }

    #[test]
    fn binary_decision_matches_norm_oracle() {
        // <1, 1>: d is in the group iff d > 0 and every prime 3 mod 4 has even
        // exponent.
        let form = f(&[1, 1]);
        for d in 1..120i64 {
            let oracle = {
                let mut n = d;
                let mut ok = true;
                let mut p = 2;
                while p * p <= n {
                    let mut e = 0;
                    while n % p == 0 {
                        n /= p;
                        e += 1;
                    }
                    if p % 4 == 3 && e % 2 == 1 {
                        ok = false;
                    }
                    p += 1;
                }
                ok && !(n > 1 && n % 4 == 3)
            };
            let got = matches!(member(&form, d), MembershipVerdict::Member(_));
            assert_eq!(got, oracle, "d = {d}");
        }
    }

    #[test]
    fn ternary_groups_are_found() {
        let form = f(&[1, 1, 1]);
        for d in [7, 15, 28, 3, 1, 2] {
            assert!(matches!(member(&form, d), MembershipVerdict::Member(_)), "{d}");
        }
        assert!(matches!(member(&form, -7), MembershipVerdict::NonMember(_)));
        let form = f(&[1, -2, -3]);
        for d in [-1, 6, 7, -5] {
            assert!(matches!(member(&form, d), MembershipVerdict::Member(_)), "{d}");
        }
    }
}
