//! Square classes, Hilbert symbols and quadratic-form invariants over the
//! completions R and Q_p.
//!
//! A local square class is stored as a vector over F2:
//! * real place: bit 0 = negative;
//! * odd p: bit 0 = odd valuation, bit 1 = unit part is a non-residue;
//! * p = 2: bit 0 = odd valuation, bit 1 = eps(u), bit 2 = omega(u), where
//!   eps(u) = (u-1)/2 and omega(u) = (u^2-1)/8 mod 2 for the odd unit part u.
//!
//! All three maps are group homomorphisms, so multiplication is XOR.

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::{valuation, Place};
use crate::error::{domain, Result};
use crate::field::{Q, Z};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct LocalClass(pub u8);

impl LocalClass {
    pub const ONE: LocalClass = LocalClass(0);

    pub fn mul(self, other: LocalClass) -> LocalClass {
        LocalClass(self.0 ^ other.0)
    }

    fn bit(self, i: u8) -> u8 {
        (self.0 >> i) & 1
    }
}

fn rank(place: &Place) -> u8 {
    match place {
        Place::Real => 1,
        Place::Finite(p) if p == &Z::from(2) => 3,
        Place::Finite(_) => 2,
    }
}

/// All local square classes at `place` (2, 4 or 8 of them).
pub fn square_class_group(place: &Place) -> Vec<LocalClass> {
    (0..(1u8 << rank(place))).map(LocalClass).collect()
}

/// Legendre symbol (a/p) for odd prime p, as 0 / 1 / -1.
pub(crate) fn legendre(a: &Z, p: &Z) -> i8 {
    let a = a.mod_floor(p);
    if a.is_zero() {
        return 0;
    }
    let e = (p - 1u32) >> 1usize;
    if a.modpow(&e, p).is_one() {
        1
    } else {
        -1
    }
}

fn smallest_nonresidue(p: &Z) -> Z {
    let mut u = Z::from(2);
    while legendre(&u, p) != -1 {
        u += 1;
    }
    u
}

fn unit_class_bits(u: &Z, p: &Z) -> u8 {
    if p == &Z::from(2) {
        let r = u.mod_floor(&Z::from(8)).to_u8().unwrap_or(1);
        let eps = ((r.wrapping_sub(1)) / 2) & 1;
        let omega = match r {
            3 | 5 => 1,
            _ => 0,
        };
        (eps << 1) | (omega << 2)
    } else if legendre(u, p) == -1 {
        2
    } else {
        0
    }
}

/// Square class of a nonzero rational in the completion at `place`.
pub fn local_class(x: &Q, place: &Place) -> Result<LocalClass> {
    if x.is_zero() {
        return Err(domain!("local class of 0"));
    }
    match place {
        Place::Real => Ok(LocalClass(u8::from(x.is_negative()))),
        Place::Finite(p) => {
            let vn = valuation(x.numer(), p) as i64;
            let vd = valuation(x.denom(), p) as i64;
            let un = x.numer() / num_traits::pow(p.clone(), vn as usize);
            let ud = x.denom() / num_traits::pow(p.clone(), vd as usize);
            let parity = ((vn - vd).rem_euclid(2)) as u8;
            // The unit part is un/ud; both bit maps are multiplicative and
            // every odd unit is its own inverse modulo squares.
            let bits = unit_class_bits(&un, p) ^ unit_class_bits(&ud, p);
            Ok(LocalClass(parity | bits))
        }
    }
}

/// A small rational representing the given local class.
pub fn class_representative(c: LocalClass, place: &Place) -> Q {
    match place {
        Place::Real => {
            if c.bit(0) == 1 {
                -Q::one()
            } else {
                Q::one()
            }
        }
        Place::Finite(p) if p == &Z::from(2) => {
            let u = match (c.bit(1), c.bit(2)) {
                (0, 0) => 1,
                (1, 1) => 3,
                (0, 1) => 5,
                _ => 7,
            };
            Q::from_integer(Z::from(u) * if c.bit(0) == 1 { 2 } else { 1 })
        }
        Place::Finite(p) => {
            let mut r = Z::one();
            if c.bit(1) == 1 {
                r *= smallest_nonresidue(p);
            }
            if c.bit(0) == 1 {
                r *= p;
            }
            Q::from_integer(r)
        }
    }
}

/// Hilbert symbol on local classes.
pub fn hilbert_local(a: LocalClass, b: LocalClass, place: &Place) -> i8 {
    let e = match place {
        Place::Real => a.bit(0) & b.bit(0),
        Place::Finite(p) if p == &Z::from(2) => {
            (a.bit(1) & b.bit(1)) ^ (a.bit(0) & b.bit(2)) ^ (b.bit(0) & a.bit(2))
        }
        Place::Finite(p) => {
            let eps_p = ((p - 1u32) >> 1usize).is_odd() as u8;
            (a.bit(0) & b.bit(0) & eps_p) ^ (b.bit(0) & a.bit(1)) ^ (a.bit(0) & b.bit(1))
        }
    };
    if e == 0 {
        1
    } else {
        -1
    }
}

/// `(a, b)_v`: +1 iff `z^2 = a x^2 + b y^2` has a nontrivial solution in the
/// completion at `v`.
pub fn hilbert_symbol(a: &Q, b: &Q, v: &Place) -> Result<i8> {
    if let Place::Finite(p) = v {
        if !super::is_prime(p) {
            return Err(domain!("{p} is not prime"));
        }
    }
    Ok(hilbert_local(local_class(a, v)?, local_class(b, v)?, v))
}

/// Isometry class of a regular quadratic form over a completion, recorded by
/// its classical invariants.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum LocalForm {
    Real { pos: usize, neg: usize },
    Padic {
        p: Z,
        dim: usize,
        det: LocalClass,
        /// Hasse invariant prod_{i<j} (a_i, a_j).
        hasse: i8,
    },
}

impl LocalForm {
    pub fn zero(place: &Place) -> LocalForm {
        match place {
            Place::Real => LocalForm::Real { pos: 0, neg: 0 },
            Place::Finite(p) => LocalForm::Padic {
                p: p.clone(),
                dim: 0,
                det: LocalClass::ONE,
                hasse: 1,
            },
        }
    }

    pub fn of_diagonal(coeffs: &[Q], place: &Place) -> Result<LocalForm> {
        let mut f = LocalForm::zero(place);
        for a in coeffs {
            f = f.perp(local_class(a, place)?);
        }
        Ok(f)
    }

    pub fn place(&self) -> Place {
        match self {
            LocalForm::Real { .. } => Place::Real,
            LocalForm::Padic { p, .. } => Place::Finite(p.clone()),
        }
    }

    pub fn dim(&self) -> usize {
        match self {
            LocalForm::Real { pos, neg } => pos + neg,
            LocalForm::Padic { dim, .. } => *dim,
        }
    }

    /// `self ⊥ <a>`.
    pub fn perp(&self, a: LocalClass) -> LocalForm {
        match self {
            LocalForm::Real { pos, neg } => {
                if a.bit(0) == 1 {
                    LocalForm::Real { pos: *pos, neg: neg + 1 }
                } else {
                    LocalForm::Real { pos: pos + 1, neg: *neg }
                }
            }
            LocalForm::Padic { p, dim, det, hasse } => {
                let place = Place::Finite(p.clone());
                LocalForm::Padic {
                    p: p.clone(),
                    dim: dim + 1,
                    det: det.mul(a),
                    hasse: hasse * hilbert_local(*det, a, &place),
                }
            }
        }
    }

    pub fn is_isotropic(&self) -> bool {
        match self {
            LocalForm::Real { pos, neg } => *pos > 0 && *neg > 0,
            LocalForm::Padic { dim, det, hasse, .. } => {
                let place = self.place();
                let minus_one = local_class(&-Q::one(), &place).expect("nonzero");
                let h = |a, b| hilbert_local(a, b, &place);
                match dim {
                    0 | 1 => false,
                    2 => *det == minus_one,
                    3 => h(minus_one, minus_one.mul(*det)) == *hasse,
                    4 => *det != LocalClass::ONE || *hasse == h(minus_one, minus_one),
                    _ => true,
                }
            }
        }
    }

    /// Whether the form represents the local class `a`.
    pub fn represents(&self, a: LocalClass) -> bool {
        match self {
            LocalForm::Real { pos, neg } => {
                if a.bit(0) == 1 {
                    *neg > 0
                } else {
                    *pos > 0
                }
            }
            LocalForm::Padic { dim, det, hasse, .. } => {
                let place = self.place();
                let minus_one = local_class(&-Q::one(), &place).expect("nonzero");
                let minus_det = minus_one.mul(*det);
                let h = |a, b| hilbert_local(a, b, &place);
                match dim {
                    0 => false,
                    1 => a == *det,
                    2 => h(a, minus_det) == *hasse,
                    3 => a != minus_det || h(minus_one, minus_det) == *hasse,
                    _ => true,
                }
            }
        }
    }

    /// Subgroup of local square classes generated by the represented ones.
    pub fn value_group(&self) -> LocalValueGroup {
        let place = self.place();
        let represented: Vec<LocalClass> = square_class_group(&place)
            .into_iter()
            .filter(|c| self.represents(*c))
            .collect();
        LocalValueGroup::generated_by(place, &represented)
    }
}

/// A subgroup of the local square-class group, kept as a reduced F2-basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct LocalValueGroup {
    pub place: Place,
    pub basis: Vec<LocalClass>,
    /// Classes the form itself represents (before taking the span).
    pub represented: Vec<LocalClass>,
}

impl LocalValueGroup {
    pub fn generated_by(place: Place, gens: &[LocalClass]) -> LocalValueGroup {
        let mut basis: Vec<u8> = Vec::new();
        for g in gens {
            let mut v = g.0;
            for b in &basis {
                let top = 7 - b.leading_zeros() as u8;
                if (v >> top) & 1 == 1 {
                    v ^= b;
                }
            }
            if v != 0 {
                // Keep the basis fully reduced.
                let top = 7 - v.leading_zeros() as u8;
                for b in basis.iter_mut() {
                    if (*b >> top) & 1 == 1 {
                        *b ^= v;
                    }
                }
                basis.push(v);
                basis.sort_unstable_by(|a, b| b.cmp(a));
            }
        }
        LocalValueGroup {
            place,
            basis: basis.into_iter().map(LocalClass).collect(),
            represented: gens.to_vec(),
        }
    }

    pub fn contains(&self, c: LocalClass) -> bool {
        let mut v = c.0;
        for b in &self.basis {
            let top = 7 - b.0.leading_zeros() as u8;
            if (v >> top) & 1 == 1 {
                v ^= b.0;
            }
        }
        v == 0
    }

    pub fn order(&self) -> usize {
        1 << self.basis.len()
    }

    pub fn ambient_order(&self) -> usize {
        1 << rank(&self.place)
    }

    pub fn is_full(&self) -> bool {
        self.order() == self.ambient_order()
    }

    /// Index of the subgroup, i.e. the order of the quotient.
    pub fn index(&self) -> usize {
        self.ambient_order() / self.order()
    }

    pub fn members(&self) -> Vec<LocalClass> {
        square_class_group(&self.place)
            .into_iter()
            .filter(|c| self.contains(*c))
            .collect()
    }

    /// One class from each coset of the subgroup.
    pub fn coset_representatives(&self) -> Vec<LocalClass> {
        let mut reps: Vec<LocalClass> = Vec::new();
        for c in square_class_group(&self.place) {
            if !reps.iter().any(|r| self.contains(r.mul(c))) {
                reps.push(c);
            }
        }
        reps
    }
}
