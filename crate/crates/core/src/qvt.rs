//! The rational function field `Q(t)`: valuations at closed points of the
//! affine line, the quadratic value theorem, pole profiles of curves on
//! quadrics and the good-curve test.

use std::cell::OnceCell;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_traits::{One, Zero};

use crate::error::{domain, internal, precondition, Error, Result};
use crate::field::{fmt_rational, Scalar, Q};
use crate::forms::QuadraticForm;
use crate::numfield::{is_isotropic_over, is_isotropic_over_q, IsotropyVerdict, Obstruction, QuadField};
use crate::poly::{factor_over_q, fmt_poly_q, is_irreducible, Poly, DEFAULT_DEGREE_BUDGET};
use crate::quadrics::QuadricModel;
use crate::search;

/// `num / den` in lowest terms with `den` monic.
#[derive(Clone)]
pub struct RationalFunction {
    num: Poly<Q>,
    den: Poly<Q>,
    factored: OnceCell<Result<RfFactored>>,
}

/// `unit * prod(P^e)`, `P` monic irreducible, `e` nonzero (negative at poles).
#[derive(Debug, Clone, PartialEq)]
pub struct RfFactored {
    pub unit: Q,
    pub factors: Vec<(Poly<Q>, i64)>,
}

impl RfFactored {
    pub fn expand(&self) -> RationalFunction {
        let mut num = Poly::constant(self.unit.clone());
        let mut den = Poly::one();
        for (p, e) in &self.factors {
            if *e > 0 {
                num = num * p.pow(*e as u32);
            } else {
                den = den * p.pow(e.unsigned_abs() as u32);
            }
        }
        RationalFunction::new(num, den).expect("nonzero denominator")
    }
}

impl RationalFunction {
    pub fn new(num: Poly<Q>, den: Poly<Q>) -> Result<Self> {
        if den.is_zero() {
            return Err(domain!("zero denominator"));
        }
        if num.is_zero() {
            return Ok(Self::from_parts(Poly::zero(), Poly::one()));
        }
        let g = num.gcd(&den);
        let num = num.exact_div(&g).expect("gcd divides");
        let den = den.exact_div(&g).expect("gcd divides");
        let lc = den.leading();
        let inv = lc.recip();
        Ok(Self::from_parts(num.scale(&inv), den.scale(&inv)))
    }

    fn from_parts(num: Poly<Q>, den: Poly<Q>) -> Self {
        RationalFunction {
            num,
            den,
            factored: OnceCell::new(),
        }
    }

    pub fn poly(p: Poly<Q>) -> Self {
        Self::from_parts(p, Poly::one())
    }

    pub fn t() -> Self {
        Self::poly(Poly::t())
    }

    pub fn constant(c: Q) -> Self {
        Self::poly(Poly::constant(c))
    }

    pub fn numerator(&self) -> &Poly<Q> {
        &self.num
    }

    pub fn denominator(&self) -> &Poly<Q> {
        &self.den
    }

    pub fn is_constant(&self) -> bool {
        self.num.is_constant() && self.den.is_constant()
    }

    pub fn as_constant(&self) -> Option<Q> {
        self.is_constant().then(|| self.num.coeff(0))
    }

    /// Value at `x`, `None` at a pole.
    pub fn eval(&self, x: &Q) -> Option<Q> {
        let d = self.den.eval(x);
        if d.is_zero() {
            None
        } else {
            Some(self.num.eval(x) / d)
        }
    }

    pub fn powi(&self, e: i64) -> Result<Self> {
        let base = if e < 0 {
            self.inv().ok_or_else(|| domain!("zero to a negative power"))?
        } else {
            self.clone()
        };
        Ok(Self::from_parts(
            base.num.pow(e.unsigned_abs() as u32),
            base.den.pow(e.unsigned_abs() as u32),
        ))
    }

    /// Canonical factorization, computed once.
    pub fn factorization(&self) -> Result<&RfFactored> {
        self.factored
            .get_or_init(|| self.compute_factorization())
            .as_ref()
            .map_err(Clone::clone)
    }

    fn compute_factorization(&self) -> Result<RfFactored> {
        if self.num.is_zero() {
            return Err(domain!("the zero function has no factorization"));
        }
        let n = factor_over_q(&self.num, DEFAULT_DEGREE_BUDGET)?;
        let d = factor_over_q(&self.den, DEFAULT_DEGREE_BUDGET)?;
        let mut factors: Vec<(Poly<Q>, i64)> =
            n.factors.into_iter().map(|(p, e)| (p, e as i64)).collect();
        factors.extend(d.factors.into_iter().map(|(p, e)| (p, -(e as i64))));
        factors.sort_by(|(a, _), (b, _)| {
            a.degree()
                .cmp(&b.degree())
                .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
        });
        let out = RfFactored {
            unit: n.unit / d.unit,
            factors,
        };
        if out.expand() != *self {
            return Err(internal!("factorization of {self} does not multiply back"));
        }
        Ok(out)
    }
}

impl PartialEq for RationalFunction {
    fn eq(&self, other: &Self) -> bool {
        self.num == other.num && self.den == other.den
    }
}

impl fmt::Debug for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "RationalFunction({self})")
    }
}

impl fmt::Display for RationalFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let n = fmt_poly_q(&self.num);
        if self.den.is_one() {
            return write!(f, "{n}");
        }
        let d = fmt_poly_q(&self.den);
        let wrap = |s: String, always: bool| {
            if always || s.contains(' ') || s.contains('/') {
                format!("({s})")
            } else {
                s
            }
        };
        let always = self.den.degree() != Some(1);
        write!(f, "{}/{}", wrap(n, false), wrap(d, always))
    }
}

impl Zero for RationalFunction {
    fn zero() -> Self {
        Self::poly(Poly::zero())
    }

    fn is_zero(&self) -> bool {
        self.num.is_zero()
    }
}

impl One for RationalFunction {
    fn one() -> Self {
        Self::poly(Poly::one())
    }
}

impl Add for RationalFunction {
    type Output = Self;

    fn add(self, rhs: Self) -> Self {
        if self.den == rhs.den {
            return Self::new(self.num + rhs.num, self.den).expect("nonzero");
        }
        Self::new(
            self.num * rhs.den.clone() + rhs.num * self.den.clone(),
            self.den * rhs.den,
        )
        .expect("nonzero")
    }
}

impl Neg for RationalFunction {
    type Output = Self;

    fn neg(self) -> Self {
        Self::from_parts(-self.num, self.den)
    }
}

impl Sub for RationalFunction {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        self + (-rhs)
    }
}

impl Mul for RationalFunction {
    type Output = Self;

    fn mul(self, rhs: Self) -> Self {
        Self::new(self.num * rhs.num, self.den * rhs.den).expect("nonzero")
    }
}

impl Scalar for RationalFunction {
    fn from_rational(q: &Q) -> Self {
        Self::constant(q.clone())
    }

    fn inv(&self) -> Option<Self> {
        if self.num.is_zero() {
            None
        } else {
            Some(Self::new(self.den.clone(), self.num.clone()).expect("nonzero"))
        }
    }
}

fn check_point(p: &Poly<Q>) -> Result<()> {
    if !p.is_monic() || !is_irreducible(p)? {
        return Err(domain!("{} is not a monic irreducible polynomial", fmt_poly_q(p)));
    }
    Ok(())
}

fn multiplicity(f: &Poly<Q>, p: &Poly<Q>) -> i64 {
    let mut f = f.clone();
    let mut k = 0;
    while let Some(q) = f.exact_div(p) {
        f = q;
        k += 1;
    }
    k
}

/// `v_P(f)` at the closed point given by the monic irreducible `P`.
pub fn valuation_at(f: &RationalFunction, p: &Poly<Q>) -> Result<i64> {
    if f.is_zero() {
        return Err(domain!("valuation of the zero function"));
    }
    check_point(p)?;
    Ok(multiplicity(&f.num, p) - multiplicity(&f.den, p))
}

/// `v_P`, with `None` standing for `+∞` at the zero function.
fn valuation_or_inf(f: &RationalFunction, p: &Poly<Q>) -> Option<i64> {
    (!f.is_zero()).then(|| multiplicity(&f.num, p) - multiplicity(&f.den, p))
}

/// Residue field `Q[t]/(P)` of a closed point.
#[derive(Debug, Clone, PartialEq)]
pub enum ResidueField {
    Rational,
    Quadratic(QuadField),
    /// Degree at least 3, kept as the defining polynomial.
    Number(Poly<Q>),
}

impl fmt::Display for ResidueField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ResidueField::Rational => write!(f, "Q"),
            ResidueField::Quadratic(k) => write!(f, "{k}"),
            ResidueField::Number(p) => write!(f, "Q[t]/({})", fmt_poly_q(p)),
        }
    }
}

pub fn residue_field(p: &Poly<Q>) -> Result<ResidueField> {
    match p.degree() {
        Some(1) => Ok(ResidueField::Rational),
        Some(2) => {
            let (b, c) = (p.coeff(1), p.coeff(0));
            let disc = &b * &b - Q::from_int(4) * c;
            Ok(ResidueField::Quadratic(QuadField::of_radicand(&disc)?))
        }
        Some(_) => Ok(ResidueField::Number(p.clone())),
        None => Err(domain!("the zero polynomial is not a point")),
    }
}

/// Isotropy of `phi` over a residue field.
///
/// Beyond degree 2 only the cases settled by real places are decided: a
/// rationally isotropic form stays isotropic, and in dimension at least 5
/// a form over a number field is isotropic iff it is at every real place.
pub fn residue_isotropy(phi: &QuadraticForm, k: &ResidueField) -> Result<IsotropyVerdict> {
    match k {
        ResidueField::Rational => is_isotropic_over_q(phi),
        ResidueField::Quadratic(k) => is_isotropic_over(phi, k),
        ResidueField::Number(p) => {
            if let IsotropyVerdict::Isotropic(w) = is_isotropic_over_q(phi)? {
                return Ok(IsotropyVerdict::Isotropic(w));
            }
            if phi.dim() < 5 {
                return Ok(IsotropyVerdict::Unknown(format!(
                    "dimension {} over a field of degree {}",
                    phi.dim(),
                    p.degree().unwrap_or(0)
                )));
            }
            if phi.is_definite() && real_root_count(p) > 0 {
                Ok(IsotropyVerdict::Anisotropic(Obstruction::RealEmbeddings))
            } else {
                Ok(IsotropyVerdict::Isotropic(None))
            }
        }
    }
}

/// Number of distinct real roots by Sturm's theorem.
pub fn real_root_count(p: &Poly<Q>) -> usize {
    if p.degree().unwrap_or(0) == 0 {
        return 0;
    }
    let mut seq = vec![p.clone(), p.derivative()];
    while !seq[seq.len() - 1].is_zero() {
        let n = seq.len();
        let (_, r) = seq[n - 2].div_rem(&seq[n - 1]).expect("nonzero");
        seq.push(-r);
    }
    seq.pop();
    let changes = |signs: Vec<i8>| {
        let s: Vec<i8> = signs.into_iter().filter(|&x| x != 0).collect();
        s.windows(2).filter(|w| w[0] != w[1]).count()
    };
    let sign = |x: Q| -> i8 {
        if x.is_zero() {
            0
        } else if x > Q::zero() {
            1
        } else {
            -1
        }
    };
    let at_pos: Vec<i8> = seq.iter().map(|g| sign(g.leading())).collect();
    let at_neg: Vec<i8> = seq
        .iter()
        .map(|g| {
            let s = sign(g.leading());
            if g.degree().unwrap_or(0) % 2 == 1 {
                -s
            } else {
                s
            }
        })
        .collect();
    changes(at_neg) - changes(at_pos)
}

#[derive(Debug, Clone, PartialEq)]
pub struct QvtWitness {
    pub point: Poly<Q>,
    pub exponent: i64,
    pub residue: ResidueField,
    pub obstruction: Obstruction,
}

impl QvtWitness {
    /// Re-derives the odd exponent and the anisotropy of `phi` at the point.
    pub fn verify(&self, phi: &QuadraticForm, f: &RationalFunction) -> Result<bool> {
        let e = valuation_at(f, &self.point)?;
        if e != self.exponent || e % 2 == 0 {
            return Ok(false);
        }
        if residue_field(&self.point)? != self.residue {
            return Ok(false);
        }
        Ok(matches!(
            residue_isotropy(phi, &self.residue)?,
            IsotropyVerdict::Anisotropic(_)
        ))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum QvtVerdict {
    /// Every point of odd valuation has an isotropic residue form. The
    /// constant is a candidate only: `f(t0)` at the first argument `t0` in
    /// `0, 1, -1, 2, ...` that is neither a zero nor a pole.
    InGroupUpToConstant {
        constant: Q,
        at: Q,
        odd_points: Vec<Poly<Q>>,
    },
    No(QvtWitness),
    Unknown {
        undecided: Vec<Poly<Q>>,
    },
}

impl QvtVerdict {
    pub fn decided(&self) -> Option<bool> {
        match self {
            QvtVerdict::InGroupUpToConstant { .. } => Some(true),
            QvtVerdict::No(_) => Some(false),
            QvtVerdict::Unknown { .. } => None,
        }
    }
}

impl fmt::Display for QvtVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            QvtVerdict::InGroupUpToConstant { constant, at, .. } => write!(
                f,
                "in c<D(phi)> with candidate c = {} (value at t = {})",
                fmt_rational(constant),
                fmt_rational(at)
            ),
            QvtVerdict::No(w) => write!(
                f,
                "not in any c<D(phi)>: v_P = {} at P = {} and phi is anisotropic over {}",
                w.exponent,
                fmt_poly_q(&w.point),
                w.residue
            ),
            QvtVerdict::Unknown { undecided } => {
                let pts: Vec<String> = undecided.iter().map(fmt_poly_q).collect();
                write!(f, "undecided at {}", pts.join(", "))
            }
        }
    }
}

/// Whether `f ∈ a <D(phi_{Q(t)})>` for some constant `a`: check the residue
/// form at every closed point where `f` has odd valuation.
pub fn qvt_decide(phi: &QuadraticForm, f: &RationalFunction) -> Result<QvtVerdict> {
    if f.is_zero() {
        return Err(domain!("qvt_decide: f = 0"));
    }
    let fac = f.factorization()?;
    let mut odd = Vec::new();
    let mut undecided = Vec::new();
    for (p, e) in &fac.factors {
        if e % 2 == 0 {
            continue;
        }
        odd.push(p.clone());
        let k = residue_field(p)?;
        match residue_isotropy(phi, &k)? {
            IsotropyVerdict::Isotropic(_) => {}
            IsotropyVerdict::Anisotropic(obstruction) => {
                return Ok(QvtVerdict::No(QvtWitness {
                    point: p.clone(),
                    exponent: *e,
                    residue: k,
                    obstruction,
                }))
            }
            IsotropyVerdict::Unknown(_) => undecided.push(p.clone()),
        }
    }
    if !undecided.is_empty() {
        return Ok(QvtVerdict::Unknown { undecided });
    }
    let (at, constant) = (0u64..)
        .map(|k| Q::from_int(search::signed(k)))
        .find_map(|x| f.eval(&x).filter(|v| !v.is_zero()).map(|v| (x, v)))
        .expect("a nonzero function has finitely many zeros and poles");
    Ok(QvtVerdict::InGroupUpToConstant {
        constant,
        at,
        odd_points: odd,
    })
}

/// A rational map `A^1 ⇢ model`, checked to satisfy the model equation in
/// `Q(t)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RationalCurveOnQuadric {
    model: QuadricModel,
    components: Vec<RationalFunction>,
}

impl RationalCurveOnQuadric {
    pub fn new(model: QuadricModel, components: Vec<RationalFunction>) -> Result<Self> {
        let defect = model.eval(&components)?;
        if !defect.is_zero() {
            return Err(domain!("curve does not lie on the quadric: defect {defect}"));
        }
        Ok(RationalCurveOnQuadric { model, components })
    }

    pub fn model(&self) -> &QuadricModel {
        &self.model
    }

    pub fn components(&self) -> &[RationalFunction] {
        &self.components
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(RationalFunction::is_constant)
    }

    /// Image of the rational parameter, `None` at a pole.
    pub fn at(&self, t: &Q) -> Option<Vec<Q>> {
        self.components.iter().map(|f| f.eval(t)).collect()
    }
}

/// Valuations of the components at one closed point and the relations the
/// specialization lemmas predict when the residue form is anisotropic.
#[derive(Debug, Clone, PartialEq)]
pub struct PoleProfile {
    pub point: Poly<Q>,
    /// `None` is `+∞` (a zero component).
    pub valuations: Vec<Option<i64>>,
    pub extends: bool,
    /// `Q^psi`: not extending forces `v(f1) < 0` and `v(f1) = min v(fi)`.
    /// `X^phi`: extending forces `v(f1) = v(f2) = 0`, not extending forces
    /// `min(v(f1), v(f2)) < 0` equal to the overall minimum.
    pub relation_holds: bool,
}

fn min_val(v: &[Option<i64>]) -> Option<i64> {
    v.iter().flatten().copied().min()
}

pub fn curve_pole_profile(curve: &RationalCurveOnQuadric, p: &Poly<Q>) -> Result<PoleProfile> {
    check_point(p)?;
    let vals: Vec<Option<i64>> = curve
        .components
        .iter()
        .map(|f| valuation_or_inf(f, p))
        .collect();
    let extends = vals.iter().all(|v| v.is_none_or(|x| x >= 0));
    let relation_holds = match curve.model {
        QuadricModel::Qpsi(_) => {
            if extends {
                true
            } else {
                vals[0].is_some_and(|v| v < 0) && vals[0] == min_val(&vals)
            }
        }
        QuadricModel::Xphi(_) => {
            if extends {
                vals[0] == Some(0) && vals[1] == Some(0)
            } else {
                let m12 = min_val(&vals[..2]);
                m12.is_some_and(|v| v < 0) && m12 == min_val(&vals)
            }
        }
    };
    Ok(PoleProfile {
        point: p.clone(),
        valuations: vals,
        extends,
        relation_holds,
    })
}

/// Goodness of a curve on `Q^psi`, `psi = <1> ⊥ (-phi)`.
#[derive(Debug, Clone, PartialEq)]
pub struct GoodCurveReport {
    pub phi: QuadraticForm,
    /// Verdict for `f1 - 1`.
    pub minus: QvtVerdict,
    /// Verdict for `f1 + 1`, the cross-check.
    pub plus: QvtVerdict,
}

impl GoodCurveReport {
    /// `Some(true)` for a good curve, `None` when undecided.
    pub fn is_good(&self) -> Option<bool> {
        self.minus.decided().or(self.plus.decided())
    }
}

/// `phi` with `psi = <1> ⊥ (-phi)`, when `psi` has that shape.
pub fn phi_of_psi(psi: &QuadraticForm) -> Result<QuadraticForm> {
    if psi.dim() < 2 || !psi.coeffs()[0].is_one() {
        return Err(precondition!("{psi} does not have leading coefficient 1"));
    }
    QuadraticForm::new(psi.coeffs()[1..].iter().map(|a| -a).collect())
}

/// Tests `f1 - 1 ∈ c <D(phi_{Q(t)})>`; since `(f1 - 1)(f1 + 1) = phi(f2, ...)`
/// the same verdict must come out for `f1 + 1`, and a disagreement between
/// decided verdicts is reported as an internal error.
pub fn is_good_curve(curve: &RationalCurveOnQuadric) -> Result<GoodCurveReport> {
    let QuadricModel::Qpsi(psi) = &curve.model else {
        return Err(precondition!("goodness is defined on the Q^psi model"));
    };
    let phi = phi_of_psi(psi)?;
    if curve.is_constant() {
        return Err(precondition!("the curve is constant"));
    }
    let f1 = &curve.components[0];
    let minus = f1.clone() - RationalFunction::one();
    let plus = f1.clone() + RationalFunction::one();
    if minus.is_zero() || plus.is_zero() {
        return Err(precondition!("x1 is constant ±1 along the curve, so phi(x2, ...) vanishes"));
    }
    let minus = qvt_decide(&phi, &minus)?;
    let plus = qvt_decide(&phi, &plus)?;
    if let (Some(a), Some(b)) = (minus.decided(), plus.decided()) {
        if a != b {
            return Err(Error::Internal(format!(
                "QVT verdicts for f1 - 1 and f1 + 1 disagree on {psi}"
            )));
        }
    }
    Ok(GoodCurveReport { phi, minus, plus })
}
