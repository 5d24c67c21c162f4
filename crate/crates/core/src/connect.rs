//! Connectivity invariants: the first Witt index, sections of the connected
//! components in the isotropic case, S^2 classes of rational points, and
//! the connectedness verdict.

use std::fmt;
use std::str::FromStr;

use num_traits::{One, Zero};

use crate::arith::{local_class, LocalClass, LocalForm, LocalValueGroup, Place};
use crate::error::{domain, internal, precondition, Error, Result};
use crate::field::{fmt_rational, Scalar, Q, Z};
use crate::forms::{
    is_isotropic, represents, value_group_membership, witt_decompose, MembershipOptions,
    MembershipVerdict, NonMemberReason, QuadraticForm,
};
use crate::homotopy::{conic_good_curve_search, ConicCurve, ConicSearch};
use crate::linalg::{diagonalize, Matrix};
use crate::quadrics::{normalize, on_quadric, to_xphi_model, AffineQuadricPoly, NormalForm, QuadricModel};
use crate::qvt::{qvt_decide, QvtVerdict, RationalFunction};
use crate::search;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum I1Rule {
    Dimension3,
    /// Dimension `2^n + 1`.
    PowerOfTwoPlusOne,
    /// Anisotropic 4-dimensional forms are similar to a 2-fold Pfister form
    /// exactly when the discriminant is a square (classical, imported).
    Discriminant4,
    /// `<c, ..., c>` is a neighbor of the anisotropic Pfister form
    /// `<<-1, ..., -1>>` of twice the next power of two below the dimension.
    PfisterNeighbor,
    /// `i1 <= dim - 2^n` with `2^n < dim <= 2^(n+1)`.
    HoffmannBound,
}

impl I1Rule {
    pub fn note(&self) -> &'static str {
        match self {
            I1Rule::Dimension3 => "dimension 3: i1 = 1",
            I1Rule::PowerOfTwoPlusOne => "dimension 2^n+1: Hoffmann bound forces i1 = 1",
            I1Rule::Discriminant4 => {
                "dimension 4: i1 = 2 iff the discriminant is a square (classical fact, imported)"
            }
            I1Rule::PfisterNeighbor => "<c,...,c> is a Pfister neighbor: i1 = dim - 2^n",
            I1Rule::HoffmannBound => "Hoffmann bound only: 1 <= i1 <= dim - 2^n",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FirstWittIndex {
    Exact(usize),
    Interval(usize, usize),
}

impl FirstWittIndex {
    pub fn bounds(&self) -> (usize, usize) {
        match self {
            FirstWittIndex::Exact(v) => (*v, *v),
            FirstWittIndex::Interval(lo, hi) => (*lo, *hi),
        }
    }
}

impl fmt::Display for FirstWittIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            FirstWittIndex::Exact(v) => write!(f, "{v}"),
            FirstWittIndex::Interval(lo, hi) => write!(f, "[{lo}, {hi}]"),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct WittIndexReport {
    pub i0: usize,
    /// Only for anisotropic forms.
    pub i1: Option<(FirstWittIndex, I1Rule)>,
}

/// `(2^n, dim - 2^n)` with `2^n < dim <= 2^(n+1)`.
pub fn hoffmann_split(dim: usize) -> (usize, usize) {
    assert!(dim >= 2);
    let mut p = 1;
    while 2 * p < dim {
        p *= 2;
    }
    (p, dim - p)
}

pub fn witt_report(psi: &QuadraticForm) -> Result<WittIndexReport> {
    if psi.dim() < 2 {
        return Err(domain!("Witt report of a form of dimension {}", psi.dim()));
    }
    let i0 = witt_decompose(psi)?.witt_index;
    if i0 > 0 {
        return Ok(WittIndexReport { i0, i1: None });
    }
    Ok(WittIndexReport {
        i0,
        i1: Some(first_witt_index(psi)?),
    })
}

/// Rules for an anisotropic form, first match wins.
fn first_witt_index(psi: &QuadraticForm) -> Result<(FirstWittIndex, I1Rule)> {
    let n = psi.dim();
    let (pow, ell) = hoffmann_split(n);
    if n == 3 {
        return Ok((FirstWittIndex::Exact(1), I1Rule::Dimension3));
    }
    if ell == 1 {
        return Ok((FirstWittIndex::Exact(1), I1Rule::PowerOfTwoPlusOne));
    }
    if n == 4 {
        let square = crate::field::rational_sqrt(&psi.discriminant()).is_some();
        let v = if square { 2 } else { 1 };
        return Ok((FirstWittIndex::Exact(v), I1Rule::Discriminant4));
    }
    let c = &psi.coeffs()[0];
    let mut same_class = true;
    for a in &psi.coeffs()[1..] {
        same_class &= crate::field::rational_sqrt(&(a / c)).is_some();
    }
    if same_class {
        debug_assert!(2 * pow >= n);
        return Ok((FirstWittIndex::Exact(ell), I1Rule::PfisterNeighbor));
    }
    Ok((FirstWittIndex::Interval(1, ell), I1Rule::HoffmannBound))
}

/// Over a quadratically closed field every form of dimension `n` has Witt
/// index `n / 2`.
pub fn witt_report_closed(dim: usize) -> WittIndexReport {
    WittIndexReport {
        i0: dim / 2,
        i1: None,
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum BaseField {
    Rationals,
    Reals,
    Padic(Z),
}

impl BaseField {
    fn place(&self) -> Option<Place> {
        match self {
            BaseField::Rationals => None,
            BaseField::Reals => Some(Place::Real),
            BaseField::Padic(p) => Some(Place::Finite(p.clone())),
        }
    }
}

impl fmt::Display for BaseField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BaseField::Rationals => write!(f, "Q"),
            BaseField::Reals => write!(f, "R"),
            BaseField::Padic(p) => write!(f, "Qp:{p}"),
        }
    }
}

impl FromStr for BaseField {
    type Err = Error;

    /// `Q`, `R` or `Qp:<p>`.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim() {
            "Q" => Ok(BaseField::Rationals),
            "R" => Ok(BaseField::Reals),
            other => {
                let p = other
                    .strip_prefix("Qp:")
                    .and_then(|p| p.trim().parse::<Z>().ok())
                    .ok_or_else(|| domain!("unknown field {other:?}; expected Q, R or Qp:<p>"))?;
                match Place::prime(p)? {
                    Place::Finite(p) => Ok(BaseField::Padic(p)),
                    Place::Real => unreachable!(),
                }
            }
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Triviality {
    Trivial,
    NonTrivial,
    Unknown,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pi0Rank {
    /// `F* / <D(phi)>` is elementary abelian of this rank; the generators'
    /// classes are independent, each with a local obstruction.
    Finite { rank: usize, generators: Vec<(Q, Place)> },
    InfiniteOrUnknown(String),
}

#[derive(Debug, Clone, PartialEq)]
pub enum PhiOver {
    Rational(QuadraticForm),
    Local(LocalForm),
}

#[derive(Debug, Clone, PartialEq)]
pub struct Pi0Description {
    pub field: BaseField,
    pub psi: QuadraticForm,
    pub phi: PhiOver,
    /// Stable triviality: `phi_F` isotropic, so the sections are a point over
    /// every extension of `F`.
    pub triviality: Triviality,
    pub local_data: Vec<LocalValueGroup>,
    pub rank: Pi0Rank,
    /// Order of `F* / <D(phi_F)>` over a completion.
    pub quotient_order: Option<usize>,
    pub caveat: Option<String>,
}

#[derive(Debug, Clone, PartialEq)]
pub enum Pi0Membership {
    Rational(MembershipVerdict),
    Local(bool),
}

impl Pi0Description {
    /// Whether `d` is trivial in `F* / <D(phi_F)>`.
    pub fn membership(&self, d: &Q, opts: MembershipOptions) -> Result<Pi0Membership> {
        match &self.phi {
            PhiOver::Rational(phi) => Ok(Pi0Membership::Rational(value_group_membership(phi, d, opts)?)),
            PhiOver::Local(f) => {
                if d.is_zero() {
                    return Err(domain!("membership of 0"));
                }
                Ok(Pi0Membership::Local(f.value_group().contains(local_class(d, &f.place())?)))
            }
        }
    }
}

/// `phi_F` for `psi_F ≅ H ⊥ phi'` and `phi = <1> ⊥ -phi'`, from local
/// invariants: `-psi ⊥ <1> ≅ H ⊥ phi`.
fn local_phi(psi: &QuadraticForm, place: &Place) -> Result<LocalForm> {
    let mut theta = psi.negate().local(place)?;
    theta = theta.perp(LocalClass::ONE);
    Ok(match theta {
        LocalForm::Real { pos, neg } => LocalForm::Real {
            pos: pos - 1,
            neg: neg - 1,
        },
        LocalForm::Padic { p, dim, det, hasse } => {
            let minus_one = local_class(&-Q::one(), place)?;
            let det_phi = det.mul(minus_one);
            // s(H ⊥ phi) = s(phi) (-1, det phi).
            let hasse = hasse * crate::arith::hilbert_local(minus_one, det_phi, place);
            LocalForm::Padic {
                p,
                dim: dim - 2,
                det: det_phi,
                hasse,
            }
        }
    })
}

pub fn pi0_isotropic(psi: &QuadraticForm, field: &BaseField) -> Result<Pi0Description> {
    if psi.dim() < 3 {
        return Err(precondition!("sections of pi0 need dimension >= 3, got {}", psi.dim()));
    }
    match field.place() {
        Some(place) => {
            if !psi.local(&place)?.is_isotropic() {
                return Err(precondition!("{psi} is anisotropic over {field}"));
            }
            let phi = local_phi(psi, &place)?;
            let group = phi.value_group();
            let order = group.index();
            Ok(Pi0Description {
                field: field.clone(),
                psi: psi.clone(),
                triviality: if phi.is_isotropic() {
                    Triviality::Trivial
                } else {
                    Triviality::NonTrivial
                },
                rank: Pi0Rank::Finite {
                    rank: order.trailing_zeros() as usize,
                    generators: group
                        .coset_representatives()
                        .into_iter()
                        .filter(|c| *c != LocalClass::ONE)
                        .map(|c| (crate::arith::class_representative(c, &place), place.clone()))
                        .collect(),
                },
                phi: PhiOver::Local(phi),
                local_data: vec![group],
                quotient_order: Some(order),
                caveat: None,
            })
        }
        None => {
            if !is_isotropic(psi)? {
                return Err(precondition!("{psi} is anisotropic over Q"));
            }
            let (model, _) = to_xphi_model(psi)?;
            let QuadricModel::Xphi(phi) = model else {
                return Err(internal!("to_xphi_model returned a Q^psi model"));
            };
            let triviality = if is_isotropic(&phi)? {
                Triviality::Trivial
            } else {
                Triviality::NonTrivial
            };
            let local_data = phi
                .bad_places()?
                .iter()
                .map(|v| Ok(phi.local(v)?.value_group()))
                .collect::<Result<Vec<_>>>()?;
            let (rank, caveat) = rational_rank(&phi, &local_data)?;
            Ok(Pi0Description {
                field: field.clone(),
                psi: psi.clone(),
                phi: PhiOver::Rational(phi),
                triviality,
                local_data,
                rank,
                quotient_order: None,
                caveat,
            })
        }
    }
}

/// For `dim phi >= 3` the local value groups are full at every finite
/// place, so only the sign can survive; binary forms leave a norm group.
fn rational_rank(phi: &QuadraticForm, local: &[LocalValueGroup]) -> Result<(Pi0Rank, Option<String>)> {
    if phi.dim() == 2 {
        let m = crate::arith::square_class(&-(&phi.coeffs()[0] * &phi.coeffs()[1]))?;
        let note = format!(
            "<D(phi)> = {} * N(Q(sqrt({}))*); the quotient is infinite unless phi is isotropic",
            fmt_rational(&phi.coeffs()[0]),
            m.representative()
        );
        return Ok((Pi0Rank::InfiniteOrUnknown(note), None));
    }
    for g in local {
        if matches!(g.place, Place::Finite(_)) && !g.is_full() {
            return Err(internal!("local value group of {phi} at {} is not full", g.place));
        }
    }
    let caveat = Some(
        "rank read off the local description; the generated group is assumed to obey it".to_string(),
    );
    if phi.is_definite() {
        let minus = -Q::one();
        let verdict = value_group_membership(phi, &minus, MembershipOptions::default())?;
        if verdict != MembershipVerdict::NonMember(NonMemberReason::Local(Place::Real)) {
            return Err(internal!("-1 is not excluded at the real place for definite {phi}"));
        }
        Ok((
            Pi0Rank::Finite {
                rank: 1,
                generators: vec![(minus, Place::Real)],
            },
            caveat,
        ))
    } else {
        Ok((Pi0Rank::Finite { rank: 0, generators: Vec::new() }, caveat))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Connected,
    NotConnected,
    Unknown,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Connected => "Connected",
            Verdict::NotConnected => "NotConnected",
            Verdict::Unknown => "Unknown",
        })
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct QvtEvidence {
    pub phi: QuadraticForm,
    pub f: RationalFunction,
    pub verdict: QvtVerdict,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConnectivityVerdict {
    pub psi: QuadraticForm,
    pub verdict: Verdict,
    pub fired: String,
    pub i0_kappa: usize,
    pub i0_psi: usize,
    pub i1_psi: Option<(FirstWittIndex, I1Rule)>,
    pub qvt: Option<QvtEvidence>,
    pub notes: Vec<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub struct ConnectOptions {
    /// Treat every element of the base field as a square.
    pub quadratically_closed: bool,
}

/// `psi = <1> ⊥ -phi` after completing `u` (with `psi(u) = 1`) to an
/// orthogonal basis. Returns `phi` and the basis as matrix columns.
pub fn split_unit_vector(psi: &QuadraticForm, u: &[Q]) -> Result<(QuadraticForm, Matrix<Q>)> {
    let n = psi.dim();
    if u.len() != n || !psi.eval(u)?.is_one() {
        return Err(domain!("vector does not have value 1"));
    }
    let gu: Vec<Q> = psi.coeffs().iter().zip(u).map(|(a, x)| a * x).collect();
    let perp = Matrix::from_rows(vec![gu])?.nullspace();
    let b = Matrix::from_columns(&perp)?;
    let d = diagonalize(&b.congruence(&psi.gram())?)?;
    if d.radical_dim != 0 {
        return Err(internal!("degenerate orthogonal complement in {psi}"));
    }
    let rest = b.mul(&d.transform)?;
    let mut cols = vec![u.to_vec()];
    cols.extend((0..n - 1).map(|j| rest.column(j)));
    let phi = QuadraticForm::new(d.entries.iter().map(|a| -a).collect())?;
    Ok((phi, Matrix::from_columns(&cols)?))
}

/// Connectedness of `Q^psi` for `dim psi >= 3`.
pub fn a1_connected(psi: &QuadraticForm, opts: ConnectOptions) -> Result<ConnectivityVerdict> {
    let n = psi.dim();
    if n < 3 {
        return Err(precondition!(
            "dimension {n} < 3 has no connectedness verdict; see the low-dimension report"
        ));
    }
    let kappa = psi.perp_value(-Q::one())?;
    let mut out = ConnectivityVerdict {
        psi: psi.clone(),
        verdict: Verdict::Unknown,
        fired: String::new(),
        i0_kappa: 0,
        i0_psi: 0,
        i1_psi: None,
        qvt: None,
        notes: Vec::new(),
    };
    if opts.quadratically_closed {
        out.i0_kappa = witt_report_closed(n + 1).i0;
        out.i0_psi = witt_report_closed(n).i0;
        out.verdict = Verdict::Connected;
        out.fired = format!("quadratically closed: i0(kappa) = {} >= 2", out.i0_kappa);
        return Ok(out);
    }
    out.i0_kappa = witt_decompose(&kappa)?.witt_index;
    let report = witt_report(psi)?;
    out.i0_psi = report.i0;
    out.i1_psi = report.i1.clone();
    if out.i0_kappa == 0 {
        out.verdict = Verdict::NotConnected;
        out.fired = "i0(kappa) = 0: no rational point".into();
        return Ok(out);
    }
    if out.i0_kappa >= 2 {
        out.verdict = Verdict::Connected;
        out.fired = format!("branch (1): i0(kappa) = {} >= 2", out.i0_kappa);
        return Ok(out);
    }
    if out.i0_psi >= 1 {
        // psi ≅ <1> ⊥ -phi with phi anisotropic: t is not in <D(phi_{k(t)})>.
        let u = represents(psi, &Q::one())?.ok_or_else(|| internal!("{psi} is isotropic but misses 1"))?;
        let (phi, _) = split_unit_vector(psi, &u)?;
        let f = RationalFunction::t();
        let verdict = qvt_decide(&phi, &f)?;
        if !matches!(&verdict, QvtVerdict::No(w) if w.verify(&phi, &f)?) {
            return Err(internal!("expected a QVT obstruction for t over {phi}, got {verdict}"));
        }
        out.verdict = Verdict::NotConnected;
        out.fired = "i0(kappa) = 1 and i0(psi) = 1: t is not in <D(phi_k(t))>".into();
        out.qvt = Some(QvtEvidence { phi, f, verdict });
        return Ok(out);
    }
    let (i1, rule) = report.i1.ok_or_else(|| internal!("anisotropic form without i1"))?;
    out.notes.push(rule.note().to_string());
    match i1.bounds() {
        (lo, _) if lo >= 2 => {
            out.verdict = Verdict::Connected;
            out.fired = format!("branch (2): i0(kappa) = 1, i0(psi) = 0, i1(psi) = {i1} >= 2");
        }
        (_, 1) => {
            out.verdict = Verdict::NotConnected;
            out.fired = "i0(kappa) = 1, i0(psi) = 0, i1(psi) = 1: t is not in <D(phi)> over k(psi)(t)".into();
        }
        _ => {
            out.verdict = Verdict::Unknown;
            out.fired = format!("i0(kappa) = 1, i0(psi) = 0, i1(psi) in {i1}: undecided");
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, PartialEq)]
pub enum LowDimensionKind {
    /// `<a> x^2 = 1`: two points if `a` is a square, none otherwise.
    Points { count: usize },
    /// Isotropic binary `psi`: `Q^psi ≅ G_m`.
    Torus,
    /// Anisotropic binary `psi`: a norm-one torus of `Q(sqrt(-ab))`.
    NormOneTorus { radicand: Z },
}

/// `Q^psi` with `dim psi <= 2`: the sections of the connected components are
/// the points themselves, so the quadric is never connected.
#[derive(Debug, Clone, PartialEq)]
pub struct LowDimensionReport {
    pub psi: QuadraticForm,
    pub kind: LowDimensionKind,
    pub quadratically_closed: bool,
}

pub fn low_dimension_report(psi: &QuadraticForm, opts: ConnectOptions) -> Result<LowDimensionReport> {
    let kind = match psi.dim() {
        1 if opts.quadratically_closed => LowDimensionKind::Points { count: 2 },
        1 => LowDimensionKind::Points {
            count: if crate::field::rational_sqrt(&psi.coeffs()[0]).is_some() { 2 } else { 0 },
        },
        2 if opts.quadratically_closed || is_isotropic(psi)? => LowDimensionKind::Torus,
        2 => {
            let m = crate::arith::square_class(&-(&psi.coeffs()[0] * &psi.coeffs()[1]))?;
            LowDimensionKind::NormOneTorus {
                radicand: m.representative(),
            }
        }
        d => return Err(precondition!("low-dimension report for dimension {d}")),
    };
    Ok(LowDimensionReport {
        psi: psi.clone(),
        kind,
        quadratically_closed: opts.quadratically_closed,
    })
}

#[derive(Debug, Clone, PartialEq)]
pub enum QuadricClass {
    /// The hypersurface is a graph: affine space.
    AffineSpace { dim: usize },
    NonSmooth { report: String },
    Verdict { affine_factor: usize, verdict: ConnectivityVerdict },
    LowDimension { affine_factor: usize, report: LowDimensionReport },
}

impl QuadricClass {
    pub fn verdict(&self) -> Verdict {
        match self {
            QuadricClass::AffineSpace { .. } | QuadricClass::NonSmooth { .. } => Verdict::Connected,
            QuadricClass::Verdict { verdict, .. } => verdict.verdict,
            QuadricClass::LowDimension { .. } => Verdict::NotConnected,
        }
    }
}

/// Classifies a quadric polynomial: normalize, then decide `Q^psi`
/// (a product with affine space has the same components).
pub fn classify_quadric(poly: &AffineQuadricPoly, opts: ConnectOptions) -> Result<QuadricClass> {
    Ok(match normalize(poly)? {
        NormalForm::FullAffineSpace { dim, .. } => QuadricClass::AffineSpace { dim },
        NormalForm::NonSmooth { report, .. } => QuadricClass::NonSmooth { report },
        NormalForm::Product { psi, affine_factor, .. } => classify_form(&psi, affine_factor, opts)?,
    })
}

pub fn classify_form(psi: &QuadraticForm, affine_factor: usize, opts: ConnectOptions) -> Result<QuadricClass> {
    Ok(if psi.dim() >= 3 {
        QuadricClass::Verdict {
            affine_factor,
            verdict: a1_connected(psi, opts)?,
        }
    } else {
        QuadricClass::LowDimension {
            affine_factor,
            report: low_dimension_report(psi, opts)?,
        }
    })
}

#[derive(Debug, Clone, PartialEq)]
pub struct ConicHop {
    /// Endpoints in the coordinates of the `<1> ⊥ -phi` model.
    pub from: Vec<Q>,
    pub to: Vec<Q>,
    pub conic: ConicCurve,
}

/// Good conics joining `P` to `Q` through intermediate points, all on the
/// model `<1> ⊥ -phi` with `x = basis · y`.
#[derive(Debug, Clone, PartialEq)]
pub struct S2Certificate {
    pub model: QuadraticForm,
    pub basis: Matrix<Q>,
    pub hops: Vec<ConicHop>,
}

impl S2Certificate {
    pub fn verify(&self, psi: &QuadraticForm, p: &[Q], q: &[Q]) -> Result<bool> {
        let Some(inv) = self.basis.inverse() else {
            return Ok(false);
        };
        let g = self.basis.congruence(&psi.gram())?;
        if g != self.model.gram() {
            return Ok(false);
        }
        let mut cur = inv.mul_vec(p)?;
        for hop in &self.hops {
            if hop.from != cur || !hop.conic.verify(&hop.from, &hop.to)? {
                return Ok(false);
            }
            cur = hop.to.clone();
        }
        Ok(cur == inv.mul_vec(q)?)
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum S2Verdict {
    SameClass(S2Certificate),
    Unknown { planes: usize, note: String },
}

/// Planes tried per hop when routing through an intermediate point.
const HOP_PLANES: usize = 4;

/// Semi-decides whether two rational points of an anisotropic `Q^psi` are
/// related by a chain of good curves; `budget` bounds the planes tried.
pub fn s2_connect_points(psi: &QuadraticForm, p: &[Q], q: &[Q], budget: usize) -> Result<S2Verdict> {
    let model = QuadricModel::Qpsi(psi.clone());
    if !on_quadric(&model, p)? || !on_quadric(&model, q)? {
        return Err(domain!("point off the quadric"));
    }
    if is_isotropic(psi)? {
        return Err(precondition!("{psi} is isotropic"));
    }
    let (target, basis) = if psi.coeffs()[0].is_one() {
        (psi.clone(), Matrix::identity(psi.dim()))
    } else {
        let (phi, basis) = split_unit_vector(psi, p)?;
        (QuadraticForm::new(std::iter::once(Q::one()).chain(phi.coeffs().iter().map(|a| -a)).collect())?, basis)
    };
    let cert = |hops| S2Certificate {
        model: target.clone(),
        basis: basis.clone(),
        hops,
    };
    if p == q {
        return Ok(S2Verdict::SameClass(cert(Vec::new())));
    }
    let inv = basis.inverse().ok_or_else(|| internal!("singular basis"))?;
    let (p1, q1) = (inv.mul_vec(p)?, inv.mul_vec(q)?);
    let mut used = 0;
    let direct = conic_good_curve_search(&target, &p1, &q1, budget)?;
    match direct {
        ConicSearch::Found(c) => {
            return Ok(S2Verdict::SameClass(cert(vec![ConicHop {
                from: p1,
                to: q1,
                conic: *c,
            }])))
        }
        ConicSearch::NotFound { planes, .. } => used += planes,
    }
    // Route through second intersections of lines through P.
    for v in search::height_ordered(target.dim(), i64::MAX) {
        if used + 2 > budget {
            break;
        }
        let v: Vec<Q> = v.into_iter().map(Q::from_int).collect();
        let qv = target.eval(&v)?;
        let b = target.polar(&p1, &v);
        if b.is_zero() {
            continue;
        }
        let s = -(&b + &b) / &qv;
        let r: Vec<Q> = p1.iter().zip(&v).map(|(x, y)| x + &s * y).collect();
        if r == q1 {
            continue;
        }
        let share = HOP_PLANES.min((budget - used) / 2).max(1);
        let first = conic_good_curve_search(&target, &p1, &r, share)?;
        let ConicSearch::Found(a) = first else {
            if let ConicSearch::NotFound { planes, .. } = first {
                used += planes.max(1);
            }
            continue;
        };
        used += 1;
        let second = conic_good_curve_search(&target, &r, &q1, share)?;
        match second {
            ConicSearch::Found(b) => {
                return Ok(S2Verdict::SameClass(cert(vec![
                    ConicHop {
                        from: p1,
                        to: r.clone(),
                        conic: *a,
                    },
                    ConicHop {
                        from: r,
                        to: q1,
                        conic: *b,
                    },
                ])))
            }
            ConicSearch::NotFound { planes, .. } => used += planes.max(1),
        }
    }
    Ok(S2Verdict::Unknown {
        planes: used,
        note: format!("no good conic chain found within {budget} planes"),
    })
}
