//! Explicit A1-homotopies on the `X^phi` model `x1 x2 = phi(1, x3, ...)`:
//! sections through the zero fiber, the two elementary moves that connect
//! fibers over `c` and `c * lambda` for `lambda ∈ D(phi)`, chains of them,
//! and a conic search for good curves on `Q^psi`.

use num_traits::{One, Zero};

use crate::error::{domain, internal, precondition, Result};
use crate::field::{fmt_rational, rational_sqrt, Scalar, Q};
use crate::forms::{CertificateFactor, QuadraticForm};
use crate::poly::Poly;
use crate::quadrics::{on_quadric, QuadricModel};
use crate::qvt::{is_good_curve, phi_of_psi, GoodCurveReport, RationalCurveOnQuadric, RationalFunction};
use crate::search;

/// `A^1 → model` given by polynomials, checked to satisfy the model equation
/// identically.
#[derive(Debug, Clone, PartialEq)]
pub struct PolynomialMap<F: Scalar = Q> {
    model: QuadricModel,
    components: Vec<Poly<F>>,
}

impl<F: Scalar> PolynomialMap<F> {
    pub fn new(model: QuadricModel, components: Vec<Poly<F>>) -> Result<Self> {
        let map = PolynomialMap { model, components };
        if !map.verify()? {
            return Err(domain!("polynomial map does not land on the quadric"));
        }
        Ok(map)
    }

    pub fn model(&self) -> &QuadricModel {
        &self.model
    }

    pub fn components(&self) -> &[Poly<F>] {
        &self.components
    }

    pub fn at(&self, t: &F) -> Vec<F> {
        self.components.iter().map(|p| p.eval(t)).collect()
    }

    /// The model equation evaluated on the components, as a polynomial.
    pub fn defect(&self) -> Result<Poly<F>> {
        self.model.eval(&self.components)
    }

    pub fn verify(&self) -> Result<bool> {
        Ok(self.defect()?.is_zero())
    }

    pub fn is_constant(&self) -> bool {
        self.components.iter().all(Poly::is_constant)
    }

    pub fn degree(&self) -> usize {
        self.components
            .iter()
            .filter_map(Poly::degree)
            .max()
            .unwrap_or(0)
    }

    /// Mutable access for tests of the verifier.
    #[doc(hidden)]
    pub fn components_mut(&mut self) -> &mut Vec<Poly<F>> {
        &mut self.components
    }
}

fn xphi_coeffs(phi: &QuadraticForm) -> Result<&[Q]> {
    let c = phi.coeffs();
    if !c[0].is_one() {
        return Err(domain!("{phi} does not have leading coefficient 1"));
    }
    Ok(c)
}

/// `phi(1, y)` for `phi = <1, b_3, ..., b_n>`.
fn phi_at_one<F: Scalar>(phi: &[Q], y: &[F]) -> F {
    phi[1..]
        .iter()
        .zip(y)
        .fold(F::one(), |s, (b, x)| s + F::from_rational(b) * x.square())
}

/// A section of `x1: X^phi → A^1` through the point `(0, f(0), y)` of the
/// zero fiber: `s(t) = (t, f(t), t + y_3, ..., t + y_n)` where
/// `t f(t) = phi(1, t + y_3, ...)`.
pub fn section_through<F: Scalar>(phi: &QuadraticForm, y: &[F]) -> Result<PolynomialMap<F>> {
    let c = xphi_coeffs(phi)?;
    if y.len() != phi.dim() - 1 {
        return Err(domain!("point of length {} for {phi}", y.len()));
    }
    if !phi_at_one(c, y).is_zero() {
        return Err(domain!("phi(1, y) != 0, so t does not divide phi(1, t + y)"));
    }
    let shifted: Vec<Poly<F>> = y.iter().map(|yi| Poly::linear(yi.clone())).collect();
    let num = phi_at_one(c, &shifted);
    let f = num
        .exact_div(&Poly::t())
        .ok_or_else(|| internal!("t does not divide phi(1, t + y)"))?;
    let mut comps = vec![Poly::t(), f];
    comps.extend(shifted);
    PolynomialMap::new(QuadricModel::Xphi(phi.clone()), comps)
}

/// `lambda = c * phi(d, z)`.
#[derive(Debug, Clone, PartialEq)]
pub struct RepresentationWitness {
    pub phi: QuadraticForm,
    pub c: Q,
    pub d: Q,
    pub z: Vec<Q>,
    pub lambda: Q,
}

impl RepresentationWitness {
    pub fn new(phi: &QuadraticForm, c: Q, d: Q, z: Vec<Q>) -> Result<Self> {
        if c.is_zero() {
            return Err(domain!("c = 0"));
        }
        if z.len() + 1 != phi.dim() {
            return Err(domain!("witness of length {} for {phi}", z.len() + 1));
        }
        let mut v = vec![d.clone()];
        v.extend(z.iter().cloned());
        let lambda = &c * phi.eval(&v)?;
        if lambda.is_zero() {
            return Err(domain!("phi(d, z) = 0"));
        }
        Ok(RepresentationWitness {
            phi: phi.clone(),
            c,
            d,
            z,
            lambda,
        })
    }

    /// `phi(d, z)`.
    pub fn lambda1(&self) -> Q {
        &self.lambda / &self.c
    }

    pub fn verify(&self) -> Result<bool> {
        let mut v = vec![self.d.clone()];
        v.extend(self.z.iter().cloned());
        Ok(!self.c.is_zero() && &self.c * self.phi.eval(&v)? == self.lambda)
    }
}

/// Rewrites `b z^2 = d1^2 + b z1^2` with `d1 = 2bz/(1+b)`,
/// `z1 = (1-b)z/(1+b)` in the first nonzero slot, so that `d != 0`.
pub fn normalize_d_nonzero(w: &RepresentationWitness) -> Result<RepresentationWitness> {
    if !w.d.is_zero() {
        return Ok(w.clone());
    }
    let i = w
        .z
        .iter()
        .position(|x| !x.is_zero())
        .ok_or_else(|| domain!("d = 0 and z = 0"))?;
    let b = &w.phi.coeffs()[i + 1];
    let one = Q::one();
    if b == &-&one {
        return Err(precondition!("coefficient -1 next to the leading 1: phi is isotropic"));
    }
    let zi = &w.z[i];
    let d1 = Q::from_int(2) * b * zi / (&one + b);
    let z1 = (&one - b) * zi / (&one + b);
    let mut z = w.z.clone();
    z[i] = z1;
    let out = RepresentationWitness {
        phi: w.phi.clone(),
        c: w.c.clone(),
        d: d1,
        z,
        lambda: w.lambda.clone(),
    };
    if !out.verify()? {
        return Err(internal!("normalized witness changed lambda"));
    }
    Ok(out)
}

/// `f(t) = (c d^2 phi(1, t z/d), 1/(c d^2), t z/d)`: `f(0)` lies over
/// `c d^2` and `f(1)` over `lambda`.
pub fn step1_homotopy(w: &RepresentationWitness) -> Result<PolynomialMap> {
    if w.d.is_zero() {
        return Err(precondition!("step 1 needs d != 0"));
    }
    let phi = &w.phi;
    xphi_coeffs(phi)?;
    let cd2 = &w.c * &w.d * &w.d;
    let tail: Vec<Poly<Q>> = w
        .z
        .iter()
        .map(|zi| Poly::monomial(zi / &w.d, 1))
        .collect();
    let f1 = phi_at_one(phi.coeffs(), &tail).scale(&cd2);
    let mut comps = vec![f1, Poly::constant(cd2.recip())];
    comps.extend(tail);
    let map = PolynomialMap::new(QuadricModel::Xphi(phi.clone()), comps)?;
    debug_assert_eq!(map.at(&Q::one())[0], w.lambda);
    Ok(map)
}

/// The two maps of step 2 and a pair of parameters over the same fiber.
#[derive(Debug, Clone, PartialEq)]
pub struct Step2 {
    /// Starts over `c d1^2`.
    pub f: PolynomialMap,
    /// Starts over `c`.
    pub g: PolynomialMap,
    pub a: Q,
    pub b: Q,
}

fn step2_map(phi: &QuadraticForm, scale: &Q) -> Result<PolynomialMap> {
    let n = phi.dim() + 1;
    let b1 = &phi.coeffs()[1];
    let mut comps = vec![
        Poly::new(vec![scale.clone(), Q::zero(), scale * b1]),
        Poly::constant(scale.recip()),
        Poly::t(),
    ];
    comps.resize(n, Poly::zero());
    PolynomialMap::new(QuadricModel::Xphi(phi.clone()), comps)
}

/// `f(t) = (c d1^2 phi(1, t, 0, ...), 1/(c d1^2), t, 0, ...)` and the same
/// with `d1 = 1`; `f1(a) = g1(b)` where `d1 a - b = (1 - d1^2)/b1` and
/// `d1 a + b = 1`.
pub fn step2_pair(c: &Q, d1: &Q, phi: &QuadraticForm) -> Result<Step2> {
    xphi_coeffs(phi)?;
    if phi.dim() < 2 {
        return Err(domain!("step 2 needs a second coefficient in {phi}"));
    }
    if c.is_zero() || d1.is_zero() {
        return Err(domain!("step 2 needs c, d1 != 0"));
    }
    let b1 = &phi.coeffs()[1];
    let one = Q::one();
    let a = (&one + (&one - d1 * d1) / b1) / (Q::from_int(2) * d1);
    let b = &one - d1 * &a;
    let f = step2_map(phi, &(c * d1 * d1))?;
    let g = step2_map(phi, c)?;
    if f.at(&a)[0] != g.at(&b)[0] {
        return Err(internal!("step 2 parameters do not meet"));
    }
    Ok(Step2 { f, g, a, b })
}

/// Straight line inside the fiber `x1 = a != 0`, which is an affine space
/// in the coordinates `x3, ..., xn`.
pub fn fiber_connector(phi: &QuadraticForm, from: &[Q], to: &[Q]) -> Result<PolynomialMap> {
    let c = xphi_coeffs(phi)?;
    let a = &from[0];
    if a.is_zero() || &to[0] != a {
        return Err(domain!("points are not in one nonzero fiber"));
    }
    let tail: Vec<Poly<Q>> = from[2..]
        .iter()
        .zip(&to[2..])
        .map(|(p, q)| Poly::new(vec![p.clone(), q - p]))
        .collect();
    let x2 = phi_at_one(c, &tail).scale(&a.recip());
    let mut comps = vec![Poly::constant(a.clone()), x2];
    comps.extend(tail);
    PolynomialMap::new(QuadricModel::Xphi(phi.clone()), comps)
}

/// Maps traversed one after another: map `i` is entered at `params[i].0`
/// and left at `params[i].1`, where the next map is entered.
#[derive(Debug, Clone, PartialEq)]
pub struct HomotopyChain {
    pub model: QuadricModel,
    pub maps: Vec<PolynomialMap>,
    pub params: Vec<(Q, Q)>,
    pub start: Vec<Q>,
    pub end: Vec<Q>,
}

impl HomotopyChain {
    /// `(exit of map i, entry of map i+1)`.
    pub fn junctions(&self) -> Vec<(Q, Q)> {
        self.params
            .windows(2)
            .map(|w| (w[0].1.clone(), w[1].0.clone()))
            .collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ChainCheck {
    pub ok: bool,
    pub locus: Option<String>,
}

pub fn verify_chain(chain: &HomotopyChain) -> ChainCheck {
    let fail = |s: String| ChainCheck {
        ok: false,
        locus: Some(s),
    };
    if chain.maps.len() != chain.params.len() {
        return fail("parameter list length".into());
    }
    if chain.maps.is_empty() {
        return match on_quadric(&chain.model, &chain.start) {
            Ok(true) if chain.start == chain.end => ChainCheck { ok: true, locus: None },
            _ => fail("empty chain with distinct or invalid endpoints".into()),
        };
    }
    for (i, m) in chain.maps.iter().enumerate() {
        if m.model() != &chain.model {
            return fail(format!("map {i}: model"));
        }
        match m.verify() {
            Ok(true) => {}
            _ => return fail(format!("map {i}: model identity")),
        }
    }
    for (i, w) in chain.params.windows(2).enumerate() {
        if chain.maps[i].at(&w[0].1) != chain.maps[i + 1].at(&w[1].0) {
            return fail(format!("junction {i}"));
        }
    }
    if chain.maps[0].at(&chain.params[0].0) != chain.start {
        return fail("start point".into());
    }
    let last = chain.maps.len() - 1;
    if chain.maps[last].at(&chain.params[last].1) != chain.end {
        return fail("end point".into());
    }
    ChainCheck { ok: true, locus: None }
}

struct ChainBuilder {
    phi: QuadraticForm,
    maps: Vec<PolynomialMap>,
    params: Vec<(Q, Q)>,
    start: Vec<Q>,
    here: Vec<Q>,
}

impl ChainBuilder {
    fn push(&mut self, map: PolynomialMap, from: Q, to: Q) -> Result<()> {
        let entry = map.at(&from);
        if entry != self.here {
            if entry[0] != self.here[0] {
                return Err(internal!("chain jumps between fibers"));
            }
            let conn = fiber_connector(&self.phi, &self.here, &entry)?;
            self.maps.push(conn);
            self.params.push((Q::zero(), Q::one()));
        }
        self.here = map.at(&to);
        self.maps.push(map);
        self.params.push((from, to));
        Ok(())
    }

    fn goto(&mut self, point: Vec<Q>) -> Result<()> {
        if point != self.here {
            let conn = fiber_connector(&self.phi, &self.here, &point)?;
            self.push(conn, Q::zero(), Q::one())?;
        }
        Ok(())
    }

    /// From `B(s)` to `B(s d1^2)` via step 2 with `c = s d1^2` read backwards,
    /// i.e. `g` is the map over `s d1^2` and `f` starts over `s`.
    fn rescale(&mut self, s: &Q, d1: &Q) -> Result<()> {
        if (d1 * d1).is_one() {
            return Ok(());
        }
        // step2_pair(c, e) connects c e^2 (f) to c (g); take c = s d1^2, e = 1/d1.
        let target = s * d1 * d1;
        let st = step2_pair(&target, &d1.recip(), &self.phi)?;
        self.push(st.f, Q::zero(), st.a)?;
        self.push(st.g, st.b, Q::zero())?;
        Ok(())
    }

    fn finish(self) -> HomotopyChain {
        HomotopyChain {
            model: QuadricModel::Xphi(self.phi),
            maps: self.maps,
            params: self.params,
            start: self.start,
            end: self.here,
        }
    }
}

/// The base point `(a, 1/a, 0, ..., 0)` of the fiber over `a`.
pub fn base_point(phi: &QuadraticForm, a: &Q) -> Vec<Q> {
    let mut p = vec![a.clone(), a.recip()];
    p.resize(phi.dim() + 1, Q::zero());
    p
}

/// Chain on `X^phi` from the base point over `c` to the base point over
/// `lambda = c * prod(values) * s^2`, one step-1/step-2 round per factor.
pub fn build_chain(
    phi: &QuadraticForm,
    c: &Q,
    lambda: &Q,
    factors: &[CertificateFactor],
) -> Result<HomotopyChain> {
    xphi_coeffs(phi)?;
    if c.is_zero() || lambda.is_zero() {
        return Err(domain!("c and lambda must be nonzero"));
    }
    let mut prod = c.clone();
    for f in factors {
        if f.value.is_zero() || phi.eval(&f.witness)? != f.value {
            return Err(domain!(
                "{} is not represented by {phi} at the given witness",
                fmt_rational(&f.value)
            ));
        }
        prod *= &f.value;
    }
    let s = rational_sqrt(&(lambda / &prod)).ok_or_else(|| {
        domain!("lambda / (c * prod) = {} is not a square", fmt_rational(&(lambda / &prod)))
    })?;
    if phi.dim() < 2 && !factors.is_empty() {
        return Err(domain!("{phi} has no second coefficient for step 2"));
    }
    let start = base_point(phi, c);
    let mut b = ChainBuilder {
        phi: phi.clone(),
        maps: Vec::new(),
        params: Vec::new(),
        start: start.clone(),
        here: start,
    };
    let mut cur = c.clone();
    for f in factors {
        let w = RepresentationWitness::new(phi, cur.clone(), f.witness[0].clone(), f.witness[1..].to_vec())?;
        let w = normalize_d_nonzero(&w)?;
        // Over cur: step 2 takes B(cur) to B(cur d^2), step 1 then runs
        // from B(cur d^2) to a point over cur * value.
        b.rescale(&cur, &w.d)?;
        let s1 = step1_homotopy(&w)?;
        b.push(s1, Q::zero(), Q::one())?;
        cur = w.lambda.clone();
        let bp = base_point(phi, &cur);
        b.goto(bp)?;
    }
    if phi.dim() >= 2 {
        b.rescale(&cur, &s)?;
    } else if !(&s * &s).is_one() {
        return Err(domain!("{phi} has no second coefficient for step 2"));
    }
    let chain = b.finish();
    let check = verify_chain(&chain);
    if !check.ok {
        return Err(internal!("built chain fails verification at {:?}", check.locus));
    }
    if &chain.end[0] != lambda {
        return Err(internal!("chain ends over the wrong fiber"));
    }
    Ok(chain)
}

/// A good curve on `Q^psi` through two points, with the parameters where it
/// meets them.
#[derive(Debug, Clone, PartialEq)]
pub struct ConicCurve {
    pub curve: RationalCurveOnQuadric,
    /// Second spanning direction of the plane (the first is `Q - P`).
    pub direction: Vec<Q>,
    pub t_p: Q,
    pub t_q: Q,
    pub report: GoodCurveReport,
}

impl ConicCurve {
    pub fn verify(&self, p: &[Q], q: &[Q]) -> Result<bool> {
        let again = RationalCurveOnQuadric::new(self.curve.model().clone(), self.curve.components().to_vec());
        Ok(again.is_ok()
            && self.curve.at(&self.t_p).as_deref() == Some(p)
            && self.curve.at(&self.t_q).as_deref() == Some(q)
            && self.report.is_good() == Some(true))
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum ConicSearch {
    Found(Box<ConicCurve>),
    /// Planes tried, and the verdicts met (none of them decided good).
    NotFound { planes: usize, rejected: Vec<GoodCurveReport> },
}

/// The conic cut out by the plane `P + span(Q - P, w)`, parametrized by
/// lines through `P` with direction `(Q - P) + t w`: `t = 0` gives `Q`, the
/// tangent slope gives `P`.
pub fn conic_through(psi: &QuadraticForm, p: &[Q], q: &[Q], w: &[Q]) -> Result<Option<(RationalCurveOnQuadric, Q)>> {
    let n = psi.dim();
    let diff: Vec<Q> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    let bpq = psi.polar(p, &diff);
    let mut w = w.to_vec();
    let mut bpw = psi.polar(p, &w);
    if bpw.is_zero() {
        // Same plane, but keeps the tangent direction at a finite slope.
        w = w.iter().zip(&diff).map(|(a, b)| a + b).collect();
        bpw = psi.polar(p, &w);
    }
    if bpw.is_zero() {
        return Ok(None);
    }
    let dir: Vec<RationalFunction> = (0..n)
        .map(|i| RationalFunction::poly(Poly::new(vec![diff[i].clone(), w[i].clone()])))
        .collect();
    let qd = psi.eval(&dir)?;
    if qd.is_zero() {
        return Ok(None);
    }
    let bd = psi.polar(&p.iter().map(|x| RationalFunction::constant(x.clone())).collect::<Vec<_>>(), &dir);
    let s = -(RationalFunction::from_int(2) * bd) * qd.inv().expect("nonzero");
    let comps: Vec<RationalFunction> = (0..n)
        .map(|i| RationalFunction::constant(p[i].clone()) + s.clone() * dir[i].clone())
        .collect();
    let curve = match RationalCurveOnQuadric::new(QuadricModel::Qpsi(psi.clone()), comps) {
        Ok(c) => c,
        Err(_) => return Ok(None),
    };
    // Tangent at P: B(P, (Q - P) + t w) = 0.
    let t_p = -bpq / bpw;
    Ok(Some((curve, t_p)))
}

/// Budgeted search over planes through `P` and `Q` (directions in height
/// order) for a conic that is a good curve. Only `psi = <1> ⊥ (-phi)` is
/// accepted.
pub fn conic_good_curve_search(psi: &QuadraticForm, p: &[Q], q: &[Q], budget: usize) -> Result<ConicSearch> {
    phi_of_psi(psi)?;
    let model = QuadricModel::Qpsi(psi.clone());
    if !on_quadric(&model, p)? || !on_quadric(&model, q)? {
        return Err(domain!("point off the quadric"));
    }
    if p == q {
        return Err(precondition!("P = Q"));
    }
    let n = psi.dim();
    let diff: Vec<Q> = q.iter().zip(p).map(|(a, b)| a - b).collect();
    let mut planes = 0;
    let mut rejected = Vec::new();
    let mut seen_plane = false;
    for w in search::height_ordered(n, i64::MAX) {
        if planes >= budget {
            break;
        }
        let w: Vec<Q> = w.into_iter().map(Q::from_int).collect();
        // Skip directions parallel to Q - P.
        let k = diff.iter().position(|x| !x.is_zero()).expect("P != Q");
        let r = &w[k] / &diff[k];
        if w.iter().zip(&diff).all(|(a, b)| a == &(&r * b)) {
            continue;
        }
        if n == 2 && seen_plane {
            break;
        }
        seen_plane = true;
        planes += 1;
        let Some((curve, t_p)) = conic_through(psi, p, q, &w)? else {
            continue;
        };
        let report = is_good_curve(&curve)?;
        if report.is_good() == Some(true) {
            let found = ConicCurve {
                curve,
                direction: w,
                t_p,
                t_q: Q::zero(),
                report,
            };
            debug_assert!(found.verify(p, q).unwrap_or(false));
            return Ok(ConicSearch::Found(Box::new(found)));
        }
        rejected.push(report);
    }
    Ok(ConicSearch::NotFound { planes, rejected })
}
