//! One function per subcommand, each producing a [`Report`].

use serde_json::{json, Value};

use quadric_a1::arith::{LocalForm, Place};
use quadric_a1::connect::{
    classify_form, classify_quadric, pi0_isotropic, s2_connect_points, witt_report,
    witt_report_closed, BaseField, ConnectOptions, FirstWittIndex, LowDimensionKind, Pi0Membership,
    Pi0Rank, PhiOver, QuadricClass, S2Verdict, Triviality, Verdict,
};
use quadric_a1::field::{fmt_rational, Q};
use quadric_a1::forms::{
    anisotropy_witness, is_isotropic, isotropic_vector, represents, value_group_membership,
    witt_decompose, Certificate, MembershipOptions, MembershipVerdict, NonMemberReason, QuadraticForm,
};
use quadric_a1::homotopy::{build_chain, verify_chain};
use quadric_a1::quadrics::{normalize, CoordinateChange, NormalForm, QuadricModel};
use quadric_a1::qvt::{is_good_curve, qvt_decide, QvtVerdict, RationalCurveOnQuadric};
use quadric_a1::Error;

use crate::parse::{
    matrix_rows, parse_form, parse_polynomial, parse_q, parse_rational_function, parse_vector,
    print_polynomial, print_vector, ParseError,
};
use crate::report::{self, rat, rats, Report};
use crate::{Cli, Command};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum CliError {
    /// Malformed input or a violated precondition: exit 1.
    Input(String),
    /// A budget ran out before a decision: exit 2.
    Unknown(String),
}

impl From<ParseError> for CliError {
    fn from(e: ParseError) -> Self {
        CliError::Input(format!("parse error {e}"))
    }
}

impl From<Error> for CliError {
    fn from(e: Error) -> Self {
        match e {
            Error::FactorizationBudget(_) | Error::SearchBudget(_) => CliError::Unknown(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

type Res<T> = Result<T, CliError>;

pub fn run(cmd: &Command, cli: &Cli) -> Res<Report> {
    let field: BaseField = cli.field.parse()?;
    let opts = ConnectOptions {
        quadratically_closed: cli.quadratically_closed,
    };
    let membership = MembershipOptions {
        max_factors: cli.max_factors,
        ..MembershipOptions::default()
    };
    match cmd {
        Command::Normalize { poly } => cmd_normalize(poly),
        Command::Invariants { form } => cmd_invariants(&parse_form(form)?),
        Command::Isotropy { form } => cmd_isotropy(&parse_form(form)?, &field),
        Command::Witt { form } => cmd_witt(&parse_form(form)?, opts),
        Command::Represents { form, d } => cmd_represents(&parse_form(form)?, &parse_q(d)?),
        Command::ValueGroup { form, d } => cmd_value_group(&parse_form(form)?, &parse_q(d)?, membership),
        Command::Pi0 { input } => cmd_pi0(input, &field, membership),
        Command::Connected { input } => cmd_connected(input, opts),
        Command::Qvt { phi, f } => cmd_qvt(phi, f),
        Command::GoodCurve { psi, curve } => cmd_good_curve(psi, curve),
        Command::ConnectPoints { psi, p, q } => cmd_connect_points(psi, p, q, cli.budget),
        Command::Chain { phi, c, lambda } => cmd_chain(phi, c, lambda, membership),
        Command::Batch => Err(CliError::Input("nested batch".into())),
    }
}

fn change_json(c: &CoordinateChange) -> Res<Value> {
    Ok(json!({
        "matrix": matrix_rows(&c.change.matrix),
        "shift": rats(&c.change.shift),
        "scalar": rat(&c.scalar),
        "source": print_polynomial(&c.source),
        "target": print_polynomial(&c.target),
        "verified": c.verify()?,
    }))
}

fn cmd_normalize(text: &str) -> Res<Report> {
    let p = parse_polynomial(text)?;
    let mut r = Report::new("normalize", json!({ "polynomial": print_polynomial(&p) }));
    match normalize(&p)? {
        NormalForm::FullAffineSpace { dim, diag, change } => {
            r.verdict = format!("AffineSpace(A^{dim})");
            r.line("the hypersurface is a graph over the remaining coordinates");
            r.fact("dim", json!(dim));
            r.fact("diag", rats(&diag));
            r.certificate("change", change_json(&change)?);
        }
        NormalForm::Product { psi, affine_factor, change } => {
            r.verdict = format!("Q^{psi} x A^{affine_factor}");
            r.line(format!("psi = {psi}, equation psi(u) = 1 with {affine_factor} free variables"));
            r.fact("psi", report::form(&psi));
            r.fact("affine_factor", json!(affine_factor));
            r.certificate("change", change_json(&change)?);
        }
        NormalForm::NonSmooth { cone, affine_factor, report } => {
            r.verdict = "NonSmooth".into();
            r.line(report.clone());
            r.fact("cone", report::form(&cone));
            r.fact("affine_factor", json!(affine_factor));
        }
    }
    Ok(r)
}

fn local_json(f: &LocalForm) -> Value {
    match f {
        LocalForm::Real { pos, neg } => json!({ "place": "inf", "pos": pos, "neg": neg }),
        LocalForm::Padic { p, dim, det, hasse } => {
            json!({ "place": p.to_string(), "dim": dim, "det_class": det.0, "hasse": hasse })
        }
    }
}

fn cmd_invariants(psi: &QuadraticForm) -> Res<Report> {
    let mut r = Report::new("invariants", json!({ "form": report::form(psi) }));
    let (pos, neg) = psi.signature();
    let disc = quadric_a1::arith::square_class(&psi.discriminant())?;
    let iso = is_isotropic(psi)?;
    r.verdict = if iso { "Isotropic".into() } else { "Anisotropic".into() };
    r.line(format!("dim {}, signature ({pos}, {neg}), discriminant class {disc}", psi.dim()));
    r.fact("dim", json!(psi.dim()));
    r.fact("determinant", rat(&psi.determinant()));
    r.fact("discriminant_class", json!(disc.representative().to_string()));
    r.fact("signature", json!([pos, neg]));
    let mut places = vec![Place::Real];
    places.extend(psi.bad_places()?.into_iter().filter(|p| *p != Place::Real));
    for v in places {
        let l = psi.local(&v)?;
        r.line(format!("at {v}: {}", if l.is_isotropic() { "isotropic" } else { "anisotropic" }));
        r.fact("local", local_json(&l));
    }
    Ok(r)
}

fn cmd_isotropy(psi: &QuadraticForm, field: &BaseField) -> Res<Report> {
    let mut r = Report::new(
        "isotropy",
        json!({ "form": report::form(psi), "field": field.to_string() }),
    );
    let place = match field {
        BaseField::Rationals => None,
        BaseField::Reals => Some(Place::Real),
        BaseField::Padic(p) => Some(Place::Finite(p.clone())),
    };
    if let Some(v) = place {
        let l = psi.local(&v)?;
        r.verdict = if l.is_isotropic() { "Isotropic" } else { "Anisotropic" }.into();
        r.line(format!("local invariants at {v}"));
        r.fact("local", local_json(&l));
        return Ok(r);
    }
    match isotropic_vector(psi)? {
        Some(v) => {
            r.verdict = "Isotropic".into();
            r.line(format!("zero at ({})", print_vector(&v)));
            r.certificate("zero", rats(&v));
        }
        None => {
            r.verdict = "Anisotropic".into();
            match psi.dim() {
                1 => r.line("a one-dimensional form has no nonzero zero"),
                2 => r.line(format!(
                    "-a1 a2 = {} is not a square",
                    fmt_rational(&-(&psi.coeffs()[0] * &psi.coeffs()[1]))
                )),
                _ => {
                    let v = anisotropy_witness(psi)?.ok_or_else(|| {
                        CliError::Input("anisotropic form without a local witness".into())
                    })?;
                    r.line(format!("anisotropic over the completion at {v}"));
                    r.certificate("place", json!(v.to_string()));
                }
            }
        }
    }
    Ok(r)
}

fn i1_json(i1: &FirstWittIndex) -> Value {
    match i1 {
        FirstWittIndex::Exact(v) => json!({ "exact": v }),
        FirstWittIndex::Interval(lo, hi) => json!({ "interval": [lo, hi] }),
    }
}

fn cmd_witt(psi: &QuadraticForm, opts: ConnectOptions) -> Res<Report> {
    let mut r = Report::new(
        "witt",
        json!({ "form": report::form(psi), "quadratically_closed": opts.quadratically_closed }),
    );
    let rep = if opts.quadratically_closed {
        witt_report_closed(psi.dim())
    } else {
        witt_report(psi)?
    };
    r.verdict = format!("i0 = {}", rep.i0);
    r.fact("i0", json!(rep.i0));
    if !opts.quadratically_closed {
        let w = witt_decompose(psi)?;
        if let Some(k) = &w.kernel {
            r.fact("kernel", report::form(k));
        }
        r.certificate("transform", json!(matrix_rows(&w.transform)));
    }
    if let Some((i1, rule)) = &rep.i1 {
        r.verdict.push_str(&format!(", i1 = {i1}"));
        r.line(rule.note());
        r.fact("i1", i1_json(i1));
        r.fact("i1_rule", json!(format!("{rule:?}")));
        let (lo, hi) = i1.bounds();
        r.unknown = lo != hi;
    }
    Ok(r)
}

fn cmd_represents(psi: &QuadraticForm, d: &Q) -> Res<Report> {
    let mut r = Report::new("represents", json!({ "form": report::form(psi), "d": rat(d) }));
    match represents(psi, d)? {
        Some(w) => {
            r.verdict = "Represented".into();
            r.line(format!("value {} at ({})", fmt_rational(d), print_vector(&w)));
            r.certificate("witness", rats(&w));
        }
        None => {
            r.verdict = "NotRepresented".into();
            let aug = psi.perp_value(-d.clone())?;
            if let Some(v) = anisotropy_witness(&aug)? {
                r.line(format!("psi ⊥ <-d> is anisotropic at {v}"));
                r.certificate("place", json!(v.to_string()));
            } else {
                r.line("psi ⊥ <-d> is anisotropic");
            }
        }
    }
    Ok(r)
}

fn certificate_json(c: &Certificate) -> Value {
    json!({
        "factors": c.factors.iter().map(|f| json!({ "value": rat(&f.value), "witness": rats(&f.witness) })).collect::<Vec<_>>(),
        "square": rat(&c.square),
    })
}

fn reason_json(n: &NonMemberReason) -> Value {
    match n {
        NonMemberReason::Local(v) => json!({ "local": v.to_string() }),
        NonMemberReason::NormGroup { radicand } => json!({ "norm_group": radicand.to_string() }),
    }
}

fn membership_into(r: &mut Report, v: &MembershipVerdict) {
    match v {
        MembershipVerdict::Member(c) => {
            r.verdict = "Member".into();
            let vals: Vec<String> = c.values().iter().map(fmt_rational).collect();
            r.line(format!("product of values {} times a square", vals.join(" * ")));
            r.certificate("membership", certificate_json(c));
        }
        MembershipVerdict::NonMember(n) => {
            r.verdict = "NonMember".into();
            r.line(match n {
                NonMemberReason::Local(v) => format!("outside the local value group at {v}"),
                NonMemberReason::NormGroup { radicand } => {
                    format!("neither d nor a1 d is a norm from Q(sqrt({radicand}))")
                }
            });
            r.certificate("obstruction", reason_json(n));
        }
        MembershipVerdict::Unknown(msg) => {
            r.verdict = "Unknown".into();
            r.unknown = true;
            r.line(msg.clone());
        }
    }
}

fn cmd_value_group(psi: &QuadraticForm, d: &Q, opts: MembershipOptions) -> Res<Report> {
    let mut r = Report::new(
        "value-group",
        json!({ "form": report::form(psi), "d": rat(d), "max_factors": opts.max_factors }),
    );
    let v = value_group_membership(psi, d, opts)?;
    membership_into(&mut r, &v);
    Ok(r)
}

/// A form `"a,b,..."` or a quadric polynomial (anything mentioning `x`).
fn form_or_poly(input: &str) -> Res<(QuadraticForm, Option<usize>, Value)> {
    if input.contains('x') {
        let p = parse_polynomial(input)?;
        let echo = json!({ "polynomial": print_polynomial(&p) });
        match normalize(&p)? {
            NormalForm::Product { psi, affine_factor, .. } => Ok((psi, Some(affine_factor), echo)),
            NormalForm::FullAffineSpace { .. } => Err(CliError::Input("the quadric is an affine space".into())),
            NormalForm::NonSmooth { .. } => Err(CliError::Input("the quadric is not smooth".into())),
        }
    } else {
        let psi = parse_form(input)?;
        let echo = json!({ "form": report::form(&psi) });
        Ok((psi, None, echo))
    }
}

const PI0_SAMPLES: [i64; 10] = [-1, 2, -2, 3, 5, 6, 7, 10, 13, 21];

fn cmd_pi0(input: &str, field: &BaseField, opts: MembershipOptions) -> Res<Report> {
    let (psi, _, echo) = form_or_poly(input)?;
    let mut r = Report::new("pi0", json!({ "input": echo, "field": field.to_string() }));
    let d = pi0_isotropic(&psi, field)?;
    r.verdict = match d.triviality {
        Triviality::Trivial => "Trivial",
        Triviality::NonTrivial => "NonTrivial",
        Triviality::Unknown => "Unknown",
    }
    .into();
    r.unknown = d.triviality == Triviality::Unknown;
    r.line(format!("psi = {psi}; sections are F*/<D(phi_F)> over {field}"));
    match &d.phi {
        PhiOver::Rational(phi) => {
            r.line(format!("phi = {phi}"));
            r.fact("phi", report::form(phi));
        }
        PhiOver::Local(l) => r.fact("phi_local", local_json(l)),
    }
    if let Some(o) = d.quotient_order {
        r.line(format!("quotient of order {o}"));
        r.fact("quotient_order", json!(o));
    }
    for g in &d.local_data {
        r.fact(
            "local_value_group",
            json!({ "place": g.place.to_string(), "order": g.order(), "index": g.index() }),
        );
    }
    match &d.rank {
        Pi0Rank::Finite { rank, generators } => {
            r.line(format!("rank {rank}"));
            r.fact(
                "rank",
                json!({ "finite": rank, "generators": generators.iter().map(|(g, v)| json!({ "class": rat(g), "place": v.to_string() })).collect::<Vec<_>>() }),
            );
        }
        Pi0Rank::InfiniteOrUnknown(note) => {
            r.line(note.clone());
            r.fact("rank", json!({ "infinite_or_unknown": note }));
        }
    }
    if let Some(c) = &d.caveat {
        r.fact("caveat", json!(c));
    }
    let mut samples = Vec::new();
    for s in PI0_SAMPLES {
        let x = Q::from_integer(s.into());
        let m = d.membership(&x, opts)?;
        let (label, cert) = match &m {
            Pi0Membership::Local(true) => ("Member".to_string(), Value::Null),
            Pi0Membership::Local(false) => ("NonMember".to_string(), Value::Null),
            Pi0Membership::Rational(MembershipVerdict::Member(c)) => ("Member".to_string(), certificate_json(c)),
            Pi0Membership::Rational(MembershipVerdict::NonMember(n)) => ("NonMember".to_string(), reason_json(n)),
            Pi0Membership::Rational(MembershipVerdict::Unknown(u)) => ("Unknown".to_string(), json!(u)),
        };
        r.line(format!("oracle: {s} -> {label}"));
        samples.push(json!({ "d": s.to_string(), "verdict": label, "certificate": cert }));
    }
    r.certificate("oracle", Value::Array(samples));
    Ok(r)
}

fn verdict_str(v: Verdict) -> String {
    v.to_string()
}

fn cmd_connected(input: &str, opts: ConnectOptions) -> Res<Report> {
    let (class, echo) = if input.contains('x') {
        let p = parse_polynomial(input)?;
        (classify_quadric(&p, opts)?, json!({ "polynomial": print_polynomial(&p) }))
    } else {
        let psi = parse_form(input)?;
        (classify_form(&psi, 0, opts)?, json!({ "form": report::form(&psi) }))
    };
    let mut r = Report::new(
        "connected",
        json!({ "input": echo, "quadratically_closed": opts.quadratically_closed }),
    );
    r.verdict = verdict_str(class.verdict());
    match &class {
        QuadricClass::AffineSpace { dim } => {
            r.line(format!("the hypersurface is A^{dim}"));
            r.fact("classification", json!(format!("A^{dim}")));
        }
        QuadricClass::NonSmooth { report } => {
            r.line(format!("not smooth: {report}; the cone contracts to its vertex"));
            r.fact("classification", json!("non-smooth cone"));
        }
        QuadricClass::LowDimension { affine_factor, report } => {
            let k = affine_factor;
            let label = match &report.kind {
                LowDimensionKind::Points { count } => format!("{count} points x A^{k}"),
                LowDimensionKind::Torus => format!("G_m x A^{k}"),
                LowDimensionKind::NormOneTorus { radicand } => {
                    format!("norm-one torus of Q(sqrt({radicand})) x A^{k}")
                }
            };
            r.line(format!("dim psi = {} <= 2: sections are the points themselves", report.psi.dim()));
            r.line(format!("classification: {label}"));
            r.fact("classification", json!(label));
            r.fact("psi", report::form(&report.psi));
        }
        QuadricClass::Verdict { affine_factor, verdict } => {
            r.unknown = verdict.verdict == Verdict::Unknown;
            r.line(format!("psi = {} (times A^{affine_factor})", verdict.psi));
            r.line(verdict.fired.clone());
            for n in &verdict.notes {
                r.line(n.clone());
            }
            r.fact("psi", report::form(&verdict.psi));
            r.fact("i0_kappa", json!(verdict.i0_kappa));
            r.fact("i0_psi", json!(verdict.i0_psi));
            if let Some((i1, rule)) = &verdict.i1_psi {
                r.fact("i1_psi", i1_json(i1));
                r.fact("i1_rule", json!(format!("{rule:?}")));
            }
            r.fact("fired", json!(verdict.fired));
            if let Some(q) = &verdict.qvt {
                if let QvtVerdict::No(w) = &q.verdict {
                    r.line(format!("QVT witness: {}", q.verdict));
                    r.certificate(
                        "qvt",
                        json!({
                            "phi": report::form(&q.phi),
                            "f": q.f.to_string(),
                            "point": report::poly(&w.point),
                            "exponent": w.exponent,
                            "residue": w.residue.to_string(),
                        }),
                    );
                }
            }
        }
    }
    Ok(r)
}

fn qvt_into(r: &mut Report, v: &QvtVerdict, name: &str) {
    match v {
        QvtVerdict::InGroupUpToConstant { constant, at, odd_points } => {
            r.certificate(
                name,
                json!({
                    "verdict": "InGroupUpToConstant",
                    "constant": rat(constant),
                    "at": rat(at),
                    "odd_points": odd_points.iter().map(report::poly).collect::<Vec<_>>(),
                }),
            );
        }
        QvtVerdict::No(w) => {
            r.certificate(
                name,
                json!({
                    "verdict": "No",
                    "point": report::poly(&w.point),
                    "exponent": w.exponent,
                    "residue": w.residue.to_string(),
                    "obstruction": format!("{:?}", w.obstruction),
                }),
            );
        }
        QvtVerdict::Unknown { undecided } => {
            r.certificate(
                name,
                json!({
                    "verdict": "Unknown",
                    "undecided": undecided.iter().map(report::poly).collect::<Vec<_>>(),
                }),
            );
        }
    }
}

fn cmd_qvt(phi: &str, f: &str) -> Res<Report> {
    let phi = parse_form(phi)?;
    let f = parse_rational_function(f)?;
    let mut r = Report::new("qvt", json!({ "phi": report::form(&phi), "f": f.to_string() }));
    let v = qvt_decide(&phi, &f)?;
    r.verdict = match &v {
        QvtVerdict::InGroupUpToConstant { .. } => "InGroupUpToConstant",
        QvtVerdict::No(_) => "No",
        QvtVerdict::Unknown { .. } => "Unknown",
    }
    .into();
    r.unknown = v.decided().is_none();
    r.line(v.to_string());
    qvt_into(&mut r, &v, "qvt");
    Ok(r)
}

fn cmd_good_curve(psi: &str, curve: &str) -> Res<Report> {
    let psi = parse_form(psi)?;
    let comps = curve
        .split(';')
        .map(parse_rational_function)
        .collect::<Result<Vec<_>, _>>()?;
    let mut r = Report::new(
        "good-curve",
        json!({ "psi": report::form(&psi), "curve": comps.iter().map(|c| c.to_string()).collect::<Vec<_>>() }),
    );
    let curve = RationalCurveOnQuadric::new(QuadricModel::Qpsi(psi), comps)?;
    let g = is_good_curve(&curve)?;
    r.verdict = match g.is_good() {
        Some(true) => "Good",
        Some(false) => "NotGood",
        None => "Unknown",
    }
    .into();
    r.unknown = g.is_good().is_none();
    r.line(format!("phi = {}", g.phi));
    r.line(format!("x1 - 1: {}", g.minus));
    r.line(format!("x1 + 1: {}", g.plus));
    qvt_into(&mut r, &g.minus, "x1_minus_1");
    qvt_into(&mut r, &g.plus, "x1_plus_1");
    Ok(r)
}

fn cmd_connect_points(psi: &str, p: &str, q: &str, budget: usize) -> Res<Report> {
    let psi = parse_form(psi)?;
    let p = parse_vector(p)?;
    let q = parse_vector(q)?;
    let mut r = Report::new(
        "connect-points",
        json!({ "psi": report::form(&psi), "p": rats(&p), "q": rats(&q), "budget": budget }),
    );
    match s2_connect_points(&psi, &p, &q, budget)? {
        S2Verdict::SameClass(c) => {
            r.verdict = "SameClass".into();
            r.line(format!("{} good conic(s) on the model {}", c.hops.len(), c.model));
            let hops: Vec<Value> = c
                .hops
                .iter()
                .map(|h| {
                    json!({
                        "from": rats(&h.from),
                        "to": rats(&h.to),
                        "direction": rats(&h.conic.direction),
                        "t_from": rat(&h.conic.t_p),
                        "t_to": rat(&h.conic.t_q),
                        "curve": h.conic.curve.components().iter().map(|f| f.to_string()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            for h in &c.hops {
                let comps: Vec<String> = h.conic.curve.components().iter().map(|f| f.to_string()).collect();
                r.line(format!("({}) -> ({}) along [{}]", print_vector(&h.from), print_vector(&h.to), comps.join("; ")));
            }
            r.certificate(
                "s2",
                json!({ "model": report::form(&c.model), "basis": matrix_rows(&c.basis), "hops": hops, "verified": c.verify(&psi, &p, &q)? }),
            );
        }
        S2Verdict::Unknown { planes, note } => {
            r.verdict = "Unknown".into();
            r.unknown = true;
            r.line(note);
            r.fact("planes", json!(planes));
        }
    }
    Ok(r)
}

fn cmd_chain(phi: &str, c: &str, lambda: &str, opts: MembershipOptions) -> Res<Report> {
    let phi = parse_form(phi)?;
    let c = parse_q(c)?;
    let lambda = parse_q(lambda)?;
    if c == Q::from_integer(0.into()) || lambda == Q::from_integer(0.into()) {
        return Err(CliError::Input("c and lambda must be nonzero".into()));
    }
    let mut r = Report::new(
        "chain",
        json!({ "phi": report::form(&phi), "c": rat(&c), "lambda": rat(&lambda) }),
    );
    let d = &lambda / &c;
    let v = value_group_membership(&phi, &d, opts)?;
    let MembershipVerdict::Member(cert) = &v else {
        membership_into(&mut r, &v);
        if let MembershipVerdict::NonMember(_) = v {
            r.verdict = "NoChain".into();
            r.line("lambda / c is not in <D(phi)>, so the fibers lie in different classes");
        }
        return Ok(r);
    };
    let chain = build_chain(&phi, &c, &lambda, &cert.factors)?;
    let check = verify_chain(&chain);
    r.verdict = "Chain".into();
    r.line(format!(
        "{} maps from ({}) to ({})",
        chain.maps.len(),
        print_vector(&chain.start),
        print_vector(&chain.end)
    ));
    let maps: Vec<Value> = chain
        .maps
        .iter()
        .zip(&chain.params)
        .map(|(m, (a, b))| {
            json!({
                "components": m.components().iter().map(report::poly).collect::<Vec<_>>(),
                "from": rat(a),
                "to": rat(b),
            })
        })
        .collect();
    r.certificate("membership", certificate_json(cert));
    r.certificate(
        "chain",
        json!({
            "phi": report::form(&phi),
            "start": rats(&chain.start),
            "end": rats(&chain.end),
            "maps": maps,
            "verified": check.ok,
        }),
    );
    if !check.ok {
        return Err(CliError::Input(format!("chain failed verification at {:?}", check.locus)));
    }
    Ok(r)
}
