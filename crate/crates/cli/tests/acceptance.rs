//! Acceptance suite. Each criterion prints one line:
//! `[PASS|FAIL] <id> <name>: <measurement> (<tolerance>)`.
//! Every check uses an oracle that is independent of the code under test.

use std::time::{Duration, Instant};

use num_traits::{One, ToPrimitive, Zero};
use quadric_a1::arith::Place;
use quadric_a1::connect::{
    a1_connected, classify_quadric, pi0_isotropic, BaseField, ConnectOptions, FirstWittIndex, LowDimensionKind,
    Pi0Membership, QuadricClass, Triviality, Verdict,
};
use quadric_a1::field::{q, Scalar, Q};
use quadric_a1::forms::{
    is_isotropic, isotropic_vector, value_group_membership, MembershipOptions, MembershipVerdict, NonMemberReason,
    QuadraticForm,
};
use quadric_a1::homotopy::{build_chain, section_through, verify_chain};
use quadric_a1::numfield::{IsotropyVerdict, QuadElem, QuadField};
use quadric_a1::poly::Poly;
use quadric_a1::quadrics::{normalize, AffineQuadricPoly, NormalForm};
use quadric_a1::qvt::{qvt_decide, residue_field, residue_isotropy, valuation_at, QvtVerdict, RationalFunction};
use quadric_a1_cli::execute;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    ok: bool,
    detail: String,
}

fn criterion(id: u32, name: &str, tolerance: &str, f: impl FnOnce() -> Outcome) -> bool {
    let t = Instant::now();
    let out = std::panic::catch_unwind(std::panic::AssertUnwindSafe(f)).unwrap_or_else(|e| Outcome {
        ok: false,
        detail: format!(
            "panicked: {}",
            e.downcast_ref::<String>().cloned().or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string())).unwrap_or_default()
        ),
    });
    println!(
        "[{}] {id:>2} {name}: {} ({tolerance}; {:.2} s)",
        if out.ok { "PASS" } else { "FAIL" },
        out.detail,
        t.elapsed().as_secs_f64()
    );
    out.ok
}

fn ms(d: Duration) -> f64 {
    d.as_secs_f64() * 1000.0
}

// ---------- exact linear algebra oracle (plain Gaussian elimination) ----------

fn rank(rows: &[Vec<Q>]) -> usize {
    let mut m: Vec<Vec<Q>> = rows.to_vec();
    let cols = m.first().map_or(0, Vec::len);
    let mut r = 0;
    for c in 0..cols {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = &m[i][c] / &m[r][c];
                for j in 0..cols {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        r += 1;
    }
    r
}

/// Value of `x^T A x + b x + c` from the raw coefficients.
fn eval_raw(p: &AffineQuadricPoly, x: &[Q]) -> Q {
    let n = p.n();
    let mut s = p.c.clone();
    for i in 0..n {
        s += &p.b[i] * &x[i];
        for j in 0..n {
            s += &p.a[(i, j)] * &x[i] * &x[j];
        }
    }
    s
}

fn random_quadric(rng: &mut ChaCha8Rng, n: usize, bound: i64) -> AffineQuadricPoly {
    let mut p = AffineQuadricPoly::zero(n);
    for i in 0..n {
        for j in i..n {
            if rng.gen_bool(0.6) {
                p.add_monomial2(i, j, q(rng.gen_range(-bound..=bound)));
            }
        }
        if rng.gen_bool(0.5) {
            p.b[i] = q(rng.gen_range(-bound..=bound));
        }
    }
    if !p.is_degree_two() {
        p.a[(0, 0)] = q(1);
    }
    p.c = q(rng.gen_range(-bound..=bound));
    p
}

/// Smoothness oracle: the quadric is singular iff `grad = 0` and `p = 0`
/// have a common solution, i.e. `A x = -b/2` is solvable with `p(x) = 0`.
fn smooth_oracle(p: &AffineQuadricPoly) -> bool {
    let n = p.n();
    let a: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| p.a[(i, j)].clone()).collect()).collect();
    let aug: Vec<Vec<Q>> = (0..n)
        .map(|i| {
            let mut r = a[i].clone();
            r.push(-&p.b[i] / q(2));
            r
        })
        .collect();
    if rank(&a) != rank(&aug) {
        return true;
    }
    // Solve for one critical point by elimination on the augmented system.
    let x = solve_any(&aug, n);
    !eval_raw(p, &x).is_zero()
}

fn solve_any(aug: &[Vec<Q>], n: usize) -> Vec<Q> {
    let mut m = aug.to_vec();
    let mut pivots = Vec::new();
    let mut r = 0;
    for c in 0..n {
        let Some(p) = (r..m.len()).find(|&i| !m[i][c].is_zero()) else {
            continue;
        };
        m.swap(r, p);
        let inv = m[r][c].clone();
        for j in 0..=n {
            m[r][j] = &m[r][j] / &inv;
        }
        for i in 0..m.len() {
            if i != r && !m[i][c].is_zero() {
                let f = m[i][c].clone();
                for j in 0..=n {
                    let v = &f * &m[r][j];
                    m[i][j] -= v;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let mut x = vec![Q::zero(); n];
    for (row, &c) in pivots.iter().enumerate() {
        x[c] = m[row][n].clone();
    }
    x
}

fn probe_points(n: usize) -> Vec<Vec<Q>> {
    let mut pts = vec![vec![Q::zero(); n]];
    for i in 0..n {
        for s in [1, -1] {
            let mut e = vec![Q::zero(); n];
            e[i] = q(s);
            pts.push(e);
        }
        for j in i + 1..n {
            let mut e = vec![Q::zero(); n];
            e[i] = q(1);
            e[j] = q(1);
            pts.push(e);
        }
    }
    pts
}

fn c1_normalization() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(1);
    let (mut cases, mut good, mut worst) = (0, 0, Duration::ZERO);
    let mut fails = Vec::new();
    while cases < 200 {
        let n = rng.gen_range(1..=6);
        let p = random_quadric(&mut rng, n, 10);
        if !smooth_oracle(&p) {
            continue;
        }
        cases += 1;
        let t = Instant::now();
        let nf = normalize(&p);
        worst = worst.max(t.elapsed());
        let change = match nf {
            Ok(NormalForm::FullAffineSpace { change, .. }) | Ok(NormalForm::Product { change, .. }) => change,
            other => {
                fails.push(format!("{other:?}"));
                continue;
            }
        };
        // A quadratic polynomial is fixed by its values on 0, ±e_i, e_i+e_j.
        let ok = change.source == p
            && probe_points(n).iter().all(|x| {
                let y = change.change.apply(x).unwrap();
                eval_raw(&p, x) == &change.scalar * &eval_raw(&change.target, &y)
                    && change.change.apply_inverse(&y).unwrap() == *x
            });
        if ok {
            good += 1;
        } else {
            fails.push(format!("{p:?}"));
        }
    }
    Outcome {
        ok: good == 200 && worst < Duration::from_secs(1),
        detail: format!("{good}/200 exact identities, slowest {:.1} ms{}", ms(worst), first_fail(&fails)),
    }
}

fn first_fail(f: &[String]) -> String {
    f.first().map(|s| format!(", first failure {s}")).unwrap_or_default()
}

// ---------- isotropy oracle: modular exclusion and definiteness ----------

/// Number of primitive solutions of `sum a_i x_i^2 = 0 (mod p^k)`.
fn primitive_solutions(a: &[i64], p: i64, k: u32) -> u64 {
    let m = p.pow(k);
    let conv = |only_multiples: bool| -> u64 {
        let mut dist = vec![0u64; m as usize];
        dist[0] = 1;
        for &ai in a {
            let mut next = vec![0u64; m as usize];
            for x in 0..m {
                if only_multiples && x % p != 0 {
                    continue;
                }
                let v = (ai * x % m * x % m).rem_euclid(m) as usize;
                for (s, &cnt) in dist.iter().enumerate() {
                    if cnt > 0 {
                        next[(s + v) % m as usize] += cnt;
                    }
                }
            }
            dist = next;
        }
        dist[0]
    };
    conv(false) - conv(true)
}

fn anisotropy_certificate(a: &[i64]) -> Option<String> {
    if a.iter().all(|&x| x > 0) || a.iter().all(|&x| x < 0) {
        return Some("definite".into());
    }
    for (p, k) in [(2, 6), (3, 3), (5, 3)] {
        if primitive_solutions(a, p, k) == 0 {
            return Some(format!("no primitive zero mod {}", p.pow(k)));
        }
    }
    None
}

/// Exhaustive search for a nonzero integer zero of height at most `h`.
fn small_zero(a: &[i64], h: i64) -> bool {
    let n = a.len();
    let mut x = vec![-h; n];
    loop {
        if x.iter().any(|&v| v != 0) && a.iter().zip(&x).map(|(c, v)| c * v * v).sum::<i64>() == 0 {
            return true;
        }
        let mut i = 0;
        loop {
            if i == n {
                return false;
            }
            x[i] += 1;
            if x[i] <= h {
                break;
            }
            x[i] = -h;
            i += 1;
        }
    }
}

fn corpus() -> Vec<Vec<i64>> {
    const C: [i64; 8] = [-5, -3, -2, -1, 1, 2, 3, 5];
    let mut out = Vec::new();
    fn rec(start: usize, cur: &mut Vec<i64>, out: &mut Vec<Vec<i64>>) {
        if !cur.is_empty() {
            out.push(cur.clone());
        }
        if cur.len() == 4 {
            return;
        }
        for i in start..C.len() {
            cur.push(C[i]);
            rec(i, cur, out);
            cur.pop();
        }
    }
    rec(0, &mut Vec::new(), &mut out);
    out
}

fn c2_isotropy() -> Outcome {
    let forms = corpus();
    let mut agree = 0;
    let mut fails = Vec::new();
    for a in &forms {
        let psi = QuadraticForm::from_ints(a).unwrap();
        let claim = is_isotropic(&psi).unwrap();
        let ok = if claim {
            let v = isotropic_vector(&psi).unwrap();
            v.is_some_and(|v| v.iter().any(|x| !x.is_zero()) && psi.eval(&v).unwrap().is_zero())
        } else {
            let h = [0, 40, 20, 8, 4][a.len()];
            anisotropy_certificate(a).is_some() && !small_zero(a, h)
        };
        if ok {
            agree += 1;
        } else {
            fails.push(format!("{a:?} claimed {claim}"));
        }
    }
    Outcome {
        ok: agree == forms.len(),
        detail: format!("{agree}/{} forms confirmed{}", forms.len(), first_fail(&fails)),
    }
}

fn ones(n: usize) -> QuadraticForm {
    QuadraticForm::from_ints(&vec![1; n]).unwrap()
}

fn c3_sums_of_squares_not_connected() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [3, 5, 9] {
        let t = Instant::now();
        let v = a1_connected(&ones(n), ConnectOptions::default()).unwrap();
        let el = t.elapsed();
        ok &= v.verdict == Verdict::NotConnected && el < Duration::from_secs(1);
        detail.push(format!("n={n} {} {:.0} ms", v.verdict, ms(el)));
    }
    Outcome {
        ok,
        detail: detail.join(", "),
    }
}

fn c4_sums_of_squares_connected() -> Outcome {
    let mut detail = Vec::new();
    let mut ok = true;
    for n in [6, 7, 8, 10, 11, 12, 13, 14, 15, 16] {
        // n = 2^k + l with 0 < l <= 2^k.
        let mut pow = 1;
        while 2 * pow < n {
            pow *= 2;
        }
        let l = n - pow;
        let t = Instant::now();
        let v = a1_connected(&ones(n), ConnectOptions::default()).unwrap();
        let el = t.elapsed();
        let i1 = v.i1_psi.as_ref().map(|(i, _)| i.clone());
        let traced = v.fired.contains(&format!("i1(psi) = {l}"));
        let good = v.verdict == Verdict::Connected && i1 == Some(FirstWittIndex::Exact(l)) && traced && el < Duration::from_secs(1);
        ok &= good;
        if !good {
            detail.push(format!("n={n}: {} i1={i1:?} expected {l}", v.verdict));
        }
    }
    Outcome {
        ok,
        detail: if ok { "dims 6,7,8,10..16 Connected with i1 = l traced".into() } else { detail.join("; ") },
    }
}

fn c5_quadratically_closed() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let opts = ConnectOptions {
        quadratically_closed: true,
    };
    let (mut big, mut two, mut rank_one, mut good) = (0, 0, 0, 0);
    let mut fails = Vec::new();
    let mut seen = 0;
    while seen < 200 {
        let n = rng.gen_range(2..=6);
        let p = random_quadric(&mut rng, n, 6);
        if !smooth_oracle(&p) {
            continue;
        }
        seen += 1;
        let a: Vec<Vec<Q>> = (0..n).map(|i| (0..n).map(|j| p.a[(i, j)].clone()).collect()).collect();
        let aug: Vec<Vec<Q>> = a.iter().zip(&p.b).map(|(r, b)| r.iter().cloned().chain([b.clone()]).collect()).collect();
        let r = rank(&a);
        let affine = rank(&aug) != r;
        let class = classify_quadric(&p, opts).unwrap();
        let ok = match (affine, r) {
            (true, _) => {
                big += 1;
                matches!(class, QuadricClass::AffineSpace { .. }) && class.verdict() == Verdict::Connected
            }
            (false, r) if r >= 3 => {
                big += 1;
                class.verdict() == Verdict::Connected
            }
            (false, 2) => {
                two += 1;
                // Unused trailing variables do not survive printing, so the
                // front end sees the arity of the printed polynomial.
                let printed = poly_text(&p);
                let arity = quadric_a1_cli::parse::parse_polynomial(&printed).unwrap().n();
                let text = execute(&["connected", "--quadratically-closed", &printed], &mut std::io::empty()).stdout;
                matches!(&class, QuadricClass::LowDimension { affine_factor, report }
                    if *affine_factor == n - 2 && report.kind == LowDimensionKind::Torus)
                    && text.contains(&format!("G_m x A^{}", arity - 2))
            }
            _ => {
                rank_one += 1;
                matches!(&class, QuadricClass::LowDimension { affine_factor, report }
                    if *affine_factor == n - 1 && report.kind == LowDimensionKind::Points { count: 2 })
            }
        };
        if ok {
            good += 1;
        } else {
            fails.push(format!("{p:?} -> {class:?}"));
        }
    }
    Outcome {
        ok: good == seen,
        detail: format!(
            "{good}/{seen} smooth quadrics ({big} rank>=3 or affine Connected, {two} rank-2 G_m x A^(n-2), {rank_one} rank-1 two sheets){}",
            first_fail(&fails)
        ),
    }
}

fn poly_text(p: &AffineQuadricPoly) -> String {
    quadric_a1_cli::parse::print_polynomial(p)
}

// ---------- sums of two squares ----------

fn factor_small(mut n: i64) -> Vec<(i64, u32)> {
    let mut out = Vec::new();
    let mut p = 2;
    while p * p <= n {
        let mut e = 0;
        while n % p == 0 {
            n /= p;
            e += 1;
        }
        if e > 0 {
            out.push((p, e));
        }
        p += 1;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

/// `d` is a norm from `Q(i)` iff `d > 0` and primes `3 mod 4` occur to even powers.
fn sum_of_two_squares_norm(d: i64) -> bool {
    d > 0 && factor_small(d).iter().all(|&(p, e)| p % 4 != 3 || e % 2 == 0)
}

/// `(d, -1)_v` on an integer `d`, from the closed formulas.
fn symbol_with_minus_one(d: i64, v: &Place) -> i8 {
    match v {
        Place::Real => {
            if d < 0 {
                -1
            } else {
                1
            }
        }
        Place::Finite(p) => {
            let p = p.to_i64().unwrap();
            let mut u = d;
            let mut k = 0;
            while u % p == 0 {
                u /= p;
                k += 1;
            }
            if p == 2 {
                if ((u - 1) / 2).rem_euclid(2) == 0 {
                    1
                } else {
                    -1
                }
            } else if k % 2 == 1 && p % 4 == 3 {
                -1
            } else {
                1
            }
        }
    }
}

fn c6_membership() -> Outcome {
    let psi = QuadraticForm::from_ints(&[1, -1, -1]).unwrap();
    let desc = pi0_isotropic(&psi, &BaseField::Rationals).unwrap();
    let phi = QuadraticForm::from_ints(&[1, 1]).unwrap();
    let mut good = 0;
    let mut fails = Vec::new();
    let cases = [(2, true), (5, true), (10, true), (13, true), (-1, false), (3, false), (21, false)];
    for (d, expect) in cases {
        let oracle = sum_of_two_squares_norm(d);
        let dq = q(d);
        let ok = match desc.membership(&dq, MembershipOptions::default()).unwrap() {
            Pi0Membership::Rational(MembershipVerdict::Member(c)) => {
                // Re-verify by hand: each witness gives its value under x^2 + y^2
                // and the product is d times the square.
                let by_hand = c.factors.iter().all(|f| &f.witness[0] * &f.witness[0] + &f.witness[1] * &f.witness[1] == f.value)
                    && c.factors.iter().fold(Q::one(), |acc, f| acc * &f.value) == &dq * &c.square * &c.square;
                expect && oracle && by_hand && c.verify(&phi, &dq).unwrap()
            }
            Pi0Membership::Rational(MembershipVerdict::NonMember(NonMemberReason::Local(v))) => {
                !expect && !oracle && symbol_with_minus_one(d, &v) == -1
            }
            Pi0Membership::Rational(MembershipVerdict::NonMember(NonMemberReason::NormGroup { .. })) => {
                !expect && !oracle
            }
            other => {
                fails.push(format!("{d}: {other:?}"));
                false
            }
        };
        if ok {
            good += 1;
        } else {
            fails.push(format!("d={d}"));
        }
    }
    Outcome {
        ok: good == cases.len(),
        detail: format!("{good}/{} verdicts match and re-verify{}", cases.len(), first_fail(&fails)),
    }
}

fn random_poly(rng: &mut ChaCha8Rng, max_deg: usize) -> Poly<Q> {
    loop {
        let d = rng.gen_range(0..=max_deg);
        let c: Vec<Q> = (0..=d).map(|_| q(rng.gen_range(-4..=4))).collect();
        let p = Poly::new(c);
        if !p.is_zero() {
            return p;
        }
    }
}

fn decided(v: &QvtVerdict) -> Option<bool> {
    match v {
        QvtVerdict::InGroupUpToConstant { .. } => Some(true),
        QvtVerdict::No(_) => Some(false),
        QvtVerdict::Unknown { .. } => None,
    }
}

fn c7_qvt() -> Outcome {
    let mut notes = Vec::new();
    let phi23 = QuadraticForm::from_ints(&[2, 3]).unwrap();
    let t = RationalFunction::t();
    let base = match qvt_decide(&phi23, &t).unwrap() {
        QvtVerdict::No(w) => {
            w.point == Poly::t()
                && valuation_at(&t, &w.point).unwrap() % 2 != 0
                && matches!(
                    residue_isotropy(&phi23, &residue_field(&w.point).unwrap()).unwrap(),
                    IsotropyVerdict::Anisotropic(_)
                )
        }
        _ => false,
    };
    if !base {
        notes.push("(<2,3>, t) not refuted at t".to_string());
    }

    let mut rng = ChaCha8Rng::seed_from_u64(7);
    let mut iso_ok = 0;
    let mut inverse_ok = 0;
    let mut total = 0;
    let mut iso = 0;
    while iso < 50 {
        let k = rng.gen_range(1..=3);
        let c: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let a: i64 = rng.gen_range(1..=5);
        let mut coeffs = vec![a, -a];
        coeffs.extend(c);
        let phi = QuadraticForm::from_ints(&coeffs).unwrap();
        let f = RationalFunction::new(random_poly(&mut rng, 4), random_poly(&mut rng, 3)).unwrap();
        if f.is_zero() {
            continue;
        }
        iso += 1;
        let v = qvt_decide(&phi, &f).unwrap();
        if matches!(v, QvtVerdict::InGroupUpToConstant { .. }) {
            iso_ok += 1;
        }
        total += 1;
        let inv = RationalFunction::new(f.denominator().clone(), f.numerator().clone()).unwrap();
        if decided(&qvt_decide(&phi, &inv).unwrap()) == decided(&v) {
            inverse_ok += 1;
        }
    }
    // Anisotropic phi as well, for the inverse check.
    let mut aniso = 0;
    while aniso < 50 {
        let k = rng.gen_range(1..=3);
        let c: Vec<i64> = (0..k).map(|_| rng.gen_range(1..=7) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let phi = QuadraticForm::from_ints(&c).unwrap();
        if is_isotropic(&phi).unwrap() {
            continue;
        }
        let f = RationalFunction::new(random_poly(&mut rng, 3), random_poly(&mut rng, 3)).unwrap();
        if f.is_zero() {
            continue;
        }
        aniso += 1;
        total += 1;
        let v = qvt_decide(&phi, &f).unwrap();
        let inv = RationalFunction::new(f.denominator().clone(), f.numerator().clone()).unwrap();
        if decided(&qvt_decide(&phi, &inv).unwrap()) == decided(&v) {
            inverse_ok += 1;
        }
    }
    Outcome {
        ok: base && iso_ok == 50 && inverse_ok == total,
        detail: format!(
            "(<2,3>, t) -> No at t: {base}; isotropic fuzz {iso_ok}/50 InGroupUpToConstant; f vs 1/f consistent {inverse_ok}/{total}{}",
            first_fail(&notes)
        ),
    }
}

fn c8_chains() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    let (mut built, mut good) = (0, 0);
    let mut worst = Duration::ZERO;
    let mut fails = Vec::new();
    while built < 100 {
        let dim = rng.gen_range(2..=3);
        let mut c = vec![1i64];
        c.extend((1..dim).map(|_| rng.gen_range(1..=5) * if rng.gen_bool(0.6) { 1 } else { -1 }));
        let phi = QuadraticForm::from_ints(&c).unwrap();
        if is_isotropic(&phi).unwrap() {
            continue;
        }
        // lambda / c is a product of up to three values of phi times a square.
        let cq = q(rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 });
        let mut d = q(rng.gen_range(1..=3)).pow(2);
        for _ in 0..rng.gen_range(1..=3) {
            let x: Vec<Q> = (0..dim).map(|_| q(rng.gen_range(-3..=3))).collect();
            let v = phi.eval(&x).unwrap();
            if !v.is_zero() {
                d *= v;
            }
        }
        let lambda = &cq * &d;
        built += 1;
        let t = Instant::now();
        let cert = match value_group_membership(&phi, &d, MembershipOptions::default()).unwrap() {
            MembershipVerdict::Member(cert) => cert,
            other => {
                fails.push(format!("{phi} d={d}: {other:?}"));
                continue;
            }
        };
        let chain = build_chain(&phi, &cq, &lambda, &cert.factors);
        let el = t.elapsed();
        worst = worst.max(el);
        let ok = match &chain {
            Ok(ch) => {
                verify_chain(ch).ok
                    && ch.start[0] == cq
                    && ch.end[0] == lambda
                    && cert.verify(&phi, &(&ch.end[0] / &ch.start[0])).unwrap()
                    && el < Duration::from_secs(1)
            }
            Err(_) => false,
        };
        if ok {
            good += 1;
        } else {
            fails.push(format!("{phi} c={cq} lambda={lambda}"));
        }
    }
    Outcome {
        ok: good == 100,
        detail: format!("{good}/100 chains verified with matching endpoints, slowest {:.1} ms{}", ms(worst), first_fail(&fails)),
    }
}

/// `s(t)` lies on `x1 x2 = phi(1, x3, ...)` identically: the defect has
/// degree at most `2 deg s`, so vanishing at that many plus one points
/// settles it.
fn section_identity<F: Scalar>(phi: &[Q], comps: &[Poly<F>]) -> bool {
    let deg = comps.iter().filter_map(|c| c.degree()).max().unwrap_or(0);
    (0..=(2 * deg + 1) as i64).all(|k| {
        let t = F::from_int(k);
        let x: Vec<F> = comps.iter().map(|c| c.eval(&t)).collect();
        let mut rhs = F::from_rational(&phi[0]);
        for (a, xi) in phi[1..].iter().zip(&x[2..]) {
            rhs = rhs + F::from_rational(a) * xi.clone() * xi.clone();
        }
        x[0].clone() * x[1].clone() == rhs
    })
}

fn c9_sections() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    let mut good = 0;
    let mut fails = Vec::new();
    for i in 0..20 {
        let ok = if i < 10 {
            // phi = <1, b_3, ..., b_n> with b_n solved from phi(1, y) = 0.
            let k = rng.gen_range(1..=3);
            let mut b: Vec<Q> = (1..k).map(|_| q(rng.gen_range(1..=6) * if rng.gen_bool(0.5) { 1 } else { -1 })).collect();
            let y: Vec<Q> = (0..k)
                .map(|_| Q::new(rng.gen_range(1..=5).into(), rng.gen_range(1..=3).into()))
                .collect();
            let partial = b.iter().zip(&y).fold(Q::one(), |s, (a, v)| s + a * v * v);
            let last = -partial / (&y[k - 1] * &y[k - 1]);
            if last.is_zero() {
                fails.push("degenerate draw".into());
                continue;
            }
            b.push(last);
            let mut coeffs = vec![Q::one()];
            coeffs.extend(b);
            let phi = QuadraticForm::new(coeffs.clone()).unwrap();
            let s = section_through(&phi, &y).unwrap();
            let s0 = s.at(&Q::zero());
            section_identity(&coeffs, s.components()) && s0[0].is_zero() && s0[2..] == y[..]
        } else {
            // phi = <1, c1, c2> with y = (a sqrt(m), b): c2 = -(1 + c1 a^2 m) / b^2.
            let m = [2i64, 3, 5, -1, -7, 6][rng.gen_range(0..6)];
            let k = QuadField::new(m).unwrap();
            let c1 = rng.gen_range(1..=4) * if rng.gen_bool(0.5) { 1 } else { -1 };
            let (a, b) = (rng.gen_range(1..=3), rng.gen_range(1..=3));
            let c2 = Q::new((-(1 + c1 * a * a * m)).into(), (b * b).into());
            if c2.is_zero() {
                fails.push("degenerate draw".into());
                continue;
            }
            let coeffs = vec![Q::one(), q(c1), c2];
            let phi = QuadraticForm::new(coeffs.clone()).unwrap();
            let y = vec![QuadElem::rational(q(a)) * k.sqrt_m(), QuadElem::rational(q(b))];
            let s = section_through(&phi, &y).unwrap();
            let s0 = s.at(&QuadElem::rational(Q::zero()));
            section_identity(&coeffs, s.components()) && s0[0].is_zero() && s0[2..] == y[..]
        };
        if ok {
            good += 1;
        } else {
            fails.push(format!("case {i}"));
        }
    }
    Outcome {
        ok: good == 20,
        detail: format!("{good}/20 sections satisfy the identity and pass through L_y (10 over Q, 10 over quadratic fields){}", first_fail(&fails)),
    }
}

fn c10_cross_consistency() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    let mut agree = 0;
    let mut fails = Vec::new();
    let mut seen = 0;
    while seen < 100 {
        let n = rng.gen_range(3..=6);
        let c: Vec<i64> = (0..n).map(|_| rng.gen_range(1..=9) * if rng.gen_bool(0.5) { 1 } else { -1 }).collect();
        let psi = QuadraticForm::from_ints(&c).unwrap();
        if !is_isotropic(&psi).unwrap() {
            continue;
        }
        seen += 1;
        let triv = pi0_isotropic(&psi, &BaseField::Rationals).unwrap().triviality;
        let v = a1_connected(&psi, ConnectOptions::default()).unwrap().verdict;
        if (triv == Triviality::Trivial) == (v == Verdict::Connected) && v != Verdict::Unknown {
            agree += 1;
        } else {
            fails.push(format!("{psi}: {triv:?} vs {v}"));
        }
    }
    // psi + H is Connected exactly when psi represents 1: kappa then picks up
    // a second hyperbolic plane. Connected cases are certified by a vector
    // with psi(w) = 1, the others by an anisotropy certificate of psi + <-1>.
    let forms = corpus();
    let (mut connected, mut certified) = (0, 0);
    let h = QuadraticForm::hyperbolic_plane();
    for a in &forms {
        let psi = QuadraticForm::from_ints(a).unwrap();
        let stab = psi.perp(&h);
        let v = a1_connected(&stab, ConnectOptions::default()).unwrap().verdict;
        let ok = match v {
            Verdict::Connected => {
                connected += 1;
                quadric_a1::forms::represents(&psi, &q(1))
                    .unwrap()
                    .is_some_and(|w| psi.eval(&w).unwrap() == q(1))
            }
            Verdict::NotConnected => {
                let mut b = a.clone();
                b.push(-1);
                anisotropy_certificate(&b).is_some()
            }
            Verdict::Unknown => false,
        };
        if ok {
            certified += 1;
        } else {
            fails.push(format!("{stab}: {v}"));
        }
    }
    Outcome {
        ok: agree == 100 && certified == forms.len(),
        detail: format!(
            "{agree}/100 isotropic psi: Trivial <=> Connected; {certified}/{} corpus psi + <1,-1> certified \
             ({connected} Connected, {} NotConnected because psi misses 1){}",
            forms.len(),
            forms.len() - connected,
            first_fail(&fails)
        ),
    }
}

fn main() {
    // Keep the default hook quiet inside criteria; failures are reported per line.
    std::panic::set_hook(Box::new(|_| {}));
    let results = [
        criterion(1, "normalization soundness", "200 cases, 100%, < 1000 ms/case", c1_normalization),
        criterion(2, "isotropy vs independent oracles", "all 494 forms, 100%", c2_isotropy),
        criterion(3, "<1..1> dims 3,5,9 NotConnected", "exact, < 1000 ms each", c3_sums_of_squares_not_connected),
        criterion(4, "<1..1> dims 6..16 Connected with i1 = l", "exact, < 1000 ms each", c4_sums_of_squares_connected),
        criterion(5, "quadratically closed classification", "100%", c5_quadratically_closed),
        criterion(6, "<1,-1,-1> membership vs sum of two squares", "7 cases, 100% re-verified", c6_membership),
        criterion(7, "QVT regression and inverse consistency", "100%", c7_qvt),
        criterion(8, "homotopy chain certificates", "100 chains, 100%, < 1000 ms each", c8_chains),
        criterion(9, "sections through the zero fiber", "20 cases, 100%", c9_sections),
        criterion(10, "pi0 / connectedness cross-consistency", "100%; psi + H Connected iff psi represents 1", c10_cross_consistency),
    ];
    let passed = results.iter().filter(|&&r| r).count();
    println!("acceptance: {passed}/{} criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
