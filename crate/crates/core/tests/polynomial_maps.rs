//! Polynomial curves on `psi = 1`: none exist for anisotropic `psi` (the
//! leading coefficients would give a zero of `psi`), while isotropic `psi`
//! carries lines.

use quadric_a1::field::{q, Q};
use quadric_a1::forms::{is_isotropic, represents, QuadraticForm};
use quadric_a1::homotopy::PolynomialMap;
use quadric_a1::poly::Poly;
use quadric_a1::quadrics::QuadricModel;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn random_form(rng: &mut ChaCha8Rng, n: usize) -> QuadraticForm {
    let c: Vec<i64> = (0..n)
        .map(|_| loop {
            let x: i64 = rng.gen_range(-7..=7);
            if x != 0 {
                return x;
            }
        })
        .collect();
    QuadraticForm::from_ints(&c).unwrap()
}

/// `w + t v + t^2 u + ...` through a point `w` of the quadric.
fn curve_through(rng: &mut ChaCha8Rng, w: &[Q], deg: usize) -> Vec<Poly<Q>> {
    w.iter()
        .map(|wi| {
            let mut c = vec![wi.clone()];
            c.extend((0..deg).map(|_| q(rng.gen_range(-4..=4))));
            Poly::new(c)
        })
        .collect()
}

#[test]
fn anisotropic_quadrics_reject_every_nonconstant_map() {
    let mut rng = ChaCha8Rng::seed_from_u64(13);
    let mut tried = 0;
    while tried < 200 {
        let n = rng.gen_range(2..=4);
        let psi = random_form(&mut rng, n);
        if is_isotropic(&psi).unwrap() {
            continue;
        }
        let Some(w) = represents(&psi, &q(1)).unwrap() else {
            continue;
        };
        let deg = rng.gen_range(1..=8);
        let comps = curve_through(&mut rng, &w, deg);
        if comps.iter().all(|c| c.is_constant()) {
            continue;
        }
        tried += 1;
        let model = QuadricModel::Qpsi(psi.clone());
        assert!(PolynomialMap::new(model.clone(), comps).is_err(), "{psi}");
        // The constant map at w is accepted.
        let constant: Vec<Poly<Q>> = w.iter().map(|x| Poly::constant(x.clone())).collect();
        assert!(PolynomialMap::new(model, constant).is_ok());
    }
}

#[test]
fn isotropic_quadrics_carry_lines() {
    // psi = <a, -a> + rest: with v = e1 + e2 null and w in v's orthogonal
    // complement, w + t v stays on psi = 1.
    let mut rng = ChaCha8Rng::seed_from_u64(17);
    let mut built = 0;
    while built < 50 {
        let a: i64 = rng.gen_range(1..=7);
        let k = rng.gen_range(1..=3);
        let rest = random_form(&mut rng, k);
        let Some(r) = represents(&rest, &q(1)).unwrap() else {
            continue;
        };
        let psi = QuadraticForm::from_ints(&[a, -a]).unwrap().perp(&rest);
        let s = q(rng.gen_range(-5..=5));
        let mut comps = vec![Poly::new(vec![s.clone(), q(1)]), Poly::new(vec![s, q(1)])];
        comps.extend(r.iter().map(|x| Poly::constant(x.clone())));
        let map = PolynomialMap::new(QuadricModel::Qpsi(psi.clone()), comps).unwrap();
        assert!(!map.is_constant());
        assert!(is_isotropic(&psi).unwrap());
        built += 1;
    }
}
