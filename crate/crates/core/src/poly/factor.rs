//! Factorization in `Q[t]`: content removal, Yun's squarefree decomposition,
//! then Zassenhaus (factor modulo a small prime, Hensel lift, recombine).

use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use super::modp::{self, Fp};
use super::Poly;
use crate::error::{domain, internal, Error, Result};
use crate::field::{Q, Z};

pub const DEFAULT_DEGREE_BUDGET: usize = 12;

/// `f = unit * prod(P^e)` with `P` monic irreducible, sorted by degree then
/// coefficients.
#[derive(Debug, Clone, PartialEq)]
pub struct Factored {
    pub unit: Q,
    pub factors: Vec<(Poly<Q>, u32)>,
}

impl Factored {
    pub fn expand(&self) -> Poly<Q> {
        self.factors
            .iter()
            .fold(Poly::constant(self.unit.clone()), |acc, (p, e)| acc * p.pow(*e))
    }
}

pub fn factor_over_q(f: &Poly<Q>, degree_budget: usize) -> Result<Factored> {
    if f.is_zero() {
        return Err(domain!("cannot factor the zero polynomial"));
    }
    let unit = f.leading();
    let mut factors = Vec::new();
    for (part, e) in squarefree_decomposition(&f.monic()) {
        if part.degree().unwrap_or(0) > degree_budget {
            return Err(Error::FactorizationBudget(format!(
                "squarefree part of degree {} exceeds the budget {degree_budget}",
                part.degree().unwrap_or(0)
            )));
        }
        for g in zassenhaus(&to_primitive(&part)) {
            factors.push((from_integer(&g).monic(), e));
        }
    }
    factors.sort_by(|(a, _), (b, _)| {
        a.degree()
            .cmp(&b.degree())
            .then_with(|| a.coeffs().iter().rev().cmp(b.coeffs().iter().rev()))
    });
    let out = Factored { unit, factors };
    if &out.expand() != f {
        return Err(internal!("factorization does not multiply back"));
    }
    Ok(out)
}

pub fn is_irreducible(f: &Poly<Q>) -> Result<bool> {
    if f.degree().unwrap_or(0) == 0 {
        return Ok(false);
    }
    let fac = factor_over_q(f, usize::MAX)?;
    Ok(fac.factors.len() == 1 && fac.factors[0].1 == 1)
}

/// Yun: monic `f = prod a_i^i` with the `a_i` squarefree and coprime.
fn squarefree_decomposition(f: &Poly<Q>) -> Vec<(Poly<Q>, u32)> {
    let mut out = Vec::new();
    let df = f.derivative();
    let b = f.gcd(&df);
    let mut c = f.exact_div(&b).expect("gcd divides");
    let mut d = df.exact_div(&b).expect("gcd divides") - c.derivative();
    let mut i = 1;
    while !c.is_constant() {
        let a = c.gcd(&d);
        c = c.exact_div(&a).expect("gcd divides");
        d = d.exact_div(&a).expect("gcd divides") - c.derivative();
        if !a.is_constant() {
            out.push((a, i));
        }
        i += 1;
    }
    out
}

type ZPoly = Vec<Z>;

fn to_primitive(f: &Poly<Q>) -> ZPoly {
    let l = f
        .coeffs()
        .iter()
        .fold(Z::one(), |acc, c| acc.lcm(c.denom()));
    let v: ZPoly = f
        .coeffs()
        .iter()
        .map(|c| (c * Q::from_integer(l.clone())).to_integer())
        .collect();
    primitive(&v)
}

fn primitive(v: &[Z]) -> ZPoly {
    let g = v.iter().fold(Z::zero(), |acc, c| acc.gcd(c));
    let sign = if v.last().is_some_and(|c| c.is_negative()) {
        -Z::one()
    } else {
        Z::one()
    };
    v.iter().map(|c| c / &g * &sign).collect()
}

fn from_integer(v: &[Z]) -> Poly<Q> {
    Poly::new(v.iter().map(|c| Q::from_integer(c.clone())).collect())
}

fn zdeg(v: &[Z]) -> usize {
    v.len().saturating_sub(1)
}

fn ztrim(mut v: ZPoly) -> ZPoly {
    while v.last().is_some_and(|c| c.is_zero()) {
        v.pop();
    }
    v
}

fn zmul(a: &[Z], b: &[Z]) -> ZPoly {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![Z::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn zmod(a: &[Z], m: &Z) -> ZPoly {
    ztrim(a.iter().map(|c| c.mod_floor(m)).collect())
}

/// Symmetric residues in `(-m/2, m/2]`.
fn zsym(a: &[Z], m: &Z) -> ZPoly {
    let half = m / 2;
    ztrim(
        a.iter()
            .map(|c| {
                let r = c.mod_floor(m);
                if r > half {
                    r - m
                } else {
                    r
                }
            })
            .collect(),
    )
}

fn to_fp(a: &[Z], p: u64) -> Fp {
    let pz = Z::from(p);
    modp::trim(
        a.iter()
            .map(|c| c.mod_floor(&pz).to_u64().expect("residue fits"))
            .collect(),
    )
}

fn from_fp(a: &[u64]) -> ZPoly {
    a.iter().map(|&c| Z::from(c)).collect()
}

/// Exact division in `Z[t]`, `None` if `b` does not divide `a`.
fn zdiv_exact(a: &[Z], b: &[Z]) -> Option<ZPoly> {
    let db = zdeg(b);
    let lb = b.last()?;
    let mut r = a.to_vec();
    if r.len() < b.len() {
        return r.iter().all(|c| c.is_zero()).then(Vec::new);
    }
    let mut q = vec![Z::zero(); r.len() - db];
    for k in (db..r.len()).rev() {
        let (c, rem) = r[k].div_rem(lb);
        if !rem.is_zero() {
            return None;
        }
        for (j, bj) in b.iter().enumerate() {
            r[k - db + j] -= &c * bj;
        }
        q[k - db] = c;
    }
    r.iter().all(|c| c.is_zero()).then(|| ztrim(q))
}

fn mod_inverse(a: &Z, m: &Z) -> Z {
    let e = a.mod_floor(m).extended_gcd(m);
    e.x.mod_floor(m)
}

fn small_primes() -> impl Iterator<Item = u64> {
    (3u64..).step_by(2).filter(|&n| (3..).step_by(2).take_while(|d| d * d <= n).all(|d| n % d != 0))
}

/// Irreducible factors of a primitive squarefree integer polynomial with
/// positive leading coefficient.
fn zassenhaus(f: &[Z]) -> Vec<ZPoly> {
    let n = zdeg(f);
    if n <= 1 {
        return vec![f.to_vec()];
    }
    let lc = f.last().expect("nonzero").clone();
    let mut rng = ChaCha8Rng::seed_from_u64(0x5eed ^ n as u64);
    // Among the first few admissible primes keep the one with fewest factors.
    let mut best: Option<(u64, Vec<Fp>)> = None;
    let mut tried = 0;
    for p in small_primes() {
        if tried >= 5 {
            break;
        }
        if (&lc % Z::from(p)).is_zero() {
            continue;
        }
        let fp = modp::monic(&to_fp(f, p), p);
        let g = modp::gcd(&fp, &modp::derivative(&fp, p), p);
        if modp::deg(&g) != Some(0) {
            continue;
        }
        tried += 1;
        let fs = modp::factor_squarefree(&fp, p, &mut rng);
        if fs.len() == 1 {
            return vec![f.to_vec()];
        }
        if best.as_ref().is_none_or(|(_, b)| fs.len() < b.len()) {
            best = Some((p, fs));
        }
    }
    let (p, local) = best.expect("some prime is admissible");
    let norm2 = f.iter().map(|c| c * c).fold(Z::zero(), |a, b| a + b).sqrt() + 1u32;
    let bound = Z::from(2u32) * lc.abs() * (Z::one() << n) * norm2;
    let pz = Z::from(p);
    let mut k = 1u32;
    let mut pk = pz.clone();
    while pk <= bound {
        pk *= &pz;
        k += 1;
    }
    let lifted = hensel_tree(&zmod(f, &pk), &local, p, k);
    recombine(f, lifted, &pk)
}

/// Monic lifts modulo `p^k` of the factorization `target ≡ lc * prod(factors)`.
fn hensel_tree(target: &[Z], factors: &[Fp], p: u64, k: u32) -> Vec<ZPoly> {
    let pk = num_traits::pow(Z::from(p), k as usize);
    let lc = target.last().expect("nonzero").clone();
    if factors.len() == 1 {
        let inv = mod_inverse(&lc, &pk);
        let v: ZPoly = target.iter().map(|c| c * &inv).collect();
        return vec![zmod(&v, &pk)];
    }
    let (left, right) = factors.split_at(factors.len() / 2);
    let prod = |fs: &[Fp]| fs.iter().fold(vec![1u64], |acc, g| modp::mul(&acc, g, p));
    let g0 = prod(left);
    let h0 = prod(right);
    let mut g: ZPoly = zmod(&from_fp(&g0).iter().map(|c| c * &lc).collect::<Vec<_>>(), &pk);
    let mut h: ZPoly = from_fp(&h0);
    let (s, t) = modp::bezout(&to_fp(&g, p), &h0, p);
    let pz = Z::from(p);
    let mut pj = pz.clone();
    for _ in 1..k {
        let next = &pj * &pz;
        let diff = zmod(
            &ztrim(
                (0..target.len().max(g.len() + h.len()))
                    .map(|i| {
                        target.get(i).cloned().unwrap_or_default()
                            - zmul(&g, &h).get(i).cloned().unwrap_or_default()
                    })
                    .collect(),
            ),
            &next,
        );
        let e: ZPoly = diff.iter().map(|c| c / &pj).collect();
        let e = to_fp(&e, p);
        let (qq, r) = modp::div_rem(&modp::mul(&s, &e, p), &to_fp(&h, p), p);
        let corr_g = modp::add(&modp::mul(&t, &e, p), &modp::mul(&qq, &to_fp(&g, p), p), p);
        g = add_scaled(&g, &corr_g, &pj, &next);
        h = add_scaled(&h, &r, &pj, &next);
        pj = next;
    }
    let mut out = hensel_tree(&g, left, p, k);
    out.extend(hensel_tree(&h, right, p, k));
    out
}

fn add_scaled(a: &[Z], corr: &[u64], pj: &Z, m: &Z) -> ZPoly {
    let n = a.len().max(corr.len());
    zmod(
        &(0..n)
            .map(|i| {
                a.get(i).cloned().unwrap_or_default()
                    + pj * Z::from(corr.get(i).copied().unwrap_or(0))
            })
            .collect::<Vec<_>>(),
        m,
    )
}

fn recombine(f: &[Z], mut local: Vec<ZPoly>, pk: &Z) -> Vec<ZPoly> {
    let mut out = Vec::new();
    let mut cur = f.to_vec();
    let mut size = 1;
    'outer: while 2 * size <= local.len() {
        let r = local.len();
        let mut idx: Vec<usize> = (0..size).collect();
        loop {
            let lc = cur.last().expect("nonzero").clone();
            let cand = idx
                .iter()
                .fold(vec![lc], |acc, &i| zmod(&zmul(&acc, &local[i]), pk));
            let cand = primitive(&zsym(&cand, pk));
            if let Some(quo) = zdiv_exact(&cur, &cand) {
                out.push(cand);
                cur = quo;
                for &i in idx.iter().rev() {
                    local.remove(i);
                }
                continue 'outer;
            }
            // Next combination in lexicographic order.
            let mut i = size;
            loop {
                if i == 0 {
                    size += 1;
                    continue 'outer;
                }
                i -= 1;
                if idx[i] < r - size + i {
                    idx[i] += 1;
                    for j in i + 1..size {
                        idx[j] = idx[j - 1] + 1;
                    }
                    break;
                }
            }
        }
    }
    if zdeg(&cur) > 0 {
        out.push(primitive(&cur));
    }
    out
}
