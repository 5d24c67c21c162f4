//! Polynomials over a small prime field `F_p`, `p < 2^31`, low degree first.

use num_bigint::BigUint;
use rand::Rng;

pub(super) type Fp = Vec<u64>;

pub(super) fn trim(mut a: Fp) -> Fp {
    while a.last() == Some(&0) {
        a.pop();
    }
    a
}

pub(super) fn deg(a: &[u64]) -> Option<usize> {
    a.len().checked_sub(1)
}

pub(super) fn inv_mod(a: u64, p: u64) -> u64 {
    pow_mod(a, p - 2, p)
}

fn pow_mod(mut a: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u64;
    a %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * a % p;
        }
        a = a * a % p;
        e >>= 1;
    }
    acc
}

pub(super) fn sub(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        let x = a.get(i).copied().unwrap_or(0);
        let y = b.get(i).copied().unwrap_or(0);
        *o = (x + p - y) % p;
    }
    trim(out)
}

pub(super) fn add(a: &[u64], b: &[u64], p: u64) -> Fp {
    let n = a.len().max(b.len());
    let mut out = vec![0; n];
    for (i, o) in out.iter_mut().enumerate() {
        *o = (a.get(i).copied().unwrap_or(0) + b.get(i).copied().unwrap_or(0)) % p;
    }
    trim(out)
}

pub(super) fn mul(a: &[u64], b: &[u64], p: u64) -> Fp {
    if a.is_empty() || b.is_empty() {
        return Vec::new();
    }
    let mut out = vec![0u64; a.len() + b.len() - 1];
    for (i, &x) in a.iter().enumerate() {
        if x == 0 {
            continue;
        }
        for (j, &y) in b.iter().enumerate() {
            out[i + j] = (out[i + j] + x * y) % p;
        }
    }
    trim(out)
}

pub(super) fn scale(a: &[u64], k: u64, p: u64) -> Fp {
    trim(a.iter().map(|&x| x * k % p).collect())
}

pub(super) fn monic(a: &[u64], p: u64) -> Fp {
    match a.last() {
        Some(&lc) => scale(a, inv_mod(lc, p), p),
        None => Vec::new(),
    }
}

pub(super) fn div_rem(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let db = deg(b).expect("division by zero polynomial");
    let inv = inv_mod(b[db], p);
    let mut r = a.to_vec();
    if r.len() <= db {
        return (Vec::new(), trim(r));
    }
    let mut q = vec![0u64; r.len() - db];
    for k in (db..r.len()).rev() {
        let c = r[k] * inv % p;
        if c == 0 {
            continue;
        }
        for (j, &bj) in b.iter().enumerate() {
            r[k - db + j] = (r[k - db + j] + p - c * bj % p) % p;
        }
        q[k - db] = c;
    }
    r.truncate(db);
    (trim(q), trim(r))
}

pub(super) fn rem(a: &[u64], b: &[u64], p: u64) -> Fp {
    div_rem(a, b, p).1
}

pub(super) fn gcd(a: &[u64], b: &[u64], p: u64) -> Fp {
    let mut a = a.to_vec();
    let mut b = b.to_vec();
    while !b.is_empty() {
        let r = rem(&a, &b, p);
        a = b;
        b = r;
    }
    monic(&a, p)
}

/// `(s, t)` with `s a + t b = 1`, for coprime `a`, `b`.
pub(super) fn bezout(a: &[u64], b: &[u64], p: u64) -> (Fp, Fp) {
    let (mut r0, mut r1) = (a.to_vec(), b.to_vec());
    let (mut s0, mut s1) = (vec![1u64], Vec::new());
    let (mut t0, mut t1) = (Vec::new(), vec![1u64]);
    while !r1.is_empty() {
        let (q, r) = div_rem(&r0, &r1, p);
        let s = sub(&s0, &mul(&q, &s1, p), p);
        let t = sub(&t0, &mul(&q, &t1, p), p);
        (r0, r1) = (r1, r);
        (s0, s1) = (s1, s);
        (t0, t1) = (t1, t);
    }
    // r0 is a nonzero constant for coprime inputs.
    let k = inv_mod(r0[0], p);
    (scale(&s0, k, p), scale(&t0, k, p))
}

fn pow_rem(base: &[u64], e: &BigUint, m: &[u64], p: u64) -> Fp {
    let mut acc = vec![1u64];
    let base = rem(base, m, p);
    for i in (0..e.bits()).rev() {
        acc = rem(&mul(&acc, &acc, p), m, p);
        if e.bit(i) {
            acc = rem(&mul(&acc, &base, p), m, p);
        }
    }
    acc
}

pub(super) fn derivative(a: &[u64], p: u64) -> Fp {
    trim(
        a.iter()
            .enumerate()
            .skip(1)
            .map(|(k, &c)| c * (k as u64 % p) % p)
            .collect(),
    )
}

/// Irreducible monic factors of a monic squarefree `f`, `p` odd.
pub(super) fn factor_squarefree(f: &[u64], p: u64, rng: &mut impl Rng) -> Vec<Fp> {
    let mut out = Vec::new();
    let mut f = f.to_vec();
    let x = vec![0u64, 1];
    let mut h = x.clone();
    let pb = BigUint::from(p);
    let mut d = 1;
    while deg(&f).unwrap_or(0) >= 2 * d {
        h = pow_rem(&h, &pb, &f, p);
        let g = gcd(&f, &sub(&h, &x, p), p);
        if deg(&g) != Some(0) {
            equal_degree(&g, d, p, rng, &mut out);
            f = div_rem(&f, &g, p).0;
            h = rem(&h, &f, p);
        }
        d += 1;
    }
    if deg(&f).unwrap_or(0) > 0 {
        out.push(f);
    }
    out
}

fn equal_degree(g: &[u64], d: usize, p: u64, rng: &mut impl Rng, out: &mut Vec<Fp>) {
    let n = deg(g).expect("nonzero");
    if n == d {
        out.push(g.to_vec());
        return;
    }
    let e = (num_traits::pow(BigUint::from(p), d) - 1u32) / 2u32;
    loop {
        let a: Fp = trim((0..n).map(|_| rng.gen_range(0..p)).collect());
        if deg(&a).unwrap_or(0) == 0 {
            continue;
        }
        let b = sub(&pow_rem(&a, &e, g, p), &[1], p);
        let u = gcd(g, &b, p);
        let du = deg(&u).unwrap_or(0);
        if du > 0 && du < n {
            equal_degree(&u, d, p, rng, out);
            equal_degree(&div_rem(g, &u, p).0, d, p, rng, out);
            return;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn factors_multiply_back_and_are_irreducible() {
        let p = 7;
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        // (x^2+1)(x+3)(x+5)(x^3+x+1) mod 7, monic and squarefree.
        let f = [vec![1, 0, 1], vec![3, 1], vec![5, 1], vec![1, 1, 0, 1]]
            .iter()
            .fold(vec![1u64], |acc, g| mul(&acc, g, p));
        let fs = factor_squarefree(&f, p, &mut rng);
        assert_eq!(fs.len(), 4);
        let prod = fs.iter().fold(vec![1u64], |acc, g| mul(&acc, g, p));
        assert_eq!(prod, f);
        for g in &fs {
            // Irreducible of degree <= 3 iff no root in F_7.
            let d = deg(g).unwrap();
            assert!(d == 1 || (0..p).all(|x| g.iter().rev().fold(0, |a, &c| (a * x + c) % p) != 0));
        }
    }

    #[test]
    fn bezout_identity() {
        let p = 11;
        let a = vec![1, 0, 1];
        let b = vec![3, 1];
        let (s, t) = bezout(&a, &b, p);
        assert_eq!(add(&mul(&s, &a, p), &mul(&t, &b, p), p), vec![1]);
        assert_eq!(derivative(&[1, 2, 3], p), vec![2, 6]);
    }
}
