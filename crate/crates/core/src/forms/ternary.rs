//! Rational zeros of ternary diagonal forms by Legendre's descent.

use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::arith::{factorize, legendre, split_square};
use crate::error::Result;
use crate::field::{Q, Z};

/// Square root of `a` modulo an odd prime or 2 (Tonelli–Shanks).
pub(crate) fn sqrt_mod_prime(a: &Z, p: &Z) -> Option<Z> {
    let a = a.mod_floor(p);
    if a.is_zero() || p == &Z::from(2) {
        return Some(a);
    }
    if legendre(&a, p) != 1 {
        return None;
    }
    let one = Z::one();
    let pm1: Z = p - 1u32;
    let mut s = 0u64;
    let mut qq = pm1.clone();
    while qq.is_even() {
        qq >>= 1usize;
        s += 1;
    }
    if s == 1 {
        return Some(a.modpow(&((p + 1u32) >> 2usize), p));
    }
    let mut z = Z::from(2);
    while legendre(&z, p) != -1 {
        z += 1;
    }
    let mut m = s;
    let mut c = z.modpow(&qq, p);
    let mut t = a.modpow(&qq, p);
    let mut r = a.modpow(&((&qq + 1u32) >> 1usize), p);
    while t != one {
        let mut i = 0u64;
        let mut tt = t.clone();
        while tt != one {
            tt = (&tt * &tt) % p;
            i += 1;
            if i == m {
                return None;
            }
        }
        let b = c.modpow(&(Z::one() << (m - i - 1) as usize), p);
        m = i;
        c = (&b * &b) % p;
        t = (t * &c) % p;
        r = (r * b) % p;
    }
    Some(r)
}

/// Square root of `a` modulo a squarefree positive `n`, via CRT.
pub(crate) fn sqrt_mod_squarefree(a: &Z, n: &Z) -> Result<Option<Z>> {
    let mut x = Z::zero();
    let mut modulus = Z::one();
    for p in factorize(n)?.primes() {
        let Some(r) = sqrt_mod_prime(a, p) else {
            return Ok(None);
        };
        // x ≡ x (mod modulus), x ≡ r (mod p)
        let inv = modulus
            .extended_gcd(p)
            .x
            .mod_floor(p);
        let k = ((&r - &x) * inv).mod_floor(p);
        x += k * &modulus;
        modulus *= p;
    }
    Ok(Some(x.mod_floor(&modulus)))
}

const MAX_DEPTH: usize = 4096;

/// Integer solution of `z^2 = a x^2 + b y^2`, not all zero, for squarefree
/// nonzero `a`, `b`; `None` when the equation has none.
pub fn legendre_solve(a: &Z, b: &Z) -> Result<Option<(Z, Z, Z)>> {
    descend(a, b, 0)
}

fn descend(a: &Z, b: &Z, depth: usize) -> Result<Option<(Z, Z, Z)>> {
    if depth > MAX_DEPTH || (a.is_negative() && b.is_negative()) {
        return Ok(None);
    }
    let one = Z::one();
    if a == &one {
        return Ok(Some((one.clone(), Z::zero(), one)));
    }
    if b == &one {
        return Ok(Some((Z::zero(), one.clone(), one)));
    }
    if (a + b).is_zero() {
        return Ok(Some((one.clone(), one, Z::zero())));
    }
    if a.abs() > b.abs() {
        return Ok(descend(b, a, depth + 1)?.map(|(x, y, z)| (y, x, z)));
    }
    let nb = b.abs();
    let Some(mut t) = sqrt_mod_squarefree(a, &nb)? else {
        return Ok(None);
    };
    if &t * 2u32 > nb {
        t -= &nb;
    }
    let c = (&t * &t - a) / b;
    if c.is_zero() {
        // t^2 = a forces a = 1, handled above.
        return Ok(None);
    }
    let (r, k) = split_square(&Q::from_integer(c))?;
    let r = r.numer().clone();
    let Some((x1, y1, z1)) = descend(a, &k, depth + 1)? else {
        return Ok(None);
    };
    // Norms from Q(sqrt a): (z1 + x1 sqrt a)(t + sqrt a).
    let x = &z1 + &t * &x1;
    let z = &z1 * &t + a * &x1;
    let y = &k * y1 * r;
    Ok(Some((x, y, z)))
}

/// A nonzero rational zero of `a1 x^2 + a2 y^2 + a3 z^2`, scaled to a
/// primitive integer vector; `None` when the form is anisotropic.
pub fn ternary_zero(a: &[Q; 3]) -> Result<Option<[Q; 3]>> {
    let mut s = Vec::new();
    let mut r = Vec::new();
    for ai in a {
        let (si, ri) = split_square(ai)?;
        s.push(si);
        r.push(ri);
    }
    // r1 X^2 + r2 Y^2 = -r3 Z^2 with X = s1 x etc.; multiplying by -r3 gives
    // (r3 Z)^2 = A X^2 + B Y^2.
    let big_a = -(&r[0] * &r[2]);
    let big_b = -(&r[1] * &r[2]);
    let (sa, a2) = split_square(&Q::from_integer(big_a))?;
    let (sb, b2) = split_square(&Q::from_integer(big_b))?;
    let Some((x, y, z)) = legendre_solve(&a2, &b2)? else {
        return Ok(None);
    };
    // a2 x^2 = A (x / sa)^2
    let big_x = Q::from_integer(x) / &sa;
    let big_y = Q::from_integer(y) / &sb;
    let big_z = Q::from_integer(z) / Q::from_integer(r[2].clone());
    let v = [big_x / &s[0], big_y / &s[1], big_z / &s[2]];
    Ok(Some(primitive(&v)))
}

/// Rescales a nonzero rational vector to a primitive integer vector whose
/// first nonzero coordinate is positive.
pub fn primitive<const N: usize>(v: &[Q; N]) -> [Q; N] {
    let mut out = v.clone();
    primitive_in_place(&mut out);
    out
}

pub fn primitive_in_place(v: &mut [Q]) {
    let den = v.iter().fold(Z::one(), |l, x| l.lcm(x.denom()));
    let ints: Vec<Z> = v.iter().map(|x| (x * Q::from_integer(den.clone())).to_integer()).collect();
    let g = ints.iter().fold(Z::zero(), |g, x| g.gcd(x));
    if g.is_zero() {
        return;
    }
    let sign = ints.iter().find(|x| !x.is_zero()).map_or(1, |x| if x.is_negative() { -1 } else { 1 });
    for (slot, x) in v.iter_mut().zip(ints) {
        *slot = Q::from_integer(x * sign / &g);
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::field::{q, qf};

    fn check(a: i64, b: i64) -> bool {
        match legendre_solve(&Z::from(a), &Z::from(b)).unwrap() {
            Some((x, y, z)) => {
                assert!(!(x.is_zero() && y.is_zero() && z.is_zero()));
                assert_eq!(&z * &z, Z::from(a) * &x * &x + Z::from(b) * &y * &y, "({a},{b})");
                true
            }
            None => false,
        }
    }

    #[test]
    fn tonelli_shanks_against_search() {
        for p in [3i64, 5, 7, 13, 17, 41, 97, 113] {
            for a in 0..p {
                let has = (0..p).any(|x| (x * x - a) % p == 0);
                match sqrt_mod_prime(&Z::from(a), &Z::from(p)) {
                    Some(r) => {
                        assert!(has);
                        assert_eq!((&r * &r - a).mod_floor(&Z::from(p)), Z::zero());
                    }
                    None => assert!(!has),
                }
            }
        }
    }

    #[test]
    fn descent_solves_known_cases() {
        assert!(check(1, 7));
        assert!(check(2, 7)); // 3^2 = 2*1 + 7*1
        assert!(check(-1, 2));
        assert!(check(5, 11)); // 4^2 = 5*1 + 11*1
        assert!(check(-6, 7)); // 1 = -6 + 7
        assert!(check(13, -3));
        assert!(!check(-1, -1));
        assert!(!check(2, 3));
    }

    #[test]
    fn descent_agrees_with_brute_force() {
        let sqf: Vec<i64> = (-30i64..=30)
            .filter(|&n| n != 0 && (2..=5).all(|p| n % (p * p) != 0))
            .collect();
        for &a in &sqf {
            for &b in &sqf {
                let mut brute = false;
                'outer: for x in 0i64..=25 {
                    for y in 0i64..=25 {
                        let rhs = a * x * x + b * y * y;
                        if (x, y) != (0, 0) && rhs >= 0 {
                            let z = (rhs as f64).sqrt().round() as i64;
                            if z * z == rhs {
                                brute = true;
                                break 'outer;
                            }
                        }
                    }
                }
                let found = check(a, b);
                if brute {
                    assert!(found, "descent missed ({a},{b})");
                }
            }
        }
    }

    #[test]
    fn ternary_zero_rational_coefficients() {
        let v = ternary_zero(&[qf(1, 2), qf(-3, 4), q(10)]).unwrap();
        assert!(v.is_none() || {
            let v = v.unwrap();
            qf(1, 2) * &v[0] * &v[0] - qf(3, 4) * &v[1] * &v[1] + q(10) * &v[2] * &v[2]
                == q(0)
        });
        let v = ternary_zero(&[q(3), q(-12), q(5)]).unwrap().unwrap();
        assert_eq!(q(3) * &v[0] * &v[0] - q(12) * &v[1] * &v[1] + q(5) * &v[2] * &v[2], q(0));
        assert!(ternary_zero(&[q(1), q(1), q(1)]).unwrap().is_none());
    }
}
