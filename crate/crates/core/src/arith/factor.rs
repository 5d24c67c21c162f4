//! Integer factorization sized for desk-scale inputs: trial division, then
//! Miller-Rabin plus Pollard-Brent on whatever cofactor remains.


use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{domain, Error, Result};
use crate::field::Z;

const TRIAL_LIMIT: u64 = 4096;
const RHO_MAX_STEPS: u64 = 1 << 24;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FactorBudget {
    /// Largest prime factor the factorizer is allowed to certify.
    pub max_prime: Z,
}

impl Default for FactorBudget {
    fn default() -> Self {
        FactorBudget {
            max_prime: Z::one() << 40usize,
        }
    }
}

/// `n = sign * prod(p^e)`, primes ascending and distinct.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Factorization {
    pub sign: i8,
    pub factors: Vec<(Z, u32)>,
}

impl Factorization {
    pub fn primes(&self) -> impl Iterator<Item = &Z> {
        self.factors.iter().map(|(p, _)| p)
    }

    pub fn product(&self) -> Z {
        let mut acc = Z::from(self.sign);
        for (p, e) in &self.factors {
            acc *= num_traits::pow(p.clone(), *e as usize);
        }
        acc
    }
}

pub fn factorize(n: &Z) -> Result<Factorization> {
    factorize_with(n, &FactorBudget::default())
}

pub fn factorize_with(n: &Z, budget: &FactorBudget) -> Result<Factorization> {
    if n.is_zero() {
        return Err(domain!("cannot factorize 0"));
    }
    let sign = if n.is_negative() { -1 } else { 1 };
    let mut m = n.abs();
    let mut found: Vec<Z> = Vec::new();

    let mut d = 2u64;
    while d <= TRIAL_LIMIT {
        let dz = Z::from(d);
        if &dz * &dz > m {
            break;
        }
        while (&m % &dz).is_zero() {
            m /= &dz;
            found.push(dz.clone());
        }
        d += if d == 2 { 1 } else { 2 };
    }

    let mut stack = vec![m];
    while let Some(m) = stack.pop() {
        if m.is_one() {
            continue;
        }
        if is_prime(&m) {
            if m > budget.max_prime {
                return Err(Error::FactorizationBudget(format!(
                    "prime factor {m} exceeds bound {}",
                    budget.max_prime
                )));
            }
            found.push(m);
            continue;
        }
        // Composite with no factor below TRIAL_LIMIT: the smallest factor is
        // at most sqrt(m), and at least one factor is within budget only if
        // rho finds it in reasonable time.
        let f = pollard_brent(&m).ok_or_else(|| {
            Error::FactorizationBudget(format!("could not split composite {m}"))
        })?;
        let g = &m / &f;
        stack.push(f);
        stack.push(g);
    }

    found.sort();
    let mut factors: Vec<(Z, u32)> = Vec::new();
    for p in found {
        match factors.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => factors.push((p, 1)),
        }
    }
    Ok(Factorization { sign, factors })
}

const MR_BASES: [u64; 13] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41];

/// Miller-Rabin over the first 13 prime bases: deterministic below 3.3e24,
/// a strong probable-prime test above that.
pub fn is_prime(n: &Z) -> bool {
    if n < &Z::from(2) {
        return false;
    }
    for &b in &MR_BASES {
        let bz = Z::from(b);
        if n == &bz {
            return true;
        }
        if (n % &bz).is_zero() {
            return false;
        }
    }
    if let Some(small) = n.to_u64() {
        return is_prime_u64(small);
    }
    let n_minus_1 = n - 1u32;
    let s = n_minus_1.trailing_zeros().unwrap_or(0);
    let d = &n_minus_1 >> s;
    'bases: for &b in &MR_BASES {
        let mut x = Z::from(b).modpow(&d, n);
        if x.is_one() || x == n_minus_1 {
            continue;
        }
        for _ in 1..s {
            x = (&x * &x) % n;
            if x == n_minus_1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn mulmod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn powmod(mut a: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1u64 % m;
    a %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mulmod(r, a, m);
        }
        a = mulmod(a, a, m);
        e >>= 1;
    }
    r
}

fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for &p in &MR_BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let s = (n - 1).trailing_zeros();
    let d = (n - 1) >> s;
    'bases: for &b in &MR_BASES {
        let mut x = powmod(b, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mulmod(x, x, n);
            if x == n - 1 {
                continue 'bases;
            }
        }
        return false;
    }
    true
}

fn pollard_brent(n: &Z) -> Option<Z> {
    if n.is_even() {
        return Some(Z::from(2));
    }
    if let Some(small) = n.to_u64() {
        return pollard_brent_u64(small).map(Z::from);
    }
    for c in 1u64..20 {
        let c = Z::from(c);
        let f = |x: &Z| (x * x + &c) % n;
        let mut y = Z::from(2);
        let mut r: u64 = 1;
        let mut q = Z::one();
        let mut g = Z::one();
        let mut x = y.clone();
        let mut ys = y.clone();
        let mut steps = 0u64;
        while g.is_one() {
            x = y.clone();
            for _ in 0..r {
                y = f(&y);
            }
            let mut k = 0;
            while k < r && g.is_one() {
                ys = y.clone();
                for _ in 0..std::cmp::min(128, r - k) {
                    y = f(&y);
                    q = (q * (&x - &y).abs()) % n;
                }
                g = q.gcd(n);
                k += 128;
            }
            r *= 2;
            steps += r;
            if steps > RHO_MAX_STEPS {
                return None;
            }
        }
        if &g == n {
            loop {
                ys = f(&ys);
                g = (&x - &ys).abs().gcd(n);
                if !g.is_one() {
                    break;
                }
            }
        }
        if &g != n {
            return Some(g);
        }
    }
    None
}

fn pollard_brent_u64(n: u64) -> Option<u64> {
    if n.is_multiple_of(2) {
        return Some(2);
    }
    let gcd = |mut a: u64, mut b: u64| {
        while b != 0 {
            let t = a % b;
            a = b;
            b = t;
        }
        a
    };
    for c in 1u64..50 {
        let f = |x: u64| (mulmod(x, x, n) + c) % n;
        let (mut x, mut y, mut ys) = (2u64, 2u64, 2u64);
        let (mut r, mut q, mut g) = (1u64, 1u64, 1u64);
        let mut steps = 0u64;
        while g == 1 {
            x = y;
            for _ in 0..r {
                y = f(y);
            }
            let mut k = 0;
            while k < r && g == 1 {
                ys = y;
                for _ in 0..std::cmp::min(128, r - k) {
                    y = f(y);
                    q = mulmod(q, x.abs_diff(y), n);
                }
                g = gcd(q, n);
                k += 128;
            }
            r *= 2;
            steps += r;
            if steps > RHO_MAX_STEPS {
                return None;
            }
        }
        if g == n {
            loop {
                ys = f(ys);
                g = gcd(x.abs_diff(ys), n);
                if g != 1 {
                    break;
                }
            }
        }
        if g != n {
            return Some(g);
        }
    }
    None
}

/// p-adic valuation of a nonzero integer.
pub fn valuation(n: &Z, p: &Z) -> u32 {
    debug_assert!(!n.is_zero());
    let mut v = 0;
    let mut m = n.clone();
    loop {
        let (q, r) = m.div_rem(p);
        if !r.is_zero() {
            return v;
        }
        m = q;
        v += 1;
    }
}
