//! Exact integer and rational helpers: p-adic valuations, base-p digits,
//! residues, eventually periodic p-adic expansions and prime enumeration.

use std::collections::HashMap;

use num_bigint::{BigInt, BigUint, Sign};
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Exact rational number, always stored reduced with a positive denominator.
pub type Rational = BigRational;

pub fn rat(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Exponent of `p` in a nonzero integer, `None` for zero.
pub fn val_p_int(n: &BigInt, p: u64) -> Option<i64> {
    if n.is_zero() {
        return None;
    }
    let p = BigInt::from(p);
    let mut n = n.clone();
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&p);
        if !r.is_zero() {
            return Some(v);
        }
        n = q;
        v += 1;
    }
}

/// `val_p(q)`; `None` stands for +∞ (q = 0).
pub fn val_p(q: &Rational, p: u64) -> Option<i64> {
    let num = val_p_int(q.numer(), p)?;
    let den = val_p_int(q.denom(), p).unwrap_or(0);
    Some(num - den)
}

/// True when `q` lies in Z_(p), i.e. its denominator is prime to `p`.
pub fn is_p_integral(q: &Rational, p: u64) -> bool {
    !(q.denom() % BigInt::from(p)).is_zero() || q.denom().is_one()
}

/// Sum of the base-`p` digits of `k`.
pub fn digit_sum(mut k: u64, p: u64) -> u64 {
    let mut s = 0;
    while k > 0 {
        s += k % p;
        k /= p;
    }
    s
}

/// Number of base-`p` digits of `k` (zero has none).
pub fn digit_len(mut k: u64, p: u64) -> u32 {
    let mut l = 0;
    while k > 0 {
        k /= p;
        l += 1;
    }
    l
}

/// Legendre: val_p(k!) = (k - s_p(k)) / (p - 1).
pub fn factorial_valuation(k: u64, p: u64) -> u64 {
    (k - digit_sum(k, p)) / (p - 1)
}

/// t - ceil(t) + 1, so the result lies in (0, 1] and integers map to 1.
pub fn fractional_part_unit(t: &Rational) -> Rational {
    t - t.ceil() + Rational::one()
}

pub fn is_integer(t: &Rational) -> bool {
    t.denom().is_one()
}

/// The nonpositive integer `-t` as `t`, if `q` is one.
pub fn nonpositive_integer(q: &Rational) -> Option<u64> {
    if is_integer(q) && !q.is_positive() {
        (-q.numer()).to_u64()
    } else {
        None
    }
}

fn mod_floor_big(a: &BigInt, m: &BigInt) -> BigInt {
    a.mod_floor(m)
}

/// Inverse of `a` modulo `m`, if it exists.
pub fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.mod_floor(m).extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

pub fn mod_inverse_u64(a: u64, m: u64) -> Option<u64> {
    mod_inverse(&BigInt::from(a), &BigInt::from(m)).and_then(|x| x.to_u64())
}

/// Image of a p-integral rational in Z/p^m Z.
pub fn reduce_mod_power(q: &Rational, p: u64, m: u32) -> Option<BigUint> {
    let modulus = BigInt::from(p).pow(m);
    let inv = mod_inverse(q.denom(), &modulus)?;
    let r = mod_floor_big(&(q.numer() * inv), &modulus);
    r.to_biguint()
}

/// The unique r in [0, p^m) with r ≡ -γ (mod p^m). `None` if γ is not p-integral.
pub fn residue_mod_power(gamma: &Rational, p: u64, m: u32) -> Option<BigUint> {
    reduce_mod_power(&-gamma, p, m)
}

/// Eventually periodic base-p expansion of a p-adic integer rational.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicDigitExpansion {
    pub p: u64,
    pub preperiod: Vec<u64>,
    pub period: Vec<u64>,
}

impl PAdicDigitExpansion {
    /// Digit at position `i` (0-based).
    pub fn digit(&self, i: usize) -> u64 {
        if i < self.preperiod.len() {
            self.preperiod[i]
        } else {
            self.period[(i - self.preperiod.len()) % self.period.len()]
        }
    }

    /// The rational this expansion represents.
    pub fn to_rational(&self) -> Rational {
        let p = BigInt::from(self.p);
        let mut head = BigInt::zero();
        let mut pow = BigInt::one();
        for &d in &self.preperiod {
            head += &pow * d;
            pow *= &p;
        }
        let mut block = BigInt::zero();
        let mut bpow = BigInt::one();
        for &d in &self.period {
            block += &bpow * d;
            bpow *= &p;
        }
        // p^mu * block / (1 - p^t)
        Rational::from_integer(head) + Rational::new(pow * block, BigInt::one() - bpow)
    }
}

/// Base-p digits of `x` (denominator prime to p), split into minimal
/// preperiod and period.
pub fn digit_expansion(x: &Rational, p: u64) -> Option<PAdicDigitExpansion> {
    if !is_p_integral(x, p) {
        return None;
    }
    let pb = BigInt::from(p);
    let den = x.denom().clone();
    let inv = mod_inverse(&den, &pb)?;
    // state: numerator of the remaining value over the fixed denominator
    let mut num = x.numer().clone();
    let mut seen: HashMap<BigInt, usize> = HashMap::new();
    let mut digits = Vec::new();
    loop {
        if let Some(&start) = seen.get(&num) {
            let period = digits.split_off(start);
            return Some(PAdicDigitExpansion {
                p,
                preperiod: digits,
                period,
            });
        }
        seen.insert(num.clone(), digits.len());
        let d = (&num * &inv).mod_floor(&pb);
        digits.push(d.to_u64().expect("digit below p"));
        num = (num - d * &den) / &pb;
    }
}

/// Least t ≥ 1 with p^t ≡ 1 (mod b).
pub fn multiplicative_order(p: u64, b: u64) -> Option<u64> {
    if b == 1 {
        return Some(1);
    }
    if p.gcd(&b) != 1 {
        return None;
    }
    let mut x = p % b;
    let mut t = 1;
    while x != 1 {
        x = ((x as u128 * p as u128) % b as u128) as u64;
        t += 1;
    }
    Some(t)
}

/// Sieve of Eratosthenes.
pub fn primes_up_to(bound: u64) -> Vec<u64> {
    if bound < 2 {
        return Vec::new();
    }
    let n = bound as usize;
    let mut composite = vec![false; n + 1];
    let mut out = Vec::new();
    for i in 2..=n {
        if !composite[i] {
            out.push(i as u64);
            let mut j = i * i;
            while j <= n {
                composite[j] = true;
                j += i;
            }
        }
    }
    out
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut b: u64, mut e: u64, m: u64) -> u64 {
    let mut r = 1 % m;
    b %= m;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, m);
        }
        b = mul_mod(b, b, m);
        e >>= 1;
    }
    r
}

/// Deterministic Miller–Rabin for all u64.
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for q in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % q == 0 {
            return n == q;
        }
    }
    let mut d = n - 1;
    let mut s = 0;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// The first `count` primes congruent to `a` modulo `m`, ascending.
///
/// A class with gcd(a, m) > 1 holds at most one prime; the result is then
/// shorter than `count` when that prime is absent.
pub fn primes_in_class(a: u64, m: u64, count: usize) -> Vec<u64> {
    primes_in_class_above(a, m, 0, count)
}

/// Like [`primes_in_class`] but only primes strictly greater than `above`.
pub fn primes_in_class_above(a: u64, m: u64, above: u64, count: usize) -> Vec<u64> {
    assert!(m >= 1);
    let a = a % m;
    if a.gcd(&m) != 1 {
        let g = a.gcd(&m);
        return primes_up_to(g)
            .into_iter()
            .filter(|&q| q > above && q % m == a && m % q == 0)
            .take(count)
            .collect();
    }
    let mut out = Vec::with_capacity(count);
    let start = if above < a {
        a
    } else {
        above + 1 + (m + a - (above + 1) % m) % m
    };
    let mut n = start;
    while out.len() < count {
        if is_prime(n) {
            out.push(n);
        }
        n += m;
    }
    out
}

/// Parses "a/b" or "a" with an optional sign.
pub fn parse_rational(text: &str) -> Result<Rational> {
    let t = text.trim();
    let bad = || Error::Parse(format!("not a rational number: {text:?}"));
    let (n, d) = match t.split_once('/') {
        Some((n, d)) => (n.trim(), d.trim()),
        None => (t, "1"),
    };
    let n: BigInt = n.parse().map_err(|_| bad())?;
    let d: BigInt = d.parse().map_err(|_| bad())?;
    if d.is_zero() {
        return Err(bad());
    }
    Ok(Rational::new(n, d))
}

/// Comma separated list of rationals; the empty string is the empty list.
pub fn parse_rational_list(text: &str) -> Result<Vec<Rational>> {
    if text.trim().is_empty() {
        return Ok(Vec::new());
    }
    text.split(',').map(parse_rational).collect()
}

pub fn lcm_of_denominators<'a>(qs: impl IntoIterator<Item = &'a Rational>) -> BigInt {
    qs.into_iter()
        .fold(BigInt::one(), |acc, q| acc.lcm(q.denom()))
}

pub fn big_to_u64(n: &BigInt) -> Option<u64> {
    if n.sign() == Sign::Minus {
        None
    } else {
        n.to_u64()
    }
}
