#![allow(dead_code)]

use hypergeo::arith::{self, Rational};
use hypergeo::HypergeometricParameters;
use num_bigint::BigInt;
use proptest::prelude::*;
use rand::Rng;

pub fn params(tops: &str, bottoms: &str) -> HypergeometricParameters {
    HypergeometricParameters::parse(tops, bottoms).unwrap()
}

pub fn f() -> HypergeometricParameters {
    params("1/9,4/9,5/9", "1/3,1")
}

pub fn g() -> HypergeometricParameters {
    params("1/2,5/6,1", "5/3,2")
}

pub fn h() -> HypergeometricParameters {
    params("1/5,1/5,1/5,1/5", "1/3,59044/5")
}

/// Hand-picked parameter sets covering every classification layer.
pub fn corpus() -> Vec<HypergeometricParameters> {
    [
        ("1/9,4/9,5/9", "1/3,1"),
        ("1/2,5/6,1", "5/3,2"),
        ("1/5,1/5,1/5,1/5", "1/3,59044/5"),
        ("1/2,1", "2"),
        ("1/2", ""),
        ("1/2,1/2", "1"),
        ("1/4,3/4", "2/3"),
        ("1/2,1/3", "1/4"),
        ("1/12,1/4", "1/2"),
        ("1/12,1/6", "1/3"),
        ("1/3,2/3", "1/2"),
        ("-1", "-2"),
        ("-3,1/2", "2/5"),
        ("1", ""),
        ("1/6,5/6", "1/2"),
        ("1/2,1/2,1/2", "1,1"),
    ]
    .iter()
    .map(|(t, b)| params(t, b))
    .collect()
}

fn q(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// A rational in (0, 2) with denominator at most `den`.
pub fn small_rational(den: i64) -> impl Strategy<Value = Rational> {
    (1..=den).prop_flat_map(|d| (1..2 * d).prop_map(move |n| q(n, d)))
}

/// Parameters with `n = m + 1`, all in (0, 2).
pub fn balanced(max_n: usize, den: i64) -> impl Strategy<Value = HypergeometricParameters> {
    (1..=max_n).prop_flat_map(move |n| {
        (
            proptest::collection::vec(small_rational(den), n),
            proptest::collection::vec(small_rational(den), n - 1),
        )
            .prop_map(|(t, b)| HypergeometricParameters::new(t, b).unwrap())
    })
}

/// Parameters of any shape, all in (0, 2).
pub fn any_params(den: i64) -> impl Strategy<Value = HypergeometricParameters> {
    (
        proptest::collection::vec(small_rational(den), 0..4),
        proptest::collection::vec(small_rational(den), 0..3),
    )
        .prop_map(|(t, b)| HypergeometricParameters::new(t, b).unwrap())
}

pub fn random_rational(rng: &mut impl Rng, den: i64) -> Rational {
    let d = rng.gen_range(1..=den);
    q(rng.gen_range(1..2 * d), d)
}

pub fn random_balanced(rng: &mut impl Rng, max_n: usize, den: i64) -> HypergeometricParameters {
    let n = rng.gen_range(1..=max_n);
    let t = (0..n).map(|_| random_rational(rng, den)).collect();
    let b = (0..n - 1).map(|_| random_rational(rng, den)).collect();
    HypergeometricParameters::new(t, b).unwrap()
}

pub fn random_params(rng: &mut impl Rng, den: i64) -> HypergeometricParameters {
    let t = (0..rng.gen_range(0..4))
        .map(|_| random_rational(rng, den))
        .collect();
    let b = (0..rng.gen_range(0..3))
        .map(|_| random_rational(rng, den))
        .collect();
    HypergeometricParameters::new(t, b).unwrap()
}

/// Unit classes mod d.
pub fn units(d: u64) -> Vec<u64> {
    (1..=d)
        .filter(|a| num_integer::gcd(*a, d) == 1)
        .map(|a| a % d)
        .collect()
}

/// Two primes above 50 in each unit class mod d.
pub fn representatives(d: u64) -> Vec<Vec<u64>> {
    units(d)
        .into_iter()
        .map(|a| arith::primes_in_class_above(a, d, 50, 2))
        .collect()
}

/// `F mod p` as plain residues.
pub fn mod_p(params: &HypergeometricParameters, p: u64, len: usize) -> Vec<u64> {
    hypergeo::hyper::coefficients_mod_p(params, p, len).unwrap()
}

/// `Σ_i a_i x^i · b(x^(p^e))` truncated to `len`, all mod p.
pub fn mul_frobenius(a: &[u64], b: &[u64], step: usize, p: u64, len: usize) -> Vec<u64> {
    let mut out = vec![0u64; len];
    for (j, &bj) in b.iter().enumerate() {
        let base = j * step;
        if base >= len {
            break;
        }
        if bj == 0 {
            continue;
        }
        for (i, &ai) in a.iter().enumerate() {
            if base + i >= len {
                break;
            }
            out[base + i] = (out[base + i] + ai * bj % p) % p;
        }
    }
    out
}
