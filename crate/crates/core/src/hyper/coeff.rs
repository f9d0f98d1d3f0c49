//! Coefficient engine: exact rational coefficients by the ratio recurrence,
//! p-adic valuations of Pochhammer symbols by counting, and coefficient
//! streams reduced modulo powers of p.

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};

use super::HypergeometricParameters;
use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::padic::PAdicNumber;

/// `c_{k+1} / c_k = Π(α_i + k) / (Π(β_j + k) (k + 1))`.
pub fn coefficient_ratio(params: &HypergeometricParameters, k: u64) -> Rational {
    let kq = Rational::from_integer(BigInt::from(k));
    let mut num = Rational::one();
    for a in params.tops() {
        num *= a + &kq;
    }
    let mut den = Rational::from_integer(BigInt::from(k + 1));
    for b in params.bottoms() {
        den *= b + &kq;
    }
    num / den
}

/// Exact coefficients `c_0 .. c_{len-1}`.
pub fn coefficients(params: &HypergeometricParameters, len: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(len);
    extend_coefficients(params, &mut out, len);
    out
}

/// Extends a prefix of the coefficient sequence to `len` terms.
pub fn extend_coefficients(params: &HypergeometricParameters, out: &mut Vec<Rational>, len: usize) {
    if out.is_empty() && len > 0 {
        out.push(Rational::one());
    }
    while out.len() < len {
        let k = out.len() as u64 - 1;
        let last = out.last().unwrap();
        let next = if last.is_zero() || params.terminating_degree().is_some_and(|t| k >= t) {
            Rational::zero()
        } else {
            last * coefficient_ratio(params, k)
        };
        out.push(next);
    }
}

pub fn coefficient(params: &HypergeometricParameters, k: u64) -> Rational {
    coefficients(params, k as usize + 1).pop().unwrap()
}

/// `val_p((γ)_k)`, `None` meaning +∞ (the product vanishes).
///
/// For p-integral γ this counts, for every m ≥ 1, the indices `j < k` with
/// `p^m | γ + j`, which is `ceil((k - r_m) / p^m)` when `r_m < k`, where
/// `r_m ≡ -γ (mod p^m)`.
pub fn pochhammer_valuation(gamma: &Rational, k: u64, p: u64) -> Option<i64> {
    if k == 0 {
        return Some(0);
    }
    if arith::nonpositive_integer(gamma).is_some_and(|t| t < k) {
        return None;
    }
    let v = arith::val_p(gamma, p)?;
    if v < 0 {
        return Some(k as i64 * v);
    }
    let mut total = 0i64;
    let kb = BigUint::from(k);
    for m in 1.. {
        let r = arith::residue_mod_power(gamma, p, m).unwrap();
        if r >= kb {
            break;
        }
        let pm = BigUint::from(p).pow(m);
        let count = (&kb - &r + &pm - 1u32) / &pm;
        total += count.to_i64().unwrap();
    }
    Some(total)
}

/// Fast repeated evaluation of `val_p((γ)_k)` for one γ and p.
#[derive(Clone, Debug)]
pub struct PochhammerCounter {
    p: u64,
    kind: CounterKind,
}

#[derive(Clone, Debug)]
enum CounterKind {
    /// γ not p-integral: valuation k·v.
    Negative(i64),
    /// γ = -t with t ≥ 0.
    NonPositive(u64),
    /// digits of -γ, eventually periodic.
    Integral(arith::PAdicDigitExpansion),
}

impl PochhammerCounter {
    pub fn new(gamma: &Rational, p: u64) -> Self {
        let kind = if let Some(t) = arith::nonpositive_integer(gamma) {
            CounterKind::NonPositive(t)
        } else {
            match arith::val_p(gamma, p) {
                Some(v) if v < 0 => CounterKind::Negative(v),
                _ => CounterKind::Integral(arith::digit_expansion(&-gamma, p).unwrap()),
            }
        };
        PochhammerCounter { p, kind }
    }

    pub fn valuation(&self, k: u64) -> Option<i64> {
        if k == 0 {
            return Some(0);
        }
        match &self.kind {
            CounterKind::Negative(v) => Some(k as i64 * v),
            CounterKind::NonPositive(t) if *t < k => None,
            CounterKind::NonPositive(t) => Some(count_multiples(k, self.p, |_| *t as u128, true)),
            CounterKind::Integral(e) => {
                Some(count_multiples(k, self.p, |i| e.digit(i) as u128, false))
            }
        }
    }

    pub fn is_p_integral(&self) -> bool {
        !matches!(self.kind, CounterKind::Negative(_))
    }
}

/// Σ_m ceil((k - r_m)/p^m) over m with r_m < k, r_m built from digits.
fn count_multiples(k: u64, p: u64, digit: impl Fn(usize) -> u128, whole: bool) -> i64 {
    let k = k as u128;
    let p = p as u128;
    let mut total = 0i64;
    let mut r: u128 = 0;
    let mut pm: u128 = 1;
    for m in 0.. {
        if whole {
            // digit() returns -γ itself
            let t = digit(0);
            r = t % (pm * p);
        } else {
            r += digit(m) * pm;
        }
        pm *= p;
        if r >= k {
            break;
        }
        total += ((k - r + pm - 1) / pm) as i64;
    }
    total
}

/// `val_p(c_k)` from Pochhammer counts; `None` when `c_k = 0`.
pub fn coefficient_valuation(params: &HypergeometricParameters, k: u64, p: u64) -> Option<i64> {
    CoefficientValuations::new(params, p).at(k)
}

/// Precomputed counters for the whole parameter list at one prime.
#[derive(Clone, Debug)]
pub struct CoefficientValuations {
    p: u64,
    tops: Vec<PochhammerCounter>,
    bottoms: Vec<PochhammerCounter>,
}

impl CoefficientValuations {
    pub fn new(params: &HypergeometricParameters, p: u64) -> Self {
        CoefficientValuations {
            p,
            tops: params
                .tops()
                .iter()
                .map(|a| PochhammerCounter::new(a, p))
                .collect(),
            bottoms: params
                .bottoms()
                .iter()
                .map(|b| PochhammerCounter::new(b, p))
                .collect(),
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn at(&self, k: u64) -> Option<i64> {
        let mut v = 0i64;
        for c in &self.tops {
            v += c.valuation(k)?;
        }
        for c in &self.bottoms {
            // validation guarantees a top vanished first
            v -= c.valuation(k)?;
        }
        Some(v - arith::factorial_valuation(k, self.p) as i64)
    }
}

/// A rational `num/den` prepared for evaluating `val_p` and units of
/// `num/den + k` repeatedly.
#[derive(Clone, Debug)]
struct ShiftedFactor {
    num: BigInt,
    den: BigInt,
    small: Option<(i128, i128)>,
}

impl ShiftedFactor {
    fn new(q: &Rational) -> Self {
        let small = match (q.numer().to_i64(), q.denom().to_i64()) {
            (Some(n), Some(d)) => Some((n as i128, d as i128)),
            _ => None,
        };
        ShiftedFactor {
            num: q.numer().clone(),
            den: q.denom().clone(),
            small,
        }
    }

    /// Numerator of `q + k` over the fixed denominator.
    fn shifted_num(&self, k: u64) -> BigInt {
        match self.small {
            Some((n, d)) => match (k as i128).checked_mul(d).and_then(|x| x.checked_add(n)) {
                Some(v) => BigInt::from(v),
                None => &self.num + BigInt::from(k) * &self.den,
            },
            None => &self.num + BigInt::from(k) * &self.den,
        }
    }

    /// `(val_p, unit mod p)` of `q + k` for small moduli, `None` if zero.
    fn mod_p(&self, k: u64, p: u64) -> Option<(i64, u64)> {
        if let Some((n, d)) = self.small {
            if let Some(v) = (k as i128).checked_mul(d).and_then(|x| x.checked_add(n)) {
                let (vn, un) = split_i128(v, p)?;
                let (vd, ud) = split_i128(d, p).unwrap();
                return Some((
                    vn - vd,
                    crate::fp::mul_mod(un, crate::fp::inv_mod(ud, p), p),
                ));
            }
        }
        let (vn, un) = split_big(&self.shifted_num(k), p, &BigUint::from(p))?;
        let (vd, ud) = split_big(&self.den, p, &BigUint::from(p)).unwrap();
        let (un, ud) = (un.to_u64().unwrap(), ud.to_u64().unwrap());
        Some((
            vn - vd,
            crate::fp::mul_mod(un, crate::fp::inv_mod(ud, p), p),
        ))
    }

    /// `(val_p, unit mod modulus)` of `q + k`, `None` if zero.
    fn mod_power(&self, k: u64, p: u64, modulus: &BigUint) -> Option<(i64, BigUint)> {
        let (vn, un) = split_big(&self.shifted_num(k), p, modulus)?;
        let (vd, ud) = split_big(&self.den, p, modulus).unwrap();
        let m = BigInt::from(modulus.clone());
        let inv = arith::mod_inverse(&BigInt::from(ud), &m).expect("unit");
        let u = (BigInt::from(un) * inv).mod_floor(&m);
        Some((vn - vd, u.to_biguint().unwrap()))
    }
}

fn split_i128(mut v: i128, p: u64) -> Option<(i64, u64)> {
    if v == 0 {
        return None;
    }
    let p = p as i128;
    let mut e = 0;
    while v % p == 0 {
        v /= p;
        e += 1;
    }
    Some((e, v.rem_euclid(p) as u64))
}

fn split_big(v: &BigInt, p: u64, modulus: &BigUint) -> Option<(i64, BigUint)> {
    let e = arith::val_p_int(v, p)?;
    let pe = BigInt::from(p).pow(e as u32);
    let u = (v / pe).mod_floor(&BigInt::from(modulus.clone()));
    Some((e, u.to_biguint().unwrap()))
}

fn factors(params: &HypergeometricParameters) -> (Vec<ShiftedFactor>, Vec<ShiftedFactor>) {
    let tops = params.tops().iter().map(ShiftedFactor::new).collect();
    let mut bottoms: Vec<ShiftedFactor> = params.bottoms().iter().map(ShiftedFactor::new).collect();
    bottoms.push(ShiftedFactor::new(&Rational::one()));
    (tops, bottoms)
}

/// Coefficients `c_k mod p` for `k < len`; errors if some `c_k` in range
/// is not p-integral.
pub fn coefficients_mod_p(
    params: &HypergeometricParameters,
    p: u64,
    len: usize,
) -> Result<Vec<u64>> {
    let raw = coefficients_val_unit_mod_p(params, p, len);
    raw.into_iter()
        .map(|c| match c {
            None => Ok(0),
            Some((v, _)) if v > 0 => Ok(0),
            Some((0, u)) => Ok(u),
            Some(_) => Err(Error::BadReduction { p }),
        })
        .collect()
}

/// `(val_p(c_k), unit mod p)` for `k < len`, `None` where `c_k = 0`.
pub fn coefficients_val_unit_mod_p(
    params: &HypergeometricParameters,
    p: u64,
    len: usize,
) -> Vec<Option<(i64, u64)>> {
    let (tops, bottoms) = factors(params);
    let mut out = Vec::with_capacity(len);
    let mut state = Some((0i64, 1u64));
    for k in 0..len as u64 {
        out.push(state);
        let Some((mut v, mut u)) = state else {
            continue;
        };
        let mut zero = false;
        for f in &tops {
            match f.mod_p(k, p) {
                Some((fv, fu)) => {
                    v += fv;
                    u = crate::fp::mul_mod(u, fu, p);
                }
                None => zero = true,
            }
        }
        if zero {
            state = None;
            continue;
        }
        for f in &bottoms {
            let (fv, fu) = f.mod_p(k, p).expect("validated parameters have no poles");
            v -= fv;
            u = crate::fp::mul_mod(u, crate::fp::inv_mod(fu, p), p);
        }
        state = Some((v, u));
    }
    out
}

/// Exact p-adic coefficients with `prec` significant digits each.
pub fn coefficients_padic(
    params: &HypergeometricParameters,
    p: u64,
    prec: u32,
    len: usize,
) -> Vec<PAdicNumber> {
    let (tops, bottoms) = factors(params);
    let modulus = BigUint::from(p).pow(prec);
    let mut out = Vec::with_capacity(len);
    let mut state: Option<(i64, BigUint)> = Some((0, BigUint::one()));
    for k in 0..len as u64 {
        out.push(match &state {
            Some((v, u)) => PAdicNumber::from_parts(p, *v, u.clone(), prec),
            None => PAdicNumber::exact_zero(p),
        });
        let Some((mut v, mut u)) = state.take() else {
            continue;
        };
        let mut zero = false;
        for f in &tops {
            match f.mod_power(k, p, &modulus) {
                Some((fv, fu)) => {
                    v += fv;
                    u = (u * fu) % &modulus;
                }
                None => zero = true,
            }
        }
        if zero {
            continue;
        }
        let mut den = BigUint::one();
        for f in &bottoms {
            let (fv, fu) = f
                .mod_power(k, p, &modulus)
                .expect("validated parameters have no poles");
            v -= fv;
            den = (den * fu) % &modulus;
        }
        let m = BigInt::from(modulus.clone());
        let inv = arith::mod_inverse(&BigInt::from(den), &m).unwrap();
        let u = (BigInt::from(u) * inv).mod_floor(&m).to_biguint().unwrap();
        state = Some((v, u));
    }
    out
}

/// Reduction of an exact coefficient list modulo p (reference route).
pub fn reduce_exact_mod_p(coeffs: &[Rational], p: u64) -> Result<Vec<u64>> {
    coeffs
        .iter()
        .map(|c| {
            if c.is_zero() {
                return Ok(0);
            }
            arith::reduce_mod_power(c, p, 1)
                .map(|r| r.to_u64().unwrap())
                .ok_or(Error::BadReduction { p })
        })
        .collect()
}
