use num_bigint::{BigInt, BigUint};
use num_traits::{One, ToPrimitive};

use super::{certified_tail_cutoff, drifted_valuation, Extended, Split};
use crate::arith::Rational;
use crate::error::{Error, Result};
use crate::hyper::{coefficients_padic, HypergeometricParameters};
use crate::padic::PAdicNumber;

/// Extra digits carried while summing.
pub const EVAL_GUARD: u32 = 5;

/// `F(a)` for `a` inside the disk of convergence, to absolute precision
/// `prec + min_k (val_p(c_k a^k))`.
pub fn evaluate(
    params: &HypergeometricParameters,
    a: &PAdicNumber,
    prec: u32,
) -> Result<PAdicNumber> {
    evaluate_with_guard(params, a, prec, EVAL_GUARD)
}

pub fn evaluate_rational(
    params: &HypergeometricParameters,
    p: u64,
    a: &Rational,
    prec: u32,
) -> Result<PAdicNumber> {
    let a = PAdicNumber::from_rational(a, p, prec + EVAL_GUARD)?;
    evaluate(params, &a, prec)
}

pub fn evaluate_with_guard(
    params: &HypergeometricParameters,
    a: &PAdicNumber,
    prec: u32,
    guard: u32,
) -> Result<PAdicNumber> {
    let p = a.prime();
    if prec == 0 {
        return Err(Error::Precision(
            "relative precision must be positive".into(),
        ));
    }
    let one = PAdicNumber::from_parts(p, 0, BigUint::one(), prec);
    let Some(va) = a.valuation_lower_bound() else {
        return Ok(one);
    };
    let nu = Rational::from_integer(BigInt::from(-va));
    let lambda = if params.is_terminating() {
        None
    } else {
        Some(Split::new(params, p).lambda)
    };
    if let Some(l) = &lambda {
        if nu >= *l {
            return Err(Error::Divergence {
                radius: l.to_string(),
            });
        }
    }
    let dv = drifted_valuation(params, p, &nu)?;
    let Extended::Finite(v) = dv.value else {
        return Err(Error::Divergence {
            radius: format!("{:?}", lambda),
        });
    };
    let v = v.to_integer().to_i64().expect("integral valuation");
    let out_abs = prec as i64 + v;
    let nu_t = match &lambda {
        Some(l) => (&nu + l) / Rational::from_integer(BigInt::from(2)),
        None => &nu + Rational::one(),
    };
    let k = certified_tail_cutoff(
        params,
        p,
        &nu_t,
        &Rational::from_integer(BigInt::from(out_abs)),
    )?;
    let work = prec + guard;
    let coeffs = coefficients_padic(params, p, work, k as usize);
    let mut sum = PAdicNumber::exact_zero(p);
    let mut power = PAdicNumber::from_parts(p, 0, BigUint::one(), work);
    for c in &coeffs {
        sum = sum.add(&c.mul(&power)?)?;
        power = power.mul(a)?;
    }
    Ok(sum.cap(out_abs))
}
