use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{tropical, Extended, Split};
use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::hyper::{CoefficientValuations, HypergeometricParameters};
use crate::parallel::Exec;

/// Indices scanned per batch in the certified scan.
const CHUNK: u64 = 4096;
/// Give up beyond this many scanned coefficients.
const SCAN_LIMIT: u64 = 1 << 27;
/// Longer scans go through the digit graph instead.
const GRAPH_FROM: u64 = 1 << 14;

/// `min_k (val_p(c_k) - ν k)` together with the least index attaining it.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DriftedValuation {
    pub value: Extended,
    pub position: Option<u64>,
    pub nu: Rational,
    pub p: u64,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct DriftJson {
    pub p: u64,
    pub nu: String,
    pub value: String,
    pub position: Option<u64>,
}

impl DriftedValuation {
    pub fn to_json(&self) -> DriftJson {
        DriftJson {
            p: self.p,
            nu: self.nu.to_string(),
            value: self.value.to_string(),
            position: self.position,
        }
    }

    /// `"v"`, or `"(v, k)"` with the position.
    pub fn render(&self, with_position: bool) -> String {
        match (with_position, self.position) {
            (true, Some(k)) => format!("({}, {})", self.value, k),
            _ => self.value.to_string(),
        }
    }
}

impl fmt::Display for DriftedValuation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.render(false))
    }
}

pub fn drifted_valuation(
    params: &HypergeometricParameters,
    p: u64,
    nu: &Rational,
) -> Result<DriftedValuation> {
    drifted_valuation_with(params, p, nu, Exec::default())
}

pub fn drifted_valuation_with(
    params: &HypergeometricParameters,
    p: u64,
    nu: &Rational,
    exec: Exec,
) -> Result<DriftedValuation> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    let done = |value, position| DriftedValuation {
        value,
        position,
        nu: nu.clone(),
        p,
    };
    if params.is_terminating() {
        let (v, k) = scan(params, p, nu, exec)?;
        return Ok(done(Extended::Finite(v), Some(k)));
    }
    let lambda = Split::new(params, p).lambda;
    if *nu > lambda {
        Ok(done(Extended::NegInf, None))
    } else if *nu < lambda {
        let (v, k) = scan(params, p, nu, exec)?;
        Ok(done(Extended::Finite(v), Some(k)))
    } else {
        let b = tropical::boundary(params, p)?;
        Ok(match b {
            Some((v, k)) => done(Extended::Finite(v), Some(k)),
            None => done(Extended::NegInf, None),
        })
    }
}

/// Running minimum over `k`, stopping once the certified cutoff for the
/// current minimum is reached.
fn scan(
    params: &HypergeometricParameters,
    p: u64,
    nu: &Rational,
    exec: Exec,
) -> Result<(Rational, u64)> {
    let vals = CoefficientValuations::new(params, p);
    let mut best = (Rational::zero(), 0u64);
    let mut limit = certified_tail_cutoff(params, p, nu, &best.0)?;
    if limit > GRAPH_FROM && !params.is_terminating() {
        let delta = Split::new(params, p).lambda - nu;
        if let Some(found) = tropical::interior(params, p, &delta, limit)? {
            return Ok(found);
        }
    }
    let mut k = 1u64;
    while k < limit {
        if k > SCAN_LIMIT {
            return Err(Error::NonTermination {
                what: "certified valuation scan".into(),
                limit: SCAN_LIMIT as usize,
            });
        }
        let end = (k + CHUNK).min(limit);
        let batch = exec.map_range(k..end, |j| vals.at(j));
        let mut improved = false;
        for (i, v) in batch.into_iter().enumerate() {
            let Some(v) = v else { continue };
            let j = k + i as u64;
            let d = Rational::from_integer(BigInt::from(v))
                - nu * Rational::from_integer(BigInt::from(j));
            if d < best.0 {
                best = (d, j);
                improved = true;
            }
        }
        k = end;
        if improved {
            limit = limit.min(certified_tail_cutoff(params, p, nu, &best.0)?);
        }
    }
    Ok(best)
}

/// Smallest `K` such that every `k ≥ K` satisfies
/// `k(λ - ν) - C₁(⌈log_p(k+1)⌉ + 1) - C₀ > θ₀`, a lower bound for
/// `val_p(c_k) - νk`. Polynomials give `degree + 1`.
pub fn certified_tail_cutoff(
    params: &HypergeometricParameters,
    p: u64,
    nu: &Rational,
    theta0: &Rational,
) -> Result<u64> {
    if let Some(t) = params.terminating_degree() {
        return Ok(t + 1);
    }
    let split = Split::new(params, p);
    let delta = &split.lambda - nu;
    if !delta.is_positive() {
        return Err(Error::InvalidArgument(format!(
            "drift {nu} is not below the log radius {}",
            split.lambda
        )));
    }
    let n1 = split.integral_tops.len() as i64;
    let mut c1 = n1;
    let mut c0 = n1 + 1;
    for b in split
        .integral_bottoms
        .iter()
        .chain(std::iter::once(&Rational::one()))
    {
        let e = arith::digit_expansion(&-b, p).expect("p-integral");
        c1 += e.period.len() as i64;
        c0 += e.preperiod.len() as i64;
    }
    let big = |n: i64| Rational::from_integer(BigInt::from(n));
    let pb = BigInt::from(p);
    let mut last_fail: Option<BigInt> = None;
    for len in 0u32.. {
        let (lo, hi) = if len == 0 {
            (BigInt::zero(), BigInt::zero())
        } else {
            (pb.pow(len - 1), pb.pow(len) - 1)
        };
        // k fails iff k·δ ≤ θ₀ + C₁(len+1) + C₀
        let rhs = theta0 + big(c1 * (len as i64 + 1) + c0);
        let kmax = (rhs / &delta).floor().to_integer();
        if kmax >= lo {
            last_fail = Some(kmax.min(hi));
        } else if len >= 1 {
            // block minima increase from here on once p^(len-1)(p-1)δ > C₁
            let step = Rational::from_integer(lo.clone() * (p - 1)) * &delta;
            if step > big(c1) {
                break;
            }
        }
    }
    let k = match last_fail {
        None => BigInt::zero(),
        Some(k) if k.is_negative() => BigInt::zero(),
        Some(k) => k + 1,
    };
    k.to_u64().ok_or_else(|| Error::NonTermination {
        what: "tail cutoff exceeds u64".into(),
        limit: usize::MAX,
    })
}
