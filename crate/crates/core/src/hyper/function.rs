use std::fmt;
use std::sync::RwLock;

use serde::{Deserialize, Serialize};

use super::coeff;
use super::HypergeometricParameters;
use crate::analysis;
use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::fp::SeriesFp;
use crate::padic::PAdicNumber;

/// Base ring the series is considered over.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum Context {
    Rational,
    PrimeField(u64),
    PAdic { p: u64, prec: u32 },
}

impl Context {
    pub fn prime(&self) -> Option<u64> {
        match *self {
            Context::Rational => None,
            Context::PrimeField(p) | Context::PAdic { p, .. } => Some(p),
        }
    }
}

impl fmt::Display for Context {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Context::Rational => write!(f, "Rational Field"),
            Context::PrimeField(p) => write!(f, "Finite Field of size {p}"),
            Context::PAdic { p, prec } => {
                write!(f, "{p}-adic Field with capped relative precision {prec}")
            }
        }
    }
}

/// Truncated power series in the function's context.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Series {
    Rational(Vec<Rational>),
    Fp(SeriesFp),
    PAdic(Vec<PAdicNumber>),
}

impl Series {
    pub fn len(&self) -> usize {
        match self {
            Series::Rational(v) => v.len(),
            Series::Fp(s) => s.precision(),
            Series::PAdic(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Coefficients as text, in index order.
    pub fn coefficient_strings(&self) -> Vec<String> {
        match self {
            Series::Rational(v) => v.iter().map(|q| q.to_string()).collect(),
            Series::Fp(s) => s.coeffs().iter().map(|c| c.to_string()).collect(),
            Series::PAdic(v) => v.iter().map(|a| a.render()).collect(),
        }
    }
}

/// A hypergeometric series over a chosen context. Exact coefficients are
/// memoized behind a lock, so shared references can be read concurrently.
#[derive(Debug)]
pub struct HypergeometricFunction {
    params: HypergeometricParameters,
    context: Context,
    cache: RwLock<Vec<Rational>>,
}

impl Clone for HypergeometricFunction {
    fn clone(&self) -> Self {
        let cache = self.cache.read().unwrap().clone();
        HypergeometricFunction {
            params: self.params.clone(),
            context: self.context,
            cache: RwLock::new(cache),
        }
    }
}

impl PartialEq for HypergeometricFunction {
    fn eq(&self, o: &Self) -> bool {
        self.params == o.params && self.context == o.context
    }
}

impl HypergeometricFunction {
    /// Checks that the context is admissible: primes must be prime, and a
    /// prime field needs good reduction.
    pub fn new(params: HypergeometricParameters, context: Context) -> Result<Self> {
        if let Some(p) = context.prime() {
            if !arith::is_prime(p) {
                return Err(Error::NotPrime(p));
            }
        }
        if let Context::PAdic { prec: 0, .. } = context {
            return Err(Error::Precision(
                "relative precision must be positive".into(),
            ));
        }
        if let Context::PrimeField(p) = context {
            if !analysis::has_good_reduction(&params, p) {
                return Err(Error::BadReduction { p });
            }
        }
        Ok(HypergeometricFunction {
            params,
            context,
            cache: RwLock::new(Vec::new()),
        })
    }

    pub fn over_rationals(params: HypergeometricParameters) -> Self {
        Self::new(params, Context::Rational).expect("rational context is always admissible")
    }

    pub fn params(&self) -> &HypergeometricParameters {
        &self.params
    }

    pub fn context(&self) -> Context {
        self.context
    }

    pub fn change_ring(&self, context: Context) -> Result<Self> {
        Self::new(self.params.clone(), context)
    }

    /// Exact `c_k` over Q (memoized).
    pub fn coefficient(&self, k: u64) -> Rational {
        {
            let cache = self.cache.read().unwrap();
            if let Some(c) = cache.get(k as usize) {
                return c.clone();
            }
        }
        let mut cache = self.cache.write().unwrap();
        coeff::extend_coefficients(&self.params, &mut cache, k as usize + 1);
        cache[k as usize].clone()
    }

    fn exact_prefix(&self, len: usize) -> Vec<Rational> {
        if len > 0 {
            self.coefficient(len as u64 - 1);
        }
        self.cache.read().unwrap()[..len].to_vec()
    }

    /// Coefficients `c_0 .. c_{len-1}` mapped into the context.
    pub fn power_series(&self, len: usize) -> Result<Series> {
        Ok(match self.context {
            Context::Rational => Series::Rational(self.exact_prefix(len)),
            Context::PrimeField(p) => Series::Fp(SeriesFp::new(
                p,
                coeff::coefficients_mod_p(&self.params, p, len)?,
            )),
            Context::PAdic { p, prec } => {
                Series::PAdic(coeff::coefficients_padic(&self.params, p, prec, len))
            }
        })
    }
}

impl fmt::Display for HypergeometricFunction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.params)
    }
}

/// `c · x^e · F(x)` over F_p, or zero; the shape of a section.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ScaledMonomialHyper {
    Zero,
    Term {
        constant: u64,
        exponent: u64,
        function: HypergeometricParameters,
    },
}

/// JSON form of [`ScaledMonomialHyper`]; all fields null for zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ScaledJson {
    pub zero: bool,
    pub constant: Option<u64>,
    pub exponent: Option<u64>,
    pub tops: Option<Vec<String>>,
    pub bottoms: Option<Vec<String>>,
}

impl ScaledMonomialHyper {
    pub fn is_zero(&self) -> bool {
        matches!(self, ScaledMonomialHyper::Zero)
    }

    pub fn to_json(&self) -> ScaledJson {
        match self {
            ScaledMonomialHyper::Zero => ScaledJson {
                zero: true,
                constant: None,
                exponent: None,
                tops: None,
                bottoms: None,
            },
            ScaledMonomialHyper::Term {
                constant,
                exponent,
                function,
            } => {
                let j = function.to_json();
                ScaledJson {
                    zero: false,
                    constant: Some(*constant),
                    exponent: Some(*exponent),
                    tops: Some(j.tops),
                    bottoms: Some(j.bottoms),
                }
            }
        }
    }
}

impl fmt::Display for ScaledMonomialHyper {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ScaledMonomialHyper::Zero => write!(f, "0"),
            ScaledMonomialHyper::Term {
                constant,
                exponent,
                function,
            } => {
                let mut parts = Vec::new();
                if *constant != 1 {
                    parts.push(constant.to_string());
                }
                match exponent {
                    0 => {}
                    1 => parts.push("x".into()),
                    e => parts.push(format!("x^{e}")),
                }
                parts.push(function.to_string());
                write!(f, "{}", parts.join(" * "))
            }
        }
    }
}
