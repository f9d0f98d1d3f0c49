//! p-adic analysis: radius of convergence, drifted valuations, Newton
//! polygons and evaluation on the disk of convergence.

mod drift;
mod eval;
mod newton;
mod tropical;

use std::fmt;

use num_bigint::BigInt;
use num_traits::{Signed, Zero};
use serde::{Serialize, Serializer};

use crate::arith::{self, Rational};
use crate::hyper::HypergeometricParameters;

pub use drift::{
    certified_tail_cutoff, drifted_valuation, drifted_valuation_with, DriftJson, DriftedValuation,
};
pub use eval::{evaluate, evaluate_rational, evaluate_with_guard, EVAL_GUARD};
pub use newton::{newton_polygon, NewtonJson, NewtonPolygon, Terminal};

/// A rational extended by ±∞.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Extended {
    NegInf,
    Finite(Rational),
    PosInf,
}

impl Extended {
    pub fn finite(&self) -> Option<&Rational> {
        match self {
            Extended::Finite(q) => Some(q),
            _ => None,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Extended::Finite(_))
    }
}

impl fmt::Display for Extended {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Extended::NegInf => write!(f, "-Infinity"),
            Extended::Finite(q) => write!(f, "{q}"),
            Extended::PosInf => write!(f, "+Infinity"),
        }
    }
}

impl Serialize for Extended {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

/// The parameters split by p-integrality, with the log radius of a
/// non-terminating series.
#[derive(Clone, Debug)]
pub(crate) struct Split {
    pub integral_tops: Vec<Rational>,
    pub integral_bottoms: Vec<Rational>,
    /// `n' - m' - 1`, the multiplicity of `val_p(k!)` in `val_p(c_k)`.
    pub factorial_weight: i64,
    pub lambda: Rational,
}

impl Split {
    pub fn new(params: &HypergeometricParameters, p: u64) -> Self {
        let mut lambda = Rational::zero();
        let mut integral_tops = Vec::new();
        let mut integral_bottoms = Vec::new();
        for a in params.tops() {
            match arith::val_p(a, p) {
                Some(v) if v < 0 => lambda += Rational::from_integer(BigInt::from(v)),
                _ => integral_tops.push(a.clone()),
            }
        }
        for b in params.bottoms() {
            match arith::val_p(b, p) {
                Some(v) if v < 0 => lambda -= Rational::from_integer(BigInt::from(v)),
                _ => integral_bottoms.push(b.clone()),
            }
        }
        let factorial_weight = integral_tops.len() as i64 - integral_bottoms.len() as i64 - 1;
        lambda += Rational::new(BigInt::from(factorial_weight), BigInt::from(p - 1));
        Split {
            integral_tops,
            integral_bottoms,
            factorial_weight,
            lambda,
        }
    }
}

/// Base-p logarithm of the p-adic radius of convergence; +∞ for
/// polynomials.
pub fn log_radius(params: &HypergeometricParameters, p: u64) -> Extended {
    if params.is_terminating() {
        return Extended::PosInf;
    }
    Extended::Finite(Split::new(params, p).lambda)
}

/// All coefficients are p-integral, i.e. the drifted valuation at 0 is
/// finite and nonnegative.
pub fn has_good_reduction(params: &HypergeometricParameters, p: u64) -> bool {
    match drifted_valuation(params, p, &Rational::zero()) {
        Ok(dv) => match dv.value {
            Extended::Finite(v) => !v.is_negative(),
            _ => false,
        },
        Err(_) => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};

    fn h() -> HypergeometricParameters {
        HypergeometricParameters::parse("1/5,1/5,1/5,1/5", "1/3,59044/5").unwrap()
    }

    #[test]
    fn radius_examples() {
        assert_eq!(log_radius(&h(), 5), Extended::Finite(rat(-7, 2)));
        assert_eq!(log_radius(&h(), 3), Extended::Finite(int(2)));
        let t = HypergeometricParameters::parse("-1", "-2").unwrap();
        assert_eq!(log_radius(&t, 7), Extended::PosInf);
        let f = HypergeometricParameters::parse("1/9,4/9,5/9", "1/3,1").unwrap();
        assert_eq!(log_radius(&f, 5), Extended::Finite(int(0)));
    }

    #[test]
    fn extended_order() {
        assert!(Extended::NegInf < Extended::Finite(int(-100)));
        assert!(Extended::Finite(int(100)) < Extended::PosInf);
        assert_eq!(Extended::NegInf.to_string(), "-Infinity");
    }

    #[test]
    fn good_reduction() {
        let g = HypergeometricParameters::parse("1/2,5/6,1", "5/3,2").unwrap();
        assert!(!has_good_reduction(&g, 2));
        assert!(has_good_reduction(&g, 3));
        assert!(has_good_reduction(&g, 5));
        assert!(!has_good_reduction(&h(), 23));
        assert!(has_good_reduction(&h(), 11));
    }
}
