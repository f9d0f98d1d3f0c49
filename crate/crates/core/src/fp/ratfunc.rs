use std::fmt;

use super::PolyFp;
use crate::error::{Error, Result};

/// Reduced fraction `num / den` over F_p with monic denominator.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RatFuncFp {
    num: PolyFp,
    den: PolyFp,
}

impl RatFuncFp {
    pub fn new(num: PolyFp, den: PolyFp) -> Result<Self> {
        if den.is_zero() {
            return Err(Error::InvalidArgument("zero denominator".into()));
        }
        let p = num.prime();
        if num.is_zero() {
            return Ok(Self::zero(p));
        }
        let g = num.gcd(&den);
        let num = num.div_exact(&g)?;
        let den = den.div_exact(&g)?;
        let lc = den.leading();
        let inv = super::inv_mod(lc, p);
        Ok(RatFuncFp {
            num: num.scale(inv),
            den: den.scale(inv),
        })
    }

    pub fn zero(p: u64) -> Self {
        RatFuncFp {
            num: PolyFp::zero(p),
            den: PolyFp::one(p),
        }
    }

    pub fn one(p: u64) -> Self {
        Self::from_poly(PolyFp::one(p))
    }

    pub fn from_poly(num: PolyFp) -> Self {
        let p = num.prime();
        RatFuncFp {
            num,
            den: PolyFp::one(p),
        }
    }

    pub fn prime(&self) -> u64 {
        self.num.prime()
    }

    pub fn num(&self) -> &PolyFp {
        &self.num
    }

    pub fn den(&self) -> &PolyFp {
        &self.den
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_zero()
    }

    pub fn add(&self, o: &Self) -> Self {
        let num = self.num.mul(&o.den).add(&o.num.mul(&self.den));
        Self::new(num, self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn sub(&self, o: &Self) -> Self {
        self.add(&o.neg())
    }

    pub fn neg(&self) -> Self {
        RatFuncFp {
            num: self.num.neg(),
            den: self.den.clone(),
        }
    }

    pub fn mul(&self, o: &Self) -> Self {
        Self::new(self.num.mul(&o.num), self.den.mul(&o.den)).expect("nonzero denominators")
    }

    pub fn div(&self, o: &Self) -> Result<Self> {
        if o.is_zero() {
            return Err(Error::InvalidArgument(
                "division by the zero rational function".into(),
            ));
        }
        Self::new(self.num.mul(&o.den), self.den.mul(&o.num))
    }

    pub fn derivative(&self) -> Self {
        let num = self
            .num
            .derivative()
            .mul(&self.den)
            .sub(&self.num.mul(&self.den.derivative()));
        Self::new(num, self.den.mul(&self.den)).expect("nonzero denominator")
    }
}

impl fmt::Display for RatFuncFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let wrap = |q: &PolyFp| {
            if q.terms() > 1 {
                format!("({q})")
            } else {
                q.render()
            }
        };
        if self.den.is_one() {
            write!(f, "{}", self.num)
        } else {
            write!(f, "{}/{}", wrap(&self.num), wrap(&self.den))
        }
    }
}
