//! Capped relative precision arithmetic in Q_p.
//!
//! A nonzero element is `unit * p^valuation + O(p^(valuation + precision))`
//! with `p ∤ unit` and `unit < p^precision`. Zero comes in two flavors: the
//! exact zero, and a zero only known up to `O(p^abs)`; the latter keeps
//! absolute precision honest when sums cancel.

use std::fmt;

use num_bigint::{BigInt, BigUint};
use num_integer::Integer;
use num_traits::{One, ToPrimitive, Zero};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

/// Default relative precision, in p-adic digits.
pub const DEFAULT_PRECISION: u32 = 20;

#[derive(Clone, Debug, PartialEq, Eq)]
enum Repr {
    ExactZero,
    Zero { abs: i64 },
    Unit { val: i64, unit: BigUint, prec: u32 },
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PAdicNumber {
    p: u64,
    repr: Repr,
}

/// JSON shape `{p, valuation, digits, abs_precision}`; `valuation` is null
/// for zeros and `abs_precision` is null for the exact zero.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PAdicJson {
    pub p: u64,
    pub valuation: Option<i64>,
    pub digits: Vec<u64>,
    pub abs_precision: Option<i64>,
}

fn pow_p(p: u64, e: u32) -> BigUint {
    BigUint::from(p).pow(e)
}

/// Splits `n > 0` as `p^v * u` with `p ∤ u`.
fn split_unit(mut n: BigUint, p: u64) -> (i64, BigUint) {
    let pb = BigUint::from(p);
    let mut v = 0;
    loop {
        let (q, r) = n.div_rem(&pb);
        if !r.is_zero() {
            return (v, n);
        }
        n = q;
        v += 1;
    }
}

impl PAdicNumber {
    pub fn exact_zero(p: u64) -> Self {
        PAdicNumber {
            p,
            repr: Repr::ExactZero,
        }
    }

    /// Zero known only modulo `p^abs`.
    pub fn zero_with_precision(p: u64, abs: i64) -> Self {
        PAdicNumber {
            p,
            repr: Repr::Zero { abs },
        }
    }

    /// `p^val * unit + O(p^(val + prec))`. Powers of `p` inside `unit` are
    /// absorbed into the valuation; the absolute precision is kept.
    pub fn from_parts(p: u64, val: i64, unit: BigUint, prec: u32) -> Self {
        let abs = val + prec as i64;
        let unit = unit % pow_p(p, prec);
        if unit.is_zero() {
            return Self::zero_with_precision(p, abs);
        }
        let (shift, unit) = split_unit(unit, p);
        let val = val + shift;
        let prec = (abs - val) as u32;
        PAdicNumber {
            p,
            repr: Repr::Unit { val, unit, prec },
        }
    }

    /// Image of `q` with `prec` significant digits.
    pub fn from_rational(q: &Rational, p: u64, prec: u32) -> Result<Self> {
        if prec == 0 {
            return Err(Error::Precision(
                "relative precision must be positive".into(),
            ));
        }
        let Some(v) = arith::val_p(q, p) else {
            return Ok(Self::exact_zero(p));
        };
        let pv = Rational::from_integer(BigInt::from(p).pow(v.unsigned_abs() as u32));
        let u = if v >= 0 { q / pv } else { q * pv };
        let unit = arith::reduce_mod_power(&u, p, prec).expect("unit part is p-integral");
        Ok(PAdicNumber {
            p,
            repr: Repr::Unit { val: v, unit, prec },
        })
    }

    pub fn from_integer(n: i64, p: u64, prec: u32) -> Result<Self> {
        Self::from_rational(&arith::int(n), p, prec)
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Valuation of a nonzero element; `None` for both kinds of zero.
    pub fn valuation(&self) -> Option<i64> {
        match &self.repr {
            Repr::Unit { val, .. } => Some(*val),
            _ => None,
        }
    }

    /// Lower bound for the valuation (+∞ as `None` for the exact zero).
    pub fn valuation_lower_bound(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Zero { abs } => Some(*abs),
            Repr::Unit { val, .. } => Some(*val),
        }
    }

    /// Absolute precision `M` in `O(p^M)`; `None` for the exact zero.
    pub fn abs_precision(&self) -> Option<i64> {
        match &self.repr {
            Repr::ExactZero => None,
            Repr::Zero { abs } => Some(*abs),
            Repr::Unit { val, prec, .. } => Some(val + *prec as i64),
        }
    }

    pub fn rel_precision(&self) -> u32 {
        match &self.repr {
            Repr::Unit { prec, .. } => *prec,
            _ => 0,
        }
    }

    pub fn unit(&self) -> Option<&BigUint> {
        match &self.repr {
            Repr::Unit { unit, .. } => Some(unit),
            _ => None,
        }
    }

    pub fn is_zero(&self) -> bool {
        !matches!(self.repr, Repr::Unit { .. })
    }

    pub fn is_exact_zero(&self) -> bool {
        matches!(self.repr, Repr::ExactZero)
    }

    /// Base-p digits of the unit part, lowest first, `rel_precision` of them.
    pub fn digits(&self) -> Vec<u64> {
        match &self.repr {
            Repr::Unit { unit, prec, .. } => {
                let mut u = unit.clone();
                let pb = BigUint::from(self.p);
                (0..*prec)
                    .map(|_| {
                        let (q, r) = u.div_rem(&pb);
                        u = q;
                        r.to_u64().unwrap()
                    })
                    .collect()
            }
            _ => Vec::new(),
        }
    }

    /// Same element with absolute precision lowered to at most `abs`.
    pub fn cap(&self, abs: i64) -> Self {
        match &self.repr {
            Repr::ExactZero => Self::zero_with_precision(self.p, abs),
            Repr::Zero { abs: a } => Self::zero_with_precision(self.p, (*a).min(abs)),
            Repr::Unit { val, unit, prec } => {
                if *val >= abs {
                    return Self::zero_with_precision(self.p, abs);
                }
                let np = (*prec as i64).min(abs - val) as u32;
                let unit = unit % pow_p(self.p, np);
                PAdicNumber {
                    p: self.p,
                    repr: Repr::Unit {
                        val: *val,
                        unit,
                        prec: np,
                    },
                }
            }
        }
    }

    /// The rational `unit * p^val` represented by the known digits.
    pub fn lift(&self) -> Rational {
        match &self.repr {
            Repr::Unit { val, unit, .. } => {
                let u = Rational::from_integer(BigInt::from(unit.clone()));
                let pv =
                    Rational::from_integer(BigInt::from(self.p).pow(val.unsigned_abs() as u32));
                if *val >= 0 {
                    u * pv
                } else {
                    u / pv
                }
            }
            _ => Rational::zero(),
        }
    }

    fn check_prime(&self, other: &Self) -> Result<()> {
        if self.p != other.p {
            return Err(Error::PrimeMismatch(self.p, other.p));
        }
        Ok(())
    }

    pub fn neg(&self) -> Self {
        match &self.repr {
            Repr::Unit { val, unit, prec } => {
                let unit = pow_p(self.p, *prec) - unit;
                PAdicNumber {
                    p: self.p,
                    repr: Repr::Unit {
                        val: *val,
                        unit,
                        prec: *prec,
                    },
                }
            }
            _ => self.clone(),
        }
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.p;
        let abs = match (self.abs_precision(), other.abs_precision()) {
            (None, None) => return Ok(Self::exact_zero(p)),
            (Some(a), None) | (None, Some(a)) => a,
            (Some(a), Some(b)) => a.min(b),
        };
        match (&self.repr, &other.repr) {
            (
                Repr::Unit {
                    val: va, unit: ua, ..
                },
                Repr::Unit {
                    val: vb, unit: ub, ..
                },
            ) => {
                let v = (*va).min(*vb);
                if abs <= v {
                    return Ok(Self::zero_with_precision(p, abs));
                }
                let width = (abs - v) as u32;
                let total = (ua * pow_p(p, (va - v) as u32) + ub * pow_p(p, (vb - v) as u32))
                    % pow_p(p, width);
                Ok(Self::from_parts(p, v, total, width))
            }
            (Repr::Unit { .. }, _) => Ok(self.cap(abs)),
            (_, Repr::Unit { .. }) => Ok(other.cap(abs)),
            _ => Ok(Self::zero_with_precision(p, abs)),
        }
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.p;
        Ok(match (&self.repr, &other.repr) {
            (Repr::ExactZero, _) | (_, Repr::ExactZero) => Self::exact_zero(p),
            (Repr::Zero { abs: a }, Repr::Zero { abs: b }) => Self::zero_with_precision(p, a + b),
            (Repr::Zero { abs }, Repr::Unit { val, .. })
            | (Repr::Unit { val, .. }, Repr::Zero { abs }) => {
                Self::zero_with_precision(p, abs + val)
            }
            (
                Repr::Unit {
                    val: va,
                    unit: ua,
                    prec: na,
                },
                Repr::Unit {
                    val: vb,
                    unit: ub,
                    prec: nb,
                },
            ) => {
                let n = (*na).min(*nb);
                let unit = (ua * ub) % pow_p(p, n);
                PAdicNumber {
                    p,
                    repr: Repr::Unit {
                        val: va + vb,
                        unit,
                        prec: n,
                    },
                }
            }
        })
    }

    pub fn div(&self, other: &Self) -> Result<Self> {
        self.check_prime(other)?;
        let p = self.p;
        let (vb, ub, nb) = match &other.repr {
            Repr::Unit { val, unit, prec } => (*val, unit, *prec),
            _ => {
                return Err(Error::Precision(
                    "division by a p-adic number indistinguishable from zero".into(),
                ))
            }
        };
        Ok(match &self.repr {
            Repr::ExactZero => Self::exact_zero(p),
            Repr::Zero { abs } => Self::zero_with_precision(p, abs - vb),
            Repr::Unit { val, unit, prec } => {
                let n = (*prec).min(nb);
                let m = BigInt::from(pow_p(p, n));
                let inv =
                    arith::mod_inverse(&BigInt::from(ub.clone()), &m).expect("unit is invertible");
                let u = (BigInt::from(unit.clone()) * inv).mod_floor(&m);
                PAdicNumber {
                    p,
                    repr: Repr::Unit {
                        val: val - vb,
                        unit: u.to_biguint().unwrap(),
                        prec: n,
                    },
                }
            }
        })
    }

    pub fn pow(&self, mut e: u64) -> Result<Self> {
        if e == 0 {
            let prec = match &self.repr {
                Repr::Unit { prec, .. } => *prec,
                _ => DEFAULT_PRECISION,
            };
            return Ok(Self::from_parts(self.p, 0, BigUint::one(), prec));
        }
        let mut base = self.clone();
        let mut acc: Option<Self> = None;
        while e > 0 {
            if e & 1 == 1 {
                acc = Some(match acc {
                    None => base.clone(),
                    Some(a) => a.mul(&base)?,
                });
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base)?;
            }
        }
        Ok(acc.expect("e > 0"))
    }

    /// True when both balls contain a common point, i.e. the difference is
    /// zero at the smaller of the two absolute precisions.
    pub fn agrees_with(&self, other: &Self) -> bool {
        self.p == other.p && self.sub(other).map(|d| d.is_zero()).unwrap_or(false)
    }

    fn term(p: u64, c: u64, e: i64) -> String {
        match (c, e) {
            (c, 0) => c.to_string(),
            (1, 1) => p.to_string(),
            (1, e) => format!("{p}^{e}"),
            (c, 1) => format!("{c}*{p}"),
            (c, e) => format!("{c}*{p}^{e}"),
        }
    }

    fn nonzero_terms(&self) -> Vec<String> {
        let val = self.valuation().unwrap_or(0);
        self.digits()
            .iter()
            .enumerate()
            .filter(|(_, &c)| c != 0)
            .map(|(i, &c)| Self::term(self.p, c, val + i as i64))
            .collect()
    }

    /// Full rendering, `"c*p^i + ... + O(p^M)"`; exact zero is `"0"`.
    pub fn render(&self) -> String {
        self.render_with(usize::MAX)
    }

    /// Shows at most `max_terms` nonzero digits; omitted digits are marked
    /// with `...` before the `O(p^M)` term.
    pub fn render_truncated(&self, max_terms: usize) -> String {
        self.render_with(max_terms)
    }

    fn render_with(&self, max_terms: usize) -> String {
        let Some(abs) = self.abs_precision() else {
            return "0".to_string();
        };
        let mut terms = self.nonzero_terms();
        if terms.len() > max_terms {
            terms.truncate(max_terms);
            terms.push("...".to_string());
        }
        terms.push(format!("O({}^{})", self.p, abs));
        terms.join(" + ")
    }

    /// Parses the output of [`render`](Self::render).
    pub fn parse(text: &str) -> Result<Self> {
        let bad = || Error::Parse(format!("not a p-adic number: {text:?}"));
        let t = text.trim();
        if t == "0" {
            return Err(Error::Parse(
                "exact zero needs a prime; use PAdicNumber::exact_zero".into(),
            ));
        }
        let parts: Vec<&str> = t.split(" + ").collect();
        let last = parts.last().ok_or_else(bad)?;
        let inner = last
            .strip_prefix("O(")
            .and_then(|s| s.strip_suffix(')'))
            .ok_or_else(bad)?;
        let (p, abs) = inner.split_once('^').ok_or_else(bad)?;
        let p: u64 = p.parse().map_err(|_| bad())?;
        let abs: i64 = abs.parse().map_err(|_| bad())?;
        let mut terms = Vec::new();
        for part in &parts[..parts.len() - 1] {
            let (c, rest) = match part.split_once('*') {
                Some((c, rest)) => (c.parse::<u64>().map_err(|_| bad())?, Some(rest)),
                None if part.contains('^') || *part == p.to_string() => (1, Some(*part)),
                None => (part.parse::<u64>().map_err(|_| bad())?, None),
            };
            let e = match rest {
                None => 0,
                Some(r) => match r.split_once('^') {
                    Some((base, e)) if base == p.to_string() => {
                        e.parse::<i64>().map_err(|_| bad())?
                    }
                    None if r == p.to_string() => 1,
                    _ => return Err(bad()),
                },
            };
            if c == 0 || c >= p {
                return Err(bad());
            }
            terms.push((c, e));
        }
        let Some(val) = terms.iter().map(|t| t.1).min() else {
            return Ok(Self::zero_with_precision(p, abs));
        };
        if abs <= val {
            return Err(bad());
        }
        let mut unit = BigUint::zero();
        for (c, e) in terms {
            unit += pow_p(p, (e - val) as u32) * c;
        }
        Ok(Self::from_parts(p, val, unit, (abs - val) as u32))
    }

    pub fn to_json(&self) -> PAdicJson {
        PAdicJson {
            p: self.p,
            valuation: self.valuation(),
            digits: self.digits(),
            abs_precision: self.abs_precision(),
        }
    }

    pub fn from_json(j: &PAdicJson) -> Self {
        match (j.valuation, j.abs_precision) {
            (_, None) => Self::exact_zero(j.p),
            (None, Some(abs)) => Self::zero_with_precision(j.p, abs),
            (Some(v), Some(abs)) => {
                let mut unit = BigUint::zero();
                for &d in j.digits.iter().rev() {
                    unit = unit * j.p + d;
                }
                Self::from_parts(j.p, v, unit, (abs - v).max(0) as u32)
            }
        }
    }
}

impl fmt::Display for PAdicNumber {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::{int, rat};
    use proptest::prelude::*;

    fn pa(q: Rational, p: u64, n: u32) -> PAdicNumber {
        PAdicNumber::from_rational(&q, p, n).unwrap()
    }

    #[test]
    fn from_rational_examples() {
        let a = pa(rat(1, 3), 3, 5);
        assert_eq!(a.valuation(), Some(-1));
        assert_eq!(a.unit(), Some(&BigUint::from(1u32)));
        assert_eq!(a.render(), "3^-1 + O(3^4)");

        let b = pa(int(-1), 3, 3);
        assert_eq!(b.valuation(), Some(0));
        assert_eq!(b.unit(), Some(&BigUint::from(26u32)));
        assert_eq!(b.digits(), vec![2, 2, 2]);

        // 59044 = 2361 * 25 + 19
        let c = pa(rat(59044, 5), 5, 2);
        assert_eq!(c.valuation(), Some(-1));
        assert_eq!(c.unit(), Some(&BigUint::from(19u32)));

        assert!(pa(int(0), 7, 4).is_exact_zero());
        assert!(PAdicNumber::from_rational(&int(1), 7, 0).is_err());
    }

    #[test]
    fn ball_rules() {
        let s = pa(int(1), 3, 5).add(&pa(int(2), 3, 5)).unwrap();
        assert_eq!((s.valuation(), s.rel_precision()), (Some(1), 4));
        assert_eq!(s.render(), "3 + O(3^5)");

        let m = pa(rat(1, 3), 3, 5).mul(&pa(int(9), 3, 4)).unwrap();
        assert_eq!(m.valuation(), Some(1));
        assert_eq!(m.abs_precision(), Some(5));

        let x = pa(rat(7, 2), 3, 6);
        let z = x.sub(&x).unwrap();
        assert!(z.is_zero() && !z.is_exact_zero());
        assert_eq!(z.abs_precision(), Some(6));

        assert!(x.div(&z).is_err());
        assert!(x.div(&PAdicNumber::exact_zero(3)).is_err());
        assert!(x.add(&pa(int(1), 5, 3)).is_err());

        let q = x.div(&pa(int(7), 3, 6)).unwrap();
        assert!(q.agrees_with(&pa(rat(1, 2), 3, 6)));
    }

    #[test]
    fn renderings() {
        let v = pa(int(1 + 3 * 25 + 625), 5, 20);
        assert_eq!(v.render(), "1 + 3*5^2 + 5^4 + O(5^20)");
        // 3^-5 + 2*3^-1 + 1 + 2*3 with absolute precision 13
        let w = pa(rat(1, 243) + rat(2, 3) + int(7), 3, 18);
        assert_eq!(w.render(), "3^-5 + 2*3^-1 + 1 + 2*3 + O(3^13)");
        let long = pa(rat(1, 7), 5, 20);
        assert!(long.render_truncated(2).ends_with(" + ... + O(5^20)"));
        assert_eq!(PAdicNumber::exact_zero(5).render(), "0");
        assert_eq!(PAdicNumber::zero_with_precision(5, 7).render(), "O(5^7)");
    }

    #[test]
    fn json_shape() {
        let j = pa(rat(1, 3), 3, 3).to_json();
        assert_eq!(
            serde_json::to_value(&j).unwrap(),
            serde_json::json!({"p": 3, "valuation": -1, "digits": [1, 0, 0], "abs_precision": 2})
        );
        assert_eq!(PAdicNumber::from_json(&j), pa(rat(1, 3), 3, 3));
    }

    fn arb_padic() -> impl Strategy<Value = PAdicNumber> {
        (-3000i64..3000, 1i64..300, 0usize..3, 1u32..12).prop_map(|(n, d, pi, prec)| {
            let p = [2u64, 3, 5][pi];
            pa(rat(n, d), p, prec)
        })
    }

    proptest! {
        #[test]
        fn render_parse_roundtrip(x in arb_padic()) {
            prop_assume!(!x.is_exact_zero());
            prop_assert_eq!(PAdicNumber::parse(&x.render()).unwrap(), x);
        }

        #[test]
        fn from_rational_is_multiplicative(a in -500i64..500, b in 1i64..200, c in -500i64..500, d in 1i64..200,
                                           pi in 0usize..3, n in 1u32..10) {
            let p = [2u64, 3, 7][pi];
            let (x, y) = (rat(a, b), rat(c, d));
            let lhs = pa(x.clone(), p, n).mul(&pa(y.clone(), p, n)).unwrap();
            let rhs = pa(&x * &y, p, n);
            prop_assert!(lhs.agrees_with(&rhs));
            prop_assert_eq!(lhs, rhs);
        }

        #[test]
        fn ring_axioms_at_common_precision(
            a in -400i64..400, b in -400i64..400, c in -400i64..400, d in 1i64..50, pi in 0usize..3) {
            let p = [2u64, 3, 5][pi];
            let (x, y, z) = (pa(rat(a, d), p, 8), pa(rat(b, d), p, 6), pa(rat(c, 1), p, 7));
            let l = x.mul(&y).unwrap().mul(&z).unwrap();
            let r = x.mul(&y.mul(&z).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r));
            let l = x.mul(&y.add(&z).unwrap()).unwrap();
            let r = x.mul(&y).unwrap().add(&x.mul(&z).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r));
            let l = x.add(&y).unwrap().add(&z).unwrap();
            let r = x.add(&y.add(&z).unwrap()).unwrap();
            prop_assert!(l.agrees_with(&r));
            // exact sum lies in the computed ball
            let exact = pa(rat(a, d) + rat(b, d), p, 30);
            prop_assert!(x.add(&y).unwrap().agrees_with(&exact));
        }
    }
}
