use std::fmt;

use super::{add_mod, inv_mod, mul_mod, neg_mod, sub_mod};
use crate::error::{Error, Result};

/// Dense univariate polynomial over F_p, lowest coefficient first, with
/// trailing zeros trimmed.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolyFp {
    p: u64,
    c: Vec<u64>,
}

impl PolyFp {
    pub fn zero(p: u64) -> Self {
        PolyFp { p, c: Vec::new() }
    }

    pub fn one(p: u64) -> Self {
        Self::constant(1, p)
    }

    pub fn x(p: u64) -> Self {
        Self::monomial(1, 1, p)
    }

    pub fn constant(c: u64, p: u64) -> Self {
        Self::from_coeffs(p, vec![c])
    }

    pub fn monomial(c: u64, k: usize, p: u64) -> Self {
        let mut v = vec![0; k + 1];
        v[k] = c;
        Self::from_coeffs(p, v)
    }

    /// Reduces every entry modulo `p`.
    pub fn from_coeffs(p: u64, mut c: Vec<u64>) -> Self {
        for a in c.iter_mut() {
            *a %= p;
        }
        let mut out = PolyFp { p, c };
        out.trim();
        out
    }

    pub fn from_signed(p: u64, c: &[i64]) -> Self {
        let pi = p as i64;
        Self::from_coeffs(p, c.iter().map(|&a| a.rem_euclid(pi) as u64).collect())
    }

    fn trim(&mut self) {
        while self.c.last() == Some(&0) {
            self.c.pop();
        }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.c.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.c == [1]
    }

    pub fn degree(&self) -> Option<usize> {
        self.c.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        self.c.last().copied().unwrap_or(0)
    }

    /// Number of nonzero coefficients.
    pub fn terms(&self) -> usize {
        self.c.iter().filter(|&&a| a != 0).count()
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| add_mod(self.coeff(i), o.coeff(i), self.p))
            .collect();
        Self::from_coeffs(self.p, c)
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().max(o.c.len());
        let c = (0..n)
            .map(|i| sub_mod(self.coeff(i), o.coeff(i), self.p))
            .collect();
        Self::from_coeffs(self.p, c)
    }

    pub fn neg(&self) -> Self {
        PolyFp {
            p: self.p,
            c: self.c.iter().map(|&a| neg_mod(a, self.p)).collect(),
        }
    }

    pub fn scale(&self, s: u64) -> Self {
        let s = s % self.p;
        Self::from_coeffs(
            self.p,
            self.c.iter().map(|&a| mul_mod(a, s, self.p)).collect(),
        )
    }

    pub fn shift(&self, k: usize) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        let mut c = vec![0; k];
        c.extend_from_slice(&self.c);
        PolyFp { p: self.p, c }
    }

    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let p = self.p;
        let mut acc = vec![0u128; self.c.len() + o.c.len() - 1];
        // p < 2^32 keeps each product below 2^64, so u128 sums cannot overflow
        if p < (1 << 32) {
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                for (j, &b) in o.c.iter().enumerate() {
                    acc[i + j] += a as u128 * b as u128;
                }
            }
            Self::from_coeffs(p, acc.into_iter().map(|v| (v % p as u128) as u64).collect())
        } else {
            let mut out = vec![0u64; acc.len()];
            for (i, &a) in self.c.iter().enumerate() {
                for (j, &b) in o.c.iter().enumerate() {
                    out[i + j] = add_mod(out[i + j], mul_mod(a, b, p), p);
                }
            }
            Self::from_coeffs(p, out)
        }
    }

    pub fn pow(&self, mut e: u64) -> Self {
        let mut base = self.clone();
        let mut acc = Self::one(self.p);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Euclidean division; errors on a zero divisor.
    pub fn div_rem(&self, d: &Self) -> Result<(Self, Self)> {
        if d.is_zero() {
            return Err(Error::InvalidArgument(
                "division by the zero polynomial".into(),
            ));
        }
        let p = self.p;
        let dd = d.c.len() - 1;
        let inv = inv_mod(d.leading(), p);
        let mut r = self.c.clone();
        if r.len() <= dd {
            return Ok((Self::zero(p), self.clone()));
        }
        let mut q = vec![0; r.len() - dd];
        for i in (dd..r.len()).rev() {
            let coef = mul_mod(r[i], inv, p);
            if coef == 0 {
                continue;
            }
            q[i - dd] = coef;
            for (j, &b) in d.c.iter().enumerate() {
                let k = i - dd + j;
                r[k] = sub_mod(r[k], mul_mod(coef, b, p), p);
            }
        }
        Ok((Self::from_coeffs(p, q), Self::from_coeffs(p, r)))
    }

    /// Exact quotient; errors if the division leaves a remainder.
    pub fn div_exact(&self, d: &Self) -> Result<Self> {
        let (q, r) = self.div_rem(d)?;
        if !r.is_zero() {
            return Err(Error::InvalidArgument("inexact polynomial division".into()));
        }
        Ok(q)
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return self.clone();
        }
        self.scale(inv_mod(self.leading(), self.p))
    }

    /// Monic gcd; gcd(0, 0) = 0.
    pub fn gcd(&self, o: &Self) -> Self {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.div_rem(&b).expect("nonzero divisor").1;
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn lcm(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let g = self.gcd(o);
        self.div_exact(&g).unwrap().mul(o).monic()
    }

    pub fn derivative(&self) -> Self {
        let p = self.p;
        let c = self
            .c
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &a)| mul_mod(a, i as u64 % p, p))
            .collect();
        Self::from_coeffs(p, c)
    }

    /// `a(x)^(p^i)`, which over F_p is `a(x^(p^i))`.
    pub fn frobenius(&self, i: u32) -> Self {
        if self.is_zero() || i == 0 {
            return self.clone();
        }
        let step = (self.p as usize).pow(i);
        let mut c = vec![0; (self.c.len() - 1) * step + 1];
        for (j, &a) in self.c.iter().enumerate() {
            c[j * step] = a;
        }
        PolyFp { p: self.p, c }
    }

    pub fn eval(&self, x: u64) -> u64 {
        self.c
            .iter()
            .rev()
            .fold(0, |acc, &a| add_mod(mul_mod(acc, x, self.p), a, self.p))
    }

    /// Coefficients reinterpreted as integers in `[0, p)`, descending text.
    pub fn render(&self) -> String {
        self.render_in("x")
    }

    pub fn render_in(&self, var: &str) -> String {
        if self.is_zero() {
            return "0".into();
        }
        let mut parts = Vec::new();
        for (i, &a) in self.c.iter().enumerate().rev() {
            if a == 0 {
                continue;
            }
            let mono = match i {
                0 => String::new(),
                1 => var.to_string(),
                _ => format!("{var}^{i}"),
            };
            parts.push(match (a, i) {
                (_, 0) => a.to_string(),
                (1, _) => mono,
                _ => format!("{a}*{mono}"),
            });
        }
        parts.join(" + ")
    }
}

impl fmt::Display for PolyFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}
