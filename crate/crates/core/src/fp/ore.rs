use std::fmt;

use super::{PolyFp, SeriesFp};

/// `Σ b_i(x) Frob^i` with `Frob · a(x) = a(x)^p · Frob`; acts on series by
/// `s ↦ Σ b_i s^(p^i)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OreFrobeniusPolynomial {
    p: u64,
    coeffs: Vec<PolyFp>,
}

impl OreFrobeniusPolynomial {
    pub fn new(p: u64, mut coeffs: Vec<PolyFp>) -> Self {
        while coeffs.last().is_some_and(|c| c.is_zero()) {
            coeffs.pop();
        }
        OreFrobeniusPolynomial { p, coeffs }
    }

    pub fn zero(p: u64) -> Self {
        Self::new(p, Vec::new())
    }

    /// `Frob^i`.
    pub fn frob_power(p: u64, i: usize) -> Self {
        let mut c = vec![PolyFp::zero(p); i + 1];
        c[i] = PolyFp::one(p);
        Self::new(p, c)
    }

    pub fn from_poly(a: PolyFp) -> Self {
        Self::new(a.prime(), vec![a])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[PolyFp] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree in `Frob`; `None` for the zero polynomial.
    pub fn frob_degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = PolyFp::zero(self.p);
        let c = (0..n)
            .map(|i| {
                self.coeffs
                    .get(i)
                    .unwrap_or(&z)
                    .add(o.coeffs.get(i).unwrap_or(&z))
            })
            .collect();
        Self::new(self.p, c)
    }

    /// Twisted product: `(a Frob^i)(b Frob^j) = a b^(p^i) Frob^(i+j)`.
    pub fn mul(&self, o: &Self) -> Self {
        if self.is_zero() || o.is_zero() {
            return Self::zero(self.p);
        }
        let mut c = vec![PolyFp::zero(self.p); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = c[i + j].add(&a.mul(&b.frobenius(i as u32)));
            }
        }
        Self::new(self.p, c)
    }

    /// `Σ b_i(x) s(x)^(p^i) mod x^len`.
    pub fn apply(&self, s: &SeriesFp, len: usize) -> SeriesFp {
        let mut acc = SeriesFp::zero(self.p, len);
        for (i, b) in self.coeffs.iter().enumerate() {
            if b.is_zero() {
                continue;
            }
            let term = s.frobenius(i as u32, len).mul_poly(b, len);
            acc = acc.add(&term);
        }
        acc
    }
}

impl fmt::Display for OreFrobeniusPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut parts = Vec::new();
        for (i, b) in self.coeffs.iter().enumerate().rev() {
            if b.is_zero() {
                continue;
            }
            let frob = match i {
                0 => String::new(),
                1 => "Frob".into(),
                _ => format!("Frob^{i}"),
            };
            parts.push(match (i, b.terms()) {
                (0, _) => b.render(),
                (_, 1) if b.is_one() => frob,
                (_, 1) => format!("{b}*{frob}"),
                _ => format!("({b})*{frob}"),
            });
        }
        f.write_str(&parts.join(" + "))
    }
}
