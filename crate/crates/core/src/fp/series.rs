use super::{add_mod, mul_mod, PolyFp};

/// Power series over F_p truncated to `O(x^len)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeriesFp {
    p: u64,
    c: Vec<u64>,
}

impl SeriesFp {
    pub fn new(p: u64, mut c: Vec<u64>) -> Self {
        for a in c.iter_mut() {
            *a %= p;
        }
        SeriesFp { p, c }
    }

    pub fn zero(p: u64, len: usize) -> Self {
        SeriesFp { p, c: vec![0; len] }
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    /// Truncation order T of `O(x^T)`.
    pub fn precision(&self) -> usize {
        self.c.len()
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.c
    }

    pub fn coeff(&self, i: usize) -> u64 {
        self.c[i]
    }

    pub fn is_zero(&self) -> bool {
        self.c.iter().all(|&a| a == 0)
    }

    pub fn truncate(&self, len: usize) -> Self {
        SeriesFp {
            p: self.p,
            c: self.c[..len.min(self.c.len())].to_vec(),
        }
    }

    pub fn add(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        SeriesFp {
            p: self.p,
            c: (0..n).map(|i| add_mod(self.c[i], o.c[i], self.p)).collect(),
        }
    }

    pub fn sub(&self, o: &Self) -> Self {
        let n = self.c.len().min(o.c.len());
        SeriesFp {
            p: self.p,
            c: (0..n)
                .map(|i| super::sub_mod(self.c[i], o.c[i], self.p))
                .collect(),
        }
    }

    /// `s(x)^(p^i) = s(x^(p^i))`, truncated at `len`. Precision of the input
    /// must cover what the result needs: `precision * p^i >= len`.
    pub fn frobenius(&self, i: u32, len: usize) -> Self {
        let step = (self.p as usize).saturating_pow(i);
        let mut c = vec![0; len];
        for (j, &a) in self.c.iter().enumerate() {
            let Some(k) = j.checked_mul(step) else { break };
            if k >= len {
                break;
            }
            c[k] = a;
        }
        SeriesFp { p: self.p, c }
    }

    /// Product with a polynomial, truncated at `len`.
    pub fn mul_poly(&self, a: &PolyFp, len: usize) -> Self {
        let p = self.p;
        let mut c = vec![0; len];
        for (i, &ai) in a.coeffs().iter().enumerate() {
            if ai == 0 || i >= len {
                continue;
            }
            for (j, &sj) in self.c.iter().enumerate() {
                if i + j >= len {
                    break;
                }
                c[i + j] = add_mod(c[i + j], mul_mod(ai, sj, p), p);
            }
        }
        SeriesFp { p, c }
    }

    /// `c * x^e * s(x)` truncated at `len`.
    pub fn scaled_shift(&self, c: u64, e: usize, len: usize) -> Self {
        let mut out = vec![0; len];
        for (j, &a) in self.c.iter().enumerate() {
            if j + e >= len {
                break;
            }
            out[j + e] = mul_mod(a, c, self.p);
        }
        SeriesFp { p: self.p, c: out }
    }

    pub fn render(&self) -> String {
        let poly = PolyFp::from_coeffs(self.p, self.c.clone());
        let t = self.c.len();
        if poly.is_zero() {
            format!("O(x^{t})")
        } else {
            let mut parts = Vec::new();
            for (i, &a) in self.c.iter().enumerate() {
                if a == 0 {
                    continue;
                }
                parts.push(match (i, a) {
                    (0, _) => a.to_string(),
                    (1, 1) => "x".into(),
                    (1, _) => format!("{a}*x"),
                    (_, 1) => format!("x^{i}"),
                    _ => format!("{a}*x^{i}"),
                });
            }
            format!("{} + O(x^{t})", parts.join(" + "))
        }
    }
}
