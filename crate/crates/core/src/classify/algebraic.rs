//! Search for a polynomial `P(x, y)` with `P(x, F(x)) = 0`.
//!
//! Candidates come from kernels of Hermite–Padé systems modulo large primes,
//! are lifted to Q by Chinese remaindering and rational reconstruction, and
//! are accepted only after an exact check over Q.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use serde::Serialize;

use crate::arith::{self, Rational};
use crate::fp::{add_mod, inv_mod, mul_mod, sub_mod};
use crate::hyper::{coefficients, HypergeometricParameters};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessBounds {
    pub max_y_degree: usize,
    pub max_x_degree: usize,
}

impl Default for WitnessBounds {
    fn default() -> Self {
        WitnessBounds {
            max_y_degree: 8,
            max_x_degree: 16,
        }
    }
}

/// `Σ c[j][i]·x^i·y^j` with integer coefficients, content 1 and positive
/// leading coefficient.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AlgebraicWitness {
    coeffs: Vec<Vec<BigInt>>,
    verified_order: usize,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WitnessJson {
    pub polynomial: String,
    /// `[i, j, c]` for the term `c·x^i·y^j`
    pub terms: Vec<(usize, usize, String)>,
    pub verified_order: usize,
}

impl AlgebraicWitness {
    fn new(mut coeffs: Vec<Vec<BigInt>>, verified_order: usize) -> Self {
        while coeffs
            .last()
            .is_some_and(|row| row.iter().all(|c| c.is_zero()))
        {
            coeffs.pop();
        }
        let g = coeffs
            .iter()
            .flatten()
            .fold(BigInt::zero(), |g, c| g.gcd(c));
        let lead = coeffs
            .last()
            .and_then(|row| row.iter().rev().find(|c| !c.is_zero()))
            .cloned()
            .unwrap_or_default();
        let g = if lead.is_negative() { -g } else { g };
        for c in coeffs.iter_mut().flatten() {
            *c = &*c / &g;
        }
        AlgebraicWitness {
            coeffs,
            verified_order,
        }
    }

    /// Degree in y.
    pub fn y_degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    /// Degree in x.
    pub fn x_degree(&self) -> usize {
        self.coeffs
            .iter()
            .filter_map(|row| row.iter().rposition(|c| !c.is_zero()))
            .max()
            .unwrap_or(0)
    }

    /// Coefficient of `x^i·y^j`.
    pub fn coeff(&self, i: usize, j: usize) -> BigInt {
        self.coeffs
            .get(j)
            .and_then(|row| row.get(i))
            .cloned()
            .unwrap_or_default()
    }

    pub fn verified_order(&self) -> usize {
        self.verified_order
    }

    /// `P(x, s(x)) mod x^len` for a series over Q.
    pub fn substitute(&self, s: &[Rational], len: usize) -> Vec<Rational> {
        let rows: Vec<Vec<Rational>> = self
            .coeffs
            .iter()
            .map(|row| {
                row.iter()
                    .map(|c| Rational::from_integer(c.clone()))
                    .collect()
            })
            .collect();
        eval_series(&rows, s, len)
    }

    pub fn to_json(&self) -> WitnessJson {
        let mut terms = Vec::new();
        for (j, row) in self.coeffs.iter().enumerate() {
            for (i, c) in row.iter().enumerate() {
                if !c.is_zero() {
                    terms.push((i, j, c.to_string()));
                }
            }
        }
        WitnessJson {
            polynomial: self.to_string(),
            terms,
            verified_order: self.verified_order,
        }
    }
}

impl fmt::Display for AlgebraicWitness {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, row) in self.coeffs.iter().enumerate().rev() {
            for (i, c) in row.iter().enumerate().rev() {
                if c.is_zero() {
                    continue;
                }
                let mono: Vec<String> = [("x", i), ("y", j)]
                    .iter()
                    .filter(|(_, e)| *e > 0)
                    .map(|(v, e)| {
                        if *e == 1 {
                            v.to_string()
                        } else {
                            format!("{v}^{e}")
                        }
                    })
                    .collect();
                let a = c.abs();
                let body = match (a.is_one(), mono.is_empty()) {
                    (_, true) => a.to_string(),
                    (true, false) => mono.join("*"),
                    (false, false) => format!("{a}*{}", mono.join("*")),
                };
                match (first, c.is_negative()) {
                    (true, true) => write!(f, "-{body}")?,
                    (true, false) => write!(f, "{body}")?,
                    (false, true) => write!(f, " - {body}")?,
                    (false, false) => write!(f, " + {body}")?,
                }
                first = false;
            }
        }
        if first {
            write!(f, "0")?;
        }
        Ok(())
    }
}

/// `Σ c[j][i] x^i s^j mod x^len` by Horner in y.
fn eval_series(c: &[Vec<Rational>], s: &[Rational], len: usize) -> Vec<Rational> {
    let mut acc = vec![Rational::zero(); len];
    for row in c.iter().rev() {
        let mut next = vec![Rational::zero(); len];
        for (a, x) in acc.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (b, y) in s.iter().take(len - a).enumerate() {
                next[a + b] += x * y;
            }
        }
        for (i, x) in row.iter().enumerate().take(len) {
            next[i] += x;
        }
        acc = next;
    }
    acc
}

/// Primes just below 2^62, descending.
fn large_primes() -> impl Iterator<Item = u64> {
    ((1u64 << 61)..(1u64 << 62))
        .rev()
        .step_by(2)
        .filter(|&n| arith::is_prime(n))
}

/// Right kernel of a dense matrix over F_q, one vector per free column,
/// with a 1 in that column.
fn kernel_mod(mut m: Vec<Vec<u64>>, cols: usize, q: u64) -> Vec<(usize, Vec<u64>)> {
    let mut pivots = Vec::new();
    let mut row = 0;
    for col in 0..cols {
        let Some(r) = (row..m.len()).find(|&r| m[r][col] != 0) else {
            continue;
        };
        m.swap(row, r);
        let inv = inv_mod(m[row][col], q);
        for x in m[row].iter_mut() {
            *x = mul_mod(*x, inv, q);
        }
        let pivot_row = m[row].clone();
        for (i, other) in m.iter_mut().enumerate() {
            if i != row && other[col] != 0 {
                let factor = other[col];
                for (x, y) in other.iter_mut().zip(&pivot_row) {
                    *x = sub_mod(*x, mul_mod(factor, *y, q), q);
                }
            }
        }
        pivots.push(col);
        row += 1;
        if row == m.len() {
            break;
        }
    }
    (0..cols)
        .filter(|c| !pivots.contains(c))
        .map(|free| {
            let mut v = vec![0; cols];
            v[free] = 1;
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = sub_mod(0, m[r][free], q);
            }
            (free, v)
        })
        .collect()
}

/// Powers `y^0..y^dy` of a series mod `x^len` over F_q.
fn powers_mod(s: &[u64], dy: usize, len: usize, q: u64) -> Vec<Vec<u64>> {
    let mut out = vec![{
        let mut one = vec![0; len];
        one[0] = 1;
        one
    }];
    for _ in 0..dy {
        let prev = out.last().unwrap();
        let mut next = vec![0; len];
        for (a, &x) in prev.iter().enumerate() {
            if x == 0 {
                continue;
            }
            for (b, &y) in s.iter().take(len - a).enumerate() {
                next[a + b] = add_mod(next[a + b], mul_mod(x, y, q), q);
            }
        }
        out.push(next);
    }
    out
}

/// Hermite–Padé system for `(dx, dy)` with `2(dx+1)(dy+1)` equations;
/// column `j(dx+1) + i` stands for `x^i y^j`.
fn system(pows: &[Vec<u64>], dx: usize, dy: usize) -> (Vec<Vec<u64>>, usize) {
    let cols = (dx + 1) * (dy + 1);
    let rows = (0..2 * cols)
        .map(|t| {
            let mut r = vec![0; cols];
            for j in 0..=dy {
                for i in 0..=dx.min(t) {
                    r[j * (dx + 1) + i] = pows[j][t - i];
                }
            }
            r
        })
        .collect();
    (rows, cols)
}

/// Rational `a/b ≡ u (mod m)` with `|a|, b ≤ sqrt(m/2)`.
fn rational_reconstruction(u: &BigInt, m: &BigInt) -> Option<Rational> {
    let bound = (m / 2u8).sqrt();
    let (mut r0, mut r1) = (m.clone(), u.mod_floor(m));
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while r1 > bound {
        let q = &r0 / &r1;
        (r0, r1) = (r1.clone(), &r0 - &q * &r1);
        (t0, t1) = (t1.clone(), &t0 - &q * &t1);
    }
    if t1.is_zero() || t1.abs() > bound || !(&r1 - &t1 * u).mod_floor(m).is_zero() {
        return None;
    }
    Some(Rational::new(r1, t1))
}

struct Search {
    exact: Vec<Rational>,
    primes: Vec<(u64, Vec<Vec<u64>>)>,
    nmax: usize,
    dy_max: usize,
}

impl Search {
    fn prime(&mut self, idx: usize) -> &(u64, Vec<Vec<u64>>) {
        while self.primes.len() <= idx {
            let skip = self.primes.last().map(|(q, _)| *q);
            let found = large_primes()
                .skip_while(|&q| skip.is_some_and(|s| q >= s))
                .find_map(|q| {
                    let red: Option<Vec<u64>> = self
                        .exact
                        .iter()
                        .map(|c| {
                            arith::reduce_mod_power(c, q, 1)
                                .map(|r| r.to_u64_digits().first().copied().unwrap_or(0))
                        })
                        .collect();
                    red.map(|s| (q, powers_mod(&s, self.dy_max, self.nmax, q)))
                })
                .expect("a prime below 2^62 avoids every denominator");
            self.primes.push(found);
        }
        &self.primes[idx]
    }

    fn kernel(&mut self, idx: usize, dx: usize, dy: usize) -> Vec<(usize, Vec<u64>)> {
        let (q, pows) = self.prime(idx);
        let q = *q;
        let (m, cols) = system(pows, dx, dy);
        kernel_mod(m, cols, q)
    }

    /// Lifts the kernel at `(dx, dy)` to an exact witness.
    fn lift(&mut self, dx: usize, dy: usize) -> Option<AlgebraicWitness> {
        let base = self.kernel(0, dx, dy);
        let (free, v0) = base.into_iter().next()?;
        let cols = v0.len();
        let mut modulus = BigInt::from(self.primes[0].0);
        let mut residues: Vec<BigInt> = v0.iter().map(|&x| BigInt::from(x)).collect();
        for idx in 1..64 {
            let Some((_, v)) = self
                .kernel(idx, dx, dy)
                .into_iter()
                .find(|(f, _)| *f == free)
            else {
                continue;
            };
            let q = BigInt::from(self.primes[idx].0);
            // CRT: r ≡ old (mod modulus), r ≡ v (mod q)
            let inv = arith::mod_inverse(&modulus, &q).expect("distinct primes");
            for (r, &x) in residues.iter_mut().zip(&v) {
                let t = ((BigInt::from(x) - &*r) * &inv).mod_floor(&q);
                *r = &*r + &modulus * t;
            }
            modulus *= &q;
            let rats: Option<Vec<Rational>> = residues
                .iter()
                .map(|r| rational_reconstruction(r, &modulus))
                .collect();
            let Some(rats) = rats else { continue };
            let den = rats.iter().fold(BigInt::one(), |l, r| l.lcm(r.denom()));
            let ints: Vec<BigInt> = rats
                .iter()
                .map(|r| (r * Rational::from_integer(den.clone())).to_integer())
                .collect();
            let coeffs: Vec<Vec<BigInt>> = (0..=dy)
                .map(|j| ints[j * (dx + 1)..(j + 1) * (dx + 1)].to_vec())
                .collect();
            debug_assert_eq!(cols, (dx + 1) * (dy + 1));
            let order = 2 * cols;
            let w = AlgebraicWitness::new(coeffs, order);
            if w.substitute(&self.exact[..order], order)
                .iter()
                .all(|c| c.is_zero())
            {
                return Some(w);
            }
        }
        None
    }
}

/// Least `(dy, dx)` within the bounds admitting a verified `P` with
/// `P(x, F(x)) ≡ 0 mod x^(2(dx+1)(dy+1))`.
pub fn find_witness(
    params: &HypergeometricParameters,
    bounds: WitnessBounds,
) -> Option<AlgebraicWitness> {
    let WitnessBounds {
        max_y_degree: dy_max,
        max_x_degree: dx_max,
    } = bounds;
    if dy_max == 0 {
        return None;
    }
    let nmax = 2 * (dx_max + 1) * (dy_max + 1);
    let mut search = Search {
        exact: coefficients(params, nmax),
        primes: Vec::new(),
        nmax,
        dy_max,
    };
    for dy in 1..=dy_max {
        if search.kernel(0, dx_max, dy).is_empty() {
            continue;
        }
        for dx in 0..=dx_max {
            if !search.kernel(0, dx, dy).is_empty() {
                if let Some(w) = search.lift(dx, dy) {
                    return Some(w);
                }
            }
        }
    }
    None
}
