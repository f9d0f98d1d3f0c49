use std::fmt;

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::fp::{self, poly_matrix_rank, MatrixRatFuncFp, PolyFp, RatFuncFp};
use crate::hyper::HypergeometricParameters;

/// `L = ϑ·Π(ϑ + β - 1) - x·Π(ϑ + α)` with `ϑ = x·d/dx`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HypergeometricOperator {
    params: HypergeometricParameters,
    /// coefficients of `ϑ·Π(ϑ + β - 1)`, ascending
    bottom: Vec<Rational>,
    /// coefficients of `Π(ϑ + α)`, ascending
    top: Vec<Rational>,
}

/// Ascending coefficients of `Π(t + c)`.
fn poly_from_shifts<'a>(shifts: impl IntoIterator<Item = &'a Rational>) -> Vec<Rational> {
    let mut out = vec![Rational::from_integer(BigInt::from(1))];
    for c in shifts {
        let mut next = vec![Rational::zero(); out.len() + 1];
        for (i, a) in out.iter().enumerate() {
            next[i] += a * c;
            next[i + 1] += a;
        }
        out = next;
    }
    out
}

fn eval(poly: &[Rational], t: &Rational) -> Rational {
    poly.iter()
        .rev()
        .fold(Rational::zero(), |acc, a| acc * t + a)
}

fn reduce(q: &Rational, p: u64) -> Result<u64> {
    arith::reduce_mod_power(q, p, 1)
        .and_then(|r| r.to_u64())
        .ok_or_else(|| Error::BadPrime {
            p,
            reason: format!("{q} is not {p}-integral"),
        })
}

/// Stirling numbers of the second kind mod p, `s[j][i]`, for `j ≤ n`.
fn stirling2(n: usize, p: u64) -> Vec<Vec<u64>> {
    let mut s = vec![vec![0u64; n + 1]; n + 1];
    s[0][0] = 1 % p;
    for j in 1..=n {
        for i in 1..=j {
            s[j][i] = fp::add_mod(
                fp::mul_mod(i as u64 % p, s[j - 1][i], p),
                s[j - 1][i - 1],
                p,
            );
        }
    }
    s
}

impl HypergeometricOperator {
    pub fn new(params: &HypergeometricParameters) -> Self {
        let one = Rational::from_integer(BigInt::from(1));
        let zero = Rational::zero();
        let shifts: Vec<Rational> = params.bottoms().iter().map(|b| b - &one).collect();
        let bottom = poly_from_shifts(std::iter::once(&zero).chain(&shifts));
        let top = poly_from_shifts(params.tops());
        HypergeometricOperator {
            params: params.clone(),
            bottom,
            top,
        }
    }

    pub fn params(&self) -> &HypergeometricParameters {
        &self.params
    }

    /// `max(n, m + 1)`.
    pub fn order(&self) -> usize {
        (self.bottom.len() - 1).max(self.top.len() - 1)
    }

    /// Coefficients of `L(Σ c_k x^k)` below `x^len`.
    pub fn apply(&self, coeffs: &[Rational]) -> Vec<Rational> {
        (0..coeffs.len())
            .map(|k| {
                let kq = Rational::from_integer(BigInt::from(k));
                let mut v = eval(&self.bottom, &kq) * &coeffs[k];
                if k > 0 {
                    v -= eval(&self.top, &(kq - Rational::from_integer(BigInt::from(1))))
                        * &coeffs[k - 1];
                }
                v
            })
            .collect()
    }

    /// Same over F_p.
    pub fn apply_mod_p(&self, coeffs: &[u64], p: u64) -> Result<Vec<u64>> {
        let bottom = self
            .bottom
            .iter()
            .map(|a| reduce(a, p))
            .collect::<Result<Vec<_>>>()?;
        let top = self
            .top
            .iter()
            .map(|a| reduce(a, p))
            .collect::<Result<Vec<_>>>()?;
        let ev = |poly: &[u64], t: u64| {
            poly.iter()
                .rev()
                .fold(0, |acc, &a| fp::add_mod(fp::mul_mod(acc, t, p), a, p))
        };
        Ok((0..coeffs.len())
            .map(|k| {
                let t = k as u64 % p;
                let mut v = fp::mul_mod(ev(&bottom, t), coeffs[k], p);
                if k > 0 {
                    v = fp::sub_mod(
                        v,
                        fp::mul_mod(ev(&top, (t + p - 1) % p), coeffs[k - 1], p),
                        p,
                    );
                }
                v
            })
            .collect())
    }

    /// `l_0, ..., l_N` with `L = Σ l_j(x)·ϑ^j` over F_p.
    pub fn theta_form(&self, p: u64) -> Result<Vec<PolyFp>> {
        if self.params.d() % p == 0 {
            return Err(Error::BadPrime {
                p,
                reason: format!("p divides the common denominator {}", self.params.d()),
            });
        }
        let n = self.order();
        (0..=n)
            .map(|j| {
                let b = self
                    .bottom
                    .get(j)
                    .map(|a| reduce(a, p))
                    .transpose()?
                    .unwrap_or(0);
                let t = self
                    .top
                    .get(j)
                    .map(|a| reduce(a, p))
                    .transpose()?
                    .unwrap_or(0);
                Ok(PolyFp::from_coeffs(p, vec![b, fp::neg_mod(t, p)]))
            })
            .collect()
    }

    /// `a_0, ..., a_N` with `L = Σ a_i(x)·∂^i` over F_p, using
    /// `ϑ^j = Σ S(j, i)·x^i·∂^i`.
    pub fn d_form(&self, p: u64) -> Result<Vec<PolyFp>> {
        if self.params.d() % p == 0 {
            return Err(Error::BadPrime {
                p,
                reason: format!("p divides the common denominator {}", self.params.d()),
            });
        }
        let n = self.order();
        let bottom = self
            .bottom
            .iter()
            .map(|a| reduce(a, p))
            .collect::<Result<Vec<_>>>()?;
        let top = self
            .top
            .iter()
            .map(|a| reduce(a, p))
            .collect::<Result<Vec<_>>>()?;
        let s = stirling2(n, p);
        let coeffs: Vec<PolyFp> = (0..=n)
            .map(|i| {
                let (mut c0, mut c1) = (0, 0);
                for j in i..=n {
                    c0 = fp::add_mod(
                        c0,
                        fp::mul_mod(s[j][i], bottom.get(j).copied().unwrap_or(0), p),
                        p,
                    );
                    c1 = fp::add_mod(
                        c1,
                        fp::mul_mod(s[j][i], top.get(j).copied().unwrap_or(0), p),
                        p,
                    );
                }
                PolyFp::from_coeffs(p, vec![c0, fp::neg_mod(c1, p)]).shift(i)
            })
            .collect();
        if coeffs[n].is_zero() {
            return Err(Error::BadPrime {
                p,
                reason: "the leading coefficient vanishes mod p".into(),
            });
        }
        Ok(coeffs)
    }
}

impl fmt::Display for HypergeometricOperator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let factor = |c: &Rational| {
            if c.is_zero() {
                "θ".to_string()
            } else if *c > Rational::zero() {
                format!("(θ + {c})")
            } else {
                format!("(θ - {})", -c)
            }
        };
        let one = Rational::from_integer(BigInt::from(1));
        let mut lhs = vec!["θ".to_string()];
        lhs.extend(self.params.bottoms().iter().map(|b| factor(&(b - &one))));
        let rhs: Vec<String> = self.params.tops().iter().map(factor).collect();
        write!(
            f,
            "{} - x*{}",
            lhs.join("*"),
            if rhs.is_empty() {
                "1".into()
            } else {
                rhs.join("*")
            }
        )
    }
}

/// Numerators of `v_k = w_k / q^k`, the coordinates of `D^k` in the basis
/// `1, D, ..., D^(N-1)` of `F_p(x)[D]/L`, for `k < upto`. `D` acts on
/// coefficients through the derivation `delta`, and `D·D^i` has coordinates
/// given by row i of `M / q`.
fn power_rows(
    m: &[Vec<PolyFp>],
    q: &PolyFp,
    delta: impl Fn(&PolyFp) -> PolyFp,
    upto: u64,
    p: u64,
) -> Vec<Vec<PolyFp>> {
    let n = m.len();
    let dq = delta(q);
    let mut w: Vec<PolyFp> = (0..n)
        .map(|j| {
            if j == 0 {
                PolyFp::one(p)
            } else {
                PolyFp::zero(p)
            }
        })
        .collect();
    let mut out = vec![w.clone()];
    for k in 1..upto {
        let c = dq.scale((k - 1) % p);
        w = (0..n)
            .map(|j| {
                let prod = (0..n).fold(PolyFp::zero(p), |acc, l| acc.add(&w[l].mul(&m[l][j])));
                q.mul(&delta(&w[j])).sub(&c.mul(&w[j])).add(&prod)
            })
            .collect();
        out.push(w.clone());
    }
    out
}

/// `(M, q)` with `M / q` the companion matrix of `Σ a_i·D^i`: row i holds
/// `D·D^i`.
fn companion(a: &[PolyFp], p: u64) -> (Vec<Vec<PolyFp>>, PolyFp) {
    let n = a.len() - 1;
    let q = a[n].clone();
    let mut m = vec![vec![PolyFp::zero(p); n]; n];
    for i in 0..n - 1 {
        m[i][i + 1] = q.clone();
    }
    for j in 0..n {
        m[n - 1][j] = a[j].neg();
    }
    (m, q)
}

fn check_prime(p: u64) -> Result<()> {
    if arith::is_prime(p) {
        Ok(())
    } else {
        Err(Error::NotPrime(p))
    }
}

/// Matrix of `∂^p` on `F_p(x)[∂]/L` in the basis `1, ∂, ..., ∂^(N-1)`;
/// row i holds the coordinates of `∂^p·∂^i`.
pub fn p_curvature(params: &HypergeometricParameters, p: u64) -> Result<MatrixRatFuncFp> {
    check_prime(p)?;
    let a = HypergeometricOperator::new(params).d_form(p)?;
    let (m, q) = companion(&a, p);
    let n = m.len();
    let v = power_rows(&m, &q, |w| w.derivative(), p + n as u64, p);
    let rows = (0..n)
        .map(|i| {
            let den = q.pow(p + i as u64);
            v[p as usize + i]
                .iter()
                .map(|a| RatFuncFp::new(a.clone(), den.clone()))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(MatrixRatFuncFp::new(p, rows))
}

/// `N - rank` of the p-curvature.
///
/// Computed from `x^p·∂^p = ϑ^p - ϑ` in the basis `1, ϑ, ..., ϑ^(N-1)`,
/// where the coefficients of `L` have degree at most one.
pub fn corank(params: &HypergeometricParameters, p: u64) -> Result<usize> {
    check_prime(p)?;
    let a = HypergeometricOperator::new(params).theta_form(p)?;
    let (m, q) = companion(&a, p);
    let n = m.len();
    let x = PolyFp::x(p);
    let v = power_rows(&m, &q, |w| x.mul(&w.derivative()), p + n as u64, p);
    let shift = q.pow(p - 1);
    let rows: Vec<Vec<PolyFp>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| v[p as usize + i][j].sub(&shift.mul(&v[i + 1][j])))
                .collect()
        })
        .collect();
    Ok(n - poly_matrix_rank(&rows))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::{coefficients, coefficients_mod_p};

    fn f() -> HypergeometricParameters {
        HypergeometricParameters::parse("1/9,4/9,5/9", "1/3,1").unwrap()
    }

    #[test]
    fn operator_kills_series() {
        for (t, b) in [
            ("1/9,4/9,5/9", "1/3,1"),
            ("1/2,1/3", ""),
            ("-3,1/2", "2/5"),
            ("1/5,1/5,1/5,1/5", "1/3,59044/5"),
        ] {
            let params = HypergeometricParameters::parse(t, b).unwrap();
            let op = HypergeometricOperator::new(&params);
            assert!(
                op.apply(&coefficients(&params, 60))
                    .iter()
                    .all(|c| c.is_zero()),
                "{t};{b}"
            );
        }
        let op = HypergeometricOperator::new(&f());
        let s = coefficients_mod_p(&f(), 19, 300).unwrap();
        assert!(op.apply_mod_p(&s, 19).unwrap().iter().all(|&c| c == 0));
        assert_eq!(op.order(), 3);
        assert_eq!(
            op.to_string(),
            "θ*(θ - 2/3)*θ - x*(θ + 1/9)*(θ + 4/9)*(θ + 5/9)"
        );
    }

    #[test]
    fn d_form_applies_like_theta_form() {
        // L applied to x^k through the ∂-form equals the ϑ-form value
        let p = 11;
        let params = f();
        let a = HypergeometricOperator::new(&params).d_form(p).unwrap();
        let op = HypergeometricOperator::new(&params);
        for k in 0..8u64 {
            let mut lhs = PolyFp::zero(p);
            for (i, ai) in a.iter().enumerate() {
                // ∂^i x^k = k(k-1)...(k-i+1) x^(k-i)
                if (i as u64) <= k {
                    let ff = (0..i as u64).fold(1, |acc, j| fp::mul_mod(acc, (k - j) % p, p));
                    lhs = lhs.add(&ai.mul(&PolyFp::monomial(ff, (k as usize) - i, p)));
                }
            }
            let mut e = vec![0u64; k as usize + 2];
            e[k as usize] = 1;
            let rhs = op.apply_mod_p(&e, p).unwrap();
            assert_eq!(lhs, PolyFp::from_coeffs(p, rhs), "k = {k}");
        }
    }

    #[test]
    fn curvature_of_f_at_5() {
        let m = p_curvature(&f(), 5).unwrap();
        assert_eq!((m.nrows(), m.ncols()), (3, 3));
        let row0: Vec<String> = m.rows()[0].iter().map(|a| a.to_string()).collect();
        assert_eq!(row0, ["0", "2/(x^5 + 4*x^4)", "1/(x^4 + 4*x^3)"]);
        assert!(m.rows()[1..].iter().flatten().all(|a| a.is_zero()));
        assert_eq!(corank(&f(), 5).unwrap(), 2);
    }

    #[test]
    fn theta_and_d_coranks_agree() {
        for (t, b) in [
            ("1/9,4/9,5/9", "1/3,1"),
            ("1/2,1/2", ""),
            ("1/3,2/3", "1/2"),
            ("1/4,3/4", "2/3"),
            ("1/2", ""),
        ] {
            let params = HypergeometricParameters::parse(t, b).unwrap();
            for p in [5u64, 7, 11, 13, 17] {
                let m = p_curvature(&params, p).unwrap();
                assert_eq!(
                    corank(&params, p).unwrap(),
                    m.nrows() - m.rank(),
                    "{t};{b} p={p}"
                );
            }
        }
    }

    #[test]
    fn coranks() {
        assert_eq!(corank(&f(), 7).unwrap(), 2);
        let geo = HypergeometricParameters::parse("1", "").unwrap();
        assert_eq!(corank(&geo, 5).unwrap(), 1);
        assert!(matches!(corank(&f(), 3), Err(Error::BadPrime { .. })));
        assert!(matches!(corank(&f(), 9), Err(Error::NotPrime(9))));
    }
}
