use num_bigint::BigInt;
use num_traits::ToPrimitive;
use serde::{Deserialize, Serialize};

use crate::analysis::has_good_reduction;
use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::fp::{PolyFp, SeriesFp};
use crate::hyper::{coefficients_mod_p, HypergeometricParameters, ScaledMonomialHyper};
use crate::parallel::Exec;

/// Default number of blocks scanned for a nonzero coefficient when `c_r ≡ 0`.
pub const SECTION_SCAN_FACTOR: u64 = 4;
/// Default bound on the number of functions in a closure.
pub const CLOSURE_LIMIT: usize = 64;

/// `(-γ) mod p`.
pub fn theta(gamma: &Rational, p: u64) -> Result<u64> {
    arith::residue_mod_power(gamma, p, 1)
        .map(|r| r.to_u64().unwrap())
        .ok_or_else(|| Error::BadPrime {
            p,
            reason: format!("{gamma} is not {p}-integral"),
        })
}

/// `(γ + θ(γ)) / p`.
pub fn dwork_map(gamma: &Rational, p: u64) -> Result<Rational> {
    let t = theta(gamma, p)?;
    Ok((gamma + Rational::from_integer(BigInt::from(t))) / Rational::from_integer(BigInt::from(p)))
}

/// Checks that sections of the series mod p make sense.
pub(crate) fn check_reducible(params: &HypergeometricParameters, p: u64) -> Result<()> {
    if !arith::is_prime(p) {
        return Err(Error::NotPrime(p));
    }
    if params.d() % p == 0 {
        return Err(Error::BadPrime {
            p,
            reason: format!("p divides the common denominator {}", params.d()),
        });
    }
    if !has_good_reduction(params, p) {
        return Err(Error::BadReduction { p });
    }
    Ok(())
}

/// `F((0);())`, the constant series 1.
pub fn constant_one() -> HypergeometricParameters {
    HypergeometricParameters::new(vec![Rational::from_integer(BigInt::from(0))], Vec::new())
        .unwrap()
}

/// Parameters of the candidate `G` for the r-th section.
fn shifted_params(params: &HypergeometricParameters, p: u64, r: u64) -> Result<Vec<Vec<Rational>>> {
    let shift = |g: &Rational| -> Result<Rational> {
        let mut q = dwork_map(g, p)?;
        if theta(g, p)? < r {
            q += Rational::from_integer(BigInt::from(1));
        }
        Ok(q)
    };
    let tops = params
        .tops()
        .iter()
        .map(shift)
        .collect::<Result<Vec<_>>>()?;
    let bottoms = params
        .bottoms()
        .iter()
        .map(shift)
        .collect::<Result<Vec<_>>>()?;
    Ok(vec![tops, bottoms])
}

/// Precomputed coefficients of a series mod p, enough for every section.
pub(crate) struct Sections {
    params: HypergeometricParameters,
    p: u64,
    scan: u64,
    coeffs: Vec<u64>,
}

impl Sections {
    pub fn new(params: &HypergeometricParameters, p: u64, scan_factor: u64) -> Result<Self> {
        check_reducible(params, p)?;
        let scan = scan_factor.max(2) * p;
        let len = ((scan + 1) * p) as usize;
        Ok(Sections {
            params: params.clone(),
            p,
            scan,
            coeffs: coefficients_mod_p(params, p, len)?,
        })
    }

    /// `c_{kp + r} mod p`.
    fn raw(&self, k: u64, r: u64) -> u64 {
        self.coeffs[(k * self.p + r) as usize]
    }

    pub fn section(&self, r: u64) -> Result<ScaledMonomialHyper> {
        let p = self.p;
        if r >= p {
            return Err(Error::InvalidArgument(format!(
                "section index {r} is not below p = {p}"
            )));
        }
        let fail = |detail: String| Error::SectionVerification { p, r, detail };
        let Some(e) = (0..self.scan).find(|&k| self.raw(k, r) != 0) else {
            return Ok(ScaledMonomialHyper::Zero);
        };
        let c = self.raw(e, r);
        let candidate = shifted_params(&self.params, p, r).and_then(|s| {
            HypergeometricParameters::new(s[0].clone(), s[1].clone())
                .map_err(|err| fail(format!("candidate parameters rejected: {err}")))
        });
        let checked = candidate.and_then(|g| self.verify(r, c, e, g));
        match checked {
            Ok(term) => Ok(term),
            // sections of polynomials may be lone monomials c·x^e·1
            Err(_)
                if self
                    .params
                    .terminating_degree()
                    .is_some_and(|t| t < self.scan * p)
                    && (e + 1..self.scan).all(|k| self.raw(k, r) == 0) =>
            {
                Ok(ScaledMonomialHyper::Term {
                    constant: c,
                    exponent: e,
                    function: constant_one(),
                })
            }
            Err(err) => Err(err),
        }
    }

    /// Checks `c·x^e·G` against the first `2p` coefficients of the section.
    fn verify(
        &self,
        r: u64,
        c: u64,
        e: u64,
        g: HypergeometricParameters,
    ) -> Result<ScaledMonomialHyper> {
        let p = self.p;
        let fail = |detail: String| Error::SectionVerification { p, r, detail };
        let n = 2 * p;
        let gc = coefficients_mod_p(&g, p, n as usize)
            .map_err(|err| fail(format!("candidate {g}: {err}")))?;
        for j in 0..n {
            let want = self.raw(j, r);
            let got = if j < e {
                0
            } else {
                crate::fp::mul_mod(c, gc[(j - e) as usize], p)
            };
            if want != got {
                return Err(fail(format!(
                    "coefficient {j} of {c}*x^{e}*{g} is {got}, expected {want}"
                )));
            }
        }
        Ok(ScaledMonomialHyper::Term {
            constant: c,
            exponent: e,
            function: g,
        })
    }
}

/// The r-th section `Λ_r(F mod p) = c·x^e·G`, verified on `2p` coefficients.
pub fn section(params: &HypergeometricParameters, p: u64, r: u64) -> Result<ScaledMonomialHyper> {
    Sections::new(params, p, SECTION_SCAN_FACTOR)?.section(r)
}

/// All sections `Λ_0, ..., Λ_{p-1}`.
pub fn sections(
    params: &HypergeometricParameters,
    p: u64,
    exec: Exec,
) -> Result<Vec<ScaledMonomialHyper>> {
    let s = Sections::new(params, p, SECTION_SCAN_FACTOR)?;
    exec.map_range(0..p, |r| s.section(r)).into_iter().collect()
}

/// `F ≡ Σ_j P_j(x)·F_j(x)^p (mod p)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DworkRelation {
    pub source: HypergeometricParameters,
    pub p: u64,
    /// In order of the first section producing each function.
    pub terms: Vec<(HypergeometricParameters, PolyFp)>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DworkTermJson {
    pub tops: Vec<String>,
    pub bottoms: Vec<String>,
    pub poly: Vec<u64>,
}

impl DworkRelation {
    pub fn get(&self, params: &HypergeometricParameters) -> Option<&PolyFp> {
        let key = params.canonical_key();
        self.terms
            .iter()
            .find(|(g, _)| g.canonical_key() == key)
            .map(|(_, q)| q)
    }

    pub fn to_json(&self) -> Vec<DworkTermJson> {
        self.terms
            .iter()
            .map(|(g, q)| {
                let j = g.to_json();
                DworkTermJson {
                    tops: j.tops,
                    bottoms: j.bottoms,
                    poly: q.coeffs().to_vec(),
                }
            })
            .collect()
    }

    /// Compares both sides modulo `x^len`.
    pub fn verify(&self, len: usize) -> Result<bool> {
        let p = self.p;
        let lhs = SeriesFp::new(p, coefficients_mod_p(&self.source, p, len)?);
        let short = len.div_ceil(p as usize);
        let mut rhs = SeriesFp::zero(p, len);
        for (g, poly) in &self.terms {
            let s = SeriesFp::new(p, coefficients_mod_p(g, p, short)?).frobenius(1, len);
            rhs = rhs.add(&s.mul_poly(poly, len));
        }
        Ok(lhs.sub(&rhs).is_zero())
    }
}

impl std::fmt::Display for DworkRelation {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let parts: Vec<String> = self
            .terms
            .iter()
            .map(|(g, q)| format!("{}: {}", g.render_call(), q))
            .collect();
        write!(f, "{{{}}}", parts.join(",\n "))
    }
}

pub fn dwork_relation(params: &HypergeometricParameters, p: u64) -> Result<DworkRelation> {
    dwork_relation_with(params, p, Exec::default())
}

pub fn dwork_relation_with(
    params: &HypergeometricParameters,
    p: u64,
    exec: Exec,
) -> Result<DworkRelation> {
    let secs = sections(params, p, exec)?;
    let mut terms: Vec<(HypergeometricParameters, PolyFp)> = Vec::new();
    for (r, s) in secs.into_iter().enumerate() {
        let ScaledMonomialHyper::Term {
            constant,
            exponent,
            function,
        } = s
        else {
            continue;
        };
        let mono = PolyFp::monomial(constant, r + (p * exponent) as usize, p);
        let key = function.canonical_key();
        match terms.iter_mut().find(|(g, _)| g.canonical_key() == key) {
            Some((_, q)) => *q = q.add(&mono),
            None => terms.push((function, mono)),
        }
    }
    terms.retain(|(_, q)| !q.is_zero());
    Ok(DworkRelation {
        source: params.clone(),
        p,
        terms,
    })
}

/// A finite family `H` closed under Dwork relations: `H = A·H^[p]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub p: u64,
    pub functions: Vec<HypergeometricParameters>,
    pub matrix: Vec<Vec<PolyFp>>,
}

pub fn closure(params: &HypergeometricParameters, p: u64, max_size: usize) -> Result<Closure> {
    closure_with(params, p, max_size, Exec::default())
}

pub fn closure_with(
    params: &HypergeometricParameters,
    p: u64,
    max_size: usize,
    exec: Exec,
) -> Result<Closure> {
    let mut functions = vec![params.clone()];
    let mut relations: Vec<DworkRelation> = Vec::new();
    let mut i = 0;
    while i < functions.len() {
        let rel = dwork_relation_with(&functions[i], p, exec)?;
        for (g, _) in &rel.terms {
            if !functions
                .iter()
                .any(|h| h.canonical_key() == g.canonical_key())
            {
                if functions.len() == max_size {
                    return Err(Error::NonTermination {
                        what: "Dwork closure".into(),
                        limit: max_size,
                    });
                }
                functions.push(g.clone());
            }
        }
        relations.push(rel);
        i += 1;
    }
    let zero = PolyFp::zero(p);
    let matrix = relations
        .iter()
        .map(|rel| {
            functions
                .iter()
                .map(|h| rel.get(h).cloned().unwrap_or_else(|| zero.clone()))
                .collect()
        })
        .collect();
    Ok(Closure {
        p,
        functions,
        matrix,
    })
}
