//! Properties of hypergeometric series over Q: global boundedness,
//! algebraicity, and the primes of good reduction or of a given p-curvature
//! corank.

mod algebraic;
mod primeset;

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;

use num_integer::Integer;
use num_traits::Signed;
use serde::Serialize;

use crate::analysis::has_good_reduction;
use crate::arith::{self, Rational};
use crate::error::{Error, Result};
use crate::hyper::HypergeometricParameters;
use crate::modp::corank;
use crate::parallel::Exec;

pub use algebraic::{find_witness, AlgebraicWitness, WitnessBounds, WitnessJson};
pub use primeset::CongruencePrimeSet;

/// `⟨a·γ⟩` in (0, 1].
fn frac(a: u64, g: &Rational) -> Rational {
    arith::fractional_part_unit(&(g * Rational::from_integer(a.into())))
}

/// `a` in `[1, d]` prime to `d`.
fn units(d: u64) -> Vec<u64> {
    (1..=d).filter(|a| a.gcd(&d) == 1).collect()
}

fn is_balanced(params: &HypergeometricParameters) -> bool {
    params.n() == params.m() + 1
}

/// Christol's count test: for every `a` prime to `d` and every `x`,
/// `#{i : ⟨aα_i⟩ ≤ x} ≥ #{j : ⟨aβ_j⟩ ≤ x}` with the bottoms including 1.
///
/// Parameters with equal `⟨aγ⟩` differ by an integer, and the larger one
/// reaches its first p-adic carry earlier, so ties are ordered by `-γ`.
/// On (0, 1] this is the plain count test.
fn christol(params: &HypergeometricParameters) -> bool {
    let d = params.d();
    let bottoms = params.bottoms_with_one();
    let key = |a: u64, g: &Rational| (frac(a, g), -g.clone());
    units(d).into_iter().all(|a| {
        let tops: Vec<_> = params.tops().iter().map(|g| key(a, g)).collect();
        let bots: Vec<_> = bottoms.iter().map(|g| key(a, g)).collect();
        tops.iter().chain(&bots).all(|x| {
            tops.iter().filter(|t| *t <= x).count() >= bots.iter().filter(|b| *b <= x).count()
        })
    })
}

/// Whether `c_k·C^k` is integral for some constant `C`.
pub fn is_globally_bounded(params: &HypergeometricParameters) -> bool {
    if params.is_terminating() {
        return true;
    }
    is_balanced(params) && christol(params)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum DecisionKind {
    /// Proven criterion.
    Exact,
    /// A polynomial relation was found and checked.
    Witnessed,
    /// The witness search ran out of bounds.
    Heuristic,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Algebraicity {
    pub algebraic: bool,
    pub kind: DecisionKind,
    /// Which test decided, 1 to 5.
    pub layer: u8,
    pub reason: &'static str,
    pub witness: Option<AlgebraicWitness>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct AlgebraicityJson {
    pub algebraic: bool,
    pub kind: DecisionKind,
    pub layer: u8,
    pub reason: String,
    pub witness: Option<WitnessJson>,
}

impl Algebraicity {
    fn exact(algebraic: bool, layer: u8, reason: &'static str) -> Self {
        Algebraicity {
            algebraic,
            kind: DecisionKind::Exact,
            layer,
            reason,
            witness: None,
        }
    }

    pub fn to_json(&self) -> AlgebraicityJson {
        AlgebraicityJson {
            algebraic: self.algebraic,
            kind: self.kind,
            layer: self.layer,
            reason: self.reason.to_string(),
            witness: self.witness.as_ref().map(|w| w.to_json()),
        }
    }
}

/// Some top and bottom (the implicit 1 included) differ by an integer.
fn has_integer_difference(params: &HypergeometricParameters) -> bool {
    let bottoms = params.bottoms_with_one();
    params
        .tops()
        .iter()
        .any(|a| bottoms.iter().any(|b| arith::is_integer(&(a - b))))
}

/// For every `a` prime to `d`, the values `⟨aα_i⟩` and `⟨aβ_j⟩` are distinct
/// and alternate between tops and bottoms around the circle.
fn interlaces(params: &HypergeometricParameters) -> bool {
    let d = params.d();
    let bottoms = params.bottoms_with_one();
    units(d).into_iter().all(|a| {
        let mut vals: Vec<(Rational, bool)> = params
            .tops()
            .iter()
            .map(|g| (frac(a, g), true))
            .chain(bottoms.iter().map(|g| (frac(a, g), false)))
            .collect();
        vals.sort();
        vals.windows(2)
            .all(|w| w[0].0 != w[1].0 && w[0].1 != w[1].1)
    })
}

/// Decides whether the series is algebraic over Q(x).
///
/// Layers 1 to 4 are exact. Parameters with an integer difference between
/// a top and a bottom fall through to a bounded search for a polynomial
/// relation; a failed search answers `false` with kind `Heuristic`.
pub fn is_algebraic(params: &HypergeometricParameters, bounds: WitnessBounds) -> Algebraicity {
    if params.is_terminating() {
        return Algebraicity::exact(true, 1, "polynomial");
    }
    if !is_balanced(params) {
        return Algebraicity::exact(false, 2, "radius of convergence is not 1");
    }
    if !is_globally_bounded(params) {
        return Algebraicity::exact(false, 3, "not globally bounded");
    }
    if !has_integer_difference(params) {
        return if interlaces(params) {
            Algebraicity::exact(true, 4, "parameters interlace")
        } else {
            Algebraicity::exact(false, 4, "parameters do not interlace")
        };
    }
    match find_witness(params, bounds) {
        Some(w) => Algebraicity {
            algebraic: true,
            kind: DecisionKind::Witnessed,
            layer: 5,
            reason: "polynomial relation found",
            witness: Some(w),
        },
        None => Algebraicity {
            algebraic: false,
            kind: DecisionKind::Heuristic,
            layer: 5,
            reason: "no polynomial relation within the degree bounds",
            witness: None,
        },
    }
}

/// `max(50, 2d²)`.
pub fn default_prime_bound(params: &HypergeometricParameters) -> u64 {
    50u64.max(2 * params.d() * params.d())
}

/// `max(|a| + b)` over the parameters `a/b`; beyond it the behaviour of a
/// prime depends only on its class mod d.
pub fn height(params: &HypergeometricParameters) -> u64 {
    params
        .tops()
        .iter()
        .chain(params.bottoms())
        .map(|q| arith::big_to_u64(&(q.numer().abs() + q.denom())).unwrap_or(u64::MAX))
        .max()
        .unwrap_or(1)
}

/// Classifies every prime by `f`: all primes up to the bound, then `per_class`
/// representatives above it for each unit class mod d, which must agree.
fn sweep<T, F>(
    params: &HypergeometricParameters,
    bound: u64,
    per_class: usize,
    exec: Exec,
    f: F,
) -> Result<(Vec<(u64, T)>, Vec<(u64, T)>)>
where
    T: Send + PartialEq + fmt::Debug,
    F: Fn(u64) -> T + Sync + Send,
{
    let d = params.d();
    let bound = bound.max(d).max(height(params));
    let small = arith::primes_up_to(bound);
    let reps: Vec<u64> = units(d)
        .into_iter()
        .flat_map(|a| arith::primes_in_class_above(a % d, d, bound, per_class))
        .collect();
    let scan = small
        .iter()
        .copied()
        .zip(exec.map(&small, |&p| f(p)))
        .collect();
    let big: Vec<(u64, T)> = reps
        .iter()
        .copied()
        .zip(exec.map(&reps, |&p| f(p)))
        .collect();
    for class in big.chunks(per_class) {
        if let Some(((p, a), (q, b))) = class.iter().zip(&class[1..]).find(|(x, y)| x.1 != y.1) {
            return Err(Error::PrimeBound {
                bound,
                detail: format!(
                    "{p} and {q} lie in the same class mod {d} but give {a:?} and {b:?}"
                ),
            });
        }
    }
    Ok((scan, big))
}

/// Primes p for which the series has p-integral coefficients.
pub fn good_reduction_primes(
    params: &HypergeometricParameters,
    bound: Option<u64>,
) -> Result<CongruencePrimeSet> {
    good_reduction_primes_with(params, bound, Exec::default())
}

pub fn good_reduction_primes_with(
    params: &HypergeometricParameters,
    bound: Option<u64>,
    exec: Exec,
) -> Result<CongruencePrimeSet> {
    let d = params.d();
    let bound = bound.unwrap_or_else(|| default_prime_bound(params));
    let (scan, big) = sweep(params, bound, 2, exec, |p| has_good_reduction(params, p))?;
    let good: BTreeSet<u64> = big.iter().filter(|(_, g)| *g).map(|(p, _)| p % d).collect();
    Ok(CongruencePrimeSet::from_scan(d, &good, &scan))
}

/// Primes sorted by the corank of the p-curvature.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CorankSweep {
    pub order: usize,
    pub sets: BTreeMap<usize, CongruencePrimeSet>,
    /// Primes up to the bound dividing d or without good reduction.
    pub bad: Vec<u64>,
    /// Corank per prime up to the bound.
    pub scanned: Vec<(u64, Option<usize>)>,
}

impl fmt::Display for CorankSweep {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.sets.iter().map(|(c, s)| format!("{c}: {s}")).collect();
        write!(f, "{{{}}}", parts.join(",\n "))
    }
}

fn corank_or_bad(params: &HypergeometricParameters, p: u64) -> Option<usize> {
    if params.d() % p == 0 || !has_good_reduction(params, p) {
        return None;
    }
    corank(params, p).ok()
}

pub fn p_curvature_coranks(
    params: &HypergeometricParameters,
    bound: Option<u64>,
) -> Result<CorankSweep> {
    p_curvature_coranks_with(params, bound, Exec::default())
}

pub fn p_curvature_coranks_with(
    params: &HypergeometricParameters,
    bound: Option<u64>,
    exec: Exec,
) -> Result<CorankSweep> {
    let d = params.d();
    let order = params.order();
    let bound = bound.unwrap_or_else(|| default_prime_bound(params));
    let (scan, big) = sweep(params, bound, 1, exec, |p| corank_or_bad(params, p))?;
    let mut keys: BTreeSet<usize> = (1..=order).collect();
    keys.extend(scan.iter().chain(&big).filter_map(|(_, c)| *c));
    let sets = keys
        .into_iter()
        .map(|c| {
            let good: BTreeSet<u64> = big
                .iter()
                .filter(|(_, k)| *k == Some(c))
                .map(|(p, _)| p % d)
                .collect();
            let member: Vec<(u64, bool)> = scan.iter().map(|(p, k)| (*p, *k == Some(c))).collect();
            (c, CongruencePrimeSet::from_scan(d, &good, &member))
        })
        .collect();
    let bad = scan
        .iter()
        .filter(|(_, c)| c.is_none())
        .map(|(p, _)| *p)
        .collect();
    Ok(CorankSweep {
        order,
        sets,
        bad,
        scanned: scan,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn f() -> HypergeometricParameters {
        HypergeometricParameters::parse("1/9,4/9,5/9", "1/3,1").unwrap()
    }

    fn g() -> HypergeometricParameters {
        HypergeometricParameters::parse("1/2,5/6,1", "5/3,2").unwrap()
    }

    fn h() -> HypergeometricParameters {
        HypergeometricParameters::parse("1/5,1/5,1/5,1/5", "1/3,59044/5").unwrap()
    }

    #[test]
    fn global_boundedness() {
        assert!(is_globally_bounded(&f()));
        assert!(!is_globally_bounded(&h()));
        assert!(is_globally_bounded(&g()));
        assert!(is_globally_bounded(
            &HypergeometricParameters::parse("1/2,1/2", "1").unwrap()
        ));
        assert!(is_globally_bounded(
            &HypergeometricParameters::parse("-3,1/7", "").unwrap()
        ));
        // exp and 2F1(1/2, 1/3; 1/4) are not
        assert!(!is_globally_bounded(
            &HypergeometricParameters::parse("", "").unwrap()
        ));
        assert!(!is_globally_bounded(
            &HypergeometricParameters::parse("1/2,1/3", "1/4").unwrap()
        ));
        // c_k = binom(2k, k) / (4^k (2k + 1))
        let shifted = HypergeometricParameters::parse("1/2,1/2,1", "1,3/2").unwrap();
        assert!(!is_globally_bounded(&shifted));
        // val_p(c_k) = -m at k = (p^m - 1)/2
        assert_eq!(
            crate::analysis::drifted_valuation(&shifted, 53, &crate::arith::int(0))
                .unwrap()
                .value,
            crate::analysis::Extended::NegInf
        );
    }

    #[test]
    fn exact_layers() {
        let a = is_algebraic(&f(), WitnessBounds::default());
        assert_eq!(
            (a.algebraic, a.layer, a.kind),
            (false, 4, DecisionKind::Exact)
        );
        assert!(!is_algebraic(&h(), WitnessBounds::default()).algebraic);
        // 2F1(1/4, 3/4; 2/3) interlaces: 1/4 < 2/3 < 3/4 < 1
        let a = is_algebraic(
            &HypergeometricParameters::parse("1/4,3/4", "2/3").unwrap(),
            WitnessBounds::default(),
        );
        assert_eq!((a.algebraic, a.layer), (true, 4));
        let a = is_algebraic(
            &HypergeometricParameters::parse("-2", "1/2").unwrap(),
            WitnessBounds::default(),
        );
        assert_eq!((a.algebraic, a.layer), (true, 1));
    }

    #[test]
    fn witness_layer() {
        let a = is_algebraic(
            &HypergeometricParameters::parse("1/2,1", "2").unwrap(),
            WitnessBounds::default(),
        );
        assert_eq!(
            (a.algebraic, a.layer, a.kind),
            (true, 5, DecisionKind::Witnessed)
        );
        assert_eq!(a.witness.unwrap().to_string(), "x*y^2 - 4*y + 4");
    }

    #[test]
    fn good_primes() {
        let s = good_reduction_primes(&g(), None).unwrap();
        assert_eq!(s, CongruencePrimeSet::all_but([2]));
        let s = good_reduction_primes(&HypergeometricParameters::parse("-1", "-2").unwrap(), None)
            .unwrap();
        assert_eq!(s, CongruencePrimeSet::all_but([2]));
    }

    #[test]
    fn coranks_of_f() {
        let sweep = p_curvature_coranks(&f(), Some(50)).unwrap();
        // mod 2 the odd coefficients of any solution vanish, leaving only F_2(x^2)
        assert_eq!(sweep.sets[&2], CongruencePrimeSet::all_but([2, 3]));
        assert_eq!(
            sweep.sets[&1],
            CongruencePrimeSet::new(1, [], [2], []).unwrap()
        );
        assert!(sweep.sets[&3].is_empty());
        assert_eq!(sweep.bad, [3]);
        assert_eq!(
            sweep.to_string(),
            "{1: Finite set of prime numbers: 2,\n 2: Set of all prime numbers with 2, 3 excluded: 5, 7, 11, 13, ...,\n 3: Empty set of prime numbers}"
        );
    }
}
