use std::collections::{BTreeSet, VecDeque};

use num_bigint::BigUint;
use serde::Serialize;

use super::section::{Sections, SECTION_SCAN_FACTOR};
use crate::error::{Error, Result};
use crate::hyper::{HypergeometricParameters, ScaledMonomialHyper};

/// Default bound on the number of pairs examined.
pub const EQUALITY_BUDGET: usize = 256;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SeriesComparison {
    pub equal: bool,
    /// An index where the two series differ mod p.
    #[serde(serialize_with = "opt_big_str")]
    pub differing_index: Option<BigUint>,
    /// Pairs examined.
    pub iterations: usize,
}

fn opt_big_str<S: serde::Serializer>(
    v: &Option<BigUint>,
    s: S,
) -> std::result::Result<S::Ok, S::Error> {
    match v {
        Some(n) => s.serialize_str(&n.to_string()),
        None => s.serialize_none(),
    }
}

/// A queued pair; coefficient j of the pair sits at index `a·j + b` of the
/// original series.
struct Pair {
    h1: HypergeometricParameters,
    h2: HypergeometricParameters,
    a: BigUint,
    b: BigUint,
}

fn monomial(s: &ScaledMonomialHyper) -> Option<(u64, u64)> {
    match s {
        ScaledMonomialHyper::Zero => None,
        ScaledMonomialHyper::Term {
            constant, exponent, ..
        } => Some((*constant, *exponent)),
    }
}

fn pair_key(h1: &HypergeometricParameters, h2: &HypergeometricParameters) -> (String, String) {
    let (k1, k2) = (h1.canonical_key(), h2.canonical_key());
    if k1 <= k2 {
        (k1, k2)
    } else {
        (k2, k1)
    }
}

/// Decides `F ≡ G (mod p)` by comparing sections recursively.
pub fn is_equal_as_series(
    f: &HypergeometricParameters,
    g: &HypergeometricParameters,
    p: u64,
) -> Result<SeriesComparison> {
    is_equal_as_series_with(f, g, p, EQUALITY_BUDGET)
}

pub fn is_equal_as_series_with(
    f: &HypergeometricParameters,
    g: &HypergeometricParameters,
    p: u64,
    budget: usize,
) -> Result<SeriesComparison> {
    let mut queue = VecDeque::from([Pair {
        h1: f.clone(),
        h2: g.clone(),
        a: BigUint::from(1u8),
        b: BigUint::from(0u8),
    }]);
    let mut checked = BTreeSet::from([pair_key(f, g)]);
    let mut iterations = 0;
    while let Some(pair) = queue.pop_front() {
        if iterations == budget {
            return Err(Error::NonTermination {
                what: "series equality".into(),
                limit: budget,
            });
        }
        iterations += 1;
        let s1 = Sections::new(&pair.h1, p, SECTION_SCAN_FACTOR)?;
        let s2 = Sections::new(&pair.h2, p, SECTION_SCAN_FACTOR)?;
        for r in 0..p {
            let (l1, l2) = (s1.section(r)?, s2.section(r)?);
            let (m1, m2) = (monomial(&l1), monomial(&l2));
            if m1 != m2 {
                let e = [m1, m2]
                    .iter()
                    .flatten()
                    .map(|&(_, e)| e)
                    .min()
                    .expect("one side nonzero");
                let j = BigUint::from(e) * p + r;
                return Ok(SeriesComparison {
                    equal: false,
                    differing_index: Some(&pair.a * j + &pair.b),
                    iterations,
                });
            }
            let (
                ScaledMonomialHyper::Term {
                    exponent: e,
                    function: g1,
                    ..
                },
                ScaledMonomialHyper::Term { function: g2, .. },
            ) = (l1, l2)
            else {
                continue;
            };
            if g1.canonical_key() != g2.canonical_key() && checked.insert(pair_key(&g1, &g2)) {
                // coefficient j of (g1, g2) is coefficient (j + e)p + r of the pair
                let a = &pair.a * p;
                let b = &pair.a * (BigUint::from(e) * p + r) + &pair.b;
                queue.push_back(Pair {
                    h1: g1,
                    h2: g2,
                    a,
                    b,
                });
            }
        }
    }
    Ok(SeriesComparison {
        equal: true,
        differing_index: None,
        iterations,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::hyper::coefficients_mod_p;

    #[test]
    fn congruent_pair_at_13() {
        let h1 = HypergeometricParameters::parse("1/12,1/4", "1/2").unwrap();
        let h2 = HypergeometricParameters::parse("1/12,1/6", "1/3").unwrap();
        let cmp = is_equal_as_series(&h1, &h2, 13).unwrap();
        assert!(cmp.equal);
        assert_eq!(cmp.differing_index, None);
        let (a, b) = (
            coefficients_mod_p(&h1, 13, 1000).unwrap(),
            coefficients_mod_p(&h2, 13, 1000).unwrap(),
        );
        assert_eq!(a, b);
    }

    #[test]
    fn self_comparison() {
        let f = HypergeometricParameters::parse("1/9,4/9,5/9", "1/3,1").unwrap();
        let cmp = is_equal_as_series(&f, &f, 19).unwrap();
        assert!(cmp.equal);
        assert_eq!(cmp.iterations, 1);
    }

    #[test]
    fn f_and_its_companion_differ() {
        let f = HypergeometricParameters::parse("1/9,4/9,5/9", "1/3,1").unwrap();
        let g = HypergeometricParameters::parse("4/9,5/9,10/9", "1,4/3").unwrap();
        let cmp = is_equal_as_series(&f, &g, 19).unwrap();
        assert!(!cmp.equal);
        assert_eq!(cmp.differing_index, Some(BigUint::from(1u8)));
        let (a, b) = (
            coefficients_mod_p(&f, 19, 2).unwrap(),
            coefficients_mod_p(&g, 19, 2).unwrap(),
        );
        assert_eq!((a[1], b[1]), (14, 16));
    }
}
