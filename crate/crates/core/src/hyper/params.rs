use std::fmt;

use num_traits::{One, ToPrimitive};
use serde::{Deserialize, Serialize};

use crate::arith::{self, Rational};
use crate::error::{Error, Result};

/// Validated top and bottom parameters of `nFm(tops; bottoms; x)`.
///
/// Both multisets are kept sorted; the implicit bottom parameter `1`
/// contributed by `k!` is never stored here.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct HypergeometricParameters {
    tops: Vec<Rational>,
    bottoms: Vec<Rational>,
    d: u64,
    terminating_degree: Option<u64>,
}

/// JSON form `{tops: ["1/9", ...], bottoms: [...]}`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ParamsJson {
    pub tops: Vec<String>,
    pub bottoms: Vec<String>,
}

fn python_tuple(v: &[Rational]) -> String {
    match v.len() {
        0 => "()".into(),
        1 => format!("({},)", v[0]),
        _ => format!(
            "({})",
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(", ")
        ),
    }
}

impl HypergeometricParameters {
    /// Accepts the lists iff every nonpositive-integer bottom is preceded by
    /// a vanishing top: with `Tmax`, `Bmax` the largest nonpositive integers
    /// among tops and bottoms, either no such bottom exists or `Tmax > Bmax`.
    pub fn new(tops: Vec<Rational>, bottoms: Vec<Rational>) -> Result<Self> {
        let tmax = tops.iter().filter_map(arith::nonpositive_integer).min();
        let bmax = bottoms.iter().filter_map(arith::nonpositive_integer).min();
        // min over t where the value is -t, i.e. the largest nonpositive value
        let ok = match (tmax, bmax) {
            (_, None) => true,
            (Some(t), Some(b)) => t < b,
            (None, Some(_)) => false,
        };
        if !ok {
            return Err(Error::InvalidParameters {
                tops: python_tuple(&tops),
                bottoms: python_tuple(&bottoms),
            });
        }
        let d = arith::lcm_of_denominators(tops.iter().chain(&bottoms))
            .to_u64()
            .ok_or_else(|| Error::InvalidArgument("common denominator too large".into()))?;
        let mut tops = tops;
        let mut bottoms = bottoms;
        tops.sort();
        bottoms.sort();
        Ok(HypergeometricParameters {
            tops,
            bottoms,
            d,
            terminating_degree: tmax,
        })
    }

    pub fn parse(tops: &str, bottoms: &str) -> Result<Self> {
        Self::new(
            arith::parse_rational_list(tops)?,
            arith::parse_rational_list(bottoms)?,
        )
    }

    pub fn tops(&self) -> &[Rational] {
        &self.tops
    }

    pub fn bottoms(&self) -> &[Rational] {
        &self.bottoms
    }

    /// Bottoms followed by the implicit `1` from `k!`.
    pub fn bottoms_with_one(&self) -> Vec<Rational> {
        let mut b = self.bottoms.clone();
        b.push(Rational::one());
        b
    }

    pub fn n(&self) -> usize {
        self.tops.len()
    }

    pub fn m(&self) -> usize {
        self.bottoms.len()
    }

    /// Order of the hypergeometric differential operator, `max(n, m + 1)`.
    pub fn order(&self) -> usize {
        self.n().max(self.m() + 1)
    }

    /// Least common denominator of all parameters.
    pub fn d(&self) -> u64 {
        self.d
    }

    /// Degree of the polynomial when the series terminates.
    pub fn terminating_degree(&self) -> Option<u64> {
        self.terminating_degree
    }

    pub fn is_terminating(&self) -> bool {
        self.terminating_degree.is_some()
    }

    /// `"tops|bottoms"` with sorted, exact rational entries.
    pub fn canonical_key(&self) -> String {
        let j = |v: &[Rational]| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        format!("{}|{}", j(&self.tops), j(&self.bottoms))
    }

    pub fn to_json(&self) -> ParamsJson {
        ParamsJson {
            tops: self.tops.iter().map(|q| q.to_string()).collect(),
            bottoms: self.bottoms.iter().map(|q| q.to_string()).collect(),
        }
    }

    pub fn from_json(j: &ParamsJson) -> Result<Self> {
        Self::parse(&j.tops.join(","), &j.bottoms.join(","))
    }

    /// `hypergeometric((a, b), (c,), x)`.
    pub fn render_call(&self) -> String {
        format!(
            "hypergeometric({}, {}, x)",
            python_tuple(&self.tops),
            python_tuple(&self.bottoms)
        )
    }
}

impl fmt::Display for HypergeometricParameters {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let j = |v: &[Rational]| {
            v.iter()
                .map(|q| q.to_string())
                .collect::<Vec<_>>()
                .join(",")
        };
        write!(f, "F(({});({}))", j(&self.tops), j(&self.bottoms))
    }
}
