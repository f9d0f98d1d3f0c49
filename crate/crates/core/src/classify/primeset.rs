use std::collections::BTreeSet;
use std::fmt;

use num_integer::Integer;
use serde::{Deserialize, Serialize};

use crate::arith;
use crate::error::{Error, Result};

/// Primes in some residue classes modulo `modulus`, corrected by finitely
/// many inclusions and exclusions.
///
/// `p` is a member iff `(p mod modulus ∈ classes and p ∉ excludes)` or
/// `p ∈ includes`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CongruencePrimeSet {
    modulus: u64,
    classes: BTreeSet<u64>,
    includes: BTreeSet<u64>,
    excludes: BTreeSet<u64>,
}

fn elide(items: &[u64]) -> String {
    let s: Vec<String> = items.iter().map(|p| p.to_string()).collect();
    if s.len() <= 6 {
        s.join(", ")
    } else {
        format!(
            "{}, ..., {}",
            s[..4].join(", "),
            s[s.len() - 2..].join(", ")
        )
    }
}

impl CongruencePrimeSet {
    pub fn empty() -> Self {
        CongruencePrimeSet {
            modulus: 1,
            classes: BTreeSet::new(),
            includes: BTreeSet::new(),
            excludes: BTreeSet::new(),
        }
    }

    pub fn all() -> Self {
        Self::all_but(std::iter::empty())
    }

    /// All primes except the given ones.
    pub fn all_but(excludes: impl IntoIterator<Item = u64>) -> Self {
        CongruencePrimeSet {
            modulus: 1,
            classes: BTreeSet::from([0]),
            includes: BTreeSet::new(),
            excludes: excludes
                .into_iter()
                .filter(|&p| arith::is_prime(p))
                .collect(),
        }
    }

    /// Checks the invariants and drops redundant corrections.
    pub fn new(
        modulus: u64,
        classes: impl IntoIterator<Item = u64>,
        includes: impl IntoIterator<Item = u64>,
        excludes: impl IntoIterator<Item = u64>,
    ) -> Result<Self> {
        if modulus == 0 {
            return Err(Error::InvalidArgument("modulus must be positive".into()));
        }
        let classes: BTreeSet<u64> = classes.into_iter().collect();
        if let Some(c) = classes.iter().find(|&&c| c >= modulus) {
            return Err(Error::InvalidArgument(format!(
                "residue {c} is not reduced modulo {modulus}"
            )));
        }
        let includes: BTreeSet<u64> = includes.into_iter().collect();
        let excludes: BTreeSet<u64> = excludes.into_iter().collect();
        if let Some(n) = includes
            .iter()
            .chain(&excludes)
            .find(|&&n| !arith::is_prime(n))
        {
            return Err(Error::NotPrime(*n));
        }
        if let Some(p) = includes.intersection(&excludes).next() {
            return Err(Error::InvalidArgument(format!(
                "{p} is both included and excluded"
            )));
        }
        let in_class = |p: &u64| classes.contains(&(p % modulus));
        let includes = includes.iter().copied().filter(|p| !in_class(p)).collect();
        let excludes = excludes.iter().copied().filter(|p| in_class(p)).collect();
        Ok(CongruencePrimeSet {
            modulus,
            classes,
            includes,
            excludes,
        })
    }

    /// The set agreeing with `scan` on the scanned primes and, beyond them,
    /// given by the unit classes `good` modulo `modulus`. The scan must
    /// cover every prime dividing `modulus`. The modulus is reduced to the
    /// least divisor compatible with the classes.
    pub fn from_scan(modulus: u64, good: &BTreeSet<u64>, scan: &[(u64, bool)]) -> Self {
        let units: Vec<u64> = (0..modulus).filter(|u| u.gcd(&modulus) == 1).collect();
        let m = (1..=modulus)
            .filter(|m| modulus % m == 0)
            .find(|&m| {
                units.iter().all(|u| {
                    units
                        .iter()
                        .filter(|v| *v % m == u % m)
                        .all(|v| good.contains(v) == good.contains(u))
                })
            })
            .unwrap_or(modulus);
        let classes: BTreeSet<u64> = good.iter().map(|u| u % m).collect();
        let mut includes = BTreeSet::new();
        let mut excludes = BTreeSet::new();
        for &(p, member) in scan {
            match (member, classes.contains(&(p % m))) {
                (true, false) => {
                    includes.insert(p);
                }
                (false, true) => {
                    excludes.insert(p);
                }
                _ => {}
            }
        }
        CongruencePrimeSet {
            modulus: m,
            classes,
            includes,
            excludes,
        }
    }

    pub fn modulus(&self) -> u64 {
        self.modulus
    }

    pub fn classes(&self) -> &BTreeSet<u64> {
        &self.classes
    }

    pub fn includes(&self) -> &BTreeSet<u64> {
        &self.includes
    }

    pub fn excludes(&self) -> &BTreeSet<u64> {
        &self.excludes
    }

    pub fn is_empty(&self) -> bool {
        self.classes.is_empty() && self.includes.is_empty()
    }

    pub fn is_finite(&self) -> bool {
        self.classes.is_empty()
    }

    pub fn contains(&self, p: u64) -> bool {
        if !arith::is_prime(p) {
            return false;
        }
        self.includes.contains(&p)
            || (self.classes.contains(&(p % self.modulus)) && !self.excludes.contains(&p))
    }

    /// The `count` smallest members.
    pub fn first(&self, count: usize) -> Vec<u64> {
        if self.is_finite() {
            return self.includes.iter().copied().take(count).collect();
        }
        let mut out = Vec::with_capacity(count);
        let mut n = 2;
        while out.len() < count {
            if self.contains(n) {
                out.push(n);
            }
            n += 1;
        }
        out
    }
}

impl fmt::Display for CongruencePrimeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            return write!(f, "Empty set of prime numbers");
        }
        let inc: Vec<u64> = self.includes.iter().copied().collect();
        let exc: Vec<u64> = self.excludes.iter().copied().collect();
        if self.is_finite() {
            return write!(f, "Finite set of prime numbers: {}", elide(&inc));
        }
        if self.modulus == 1 {
            write!(f, "Set of all prime numbers")?;
        } else {
            let cls: Vec<String> = self.classes.iter().map(|c| c.to_string()).collect();
            write!(
                f,
                "Set of prime numbers congruent to {} modulo {}",
                cls.join(", "),
                self.modulus
            )?;
        }
        if !inc.is_empty() {
            write!(f, " with {} included", elide(&inc))?;
        }
        if !exc.is_empty() {
            write!(
                f,
                " {} {} excluded",
                if inc.is_empty() { "with" } else { "and" },
                elide(&exc)
            )?;
        }
        let first: Vec<String> = self.first(4).iter().map(|p| p.to_string()).collect();
        write!(f, ": {}, ...", first.join(", "))
    }
}
