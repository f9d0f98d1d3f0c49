use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum Error {
    #[error("the parameters ({tops}, {bottoms}) do not define a hypergeometric function")]
    InvalidParameters { tops: String, bottoms: String },

    #[error("parse error: {0}")]
    Parse(String),

    #[error("the series does not have good reduction at p = {p}")]
    BadReduction { p: u64 },

    #[error("bad prime p = {p}: {reason}")]
    BadPrime { p: u64, reason: String },

    #[error("{0} is not prime")]
    NotPrime(u64),

    #[error("mismatched primes {0} and {1}")]
    PrimeMismatch(u64, u64),

    #[error("precision error: {0}")]
    Precision(String),

    #[error("the series diverges at this point (log radius of convergence {radius})")]
    Divergence { radius: String },

    #[error(
        "infinite Newton polygon; try to truncate it by giving a log radius less than {bound}"
    )]
    InfiniteNewtonPolygon { bound: String },

    #[error("invalid argument: {0}")]
    InvalidArgument(String),

    #[error("section {r} at p = {p} is outside the constructive recipe: {detail}")]
    SectionVerification { p: u64, r: u64, detail: String },

    #[error("prime bound {bound} is too small: {detail}")]
    PrimeBound { bound: u64, detail: String },

    #[error("computation did not terminate within {limit} steps: {what}")]
    NonTermination { what: String, limit: usize },
}

pub type Result<T> = std::result::Result<T, Error>;
