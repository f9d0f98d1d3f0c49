//! Hypergeometric power series over Q, F_p and Q_p.
//!
//! The coefficient of `x^k` in `nFm(α; β; x)` is
//! `Π(α_i)_k / (Π(β_j)_k · k!)`. This crate computes with these series
//! exactly over the rationals, modulo primes, and p-adically.

pub mod analysis;
pub mod arith;
pub mod classify;
pub mod error;
pub mod fp;
pub mod hyper;
pub mod modp;
pub mod padic;
pub mod parallel;

pub use arith::Rational;
pub use error::{Error, Result};
pub use hyper::{
    Context, HypergeometricFunction, HypergeometricParameters, ScaledMonomialHyper, Series,
};
pub use padic::PAdicNumber;
pub use parallel::Exec;
