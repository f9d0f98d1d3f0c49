//! Arithmetic over F_p: dense polynomials, rational functions, matrices over
//! F_p(x) with kernels, truncated series and Frobenius-twisted polynomials.

mod matrix;
mod ore;
mod poly;
mod ratfunc;
mod series;

pub use matrix::{poly_matrix_rank, MatrixRatFuncFp};
pub use ore::OreFrobeniusPolynomial;
pub use poly::PolyFp;
pub use ratfunc::RatFuncFp;
pub use series::SeriesFp;

#[inline]
pub(crate) fn add_mod(a: u64, b: u64, p: u64) -> u64 {
    let s = a + b;
    if s >= p {
        s - p
    } else {
        s
    }
}

#[inline]
pub(crate) fn sub_mod(a: u64, b: u64, p: u64) -> u64 {
    if a >= b {
        a - b
    } else {
        a + p - b
    }
}

#[inline]
pub(crate) fn mul_mod(a: u64, b: u64, p: u64) -> u64 {
    ((a as u128 * b as u128) % p as u128) as u64
}

#[inline]
pub(crate) fn neg_mod(a: u64, p: u64) -> u64 {
    if a == 0 {
        0
    } else {
        p - a
    }
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut r = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            r = mul_mod(r, b, p);
        }
        b = mul_mod(b, b, p);
        e >>= 1;
    }
    r
}

/// Inverse in F_p via Fermat; `a` must be nonzero.
pub(crate) fn inv_mod(a: u64, p: u64) -> u64 {
    debug_assert!(a % p != 0);
    pow_mod(a, p - 2, p)
}
