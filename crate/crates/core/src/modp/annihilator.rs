use super::section::{closure_with, CLOSURE_LIMIT};
use crate::error::Result;
use crate::fp::{MatrixRatFuncFp, OreFrobeniusPolynomial, PolyFp};
use crate::hyper::HypergeometricParameters;
use crate::parallel::Exec;

fn mat_mul(a: &[Vec<PolyFp>], b: &[Vec<PolyFp>], p: u64) -> Vec<Vec<PolyFp>> {
    let n = a.len();
    let m = b[0].len();
    (0..n)
        .map(|i| {
            (0..m)
                .map(|j| {
                    (0..b.len()).fold(PolyFp::zero(p), |acc, l| acc.add(&a[i][l].mul(&b[l][j])))
                })
                .collect()
        })
        .collect()
}

fn frob_mat(a: &[Vec<PolyFp>], i: u32) -> Vec<Vec<PolyFp>> {
    a.iter()
        .map(|row| row.iter().map(|q| q.frobenius(i)).collect())
        .collect()
}

fn identity(s: usize, p: u64) -> Vec<Vec<PolyFp>> {
    (0..s)
        .map(|i| {
            (0..s)
                .map(|j| {
                    if i == j {
                        PolyFp::one(p)
                    } else {
                        PolyFp::zero(p)
                    }
                })
                .collect()
        })
        .collect()
}

/// `Σ b_n(x)·Frob^n` killing `F mod p`, from the closure `H = A·H^[p]`.
///
/// With `A_L = A·A^[p]⋯A^[p^(L-1)]` one has `F^(p^n) = row_0(A_(L-n))^[p^n]·H^[p^L]`,
/// so a linear relation among these rows is an annihilator. `L` is the
/// first length at which the rows become dependent.
pub fn annihilating_ore_polynomial(
    params: &HypergeometricParameters,
    p: u64,
) -> Result<OreFrobeniusPolynomial> {
    annihilating_ore_polynomial_with(params, p, CLOSURE_LIMIT, Exec::default())
}

pub fn annihilating_ore_polynomial_with(
    params: &HypergeometricParameters,
    p: u64,
    max_size: usize,
    exec: Exec,
) -> Result<OreFrobeniusPolynomial> {
    let cl = closure_with(params, p, max_size, exec)?;
    let s = cl.functions.len();
    // prefix products A_0 = I, A_1 = A, A_(l+1) = A_l · A^[p^l]
    let mut prods = vec![identity(s, p)];
    for len in 1..=s {
        let next = mat_mul(
            prods.last().unwrap(),
            &frob_mat(&cl.matrix, len as u32 - 1),
            p,
        );
        prods.push(next);
        // columns r_n = row_0(A_(len-n))^[p^n], n = 0..len
        let cols: Vec<Vec<PolyFp>> = (0..=len)
            .map(|n| {
                prods[len - n][0]
                    .iter()
                    .map(|q| q.frobenius(n as u32))
                    .collect()
            })
            .collect();
        let rows: Vec<Vec<PolyFp>> = (0..s)
            .map(|i| cols.iter().map(|c| c[i].clone()).collect())
            .collect();
        let kernel = MatrixRatFuncFp::from_polys(p, rows).kernel();
        if let Some(b) = kernel.into_iter().next() {
            let lead = b
                .iter()
                .rev()
                .find(|q| !q.is_zero())
                .expect("nonzero kernel vector")
                .leading();
            let inv = crate::fp::inv_mod(lead, p);
            let b = b.into_iter().map(|q| q.scale(inv)).collect();
            return Ok(OreFrobeniusPolynomial::new(p, b));
        }
    }
    unreachable!("s + 1 vectors in a space of dimension s are dependent")
}
