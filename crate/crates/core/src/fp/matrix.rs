use std::fmt;

use super::{PolyFp, RatFuncFp};

/// Dense matrix over F_p(x).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MatrixRatFuncFp {
    p: u64,
    rows: Vec<Vec<RatFuncFp>>,
    cols: usize,
}

fn content(row: &[PolyFp], p: u64) -> PolyFp {
    row.iter().fold(PolyFp::zero(p), |g, a| g.gcd(a))
}

/// Row-reduces a polynomial matrix in place without leaving F_p[x].
///
/// Pivots are chosen with minimal degree and every touched row is divided by
/// its content. Returns the pivot columns; row `i` holds the pivot of
/// column `pivots[i]`, and every other row is zero in that column.
fn fraction_free_reduce(m: &mut Vec<Vec<PolyFp>>, cols: usize, p: u64) -> Vec<usize> {
    let mut pivots = Vec::new();
    let mut rank = 0;
    for col in 0..cols {
        let best = (rank..m.len())
            .filter(|&r| !m[r][col].is_zero())
            .min_by_key(|&r| (m[r][col].degree().unwrap(), m[r][col].terms()));
        let Some(best) = best else { continue };
        m.swap(rank, best);
        let pivot_row = m[rank].clone();
        let piv = pivot_row[col].clone();
        for i in 0..m.len() {
            if i == rank || m[i][col].is_zero() {
                continue;
            }
            let factor = m[i][col].clone();
            let g = piv.gcd(&factor);
            let (a, b) = (piv.div_exact(&g).unwrap(), factor.div_exact(&g).unwrap());
            let row: Vec<PolyFp> = m[i]
                .iter()
                .zip(&pivot_row)
                .map(|(x, y)| x.mul(&a).sub(&y.mul(&b)))
                .collect();
            let c = content(&row, p);
            m[i] = if c.is_zero() || c.is_one() {
                row
            } else {
                row.iter().map(|x| x.div_exact(&c).unwrap()).collect()
            };
        }
        pivots.push(col);
        rank += 1;
        if rank == m.len() {
            break;
        }
    }
    pivots
}

/// Rank over F_p(x) of a matrix with polynomial entries.
pub fn poly_matrix_rank(rows: &[Vec<PolyFp>]) -> usize {
    let Some(first) = rows.first() else { return 0 };
    let cols = first.len();
    let p = first.first().map(|a| a.prime()).unwrap_or(2);
    let mut m = rows.to_vec();
    fraction_free_reduce(&mut m, cols, p).len()
}

impl MatrixRatFuncFp {
    pub fn new(p: u64, rows: Vec<Vec<RatFuncFp>>) -> Self {
        let cols = rows.first().map(|r| r.len()).unwrap_or(0);
        assert!(
            rows.iter().all(|r| r.len() == cols),
            "matrix must be rectangular"
        );
        MatrixRatFuncFp { p, rows, cols }
    }

    pub fn from_polys(p: u64, rows: Vec<Vec<PolyFp>>) -> Self {
        Self::new(
            p,
            rows.into_iter()
                .map(|r| r.into_iter().map(RatFuncFp::from_poly).collect())
                .collect(),
        )
    }

    pub fn zeros(p: u64, rows: usize, cols: usize) -> Self {
        Self::new(p, vec![vec![RatFuncFp::zero(p); cols]; rows])
    }

    pub fn prime(&self) -> u64 {
        self.p
    }

    pub fn nrows(&self) -> usize {
        self.rows.len()
    }

    pub fn ncols(&self) -> usize {
        self.cols
    }

    pub fn get(&self, i: usize, j: usize) -> &RatFuncFp {
        &self.rows[i][j]
    }

    pub fn rows(&self) -> &[Vec<RatFuncFp>] {
        &self.rows
    }

    pub fn mul(&self, o: &Self) -> Self {
        assert_eq!(self.cols, o.nrows());
        let rows = (0..self.nrows())
            .map(|i| {
                (0..o.cols)
                    .map(|j| {
                        (0..self.cols).fold(RatFuncFp::zero(self.p), |acc, k| {
                            acc.add(&self.rows[i][k].mul(&o.rows[k][j]))
                        })
                    })
                    .collect()
            })
            .collect();
        Self::new(self.p, rows)
    }

    pub fn apply(&self, v: &[PolyFp]) -> Vec<RatFuncFp> {
        self.rows
            .iter()
            .map(|row| {
                row.iter()
                    .zip(v)
                    .fold(RatFuncFp::zero(self.p), |acc, (a, b)| {
                        acc.add(&a.mul(&RatFuncFp::from_poly(b.clone())))
                    })
            })
            .collect()
    }

    /// Rows scaled by the lcm of their denominators.
    fn cleared(&self) -> Vec<Vec<PolyFp>> {
        self.rows
            .iter()
            .map(|row| {
                let l = row.iter().fold(PolyFp::one(self.p), |l, a| l.lcm(a.den()));
                row.iter()
                    .map(|a| a.num().mul(&l.div_exact(a.den()).unwrap()))
                    .collect()
            })
            .collect()
    }

    pub fn rank(&self) -> usize {
        if self.rows.is_empty() {
            return 0;
        }
        poly_matrix_rank(&self.cleared())
    }

    /// Basis of the right kernel, as content-free polynomial vectors whose
    /// first nonzero entry is monic. Empty iff the columns are independent.
    pub fn kernel(&self) -> Vec<Vec<PolyFp>> {
        let p = self.p;
        let mut m = self.cleared();
        let pivots = if m.is_empty() {
            Vec::new()
        } else {
            fraction_free_reduce(&mut m, self.cols, p)
        };
        let lcm = pivots
            .iter()
            .enumerate()
            .fold(PolyFp::one(p), |l, (r, &c)| l.lcm(&m[r][c]));
        let mut basis = Vec::new();
        for free in (0..self.cols).filter(|c| !pivots.contains(c)) {
            let mut v = vec![PolyFp::zero(p); self.cols];
            v[free] = lcm.clone();
            for (r, &c) in pivots.iter().enumerate() {
                v[c] = m[r][free].mul(&lcm.div_exact(&m[r][c]).unwrap()).neg();
            }
            let g = content(&v, p);
            let mut v: Vec<PolyFp> = v.iter().map(|a| a.div_exact(&g).unwrap()).collect();
            let lead = v
                .iter()
                .find(|a| !a.is_zero())
                .map(|a| a.leading())
                .unwrap();
            let inv = super::inv_mod(lead, p);
            for a in v.iter_mut() {
                *a = a.scale(inv);
            }
            assert!(
                self.apply(&v).iter().all(|e| e.is_zero()),
                "kernel vector failed verification"
            );
            basis.push(v);
        }
        basis
    }

    pub fn transpose(&self) -> Self {
        let rows = (0..self.cols)
            .map(|j| self.rows.iter().map(|r| r[j].clone()).collect())
            .collect();
        Self::new(self.p, rows)
    }
}

impl fmt::Display for MatrixRatFuncFp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let cells: Vec<Vec<String>> = self
            .rows
            .iter()
            .map(|r| r.iter().map(|a| a.to_string()).collect())
            .collect();
        let width = cells.iter().flatten().map(|s| s.len()).max().unwrap_or(1);
        for (i, row) in cells.iter().enumerate() {
            if i > 0 {
                writeln!(f)?;
            }
            let padded: Vec<String> = row.iter().map(|s| format!("{s:>width$}")).collect();
            write!(f, "[{}]", padded.join(" "))?;
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn poly(p: u64, c: &[i64]) -> PolyFp {
        PolyFp::from_signed(p, c)
    }

    #[test]
    fn kernel_of_rank_one_matrix() {
        let p = 7;
        let m = MatrixRatFuncFp::from_polys(
            p,
            vec![
                vec![poly(p, &[1]), poly(p, &[0, 1])],
                vec![poly(p, &[0, 1]), poly(p, &[0, 0, 1])],
            ],
        );
        let k = m.kernel();
        assert_eq!(k, vec![vec![poly(p, &[0, 1]), poly(p, &[p as i64 - 1])]]);
        assert_eq!(m.rank(), 1);
    }

    #[test]
    fn identity_has_trivial_kernel() {
        let p = 5;
        let m = MatrixRatFuncFp::from_polys(
            p,
            vec![
                vec![poly(p, &[1]), poly(p, &[])],
                vec![poly(p, &[]), poly(p, &[1])],
            ],
        );
        assert!(m.kernel().is_empty());
        assert_eq!(m.rank(), 2);
    }

    #[test]
    fn one_row_kernel() {
        let p = 11;
        let g = poly(p, &[2, 1]);
        let a = g.mul(&poly(p, &[1, 0, 1]));
        let b = g.mul(&poly(p, &[3, 1]));
        let m = MatrixRatFuncFp::from_polys(p, vec![vec![a, b]]);
        let k = m.kernel();
        assert_eq!(k, vec![vec![poly(p, &[3, 1]), poly(p, &[-1, 0, -1])]]);
    }

    #[test]
    fn kernel_with_rational_entries() {
        let p = 13;
        let r = |n: &[i64], d: &[i64]| RatFuncFp::new(poly(p, n), poly(p, d)).unwrap();
        let m = MatrixRatFuncFp::new(
            p,
            vec![
                vec![r(&[1], &[1, 1]), r(&[0, 1], &[1]), r(&[2], &[0, 1])],
                vec![r(&[1], &[1]), r(&[3, 4], &[1, 1]), r(&[1], &[2, 1])],
            ],
        );
        let k = m.kernel();
        assert_eq!(k.len(), 1);
        assert!(m.apply(&k[0]).iter().all(|e| e.is_zero()));
        assert_eq!(m.rank(), 2);
    }
}
