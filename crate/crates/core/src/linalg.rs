//! Exact dense linear algebra over the integers and rationals.
//!
//! Matrices are small (one row per exceptional curve), so everything here is
//! the plain cubic algorithm on arbitrary-precision numbers.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

pub type IntMatrix = Vec<Vec<BigInt>>;
pub type RatMatrix = Vec<Vec<BigRational>>;

pub fn to_big(m: &[Vec<i64>]) -> IntMatrix {
    m.iter()
        .map(|row| row.iter().map(|&x| BigInt::from(x)).collect())
        .collect()
}

pub fn identity(n: usize) -> IntMatrix {
    (0..n)
        .map(|i| {
            (0..n)
                .map(|j| if i == j { BigInt::one() } else { BigInt::zero() })
                .collect()
        })
        .collect()
}

/// Fraction-free (Bareiss) determinant with row pivoting.
pub fn determinant(m: &IntMatrix) -> BigInt {
    let n = m.len();
    if n == 0 {
        return BigInt::one();
    }
    let mut a = m.clone();
    let mut sign = BigInt::one();
    let mut prev = BigInt::one();
    for k in 0..n - 1 {
        if a[k][k].is_zero() {
            match (k + 1..n).find(|&i| !a[i][k].is_zero()) {
                Some(i) => {
                    a.swap(i, k);
                    sign = -sign;
                }
                None => return BigInt::zero(),
            }
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let v = &a[i][j] * &a[k][k] - &a[i][k] * &a[k][j];
                a[i][j] = v / &prev;
            }
        }
        prev = a[k][k].clone();
    }
    sign * &a[n - 1][n - 1]
}

/// Determinants of the leading principal submatrices of sizes 1..=n.
pub fn leading_minors(m: &IntMatrix) -> Vec<BigInt> {
    (1..=m.len())
        .map(|k| {
            let sub: IntMatrix = m[..k].iter().map(|row| row[..k].to_vec()).collect();
            determinant(&sub)
        })
        .collect()
}

/// Exact inverse by Gauss-Jordan elimination; `None` when singular.
pub fn inverse(m: &IntMatrix) -> Option<RatMatrix> {
    let n = m.len();
    let mut a: RatMatrix = m
        .iter()
        .map(|row| row.iter().map(|x| BigRational::from_integer(x.clone())).collect())
        .collect();
    let mut inv: RatMatrix = identity(n)
        .into_iter()
        .map(|row| row.into_iter().map(BigRational::from_integer).collect())
        .collect();
    for col in 0..n {
        let pivot = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(pivot, col);
        inv.swap(pivot, col);
        let p = a[col][col].clone();
        for j in 0..n {
            a[col][j] = &a[col][j] / &p;
            inv[col][j] = &inv[col][j] / &p;
        }
        for r in 0..n {
            if r == col || a[r][col].is_zero() {
                continue;
            }
            let f = a[r][col].clone();
            for j in 0..n {
                let t = &f * &a[col][j];
                a[r][j] -= t;
                let t = &f * &inv[col][j];
                inv[r][j] -= t;
            }
        }
    }
    Some(inv)
}

/// Smith normal form `P A Q = D` of a square nonsingular integer matrix.
///
/// Only the left transform is tracked (with its inverse): the cokernel
/// `Z^n / A Z^n` is read off through `P`.
#[derive(Debug, Clone)]
pub struct Smith {
    pub diagonal: Vec<BigInt>,
    pub left: IntMatrix,
    pub left_inv: IntMatrix,
}

pub fn smith(m: &IntMatrix) -> Smith {
    let n = m.len();
    let mut a = m.clone();
    let mut p = identity(n);
    let mut p_inv = identity(n);

    // row_i += c * row_j, mirrored on P and P^-1
    fn add_row(a: &mut IntMatrix, p: &mut IntMatrix, p_inv: &mut IntMatrix, i: usize, j: usize, c: &BigInt) {
        let n = a.len();
        for k in 0..n {
            let t = c * &a[j][k];
            a[i][k] += t;
            let t = c * &p[j][k];
            p[i][k] += t;
        }
        // P^-1 <- P^-1 * (I - c e_i e_j^T): column j -= c * column i
        for k in 0..n {
            let t = c * &p_inv[k][i];
            p_inv[k][j] -= t;
        }
    }
    fn swap_rows(a: &mut IntMatrix, p: &mut IntMatrix, p_inv: &mut IntMatrix, i: usize, j: usize) {
        a.swap(i, j);
        p.swap(i, j);
        for row in p_inv.iter_mut() {
            row.swap(i, j);
        }
    }
    fn add_col(a: &mut IntMatrix, i: usize, j: usize, c: &BigInt) {
        for row in a.iter_mut() {
            let t = c * &row[j];
            row[i] += t;
        }
    }
    fn swap_cols(a: &mut IntMatrix, i: usize, j: usize) {
        for row in a.iter_mut() {
            row.swap(i, j);
        }
    }

    for t in 0..n {
        loop {
            // smallest nonzero entry of the trailing block becomes the pivot
            let mut best: Option<(usize, usize)> = None;
            for i in t..n {
                for j in t..n {
                    if a[i][j].is_zero() {
                        continue;
                    }
                    if best.is_none_or(|(bi, bj)| a[i][j].abs() < a[bi][bj].abs()) {
                        best = Some((i, j));
                    }
                }
            }
            let Some((bi, bj)) = best else { break };
            if bi != t {
                swap_rows(&mut a, &mut p, &mut p_inv, bi, t);
            }
            if bj != t {
                swap_cols(&mut a, bj, t);
            }
            let mut clean = true;
            for i in t + 1..n {
                if a[i][t].is_zero() {
                    continue;
                }
                let q = a[i][t].div_floor(&a[t][t]);
                add_row(&mut a, &mut p, &mut p_inv, i, t, &-q);
                if !a[i][t].is_zero() {
                    clean = false;
                }
            }
            for j in t + 1..n {
                if a[t][j].is_zero() {
                    continue;
                }
                let q = a[t][j].div_floor(&a[t][t]);
                add_col(&mut a, j, t, &-q);
                if !a[t][j].is_zero() {
                    clean = false;
                }
            }
            if !clean {
                continue;
            }
            // divisibility: pull a non-multiple into the pivot row and retry
            let bad = (t + 1..n)
                .flat_map(|i| (t + 1..n).map(move |j| (i, j)))
                .find(|&(i, j)| !a[i][j].is_multiple_of(&a[t][t]));
            match bad {
                Some((i, _)) => add_row(&mut a, &mut p, &mut p_inv, t, i, &BigInt::one()),
                None => break,
            }
        }
        if a[t][t].is_negative() {
            for k in 0..n {
                a[t][k] = -a[t][k].clone();
                p[t][k] = -p[t][k].clone();
            }
            for row in p_inv.iter_mut() {
                row[t] = -row[t].clone();
            }
        }
    }
    Smith {
        diagonal: (0..n).map(|i| a[i][i].clone()).collect(),
        left: p,
        left_inv: p_inv,
    }
}
