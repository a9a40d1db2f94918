//! Hirzebruch-Jung strings: expansion, subdeterminants, and minimal cycles of
//! cyclic quotient singularities.
//!
//! For `d/q = [k_1, ..., k_s]` the class group is cyclic of order `d`,
//! generated by the dual cycle of the last vertex. The minimal cycle of the
//! class `a[E*_s]` is computed greedily from the suffix determinants.

use num_integer::Integer;
use num_rational::BigRational;
use serde::Serialize;

use crate::error::{Error, Result};

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct HjData {
    d: i64,
    q: i64,
    q_prime: i64,
    ks: Vec<i64>,
    /// `table[i][j] = d_{i+1, j+1}` for `i <= j`.
    table: Vec<Vec<i64>>,
}

pub fn hj_expand(d: i64, q: i64) -> Result<HjData> {
    if !(0 < q && q < d) || d.gcd(&q) != 1 {
        return Err(Error::BadFraction { d, q });
    }
    let mut ks = vec![];
    let (mut num, mut den) = (d, q);
    while den > 0 {
        let k = Integer::div_ceil(&num, &den);
        ks.push(k);
        (num, den) = (den, k * den - num);
    }
    let s = ks.len();
    let mut table = vec![vec![0i64; s]; s];
    for j in 0..s {
        for i in (0..=j).rev() {
            let next = if i < j { table[i + 1][j] } else { 1 };
            let after = if i + 2 <= j {
                table[i + 2][j]
            } else if i < j {
                1
            } else {
                0
            };
            table[i][j] = ks[i]
                .checked_mul(next)
                .and_then(|x| x.checked_sub(after))
                .ok_or(Error::Overflow("subdeterminant table"))?;
        }
    }
    let q_prime = (1..d).find(|x| (q * x) % d == 1).unwrap_or(1);
    Ok(HjData { d, q, q_prime, ks, table })
}

impl HjData {
    pub fn d(&self) -> i64 {
        self.d
    }

    pub fn q(&self) -> i64 {
        self.q
    }

    /// Inverse of `q` modulo `d`, in `(0, d)`.
    pub fn q_prime(&self) -> i64 {
        self.q_prime
    }

    pub fn ks(&self) -> &[i64] {
        &self.ks
    }

    /// Length `s` of the string.
    pub fn len(&self) -> usize {
        self.ks.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ks.is_empty()
    }

    /// Determinant `d_{ij}` of the substring `v_i..v_j` (1-based), with
    /// `d_{i,i-1} = 1` and `d_{ij} = 0` for `j < i - 1`.
    pub fn subdet(&self, i: usize, j: usize) -> i64 {
        if j + 1 < i {
            0
        } else if j + 1 == i {
            1
        } else {
            self.table[i - 1][j - 1]
        }
    }

    /// `d_{i+1,s}`, the weight of `a_i` in `a = sum_i d_{i+1,s} a_i`.
    pub fn suffix_weight(&self, i: usize) -> i64 {
        self.subdet(i + 1, self.len())
    }
}

/// E*-coefficients `(a_1, ..., a_s)` of the minimal cycle in class `a[E*_s]`.
pub fn cyclic_s_coeffs(hj: &HjData, a: i64) -> Result<Vec<i64>> {
    if !(0..hj.d).contains(&a) {
        return Err(Error::OutOfRange { value: a, what: format!("class index must lie in [0, {})", hj.d) });
    }
    let mut rest = a;
    let mut out = Vec::with_capacity(hj.len());
    for i in 1..=hj.len() {
        let w = hj.suffix_weight(i);
        let ai = Integer::div_floor(&rest, &w);
        rest -= ai * w;
        out.push(ai);
    }
    debug_assert_eq!(rest, 0);
    Ok(out)
}

/// Delta invariant of the minimal generic curve of class `a[E*_s]`: the curve
/// is an ordinary tuple, so this is its branch count minus one.
pub fn cyclic_delta(hj: &HjData, a: i64) -> Result<i64> {
    if a == 0 {
        return Err(Error::EmptyCurve);
    }
    let coeffs = cyclic_s_coeffs(hj, a)?;
    Ok(coeffs.iter().sum::<i64>() - 1)
}

/// Closed form of `chi(s_{a[E*_s]})` on a string; used to cross-check the
/// lattice-level `chi`.
pub fn chi_closed_form(hj: &HjData, a: i64) -> BigRational {
    let d = hj.d;
    let r = |n: i64, m: i64| BigRational::new(n.into(), m.into());
    let mut acc = r(a * (1 - d), 2 * d);
    for i in 1..=a {
        acc += r((i * hj.q_prime).rem_euclid(d), d);
    }
    acc
}

/// `chi(s_h) - chi(s_{-h})` on a string, the closed form `a/d - 1 + {a q'/d}`.
/// Valid for `0 < a < d`; the zero class has difference `0`.
pub fn chi_difference_closed_form(hj: &HjData, a: i64) -> BigRational {
    let d = hj.d;
    let frac = BigRational::new((a * hj.q_prime).rem_euclid(d).into(), d.into());
    BigRational::new(a.into(), d.into()) - BigRational::from_integer(1.into()) + frac
}
