//! Reference computations written directly from the definitions, sharing no
//! code with the library beyond graph parsing.
#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};

pub type Q = BigRational;

pub fn q(n: i64) -> Q {
    Q::from_integer(BigInt::from(n))
}

pub fn frac(n: i64, d: i64) -> Q {
    Q::new(n.into(), d.into())
}

/// Gauss-Jordan inverse over the rationals.
pub fn inverse(m: &[Vec<i64>]) -> Vec<Vec<Q>> {
    let n = m.len();
    let mut a: Vec<Vec<Q>> = m
        .iter()
        .enumerate()
        .map(|(i, row)| {
            let mut r: Vec<Q> = row.iter().map(|&x| q(x)).collect();
            r.extend((0..n).map(|j| if i == j { q(1) } else { q(0) }));
            r
        })
        .collect();
    for col in 0..n {
        let p = (col..n).find(|&r| !a[r][col].is_zero()).expect("matrix is invertible");
        a.swap(col, p);
        let pivot = a[col][col].clone();
        for x in a[col].iter_mut() {
            *x = &*x / &pivot;
        }
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let f = a[r][col].clone();
                for c in 0..2 * n {
                    let sub = &f * &a[col][c];
                    a[r][c] -= sub;
                }
            }
        }
    }
    a.into_iter().map(|r| r[n..].to_vec()).collect()
}

pub fn mat_vec(m: &[Vec<i64>], x: &[Q]) -> Vec<Q> {
    m.iter().map(|row| row.iter().zip(x).map(|(&a, b)| q(a) * b).sum()).collect()
}

pub fn pair(m: &[Vec<i64>], x: &[Q], y: &[Q]) -> Q {
    mat_vec(m, y).iter().zip(x).map(|(a, b)| a * b).sum()
}

/// E-coefficients of `E*_v`: column `v` of `-M^{-1}`.
pub fn e_star(m: &[Vec<i64>], v: usize) -> Vec<Q> {
    inverse(m).iter().map(|row| -row[v].clone()).collect()
}

/// Solves the adjunction relations `(Z_K, E_v) = m_vv + 2`.
pub fn canonical(m: &[Vec<i64>]) -> Vec<Q> {
    let inv = inverse(m);
    let rhs: Vec<Q> = (0..m.len()).map(|v| q(m[v][v] + 2)).collect();
    inv.iter().map(|row| row.iter().zip(&rhs).map(|(a, b)| a * b).sum()).collect()
}

pub fn chi(m: &[Vec<i64>], x: &[Q]) -> Q {
    let zk = canonical(m);
    let diff: Vec<Q> = x.iter().zip(&zk).map(|(a, b)| a - b).collect();
    -pair(m, x, &diff) / q(2)
}

pub fn is_anti_nef(m: &[Vec<i64>], x: &[Q]) -> bool {
    mat_vec(m, x).iter().all(|p| !p.is_positive())
}

pub fn same_class(x: &[Q], y: &[Q]) -> bool {
    x.iter().zip(y).all(|(a, b)| (a - b).is_integer())
}

pub fn combo(m: &[Vec<i64>], coeffs: &[i64]) -> Vec<Q> {
    let n = m.len();
    let mut out = vec![q(0); n];
    for (v, &c) in coeffs.iter().enumerate() {
        if c != 0 {
            for (o, e) in out.iter_mut().zip(e_star(m, v)) {
                *o += e * q(c);
            }
        }
    }
    out
}

/// All anti-nef cycles `frac(rep) + k` with `0 <= k_u <= bounds[u]`, and
/// their coordinatewise minimum.
pub fn brute_min(m: &[Vec<i64>], rep: &[Q], bounds: &[i64]) -> (Option<Vec<Q>>, usize) {
    let n = m.len();
    let base: Vec<Q> = rep.iter().map(|x| x - x.floor()).collect();
    let mut k = vec![0i64; n];
    let mut best: Option<Vec<Q>> = None;
    let mut count = 0;
    loop {
        let x: Vec<Q> = base.iter().zip(&k).map(|(b, &ki)| b + q(ki)).collect();
        if is_anti_nef(m, &x) {
            count += 1;
            best = Some(match best {
                None => x,
                Some(b) => b.iter().zip(&x).map(|(a, c)| a.clone().min(c.clone())).collect(),
            });
        }
        let mut i = 0;
        loop {
            if i == n {
                return (best, count);
            }
            k[i] += 1;
            if k[i] <= bounds[i] {
                break;
            }
            k[i] = 0;
            i += 1;
        }
    }
}

/// Valency of each vertex from an edge list.
pub fn valencies(n: usize, edges: &[(usize, usize)]) -> Vec<usize> {
    let mut val = vec![0; n];
    for &(a, b) in edges {
        val[a] += 1;
        val[b] += 1;
    }
    val
}

fn binom(n: i64, k: i64) -> i64 {
    (0..k).fold(1, |acc, i| acc * (n - i) / (i + 1))
}

/// Terms `(E-coefficients, z)` of the product over vertices of
/// `(1 - t^{E*_v})^{val_v - 2}`, keeping only monomials with some coordinate
/// `u` in `subset` below `x_u`. Dropped monomials can never re-enter the
/// region, because every `E*_v` has positive coefficients.
pub fn series_terms(m: &[Vec<i64>], val: &[usize], x: &[Q], subset: &[usize]) -> Vec<(Vec<Q>, i64)> {
    let n = m.len();
    let inv = inverse(m);
    // work with integer vectors scaled by a common denominator
    let den = inv.iter().flatten().chain(x).fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let scale = |c: &Q| -> i64 { (c * Q::from_integer(den.clone())).to_integer().try_into().unwrap() };
    let xs: Vec<i64> = x.iter().map(scale).collect();
    let in_region = |e: &[i64]| subset.iter().any(|&u| e[u] < xs[u]);
    let mut acc: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
    acc.insert(vec![0; n], 1);
    for v in 0..n {
        let ev: Vec<i64> = inv.iter().map(|row| scale(&-row[v].clone())).collect();
        let mut next: BTreeMap<Vec<i64>, i64> = BTreeMap::new();
        for (mono, &c) in &acc {
            let mut add = |j: i64, f: i64| -> bool {
                let prod: Vec<i64> = mono.iter().zip(&ev).map(|(a, b)| a + j * b).collect();
                let keep = in_region(&prod);
                if keep {
                    *next.entry(prod).or_insert(0) += c * f;
                }
                keep
            };
            match val[v] {
                // 1/(1-t)^2 and 1/(1-t)
                0 | 1 => {
                    let mut j = 0;
                    while add(j, if val[v] == 0 { j + 1 } else { 1 }) {
                        j += 1;
                    }
                }
                2 => {
                    add(0, 1);
                }
                k => {
                    let e = k as i64 - 2;
                    for j in 0..=e {
                        add(j, if j % 2 == 0 { binom(e, j) } else { -binom(e, j) });
                    }
                }
            }
        }
        next.retain(|_, c| *c != 0);
        acc = next;
    }
    let d = Q::from_integer(den);
    acc.into_iter().map(|(e, c)| (e.into_iter().map(|a| q(a) / &d).collect(), c)).collect()
}

/// `Q_{[rep], I}(x)` by expanding the series.
pub fn naive_q(m: &[Vec<i64>], val: &[usize], rep: &[Q], x: &[Q], subset: &[usize]) -> i64 {
    series_terms(m, val, x, subset).iter().filter(|(e, _)| same_class(e, rep)).map(|(_, c)| c).sum()
}

/// `delta = Q_{[Z_K + s]}(Z_K + s)` with `s` from the box search.
pub fn naive_delta(m: &[Vec<i64>], val: &[usize], s: &[Q]) -> i64 {
    let zk = canonical(m);
    let x: Vec<Q> = s.iter().zip(&zk).map(|(a, b)| a + b).collect();
    let all: Vec<usize> = (0..m.len()).collect();
    naive_q(m, val, &x, &x, &all)
}

/// Common denominator `den` of `M^{-1}` and the columns `den * E*_v`.
pub fn scaled_duals(m: &[Vec<i64>]) -> (i64, Vec<Vec<i64>>) {
    let inv = inverse(m);
    let den = inv.iter().flatten().fold(BigInt::from(1), |acc, c| num_integer::Integer::lcm(&acc, c.denom()));
    let den_q = Q::from_integer(den.clone());
    let cols = (0..m.len())
        .map(|v| inv.iter().map(|row| (-&row[v] * &den_q).to_integer().try_into().unwrap()).collect())
        .collect();
    (den.try_into().unwrap(), cols)
}

/// Minimal anti-nef cycle in the class of `sum a_v E*_v`, by Laufer's
/// algorithm from the representative with coefficients in `[0, 1)`. Returns
/// its E*-coordinates and its E-coefficients scaled by `den`.
pub fn laufer_dual(m: &[Vec<i64>], den: i64, cols: &[Vec<i64>], a: &[i64]) -> (Vec<i64>, Vec<i64>) {
    let n = m.len();
    let mut x: Vec<i64> = (0..n).map(|u| (0..n).map(|v| a[v] * cols[v][u]).sum::<i64>().rem_euclid(den)).collect();
    let pairing = |x: &[i64], v: usize| m[v].iter().zip(x).map(|(p, q)| p * q).sum::<i64>();
    while let Some(v) = (0..n).find(|&v| pairing(&x, v) > 0) {
        x[v] += den;
    }
    let dual = (0..n)
        .map(|v| {
            let p = pairing(&x, v);
            assert_eq!(p % den, 0);
            -p / den
        })
        .collect();
    (dual, x)
}

/// Negative continued fraction expansion `d/q = [k_1, ..., k_s]`.
pub fn hj(mut d: i64, mut q: i64) -> Vec<i64> {
    let mut ks = vec![];
    while q > 0 {
        let k = (d + q - 1) / q;
        ks.push(k);
        (d, q) = (q, k * q - d);
    }
    ks
}

/// Determinants of the tails `k_{j+1}, ..., k_s` for `j = 1..s`.
pub fn tail_dets(ks: &[i64]) -> Vec<i64> {
    let s = ks.len();
    let mut out = vec![0; s + 1];
    out[s - 1] = 1;
    if s >= 2 {
        out[s - 2] = ks[s - 1];
    }
    for j in (0..s.saturating_sub(2)).rev() {
        out[j] = ks[j + 1] * out[j + 1] - out[j + 2];
    }
    out.truncate(s);
    out
}

/// Star-shaped delta from first principles, for the graph with center 0 and
/// the legs attached in order, as built by `seifert_graph`.
pub struct StarOracle {
    pub s_h: Vec<i64>,
    pub r: i64,
    pub s_h0: Q,
    pub gamma: Q,
    /// `(a_0, a_1, ..., a_nu)`
    pub reduced: Vec<i64>,
    pub n_values: Vec<(i64, i64)>,
    pub delta: i64,
}

impl StarOracle {
    /// `N_ã(-t) = nu - 1 + a_0 - k t + sum floor((q_i t + a_i - 1)/d_i)`.
    pub fn n_at(&self, k: i64, legs: &[(i64, i64)], t: i64) -> i64 {
        let nu = legs.len() as i64;
        legs.iter()
            .zip(&self.reduced[1..])
            .map(|(&(d, q), &a)| num_integer::Integer::div_floor(&(q * t + a - 1), &d))
            .sum::<i64>()
            + nu
            - 1
            + self.reduced[0]
            - k * t
    }

    /// `R(t) = 1 + a_0 - k t + sum floor((q_i t + a_i)/d_i)`.
    pub fn r_at(&self, k: i64, legs: &[(i64, i64)], t: i64) -> i64 {
        legs.iter()
            .zip(&self.reduced[1..])
            .map(|(&(d, q), &a)| num_integer::Integer::div_floor(&(q * t + a), &d))
            .sum::<i64>()
            + 1
            + self.reduced[0]
            - k * t
    }
}

pub fn star_oracle(m: &[Vec<i64>], k: i64, legs: &[(i64, i64)], rep: &[i64]) -> StarOracle {
    let (den, cols) = scaled_duals(m);
    let (s_h, x) = laufer_dual(m, den, &cols, rep);
    let mut reduced = vec![s_h[0]];
    let mut offset = 1;
    for &(d, q) in legs {
        let ks = hj(d, q);
        let w = tail_dets(&ks);
        reduced.push((0..ks.len()).map(|j| w[j] * s_h[offset + j]).sum());
        offset += ks.len();
    }
    let s_h0 = frac(x[0], den);
    let gamma = canonical(m)[0].clone() - q(1);
    let lo: i64 = (-&gamma - &s_h0).ceil().to_integer().try_into().unwrap();
    let mut out = StarOracle { r: s_h.iter().sum(), s_h, s_h0, gamma, reduced, n_values: vec![], delta: 0 };
    out.n_values = (lo..=-1).map(|n| (n, out.n_at(k, legs, -n))).collect();
    out.delta = out.r - 1 + out.n_values.iter().map(|&(_, v)| v.max(0)).sum::<i64>();
    out
}
