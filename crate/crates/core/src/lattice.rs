//! The lattices `L ⊂ L'`, the pairing, the discriminant group `H = L'/L`,
//! the canonical cycle and the Riemann-Roch function `chi`.
//!
//! A [`Cycle`] stores exact E-coordinates. Most algorithms however run on
//! integer E*-coordinates: for `ℓ' ∈ L'` the numbers `a_v = -(ℓ', E_v)` are
//! integers, and the E-coordinates scaled by `d = |det M|` are `N a` with the
//! integer matrix `N = d (-M^{-1})`.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use crate::error::{inconsistency, Error, Result};
use crate::graph::DualGraph;
use crate::linalg::{self, RatMatrix};

/// An element of `L ⊗ Q`, stored by its E-coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Cycle {
    e: Vec<BigRational>,
}

impl Cycle {
    pub fn zero(n: usize) -> Self {
        Cycle { e: vec![BigRational::zero(); n] }
    }

    pub fn from_e(e: Vec<BigRational>) -> Self {
        Cycle { e }
    }

    pub fn from_e_int(e: &[i64]) -> Self {
        Cycle { e: e.iter().map(|&x| BigRational::from_integer(x.into())).collect() }
    }

    pub fn len(&self) -> usize {
        self.e.len()
    }

    pub fn is_empty(&self) -> bool {
        self.e.is_empty()
    }

    pub fn e_coeffs(&self) -> &[BigRational] {
        &self.e
    }

    pub fn coeff(&self, v: usize) -> &BigRational {
        &self.e[v]
    }

    pub fn is_zero(&self) -> bool {
        self.e.iter().all(Zero::is_zero)
    }

    /// True iff the cycle lies in `L` (all E-coordinates integral).
    pub fn is_integral(&self) -> bool {
        self.e.iter().all(|x| x.is_integer())
    }

    /// Coordinatewise `self <= other`.
    pub fn leq(&self, other: &Cycle) -> bool {
        self.e.len() == other.e.len() && self.e.iter().zip(&other.e).all(|(a, b)| a <= b)
    }

    /// Coordinatewise minimum.
    pub fn min(&self, other: &Cycle) -> Cycle {
        Cycle { e: self.e.iter().zip(&other.e).map(|(a, b)| a.min(b).clone()).collect() }
    }

    /// Restriction to the given vertices, in the given order.
    pub fn restrict(&self, vertices: &[usize]) -> Cycle {
        Cycle { e: vertices.iter().map(|&v| self.e[v].clone()).collect() }
    }
}

impl fmt::Display for Cycle {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(")?;
        for (i, x) in self.e.iter().enumerate() {
            if i > 0 {
                write!(f, ", ")?;
            }
            write!(f, "{x}")?;
        }
        write!(f, ")")
    }
}

impl Add for &Cycle {
    type Output = Cycle;
    fn add(self, rhs: &Cycle) -> Cycle {
        assert_eq!(self.len(), rhs.len(), "cycles on different graphs");
        Cycle { e: self.e.iter().zip(&rhs.e).map(|(a, b)| a + b).collect() }
    }
}

impl Sub for &Cycle {
    type Output = Cycle;
    fn sub(self, rhs: &Cycle) -> Cycle {
        assert_eq!(self.len(), rhs.len(), "cycles on different graphs");
        Cycle { e: self.e.iter().zip(&rhs.e).map(|(a, b)| a - b).collect() }
    }
}

impl Neg for &Cycle {
    type Output = Cycle;
    fn neg(self) -> Cycle {
        Cycle { e: self.e.iter().map(|a| -a).collect() }
    }
}

impl Mul<i64> for &Cycle {
    type Output = Cycle;
    fn mul(self, k: i64) -> Cycle {
        let k = BigRational::from_integer(k.into());
        Cycle { e: self.e.iter().map(|a| a * &k).collect() }
    }
}

/// JSON form of a cycle: exact rational strings in both bases.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CycleJson {
    #[serde(rename = "E")]
    pub e: Vec<String>,
    #[serde(rename = "E*")]
    pub dual: Vec<String>,
}

/// Serializes an exact rational as its `p/q` string.
pub(crate) fn serialize_rational<S: serde::Serializer>(x: &BigRational, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

/// An element of `H`, given by its coordinates modulo the elementary divisors.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Class(pub Vec<i64>);

impl Class {
    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&c| c == 0)
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.0.iter().map(|c| c.to_string()).collect();
        write!(f, "[{}]", parts.join(","))
    }
}

/// `H = L'/L` read in E*-coordinates through a Smith normal form of `M`.
///
/// When `H` is cyclic and some `E*_v` generates it, the single coordinate is
/// normalized so that this generator has coordinate 1; the class id then is
/// the multiple of the generator.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DiscriminantGroup {
    divisors: Vec<i64>,
    rows: Vec<Vec<i64>>,
    generator: Option<usize>,
    /// E*-coordinates of the representative `r` of each unit class.
    unit_lifts: Vec<Vec<i64>>,
    vertices: usize,
}

impl DiscriminantGroup {
    /// Order `|H| = |det M|`.
    pub fn order(&self) -> usize {
        self.divisors.iter().product::<i64>() as usize
    }

    /// Elementary divisors greater than one, each dividing the next.
    pub fn divisors(&self) -> &[i64] {
        &self.divisors
    }

    pub fn is_cyclic(&self) -> bool {
        self.divisors.len() <= 1
    }

    /// Vertex whose dual cycle is the distinguished generator, if any.
    pub fn generator(&self) -> Option<usize> {
        self.generator
    }

    pub fn zero(&self) -> Class {
        Class(vec![0; self.divisors.len()])
    }

    pub fn class_of_dual(&self, a: &[i64]) -> Class {
        Class(
            self.rows
                .iter()
                .zip(&self.divisors)
                .map(|(row, &d)| {
                    row.iter()
                        .zip(a)
                        .fold(0i128, |acc, (&r, &x)| (acc + r as i128 * x as i128).rem_euclid(d as i128))
                        as i64
                })
                .collect(),
        )
    }

    pub fn add(&self, x: &Class, y: &Class) -> Class {
        Class(
            x.0.iter()
                .zip(&y.0)
                .zip(&self.divisors)
                .map(|((a, b), d)| (a + b).rem_euclid(*d))
                .collect(),
        )
    }

    pub fn neg(&self, x: &Class) -> Class {
        Class(x.0.iter().zip(&self.divisors).map(|(a, d)| (-a).rem_euclid(*d)).collect())
    }

    /// Position of the class in the enumeration order (mixed radix).
    pub fn index(&self, x: &Class) -> usize {
        x.0.iter()
            .zip(&self.divisors)
            .fold(0usize, |acc, (&c, &d)| acc * d as usize + c as usize)
    }

    pub fn from_index(&self, mut idx: usize) -> Class {
        let mut out = vec![0; self.divisors.len()];
        for (slot, &d) in out.iter_mut().zip(&self.divisors).rev() {
            *slot = (idx % d as usize) as i64;
            idx /= d as usize;
        }
        Class(out)
    }

    /// All classes, zero first, in lexicographic order of their coordinates.
    pub fn classes(&self) -> Vec<Class> {
        (0..self.order()).map(|i| self.from_index(i)).collect()
    }

    /// Order of `x` in `H`.
    pub fn order_of(&self, x: &Class) -> usize {
        let mut acc = x.clone();
        let mut k = 1;
        while !acc.is_zero() {
            acc = self.add(&acc, x);
            k += 1;
        }
        k
    }

    /// Some element of `L'` (in E*-coordinates) with the given class.
    pub fn lift(&self, x: &Class) -> Vec<i64> {
        let mut out = vec![0i64; self.vertices];
        for (&c, lift) in x.0.iter().zip(&self.unit_lifts) {
            for (o, &l) in out.iter_mut().zip(lift) {
                *o += c * l;
            }
        }
        out
    }
}

/// Precomputed lattice data of a dual graph.
#[derive(Debug, Clone)]
pub struct Lattice {
    graph: DualGraph,
    m: Vec<Vec<i64>>,
    det: i64,
    dual: RatMatrix,
    scaled: Vec<Vec<i64>>,
    group: DiscriminantGroup,
    zk_dual: Vec<i64>,
    zk: Cycle,
}

fn big_to_i64(x: &BigInt, what: &'static str) -> Result<i64> {
    x.to_i64().ok_or(Error::Overflow(what))
}

impl Lattice {
    pub fn new(graph: &DualGraph) -> Result<Self> {
        let im = graph.intersection_matrix();
        let m = im.rows().to_vec();
        let n = m.len();
        let det = big_to_i64(&im.determinant().abs(), "determinant")?;
        if det == 0 {
            return Err(Error::SingularMatrix);
        }
        let dual = im.dual_inverse()?;
        let d_big = BigRational::from_integer(det.into());
        let mut scaled = vec![vec![0i64; n]; n];
        for u in 0..n {
            for v in 0..n {
                let x = &dual[u][v] * &d_big;
                if !x.is_integer() || !x.is_positive() {
                    return Err(inconsistency!("d(-M^-1) entry {x} at ({u},{v}) is not a positive integer"));
                }
                scaled[u][v] = big_to_i64(&x.to_integer(), "scaled inverse")?;
            }
        }
        let group = build_group(graph, &m, det, &scaled)?;

        // Z_K from the adjunction relations (Z_K, E_v) = m_vv + 2 ...
        let zk_dual: Vec<i64> = (0..n).map(|v| -m[v][v] - 2).collect();
        let zk = Cycle::from_e(mat_vec_rat(&dual, &zk_dual));
        // ... and from Z_K = E - sum (2 - val_v) E*_v
        let mut alt = vec![BigRational::one(); n];
        for v in 0..n {
            let c = BigRational::from_integer((2 - graph.valency(v) as i64).into());
            for (u, slot) in alt.iter_mut().enumerate() {
                *slot -= &c * &dual[u][v];
            }
        }
        if zk.e_coeffs() != alt.as_slice() {
            return Err(inconsistency!("the two canonical cycle formulas disagree: {zk} vs {}", Cycle::from_e(alt)));
        }
        Ok(Lattice { graph: graph.clone(), m, det, dual, scaled, group, zk_dual, zk })
    }

    pub fn graph(&self) -> &DualGraph {
        &self.graph
    }

    pub fn len(&self) -> usize {
        self.m.len()
    }

    pub fn is_empty(&self) -> bool {
        self.m.is_empty()
    }

    /// `d = |det M|`.
    pub fn det(&self) -> i64 {
        self.det
    }

    pub fn matrix(&self) -> &[Vec<i64>] {
        &self.m
    }

    /// `-M^{-1}`: column `v` is `E*_v` in E-coordinates.
    pub fn dual_matrix(&self) -> &RatMatrix {
        &self.dual
    }

    /// `N = d (-M^{-1})`, a symmetric matrix of positive integers.
    pub fn scaled_dual(&self) -> &[Vec<i64>] {
        &self.scaled
    }

    pub fn group(&self) -> &DiscriminantGroup {
        &self.group
    }

    fn check_len(&self, c: &Cycle) -> Result<()> {
        if c.len() != self.len() {
            return Err(Error::GraphMismatch { expected: self.len(), found: c.len() });
        }
        Ok(())
    }

    /// The base element `E_v`.
    pub fn e(&self, v: usize) -> Cycle {
        let mut x = vec![0; self.len()];
        x[v] = 1;
        Cycle::from_e_int(&x)
    }

    /// `E = sum_v E_v`.
    pub fn big_e(&self) -> Cycle {
        Cycle::from_e_int(&vec![1; self.len()])
    }

    /// The dual element `E*_v`.
    pub fn e_star(&self, v: usize) -> Cycle {
        let mut a = vec![0; self.len()];
        a[v] = 1;
        self.from_dual(&a)
    }

    /// Cycle with the given integer E*-coordinates.
    ///
    /// Panics if `a` does not have one entry per vertex.
    pub fn from_dual(&self, a: &[i64]) -> Cycle {
        assert_eq!(a.len(), self.len(), "E*-coordinates for a different graph");
        Cycle::from_e(mat_vec_rat(&self.dual, a))
    }

    /// Cycle with the given rational E*-coordinates.
    ///
    /// Panics if `a` does not have one entry per vertex.
    pub fn from_dual_rat(&self, a: &[BigRational]) -> Cycle {
        let n = self.len();
        assert_eq!(a.len(), n, "E*-coordinates for a different graph");
        Cycle::from_e(
            (0..n)
                .map(|u| (0..n).map(|v| &self.dual[u][v] * &a[v]).sum())
                .collect(),
        )
    }

    /// E*-coordinates `a_v = -(ℓ', E_v)`.
    pub fn dual_coords(&self, c: &Cycle) -> Result<Vec<BigRational>> {
        self.check_len(c)?;
        Ok(self
            .m
            .iter()
            .map(|row| {
                -row.iter()
                    .zip(c.e_coeffs())
                    .map(|(&m, x)| x * BigRational::from_integer(m.into()))
                    .sum::<BigRational>()
            })
            .collect())
    }

    /// Integer E*-coordinates; fails unless the cycle lies in `L'`.
    pub fn dual_int(&self, c: &Cycle) -> Result<Vec<i64>> {
        self.dual_coords(c)?
            .iter()
            .map(|x| {
                if x.is_integer() {
                    big_to_i64(&x.to_integer(), "dual coordinates")
                } else {
                    Err(Error::NotInLPrime)
                }
            })
            .collect()
    }

    /// `d` times the E-coordinates of the element with E*-coordinates `a`.
    pub fn scaled_e(&self, a: &[i64]) -> Result<Vec<i64>> {
        if a.len() != self.len() {
            return Err(Error::GraphMismatch { expected: self.len(), found: a.len() });
        }
        self.scaled
            .iter()
            .map(|row| {
                row.iter().zip(a).try_fold(0i64, |acc, (&n, &x)| {
                    n.checked_mul(x).and_then(|t| acc.checked_add(t)).ok_or(Error::Overflow("scaled coordinates"))
                })
            })
            .collect()
    }

    /// The intersection form `x^T M y` on E-coordinates.
    pub fn pairing(&self, x: &Cycle, y: &Cycle) -> Result<BigRational> {
        self.check_len(x)?;
        self.check_len(y)?;
        let n = self.len();
        let mut acc = BigRational::zero();
        for u in 0..n {
            if x.e[u].is_zero() {
                continue;
            }
            let mut row = BigRational::zero();
            for v in 0..n {
                if self.m[u][v] != 0 {
                    row += &y.e[v] * BigRational::from_integer(self.m[u][v].into());
                }
            }
            acc += &x.e[u] * row;
        }
        Ok(acc)
    }

    /// The canonical cycle `Z_K`.
    pub fn canonical_cycle(&self) -> &Cycle {
        &self.zk
    }

    /// E*-coordinates of `Z_K`, namely `-m_vv - 2`.
    pub fn canonical_dual(&self) -> &[i64] {
        &self.zk_dual
    }

    /// `chi(ℓ') = -(ℓ', ℓ' - Z_K) / 2`.
    pub fn chi(&self, c: &Cycle) -> Result<BigRational> {
        self.check_len(c)?;
        let diff = c - &self.zk;
        Ok(-self.pairing(c, &diff)? / BigRational::from_integer(2.into()))
    }

    /// `chi` of the element with integer E*-coordinates `a`, in exact integer
    /// arithmetic: `sum_v a_v (X_v - Z_v) / (2d)` with scaled E-coordinates.
    pub fn chi_dual(&self, a: &[i64]) -> Result<BigRational> {
        let x = self.scaled_e(a)?;
        let z = self.scaled_e(&self.zk_dual)?;
        let num: i128 = a
            .iter()
            .zip(x.iter().zip(&z))
            .map(|(&ai, (&xi, &zi))| ai as i128 * (xi as i128 - zi as i128))
            .sum();
        Ok(BigRational::new(BigInt::from(num), BigInt::from(2 * self.det)))
    }

    pub fn class_of(&self, c: &Cycle) -> Result<Class> {
        Ok(self.group.class_of_dual(&self.dual_int(c)?))
    }

    /// E*-coordinates of `r_h`, the class representative with all
    /// E-coordinates in `[0, 1)`.
    pub fn r_dual(&self, h: &Class) -> Result<Vec<i64>> {
        let lift = self.group.lift(h);
        self.reduce_to_r(&lift)
    }

    /// Subtracts the integral part of `ℓ'` (given in E*-coordinates).
    pub(crate) fn reduce_to_r(&self, a: &[i64]) -> Result<Vec<i64>> {
        let x = self.scaled_e(a)?;
        let floor: Vec<i64> = x.iter().map(|&xi| Integer::div_floor(&xi, &self.det)).collect();
        // dual coordinates of an integral cycle ℓ are -M ℓ
        let mut out = a.to_vec();
        for (v, slot) in out.iter_mut().enumerate() {
            for (u, &f) in floor.iter().enumerate() {
                *slot = slot
                    .checked_add(self.m[v][u].checked_mul(f).ok_or(Error::Overflow("r_h"))?)
                    .ok_or(Error::Overflow("r_h"))?;
            }
        }
        Ok(out)
    }

    pub fn r_of(&self, h: &Class) -> Result<Cycle> {
        Ok(self.from_dual(&self.r_dual(h)?))
    }

    /// Every class with its representative `r_h`, zero class first.
    pub fn enumerate_classes(&self) -> Result<Vec<(Class, Cycle)>> {
        self.group
            .classes()
            .into_iter()
            .map(|h| {
                let r = self.r_of(&h)?;
                Ok((h, r))
            })
            .collect()
    }

    /// Class id used in reports: the enumeration index.
    pub fn class_id(&self, h: &Class) -> usize {
        self.group.index(h)
    }

    /// Parses a sum of terms separated by `+`: `zk` for `Z_K`, `e` for `E`,
    /// `e:c_0,c_1,...` for E-coefficients and `dual:a_0,a_1,...` for
    /// E*-coordinates. Coefficients are integers or `p/q`.
    pub fn parse_cycle(&self, text: &str) -> Result<Cycle> {
        let mut total = Cycle::zero(self.len());
        for term in text.split('+').map(str::trim) {
            let coeffs = |list: &str| -> Result<Vec<BigRational>> {
                let out = list
                    .split(',')
                    .map(|x| x.trim().parse::<BigRational>().map_err(|_| Error::Parse(format!("bad coefficient {x:?}"))))
                    .collect::<Result<Vec<_>>>()?;
                if out.len() != self.len() {
                    return Err(Error::GraphMismatch { expected: self.len(), found: out.len() });
                }
                Ok(out)
            };
            let c = match term {
                "zk" => self.canonical_cycle().clone(),
                "e" => self.big_e(),
                _ => {
                    if let Some(list) = term.strip_prefix("e:") {
                        Cycle::from_e(coeffs(list)?)
                    } else if let Some(list) = term.strip_prefix("dual:") {
                        self.from_dual_rat(&coeffs(list)?)
                    } else {
                        return Err(Error::Parse(format!("unrecognized cycle term {term:?}")));
                    }
                }
            };
            total = &total + &c;
        }
        Ok(total)
    }

    pub fn cycle_json(&self, c: &Cycle) -> CycleJson {
        let dual = self
            .dual_coords(c)
            .map(|a| a.iter().map(|x| x.to_string()).collect())
            .unwrap_or_default();
        CycleJson { e: c.e_coeffs().iter().map(|x| x.to_string()).collect(), dual }
    }
}

fn mat_vec_rat(m: &RatMatrix, a: &[i64]) -> Vec<BigRational> {
    m.iter()
        .map(|row| {
            row.iter()
                .zip(a)
                .filter(|(_, &x)| x != 0)
                .map(|(r, &x)| r * BigRational::from_integer(x.into()))
                .sum()
        })
        .collect()
}

fn build_group(graph: &DualGraph, m: &[Vec<i64>], det: i64, scaled: &[Vec<i64>]) -> Result<DiscriminantGroup> {
    let n = m.len();
    let snf = linalg::smith(&linalg::to_big(m));
    let prod: BigInt = snf.diagonal.iter().product();
    if prod.abs() != BigInt::from(det) {
        return Err(inconsistency!("Smith diagonal product {prod} differs from |det M| = {det}"));
    }
    let mut divisors = vec![];
    let mut rows = vec![];
    let mut cols = vec![];
    for (i, dbig) in snf.diagonal.iter().enumerate() {
        if dbig.is_one() {
            continue;
        }
        let d = big_to_i64(dbig, "elementary divisor")?;
        let row = snf.left[i]
            .iter()
            .map(|x| big_to_i64(&x.mod_floor(dbig), "class map"))
            .collect::<Result<Vec<_>>>()?;
        let col: Vec<BigInt> = (0..n).map(|k| snf.left_inv[k][i].clone()).collect();
        divisors.push(d);
        rows.push(row);
        cols.push(col);
    }
    let mut group = DiscriminantGroup { divisors, rows, generator: None, unit_lifts: vec![], vertices: n };

    if group.divisors.len() == 1 {
        let d = group.divisors[0];
        let candidates: Vec<usize> = match graph.string_order() {
            Some(order) => vec![*order.last().expect("nonempty")],
            None => {
                let mut c: Vec<usize> = graph.nodes();
                c.sort_by_key(|&v| std::cmp::Reverse(graph.valency(v)));
                c.truncate(1);
                c
            }
        };
        let unit = |v: usize| -> Option<i64> {
            let c = group.rows[0][v];
            (c.gcd(&d) == 1).then_some(c)
        };
        let pick = candidates
            .iter()
            .copied()
            .find(|&v| unit(v).is_some())
            .or_else(|| (0..n).find(|&v| unit(v).is_some()));
        if let Some(v) = pick {
            let u = unit(v).expect("unit");
            let inv = mod_inverse(u, d);
            for x in &mut group.rows[0] {
                *x = ((*x as i128 * inv as i128).rem_euclid(d as i128)) as i64;
            }
            group.generator = Some(v);
            let mut e = vec![0; n];
            e[v] = 1;
            cols[0] = e.into_iter().map(BigInt::from).collect();
        }
    }

    // replace each unit lift by its reduced representative r
    let lat_reduce = |col: &[BigInt]| -> Result<Vec<i64>> {
        let mut out = Vec::with_capacity(n);
        let x: Vec<BigInt> = (0..n)
            .map(|u| (0..n).map(|v| BigInt::from(scaled[u][v]) * &col[v]).sum())
            .collect();
        let floor: Vec<BigInt> = x.iter().map(|xi| Integer::div_floor(xi, &BigInt::from(det))).collect();
        for v in 0..n {
            let mut s = col[v].clone();
            for u in 0..n {
                s += BigInt::from(m[v][u]) * &floor[u];
            }
            out.push(big_to_i64(&s, "class lift")?);
        }
        Ok(out)
    };
    group.unit_lifts = cols.iter().map(|c| lat_reduce(c)).collect::<Result<_>>()?;
    for (i, lift) in group.unit_lifts.iter().enumerate() {
        let mut expect = vec![0; group.divisors.len()];
        expect[i] = 1;
        if group.class_of_dual(lift).0 != expect {
            return Err(inconsistency!("unit lift {i} has the wrong class"));
        }
    }
    Ok(group)
}

fn mod_inverse(u: i64, d: i64) -> i64 {
    let e = (u as i128).extended_gcd(&(d as i128));
    (e.x.rem_euclid(d as i128)) as i64
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn q(a: i64, b: i64) -> BigRational {
        BigRational::new(a.into(), b.into())
    }

    fn lat(s: &str) -> Lattice {
        Lattice::new(&parse_graph(s).unwrap()).unwrap()
    }

    #[test]
    fn dual_basis_pairs_to_minus_delta() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        for u in 0..l.len() {
            for v in 0..l.len() {
                let p = l.pairing(&l.e_star(u), &l.e(v)).unwrap();
                assert_eq!(p, if u == v { -BigRational::one() } else { BigRational::zero() });
            }
        }
    }

    #[test]
    fn star_center_pairings() {
        // e = -2 + 1/2 + 2/3 + 2/5 = -13/30
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        let e = q(-13, 30);
        assert_eq!(l.pairing(&l.e_star(0), &l.e_star(0)).unwrap(), e.recip());
        // leg ends: E_{1,1} = 1, E_{2,2} = 3, E_{3,2} = 5
        for (end, d) in [(1usize, 2i64), (3, 3), (5, 5)] {
            let expect = (&e * BigRational::from_integer(d.into())).recip();
            assert_eq!(l.pairing(&l.e_star(0), &l.e_star(end)).unwrap(), expect);
        }
    }

    #[test]
    fn exceptional_star_group_and_canonical_cycle() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        assert_eq!(l.group().order(), 13);
        assert_eq!(l.group().generator(), Some(0));
        // [E*_0]=1, [E*_11]=7, [E*_21]=5, [E*_22]=9, [E*_31]=3, [E*_32]=8
        let ids: Vec<i64> = (0..6).map(|v| l.class_of(&l.e_star(v)).unwrap().0[0]).collect();
        assert_eq!(ids, vec![1, 7, 5, 9, 3, 8]);
        assert_eq!(l.canonical_cycle(), &l.e_star(4));
        assert_eq!(l.canonical_cycle().coeff(0), &q(12, 13));
    }

    #[test]
    fn second_exceptional_star() {
        let l = lat("sf:-2;(2,1),(3,2),(5,3)");
        assert_eq!(l.group().order(), 7);
        let ids: Vec<i64> = (0..6).map(|v| l.class_of(&l.e_star(v)).unwrap().0[0]).collect();
        assert_eq!(ids, vec![1, 4, 3, 5, 2, 3]);
        assert_eq!(l.canonical_cycle(), &l.e_star(5));
        assert_eq!(l.canonical_cycle().coeff(0), &q(6, 7));
    }

    #[test]
    fn canonical_cycles() {
        for s in ["ade:E6", "ade:E7", "ade:E8", "ade:Dn:5", "ade:An:3"] {
            assert!(lat(s).canonical_cycle().is_zero(), "{s}");
        }
        let l = lat("sf:-4;(2,1)x4");
        assert_eq!(l.canonical_cycle(), &(&l.e_star(0) * 2));
    }

    #[test]
    fn e8_is_unimodular() {
        let l = lat("ade:E8");
        assert_eq!(l.group().order(), 1);
        for v in 0..8 {
            assert!(l.class_of(&l.e_star(v)).unwrap().is_zero());
        }
        assert_eq!(l.enumerate_classes().unwrap().len(), 1);
    }

    #[test]
    fn string_generator_is_last_vertex() {
        let l = lat("cqs:15/11");
        assert_eq!(l.group().generator(), Some(4));
        assert_eq!(l.group().order(), 15);
        assert_eq!(l.class_of(&l.e_star(4)).unwrap(), Class(vec![1]));
    }

    #[test]
    fn d4_group_is_not_cyclic() {
        let l = lat("ade:Dn:4");
        assert_eq!(l.group().divisors(), &[2, 2]);
        assert_eq!(l.group().generator(), None);
        let classes = l.enumerate_classes().unwrap();
        assert_eq!(classes.len(), 4);
        assert!(classes[0].0.is_zero());
    }

    #[test]
    fn representatives_lie_in_unit_box() {
        for s in ["cqs:15/11", "sf:-2;(2,1),(3,2),(5,2)", "ade:Dn:6", "sf:-3;(3,1),(3,2),(2,1)"] {
            let l = lat(s);
            let classes = l.enumerate_classes().unwrap();
            assert_eq!(classes.len(), l.det() as usize);
            assert!(classes[0].1.is_zero());
            for (h, r) in &classes {
                assert_eq!(&l.class_of(r).unwrap(), h);
                for x in r.e_coeffs() {
                    assert!(!x.is_negative() && x < &BigRational::one());
                }
            }
        }
    }

    #[test]
    fn single_vertex_representatives() {
        let l = lat("cqs:7/1");
        for a in 0..7 {
            let h = l.class_of(&l.from_dual(&[a])).unwrap();
            assert_eq!(l.r_of(&h).unwrap(), Cycle::from_e(vec![q(a, 7)]));
        }
    }

    #[test]
    fn minus_class_representative() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        for (h, r) in l.enumerate_classes().unwrap() {
            let rm = l.r_of(&l.group().neg(&h)).unwrap();
            for v in 0..l.len() {
                let (a, b) = (r.coeff(v), rm.coeff(v));
                if a.is_zero() {
                    assert!(b.is_zero());
                } else {
                    assert_eq!(b, &(BigRational::one() - a));
                }
            }
        }
    }

    #[test]
    fn chi_basics() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        assert!(l.chi(&Cycle::zero(6)).unwrap().is_zero());
        assert!(l.chi(l.canonical_cycle()).unwrap().is_zero());
        for a in [[1, 0, 0, 2, 0, 1], [0, 3, 1, 0, 0, 0]] {
            assert_eq!(l.chi_dual(&a).unwrap(), l.chi(&l.from_dual(&a)).unwrap());
        }
    }

    #[test]
    fn rejects_foreign_cycles() {
        let l = lat("cqs:5/2");
        assert_eq!(
            l.pairing(&Cycle::zero(3), &Cycle::zero(2)),
            Err(Error::GraphMismatch { expected: 2, found: 3 })
        );
        assert_eq!(l.dual_int(&Cycle::from_e(vec![q(1, 7), q(0, 1)])), Err(Error::NotInLPrime));
    }

    #[test]
    fn cycle_syntax() {
        let l = Lattice::new(&parse_graph("cqs:5/2").unwrap()).unwrap();
        let x = l.parse_cycle("zk + e:1/5,0").unwrap();
        assert_eq!(x, &Cycle::from_e(vec![BigRational::new(1.into(), 5.into()), BigRational::zero()]) + l.canonical_cycle());
        assert_eq!(l.parse_cycle("dual:0,1").unwrap(), l.e_star(1));
        assert_eq!(l.parse_cycle("e").unwrap(), l.big_e());
        assert!(matches!(l.parse_cycle("e:1"), Err(Error::GraphMismatch { .. })));
        assert!(matches!(l.parse_cycle("x:1,2"), Err(Error::Parse(_))));
        assert!(matches!(l.parse_cycle("e:1,a"), Err(Error::Parse(_))));
    }
}
