//! The topological Poincaré series `Z(t) = prod_v (1 - t^{E*_v})^{val_v - 2}`
//! and its counting functions.
//!
//! A monomial `t^{ℓ'}` is indexed by the E*-coordinates `n` of `ℓ'`, and the
//! coefficient factors over the vertices, so `z(n)` is known in closed form.
//! The counting functions sum `z` over the finite region `{ℓ' ≱ x}`. With
//! `X_u = ceil(d x_u)` and the scaled dual matrix `N`, the region condition
//! reads `(N n)_u < X_u` for some `u`, and since every entry of `N` is
//! positive each exponent is bounded once the others are fixed. The last end
//! vertex is summed in closed form over its class progression.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::ToPrimitive;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::Subgraph;
use crate::laufer;
use crate::lattice::{Class, Cycle, Lattice};

/// Coefficient of `y^n` in `(1 - y)^{val - 2}`.
pub fn vertex_coefficient(valency: usize, n: i64) -> i64 {
    match valency {
        0 => n + 1,
        1 => 1,
        2 => i64::from(n == 0),
        _ => {
            let top = valency as i64 - 2;
            if n > top {
                0
            } else {
                let sign = if n % 2 == 0 { 1 } else { -1 };
                sign * binomial(top, n)
            }
        }
    }
}

fn binomial(n: i64, k: i64) -> i64 {
    (0..k).fold(1i64, |acc, i| acc * (n - i) / (i + 1))
}

/// `z(ℓ')` for the element with E*-coordinates `n` (zero off `S'`).
pub fn z_coefficient(lat: &Lattice, n: &[i64]) -> i64 {
    if n.iter().any(|&x| x < 0) {
        return 0;
    }
    let g = lat.graph();
    n.iter().enumerate().map(|(v, &x)| vertex_coefficient(g.valency(v), x)).product()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesTerm {
    pub exponents: Vec<i64>,
    pub z: i64,
}

/// The nonzero coefficients of `Z(t)` on `{ℓ' ∈ S' : ℓ' ≱ x}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SeriesRegion {
    pub terms: Vec<SeriesTerm>,
}

impl SeriesRegion {
    pub fn get(&self, n: &[i64]) -> Option<i64> {
        self.terms
            .binary_search_by(|t| t.exponents.as_slice().cmp(n))
            .ok()
            .map(|i| self.terms[i].z)
    }
}

#[derive(Debug, Clone)]
enum Kind {
    Node(Vec<i64>),
    End,
    Lone,
}

#[derive(Debug, Clone)]
struct Var {
    kind: Kind,
    /// `N[u][v]` for the tracked `u`.
    col: Vec<i64>,
    shift: Vec<u32>,
    /// Order of `[E*_v]` and, per class index `c`, the least `t` with
    /// `t [E*_v] = c`.
    ord: usize,
    first_hit: Vec<u32>,
}

/// Enumerator for one bound `x` and one set `U` of tracked vertices.
struct Engine<'a> {
    lat: &'a Lattice,
    thresholds: Vec<i64>,
    vars: Vec<Var>,
    budget: u64,
}

const NONE: u32 = u32::MAX;

fn ceil_scaled(x: &BigRational, d: i64) -> Result<i64> {
    let y = x * BigRational::from_integer(BigInt::from(d));
    y.ceil().to_integer().to_i64().ok_or(Error::Overflow("region bound"))
}

impl<'a> Engine<'a> {
    fn new(lat: &'a Lattice, tracked: &[usize], x: &Cycle, budget: u64) -> Result<Self> {
        if x.len() != lat.len() {
            return Err(Error::GraphMismatch { expected: lat.len(), found: x.len() });
        }
        let g = lat.graph();
        let group = lat.group();
        let nmat = lat.scaled_dual();
        let order = group.order();
        let thresholds = tracked
            .iter()
            .map(|&u| ceil_scaled(x.coeff(u), lat.det()))
            .collect::<Result<Vec<_>>>()?;
        let mut nodes = vec![];
        let mut ends = vec![];
        for v in 0..lat.len() {
            match g.valency(v) {
                0 => ends.push((v, Kind::Lone)),
                1 => ends.push((v, Kind::End)),
                2 => {}
                val => {
                    let coeffs = (0..=val as i64 - 2).map(|t| vertex_coefficient(val, t)).collect();
                    nodes.push((v, Kind::Node(coeffs)));
                }
            }
        }
        let mut vars = vec![];
        for (v, kind) in nodes.into_iter().chain(ends) {
            let mut unit = vec![0; lat.len()];
            unit[v] = 1;
            let cv = group.class_of_dual(&unit);
            let shift: Vec<u32> = (0..order)
                .map(|i| group.index(&group.add(&group.from_index(i), &cv)) as u32)
                .collect();
            let mut first_hit = vec![NONE; order];
            let mut c = 0usize;
            let mut t = 0u32;
            loop {
                first_hit[c] = t;
                c = shift[c] as usize;
                t += 1;
                if c == 0 {
                    break;
                }
            }
            vars.push(Var {
                kind,
                col: tracked.iter().map(|&u| nmat[u][v]).collect(),
                shift,
                ord: t as usize,
                first_hit,
            });
        }
        Ok(Engine { lat, thresholds, vars, budget })
    }

    /// Number of admissible values `0..m` of a variable given partial sums.
    fn range(&self, col: &[i64], partial: &[i64]) -> i64 {
        let mut m = 0;
        for (k, (&xk, &pk)) in self.thresholds.iter().zip(partial).enumerate() {
            if xk > pk {
                m = m.max(Integer::div_ceil(&(xk - pk), &col[k]));
            }
        }
        m
    }

    fn alive(&self, partial: &[i64]) -> bool {
        self.thresholds.iter().zip(partial).any(|(x, p)| p < x)
    }

    /// Sums `z` per class index over the region. With a target class only
    /// that entry is filled.
    fn run(&self, target: Option<usize>) -> Result<Vec<i64>> {
        let group = self.lat.group();
        let order = group.order();
        let mut out = vec![0i64; order];
        // index of `target - c` for every class index `c`
        let to_target: Vec<u32> = match target {
            Some(h) => {
                let th = group.from_index(h);
                (0..order)
                    .map(|c| group.index(&group.add(&th, &group.neg(&group.from_index(c)))) as u32)
                    .collect()
            }
            None => vec![],
        };
        let mut walk = Walk { engine: self, target, to_target, spent: 0, out: &mut out };
        let mut partial = vec![0i64; self.thresholds.len()];
        if self.alive(&partial) {
            walk.go(0, &mut partial, 0, 1)?;
        }
        Ok(out)
    }
}

struct Walk<'e, 'a> {
    engine: &'e Engine<'a>,
    target: Option<usize>,
    to_target: Vec<u32>,
    spent: u64,
    out: &'e mut [i64],
}

impl Walk<'_, '_> {
    fn tick(&mut self) -> Result<()> {
        self.spent += 1;
        if self.spent > self.engine.budget {
            return Err(Error::RegionTooLarge { budget: self.engine.budget });
        }
        Ok(())
    }

    fn go(&mut self, depth: usize, partial: &mut [i64], cls: usize, weight: i64) -> Result<()> {
        let engine = self.engine;
        let last = depth + 1 == engine.vars.len();
        let var = &engine.vars[depth];
        match &var.kind {
            Kind::Lone => {
                let m = engine.range(&var.col, partial);
                let mut c = cls;
                for t in 0..m {
                    self.tick()?;
                    self.out[c] += weight * (t + 1);
                    c = var.shift[c] as usize;
                }
            }
            Kind::End if last => {
                let m = engine.range(&var.col, partial);
                if m == 0 {
                    return Ok(());
                }
                self.tick()?;
                let ord = var.ord as i64;
                match self.target {
                    Some(h) => {
                        let f = var.first_hit[self.to_target[cls] as usize];
                        if f != NONE && (f as i64) < m {
                            self.out[h] += weight * ((m - 1 - f as i64) / ord + 1);
                        }
                    }
                    None => {
                        let mut c = cls;
                        for j in 0..m.min(ord) {
                            self.out[c] += weight * ((m - 1 - j) / ord + 1);
                            c = var.shift[c] as usize;
                        }
                    }
                }
            }
            Kind::End => {
                let m = engine.range(&var.col, partial);
                let mut c = cls;
                for _ in 0..m {
                    self.tick()?;
                    self.go(depth + 1, partial, c, weight)?;
                    for (p, &n) in partial.iter_mut().zip(&var.col) {
                        *p += n;
                    }
                    c = var.shift[c] as usize;
                }
                for (p, &n) in partial.iter_mut().zip(&var.col) {
                    *p -= n * m;
                }
            }
            Kind::Node(coeffs) => {
                let mut c = cls;
                let mut used = 0i64;
                for &z in coeffs {
                    if !engine.alive(partial) {
                        break;
                    }
                    self.tick()?;
                    if last {
                        self.out[c] += weight * z;
                    } else {
                        self.go(depth + 1, partial, c, weight * z)?;
                    }
                    for (p, &n) in partial.iter_mut().zip(&var.col) {
                        *p += n;
                    }
                    used += 1;
                    c = var.shift[c] as usize;
                }
                for (p, &n) in partial.iter_mut().zip(&var.col) {
                    *p -= n * used;
                }
            }
        }
        Ok(())
    }
}

fn check_subset(lat: &Lattice, subset: &[usize]) -> Result<()> {
    if subset.is_empty() {
        return Err(Error::PreconditionFailed("vertex subset must be nonempty".into()));
    }
    if let Some(&v) = subset.iter().find(|&&v| v >= lat.len()) {
        return Err(Error::OutOfRange { value: v as i64, what: "vertex index".into() });
    }
    Ok(())
}

/// `Q_{h,I}(x)`: sum of `z(ℓ')` over class `h` with `ℓ'|_I ≱ x|_I`.
pub fn counting_q_i(lat: &Lattice, h: &Class, subset: &[usize], x: &Cycle, budget: u64) -> Result<i64> {
    check_subset(lat, subset)?;
    let idx = lat.group().index(h);
    let engine = Engine::new(lat, subset, x, budget)?;
    Ok(engine.run(Some(idx))?[idx])
}

/// `Q_h(x)`: sum of `z(ℓ')` over class `h` with `ℓ' ≱ x`.
pub fn counting_q(lat: &Lattice, h: &Class, x: &Cycle, budget: u64) -> Result<i64> {
    let all: Vec<usize> = (0..lat.len()).collect();
    counting_q_i(lat, h, &all, x, budget)
}

/// `Q_{h,I}(x)` for every class at once, indexed by class index.
pub fn counting_q_all(lat: &Lattice, subset: &[usize], x: &Cycle, budget: u64) -> Result<Vec<i64>> {
    check_subset(lat, subset)?;
    Engine::new(lat, subset, x, budget)?.run(None)
}

/// Lists every nonzero coefficient of `Z(t)` in the region `ℓ' ≱ x`.
pub fn z_coefficients(lat: &Lattice, x: &Cycle, budget: u64) -> Result<SeriesRegion> {
    let n = lat.len();
    let all: Vec<usize> = (0..n).collect();
    let engine = Engine::new(lat, &all, x, budget)?;
    let g = lat.graph();
    // per-vertex maximal exponent: nodes are bounded, val-2 vertices vanish
    let nmat = lat.scaled_dual();
    let mut terms = vec![];
    let mut exps = vec![0i64; n];
    let mut partial = vec![0i64; n];
    let mut spent = 0u64;
    #[allow(clippy::too_many_arguments)]
    fn rec(
        v: usize,
        g: &crate::graph::DualGraph,
        nmat: &[Vec<i64>],
        thresholds: &[i64],
        exps: &mut Vec<i64>,
        partial: &mut Vec<i64>,
        terms: &mut Vec<SeriesTerm>,
        spent: &mut u64,
        budget: u64,
    ) -> Result<()> {
        let n = exps.len();
        if v == n {
            if thresholds.iter().zip(partial.iter()).any(|(x, p)| p < x) {
                let z: i64 = exps.iter().enumerate().map(|(u, &t)| vertex_coefficient(g.valency(u), t)).product();
                if z != 0 {
                    terms.push(SeriesTerm { exponents: exps.clone(), z });
                }
            }
            return Ok(());
        }
        let val = g.valency(v);
        let mut t = 0i64;
        loop {
            if !thresholds.iter().zip(partial.iter()).any(|(x, p)| p < x) {
                break;
            }
            if val == 2 && t > 0 || val >= 3 && t > val as i64 - 2 {
                break;
            }
            *spent += 1;
            if *spent > budget {
                return Err(Error::RegionTooLarge { budget });
            }
            exps[v] = t;
            rec(v + 1, g, nmat, thresholds, exps, partial, terms, spent, budget)?;
            for (u, p) in partial.iter_mut().enumerate() {
                *p += nmat[u][v];
            }
            t += 1;
        }
        for (u, p) in partial.iter_mut().enumerate() {
            *p -= nmat[u][v] * t;
        }
        exps[v] = 0;
        Ok(())
    }
    rec(0, g, nmat, &engine.thresholds, &mut exps, &mut partial, &mut terms, &mut spent, budget)?;
    terms.sort_by(|a, b| a.exponents.cmp(&b.exponents));
    Ok(SeriesRegion { terms })
}

/// The dual restriction `j*`: keeps the E*-coordinates of the vertices of
/// the subgraph and drops the rest.
pub fn dual_project(lat: &Lattice, sub: &Subgraph, sub_lat: &Lattice, c: &Cycle) -> Result<Cycle> {
    let a = lat.dual_coords(c)?;
    let kept: Vec<BigRational> = sub.back_map.iter().map(|&v| a[v].clone()).collect();
    Ok(sub_lat.from_dual_rat(&kept))
}

/// Both sides of the surgery identity
/// `Q_h(x) = Q_{h,I}(x) + sum_k Q^{Γ_k}(j*_k x)`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryCheck {
    pub lhs: i64,
    pub restricted: i64,
    pub components: Vec<i64>,
    pub rhs: i64,
    pub holds: bool,
}

fn require_rational(lat: &Lattice) -> Result<()> {
    if !laufer::is_rational(lat)? {
        return Err(Error::NotRational);
    }
    Ok(())
}

pub fn surgery_check(lat: &Lattice, subset: &[usize], x: &Cycle, budget: u64) -> Result<SurgeryCheck> {
    require_rational(lat)?;
    check_subset(lat, subset)?;
    if !laufer::is_anti_nef(lat, &(x - lat.canonical_cycle()))? {
        return Err(Error::PreconditionFailed("x must lie in Z_K + S'".into()));
    }
    let h = lat.class_of(x)?;
    let lhs = counting_q(lat, &h, x, budget)?;
    let restricted = counting_q_i(lat, &h, subset, x, budget)?;
    let mut components = vec![];
    for sub in lat.graph().components_minus(subset) {
        let sub_lat = Lattice::new(&sub.graph)?;
        let y = dual_project(lat, &sub, &sub_lat, x)?;
        let hk = sub_lat.class_of(&y)?;
        components.push(counting_q(&sub_lat, &hk, &y, budget)?);
    }
    let rhs = restricted + components.iter().sum::<i64>();
    Ok(SurgeryCheck { lhs, restricted, components, rhs, holds: lhs == rhs })
}

/// `κ(ℓ'_C) = Q_{[Z_K + ℓ'_C]}(Z_K + ℓ'_C)` for `ℓ'_C ∈ S'`.
pub fn kappa_top(lat: &Lattice, c: &Cycle, budget: u64) -> Result<i64> {
    require_rational(lat)?;
    if !laufer::is_anti_nef(lat, c)? {
        return Err(Error::PreconditionFailed("cycle must be anti-nef".into()));
    }
    let x = c + lat.canonical_cycle();
    let h = lat.class_of(&x)?;
    counting_q(lat, &h, &x, budget)
}
