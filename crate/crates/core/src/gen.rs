//! Seeded generators for test graph families.

use num_integer::Integer;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::graph::{cyclic_graph, seifert_graph, DualGraph};
use crate::laufer;
use crate::lattice::Lattice;

/// Limits for [`random_rational_graphs`].
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RandomSpec {
    pub count: usize,
    pub seed: u64,
    pub max_vertices: usize,
    pub max_det: i64,
}

impl Default for RandomSpec {
    fn default() -> Self {
        RandomSpec { count: 50, seed: 1, max_vertices: 7, max_det: 60 }
    }
}

/// Smallest tree on which `shape` (0: string, 1: one node, 2: several nodes)
/// can occur.
const MIN_VERTICES: [usize; 3] = [1, 4, 6];

fn random_tree(rng: &mut ChaCha8Rng, shape: usize, max_vertices: usize) -> Result<DualGraph> {
    let n = rng.gen_range(MIN_VERTICES[shape].min(max_vertices)..=max_vertices);
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    let mut val = vec![0i64; n];
    for &(a, b) in &edges {
        val[a] += 1;
        val[b] += 1;
    }
    // half the vertices stay at -2, which keeps the determinant small
    let euler: Vec<i64> =
        val.iter().map(|&k| if rng.gen_bool(0.5) { -2 } else { -2 - rng.gen_range(1..=k.max(2)) }).collect();
    DualGraph::new(euler, edges)
}

/// Rational trees with weights at most -2, between 1 and `max_vertices`
/// vertices, and `2 <= |det M| <= max_det`, drawn by rejection from a seeded
/// stream. Strings, graphs with one node and graphs with several nodes take
/// turns, as far as `max_vertices` allows. The same spec always yields the
/// same list.
pub fn random_rational_graphs(spec: &RandomSpec) -> Result<Vec<DualGraph>> {
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let shapes: Vec<usize> = (0..3).filter(|&s| MIN_VERTICES[s] <= spec.max_vertices.max(1)).collect();
    let mut out = Vec::with_capacity(spec.count);
    while out.len() < spec.count {
        let shape = shapes[out.len() % shapes.len()];
        let g = match random_tree(&mut rng, shape, spec.max_vertices.max(1)) {
            Ok(g) => g,
            // not negative definite
            Err(Error::Validation(_)) => continue,
            Err(e) => return Err(e),
        };
        if g.nodes().len().min(2) != shape {
            continue;
        }
        let lat = Lattice::new(&g)?;
        if lat.det() < 2 || lat.det() > spec.max_det || !laufer::is_rational(&lat)? {
            continue;
        }
        out.push(g);
    }
    Ok(out)
}

/// Seifert invariants `(-k; legs)` of every quotient star with three legs,
/// `d_i <= dmax` and `2 <= k <= kmax`. Legs are sorted and listed once per
/// multiset.
pub fn quotient_family(dmax: i64, kmax: i64) -> Vec<(i64, Vec<(i64, i64)>)> {
    let legs: Vec<(i64, i64)> =
        (2..=dmax).flat_map(|d| (1..d).filter(move |q| d.gcd(q) == 1).map(move |q| (d, q))).collect();
    let mut out = vec![];
    for (i, &a) in legs.iter().enumerate() {
        for (j, &b) in legs.iter().enumerate().skip(i) {
            for &c in legs.iter().skip(j) {
                // 1/a + 1/b + 1/c > 1, cleared of denominators
                if b.0 * c.0 + a.0 * c.0 + a.0 * b.0 <= a.0 * b.0 * c.0 {
                    continue;
                }
                for k in 2..=kmax {
                    // e < 0
                    let lhs = a.1 * b.0 * c.0 + b.1 * a.0 * c.0 + c.1 * a.0 * b.0;
                    if lhs < k * a.0 * b.0 * c.0 {
                        out.push((k, vec![a, b, c]));
                    }
                }
            }
        }
    }
    out
}

pub fn quotient_graphs(dmax: i64, kmax: i64) -> Result<Vec<(String, DualGraph)>> {
    quotient_family(dmax, kmax)
        .into_iter()
        .map(|(k, legs)| {
            let name = format!(
                "sf:-{k};{}",
                legs.iter().map(|(d, q)| format!("({d},{q})")).collect::<Vec<_>>().join(",")
            );
            Ok((name, seifert_graph(k, &legs)?))
        })
        .collect()
}

/// Every `cqs:d/q` with `2 <= d <= dmax`.
pub fn cyclic_graphs(dmax: i64) -> Result<Vec<(String, DualGraph)>> {
    let mut out = vec![];
    for d in 2..=dmax {
        for q in (1..d).filter(|q| d.gcd(q) == 1) {
            out.push((format!("cqs:{d}/{q}"), cyclic_graph(d, q)?));
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn random_graphs_are_reproducible() {
        let spec = RandomSpec { count: 8, ..Default::default() };
        let a = random_rational_graphs(&spec).unwrap();
        assert_eq!(a, random_rational_graphs(&spec).unwrap());
        assert_eq!(a.iter().filter(|g| g.nodes().len() == 1).count(), 3);
        for g in &a {
            assert!(g.len() <= 7);
            assert!(g.euler_numbers().iter().all(|&e| e <= -2));
        }
        let other = random_rational_graphs(&RandomSpec { seed: 2, ..spec }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn quotient_family_members() {
        let fam = quotient_family(7, 5);
        assert!(fam.contains(&(2, vec![(2, 1), (3, 2), (5, 2)])));
        assert!(fam.contains(&(2, vec![(2, 1), (3, 2), (5, 3)])));
        assert!(!fam.iter().any(|(_, l)| l.iter().map(|x| x.0).collect::<Vec<_>>() == vec![3, 3, 3]));
        // (2,1),(2,1),(2,1) with k = 2 has e = -1/2
        assert!(fam.contains(&(2, vec![(2, 1), (2, 1), (2, 1)])));
    }
}
