//! Plumbing graphs: validation, the intersection matrix, and input formats.

use std::collections::VecDeque;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use serde::{Deserialize, Serialize};

use crate::cyclic::hj_expand;
use crate::error::{Error, Result};
use crate::linalg::{self, IntMatrix, RatMatrix};

/// A weighted tree of rational exceptional curves.
///
/// Vertex identity is the zero-based input index. Construction validates that
/// the graph is a tree, that every genus is zero, and that the intersection
/// form is negative definite.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct DualGraph {
    euler: Vec<i64>,
    edges: Vec<(usize, usize)>,
    adjacency: Vec<Vec<usize>>,
}

impl DualGraph {
    pub fn new(euler: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let genera = vec![0; euler.len()];
        Self::with_genera(euler, genera, edges)
    }

    pub fn with_genera(euler: Vec<i64>, genera: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let g = Self::unchecked(euler, genera, edges)?;
        if !g.intersection_matrix().is_negative_definite() {
            return Err(Error::Validation("intersection matrix is not negative definite".into()));
        }
        Ok(g)
    }

    /// Structural checks only (tree, genus, weights); skips definiteness.
    fn unchecked(euler: Vec<i64>, genera: Vec<i64>, edges: Vec<(usize, usize)>) -> Result<Self> {
        let n = euler.len();
        if n == 0 {
            return Err(Error::Validation("graph has no vertices".into()));
        }
        if genera.len() != n {
            return Err(Error::Validation("genus list length mismatch".into()));
        }
        if let Some(v) = genera.iter().position(|&g| g != 0) {
            return Err(Error::Validation(format!("vertex {v} has genus {}, only 0 is supported", genera[v])));
        }
        if let Some(v) = euler.iter().position(|&e| e > -1) {
            return Err(Error::Validation(format!("vertex {v} has self-intersection {} > -1", euler[v])));
        }
        let mut adjacency = vec![Vec::new(); n];
        let mut canon = Vec::with_capacity(edges.len());
        for &(u, v) in &edges {
            if u >= n || v >= n {
                return Err(Error::Validation(format!("edge ({u},{v}) out of range")));
            }
            if u == v {
                return Err(Error::Validation(format!("loop at vertex {u}")));
            }
            if adjacency[u].contains(&v) {
                return Err(Error::Validation(format!("multiple edge ({u},{v})")));
            }
            adjacency[u].push(v);
            adjacency[v].push(u);
            canon.push((u.min(v), u.max(v)));
        }
        if canon.len() != n - 1 {
            return Err(Error::Validation(format!("{} edges on {n} vertices: not a tree", canon.len())));
        }
        let mut seen = vec![false; n];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(u) = queue.pop_front() {
            for &w in &adjacency[u] {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        if seen.iter().any(|s| !s) {
            return Err(Error::Validation("graph is not connected".into()));
        }
        for adj in &mut adjacency {
            adj.sort_unstable();
        }
        canon.sort_unstable();
        Ok(DualGraph { euler, edges: canon, adjacency })
    }

    pub fn len(&self) -> usize {
        self.euler.len()
    }

    pub fn is_empty(&self) -> bool {
        self.euler.is_empty()
    }

    pub fn euler(&self, v: usize) -> i64 {
        self.euler[v]
    }

    pub fn euler_numbers(&self) -> &[i64] {
        &self.euler
    }

    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn neighbors(&self, v: usize) -> &[usize] {
        &self.adjacency[v]
    }

    pub fn valency(&self, v: usize) -> usize {
        self.adjacency[v].len()
    }

    /// Vertices of valency at least three.
    pub fn nodes(&self) -> Vec<usize> {
        (0..self.len()).filter(|&v| self.valency(v) >= 3).collect()
    }

    pub fn is_string(&self) -> bool {
        self.nodes().is_empty()
    }

    /// Vertices of a string listed end to end, starting at the end with the
    /// smaller index (input order when the input already is a path).
    pub fn string_order(&self) -> Option<Vec<usize>> {
        if !self.is_string() {
            return None;
        }
        let start = (0..self.len()).find(|&v| self.valency(v) <= 1)?;
        let mut order = vec![start];
        let mut prev = usize::MAX;
        let mut cur = start;
        while let Some(&next) = self.adjacency[cur].iter().find(|&&w| w != prev) {
            order.push(next);
            prev = cur;
            cur = next;
        }
        Some(order)
    }

    pub fn intersection_matrix(&self) -> IntersectionMatrix {
        let n = self.len();
        let mut m = vec![vec![0i64; n]; n];
        for v in 0..n {
            m[v][v] = self.euler[v];
        }
        for &(u, v) in &self.edges {
            m[u][v] = 1;
            m[v][u] = 1;
        }
        IntersectionMatrix(m)
    }

    /// Connected components of the full subgraph on `V \ removed`.
    pub fn components_minus(&self, removed: &[usize]) -> Vec<Subgraph> {
        let n = self.len();
        let mut dropped = vec![false; n];
        for &v in removed {
            if v < n {
                dropped[v] = true;
            }
        }
        let mut comp = vec![usize::MAX; n];
        let mut out = Vec::new();
        for s in 0..n {
            if dropped[s] || comp[s] != usize::MAX {
                continue;
            }
            let id = out.len();
            let mut members = vec![];
            let mut queue = VecDeque::from([s]);
            comp[s] = id;
            while let Some(u) = queue.pop_front() {
                members.push(u);
                for &w in &self.adjacency[u] {
                    if !dropped[w] && comp[w] == usize::MAX {
                        comp[w] = id;
                        queue.push_back(w);
                    }
                }
            }
            members.sort_unstable();
            let local = |v: usize| members.binary_search(&v).unwrap();
            let euler = members.iter().map(|&v| self.euler[v]).collect();
            let edges = self
                .edges
                .iter()
                .filter(|(u, v)| comp[*u] == id && comp[*v] == id && !dropped[*u] && !dropped[*v])
                .map(|&(u, v)| (local(u), local(v)))
                .collect();
            // a full subgraph of a negative definite tree is again one
            let graph = DualGraph::unchecked(euler, vec![0; members.len()], edges)
                .expect("full subgraph of a valid tree");
            out.push(Subgraph { graph, back_map: members });
        }
        out
    }

    pub fn to_json(&self) -> GraphJson {
        GraphJson {
            vertices: self.euler.iter().map(|&e| VertexJson { e, g: 0 }).collect(),
            edges: self.edges.iter().map(|&(u, v)| [u, v]).collect(),
        }
    }

    /// Canonical JSON form; `parse_graph` of this string returns an equal graph.
    pub fn render(&self) -> String {
        serde_json::to_string(&self.to_json()).expect("graph serializes")
    }
}

impl fmt::Display for DualGraph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.render())
    }
}

/// A connected piece of `Γ \ I` with the injection of its vertices into `Γ`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subgraph {
    pub graph: DualGraph,
    pub back_map: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexJson {
    pub e: i64,
    #[serde(default)]
    pub g: i64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GraphJson {
    pub vertices: Vec<VertexJson>,
    #[serde(default)]
    pub edges: Vec<[usize; 2]>,
}

/// Symmetric integer matrix of pairwise intersections `(E_u, E_v)`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IntersectionMatrix(pub Vec<Vec<i64>>);

impl IntersectionMatrix {
    pub fn rows(&self) -> &[Vec<i64>] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn to_big(&self) -> IntMatrix {
        linalg::to_big(&self.0)
    }

    pub fn determinant(&self) -> BigInt {
        linalg::determinant(&self.to_big())
    }

    /// Leading principal minors alternate in sign, starting negative.
    pub fn is_negative_definite(&self) -> bool {
        linalg::leading_minors(&self.to_big())
            .iter()
            .enumerate()
            .all(|(k, minor)| {
                // size k+1 minor must have sign (-1)^(k+1)
                if k % 2 == 0 {
                    minor.is_negative()
                } else {
                    minor.is_positive()
                }
            })
    }

    /// `-M^{-1}`; column `v` holds the E-coordinates of `E*_v`.
    pub fn dual_inverse(&self) -> Result<RatMatrix> {
        let inv = linalg::inverse(&self.to_big()).ok_or(Error::SingularMatrix)?;
        Ok(inv
            .into_iter()
            .map(|row| row.into_iter().map(|x| -x).collect())
            .collect())
    }
}

/// Parses any accepted graph description: JSON, `sf:`, `cqs:`, or `ade:`.
pub fn parse_graph(text: &str) -> Result<DualGraph> {
    let text = text.trim();
    if let Some(rest) = text.strip_prefix("sf:") {
        parse_seifert(rest)
    } else if let Some(rest) = text.strip_prefix("cqs:") {
        parse_cyclic(rest)
    } else if let Some(rest) = text.strip_prefix("ade:") {
        parse_ade(rest)
    } else if text.starts_with('{') {
        let json: GraphJson =
            serde_json::from_str(text).map_err(|e| Error::Parse(format!("graph JSON: {e}")))?;
        let euler = json.vertices.iter().map(|v| v.e).collect();
        let genera = json.vertices.iter().map(|v| v.g).collect();
        let edges = json.edges.iter().map(|e| (e[0], e[1])).collect();
        DualGraph::with_genera(euler, genera, edges)
    } else {
        Err(Error::Parse(format!("unrecognized graph description {text:?}")))
    }
}

fn parse_int(s: &str) -> Result<i64> {
    s.trim()
        .parse()
        .map_err(|_| Error::Parse(format!("expected an integer, found {s:?}")))
}

/// Star graph with central weight `-k` and legs given by `(d_i, q_i)`.
///
/// The center is vertex 0; each leg follows in order, listed center-outward.
pub fn seifert_graph(k: i64, legs: &[(i64, i64)]) -> Result<DualGraph> {
    if k < 1 {
        return Err(Error::Parse(format!("central weight must be <= -1, got {}", -k)));
    }
    let mut euler = vec![-k];
    let mut edges = vec![];
    for &(d, q) in legs {
        let hj = hj_expand(d, q)?;
        let mut prev = 0;
        for &kij in hj.ks() {
            let v = euler.len();
            euler.push(-kij);
            edges.push((prev, v));
            prev = v;
        }
    }
    DualGraph::new(euler, edges)
}

/// String of `-k_i` vertices from the expansion `d/q = [k_1, ..., k_s]`.
pub fn cyclic_graph(d: i64, q: i64) -> Result<DualGraph> {
    let hj = hj_expand(d, q)?;
    string_graph(hj.ks())
}

/// String with the given `k_i` (self-intersections `-k_i`) in order.
pub fn string_graph(ks: &[i64]) -> Result<DualGraph> {
    let euler = ks.iter().map(|&k| -k).collect();
    let edges = (1..ks.len()).map(|i| (i - 1, i)).collect();
    DualGraph::new(euler, edges)
}

fn parse_seifert(rest: &str) -> Result<DualGraph> {
    let (center, legs) = match rest.split_once(';') {
        Some((c, l)) => (c, l),
        None => (rest, ""),
    };
    let e0 = parse_int(center)?;
    let mut pairs = vec![];
    let mut s = legs.trim();
    while !s.is_empty() {
        s = s.trim_start_matches([',', ' ']);
        if s.is_empty() {
            break;
        }
        let body = s
            .strip_prefix('(')
            .ok_or_else(|| Error::Parse(format!("expected '(' in Seifert legs at {s:?}")))?;
        let close = body
            .find(')')
            .ok_or_else(|| Error::Parse("unclosed '(' in Seifert legs".into()))?;
        let (d, q) = body[..close]
            .split_once(',')
            .ok_or_else(|| Error::Parse(format!("leg {:?} is not (d,q)", &body[..close])))?;
        let pair = (parse_int(d)?, parse_int(q)?);
        s = &body[close + 1..];
        // optional repetition suffix: (2,1)x4 or (2,1)×4
        let mut count = 1;
        let trimmed = s.trim_start();
        let rep = trimmed
            .strip_prefix('x')
            .or_else(|| trimmed.strip_prefix('×'));
        if let Some(r) = rep {
            let end = r.find(|c: char| !c.is_ascii_digit()).unwrap_or(r.len());
            count = parse_int(&r[..end])?;
            if count < 1 {
                return Err(Error::Parse("leg repetition must be positive".into()));
            }
            s = &r[end..];
        }
        for _ in 0..count {
            pairs.push(pair);
        }
    }
    seifert_graph(-e0, &pairs)
}

fn parse_cyclic(rest: &str) -> Result<DualGraph> {
    let (d, q) = rest
        .split_once('/')
        .ok_or_else(|| Error::Parse(format!("expected d/q, found {rest:?}")))?;
    cyclic_graph(parse_int(d)?, parse_int(q)?)
}

fn parse_ade(rest: &str) -> Result<DualGraph> {
    let name = rest.trim();
    let size = |s: &str| -> Result<i64> { parse_int(s.trim_start_matches(':')) };
    match name {
        "E6" => seifert_graph(2, &[(2, 1), (3, 2), (3, 2)]),
        "E7" => seifert_graph(2, &[(2, 1), (3, 2), (4, 3)]),
        "E8" => seifert_graph(2, &[(2, 1), (3, 2), (5, 4)]),
        _ if name.starts_with("An") || name.starts_with('A') => {
            let n = size(name.trim_start_matches("An").trim_start_matches('A'))?;
            if n < 1 {
                return Err(Error::Parse("A_n needs n >= 1".into()));
            }
            string_graph(&vec![2; n as usize])
        }
        _ if name.starts_with("Dn") || name.starts_with('D') => {
            let n = size(name.trim_start_matches("Dn").trim_start_matches('D'))?;
            if n < 4 {
                return Err(Error::Parse("D_n needs n >= 4".into()));
            }
            seifert_graph(2, &[(2, 1), (2, 1), (n - 2, n - 3)])
        }
        _ => Err(Error::Parse(format!("unknown ADE name {name:?}"))),
    }
}

/// Evaluates a negative continued fraction `[k_1, ..., k_s]` exactly.
pub fn continued_fraction(ks: &[i64]) -> BigRational {
    let mut acc: Option<BigRational> = None;
    for &k in ks.iter().rev() {
        let k = BigRational::from_integer(k.into());
        acc = Some(match acc {
            None => k,
            Some(x) if x.is_zero() => k,
            Some(x) => k - x.recip(),
        });
    }
    acc.unwrap_or_else(BigRational::zero)
}
