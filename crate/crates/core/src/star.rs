//! Star-shaped graphs: Seifert invariants, reduced transforms, the
//! quasi-linear function `N_c`, and the delta invariant of minimal generic
//! curves on rational star-shaped and quotient singularities.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed};
use serde::Serialize;

use crate::cyclic::{cyclic_s_coeffs, hj_expand, HjData};
use crate::error::{inconsistency, Error, Result};
use crate::graph::{continued_fraction, DualGraph};
use crate::laufer;
use crate::lattice::{Class, Lattice};

fn rat(n: i64, d: i64) -> BigRational {
    BigRational::new(BigInt::from(n), BigInt::from(d))
}

fn int(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Leg {
    pub d: i64,
    pub q: i64,
    pub hj: HjData,
    /// Leg vertices listed center-outward.
    pub vertices: Vec<usize>,
}

impl Leg {
    /// The end vertex `E_i = E_{i s_i}`.
    pub fn end(&self) -> usize {
        *self.vertices.last().expect("legs are nonempty")
    }
}

/// Normalized Seifert invariants `(-k; (d_i, q_i))` of a star-shaped graph.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SeifertData {
    pub center: usize,
    pub k: i64,
    pub legs: Vec<Leg>,
}

impl SeifertData {
    pub fn nu(&self) -> usize {
        self.legs.len()
    }

    /// Orbifold Euler number `e = -k + sum q_i/d_i`.
    pub fn e(&self) -> BigRational {
        self.legs.iter().fold(int(-self.k), |acc, l| acc + rat(l.q, l.d))
    }

    /// `gamma = (nu - 2 - sum 1/d_i) / |e|`.
    pub fn gamma(&self) -> BigRational {
        let num = self.legs.iter().fold(int(self.nu() as i64 - 2), |acc, l| acc - rat(1, l.d));
        num / self.e().abs()
    }

    /// True when the data equals `(-k; legs)` up to a permutation of legs.
    pub fn matches(&self, k: i64, legs: &[(i64, i64)]) -> bool {
        let mut mine: Vec<(i64, i64)> = self.legs.iter().map(|l| (l.d, l.q)).collect();
        let mut theirs = legs.to_vec();
        mine.sort_unstable();
        theirs.sort_unstable();
        self.k == k && mine == theirs
    }

    /// Index of the (first) leg with invariants `(d, q)`.
    pub fn leg_with(&self, d: i64, q: i64) -> Option<usize> {
        self.legs.iter().position(|l| l.d == d && l.q == q)
    }
}

impl fmt::Display for SeifertData {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "(-{};", self.k)?;
        for (i, l) in self.legs.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "({},{})", l.d, l.q)?;
        }
        write!(f, ")")
    }
}

/// Reads the Seifert invariants off a star-shaped graph. Legs are ordered by
/// the index of their vertex adjacent to the center.
pub fn seifert_from_graph(g: &DualGraph) -> Result<SeifertData> {
    let nodes = g.nodes();
    let center = match nodes.as_slice() {
        [c] => *c,
        [] => return Err(Error::NotStarShaped("graph has no node".into())),
        _ => return Err(Error::NotStarShaped(format!("graph has {} nodes", nodes.len()))),
    };
    let mut legs = vec![];
    for (i, &first) in g.neighbors(center).iter().enumerate() {
        let mut vertices = vec![first];
        let (mut prev, mut cur) = (center, first);
        while let Some(&next) = g.neighbors(cur).iter().find(|&&w| w != prev) {
            vertices.push(next);
            prev = cur;
            cur = next;
        }
        let ks: Vec<i64> = vertices.iter().map(|&v| -g.euler(v)).collect();
        if ks.iter().any(|&k| k < 2) {
            return Err(Error::NonMinimalLeg { leg: i + 1 });
        }
        let value = continued_fraction(&ks);
        let d = value.numer().try_into().map_err(|_| Error::Overflow("leg invariant"))?;
        let q = value.denom().try_into().map_err(|_| Error::Overflow("leg invariant"))?;
        let hj = hj_expand(d, q)?;
        debug_assert_eq!(hj.ks(), ks.as_slice());
        legs.push(Leg { d, q, hj, vertices });
    }
    Ok(SeifertData { center, k: -g.euler(center), legs })
}

/// Center coefficient plus one coefficient per leg end.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct ReducedCoeffs {
    pub c0: i64,
    pub legs: Vec<i64>,
}

impl ReducedCoeffs {
    pub fn zero(nu: usize) -> Self {
        ReducedCoeffs { c0: 0, legs: vec![0; nu] }
    }
}

/// Reduced transform from E*-coordinates, without the runtime checks.
pub fn reduce_dual(sd: &SeifertData, a: &[i64]) -> ReducedCoeffs {
    ReducedCoeffs {
        c0: a[sd.center],
        legs: sd
            .legs
            .iter()
            .map(|l| {
                l.vertices
                    .iter()
                    .enumerate()
                    .map(|(j, &v)| a[v] * l.hj.suffix_weight(j + 1))
                    .sum()
            })
            .collect(),
    }
}

/// E*-coordinates of `c_0 E*_0 + sum c_i E*_i`.
pub fn reduced_to_dual(sd: &SeifertData, n: usize, rc: &ReducedCoeffs) -> Vec<i64> {
    let mut a = vec![0; n];
    a[sd.center] = rc.c0;
    for (l, &c) in sd.legs.iter().zip(&rc.legs) {
        a[l.end()] += c;
    }
    a
}

/// `(c_0 + sum c_i/d_i) / |e|`, the E_0-coefficient of a reduced lift.
pub fn reduced_center_coeff(sd: &SeifertData, rc: &ReducedCoeffs) -> BigRational {
    let num = sd.legs.iter().zip(&rc.legs).fold(int(rc.c0), |acc, (l, &c)| acc + rat(c, l.d));
    num / sd.e().abs()
}

/// E_0-coefficient of the element with E*-coordinates `a`.
fn center_coeff(lat: &Lattice, center: usize, a: &[i64]) -> Result<BigRational> {
    let x = lat.scaled_e(a)?;
    Ok(rat(x[center], lat.det()))
}

/// The reduced transform of `ℓ' ∈ L'`, checking that it keeps the class and
/// the E_0-coefficient.
pub fn reduced_transform(lat: &Lattice, sd: &SeifertData, a: &[i64]) -> Result<ReducedCoeffs> {
    let rc = reduce_dual(sd, a);
    let red = reduced_to_dual(sd, lat.len(), &rc);
    let g = lat.group();
    if g.class_of_dual(&red) != g.class_of_dual(a) {
        return Err(inconsistency!("reduced transform changed the class of {a:?}"));
    }
    let c0 = center_coeff(lat, sd.center, a)?;
    if center_coeff(lat, sd.center, &red)? != c0 || reduced_center_coeff(sd, &rc) != c0 {
        return Err(inconsistency!("reduced transform changed the E_0-coefficient of {a:?}"));
    }
    Ok(rc)
}

/// Rebuilds the E*-coordinates from reduced coefficients, leg by leg, via
/// the cyclic minimal-cycle recursion.
pub fn unreduce(sd: &SeifertData, n: usize, rc: &ReducedCoeffs) -> Result<Vec<i64>> {
    let mut a = vec![0; n];
    a[sd.center] = rc.c0;
    for (l, &c) in sd.legs.iter().zip(&rc.legs) {
        for (&v, coeff) in l.vertices.iter().zip(cyclic_s_coeffs(&l.hj, c)?) {
            a[v] = coeff;
        }
    }
    Ok(a)
}

/// `N_c(n) = 1 + c_0 + k n - sum ceil((q_i n - c_i) / d_i)`.
pub fn n_func(sd: &SeifertData, c: &ReducedCoeffs, n: i64) -> i64 {
    sd.legs
        .iter()
        .zip(&c.legs)
        .fold(1 + c.c0 + sd.k * n, |acc, (l, &ci)| acc - Integer::div_ceil(&(l.q * n - ci), &l.d))
}

/// The criterion for `a` to be the reduced transform of some `s_h`: the box
/// conditions, and `1 + a_0 - kt + sum floor((q_i t + a_i)/d_i) <= 0` for
/// `t = 1..T` with `T = ceil((1 + a_0 + sum a_i/d_i) / |e|)`; beyond `T` the
/// inequality holds automatically.
pub fn is_minimal_reduced(sd: &SeifertData, a: &ReducedCoeffs) -> bool {
    if a.c0 < 0 || a.legs.iter().zip(&sd.legs).any(|(&ai, l)| ai < 0 || ai >= l.d) {
        return false;
    }
    let top = sd.legs.iter().zip(&a.legs).fold(int(1 + a.c0), |acc, (l, &ai)| acc + rat(ai, l.d));
    let t_max = (top / sd.e().abs()).ceil().to_integer();
    let t_max: i64 = t_max.try_into().unwrap_or(i64::MAX);
    (1..=t_max).all(|t| {
        let s: i64 = sd.legs.iter().zip(&a.legs).map(|(l, &ai)| Integer::div_floor(&(l.q * t + ai), &l.d)).sum();
        1 + a.c0 - sd.k * t + s <= 0
    })
}

/// `ã = (a_0 + nu - 2, a_1 - 1, ..., a_nu - 1)`.
pub fn shifted_index(sd: &SeifertData, a: &ReducedCoeffs) -> ReducedCoeffs {
    ReducedCoeffs { c0: a.c0 + sd.nu() as i64 - 2, legs: a.legs.iter().map(|x| x - 1).collect() }
}

/// The data behind the star-shaped delta formula for one class.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct StarDelta {
    pub delta: i64,
    pub r: i64,
    /// E*-coordinates of `s_h`.
    pub s_h: Vec<i64>,
    pub reduced: ReducedCoeffs,
    /// E_0-coefficient of `s_h`.
    #[serde(serialize_with = "crate::lattice::serialize_rational")]
    pub s_h0: BigRational,
    #[serde(serialize_with = "crate::lattice::serialize_rational")]
    pub gamma: BigRational,
    /// `(n, N_ã(n))` over the integers `n` in `[-gamma - s_{h,0}, -1]`.
    pub n_values: Vec<(i64, i64)>,
}

fn require_rational(lat: &Lattice) -> Result<()> {
    if !laufer::is_rational(lat)? {
        return Err(Error::NotRational);
    }
    Ok(())
}

fn check_gamma(lat: &Lattice, sd: &SeifertData) -> Result<BigRational> {
    let gamma = sd.gamma();
    let zk0 = lat.canonical_cycle().coeff(sd.center).clone();
    if gamma != &zk0 - BigRational::one() {
        return Err(inconsistency!("gamma = {gamma} but Z_K,0 - 1 = {}", zk0 - BigRational::one()));
    }
    Ok(gamma)
}

/// Delta invariant of the minimal generic `h`-curve on a rational
/// star-shaped singularity: `r - 1 + sum_{-gamma - s_{h,0} <= n <= -1} max(0, N_ã(n))`.
pub fn delta_star(lat: &Lattice, h: &Class) -> Result<StarDelta> {
    let sd = seifert_from_graph(lat.graph())?;
    require_rational(lat)?;
    if h.is_zero() {
        return Err(Error::EmptyCurve);
    }
    delta_star_with(lat, &sd, h)
}

fn delta_star_with(lat: &Lattice, sd: &SeifertData, h: &Class) -> Result<StarDelta> {
    let gamma = check_gamma(lat, sd)?;
    let s_h = laufer::minimal_dual(lat, h)?;
    let reduced = reduced_transform(lat, sd, &s_h)?;
    if !is_minimal_reduced(sd, &reduced) {
        return Err(inconsistency!("reduced transform {reduced:?} of s_h fails the minimality criterion"));
    }
    let r: i64 = s_h.iter().sum();
    let s_h0 = center_coeff(lat, sd.center, &s_h)?;
    let lo = (-&gamma - &s_h0).ceil().to_integer();
    let lo: i64 = lo.try_into().map_err(|_| Error::Overflow("summation interval"))?;
    if lo > 0 {
        return Err(inconsistency!("empty summation interval: -gamma - s_h,0 = {}", -&gamma - &s_h0));
    }
    let tilde = shifted_index(sd, &reduced);
    let n_values: Vec<(i64, i64)> = (lo..=-1).map(|n| (n, n_func(sd, &tilde, n))).collect();
    let extra: i64 = n_values.iter().map(|&(_, v)| v.max(0)).sum();
    Ok(StarDelta { delta: r - 1 + extra, r, s_h, reduced, s_h0, gamma, n_values })
}

/// `pc(Z_{-h}) = chi(r_{-h}) - chi(s_{-h})` on a rational star-shaped graph.
pub fn pc_z(lat: &Lattice, h: &Class) -> Result<BigRational> {
    seifert_from_graph(lat.graph())?;
    require_rational(lat)?;
    let minus = lat.group().neg(h);
    let r = lat.r_dual(&minus)?;
    let s = laufer::minimal_dual(lat, &minus)?;
    Ok(lat.chi_dual(&r)? - lat.chi_dual(&s)?)
}

/// The second form of the star delta formula, valid when
/// `-gamma - s_{h,0} <= floor(-s_{h,0})`:
/// `r - 1 + pc(Z_{-h}) + sum_{1 + floor(-s_{h,0}) <= n <= -1} max(0, N_ã(n))`.
pub fn delta_star_alt(lat: &Lattice, h: &Class) -> Result<i64> {
    let sd = seifert_from_graph(lat.graph())?;
    require_rational(lat)?;
    if h.is_zero() {
        return Err(Error::EmptyCurve);
    }
    let base = delta_star_with(lat, &sd, h)?;
    let floor_neg = (-&base.s_h0).floor().to_integer();
    if -&base.gamma - &base.s_h0 > BigRational::from_integer(floor_neg.clone()) {
        return Err(Error::PreconditionFailed(format!(
            "-gamma - s_h,0 = {} exceeds floor(-s_h,0) = {floor_neg}",
            -&base.gamma - &base.s_h0
        )));
    }
    let floor_neg: i64 = floor_neg.try_into().map_err(|_| Error::Overflow("summation interval"))?;
    let pc = pc_z(lat, h)?;
    if !pc.is_integer() {
        return Err(inconsistency!("pc(Z_-h) = {pc} is not an integer"));
    }
    let pc: i64 = pc.to_integer().try_into().map_err(|_| Error::Overflow("periodic constant"))?;
    let tilde = shifted_index(&sd, &base.reduced);
    let tail: i64 = (1 + floor_neg..=-1).map(|n| n_func(&sd, &tilde, n).max(0)).sum();
    Ok(base.r - 1 + pc + tail)
}

/// Numerically log terminal: every E-coordinate of `Z_K` is below 1. On
/// star-shaped graphs with all weights at most -2 this is compared with the
/// classification `nu = 3, sum 1/d_i > 1`.
pub fn is_quotient(lat: &Lattice) -> Result<bool> {
    let lt = lat.canonical_cycle().e_coeffs().iter().all(|c| c < &BigRational::one());
    if let Ok(sd) = seifert_from_graph(lat.graph()) {
        if sd.k >= 2 {
            let inv: BigRational = sd.legs.iter().map(|l| rat(1, l.d)).sum();
            let platonic = sd.nu() == 3 && inv > BigRational::one();
            if platonic != lt {
                return Err(inconsistency!(
                    "Z_K test says quotient = {lt}, Seifert data {sd} says {platonic}"
                ));
            }
        }
    }
    Ok(lt)
}

/// Which line of the quotient case analysis produced `epsilon`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum QuotientCase {
    Cyclic,
    E6,
    E7,
    SmallCenter,
    Exceptional,
    NAtMinusOne,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct QuotientDelta {
    pub delta: i64,
    pub r: i64,
    pub epsilon: i64,
    pub case: QuotientCase,
    pub curve_type: String,
}

/// `R^r_r` for ordinary tuples, `R^{r-1}_r` for `delta = r`.
pub fn quotient_curve_type(r: i64, epsilon: i64) -> String {
    format!("R^{}_{}", r - epsilon, r)
}

/// `delta = r - 1 + epsilon` on a quotient singularity, with `epsilon` from
/// the explicit case analysis. The general star formula is evaluated too and
/// must agree.
pub fn delta_quotient(lat: &Lattice, h: &Class) -> Result<QuotientDelta> {
    if !is_quotient(lat)? {
        return Err(Error::NotQuotient);
    }
    if h.is_zero() {
        return Err(Error::EmptyCurve);
    }
    let g = lat.graph();
    if let Some(order) = g.string_order() {
        let s = laufer::minimal_dual(lat, h)?;
        let r: i64 = s.iter().sum();
        let ks: Vec<i64> = order.iter().map(|&v| -g.euler(v)).collect();
        let value = continued_fraction(&ks);
        if order.len() > 1 || lat.det() > 1 {
            let d: i64 = value.numer().try_into().map_err(|_| Error::Overflow("string"))?;
            let q: i64 = value.denom().try_into().map_err(|_| Error::Overflow("string"))?;
            let hj = hj_expand(d, q)?;
            let along: Vec<i64> = order.iter().map(|&v| s[v]).collect();
            let a: i64 = along.iter().enumerate().map(|(i, x)| x * hj.suffix_weight(i + 1)).sum();
            if cyclic_s_coeffs(&hj, a)? != along {
                return Err(inconsistency!("s_h = {along:?} differs from the cyclic recursion for a = {a}"));
            }
        }
        return Ok(QuotientDelta {
            delta: r - 1,
            r,
            epsilon: 0,
            case: QuotientCase::Cyclic,
            curve_type: quotient_curve_type(r, 0),
        });
    }
    let sd = seifert_from_graph(g)?;
    let star = delta_star_with(lat, &sd, h)?;
    let unit = |v: usize| {
        let mut a = vec![0; lat.len()];
        a[v] = 1;
        a
    };
    let add = |x: Vec<i64>, y: Vec<i64>| -> Vec<i64> { x.iter().zip(&y).map(|(a, b)| a + b).collect() };
    let first = |leg: Option<usize>| leg.map(|i| sd.legs[i].vertices[0]);

    let (epsilon, case) = if sd.matches(2, &[(2, 1), (3, 2), (3, 2)]) {
        (0, QuotientCase::E6)
    } else if sd.matches(2, &[(2, 1), (3, 2), (4, 3)]) {
        (0, QuotientCase::E7)
    } else if star.s_h0 <= BigRational::one() {
        (0, QuotientCase::SmallCenter)
    } else if (sd.matches(2, &[(2, 1), (3, 2), (5, 2)])
        && first(sd.leg_with(5, 2))
            .zip(first(sd.leg_with(2, 1)))
            .map(|(e31, e11)| add(unit(e31), unit(e11)))
            .as_ref()
            == Some(&star.s_h))
        || (sd.matches(2, &[(2, 1), (3, 2), (5, 3)]) && first(sd.leg_with(2, 1)).map(unit).as_ref() == Some(&star.s_h))
    {
        (1, QuotientCase::Exceptional)
    } else {
        let tilde = shifted_index(&sd, &star.reduced);
        (n_func(&sd, &tilde, -1), QuotientCase::NAtMinusOne)
    };
    if !(0..=1).contains(&epsilon) || star.r - 1 + epsilon != star.delta {
        return Err(inconsistency!(
            "case analysis gives epsilon = {epsilon} ({case:?}) but the star formula gives delta = {} with r = {}",
            star.delta,
            star.r
        ));
    }
    Ok(QuotientDelta {
        delta: star.delta,
        r: star.r,
        epsilon,
        case,
        curve_type: quotient_curve_type(star.r, epsilon),
    })
}

/// Lower bound `-gamma - s_{h,0}` of the summation interval.
pub fn interval_start(star: &StarDelta) -> BigRational {
    -&star.gamma - &star.s_h0
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;
    use num_traits::Zero;

    fn lat(s: &str) -> Lattice {
        Lattice::new(&parse_graph(s).unwrap()).unwrap()
    }

    #[test]
    fn seifert_data_of_figure_graph() {
        let g = parse_graph("sf:-2;(2,1),(3,2),(5,2)").unwrap();
        let sd = seifert_from_graph(&g).unwrap();
        assert_eq!(sd.to_string(), "(-2;(2,1),(3,2),(5,2))");
        assert_eq!(sd.legs[2].vertices, vec![4, 5]);
        assert_eq!(sd.e(), rat(-13, 30));
        let d4 = seifert_from_graph(&parse_graph("sf:-2;(2,1),(2,1),(2,1)").unwrap()).unwrap();
        assert_eq!(d4.nu(), 3);
        assert_eq!(d4.e(), rat(-1, 2));
        assert!(matches!(seifert_from_graph(&parse_graph("cqs:5/2").unwrap()), Err(Error::NotStarShaped(_))));
    }

    #[test]
    fn seifert_shorthand_roundtrips() {
        for s in ["(-2;(2,1),(3,2),(5,2))", "(-3;(7,3),(2,1),(4,1))", "(-4;(2,1),(2,1),(2,1),(2,1))"] {
            let g = parse_graph(&format!("sf:{}", &s[1..s.len() - 1])).unwrap();
            assert_eq!(seifert_from_graph(&g).unwrap().to_string(), s);
        }
    }

    #[test]
    fn non_minimal_leg_is_rejected() {
        let g = parse_graph(r#"{"vertices":[{"e":-3},{"e":-1},{"e":-4},{"e":-4}],"edges":[[0,1],[0,2],[0,3]]}"#);
        // the -1 leg vertex makes the form indefinite or the leg non-minimal
        if let Ok(g) = g {
            assert!(matches!(seifert_from_graph(&g), Err(Error::NonMinimalLeg { leg: 1 })));
        }
    }

    #[test]
    fn reduced_transform_examples() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        let sd = seifert_from_graph(l.graph()).unwrap();
        assert_eq!(reduced_transform(&l, &sd, &[1, 0, 0, 0, 0, 0]).unwrap(), ReducedCoeffs { c0: 1, legs: vec![0, 0, 0] });
        // leg 2 contributes 2 a_21 + a_22
        let rc = reduced_transform(&l, &sd, &[0, 0, 1, 1, 0, 0]).unwrap();
        assert_eq!(rc.legs, vec![0, 3, 0]);
        let rc = reduced_transform(&l, &sd, &[0, 0, 0, 0, 2, 0]).unwrap();
        assert_eq!(rc, ReducedCoeffs { c0: 0, legs: vec![0, 0, 4] });
        assert_eq!(unreduce(&sd, 6, &rc).unwrap(), vec![0, 0, 0, 0, 2, 0]);
        assert_eq!(unreduce(&sd, 6, &ReducedCoeffs::zero(3)).unwrap(), vec![0; 6]);
    }

    #[test]
    fn n_function_examples() {
        let l = lat("sf:-4;(2,1)x4");
        let sd = seifert_from_graph(l.graph()).unwrap();
        assert_eq!(n_func(&sd, &ReducedCoeffs::zero(4), 0), 1);
        let a = reduced_transform(&l, &sd, &[3, 0, 0, 0, 0]).unwrap();
        assert_eq!(n_func(&sd, &shifted_index(&sd, &a), -1), 2);
    }

    #[test]
    fn minimality_criterion_edge_cases() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        let sd = seifert_from_graph(l.graph()).unwrap();
        assert!(is_minimal_reduced(&sd, &ReducedCoeffs::zero(3)));
        assert!(!is_minimal_reduced(&sd, &ReducedCoeffs { c0: 2, legs: vec![0, 0, 0] }));
        assert!(!is_minimal_reduced(&sd, &ReducedCoeffs { c0: 0, legs: vec![2, 0, 0] }));
    }

    #[test]
    fn non_quotient_example() {
        let l = lat("sf:-4;(2,1)x4");
        assert!(!is_quotient(&l).unwrap());
        let h = l.class_of(&(&l.e_star(0) * 3)).unwrap();
        let sd = delta_star(&l, &h).unwrap();
        assert_eq!(sd.s_h, vec![3, 0, 0, 0, 0]);
        assert_eq!(sd.r, 3);
        assert_eq!(sd.gamma, BigRational::zero());
        assert_eq!(sd.s_h0, rat(3, 2));
        assert_eq!(sd.n_values, vec![(-1, 2)]);
        assert_eq!(sd.delta, 4);
        assert!(matches!(delta_star_alt(&l, &h), Err(Error::PreconditionFailed(_))));
        assert_eq!(delta_quotient(&l, &h), Err(Error::NotQuotient));
    }

    #[test]
    fn quotient_detection() {
        for s in ["cqs:15/11", "cqs:2/1", "sf:-2;(2,1),(3,2),(5,2)", "sf:-2;(2,1),(3,2),(5,3)", "ade:E8", "sf:-3;(2,1),(2,1),(7,2)"] {
            assert!(is_quotient(&lat(s)).unwrap(), "{s}");
        }
        for s in ["sf:-2;(3,1),(3,1),(3,1)", "sf:-3;(2,1),(3,1),(7,1)"] {
            assert!(!is_quotient(&lat(s)).unwrap(), "{s}");
        }
    }

    #[test]
    fn exceptional_classes() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        let ten = delta_quotient(&l, &Class(vec![10])).unwrap();
        assert_eq!((ten.delta, ten.epsilon, ten.case), (2, 1, QuotientCase::Exceptional));
        assert_eq!(ten.curve_type, "R^1_2");
        let star = delta_star(&l, &Class(vec![10])).unwrap();
        assert_eq!(star.n_values, vec![(-2, 1), (-1, 0)]);
        let l = lat("sf:-2;(2,1),(3,2),(5,3)");
        let four = delta_quotient(&l, &Class(vec![4])).unwrap();
        assert_eq!((four.delta, four.epsilon, four.case), (1, 1, QuotientCase::Exceptional));
    }

    #[test]
    fn cyclic_and_ade_quotients() {
        let l = lat("cqs:15/11");
        for h in l.group().classes().into_iter().skip(1) {
            let q = delta_quotient(&l, &h).unwrap();
            assert_eq!((q.epsilon, q.case), (0, QuotientCase::Cyclic));
        }
        for (s, case) in [("ade:E6", QuotientCase::E6), ("ade:E7", QuotientCase::E7)] {
            let l = lat(s);
            for h in l.group().classes().into_iter().skip(1) {
                let q = delta_quotient(&l, &h).unwrap();
                assert_eq!((q.epsilon, q.case, q.delta), (0, case, q.r - 1));
            }
        }
        assert_eq!(delta_quotient(&l, &l.group().zero()), Err(Error::EmptyCurve));
    }

    #[test]
    fn periodic_constant() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        for h in l.group().classes() {
            assert!(pc_z(&l, &h).unwrap().is_zero());
        }
        let l = lat("sf:-2;(3,1),(3,1),(3,1)");
        assert!(pc_z(&l, &l.group().zero()).unwrap().is_zero());
        assert!(l.group().classes().iter().any(|h| !pc_z(&l, h).unwrap().is_zero()));
    }
}
