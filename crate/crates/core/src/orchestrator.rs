//! Delta invariants by three independent routes, cross-checked row by row.
//!
//! Route A evaluates `chi(-s_h) - chi(s_{-h})`, route B counts series
//! coefficients `Q_{[Z_K+s_h]}(Z_K+s_h)`, and route C uses whatever structure
//! the graph has: the cyclic recursion on strings, the `N`-function on
//! star-shaped graphs, and the node-restricted counting function elsewhere.

use num_rational::BigRational;
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclic::{cyclic_delta, hj_expand};
use crate::error::{inconsistency, Error, Result};
use crate::graph::continued_fraction;
use crate::lattice::{Class, Cycle, CycleJson, Lattice};
use crate::laufer;
use crate::series;
use crate::star::{self, QuotientCase};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum VerifyLevel {
    /// Only the three delta routes.
    #[default]
    Off,
    /// Also confirm each `s_h` against a box search.
    Oracle,
    /// Also run the surgery route on every graph with a node and the second
    /// star formula wherever it applies.
    Exhaustive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct ReportOptions {
    pub budget: u64,
    pub verify: VerifyLevel,
}

impl Default for ReportOptions {
    fn default() -> Self {
        ReportOptions { budget: crate::DEFAULT_BUDGET, verify: VerifyLevel::Off }
    }
}

/// Which structural formula produced `delta_struct`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Route {
    Cyclic,
    Star,
    Surgery,
}

impl Route {
    pub fn name(self) -> &'static str {
        match self {
            Route::Cyclic => "cyclic",
            Route::Star => "star",
            Route::Surgery => "surgery",
        }
    }
}

fn require(lat: &Lattice, h: &Class) -> Result<()> {
    if !laufer::is_rational(lat)? {
        return Err(Error::NotRational);
    }
    if h.is_zero() {
        return Err(Error::EmptyCurve);
    }
    Ok(())
}

fn to_i64(x: &BigRational, what: &'static str) -> Result<i64> {
    if !x.is_integer() {
        return Err(inconsistency!("{what} = {x} is not an integer"));
    }
    x.to_integer().try_into().map_err(|_| Error::Overflow(what))
}

/// Route A: `chi(-s_h) - chi(s_{-h})`.
pub fn delta_chi(lat: &Lattice, h: &Class) -> Result<i64> {
    require(lat, h)?;
    let s = laufer::minimal_dual(lat, h)?;
    let minus_s: Vec<i64> = s.iter().map(|x| -x).collect();
    let s_neg = laufer::minimal_dual(lat, &lat.group().neg(h))?;
    to_i64(&(lat.chi_dual(&minus_s)? - lat.chi_dual(&s_neg)?), "chi difference")
}

/// Route B: `kappa(s_h)` by enumerating series coefficients.
pub fn delta_count(lat: &Lattice, h: &Class, budget: u64) -> Result<i64> {
    require(lat, h)?;
    series::kappa_top(lat, &laufer::minimal_class_cycle(lat, h)?, budget)
}

/// The two summands of the surgery formula.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SurgeryDelta {
    /// `Q_{[Z_K+s_h], nodes}(Z_K + s_h)`.
    pub node_part: i64,
    /// `(component vertices, r_k)` for each string of the graph minus its nodes.
    pub strings: Vec<(Vec<usize>, i64)>,
    pub delta: i64,
}

/// Route C on a graph with nodes: the node-restricted counting function
/// plus `r_k - 1` for every string that carries branches.
pub fn surgery_parts(lat: &Lattice, h: &Class, budget: u64) -> Result<SurgeryDelta> {
    require(lat, h)?;
    let nodes = lat.graph().nodes();
    if nodes.is_empty() {
        return Err(Error::NoNodes);
    }
    let s = laufer::minimal_dual(lat, h)?;
    let x = &lat.from_dual(&s) + lat.canonical_cycle();
    let node_part = series::counting_q_i(lat, &lat.class_of(&x)?, &nodes, &x, budget)?;
    let mut strings = vec![];
    let mut delta = node_part;
    for sub in lat.graph().components_minus(&nodes) {
        let projected: Vec<i64> = sub.back_map.iter().map(|&v| s[v]).collect();
        let sub_lat = Lattice::new(&sub.graph)?;
        let hk = sub_lat.group().class_of_dual(&projected);
        if laufer::minimal_dual(&sub_lat, &hk)? != projected {
            return Err(inconsistency!(
                "projection {projected:?} of s_h to the string {:?} is not minimal in its class",
                sub.back_map
            ));
        }
        let rk: i64 = projected.iter().sum();
        if rk > 0 {
            delta += rk - 1;
        }
        strings.push((sub.back_map.clone(), rk));
    }
    Ok(SurgeryDelta { node_part, strings, delta })
}

pub fn delta_surgery(lat: &Lattice, h: &Class, budget: u64) -> Result<i64> {
    Ok(surgery_parts(lat, h, budget)?.delta)
}

/// Route C on a string: the cyclic recursion in the class index, checked
/// against `s_h` along the string.
fn delta_cyclic(lat: &Lattice, h: &Class, s: &[i64]) -> Result<i64> {
    let g = lat.graph();
    let order = g.string_order().ok_or_else(|| inconsistency!("cyclic route on a non-string"))?;
    let ks: Vec<i64> = order.iter().map(|&v| -g.euler(v)).collect();
    let value = continued_fraction(&ks);
    let d: i64 = value.numer().try_into().map_err(|_| Error::Overflow("string determinant"))?;
    let q: i64 = value.denom().try_into().map_err(|_| Error::Overflow("string determinant"))?;
    let hj = hj_expand(d, q)?;
    let group = lat.group();
    if group.generator() != order.last().copied() {
        return Err(inconsistency!("string class group is not indexed by the last vertex"));
    }
    let a = group.index(h) as i64;
    let along: Vec<i64> = order.iter().map(|&v| s[v]).collect();
    if crate::cyclic::cyclic_s_coeffs(&hj, a)? != along {
        return Err(inconsistency!("cyclic recursion for a = {a} disagrees with s_h = {along:?}"));
    }
    cyclic_delta(&hj, a)
}

/// One class of a delta report.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaRow {
    pub class_id: usize,
    pub class: Class,
    /// E*-coordinates of `s_h`.
    pub s_h: Vec<i64>,
    /// E_0-coefficient of `s_h` on star-shaped graphs.
    pub s_h0: Option<String>,
    pub r: i64,
    pub delta: i64,
    pub delta_chi: i64,
    pub delta_count: i64,
    pub delta_struct: i64,
    pub route: Route,
    pub epsilon: Option<i64>,
    pub quotient_case: Option<QuotientCase>,
    pub curve_type: String,
    /// `(n, N_ã(n))` on the summation interval, for star-shaped graphs.
    pub n_values: Vec<(i64, i64)>,
}

/// Graph-level data printed above the rows.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphSummary {
    pub vertices: usize,
    pub det: i64,
    pub divisors: Vec<i64>,
    pub order: usize,
    pub z_k: CycleJson,
    pub z_min: CycleJson,
    pub rational: bool,
    pub quotient: bool,
    pub seifert: Option<String>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DeltaReport {
    pub summary: GraphSummary,
    pub rows: Vec<DeltaRow>,
}

pub fn summarize(lat: &Lattice) -> Result<GraphSummary> {
    let (zmin, _) = laufer::fundamental_cycle(lat)?;
    let rational = laufer::is_rational(lat)?;
    let seifert = star::seifert_from_graph(lat.graph()).ok().map(|sd| sd.to_string());
    Ok(GraphSummary {
        vertices: lat.len(),
        det: lat.det(),
        divisors: lat.group().divisors().to_vec(),
        order: lat.group().order(),
        z_k: lat.cycle_json(lat.canonical_cycle()),
        z_min: lat.cycle_json(&zmin),
        rational,
        quotient: star::is_quotient(lat)?,
        seifert,
    })
}

fn plain_curve_type(r: i64, delta: i64) -> String {
    if delta == r - 1 {
        format!("R^{r}_{r}")
    } else {
        "other".into()
    }
}

fn dump(lat: &Lattice, h: &Class, s: &[i64], values: &[(&str, Option<i64>)]) -> String {
    let show = |c: &Cycle| {
        let j = lat.cycle_json(c);
        format!("E=({}) E*=({})", j.e.join(","), j.dual.join(","))
    };
    let mut out = format!("class {h}\n  s_h: {}", show(&lat.from_dual(s)));
    if let Ok(r) = lat.r_of(h) {
        out += &format!("\n  r_h: {}", show(&r));
    }
    out += &format!("\n  Z_K + s_h: {}", show(&(&lat.from_dual(s) + lat.canonical_cycle())));
    if let Ok(sn) = laufer::minimal_class_cycle(lat, &lat.group().neg(h)) {
        out += &format!("\n  s_-h: {}", show(&sn));
    }
    for (name, v) in values {
        out += &format!("\n  {name}: {}", v.map_or("-".into(), |x| x.to_string()));
    }
    out
}

/// Computes one row, failing on any disagreement between the routes.
pub fn delta_row(lat: &Lattice, h: &Class, opts: &ReportOptions) -> Result<DeltaRow> {
    require(lat, h)?;
    let class_id = lat.class_id(h);
    row_inner(lat, h, opts).map_err(|e| e.in_class(class_id))
}

fn row_inner(lat: &Lattice, h: &Class, opts: &ReportOptions) -> Result<DeltaRow> {
    let g = lat.graph();
    let s = laufer::minimal_dual(lat, h)?;
    let r: i64 = s.iter().sum();
    if opts.verify != VerifyLevel::Off {
        laufer::oracle::check_minimal(lat, h, 1, opts.budget)?;
    }
    let a = delta_chi(lat, h)?;
    let b = delta_count(lat, h, opts.budget)?;
    let mut s_h0 = None;
    let mut n_values = vec![];
    let mut extra: Vec<(&str, Option<i64>)> = vec![];
    let (c, route) = if g.is_string() {
        (delta_cyclic(lat, h, &s)?, Route::Cyclic)
    } else if star::seifert_from_graph(g).is_ok() {
        let sd = star::delta_star(lat, h)?;
        s_h0 = Some(sd.s_h0.to_string());
        n_values = sd.n_values.clone();
        if opts.verify == VerifyLevel::Exhaustive {
            extra.push(("delta_surgery", Some(delta_surgery(lat, h, opts.budget)?)));
            match star::delta_star_alt(lat, h) {
                Ok(v) => extra.push(("delta_star_alt", Some(v))),
                Err(Error::PreconditionFailed(_)) => {}
                Err(e) => return Err(e),
            }
        }
        (sd.delta, Route::Star)
    } else {
        (delta_surgery(lat, h, opts.budget)?, Route::Surgery)
    };
    let quotient = if star::is_quotient(lat)? { Some(star::delta_quotient(lat, h)?) } else { None };
    if let Some(q) = &quotient {
        extra.push(("delta_quotient", Some(q.delta)));
    }
    let agree = a == b && b == c && extra.iter().all(|(_, v)| *v == Some(c)) && c >= r - 1;
    if !agree {
        let mut values = vec![("r", Some(r)), ("delta_chi", Some(a)), ("delta_count", Some(b)), (route.name(), Some(c))];
        values.extend(extra);
        return Err(inconsistency!("delta routes disagree\n{}", dump(lat, h, &s, &values)));
    }
    let curve_type = match &quotient {
        Some(q) => q.curve_type.clone(),
        None => plain_curve_type(r, c),
    };
    Ok(DeltaRow {
        class_id: lat.class_id(h),
        class: h.clone(),
        s_h: s,
        s_h0,
        r,
        delta: c,
        delta_chi: a,
        delta_count: b,
        delta_struct: c,
        route,
        epsilon: quotient.as_ref().map(|q| q.epsilon),
        quotient_case: quotient.as_ref().map(|q| q.case),
        curve_type,
        n_values,
    })
}

/// Rows for every nonzero class, computed in parallel and returned in class
/// order.
pub fn full_report(lat: &Lattice, opts: &ReportOptions) -> Result<DeltaReport> {
    let summary = summarize(lat)?;
    if !summary.rational {
        return Err(Error::NotRational);
    }
    let classes: Vec<Class> = lat.group().classes().into_iter().filter(|h| !h.is_zero()).collect();
    let rows = classes.par_iter().map(|h| delta_row(lat, h, opts)).collect::<Result<Vec<_>>>()?;
    Ok(DeltaReport { summary, rows })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::parse_graph;

    fn lat(s: &str) -> Lattice {
        Lattice::new(&parse_graph(s).unwrap()).unwrap()
    }

    #[test]
    fn routes_on_named_examples() {
        let l = lat("sf:-2;(2,1),(3,2),(5,2)");
        assert_eq!(delta_chi(&l, &Class(vec![6])).unwrap(), 2);
        assert_eq!(delta_count(&l, &Class(vec![6]), crate::DEFAULT_BUDGET).unwrap(), 2);
        let parts = surgery_parts(&l, &Class(vec![5]), crate::DEFAULT_BUDGET).unwrap();
        assert_eq!(parts.node_part, 1);
        assert_eq!(parts.delta, 1);
        let l = lat("sf:-2;(2,1),(3,2),(5,3)");
        assert_eq!(delta_chi(&l, &Class(vec![3])).unwrap(), 0);
    }

    #[test]
    fn preconditions() {
        let l = lat("cqs:7/3");
        assert_eq!(delta_chi(&l, &l.group().zero()), Err(Error::EmptyCurve));
        assert_eq!(delta_surgery(&l, &Class(vec![1]), 1000), Err(Error::NoNodes));
        let bad = lat("sf:-2;(3,1)x4");
        assert_eq!(delta_chi(&bad, &Class(vec![0, 1])), Err(Error::NotRational));
        assert_eq!(full_report(&bad, &ReportOptions::default()).unwrap_err(), Error::NotRational);
    }

    #[test]
    fn report_shapes() {
        let opts = ReportOptions::default();
        let rep = full_report(&lat("sf:-2;(2,1),(3,2),(5,2)"), &opts).unwrap();
        assert_eq!(rep.rows.len(), 12);
        assert!(rep.rows.iter().all(|row| row.route == Route::Star));
        let rep = full_report(&lat("cqs:15/11"), &opts).unwrap();
        assert_eq!(rep.rows.len(), 14);
        assert!(rep.rows.iter().all(|row| row.delta == row.r - 1 && row.route == Route::Cyclic));
        assert_eq!(full_report(&lat("ade:E8"), &opts).unwrap().rows.len(), 0);
    }

    #[test]
    fn exhaustive_verification_runs() {
        let opts = ReportOptions { verify: VerifyLevel::Exhaustive, ..Default::default() };
        let rep = full_report(&lat("sf:-2;(2,1),(3,2),(5,3)"), &opts).unwrap();
        assert_eq!(rep.rows.iter().map(|r| r.delta).sum::<i64>(), 4);
    }
}
