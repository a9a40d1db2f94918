//! Invariant suites run over single graphs or whole families.

use std::fmt;

use num_rational::BigRational;
use num_traits::{One, Zero};
use rayon::prelude::*;
use serde::Serialize;

use crate::cyclic::{chi_closed_form, chi_difference_closed_form, cyclic_s_coeffs, hj_expand};
use crate::error::{Error, Result};
use crate::gen::{self, RandomSpec};
use crate::graph::{parse_graph, string_graph, DualGraph};
use crate::lattice::{Class, Lattice};
use crate::laufer::{self, TieBreak};
use crate::orchestrator::{self, ReportOptions};
use crate::series;
use crate::star::{self, QuotientCase};

/// What `verify` runs on.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum FamilySpec {
    Graph(String),
    Quotient { dmax: i64, kmax: i64 },
    Cyclic { dmax: i64 },
    Random(RandomSpec),
}

fn params(body: &str) -> Result<Vec<(String, i64)>> {
    body.split(',')
        .filter(|p| !p.trim().is_empty())
        .map(|p| {
            let (k, v) = p.split_once('=').ok_or_else(|| Error::Parse(format!("expected key=value, got {p:?}")))?;
            let v = v.trim().parse().map_err(|_| Error::Parse(format!("bad number in {p:?}")))?;
            Ok((k.trim().to_string(), v))
        })
        .collect()
}

/// Parses `quotient:dmax=7,kmax=5`, `cyclic:dmax=30`,
/// `random:count=50,seed=1,vertices=7,det=60`, or any graph spec.
pub fn parse_family(spec: &str) -> Result<FamilySpec> {
    let Some((kind, body)) = spec.split_once(':') else {
        return Ok(FamilySpec::Graph(spec.to_string()));
    };
    let get = |ps: &[(String, i64)], key: &str, default: i64| -> Result<i64> {
        for (k, _) in ps {
            if !["dmax", "kmax", "count", "seed", "vertices", "det"].contains(&k.as_str()) {
                return Err(Error::Parse(format!("unknown family parameter {k:?}")));
            }
        }
        let v = ps.iter().find(|(k, _)| k == key).map_or(default, |(_, v)| *v);
        if v <= 0 {
            return Err(Error::Parse(format!("{key} must be positive")));
        }
        Ok(v)
    };
    match kind {
        "quotient" => {
            let ps = params(body)?;
            Ok(FamilySpec::Quotient { dmax: get(&ps, "dmax", 7)?, kmax: get(&ps, "kmax", 5)? })
        }
        "cyclic" => Ok(FamilySpec::Cyclic { dmax: get(&params(body)?, "dmax", 30)? }),
        "random" => {
            let ps = params(body)?;
            let d = RandomSpec::default();
            Ok(FamilySpec::Random(RandomSpec {
                count: get(&ps, "count", d.count as i64)? as usize,
                seed: get(&ps, "seed", d.seed as i64)? as u64,
                max_vertices: get(&ps, "vertices", d.max_vertices as i64)? as usize,
                max_det: get(&ps, "det", d.max_det)?,
            }))
        }
        _ => Ok(FamilySpec::Graph(spec.to_string())),
    }
}

/// Named graphs of a family, in a fixed order.
pub fn expand(spec: &FamilySpec) -> Result<Vec<(String, DualGraph)>> {
    match spec {
        FamilySpec::Graph(s) => Ok(vec![(s.clone(), parse_graph(s)?)]),
        FamilySpec::Quotient { dmax, kmax } => gen::quotient_graphs(*dmax, *kmax),
        FamilySpec::Cyclic { dmax } => gen::cyclic_graphs(*dmax),
        FamilySpec::Random(r) => Ok(gen::random_rational_graphs(r)?
            .into_iter()
            .enumerate()
            .map(|(i, g)| (format!("random#{i}:{}", g.render()), g))
            .collect()),
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SuiteOutcome {
    pub suite: &'static str,
    pub cases: usize,
    pub failures: Vec<String>,
    /// Set when a failure is an internal inconsistency rather than a
    /// violated statement.
    pub inconsistent: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct GraphOutcome {
    pub graph: String,
    pub suites: Vec<SuiteOutcome>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct VerifyReport {
    pub spec: String,
    pub graphs: Vec<GraphOutcome>,
}

impl VerifyReport {
    pub fn passed(&self) -> bool {
        self.graphs.iter().all(|g| g.suites.iter().all(|s| s.failures.is_empty()))
    }

    pub fn inconsistent(&self) -> bool {
        self.graphs.iter().any(|g| g.suites.iter().any(|s| s.inconsistent))
    }

    /// `(suite, cases, failures)` summed over graphs, in first-seen order.
    pub fn totals(&self) -> Vec<(&'static str, usize, usize)> {
        let mut out: Vec<(&'static str, usize, usize)> = vec![];
        for s in self.graphs.iter().flat_map(|g| &g.suites) {
            match out.iter_mut().find(|t| t.0 == s.suite) {
                Some(t) => {
                    t.1 += s.cases;
                    t.2 += s.failures.len();
                }
                None => out.push((s.suite, s.cases, s.failures.len())),
            }
        }
        out
    }
}

impl fmt::Display for VerifyReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "verify {} ({} graphs)", self.spec, self.graphs.len())?;
        for (suite, cases, fails) in self.totals() {
            let status = if fails == 0 { "PASS" } else { "FAIL" };
            writeln!(f, "{status} {suite}: {cases} cases, {fails} failures")?;
        }
        for g in &self.graphs {
            for s in &g.suites {
                for msg in &s.failures {
                    writeln!(f, "  {} [{}] {}", g.graph, s.suite, msg)?;
                }
            }
        }
        Ok(())
    }
}

/// Collects the results of one suite.
struct Suite {
    out: SuiteOutcome,
}

impl Suite {
    fn new(suite: &'static str) -> Self {
        Suite { out: SuiteOutcome { suite, cases: 0, failures: vec![], inconsistent: false } }
    }

    fn check(&mut self, ok: bool, msg: impl FnOnce() -> String) {
        self.out.cases += 1;
        if !ok {
            self.out.failures.push(msg());
        }
    }

    /// Runs a fallible case; errors count as failures.
    fn run(&mut self, label: impl fmt::Display, f: impl FnOnce() -> Result<Option<String>>) {
        self.out.cases += 1;
        match f() {
            Ok(None) => {}
            Ok(Some(msg)) => self.out.failures.push(format!("{label}: {msg}")),
            Err(e) => {
                self.out.inconsistent |= e.is_inconsistency();
                self.out.failures.push(format!("{label}: {e}"));
            }
        }
    }
}

fn nonzero_classes(lat: &Lattice) -> Vec<Class> {
    lat.group().classes().into_iter().filter(|h| !h.is_zero()).collect()
}

fn lattice_suite(lat: &Lattice) -> SuiteOutcome {
    let mut s = Suite::new("lattice");
    for h in lat.group().classes() {
        s.run(&h, || {
            let sh = laufer::minimal_class_cycle(lat, &h)?;
            let lhs = lat.chi(&-&sh)?;
            let rhs = lat.chi(&sh)? - lat.pairing(&sh, lat.canonical_cycle())?;
            let r = lat.r_of(&h)?;
            Ok(if lhs != rhs {
                Some(format!("chi(-s_h) = {lhs} but chi(s_h) - (s_h, Z_K) = {rhs}"))
            } else if !r.leq(&sh) || lat.class_of(&sh)? != h {
                Some("r_h <= s_h or class_of(s_h) = h fails".into())
            } else {
                None
            })
        });
    }
    s.out
}

fn laufer_suite(lat: &Lattice, budget: u64) -> SuiteOutcome {
    let mut s = Suite::new("laufer");
    s.run("Z_min", || {
        let (a, _) = laufer::fundamental_cycle_with(lat, TieBreak::Smallest)?;
        let (b, _) = laufer::fundamental_cycle_with(lat, TieBreak::Largest)?;
        laufer::is_rational(lat)?;
        Ok(if a != b {
            Some(format!("tie-breaking changes Z_min: {a} vs {b}"))
        } else if !lat.big_e().leq(&a) {
            Some(format!("Z_min = {a} is not >= E"))
        } else {
            None
        })
    });
    // the box grows exponentially with the vertex count
    if lat.len() > 7 {
        return s.out;
    }
    let extra = if lat.det() <= 40 { 3 } else { 1 };
    for h in lat.group().classes() {
        s.run(format!("s_h box minimum for {h}"), || {
            let found = laufer::oracle::check_minimal(lat, &h, extra, budget)?;
            Ok((!found.min_stable).then(|| "min of two anti-nef elements left the cone".into()))
        });
    }
    s.out
}

fn surgery_suite(lat: &Lattice, budget: u64) -> SuiteOutcome {
    let mut s = Suite::new("surgery");
    let zk = lat.canonical_cycle();
    s.run("Q_[Z_K](Z_K)", || {
        let q = series::counting_q(lat, &lat.class_of(zk)?, zk, budget)?;
        Ok((q != 0).then(|| format!("Q_[Z_K](Z_K) = {q}")))
    });
    let nodes = lat.graph().nodes();
    let mut subsets = vec![nodes.clone()];
    if lat.len() > 1 {
        subsets.push(vec![0]);
    }
    for subset in subsets.into_iter().filter(|s| !s.is_empty()) {
        for h in lat.group().classes() {
            s.run(format!("I = {subset:?}, x = Z_K + s_{h}"), || {
                let x = &laufer::minimal_class_cycle(lat, &h)? + zk;
                let c = series::surgery_check(lat, &subset, &x, budget)?;
                Ok((!c.holds).then(|| format!("{c:?}")))
            });
        }
    }
    s.out
}

fn delta_suite(lat: &Lattice, opts: &ReportOptions) -> SuiteOutcome {
    let mut s = Suite::new("three-route");
    let classes = nonzero_classes(lat);
    for h in classes {
        s.run(&h, || {
            let row = orchestrator::delta_row(lat, &h, opts)?;
            Ok((row.delta < row.r - 1).then(|| format!("delta = {} < r - 1 = {}", row.delta, row.r - 1)))
        });
    }
    s.out
}

fn cyclic_suite(lat: &Lattice) -> SuiteOutcome {
    let mut s = Suite::new("cyclic");
    let g = lat.graph();
    let Some(order) = g.string_order() else { return s.out };
    if lat.det() < 2 {
        return s.out;
    }
    let ks: Vec<i64> = order.iter().map(|&v| -g.euler(v)).collect();
    let value = crate::graph::continued_fraction(&ks);
    let (d, q) = (value.numer().try_into().unwrap_or(0i64), value.denom().try_into().unwrap_or(0i64));
    let Ok(hj) = hj_expand(d, q) else {
        s.check(false, || format!("string does not expand as {d}/{q}"));
        return s.out;
    };
    for a in 0..d {
        s.run(format!("a = {a}"), || {
            let h = lat.group().from_index(a as usize);
            let sh = laufer::minimal_dual(lat, &h)?;
            let along: Vec<i64> = order.iter().map(|&v| sh[v]).collect();
            if cyclic_s_coeffs(&hj, a)? != along {
                return Ok(Some(format!("recursion {:?} vs lattice {along:?}", cyclic_s_coeffs(&hj, a)?)));
            }
            let chi = lat.chi_dual(&sh)?;
            if chi != chi_closed_form(&hj, a) {
                return Ok(Some(format!("chi(s_h) = {chi} but the closed form gives {}", chi_closed_form(&hj, a))));
            }
            if a == 0 {
                return Ok(None);
            }
            let neg = laufer::minimal_dual(lat, &lat.group().neg(&h))?;
            let diff = &chi - lat.chi_dual(&neg)?;
            if diff != chi_difference_closed_form(&hj, a) {
                return Ok(Some(format!("chi(s_h) - chi(s_-h) = {diff}, closed form {}", chi_difference_closed_form(&hj, a))));
            }
            if ks.len() < 2 {
                return Ok(None);
            }
            // delete the first vertex and compare with the curve left on the rest
            let rest = string_graph(&ks[1..])?;
            let sub = Lattice::new(&rest)?;
            let tail = &along[1..];
            let hk = sub.group().class_of_dual(tail);
            let expected = if a % q == 0 { 0 } else { tail.iter().sum::<i64>() - 1 };
            let got = if hk.is_zero() { 0 } else { orchestrator::delta_chi(&sub, &hk)? };
            Ok((got != expected || laufer::minimal_dual(&sub, &hk)? != tail)
                .then(|| format!("restriction gives delta {got}, expected {expected}")))
        });
    }
    s.out
}

/// On quotient graphs: if `s_h + E*_v = s_{h+[E*_v]}` for some `v`, then
/// `epsilon(h) = 0`.
fn sub_collection_suite(lat: &Lattice) -> SuiteOutcome {
    let mut s = Suite::new("sub-collection");
    if !matches!(star::is_quotient(lat), Ok(true)) || lat.graph().is_string() {
        return s.out;
    }
    for h in nonzero_classes(lat) {
        s.run(&h, || {
            let q = star::delta_quotient(lat, &h)?;
            let sh = laufer::minimal_dual(lat, &h)?;
            for v in 0..lat.len() {
                let mut bigger = sh.clone();
                bigger[v] += 1;
                let hv = lat.group().class_of_dual(&bigger);
                if q.epsilon != 0 && laufer::minimal_dual(lat, &hv)? == bigger {
                    return Ok(Some(format!(
                        "epsilon = 1 (r = {}, delta = {}) but s_h + E*_{v} = s_{hv} is minimal",
                        q.r, q.delta
                    )));
                }
            }
            Ok(None)
        });
    }
    s.out
}

fn star_suite(lat: &Lattice) -> SuiteOutcome {
    let mut s = Suite::new("star");
    let Ok(sd) = star::seifert_from_graph(lat.graph()) else { return s.out };
    let quotient = match star::is_quotient(lat) {
        Ok(q) => q,
        Err(e) => {
            s.run("quotient test", || Err(e));
            return s.out;
        }
    };
    let nu = sd.nu() as i64;
    let abs_e = -sd.e();
    for h in nonzero_classes(lat) {
        s.run(&h, || {
            let d = star::delta_star(lat, &h)?;
            let tilde = star::shifted_index(&sd, &d.reduced);
            if star::interval_start(&d) > BigRational::zero() {
                return Ok(Some("summation interval is empty".into()));
            }
            // Remark 4.4, checked until the linear term dominates
            let reach = ((BigRational::from_integer((tilde.c0 + nu + 2).into())) / &abs_e).ceil().to_integer();
            let reach: i64 = reach.try_into().unwrap_or(1000).clamp(1, 1000);
            if let Some(n) = (-reach - 1..0).find(|&n| star::n_func(&sd, &tilde, n) > nu - 2) {
                return Ok(Some(format!("N(n) = {} > nu - 2 at n = {n}", star::n_func(&sd, &tilde, n))));
            }
            if !quotient {
                return Ok(None);
            }
            let q = star::delta_quotient(lat, &h)?;
            let one = BigRational::one();
            let two = &one + &one;
            let fail = if !(q.delta == q.r - 1 || q.delta == q.r) {
                Some(format!("delta = {} not in {{r-1, r}} with r = {}", q.delta, q.r))
            } else if d.s_h0 <= one && q.delta != q.r - 1 {
                Some("Claim 1: s_h0 <= 1 but delta != r - 1".into())
            } else if let Some(&(n, v)) = d.n_values.iter().find(|&&(_, v)| v < 0) {
                Some(format!("Claim 2: N({n}) = {v} < 0"))
            } else if star::n_func(&sd, &tilde, 0) < 0 {
                Some(format!("Claim 2: N(0) = {} < 0", star::n_func(&sd, &tilde, 0)))
            } else if sd.k >= 3 && d.s_h0 >= two {
                Some(format!("Lemma 5.1: k >= 3 but s_h0 = {}", d.s_h0))
            } else if sd.k == 2 && sd.legs.iter().all(|l| l.q == 1) && d.s_h0 > two {
                Some(format!("Lemma 5.1: k = 2, all q = 1, but s_h0 = {}", d.s_h0))
            } else if sd.k == 2
                && sd.legs.iter().filter(|l| l.q == 1).count() >= 2
                && d.n_values.iter().any(|&(n, v)| n < -1 && v > 0)
            {
                Some(format!("Lemma 5.2: positive N below -1: {:?}", d.n_values))
            } else {
                None
            };
            if fail.is_some() {
                return Ok(fail);
            }
            if q.case == QuotientCase::Exceptional && q.epsilon != 1 {
                return Ok(Some("exceptional class with epsilon = 0".into()));
            }
            Ok(None)
        });
    }
    s.out
}

/// Runs every suite that applies to one graph.
pub fn verify_graph(name: &str, g: &DualGraph, opts: &ReportOptions) -> GraphOutcome {
    let lat = match Lattice::new(g) {
        Ok(l) => l,
        Err(e) => {
            let mut s = Suite::new("lattice");
            s.run("construction", || Err(e));
            return GraphOutcome { graph: name.to_string(), suites: vec![s.out] };
        }
    };
    let mut suites = vec![lattice_suite(&lat), laufer_suite(&lat, opts.budget)];
    match laufer::is_rational(&lat) {
        Ok(true) => {
            suites.push(delta_suite(&lat, opts));
            suites.push(surgery_suite(&lat, opts.budget));
            suites.push(cyclic_suite(&lat));
            suites.push(star_suite(&lat));
            suites.push(sub_collection_suite(&lat));
        }
        Ok(false) => {}
        Err(e) => {
            let mut s = Suite::new("laufer");
            s.run("rationality", || Err(e));
            suites.push(s.out);
        }
    }
    suites.retain(|s| s.cases > 0);
    GraphOutcome { graph: name.to_string(), suites }
}

/// Expands a family spec and verifies every member in parallel; the report
/// lists graphs in family order.
pub fn verify_family(spec: &str, opts: &ReportOptions) -> Result<VerifyReport> {
    let graphs = expand(&parse_family(spec)?)?;
    let outcomes = graphs.par_iter().map(|(name, g)| verify_graph(name, g, opts)).collect();
    Ok(VerifyReport { spec: spec.to_string(), graphs: outcomes })
}
