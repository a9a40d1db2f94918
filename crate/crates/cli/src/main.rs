mod output;

use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use singdelta::orchestrator::{self, DeltaRow};
use singdelta::{laufer, series, verify};
use singdelta::{parse_graph, Class, Cycle, DualGraph, Lattice, ReportOptions, VerifyLevel};

use output::{opt, tuple, Format, Output, Table};

#[derive(Debug, thiserror::Error)]
enum Failure {
    #[error(transparent)]
    Core(#[from] singdelta::Error),
    #[error("{0}")]
    Input(String),
    /// A verification run finished and found problems; the report is already
    /// printed.
    #[error("{0}")]
    Check(String),
}

impl Failure {
    fn exit_code(&self) -> u8 {
        match self {
            Failure::Core(e) if e.is_inconsistency() => 3,
            Failure::Core(_) | Failure::Input(_) => 2,
            Failure::Check(_) => 3,
        }
    }
}

type Res<T> = Result<T, Failure>;

#[derive(Debug, Parser)]
#[command(name = "singdelta", version, about = "Delta invariants of minimal generic curves on rational surface singularities")]
struct Cli {
    #[command(flatten)]
    config: Config,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Config {
    /// Output format.
    #[arg(long, global = true, value_enum, default_value_t = Format::Table)]
    format: Format,
    /// Cap on enumerated lattice points in series computations.
    #[arg(long, global = true, env = "SINGDELTA_BUDGET", default_value_t = singdelta::DEFAULT_BUDGET,
          value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
    /// Extra checks run alongside each delta computation.
    #[arg(long, global = true, value_enum, default_value_t = Level::Off)]
    verify: Level,
    /// Worker threads; defaults to the number of CPUs.
    #[arg(long, global = true, value_parser = clap::value_parser!(u64).range(1..))]
    jobs: Option<u64>,
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum Level {
    Off,
    Oracle,
    Exhaustive,
}

impl Config {
    fn report_options(&self) -> ReportOptions {
        let verify = match self.verify {
            Level::Off => VerifyLevel::Off,
            Level::Oracle => VerifyLevel::Oracle,
            Level::Exhaustive => VerifyLevel::Exhaustive,
        };
        ReportOptions { budget: self.budget, verify }
    }
}

/// GRAPH arguments accept a file path, `-` for stdin, or an inline spec
/// (`cqs:d/q`, `sf:-k;(d,q),...`, `ade:E8`, or graph JSON).
#[derive(Debug, Subcommand)]
enum Command {
    /// Intersection matrix, discriminant group, canonical and fundamental cycles.
    Info {
        /// Graph file, `-` for stdin, or an inline spec.
        graph: String,
    },
    /// Every class of H with its reduced representative r_h.
    Classes {
        /// Graph file, `-` for stdin, or an inline spec.
        graph: String,
    },
    /// The minimal anti-nef cycle s_h of every class.
    Mincycles {
        /// Graph file, `-` for stdin, or an inline spec.
        graph: String,
    },
    /// Coefficients of Z(t) on the region below a bound.
    Series {
        /// Graph file, `-` for stdin, or an inline spec.
        graph: String,
        /// Bound cycle, e.g. `zk+e`, `e:1,2,1` or `dual:0,1/2,0`.
        #[arg(long)]
        bound: String,
    },
    /// Delta invariant of the minimal generic curves, one row per class.
    Delta {
        /// Graph file, `-` for stdin, or an inline spec.
        graph: String,
        /// Report only this class id.
        #[arg(long, conflicts_with = "all")]
        class: Option<usize>,
        /// Report every nonzero class (the default).
        #[arg(long)]
        all: bool,
    },
    /// Run the consistency suites on a graph or a family such as
    /// `quotient:dmax=7,kmax=5`, `cyclic:dmax=30` or `random:count=50,seed=1`.
    Verify {
        /// Family spec, graph file, `-` for stdin, or an inline graph spec.
        spec: String,
        /// Compare the delta report of a single graph with a saved
        /// `delta --all --format json` output.
        #[arg(long)]
        golden: Option<PathBuf>,
    },
    /// Classes of the cyclic quotient d/q with s_h tuples, r and delta.
    CqsTable {
        /// `d/q` with 0 < q < d coprime.
        fraction: String,
    },
}

fn read_input(arg: &str) -> Res<String> {
    if arg == "-" {
        let mut s = String::new();
        std::io::stdin().read_to_string(&mut s).map_err(|e| Failure::Input(format!("reading stdin: {e}")))?;
        return Ok(s);
    }
    let path = Path::new(arg);
    if path.is_file() {
        return std::fs::read_to_string(path).map_err(|e| Failure::Input(format!("reading {arg}: {e}")));
    }
    Ok(arg.to_string())
}

fn load(arg: &str) -> Res<(DualGraph, Lattice)> {
    let g = parse_graph(read_input(arg)?.trim())?;
    let lat = Lattice::new(&g)?;
    Ok((g, lat))
}

fn json_of<T: serde::Serialize>(x: &T) -> Value {
    serde_json::to_value(x).expect("report types serialize")
}

fn cycle_cells(lat: &Lattice, c: &Cycle) -> [String; 2] {
    let j = lat.cycle_json(c);
    [tuple(&j.e), tuple(&j.dual)]
}

fn class_by_id(lat: &Lattice, id: usize) -> Res<Class> {
    let order = lat.group().order();
    if id >= order {
        return Err(Failure::Input(format!("class id {id} out of range: H has {order} classes")));
    }
    Ok(lat.group().from_index(id))
}

fn cmd_info(arg: &str) -> Res<Output> {
    let (g, lat) = load(arg)?;
    let summary = orchestrator::summarize(&lat)?;
    let (_, seq) = laufer::fundamental_cycle(&lat)?;
    let seifert = singdelta::star::seifert_from_graph(&g).ok();
    let dual: Vec<Vec<String>> = lat.dual_matrix().iter().map(|r| r.iter().map(|x| x.to_string()).collect()).collect();
    let generator = lat.group().generator();

    let mut json = json_of(&summary);
    let obj = json.as_object_mut().expect("summary is an object");
    obj.insert("graph".into(), json_of(&g.to_json()));
    obj.insert("generator".into(), json!(generator));
    obj.insert("star_shaped".into(), json!(seifert.is_some()));
    obj.insert("matrix".into(), json!(lat.matrix()));
    obj.insert("dual_matrix".into(), json!(dual));
    obj.insert("laufer_steps".into(), json_of(&seq.steps));

    let mut t = Table::new(Some("summary"), &["field", "value"]);
    let mut kv = |k: &str, v: String| t.push(vec![k.into(), v]);
    kv("vertices", summary.vertices.to_string());
    kv("det", summary.det.to_string());
    kv("H divisors", tuple(&summary.divisors));
    kv("|H|", summary.order.to_string());
    kv("generator", generator.map_or("-".into(), |v| format!("E*_{v}")));
    kv("Z_K (E)", tuple(&summary.z_k.e));
    kv("Z_K (E*)", tuple(&summary.z_k.dual));
    kv("Z_min (E)", tuple(&summary.z_min.e));
    kv("Z_min (E*)", tuple(&summary.z_min.dual));
    kv("rational", summary.rational.to_string());
    kv("quotient", summary.quotient.to_string());
    kv("star-shaped", seifert.is_some().to_string());
    kv("seifert", opt(summary.seifert.as_ref()));

    let n = lat.len();
    let heads: Vec<String> = (0..n).map(|v| format!("E{v}")).collect();
    let heads: Vec<&str> = std::iter::once("").chain(heads.iter().map(String::as_str)).collect();
    let mut m = Table::new(Some("M"), &heads);
    let mut inv = Table::new(Some("-M^-1"), &heads);
    for v in 0..n {
        m.push(std::iter::once(format!("E{v}")).chain(lat.matrix()[v].iter().map(|x| x.to_string())).collect());
        inv.push(std::iter::once(format!("E{v}")).chain(dual[v].iter().cloned()).collect());
    }
    let mut steps = Table::new(Some("Laufer sequence from E"), &["step", "E* coords", "vertex", "(x,E_v)"]);
    for (i, s) in seq.steps.iter().enumerate() {
        steps.push(vec![i.to_string(), tuple(&s.cycle), s.vertex.to_string(), s.pairing.to_string()]);
    }
    Ok(Output { json, tables: vec![t, m, inv, steps] })
}

fn cmd_classes(arg: &str) -> Res<Output> {
    let (_, lat) = load(arg)?;
    let mut rows = vec![];
    let mut t = Table::new(None, &["id", "class", "order", "r_h (E)", "r_h (E*)"]);
    for (h, r) in lat.enumerate_classes()? {
        let id = lat.class_id(&h);
        let order = lat.group().order_of(&h);
        let j = lat.cycle_json(&r);
        let [e, d] = cycle_cells(&lat, &r);
        t.push(vec![id.to_string(), h.to_string(), order.to_string(), e, d]);
        rows.push(json!({"class_id": id, "class": h, "order": order, "r_h": j}));
    }
    let json = json!({"divisors": lat.group().divisors(), "generator": lat.group().generator(), "classes": rows});
    Ok(Output { json, tables: vec![t] })
}

fn cmd_mincycles(arg: &str) -> Res<Output> {
    let (_, lat) = load(arg)?;
    let mut rows = vec![];
    let mut t = Table::new(None, &["id", "class", "s_h (E)", "s_h (E*)", "r", "chi(s_h)"]);
    for h in lat.group().classes() {
        let id = lat.class_id(&h);
        let s = laufer::minimal_dual(&lat, &h)?;
        let c = lat.from_dual(&s);
        let r: i64 = s.iter().sum();
        let chi = lat.chi(&c)?;
        let [e, d] = cycle_cells(&lat, &c);
        t.push(vec![id.to_string(), h.to_string(), e, d, r.to_string(), chi.to_string()]);
        rows.push(json!({"class_id": id, "class": h, "s_h": lat.cycle_json(&c), "r": r, "chi": chi.to_string()}));
    }
    Ok(Output { json: json!({ "classes": rows }), tables: vec![t] })
}

fn cmd_series(arg: &str, bound: &str, budget: u64) -> Res<Output> {
    let (_, lat) = load(arg)?;
    let x = lat.parse_cycle(bound)?;
    let region = series::z_coefficients(&lat, &x, budget)?;
    let mut t = Table::new(None, &["exponents (E*)", "z"]);
    for term in &region.terms {
        t.push(vec![tuple(&term.exponents), term.z.to_string()]);
    }
    let json = json!({"bound": lat.cycle_json(&x), "terms": region.terms});
    Ok(Output { json, tables: vec![t] })
}

fn delta_table(rows: &[DeltaRow]) -> Table {
    let mut t = Table::new(
        None,
        &[
            "id", "class", "s_h (E*)", "s_h0", "r", "delta", "chi", "count", "struct", "route", "epsilon", "case", "type",
            "N values",
        ],
    );
    for row in rows {
        let n_values: Vec<String> = row.n_values.iter().map(|(n, v)| format!("{n}:{v}")).collect();
        t.push(vec![
            row.class_id.to_string(),
            row.class.to_string(),
            tuple(&row.s_h),
            opt(row.s_h0.as_ref()),
            row.r.to_string(),
            row.delta.to_string(),
            row.delta_chi.to_string(),
            row.delta_count.to_string(),
            row.delta_struct.to_string(),
            row.route.name().to_string(),
            opt(row.epsilon),
            row.quotient_case.map_or("-".into(), |c| json_of(&c).as_str().unwrap_or_default().to_string()),
            row.curve_type.clone(),
            n_values.join(" "),
        ]);
    }
    t
}

fn cmd_delta(arg: &str, class: Option<usize>, opts: &ReportOptions) -> Res<Output> {
    let (_, lat) = load(arg)?;
    match class {
        None => {
            let report = orchestrator::full_report(&lat, opts)?;
            Ok(Output { json: json_of(&report), tables: vec![delta_table(&report.rows)] })
        }
        Some(id) => {
            let h = class_by_id(&lat, id)?;
            if h.is_zero() {
                let notice = singdelta::Error::EmptyCurve.to_string();
                let mut t = Table::new(None, &["id", "notice"]);
                t.push(vec!["0".into(), notice.clone()]);
                return Ok(Output { json: json!({"class_id": 0, "notice": notice}), tables: vec![t] });
            }
            let summary = orchestrator::summarize(&lat)?;
            let row = orchestrator::delta_row(&lat, &h, opts)?;
            let table = delta_table(std::slice::from_ref(&row));
            Ok(Output { json: json!({"summary": summary, "rows": [row]}), tables: vec![table] })
        }
    }
}

/// Paths where two JSON values differ, at most `limit` of them.
fn json_diff(path: &str, a: &Value, b: &Value, out: &mut Vec<String>, limit: usize) {
    if out.len() >= limit {
        return;
    }
    match (a, b) {
        (Value::Object(x), Value::Object(y)) => {
            let mut keys: Vec<&String> = x.keys().chain(y.keys()).collect();
            keys.sort();
            keys.dedup();
            for k in keys {
                match (x.get(k), y.get(k)) {
                    (Some(u), Some(v)) => json_diff(&format!("{path}.{k}"), u, v, out, limit),
                    _ => out.push(format!("{path}.{k}: present on one side only")),
                }
            }
        }
        (Value::Array(x), Value::Array(y)) if x.len() == y.len() => {
            for (i, (u, v)) in x.iter().zip(y).enumerate() {
                json_diff(&format!("{path}[{i}]"), u, v, out, limit);
            }
        }
        _ if a == b => {}
        _ => out.push(format!("{path}: expected {b}, computed {a}")),
    }
}

fn cmd_verify(spec: &str, golden: Option<&Path>, opts: &ReportOptions) -> Res<(Output, Option<Failure>)> {
    let input = read_input(spec)?;
    let input = input.trim();
    let report = verify::verify_family(input, opts)?;
    let mut json = json_of(&report);
    let mut tables = vec![];
    let mut t = Table::new(Some("suites"), &["suite", "cases", "failures", "status"]);
    for (suite, cases, fails) in report.totals() {
        let status = if fails == 0 { "PASS" } else { "FAIL" };
        t.push(vec![suite.into(), cases.to_string(), fails.to_string(), status.into()]);
    }
    tables.push(t);
    let mut f = Table::new(Some("failures"), &["graph", "suite", "message"]);
    for g in &report.graphs {
        for s in &g.suites {
            for msg in &s.failures {
                f.push(vec![g.graph.clone(), s.suite.into(), msg.clone()]);
            }
        }
    }
    if !f.rows.is_empty() {
        tables.push(f);
    }

    let mut problem = None;
    if let Some(path) = golden {
        if !matches!(verify::parse_family(input)?, verify::FamilySpec::Graph(_)) {
            return Err(Failure::Input("--golden needs a single graph, not a family".into()));
        }
        let text = std::fs::read_to_string(path)
            .map_err(|e| Failure::Input(format!("reading {}: {e}", path.display())))?;
        let expected: Value = serde_json::from_str(&text)
            .map_err(|e| Failure::Input(format!("golden file {} is not JSON: {e}", path.display())))?;
        let lat = Lattice::new(&parse_graph(input)?)?;
        let computed = json_of(&orchestrator::full_report(&lat, opts)?);
        let mut diffs = vec![];
        json_diff("$", &computed, &expected, &mut diffs, 20);
        let mut gt = Table::new(Some("golden"), &["file", "status", "difference"]);
        let file = path.display().to_string();
        if diffs.is_empty() {
            gt.push(vec![file.clone(), "PASS".into(), String::new()]);
        } else {
            for d in &diffs {
                gt.push(vec![file.clone(), "FAIL".into(), d.clone()]);
            }
            problem = Some(Failure::Check(format!("golden file {file} differs from the computed report")));
        }
        tables.push(gt);
        json.as_object_mut()
            .expect("report is an object")
            .insert("golden".into(), json!({"file": file, "matches": diffs.is_empty(), "differences": diffs}));
    }
    if problem.is_none() && !report.passed() {
        let kind = if report.inconsistent() { "internal inconsistency" } else { "failures" };
        problem = Some(Failure::Check(format!("verify {input}: {kind}")));
    }
    Ok((Output { json, tables }, problem))
}

fn cmd_cqs_table(fraction: &str, opts: &ReportOptions) -> Res<Output> {
    let spec = format!("cqs:{}", fraction.trim());
    let g = parse_graph(&spec)?;
    let lat = Lattice::new(&g)?;
    let report = orchestrator::full_report(&lat, opts)?;
    let mut t = Table::new(None, &["id", "tuple", "r", "delta"]);
    let mut rows = vec![json!({"class_id": 0, "tuple": vec![0; lat.len()], "r": 0, "delta": null})];
    t.push(vec!["0".into(), tuple(&vec![0; lat.len()]), "0".into(), "-".into()]);
    for row in &report.rows {
        t.push(vec![row.class_id.to_string(), tuple(&row.s_h), row.r.to_string(), row.delta.to_string()]);
        rows.push(json!({"class_id": row.class_id, "tuple": row.s_h, "r": row.r, "delta": row.delta}));
    }
    Ok(Output { json: json!({"graph": spec, "classes": rows}), tables: vec![t] })
}

fn run(cli: &Cli) -> Res<Option<Failure>> {
    let opts = cli.config.report_options();
    let (out, problem) = match &cli.command {
        Command::Info { graph } => (cmd_info(graph)?, None),
        Command::Classes { graph } => (cmd_classes(graph)?, None),
        Command::Mincycles { graph } => (cmd_mincycles(graph)?, None),
        Command::Series { graph, bound } => (cmd_series(graph, bound, opts.budget)?, None),
        Command::Delta { graph, class, .. } => (cmd_delta(graph, *class, &opts)?, None),
        Command::Verify { spec, golden } => cmd_verify(spec, golden.as_deref(), &opts)?,
        Command::CqsTable { fraction } => (cmd_cqs_table(fraction, &opts)?, None),
    };
    print!("{}", out.render(cli.config.format));
    Ok(problem)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    if let Some(jobs) = cli.config.jobs {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(jobs as usize).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(None) => ExitCode::SUCCESS,
        Ok(Some(problem)) | Err(problem) => {
            eprintln!("error: {problem}");
            ExitCode::from(problem.exit_code())
        }
    }
}
