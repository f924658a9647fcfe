//! The `systole` command-line front end.
//!
//! Every command produces a [`CommandResult`] envelope. Floats are rounded
//! to nine significant digits and log-domain quantities are flagged with
//! `"log": true`.

use crate::census::{self, CensusError};
use crate::oracle;
use crate::par::Exec;
use crate::ring_solver::{self, RingError};
use crate::signed_graph::{self, RibbonGraph, SignedGraph};
use crate::surface_model::{self, SurfaceError};
use crate::angle_matrix;
use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Map, Value};
use std::io::Write;
use std::path::{Path, PathBuf};
use std::time::Instant;
use thiserror::Error;

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;

/// Seed for the randomized oracle sweep; fixed so output is reproducible.
pub const ORACLE_SEED: u64 = 20;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    #[error("budget of {budget} leaves exceeded after {distinct} distinct graphs")]
    Budget { budget: u64, distinct: usize },
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Budget { .. } => EXIT_BUDGET,
            _ => EXIT_INPUT,
        }
    }
}

impl From<RingError> for CliError {
    fn from(e: RingError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<SurfaceError> for CliError {
    fn from(e: SurfaceError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<CensusError> for CliError {
    fn from(e: CensusError) -> Self {
        match e {
            CensusError::BudgetExceeded { budget, distinct } => CliError::Budget { budget, distinct },
            e => CliError::Input(e.to_string()),
        }
    }
}

impl From<signed_graph::RibbonError> for CliError {
    fn from(e: signed_graph::RibbonError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<oracle::OracleError> for CliError {
    fn from(e: oracle::OracleError) -> Self {
        CliError::Input(e.to_string())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Ok,
    Error,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CommandResult {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub elapsed_ms: u64,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, ValueEnum)]
pub enum Format {
    #[default]
    Json,
    Csv,
}

#[derive(Debug, Parser)]
#[command(name = "systole", version, about = "Ring surfaces from signed graphs: lengths, certificates, counts")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    pub format: Format,
    /// Output file; for `enumerate` it receives the graph stream.
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Rows (n, t_n, a, σ, a/σ, w_n, L_n) for a range of n.
    Table {
        /// A single n or an inclusive range `lo..hi`.
        #[arg(long, default_value = "1..8")]
        n: String,
    },
    /// Solve for t_n and the ring geometry there.
    Tn {
        #[arg(long)]
        n: u64,
    },
    /// Angles, cosine matrices and the angle inequalities.
    Angles {
        #[arg(long)]
        n: u64,
    },
    /// Certify the surface of a signed or ribbon graph file.
    Certify {
        /// Expected regularity; defaults to the file's.
        #[arg(long)]
        n: Option<usize>,
        #[arg(long)]
        graph: PathBuf,
    },
    /// Canonical n-regular graphs (n = 2: ribbon classes).
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        v: usize,
        #[arg(long, default_value_t = 3)]
        min_girth: usize,
        #[arg(long)]
        asymmetric_only: bool,
    },
    /// Classes of n = 2 ribbon closures on V crosses.
    ClassifyN2 {
        #[arg(long)]
        v: usize,
    },
    /// Counting formulas; with --beta also the genus lower bound.
    Count {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        v: u64,
        /// Girth bound; defaults to the smallest admissible girth.
        #[arg(long)]
        min_girth: Option<u64>,
        #[arg(long)]
        beta: Option<f64>,
    },
    /// Hyperboloid-model cross-checks of the closed forms.
    OracleCheck,
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Table { .. } => "table",
            Command::Tn { .. } => "tn",
            Command::Angles { .. } => "angles",
            Command::Certify { .. } => "certify",
            Command::Enumerate { .. } => "enumerate",
            Command::ClassifyN2 { .. } => "classify-n2",
            Command::Count { .. } => "count",
            Command::OracleCheck => "oracle-check",
        }
    }
}

/// Rounds to nine significant digits.
pub fn round9(x: f64) -> f64 {
    if !x.is_finite() || x == 0.0 {
        return x;
    }
    format!("{x:.8e}").parse().unwrap_or(x)
}

fn is_log_key(k: &str) -> bool {
    k.starts_with("ln_") || k.ends_with("_log")
}

fn is_log_real(m: &Map<String, Value>) -> bool {
    m.len() == 2 && m.contains_key("sign") && m.contains_key("log_abs")
}

/// Rounds floats and flags log-domain values.
pub fn normalize(v: Value) -> Value {
    normalize_in(v, false)
}

fn normalize_in(v: Value, log_key: bool) -> Value {
    match v {
        Value::Number(num) if num.is_f64() => {
            let x = Value::from(round9(num.as_f64().unwrap_or(f64::NAN)));
            if log_key {
                json!({ "log": true, "value": x })
            } else {
                x
            }
        }
        Value::Number(num) if log_key => json!({ "log": true, "value": num }),
        Value::Array(a) => Value::Array(a.into_iter().map(|x| normalize_in(x, log_key)).collect()),
        Value::Object(m) if is_log_real(&m) => {
            let mut out = Map::new();
            out.insert("log".into(), Value::Bool(true));
            for (k, x) in m {
                out.insert(k, normalize_in(x, false));
            }
            Value::Object(out)
        }
        Value::Object(m) => Value::Object(m.into_iter().map(|(k, x)| {
            let lk = is_log_key(&k);
            (k, normalize_in(x, lk))
        }).collect()),
        other => other,
    }
}

fn to_payload<T: Serialize>(x: &T) -> Value {
    normalize(serde_json::to_value(x).unwrap_or(Value::Null))
}

/// Parses `N` or `lo..hi`.
pub fn parse_range(s: &str) -> Result<(u64, u64), CliError> {
    let bad = || CliError::Input(format!("bad range `{s}`, expected N or LO..HI"));
    let (lo, hi) = match s.split_once("..") {
        Some((a, b)) => (a.trim().parse().map_err(|_| bad())?, b.trim().parse().map_err(|_| bad())?),
        None => {
            let n = s.trim().parse().map_err(|_| bad())?;
            (n, n)
        }
    };
    if !(1 <= lo && lo <= hi && hi <= 64) {
        return Err(CliError::Input(format!("need 1 <= lo <= hi <= 64, got {lo}..{hi}")));
    }
    Ok((lo, hi))
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct TableRow {
    pub n: u64,
    pub t_n: f64,
    pub a: f64,
    pub sigma: f64,
    pub a_over_sigma: f64,
    pub w_n: Option<u64>,
    #[serde(rename = "L_n")]
    pub l_n: f64,
    pub ln_sigma: f64,
    pub ln_a_over_sigma: f64,
}

pub fn table_rows(lo: u64, hi: u64) -> Result<Vec<TableRow>, CliError> {
    (lo..=hi)
        .map(|n| {
            let s = ring_solver::solve_tn(n)?;
            Ok(TableRow {
                n,
                t_n: s.t_n,
                a: s.geometry.a_len,
                sigma: s.geometry.sigma,
                a_over_sigma: s.girth_threshold,
                w_n: s.w_n,
                l_n: s.l_n,
                ln_sigma: s.geometry.ln_sigma,
                ln_a_over_sigma: s.ln_girth_threshold,
            })
        })
        .collect()
}

pub fn table_csv(rows: &[TableRow]) -> Result<String, CliError> {
    let mut w = csv::Writer::from_writer(Vec::new());
    let io = |e: csv::Error| CliError::Input(e.to_string());
    w.write_record(["n", "t_n", "a", "sigma", "a_over_sigma", "w_n", "L_n", "ln_sigma", "ln_a_over_sigma"]).map_err(io)?;
    let f = |x: f64| format!("{:.9}", round9(x)).trim_end_matches('0').trim_end_matches('.').to_string();
    let g = |x: f64| format!("{}", round9(x));
    for r in rows {
        w.write_record([
            r.n.to_string(),
            f(r.t_n),
            f(r.a),
            g(r.sigma),
            g(r.a_over_sigma),
            r.w_n.map(|w| w.to_string()).unwrap_or_default(),
            f(r.l_n),
            g(r.ln_sigma),
            g(r.ln_a_over_sigma),
        ])
        .map_err(io)?;
    }
    let bytes = w.into_inner().map_err(|e| CliError::Input(e.to_string()))?;
    Ok(String::from_utf8_lossy(&bytes).into_owned())
}

/// A graph file: a signed graph, or a four-valent ribbon graph.
#[derive(Debug, Clone)]
pub enum GraphFile {
    Signed(SignedGraph),
    Ribbon(RibbonGraph),
}

pub fn load_graph(path: &Path) -> Result<GraphFile, CliError> {
    let text = std::fs::read_to_string(path).map_err(|e| CliError::Input(format!("{}: {e}", path.display())))?;
    parse_graph(&text)
}

pub fn parse_graph(text: &str) -> Result<GraphFile, CliError> {
    let v: Value = serde_json::from_str(text).map_err(|e| CliError::Input(format!("parse error: {e}")))?;
    if v.get("num_vertices").is_some() {
        let r: RibbonGraph = serde_json::from_value(v).map_err(|e| CliError::Input(format!("ribbon graph: {e}")))?;
        return Ok(GraphFile::Ribbon(r));
    }
    let mut g: SignedGraph = serde_json::from_value(v).map_err(|e| CliError::Input(format!("signed graph: {e}")))?;
    let n = g.n;
    for rec in g.vertices.iter_mut().filter(|r| r.signs.is_empty()) {
        rec.signs = std::iter::once(-1).chain(std::iter::repeat_n(1, n.saturating_sub(1))).collect();
    }
    g.validate().map_err(|e| CliError::Input(format!("validation error: {e}")))?;
    Ok(GraphFile::Signed(g))
}

/// Output of a command: the payload plus optional raw text (CSV).
struct Outcome {
    payload: Value,
    text: Option<String>,
}

impl Outcome {
    fn json(payload: Value) -> Self {
        Outcome { payload, text: None }
    }
}

fn write_out(path: &Path, s: &str) -> Result<(), CliError> {
    let mut f = std::fs::File::create(path)?;
    f.write_all(s.as_bytes())?;
    Ok(())
}

fn exec_command(cli: &Cli) -> Result<Outcome, CliError> {
    let exec = Exec::default();
    match &cli.command {
        Command::Table { n } => {
            let (lo, hi) = parse_range(n)?;
            let rows = table_rows(lo, hi)?;
            let text = match cli.format {
                Format::Csv => Some(table_csv(&rows)?),
                Format::Json => None,
            };
            Ok(Outcome { payload: to_payload(&json!({ "rows": rows })), text })
        }
        Command::Tn { n } => Ok(Outcome::json(to_payload(&ring_solver::solve_tn(*n)?))),
        Command::Angles { n } => {
            let ang = angle_matrix::angles(*n)?;
            let mats = angle_matrix::build_matrices(*n)?;
            let ineq = angle_matrix::angle_inequalities(*n)?;
            Ok(Outcome::json(to_payload(&json!({ "angles": ang, "matrices": mats, "inequalities": ineq }))))
        }
        Command::Certify { n, graph } => {
            let cert = match load_graph(graph)? {
                GraphFile::Signed(g) => surface_model::certify(n.unwrap_or(g.n), &g)?,
                GraphFile::Ribbon(r) => {
                    if n.is_some_and(|n| n != 2) {
                        return Err(CliError::Input("ribbon graph files describe n = 2 surfaces".into()));
                    }
                    surface_model::certify_ribbon(&r)?
                }
            };
            Ok(Outcome::json(to_payload(&cert)))
        }
        Command::Enumerate { n, v, min_girth, asymmetric_only } => {
            enumerate(*n, *v, *min_girth, *asymmetric_only, cli.out.as_deref(), exec)
        }
        Command::ClassifyN2 { v } => Ok(Outcome::json(to_payload(&signed_graph::n2_classify(*v)?))),
        Command::Count { n, v, min_girth, beta } => {
            if !(*n as u64 * v).is_multiple_of(2) {
                return Err(CliError::Input(format!("n*V = {} is odd", *n as u64 * v)));
            }
            let e = *n as u64 * v / 2;
            let w = match min_girth {
                Some(w) => *w,
                None => {
                    let th = ring_solver::girth_threshold(*n as u64)?;
                    th.w_n.unwrap_or(th.threshold.floor() as u64 + 1)
                }
            };
            let report = census::asymptotic_bounds(*n, e, w, exec)?;
            let bound = match beta {
                Some(b) => Some(census::theorem_b_lower_log(*n, e + 1, *b)?),
                None => None,
            };
            Ok(Outcome::json(to_payload(&json!({ "report": report, "genus_bound": bound }))))
        }
        Command::OracleCheck => {
            let random = oracle::random_checks(1000, ORACLE_SEED);
            let mut rings = Vec::new();
            let mut ring_ok = true;
            for n in 1..=6 {
                let (m, dev) = oracle::ring_check(n)?;
                ring_ok &= (m.a_meas - m.c_meas).abs() < 1e-6;
                rings.push(json!({ "ring": m, "closed_form_deviation": dev }));
            }
            let pass = ring_ok
                && random.max_hyp_err < 1e-9
                && random.max_angle_err < 1e-9
                && random.max_pentagon_err < 1e-9
                && random.feasibility_disagreements == 0;
            Ok(Outcome::json(to_payload(&json!({ "random": random, "rings": rings, "pass": pass }))))
        }
    }
}

fn enumerate(
    n: usize,
    v: usize,
    min_girth: usize,
    asymmetric_only: bool,
    out: Option<&Path>,
    exec: Exec,
) -> Result<Outcome, CliError> {
    if n == 2 {
        if asymmetric_only {
            return Err(CliError::Input("--asymmetric-only applies to census graphs, not n = 2 ribbon classes".into()));
        }
        let classes = if min_girth <= v { signed_graph::n2_classify(v)?.classes } else { Vec::new() };
        if let Some(p) = out {
            let lines: Vec<String> =
                classes.iter().map(|c| serde_json::to_string(&c.representative).unwrap_or_default()).collect();
            write_out(p, &(lines.join("\n") + "\n"))?;
        }
        return Ok(Outcome::json(to_payload(&json!({
            "n": 2, "V": v, "min_girth": min_girth, "mode": "n2", "count": classes.len(), "classes": classes,
        }))));
    }
    let graphs = census::generate_regular(n, v, min_girth, exec)?;
    let total = graphs.len();
    let asymmetric = graphs.iter().filter(|g| g.automorphisms == 1).count();
    let kept: Vec<_> = graphs.into_iter().filter(|g| !asymmetric_only || g.automorphisms == 1).collect();
    let mut payload = json!({
        "n": n, "V": v, "min_girth": min_girth, "asymmetric_only": asymmetric_only,
        "count": kept.len(), "total": total, "asymmetric": asymmetric,
    });
    match out {
        Some(p) => {
            let mut s = String::new();
            for g in &kept {
                s.push_str(&serde_json::to_string(g).unwrap_or_default());
                s.push('\n');
            }
            write_out(p, &s)?;
        }
        None => payload["graphs"] = serde_json::to_value(&kept).unwrap_or(Value::Null),
    }
    if n >= 3 && (n * v).is_multiple_of(2) && v as u64 <= census::EXACT_REPORT_MAX_V {
        let e = (n * v / 2) as u64;
        payload["report"] = serde_json::to_value(census::asymptotic_bounds(n, e, min_girth as u64, exec)?)
            .unwrap_or(Value::Null);
    }
    Ok(Outcome::json(normalize(payload)))
}

/// Runs a parsed command line. Returns the envelope, any raw text and the
/// exit code.
pub fn run(cli: &Cli) -> (CommandResult, Option<String>, i32) {
    let start = Instant::now();
    let command = cli.command.name().to_string();
    let (status, payload, text, code) = match exec_command(cli) {
        Ok(o) => (Status::Ok, o.payload, o.text, EXIT_OK),
        Err(e) => {
            let mut p = json!({ "error": e.to_string() });
            if let CliError::Budget { budget, distinct } = e {
                p["budget"] = json!(budget);
                p["distinct_so_far"] = json!(distinct);
            }
            (Status::Error, p, None, e.exit_code())
        }
    };
    let elapsed_ms = start.elapsed().as_millis() as u64;
    (CommandResult { command, status, payload, elapsed_ms }, text, code)
}

/// Parses argv, runs, writes output and returns the exit code.
pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    let (result, text, code) = run(&cli);
    let body = match text {
        Some(t) => t,
        None => serde_json::to_string_pretty(&result).unwrap_or_default() + "\n",
    };
    let is_enumerate = matches!(cli.command, Command::Enumerate { .. });
    match (&cli.out, is_enumerate) {
        (Some(p), false) => {
            if let Err(e) = write_out(p, &body) {
                eprintln!("{e}");
                return EXIT_INPUT;
            }
        }
        _ => print!("{body}"),
    }
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> (CommandResult, Option<String>, i32) {
        let cli = Cli::try_parse_from(std::iter::once("systole").chain(args.iter().copied())).unwrap();
        run(&cli)
    }

    #[test]
    fn rounding() {
        assert_eq!(round9(1.745_752_188_420_785), 1.745_752_19);
        assert_eq!(round9(0.0), 0.0);
        assert_eq!(round9(123_456_789_123.0), 123_456_789_000.0);
    }

    #[test]
    fn table_matches_reference_rows() {
        let (r, _, code) = run_args(&["table", "--n", "2..4"]);
        assert_eq!(code, 0);
        let rows = r.payload["rows"].as_array().unwrap();
        assert_eq!(rows.len(), 3);
        let t: Vec<f64> = rows.iter().map(|x| x["t_n"].as_f64().unwrap()).collect();
        for (a, b) in t.iter().zip([1.745752, 2.645975, 3.526946]) {
            assert!((a - b).abs() < 5e-6);
        }
        assert_eq!(rows[0]["ln_sigma"]["log"], json!(true));
        let (_, csv, _) = run_args(&["table", "--n", "2..4", "--format", "csv"]);
        let csv = csv.unwrap();
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(1).unwrap().starts_with("2,1.74575219,"));
    }

    #[test]
    fn table_bolza_and_large_n() {
        let (r, _, _) = run_args(&["table", "--n", "1"]);
        let row = &r.payload["rows"][0];
        assert!((row["L_n"].as_f64().unwrap() - 3.057_141_84).abs() < 1e-8);
        let (r, _, code) = run_args(&["table", "--n", "30"]);
        assert_eq!(code, 0);
        let row = &r.payload["rows"][0];
        assert!(row["ln_a_over_sigma"]["value"].as_f64().unwrap().is_finite());
        assert!(row["sigma"].as_f64().unwrap() > 0.0);
    }

    #[test]
    fn range_errors_exit_2() {
        for bad in ["0", "5..3", "1..65", "x"] {
            assert_eq!(run_args(&["table", "--n", bad]).2, EXIT_INPUT, "{bad}");
        }
    }

    #[test]
    fn bad_graph_exit_2() {
        let dir = std::env::temp_dir().join(format!("systole-cli-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let p = dir.join("bad.json");
        std::fs::write(&p, "{ not json").unwrap();
        let (r, _, code) = run_args(&["certify", "--graph", p.to_str().unwrap()]);
        assert_eq!(code, EXIT_INPUT);
        assert_eq!(r.status, Status::Error);
        std::fs::write(&p, r#"{"n":3,"vertices":[{"cyclic":[0,0,0],"signs":[1,1,1]}],"edges":[]}"#).unwrap();
        assert_eq!(run_args(&["certify", "--graph", p.to_str().unwrap()]).2, EXIT_INPUT);
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn missing_signs_take_default() {
        let text = r#"{"n":3,"vertices":[{"cyclic":[0,1,2]},{"cyclic":[0,3,4]},{"cyclic":[1,3,5]},{"cyclic":[2,4,5]}],
            "edges":[[[0,0],[1,0]],[[0,1],[2,0]],[[0,2],[3,0]],[[1,1],[2,1]],[[1,2],[3,1]],[[2,2],[3,2]]]}"#;
        let GraphFile::Signed(g) = parse_graph(text).unwrap() else { panic!("expected a signed graph") };
        assert!(g.vertices.iter().all(|r| r.signs == vec![-1, 1, 1]));
    }

    #[test]
    fn certify_examples() {
        let dir = std::env::temp_dir().join(format!("systole-cert-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let k4 = SignedGraph::from_edges(3, 4, &[(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]).unwrap();
        let c12 = SignedGraph::from_edges(2, 12, &(0..12).map(|i| (i, (i + 1) % 12)).collect::<Vec<_>>()).unwrap();
        for (name, g, status, genus, count) in [("k4", k4, "fail", 7, 72), ("c12", c12, "pass", 13, 144)] {
            let p = dir.join(format!("{name}.json"));
            std::fs::write(&p, serde_json::to_string(&g).unwrap()).unwrap();
            let (r, _, code) = run_args(&["certify", "--graph", p.to_str().unwrap()]);
            assert_eq!(code, 0);
            assert_eq!(r.payload["verdict"]["status"], json!(status));
            assert_eq!(r.payload["genus"], json!(genus));
            assert_eq!(r.payload["systole_count"], json!(count));
        }
        let _ = std::fs::remove_dir_all(&dir);
    }

    #[test]
    fn enumerate_examples() {
        let (r, _, code) = run_args(&["enumerate", "--n", "3", "--v", "10", "--min-girth", "5"]);
        assert_eq!(code, 0);
        assert_eq!(r.payload["count"], json!(1));
        let (r, _, _) = run_args(&["enumerate", "--n", "3", "--v", "4", "--min-girth", "3", "--asymmetric-only"]);
        assert_eq!(r.payload["count"], json!(0));
        let (r, _, _) = run_args(&["enumerate", "--n", "2", "--v", "12", "--min-girth", "12"]);
        assert_eq!(r.payload["count"], json!(2));
        let (r, _, _) = run_args(&["classify-n2", "--v", "7"]);
        assert_eq!(r.payload["classes"].as_array().unwrap().len(), 1);
    }

    #[test]
    fn count_and_oracle() {
        let (r, _, code) = run_args(&["count", "--n", "3", "--v", "6", "--min-girth", "3", "--beta", "0.5"]);
        assert_eq!(code, 0);
        assert_eq!(r.payload["report"]["alpha_log"]["log"], json!(true));
        assert_eq!(r.payload["genus_bound"]["total_log"]["log"], json!(true));
        let (r, _, code) = run_args(&["oracle-check"]);
        assert_eq!(code, 0);
        assert_eq!(r.payload["pass"], json!(true));
    }

    #[test]
    fn json_round_trips() {
        let (r, _, _) = run_args(&["tn", "--n", "3"]);
        let s = serde_json::to_string(&r).unwrap();
        let back: CommandResult = serde_json::from_str(&s).unwrap();
        assert_eq!(back, r);
        assert_eq!(normalize(back.payload.clone()), back.payload);
    }

    #[test]
    fn deterministic() {
        let a = run_args(&["angles", "--n", "3"]).0.payload;
        let b = run_args(&["angles", "--n", "3"]).0.payload;
        assert_eq!(a, b);
    }
}
