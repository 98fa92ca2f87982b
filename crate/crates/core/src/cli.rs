//! The `pdthresh` command line.
//!
//! Exit codes: 0 positive definite / guaranteed / written, 2 not positive
//! definite / not guaranteed, 3 indeterminate, 1 a written witness failed
//! its own verification, 64 usage or input errors, 65 a pattern the chosen
//! analyzer cannot handle.

use std::ffi::OsString;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{ArgGroup, Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use crate::analysis::{self, ConditionReport, ConditionValue, Overall};
use crate::certificates::{self, Certificate, Thresholding, Verdict};
use crate::counterexamples::{self, NonDdProperties};
use crate::error::Error;
use crate::graph::UndirectedGraph;
use crate::io::{format_value, parse_graph, parse_matrix, write_dense_matrix, write_graph, write_matrix_market};
use crate::matrix::{
    is_positive_definite_with, is_strictly_diagonally_dominant, min_eigenvalue, PdMethod, PdReport, SymmetricMatrix,
    DEFAULT_PD_TOL,
};
use crate::threshold::{threshold_at_level, threshold_by_graph, zero_pattern_graph, LevelThreshold};

pub const EXIT_OK: i32 = 0;
pub const EXIT_VERIFY_FAILED: i32 = 1;
pub const EXIT_NOT_PD: i32 = 2;
pub const EXIT_INDETERMINATE: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_UNSUPPORTED: i32 = 65;

#[derive(Parser, Debug)]
#[command(name = "pdthresh", version, about = "Positive definiteness under hard-thresholding")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Test A and its thresholded version A_G for positive definiteness.
    Check(CheckArgs),
    /// Decide whether a pattern preserves positive definiteness for a whole class.
    Certify(CertifyArgs),
    /// Evaluate the chordal, tree or path conditions for a matrix.
    Analyze(AnalyzeArgs),
    /// Write a witness matrix.
    Counterexample(CounterexampleArgs),
    /// Threshold a matrix by a graph or a level.
    Threshold(ThresholdArgs),
}

#[derive(Args, Debug)]
struct CheckArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    graph: PathBuf,
    /// Pivot tolerance for the floating-point test.
    #[arg(long, env = "PDTHRESH_TOL", default_value_t = DEFAULT_PD_TOL)]
    tol: f64,
    /// Force exact rational arithmetic.
    #[arg(long)]
    exact: bool,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("mode").args(["subgraph", "level", "all_subgraphs"])))]
struct CertifyArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    subgraph: Option<PathBuf>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    all_subgraphs: bool,
    /// Where to write a witness; defaults to `<graph>.witness.txt`.
    #[arg(long)]
    witness_out: Option<PathBuf>,
    #[arg(long)]
    json: bool,
}

#[derive(ValueEnum, Clone, Copy, Debug, PartialEq, Eq)]
enum Method {
    Auto,
    Chordal,
    Tree,
    Path,
}

#[derive(Args, Debug)]
struct AnalyzeArgs {
    #[arg(long)]
    matrix: PathBuf,
    /// Pattern graph; defaults to the nonzero pattern of the matrix.
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Method::Auto)]
    method: Method,
    /// Tree root (1-based).
    #[arg(long, default_value_t = 1)]
    root: usize,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("construction").required(true).args(["cycle", "subgraph", "non_dd"])))]
struct CounterexampleArgs {
    /// Cycle length of the bordered cycle construction.
    #[arg(long)]
    cycle: Option<usize>,
    /// Scale the cycle witness for level thresholding.
    #[arg(long, requires = "cycle")]
    level: Option<f64>,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    subgraph: Option<PathBuf>,
    #[arg(long, requires = "graph")]
    non_dd: bool,
    #[arg(long)]
    out: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Args, Debug)]
#[command(group(ArgGroup::new("by").required(true).args(["graph", "level"])))]
struct ThresholdArgs {
    #[arg(long)]
    matrix: PathBuf,
    #[arg(long)]
    graph: Option<PathBuf>,
    #[arg(long)]
    level: Option<f64>,
    #[arg(long)]
    out: PathBuf,
}

/// A failure with its exit code.
struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::NotChordal
            | Error::NotConnected
            | Error::NotATree
            | Error::PatternMismatch { .. }
            | Error::NotAPathPattern { .. }
            | Error::NonpositiveDiagonal(_) => EXIT_UNSUPPORTED,
            _ => EXIT_USAGE,
        };
        Failure { code, msg: e.to_string() }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure { code: EXIT_USAGE, msg: msg.into() }
}

type Outcome = std::result::Result<i32, Failure>;

/// Runs the command line with `args` (including the program name), printing
/// to the process's standard streams.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    run_with(args, &mut std::io::stdout().lock(), &mut std::io::stderr().lock())
}

pub fn run_with<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = write!(err, "{}", e.render());
            return if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
        }
    };
    let result = match cli.command {
        Command::Check(a) => cmd_check(&a, out),
        Command::Certify(a) => cmd_certify(&a, out),
        Command::Analyze(a) => cmd_analyze(&a, out),
        Command::Counterexample(a) => cmd_counterexample(&a, out),
        Command::Threshold(a) => cmd_threshold(&a, out),
    };
    match result {
        Ok(code) => code,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.msg);
            f.code
        }
    }
}

fn read(path: &Path) -> std::result::Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_matrix(path: &Path) -> std::result::Result<SymmetricMatrix, Failure> {
    parse_matrix(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn load_graph(path: &Path) -> std::result::Result<UndirectedGraph, Failure> {
    parse_graph(&read(path)?).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn save(path: &Path, text: &str) -> std::result::Result<(), Failure> {
    fs::write(path, text).map_err(|e| usage(format!("{}: {e}", path.display())))
}

fn is_mtx(path: &Path) -> bool {
    path.extension().is_some_and(|e| e.eq_ignore_ascii_case("mtx"))
}

fn save_matrix(path: &Path, m: &SymmetricMatrix, comments: &[String]) -> std::result::Result<(), Failure> {
    let text = if is_mtx(path) {
        write_matrix_market(m, comments)
    } else {
        write_dense_matrix(m, comments)
    };
    save(path, &text)
}

/// `dir/stem.<suffix>` next to `path`.
fn sibling(path: &Path, suffix: &str) -> PathBuf {
    let stem = path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
    path.with_file_name(format!("{stem}.{suffix}"))
}

fn emit_json(out: &mut dyn Write, v: &Value) {
    let _ = writeln!(out, "{}", serde_json::to_string_pretty(v).expect("JSON values serialize"));
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn yes_no(b: bool) -> &'static str {
    if b {
        "yes"
    } else {
        "no"
    }
}

fn pd_code(r: &PdReport) -> i32 {
    if r.is_pd {
        EXIT_OK
    } else if r.indeterminate {
        EXIT_INDETERMINATE
    } else {
        EXIT_NOT_PD
    }
}

fn check_level(eta: f64) -> std::result::Result<LevelThreshold, Failure> {
    if eta > 0.0 {
        Ok(LevelThreshold::new(eta)?)
    } else {
        Err(Error::InvalidLevel(eta).into())
    }
}

fn cmd_check(a: &CheckArgs, out: &mut dyn Write) -> Outcome {
    if !(a.tol.is_finite() && a.tol >= 0.0) {
        return Err(usage(format!("tolerance must be finite and nonnegative, got {}", a.tol)));
    }
    let m = load_matrix(&a.matrix)?;
    let g = load_graph(&a.graph)?;
    let mg = threshold_by_graph(&m, &g)?;
    let method = if a.exact { PdMethod::Exact } else { PdMethod::Auto };
    let summary = |x: &SymmetricMatrix| {
        let report = is_positive_definite_with(x, a.tol, method);
        let dd = is_strictly_diagonally_dominant(x).strictly_dominant;
        (report, min_eigenvalue(x), dd)
    };
    let (ra, ea, da) = summary(&m);
    let (rg, eg, dg) = summary(&mg);
    if a.json {
        let part = |r: &PdReport, e: f64, d: bool| {
            json!({
                "verdict": r.label(),
                "mode": r.mode,
                "min_pivot": r.min_pivot_or_eigenvalue,
                "failing_minor_order": r.failing_minor_order,
                "min_eigenvalue": e,
                "strictly_diagonally_dominant": d,
            })
        };
        emit_json(out, &json!({ "a": part(&ra, ea, da), "a_g": part(&rg, eg, dg) }));
    } else {
        let _ = writeln!(out, "A: {}; A_G: {}", ra.label(), rg.label());
        let _ = writeln!(out, "min eigenvalue A:   {}", format_value(ea));
        let _ = writeln!(out, "min eigenvalue A_G: {}", format_value(eg));
        let _ = writeln!(out, "strictly diagonally dominant: A {}, A_G {}", yes_no(da), yes_no(dg));
    }
    Ok(pd_code(&rg))
}

fn cmd_certify(a: &CertifyArgs, out: &mut dyn Write) -> Outcome {
    let g = load_graph(&a.graph)?;
    let h = a.subgraph.as_deref().map(load_graph).transpose()?;
    let cert = if let Some(h) = &h {
        certificates::certify_subgraph_preservation(&g, h)?
    } else if let Some(eta) = a.level {
        check_level(eta)?;
        certificates::certify_level_preservation(&g, eta)?
    } else if a.all_subgraphs {
        certificates::certify_all_subgraph_preservation(&g)
    } else {
        certificates::certify_universal_preservation(&g)
    };
    let verified = cert.verify(&g, h.as_ref());

    let mut files = None;
    if let Some(w) = &cert.witness {
        let path = a.witness_out.clone().unwrap_or_else(|| sibling(&a.graph, "witness.txt"));
        let pattern_path = sibling(&path, "pattern.txt");
        let pattern = match &w.thresholding {
            Thresholding::Graph(t) => t.clone(),
            Thresholding::Level(_) => zero_pattern_graph(&w.thresholded, 0.0),
        };
        let mut comments = vec![format!("witness: {}", cert.theorem.tag())];
        if let Thresholding::Level(eta) = w.thresholding {
            comments.push(format!("level = {}", format_value(eta)));
        }
        if let Some(c) = &w.cycle {
            comments.push(format!("cycle: {:?}", one_based(c)));
        }
        save_matrix(&path, &w.matrix, &comments)?;
        save(&pattern_path, &write_graph(&pattern, &["pattern the witness is thresholded by".into()]))?;
        files = Some((path, pattern_path));
    }

    if a.json {
        emit_json(out, &certificate_json(&cert, files.as_ref(), verified));
    } else {
        let _ = writeln!(out, "verdict: {:?}", cert.verdict);
        let _ = writeln!(out, "theorem: {}", cert.theorem.tag());
        if let Some(s) = &cert.structure {
            let parts: Vec<String> = s.iter().map(|c| format!("{:?}", one_based(c))).collect();
            let _ = writeln!(out, "components: {}", parts.join(" "));
        }
        if let (Some(w), Some((path, pattern_path))) = (&cert.witness, &files) {
            let _ = writeln!(out, "witness: {} ({} before, {} after)", path.display(), w.before.label(), w.after.label());
            let _ = writeln!(out, "witness pattern: {}", pattern_path.display());
        }
        for n in &cert.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "evidence verified: {}", yes_no(verified));
    }
    if !verified {
        return Ok(EXIT_VERIFY_FAILED);
    }
    Ok(match cert.verdict {
        Verdict::GuaranteedForAll => EXIT_OK,
        Verdict::NotGuaranteed => EXIT_NOT_PD,
    })
}

fn certificate_json(cert: &Certificate, files: Option<&(PathBuf, PathBuf)>, verified: bool) -> Value {
    let witness = cert.witness.as_ref().map(|w| {
        json!({
            "path": files.map(|f| f.0.display().to_string()),
            "pattern_path": files.map(|f| f.1.display().to_string()),
            "cycle": w.cycle.as_deref().map(one_based),
            "level": match w.thresholding { Thresholding::Level(eta) => Some(eta), _ => None },
            "before": w.before.label(),
            "after": w.after.label(),
        })
    });
    json!({
        "verdict": cert.verdict,
        "theorem": cert.theorem.tag(),
        "structure": cert.structure.as_ref().map(|s| s.iter().map(|c| one_based(c)).collect::<Vec<_>>()),
        "witness": witness,
        "notes": cert.notes,
        "verified": verified,
    })
}

fn analyze_report(a: &AnalyzeArgs, m: &SymmetricMatrix) -> std::result::Result<ConditionReport, Failure> {
    let given = a.graph.as_deref().map(load_graph).transpose()?;
    if let Some(g) = &given {
        analysis::check_pattern(m, g)?;
    }
    let g = given.clone().unwrap_or_else(|| zero_pattern_graph(m, 0.0));
    let path_form = || -> Option<(Vec<usize>, SymmetricMatrix)> {
        match &given {
            Some(g) => g.path_order().map(|o| (o.clone(), m.permuted(&o))),
            None => analysis::path_relabel(m),
        }
    };
    let root = a.root.checked_sub(1).ok_or_else(|| usage("--root is 1-based"))?;
    let method = match a.method {
        Method::Auto if path_form().is_some() => Method::Path,
        Method::Auto if g.is_tree() => Method::Tree,
        Method::Auto => Method::Chordal,
        other => other,
    };
    Ok(match method {
        Method::Path => {
            let (order, p) = path_form().ok_or_else(|| Failure {
                code: EXIT_UNSUPPORTED,
                msg: "pattern is not a path".into(),
            })?;
            let mut r = analysis::path_conditions(&p)?;
            if order.iter().enumerate().any(|(i, &v)| i != v) {
                r.notes.push(format!("path order: {:?}", one_based(&order)));
            }
            r
        }
        Method::Tree => analysis::tree_conditions(m, &g, root)?,
        Method::Chordal | Method::Auto => analysis::chordal_conditions(m, &g)?,
    })
}

fn cmd_analyze(a: &AnalyzeArgs, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(&a.matrix)?;
    let r = analyze_report(a, &m)?;
    if a.json {
        emit_json(out, &serde_json::to_value(&r).expect("reports serialize"));
    } else {
        let _ = writeln!(out, "method: {}", r.method);
        let line = |out: &mut dyn Write, c: &analysis::ConditionItem| {
            let value = match &c.value {
                ConditionValue::Scalar { value } => format!("value {}", format_value(*value)),
                ConditionValue::Matrix { min_eigenvalue, entries } => {
                    format!("{0}x{0} block, min eigenvalue {1}", entries.len(), format_value(*min_eigenvalue))
                }
                ConditionValue::Singular => "singular block".to_string(),
            };
            let status = if c.passed {
                "pass"
            } else if c.indeterminate {
                "indeterminate"
            } else {
                "FAIL"
            };
            let _ = writeln!(out, "  {:<24} {:<20} {} [{}]", c.label, c.threshold_form, value, status);
        };
        let _ = writeln!(out, "conditions ({}):", r.items.len());
        for c in &r.items {
            line(out, c);
        }
        if let Some(sigma) = &r.sigma {
            let s: Vec<String> = sigma.iter().map(|x| x.map_or("undefined".into(), format_value)).collect();
            let _ = writeln!(out, "sigma(1..n): {}", s.join(" "));
        }
        if let Some(eq) = &r.equivalent_margins {
            let s: Vec<String> = eq.iter().map(|x| x.map_or("undefined".into(), format_value)).collect();
            let _ = writeln!(out, "sigma(k+1) - a_k^2/alpha_k: {}", s.join(" "));
        }
        let _ = writeln!(out, "block checks ({}):", r.preconditions.len());
        for c in &r.preconditions {
            line(out, c);
        }
        for n in &r.notes {
            let _ = writeln!(out, "note: {n}");
        }
        let _ = writeln!(out, "overall: {}", r.overall.label());
    }
    Ok(match r.overall {
        Overall::Pd => EXIT_OK,
        Overall::NotPd => EXIT_NOT_PD,
        Overall::Indeterminate => EXIT_INDETERMINATE,
    })
}

fn exact_pd(m: &SymmetricMatrix) -> PdReport {
    is_positive_definite_with(m, DEFAULT_PD_TOL, PdMethod::Exact)
}

fn cmd_counterexample(a: &CounterexampleArgs, out: &mut dyn Write) -> Outcome {
    let (matrix, pattern, mut comments, verified) = if let Some(n) = a.cycle {
        let (m, p) = counterexamples::construct_cycle_counterexample(n)?;
        let mut comments = p.comments();
        let (m, thresholded) = match a.level {
            Some(eta) => {
                let level = check_level(eta)?;
                let scaled = counterexamples::construct_level_counterexample(n, eta)?;
                comments.push(format!("level = {}", format_value(eta)));
                comments.push(format!("scale = {}", format_value(eta / p.a.abs())));
                let t = threshold_at_level(&scaled, level);
                (scaled, t)
            }
            None => {
                let mut t = m.clone();
                t.set(0, n - 1, 0.0);
                (m, t)
            }
        };
        let ok = exact_pd(&m).is_pd && !exact_pd(&thresholded).is_pd;
        (m, zero_pattern_graph(&thresholded, 0.0), comments, ok)
    } else {
        let graph_path = a.graph.as_deref().ok_or_else(|| usage("--graph is required"))?;
        let g = load_graph(graph_path)?;
        if let Some(hp) = &a.subgraph {
            let h = load_graph(hp)?;
            let e = counterexamples::embed_counterexample(&g, &h)?;
            let ok = exact_pd(&e.matrix).is_pd && !exact_pd(&threshold_by_graph(&e.matrix, &h)?).is_pd;
            let comments = vec![
                format!("broken cycle: {:?}", one_based(&e.cycle)),
                format!("construction: {}", if e.uses_a3_example { "3x3 example" } else { "cycle recipe" }),
            ];
            (e.matrix, h, comments, ok)
        } else {
            let m = counterexamples::non_dd_witness(&g)?;
            let props = NonDdProperties::check(&m, &g)?;
            (m, g, vec!["non-diagonally-dominant witness".into()], props.all())
        }
    };
    comments.push(if a.non_dd {
        "stays positive definite when thresholded by the companion pattern file".into()
    } else {
        "loses positive definiteness when thresholded by the companion pattern file".into()
    });
    let pattern_path = sibling(&a.out, "pattern.txt");
    save_matrix(&a.out, &matrix, &comments)?;
    save(&pattern_path, &write_graph(&pattern, &[]))?;
    if a.json {
        emit_json(
            out,
            &json!({
                "path": a.out.display().to_string(),
                "pattern_path": pattern_path.display().to_string(),
                "header": comments,
                "verified": verified,
            }),
        );
    } else {
        for c in &comments {
            let _ = writeln!(out, "{c}");
        }
        let _ = writeln!(out, "wrote {} and {}", a.out.display(), pattern_path.display());
        let _ = writeln!(out, "self-check: {}", if verified { "passed" } else { "FAILED" });
    }
    Ok(if verified { EXIT_OK } else { EXIT_VERIFY_FAILED })
}

fn cmd_threshold(a: &ThresholdArgs, out: &mut dyn Write) -> Outcome {
    let m = load_matrix(&a.matrix)?;
    let (t, what) = match (&a.graph, a.level) {
        (Some(gp), _) => (threshold_by_graph(&m, &load_graph(gp)?)?, format!("graph {}", gp.display())),
        (None, Some(eta)) => {
            let level = LevelThreshold::new(eta)?;
            (threshold_at_level(&m, level), format!("level {}", format_value(eta)))
        }
        (None, None) => return Err(usage("one of --graph or --level is required")),
    };
    save_matrix(&a.out, &t, &[format!("thresholded by {what}")])?;
    let _ = writeln!(out, "wrote {}", a.out.display());
    Ok(EXIT_OK)
}
