//! Browser bindings for three demo operations. Each has a plain Rust core
//! returning JSON (tested natively) and a thin `wasm_bindgen` wrapper.

use pdthresh::analysis::{self, ConditionReport};
use pdthresh::counterexamples::{construct_cycle_counterexample, construct_level_counterexample};
use pdthresh::io::parse_matrix;
use pdthresh::matrix::{determinant, is_positive_definite_with, min_eigenvalue, PdMethod, DEFAULT_PD_TOL};
use pdthresh::threshold::{threshold_at_level, zero_pattern_graph, LevelThreshold};
use pdthresh::SymmetricMatrix;
use serde::Serialize;
use wasm_bindgen::prelude::*;

const MAX_N: usize = 40;
const MAX_SAMPLES: usize = 2000;

#[derive(Serialize)]
struct Side {
    rows: Vec<Vec<f64>>,
    determinant: f64,
    min_eigenvalue: f64,
    positive_definite: bool,
}

impl Side {
    fn of(m: &SymmetricMatrix) -> Self {
        Self {
            rows: m.rows(),
            determinant: determinant(m),
            min_eigenvalue: min_eigenvalue(m),
            positive_definite: is_positive_definite_with(m, DEFAULT_PD_TOL, PdMethod::Auto).is_pd,
        }
    }
}

#[derive(Serialize)]
struct Explorer {
    n: usize,
    eta: f64,
    a: f64,
    b: f64,
    epsilon: Option<f64>,
    before: Side,
    after: Side,
}

fn check_n(n: usize) -> Result<(), String> {
    if (3..=MAX_N).contains(&n) {
        Ok(())
    } else {
        Err(format!("n must be between 3 and {MAX_N}"))
    }
}

fn to_json<T: Serialize>(v: &T) -> Result<String, String> {
    serde_json::to_string(v).map_err(|e| e.to_string())
}

/// The cycle counterexample for `n`, scaled so its corner sits exactly at
/// `eta`, before and after level thresholding at `eta`.
pub fn cycle_explorer_json(n: usize, eta: f64) -> Result<String, String> {
    check_n(n)?;
    let level = LevelThreshold::new(eta).map_err(|e| e.to_string())?;
    let (_, p) = construct_cycle_counterexample(n).map_err(|e| e.to_string())?;
    let m = construct_level_counterexample(n, eta).map_err(|e| e.to_string())?;
    let scale = eta / p.a.abs();
    to_json(&Explorer {
        n,
        eta,
        a: m.get(0, n - 1),
        b: p.b * scale,
        epsilon: p.epsilon,
        before: Side::of(&m),
        after: Side::of(&threshold_at_level(&m, level)),
    })
}

#[derive(Serialize)]
struct Sweep {
    n: usize,
    /// `|a|` of the unscaled construction: thresholding above it drops the corner.
    corner: f64,
    points: Vec<(f64, f64)>,
}

/// Smallest eigenvalue of the level-thresholded cycle counterexample as the
/// level runs over `(0, max |off-diagonal|]`.
pub fn level_sweep_json(n: usize, samples: usize) -> Result<String, String> {
    check_n(n)?;
    if !(2..=MAX_SAMPLES).contains(&samples) {
        return Err(format!("samples must be between 2 and {MAX_SAMPLES}"));
    }
    let (m, p) = construct_cycle_counterexample(n).map_err(|e| e.to_string())?;
    let top = (0..n)
        .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
        .map(|(i, j)| m.get(i, j).abs())
        .fold(0.0, f64::max);
    let points = (1..=samples)
        .map(|k| {
            let eta = top * 1.05 * k as f64 / samples as f64;
            let t = threshold_at_level(&m, LevelThreshold::new(eta).expect("positive level"));
            (eta, min_eigenvalue(&t))
        })
        .collect();
    to_json(&Sweep { n, corner: p.a.abs(), points })
}

#[derive(Serialize)]
struct Analysis {
    method: &'static str,
    report: ConditionReport,
}

/// Runs the path, tree or chordal analysis (first that applies) on a dense
/// matrix in the text file format, using its own zero pattern.
pub fn analyze_json(matrix_text: &str) -> Result<String, String> {
    let m = parse_matrix(matrix_text).map_err(|e| e.to_string())?;
    if m.dim() > MAX_N {
        return Err(format!("at most {MAX_N} rows"));
    }
    let g = zero_pattern_graph(&m, 0.0);
    let (method, report) = if let Some((_, p)) = analysis::path_relabel(&m) {
        ("path", analysis::path_conditions(&p))
    } else if g.is_tree() {
        ("tree", analysis::tree_conditions(&m, &g, 0))
    } else {
        ("chordal", analysis::chordal_conditions(&m, &g))
    };
    to_json(&Analysis { method, report: report.map_err(|e| e.to_string())? })
}

#[wasm_bindgen]
pub fn cycle_explorer(n: usize, eta: f64) -> Result<String, JsError> {
    cycle_explorer_json(n, eta).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn level_sweep(n: usize, samples: usize) -> Result<String, JsError> {
    level_sweep_json(n, samples).map_err(|e| JsError::new(&e))
}

#[wasm_bindgen]
pub fn analyze(matrix_text: &str) -> Result<String, JsError> {
    analyze_json(matrix_text).map_err(|e| JsError::new(&e))
}
