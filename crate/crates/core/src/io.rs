//! Text formats for matrices and graphs. All vertex and index numbers in files
//! are 1-based.
//!
//! Dense matrix:
//! ```text
//! # optional comments
//! 3
//! 4 3 -3
//! 3 4 -1
//! -3 -1 4
//! ```
//! Matrix Market: `%%MatrixMarket matrix coordinate real symmetric`, lower
//! triangle entries.
//!
//! Graph edge list:
//! ```text
//! # optional comments
//! n 3
//! 1 2
//! 1 3
//! ```

use std::fmt::Write as _;

use crate::error::{parse_err, Error, Result};
use crate::graph::UndirectedGraph;
use crate::matrix::SymmetricMatrix;

const MM_HEADER: &str = "%%MatrixMarket";

/// Formats a value with 17 significant digits, enough to round-trip any
/// `f64`.
pub fn format_value(x: f64) -> String {
    format!("{x:.16e}")
}

/// Non-blank, non-comment lines with their 1-based line numbers.
fn content_lines<'a>(text: &'a str, comment: &'a str) -> impl Iterator<Item = (usize, &'a str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(move |(_, l)| !l.is_empty() && !l.starts_with(comment))
}

fn parse_f64(line: usize, tok: &str) -> Result<f64> {
    let v: f64 = tok
        .parse()
        .map_err(|_| parse_err(line, format!("invalid number `{tok}`")))?;
    if v.is_finite() {
        Ok(v)
    } else {
        Err(parse_err(line, format!("non-finite value `{tok}`")))
    }
}

fn parse_usize(line: usize, tok: &str) -> Result<usize> {
    tok.parse()
        .map_err(|_| parse_err(line, format!("invalid integer `{tok}`")))
}

/// Parses either matrix format, chosen by the Matrix Market banner.
pub fn parse_matrix(text: &str) -> Result<SymmetricMatrix> {
    if text.trim_start().starts_with(MM_HEADER) {
        parse_matrix_market(text)
    } else {
        parse_dense_matrix(text)
    }
}

pub fn parse_dense_matrix(text: &str) -> Result<SymmetricMatrix> {
    let mut lines = content_lines(text, "#");
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "missing dimension line"))?;
    let n = parse_usize(first, header)?;
    if n == 0 {
        return Err(parse_err(first, "dimension must be at least 1"));
    }
    let mut rows = Vec::with_capacity(n);
    for (line, l) in lines {
        if rows.len() == n {
            return Err(parse_err(line, "more rows than the declared dimension"));
        }
        let row = l
            .split_whitespace()
            .map(|t| parse_f64(line, t))
            .collect::<Result<Vec<_>>>()?;
        if row.len() != n {
            return Err(parse_err(line, format!("expected {n} values, found {}", row.len())));
        }
        rows.push(row);
    }
    if rows.len() != n {
        return Err(parse_err(first, format!("expected {n} rows, found {}", rows.len())));
    }
    SymmetricMatrix::from_rows(&rows).map_err(|e| parse_err(first, e.to_string()))
}

pub fn parse_matrix_market(text: &str) -> Result<SymmetricMatrix> {
    let banner = text.lines().next().unwrap_or_default().to_ascii_lowercase();
    let words: Vec<&str> = banner.split_whitespace().collect();
    if words.len() != 5
        || words[1] != "matrix"
        || words[2] != "coordinate"
        || !matches!(words[3], "real" | "integer")
        || words[4] != "symmetric"
    {
        return Err(parse_err(
            1,
            "expected `%%MatrixMarket matrix coordinate real symmetric`",
        ));
    }
    let mut lines = content_lines(text, "%");
    let (size_line, size) = lines.next().ok_or_else(|| parse_err(1, "missing size line"))?;
    let dims = size
        .split_whitespace()
        .map(|t| parse_usize(size_line, t))
        .collect::<Result<Vec<_>>>()?;
    let [rows, cols, nnz] = dims[..] else {
        return Err(parse_err(size_line, "size line must be `rows cols entries`"));
    };
    if rows != cols || rows == 0 {
        return Err(parse_err(size_line, "matrix must be square and nonempty"));
    }
    let mut m = SymmetricMatrix::zeros(rows);
    let mut seen = vec![false; rows * rows];
    let mut count = 0;
    for (line, l) in lines {
        let toks: Vec<&str> = l.split_whitespace().collect();
        if toks.len() != 3 {
            return Err(parse_err(line, "entry must be `row col value`"));
        }
        let (i, j) = (parse_usize(line, toks[0])?, parse_usize(line, toks[1])?);
        if i == 0 || j == 0 || i > rows || j > rows {
            return Err(parse_err(line, format!("index ({i}, {j}) out of range")));
        }
        let (r, c) = (i.max(j) - 1, i.min(j) - 1);
        if std::mem::replace(&mut seen[r * rows + c], true) {
            return Err(parse_err(line, format!("duplicate entry ({i}, {j})")));
        }
        m.set(r, c, parse_f64(line, toks[2])?);
        count += 1;
    }
    if count != nnz {
        return Err(parse_err(size_line, format!("declared {nnz} entries, found {count}")));
    }
    Ok(m)
}

/// Dense text with optional `#` comment lines.
pub fn write_dense_matrix(m: &SymmetricMatrix, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "{}", m.dim());
    for row in m.rows() {
        let line: Vec<String> = row.into_iter().map(format_value).collect();
        let _ = writeln!(out, "{}", line.join(" "));
    }
    out
}

/// Matrix Market coordinate symmetric; only nonzero lower-triangle entries
/// are emitted.
pub fn write_matrix_market(m: &SymmetricMatrix, comments: &[String]) -> String {
    let n = m.dim();
    let entries: Vec<(usize, usize, f64)> = (0..n)
        .flat_map(|j| (j..n).map(move |i| (i, j)))
        .map(|(i, j)| (i, j, m.get(i, j)))
        .filter(|&(_, _, v)| v != 0.0)
        .collect();
    let mut out = String::from("%%MatrixMarket matrix coordinate real symmetric\n");
    for c in comments {
        let _ = writeln!(out, "% {c}");
    }
    let _ = writeln!(out, "{n} {n} {}", entries.len());
    for (i, j, v) in entries {
        let _ = writeln!(out, "{} {} {}", i + 1, j + 1, format_value(v));
    }
    out
}

pub fn parse_graph(text: &str) -> Result<UndirectedGraph> {
    let mut lines = content_lines(text, "#");
    let (first, header) = lines.next().ok_or_else(|| parse_err(1, "missing `n <count>` line"))?;
    let n = match header.split_whitespace().collect::<Vec<_>>()[..] {
        ["n", count] => parse_usize(first, count)?,
        _ => return Err(parse_err(first, "first line must be `n <vertex-count>`")),
    };
    if n == 0 {
        return Err(parse_err(first, "vertex count must be at least 1"));
    }
    let mut g = UndirectedGraph::new(n);
    for (line, l) in lines {
        let (u, v) = match l.split_whitespace().collect::<Vec<_>>()[..] {
            [u, v] => (parse_usize(line, u)?, parse_usize(line, v)?),
            _ => return Err(parse_err(line, "edge line must be `u v`")),
        };
        if !(1 <= u && u < v && v <= n) {
            return Err(parse_err(line, format!("edge ({u}, {v}) must satisfy 1 <= u < v <= {n}")));
        }
        match g.add_edge(u - 1, v - 1) {
            Ok(true) => {}
            Ok(false) => return Err(parse_err(line, Error::DuplicateEdge(u, v).to_string())),
            Err(e) => return Err(parse_err(line, e.to_string())),
        }
    }
    Ok(g)
}

pub fn write_graph(g: &UndirectedGraph, comments: &[String]) -> String {
    let mut out = String::new();
    for c in comments {
        let _ = writeln!(out, "# {c}");
    }
    let _ = writeln!(out, "n {}", g.vertex_count());
    for (u, v) in g.edges() {
        let _ = writeln!(out, "{} {}", u + 1, v + 1);
    }
    out
}
