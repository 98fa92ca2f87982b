//! Exact positive definiteness analyzers for matrices whose zero pattern is a
//! chordal graph, a tree or a path.
//!
//! Each analyzer reports the scalar or matrix conditions of the recursive
//! decomposition together with "precondition" checks on the diagonal blocks
//! of the cliques. Clique blocks of a positive definite matrix are positive
//! definite, and together with the conditions they are also sufficient, so
//! the overall verdict holds for any pattern-compatible input.

use std::collections::VecDeque;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::{perfect_clique_ordering, Decomposition, UndirectedGraph};
use crate::matrix::{eigenvalues, schur_complement_within, SymmetricMatrix};

/// Half-width of the band around zero in which a condition is neither passed
/// nor failed.
pub const MARGIN_BAND: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Overall {
    Pd,
    NotPd,
    Indeterminate,
}

impl Overall {
    pub fn label(self) -> &'static str {
        match self {
            Overall::Pd => "PD",
            Overall::NotPd => "NOT PD",
            Overall::Indeterminate => "INDETERMINATE",
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum ConditionValue {
    Scalar { value: f64 },
    Matrix { entries: Vec<Vec<f64>>, min_eigenvalue: f64 },
    /// A block that had to be inverted was numerically singular.
    Singular,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionItem {
    pub label: String,
    pub value: ConditionValue,
    pub threshold_form: String,
    /// Scalar value or smallest eigenvalue; absent when singular.
    pub margin: Option<f64>,
    pub passed: bool,
    pub indeterminate: bool,
}

impl ConditionItem {
    fn new(label: String, threshold_form: &str, value: ConditionValue) -> Self {
        let margin = match &value {
            ConditionValue::Scalar { value } => Some(*value),
            ConditionValue::Matrix { min_eigenvalue, .. } => Some(*min_eigenvalue),
            ConditionValue::Singular => None,
        };
        let (passed, indeterminate) = match margin {
            Some(x) if x > MARGIN_BAND => (true, false),
            Some(x) if x < -MARGIN_BAND => (false, false),
            _ => (false, true),
        };
        Self {
            label,
            value,
            threshold_form: threshold_form.to_string(),
            margin,
            passed,
            indeterminate,
        }
    }

    fn from_block(label: String, threshold_form: &str, block: &SymmetricMatrix) -> Self {
        let value = if block.dim() == 1 {
            ConditionValue::Scalar { value: block.get(0, 0) }
        } else {
            ConditionValue::Matrix {
                entries: block.rows(),
                min_eigenvalue: eigenvalues(block)[0],
            }
        };
        Self::new(label, threshold_form, value)
    }

    fn from_result(label: String, threshold_form: &str, block: Result<SymmetricMatrix>) -> Self {
        match block {
            Ok(b) => Self::from_block(label, threshold_form, &b),
            Err(_) => Self::new(label, threshold_form, ConditionValue::Singular),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct ConditionReport {
    pub method: String,
    pub items: Vec<ConditionItem>,
    /// Positive definiteness of the clique (or edge) diagonal blocks.
    pub preconditions: Vec<ConditionItem>,
    pub overall: Overall,
    /// Full continued fraction `σ(1..n)` (path analysis only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub sigma: Option<Vec<Option<f64>>>,
    /// `σ(k+1) - a_k^2 / α_k` for each item (path analysis only).
    #[serde(skip_serializing_if = "Option::is_none")]
    pub equivalent_margins: Option<Vec<Option<f64>>>,
    pub notes: Vec<String>,
}

impl ConditionReport {
    fn assemble(method: &str, items: Vec<ConditionItem>, preconditions: Vec<ConditionItem>) -> Self {
        let all = || items.iter().chain(&preconditions);
        let overall = if all().any(|c| !c.passed && !c.indeterminate) {
            Overall::NotPd
        } else if all().any(|c| c.indeterminate) {
            Overall::Indeterminate
        } else {
            Overall::Pd
        };
        Self {
            method: method.to_string(),
            items,
            preconditions,
            overall,
            sigma: None,
            equivalent_margins: None,
            notes: Vec::new(),
        }
    }
}

fn check_dims(m: &SymmetricMatrix, g: &UndirectedGraph) -> Result<()> {
    if m.dim() != g.vertex_count() {
        return Err(Error::DimensionMismatch {
            expected: m.dim(),
            found: g.vertex_count(),
        });
    }
    Ok(())
}

/// Nonzero entries must lie on edges of `g`.
pub fn check_pattern(m: &SymmetricMatrix, g: &UndirectedGraph) -> Result<()> {
    check_dims(m, g)?;
    let n = m.dim();
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j) != 0.0 && !g.has_edge(i, j) {
                return Err(Error::PatternMismatch { row: i + 1, col: j + 1 });
            }
        }
    }
    Ok(())
}

fn one_based(s: &[usize]) -> String {
    let v: Vec<String> = s.iter().map(|x| (x + 1).to_string()).collect();
    format!("{{{}}}", v.join(","))
}

fn block_check(m: &SymmetricMatrix, label: String, s: &[usize]) -> ConditionItem {
    ConditionItem::from_block(label, "M_SS > 0", &m.principal(s))
}

/// `S1 + S2 - M_CC` where `S1`, `S2` are the Schur complements of `M_AA`,
/// `M_BB` in `M_{A∪C}`, `M_{B∪C}`.
fn separator_condition(
    m: &SymmetricMatrix,
    a: &[usize],
    c: &[usize],
    b: &[usize],
    label: String,
) -> ConditionItem {
    const FORM: &str = "S1+S2-M_CC > 0";
    let s1 = match schur_complement_within(m, c, a) {
        Ok(s) => s,
        Err(_) => return ConditionItem::new(label, FORM, ConditionValue::Singular),
    };
    let s2 = match schur_complement_within(m, c, b) {
        Ok(s) => s,
        Err(_) => return ConditionItem::new(label, FORM, ConditionValue::Singular),
    };
    let mcc = m.principal(c);
    let k = c.len();
    let cond = SymmetricMatrix::from_upper_fn(k, |i, j| s1.get(i, j) + s2.get(i, j) - mcc.get(i, j));
    ConditionItem::from_result(label, FORM, cond)
}

/// The decomposition criterion: `M_AA > 0`, `M_BB > 0` and
/// `S1 + S2 - M_CC > 0`.
pub fn decomposition_condition(m: &SymmetricMatrix, d: &Decomposition) -> Result<ConditionReport> {
    let n = m.dim();
    let covered = d.part_a().len() + d.part_b().len() + d.separator().len();
    if covered != n || d.part_a().iter().chain(d.part_b()).chain(d.separator()).any(|&v| v >= n) {
        return Err(Error::InvalidDecomposition(format!(
            "decomposition does not partition {n} vertices"
        )));
    }
    let (a, b, c) = (d.part_a(), d.part_b(), d.separator());
    for &x in a {
        for &y in b {
            if m.get(x, y) != 0.0 {
                return Err(Error::PatternMismatch {
                    row: x.min(y) + 1,
                    col: x.max(y) + 1,
                });
            }
        }
    }
    let items = vec![separator_condition(m, a, c, b, format!("C={}", one_based(c)))];
    let pre = vec![
        block_check(m, format!("M_AA, A={}", one_based(a)), a),
        block_check(m, format!("M_BB, B={}", one_based(b)), b),
    ];
    Ok(ConditionReport::assemble("decomposition", items, pre))
}

/// Conditions along a perfect ordering of the cliques of a connected chordal
/// pattern: for `q >= 2`, `S1(q) + S2(q) - M_{S_q S_q} > 0`.
pub fn chordal_conditions(m: &SymmetricMatrix, g: &UndirectedGraph) -> Result<ConditionReport> {
    check_pattern(m, g)?;
    let order = perfect_clique_ordering(g)?;
    let pre = order
        .cliques
        .iter()
        .enumerate()
        .map(|(q, c)| block_check(m, format!("clique {} = {}", q + 1, one_based(c)), c))
        .collect();
    let items = (1..order.len())
        .map(|q| {
            let s = &order.separators[q];
            separator_condition(
                m,
                &order.residual_a[q],
                s,
                &order.residual_b[q],
                format!("q={} S={}", q + 1, one_based(s)),
            )
        })
        .collect();
    let mut report = ConditionReport::assemble("chordal", items, pre);
    report.notes.push(format!(
        "cliques in perfect order: {}",
        order.cliques.iter().map(|c| one_based(c)).collect::<Vec<_>>().join(" ")
    ));
    Ok(report)
}

/// Breadth-first enumeration of the edges of a rooted tree as
/// `(parent, child)` pairs.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct TreeEdgeOrder {
    pub root: usize,
    pub edges: Vec<(usize, usize)>,
}

/// Parents are dequeued in discovery order and their children taken in
/// ascending index.
pub fn tree_edge_order(t: &UndirectedGraph, root: usize) -> Result<TreeEdgeOrder> {
    if !t.is_tree() {
        return Err(Error::NotATree);
    }
    if root >= t.vertex_count() {
        return Err(Error::VertexOutOfRange {
            vertex: root + 1,
            n: t.vertex_count(),
        });
    }
    let mut seen = vec![false; t.vertex_count()];
    seen[root] = true;
    let mut queue = VecDeque::from([root]);
    let mut edges = Vec::with_capacity(t.edge_count());
    while let Some(p) = queue.pop_front() {
        for c in t.neighbors(p) {
            if !seen[c] {
                seen[c] = true;
                edges.push((p, c));
                queue.push_back(c);
            }
        }
    }
    Ok(TreeEdgeOrder { root, edges })
}

/// Scalar tree conditions `σ_j + η_j - M_{p_j p_j} > 0` for `j = 2..k`, with
/// `σ_j` the Schur complement onto `p_j` of the vertices of the earlier edges
/// and `η_j = M_{p_j p_j} - M_{p_j q_j}^2 / M_{q_j q_j}`.
pub fn tree_conditions(m: &SymmetricMatrix, t: &UndirectedGraph, root: usize) -> Result<ConditionReport> {
    let order = tree_edge_order(t, root)?;
    check_pattern(m, t)?;
    const FORM: &str = "sigma+eta-M_pp > 0";
    let pre = order
        .edges
        .iter()
        .map(|&(p, q)| block_check(m, format!("edge ({},{})", p + 1, q + 1), &[p, q]))
        .collect();
    let mut covered = vec![false; m.dim()];
    let mut items = Vec::new();
    for (j, &(p, q)) in order.edges.iter().enumerate() {
        if j > 0 {
            let label = format!("j={} edge ({},{})", j + 1, p + 1, q + 1);
            let a_j: Vec<usize> = (0..m.dim()).filter(|&v| covered[v] && v != p).collect();
            let item = match schur_complement_within(m, &[p], &a_j) {
                Ok(sigma) => {
                    let mpp = m.get(p, p);
                    let eta = mpp - m.get(p, q).powi(2) / m.get(q, q);
                    ConditionItem::new(
                        label,
                        FORM,
                        ConditionValue::Scalar { value: sigma.get(0, 0) + eta - mpp },
                    )
                }
                Err(_) => ConditionItem::new(label, FORM, ConditionValue::Singular),
            };
            items.push(item);
        }
        covered[p] = true;
        covered[q] = true;
    }
    let mut report = ConditionReport::assemble("tree", items, pre);
    report.notes.push(format!("root {}", root + 1));
    Ok(report)
}

fn check_tridiagonal(m: &SymmetricMatrix) -> Result<()> {
    let n = m.dim();
    for i in 0..n {
        for j in i + 2..n {
            if m.get(i, j) != 0.0 {
                return Err(Error::NotAPathPattern { row: i + 1, col: j + 1 });
            }
        }
    }
    Ok(())
}

/// `σ(k)` for `k = 0..n` (0-based); entries below a numerically zero
/// denominator are `None`.
fn sigma_sequence(m: &SymmetricMatrix, zero: f64) -> Vec<Option<f64>> {
    let n = m.dim();
    let mut sigma = vec![None; n];
    sigma[n - 1] = Some(m.get(n - 1, n - 1));
    for k in (0..n - 1).rev() {
        sigma[k] = match sigma[k + 1] {
            Some(next) if next.abs() > zero => Some(m.get(k, k) - m.get(k, k + 1).powi(2) / next),
            _ => None,
        };
    }
    sigma
}

/// Continued fraction `σ(k) = α_k - a_k^2 / σ(k+1)`, `σ(n-1) = α_{n-1}`, for a
/// tridiagonal matrix; `k` is 0-based. `σ(0)` is the Schur complement onto
/// the first vertex.
pub fn path_sigma(m: &SymmetricMatrix, k: usize) -> Result<f64> {
    check_tridiagonal(m)?;
    let n = m.dim();
    if k >= n {
        return Err(Error::VertexOutOfRange { vertex: k + 1, n });
    }
    let seq = sigma_sequence(m, 0.0);
    seq[k].ok_or_else(|| {
        let level = (k + 1..n).rev().find(|&j| seq[j] == Some(0.0)).unwrap_or(k + 1);
        Error::ZeroDenominator { level: level + 1 }
    })
}

/// Continued fraction conditions `σ(k) > 0`, `k = 1..n-2` (1-based), for a
/// tridiagonal matrix in path order, together with the equivalent margins
/// `σ(k+1) - a_k^2 / α_k`.
pub fn path_conditions(m: &SymmetricMatrix) -> Result<ConditionReport> {
    check_tridiagonal(m)?;
    let n = m.dim();
    if let Some(i) = (0..n).find(|&i| m.get(i, i) <= 0.0) {
        return Err(Error::NonpositiveDiagonal(i + 1));
    }
    let sigma = sigma_sequence(m, MARGIN_BAND);
    const FORM: &str = "sigma_n(k) > 0";
    let upto = n.saturating_sub(2);
    let items = (0..upto)
        .map(|k| {
            let value = sigma[k].map_or(ConditionValue::Singular, |value| ConditionValue::Scalar { value });
            ConditionItem::new(format!("k={}", k + 1), FORM, value)
        })
        .collect();
    let pre = (0..n.saturating_sub(1))
        .map(|k| block_check(m, format!("edge ({},{})", k + 1, k + 2), &[k, k + 1]))
        .collect();
    let equivalent = (0..upto)
        .map(|k| sigma[k + 1].map(|s| s - m.get(k, k + 1).powi(2) / m.get(k, k)))
        .collect();
    let mut report = ConditionReport::assemble("path", items, pre);
    report.sigma = Some(sigma);
    report.equivalent_margins = Some(equivalent);
    Ok(report)
}

/// If the off-diagonal pattern of `m` is contained in a path, the vertex
/// order along that path and `m` permuted into it.
pub fn path_relabel(m: &SymmetricMatrix) -> Option<(Vec<usize>, SymmetricMatrix)> {
    if check_tridiagonal(m).is_ok() {
        return Some(((0..m.dim()).collect(), m.clone()));
    }
    let order = crate::threshold::zero_pattern_graph(m, 0.0).path_order()?;
    let p = m.permuted(&order);
    Some((order, p))
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;

    fn star_m(c: f64, d: f64) -> SymmetricMatrix {
        SymmetricMatrix::from_rows(&[[4.0, c, d], [c, 4.0, 0.0], [d, 0.0, 4.0]]).unwrap()
    }

    fn scalar(item: &ConditionItem) -> f64 {
        match item.value {
            ConditionValue::Scalar { value } => value,
            _ => panic!("expected scalar, got {:?}", item.value),
        }
    }

    #[test]
    fn decomposition_examples() {
        let g = UndirectedGraph::star(3);
        let d = Decomposition::new(&g, &[1], &[2], &[0]).unwrap();
        let r = decomposition_condition(&star_m(3.0, -3.0), &d).unwrap();
        assert_relative_eq!(scalar(&r.items[0]), -0.5, epsilon = 1e-14);
        assert_eq!(r.overall, Overall::NotPd);

        let r = decomposition_condition(&star_m(1.0, -1.0), &d).unwrap();
        assert_relative_eq!(scalar(&r.items[0]), 3.5, epsilon = 1e-14);
        assert_eq!(r.overall, Overall::Pd);

        let r = decomposition_condition(&SymmetricMatrix::diagonal(&[1.0, 2.0, 3.0]), &d).unwrap();
        assert_eq!(scalar(&r.items[0]), 1.0);
    }

    #[test]
    fn chordal_examples() {
        let r = chordal_conditions(&star_m(3.0, -3.0), &UndirectedGraph::star(3)).unwrap();
        assert_eq!(r.items.len(), 1);
        assert_relative_eq!(scalar(&r.items[0]), -0.5, epsilon = 1e-14);
        assert_eq!(r.overall, Overall::NotPd);

        let k4 = UndirectedGraph::complete(4);
        let m = SymmetricMatrix::from_upper_fn(4, |i, j| if i == j { 4.0 } else { 1.0 }).unwrap();
        let r = chordal_conditions(&m, &k4).unwrap();
        assert!(r.items.is_empty());
        assert_eq!(r.overall, Overall::Pd);

        assert_eq!(
            chordal_conditions(&SymmetricMatrix::identity(4), &UndirectedGraph::cycle(4).unwrap()),
            Err(Error::NotChordal)
        );
        assert_eq!(
            chordal_conditions(&star_m(3.0, -3.0), &UndirectedGraph::path(3)),
            Err(Error::PatternMismatch { row: 1, col: 3 })
        );
    }

    #[test]
    fn tree_order_examples() {
        let p = UndirectedGraph::path(3);
        assert_eq!(tree_edge_order(&p, 0).unwrap().edges, vec![(0, 1), (1, 2)]);
        let s = UndirectedGraph::star(4);
        assert_eq!(tree_edge_order(&s, 0).unwrap().edges, vec![(0, 1), (0, 2), (0, 3)]);
        let bin = UndirectedGraph::from_edges(7, [(0, 1), (0, 2), (1, 3), (1, 4), (2, 5), (2, 6)]).unwrap();
        let e = tree_edge_order(&bin, 0).unwrap().edges;
        assert_eq!(&e[..2], &[(0, 1), (0, 2)]);
        assert_eq!(tree_edge_order(&UndirectedGraph::cycle(3).unwrap(), 0), Err(Error::NotATree));
    }

    #[test]
    fn tree_examples() {
        let t = UndirectedGraph::star(3);
        let r = tree_conditions(&star_m(3.0, -3.0), &t, 0).unwrap();
        assert_relative_eq!(scalar(&r.items[0]), -0.5, epsilon = 1e-14);
        assert_eq!(r.overall, Overall::NotPd);
        let r = tree_conditions(&star_m(1.0, -1.0), &t, 0).unwrap();
        assert_relative_eq!(scalar(&r.items[0]), 3.5, epsilon = 1e-14);
        assert_eq!(r.overall, Overall::Pd);

        let m = SymmetricMatrix::tridiagonal(&[2.0; 3], &[1.0; 2]).unwrap();
        let r = tree_conditions(&m, &UndirectedGraph::path(3), 0).unwrap();
        assert_relative_eq!(scalar(&r.items[0]), 1.0, epsilon = 1e-14);
        assert_eq!(r.overall, Overall::Pd);
    }

    #[test]
    fn sigma_examples() {
        let m = SymmetricMatrix::tridiagonal(&[2.0; 3], &[1.0; 2]).unwrap();
        assert_eq!(path_sigma(&m, 2).unwrap(), 2.0);
        assert_eq!(path_sigma(&m, 1).unwrap(), 1.5);
        assert_relative_eq!(path_sigma(&m, 0).unwrap(), 4.0 / 3.0, epsilon = 1e-15);

        let m4 = SymmetricMatrix::tridiagonal(&[2.0; 4], &[1.0; 3]).unwrap();
        assert_relative_eq!(path_sigma(&m4, 0).unwrap(), 1.25, epsilon = 1e-15);

        let bad = SymmetricMatrix::tridiagonal(&[1.0; 3], &[0.9; 2]).unwrap();
        assert_relative_eq!(path_sigma(&bad, 1).unwrap(), 0.19, epsilon = 1e-14);
        assert_relative_eq!(path_sigma(&bad, 0).unwrap(), 1.0 - 0.81 / 0.19, epsilon = 1e-12);

        let z = SymmetricMatrix::tridiagonal(&[1.0, 0.0], &[1.0]).unwrap();
        assert_eq!(path_sigma(&z, 0), Err(Error::ZeroDenominator { level: 2 }));
        let (a, _) = crate::counterexamples::a3_example();
        assert_eq!(path_sigma(&a, 0), Err(Error::NotAPathPattern { row: 1, col: 3 }));
    }

    #[test]
    fn path_examples() {
        let m = SymmetricMatrix::tridiagonal(&[2.0; 5], &[1.0; 4]).unwrap();
        let r = path_conditions(&m).unwrap();
        assert_eq!(r.items.len(), 3);
        assert_eq!(r.overall, Overall::Pd);

        let m4 = SymmetricMatrix::tridiagonal(&[2.0; 4], &[1.0; 3]).unwrap();
        let r = path_conditions(&m4).unwrap();
        let sigma: Vec<f64> = r.sigma.unwrap().into_iter().map(Option::unwrap).collect();
        assert_relative_eq!(sigma[1], 4.0 / 3.0, epsilon = 1e-15);
        assert_eq!(&sigma[2..], &[1.5, 2.0]);

        let bad = SymmetricMatrix::tridiagonal(&[1.0; 3], &[0.9; 2]).unwrap();
        assert_eq!(path_conditions(&bad).unwrap().overall, Overall::NotPd);

        let d = path_conditions(&SymmetricMatrix::diagonal(&[1.0, 2.0, 3.0, 4.0])).unwrap();
        assert_eq!(d.items.iter().map(scalar).collect::<Vec<_>>(), vec![1.0, 2.0]);
        assert_eq!(d.overall, Overall::Pd);

        assert_eq!(
            path_conditions(&SymmetricMatrix::diagonal(&[1.0, -2.0, 3.0])),
            Err(Error::NonpositiveDiagonal(2))
        );
    }

    #[test]
    fn relabel_detects_permuted_paths() {
        // Path 2 - 0 - 1.
        let m = SymmetricMatrix::from_rows(&[[2.0, 1.0, 1.0], [1.0, 2.0, 0.0], [1.0, 0.0, 2.0]]).unwrap();
        let (order, p) = path_relabel(&m).unwrap();
        assert_eq!(order, vec![1, 0, 2]);
        assert!(check_tridiagonal(&p).is_ok());
        assert!(path_relabel(&crate::counterexamples::a3_example().0).is_none());
    }
}
