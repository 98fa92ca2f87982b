//! Independent reference implementations used as test oracles.
#![allow(dead_code)]

use pdthresh::matrix::eigenvalues;
use pdthresh::{SymmetricMatrix, UndirectedGraph};

/// Laplace expansion along the first row.
pub fn cofactor_det(rows: &[Vec<f64>]) -> f64 {
    let n = rows.len();
    match n {
        0 => 1.0,
        1 => rows[0][0],
        _ => (0..n)
            .map(|j| {
                let minor: Vec<Vec<f64>> = rows[1..]
                    .iter()
                    .map(|r| r.iter().enumerate().filter(|&(c, _)| c != j).map(|(_, &x)| x).collect())
                    .collect();
                let sign = if j % 2 == 0 { 1.0 } else { -1.0 };
                sign * rows[0][j] * cofactor_det(&minor)
            })
            .sum(),
    }
}

/// Union-find component count.
pub fn component_count(g: &UndirectedGraph) -> usize {
    let n = g.vertex_count();
    let mut parent: Vec<usize> = (0..n).collect();
    fn find(p: &mut [usize], x: usize) -> usize {
        let mut r = x;
        while p[r] != r {
            r = p[r];
        }
        p[x] = r;
        r
    }
    for (u, v) in g.edges() {
        let (a, b) = (find(&mut parent, u), find(&mut parent, v));
        parent[a] = b;
    }
    (0..n).filter(|&v| find(&mut parent, v) == v).count()
}

fn subsets(n: usize) -> impl Iterator<Item = Vec<usize>> {
    (1u32..1 << n).map(move |mask| (0..n).filter(|v| mask >> v & 1 == 1).collect())
}

fn complete_on(g: &UndirectedGraph, s: &[usize]) -> bool {
    s.iter().enumerate().all(|(i, &u)| s[i + 1..].iter().all(|&v| g.has_edge(u, v)))
}

/// Some vertex subset of size at least 4 induces a cycle.
pub fn has_long_induced_cycle(g: &UndirectedGraph) -> bool {
    subsets(g.vertex_count()).filter(|s| s.len() >= 4).any(|s| {
        let degrees_ok = s
            .iter()
            .all(|&u| s.iter().filter(|&&v| g.has_edge(u, v)).count() == 2);
        degrees_ok && component_count(&g.induced_subgraph(&s).unwrap().graph) == 1
    })
}

/// Maximal cliques by exhaustive subset enumeration, each sorted, in sorted
/// order.
pub fn maximal_cliques(g: &UndirectedGraph) -> Vec<Vec<usize>> {
    let n = g.vertex_count();
    let mut out: Vec<Vec<usize>> = subsets(n)
        .filter(|s| complete_on(g, s))
        .filter(|s| (0..n).all(|w| s.contains(&w) || !s.iter().all(|&u| g.has_edge(u, w))))
        .collect();
    out.sort();
    out
}

/// Every component of `h` equals the subgraph of `g` it induces.
pub fn components_induced(g: &UndirectedGraph, h: &UndirectedGraph) -> bool {
    let n = g.vertex_count();
    // Same component in h and adjacent in g must imply adjacent in h.
    let mut comp = vec![usize::MAX; n];
    for (i, c) in h.connected_components().iter().enumerate() {
        for &v in c {
            comp[v] = i;
        }
    }
    g.edges().all(|(u, v)| comp[u] != comp[v] || h.has_edge(u, v))
}

/// Positive definite by the eigen-solver, or `None` when the smallest
/// eigenvalue lies within `band` of zero.
pub fn eigen_pd(m: &SymmetricMatrix, band: f64) -> Option<bool> {
    let lo = eigenvalues(m)[0];
    if lo.abs() <= band {
        None
    } else {
        Some(lo > 0.0)
    }
}
