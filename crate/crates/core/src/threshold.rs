//! Hard-thresholding by a pattern graph and by a magnitude level.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::matrix::{is_positive_definite, SymmetricMatrix};

/// Magnitude cutoff for level thresholding. Entries with `|a_ij| <= eta` are
/// zeroed: only strictly larger entries survive.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize, Deserialize)]
pub struct LevelThreshold(f64);

impl LevelThreshold {
    pub fn new(eta: f64) -> Result<Self> {
        if eta.is_finite() && eta >= 0.0 {
            Ok(Self(eta))
        } else {
            Err(Error::InvalidLevel(eta))
        }
    }

    pub fn eta(self) -> f64 {
        self.0
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

/// `A_G`: keeps the diagonal and the entries on edges of `g`, zeroes the rest.
pub fn threshold_by_graph(m: &SymmetricMatrix, g: &UndirectedGraph) -> Result<SymmetricMatrix> {
    check_dims(m, g)?;
    let mut out = SymmetricMatrix::diagonal(&m.diag());
    for (u, v) in g.edges() {
        out.set(u, v, m.get(u, v));
    }
    Ok(out)
}

/// Keeps the diagonal and off-diagonal entries with `|a_ij| > eta`.
pub fn threshold_at_level(m: &SymmetricMatrix, t: LevelThreshold) -> SymmetricMatrix {
    let eta = t.eta();
    let mut out = m.clone();
    for i in 0..m.dim() {
        for j in i + 1..m.dim() {
            if m.get(i, j).abs() <= eta {
                out.set(i, j, 0.0);
            }
        }
    }
    out
}

/// Membership in `P_G`: positive definite with `|a_ij| <= tol` off the edges of `g`.
pub fn is_in_pattern_cone(m: &SymmetricMatrix, g: &UndirectedGraph, tol: f64) -> Result<bool> {
    check_dims(m, g)?;
    let n = m.dim();
    let pattern_ok = (0..n).all(|i| {
        (i + 1..n).all(|j| g.has_edge(i, j) || m.get(i, j).abs() <= tol)
    });
    Ok(pattern_ok && is_positive_definite(m, crate::matrix::DEFAULT_PD_TOL).is_pd)
}

/// Graph of the off-diagonal entries with `|a_ij| > tol`.
pub fn zero_pattern_graph(m: &SymmetricMatrix, tol: f64) -> UndirectedGraph {
    let n = m.dim();
    let mut g = UndirectedGraph::new(n);
    for i in 0..n {
        for j in i + 1..n {
            if m.get(i, j).abs() > tol {
                let _ = g.add_edge(i, j);
            }
        }
    }
    g
}

#[cfg(test)]
mod tests {
    use super::*;

    fn paper_a() -> SymmetricMatrix {
        SymmetricMatrix::from_rows(&[[4.0, 3.0, -3.0], [3.0, 4.0, -1.0], [-3.0, -1.0, 4.0]]).unwrap()
    }

    fn a3() -> UndirectedGraph {
        UndirectedGraph::star(3)
    }

    #[test]
    fn graph_thresholding_examples() {
        let ag = threshold_by_graph(&paper_a(), &a3()).unwrap();
        assert_eq!(
            ag.rows(),
            vec![vec![4.0, 3.0, -3.0], vec![3.0, 4.0, 0.0], vec![-3.0, 0.0, 4.0]]
        );
        assert_eq!(threshold_by_graph(&paper_a(), &UndirectedGraph::complete(3)).unwrap(), paper_a());
        assert_eq!(
            threshold_by_graph(&paper_a(), &UndirectedGraph::new(3)).unwrap(),
            SymmetricMatrix::diagonal(&[4.0, 4.0, 4.0])
        );
        assert!(matches!(
            threshold_by_graph(&paper_a(), &UndirectedGraph::new(2)),
            Err(Error::DimensionMismatch { .. })
        ));
    }

    #[test]
    fn level_boundary_is_zeroed() {
        let m = SymmetricMatrix::from_rows(&[[2.0, 0.5], [0.5, 2.0]]).unwrap();
        let t = threshold_at_level(&m, LevelThreshold::new(0.5).unwrap());
        assert_eq!(t, SymmetricMatrix::diagonal(&[2.0, 2.0]));
        assert_eq!(threshold_at_level(&paper_a(), LevelThreshold::new(0.0).unwrap()), paper_a());
        assert_eq!(
            threshold_at_level(&paper_a(), LevelThreshold::new(3.0).unwrap()),
            SymmetricMatrix::diagonal(&[4.0, 4.0, 4.0])
        );
        assert!(LevelThreshold::new(-1.0).is_err());
        assert!(LevelThreshold::new(f64::NAN).is_err());
    }

    #[test]
    fn pattern_cone_examples() {
        let t = SymmetricMatrix::tridiagonal(&[2.0; 3], &[1.0; 2]).unwrap();
        assert!(is_in_pattern_cone(&t, &UndirectedGraph::path(3), 0.0).unwrap());
        assert!(!is_in_pattern_cone(&t, &UndirectedGraph::new(3), 0.0).unwrap());
        let ag = threshold_by_graph(&paper_a(), &a3()).unwrap();
        assert!(!is_in_pattern_cone(&ag, &a3(), 0.0).unwrap());
    }

    #[test]
    fn zero_pattern_examples() {
        assert_eq!(zero_pattern_graph(&SymmetricMatrix::diagonal(&[1.0, 2.0, 3.0]), 0.0).edge_count(), 0);
        let t = SymmetricMatrix::tridiagonal(&[2.0; 4], &[1.0; 3]).unwrap();
        assert_eq!(zero_pattern_graph(&t, 0.0), UndirectedGraph::path(4));
        assert_eq!(zero_pattern_graph(&paper_a(), 0.0), UndirectedGraph::complete(3));
    }
}
