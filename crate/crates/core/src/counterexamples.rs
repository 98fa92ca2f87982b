//! Deterministic constructions of positive definite matrices that lose
//! positive definiteness under thresholding, and of non-diagonally-dominant
//! matrices that keep it.

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::matrix::dense::{Dense, Lu};
use crate::matrix::{
    is_positive_definite, is_strictly_diagonally_dominant, min_eigenvalue, SymmetricMatrix,
    DEFAULT_PD_TOL,
};
use crate::threshold::threshold_by_graph;

/// Parameters of the bordered cycle matrix: a tridiagonal `(2; 1)` path block
/// with corner diagonals `alpha`, `beta`, closed into a cycle by `a` at
/// `(1, n)` and `b` at `(n-1, n)`.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct CycleParams {
    pub n: usize,
    pub alpha: f64,
    pub beta: f64,
    pub a: f64,
    pub b: f64,
    /// Slack in `b^2 = 2n/(n-1) + epsilon`, when built by [`CycleParams::recipe`].
    pub epsilon: Option<f64>,
}

impl CycleParams {
    pub fn new(n: usize, alpha: f64, beta: f64, a: f64, b: f64) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall { required: 3, found: n });
        }
        Ok(Self { n, alpha, beta, a, b, epsilon: None })
    }

    /// `alpha = beta = 2`, `epsilon = n / ((n-1)((n-1)^2 - 1))` (midpoint of
    /// the interval keeping the discriminant positive), `b` the positive root
    /// of `b^2 = 2n/(n-1) + epsilon`, and `a` the maximizer
    /// `(-1)^(n+1) b / (n-1)` of the determinant.
    pub fn recipe(n: usize) -> Result<Self> {
        if n < 3 {
            return Err(Error::TooSmall { required: 3, found: n });
        }
        let nf = n as f64;
        let m1 = nf - 1.0;
        let epsilon = nf / (m1 * (m1 * m1 - 1.0));
        let b = (2.0 * nf / m1 + epsilon).sqrt();
        let mut p = Self::new(n, 2.0, 2.0, 0.0, b)?;
        p.a = p.optimal_a();
        p.epsilon = Some(epsilon);
        Ok(p)
    }

    /// `(-1)^(n+1)`.
    pub fn sign(&self) -> f64 {
        if self.n % 2 == 1 {
            1.0
        } else {
            -1.0
        }
    }

    /// Vertex of the concave quadratic `a -> p(a, b)`.
    pub fn optimal_a(&self) -> f64 {
        self.sign() * self.b / (self.n as f64 - 1.0)
    }

    /// `p(a, b) = 2n - (n-1)a^2 - (n-1)b^2 + (-1)^(n+1) 2ab`, the determinant
    /// when `alpha = beta = 2`.
    pub fn p_value(&self) -> f64 {
        let (nf, m1) = (self.n as f64, self.n as f64 - 1.0);
        2.0 * nf - m1 * self.a * self.a - m1 * self.b * self.b + self.sign() * 2.0 * self.a * self.b
    }

    /// `q(b) = p(0, b) = 2n - (n-1) b^2`, the determinant once `a` is zeroed.
    pub fn q_value(&self) -> f64 {
        2.0 * self.n as f64 - (self.n as f64 - 1.0) * self.b * self.b
    }

    /// Discriminant of `a -> p(a, b)`.
    pub fn discriminant(&self) -> f64 {
        let m1 = self.n as f64 - 1.0;
        4.0 * self.b * self.b + 4.0 * m1 * self.q_value()
    }

    /// Header lines recorded in witness files.
    pub fn comments(&self) -> Vec<String> {
        let mut c = vec![
            format!("cycle n = {}", self.n),
            format!("alpha = {}", crate::io::format_value(self.alpha)),
            format!("beta = {}", crate::io::format_value(self.beta)),
            format!("a = {}", crate::io::format_value(self.a)),
            format!("b = {}", crate::io::format_value(self.b)),
        ];
        if let Some(e) = self.epsilon {
            c.push(format!("epsilon = {}", crate::io::format_value(e)));
        }
        c
    }
}

/// The bordered cycle matrix for `p`; its zero pattern is the cycle
/// `1 - 2 - ... - n - 1` whenever `a` and `b` are nonzero.
pub fn cycle_matrix(p: &CycleParams) -> Result<SymmetricMatrix> {
    let n = p.n;
    if n < 3 {
        return Err(Error::TooSmall { required: 3, found: n });
    }
    SymmetricMatrix::from_upper_fn(n, |i, j| match (i, j) {
        (0, 0) => p.alpha,
        _ if i == j && i == n - 1 => p.beta,
        _ if i == j => 2.0,
        _ if i == n - 2 && j == n - 1 => p.b,
        (0, _) if j == n - 1 => p.a,
        _ if j == i + 1 => 1.0,
        _ => 0.0,
    })
}

/// Closed-form determinant of [`cycle_matrix`]:
/// `-(n-2)β + (n-1)αβ + (-1)^(n+1) 2ab - (n-1)a² + (n-3)b² - (n-2)αb²`.
pub fn cycle_determinant(p: &CycleParams) -> f64 {
    let nf = p.n as f64;
    let CycleParams { alpha, beta, a, b, .. } = *p;
    -(nf - 2.0) * beta + (nf - 1.0) * alpha * beta + p.sign() * 2.0 * a * b
        - (nf - 1.0) * a * a
        + (nf - 3.0) * b * b
        - (nf - 2.0) * alpha * b * b
}

/// `M_n` built from [`CycleParams::recipe`]: positive definite, but not once
/// the `a` corner is zeroed.
pub fn construct_cycle_counterexample(n: usize) -> Result<(SymmetricMatrix, CycleParams)> {
    let p = CycleParams::recipe(n)?;
    Ok((cycle_matrix(&p)?, p))
}

/// `(eta / |a|) M_n`. The scaled corner is set to exactly `±eta`, so level
/// thresholding at `eta` removes it (boundary entries are zeroed) while every
/// other off-diagonal entry stays strictly above `eta`.
pub fn construct_level_counterexample(n: usize, eta: f64) -> Result<SymmetricMatrix> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidLevel(eta));
    }
    let (m, p) = construct_cycle_counterexample(n)?;
    let mut scaled = m.scaled(eta / p.a.abs());
    scaled.set(0, n - 1, eta.copysign(p.a));
    Ok(scaled)
}

/// The 3×3 example `A` together with the star pattern on vertex 1 that
/// destroys its positive definiteness.
pub fn a3_example() -> (SymmetricMatrix, UndirectedGraph) {
    let a = SymmetricMatrix::from_rows(&[[4.0, 3.0, -3.0], [3.0, 4.0, -1.0], [-3.0, -1.0, 4.0]])
        .expect("constant matrix is valid");
    (a, UndirectedGraph::star(3))
}

/// Places `block` on `vertices` (block index `i` on vertex `vertices[i]`) of
/// an `n × n` identity.
pub fn place_block(n: usize, vertices: &[usize], block: &SymmetricMatrix) -> SymmetricMatrix {
    let mut m = SymmetricMatrix::identity(n);
    for (i, &u) in vertices.iter().enumerate() {
        for (j, &v) in vertices.iter().enumerate().skip(i) {
            m.set(u, v, block.get(i, j));
        }
    }
    m
}

/// Witness produced by [`embed_counterexample`].
#[derive(Debug, Clone, PartialEq)]
pub struct Embedding {
    pub matrix: SymmetricMatrix,
    /// Broken cycle `v_1..v_m`: consecutive vertices are joined in `h`, and
    /// `{v_1, v_m}` is an edge of `g` missing from `h`.
    pub cycle: Vec<usize>,
    /// The 3×3 example was used instead of `M_3`.
    pub uses_a3_example: bool,
}

/// A matrix in `P_G` that loses positive definiteness when thresholded by
/// `h`. The cycle construction sits on a broken cycle, identity elsewhere;
/// when `g` is complete and the cycle is a triangle the 3×3 example is used.
pub fn embed_counterexample(g: &UndirectedGraph, h: &UndirectedGraph) -> Result<Embedding> {
    let cycle = g.broken_cycle_witness(h)?.ok_or(Error::NoBrokenCycle)?;
    let n = g.vertex_count();
    let all: Vec<usize> = (0..n).collect();
    if cycle.len() == 3 && g.is_complete(&all)? {
        let (a, _) = a3_example();
        // Row 1 of the example is the vertex joined to both others.
        let order = [cycle[1], cycle[0], cycle[2]];
        return Ok(Embedding {
            matrix: place_block(n, &order, &a),
            cycle,
            uses_a3_example: true,
        });
    }
    let (m, _) = construct_cycle_counterexample(cycle.len())?;
    Ok(Embedding {
        matrix: place_block(n, &cycle, &m),
        cycle,
        uses_a3_example: false,
    })
}

/// `B = m - λ_min(m) I`: positive semidefinite and singular.
pub fn singular_shift(m: &SymmetricMatrix) -> Result<SymmetricMatrix> {
    let lambda = min_eigenvalue(m);
    if lambda <= 0.0 {
        return Err(Error::NotPd);
    }
    Ok(m.shifted(-lambda))
}

fn base_non_dd() -> SymmetricMatrix {
    SymmetricMatrix::from_rows(&[[3.0, -2.0, -2.0], [-2.0, 3.0, 2.0], [-2.0, 2.0, 3.0]])
        .expect("constant matrix is valid")
}

/// `x^T A^{-1} x` for positive definite `a`.
fn inverse_quadratic_form(a: &SymmetricMatrix, x: &[f64]) -> Result<f64> {
    let idx: Vec<usize> = (0..a.dim()).collect();
    let lu = Lu::factor(&a.block(&idx, &idx))?;
    let rhs = Dense { rows: x.len(), cols: 1, data: x.to_vec() };
    let sol = lu.solve(&rhs);
    Ok(x.iter().zip(&sol.data).map(|(p, q)| p * q).sum())
}

/// A positive definite matrix with no zero entries and no diagonally dominant
/// row whose `g`-thresholded version is positive definite but not diagonally
/// dominant.
///
/// Built by peeling off a removable vertex, recursing, and bordering the
/// result with `t (1, ..., 1)` and corner `(n-1) t / 2`. The border weight `t`
/// is small enough that the bordered matrix and its thresholded version stay
/// positive definite; the inner block is never rescaled, which keeps the
/// conditioning flat as `n` grows.
pub fn non_dd_witness(g: &UndirectedGraph) -> Result<SymmetricMatrix> {
    let n = g.vertex_count();
    if n < 3 {
        return Err(Error::TooSmall { required: 3, found: n });
    }
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    if n == 3 {
        return Ok(base_non_dd());
    }
    let v = g.removable_vertex()?;
    let rest: Vec<usize> = (0..n).filter(|&u| u != v).collect();
    let sub = g.induced_subgraph(&rest)?;
    let inner = non_dd_witness(&sub.graph)?;
    let inner_g = threshold_by_graph(&inner, &sub.graph)?;

    // Border t*1 with corner c = (n-1)t/2: row v violates dominance, and the
    // Schur complements c - t^2 q stay at least c/2 for both A and A_G.
    let ones = vec![1.0; n - 1];
    let x_h: Vec<f64> = rest.iter().map(|&u| if g.has_edge(u, v) { 1.0 } else { 0.0 }).collect();
    let q = inverse_quadratic_form(&inner, &ones)?
        .max(inverse_quadratic_form(&inner_g, &x_h)?)
        .max(f64::MIN_POSITIVE);
    let half = (n - 1) as f64 / 2.0;
    let t = (half / (2.0 * q)).min(1.0);
    let corner = half * t;

    let mut b = SymmetricMatrix::zeros(n);
    for (i, &u) in rest.iter().enumerate() {
        for (j, &w) in rest.iter().enumerate().skip(i) {
            b.set(u, w, inner.get(i, j));
        }
        b.set(u, v, t);
    }
    b.set(v, v, corner);
    Ok(b)
}

/// The five properties a non-diagonally-dominant witness must satisfy.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NonDdProperties {
    pub positive_definite: bool,
    pub no_zero_entries: bool,
    pub every_row_violates_dominance: bool,
    pub thresholded_positive_definite: bool,
    pub thresholded_not_dominant: bool,
}

impl NonDdProperties {
    pub fn check(a: &SymmetricMatrix, g: &UndirectedGraph) -> Result<Self> {
        let ag = threshold_by_graph(a, g)?;
        let n = a.dim();
        let dd = is_strictly_diagonally_dominant(a);
        Ok(Self {
            positive_definite: is_positive_definite(a, DEFAULT_PD_TOL).is_pd,
            no_zero_entries: (0..n).all(|i| (0..n).all(|j| a.get(i, j) != 0.0)),
            every_row_violates_dominance: dd.violating_rows() == n,
            thresholded_positive_definite: is_positive_definite(&ag, DEFAULT_PD_TOL).is_pd,
            thresholded_not_dominant: !is_strictly_diagonally_dominant(&ag).strictly_dominant,
        })
    }

    pub fn all(&self) -> bool {
        self.positive_definite
            && self.no_zero_entries
            && self.every_row_violates_dominance
            && self.thresholded_positive_definite
            && self.thresholded_not_dominant
    }
}
