use serde::{Deserialize, Serialize};

use super::UndirectedGraph;
use crate::error::{Error, Result};

/// Vertex elimination order in which every vertex's later neighbors form a
/// clique.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerfectEliminationOrder(pub Vec<usize>);

/// A perfect ordering `C_1..C_k` of the maximal cliques of a connected chordal
/// graph, together with the derived histories, separators and residuals.
///
/// Index `q` is 0-based: `separators[0]`, `residual_a[0]` and `residual_b[0]`
/// are empty and carry no meaning.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CliqueOrdering {
    pub cliques: Vec<Vec<usize>>,
    /// `H_q = C_1 ∪ ... ∪ C_q`.
    pub histories: Vec<Vec<usize>>,
    /// `S_q = C_q ∩ H_{q-1}`.
    pub separators: Vec<Vec<usize>>,
    /// `A_q = H_{q-1} \ S_q`.
    pub residual_a: Vec<Vec<usize>>,
    /// `B_q = C_q \ S_q`.
    pub residual_b: Vec<Vec<usize>>,
}

impl CliqueOrdering {
    fn from_cliques(cliques: Vec<Vec<usize>>, n: usize) -> Self {
        let k = cliques.len();
        let mut histories = Vec::with_capacity(k);
        let mut separators = Vec::with_capacity(k);
        let mut residual_a = Vec::with_capacity(k);
        let mut residual_b = Vec::with_capacity(k);
        let mut in_hist = vec![false; n];
        for (q, c) in cliques.iter().enumerate() {
            if q == 0 {
                separators.push(Vec::new());
                residual_a.push(Vec::new());
                residual_b.push(Vec::new());
            } else {
                let sep: Vec<usize> = c.iter().copied().filter(|&v| in_hist[v]).collect();
                let a: Vec<usize> = (0..n).filter(|&v| in_hist[v] && !sep.contains(&v)).collect();
                let b: Vec<usize> = c.iter().copied().filter(|&v| !in_hist[v]).collect();
                separators.push(sep);
                residual_a.push(a);
                residual_b.push(b);
            }
            for &v in c {
                in_hist[v] = true;
            }
            histories.push((0..n).filter(|&v| in_hist[v]).collect());
        }
        Self {
            cliques,
            histories,
            separators,
            residual_a,
            residual_b,
        }
    }

    pub fn len(&self) -> usize {
        self.cliques.len()
    }

    pub fn is_empty(&self) -> bool {
        self.cliques.is_empty()
    }

    /// For every `q >= 2` some earlier clique contains `S_q`.
    pub fn has_running_intersection(&self) -> bool {
        (1..self.cliques.len()).all(|q| {
            self.cliques[..q]
                .iter()
                .any(|c| self.separators[q].iter().all(|v| c.contains(v)))
        })
    }
}

/// Maximum cardinality search, ties broken by lowest index. Returns the visit
/// order and the weight of each vertex at the time it was visited.
fn maximum_cardinality_search(g: &UndirectedGraph) -> (Vec<usize>, Vec<usize>) {
    let n = g.vertex_count();
    let mut weight = vec![0usize; n];
    let mut visited = vec![false; n];
    let mut order = Vec::with_capacity(n);
    let mut weight_at_visit = Vec::with_capacity(n);
    for _ in 0..n {
        let mut pick = usize::MAX;
        for v in 0..n {
            if !visited[v] && (pick == usize::MAX || weight[v] > weight[pick]) {
                pick = v;
            }
        }
        visited[pick] = true;
        order.push(pick);
        weight_at_visit.push(weight[pick]);
        for w in g.neighbors(pick) {
            if !visited[w] {
                weight[w] += 1;
            }
        }
    }
    (order, weight_at_visit)
}

fn is_perfect_elimination_order(g: &UndirectedGraph, order: &[usize]) -> bool {
    let n = g.vertex_count();
    let mut pos = vec![0; n];
    for (i, &v) in order.iter().enumerate() {
        pos[v] = i;
    }
    order.iter().all(|&v| {
        let later: Vec<usize> = g.neighbors(v).filter(|&u| pos[u] > pos[v]).collect();
        match later.iter().copied().min_by_key(|&u| pos[u]) {
            None => true,
            Some(p) => later.iter().all(|&u| u == p || g.has_edge(p, u)),
        }
    })
}

/// Chordality test: maximum cardinality search followed by verification of
/// the reversed visit order as a perfect elimination order.
pub fn chordality(g: &UndirectedGraph) -> Option<PerfectEliminationOrder> {
    let (mut order, _) = maximum_cardinality_search(g);
    order.reverse();
    is_perfect_elimination_order(g, &order).then_some(PerfectEliminationOrder(order))
}

/// Perfect ordering of the maximal cliques of a connected chordal graph.
///
/// Each visited vertex `v_i` yields the candidate clique `{v_i}` plus its
/// previously visited neighbors; a candidate is maximal exactly when the next
/// visit weight does not grow. Cliques are listed in visit order.
pub fn perfect_clique_ordering(g: &UndirectedGraph) -> Result<CliqueOrdering> {
    let n = g.vertex_count();
    if !g.is_connected() {
        return Err(Error::NotConnected);
    }
    let (order, weight) = maximum_cardinality_search(g);
    let mut elim = order.clone();
    elim.reverse();
    if !is_perfect_elimination_order(g, &elim) {
        return Err(Error::NotChordal);
    }
    let mut visited = vec![false; n];
    let mut cliques = Vec::new();
    for (i, &v) in order.iter().enumerate() {
        let mut clique: Vec<usize> = g.neighbors(v).filter(|&u| visited[u]).collect();
        clique.push(v);
        clique.sort_unstable();
        visited[v] = true;
        if i + 1 == n || weight[i + 1] <= weight[i] {
            cliques.push(clique);
        }
    }
    Ok(CliqueOrdering::from_cliques(cliques, n))
}
