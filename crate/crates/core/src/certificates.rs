//! Decision procedures for whether a thresholding pattern preserves positive
//! definiteness for a whole class of matrices. Every verdict carries
//! evidence: a component structure when preservation is guaranteed, a
//! witness matrix when it is not.

use serde::{Deserialize, Serialize};

use crate::counterexamples::{construct_level_counterexample, embed_counterexample, place_block};
use crate::error::{Error, Result};
use crate::graph::UndirectedGraph;
use crate::matrix::{is_positive_definite_with, is_strictly_diagonally_dominant, PdMethod, PdReport, SymmetricMatrix, DEFAULT_PD_TOL};
use crate::threshold::{threshold_at_level, threshold_by_graph, LevelThreshold};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Verdict {
    GuaranteedForAll,
    NotGuaranteed,
}

/// The characterization a certificate relies on.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Theorem {
    /// Every PD matrix stays PD iff the pattern is a disjoint union of
    /// complete graphs.
    CompleteComponents,
    /// Every matrix in `P_G` stays PD under `h` iff each component of `h` is
    /// an induced subgraph of `g`.
    InducedComponents,
    /// Every subgraph of `g` preserves `P_G` iff `g` is a forest.
    UnionOfTrees,
    /// Level thresholding preserves `P_G` for every level iff `g` is a tree.
    LevelTree,
}

impl Theorem {
    pub fn tag(self) -> &'static str {
        match self {
            Theorem::CompleteComponents => "complete-components",
            Theorem::InducedComponents => "induced-components",
            Theorem::UnionOfTrees => "union-of-trees",
            Theorem::LevelTree => "level-tree",
        }
    }
}

/// How a witness is thresholded.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Thresholding {
    Graph(UndirectedGraph),
    Level(f64),
}

impl Thresholding {
    pub fn apply(&self, m: &SymmetricMatrix) -> Result<SymmetricMatrix> {
        match self {
            Thresholding::Graph(h) => threshold_by_graph(m, h),
            Thresholding::Level(eta) => Ok(threshold_at_level(m, LevelThreshold::new(*eta)?)),
        }
    }
}

/// A PD matrix whose thresholded version is not PD, with exact-arithmetic
/// reports for both.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub matrix: SymmetricMatrix,
    pub thresholded: SymmetricMatrix,
    pub thresholding: Thresholding,
    /// Cycle of the pattern carrying the construction.
    pub cycle: Option<Vec<usize>>,
    pub before: PdReport,
    pub after: PdReport,
}

fn exact_pd(m: &SymmetricMatrix) -> PdReport {
    is_positive_definite_with(m, DEFAULT_PD_TOL, PdMethod::Exact)
}

impl Witness {
    pub fn new(matrix: SymmetricMatrix, thresholding: Thresholding, cycle: Option<Vec<usize>>) -> Result<Self> {
        let thresholded = thresholding.apply(&matrix)?;
        Ok(Self {
            before: exact_pd(&matrix),
            after: exact_pd(&thresholded),
            matrix,
            thresholded,
            thresholding,
            cycle,
        })
    }

    /// Recomputes the thresholded matrix and both verdicts.
    pub fn verify(&self) -> bool {
        match self.thresholding.apply(&self.matrix) {
            Ok(t) => t == self.thresholded && exact_pd(&self.matrix).is_pd && !exact_pd(&t).is_pd,
            Err(_) => false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub verdict: Verdict,
    pub theorem: Theorem,
    /// Vertex sets of the components whose shape grants the guarantee.
    pub structure: Option<Vec<Vec<usize>>>,
    pub witness: Option<Witness>,
    pub notes: Vec<String>,
}

impl Certificate {
    fn guaranteed(theorem: Theorem, structure: Vec<Vec<usize>>) -> Self {
        Self {
            verdict: Verdict::GuaranteedForAll,
            theorem,
            structure: Some(structure),
            witness: None,
            notes: Vec::new(),
        }
    }

    fn refuted(theorem: Theorem, witness: Witness) -> Self {
        Self {
            verdict: Verdict::NotGuaranteed,
            theorem,
            structure: None,
            witness: Some(witness),
            notes: Vec::new(),
        }
    }

    pub fn is_guaranteed(&self) -> bool {
        self.verdict == Verdict::GuaranteedForAll
    }

    /// Checks the evidence against the pattern `g` (and `h` for the subgraph
    /// theorem): the structure must be the component partition with the
    /// required shape, or the witness must lie in the right class and flip.
    pub fn verify(&self, g: &UndirectedGraph, h: Option<&UndirectedGraph>) -> bool {
        match self.verdict {
            Verdict::GuaranteedForAll => {
                let Some(structure) = &self.structure else {
                    return false;
                };
                let parts_of = if self.theorem == Theorem::InducedComponents {
                    match h {
                        Some(h) => h,
                        None => return false,
                    }
                } else {
                    g
                };
                if *structure != parts_of.connected_components() {
                    return false;
                }
                structure.iter().all(|c| match self.theorem {
                    Theorem::CompleteComponents => g.is_complete(c).unwrap_or(false),
                    Theorem::InducedComponents => match (g.induced_subgraph(c), parts_of.induced_subgraph(c)) {
                        (Ok(a), Ok(b)) => a.graph == b.graph,
                        _ => false,
                    },
                    Theorem::UnionOfTrees | Theorem::LevelTree => {
                        g.induced_subgraph(c).is_ok_and(|s| s.graph.is_tree())
                    }
                })
            }
            Verdict::NotGuaranteed => {
                let Some(w) = &self.witness else {
                    return false;
                };
                let base_ok = match self.theorem {
                    Theorem::CompleteComponents => true,
                    _ => crate::threshold::is_in_pattern_cone(&w.matrix, g, 0.0).unwrap_or(false),
                };
                let pattern_ok = match (&w.thresholding, self.theorem) {
                    (Thresholding::Graph(t), Theorem::CompleteComponents) => t == g,
                    (Thresholding::Graph(t), Theorem::InducedComponents) => Some(t) == h,
                    (Thresholding::Graph(t), Theorem::UnionOfTrees) => t.is_subgraph_of(g),
                    (Thresholding::Level(_), Theorem::LevelTree) => true,
                    _ => false,
                };
                base_ok && pattern_ok && w.verify()
            }
        }
    }
}

/// Does thresholding by `g` keep every positive definite matrix positive
/// definite?
pub fn certify_universal_preservation(g: &UndirectedGraph) -> Certificate {
    if g.is_union_of_complete_components() {
        return Certificate::guaranteed(Theorem::CompleteComponents, g.connected_components());
    }
    let base = UndirectedGraph::complete(g.vertex_count());
    let e = embed_counterexample(&base, g).expect("a non-complete component breaks a triangle");
    let w = Witness::new(e.matrix, Thresholding::Graph(g.clone()), Some(e.cycle))
        .expect("dimensions agree");
    Certificate::refuted(Theorem::CompleteComponents, w)
}

/// Does thresholding by the subgraph `h` keep every matrix of `P_G` positive
/// definite?
pub fn certify_subgraph_preservation(g: &UndirectedGraph, h: &UndirectedGraph) -> Result<Certificate> {
    if g.vertex_count() != h.vertex_count() || !h.is_subgraph_of(g) {
        return Err(Error::NotASubgraph);
    }
    match embed_counterexample(g, h) {
        Ok(e) => {
            let w = Witness::new(e.matrix, Thresholding::Graph(h.clone()), Some(e.cycle))?;
            Ok(Certificate::refuted(Theorem::InducedComponents, w))
        }
        Err(Error::NoBrokenCycle) => Ok(Certificate::guaranteed(
            Theorem::InducedComponents,
            h.connected_components(),
        )),
        Err(e) => Err(e),
    }
}

/// Does every subgraph of `g` keep every matrix of `P_G` positive definite?
pub fn certify_all_subgraph_preservation(g: &UndirectedGraph) -> Certificate {
    let Some(cycle) = g.shortest_cycle() else {
        return Certificate::guaranteed(Theorem::UnionOfTrees, g.connected_components());
    };
    let mut h = g.clone();
    h.remove_edge(cycle[0], cycle[cycle.len() - 1]);
    let e = embed_counterexample(g, &h).expect("removing a cycle edge breaks that cycle");
    let w = Witness::new(e.matrix, Thresholding::Graph(h), Some(e.cycle)).expect("dimensions agree");
    let mut c = Certificate::refuted(Theorem::UnionOfTrees, w);
    c.notes.push("subgraph: the pattern with one edge of a shortest cycle removed".into());
    c
}

/// Does level thresholding keep every matrix of `P_G` positive definite, for
/// every level? `eta` only scales the witness. Graphs that are disconnected
/// or have fewer than three vertices are decided per component.
pub fn certify_level_preservation(g: &UndirectedGraph, eta: f64) -> Result<Certificate> {
    if !(eta.is_finite() && eta > 0.0) {
        return Err(Error::InvalidLevel(eta));
    }
    let components = g.connected_components();
    let extension = components.len() > 1 || g.vertex_count() < 3;
    let mut c = match g.shortest_cycle() {
        None => Certificate::guaranteed(Theorem::LevelTree, components),
        Some(cycle) => {
            let block = construct_level_counterexample(cycle.len(), eta)?;
            let m = place_block(g.vertex_count(), &cycle, &block);
            let w = Witness::new(m, Thresholding::Level(eta), Some(cycle))?;
            Certificate::refuted(Theorem::LevelTree, w)
        }
    };
    if extension {
        c.notes.push(
            "pattern is disconnected or has fewer than 3 vertices: decided per component \
             (every component must be a tree), an extension of the connected case"
                .into(),
        );
    }
    Ok(c)
}

/// Strict diagonal dominance with positive diagonal: a sufficient condition
/// for every thresholded version of `m` to stay positive definite.
pub fn dd_guarantee(m: &SymmetricMatrix) -> bool {
    m.diag().iter().all(|&d| d > 0.0) && is_strictly_diagonally_dominant(m).strictly_dominant
}
