//! Graph catalogs and seeded random generators for tests and demos.

use std::collections::BTreeSet;

use rand::seq::SliceRandom;
use rand::Rng;

use crate::graph::UndirectedGraph;
use crate::matrix::{min_eigenvalue, SymmetricMatrix};
use crate::threshold::threshold_by_graph;

/// Every labeled graph on `n` vertices (`2^(n(n-1)/2)` of them).
pub fn all_labeled_graphs(n: usize) -> impl Iterator<Item = UndirectedGraph> {
    let pairs: Vec<(usize, usize)> = (0..n).flat_map(|u| (u + 1..n).map(move |v| (u, v))).collect();
    assert!(pairs.len() < 32, "too many labeled graphs on {n} vertices");
    (0u32..1 << pairs.len()).map(move |mask| {
        let edges = pairs.iter().enumerate().filter(|(b, _)| mask >> b & 1 == 1).map(|(_, &e)| e);
        UndirectedGraph::from_edges(n, edges).expect("distinct pairs")
    })
}

/// Stable vertex colors from iterated degree refinement. Colors depend only
/// on the isomorphism class of the rooted vertex, not on labels.
fn refine_colors(g: &UndirectedGraph) -> Vec<usize> {
    let n = g.vertex_count();
    let mut colors: Vec<usize> = (0..n).map(|v| g.degree(v)).collect();
    loop {
        let sigs: Vec<(usize, Vec<usize>)> = (0..n)
            .map(|v| {
                let mut nb: Vec<usize> = g.neighbors(v).map(|w| colors[w]).collect();
                nb.sort_unstable();
                (colors[v], nb)
            })
            .collect();
        let distinct: Vec<&(usize, Vec<usize>)> = sigs.iter().collect::<BTreeSet<_>>().into_iter().collect();
        let next: Vec<usize> = sigs
            .iter()
            .map(|s| distinct.binary_search(&s).expect("present"))
            .collect();
        let classes = |c: &[usize]| c.iter().collect::<BTreeSet<_>>().len();
        if classes(&next) == classes(&colors) {
            return next;
        }
        colors = next;
    }
}

/// Isomorphism-invariant code of a graph with at most 8 vertices: the
/// smallest adjacency bitmask over vertex orders that respect the refined
/// color classes.
pub fn canonical_code(g: &UndirectedGraph) -> u64 {
    let n = g.vertex_count();
    assert!(n <= 8, "canonical codes are limited to 8 vertices");
    let colors = refine_colors(g);
    let mut slots = colors.clone();
    slots.sort_unstable();

    fn search(
        g: &UndirectedGraph,
        colors: &[usize],
        slots: &[usize],
        perm: &mut Vec<usize>,
        used: &mut [bool],
        best: &mut u64,
    ) {
        let n = colors.len();
        let pos = perm.len();
        if pos == n {
            let mut code = 0u64;
            for i in 0..n {
                for j in i + 1..n {
                    if g.has_edge(perm[i], perm[j]) {
                        code |= 1 << (i * n + j);
                    }
                }
            }
            *best = (*best).min(code);
            return;
        }
        for v in 0..n {
            if !used[v] && colors[v] == slots[pos] {
                used[v] = true;
                perm.push(v);
                search(g, colors, slots, perm, used, best);
                perm.pop();
                used[v] = false;
            }
        }
    }

    let mut best = u64::MAX;
    search(g, &colors, &slots, &mut Vec::with_capacity(n), &mut vec![false; n], &mut best);
    best | (n as u64) << 60
}

fn grow<F>(seeds: Vec<UndirectedGraph>, mut extend: F) -> Vec<UndirectedGraph>
where
    F: FnMut(&UndirectedGraph, &mut dyn FnMut(UndirectedGraph)),
{
    let mut seen = BTreeSet::new();
    let mut out = Vec::new();
    for g in &seeds {
        extend(g, &mut |h| {
            if seen.insert(canonical_code(&h)) {
                out.push(h);
            }
        });
    }
    out
}

fn with_new_vertex(g: &UndirectedGraph, nbrs: impl Iterator<Item = usize>) -> UndirectedGraph {
    let n = g.vertex_count();
    let edges = g.edges().chain(nbrs.map(|u| (u, n)));
    UndirectedGraph::from_edges(n + 1, edges).expect("new edges are distinct")
}

/// Connected graphs on `n <= 8` vertices, one per isomorphism class. Every
/// connected graph has a vertex whose removal keeps it connected, so all
/// classes arise by attaching a new vertex to a nonempty set of vertices.
pub fn connected_graphs(n: usize) -> Vec<UndirectedGraph> {
    assert!((1..=8).contains(&n));
    let mut level = vec![UndirectedGraph::new(1)];
    for k in 1..n {
        level = grow(level, |g, emit| {
            for mask in 1u32..1 << k {
                emit(with_new_vertex(g, (0..k).filter(|u| mask >> u & 1 == 1)));
            }
        });
    }
    level
}

/// Trees on `n <= 8` vertices, one per isomorphism class.
pub fn trees(n: usize) -> Vec<UndirectedGraph> {
    assert!((1..=8).contains(&n));
    let mut level = vec![UndirectedGraph::new(1)];
    for k in 1..n {
        level = grow(level, |g, emit| {
            for u in 0..k {
                emit(with_new_vertex(g, std::iter::once(u)));
            }
        });
    }
    level
}

fn relabel<R: Rng + ?Sized>(rng: &mut R, g: &UndirectedGraph) -> UndirectedGraph {
    let n = g.vertex_count();
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    UndirectedGraph::from_edges(n, g.edges().map(|(u, v)| (perm[u], perm[v]))).expect("relabeling is a bijection")
}

/// Uniformly shuffled labels on a random recursive tree.
pub fn random_tree<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UndirectedGraph {
    let edges: Vec<(usize, usize)> = (1..n).map(|v| (rng.gen_range(0..v), v)).collect();
    relabel(rng, &UndirectedGraph::from_edges(n, edges).expect("tree edges are distinct"))
}

/// A random spanning tree plus each remaining pair with probability `p`.
pub fn random_connected_graph<R: Rng + ?Sized>(rng: &mut R, n: usize, p: f64) -> UndirectedGraph {
    let mut g = random_tree(rng, n);
    for u in 0..n {
        for v in u + 1..n {
            if !g.has_edge(u, v) && rng.gen_bool(p) {
                g.add_edge(u, v).expect("vertices in range");
            }
        }
    }
    g
}

/// Connected chordal graph: each new vertex is made simplicial by joining it
/// to a random clique around a random earlier vertex. Reversing the insertion
/// order gives a perfect elimination ordering.
pub fn random_chordal_graph<R: Rng + ?Sized>(rng: &mut R, n: usize) -> UndirectedGraph {
    let mut g = UndirectedGraph::new(n);
    for v in 1..n {
        let u = rng.gen_range(0..v);
        let mut clique = vec![u];
        let mut candidates: Vec<usize> = g.neighbors(u).collect();
        candidates.shuffle(rng);
        for w in candidates {
            if rng.gen_bool(0.5) && clique.iter().all(|&c| g.has_edge(c, w)) {
                clique.push(w);
            }
        }
        for c in clique {
            g.add_edge(c, v).expect("vertices in range");
        }
    }
    relabel(rng, &g)
}

/// `B B^T / n + delta I` with `B` uniform on `[-1, 1]` and `delta` in
/// `[0.01, 0.5)`.
pub fn random_pd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymmetricMatrix {
    let b: Vec<f64> = (0..n * n).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let delta = rng.gen_range(0.01..0.5);
    SymmetricMatrix::from_upper_fn(n, |i, j| {
        let dot: f64 = (0..n).map(|k| b[i * n + k] * b[j * n + k]).sum();
        dot / n as f64 + if i == j { delta } else { 0.0 }
    })
    .expect("finite entries")
}

/// A random matrix of `P_G`: uniform entries on the edges, diagonal shifted
/// so the smallest eigenvalue lands in `[0.05, 1)`.
pub fn random_pattern_pd<R: Rng + ?Sized>(rng: &mut R, g: &UndirectedGraph) -> SymmetricMatrix {
    let n = g.vertex_count();
    let mut m = SymmetricMatrix::zeros(n);
    for i in 0..n {
        m.set(i, i, rng.gen_range(0.0..1.0));
    }
    for (u, v) in g.edges() {
        m.set(u, v, rng.gen_range(-1.0..1.0));
    }
    let target = rng.gen_range(0.05..1.0);
    m.shifted(target - min_eigenvalue(&m))
}

/// `N_G` for a random positive definite `N = B B^T / r + delta I` with a
/// random-rank factor `B` and a small ridge `delta`, so the thresholded
/// matrix is positive definite for some draws and not for others.
pub fn random_thresholded<R: Rng + ?Sized>(rng: &mut R, g: &UndirectedGraph) -> SymmetricMatrix {
    let n = g.vertex_count();
    let r = rng.gen_range(1..=n.max(1));
    let b: Vec<f64> = (0..n * r).map(|_| rng.gen_range(-1.0..1.0)).collect();
    let delta = rng.gen_range(0.01..0.2);
    let big_n = SymmetricMatrix::from_upper_fn(n, |i, j| {
        let dot: f64 = (0..r).map(|k| b[i * r + k] * b[j * r + k]).sum();
        dot / r as f64 + if i == j { delta } else { 0.0 }
    })
    .expect("finite entries");
    threshold_by_graph(&big_n, g).expect("dimensions agree")
}

/// Tridiagonal with diagonal in `[0.5, 2)` and off-diagonal in
/// `[-scale, scale)`; positive definite only sometimes for larger `scale`.
pub fn random_tridiagonal<R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> SymmetricMatrix {
    let diag: Vec<f64> = (0..n).map(|_| rng.gen_range(0.5..2.0)).collect();
    let off: Vec<f64> = (1..n).map(|_| rng.gen_range(-scale..scale)).collect();
    SymmetricMatrix::tridiagonal(&diag, &off).expect("lengths agree")
}

/// A random positive definite tridiagonal matrix.
pub fn random_tridiagonal_pd<R: Rng + ?Sized>(rng: &mut R, n: usize) -> SymmetricMatrix {
    random_pattern_pd(rng, &UndirectedGraph::path(n))
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn catalog_sizes() {
        let connected: Vec<usize> = (1..=6).map(|n| connected_graphs(n).len()).collect();
        assert_eq!(connected, vec![1, 1, 2, 6, 21, 112]);
        let t: Vec<usize> = (1..=8).map(|n| trees(n).len()).collect();
        assert_eq!(t, vec![1, 1, 1, 2, 3, 6, 11, 23]);
        assert_eq!(all_labeled_graphs(4).count(), 64);
    }

    #[test]
    fn canonical_code_is_label_invariant() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..50 {
            let g = random_connected_graph(&mut rng, 7, 0.3);
            assert_eq!(canonical_code(&g), canonical_code(&relabel(&mut rng, &g)));
        }
        assert_ne!(
            canonical_code(&UndirectedGraph::path(4)),
            canonical_code(&UndirectedGraph::star(4))
        );
    }

    #[test]
    fn generators_have_their_shape() {
        let mut rng = ChaCha8Rng::seed_from_u64(1);
        for n in 1..12 {
            assert!(random_tree(&mut rng, n).is_tree());
            assert!(random_connected_graph(&mut rng, n, 0.2).is_connected());
            let c = random_chordal_graph(&mut rng, n);
            assert!(c.is_connected() && crate::graph::chordality(&c).is_some());
            let g = random_connected_graph(&mut rng, n, 0.4);
            let m = random_pattern_pd(&mut rng, &g);
            assert!(crate::threshold::is_in_pattern_cone(&m, &g, 0.0).unwrap());
            assert!(min_eigenvalue(&random_pd(&mut rng, n)) > 0.0);
        }
    }
}
