mod common;

use pdthresh::generate::{random_connected_graph, random_pd};
use pdthresh::matrix::{
    determinant, eigenvalues, gershgorin_discs, is_positive_definite, is_positive_definite_with,
    leading_minors_exact, schur_complement, PdMethod, DEFAULT_PD_TOL,
};
use pdthresh::threshold::{threshold_at_level, threshold_by_graph, zero_pattern_graph, LevelThreshold};
use pdthresh::{SymmetricMatrix, UndirectedGraph};
use num_traits::{Signed, ToPrimitive};
use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

/// Entries on a grid of quarters in `[-5, 5]`.
fn rational_matrix(rng: &mut impl Rng, n: usize) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(n, |_, _| rng.gen_range(-20..=20) as f64 / 4.0).unwrap()
}

fn random_symmetric(rng: &mut impl Rng, n: usize, scale: f64) -> SymmetricMatrix {
    SymmetricMatrix::from_upper_fn(n, |_, _| rng.gen_range(-scale..scale)).unwrap()
}

#[test]
fn float_and_exact_agree_away_from_singularity() {
    let mut rng = ChaCha8Rng::seed_from_u64(3);
    let mut compared = 0;
    while compared < 1000 {
        let n = rng.gen_range(1..=8);
        // Diagonal boost to get a mix of PD and non-PD matrices.
        let boost = rng.gen_range(0.0..12.0);
        let m = rational_matrix(&mut rng, n).shifted(boost);
        // All leading minors, not just up to the first nonpositive one.
        let minors: Vec<f64> = (1..=n)
            .map(|k| {
                let idx: Vec<usize> = (0..k).collect();
                pdthresh::matrix::determinant_exact(&m.principal(&idx)).to_f64().unwrap()
            })
            .collect();
        if minors.iter().any(|x| x.abs() <= 1e-6) {
            continue;
        }
        compared += 1;
        let f = is_positive_definite_with(&m, DEFAULT_PD_TOL, PdMethod::Float);
        let e = is_positive_definite_with(&m, DEFAULT_PD_TOL, PdMethod::Exact);
        assert_eq!(f.is_pd, e.is_pd, "{m:?}");
        assert_eq!(e.is_pd, minors.iter().all(|&x| x > 0.0));
    }
}

#[test]
fn exact_minors_match_cofactor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(4);
    for _ in 0..200 {
        let n = rng.gen_range(1..=6);
        let m = rational_matrix(&mut rng, n).shifted(15.0);
        let minors = leading_minors_exact(&m);
        for (k, minor) in minors.iter().enumerate() {
            let idx: Vec<usize> = (0..=k).collect();
            let oracle = common::cofactor_det(&m.principal(&idx).rows());
            assert!((minor.to_f64().unwrap() - oracle).abs() <= 1e-9 * oracle.abs().max(1.0));
            if k + 1 < minors.len() {
                assert!(minor.is_positive());
            }
        }
    }
}

#[test]
fn schur_determinant_factorization() {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for _ in 0..300 {
        let n = rng.gen_range(2..=8);
        let m = random_pd(&mut rng, n);
        let k = rng.gen_range(1..n);
        let mut all: Vec<usize> = (0..n).collect();
        for i in 0..n {
            all.swap(i, rng.gen_range(i..n));
        }
        let keep = &all[..k];
        let rest: Vec<usize> = (0..n).filter(|v| !keep.contains(v)).collect();
        let s = schur_complement(&m, keep).unwrap();
        let lhs = determinant(&m);
        let rhs = determinant(&m.principal(&rest)) * determinant(&s);
        assert!((lhs - rhs).abs() <= 1e-9 * lhs.abs(), "{lhs} vs {rhs}");
        assert!((lhs - common::cofactor_det(&m.rows())).abs() <= 1e-9 * lhs.abs());
    }
}

#[test]
fn diagonal_dominance_implies_pd() {
    let mut rng = ChaCha8Rng::seed_from_u64(9);
    for _ in 0..1000 {
        let n = rng.gen_range(1..=10);
        let mut m = random_symmetric(&mut rng, n, 1.0);
        for i in 0..n {
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
            m.set(i, i, r + rng.gen_range(1e-3..1.0));
        }
        assert!(pdthresh::certificates::dd_guarantee(&m));
        assert!(is_positive_definite(&m, DEFAULT_PD_TOL).is_pd);
    }
}

#[test]
fn eigenvalues_lie_in_gershgorin_discs() {
    let mut rng = ChaCha8Rng::seed_from_u64(10);
    for _ in 0..500 {
        let n = rng.gen_range(1..=6);
        let m = random_symmetric(&mut rng, n, 3.0);
        let discs = gershgorin_discs(&m);
        for ev in eigenvalues(&m) {
            assert!(discs.iter().any(|d| (ev - d.center).abs() <= d.radius + 1e-9), "{ev}");
        }
    }
}

fn random_subgraph(rng: &mut impl Rng, g: &UndirectedGraph) -> UndirectedGraph {
    let mut h = g.clone();
    for (u, v) in g.edges() {
        if rng.gen_bool(0.5) {
            h.remove_edge(u, v);
        }
    }
    h
}

proptest! {
    #[test]
    fn graph_thresholding_algebra(seed in any::<u64>(), n in 1usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_symmetric(&mut rng, n, 2.0);
        let g = random_connected_graph(&mut rng, n, 0.4);
        let h = random_subgraph(&mut rng, &g);
        let mg = threshold_by_graph(&m, &g).unwrap();
        prop_assert_eq!(threshold_by_graph(&mg, &g).unwrap(), mg.clone());
        prop_assert_eq!(threshold_by_graph(&mg, &h).unwrap(), threshold_by_graph(&m, &h).unwrap());
        prop_assert_eq!(mg.diag(), m.diag());
        for i in 0..n {
            for j in 0..n {
                prop_assert_eq!(mg.get(i, j), mg.get(j, i));
            }
        }
    }

    #[test]
    fn level_thresholding_consistency(seed in any::<u64>(), n in 1usize..9, e1 in 0.0f64..2.0, e2 in 0.0f64..2.0) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let m = random_symmetric(&mut rng, n, 2.0);
        let (lo, hi) = (e1.min(e2), e1.max(e2));
        let a = threshold_at_level(&m, LevelThreshold::new(lo).unwrap());
        let b = threshold_at_level(&m, LevelThreshold::new(hi).unwrap());
        for i in 0..n {
            for j in 0..n {
                if a.get(i, j) == 0.0 {
                    prop_assert_eq!(b.get(i, j), 0.0);
                }
            }
        }
        prop_assert_eq!(b.diag(), m.diag());
        let g = zero_pattern_graph(&m, hi);
        prop_assert_eq!(b, threshold_by_graph(&m, &g).unwrap());
    }
}
