mod common;

use pdthresh::certificates::{
    certify_all_subgraph_preservation, certify_level_preservation, certify_subgraph_preservation,
    certify_universal_preservation, dd_guarantee, Verdict,
};
use pdthresh::counterexamples::{
    construct_cycle_counterexample, cycle_determinant, cycle_matrix, embed_counterexample, non_dd_witness,
    singular_shift, CycleParams, NonDdProperties,
};
use pdthresh::generate::{all_labeled_graphs, connected_graphs, random_connected_graph, random_pd};
use pdthresh::matrix::{
    determinant, is_positive_definite, is_positive_definite_with, min_eigenvalue, spectral_norm, PdMethod,
    DEFAULT_PD_TOL,
};
use pdthresh::threshold::{is_in_pattern_cone, threshold_by_graph};
use pdthresh::UndirectedGraph;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn exact_pd(m: &pdthresh::SymmetricMatrix) -> bool {
    is_positive_definite_with(m, DEFAULT_PD_TOL, PdMethod::Exact).is_pd
}

#[test]
fn closed_form_determinant_matches_cofactor_oracle() {
    let mut rng = ChaCha8Rng::seed_from_u64(21);
    for n in 3..=8 {
        for _ in 0..50 {
            let mut r = || rng.gen_range(-3.0..3.0);
            let p = CycleParams::new(n, r(), r(), r(), r()).unwrap();
            let oracle = common::cofactor_det(&cycle_matrix(&p).unwrap().rows());
            let closed = cycle_determinant(&p);
            assert!((closed - oracle).abs() <= 1e-9 * oracle.abs().max(1.0), "n={n}: {closed} vs {oracle}");
        }
    }
}

#[test]
fn recipe_properties() {
    for n in 3..=12 {
        let (m, p) = construct_cycle_counterexample(n).unwrap();
        assert!(p.b > 1.0 && p.a.abs() < 1.0);
        assert!(p.epsilon.unwrap() > 0.0);
        assert!(exact_pd(&m));
        let target = n as f64 / ((n - 1) as f64).powi(2);
        assert!((determinant(&m) - target).abs() <= 1e-9);
        assert!((p.p_value() - target).abs() <= 1e-9);
        let mut z = m.clone();
        z.set(0, n - 1, 0.0);
        assert!(determinant(&z) < 0.0);
        assert!(min_eigenvalue(&z) < 0.0);
        assert!(p.q_value() < 0.0 && p.discriminant() > 0.0);
    }
}

#[test]
fn embeddings_stay_in_the_cone_and_flip() {
    let mut rng = ChaCha8Rng::seed_from_u64(22);
    let mut flipped = 0;
    while flipped < 300 {
        let n = rng.gen_range(3..=9);
        let g = random_connected_graph(&mut rng, n, 0.4);
        let mut h = g.clone();
        for (u, v) in g.edges() {
            if rng.gen_bool(0.3) {
                h.remove_edge(u, v);
            }
        }
        match embed_counterexample(&g, &h) {
            Ok(e) => {
                assert!(is_in_pattern_cone(&e.matrix, &g, 0.0).unwrap());
                assert!(exact_pd(&e.matrix));
                assert!(!exact_pd(&threshold_by_graph(&e.matrix, &h).unwrap()));
                flipped += 1;
            }
            Err(pdthresh::Error::NoBrokenCycle) => assert!(common::components_induced(&g, &h)),
            Err(e) => panic!("{e}"),
        }
    }
}

#[test]
fn embedding_in_triangle_plus_edge() {
    let g = UndirectedGraph::from_edges(5, [(0, 1), (1, 2), (0, 2), (3, 4)]).unwrap();
    let h = UndirectedGraph::from_edges(5, [(0, 1), (1, 2), (3, 4)]).unwrap();
    let e = embed_counterexample(&g, &h).unwrap();
    assert!(!e.uses_a3_example);
    assert_eq!(e.matrix.principal(&[3, 4]), pdthresh::SymmetricMatrix::identity(2));
    assert!(exact_pd(&e.matrix) && !exact_pd(&threshold_by_graph(&e.matrix, &h).unwrap()));
}

#[test]
fn singular_shift_properties() {
    let mut rng = ChaCha8Rng::seed_from_u64(23);
    for _ in 0..100 {
        let n = rng.gen_range(1..=8);
        let m = random_pd(&mut rng, n);
        let b = singular_shift(&m).unwrap();
        assert!(min_eigenvalue(&b).abs() <= 1e-9 * spectral_norm(&m));
        let g = random_connected_graph(&mut rng, n, 0.3);
        let lambda = min_eigenvalue(&m);
        assert_eq!(threshold_by_graph(&b, &g).unwrap(), threshold_by_graph(&m, &g).unwrap().shifted(-lambda));
    }
}

#[test]
fn non_dd_witness_catalog_and_random() {
    for n in 3..=7 {
        for g in connected_graphs(n) {
            let a = non_dd_witness(&g).unwrap();
            assert!(NonDdProperties::check(&a, &g).unwrap().all(), "{g:?}");
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(24);
    for _ in 0..100 {
        let n = rng.gen_range(3..=15);
        let p = rng.gen_range(0.0..0.5);
        let g = random_connected_graph(&mut rng, n, p);
        let a = non_dd_witness(&g).unwrap();
        assert!(NonDdProperties::check(&a, &g).unwrap().all(), "{g:?}");
    }
}

#[test]
fn universal_certificates_sound_on_small_graphs() {
    let mut rng = ChaCha8Rng::seed_from_u64(25);
    for n in 1..=5 {
        for g in all_labeled_graphs(n) {
            let c = certify_universal_preservation(&g);
            assert!(c.verify(&g, None));
            let complete = UndirectedGraph::complete(n);
            let via_subgraph = certify_subgraph_preservation(&complete, &g).unwrap();
            assert_eq!(c.verdict, via_subgraph.verdict);
            if c.is_guaranteed() {
                for _ in 0..50 {
                    let m = random_pd(&mut rng, n);
                    assert!(is_positive_definite(&threshold_by_graph(&m, &g).unwrap(), DEFAULT_PD_TOL).is_pd);
                }
            }
        }
    }
}

#[test]
fn other_certificates_verify() {
    let mut rng = ChaCha8Rng::seed_from_u64(26);
    for _ in 0..200 {
        let n = rng.gen_range(1..=9);
        let p = rng.gen_range(0.0..0.4);
        let g = random_connected_graph(&mut rng, n, p);
        let c = certify_all_subgraph_preservation(&g);
        assert_eq!(c.is_guaranteed(), g.is_forest());
        assert!(c.verify(&g, None));
        let eta = rng.gen_range(0.01..5.0);
        let c = certify_level_preservation(&g, eta).unwrap();
        assert_eq!(c.is_guaranteed(), g.is_tree());
        assert!(c.verify(&g, None));
        if c.verdict == Verdict::NotGuaranteed {
            assert!(is_in_pattern_cone(&c.witness.unwrap().matrix, &g, 0.0).unwrap());
        }
    }
}

#[test]
fn dd_guarantee_survives_any_pattern() {
    let mut rng = ChaCha8Rng::seed_from_u64(27);
    for _ in 0..20 {
        let n = rng.gen_range(2..=8);
        let mut m = random_pd(&mut rng, n);
        for i in 0..n {
            let r: f64 = (0..n).filter(|&j| j != i).map(|j| m.get(i, j).abs()).sum();
            m.set(i, i, r + 0.01);
        }
        assert!(dd_guarantee(&m));
        for _ in 0..200 {
            let g = random_connected_graph(&mut rng, n, 0.3);
            let mut h = g.clone();
            for (u, v) in g.edges() {
                if rng.gen_bool(0.5) {
                    h.remove_edge(u, v);
                }
            }
            assert!(is_positive_definite(&threshold_by_graph(&m, &h).unwrap(), DEFAULT_PD_TOL).is_pd);
        }
    }
}
