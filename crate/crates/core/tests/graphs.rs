mod common;

use std::f64::consts::PI;

use common::{random_connected_edges, sym_eig_k, Stream};
use logsync_core::graphs::{
    line_edge_weights, numeric_spectrum, tridiagonal_matrix, tridiagonal_spectrum, GraphTopology, KMode,
    TopologyKind,
};
use logsync_core::measures::Norm;
use logsync_core::DenseMatrix;
use proptest::prelude::*;

fn random_graph() -> impl Strategy<Value = GraphTopology> {
    (2usize..9, any::<u64>(), 0.0f64..0.8).prop_map(|(n, seed, extra)| {
        let mut s = Stream::new(seed);
        GraphTopology::custom(n, random_connected_edges(&mut s, n, extra)).unwrap()
    })
}

fn random_tree() -> impl Strategy<Value = GraphTopology> {
    (2usize..12, any::<u64>()).prop_map(|(n, seed)| {
        let mut s = Stream::new(seed);
        GraphTopology::custom(n, random_connected_edges(&mut s, n, 0.0)).unwrap()
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn incidence_factorizes_laplacian(g in random_graph()) {
        let e = g.incidence();
        prop_assert_eq!(&(&e * &e.transpose()), g.laplacian());
    }

    #[test]
    fn edge_laplacian_intertwines(g in random_graph()) {
        let et = g.incidence().transpose();
        let k = g.k_matrix(KMode::EdgeLaplacian).unwrap();
        let lhs = &et * g.laplacian();
        let rhs = &k * &et;
        prop_assert!(lhs.max_abs_diff(&rhs) < 1e-12);
    }

    #[test]
    fn laplacian_rows_sum_to_zero(g in random_graph()) {
        let l = g.laplacian();
        for i in 0..l.rows() {
            prop_assert_eq!(l.row(i).iter().sum::<f64>(), 0.0);
        }
    }

    #[test]
    fn numeric_lambda2_matches_inertia_oracle(g in random_graph()) {
        let want = sym_eig_k(g.laplacian(), 1);
        prop_assert!((g.lambda2_numeric().unwrap() - want).abs() < 1e-9);
        prop_assert!(want > 1e-9);
    }

    #[test]
    fn tree_edge_laplacian_shares_nonzero_spectrum(g in random_tree()) {
        let nodes = numeric_spectrum(g.laplacian()).unwrap();
        let edges = numeric_spectrum(&g.edge_laplacian()).unwrap();
        prop_assert_eq!(edges.len() + 1, nodes.len());
        prop_assert!(nodes[0].abs() < 1e-9);
        for (a, b) in nodes[1..].iter().zip(&edges) {
            prop_assert!((a - b).abs() <= 1e-9);
        }
    }
}

#[test]
fn complete_shortcut_intertwines() {
    for n in 2..12 {
        let g = GraphTopology::complete(n).unwrap();
        let et = g.incidence().transpose();
        let k = g.k_matrix(KMode::CompleteShortcut).unwrap();
        assert!((&et * g.laplacian()).max_abs_diff(&(&k * &et)) < 1e-12);
    }
    assert!(GraphTopology::line(4).unwrap().k_matrix(KMode::CompleteShortcut).is_err());
}

#[test]
fn family_lambda2_against_inertia_oracle() {
    for n in 2..=30 {
        for g in [
            GraphTopology::line(n).unwrap(),
            GraphTopology::complete(n).unwrap(),
            GraphTopology::star(n).unwrap(),
        ] {
            let want = sym_eig_k(g.laplacian(), 1);
            assert!((g.lambda2_closed_form().unwrap() - want).abs() < 1e-8, "{:?}", g.kind());
        }
    }
    for r in 2..=6 {
        for c in 2..=6 {
            let g = GraphTopology::grid(r, c).unwrap();
            assert!((g.lambda2_closed_form().unwrap() - sym_eig_k(g.laplacian(), 1)).abs() < 1e-8);
        }
    }
}

#[test]
fn cartesian_product_of_mixed_factors() {
    let g = GraphTopology::new(TopologyKind::Cartesian {
        factors: vec![TopologyKind::Star { n: 3 }, TopologyKind::Complete { n: 4 }],
    })
    .unwrap();
    assert_eq!(g.node_count(), 12);
    assert!((g.lambda2_closed_form().unwrap() - g.lambda2_numeric().unwrap()).abs() < 1e-9);
    assert!((g.lambda2_closed_form().unwrap() - 1.0).abs() < 1e-12);
}

#[test]
fn tridiagonal_forms_against_inertia_oracle() {
    let mut s = Stream::new(3);
    for n in 1..=20 {
        let v = s.uniform(-3.0, 3.0);
        let sub = s.uniform(0.1, 2.0);
        let sup = s.uniform(0.1, 2.0);
        let sigma = (sub * sup).sqrt();
        for corner in [0.0, sigma] {
            let closed = tridiagonal_spectrum(v, corner, corner, sub, sup, n).unwrap();
            // Similar symmetric matrix with off-diagonal σ.
            let sym = tridiagonal_matrix(v, corner, corner, sigma, sigma, n);
            for (k, lam) in closed.iter().enumerate() {
                assert!((lam - sym_eig_k(&sym, k)).abs() < 1e-9, "n={n} corner={corner}");
            }
        }
    }
}

#[test]
fn tridiagonal_rejects_unsupported_corners() {
    assert!(tridiagonal_spectrum(0.0, 1.0, 0.0, 1.0, 1.0, 4).is_err());
    assert!(tridiagonal_spectrum(0.0, 0.0, 0.0, 1.0, -1.0, 4).is_err());
}

#[test]
fn perron_vector_of_line_edge_laplacian() {
    for n in 3..=20 {
        let g = GraphTopology::line(n).unwrap();
        let k = g.edge_laplacian();
        let w = line_edge_weights(n, Norm::L1).unwrap();
        let lam = 4.0 * (PI / (2.0 * n as f64)).sin().powi(2);
        let kp = k.matvec(&w.perron);
        for (a, b) in kp.iter().zip(&w.perron) {
            assert!((a - lam * b).abs() <= 1e-10);
        }
        assert!(w.perron.iter().all(|p| *p > 0.0));
    }
}

#[test]
fn invalid_graphs() {
    assert!(GraphTopology::line(1).is_err());
    assert!(GraphTopology::custom(3, vec![(0, 1)]).is_err());
    assert!(GraphTopology::custom(3, vec![(0, 1), (1, 1), (1, 2)]).is_err());
    assert!(GraphTopology::custom(3, vec![(0, 1), (1, 0), (1, 2)]).is_err());
    let _ = DenseMatrix::identity(1);
}

