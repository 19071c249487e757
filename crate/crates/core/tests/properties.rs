//! Randomized checks of the structural invariants, on graphs small enough for
//! the exact oracles.

use ferrers::graph::{BipartiteGraph, PartitionSpec, VertexSet};
use ferrers::linalg::{laplacian, matrix_m, schur_lx, sum_of_p, Rational, RationalMatrix};
use ferrers::spectral::{eigen_decompose, spectral_report, RealMatrix};
use ferrers::trees::{
    bozkurt_bound, check_reduction, ferrers_invariant, tau_all_deletions, tau_brute_force,
    tau_matrix_tree,
};
use ferrers::verify::{equality_flag_diagonalization, verify_graph};
use num_bigint::BigInt;
use num_traits::ToPrimitive;
use proptest::prelude::*;
use proptest::sample::subsequence;

fn graph(max_m: usize, max_n: usize) -> impl Strategy<Value = BipartiteGraph> {
    (1..=max_m, 1..=max_n).prop_flat_map(|(m, n)| {
        any::<u64>().prop_map(move |bits| {
            let mask = bits & ((1u64 << (m * n)) - 1);
            BipartiteGraph::from_mask(m, n, mask)
        })
    })
}

fn connected(max_m: usize, max_n: usize) -> impl Strategy<Value = BipartiteGraph> {
    graph(max_m, max_n).prop_filter("connected", BipartiteGraph::is_connected)
}

fn partition(max_m: usize, max_n: usize) -> impl Strategy<Value = PartitionSpec> {
    (1..=max_m, proptest::collection::vec(1..=max_m, 1..=max_n)).prop_map(|(m, mut h)| {
        for x in &mut h {
            *x = (*x).min(m);
        }
        h.sort_unstable_by(|a, b| b.cmp(a));
        h[0] = m;
        PartitionSpec::new(h).unwrap()
    })
}

fn permutation(len: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..len).collect::<Vec<_>>()).prop_shuffle()
}

fn graph_with_perms() -> impl Strategy<Value = (BipartiteGraph, Vec<usize>, Vec<usize>)> {
    prop_oneof![
        graph(5, 5),
        partition(5, 5).prop_map(|p| BipartiteGraph::ferrers_from_partition(&p)),
    ]
    .prop_flat_map(|g| {
        let (m, n) = (g.m(), g.n());
        (Just(g), permutation(m), permutation(n))
    })
}

fn to_rational(v: &num_bigint::BigUint) -> Rational {
    Rational::from_integer(BigInt::from(v.clone()))
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]

    #[test]
    fn handshake(g in graph(6, 6)) {
        let d = g.degrees();
        prop_assert_eq!(d.a.iter().sum::<usize>(), g.edge_count());
        prop_assert_eq!(d.b.iter().sum::<usize>(), g.edge_count());
    }

    #[test]
    fn partition_readback_is_identity(p in partition(8, 8)) {
        let g = BipartiteGraph::ferrers_from_partition(&p);
        prop_assert!(g.is_ferrers());
        prop_assert_eq!(g.partition_heights(), Some(p));
    }

    #[test]
    fn ferrers_is_label_invariant((g, px, py) in graph_with_perms()) {
        let relabeled = g.permute_x(&px).permute_y(&py);
        prop_assert_eq!(relabeled.is_ferrers(), g.is_ferrers());
        prop_assert_eq!(relabeled.is_connected(), g.is_connected());
        prop_assert_eq!(tau_matrix_tree(&relabeled), tau_matrix_tree(&g));
    }

    #[test]
    fn schur_block_formula_equals_projection_sum(g in connected(5, 5)) {
        prop_assert_eq!(schur_lx(&g).unwrap(), sum_of_p(&g).unwrap());
    }

    #[test]
    fn adjugate_of_lx_is_multiple_of_j(g in connected(5, 5)) {
        let adj = schur_lx(&g).unwrap().adjugate();
        // m = 1 has no adjugate to speak of
        if g.m() >= 2 {
            let adj = adj.unwrap();
            let c = adj.get(0, 0).clone();
            prop_assert!(adj.rows().flatten().all(|x| *x == c));
        }
    }

    #[test]
    fn laplacian_schur_determinant_identity(g in connected(4, 4)) {
        let l = laplacian(&g);
        let (m, n) = (g.m(), g.n());
        // drop x_0 so the matrix is nonsingular, keeping the Y block last
        if m >= 2 {
            let reduced = l.delete_row_col(0).unwrap();
            let split = m - 1;
            let c = RationalMatrix::from_fn(n, |i, j| reduced.get(split + i, split + j).clone());
            let lhs = reduced.det_exact();
            let rhs = c.det_exact() * reduced.schur_complement(split).unwrap().det_exact();
            prop_assert_eq!(lhs, rhs);
        }
    }

    #[test]
    fn every_deleted_index_gives_tau(g in connected(5, 5)) {
        prop_assert_eq!(tau_all_deletions(&g).unwrap(), tau_matrix_tree(&g));
        prop_assert!(check_reduction(&g).unwrap());
    }

    #[test]
    fn bozkurt_dominates(g in connected(5, 5)) {
        let b = bozkurt_bound(&g).unwrap();
        prop_assert!(b.holds);
        prop_assert!(b.dominates_ferrers);
        prop_assert!(to_rational(&tau_matrix_tree(&g).0) <= b.bound);
        prop_assert!(ferrers_invariant(&g).unwrap() <= b.bound);
    }

    #[test]
    fn eigenvalue_product_matches_exact_determinant(g in connected(6, 6)) {
        let m = matrix_m(&g).unwrap();
        let det = m.det_exact().to_f64().unwrap();
        let eig = eigen_decompose(&RealMatrix::from_rational(&m), 1e-9).unwrap();
        let product: f64 = eig.values.iter().product();
        prop_assert!((product - det).abs() <= 1e-8 * det.abs(), "{product} vs {det}");
    }

    #[test]
    fn eigenvectors_orthonormal(g in connected(6, 6)) {
        let m = matrix_m(&g).unwrap();
        let eig = eigen_decompose(&RealMatrix::from_rational(&m), 1e-9).unwrap();
        let v = &eig.vectors;
        let gram = v.transpose().mul(v);
        prop_assert!(gram.max_abs_diff(&RealMatrix::identity(g.m())) <= 1e-10);
    }

    #[test]
    fn strengthened_partial_sums(g in connected(6, 6)) {
        let r = spectral_report(&g, 1e-9).unwrap();
        for (gap, defect) in r.partial_gaps.iter().zip(&r.defect_sums) {
            prop_assert!(*gap >= defect.to_f64().unwrap() - 1e-9);
        }
        let sum_a = r.a_sorted.iter().sum::<usize>() as f64;
        prop_assert!(r.trace_gap <= 1e-9 * sum_a);
        prop_assert!(r.positive_definite);
    }

    #[test]
    fn theorem_on_random_graphs(g in connected(6, 6)) {
        let r = verify_graph(&g).unwrap();
        prop_assert!(r.passes());
        prop_assert_eq!(r.equality, g.is_ferrers());
    }

    #[test]
    fn ferrers_graphs_attain_the_bound(p in partition(8, 8)) {
        let g = BipartiteGraph::ferrers_from_partition(&p);
        let r = verify_graph(&g).unwrap();
        prop_assert!(r.equality && r.ferrers);
        prop_assert!(equality_flag_diagonalization(&p).unwrap());
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn brute_force_oracle_up_to_twenty_edges(
        g in connected(5, 5).prop_filter("at most 20 edges", |g| g.edge_count() <= 20)
    ) {
        let (count, trees) = tau_brute_force(&g, 20).unwrap();
        prop_assert_eq!(&count, &tau_matrix_tree(&g));
        prop_assert_eq!(trees.len(), count.0.to_usize().unwrap());
    }

    #[test]
    fn deleting_an_edge_never_adds_trees(g in connected(5, 5), pick in any::<prop::sample::Index>()) {
        let edges = g.edges();
        let (x, y) = edges[pick.index(edges.len())];
        let mut nbrs = g.neighborhoods().to_vec();
        nbrs[y] = nbrs[y].difference(VertexSet::from_indices([x]));
        if let Ok(h) = BipartiteGraph::new(g.m(), nbrs) {
            prop_assert!(tau_matrix_tree(&h) <= tau_matrix_tree(&g));
        }
    }

    #[test]
    fn edge_subsets_of_complete_graph(m in 1usize..=4, n in 1usize..=4, keep in subsequence((0..16).collect::<Vec<_>>(), 0..=16)) {
        let mut mask = 0u64;
        for k in keep.into_iter().filter(|&k| k < m * n) {
            mask |= 1 << k;
        }
        let g = BipartiteGraph::from_mask(m, n, mask);
        let tau = tau_matrix_tree(&g);
        prop_assert_eq!(tau.is_zero(), !g.is_connected());
    }
}
