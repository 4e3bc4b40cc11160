use num_rational::BigRational;
use num_traits::Zero;
use proptest::prelude::*;

use forest_spectra::bijections::{build_families, verify_count_inequalities};
use forest_spectra::forest::{edge_pair_counts, enumerate_forests, PairCounts};
use forest_spectra::graph::{complete_bipartite_graph, complete_graph, Graph};
use forest_spectra::lefschetz::{catalecticant_matrix, higher_hessian, hilbert_function, truncated_graphic_polynomial};
use forest_spectra::linalg::ExactMatrix;
use forest_spectra::matroid::forest_generating_function;
use forest_spectra::poly::{apply_diff_operator, Monomial, Polynomial};
use forest_spectra::spectra::{
    closed_form_spectrum, structured_params, tilde_hessian, verify_spectrum, StructuredParams,
};

fn rational() -> impl Strategy<Value = BigRational> {
    (-20i64..=20, 1i64..=4).prop_map(|(n, d)| BigRational::new(n.into(), d.into()))
}

fn graph_and_k() -> impl Strategy<Value = (Graph, usize)> {
    prop_oneof![
        (4usize..=6).prop_flat_map(|n| (Just(n), 1..n - 2)).prop_map(|(n, k)| (complete_graph(n).unwrap(), k)),
        (2usize..=3, 2usize..=3)
            .prop_flat_map(|(m, n)| (Just(m), Just(n), 1..m + n - 2))
            .prop_map(|(m, n, k)| (complete_bipartite_graph(m, n).unwrap(), k)),
    ]
}

/// The class-structured matrix for `params` on `g`, built from the pair
/// classes directly.
fn structured_matrix(g: &Graph, params: &StructuredParams) -> ExactMatrix {
    use forest_spectra::graph::{classify_edge_pair, PairClass};
    let edges = g.edges();
    ExactMatrix::from_fn(edges.len(), edges.len(), |i, j| {
        let class = classify_edge_pair(g, &edges[i], &edges[j]).unwrap();
        match (params, class) {
            (StructuredParams::Complete { alpha, .. }, PairClass::Equal) => alpha.clone(),
            (StructuredParams::Complete { beta, .. }, PairClass::ShareVertex) => beta.clone(),
            (StructuredParams::Complete { gamma, .. }, PairClass::Disjoint) => gamma.clone(),
            (StructuredParams::Bipartite { alpha, .. }, PairClass::Equal) => alpha.clone(),
            (StructuredParams::Bipartite { beta, .. }, PairClass::ShareLeft) => beta.clone(),
            (StructuredParams::Bipartite { gamma, .. }, PairClass::ShareRight) => gamma.clone(),
            (StructuredParams::Bipartite { delta, .. }, PairClass::Disjoint) => delta.clone(),
            _ => unreachable!("class outside the graph kind"),
        }
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closed_form_certifies_any_complete_params(n in 3usize..=6, a in rational(), b in rational(), c in rational()) {
        let g = complete_graph(n).unwrap();
        let params = StructuredParams::Complete { alpha: a, beta: b, gamma: c, n };
        let mat = structured_matrix(&g, &params);
        let s = closed_form_spectrum(&params).unwrap();
        prop_assert!(verify_spectrum(&mat, &s).unwrap());
        // K_3 has no disjoint pairs, so gamma cannot be read back there.
        if n >= 4 {
            prop_assert_eq!(structured_params(&mat, &g).unwrap(), params);
        }
    }

    #[test]
    fn closed_form_certifies_any_bipartite_params(
        m in 2usize..=4, n in 2usize..=4,
        a in rational(), b in rational(), c in rational(), d in rational(),
    ) {
        let g = complete_bipartite_graph(m, n).unwrap();
        let params = StructuredParams::Bipartite { alpha: a, beta: b, gamma: c, delta: d, m, n };
        let mat = structured_matrix(&g, &params);
        let s = closed_form_spectrum(&params).unwrap();
        prop_assert!(verify_spectrum(&mat, &s).unwrap());
    }

    #[test]
    fn perturbed_spectrum_is_rejected(n in 4usize..=5, shift in 1i64..=3) {
        let g = complete_graph(n).unwrap();
        let h = tilde_hessian(&g, 1).unwrap();
        let s = closed_form_spectrum(&structured_params(&h, &g).unwrap()).unwrap();
        let bumped = forest_spectra::spectra::Spectrum::new(
            s.pairs().iter().enumerate().map(|(i, (v, m))| {
                let v = if i == 0 { v + BigRational::from_integer(shift.into()) } else { v.clone() };
                (v, *m)
            }),
        );
        prop_assert!(!verify_spectrum(&h, &bumped).unwrap());
    }

    #[test]
    fn hessian_is_symmetric_zero_diagonal_and_class_constant((g, k) in graph_and_k()) {
        let h = tilde_hessian(&g, k).unwrap();
        prop_assert!(h.is_symmetric());
        prop_assert!((0..h.rows()).all(|i| h.get(i, i).is_zero()));
        let params = structured_params(&h, &g).unwrap();
        let counts = edge_pair_counts(&g, k).unwrap();
        let int = |x: &num_bigint::BigUint| BigRational::from_integer(x.clone().into());
        match (params, counts) {
            (StructuredParams::Complete { beta, gamma, .. }, PairCounts::Complete { p, q }) => {
                prop_assert_eq!(beta, int(&p));
                prop_assert_eq!(gamma, int(&q));
            }
            (StructuredParams::Bipartite { beta, gamma, delta, .. }, PairCounts::Bipartite { p, q, r }) => {
                prop_assert_eq!(beta, int(&p));
                prop_assert_eq!(gamma, int(&q));
                prop_assert_eq!(delta, int(&r));
            }
            _ => prop_assert!(false, "kind mismatch"),
        }
    }

    #[test]
    fn enumeration_is_canonical_and_sized((g, k) in graph_and_k()) {
        let forests = enumerate_forests(&g, k).unwrap();
        prop_assert!(forests.windows(2).all(|w| w[0] < w[1]));
        prop_assert!(forests.iter().all(|f| f.component_count() == k));
        prop_assert_eq!(enumerate_forests(&g, k).unwrap(), forests);
    }

    #[test]
    fn families_partition_and_bijections_verify((g, k) in graph_and_k()) {
        let fam = build_families(&g, k).unwrap();
        for c in fam.verify().unwrap() {
            prop_assert!(c.passed, "{} {}", c.name, c.detail);
        }
        for rec in fam.records() {
            prop_assert!(rec.is_verified(), "{}", rec);
        }
        if matches!(g.kind(), forest_spectra::graph::GraphKind::CompleteBipartite { .. }) {
            prop_assert!(verify_count_inequalities(&fam).unwrap().holds());
        }
    }

    #[test]
    fn annihilator_matches_catalecticant(coeffs in proptest::collection::vec(-2i64..=2, 21)) {
        let phi = forest_generating_function(&complete_graph(4).unwrap(), 1).unwrap();
        let cat = catalecticant_matrix(&phi, 2).unwrap();
        // A random degree-2 form in the 6 variables.
        let mut monomials = Vec::new();
        for i in 0..6 {
            for j in i..6 {
                monomials.push(Monomial::from_indices(6, &[i, j]));
            }
        }
        let c = Polynomial::from_terms(
            phi.vars().clone(),
            monomials.into_iter().zip(coeffs).map(|(m, x)| (m, BigRational::from_integer(x.into()))),
        );
        let direct = apply_diff_operator(&c, &phi).unwrap().is_zero();
        prop_assert_eq!(cat.annihilates(&c).unwrap(), direct);
    }

    #[test]
    fn first_hessian_matches_plain_hessian(point in proptest::collection::vec(rational(), 6)) {
        let phi = forest_generating_function(&complete_graph(4).unwrap(), 1).unwrap();
        prop_assert_eq!(higher_hessian(&phi, 1, &point).unwrap(), phi.hessian_matrix(&point).unwrap());
    }
}

#[test]
fn hilbert_functions_are_symmetric() {
    let mut graphs: Vec<Graph> = (2..=5).map(|n| complete_graph(n).unwrap()).collect();
    for m in 1..=3 {
        for n in 1..=3 {
            if m + n <= 6 {
                graphs.push(complete_bipartite_graph(m, n).unwrap());
            }
        }
    }
    for g in graphs {
        for r in 1..g.vertex_count() {
            let phi = truncated_graphic_polynomial(&g, r).unwrap();
            let h = hilbert_function(&phi).unwrap();
            assert!(h.is_symmetric(), "{g} r={r}: {:?}", h.dims);
            assert_eq!(h.dims[0], 1);
            assert_eq!(h.dims.len(), r + 1);
        }
    }
}
