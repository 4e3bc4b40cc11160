//! Exact Hessian spectra of forest generating functions on complete and
//! complete bipartite graphs, executable versions of the bijections behind
//! their sign patterns, and strong Lefschetz checks for the Artinian
//! Gorenstein algebras of truncated graphic matroids.
//!
//! All arithmetic is exact (`BigInt` / `BigRational`); nothing here uses
//! floating point.

pub mod bijections;
pub mod error;
pub mod forest;
pub mod graph;
pub mod lefschetz;
pub mod linalg;
pub mod matroid;
pub mod poly;
pub mod spectra;

pub use error::{Error, Result};
pub use forest::{
    count_forests_constrained, edge_pair_counts, enumerate_forests, moon_tree_counts, pq_decomposition,
    split_tree_at_edge, Decomposition, Forest, PairCounts, Tree,
};
pub use graph::{classify_edge_pair, complete_bipartite_graph, complete_graph, Edge, Graph, PairClass, Vertex};
pub use linalg::ExactMatrix;
pub use matroid::{basis_generating_polynomial, graphic_matroid, truncate, verify_exchange_axiom, Matroid};
pub use poly::{apply_diff_operator, Monomial, Polynomial};
pub use spectra::{
    closed_form_spectrum, exact_determinant, predicted_signs, sign_profile, structured_params, tilde_hessian,
    verify_spectrum, SignProfile, Spectrum, StructuredParams,
};
pub use bijections::{
    bijection_forestbij, bijection_pr4, bijection_q2r5, bijections_pr123, build_families, verify_count_inequalities, BijectionRecord,
    ForestFamilies, InequalityReport,
};
pub use lefschetz::{
    catalecticant_matrix, check_degree_one_lefschetz, graded_basis, hilbert_function, higher_hessian, slp_check,
    GradedBasis, HilbertProfile, SlpReport,
};
