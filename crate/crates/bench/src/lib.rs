//! Fixed benchmark inputs shared by the criterion targets.

use forest_spectra::lefschetz::truncated_graphic_polynomial;
use forest_spectra::{complete_bipartite_graph, complete_graph, Graph, Polynomial};
use num_rational::BigRational;
use num_traits::One;

/// Graphs and forest component counts used for the Hessian benchmarks.
pub fn hessian_cases() -> Vec<(String, Graph, usize)> {
    vec![
        ("K5/k1".into(), complete_graph(5).unwrap(), 1),
        ("K6/k2".into(), complete_graph(6).unwrap(), 2),
        ("K33/k1".into(), complete_bipartite_graph(3, 3).unwrap(), 1),
        ("K34/k2".into(), complete_bipartite_graph(3, 4).unwrap(), 2),
    ]
}

/// Truncated graphic polynomials paired with the all-ones linear form.
pub fn slp_cases() -> Vec<(String, Polynomial, Vec<BigRational>)> {
    [
        ("K4/r3", complete_graph(4).unwrap(), 3),
        ("K5/r3", complete_graph(5).unwrap(), 3),
        ("K5/r4", complete_graph(5).unwrap(), 4),
        ("K23/r3", complete_bipartite_graph(2, 3).unwrap(), 3),
    ]
    .into_iter()
    .map(|(name, g, r)| {
        let phi = truncated_graphic_polynomial(&g, r).unwrap();
        let ones = vec![BigRational::one(); phi.nvars()];
        (name.to_string(), phi, ones)
    })
    .collect()
}
