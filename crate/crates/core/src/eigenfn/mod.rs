//! Vertex functions, partial differences, the classification of three-valued
//! first-eigenvalue eigenfunctions, block decompositions and the counting
//! identities built on them.

mod blocks;
mod classify;
mod function;
mod identities;

pub use blocks::{block_decomposition, BlockDecomposition};
pub use classify::{
    canonical_function, classify_theorem1, form_applies, induced_values, ClassifiedForm, FormKind,
};
pub use function::{EigenCheck, PartialDifference, VertexFunction};
pub use identities::{
    cross_edge_count, cross_edges_formula, lemma5_audit, pairs_lower_bound, system1_census,
    system1_feasible_b, CensusOutcome, DiffCensus, Lemma5Audit, System1Equation,
};

pub(crate) use function::deposit;
