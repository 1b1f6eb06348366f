//! Exact tools for equitable 2-partitions of Johnson graphs `J(n, w)` whose
//! quotient matrix has the second eigenvalue `λ2(n, w) = (w-2)(n-w-2) - 2`.
//!
//! * [`johnson`]: vertices, colex ranking, adjacency and the spectrum.
//! * [`partition`]: two-cell partitions, equitability, admissible matrices.
//! * [`eigenfn`]: vertex functions, partial differences and their
//!   classification, block decompositions, counting identities.
//! * [`constructions`]: the four known infinite families and prefix patterns.
//! * [`canon`]: canonical forms under coordinate permutations and cell swap.
//! * [`search`]: exhaustive enumeration and the classification audits.
//! * [`io`]: JSON and binary file formats.
//!
//! All arithmetic is exact.

pub mod canon;
pub mod constructions;
pub mod eigenfn;
pub mod error;
pub mod io;
pub mod johnson;
pub mod partition;
pub mod search;

pub use error::{Error, Result};
pub use johnson::{binomial, GraphParams, JohnsonGraph, Vertex, VertexIndex};
pub use partition::{
    admissible_matrices, quotient_eigenvalues, AdmissibleMatrix, AntipodalCheck, Equitability,
    MatrixFamily, QuotientMatrix, TwoPartition,
};
