//! Exact integer linear algebra: Smith normal form, homology of integer
//! chain complexes, and sublattices of `Z^k`.

mod homology;
mod matrix;
mod snf;
mod sparse;
mod sublattice;

pub use homology::{homology_at, homology_at_dense, AbelianGroupInvariants};
pub(crate) use homology::factorize;
pub use matrix::IntMatrix;
pub use snf::{invariant_factors, smith_normal_form, SmithDecomposition};
pub use sparse::{sparse_invariant_factors, sparse_rank, SparseMatrix};
pub use sublattice::Lattice;
