//! Dense complex linear algebra: Kronecker algebra, partial traces,
//! spectral routines, cross norms and the operator-Schmidt reshuffle.

mod eig;
mod expm;
mod matrix;
mod norm;
mod ops;
mod schur;
mod space;
mod svd;

pub use eig::{hermitian_eig, hermitian_part, matrix_exp_i, HermitianEigen, HERMITIAN_TOL};
#[cfg(test)]
pub(crate) use eig::unitarity_defect_fro;
pub use expm::expm;
pub use matrix::ComplexMatrix;
pub use norm::{norm, op_norm, NormKind};
pub use ops::{
    commutator, embed_site, kron, kron_all, partial_trace, partial_trace_sites, permute_sites,
    reshuffle,
};
pub use schur::{normal_eig, schur, NormalEigen, Schur};
pub use space::{max_dim, Cut, TensorSpace, DEFAULT_MAX_DIM, MAX_DIM_ENV};
pub use svd::{polar_unitary, singular_values, svd, Svd};
