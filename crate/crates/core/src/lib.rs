//! Separation of multipartite unitary gates into tensor products of local
//! gates.
//!
//! The crate decides whether a gate `U` on `ℋ_1 ⊗ … ⊗ ℋ_n` factors as
//! `λ·U_1 ⊗ … ⊗ U_n`, extracts the local factors and the global phase, and
//! for non-separable gates computes local approximations together with
//! certified distance bounds.
//!
//! * [`linalg`]: dense complex kernel (Kronecker algebra, partial traces,
//!   Jacobi eigen/SVD, Schur form, cross norms, reshuffle).
//! * [`generator`]: unitary gates and principal generators `U = exp(iH)`.
//! * [`exact`]: exact criteria for rank-one tensor terms, commuting sums,
//!   the qubit block-structure check and the Schmidt-rank oracle.
//! * [`approx`]: projection onto local Hamiltonians, distance bounds and
//!   the eigenvector-residual certificate.
//!
//! All numerical code is generic over [`Real`] (`f32` or `f64`); the
//! aliases below fix the scalar to `f64`.

pub mod approx;
pub mod error;
pub mod exact;
pub mod gates;
pub mod generator;
pub mod linalg;
pub mod random;
pub mod scalar;

pub use error::{Error, Result};
pub use scalar::{cis, Real, C};

pub type Complex64 = num_complex::Complex<f64>;
pub type Matrix = linalg::ComplexMatrix<f64>;
pub type Matrix32 = linalg::ComplexMatrix<f32>;
pub type Gate = generator::UnitaryGate<f64>;
pub type Gate32 = generator::UnitaryGate<f32>;
pub type Generator = generator::HermitianGenerator<f64>;
pub type Term = exact::TensorTerm<f64>;
pub type TermSum = exact::TensorTermSum<f64>;
pub type Separation = exact::SeparationResult<f64>;
pub type Family = approx::LocalHamiltonianFamily<f64>;
pub type Certificate = approx::ApproxCertificate<f64>;
pub type ApproxSeparation = approx::ApproxSeparationResult<f64>;
