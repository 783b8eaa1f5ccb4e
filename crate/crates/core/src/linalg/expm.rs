use super::matrix::ComplexMatrix;
use crate::scalar::{Real, C};

/// Exponential of a general square matrix by scaling and squaring with a
/// Taylor series.
///
/// Used where the argument is not self-adjoint (integral identities, test
/// oracles); self-adjoint generators go through the spectral route in
/// [`super::eig::matrix_exp_i`].
pub fn expm<T: Real>(a: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    assert!(a.is_square(), "expm needs a square matrix");
    let n = a.rows();
    let norm = a.frobenius_norm();
    let mut squarings = 0i32;
    if norm > T::lit(0.25) {
        squarings = (norm / T::lit(0.25)).log2().ceil().to_i32().unwrap_or(0).max(0);
    }
    let scaled = a.scale_real(T::lit(2f64.powi(-squarings)));
    let mut result = ComplexMatrix::identity(n);
    let mut term = ComplexMatrix::identity(n);
    for k in 1..=40usize {
        term = (&term * &scaled).scale(C::new(T::one() / T::from_usize_lossy(k), T::zero()));
        result = &result + &term;
        if term.frobenius_norm() <= T::epsilon() * result.frobenius_norm() * T::lit(1e-2) {
            break;
        }
    }
    for _ in 0..squarings {
        result = &result * &result;
    }
    result
}
