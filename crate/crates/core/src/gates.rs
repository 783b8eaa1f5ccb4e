//! Standard gates used as fixtures and by the CLI corpus.

use num_traits::{One, Zero};

use crate::linalg::ComplexMatrix;
use crate::scalar::{cis, Real, C};

fn real<T: Real>(n: usize, data: &[f64]) -> ComplexMatrix<T> {
    ComplexMatrix::from_real(n, n, data).expect("static gate table")
}

/// Permutation matrix sending basis state `j` to `perm[j]`.
fn permutation<T: Real>(perm: &[usize]) -> ComplexMatrix<T> {
    let n = perm.len();
    ComplexMatrix::from_fn(n, n, |i, j| if perm[j] == i { C::one() } else { C::zero() })
}

pub fn pauli_x<T: Real>() -> ComplexMatrix<T> {
    real(2, &[0.0, 1.0, 1.0, 0.0])
}

pub fn pauli_y<T: Real>() -> ComplexMatrix<T> {
    let i = C::new(T::zero(), T::one());
    ComplexMatrix::from_fn(2, 2, |r, c| match (r, c) {
        (0, 1) => -i,
        (1, 0) => i,
        _ => C::zero(),
    })
}

pub fn pauli_z<T: Real>() -> ComplexMatrix<T> {
    real(2, &[1.0, 0.0, 0.0, -1.0])
}

pub fn hadamard<T: Real>() -> ComplexMatrix<T> {
    let h = std::f64::consts::FRAC_1_SQRT_2;
    real(2, &[h, h, h, -h])
}

/// Phase gate `diag(1, i)`.
pub fn s_gate<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_diag(&[C::one(), C::new(T::zero(), T::one())])
}

/// `diag(1, e^{iπ/4})`.
pub fn t_gate<T: Real>() -> ComplexMatrix<T> {
    ComplexMatrix::from_diag(&[C::one(), cis(T::FRAC_PI_4())])
}

/// Controlled-X with the first (most significant) qubit as control.
pub fn cnot<T: Real>() -> ComplexMatrix<T> {
    permutation(&[0, 1, 3, 2])
}

pub fn cz<T: Real>() -> ComplexMatrix<T> {
    real(4, &[1., 0., 0., 0., 0., 1., 0., 0., 0., 0., 1., 0., 0., 0., 0., -1.])
}

pub fn swap<T: Real>() -> ComplexMatrix<T> {
    permutation(&[0, 2, 1, 3])
}

pub fn iswap<T: Real>() -> ComplexMatrix<T> {
    let i = C::new(T::zero(), T::one());
    ComplexMatrix::from_fn(4, 4, |r, c| match (r, c) {
        (0, 0) | (3, 3) => C::one(),
        (1, 2) | (2, 1) => i,
        _ => C::zero(),
    })
}

/// Doubly controlled X on the last qubit.
pub fn toffoli<T: Real>() -> ComplexMatrix<T> {
    permutation(&[0, 1, 2, 3, 4, 5, 7, 6])
}
