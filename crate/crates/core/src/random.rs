//! Seeded random draws: Gaussian matrices, Hermitian generators, Haar
//! unitaries and product unitaries.
//!
//! All draws come from ChaCha8 seeded with a `u64`, so identical seeds give
//! bit-identical matrices on every platform.

use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;

use crate::error::Result;
use crate::linalg::{kron_all, ComplexMatrix, TensorSpace};
use crate::scalar::{Real, C};

pub type SeededRng = ChaCha8Rng;

pub fn rng(seed: u64) -> SeededRng {
    ChaCha8Rng::seed_from_u64(seed)
}

fn gaussian<T: Real, R: Rng + ?Sized>(rng: &mut R) -> C<T> {
    let re: f64 = rng.sample(StandardNormal);
    let im: f64 = rng.sample(StandardNormal);
    C::new(T::lit(re), T::lit(im))
}

/// Matrix of i.i.d. standard complex Gaussian entries.
pub fn random_matrix<T: Real, R: Rng + ?Sized>(rng: &mut R, rows: usize, cols: usize) -> ComplexMatrix<T> {
    ComplexMatrix::from_fn(rows, cols, |_, _| gaussian(rng))
}

/// Random self-adjoint matrix with Frobenius norm `scale` (so its operator
/// norm is at most `scale`).
pub fn random_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix<T> {
    let g: ComplexMatrix<T> = random_matrix(rng, n, n);
    let h = g.symmetrized();
    let f = h.frobenius_norm();
    if f == T::zero() {
        return h;
    }
    h.scale_real(T::lit(scale) / f)
}

/// Traceless variant of [`random_hermitian`].
pub fn random_traceless_hermitian<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize, scale: f64) -> ComplexMatrix<T> {
    let h: ComplexMatrix<T> = random_hermitian(rng, n, 1.0);
    let shift = h.trace().re / T::from_usize_lossy(n);
    let h = &h - &ComplexMatrix::identity(n).scale_real(shift);
    let f = h.frobenius_norm();
    if f == T::zero() {
        return h;
    }
    h.scale_real(T::lit(scale) / f)
}

/// Haar-distributed unitary: QR of a complex Gaussian matrix with the `R`
/// diagonal made real positive (modified Gram–Schmidt with one
/// re-orthogonalization pass).
pub fn haar_unitary<T: Real, R: Rng + ?Sized>(rng: &mut R, n: usize) -> ComplexMatrix<T> {
    let g: ComplexMatrix<T> = random_matrix(rng, n, n);
    let mut cols: Vec<Vec<C<T>>> = (0..n).map(|j| g.col(j)).collect();
    for j in 0..n {
        for _ in 0..2 {
            for k in 0..j {
                let proj = cols[k].iter().zip(&cols[j]).fold(C::<T>::zero(), |acc, (a, b)| acc + a.conj() * *b);
                let (done, rest) = cols.split_at_mut(j);
                for (x, q) in rest[0].iter_mut().zip(&done[k]) {
                    *x -= proj * *q;
                }
            }
        }
        let nrm = cols[j].iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        for x in cols[j].iter_mut() {
            *x /= nrm;
        }
    }
    ComplexMatrix::from_fn(n, n, |i, j| cols[j][i])
}

/// Haar-random local unitaries on each site of `space` and their tensor product.
pub fn random_product_unitary<T: Real, R: Rng + ?Sized>(
    rng: &mut R,
    space: &TensorSpace,
) -> Result<(ComplexMatrix<T>, Vec<ComplexMatrix<T>>)> {
    let factors: Vec<ComplexMatrix<T>> = space.dims().iter().map(|&d| haar_unitary(rng, d)).collect();
    Ok((kron_all(&factors)?, factors))
}
