//! Singular value decomposition by one-sided (Hestenes) Jacobi rotations.
//!
//! One-sided Jacobi resolves small singular values to high relative
//! accuracy, which the Schmidt-rank decisions rely on: exact zeros come out
//! at the level of machine epsilon times the largest singular value.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

const MAX_SWEEPS: usize = 80;

/// Thin SVD `a = U·diag(σ)·V†`, σ descending, `k = min(rows, cols)` columns.
///
/// Left singular vectors belonging to zero singular values are zero columns.
#[derive(Debug, Clone)]
pub struct Svd<T: Real> {
    pub u: ComplexMatrix<T>,
    pub sigma: Vec<T>,
    pub v: ComplexMatrix<T>,
}

impl<T: Real> Svd<T> {
    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        let (m, n, k) = (self.u.rows(), self.v.rows(), self.sigma.len());
        ComplexMatrix::from_fn(m, n, |i, j| {
            (0..k).fold(C::zero(), |acc, r| acc + self.u[(i, r)] * self.sigma[r] * self.v[(j, r)].conj())
        })
    }
}

pub fn svd<T: Real>(a: &ComplexMatrix<T>) -> Result<Svd<T>> {
    if a.rows() < a.cols() {
        let t = svd_tall(&a.adjoint())?;
        return Ok(Svd { u: t.v, sigma: t.sigma, v: t.u });
    }
    svd_tall(a)
}

/// Singular values only, descending.
pub fn singular_values<T: Real>(a: &ComplexMatrix<T>) -> Result<Vec<T>> {
    Ok(svd(a)?.sigma)
}

fn dot<T: Real>(x: &[C<T>], y: &[C<T>]) -> C<T> {
    x.iter().zip(y).fold(C::zero(), |acc, (a, b)| acc + a.conj() * *b)
}

fn norm_sqr<T: Real>(x: &[C<T>]) -> T {
    x.iter().map(|z| z.norm_sqr()).sum()
}

/// Rotates columns `(x, y)` ← `(c·x − s·ē·y, s·e·x + c·y)`.
fn rotate<T: Real>(x: &mut [C<T>], y: &mut [C<T>], cs: T, sn: T, e: C<T>) {
    let ec = e.conj();
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        let (a, b) = (*xi, *yi);
        *xi = a * cs - b * ec * sn;
        *yi = a * e * sn + b * cs;
    }
}

fn svd_tall<T: Real>(a: &ComplexMatrix<T>) -> Result<Svd<T>> {
    let (m, n) = a.shape();
    let mut w: Vec<Vec<C<T>>> = (0..n).map(|j| a.col(j)).collect();
    let mut v: Vec<Vec<C<T>>> =
        (0..n).map(|j| (0..n).map(|i| if i == j { C::new(T::one(), T::zero()) } else { C::zero() }).collect()).collect();
    let eps = T::epsilon() * T::from_usize_lossy(m.max(2));
    // columns at roundoff level of the whole matrix cannot be orthogonalized further
    let floor = {
        let f = T::epsilon() * a.frobenius_norm();
        f * f
    };
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let mut rotated = false;
        for i in 0..n {
            for j in i + 1..n {
                let alpha = norm_sqr(&w[i]);
                let beta = norm_sqr(&w[j]);
                if alpha <= floor || beta <= floor {
                    continue;
                }
                let gamma = dot(&w[i], &w[j]);
                let g = gamma.norm();
                if g <= eps * (alpha * beta).sqrt() {
                    continue;
                }
                rotated = true;
                let e = gamma / g;
                let zeta = (beta - alpha) / (g + g);
                let t = if zeta >= T::zero() {
                    T::one() / (zeta + (T::one() + zeta * zeta).sqrt())
                } else {
                    -T::one() / (-zeta + (T::one() + zeta * zeta).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let (lo, hi) = w.split_at_mut(j);
                rotate(&mut lo[i], &mut hi[0], cs, sn, e);
                let (lo, hi) = v.split_at_mut(j);
                rotate(&mut lo[i], &mut hi[0], cs, sn, e);
            }
        }
        if !rotated {
            converged = true;
            break;
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "one-sided Jacobi SVD", iterations: MAX_SWEEPS });
    }
    let norms: Vec<T> = w.iter().map(|c| norm_sqr(c).sqrt()).collect();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&x, &y| norms[y].partial_cmp(&norms[x]).expect("finite singular values"));
    let sigma: Vec<T> = order.iter().map(|&k| norms[k]).collect();
    let u = ComplexMatrix::from_fn(m, n, |i, r| {
        let k = order[r];
        if norms[k] > T::zero() {
            w[k][i] / norms[k]
        } else {
            C::zero()
        }
    });
    let vm = ComplexMatrix::from_fn(n, n, |i, r| v[order[r]][i]);
    Ok(Svd { u, sigma, v: vm })
}

/// Unitary factor `W = U·V†` of the polar decomposition of a square matrix,
/// together with the ratio of smallest to largest singular value.
pub fn polar_unitary<T: Real>(a: &ComplexMatrix<T>) -> Result<(ComplexMatrix<T>, T)> {
    a.ensure_square("polar decomposition")?;
    let s = svd(a)?;
    let largest = s.sigma[0];
    let smallest = *s.sigma.last().expect("non-empty");
    let ratio = if largest > T::zero() { smallest / largest } else { T::zero() };
    Ok((&s.u * &s.v.adjoint(), ratio))
}
