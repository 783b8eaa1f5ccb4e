//! Spectral calculus for self-adjoint matrices via cyclic complex Jacobi.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{cis, cr, Real, C};

const MAX_SWEEPS: usize = 64;

/// Relative Hermiticity tolerance: `‖M − M†‖_F ≤ 1e-8·max(1, ‖M‖_F)`.
pub const HERMITIAN_TOL: f64 = 1e-8;

/// Eigen-decomposition `m = V·diag(values)·V†` with ascending real eigenvalues.
#[derive(Debug, Clone)]
pub struct HermitianEigen<T: Real> {
    pub values: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> HermitianEigen<T> {
    /// `V·diag(f(λ))·V†`.
    pub fn map_spectrum(&self, f: impl Fn(T) -> C<T>) -> ComplexMatrix<T> {
        let v = &self.vectors;
        let n = v.rows();
        let fl: Vec<C<T>> = self.values.iter().map(|&l| f(l)).collect();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + v[(i, k)] * fl[k] * v[(j, k)].conj())
        })
    }

    pub fn reconstruct(&self) -> ComplexMatrix<T> {
        self.map_spectrum(cr)
    }
}

/// Validates Hermiticity within the relative tolerance `tol` and returns the
/// symmetrized matrix `(M + M†)/2`.
pub fn hermitian_part<T: Real>(m: &ComplexMatrix<T>, tol: T) -> Result<ComplexMatrix<T>> {
    m.ensure_square("Hermitian check")?;
    let dev = m.hermitian_deviation();
    let allowed = tol * m.frobenius_norm().max(T::one());
    if dev > allowed {
        return Err(Error::NotHermitian { deviation: dev.to_f64_lossy(), allowed: allowed.to_f64_lossy() });
    }
    Ok(m.symmetrized())
}

/// Dense Hermitian eigensolver.
pub fn hermitian_eig<T: Real>(m: &ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let a = hermitian_part(m, T::tol(HERMITIAN_TOL))?;
    jacobi(a)
}

/// `exp(i h)` for self-adjoint `h`.
pub fn matrix_exp_i<T: Real>(h: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    Ok(hermitian_eig(h)?.map_spectrum(cis))
}

fn jacobi<T: Real>(mut a: ComplexMatrix<T>) -> Result<HermitianEigen<T>> {
    let n = a.rows();
    let mut v = ComplexMatrix::<T>::identity(n);
    let eps = T::epsilon();
    let scale = a.frobenius_norm().max(T::min_positive_value());
    let mut converged = false;
    for _ in 0..MAX_SWEEPS {
        let off: T = (0..n)
            .flat_map(|p| (0..n).filter(move |&q| q != p).map(move |q| (p, q)))
            .map(|(p, q)| a[(p, q)].norm_sqr())
            .sum::<T>()
            .sqrt();
        if off <= eps * scale {
            converged = true;
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let g = a[(p, q)];
                let abs_g = g.norm();
                if abs_g == T::zero() {
                    continue;
                }
                let (app, aqq) = (a[(p, p)].re, a[(q, q)].re);
                if abs_g <= eps * T::lit(0.01) * (app.abs() + aqq.abs()) {
                    a[(p, q)] = C::zero();
                    a[(q, p)] = C::zero();
                    continue;
                }
                let phase = g / abs_g;
                let tau = (aqq - app) / (abs_g + abs_g);
                let t = if tau >= T::zero() {
                    T::one() / (tau + (T::one() + tau * tau).sqrt())
                } else {
                    -T::one() / (-tau + (T::one() + tau * tau).sqrt())
                };
                let cs = T::one() / (T::one() + t * t).sqrt();
                let sn = t * cs;
                let pc = phase.conj();
                // A ← A·J with J = [[c, s], [−s·ē, c·ē]] on (p, q)
                for k in 0..n {
                    let (akp, akq) = (a[(k, p)], a[(k, q)]);
                    a[(k, p)] = akp * cs - akq * pc * sn;
                    a[(k, q)] = akp * sn + akq * pc * cs;
                    let (vkp, vkq) = (v[(k, p)], v[(k, q)]);
                    v[(k, p)] = vkp * cs - vkq * pc * sn;
                    v[(k, q)] = vkp * sn + vkq * pc * cs;
                }
                // A ← J†·A
                for k in 0..n {
                    let (apk, aqk) = (a[(p, k)], a[(q, k)]);
                    a[(p, k)] = apk * cs - aqk * phase * sn;
                    a[(q, k)] = apk * sn + aqk * phase * cs;
                }
                a[(p, q)] = C::zero();
                a[(q, p)] = C::zero();
                a[(p, p)] = cr(a[(p, p)].re);
                a[(q, q)] = cr(a[(q, q)].re);
            }
        }
    }
    if !converged {
        return Err(Error::NoConvergence { routine: "Hermitian Jacobi", iterations: MAX_SWEEPS });
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| a[(i, i)].re.partial_cmp(&a[(j, j)].re).expect("finite eigenvalues"));
    let values = order.iter().map(|&i| a[(i, i)].re).collect();
    let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
    Ok(HermitianEigen { values, vectors })
}

/// `‖V†V − I‖_F`, used by tests and validation.
#[cfg(test)]
pub(crate) fn unitarity_defect_fro<T: Real>(v: &ComplexMatrix<T>) -> T {
    let g = &v.adjoint() * v;
    let n = g.rows();
    (&g - &ComplexMatrix::identity(n)).frobenius_norm()
}
