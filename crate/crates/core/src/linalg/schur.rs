//! Complex Schur form by Hessenberg reduction and shifted QR, and the
//! eigen-decomposition of normal (in particular unitary) matrices built on it.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// `a = Q·T·Q†` with `Q` unitary and `T` upper triangular.
#[derive(Debug, Clone)]
pub struct Schur<T: Real> {
    pub q: ComplexMatrix<T>,
    pub t: ComplexMatrix<T>,
}

/// Eigen-decomposition of a normal matrix: `a = V·diag(values)·V†`.
#[derive(Debug, Clone)]
pub struct NormalEigen<T: Real> {
    pub values: Vec<C<T>>,
    pub vectors: ComplexMatrix<T>,
}

pub fn schur<T: Real>(a: &ComplexMatrix<T>) -> Result<Schur<T>> {
    a.ensure_square("Schur decomposition")?;
    let n = a.rows();
    let mut h = a.clone();
    let mut q = ComplexMatrix::<T>::identity(n);
    hessenberg(&mut h, &mut q);
    qr_iterate(&mut h, &mut q)?;
    Ok(Schur { q, t: h })
}

/// Eigenpairs of a normal matrix. The strictly upper part of the Schur factor
/// is discarded; for normal input it is at round-off level.
pub fn normal_eig<T: Real>(a: &ComplexMatrix<T>) -> Result<NormalEigen<T>> {
    let s = schur(a)?;
    Ok(NormalEigen { values: s.t.diag(), vectors: s.q })
}

fn hessenberg<T: Real>(h: &mut ComplexMatrix<T>, q: &mut ComplexMatrix<T>) {
    let n = h.rows();
    let two = T::lit(2.0);
    for k in 0..n.saturating_sub(2) {
        let x: Vec<C<T>> = (k + 1..n).map(|i| h[(i, k)]).collect();
        let xnorm = x.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if xnorm == T::zero() {
            continue;
        }
        let x0 = x[0];
        let phase = if x0.norm() > T::zero() { x0 / x0.norm() } else { C::new(T::one(), T::zero()) };
        let mut v = x;
        v[0] += phase * xnorm;
        let vnorm = v.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        if vnorm == T::zero() {
            continue;
        }
        for z in v.iter_mut() {
            *z /= vnorm;
        }
        // rows k+1..n: H ← (I − 2vv†)H
        for j in 0..n {
            let s = v.iter().enumerate().fold(C::zero(), |acc, (r, vr)| acc + vr.conj() * h[(k + 1 + r, j)]);
            for (r, vr) in v.iter().enumerate() {
                h[(k + 1 + r, j)] -= *vr * s * two;
            }
        }
        // columns k+1..n: H ← H(I − 2vv†), Q likewise
        for m in [&mut *h, &mut *q] {
            for i in 0..n {
                let s = v.iter().enumerate().fold(C::<T>::zero(), |acc, (r, vr)| acc + m[(i, k + 1 + r)] * *vr);
                for (r, vr) in v.iter().enumerate() {
                    m[(i, k + 1 + r)] -= s * vr.conj() * two;
                }
            }
        }
        for i in k + 2..n {
            h[(i, k)] = C::zero();
        }
    }
}

/// Complex Givens pair `(c, s)` with `[[c, s], [−s̄, c]]·[a; b] = [r; 0]`.
fn givens<T: Real>(a: C<T>, b: C<T>) -> (T, C<T>) {
    let (na, nb) = (a.norm(), b.norm());
    if nb == T::zero() {
        return (T::one(), C::zero());
    }
    if na == T::zero() {
        return (T::zero(), b.conj() / nb);
    }
    let r = na.hypot(nb);
    (na / r, (a / na) * b.conj() / r)
}

fn wilkinson_shift<T: Real>(h: &ComplexMatrix<T>, hi: usize) -> C<T> {
    let a = h[(hi - 1, hi - 1)];
    let b = h[(hi - 1, hi)];
    let c = h[(hi, hi - 1)];
    let d = h[(hi, hi)];
    let half = T::lit(0.5);
    let mean = (a + d) * half;
    let delta = (a - d) * half;
    let disc = (delta * delta + b * c).sqrt();
    let (m1, m2) = (mean + disc, mean - disc);
    if (m1 - d).norm() <= (m2 - d).norm() {
        m1
    } else {
        m2
    }
}

fn qr_iterate<T: Real>(h: &mut ComplexMatrix<T>, q: &mut ComplexMatrix<T>) -> Result<()> {
    let n = h.rows();
    if n < 2 {
        return Ok(());
    }
    let eps = T::epsilon();
    let max_iter = 60 * n;
    let mut hi = n - 1;
    let mut since_deflation = 0usize;
    let mut total = 0usize;
    let mut rots: Vec<(T, C<T>)> = Vec::with_capacity(n);
    while hi > 0 {
        let mut l = hi;
        while l > 0 {
            let scale = h[(l - 1, l - 1)].norm() + h[(l, l)].norm();
            let sub = h[(l, l - 1)].norm();
            if sub <= eps * scale || sub <= T::min_positive_value() {
                h[(l, l - 1)] = C::zero();
                break;
            }
            l -= 1;
        }
        if l == hi {
            hi -= 1;
            since_deflation = 0;
            continue;
        }
        since_deflation += 1;
        total += 1;
        if total > max_iter {
            return Err(Error::NoConvergence { routine: "complex Schur QR", iterations: total });
        }
        let mu = if since_deflation % 11 == 10 {
            // exceptional shift to break cycles
            h[(hi, hi)] + C::new(h[(hi, hi - 1)].norm() * T::lit(0.75), h[(hi, hi - 1)].norm() * T::lit(0.4))
        } else {
            wilkinson_shift(h, hi)
        };
        for i in l..=hi {
            h[(i, i)] -= mu;
        }
        rots.clear();
        for k in l..hi {
            let (cs, sn) = givens(h[(k, k)], h[(k + 1, k)]);
            for j in k..n {
                let (x, y) = (h[(k, j)], h[(k + 1, j)]);
                h[(k, j)] = x * cs + sn * y;
                h[(k + 1, j)] = -sn.conj() * x + y * cs;
            }
            h[(k + 1, k)] = C::zero();
            rots.push((cs, sn));
        }
        for (idx, &(cs, sn)) in rots.iter().enumerate() {
            let k = l + idx;
            for i in 0..=(k + 1) {
                let (x, y) = (h[(i, k)], h[(i, k + 1)]);
                h[(i, k)] = x * cs + y * sn.conj();
                h[(i, k + 1)] = -x * sn + y * cs;
            }
            for i in 0..n {
                let (x, y) = (q[(i, k)], q[(i, k + 1)]);
                q[(i, k)] = x * cs + y * sn.conj();
                q[(i, k + 1)] = -x * sn + y * cs;
            }
        }
        for i in l..=hi {
            h[(i, i)] += mu;
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::random::{haar_unitary, random_matrix, rng};

    type M = ComplexMatrix<f64>;

    fn strictly_lower_norm(t: &M) -> f64 {
        let n = t.rows();
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..i {
                s += t[(i, j)].norm_sqr();
            }
        }
        s.sqrt()
    }

    #[test]
    fn schur_of_general_matrices() {
        let mut r = rng(3);
        for n in [1usize, 2, 3, 5, 8, 16] {
            let a: M = random_matrix(&mut r, n, n);
            let s = schur(&a).unwrap();
            let back = &(&s.q * &s.t) * &s.q.adjoint();
            assert!((&back - &a).frobenius_norm() < 1e-12 * a.frobenius_norm());
            assert!(strictly_lower_norm(&s.t) == 0.0);
        }
    }

    #[test]
    fn unitary_eigenpairs() {
        let mut r = rng(5);
        for n in [2usize, 4, 8, 16, 32] {
            let u: M = haar_unitary(&mut r, n);
            let e = normal_eig(&u).unwrap();
            for (k, lam) in e.values.iter().enumerate() {
                assert!((lam.norm() - 1.0).abs() < 1e-12);
                let x = e.vectors.col(k);
                let ux = u.apply(&x);
                let res: f64 = ux.iter().zip(&x).map(|(a, b)| (a - lam * b).norm_sqr()).sum::<f64>().sqrt();
                assert!(res < 1e-12, "n={n} residual {res:e}");
            }
        }
    }

    #[test]
    fn degenerate_unitaries() {
        // permutation-like gates with repeated eigenvalues ±1
        for u in [crate::gates::cnot::<f64>(), crate::gates::swap(), crate::gates::cz(), M::identity(4).scale_real(-1.0)] {
            let e = normal_eig(&u).unwrap();
            let back = &(&e.vectors * &M::from_diag(&e.values)) * &e.vectors.adjoint();
            assert!((&back - &u).frobenius_norm() < 1e-13);
        }
    }
}
