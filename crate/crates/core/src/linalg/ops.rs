//! Kronecker algebra on dense operators: products, site permutations,
//! partial traces and the operator-Schmidt reshuffle.

use num_traits::Zero;

use super::matrix::ComplexMatrix;
use super::space::{max_dim, Cut, TensorSpace};
use crate::error::{Error, Result};
use crate::scalar::{Real, C};

/// Kronecker product `a ⊗ b`.
pub fn kron<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    let max = max_dim();
    let rows = a.rows().checked_mul(b.rows()).filter(|&r| r <= max);
    let cols = a.cols().checked_mul(b.cols()).filter(|&c| c <= max);
    let (Some(rows), Some(cols)) = (rows, cols) else {
        return Err(Error::SizeLimit {
            requested: a.rows().saturating_mul(b.rows()).max(a.cols().saturating_mul(b.cols())),
            max,
        });
    };
    let (br, bc) = b.shape();
    Ok(ComplexMatrix::from_fn(rows, cols, |i, j| a[(i / br, j / bc)] * b[(i % br, j % bc)]))
}

/// Left-associated Kronecker product of a non-empty list.
pub fn kron_all<T: Real>(factors: &[ComplexMatrix<T>]) -> Result<ComplexMatrix<T>> {
    let (first, rest) = factors
        .split_first()
        .ok_or_else(|| Error::Argument("kron_all of an empty factor list".into()))?;
    rest.iter().try_fold(first.clone(), |acc, f| kron(&acc, f))
}

/// `I ⊗ … ⊗ a ⊗ … ⊗ I` with `a` at `site`.
pub fn embed_site<T: Real>(
    a: &ComplexMatrix<T>,
    space: &TensorSpace,
    site: usize,
) -> Result<ComplexMatrix<T>> {
    space.check_site(site)?;
    if a.shape() != (space.dim(site), space.dim(site)) {
        return Err(Error::Shape(format!(
            "site {} operator is {}×{}, subsystem dimension is {}",
            site + 1,
            a.rows(),
            a.cols(),
            space.dim(site)
        )));
    }
    let after: usize = space.dims()[site + 1..].iter().product();
    let m = space.dim(site);
    let total = space.total();
    Ok(ComplexMatrix::from_fn(total, total, |i, j| {
        let (io, ir) = (i / (m * after), i % after);
        let (jo, jr) = (j / (m * after), j % after);
        if io != jo || ir != jr {
            return C::zero();
        }
        a[((i / after) % m, (j / after) % m)]
    }))
}

fn check_operator<T: Real>(m: &ComplexMatrix<T>, space: &TensorSpace, what: &str) -> Result<()> {
    if m.shape() != (space.total(), space.total()) {
        return Err(Error::Shape(format!(
            "{what}: operator is {}×{}, space {space} needs {}×{}",
            m.rows(),
            m.cols(),
            space.total(),
            space.total()
        )));
    }
    Ok(())
}

/// For each flat index of the permuted space, the flat index in the original.
fn permutation_table(space: &TensorSpace, order: &[usize]) -> Vec<usize> {
    let dims = space.dims();
    let n = dims.len();
    // stride of each original site
    let mut stride = vec![1usize; n];
    for k in (0..n - 1).rev() {
        stride[k] = stride[k + 1] * dims[k + 1];
    }
    let new_dims: Vec<usize> = order.iter().map(|&k| dims[k]).collect();
    let mut table = Vec::with_capacity(space.total());
    let mut digits = vec![0usize; n];
    for _ in 0..space.total() {
        table.push(digits.iter().zip(order).map(|(&d, &k)| d * stride[k]).sum());
        for pos in (0..n).rev() {
            digits[pos] += 1;
            if digits[pos] < new_dims[pos] {
                break;
            }
            digits[pos] = 0;
        }
    }
    table
}

fn check_order(space: &TensorSpace, order: &[usize]) -> Result<()> {
    let mut seen = vec![false; space.len()];
    if order.len() != space.len() {
        return Err(Error::Argument(format!(
            "site order has {} entries for {} subsystems",
            order.len(),
            space.len()
        )));
    }
    for &k in order {
        space.check_site(k)?;
        if std::mem::replace(&mut seen[k], true) {
            return Err(Error::Argument(format!("site {} repeated in order", k + 1)));
        }
    }
    Ok(())
}

/// Reorders the tensor factors: site `i` of the result is site `order[i]` of `m`.
pub fn permute_sites<T: Real>(
    m: &ComplexMatrix<T>,
    space: &TensorSpace,
    order: &[usize],
) -> Result<ComplexMatrix<T>> {
    check_operator(m, space, "permute_sites")?;
    check_order(space, order)?;
    if order.iter().enumerate().all(|(i, &k)| i == k) {
        return Ok(m.clone());
    }
    let table = permutation_table(space, order);
    let n = space.total();
    Ok(ComplexMatrix::from_fn(n, n, |i, j| m[(table[i], table[j])]))
}

/// Traces out every subsystem not listed in `keep`; the kept sites appear
/// in ascending order in the result.
pub fn partial_trace_sites<T: Real>(
    m: &ComplexMatrix<T>,
    space: &TensorSpace,
    keep: &[usize],
) -> Result<ComplexMatrix<T>> {
    check_operator(m, space, "partial_trace")?;
    let mut keep: Vec<usize> = keep.to_vec();
    keep.sort_unstable();
    keep.dedup();
    if keep.is_empty() {
        return Err(Error::Argument("partial trace must keep at least one subsystem".into()));
    }
    for &k in &keep {
        space.check_site(k)?;
    }
    let traced: Vec<usize> = (0..space.len()).filter(|k| !keep.contains(k)).collect();
    let order: Vec<usize> = keep.iter().chain(&traced).copied().collect();
    let moved = permute_sites(m, space, &order)?;
    let dk = space.dim_of(&keep);
    let de = space.dim_of(&traced);
    Ok(ComplexMatrix::from_fn(dk, dk, |i, j| {
        (0..de).fold(C::zero(), |acc, e| acc + moved[(i * de + e, j * de + e)])
    }))
}

/// Reduced operator on the single subsystem `keep`.
pub fn partial_trace<T: Real>(
    m: &ComplexMatrix<T>,
    space: &TensorSpace,
    keep: usize,
) -> Result<ComplexMatrix<T>> {
    partial_trace_sites(m, space, &[keep])
}

/// Operator-Schmidt rearrangement across `cut`.
///
/// Maps `Σ_r A_r ⊗ B_r` (with `A_r` on the left sites) to
/// `Σ_r vec(A_r) vec(B_r)ᵀ`, so the singular values of the result are the
/// operator Schmidt coefficients. `vec` is row-major.
pub fn reshuffle<T: Real>(
    u: &ComplexMatrix<T>,
    space: &TensorSpace,
    cut: &Cut,
) -> Result<ComplexMatrix<T>> {
    check_operator(u, space, "reshuffle")?;
    cut.check(space)?;
    let order: Vec<usize> = cut.left().iter().chain(cut.right()).copied().collect();
    let moved = permute_sites(u, space, &order)?;
    let dl = space.dim_of(cut.left());
    let dr = space.dim_of(cut.right());
    Ok(ComplexMatrix::from_fn(dl * dl, dr * dr, |a, b| {
        let (il, jl) = (a / dl, a % dl);
        let (ir, jr) = (b / dr, b % dr);
        moved[(il * dr + ir, jl * dr + jr)]
    }))
}

/// `ab − ba`.
pub fn commutator<T: Real>(a: &ComplexMatrix<T>, b: &ComplexMatrix<T>) -> Result<ComplexMatrix<T>> {
    a.ensure_square("commutator")?;
    a.ensure_same_shape(b, "commutator")?;
    Ok(&(a * b) - &(b * a))
}
