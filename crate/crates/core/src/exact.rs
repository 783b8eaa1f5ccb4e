//! Exact separability: δ-coefficients of rank-one tensor terms, the
//! commuting-sum criterion, the qubit block-structure check and the
//! operator-Schmidt decision oracle with factor extraction.

use std::fmt;

use num_traits::One;

use crate::error::{Error, Result};
use crate::generator::{HermitianGenerator, UnitaryGate};
use crate::linalg::{
    commutator, embed_site, hermitian_part, kron_all, matrix_exp_i, op_norm, partial_trace_sites,
    permute_sites, polar_unitary, reshuffle, svd, ComplexMatrix, Cut, TensorSpace, HERMITIAN_TOL,
};
use crate::scalar::{cr, Real, C};

pub const SCALAR_TOL: f64 = 1e-9;
pub const SCHMIDT_TOL: f64 = 1e-9;
pub const COMMUTE_TOL: f64 = 1e-9;
pub const BLOCK_TOL: f64 = 1e-9;
pub const RESIDUAL_TOL: f64 = 1e-8;

/// Minimum `|tr(U·P†)|/d` accepted when reading off the global phase of a
/// separable reconstruction.
const MIN_OVERLAP: f64 = 0.9;

/// Relative tolerances used by the exact criteria.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances<T: Real> {
    /// `‖A − (trA/m)I‖_F ≤ scalar·max(1, ‖A‖_F)` counts as a multiple of `I`.
    pub scalar: T,
    /// Schmidt coefficients `≤ schmidt·σ_max` count as zero.
    pub schmidt: T,
    /// `‖[T_k, T_l]‖_F ≤ commute·‖T_k‖_F·‖T_l‖_F` counts as commuting.
    pub commute: T,
    /// Block tolerance of the qubit structure check, relative to `max(1, ‖H‖_F)`.
    pub block: T,
    /// Largest reconstruction residual `‖U − λ⊗U_k‖_o` accepted as separable.
    pub residual: T,
}

impl<T: Real> Default for Tolerances<T> {
    fn default() -> Self {
        Self {
            scalar: T::tol(SCALAR_TOL),
            schmidt: T::tol(SCHMIDT_TOL),
            commute: T::tol(COMMUTE_TOL),
            block: T::tol(BLOCK_TOL),
            residual: T::tol(RESIDUAL_TOL),
        }
    }
}

/// Self-adjoint product operator `A^{(1)} ⊗ … ⊗ A^{(n)}`.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorTerm<T: Real> {
    factors: Vec<ComplexMatrix<T>>,
    space: TensorSpace,
}

impl<T: Real> TensorTerm<T> {
    pub fn new(factors: Vec<ComplexMatrix<T>>, space: TensorSpace) -> Result<Self> {
        if factors.len() != space.len() {
            return Err(Error::Argument(format!(
                "{} factors for {} subsystems",
                factors.len(),
                space.len()
            )));
        }
        let factors = factors
            .iter()
            .enumerate()
            .map(|(k, a)| {
                if a.shape() != (space.dim(k), space.dim(k)) {
                    return Err(Error::Shape(format!(
                        "factor {} is {}×{}, subsystem dimension is {}",
                        k + 1,
                        a.rows(),
                        a.cols(),
                        space.dim(k)
                    )));
                }
                hermitian_part(a, T::tol(HERMITIAN_TOL))
            })
            .collect::<Result<_>>()?;
        Ok(Self { factors, space })
    }

    /// Infers the space from the factor sizes.
    pub fn from_factors(factors: Vec<ComplexMatrix<T>>) -> Result<Self> {
        let space = TensorSpace::new(factors.iter().map(ComplexMatrix::rows).collect())?;
        Self::new(factors, space)
    }

    pub fn factors(&self) -> &[ComplexMatrix<T>] {
        &self.factors
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> Result<ComplexMatrix<T>> {
        kron_all(&self.factors)
    }
}

/// `H = Σ_i T_i` with every term on the same space.
#[derive(Debug, Clone, PartialEq)]
pub struct TensorTermSum<T: Real> {
    terms: Vec<TensorTerm<T>>,
    space: TensorSpace,
}

impl<T: Real> TensorTermSum<T> {
    pub fn new(terms: Vec<TensorTerm<T>>) -> Result<Self> {
        let space = terms
            .first()
            .ok_or_else(|| Error::Argument("a tensor-term sum needs at least one term".into()))?
            .space()
            .clone();
        if let Some(k) = terms.iter().position(|t| t.space() != &space) {
            return Err(Error::Argument(format!(
                "term {} lives on {}, expected {space}",
                k + 1,
                terms[k].space()
            )));
        }
        Ok(Self { terms, space })
    }

    pub fn terms(&self) -> &[TensorTerm<T>] {
        &self.terms
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn matrix(&self) -> Result<ComplexMatrix<T>> {
        let n = self.space.total();
        self.terms.iter().try_fold(ComplexMatrix::zeros(n, n), |acc, t| Ok(&acc + &t.matrix()?))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Separable,
    NotSeparable,
    /// Only produced by sufficient-only criteria.
    Inconclusive,
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Separable => "Separable",
            Verdict::NotSeparable => "NotSeparable",
            Verdict::Inconclusive => "Inconclusive",
        })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    RankOneTerm,
    CommutingSum,
    StructureCheck,
    SchmidtOracle,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Debug::fmt(self, f)
    }
}

/// Operator Schmidt coefficients of a gate across one cut.
#[derive(Debug, Clone, PartialEq)]
pub struct SchmidtDecomposition<T: Real> {
    pub cut: Cut,
    pub rank: usize,
    /// All singular values of the reshuffled operator, descending.
    pub coefficients: Vec<T>,
}

#[derive(Debug, Clone)]
pub struct SeparationResult<T: Real> {
    pub verdict: Verdict,
    pub method: Method,
    /// Local unitaries, one per subsystem, present iff separable.
    pub factors: Option<Vec<UnitaryGate<T>>>,
    /// Unit-modulus `λ` with `U ≈ λ·⊗U_k`.
    pub global_phase: Option<C<T>>,
    /// `‖U − λ⊗U_k‖_o` when a reconstruction was formed.
    pub residual: Option<T>,
    /// Cut at which the oracle found Schmidt rank above one.
    pub violating_cut: Option<Cut>,
    /// Cuts examined by the oracle.
    pub schmidt: Vec<SchmidtDecomposition<T>>,
    /// Which hypothesis failed, for non-separable or inconclusive outcomes.
    pub note: Option<String>,
}

impl<T: Real> SeparationResult<T> {
    fn negative(verdict: Verdict, method: Method, note: impl Into<String>) -> Self {
        Self {
            verdict,
            method,
            factors: None,
            global_phase: None,
            residual: None,
            violating_cut: None,
            schmidt: Vec::new(),
            note: Some(note.into()),
        }
    }

    pub fn is_separable(&self) -> bool {
        self.verdict == Verdict::Separable
    }

    /// `λ·⊗U_k` for a separable result.
    pub fn reconstruct(&self) -> Option<ComplexMatrix<T>> {
        let factors: Vec<ComplexMatrix<T>> = self.factors.as_ref()?.iter().map(|g| g.matrix().clone()).collect();
        let p = kron_all(&factors).ok()?;
        Some(p.scale(self.global_phase?))
    }
}

/// `Some(tr(a)/m)` when `a` is a real multiple of the identity within the
/// relative tolerance `tol`.
pub fn is_scalar<T: Real>(a: &ComplexMatrix<T>, tol: T) -> Option<T> {
    if !a.is_square() {
        return None;
    }
    let m = a.rows();
    let lambda = a.trace().re / T::from_usize_lossy(m);
    let dev = (a - &ComplexMatrix::identity(m).scale_real(lambda)).frobenius_norm();
    (dev <= tol * a.frobenius_norm().max(T::one())).then_some(lambda)
}

/// δ-coefficients of a product term: `∏_{k≠j} λ_k` for the unique factor that
/// is not a multiple of the identity, `0` for scalar factors. `None` when two
/// or more factors are non-scalar.
pub fn delta_coeffs<T: Real>(term: &TensorTerm<T>, scalar_tol: T) -> Option<Vec<T>> {
    let scalars: Vec<Option<T>> = term.factors().iter().map(|a| is_scalar(a, scalar_tol)).collect();
    if scalars.iter().filter(|s| s.is_none()).count() > 1 {
        return None;
    }
    Some(
        scalars
            .iter()
            .enumerate()
            .map(|(j, s)| match s {
                Some(_) => T::zero(),
                None => scalars
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != j)
                    .map(|(_, l)| l.expect("only one non-scalar factor"))
                    .fold(T::one(), |acc, l| acc * l),
            })
            .collect(),
    )
}

/// Global phase `λ = φ/|φ|`, `φ = tr(U·P†)/d`, and `|φ|`.
fn overlap_phase<T: Real>(u: &ComplexMatrix<T>, product: &ComplexMatrix<T>) -> (C<T>, T) {
    let d = T::from_usize_lossy(u.rows());
    let phi = product.inner(u) / d;
    let mag = phi.norm();
    if mag == T::zero() {
        (C::one(), mag)
    } else {
        (phi / mag, mag)
    }
}

fn single_site_space(d: usize) -> TensorSpace {
    TensorSpace::with_limit(vec![d], usize::MAX).expect("site dimension ≥ 2")
}

/// Packages factors whose tensor product should reproduce `u` up to phase.
fn finish_separable<T: Real>(
    u: &ComplexMatrix<T>,
    factors: Vec<ComplexMatrix<T>>,
    method: Method,
    tol: &Tolerances<T>,
) -> Result<SeparationResult<T>> {
    let product = kron_all(&factors)?;
    let (lambda, overlap) = overlap_phase(u, &product);
    if overlap < T::lit(MIN_OVERLAP) {
        return Err(Error::Internal(format!(
            "{method}: product overlap {:.3e} too small for a separable reconstruction",
            overlap.to_f64_lossy()
        )));
    }
    let residual = op_norm(&(u - &product.scale(lambda)));
    let gates = factors
        .into_iter()
        .map(|f| {
            let space = single_site_space(f.rows());
            UnitaryGate::unchecked(f, space)
        })
        .collect::<Result<Vec<_>>>()?;
    let mut out = SeparationResult {
        verdict: Verdict::Separable,
        method,
        factors: Some(gates),
        global_phase: Some(lambda),
        residual: Some(residual),
        violating_cut: None,
        schmidt: Vec::new(),
        note: None,
    };
    if !(residual <= tol.residual) {
        out.verdict = Verdict::Inconclusive;
        out.factors = None;
        out.global_phase = None;
        out.note = Some(format!(
            "reconstruction residual {:.3e} exceeds {:.3e}",
            residual.to_f64_lossy(),
            tol.residual.to_f64_lossy()
        ));
    }
    Ok(out)
}

/// Separation of `U = exp(i t A_1⊗…⊗A_n)` through the δ-coefficients:
/// `U = λ·⊗_j exp(i t δ(A_j) A_j)` when at most one factor is non-scalar,
/// otherwise not separable.
pub fn separate_rank_one<T: Real>(term: &TensorTerm<T>, t: T) -> Result<SeparationResult<T>> {
    separate_rank_one_with(term, t, &Tolerances::default())
}

pub fn separate_rank_one_with<T: Real>(
    term: &TensorTerm<T>,
    t: T,
    tol: &Tolerances<T>,
) -> Result<SeparationResult<T>> {
    let Some(delta) = delta_coeffs(term, tol.scalar) else {
        return Ok(SeparationResult::negative(
            Verdict::NotSeparable,
            Method::RankOneTerm,
            "two or more tensor factors are not multiples of the identity",
        ));
    };
    let u = matrix_exp_i(&term.matrix()?.scale(cr(t)))?;
    let factors = term
        .factors()
        .iter()
        .zip(&delta)
        .map(|(a, &d)| matrix_exp_i(&a.scale(cr(t * d))))
        .collect::<Result<Vec<_>>>()?;
    finish_separable(&u, factors, Method::RankOneTerm, tol)
}

/// Sufficient criterion for `U = exp(i t Σ_i T_i)`: pairwise commuting terms
/// each with at most one non-scalar factor. Site `j` then carries
/// `∏_i exp(i t δ(A_i^{(j)}) A_i^{(j)})`.
pub fn separate_sum<T: Real>(tsum: &TensorTermSum<T>, t: T) -> Result<SeparationResult<T>> {
    separate_sum_with(tsum, t, &Tolerances::default())
}

pub fn separate_sum_with<T: Real>(
    tsum: &TensorTermSum<T>,
    t: T,
    tol: &Tolerances<T>,
) -> Result<SeparationResult<T>> {
    if let [single] = tsum.terms() {
        return separate_rank_one_with(single, t, tol);
    }
    let mats = tsum.terms().iter().map(TensorTerm::matrix).collect::<Result<Vec<_>>>()?;
    let norms: Vec<T> = mats.iter().map(ComplexMatrix::frobenius_norm).collect();
    for k in 0..mats.len() {
        for l in k + 1..mats.len() {
            let c = commutator(&mats[k], &mats[l])?.frobenius_norm();
            if c > tol.commute * norms[k] * norms[l] {
                return Ok(SeparationResult::negative(
                    Verdict::Inconclusive,
                    Method::CommutingSum,
                    format!(
                        "terms {} and {} do not commute (‖[T_k,T_l]‖_F = {:.3e})",
                        k + 1,
                        l + 1,
                        c.to_f64_lossy()
                    ),
                ));
            }
        }
    }
    let mut deltas = Vec::with_capacity(mats.len());
    for (k, term) in tsum.terms().iter().enumerate() {
        match delta_coeffs(term, tol.scalar) {
            Some(d) => deltas.push(d),
            None => {
                return Ok(SeparationResult::negative(
                    Verdict::Inconclusive,
                    Method::CommutingSum,
                    format!("term {} has two or more non-scalar factors", k + 1),
                ))
            }
        }
    }
    let space = tsum.space();
    let mut factors = Vec::with_capacity(space.len());
    for site in 0..space.len() {
        let m = space.dim(site);
        let mut f = ComplexMatrix::identity(m);
        for (term, delta) in tsum.terms().iter().zip(&deltas) {
            if delta[site] != T::zero() {
                f = &f * &matrix_exp_i(&term.factors()[site].scale(cr(t * delta[site])))?;
            }
        }
        factors.push(f);
    }
    let h = mats.iter().fold(ComplexMatrix::zeros(space.total(), space.total()), |acc, m| &acc + m);
    let u = matrix_exp_i(&h.scale(cr(t)))?;
    finish_separable(&u, factors, Method::CommutingSum, tol)
}

/// Block-structure test on an n-qubit generator.
///
/// Site `k` is identity-like when, with `k` moved to the most significant
/// position, the generator has the block form `[[C, 0], [0, C]]`. Returns the
/// unique site that is not identity-like, site 0 when every site is, and
/// `None` when two or more sites fail. A returned site means `exp(i t H)` is
/// a single-site gate for every `t`.
pub fn qubit_structure_check<T: Real>(h: &HermitianGenerator<T>) -> Result<Option<usize>> {
    qubit_structure_check_with(h, &Tolerances::default())
}

pub fn qubit_structure_check_with<T: Real>(
    h: &HermitianGenerator<T>,
    tol: &Tolerances<T>,
) -> Result<Option<usize>> {
    let space = h.space();
    if !space.is_qubits() {
        return Err(Error::UnsupportedSpace(format!(
            "the block-structure check needs an all-qubit space, got {space}"
        )));
    }
    let n = space.len();
    let total = space.total();
    let half = total / 2;
    let limit = tol.block * h.matrix().frobenius_norm().max(T::one());
    let mut non_identity = Vec::new();
    for k in 0..n {
        let order: Vec<usize> = std::iter::once(k).chain((0..n).filter(|&j| j != k)).collect();
        let moved = permute_sites(h.matrix(), space, &order)?;
        let c11 = moved.block(0, 0, half, half);
        let c12 = moved.block(0, half, half, half);
        let c21 = moved.block(half, 0, half, half);
        let c22 = moved.block(half, half, half, half);
        let identity_like = c12.frobenius_norm() <= limit
            && c21.frobenius_norm() <= limit
            && (&c11 - &c22).frobenius_norm() <= limit;
        if !identity_like {
            non_identity.push(k);
            if non_identity.len() > 1 {
                return Ok(None);
            }
        }
    }
    Ok(Some(non_identity.first().copied().unwrap_or(0)))
}

/// Operator Schmidt coefficients of a matrix across `cut`.
pub fn operator_schmidt<T: Real>(
    m: &ComplexMatrix<T>,
    space: &TensorSpace,
    cut: &Cut,
    tol: T,
) -> Result<SchmidtDecomposition<T>> {
    let coefficients = svd(&reshuffle(m, space, cut)?)?.sigma;
    let cutoff = tol * coefficients[0];
    let rank = coefficients.iter().filter(|&&s| s > cutoff).count();
    Ok(SchmidtDecomposition { cut: cut.clone(), rank, coefficients })
}

/// Schmidt rank of a gate across `cut`: the number of coefficients above
/// `tol·σ_max`.
pub fn schmidt_rank<T: Real>(u: &UnitaryGate<T>, cut: &Cut, tol: T) -> Result<SchmidtDecomposition<T>> {
    operator_schmidt(u.matrix(), u.space(), cut, tol)
}

/// Multiplies by the phase that makes the largest-magnitude entry real and
/// positive (ties within a relative 1e-9 go to the lowest row-major index).
pub fn fix_phase<T: Real>(m: &ComplexMatrix<T>) -> ComplexMatrix<T> {
    let largest = m.max_abs();
    if largest == T::zero() {
        return m.clone();
    }
    let cutoff = largest * (T::one() - T::tol(1e-9));
    let pivot = *m.as_slice().iter().find(|z| z.norm() >= cutoff).expect("max entry exists");
    m.scale(pivot.conj() / pivot.norm())
}

/// Decision procedure for `U = λ·⊗_k U_k`.
///
/// Tests Schmidt rank one across every prefix cut `{1..k}|{k+1..n}`, then
/// peels the factors site by site from the leading Schmidt pair, projects
/// each onto the unitary group by polar decomposition, fixes its phase with
/// [`fix_phase`], and reads off `λ` from the trace overlap.
pub fn separate_unitary<T: Real>(u: &UnitaryGate<T>) -> Result<SeparationResult<T>> {
    separate_unitary_with(u, &Tolerances::default())
}

pub fn separate_unitary_with<T: Real>(u: &UnitaryGate<T>, tol: &Tolerances<T>) -> Result<SeparationResult<T>> {
    let space = u.space();
    let n = space.len();
    let mut schmidt = Vec::with_capacity(n.saturating_sub(1));
    for k in 0..n - 1 {
        let cut = Cut::prefix(k, n)?;
        let dec = operator_schmidt(u.matrix(), space, &cut, tol.schmidt)?;
        let rank = dec.rank;
        schmidt.push(dec);
        if rank > 1 {
            return Ok(SeparationResult {
                verdict: Verdict::NotSeparable,
                method: Method::SchmidtOracle,
                factors: None,
                global_phase: None,
                residual: None,
                violating_cut: Some(cut.clone()),
                schmidt,
                note: Some(format!("operator Schmidt rank {rank} across {cut}")),
            });
        }
    }

    let mut factors = Vec::with_capacity(n);
    let mut rest = u.matrix().clone();
    let mut rest_space = space.clone();
    for k in 0..n - 1 {
        let m = space.dim(k);
        let cut = Cut::single(0, rest_space.len())?;
        let r = reshuffle(&rest, &rest_space, &cut)?;
        let lead = svd(&r)?;
        let a = ComplexMatrix::from_fn(m, m, |i, j| lead.u[(i * m + j, 0)]);
        let (uk, ratio) = polar_unitary(&a)?;
        if ratio <= T::tol(1e-8) {
            return Err(Error::Internal(format!(
                "rank-one gate has a singular factor at site {} (ratio {:.3e})",
                k + 1,
                ratio.to_f64_lossy()
            )));
        }
        // best remainder given the factor: tr_k((U_k† ⊗ I)·W) / m
        let lifted = embed_site(&uk.adjoint(), &rest_space, 0)?;
        let keep: Vec<usize> = (1..rest_space.len()).collect();
        rest = partial_trace_sites(&(&lifted * &rest), &rest_space, &keep)?.scale_real(T::one() / T::from_usize_lossy(m));
        rest_space = rest_space.subspace(&keep)?;
        factors.push(fix_phase(&uk));
    }
    let (last, _) = polar_unitary(&rest)?;
    factors.push(fix_phase(&last));

    let mut out = finish_separable(u.matrix(), factors, Method::SchmidtOracle, tol)?;
    out.schmidt = schmidt;
    if out.verdict != Verdict::Separable {
        // the oracle never reports Inconclusive
        out.verdict = Verdict::NotSeparable;
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::generator::{exp_of, generator_of};
    use crate::linalg::{embed_site, kron};
    use crate::random::{haar_unitary, random_hermitian, random_product_unitary, rng};
    use crate::scalar::cis;

    type M = ComplexMatrix<f64>;

    fn i2() -> M {
        M::identity(2)
    }

    fn gate(m: M) -> UnitaryGate<f64> {
        UnitaryGate::on_qubits(m).unwrap()
    }

    #[test]
    fn is_scalar_examples() {
        assert_eq!(is_scalar(&i2().scale_real(3.0), 1e-9), Some(3.0));
        assert_eq!(is_scalar(&gates::pauli_z::<f64>(), 1e-9), None);
        let near = &i2() + &gates::pauli_x().scale_real(1e-12);
        assert_eq!(is_scalar(&near, 1e-9), Some(1.0));
    }

    #[test]
    fn delta_examples() {
        let t = TensorTerm::from_factors(vec![i2().scale_real(2.0), gates::pauli_z(), i2().scale_real(3.0)]).unwrap();
        assert_eq!(delta_coeffs(&t, 1e-9), Some(vec![0.0, 6.0, 0.0]));
        let t = TensorTerm::from_factors(vec![i2(), i2()]).unwrap();
        assert_eq!(delta_coeffs(&t, 1e-9), Some(vec![0.0, 0.0]));
        let t = TensorTerm::from_factors(vec![gates::pauli_x(), gates::pauli_z()]).unwrap();
        assert_eq!(delta_coeffs(&t, 1e-9), None);
    }

    #[test]
    fn rank_one_examples() {
        let t = TensorTerm::from_factors(vec![i2().scale_real(2.0), gates::pauli_z()]).unwrap();
        let r = separate_rank_one(&t, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Separable);
        let f = r.factors.as_ref().unwrap();
        assert!((f[0].matrix() - &i2()).max_abs() < 1e-15);
        let oracle = M::from_diag(&[cis(2.0), cis(-2.0)]);
        assert!((f[1].matrix() - &oracle).max_abs() < 1e-14);
        assert!(r.residual.unwrap() <= 1e-10);

        let t = TensorTerm::from_factors(vec![gates::pauli_z(), gates::pauli_z()]).unwrap();
        let r = separate_rank_one(&t, 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::NotSeparable);
        assert!(r.factors.is_none());

        let t = TensorTerm::from_factors(vec![i2(), i2()]).unwrap();
        let r = separate_rank_one(&t, 0.8).unwrap();
        assert_eq!(r.verdict, Verdict::Separable);
        assert!((r.global_phase.unwrap() - cis(0.8)).norm() < 1e-14);
        for g in r.factors.unwrap() {
            assert!((g.matrix() - &i2()).max_abs() < 1e-15);
        }
    }

    #[test]
    fn sum_examples() {
        let z = gates::pauli_z::<f64>();
        let tz1 = TensorTerm::from_factors(vec![z.clone(), i2()]).unwrap();
        let tz2 = TensorTerm::from_factors(vec![i2(), z.clone()]).unwrap();
        let r = separate_sum(&TensorTermSum::new(vec![tz1, tz2]).unwrap(), 0.7).unwrap();
        assert_eq!(r.verdict, Verdict::Separable);
        assert_eq!(r.method, Method::CommutingSum);
        let e = matrix_exp_i(&z.scale_real(0.7)).unwrap();
        for g in r.factors.as_ref().unwrap() {
            assert!((g.matrix() - &e).max_abs() < 1e-14);
        }

        let zz = TensorTerm::from_factors(vec![z.clone(), z.clone()]).unwrap();
        let r = separate_sum(&TensorTermSum::new(vec![zz]).unwrap(), 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::NotSeparable);
        assert_eq!(r.method, Method::RankOneTerm);

        let tx = TensorTerm::from_factors(vec![gates::pauli_x(), i2()]).unwrap();
        let tz = TensorTerm::from_factors(vec![z.clone(), i2()]).unwrap();
        let r = separate_sum(&TensorTermSum::new(vec![tx, tz]).unwrap(), 1.0).unwrap();
        assert_eq!(r.verdict, Verdict::Inconclusive);
        assert!(r.note.unwrap().contains("do not commute"));
        // …although the gate itself is a product
        let h = &gates::pauli_x::<f64>() + &z;
        let u = kron(&matrix_exp_i(&h).unwrap(), &i2()).unwrap();
        assert!(separate_unitary(&gate(u)).unwrap().is_separable());
    }

    #[test]
    fn structure_check_examples() {
        let s3 = TensorSpace::qubits(3).unwrap();
        let z2 = embed_site(&gates::pauli_z::<f64>(), &s3, 1).unwrap();
        let h = HermitianGenerator::new(z2, s3.clone()).unwrap();
        assert_eq!(qubit_structure_check(&h).unwrap(), Some(1));
        let zz = kron(&gates::pauli_z::<f64>(), &gates::pauli_z()).unwrap();
        let h = HermitianGenerator::new(zz, TensorSpace::qubits(2).unwrap()).unwrap();
        assert_eq!(qubit_structure_check(&h).unwrap(), None);
        let h = HermitianGenerator::new(M::zeros(8, 8), s3).unwrap();
        assert_eq!(qubit_structure_check(&h).unwrap(), Some(0));
        let q = HermitianGenerator::new(M::zeros(6, 6), TensorSpace::new(vec![2, 3]).unwrap()).unwrap();
        assert!(matches!(qubit_structure_check(&q), Err(Error::UnsupportedSpace(_))));
    }

    #[test]
    fn schmidt_examples() {
        let s = Cut::single(0, 2).unwrap();
        let (u, _) = random_product_unitary::<f64, _>(&mut rng(1), &TensorSpace::qubits(2).unwrap()).unwrap();
        assert_eq!(schmidt_rank(&gate(u), &s, 1e-9).unwrap().rank, 1);
        let c = schmidt_rank(&gate(gates::cnot()), &s, 1e-9).unwrap();
        assert_eq!(c.rank, 2);
        let r2 = 2f64.sqrt();
        for (got, want) in c.coefficients.iter().zip([r2, r2, 0.0, 0.0]) {
            assert!((got - want).abs() < 1e-12);
        }
        let w = schmidt_rank(&gate(gates::swap()), &s, 1e-9).unwrap();
        assert_eq!(w.rank, 4);
        assert!(w.coefficients.iter().all(|c| (c - 1.0).abs() < 1e-12));
    }

    #[test]
    fn separate_unitary_examples() {
        let (h, t) = (gates::hadamard::<f64>(), gates::t_gate::<f64>());
        let r = separate_unitary(&gate(kron(&h, &t).unwrap())).unwrap();
        assert_eq!(r.verdict, Verdict::Separable);
        let f = r.factors.as_ref().unwrap();
        // phase-corrected distances to the planted factors
        for (got, want) in f.iter().zip([&h, &t]) {
            let (ph, _) = overlap_phase(want, got.matrix());
            assert!((&got.matrix().scale(ph) - want).max_abs() <= 1e-9);
        }
        assert!(r.residual.unwrap() <= 1e-12);

        let r = separate_unitary(&gate(gates::cnot())).unwrap();
        assert_eq!(r.verdict, Verdict::NotSeparable);
        assert_eq!(r.violating_cut.as_ref().unwrap().to_string(), "{1}|{2}");

        let x = gates::pauli_x::<f64>();
        let xxx = kron_all(&[x.clone(), x.clone(), x.clone()]).unwrap().scale(cis(std::f64::consts::FRAC_PI_3));
        let r = separate_unitary(&gate(xxx)).unwrap();
        assert_eq!(r.verdict, Verdict::Separable);
        assert!((r.global_phase.unwrap() - cis(std::f64::consts::FRAC_PI_3)).norm() < 1e-12);
        for g in r.factors.unwrap() {
            assert!((g.matrix() - &x).max_abs() < 1e-12);
        }
    }

    #[test]
    fn mixed_dimension_products_separate() {
        let space = TensorSpace::new(vec![3, 2, 4]).unwrap();
        let mut r = rng(99);
        for _ in 0..10 {
            let (u, planted) = random_product_unitary::<f64, _>(&mut r, &space).unwrap();
            let res = separate_unitary(&UnitaryGate::new(u, space.clone()).unwrap()).unwrap();
            assert!(res.is_separable());
            assert!(res.residual.unwrap() <= 1e-10);
            for (g, p) in res.factors.unwrap().iter().zip(&planted) {
                let (ph, _) = overlap_phase(p, g.matrix());
                assert!((&g.matrix().scale(ph) - p).max_abs() <= 1e-9);
            }
        }
    }

    #[test]
    fn entangled_mixed_dimension_gate_is_rejected() {
        let space = TensorSpace::new(vec![2, 3]).unwrap();
        let u: M = haar_unitary(&mut rng(5), 6);
        let r = separate_unitary(&UnitaryGate::new(u, space).unwrap()).unwrap();
        assert_eq!(r.verdict, Verdict::NotSeparable);
        assert_eq!(r.schmidt[0].rank, 4);
    }

    #[test]
    fn structure_check_implies_oracle_separable() {
        let mut r = rng(17);
        let space = TensorSpace::qubits(3).unwrap();
        for j in 0..3 {
            let a: M = random_hermitian(&mut r, 2, 1.0);
            let h = HermitianGenerator::new(embed_site(&a, &space, j).unwrap(), space.clone()).unwrap();
            assert_eq!(qubit_structure_check(&h).unwrap(), Some(j));
            for t in [0.3, 1.0, 2.5] {
                assert!(separate_unitary(&exp_of(&h, t).unwrap()).unwrap().is_separable());
            }
        }
    }

    #[test]
    fn principal_generator_of_cz_fails_structure_check() {
        let h = generator_of(&gate(gates::cz())).unwrap();
        assert_eq!(qubit_structure_check(&h).unwrap(), None);
    }
}
