//! ε-approximate separation.
//!
//! A gate `U = exp(i t H)` is approximated by `e^{itc}·⊗_k exp(i t H_k)`
//! where `cI + Σ_k Ĥ_k` is the Frobenius-orthogonal projection of `H` onto
//! the local Hamiltonians (`Ĥ_k = I ⊗ … ⊗ H_k ⊗ … ⊗ I`, `H_k` traceless).
//! The gate distance then obeys
//!
//! ```text
//! ‖U − e^{itc}⊗U_k‖_o ≤ |t|·‖H − cI − Σ_k Ĥ_k‖_o
//! ```
//!
//! and a per-eigenvector residual test certifies `‖U − e^{itc}⊗U_k‖_o < ε`
//! without forming the exponentials.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::generator::{eigenphases, Eigenphases, HermitianGenerator, UnitaryGate};
use crate::linalg::{
    embed_site, hermitian_part, kron_all, matrix_exp_i, norm, op_norm, partial_trace, permute_sites,
    polar_unitary, reshuffle, svd, ComplexMatrix, Cut, NormKind, TensorSpace, HERMITIAN_TOL,
};
use crate::scalar::{cis, cr, Real, C};

/// Width of the window below `π` whose eigenphases are retried on the
/// other end of the branch.
pub const BRANCH_WINDOW: f64 = 0.1;

/// Tracelessness tolerance of the local terms, relative to `max(1, ‖H_k‖_F)`.
pub const TRACELESS_TOL: f64 = 1e-10;

/// `c·I + Σ_k Ĥ_k` with traceless self-adjoint `H_k`.
#[derive(Debug, Clone, PartialEq)]
pub struct LocalHamiltonianFamily<T: Real> {
    locals: Vec<ComplexMatrix<T>>,
    offset: T,
    space: TensorSpace,
}

impl<T: Real> LocalHamiltonianFamily<T> {
    pub fn new(locals: Vec<ComplexMatrix<T>>, offset: T, space: TensorSpace) -> Result<Self> {
        if locals.len() != space.len() {
            return Err(Error::Argument(format!("{} local terms for {} subsystems", locals.len(), space.len())));
        }
        let locals = locals
            .iter()
            .enumerate()
            .map(|(k, h)| {
                if h.shape() != (space.dim(k), space.dim(k)) {
                    return Err(Error::Shape(format!(
                        "local term {} is {}×{}, subsystem dimension is {}",
                        k + 1,
                        h.rows(),
                        h.cols(),
                        space.dim(k)
                    )));
                }
                let h = hermitian_part(h, T::tol(HERMITIAN_TOL))?;
                let tr = h.trace().re;
                if tr.abs() > T::tol(TRACELESS_TOL) * h.frobenius_norm().max(T::one()) {
                    return Err(Error::Argument(format!(
                        "local term {} has trace {:.3e}, expected 0",
                        k + 1,
                        tr.to_f64_lossy()
                    )));
                }
                Ok(h)
            })
            .collect::<Result<_>>()?;
        Ok(Self { locals, offset, space })
    }

    /// The family with every local term and the offset zero.
    pub fn zero(space: &TensorSpace) -> Self {
        Self {
            locals: space.dims().iter().map(|&d| ComplexMatrix::zeros(d, d)).collect(),
            offset: T::zero(),
            space: space.clone(),
        }
    }

    pub fn locals(&self) -> &[ComplexMatrix<T>] {
        &self.locals
    }

    pub fn offset(&self) -> T {
        self.offset
    }

    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    /// `Σ_k Ĥ_k`.
    pub fn local_sum(&self) -> Result<ComplexMatrix<T>> {
        let n = self.space.total();
        self.locals
            .iter()
            .enumerate()
            .try_fold(ComplexMatrix::zeros(n, n), |acc, (k, h)| Ok(&acc + &embed_site(h, &self.space, k)?))
    }

    /// `c·I + Σ_k Ĥ_k`.
    pub fn matrix(&self) -> Result<ComplexMatrix<T>> {
        let n = self.space.total();
        Ok(&self.local_sum()? + &ComplexMatrix::identity(n).scale_real(self.offset))
    }

    /// `exp(i t H_k)` for each site.
    pub fn factors(&self, t: T) -> Result<Vec<UnitaryGate<T>>> {
        self.locals
            .iter()
            .map(|h| {
                let space = TensorSpace::with_limit(vec![h.rows()], usize::MAX)?;
                UnitaryGate::unchecked(matrix_exp_i(&h.scale(cr(t)))?, space)
            })
            .collect()
    }

    /// `e^{itc}`.
    pub fn global_phase(&self, t: T) -> C<T> {
        cis(t * self.offset)
    }

    /// `e^{itc}·⊗_k exp(i t H_k)`, equal to `exp(i t (cI + ΣĤ_k))`.
    pub fn gate_matrix(&self, t: T) -> Result<ComplexMatrix<T>> {
        let factors: Vec<ComplexMatrix<T>> = self.factors(t)?.into_iter().map(UnitaryGate::into_matrix).collect();
        Ok(kron_all(&factors)?.scale(self.global_phase(t)))
    }
}

/// Orthogonal projection (Hilbert–Schmidt) of `H` onto
/// `span{I} ⊕ ⊕_k {traceless operators on site k}`.
pub fn project_local<T: Real>(h: &HermitianGenerator<T>) -> Result<LocalHamiltonianFamily<T>> {
    project_local_matrix(h.matrix(), h.space())
}

fn project_local_matrix<T: Real>(h: &ComplexMatrix<T>, space: &TensorSpace) -> Result<LocalHamiltonianFamily<T>> {
    let total = T::from_usize_lossy(space.total());
    let offset = h.trace().re / total;
    let locals = (0..space.len())
        .map(|k| {
            let m = space.dim(k);
            let rest = T::from_usize_lossy(space.total() / m);
            let reduced = partial_trace(h, space, k)?.scale_real(T::one() / rest);
            let local = &reduced - &ComplexMatrix::identity(m).scale_real(offset);
            Ok(local.symmetrized())
        })
        .collect::<Result<_>>()?;
    LocalHamiltonianFamily::new(locals, offset, space.clone())
}

/// `‖H − cI − Σ_k Ĥ_k‖` in the requested norm.
pub fn generator_gap<T: Real>(
    h: &HermitianGenerator<T>,
    family: &LocalHamiltonianFamily<T>,
    kind: NormKind,
) -> Result<T> {
    check_family(h.space(), family)?;
    norm(&(h.matrix() - &family.matrix()?), kind)
}

fn check_family<T: Real>(space: &TensorSpace, family: &LocalHamiltonianFamily<T>) -> Result<()> {
    if family.space() != space {
        return Err(Error::Argument(format!("family lives on {}, gate on {space}", family.space())));
    }
    Ok(())
}

/// Upper bound on `‖exp(itH) − e^{itc}⊗exp(itH_k)‖` in the norm `kind`:
/// `M·‖H − cI − ΣĤ_k‖` with `M = |t|` for the operator norm and
/// `M = |t|·‖exp(−itΣĤ_k)‖·‖exp(−itH)‖` otherwise.
pub fn distance_bound<T: Real>(
    h: &HermitianGenerator<T>,
    family: &LocalHamiltonianFamily<T>,
    t: T,
    kind: NormKind,
) -> Result<T> {
    let gap = generator_gap(h, family, kind)?;
    let factor = match kind {
        NormKind::Operator => t.abs(),
        _ => {
            let a = norm(&matrix_exp_i(&family.local_sum()?.scale_real(-t))?, kind)?;
            let b = norm(&matrix_exp_i(&h.matrix().scale_real(-t))?, kind)?;
            t.abs() * a * b
        }
    };
    Ok(factor * gap)
}

/// Per-eigenvector residual certificate.
#[derive(Debug, Clone, PartialEq)]
pub struct ApproxCertificate<T: Real> {
    pub epsilon: T,
    pub t: T,
    /// `ε / (|t|·∏_k m_k)`.
    pub threshold: T,
    /// Generator eigenvalues `λ_j` (eigenphase divided by `t`) in the basis used.
    pub eigenvalues: Vec<T>,
    /// `‖(λ_j I − cI − ΣĤ_k)|x_j⟩‖₂`.
    pub residuals: Vec<T>,
    /// Every residual is strictly below the threshold.
    pub pass: bool,
}

impl<T: Real> ApproxCertificate<T> {
    pub fn max_residual(&self) -> T {
        self.residuals.iter().copied().fold(T::zero(), T::max)
    }
}

/// Checks `‖(λ_j I − cI − ΣĤ_k)|x_j⟩‖ < ε/(|t|∏m_k)` for every eigenpair
/// `U|x_j⟩ = e^{itλ_j}|x_j⟩`; passing implies
/// `‖U − e^{itc}⊗exp(itH_k)‖_o < ε`. Uses the eigenbasis returned by the
/// Schur routine and the principal eigenphases.
pub fn eigenvector_certificate<T: Real>(
    u: &UnitaryGate<T>,
    family: &LocalHamiltonianFamily<T>,
    t: T,
    epsilon: T,
) -> Result<ApproxCertificate<T>> {
    check_family(u.space(), family)?;
    certificate_from_phases(&eigenphases(u)?, family, t, epsilon)
}

fn certificate_from_phases<T: Real>(
    phases: &Eigenphases<T>,
    family: &LocalHamiltonianFamily<T>,
    t: T,
    epsilon: T,
) -> Result<ApproxCertificate<T>> {
    if t == T::zero() || !t.is_finite() {
        return Err(Error::Argument("certificate needs a finite non-zero t".into()));
    }
    if !(epsilon > T::zero()) {
        return Err(Error::Argument(format!("epsilon must be positive, got {epsilon}")));
    }
    let total = family.space().total();
    let threshold = epsilon / (t.abs() * T::from_usize_lossy(total));
    let local = family.local_sum()?;
    let eigenvalues: Vec<T> = phases.phases.iter().map(|&p| p / t).collect();
    let residuals: Vec<T> = eigenvalues
        .iter()
        .enumerate()
        .map(|(j, &lambda)| {
            let x = phases.vectors.col(j);
            let hx = local.apply(&x);
            let shift = lambda - family.offset();
            x.iter().zip(&hx).map(|(xi, hi)| (*xi * shift - *hi).norm_sqr()).sum::<T>().sqrt()
        })
        .collect();
    let pass = residuals.iter().all(|&r| r < threshold);
    Ok(ApproxCertificate { epsilon, t, threshold, eigenvalues, residuals, pass })
}

#[derive(Debug, Clone)]
pub struct ApproxSeparationResult<T: Real> {
    pub t: T,
    pub family: LocalHamiltonianFamily<T>,
    /// `exp(i t H_k)`.
    pub factors: Vec<UnitaryGate<T>>,
    /// `e^{itc}`.
    pub global_phase: C<T>,
    /// `‖H − cI − ΣĤ_k‖_o`.
    pub generator_gap: T,
    /// `‖H − cI − ΣĤ_k‖_F`, the quantity the projection minimizes.
    pub generator_gap_frobenius: T,
    /// `|t|·generator_gap`.
    pub bound: T,
    pub norm: NormKind,
    /// Gap in [`Self::norm`].
    pub gap_in_norm: T,
    /// Distance bound in [`Self::norm`].
    pub bound_in_norm: T,
    /// `‖U − e^{itc}⊗U_k‖_o`.
    pub measured_phase_free: T,
    /// Smaller of the phase-free distance and the distance after aligning
    /// the global phase by trace overlap.
    pub measured: T,
    /// Whether the winning generator moved eigenphases near `π` to `−π`.
    pub branch_shifted: bool,
    pub certificate: Option<ApproxCertificate<T>>,
}

struct Candidate<T: Real> {
    phases: Eigenphases<T>,
    generator: HermitianGenerator<T>,
    family: LocalHamiltonianFamily<T>,
    product: ComplexMatrix<T>,
    measured_phase_free: T,
    measured: T,
    shifted: bool,
}

fn candidate<T: Real>(u: &UnitaryGate<T>, phases: Eigenphases<T>, t: T, shifted: bool) -> Result<Candidate<T>> {
    let h = phases.generator_matrix().scale_real(T::one() / t);
    let generator = HermitianGenerator::new(h, u.space().clone())?;
    let family = project_local(&generator)?;
    let product = family.gate_matrix(t)?;
    let measured_phase_free = op_norm(&(u.matrix() - &product));
    let overlap = product.inner(u.matrix());
    let aligned = if overlap.norm() > T::zero() {
        op_norm(&(u.matrix() - &product.scale(overlap / overlap.norm())))
    } else {
        measured_phase_free
    };
    Ok(Candidate {
        phases,
        generator,
        family,
        product,
        measured_phase_free,
        measured: measured_phase_free.min(aligned),
        shifted,
    })
}

/// Best-effort local approximation of `u = exp(i t H)` with the operator-norm
/// bound and, when `epsilon` is given, the eigenvector certificate.
pub fn approx_separate<T: Real>(u: &UnitaryGate<T>, t: T, epsilon: Option<T>) -> Result<ApproxSeparationResult<T>> {
    approx_separate_in(u, t, epsilon, NormKind::Operator)
}

/// As [`approx_separate`], additionally reporting gap and bound in `kind`.
pub fn approx_separate_in<T: Real>(
    u: &UnitaryGate<T>,
    t: T,
    epsilon: Option<T>,
    kind: NormKind,
) -> Result<ApproxSeparationResult<T>> {
    if t == T::zero() || !t.is_finite() {
        return Err(Error::Argument("t must be finite and non-zero".into()));
    }
    if let Some(e) = epsilon {
        if !(e > T::zero()) {
            return Err(Error::Argument(format!("epsilon must be positive, got {e}")));
        }
    }
    let principal = eigenphases(u)?;
    let retry = principal.wrapped_near_pi(T::lit(BRANCH_WINDOW));
    let mut best = candidate(u, principal, t, false)?;
    if let Some(wrapped) = retry {
        let alt = candidate(u, wrapped, t, true)?;
        if alt.measured < best.measured {
            best = alt;
        }
    }
    let residual = best.generator.matrix() - &best.family.matrix()?;
    let generator_gap = op_norm(&residual);
    let generator_gap_frobenius = residual.frobenius_norm();
    let bound = t.abs() * generator_gap;
    let gap_in_norm = norm(&residual, kind)?;
    let bound_in_norm = distance_bound(&best.generator, &best.family, t, kind)?;
    let certificate = epsilon.map(|e| certificate_from_phases(&best.phases, &best.family, t, e)).transpose()?;
    debug_assert!(best.product.rows() == u.matrix().rows());
    Ok(ApproxSeparationResult {
        t,
        factors: best.family.factors(t)?,
        global_phase: best.family.global_phase(t),
        family: best.family,
        generator_gap,
        generator_gap_frobenius,
        bound,
        norm: kind,
        gap_in_norm,
        bound_in_norm,
        measured_phase_free: best.measured_phase_free,
        measured: best.measured,
        branch_shifted: best.shifted,
        certificate,
    })
}

/// Unitary pair nearest to `u` across a bipartition.
#[derive(Debug, Clone)]
pub struct NearestKron<T: Real> {
    /// Unitary on the left sites (in ascending site order).
    pub left: UnitaryGate<T>,
    /// Unitary on the right sites.
    pub right: UnitaryGate<T>,
    /// Phase `λ` aligning `λ·left⊗right` with `u`.
    pub phase: C<T>,
    /// Operator Schmidt coefficients across the cut.
    pub coefficients: Vec<T>,
    /// `sqrt(Σ_{r≥2} σ_r²)`: Frobenius distance to the nearest rank-one
    /// (not necessarily unitary) product.
    pub frobenius_distance_to_rank_one: T,
    /// `‖u − λ·left⊗right‖_F` after unitary projection.
    pub frobenius_distance: T,
    /// `‖u − λ·left⊗right‖_o`.
    pub operator_distance: T,
}

/// Leading Schmidt pair of `u` across `cut`, each side projected onto the
/// unitary group by polar decomposition.
///
/// When the leading coefficient is degenerate the pair is not unique; the
/// candidates `Σ_r w_r (u_r, v_r)` over the degenerate block with a fixed
/// set of phase patterns `w` are tried and the one with the smallest
/// Frobenius distance after projection is kept.
pub fn nearest_kron_unitary<T: Real>(u: &UnitaryGate<T>, cut: &Cut) -> Result<NearestKron<T>> {
    let space = u.space();
    let dec = svd(&reshuffle(u.matrix(), space, cut)?)?;
    let sigma = dec.sigma.clone();
    let rest: T = sigma.iter().skip(1).map(|s| *s * *s).sum::<T>().sqrt();
    let dl = space.dim_of(cut.left());
    let dr = space.dim_of(cut.right());
    let cluster = sigma.iter().take_while(|&&s| s >= sigma[0] * (T::one() - T::tol(1e-9))).count().max(1);

    let mut weights: Vec<Vec<C<T>>> = vec![(0..cluster).map(|r| if r == 0 { C::new(T::one(), T::zero()) } else { C::zero() }).collect()];
    if cluster > 1 {
        for step in [2.0, 3.0, 5.0, 7.0] {
            let alpha = T::PI() / T::lit(step);
            weights.push((0..cluster).map(|r| cis(alpha * T::from_usize_lossy(r))).collect());
        }
        let mut draw = crate::random::rng(cluster as u64);
        for _ in 0..8 {
            weights.push(crate::random::random_matrix::<T, _>(&mut draw, cluster, 1).into_vec());
        }
    }

    let order: Vec<usize> = cut.left().iter().chain(cut.right()).copied().collect();
    let mut inverse = vec![0usize; order.len()];
    for (pos, &site) in order.iter().enumerate() {
        inverse[site] = pos;
    }
    let moved_space = space.subspace(&order)?;
    let total = T::from_usize_lossy(space.total());

    let mut best: Option<(ComplexMatrix<T>, ComplexMatrix<T>, C<T>, T, T)> = None;
    let mut worst_ratio = T::one();
    for w in &weights {
        let scale = T::one() / w.iter().map(|z| z.norm_sqr()).sum::<T>().sqrt();
        let a = ComplexMatrix::from_fn(dl, dl, |i, j| {
            (0..cluster).fold(C::zero(), |acc, r| acc + w[r] * dec.u[(i * dl + j, r)]) * scale
        });
        let b = ComplexMatrix::from_fn(dr, dr, |i, j| {
            (0..cluster).fold(C::zero(), |acc, r| acc + w[r] * dec.v[(i * dr + j, r)]).conj() * scale
        });
        let (ua, ra) = polar_unitary(&a)?;
        let (ub, rb) = polar_unitary(&b)?;
        let ratio = ra.min(rb);
        if ratio <= T::tol(1e-8) {
            worst_ratio = worst_ratio.min(ratio);
            continue;
        }
        let product = permute_sites(&crate::linalg::kron(&ua, &ub)?, &moved_space, &inverse)?;
        let overlap = product.inner(u.matrix()) / total;
        let phase = if overlap.norm() > T::zero() { overlap / overlap.norm() } else { C::new(T::one(), T::zero()) };
        let diff = u.matrix() - &product.scale(phase);
        let fro = diff.frobenius_norm();
        if best.as_ref().is_none_or(|b| fro < b.3) {
            best = Some((ua, ub, phase, fro, op_norm(&diff)));
        }
    }
    let (ua, ub, phase, fro, op) =
        best.ok_or(Error::DegenerateFactor { ratio: worst_ratio.to_f64_lossy() })?;
    Ok(NearestKron {
        left: UnitaryGate::unchecked(ua, space.subspace(cut.left())?)?,
        right: UnitaryGate::unchecked(ub, space.subspace(cut.right())?)?,
        phase,
        coefficients: sigma,
        frobenius_distance_to_rank_one: rest,
        frobenius_distance: fro,
        operator_distance: op,
    })
}
