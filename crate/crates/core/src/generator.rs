//! Unitary gates and their self-adjoint generators, `U = exp(iH)` on the
//! principal branch.
//!
//! The principal generator of a separable gate need not be a sum of
//! single-site terms: eigenphases of the product wrap around ±π
//! independently of the local phases. Generator-based separability tests
//! are therefore sufficient-only, and the Schmidt-rank oracle in
//! [`crate::exact`] is the decision procedure.

use num_traits::Zero;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_part, matrix_exp_i, normal_eig, op_norm, ComplexMatrix, TensorSpace, HERMITIAN_TOL};
use crate::scalar::{cr, Real, C};

/// Default unitarity tolerance `‖U†U − I‖_o ≤ 1e-8`.
pub const UNITARY_TOL: f64 = 1e-8;

fn check_size<T: Real>(m: &ComplexMatrix<T>, space: &TensorSpace) -> Result<()> {
    if m.shape() != (space.total(), space.total()) {
        let size = if m.is_square() { m.rows().to_string() } else { format!("{}×{}", m.rows(), m.cols()) };
        return Err(Error::Shape(format!("matrix size {size} ≠ {}", space.total())));
    }
    Ok(())
}

/// A unitary operator on a tensor-product space.
#[derive(Debug, Clone, PartialEq)]
pub struct UnitaryGate<T: Real> {
    matrix: ComplexMatrix<T>,
    space: TensorSpace,
}

impl<T: Real> UnitaryGate<T> {
    pub fn new(matrix: ComplexMatrix<T>, space: TensorSpace) -> Result<Self> {
        Self::with_tolerance(matrix, space, T::tol(UNITARY_TOL))
    }

    pub fn with_tolerance(matrix: ComplexMatrix<T>, space: TensorSpace, tol: T) -> Result<Self> {
        let gate = Self::unchecked(matrix, space)?;
        let defect = gate.unitarity_defect();
        if !(defect <= tol) {
            return Err(Error::NotUnitary { deviation: defect.to_f64_lossy(), allowed: tol.to_f64_lossy() });
        }
        Ok(gate)
    }

    /// Skips the unitarity check (shape is still enforced).
    pub fn unchecked(matrix: ComplexMatrix<T>, space: TensorSpace) -> Result<Self> {
        check_size(&matrix, &space)?;
        Ok(Self { matrix, space })
    }

    /// Gate on an all-qubit space inferred from the matrix size.
    pub fn on_qubits(matrix: ComplexMatrix<T>) -> Result<Self> {
        let space = TensorSpace::qubits_for_size(matrix.rows())
            .ok_or_else(|| Error::Shape(format!("matrix size {} is not a power of two", matrix.rows())))?;
        Self::new(matrix, space)
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    pub fn into_matrix(self) -> ComplexMatrix<T> {
        self.matrix
    }

    /// `‖U†U − I‖_o`.
    pub fn unitarity_defect(&self) -> T {
        let n = self.matrix.rows();
        op_norm(&(&(&self.matrix.adjoint() * &self.matrix) - &ComplexMatrix::identity(n)))
    }
}

/// Self-adjoint `H` with `U = exp(iH)`.
#[derive(Debug, Clone, PartialEq)]
pub struct HermitianGenerator<T: Real> {
    matrix: ComplexMatrix<T>,
    space: TensorSpace,
    principal: bool,
}

impl<T: Real> HermitianGenerator<T> {
    /// Validates Hermiticity (relative 1e-8) and stores the symmetrized matrix.
    pub fn new(matrix: ComplexMatrix<T>, space: TensorSpace) -> Result<Self> {
        check_size(&matrix, &space)?;
        let matrix = hermitian_part(&matrix, T::tol(HERMITIAN_TOL))?;
        Ok(Self { matrix, space, principal: false })
    }

    #[inline]
    pub fn matrix(&self) -> &ComplexMatrix<T> {
        &self.matrix
    }

    #[inline]
    pub fn space(&self) -> &TensorSpace {
        &self.space
    }

    /// Whether every eigenvalue lies in `(−π, π]`.
    #[inline]
    pub fn is_principal(&self) -> bool {
        self.principal
    }

    /// `s·H`; the result is no longer flagged principal unless `s = 1`.
    pub fn scaled(&self, s: T) -> Self {
        Self {
            matrix: self.matrix.scale_real(s),
            space: self.space.clone(),
            principal: self.principal && s == T::one(),
        }
    }
}

/// Eigenphases `θ_j ∈ (−π, π]` and orthonormal eigenvectors of a unitary,
/// `U = V·diag(e^{iθ_j})·V†`.
#[derive(Debug, Clone)]
pub struct Eigenphases<T: Real> {
    pub phases: Vec<T>,
    pub vectors: ComplexMatrix<T>,
}

impl<T: Real> Eigenphases<T> {
    /// `V·diag(θ)·V†`.
    pub fn generator_matrix(&self) -> ComplexMatrix<T> {
        let v = &self.vectors;
        let n = v.rows();
        ComplexMatrix::from_fn(n, n, |i, j| {
            (0..n).fold(C::zero(), |acc, k| acc + v[(i, k)] * self.phases[k] * v[(j, k)].conj())
        })
    }

    /// Moves every phase in `(π − window, π]` to the other end of the branch,
    /// `θ ↦ θ − 2π`. Returns `None` when no phase is affected.
    pub fn wrapped_near_pi(&self, window: T) -> Option<Self> {
        let two_pi = T::PI() + T::PI();
        let lo = T::PI() - window;
        if !self.phases.iter().any(|&p| p > lo) {
            return None;
        }
        let phases = self.phases.iter().map(|&p| if p > lo { p - two_pi } else { p }).collect();
        Some(Self { phases, vectors: self.vectors.clone() })
    }
}

/// Principal eigenphases of a unitary.
pub fn eigenphases<T: Real>(u: &UnitaryGate<T>) -> Result<Eigenphases<T>> {
    let e = normal_eig(u.matrix())?;
    let snap = T::epsilon() * T::lit(1024.0);
    let phases = e
        .values
        .iter()
        .map(|z| {
            let th = z.im.atan2(z.re);
            // half-open branch: −π is represented as π
            if th <= -T::PI() + snap {
                T::PI()
            } else {
                th
            }
        })
        .collect();
    Ok(Eigenphases { phases, vectors: e.vectors })
}

/// Principal generator `H` with `U = exp(iH)` and spectrum in `(−π, π]`.
pub fn generator_of<T: Real>(u: &UnitaryGate<T>) -> Result<HermitianGenerator<T>> {
    let e = eigenphases(u)?;
    let matrix = e.generator_matrix().symmetrized();
    Ok(HermitianGenerator { matrix, space: u.space().clone(), principal: true })
}

/// `exp(i t H)`.
pub fn exp_of<T: Real>(h: &HermitianGenerator<T>, t: T) -> Result<UnitaryGate<T>> {
    let m = matrix_exp_i(&h.matrix().scale(cr(t)))?;
    UnitaryGate::new(m, h.space().clone())
}
