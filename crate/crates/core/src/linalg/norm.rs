use std::fmt;
use std::str::FromStr;

use super::matrix::ComplexMatrix;
use super::svd::singular_values;
use crate::error::{Error, Result};
use crate::scalar::Real;

/// Unitarily invariant cross norms.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum NormKind {
    /// Largest singular value.
    Operator,
    /// Schatten-2.
    Frobenius,
    /// Schatten-1.
    Trace,
    /// `(Σ σ_i^p)^{1/p}`, `p ≥ 1`.
    Schatten(f64),
}

impl fmt::Display for NormKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NormKind::Operator => f.write_str("op"),
            NormKind::Frobenius => f.write_str("fro"),
            NormKind::Trace => f.write_str("trace"),
            NormKind::Schatten(p) => write!(f, "schatten:{p}"),
        }
    }
}

impl FromStr for NormKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "op" | "operator" => Ok(NormKind::Operator),
            "fro" | "frobenius" => Ok(NormKind::Frobenius),
            "trace" | "nuclear" => Ok(NormKind::Trace),
            other => {
                let p = other
                    .strip_prefix("schatten:")
                    .and_then(|p| p.parse::<f64>().ok())
                    .ok_or_else(|| Error::Argument(format!("unknown norm `{other}`")))?;
                Ok(NormKind::Schatten(p))
            }
        }
    }
}

pub fn norm<T: Real>(m: &ComplexMatrix<T>, kind: NormKind) -> Result<T> {
    match kind {
        NormKind::Frobenius => Ok(m.frobenius_norm()),
        NormKind::Operator => Ok(singular_values(m)?[0]),
        NormKind::Trace => Ok(singular_values(m)?.into_iter().sum()),
        NormKind::Schatten(p) => {
            if !(p >= 1.0) || !p.is_finite() {
                return Err(Error::Argument(format!("Schatten exponent {p} must be a finite value ≥ 1")));
            }
            let pt = T::lit(p);
            let s: T = singular_values(m)?.into_iter().map(|x| x.powf(pt)).sum();
            Ok(s.powf(T::one() / pt))
        }
    }
}

/// Operator (spectral) norm.
pub fn op_norm<T: Real>(m: &ComplexMatrix<T>) -> T {
    singular_values(m).map(|s| s[0]).unwrap_or_else(|_| T::nan())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gates;
    use crate::linalg::kron;

    type M = ComplexMatrix<f64>;

    #[test]
    fn examples() {
        assert!((norm(&M::identity(4), NormKind::Operator).unwrap() - 1.0).abs() < 1e-15);
        let zz = kron(&gates::pauli_z::<f64>(), &gates::pauli_z()).unwrap();
        assert_eq!(norm(&zz, NormKind::Frobenius).unwrap(), 2.0);
        assert!((norm(&M::from_real_diag(&[3.0, 1.0]), NormKind::Trace).unwrap() - 4.0).abs() < 1e-14);
        let s2 = norm(&M::from_real_diag(&[3.0, 4.0]), NormKind::Schatten(2.0)).unwrap();
        assert!((s2 - 5.0).abs() < 1e-14);
        assert!(norm(&zz, NormKind::Schatten(0.5)).is_err());
    }

    #[test]
    fn parse_roundtrip() {
        for k in [NormKind::Operator, NormKind::Frobenius, NormKind::Trace, NormKind::Schatten(3.0)] {
            assert_eq!(k.to_string().parse::<NormKind>().unwrap(), k);
        }
        assert!("max".parse::<NormKind>().is_err());
    }
}
