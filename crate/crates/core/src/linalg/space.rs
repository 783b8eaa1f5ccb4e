use std::fmt;
use std::sync::OnceLock;

use crate::error::{Error, Result};

/// Default cap on the total Hilbert-space dimension (12 qubits).
pub const DEFAULT_MAX_DIM: usize = 4096;

/// Environment variable overriding [`DEFAULT_MAX_DIM`].
pub const MAX_DIM_ENV: &str = "GATESPLIT_MAX_DIM";

/// Effective size cap, read once from `GATESPLIT_MAX_DIM`.
pub fn max_dim() -> usize {
    static CAP: OnceLock<usize> = OnceLock::new();
    *CAP.get_or_init(|| {
        std::env::var(MAX_DIM_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
            .filter(|&v| v > 0)
            .unwrap_or(DEFAULT_MAX_DIM)
    })
}

/// Subsystem dimensions `(m_1, …, m_n)` of a tensor-product space.
///
/// Site 0 is the leftmost (most significant) Kronecker factor.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct TensorSpace {
    dims: Vec<usize>,
    total: usize,
}

impl TensorSpace {
    pub fn new(dims: Vec<usize>) -> Result<Self> {
        Self::with_limit(dims, max_dim())
    }

    pub fn with_limit(dims: Vec<usize>, max: usize) -> Result<Self> {
        if dims.is_empty() {
            return Err(Error::Argument("tensor space needs at least one subsystem".into()));
        }
        if let Some(&d) = dims.iter().find(|&&d| d < 2) {
            return Err(Error::Argument(format!("subsystem dimension {d} is below 2")));
        }
        let mut total = 1usize;
        for &d in &dims {
            total = total
                .checked_mul(d)
                .filter(|&t| t <= max)
                .ok_or(Error::SizeLimit { requested: total.saturating_mul(d), max })?;
        }
        Ok(Self { dims, total })
    }

    /// `n` qubits.
    pub fn qubits(n: usize) -> Result<Self> {
        Self::new(vec![2; n])
    }

    /// All-qubit factorization of `size`, if it is a power of two ≥ 2.
    pub fn qubits_for_size(size: usize) -> Option<Self> {
        if size < 2 || !size.is_power_of_two() {
            return None;
        }
        Self::qubits(size.trailing_zeros() as usize).ok()
    }

    #[inline]
    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    #[inline]
    pub fn dim(&self, site: usize) -> usize {
        self.dims[site]
    }

    /// Number of subsystems.
    #[inline]
    pub fn len(&self) -> usize {
        self.dims.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        false
    }

    #[inline]
    pub fn total(&self) -> usize {
        self.total
    }

    pub fn is_qubits(&self) -> bool {
        self.dims.iter().all(|&d| d == 2)
    }

    /// Product of the dimensions of `sites`.
    pub fn dim_of(&self, sites: &[usize]) -> usize {
        sites.iter().map(|&k| self.dims[k]).product()
    }

    /// Sub-space made of `sites`, in the given order.
    pub fn subspace(&self, sites: &[usize]) -> Result<Self> {
        Self::with_limit(sites.iter().map(|&k| self.dims[k]).collect(), usize::MAX)
    }

    pub(crate) fn check_site(&self, site: usize) -> Result<()> {
        if site >= self.dims.len() {
            return Err(Error::Argument(format!(
                "subsystem index {site} out of range for {} subsystems",
                self.dims.len()
            )));
        }
        Ok(())
    }
}

impl fmt::Display for TensorSpace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let parts: Vec<String> = self.dims.iter().map(ToString::to_string).collect();
        write!(f, "({})", parts.join("⊗"))
    }
}

/// Bipartition of the subsystems of a [`TensorSpace`].
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Cut {
    left: Vec<usize>,
    right: Vec<usize>,
}

impl Cut {
    /// Cut with the given `left` sites against all the others among `n`.
    pub fn new(left: impl IntoIterator<Item = usize>, n: usize) -> Result<Self> {
        let mut left: Vec<usize> = left.into_iter().collect();
        left.sort_unstable();
        left.dedup();
        if left.is_empty() {
            return Err(Error::Argument("cut has an empty left side".into()));
        }
        if let Some(&k) = left.iter().find(|&&k| k >= n) {
            return Err(Error::Argument(format!("cut site {k} out of range for {n} subsystems")));
        }
        let right: Vec<usize> = (0..n).filter(|k| !left.contains(k)).collect();
        if right.is_empty() {
            return Err(Error::Argument("cut has an empty right side".into()));
        }
        Ok(Self { left, right })
    }

    /// `{0..k} | {k+1..n-1}`.
    pub fn prefix(k: usize, n: usize) -> Result<Self> {
        Self::new(0..=k, n)
    }

    /// `{site} | rest`.
    pub fn single(site: usize, n: usize) -> Result<Self> {
        Self::new([site], n)
    }

    #[inline]
    pub fn left(&self) -> &[usize] {
        &self.left
    }

    #[inline]
    pub fn right(&self) -> &[usize] {
        &self.right
    }

    pub(crate) fn check(&self, space: &TensorSpace) -> Result<()> {
        if self.left.len() + self.right.len() != space.len() {
            return Err(Error::Argument(format!(
                "cut {self} does not partition {} subsystems",
                space.len()
            )));
        }
        Ok(())
    }
}

/// Sites are displayed 1-based, e.g. `{1}|{2,3}`.
impl fmt::Display for Cut {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let side = |s: &[usize]| s.iter().map(|k| (k + 1).to_string()).collect::<Vec<_>>().join(",");
        write!(f, "{{{}}}|{{{}}}", side(&self.left), side(&self.right))
    }
}
