//! JSON gate files: `{"dims": [...], "matrix": [[[re, im], ...], ...]}`.

use gatesplit::generator::UnitaryGate;
use gatesplit::linalg::TensorSpace;
use gatesplit::{Complex64, Matrix};
use serde::{Deserialize, Serialize};
use sha2::{Digest, Sha256};

use crate::CliError;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct GateFile {
    /// Subsystem dimensions; may be omitted for power-of-two sizes.
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dims: Option<Vec<usize>>,
    /// Row-major entries as `[re, im]` pairs.
    pub matrix: Vec<Vec<[f64; 2]>>,
}

impl GateFile {
    pub fn from_matrix(m: &Matrix, dims: &[usize]) -> Self {
        let matrix = (0..m.rows()).map(|i| m.row(i).iter().map(|z| [z.re, z.im]).collect()).collect();
        Self { dims: Some(dims.to_vec()), matrix }
    }

    pub fn from_gate(g: &UnitaryGate<f64>) -> Self {
        Self::from_matrix(g.matrix(), g.space().dims())
    }

    pub fn parse(text: &str) -> Result<Self, CliError> {
        serde_json::from_str(text).map_err(|e| CliError::Input(format!("malformed gate file: {e}")))
    }

    pub fn to_matrix(&self) -> Result<Matrix, CliError> {
        let n = self.matrix.len();
        if n == 0 {
            return Err(CliError::Input("matrix is empty".into()));
        }
        if let Some((i, row)) = self.matrix.iter().enumerate().find(|(_, r)| r.len() != n) {
            return Err(CliError::Input(format!(
                "matrix is not square: row {} has {} entries, expected {n}",
                i + 1,
                row.len()
            )));
        }
        let data: Vec<Complex64> = self.matrix.iter().flatten().map(|&[re, im]| Complex64::new(re, im)).collect();
        Ok(Matrix::new(n, n, data)?)
    }

    pub fn space(&self) -> Result<TensorSpace, CliError> {
        match &self.dims {
            Some(dims) => Ok(TensorSpace::new(dims.clone())?),
            None => TensorSpace::qubits_for_size(self.matrix.len()).ok_or_else(|| {
                CliError::Input(format!("dims required: matrix size {} is not a power of two", self.matrix.len()))
            }),
        }
    }

    /// Parses into a gate, checking unitarity at `unitary_tol` unless `validate` is false.
    pub fn to_gate(&self, validate: bool, unitary_tol: f64) -> Result<UnitaryGate<f64>, CliError> {
        let m = self.to_matrix()?;
        let space = self.space()?;
        let gate = if validate {
            UnitaryGate::with_tolerance(m, space, unitary_tol)?
        } else {
            UnitaryGate::unchecked(m, space)?
        };
        Ok(gate)
    }
}

/// SHA-256 over the dimensions and the IEEE-754 bit patterns of the entries.
pub fn digest(g: &UnitaryGate<f64>) -> String {
    let mut h = Sha256::new();
    for &d in g.space().dims() {
        h.update((d as u64).to_le_bytes());
    }
    for z in g.matrix().as_slice() {
        h.update(z.re.to_le_bytes());
        h.update(z.im.to_le_bytes());
    }
    let hex: String = h.finalize().iter().map(|b| format!("{b:02x}")).collect();
    format!("sha256:{hex}")
}
