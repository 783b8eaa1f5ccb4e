//! Serializable report payloads.

use gatesplit::approx::{ApproxCertificate, ApproxSeparationResult, LocalHamiltonianFamily};
use gatesplit::exact::{SchmidtDecomposition, SeparationResult};
use gatesplit::linalg::Cut;
use gatesplit::{Complex64, Matrix};
use serde::Serialize;

use crate::gatefile::GateFile;

#[derive(Debug, Serialize)]
pub struct Report<R: Serialize> {
    pub command: CommandEcho,
    pub input_digest: String,
    pub result: R,
    pub tolerances: Tolerances,
    pub wall_time_ms: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct CommandEcho {
    pub name: &'static str,
    pub input: String,
    pub validate: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub epsilon: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub t: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub norm: Option<String>,
}

#[derive(Debug, Clone, Copy, Serialize)]
pub struct Tolerances {
    pub schmidt: f64,
    pub scalar: f64,
    pub block: f64,
    pub residual: f64,
    pub unitary: f64,
}

/// `[re, im]`.
pub fn pair(z: Complex64) -> [f64; 2] {
    [z.re, z.im]
}

fn matrix_rows(m: &Matrix) -> Vec<Vec<[f64; 2]>> {
    (0..m.rows()).map(|i| m.row(i).iter().map(|&z| pair(z)).collect()).collect()
}

/// Cut with 1-based sites, e.g. `{1}|{2,3}`.
fn cut_label(c: &Cut) -> String {
    c.to_string()
}

#[derive(Debug, Serialize)]
pub struct SchmidtEntry {
    pub cut: String,
    pub rank: usize,
    pub coefficients: Vec<f64>,
}

impl From<&SchmidtDecomposition<f64>> for SchmidtEntry {
    fn from(s: &SchmidtDecomposition<f64>) -> Self {
        Self { cut: cut_label(&s.cut), rank: s.rank, coefficients: s.coefficients.clone() }
    }
}

#[derive(Debug, Serialize)]
pub struct Separation {
    pub verdict: String,
    pub method: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub factors: Option<Vec<GateFile>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub global_phase: Option<[f64; 2]>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub residual: Option<f64>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub violating_cut: Option<String>,
    pub schmidt: Vec<SchmidtEntry>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub note: Option<String>,
}

impl From<&SeparationResult<f64>> for Separation {
    fn from(r: &SeparationResult<f64>) -> Self {
        Self {
            verdict: r.verdict.to_string(),
            method: r.method.to_string(),
            factors: r.factors.as_ref().map(|fs| fs.iter().map(GateFile::from_gate).collect()),
            global_phase: r.global_phase.map(pair),
            residual: r.residual,
            violating_cut: r.violating_cut.as_ref().map(cut_label),
            schmidt: r.schmidt.iter().map(SchmidtEntry::from).collect(),
            note: r.note.clone(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct StructureCheck {
    /// 1-based site carrying the only non-identity block, or null.
    pub site: Option<usize>,
    pub verdict: &'static str,
}

#[derive(Debug, Serialize)]
pub struct Check {
    pub oracle: Separation,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub structure_check: Option<StructureCheck>,
}

#[derive(Debug, Serialize)]
pub struct Family {
    pub offset: f64,
    pub locals: Vec<Vec<Vec<[f64; 2]>>>,
}

impl From<&LocalHamiltonianFamily<f64>> for Family {
    fn from(f: &LocalHamiltonianFamily<f64>) -> Self {
        Self { offset: f.offset(), locals: f.locals().iter().map(matrix_rows).collect() }
    }
}

#[derive(Debug, Serialize)]
pub struct Certificate {
    pub epsilon: f64,
    pub threshold: f64,
    pub residuals: Vec<f64>,
    pub max_residual: f64,
    pub pass: bool,
}

impl From<&ApproxCertificate<f64>> for Certificate {
    fn from(c: &ApproxCertificate<f64>) -> Self {
        Self {
            epsilon: c.epsilon,
            threshold: c.threshold,
            residuals: c.residuals.clone(),
            max_residual: c.max_residual(),
            pass: c.pass,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct Approx {
    pub t: f64,
    pub family: Family,
    pub factors: Vec<GateFile>,
    pub global_phase: [f64; 2],
    /// Operator norm.
    pub generator_gap: f64,
    pub generator_gap_frobenius: f64,
    /// Operator-norm distance bound.
    pub bound: f64,
    pub norm: String,
    pub generator_gap_in_norm: f64,
    pub bound_in_norm: f64,
    pub measured: f64,
    pub measured_phase_free: f64,
    pub branch_shifted: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub certificate: Option<Certificate>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub within_epsilon: Option<bool>,
}

impl Approx {
    pub fn new(r: &ApproxSeparationResult<f64>, epsilon: Option<f64>) -> Self {
        Self {
            t: r.t,
            family: Family::from(&r.family),
            factors: r.factors.iter().map(GateFile::from_gate).collect(),
            global_phase: pair(r.global_phase),
            generator_gap: r.generator_gap,
            generator_gap_frobenius: r.generator_gap_frobenius,
            bound: r.bound,
            norm: r.norm.to_string(),
            generator_gap_in_norm: r.gap_in_norm,
            bound_in_norm: r.bound_in_norm,
            measured: r.measured,
            measured_phase_free: r.measured_phase_free,
            branch_shifted: r.branch_shifted,
            certificate: r.certificate.as_ref().map(Certificate::from),
            within_epsilon: epsilon.map(|e| r.measured < e),
        }
    }
}
