//! Structured command reports. The machine form is JSON with every
//! rational serialized as an exact string; rerunning a command on
//! identical input yields byte-identical output.

use serde::Serialize;

use cartier::biext::PairingMatrix;
use cartier::extgroups::{ApproximationWindow, ExactSequenceReport};
use cartier::zlinalg::GroupPresentation;
use cartier::RatMatrix;

pub const TOOL_NAME: &str = "cartier";

/// FNV-1a, 64-bit; stable across platforms and releases.
pub fn input_hash(bytes: &[u8]) -> String {
    let mut hash: u64 = 0xcbf29ce484222325;
    for &b in bytes {
        hash ^= u64::from(b);
        hash = hash.wrapping_mul(0x100000001b3);
    }
    format!("{hash:016x}")
}

#[derive(Debug, Serialize)]
pub struct Report<T: Serialize> {
    pub tool: &'static str,
    pub version: &'static str,
    pub command: &'static str,
    pub input_hash: String,
    pub name: String,
    pub data: T,
}

impl<T: Serialize> Report<T> {
    pub fn new(command: &'static str, input: &[u8], name: String, data: T) -> Self {
        Report {
            tool: TOOL_NAME,
            version: env!("CARGO_PKG_VERSION"),
            command,
            input_hash: input_hash(input),
            name,
            data,
        }
    }

    pub fn to_json(&self) -> String {
        let mut out = serde_json::to_string_pretty(self).expect("reports serialize");
        out.push('\n');
        out
    }
}

#[derive(Debug, Serialize)]
pub struct MotiveData {
    pub lattice_rank: usize,
    pub torus_rank: usize,
    /// rows of the structure matrix, exact rational strings
    pub u: Vec<Vec<String>>,
}

#[derive(Debug, Serialize)]
pub struct WindowData {
    pub primes: Vec<u64>,
    pub denominator_bound: u32,
    /// set when the document window had to be extended to cover `u`
    pub auto_extended: bool,
}

impl WindowData {
    pub fn new(window: &ApproximationWindow, auto_extended: bool) -> Self {
        WindowData {
            primes: window.primes().to_vec(),
            denominator_bound: window.denominator_bound(),
            auto_extended,
        }
    }
}

#[derive(Debug, Serialize)]
pub struct GroupData {
    pub invariant_factors: Vec<String>,
    pub free_rank: usize,
    pub display: String,
}

impl GroupData {
    pub fn new(p: &GroupPresentation) -> Self {
        GroupData {
            invariant_factors: p.invariant_factors.iter().map(|f| f.to_string()).collect(),
            free_rank: p.free_rank,
            display: p.to_string(),
        }
    }
}

pub fn rat_matrix_rows(m: &RatMatrix) -> Vec<Vec<String>> {
    (0..m.rows())
        .map(|r| (0..m.cols()).map(|c| m[(r, c)].to_string()).collect())
        .collect()
}

#[derive(Debug, Serialize)]
pub struct DescribeData {
    pub motive: MotiveData,
    pub dual: MotiveData,
    pub universal_extension: UniversalData,
    pub de_rham: DeRhamData,
    pub weights: WeightReport,
    pub morphisms: Vec<MorphismReport>,
}

#[derive(Debug, Serialize)]
pub struct UniversalData {
    pub vector_rank: usize,
    pub lift_is_canonical: bool,
}

#[derive(Debug, Serialize)]
pub struct DeRhamData {
    pub dim: usize,
    pub basis_labels: Vec<String>,
    pub weight_minus2_rank: usize,
}

#[derive(Debug, Serialize)]
pub struct WeightReport {
    pub gr0_rank: usize,
    pub gr_minus2_rank: usize,
}

#[derive(Debug, Serialize)]
pub struct MorphismReport {
    pub label: String,
    pub valid: bool,
}

#[derive(Debug, Serialize)]
pub struct PairingData {
    pub connection_form: String,
    pub curvature: String,
    pub phi: Vec<Vec<String>>,
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub det: String,
    pub perfect: bool,
    pub unimodular: bool,
    pub weight_blocks_ok: bool,
}

pub fn pairing_labels(phi: &PairingMatrix) -> (Vec<String>, Vec<String>) {
    (phi.row_labels.clone(), phi.col_labels.clone())
}

#[derive(Debug, Serialize)]
pub struct ExtGroupsData {
    pub window: WindowData,
    pub hom_rank: usize,
    pub hom_basis: Vec<Vec<String>>,
    pub hom_nabla_rank: usize,
    pub ext: GroupData,
    pub ext_symbolic_summand: String,
    pub ext_nat: GroupData,
    pub ext_nat_generators: Vec<String>,
}

#[derive(Debug, Serialize)]
pub struct SequenceData {
    pub sequence: String,
    pub window: String,
    pub junctions: Vec<JunctionData>,
    pub all_exact: bool,
}

#[derive(Debug, Serialize)]
pub struct JunctionData {
    pub name: String,
    pub exact: bool,
    pub witness: Option<String>,
}

impl SequenceData {
    pub fn new(report: &ExactSequenceReport) -> Self {
        SequenceData {
            sequence: report.sequence.clone(),
            window: report.window.clone(),
            junctions: report
                .junctions
                .iter()
                .map(|(name, verdict)| JunctionData {
                    name: name.clone(),
                    exact: verdict.is_exact(),
                    witness: match verdict {
                        cartier::extgroups::JunctionVerdict::Exact => None,
                        cartier::extgroups::JunctionVerdict::Failure { witness } => {
                            Some(witness.clone())
                        }
                    },
                })
                .collect(),
            all_exact: report.all_exact(),
        }
    }
}

#[derive(Debug, Serialize)]
pub struct VerifyData {
    pub window: WindowData,
    pub checks: Vec<CheckData>,
    pub all_passed: bool,
}

#[derive(Debug, Serialize)]
pub struct CheckData {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Serialize)]
pub struct CorpusVerifyData {
    pub motives: Vec<CorpusEntryData>,
    pub all_passed: bool,
}

#[derive(Debug, Serialize)]
pub struct CorpusEntryData {
    pub name: String,
    pub window: WindowData,
    pub failed_checks: Vec<String>,
    pub passed: bool,
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn hash_is_stable() {
        assert_eq!(input_hash(b""), "cbf29ce484222325");
        assert_eq!(input_hash(b"a"), "af63dc4c8601ec8c");
        assert_eq!(input_hash(b"cartier"), input_hash(b"cartier"));
        assert_ne!(input_hash(b"a"), input_hash(b"b"));
    }
}
