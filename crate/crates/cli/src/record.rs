//! JSON-lines output records. Reals are rounded to 15 significant digits.

use serde::Serialize;
use tangle_core::oracle::VerificationReport;
use tangle_core::{cal_e, lambda_spectrum, optimal_decomposition, Decomposition, DensityMatrix};

/// Rounds to 15 significant digits.
pub fn sig15(x: f64) -> f64 {
    if x == 0.0 || !x.is_finite() {
        return x;
    }
    format!("{x:.14e}").parse().expect("formatted float parses")
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct ResultRecord {
    pub label: String,
    pub concurrence: f64,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub eof: Option<f64>,
    pub lambdas: [f64; 4],
    pub rank: usize,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub decomposition: Option<DecompositionRecord>,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DecompositionRecord {
    pub members: Vec<MemberRecord>,
    pub check: SelfCheck,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct MemberRecord {
    pub probability: f64,
    /// Subnormalized amplitudes as `[re, im]` pairs; their squared norm is
    /// the probability.
    pub amplitudes: [[f64; 2]; 4],
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SelfCheck {
    /// Frobenius norm of `Σ|w⟩⟨w| - ρ`.
    pub reconstruction_residual: f64,
    pub member_concurrences: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Detail {
    Concurrence,
    Eof,
    Decompose,
}

impl ResultRecord {
    pub fn compute(label: &str, rho: &DensityMatrix, detail: Detail) -> tangle_core::Result<Self> {
        let spectrum = lambda_spectrum(rho);
        let c = spectrum.concurrence();
        let decomposition = match detail {
            Detail::Decompose => Some(DecompositionRecord::new(&optimal_decomposition(rho)?, rho)),
            _ => None,
        };
        Ok(Self {
            label: label.to_owned(),
            concurrence: sig15(c),
            eof: (detail != Detail::Concurrence).then(|| sig15(cal_e(c).expect("clamped concurrence"))),
            lambdas: spectrum.lambdas.map(sig15),
            rank: rho.rank(),
            decomposition,
        })
    }
}

impl DecompositionRecord {
    pub fn new(dec: &Decomposition, rho: &DensityMatrix) -> Self {
        Self {
            members: dec
                .members
                .iter()
                .map(|w| MemberRecord {
                    probability: sig15(w.norm_sqr()),
                    amplitudes: w.amplitudes().map(|z| [sig15(z.re), sig15(z.im)]),
                })
                .collect(),
            check: SelfCheck {
                reconstruction_residual: sig15(dec.reconstruction_error(rho)),
                member_concurrences: dec.member_concurrences().into_iter().map(sig15).collect(),
            },
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct VerifyRecord {
    pub label: String,
    pub concurrence: f64,
    pub formula_value: f64,
    pub constructed_avg_entanglement: f64,
    pub constructed_reconstruction_error: f64,
    pub min_sampled_avg_entanglement: f64,
    pub min_sampled_avg_concurrence: f64,
    pub samples: usize,
    pub violations: usize,
    pub passed: bool,
}

impl VerifyRecord {
    pub fn new(label: &str, r: &VerificationReport) -> Self {
        Self {
            label: label.to_owned(),
            concurrence: sig15(r.concurrence),
            formula_value: sig15(r.formula_value),
            constructed_avg_entanglement: sig15(r.constructed_avg_entanglement),
            constructed_reconstruction_error: sig15(r.constructed_reconstruction_error),
            min_sampled_avg_entanglement: sig15(r.min_sampled_avg_entanglement),
            min_sampled_avg_concurrence: sig15(r.min_sampled_avg_concurrence),
            samples: r.samples,
            violations: r.violations,
            passed: r.passed(),
        }
    }
}

pub fn to_json_line<T: Serialize>(record: &T) -> String {
    serde_json::to_string(record).expect("records contain only finite numbers")
}
