//! Metric-structure analysis: subspace classification, commutants,
//! indecomposability and full orthogonal decomposition, aggregated into a
//! serializable structure report.

mod commutant;
mod decompose;

pub use commutant::{centre_of, commutant, radical_quotient_dim, CommutantBasis};
pub use decompose::{
    decompose, indecomposability, restrict_to_ideal, DecompositionFactor, DecompositionResult,
    FactorVerdict, Indecomposability,
};

use serde::Serialize;

use crate::algebra::MetricNAlgebra;
use crate::error::{Error, Result};
use crate::linalg::Subspace;

/// Position of a subspace relative to its orthogonal complement.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SubspaceClass {
    /// `s n s^perp = 0`.
    Nondegenerate,
    /// `s` is contained in `s^perp`.
    Isotropic,
    /// `s` contains `s^perp`.
    Coisotropic,
    Mixed,
}

impl std::fmt::Display for SubspaceClass {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let name = match self {
            SubspaceClass::Nondegenerate => "nondegenerate",
            SubspaceClass::Isotropic => "isotropic",
            SubspaceClass::Coisotropic => "coisotropic",
            SubspaceClass::Mixed => "mixed",
        };
        f.write_str(name)
    }
}

/// Classifies `s` by its intersection with `s^perp`. A lagrangian subspace
/// (equal to its complement) reports as isotropic.
pub fn classify_subspace(malg: &MetricNAlgebra, s: &Subspace) -> Result<SubspaceClass> {
    if s.ambient_dim() != malg.dim() {
        return Err(Error::DimensionMismatch {
            expected: malg.dim(),
            found: s.ambient_dim(),
        });
    }
    let perp = malg.form.orthogonal_complement(s)?;
    let meet = s.intersect(&perp)?;
    Ok(if meet.is_zero() {
        SubspaceClass::Nondegenerate
    } else if perp.contains(s) {
        SubspaceClass::Isotropic
    } else if s.contains(&perp) {
        SubspaceClass::Coisotropic
    } else {
        SubspaceClass::Mixed
    })
}

/// Summary of one decomposition factor, for reports.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct FactorSummary {
    pub dim: usize,
    pub signature: (usize, usize, usize),
    pub verdict: FactorVerdict,
}

/// Serializable summary of a decomposition.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct DecompositionSummary {
    pub factors: Vec<FactorSummary>,
    pub verified: bool,
}

/// Aggregated structural data of a metric algebra. Field order is the
/// stable JSON contract of `analyze --json`.
#[derive(Clone, Debug, Serialize, PartialEq, Eq)]
pub struct StructureReport {
    pub arity: usize,
    pub dim: usize,
    pub signature: (usize, usize, usize),
    pub jacobi_ok: bool,
    pub metric_ok: bool,
    pub centre_dim: usize,
    pub derived_dim: usize,
    pub centreperp_equals_derived: bool,
    pub decomposition: Option<DecompositionSummary>,
}

impl StructureReport {
    /// True when the report is internally inconsistent: for a valid metric
    /// algebra the orthogonal complement of the centre is the derived
    /// ideal, so a report with both checks passing and the equality failing
    /// indicates a defect.
    pub fn internally_inconsistent(&self) -> bool {
        self.jacobi_ok && self.metric_ok && !self.centreperp_equals_derived
    }
}

impl std::fmt::Display for StructureReport {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        writeln!(f, "arity: {}", self.arity)?;
        writeln!(f, "dim: {}", self.dim)?;
        writeln!(
            f,
            "signature: ({}, {}, {})",
            self.signature.0, self.signature.1, self.signature.2
        )?;
        writeln!(f, "jacobi: {}", if self.jacobi_ok { "ok" } else { "violated" })?;
        writeln!(
            f,
            "metric: {}",
            if self.metric_ok { "ok" } else { "violated or degenerate" }
        )?;
        writeln!(f, "centre dim: {}", self.centre_dim)?;
        writeln!(f, "derived dim: {}", self.derived_dim)?;
        writeln!(
            f,
            "centre-perp equals derived: {}",
            if self.centreperp_equals_derived { "yes" } else { "no" }
        )?;
        match &self.decomposition {
            None => writeln!(f, "decomposition: skipped")?,
            Some(d) => {
                writeln!(
                    f,
                    "decomposition: {} factor{}",
                    d.factors.len(),
                    if d.factors.len() == 1 { "" } else { "s" }
                )?;
                for factor in &d.factors {
                    writeln!(
                        f,
                        "  - dim {}, signature ({}, {}, {}), verdict {}",
                        factor.dim,
                        factor.signature.0,
                        factor.signature.1,
                        factor.signature.2,
                        factor.verdict
                    )?;
                }
                writeln!(f, "reassembly verified: {}", if d.verified { "yes" } else { "no" })?;
            }
        }
        Ok(())
    }
}

/// Fills every report field; never fails. Degenerate forms are flagged
/// through `metric_ok = false` and skip the decomposition.
pub fn structure_report(malg: &MetricNAlgebra) -> StructureReport {
    let signature = malg.signature();
    let jacobi_ok = malg.algebra.check_jacobi().is_empty();
    let metric_ok = match malg.check_metric() {
        Ok(report) => report.is_empty(),
        Err(_) => false,
    };
    let centre = malg.algebra.centre();
    let derived = malg.algebra.derived_ideal();
    let centreperp_equals_derived = malg
        .form
        .orthogonal_complement(&centre)
        .map(|perp| perp == derived)
        .unwrap_or(false);
    let decomposition = if jacobi_ok && metric_ok {
        decompose::decompose_unchecked(malg).ok().map(|result| {
            DecompositionSummary {
                factors: result
                    .factors
                    .iter()
                    .map(|f| FactorSummary {
                        dim: f.algebra.dim(),
                        signature: f.algebra.signature(),
                        verdict: f.verdict,
                    })
                    .collect(),
                verified: result.reassembly_verified,
            }
        })
    } else {
        None
    };
    StructureReport {
        arity: malg.arity(),
        dim: malg.dim(),
        signature,
        jacobi_ok,
        metric_ok,
        centre_dim: centre.rank(),
        derived_dim: derived.rank(),
        centreperp_equals_derived,
        decomposition,
    }
}
