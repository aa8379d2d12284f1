//! The `report` pipeline: validate the domain, extract coefficients,
//! compute the norm bounds, run every verification suite, and emit one
//! JSON document. Field order is fixed by the struct layout and all
//! randomness is seeded, so identical configurations serialize to
//! identical bytes.

use serde::{Deserialize, Serialize};

use crate::domain::{validate_conformal, AnalyticDomain, ValidationReport};
use crate::error::Result;
use crate::kernel::kernel_coefficients_auto;
use crate::operator::SeriesOperator;
use crate::verify::{
    boundedness_suite, convergence_suite, equivalence_suite, isometry_suite,
    kernel_invariants_suite, representation_suite, BoundednessSuite, ConvergenceSuite,
    EquivalenceSuite, IsometrySuite, KernelInvariantsSuite, RepresentationSuite, Tolerances,
};

/// Summary of the extracted expansion carried in the report.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct ExpansionSummary {
    #[serde(rename = "M")]
    pub m: usize,
    pub grid_n: usize,
    pub r: f64,
    pub s: f64,
    pub sup_h: f64,
    pub abs_sum: f64,
    pub tail_bound: f64,
    pub norm_upper: f64,
    pub warnings: Vec<String>,
}

/// The one-document output of the full pipeline.
#[derive(Clone, Debug, Serialize, Deserialize)]
pub struct PipelineReport {
    pub domain: String,
    #[serde(rename = "R")]
    pub radius: f64,
    pub seed: u64,
    pub validation: ValidationReport,
    pub expansion: ExpansionSummary,
    pub kernel_invariants: KernelInvariantsSuite,
    pub representation: RepresentationSuite,
    pub equivalence: EquivalenceSuite,
    pub isometry: IsometrySuite,
    pub convergence: ConvergenceSuite,
    pub boundedness: BoundednessSuite,
    pub pass: bool,
}

/// Runs the full pipeline on one domain with the given seed and
/// tolerances.
pub fn run_pipeline(dom: &AnalyticDomain, seed: u64, tol: &Tolerances) -> Result<PipelineReport> {
    let validation = validate_conformal(dom.psi(), dom.radius())?;
    let expansion = kernel_coefficients_auto(dom)?;
    let summary = ExpansionSummary {
        m: expansion.truncation(),
        grid_n: expansion.grid_n,
        r: expansion.radii.r,
        s: expansion.radii.s,
        sup_h: expansion.sup_h,
        abs_sum: expansion.abs_sum,
        tail_bound: expansion.tail_bound,
        norm_upper: expansion.norm_upper(),
        warnings: expansion.warnings.clone(),
    };
    let kernel_invariants = kernel_invariants_suite(&expansion);
    let op = SeriesOperator::new(dom.clone(), expansion)?;

    let representation = representation_suite(dom, 8, 16, 256, seed, tol.representation)?;
    let equivalence = equivalence_suite(&op, 16, 20, 512, seed, tol.equivalence)?;
    let isometry = isometry_suite(dom, 100, 256, seed, tol.isometry)?;
    let schedule: Vec<usize> =
        [2usize, 4, 8, 16].iter().copied().filter(|&m| m <= op.truncation()).collect();
    let convergence = convergence_suite(&op, &schedule, seed, tol.convergence_slack)?;
    let boundedness = boundedness_suite(&op, 500, seed, tol.boundedness_slack)?;

    let pass = kernel_invariants.pass
        && representation.pass
        && equivalence.pass
        && isometry.pass
        && convergence.pass
        && boundedness.pass;

    Ok(PipelineReport {
        domain: dom.name().to_string(),
        radius: dom.radius(),
        seed,
        validation,
        expansion: summary,
        kernel_invariants,
        representation,
        equivalence,
        isometry,
        convergence,
        boundedness,
        pass,
    })
}
