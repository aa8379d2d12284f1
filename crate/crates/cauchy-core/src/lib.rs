//! Executable form of the boundedness of the Cauchy integral operator
//! `C_D : L^2(boundary of D) -> E^2(D)` on domains with closed analytic
//! boundary.
//!
//! The domain is given as `D = psi(Delta)` for a map `psi` analytic and
//! conformal past the unit circle. The conjugated operator
//! `A = U_psi C_D U~_phi` acting on the circle has the kernel
//!
//! ```text
//! K(z,w) = H(z,w) / (w - z),
//! H(z,w) = (w - z) psi'(w)^{1/2} psi'(z)^{1/2} / (psi(w) - psi(z)),
//! ```
//!
//! with `H` analytic across the diagonal. Expanding
//! `H(z,w) = sum a_mn z^m w^n` by double contour integration turns `A`
//! into the absolutely convergent operator series
//! `sum a_mn M_m C_Delta N_n` built from monomial multipliers and the
//! Riesz projection, with `||A|| <= sum |a_mn|`. This crate computes the
//! coefficients, certifies the geometric bound and tail, applies the
//! series operator, and cross-validates it against direct quadrature of
//! the boundary integral.
//!
//! Modules follow the pipeline: [`power_series`] and [`domain`] set up
//! `psi` and its certified radius, [`boundary`] carries circle/curve data
//! and the projection, [`cauchy`] holds the quadrature operators,
//! [`kernel`] extracts and bounds the coefficients, [`operator`] assembles
//! the series operator, and [`verify`]/[`report`] run the quantitative
//! checks behind the `cauchy` CLI.

#![allow(clippy::needless_range_loop)]

pub mod boundary;
pub mod cauchy;
pub mod cli;
pub mod domain;
pub mod error;
pub mod fft;
pub mod kernel;
pub mod operator;
pub mod power_series;
pub mod report;
pub mod util;
pub mod verify;

pub use boundary::{BoundaryFunction, FourierCoefficients, HardyFunction};
pub use cauchy::{
    cauchy_representation_check, cauchy_transform_domain, direct_conjugated_operator,
    transplant_boundary, transplant_interior, InteriorEvaluation, TransplantDirection,
};
pub use domain::{
    estimate_radius, load_domain, preset, validate_conformal, AnalyticDomain, DomainSpec,
    RadiiPair, ValidationReport,
};
pub use error::{Error, Result};
pub use kernel::{
    coefficient_bound, kernel_coefficients, kernel_coefficients_auto, kernel_eval, sup_norm_h,
    tail_sum_bound, KernelExpansion,
};
pub use operator::{PartialSumDeviation, SeriesOperator};
pub use power_series::PowerSeries;
