//! Error types shared across the crate.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong while building domains, expanding kernels,
/// or running the verification suites.
#[derive(Debug, Error)]
pub enum Error {
    /// Differentiating a series of order zero.
    #[error("series order too low: {0}")]
    DegreeTooLow(String),

    /// Dividing by a series whose constant term vanishes.
    #[error("division by a series with vanishing constant term")]
    DivisionBySingularSeries,

    /// Logarithm of a series whose constant term vanishes.
    #[error("logarithm of a series with vanishing constant term")]
    LogOfVanishingSeries,

    /// The derivative of the candidate map vanishes inside the checked disc.
    #[error("map is not conformal on the disc of radius {r_check}: {detail}")]
    NotConformal { r_check: f64, detail: String },

    /// The candidate map is not injective on the checked circle.
    #[error("map is not injective on the circle of radius {r_check}: {detail}")]
    NotInjective { r_check: f64, detail: String },

    /// No radius R > 1 of analyticity + injectivity could be certified.
    #[error("no radius R > 1 certifiable for this map (got {0})")]
    BoundaryNotAnalytic(f64),

    /// Newton inversion of the conformal map failed to converge.
    #[error("inversion of the conformal map diverged at w = {w}")]
    InversionDiverged { w: num_complex::Complex64 },

    /// Evaluation point too close to the boundary for interior quadrature.
    #[error("point too close to the boundary: distance {distance:.3e} < delta_min {delta_min:.3e}")]
    NearBoundary { distance: f64, delta_min: f64 },

    /// Probe outside the contract region of an operator evaluation.
    #[error("probe |z| = {modulus} outside the allowed radius {max_modulus}")]
    ProbeOutOfRange { modulus: f64, max_modulus: f64 },

    /// psi(w) = psi(z) for w != z; precluded by the injectivity certificate.
    #[error("kernel denominator vanished away from the diagonal (non-injective input)")]
    KernelSingular,

    /// Radii must satisfy 1 < r < s < R.
    #[error("invalid radii: need 1 < r < s < R, got r = {r}, s = {s}, R = {big_r}")]
    RadiiError { r: f64, s: f64, big_r: f64 },

    /// Sample counts must be powers of two within the documented range.
    #[error("invalid size: {0}")]
    SizeError(String),

    /// Expansion was not produced from the domain it is being combined with.
    #[error("expansion provenance does not match the domain")]
    ProvenanceMismatch,

    /// Bad configuration value, unknown key, or malformed input file.
    #[error("configuration error: {0}")]
    Config(String),

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),

    /// Malformed JSON input.
    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Short machine-readable kind tag used in CLI error output.
    pub fn kind(&self) -> &'static str {
        match self {
            Error::DegreeTooLow(_) => "DegreeTooLow",
            Error::DivisionBySingularSeries => "DivisionBySingularSeries",
            Error::LogOfVanishingSeries => "LogOfVanishingSeries",
            Error::NotConformal { .. } => "NotConformal",
            Error::NotInjective { .. } => "NotInjective",
            Error::BoundaryNotAnalytic(_) => "BoundaryNotAnalytic",
            Error::InversionDiverged { .. } => "InversionDiverged",
            Error::NearBoundary { .. } => "NearBoundary",
            Error::ProbeOutOfRange { .. } => "ProbeOutOfRange",
            Error::KernelSingular => "KernelSingular",
            Error::RadiiError { .. } => "RadiiError",
            Error::SizeError(_) => "SizeError",
            Error::ProvenanceMismatch => "ProvenanceMismatch",
            Error::Config(_) => "ConfigError",
            Error::Io(_) => "IoError",
            Error::Json(_) => "JsonError",
        }
    }
}
