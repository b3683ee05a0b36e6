//! Error type shared by all modules.

use thiserror::Error;

/// Crate-wide result alias.
pub type Result<T> = std::result::Result<T, Error>;

/// Everything that can go wrong across the pipeline.
#[derive(Debug, Error)]
pub enum Error {
    /// Malformed input file.
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },

    /// An operation received no data.
    #[error("empty input")]
    EmptyInput,

    /// Fewer points than the operation requires.
    #[error("insufficient points: need {needed}, have {have}")]
    InsufficientPoints { needed: usize, have: usize },

    /// k outside its valid range.
    #[error("invalid k = {k}, valid range is 1..={max}")]
    InvalidK { k: usize, max: usize },

    /// Coordinate dimension does not match the cloud.
    #[error("dimension mismatch: expected {expected}, got {got}")]
    Dimension { expected: usize, got: usize },

    /// Mass parameter outside (0, 1].
    #[error("mass parameter m = {m} must lie in (0, 1]")]
    InvalidMass { m: f64 },

    /// Mass parameter below 1/n, so no sample point contributes.
    #[error("mass parameter m = {m} is below 1/n = {}", 1.0 / *n as f64)]
    MassTooSmall { m: f64, n: usize },

    /// No closed-form oracle for this (space, m) pair.
    #[error("no analytic oracle for {space} with m = {m}")]
    UnsupportedOracle { space: &'static str, m: f64 },

    /// The DTM signature has no Lebesgue density for this pair.
    #[error("the DTM signature of {space} with m = {m} has no Lebesgue density")]
    NoDensity { space: &'static str, m: f64 },

    /// Evaluation point outside the support of the space or density.
    #[error("domain error: {message}")]
    Domain { message: String },

    /// All sample values identical; bandwidth selection impossible.
    #[error("degenerate sample: all values identical")]
    DegenerateSample,

    /// Invalid shape parameters for a sampler.
    #[error("invalid shape: {message}")]
    InvalidShape { message: String },

    /// Loop insertion would consume more points than the fiber has.
    #[error("loops need {needed} points but only {available} are available")]
    TooManyLoops { needed: usize, available: usize },

    /// A collection argument is unusable (too small, mismatched lengths, ...).
    #[error("insufficient input: {message}")]
    InsufficientInput { message: String },

    /// Non-positive variance passed to a KS statistic.
    #[error("invalid variance sigma2 = {sigma2}, must be > 0")]
    InvalidVariance { sigma2: f64 },

    /// Invalid experiment or generator configuration.
    #[error("invalid configuration: {message}")]
    InvalidConfig { message: String },

    /// Underlying I/O failure.
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
}
