use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParams(String),

    #[error("charge product e*gm/(hbar*c) = {value} is not an integer or half-integer")]
    NotHalfInteger { value: f64 },

    #[error("coupling Z*alpha = {z_alpha} must be below 1/2")]
    CouplingTooLarge { z_alpha: f64 },

    #[error("domain error: {0}")]
    DomainError(String),

    #[error("principal number {principal} is not below the cap {cap}")]
    OutOfSpectrum { principal: f64, cap: f64 },

    #[error("invalid polynomial degree {0}")]
    InvalidDegree(i64),

    #[error("hypergeometric series did not converge after {terms} terms")]
    NoConvergence { terms: usize },

    #[error("point theta = {theta} lies outside the {chart} chart")]
    OutOfChart { theta: f64, chart: &'static str },

    #[error("integral diverges: {0}")]
    DivergentIntegral(String),

    #[error("integrator failure: {0}")]
    StiffnessFailure(String),

    #[error("decay exponent is not real and positive (lambda^2 = {lambda_sq})")]
    BranchError { lambda_sq: f64 },

    #[error("no level with n = {n}, 2l = {two_l} in the spectrum")]
    NoSuchLevel { n: u64, two_l: u64 },
}

impl Error {
    /// Short variant name, used by the command line front end.
    pub fn name(&self) -> &'static str {
        match self {
            Error::InvalidParams(_) => "InvalidParams",
            Error::NotHalfInteger { .. } => "NotHalfInteger",
            Error::CouplingTooLarge { .. } => "CouplingTooLarge",
            Error::DomainError(_) => "DomainError",
            Error::OutOfSpectrum { .. } => "OutOfSpectrum",
            Error::InvalidDegree(_) => "InvalidDegree",
            Error::NoConvergence { .. } => "NoConvergence",
            Error::OutOfChart { .. } => "OutOfChart",
            Error::DivergentIntegral(_) => "DivergentIntegral",
            Error::StiffnessFailure(_) => "StiffnessFailure",
            Error::BranchError { .. } => "BranchError",
            Error::NoSuchLevel { .. } => "NoSuchLevel",
        }
    }
}

pub type Result<T> = std::result::Result<T, Error>;
