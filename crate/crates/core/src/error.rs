use thiserror::Error;

/// Errors raised by model construction, solvers and the scan engine.
#[derive(Debug, Error)]
pub enum Error {
    #[error("domain error: {0}")]
    Domain(String),

    #[error("eigensolver failed to converge for eigenvalue {index} after {iterations} iterations")]
    NoConvergence { index: usize, iterations: usize },

    #[error("harmonic approximation breaks down at alpha = {alpha}, N = {n_bosons}, v = {seniority}: {reason}")]
    HarmonicBreakdown {
        alpha: f64,
        n_bosons: u32,
        seniority: u32,
        reason: String,
    },

    #[error("index {index} out of range for length {len}")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("ambiguous assignment: {0}")]
    Ambiguous(String),

    #[error("no phase found: {0}")]
    NoPhase(String),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the request.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::NoConvergence { .. }
                | Error::HarmonicBreakdown { .. }
                | Error::Ambiguous(_)
                | Error::NoPhase(_)
        )
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
