use thiserror::Error;

/// Errors raised by the laboratory.
#[derive(Debug, Error)]
pub enum Error {
    #[error("parse error: {0}")]
    Parse(#[from] serde_json::Error),

    /// A measure or command input failed validation; `path` names the offending field.
    #[error("validation error at `{path}`: {message}")]
    Validation { path: String, message: String },

    #[error("domain error: {0}")]
    Domain(String),

    #[error("adaptive quadrature on [{a}, {b}] did not reach tolerance {tol:e}")]
    Quadrature { a: f64, b: f64, tol: f64 },

    #[error("psi inversion failed at x = {x}: {reason}")]
    Inversion { x: f64, reason: String },

    #[error("window [{lo}, {hi}] too small: derivative does not point inward at its edges")]
    WindowTooSmall { lo: f64, hi: f64 },

    #[error("degenerate profile: all density values are zero")]
    DegenerateProfile,

    #[error("bracket error: {0}")]
    Bracket(String),

    #[error("hypothesis error: {0}")]
    Hypothesis(String),

    #[error("no non-unimodality witness found at t = {t}")]
    NoWitness { t: f64 },
}

impl Error {
    pub(crate) fn validation(path: impl Into<String>, message: impl Into<String>) -> Self {
        Error::Validation {
            path: path.into(),
            message: message.into(),
        }
    }
}

pub type Result<T, E = Error> = std::result::Result<T, E>;
