use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("evanescent {photon} wave: |transverse| = {transverse:.6e} rad/m exceeds k = {k_max:.6e} rad/m")]
    EvanescentWave {
        photon: &'static str,
        transverse: f64,
        k_max: f64,
    },

    #[error("{quantity} is infinite for a zero angle")]
    DegenerateAngle { quantity: &'static str },

    #[error("spiral sum did not reach |J_n| < {tolerance:e} for argument {argument} within order {max_order}")]
    TruncationNotConverged {
        argument: f64,
        max_order: usize,
        tolerance: f64,
    },

    #[error("bessel J_{order}({x}) is outside the supported range |n| <= 200, |x| <= 1e4")]
    OutOfSupportedRange { order: i32, x: f64 },

    #[error("operation requires scenario {expected}, got {actual}")]
    ScenarioMismatch {
        expected: &'static str,
        actual: &'static str,
    },

    #[error("quadrature did not converge: relative change {change:e} > tolerance {tolerance:e}")]
    QuadratureNotConverged { change: f64, tolerance: f64 },

    #[error("requested |m| up to {max_m} needs n_phi >= {required}, grid has {n_phi}")]
    NyquistViolation {
        max_m: i32,
        n_phi: usize,
        required: usize,
    },

    #[error("field power {power:e} is too small to normalize")]
    ZeroField { power: f64 },

    #[error(
        "edge weight {weight:e} at m = {m} exceeds tail tolerance {tolerance:e}; widen the m range"
    )]
    SpectrumTruncated { m: i32, weight: f64, tolerance: f64 },

    #[error("invalid grid: {0}")]
    InvalidGrid(String),

    #[error("invalid config field `{field}`: {message}")]
    ConfigInvalid { field: String, message: String },

    #[error("i/o error: {0}")]
    Io(String),
}

impl Error {
    pub fn config(field: impl Into<String>, message: impl Into<String>) -> Self {
        Error::ConfigInvalid {
            field: field.into(),
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Error {
    fn from(e: std::io::Error) -> Self {
        Error::Io(e.to_string())
    }
}
