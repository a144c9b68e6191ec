use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    /// The superposition cancels (or nearly cancels) to the zero vector.
    #[error("degenerate superposition: squared norm {norm_sqr:e} relative to coefficient scale {scale:e}")]
    DegenerateState { norm_sqr: f64, scale: f64 },

    #[error("parameter regime violated: {0}")]
    RegimeViolation(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("Fock cutoff {cutoff} too small: {leakage:e} probability outside the trusted levels")]
    CutoffTooSmall { cutoff: usize, leakage: f64 },

    #[error("measurement outcome has vanishing probability {0:e}")]
    ZeroProbabilityOutcome(f64),

    #[error("operation needs a walk label chain, found a {0} chain")]
    WrongChain(&'static str),

    #[error("config error: {0}")]
    Config(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// Process exit code used by the command-line front end.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Config(_) | Error::InvalidParameter(_) | Error::RegimeViolation(_) => 2,
            Error::DegenerateState { .. }
            | Error::CutoffTooSmall { .. }
            | Error::ZeroProbabilityOutcome(_) => 3,
            Error::WrongChain(_) | Error::Io(_) | Error::Json(_) => 1,
        }
    }
}
