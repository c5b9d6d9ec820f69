use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("source and target coincide")]
    DegeneratePair,

    #[error("point set is empty")]
    EmptyPointSet,

    #[error("need at least two points, got {0}")]
    TooFewPoints(usize),

    #[error("invalid density: {0}")]
    InvalidDensity(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("theta = {theta} is outside the admissible range of {kind}")]
    OutOfRangeTheta { kind: String, theta: f64 },

    #[error("Euler iterate left the domain at step {step}")]
    StepOutOfDomain { step: usize },

    #[error("segment leaves the inset domain")]
    SegmentLeavesDomain,

    #[error("limiting path leaves the inset domain")]
    GammaLeavesInset,

    #[error("no (s, t) pair passes the inset check")]
    NoValidPairs,

    #[error("no input rows")]
    EmptyInput,

    #[error("parse error: {0}")]
    Parse(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    /// Whether the error stems from user input (configuration, parameters,
    /// files) rather than from a failure during computation.
    pub fn is_config_error(&self) -> bool {
        matches!(
            self,
            Error::InvalidDensity(_)
                | Error::InvalidParameter(_)
                | Error::OutOfRangeTheta { .. }
                | Error::Parse(_)
                | Error::Json(_)
                | Error::NoValidPairs
                | Error::DegeneratePair
                | Error::SegmentLeavesDomain
                | Error::GammaLeavesInset
        )
    }
}
