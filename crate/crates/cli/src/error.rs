use qcluster_core::Error as CoreError;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Input(String),
    /// The computation finished and the verdict is negative; the report is on stdout.
    #[error("{0}")]
    Verdict(String),
    #[error("internal error: {0}")]
    Internal(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) => 1,
            CliError::Verdict(_) => 2,
            CliError::Internal(_) => 3,
        }
    }
}

impl From<CoreError> for CliError {
    fn from(e: CoreError) -> Self {
        use CoreError::*;
        match e {
            InvalidSeed(_)
            | IndexOutOfRange { .. }
            | FrozenMutation(_)
            | NonIntegralExchange(..)
            | SeedMismatch
            | NotAPolynomial
            | DegenerateExchange(_)
            | InvalidFolding(_)
            | NotInvariant
            | InvalidGluing(_)
            | HypothesisViolated { .. } => CliError::Input(e.to_string()),
            NotLaurent(_) | TermLimitExceeded { .. } => CliError::Verdict(e.to_string()),
            NotDivisible | NotSubtractionFree | ZeroElement | ConstructionFailed(_) => CliError::Internal(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::Input(format!("invalid JSON: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::Input(e.to_string())
    }
}
