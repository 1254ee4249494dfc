use thiserror::Error;

/// Process exit code for a successful run.
pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_INFEASIBLE: i32 = 3;
pub const EXIT_INTERNAL: i32 = 4;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{stage}: {message}")]
    Input { stage: &'static str, message: String },
    #[error("{stage}: {message}")]
    Infeasible { stage: &'static str, message: String },
    #[error("{stage}: {message}")]
    Internal { stage: &'static str, message: String },
}

impl CliError {
    pub fn input(stage: &'static str, message: impl Into<String>) -> CliError {
        CliError::Input { stage, message: message.into() }
    }

    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Input { .. } => EXIT_INPUT,
            CliError::Infeasible { .. } => EXIT_INFEASIBLE,
            CliError::Internal { .. } => EXIT_INTERNAL,
        }
    }

    /// Attaches a stage label to a library error and sorts it into an exit class.
    pub fn from_core(stage: &'static str, e: sgcm::Error) -> CliError {
        use sgcm::Error as E;
        let message = e.to_string();
        match e {
            E::Disconnected
            | E::TooLarge { .. }
            | E::InvalidGraph(_)
            | E::InvalidPlacement(_)
            | E::VariantNotApplicable(_)
            | E::OutsideUniverse(_) => CliError::Input { stage, message },
            E::CountExceedsPlacements { .. }
            | E::TooFewVertices { .. }
            | E::StubSumMismatch(_)
            | E::DegreeSumMismatch { .. }
            | E::InfeasibleLambda { .. }
            | E::Infeasible(_)
            | E::RejectionCap { .. }
            | E::GuardRail(_) => CliError::Infeasible { stage, message },
            E::NotACover => CliError::Internal { stage, message },
        }
    }

    pub fn io(stage: &'static str, path: &std::path::Path, e: std::io::Error) -> CliError {
        CliError::input(stage, format!("{}: {e}", path.display()))
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
