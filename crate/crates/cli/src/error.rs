use std::path::PathBuf;

/// Process exit status.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExitStatus {
    Success = 0,
    AssertionFailed = 1,
    InputError = 2,
    NonConvergence = 3,
}

impl ExitStatus {
    pub fn code(self) -> i32 {
        self as i32
    }
}

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("invalid input: {0}")]
    Input(String),
    #[error("cannot access {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
    #[error("malformed JSON in {path}: {source}")]
    Json {
        path: PathBuf,
        #[source]
        source: serde_json::Error,
    },
    #[error("csv output failed: {0}")]
    Csv(#[from] csv::Error),
    #[error(transparent)]
    Core(#[from] debranges_core::Error),
}

impl CliError {
    pub fn exit_status(&self) -> ExitStatus {
        use debranges_core::Error as E;
        match self {
            CliError::Core(E::NonConvergence(_) | E::BracketViolation { .. }) => {
                ExitStatus::NonConvergence
            }
            _ => ExitStatus::InputError,
        }
    }
}

pub type CliResult<T> = Result<T, CliError>;

#[cfg(test)]
mod tests {
    use super::*;
    use debranges_core::Error;

    #[test]
    fn solver_failures_map_to_three() {
        let e = CliError::Core(Error::NonConvergence("stalled".into()));
        assert_eq!(e.exit_status().code(), 3);
        assert_eq!(CliError::Input("x".into()).exit_status().code(), 2);
    }
}
