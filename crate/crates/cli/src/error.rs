use std::path::Path;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Unreadable or invalid input, located by file and line when possible.
    #[error("{origin}{}: {message}", line.map(|l| format!(":{l}")).unwrap_or_default())]
    Input {
        origin: String,
        line: Option<usize>,
        message: String,
    },

    #[error("{path}: {source}")]
    Io {
        path: String,
        source: std::io::Error,
    },

    #[error("invalid arguments: {0}")]
    Usage(String),

    #[error(transparent)]
    Core(#[from] markovrec::Error),
}

impl CliError {
    pub fn input(
        origin: impl Into<String>,
        line: Option<usize>,
        message: impl Into<String>,
    ) -> Self {
        CliError::Input {
            origin: origin.into(),
            line,
            message: message.into(),
        }
    }

    pub fn io(path: &Path, source: std::io::Error) -> Self {
        CliError::Io {
            path: path.display().to_string(),
            source,
        }
    }

    /// 1 for negative outcomes of a well-formed request, 2 for everything
    /// the caller has to fix.
    pub fn exit_code(&self) -> i32 {
        use markovrec::Error as E;
        match self {
            CliError::Core(
                E::NonConvergence { .. }
                | E::Infeasible { .. }
                | E::HypothesisViolated { .. }
                | E::NoEstimator
                | E::RecoveryStep { .. }
                | E::IncompatibleEstimator { .. },
            ) => 1,
            _ => 2,
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
