use std::path::PathBuf;

use thiserror::Error;

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] photomag_core::Error),
    #[error("config line {line}: {message}")]
    ConfigLine { line: usize, message: String },
    #[error("config: {0}")]
    Config(String),
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{0}")]
    Format(String),
}

impl CliError {
    pub fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// Short stable identifier for the machine-readable error line.
    pub fn kind(&self) -> &'static str {
        use photomag_core::Error as E;
        match self {
            CliError::Core(e) => match e {
                E::Domain(_) => "domain",
                E::NoConvergence { .. } => "no-convergence",
                E::Integration { .. } => "integration",
                E::Uncalibrated => "uncalibrated",
                E::Calibration { .. } => "calibration",
                E::Fit(_) => "fit",
                E::Config(_) => "config",
            },
            CliError::ConfigLine { .. } | CliError::Config(_) => "config",
            CliError::Io { .. } => "io",
            CliError::Format(_) => "format",
        }
    }

    /// `error kind=<kind> message="<text>"` on one line.
    pub fn machine_line(&self) -> String {
        let msg = self.to_string().replace('\\', "\\\\").replace('"', "\\\"").replace('\n', " ");
        format!("error kind={} message=\"{}\"", self.kind(), msg)
    }
}
