use serde::Serialize;
use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("cannot read config {path}: {source}")]
    ReadConfig {
        path: String,
        source: std::io::Error,
    },

    #[error("invalid config: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("invalid config: {0}")]
    Config(String),

    #[error("cannot write {path}: {message}")]
    Write { path: String, message: String },

    /// A computation rejected its input (bad shapes, parameters, hypotheses).
    #[error("{0}")]
    Input(idcyl_core::Error),

    /// A computation could not establish its result (quadrature, bounds).
    #[error("{0}")]
    Numerical(idcyl_core::Error),

    /// An object failed one of its expected properties.
    #[error("{0}")]
    Property(idcyl_core::Error),
}

impl From<idcyl_core::Error> for CliError {
    fn from(e: idcyl_core::Error) -> Self {
        use idcyl_core::Error as E;
        match e {
            E::QuadratureNotConverged { .. }
            | E::GrowthBoundViolated { .. }
            | E::BoundViolated { .. } => CliError::Numerical(e),
            _ => CliError::Input(e),
        }
    }
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Write {
            path: "csv".into(),
            message: e.to_string(),
        }
    }
}

#[derive(Serialize)]
pub struct ErrorRecord<'a> {
    pub kind: &'a str,
    pub message: String,
    pub exit_code: i32,
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Numerical(_) | CliError::Property(_) => 1,
            _ => 2,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::ReadConfig { .. } | CliError::Parse(_) | CliError::Config(_) => "config",
            CliError::Write { .. } => "io",
            CliError::Input(_) => "input",
            CliError::Numerical(_) => "numerical",
            CliError::Property(_) => "property",
        }
    }

    pub fn record(&self) -> ErrorRecord<'_> {
        ErrorRecord {
            kind: self.kind(),
            message: self.to_string(),
            exit_code: self.exit_code(),
        }
    }
}

pub type CliResult<T> = std::result::Result<T, CliError>;
