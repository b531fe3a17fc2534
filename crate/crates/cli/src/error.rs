use serde::Serialize;
use thiserror::Error;
use stressflex_core::polytope::{OffError, PolytopeError};

#[derive(Debug, Error)]
pub enum CliError {
    /// Bad flags, unreadable or malformed input: exit code 2.
    #[error("{message}")]
    Input { message: String, line: Option<usize> },
    /// The pipeline ran but an expected property failed: exit code 1.
    #[error("{0}")]
    Analysis(String),
    #[error("cannot write output: {0}")]
    Io(#[from] std::io::Error),
}

impl CliError {
    pub fn input(message: impl Into<String>) -> Self {
        CliError::Input { message: message.into(), line: None }
    }

    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input { .. } => 2,
            CliError::Analysis(_) | CliError::Io(_) => 1,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self {
            CliError::Input { .. } => "input",
            CliError::Analysis(_) => "analysis",
            CliError::Io(_) => "io",
        }
    }

    /// Machine-readable form written to stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Body<'a> {
            kind: &'a str,
            message: String,
            #[serde(skip_serializing_if = "Option::is_none")]
            line: Option<usize>,
        }
        #[derive(Serialize)]
        struct Wrapper<'a> {
            schema: u32,
            error: Body<'a>,
        }
        let line = match self {
            CliError::Input { line, .. } => *line,
            _ => None,
        };
        crate::json::to_string(&Wrapper { schema: 1, error: Body { kind: self.kind(), message: self.to_string(), line } })
    }
}

impl From<PolytopeError> for CliError {
    fn from(e: PolytopeError) -> Self {
        match e {
            PolytopeError::Off(OffError { line, .. }) => CliError::Input { message: e.to_string(), line: Some(line) },
            other => CliError::input(other.to_string()),
        }
    }
}
