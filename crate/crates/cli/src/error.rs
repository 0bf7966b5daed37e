//! Error reporting with stable exit codes.

use holonomy_sim::HolonomyError;
use loopspec::LoopspecError;
use masterfield::MasterError;
use mc_engine::McError;
use serde_json::json;
use series_engine::SeriesError;
use walk_engine::WalkError;

/// Failure classes and their process exit codes.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ErrorKind {
    /// Malformed input: word syntax, areas, flags, job files. Exit code 2.
    Parse,
    /// The engine cannot handle the request, e.g. walk with inverses. Exit
    /// code 3.
    Refusal,
    /// A computation budget was exceeded. Exit code 4.
    Budget,
}

impl ErrorKind {
    pub fn code(self) -> i32 {
        match self {
            ErrorKind::Parse => 2,
            ErrorKind::Refusal => 3,
            ErrorKind::Budget => 4,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            ErrorKind::Parse => "parse_error",
            ErrorKind::Refusal => "engine_refusal",
            ErrorKind::Budget => "budget_exceeded",
        }
    }
}

#[derive(Clone, Debug, PartialEq, thiserror::Error)]
#[error("{message}")]
pub struct CliError {
    pub kind: ErrorKind,
    pub message: String,
}

impl CliError {
    pub fn parse(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Parse,
            message: message.into(),
        }
    }

    pub fn refusal(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Refusal,
            message: message.into(),
        }
    }

    pub fn budget(message: impl Into<String>) -> Self {
        Self {
            kind: ErrorKind::Budget,
            message: message.into(),
        }
    }

    pub fn code(&self) -> i32 {
        self.kind.code()
    }

    /// Machine-readable form written to standard error.
    pub fn to_json(&self) -> serde_json::Value {
        json!({
            "error": {
                "code": self.code(),
                "kind": self.kind.as_str(),
                "message": self.message,
            }
        })
    }
}

impl From<LoopspecError> for CliError {
    fn from(e: LoopspecError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<SeriesError> for CliError {
    fn from(e: SeriesError) -> Self {
        match e {
            SeriesError::Budget { .. } => CliError::budget(e.to_string()),
            SeriesError::Word(w) => w.into(),
            SeriesError::Step(_) => CliError::parse(e.to_string()),
            _ => CliError::refusal(e.to_string()),
        }
    }
}

impl From<McError> for CliError {
    fn from(e: McError) -> Self {
        CliError::parse(e.to_string())
    }
}

impl From<HolonomyError> for CliError {
    fn from(e: HolonomyError) -> Self {
        match e {
            HolonomyError::Matrix(_) => CliError::refusal(e.to_string()),
            _ => CliError::parse(e.to_string()),
        }
    }
}

impl From<WalkError> for CliError {
    fn from(e: WalkError) -> Self {
        match e {
            WalkError::StateCap(_) => CliError::budget(e.to_string()),
            _ => CliError::refusal(e.to_string()),
        }
    }
}

impl From<MasterError> for CliError {
    fn from(e: MasterError) -> Self {
        match e {
            MasterError::Budget { .. } => CliError::budget(e.to_string()),
            MasterError::Series(s) => s.into(),
            MasterError::NoSamples | MasterError::MissingVariable(_) => {
                CliError::parse(e.to_string())
            }
            _ => CliError::refusal(e.to_string()),
        }
    }
}

impl From<serde_json::Error> for CliError {
    fn from(e: serde_json::Error) -> Self {
        CliError::parse(format!("invalid job file: {e}"))
    }
}

impl From<std::io::Error> for CliError {
    fn from(e: std::io::Error) -> Self {
        CliError::parse(format!("cannot read input: {e}"))
    }
}
