use drlift::{Error, ErrorKind};
use serde::Serialize;

pub type CliResult<T> = std::result::Result<T, CliError>;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error(transparent)]
    Core(#[from] Error),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("invalid usage: {0}")]
    Usage(String),
    #[error("i/o error: {0}")]
    Io(#[from] std::io::Error),
    #[error("output error: {0}")]
    Output(String),
}

impl From<csv::Error> for CliError {
    fn from(e: csv::Error) -> Self {
        CliError::Output(e.to_string())
    }
}

impl CliError {
    /// 2 for parse errors, 3 for precondition violations, 4 for size guards,
    /// 5 for I/O.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Core(e) => match e.kind() {
                ErrorKind::Parse => 2,
                ErrorKind::Precondition => 3,
                ErrorKind::SizeGuard => 4,
            },
            CliError::Parse(_) => 2,
            CliError::Usage(_) => 3,
            CliError::Io(_) | CliError::Output(_) => 5,
        }
    }

    pub fn kind(&self) -> &'static str {
        match self.exit_code() {
            2 => "parse",
            3 => "precondition",
            4 => "size-guard",
            _ => "io",
        }
    }

    /// One-line JSON object for stderr.
    pub fn to_json(&self) -> String {
        #[derive(Serialize)]
        struct Report<'a> {
            error: &'a str,
            exit_code: i32,
            message: String,
        }
        serde_json::to_string(&Report {
            error: self.kind(),
            exit_code: self.exit_code(),
            message: self.to_string(),
        })
        .expect("error reports serialize")
    }
}
