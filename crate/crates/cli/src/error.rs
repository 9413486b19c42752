use std::io;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    /// Schema or semantic problem in the config; `key` locates it.
    #[error("config error at {key}: {message}")]
    Config { key: String, message: String },

    /// JSON that does not match the schema; serde reports line and column.
    #[error("config error: {0}")]
    Parse(#[from] serde_json::Error),

    #[error("run error: {0}")]
    Runtime(String),

    #[error("i/o error on {path}: {source}")]
    Io { path: String, source: io::Error },
}

impl CliError {
    pub fn config(key: &str, message: impl Into<String>) -> Self {
        CliError::Config {
            key: key.into(),
            message: message.into(),
        }
    }

    pub fn io(path: &str, source: io::Error) -> Self {
        CliError::Io { path: path.into(), source }
    }

    /// 2 for config errors, 3 for everything that fails while running.
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Config { .. } | CliError::Parse(_) => 2,
            CliError::Runtime(_) | CliError::Io { .. } => 3,
        }
    }
}
