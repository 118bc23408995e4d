/// Failures that stop a run before or while writing output.
#[derive(Debug, thiserror::Error)]
pub enum CliError {
    /// Malformed JSON or a field of the wrong type.
    #[error("config error at line {line}, column {column}: {message}")]
    Parse {
        line: usize,
        column: usize,
        message: String,
    },
    /// A well-formed field with an unacceptable value.
    #[error("config error in field `{field}`: {message}")]
    Field { field: String, message: String },
    #[error("{path}: {message}")]
    Io { path: String, message: String },
}

impl CliError {
    pub fn io(path: impl std::fmt::Display, e: std::io::Error) -> Self {
        CliError::Io {
            path: path.to_string(),
            message: e.to_string(),
        }
    }
}
