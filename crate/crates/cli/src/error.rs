use std::path::Path;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}: {1}")]
    Io(String, #[source] std::io::Error),

    #[error("{}syntax error at line {line}, column {column}: {message}", prefix(file))]
    Syntax {
        file: Option<String>,
        line: usize,
        column: usize,
        message: String,
    },

    #[error("{}{path}: {message}", prefix(file))]
    Format {
        file: Option<String>,
        path: String,
        message: String,
    },

    #[error("invalid channel: {0}")]
    Invalid(String),

    #[error("{0}")]
    Usage(String),

    #[error(transparent)]
    Compute(#[from] qcap::Error),

    #[error("CSV output: {0}")]
    Csv(#[from] csv::Error),
}

fn prefix(file: &Option<String>) -> String {
    file.as_ref().map_or(String::new(), |f| format!("{f}: "))
}

impl CliError {
    pub(crate) fn in_file(self, path: &Path) -> Self {
        let name = Some(path.display().to_string());
        match self {
            CliError::Syntax { line, column, message, .. } => CliError::Syntax {
                file: name,
                line,
                column,
                message,
            },
            CliError::Format { path: p, message, .. } => CliError::Format {
                file: name,
                path: p,
                message,
            },
            CliError::Invalid(m) => CliError::Invalid(format!("{}: {m}", path.display())),
            other => other,
        }
    }
}
