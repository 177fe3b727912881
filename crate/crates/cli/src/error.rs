use std::path::PathBuf;

use thiserror::Error;

#[derive(Debug, Error)]
pub enum CliError {
    #[error(transparent)]
    Channel(#[from] bpmr_channel::Error),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("failed to parse {path}: {message}")]
    ConfigSyntax { path: String, message: String },

    #[error("sweep point p={p} alpha={alpha}{beta}: {source}")]
    Point {
        p: f64,
        alpha: f64,
        beta: String,
        source: bpmr_channel::Error,
    },

    #[error("figure {figure} needs the {column} column, which is empty in the data")]
    IncompatibleFigure { figure: String, column: &'static str },

    #[error("no data rows to plot")]
    EmptyPlot,

    #[error("malformed CSV: {0}")]
    Csv(String),

    #[error("{path}: {source}")]
    Io {
        path: PathBuf,
        source: std::io::Error,
    },
}

pub type Result<T> = std::result::Result<T, CliError>;
