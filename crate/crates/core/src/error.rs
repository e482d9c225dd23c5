use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("{name} = {value} is outside its domain {domain}")]
    Domain {
        name: &'static str,
        value: f64,
        domain: &'static str,
    },

    #[error("contract violation: {0}")]
    Contract(String),

    #[error("invalid configuration: {0}")]
    Config(String),

    #[error("dimension mismatch: {0}")]
    Shape(String),

    #[error("indicator `{0}` is constant; it cannot be normalized")]
    ConstantIndicator(String),

    #[error("too few observations: need at least {needed}, got {got}")]
    TooFewObservations { needed: usize, got: usize },

    #[error("graph needs at least {needed} vertices, got {got}")]
    TooFewVertices { needed: usize, got: usize },

    #[error("requested {requested} clusters from {available} items")]
    TooManyClusters { requested: usize, available: usize },

    #[error("unknown country `{0}`")]
    UnknownCountry(String),

    #[error("unknown indicator `{0}`")]
    UnknownIndicator(String),

    #[error("panel has {} missing cells, first: {}", .0.len(), fmt_missing(.0))]
    MissingCells(Vec<(String, i32, String)>),

    #[error("{0}")]
    Undefined(&'static str),

    #[error("{path}: line {line}: {message}")]
    Parse {
        path: PathBuf,
        line: u64,
        message: String,
    },

    #[error("{path}: missing column `{column}`")]
    MissingColumn { path: PathBuf, column: String },

    #[error(transparent)]
    Csv(#[from] csv::Error),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

fn fmt_missing(cells: &[(String, i32, String)]) -> String {
    cells
        .first()
        .map(|(c, y, i)| format!("({c}, {y}, {i})"))
        .unwrap_or_default()
}
