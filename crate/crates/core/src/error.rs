use thiserror::Error;

/// Errors shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("dimension mismatch: {left} vs {right}")]
    DimMismatch { left: usize, right: usize },

    #[error("time grids do not match{}", detail_suffix(.0))]
    GridMismatch(Option<String>),

    #[error("grid index {index} out of range (grid has {len} points)")]
    IndexOutOfRange { index: usize, len: usize },

    #[error("{0}")]
    InvalidInput(String),

    #[error("p must lie in (2, 3), got {0}")]
    PRange(f64),

    #[error("q must exceed p = {p} (and stay <= 4), got {q}")]
    QRange { p: f64, q: f64 },

    #[error("path is constant on grid interval [{0}, {1}]; control is degenerate there")]
    DegenerateControl(usize, usize),

    #[error("non-finite value encountered: {0}")]
    NonFinite(String),

    #[error("verification failed: {0}")]
    Verification(String),

    #[error("io error: {0}")]
    Io(#[from] std::io::Error),

    #[error("csv error: {0}")]
    Csv(#[from] csv::Error),

    #[error("json error: {0}")]
    Json(#[from] serde_json::Error),
}

fn detail_suffix(detail: &Option<String>) -> String {
    match detail {
        Some(d) => format!(": {d}"),
        None => String::new(),
    }
}

pub type Result<T> = std::result::Result<T, Error>;
