use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    /// An argument lies outside the domain of the function.
    #[error("domain error in {what}: {detail}")]
    Domain { what: &'static str, detail: String },

    /// Too few observations (or too few columns) for the requested operation.
    #[error("size error: need at least {needed}, got {got}")]
    Size { needed: usize, got: usize },

    /// Input data that is not a finite real, or could not be parsed.
    #[error("data error{}: {detail}", line.map(|l| format!(" at line {l}")).unwrap_or_default())]
    Data { line: Option<usize>, detail: String },

    #[error("index {index} out of range {lo}..={hi}")]
    Index { index: usize, lo: usize, hi: usize },

    /// The sample has zero variance, so the standardized components are undefined.
    #[error("degenerate sample: {0}")]
    Degenerate(String),

    /// Monte Carlo replicates excluded beyond the tolerated fraction.
    #[error("{excluded} of {reps} replicates were degenerate ({reason})")]
    TooManyExclusions {
        excluded: usize,
        reps: usize,
        reason: &'static str,
    },

    #[error("usage error: {0}")]
    Usage(String),

    #[error("cannot read {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },
}

impl Error {
    pub(crate) fn domain(what: &'static str, detail: impl Into<String>) -> Self {
        Error::Domain {
            what,
            detail: detail.into(),
        }
    }

    /// Process exit status for this error: 3 for degenerate data, 2 otherwise.
    pub fn exit_code(&self) -> i32 {
        match self {
            Error::Degenerate(_) => 3,
            _ => 2,
        }
    }
}

pub(crate) fn require_finite(what: &'static str, x: f64) -> Result<f64> {
    if x.is_finite() {
        Ok(x)
    } else {
        Err(Error::domain(what, format!("argument must be finite, got {x}")))
    }
}
