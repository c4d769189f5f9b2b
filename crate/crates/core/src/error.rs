use thiserror::Error;

/// Errors produced anywhere in the library.
#[derive(Debug, Error)]
pub enum Error {
    #[error("insufficient cumulants: need {what} up to order {needed}, have {have}")]
    InsufficientCumulants {
        what: &'static str,
        needed: usize,
        have: usize,
    },
    #[error("invalid input: {0}")]
    InvalidInput(String),
    #[error("not at saddle point: kappa_1 * w_n = {got}, expected k = {k}")]
    NotAtSaddle { got: f64, k: f64 },
    #[error("outside admissible cone: k / w_n = {ratio} not in ({lo}, {hi})")]
    OutsideCone { ratio: f64, lo: f64, hi: f64 },
    #[error("Jabbour martingale undefined: model `{0}` has random offspring count")]
    JabbourUndefined(String),
    #[error("inconsistent derivative inputs at order {order}: |W B_j(chi) - W^(j)| = {gap}")]
    InconsistentDerivatives { order: usize, gap: f64 },
    #[error("quadrature did not converge: refinement gap {0}")]
    QuadratureNonConvergence(f64),
    #[error("pmf concentrated on sublattice {a}Z + {b}; rescale by (k - {b}) / {a}")]
    Sublattice { a: i64, b: i64 },
    #[error("mismatched snapshot schedules across replicates")]
    MismatchedSchedules,
    #[error("unsupported: {0}")]
    Unsupported(String),
    #[error("unknown model `{0}`")]
    UnknownModel(String),
    #[error("parse error: {0}")]
    Parse(String),
    #[error("{path}: {source}")]
    Io {
        path: String,
        #[source]
        source: std::io::Error,
    },
    #[error(transparent)]
    Json(#[from] serde_json::Error),
}

pub type Result<T> = std::result::Result<T, Error>;

impl Error {
    pub(crate) fn io(path: impl AsRef<std::path::Path>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.as_ref().display().to_string(),
            source,
        }
    }
}
