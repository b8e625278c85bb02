use std::path::PathBuf;

use thiserror::Error;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, Error)]
pub enum Error {
    #[error("grid size {0} is invalid: need an even number of points per axis, at least 16")]
    InvalidGrid(usize),

    #[error("fields live on different grids ({left} vs {right} points per axis)")]
    GridMismatch { left: usize, right: usize },

    /// Inverting the Laplacian on a field whose mean does not vanish.
    #[error("field mean {mean:e} exceeds 1e-12 of its sup norm {sup:e}; project the mean first")]
    NonzeroMean { mean: f64, sup: f64 },

    #[error("dyadic block {j} outside the partition range [-1, {j_max}]")]
    OutOfRange { j: i32, j_max: i32 },

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("blow-up guard tripped at t = {t}: |omega|_inf = {linf:e} > {guard:e}")]
    BlowupDetected { t: f64, linf: f64, guard: f64 },

    #[error("flow map is the identity to 1e-12; the commutator ratio is undefined")]
    DegenerateFlow,

    #[error(
        "data family with N = {requested} scales is under-resolved on a {n}x{n} grid \
         (innermost annulus narrower than 4 cells); maximal admissible N is {max_admissible}"
    )]
    UnderResolved {
        requested: usize,
        max_admissible: usize,
        n: usize,
    },

    #[error("snapshot stride too coarse: Duhamel residual {residual:e} exceeds 10% of leading term {leading:e}")]
    InsufficientSnapshots { residual: f64, leading: f64 },

    #[error("configuration error: {0}")]
    Config(String),

    #[error("unknown check `{0}`")]
    UnknownCheck(String),

    #[error("I/O error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Json(#[from] serde_json::Error),

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Self {
        Error::Io {
            path: path.into(),
            source,
        }
    }
}
