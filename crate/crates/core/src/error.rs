use std::path::PathBuf;

pub type Result<T, E = Error> = std::result::Result<T, E>;

#[derive(Debug, thiserror::Error)]
pub enum Error {
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    /// Fewer than two accepted rewards, or all rewards identical.
    #[error("degenerate posterior (count {count}, sum of squares {sum_sq}); the arm needs more accepted pulls")]
    DegeneratePosterior { count: u64, sum_sq: f64 },

    #[error("no convergence: {0}")]
    NoConvergence(String),

    #[error("subcritical process (effective reproduction {effective_r:.4} <= 1); extinction is certain and no threshold exists")]
    Subcritical { effective_r: f64 },

    #[error("outcome was censored (epidemic not established) and carries no reward")]
    CensoredOutcome,

    #[error("no arm received an established sample within the budget")]
    NoEstablishedSample,

    #[error("budget {budget} too small for {arms} arms (needs more than {required})")]
    BudgetTooSmall { budget: usize, arms: usize, required: usize },

    #[error("arm hardness is zero; epsilon must be positive")]
    ZeroHardness,

    #[error("top-two redraw exceeded {0} joint posterior draws")]
    ResampleLimit(usize),

    #[error("ground-truth table not found at {0}")]
    MissingGroundTruth(PathBuf),

    #[error("benchmark records not found at {0}")]
    MissingRecords(PathBuf),

    #[error("config error: {0}")]
    Config(String),

    #[error("i/o error on {path}: {source}")]
    Io {
        path: PathBuf,
        #[source]
        source: std::io::Error,
    },

    #[error(transparent)]
    Csv(#[from] csv::Error),
}

impl Error {
    pub(crate) fn io(path: impl Into<PathBuf>, source: std::io::Error) -> Error {
        Error::Io { path: path.into(), source }
    }
}
