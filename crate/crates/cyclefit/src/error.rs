//! Error type shared across the crate.

use thiserror::Error;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Error)]
pub enum Error {
    // Panel ingestion and shaping.
    #[error("missing required column `{0}`")]
    MissingColumn(String),
    #[error("non-numeric cell at data row {row}, column `{col}`")]
    NonNumericCell { row: usize, col: String },
    #[error("gap in years at data row {row}: expected {expected}, found {found}")]
    GapInYears {
        row: usize,
        expected: i32,
        found: i32,
    },
    #[error("duplicate sector `{0}`")]
    DuplicateSector(String),
    #[error("sector `{0}` has a zero value at the base sample; cannot normalize")]
    ZeroBaseValue(String),
    #[error("unknown sector `{0}`")]
    UnknownSector(String),
    #[error("sector `{0}` is not covered by the grouping")]
    UngroupedSector(String),
    #[error("grouping is empty")]
    EmptyGrouping,
    #[error("panel has no data")]
    EmptyPanel,
    #[error("non-finite value in series `{name}` at position {index}")]
    NonFiniteValue { name: String, index: usize },
    #[error("series length {got} does not match expected {expected}")]
    LengthMismatch { expected: usize, got: usize },

    // Spectrum and regression.
    #[error("sample count {0} is too small; need at least 4")]
    WindowTooShort(usize),
    #[error("harmonic k={k} is at or above the Nyquist limit for N={n}")]
    KAboveNyquist { k: usize, n: usize },
    #[error("empty harmonic set")]
    EmptyKSet,
    #[error("harmonic k={k} is not admissible for period {n}")]
    InadmissibleK { k: usize, n: usize },
    #[error("slope denominator vanishes for this spectrum ({0:.3e})")]
    DegenerateDenominator(f64),
    #[error("design matrix is rank deficient (rank {rank} of {cols} columns)")]
    RankDeficientDesign { rank: usize, cols: usize },

    // Significance testing and period search.
    #[error("fit carries no coefficient covariance; refit with the normal-equations estimator")]
    NoCovariance,
    #[error("no residual degrees of freedom (N = {n}, p = {p})")]
    ZeroDofResidual { n: usize, p: usize },
    #[error("window T={t} plus holdback {holdback} exceeds series length {len}")]
    WindowTooLong {
        t: usize,
        holdback: usize,
        len: usize,
    },
    #[error("empty candidate range")]
    EmptyRange,

    // Inter-sector system identification and simulation.
    #[error("regressors built from the fitted trajectories are rank deficient (rank {rank} of {cols} columns)")]
    RankDeficientRegressors { rank: usize, cols: usize },
    #[error("dimension mismatch: {0}")]
    DimensionMismatch(String),
    #[error("matrix B is numerically singular (condition number {0:.3e})")]
    SingularB(f64),
    #[error("state norm exceeded {guard:.1e} at t = {t}; integration aborted")]
    UnstableBlowup { t: f64, guard: f64 },

    // Determination coefficients.
    #[error("series has zero variance around its mean")]
    ConstantSeries,
    #[error("series has no fluctuation around its trend")]
    ZeroFluctuation,

    // Forecasting.
    #[error("model has no harmonic terms")]
    NoHarmonics,

    // Configuration and I/O plumbing.
    #[error("invalid configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
    #[error("CSV: {0}")]
    Csv(#[from] csv::Error),
    #[error("JSON: {0}")]
    Json(#[from] serde_json::Error),
}

impl Error {
    /// True for failures of the numerics rather than of the inputs; the CLI
    /// maps these to a distinct exit code.
    pub fn is_numerical(&self) -> bool {
        matches!(
            self,
            Error::DegenerateDenominator(_)
                | Error::RankDeficientDesign { .. }
                | Error::RankDeficientRegressors { .. }
                | Error::SingularB(_)
                | Error::UnstableBlowup { .. }
                | Error::ZeroDofResidual { .. }
                | Error::ConstantSeries
                | Error::ZeroFluctuation
                | Error::NoCovariance
        )
    }
}
