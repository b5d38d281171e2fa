use thiserror::Error;

/// Errors surfaced by the library. Variants are kept distinct so callers
/// (notably the CLI) can map them to specific exit codes.
#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix dimensions must be positive, got {rows}x{cols}")]
    EmptyMatrix { rows: usize, cols: usize },

    #[error("matrix contains a non-finite entry at ({row}, {col})")]
    NonFinite { row: usize, col: usize },

    #[error("shape mismatch: {left_rows}x{left_cols} vs {right_rows}x{right_cols}")]
    ShapeMismatch {
        left_rows: usize,
        left_cols: usize,
        right_rows: usize,
        right_cols: usize,
    },

    #[error(
        "coefficient/vector length mismatch: {coefficients} coefficients, {vectors} vector pairs"
    )]
    LengthMismatch { coefficients: usize, vectors: usize },

    #[error("singular value decomposition failed to converge")]
    SvdFailed,

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("csv row {row} has {got} fields, expected {expected}")]
    RaggedCsv {
        row: usize,
        expected: usize,
        got: usize,
    },

    #[error("csv row {row}, field {col}: cannot parse {text:?} as a number")]
    CsvParse {
        row: usize,
        col: usize,
        text: String,
    },

    #[error("csv input has no rows")]
    EmptyCsv,

    #[error("noise-scale search range is empty: {0}; the spectrum is inconsistent with the low-rank-plus-noise model")]
    InfeasibleSigmaRange(String),

    #[error("invalid signal description: {0}")]
    InvalidSignalSpec(String),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
