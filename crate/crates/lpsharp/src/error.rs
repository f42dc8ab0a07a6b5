use thiserror::Error;

/// Error type shared across the crate.
#[derive(Debug, Error)]
pub enum Error {
    #[error("invalid input: {0}")]
    InvalidInput(String),

    #[error("domain error: {0}")]
    Domain(String),

    #[error("degenerate sample: {0}")]
    DegenerateSample(String),

    #[error("max order {0} exceeds the supported limit of 12")]
    OrderTooHigh(usize),

    #[error("basis index {index} out of range (max order {max_order})")]
    IndexOutOfRange { index: usize, max_order: usize },

    #[error("invalid quadrature size {0} (expected 2..=512)")]
    InvalidSize(usize),

    #[error("sample too small: {got} observations, need at least {need}")]
    SampleTooSmall { got: usize, need: usize },

    #[error("maximum-entropy solver did not converge within {0} iterations")]
    NoConvergence(usize),

    #[error("infeasible constraint for order {order}: target {target} outside ({lo}, {hi})")]
    InfeasibleConstraint {
        order: usize,
        target: f64,
        lo: f64,
        hi: f64,
    },

    #[error("operation requires the maximum-entropy form")]
    WrongForm,

    #[error("nonpositive L2 sharpening value at a quadrature node")]
    NegativeDensity,

    #[error("duplicate series id {0}")]
    DuplicateSeriesId(u32),

    #[error("series {series_id}: {source}")]
    Series {
        series_id: u32,
        #[source]
        source: Box<Error>,
    },

    #[error("parse error at line {line}: {msg}")]
    Parse { line: usize, msg: String },

    #[error("missing or malformed header (expected \"day,value\")")]
    MissingHeader,

    #[error("no data rows found")]
    EmptySeries,

    #[error("invalid parameters: {0}")]
    InvalidParams(String),

    #[error("day {0} not present in input")]
    UnknownDay(u32),

    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
