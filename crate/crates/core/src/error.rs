use std::fmt;

use thiserror::Error;

/// Location-tagged failure from any of the text readers.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ParseError {
    pub line: usize,
    pub column: usize,
    pub message: String,
}

impl ParseError {
    pub fn new(line: usize, column: usize, message: impl Into<String>) -> Self {
        ParseError {
            line,
            column,
            message: message.into(),
        }
    }

    /// Shift a single-line error onto `line`, offsetting its column.
    pub fn at_line(mut self, line: usize, column_offset: usize) -> Self {
        self.line = line;
        self.column += column_offset;
        self
    }
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}:{}: {}", self.line, self.column, self.message)
    }
}

impl std::error::Error for ParseError {}

#[derive(Debug, Error)]
pub enum Error {
    #[error("division by zero")]
    DivisionByZero,
    #[error("singular evaluation: {0}")]
    SingularEvaluation(String),
    #[error("parse error at {0}")]
    Parse(#[from] ParseError),
    #[error("chart mismatch: {0} vs {1}")]
    ChartMismatch(&'static str, &'static str),
    #[error("unsupported chart operation: {0}")]
    UnsupportedChart(String),
    #[error("singular control: |(p3, p4)| = {norm:.3e} at t = {t}")]
    SingularControl { t: f64, norm: f64 },
    #[error("step size underflow at {0}")]
    StepUnderflow(String),
    #[error("invariance violation: {0}")]
    InvarianceViolation(String),
    #[error("no collision branch found: {0}")]
    NoBranches(String),
    #[error("not a solution: {0}")]
    NotASolution(String),
    #[error("residual {residual:.3e} above tolerance {tol:.1e}")]
    ResidualAboveTolerance { residual: f64, tol: f64 },
    #[error("loop clearance violated: {0}")]
    ClearanceViolation(String),
    #[error("singular point outside the constant field: {0}")]
    SingularityOutsideField(String),
    #[error("invalid argument: {0}")]
    InvalidArgument(String),
    #[error("configuration: {0}")]
    Config(String),
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
