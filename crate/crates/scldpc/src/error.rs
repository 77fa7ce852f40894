//! Crate-wide error type.

use thiserror::Error;

#[derive(Debug, Error)]
pub enum Error {
    #[error("matrix must have at least one row and one column")]
    EmptyMatrix,
    #[error("lifting degree must be at least 2, got {0}")]
    BadLifting(u32),
    #[error("expected {expected} entries, got {got}")]
    DimensionMismatch { expected: usize, got: usize },
    #[error("exponent {value} out of range for lifting degree {lifting}")]
    ExponentOutOfRange { value: u32, lifting: u32 },
    #[error("position ({row},{col}) out of range for {row_count}x{col_count} matrix")]
    PositionOutOfRange {
        row: usize,
        col: usize,
        row_count: usize,
        col_count: usize,
    },
    #[error("cycle path visits a void entry at ({row},{col})")]
    VoidEntryOnPath { row: usize, col: usize },
    #[error("cycle length must be an even number >= 4, got {0}")]
    BadCycleLength(usize),
    #[error("spreading entry {value} exceeds memory {memory}")]
    SpreadingOutOfRange { value: u32, memory: u32 },
    #[error("b-vector value {value} does not fit {rows} base-{base} digits")]
    BVectorOutOfRange { value: u64, rows: usize, base: u64 },
    #[error("spreading matrix is {brows}x{bcols} but exponent matrix is {prows}x{pcols}")]
    ShapeMismatch {
        brows: usize,
        bcols: usize,
        prows: usize,
        pcols: usize,
    },
    #[error("column {0} is fully void")]
    FullyVoidColumn(usize),
    #[error("cycle length {len} not countable by the trace method on this graph (needs length < 2*girth = {limit})")]
    UnsupportedCycleLength { len: usize, limit: usize },
    #[error("negative spanning count K_{i} = {value}; enumeration is inconsistent")]
    NegativeSpanningCount { i: usize, value: i64 },
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parse error at line {line}: {message}")]
    Parse { line: usize, message: String },
    #[error(transparent)]
    Io(#[from] std::io::Error),
}

pub type Result<T> = std::result::Result<T, Error>;
