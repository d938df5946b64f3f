//! Crate-wide error type.

use thiserror::Error;

use crate::uncertainty::MAX_ATOMS;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum Error {
    #[error("space must have between 1 and {MAX_ATOMS} atoms, got {0}")]
    AtomCount(usize),

    #[error("atom name {0:?} appears more than once")]
    DuplicateAtom(String),

    #[error("unknown atom {0:?}")]
    UnknownAtom(String),

    #[error("event references atom index {index} outside a space of {atoms} atoms")]
    AtomIndexOutOfRange { index: usize, atoms: usize },

    #[error("measure table must have {expected} entries for {atoms} atoms, got {got}")]
    MeasureTableSize {
        atoms: usize,
        expected: usize,
        got: usize,
    },

    #[error("variable has {got} values, the space has {expected} atoms")]
    AtomMismatch { expected: usize, got: usize },

    #[error("non-finite value {value} at position {index}")]
    NonFinite { index: usize, value: f64 },

    #[error("weight p_{index} = {value} violates strict positivity")]
    NonPositiveWeight { index: usize, value: f64 },

    #[error("index n = {n} is outside 1..={horizon}")]
    BeyondHorizon { n: usize, horizon: usize },

    #[error("no usable grid points: {0}")]
    EmptyGrid(String),

    #[error("invalid parameter: {0}")]
    InvalidParameter(String),

    #[error("scenario error: {0}")]
    Scenario(String),
}

pub type Result<T> = std::result::Result<T, Error>;
