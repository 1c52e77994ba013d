use thiserror::Error;

use crate::frame::SubsetMask;

pub type Result<T> = std::result::Result<T, Error>;

#[derive(Debug, Clone, PartialEq, Error)]
pub enum Error {
    #[error("frame has no elements")]
    EmptyFrame,
    #[error("frame label is empty")]
    EmptyLabel,
    #[error("duplicate frame label `{0}`")]
    DuplicateLabel(String),
    #[error("frame has {n} elements, at most {max} are supported")]
    FrameTooLarge { n: usize, max: usize },
    #[error("unknown label `{0}`")]
    UnknownLabel(String),
    #[error("subset {mask} has bits outside a frame of {n} elements")]
    MaskOutOfFrame { mask: SubsetMask, n: usize },
    #[error("negative mass {mass}")]
    NegativeMass { mass: f64 },
    #[error("mass {mass} is not a finite number")]
    NonFiniteMass { mass: f64 },
    #[error("masses sum to {sum}, expected 1")]
    MassSumInvalid { sum: f64 },
    #[error("total conflict: m(∅) = 1, pignistic probability undefined")]
    TotalConflict,
    #[error("frame has {n} elements, dense vectors support at most {max}")]
    FrameTooLargeForDense { n: usize, max: usize },
    #[error("dense vector kind mismatch: expected {expected}, found {found}")]
    KindMismatch {
        expected: &'static str,
        found: &'static str,
    },
    #[error("dense vector has length {len}, expected {expected}")]
    LengthMismatch { len: usize, expected: usize },
    #[error("mass functions are defined on different frames")]
    FrameMismatch,
    #[error("no mass functions given")]
    EmptyInput,
    #[error("∅ is a focal element (mass {mass}); this operation requires m(∅) = 0")]
    EmptySetFocal { mass: f64 },
    #[error("frame has {n} elements, this reduction needs at least {min}")]
    FrameTooSmall { n: usize, min: usize },
    #[error("values are not sorted in descending order at index {index}")]
    NotSorted { index: usize },
    #[error("candidate {0} appears more than once")]
    DuplicateCandidate(SubsetMask),
    #[error("{candidates} candidates but {constraints} constraints")]
    ArityMismatch {
        candidates: usize,
        constraints: usize,
    },
    #[error("constraint system is singular (pivot ratio {pivot_ratio:e})")]
    SingularSystem { pivot_ratio: f64 },
    #[error("linear reduction yields negative masses (min {})", min_value(.solution))]
    NegativeMassSolution {
        candidates: Vec<SubsetMask>,
        solution: Vec<f64>,
    },
    #[error("k = {k} is invalid for a mass function with {focal} focal elements")]
    InvalidK { k: usize, focal: usize },
    #[error("invalid configuration: {0}")]
    InvalidConfig(String),
    #[error("cluster has no members")]
    EmptyCluster,
    #[error("frame has {n} elements, the oracle supports at most {max}")]
    FrameTooLargeForOracle { n: usize, max: usize },
    #[error("sampled bba drifted from the target pignistic probability by {deviation:e}")]
    NotIsopignistic { deviation: f64 },
    #[error("malformed bba document: {0}")]
    Parse(String),
    #[error("i/o error: {0}")]
    Io(String),
}

fn min_value(values: &[f64]) -> f64 {
    values.iter().copied().fold(f64::INFINITY, f64::min)
}
