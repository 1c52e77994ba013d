//! Focal-set reductions: bound `|m|` while keeping part of the evidence.

pub mod kmeans;
pub mod linear;
pub mod system;

use crate::error::Result;
use crate::evidence::{betp_vector, pl};
use crate::mass::MassFunction;

/// What a reduction kept and what it lost.
#[derive(Debug, Clone, PartialEq)]
pub struct ReductionReport {
    pub input_size: usize,
    pub output_size: usize,
    /// `max_x |betP_m(x) − betP_m'(x)|` over all singletons.
    pub betp_deviation: f64,
    /// Largest error on the secondary preserved body. Methods without one
    /// (isopignistic, k-means) report the plausibility error on singletons.
    pub secondary_deviation: f64,
    /// The linear solve produced negative values small enough to be
    /// treated as rounding and dropped.
    pub negative_mass_flag: bool,
}

impl ReductionReport {
    pub(crate) fn new(
        original: &MassFunction,
        reduced: &MassFunction,
        secondary_deviation: f64,
        negative_mass_flag: bool,
    ) -> Result<Self> {
        Ok(Self {
            input_size: original.len(),
            output_size: reduced.len(),
            betp_deviation: betp_deviation(original, reduced)?,
            secondary_deviation,
            negative_mass_flag,
        })
    }

    /// Report for a reduction with no secondary body.
    pub(crate) fn without_secondary(
        original: &MassFunction,
        reduced: &MassFunction,
    ) -> Result<Self> {
        Self::new(
            original,
            reduced,
            singleton_pl_deviation(original, reduced),
            false,
        )
    }
}

pub(crate) fn betp_deviation(a: &MassFunction, b: &MassFunction) -> Result<f64> {
    let pa = betp_vector(a)?;
    let pb = betp_vector(b)?;
    Ok(pa
        .values
        .iter()
        .zip(&pb.values)
        .map(|(x, y)| (x - y).abs())
        .fold(0.0, f64::max))
}

pub(crate) fn singleton_pl_deviation(a: &MassFunction, b: &MassFunction) -> f64 {
    (0..a.frame().len())
        .map(|i| {
            let x = a.frame().singleton(i);
            (pl(a, x) - pl(b, x)).abs()
        })
        .fold(0.0, f64::max)
}
