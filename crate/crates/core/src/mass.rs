//! Sparse basic belief assignments.

use std::collections::HashMap;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};

/// Masses at or below this value are not kept as focal elements.
pub const EPS_MASS: f64 = 1e-12;

/// Tolerance on `|Σ m − 1|` when validating a bba.
pub const EPS_SUM: f64 = 1e-9;

/// A basic belief assignment stored by its focal elements only.
///
/// Every stored mass is strictly greater than [`EPS_MASS`] and the masses
/// sum to one within [`EPS_SUM`]. `m(∅)` is stored like any other focal
/// element.
#[derive(Debug, Clone)]
pub struct MassFunction {
    frame: Arc<Frame>,
    table: HashMap<SubsetMask, f64>,
}

impl MassFunction {
    /// Validating constructor. Duplicate subsets accumulate.
    pub fn new<I>(frame: Arc<Frame>, entries: I) -> Result<Self>
    where
        I: IntoIterator<Item = (SubsetMask, f64)>,
    {
        let mut table: HashMap<SubsetMask, f64> = HashMap::new();
        for (set, mass) in entries {
            if !mass.is_finite() {
                return Err(Error::NonFiniteMass { mass });
            }
            if mass < 0.0 {
                return Err(Error::NegativeMass { mass });
            }
            if !frame.contains_mask(set) {
                return Err(Error::MaskOutOfFrame {
                    mask: set,
                    n: frame.len(),
                });
            }
            *table.entry(set).or_insert(0.0) += mass;
        }
        table.retain(|_, m| *m > EPS_MASS);
        let sum: f64 = table.values().sum();
        if (sum - 1.0).abs() > EPS_SUM {
            return Err(Error::MassSumInvalid { sum });
        }
        Ok(Self { frame, table })
    }

    /// `m(X) = 1`.
    pub fn vacuous(frame: Arc<Frame>) -> Self {
        let full = frame.full();
        Self {
            frame,
            table: HashMap::from([(full, 1.0)]),
        }
    }

    /// Wraps an accumulated table, dropping dust. The caller guarantees the
    /// masses are nonnegative and sum to one up to rounding.
    pub(crate) fn from_table(frame: Arc<Frame>, mut table: HashMap<SubsetMask, f64>) -> Self {
        table.retain(|_, m| *m > EPS_MASS);
        debug_assert!(table.keys().all(|&a| frame.contains_mask(a)));
        Self { frame, table }
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn frame_arc(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn same_frame(&self, other: &Self) -> bool {
        Arc::ptr_eq(&self.frame, &other.frame) || *self.frame == *other.frame
    }

    /// Number of focal elements, `|m|`.
    pub fn len(&self) -> usize {
        self.table.len()
    }

    pub fn is_empty(&self) -> bool {
        self.table.is_empty()
    }

    pub fn mass(&self, a: SubsetMask) -> f64 {
        self.table.get(&a).copied().unwrap_or(0.0)
    }

    /// `m(∅)`.
    pub fn conflict(&self) -> f64 {
        self.mass(SubsetMask::EMPTY)
    }

    pub fn is_focal(&self, a: SubsetMask) -> bool {
        self.table.contains_key(&a)
    }

    pub fn total_mass(&self) -> f64 {
        self.sorted_entries().iter().map(|&(_, m)| m).sum()
    }

    /// Focal elements in unspecified order.
    pub fn iter(&self) -> impl Iterator<Item = (SubsetMask, f64)> + '_ {
        self.table.iter().map(|(&a, &m)| (a, m))
    }

    /// Focal elements sorted by ascending mask value.
    pub fn sorted_entries(&self) -> Vec<(SubsetMask, f64)> {
        let mut entries: Vec<_> = self.iter().collect();
        entries.sort_unstable_by_key(|&(a, _)| a);
        entries
    }

    /// Fails with [`Error::EmptySetFocal`] if `∅` is a focal element.
    pub fn require_closed_world(&self) -> Result<()> {
        match self.table.get(&SubsetMask::EMPTY) {
            Some(&mass) => Err(Error::EmptySetFocal { mass }),
            None => Ok(()),
        }
    }

    /// Same focal set and masses within `tol`.
    pub fn approx_eq(&self, other: &Self, tol: f64) -> bool {
        self.same_frame(other) && self.max_abs_diff(other) <= tol
    }

    /// `max_A |m(A) − m'(A)|` over the union of both focal sets.
    pub fn max_abs_diff(&self, other: &Self) -> f64 {
        self.iter()
            .chain(other.iter())
            .map(|(a, _)| (self.mass(a) - other.mass(a)).abs())
            .fold(0.0, f64::max)
    }
}

impl PartialEq for MassFunction {
    fn eq(&self, other: &Self) -> bool {
        self.same_frame(other) && self.table == other.table
    }
}
