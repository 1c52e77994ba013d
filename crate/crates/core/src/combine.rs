//! The non-normalized conjunctive rule.
//!
//! Conflict accumulates on `∅` and is kept there; no Dempster normalization
//! is applied.

use std::collections::HashMap;

use crate::dense::{from_dense, m_from_q, multiply_commonalities, q_from_m, to_dense};
use crate::error::{Error, Result};
use crate::frame::SubsetMask;
use crate::mass::MassFunction;

/// `(m1 ⊕ m2)(A) = Σ_{B ∩ C = A} m1(B) m2(C)` over pairs of focal elements.
///
/// Only intersections that actually occur are ever touched, so the cost is
/// `O(n |m1| |m2|)` and the result has at most `|m1| |m2|` focal elements.
pub fn conjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if !m1.same_frame(m2) {
        return Err(Error::FrameMismatch);
    }
    let n = m1.frame().len();
    let bound = m1.len().saturating_mul(m2.len());
    let capacity = if n < 32 {
        bound.min(1usize << n)
    } else {
        bound
    };
    let mut table: HashMap<SubsetMask, f64> = HashMap::with_capacity(capacity);

    let right: Vec<(SubsetMask, f64)> = m2.iter().collect();
    for (b, mb) in m1.iter() {
        for &(c, mc) in &right {
            *table.entry(b.intersection(c)).or_insert(0.0) += mb * mc;
        }
    }
    Ok(MassFunction::from_table(m1.frame_arc().clone(), table))
}

/// Left fold of [`conjunctive`] in input order.
pub fn conjunctive_many<'a, I>(ms: I) -> Result<MassFunction>
where
    I: IntoIterator<Item = &'a MassFunction>,
{
    let mut iter = ms.into_iter();
    let first = iter.next().ok_or(Error::EmptyInput)?;
    iter.try_fold(first.clone(), |acc, m| conjunctive(&acc, m))
}

/// The same rule computed through commonalities: `q_{m1⊕m2} = q_{m1} · q_{m2}`.
pub fn conjunctive_via_q(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if !m1.same_frame(m2) {
        return Err(Error::FrameMismatch);
    }
    let q1 = q_from_m(&to_dense(m1)?)?;
    let q2 = q_from_m(&to_dense(m2)?)?;
    from_dense(&m_from_q(&multiply_commonalities(&q1, &q2)?)?)
}
