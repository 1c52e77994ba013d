//! Random and synthetic bbas for tests and benchmarks.

use std::collections::HashSet;
use std::sync::Arc;

use rand::Rng;

use crate::frame::{Frame, SubsetMask};
use crate::mass::MassFunction;

/// A bba with `focal` distinct random focal elements and random masses.
///
/// `focal` is clamped to the number of available subsets. With
/// `allow_empty == false`, `∅` is never chosen.
pub fn random_bba<R: Rng + ?Sized>(
    rng: &mut R,
    frame: &Arc<Frame>,
    focal: usize,
    allow_empty: bool,
) -> MassFunction {
    let n = frame.len();
    let full = frame.full().0;
    let available = if n >= 63 {
        usize::MAX
    } else {
        (1usize << n) - usize::from(!allow_empty)
    };
    let focal = focal.clamp(1, available);

    let mut chosen = HashSet::with_capacity(focal);
    let mut sets = Vec::with_capacity(focal);
    while sets.len() < focal {
        let a = SubsetMask(rng.random::<u64>() & full);
        if (allow_empty || !a.is_empty()) && chosen.insert(a) {
            sets.push(a);
        }
    }
    // (0, 1] so no weight vanishes.
    let weights: Vec<f64> = sets.iter().map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    let entries = sets.into_iter().zip(weights).map(|(a, w)| (a, w / total));
    MassFunction::new(frame.clone(), entries).expect("normalized random masses")
}

/// Probabilities from `random_bba`-style weights, one per element.
pub fn random_probability<R: Rng + ?Sized>(rng: &mut R, n: usize) -> Vec<f64> {
    let weights: Vec<f64> = (0..n).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = weights.iter().sum();
    weights.into_iter().map(|w| w / total).collect()
}

/// `m_i(X) = m_i(X ∖ {x_i}) = 1/2` for every element: their conjunctive
/// combination spreads `2^-n` over every subset of `X`.
pub fn explosion_sources(frame: &Arc<Frame>) -> Vec<MassFunction> {
    (0..frame.len())
        .map(|i| {
            MassFunction::new(frame.clone(), [(frame.full(), 0.5), (frame.coatom(i), 0.5)])
                .expect("two halves")
        })
        .collect()
}
