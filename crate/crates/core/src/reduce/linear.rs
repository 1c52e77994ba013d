//! Linear reductions that keep the pignistic probability exactly.
//!
//! Sorting the elements by descending pignistic probability `p_1 ≥ … ≥ p_n`
//! gives the chain of prefixes `A_i = {x_1, …, x_i}`. Supported on that
//! chain, `p = Bet · y` where `Bet` is upper triangular with entries `1/k`,
//! and its inverse is the band matrix with `k` on the diagonal and `-k` just
//! above it. The resulting consonant bba is the least committed
//! isopignistic.
//!
//! The mixed reductions add `n − 1` focal elements (singletons or coatoms)
//! so that one more body of evidence is kept on `n − 1` sets, for at most
//! `2n − 1` focal elements overall.

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::evidence::{betp_vector, BodyKind, PignisticVector};
use crate::frame::{Frame, SubsetMask};
use crate::mass::{MassFunction, EPS_MASS};

use super::system::{build_constraint_system, solve_reduction, Constraint, ConstraintSystem};
use super::ReductionReport;

/// The `n × n` matrix mapping chain masses to sorted pignistic probabilities.
pub fn bet_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| if k >= i { 1.0 / (k + 1) as f64 } else { 0.0 })
}

/// The band inverse of [`bet_matrix`].
pub fn bet_inverse_matrix(n: usize) -> DMatrix<f64> {
    DMatrix::from_fn(n, n, |i, k| {
        let scale = (i + 1) as f64;
        if k == i {
            scale
        } else if k == i + 1 {
            -scale
        } else {
            0.0
        }
    })
}

/// Chain masses `y_i = i · (p_i − p_{i+1})`, with `p_{n+1} = 0`, from
/// probabilities sorted in descending order.
pub fn bet_inverse_apply(p: &[f64]) -> Result<Vec<f64>> {
    if let Some(index) = p.windows(2).position(|w| w[0] < w[1]) {
        return Err(Error::NotSorted { index });
    }
    Ok(p.iter()
        .enumerate()
        .map(|(i, &pi)| {
            let next = p.get(i + 1).copied().unwrap_or(0.0);
            (i + 1) as f64 * (pi - next)
        })
        .collect())
}

/// `A_1 ⊂ A_2 ⊂ … ⊂ A_n`, the prefixes of the descending order.
pub fn pignistic_chain(p: &PignisticVector) -> Vec<SubsetMask> {
    p.order
        .iter()
        .scan(SubsetMask::EMPTY, |acc, &i| {
            *acc = acc.with(i);
            Some(*acc)
        })
        .collect()
}

/// The consonant bba with the same pignistic probability as `m` and the
/// largest plausibility; at most `n` focal elements.
pub fn least_committed_isopignistic(m: &MassFunction) -> Result<MassFunction> {
    m.require_closed_world()?;
    let p = betp_vector(m)?;
    let y = bet_inverse_apply(&p.sorted_values())?;
    let entries = pignistic_chain(&p)
        .into_iter()
        .zip(y)
        .filter(|&(_, mass)| mass > EPS_MASS);
    MassFunction::new(m.frame_arc().clone(), entries)
}

/// [`least_committed_isopignistic`] with its deviation report.
pub fn reduce_isopignistic(m: &MassFunction) -> Result<(MassFunction, ReductionReport)> {
    let reduced = least_committed_isopignistic(m)?;
    let report = ReductionReport::without_secondary(m, &reduced)?;
    Ok((reduced, report))
}

fn require_mixed_preconditions(m: &MassFunction) -> Result<()> {
    m.require_closed_world()?;
    if m.frame().len() < 2 {
        return Err(Error::FrameTooSmall {
            n: m.frame().len(),
            min: 2,
        });
    }
    Ok(())
}

/// The `(2n−1)`-square system keeping betP on every singleton and
/// `secondary` on `n − 1` sets.
///
/// * `Pl`/`Q`: candidates `{x_2}, …, {x_n}, A_1, …, A_n`; the secondary body
///   is kept on `{x_2}, …, {x_n}`. `{x_1}` is already `A_1`.
/// * `Bel`: candidates `B_1, …, B_n, A_1, …, A_n` without `A_{n−1}`, which
///   equals `B_n`; belief is kept on `B_1, …, B_{n−1}`.
///
/// Indices follow the descending pignistic order and `B_i = X ∖ {x_i}`.
pub fn mixed_system(m: &MassFunction, secondary: BodyKind) -> Result<ConstraintSystem> {
    require_mixed_preconditions(m)?;
    let frame = m.frame();
    let n = frame.len();
    let p = betp_vector(m)?;
    let order = &p.order;
    let chain = pignistic_chain(&p);

    let mut candidates = Vec::with_capacity(2 * n - 1);
    let mut constraints: Vec<Constraint> = order
        .iter()
        .map(|&i| Constraint::new(BodyKind::Betp, frame.singleton(i)))
        .collect();

    match secondary {
        BodyKind::Pl | BodyKind::Q => {
            candidates.extend(order[1..].iter().map(|&i| frame.singleton(i)));
            candidates.extend(chain.iter().copied());
            constraints.extend(
                order[1..]
                    .iter()
                    .map(|&i| Constraint::new(secondary, frame.singleton(i))),
            );
        }
        BodyKind::Bel => {
            candidates.extend(order.iter().map(|&i| frame.coatom(i)));
            candidates.extend(
                chain
                    .iter()
                    .enumerate()
                    .filter(|&(k, _)| k != n - 2)
                    .map(|(_, &a)| a),
            );
            constraints.extend(
                order[..n - 1]
                    .iter()
                    .map(|&i| Constraint::new(BodyKind::Bel, frame.coatom(i))),
            );
        }
        BodyKind::Betp => {
            return Err(Error::InvalidConfig(
                "the secondary body must be bel, pl or q".into(),
            ))
        }
    }
    build_constraint_system(m, candidates, constraints)
}

/// Keeps betP on all singletons and pl on all but the most probable one.
pub fn reduce_betp_pl(m: &MassFunction) -> Result<(MassFunction, ReductionReport)> {
    solve_reduction(&mixed_system(m, BodyKind::Pl)?)
}

/// Keeps betP on all singletons and bel on the coatoms of all but the least
/// probable element.
pub fn reduce_betp_bel(m: &MassFunction) -> Result<(MassFunction, ReductionReport)> {
    solve_reduction(&mixed_system(m, BodyKind::Bel)?)
}

/// The `2n`-square system with singletons and coatoms as candidates, pl on
/// the singletons and bel on the coatoms. It has rank `n + 1` only, since
/// `pl({x_i}) + bel(B_i)` is the same total for every `i`.
pub fn pl_bel_system(m: &MassFunction) -> Result<ConstraintSystem> {
    let frame: &Frame = m.frame();
    let n = frame.len();
    if n < 3 {
        return Err(Error::FrameTooSmall { n, min: 3 });
    }
    let singletons = (0..n).map(|i| frame.singleton(i));
    let coatoms = (0..n).map(|i| frame.coatom(i));
    let candidates: Vec<_> = singletons.clone().chain(coatoms.clone()).collect();
    let constraints = singletons
        .map(|s| Constraint::new(BodyKind::Pl, s))
        .chain(coatoms.map(|b| Constraint::new(BodyKind::Bel, b)))
        .collect();
    build_constraint_system(m, candidates, constraints)
}
