//! Brute-force reference implementations over the whole powerset.
//!
//! These walk all `2^n` subsets instead of the focal set and share no code
//! with the fast paths they check. They are meant for tests and the
//! `verify` command, hence the small frame caps.

use std::sync::Arc;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::evidence::BodyKind;
use crate::frame::SubsetMask;
use crate::mass::MassFunction;

pub const ORACLE_BODY_MAX: usize = 12;
pub const ORACLE_COMBINE_MAX: usize = 10;
pub const SAMPLER_MAX: usize = 8;

fn check_cap(m: &MassFunction, max: usize) -> Result<()> {
    let n = m.frame().len();
    if n > max {
        return Err(Error::FrameTooLargeForOracle { n, max });
    }
    Ok(())
}

fn dense(m: &MassFunction) -> Vec<f64> {
    (0..1u64 << m.frame().len())
        .map(|b| m.mass(SubsetMask(b)))
        .collect()
}

/// Evaluates a body of evidence at `a` from its defining sum over `2^X`.
pub fn oracle_body(m: &MassFunction, kind: BodyKind, a: SubsetMask) -> Result<f64> {
    check_cap(m, ORACLE_BODY_MAX)?;
    let masses = dense(m);
    let a = a.0;
    let mut total = 0.0;
    for (b, &mass) in masses.iter().enumerate() {
        let b = b as u64;
        let term = match kind {
            BodyKind::Bel if b != 0 && b & !a == 0 => mass,
            BodyKind::Pl if b & a != 0 => mass,
            BodyKind::Q if b & a == a => mass,
            BodyKind::Betp if b != 0 => {
                mass * f64::from((a & b).count_ones()) / f64::from(b.count_ones())
            }
            _ => 0.0,
        };
        total += term;
    }
    if kind == BodyKind::Betp {
        let normalizer = 1.0 - masses[0];
        if normalizer <= crate::mass::EPS_MASS {
            return Err(Error::TotalConflict);
        }
        total /= normalizer;
    }
    Ok(total)
}

/// `(m1 ⊕ m2)(A) = Σ_{B ∩ C = A} m1(B) m2(C)` for every `A ⊆ X`, ranging
/// `B` and `C` over all subsets rather than focal elements.
pub fn oracle_conjunctive(m1: &MassFunction, m2: &MassFunction) -> Result<MassFunction> {
    if !m1.same_frame(m2) {
        return Err(Error::FrameMismatch);
    }
    check_cap(m1, ORACLE_COMBINE_MAX)?;
    let n = m1.frame().len();
    let full = (1u64 << n) - 1;
    let (d1, d2) = (dense(m1), dense(m2));

    let mut out = Vec::with_capacity(1 << n);
    for a in 0..=full {
        // B = A ∪ S and C = A ∪ T with S, T disjoint subsets of X ∖ A.
        let rest = full & !a;
        let mut sum = 0.0;
        let mut s = rest;
        loop {
            let free = rest & !s;
            let mut t = free;
            loop {
                sum += d1[(a | s) as usize] * d2[(a | t) as usize];
                if t == 0 {
                    break;
                }
                t = (t - 1) & free;
            }
            if s == 0 {
                break;
            }
            s = (s - 1) & rest;
        }
        out.push((SubsetMask(a), sum));
    }
    MassFunction::new(m1.frame_arc().clone(), out)
}

/// A random isopignistic of `m`.
///
/// Starts from the pignistic probability itself, then applies `moves`
/// transfers: pick `B` with `|B| = b ≥ 2` and `δ ∈ (0, b · min_{x∈B} m({x})]`,
/// and move `δ/b` from every `{x} ⊆ B` onto `B`. Each transfer leaves every
/// `betP(x)` unchanged.
pub fn sample_isopignistic(m: &MassFunction, seed: u64, moves: usize) -> Result<MassFunction> {
    check_cap(m, SAMPLER_MAX)?;
    m.require_closed_world()?;
    let n = m.frame().len();
    let full = (1u64 << n) - 1;
    let target: Vec<f64> = (0..n)
        .map(|i| oracle_body(m, BodyKind::Betp, SubsetMask::singleton(i)))
        .collect::<Result<_>>()?;

    let mut masses = vec![0.0; 1 << n];
    for (i, &p) in target.iter().enumerate() {
        masses[1 << i] = p;
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    if n >= 2 {
        for _ in 0..moves {
            let b = loop {
                let b = rng.random_range(1..=full);
                if b.count_ones() >= 2 {
                    break b;
                }
            };
            let size = f64::from(b.count_ones());
            let floor = SubsetMask(b)
                .elements()
                .map(|i| masses[1 << i])
                .fold(f64::INFINITY, f64::min);
            if floor <= 0.0 {
                continue;
            }
            // (0, 1] keeps δ strictly positive.
            let delta = size * floor * (1.0 - rng.random::<f64>());
            let share = (delta / size).min(floor);
            for i in SubsetMask(b).elements() {
                masses[1 << i] = (masses[1 << i] - share).max(0.0);
            }
            masses[b as usize] += share * size;
        }
    }

    let entries = masses
        .iter()
        .enumerate()
        .map(|(b, &w)| (SubsetMask(b as u64), w));
    let sample = MassFunction::new(Arc::clone(m.frame_arc()), entries)?;
    let deviation = (0..n)
        .map(|i| {
            oracle_body(&sample, BodyKind::Betp, SubsetMask::singleton(i))
                .map(|p| (p - target[i]).abs())
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .fold(0.0, f64::max);
    if deviation > 1e-12 {
        return Err(Error::NotIsopignistic { deviation });
    }
    Ok(sample)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::frame::Frame;

    fn abc() -> Arc<crate::frame::Frame> {
        Arc::new(Frame::new(["a", "b", "c"]).unwrap())
    }

    fn sample() -> MassFunction {
        let f = abc();
        MassFunction::new(
            f.clone(),
            [
                (SubsetMask(0b001), 0.5),
                (SubsetMask(0b011), 0.3),
                (f.full(), 0.2),
            ],
        )
        .unwrap()
    }

    #[test]
    fn bodies_of_worked_example() {
        let m = sample();
        let close = |kind, a, want: f64| {
            let got = oracle_body(&m, kind, SubsetMask(a)).unwrap();
            assert!(
                (got - want).abs() < 1e-15,
                "{kind}({a:#b}) = {got}, want {want}"
            );
        };
        close(BodyKind::Bel, 0b011, 0.8);
        close(BodyKind::Pl, 0b010, 0.5);
        close(BodyKind::Q, 0b001, 1.0);
        close(BodyKind::Betp, 0b001, 0.5 + 0.15 + 0.2 / 3.0);
        close(BodyKind::Bel, 0, 0.0);
        close(BodyKind::Pl, 0, 0.0);
    }

    #[test]
    fn vacuous_commonality() {
        let v = MassFunction::vacuous(abc());
        for a in 0..8 {
            assert_eq!(oracle_body(&v, BodyKind::Q, SubsetMask(a)).unwrap(), 1.0);
        }
    }

    #[test]
    fn caps() {
        let big = MassFunction::vacuous(Arc::new(Frame::numbered(13).unwrap()));
        assert!(matches!(
            oracle_body(&big, BodyKind::Pl, SubsetMask(1)),
            Err(Error::FrameTooLargeForOracle { n: 13, max: 12 })
        ));
        let eleven = MassFunction::vacuous(Arc::new(Frame::numbered(11).unwrap()));
        assert!(matches!(
            oracle_conjunctive(&eleven, &eleven),
            Err(Error::FrameTooLargeForOracle { n: 11, max: 10 })
        ));
    }

    #[test]
    fn conjunctive_by_hand() {
        let f = abc();
        let m1 = MassFunction::new(f.clone(), [(SubsetMask(0b001), 0.6), (f.full(), 0.4)]).unwrap();
        let m2 = MassFunction::new(
            f.clone(),
            [(SubsetMask(0b010), 0.5), (SubsetMask(0b011), 0.5)],
        )
        .unwrap();
        let r = oracle_conjunctive(&m1, &m2).unwrap();
        assert_eq!(r.len(), 4);
        assert!((r.conflict() - 0.3).abs() < 1e-15);
        assert!((r.mass(SubsetMask(0b001)) - 0.3).abs() < 1e-15);
        assert!((r.mass(SubsetMask(0b010)) - 0.2).abs() < 1e-15);
        assert!((r.mass(SubsetMask(0b011)) - 0.2).abs() < 1e-15);
        let v = MassFunction::vacuous(f);
        assert!(oracle_conjunctive(&v, &m2).unwrap().approx_eq(&m2, 1e-15));
    }

    #[test]
    fn sampler_zero_moves_is_pignistic_probability() {
        let m = sample();
        let s = sample_isopignistic(&m, 7, 0).unwrap();
        assert_eq!(s.len(), 3);
        assert!((s.mass(SubsetMask(0b001)) - (0.5 + 0.15 + 0.2 / 3.0)).abs() < 1e-15);
    }

    #[test]
    fn sampler_moves_keep_betp() {
        let m = sample();
        for seed in 0..20 {
            let s = sample_isopignistic(&m, seed, 10).unwrap();
            assert!(s.len() > 1);
            for i in 0..3 {
                let x = SubsetMask::singleton(i);
                let got = oracle_body(&s, BodyKind::Betp, x).unwrap();
                let want = oracle_body(&m, BodyKind::Betp, x).unwrap();
                assert!((got - want).abs() < 1e-12);
            }
        }
        let open =
            MassFunction::new(abc(), [(SubsetMask::EMPTY, 0.5), (SubsetMask(1), 0.5)]).unwrap();
        assert!(matches!(
            sample_isopignistic(&open, 0, 3),
            Err(Error::EmptySetFocal { .. })
        ));
    }
}
