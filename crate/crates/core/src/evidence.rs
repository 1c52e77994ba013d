//! Bodies of evidence computed by summing over the focal set only.
//!
//! Each query costs `O(|m|)` word operations, independent of `2^n`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::frame::SubsetMask;
use crate::mass::{MassFunction, EPS_MASS};

/// The set functions derived linearly from a mass function.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BodyKind {
    Bel,
    Pl,
    Q,
    Betp,
}

impl BodyKind {
    pub const ALL: [BodyKind; 4] = [BodyKind::Bel, BodyKind::Pl, BodyKind::Q, BodyKind::Betp];

    pub fn name(self) -> &'static str {
        match self {
            BodyKind::Bel => "bel",
            BodyKind::Pl => "pl",
            BodyKind::Q => "q",
            BodyKind::Betp => "betp",
        }
    }

    /// Value at `query` of this body for the bba putting unit mass on
    /// `focal`, before the `1/(1 − m(∅))` normalization of betP.
    ///
    /// Every body is `Σ_B m(B) · unit(B, query)` over focal `B`.
    pub fn unit_contribution(self, focal: SubsetMask, query: SubsetMask) -> f64 {
        let hit = |b: bool| if b { 1.0 } else { 0.0 };
        match self {
            BodyKind::Bel => hit(!focal.is_empty() && focal.is_subset_of(query)),
            BodyKind::Pl => hit(focal.intersects(query)),
            BodyKind::Q => hit(focal.is_superset_of(query)),
            BodyKind::Betp => {
                if focal.is_empty() {
                    0.0
                } else {
                    f64::from(focal.intersection(query).cardinality())
                        / f64::from(focal.cardinality())
                }
            }
        }
    }

    pub fn eval(self, m: &MassFunction, a: SubsetMask) -> Result<f64> {
        match self {
            BodyKind::Bel => Ok(bel(m, a)),
            BodyKind::Pl => Ok(pl(m, a)),
            BodyKind::Q => Ok(q(m, a)),
            BodyKind::Betp => betp(m, a),
        }
    }
}

impl fmt::Display for BodyKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for BodyKind {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, Self::Err> {
        match s {
            "bel" => Ok(BodyKind::Bel),
            "pl" => Ok(BodyKind::Pl),
            "q" => Ok(BodyKind::Q),
            "betp" => Ok(BodyKind::Betp),
            other => Err(format!("unknown body of evidence `{other}`")),
        }
    }
}

fn focal_sum(m: &MassFunction, kind: BodyKind, a: SubsetMask) -> f64 {
    m.iter()
        .map(|(b, mass)| mass * kind.unit_contribution(b, a))
        .sum()
}

/// Belief: mass of the nonempty focal elements contained in `a`.
pub fn bel(m: &MassFunction, a: SubsetMask) -> f64 {
    focal_sum(m, BodyKind::Bel, a)
}

/// Plausibility: mass of the focal elements meeting `a`.
pub fn pl(m: &MassFunction, a: SubsetMask) -> f64 {
    focal_sum(m, BodyKind::Pl, a)
}

/// Commonality: mass of the focal elements containing `a`.
pub fn q(m: &MassFunction, a: SubsetMask) -> f64 {
    focal_sum(m, BodyKind::Q, a)
}

/// `1 / (1 − m(∅))`, or [`Error::TotalConflict`] when nothing is left to
/// normalize.
fn pignistic_scale(m: &MassFunction) -> Result<f64> {
    let rest = 1.0 - m.conflict();
    if rest <= EPS_MASS {
        return Err(Error::TotalConflict);
    }
    Ok(1.0 / rest)
}

/// Pignistic probability of `a`. `betp(m, ∅) = 0`.
pub fn betp(m: &MassFunction, a: SubsetMask) -> Result<f64> {
    let scale = pignistic_scale(m)?;
    Ok(scale * focal_sum(m, BodyKind::Betp, a))
}

/// Pignistic probabilities of the singletons with a descending sort order.
#[derive(Debug, Clone, PartialEq)]
pub struct PignisticVector {
    /// `values[i] = betP({x_i})`.
    pub values: Vec<f64>,
    /// Element indices by descending probability; ties by ascending index.
    pub order: Vec<usize>,
}

impl PignisticVector {
    pub fn from_values(values: Vec<f64>) -> Self {
        let mut order: Vec<usize> = (0..values.len()).collect();
        // Stable sort keeps ascending index among ties.
        order.sort_by(|&i, &j| values[j].total_cmp(&values[i]));
        Self { values, order }
    }

    /// Probabilities in descending order, `p_1 ≥ p_2 ≥ … ≥ p_n`.
    pub fn sorted_values(&self) -> Vec<f64> {
        self.order.iter().map(|&i| self.values[i]).collect()
    }

    pub fn len(&self) -> usize {
        self.values.len()
    }

    pub fn is_empty(&self) -> bool {
        self.values.is_empty()
    }
}

/// `betP({x_i})` for every element in one pass over the focal set.
pub fn betp_vector(m: &MassFunction) -> Result<PignisticVector> {
    let scale = pignistic_scale(m)?;
    let mut values = vec![0.0; m.frame().len()];
    for (b, mass) in m.iter() {
        if b.is_empty() {
            continue;
        }
        let share = mass / f64::from(b.cardinality());
        for i in b.elements() {
            values[i] += share;
        }
    }
    for v in &mut values {
        *v *= scale;
    }
    Ok(PignisticVector::from_values(values))
}
