//! Square linear systems pairing candidate focal elements with constraints
//! on bodies of evidence.
//!
//! Row `r` of the matrix is the constraint `kind_r(query_r)`, column `c`
//! the candidate focal element `c`; entry `(r, c)` is what one unit of mass
//! on candidate `c` contributes to the constraint. Solving the system gives
//! the masses of a bba supported on the candidates that reproduces every
//! constrained value of the source bba.

use std::collections::HashSet;

use nalgebra::DMatrix;

use crate::error::{Error, Result};
use crate::evidence::BodyKind;
use crate::frame::SubsetMask;
use crate::mass::{MassFunction, EPS_MASS};

use super::ReductionReport;

/// Solutions below `-EPS_NEG` are reported as negative masses.
pub const EPS_NEG: f64 = 1e-9;

/// A system is singular when its smallest pivot falls below this fraction
/// of its largest.
pub const PIVOT_RATIO: f64 = 1e-10;

/// Relative cutoff on singular values for [`ConstraintSystem::numerical_rank`].
pub const RANK_TOL: f64 = 1e-10;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Constraint {
    pub kind: BodyKind,
    pub query: SubsetMask,
}

impl Constraint {
    pub fn new(kind: BodyKind, query: SubsetMask) -> Self {
        Self { kind, query }
    }
}

#[derive(Debug, Clone)]
pub struct ConstraintSystem {
    source: MassFunction,
    candidates: Vec<SubsetMask>,
    constraints: Vec<Constraint>,
    matrix: DMatrix<f64>,
    rhs: Vec<f64>,
}

pub fn build_constraint_system(
    m: &MassFunction,
    candidates: Vec<SubsetMask>,
    constraints: Vec<Constraint>,
) -> Result<ConstraintSystem> {
    if candidates.len() != constraints.len() {
        return Err(Error::ArityMismatch {
            candidates: candidates.len(),
            constraints: constraints.len(),
        });
    }
    let mut seen = HashSet::with_capacity(candidates.len());
    for &c in &candidates {
        if !seen.insert(c) {
            return Err(Error::DuplicateCandidate(c));
        }
    }
    let size = candidates.len();
    let matrix = DMatrix::from_fn(size, size, |r, c| {
        constraints[r]
            .kind
            .unit_contribution(candidates[c], constraints[r].query)
    });
    let rhs = constraints
        .iter()
        .map(|c| c.kind.eval(m, c.query))
        .collect::<Result<Vec<_>>>()?;
    Ok(ConstraintSystem {
        source: m.clone(),
        candidates,
        constraints,
        matrix,
        rhs,
    })
}

impl ConstraintSystem {
    pub fn candidates(&self) -> &[SubsetMask] {
        &self.candidates
    }

    pub fn constraints(&self) -> &[Constraint] {
        &self.constraints
    }

    pub fn matrix(&self) -> &DMatrix<f64> {
        &self.matrix
    }

    pub fn rhs(&self) -> &[f64] {
        &self.rhs
    }

    pub fn source(&self) -> &MassFunction {
        &self.source
    }

    pub fn size(&self) -> usize {
        self.candidates.len()
    }

    /// Number of singular values above `RANK_TOL` times the largest.
    pub fn numerical_rank(&self) -> usize {
        let sv = self.matrix.clone().svd(false, false).singular_values;
        let max = sv.iter().copied().fold(0.0, f64::max);
        if max == 0.0 {
            return 0;
        }
        sv.iter().filter(|&&s| s > RANK_TOL * max).count()
    }

    /// Raw solution `y` of `matrix · y = rhs`, possibly with negative entries.
    pub fn solve_raw(&self) -> Result<Vec<f64>> {
        lu_solve(&self.matrix, &self.rhs)
    }
}

/// Solves the system and assembles the reduced bba.
///
/// Entries in `(-EPS_NEG, EPS_MASS]` are dropped as rounding noise; anything
/// more negative fails with [`Error::NegativeMassSolution`].
pub fn solve_reduction(sys: &ConstraintSystem) -> Result<(MassFunction, ReductionReport)> {
    let y = sys.solve_raw()?;
    if y.iter().any(|&v| v < -EPS_NEG) {
        return Err(Error::NegativeMassSolution {
            candidates: sys.candidates.clone(),
            solution: y,
        });
    }
    let negative_flag = y.iter().any(|&v| v < 0.0);
    let entries = sys
        .candidates
        .iter()
        .zip(&y)
        .filter(|&(_, &v)| v > EPS_MASS)
        .map(|(&c, &v)| (c, v));
    let reduced = MassFunction::new(sys.source.frame_arc().clone(), entries)?;

    let mut secondary: f64 = 0.0;
    for (c, &target) in sys.constraints.iter().zip(&sys.rhs) {
        if c.kind != BodyKind::Betp {
            secondary = secondary.max((c.kind.eval(&reduced, c.query)? - target).abs());
        }
    }
    let report = ReductionReport::new(&sys.source, &reduced, secondary, negative_flag)?;
    Ok((reduced, report))
}

/// Gaussian elimination with partial pivoting.
fn lu_solve(a: &DMatrix<f64>, b: &[f64]) -> Result<Vec<f64>> {
    let n = a.nrows();
    debug_assert_eq!(n, a.ncols());
    debug_assert_eq!(n, b.len());
    let mut lu = a.clone();
    let mut x = b.to_vec();
    let mut pivots = Vec::with_capacity(n);

    for col in 0..n {
        let (pivot_row, pivot) =
            (col..n)
                .map(|r| (r, lu[(r, col)].abs()))
                .fold(
                    (col, -1.0),
                    |best, cur| if cur.1 > best.1 { cur } else { best },
                );
        pivots.push(pivot);
        if pivot == 0.0 {
            continue;
        }
        if pivot_row != col {
            lu.swap_rows(pivot_row, col);
            x.swap(pivot_row, col);
        }
        let p = lu[(col, col)];
        for r in col + 1..n {
            let factor = lu[(r, col)] / p;
            if factor == 0.0 {
                continue;
            }
            for c in col..n {
                lu[(r, c)] -= factor * lu[(col, c)];
            }
            x[r] -= factor * x[col];
        }
    }

    let largest = pivots.iter().copied().fold(0.0, f64::max);
    let smallest = pivots.iter().copied().fold(f64::INFINITY, f64::min);
    if n > 0 && (largest == 0.0 || smallest < PIVOT_RATIO * largest) {
        return Err(Error::SingularSystem {
            pivot_ratio: if largest == 0.0 {
                0.0
            } else {
                smallest / largest
            },
        });
    }

    for row in (0..n).rev() {
        let tail: f64 = (row + 1..n).map(|c| lu[(row, c)] * x[c]).sum();
        x[row] = (x[row] - tail) / lu[(row, row)];
    }
    Ok(x)
}
