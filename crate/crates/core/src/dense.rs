//! Dense `2^n` vectors and the fast Möbius transforms between mass and
//! commonality.
//!
//! Both transforms run in `n` in-place sweeps over the `2^n` entries. They
//! exist as a cross-check on the sparse path and are capped at
//! [`MAX_DENSE_FRAME`] elements.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::frame::{Frame, SubsetMask};
use crate::mass::{MassFunction, EPS_MASS, EPS_SUM};

/// Largest frame accepted by the dense path (2^20 reals = 8 MB).
pub const MAX_DENSE_FRAME: usize = 20;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum DenseKind {
    Mass,
    Commonality,
}

impl DenseKind {
    fn name(self) -> &'static str {
        match self {
            DenseKind::Mass => "mass",
            DenseKind::Commonality => "commonality",
        }
    }
}

/// A set function stored for every subset, indexed by mask value.
#[derive(Debug, Clone)]
pub struct DenseMassVector {
    frame: Arc<Frame>,
    values: Vec<f64>,
    kind: DenseKind,
}

fn check_dense_cap(frame: &Frame) -> Result<()> {
    if frame.len() > MAX_DENSE_FRAME {
        return Err(Error::FrameTooLargeForDense {
            n: frame.len(),
            max: MAX_DENSE_FRAME,
        });
    }
    Ok(())
}

impl DenseMassVector {
    /// Wraps raw values. A mass vector must be (numerically) nonnegative and
    /// sum to one.
    pub fn from_values(frame: Arc<Frame>, values: Vec<f64>, kind: DenseKind) -> Result<Self> {
        check_dense_cap(&frame)?;
        let expected = 1usize << frame.len();
        if values.len() != expected {
            return Err(Error::LengthMismatch {
                len: values.len(),
                expected,
            });
        }
        if kind == DenseKind::Mass {
            if let Some(&mass) = values.iter().find(|&&v| v.is_nan() || v < -EPS_MASS) {
                return Err(Error::NegativeMass { mass });
            }
            let sum: f64 = values.iter().sum();
            if (sum - 1.0).abs() > EPS_SUM {
                return Err(Error::MassSumInvalid { sum });
            }
        }
        Ok(Self {
            frame,
            values,
            kind,
        })
    }

    pub fn frame(&self) -> &Arc<Frame> {
        &self.frame
    }

    pub fn values(&self) -> &[f64] {
        &self.values
    }

    pub fn kind(&self) -> DenseKind {
        self.kind
    }

    pub fn get(&self, a: SubsetMask) -> f64 {
        self.values[a.0 as usize]
    }

    fn expect_kind(&self, kind: DenseKind) -> Result<()> {
        if self.kind != kind {
            return Err(Error::KindMismatch {
                expected: kind.name(),
                found: self.kind.name(),
            });
        }
        Ok(())
    }
}

/// Scatters the focal masses into a dense vector.
pub fn to_dense(m: &MassFunction) -> Result<DenseMassVector> {
    check_dense_cap(m.frame())?;
    let mut values = vec![0.0; 1usize << m.frame().len()];
    for (a, mass) in m.iter() {
        values[a.0 as usize] = mass;
    }
    Ok(DenseMassVector {
        frame: m.frame_arc().clone(),
        values,
        kind: DenseKind::Mass,
    })
}

/// Superset zeta transform: `q[A] = Σ_{B ⊇ A} m[B]`.
pub fn q_from_m(v: &DenseMassVector) -> Result<DenseMassVector> {
    v.expect_kind(DenseKind::Mass)?;
    let mut values = v.values.clone();
    superset_sums(&mut values);
    Ok(DenseMassVector {
        frame: v.frame.clone(),
        values,
        kind: DenseKind::Commonality,
    })
}

/// Inverse of [`q_from_m`]: `m[A] = Σ_{B ⊇ A} (−1)^{|B∖A|} q[B]`.
pub fn m_from_q(v: &DenseMassVector) -> Result<DenseMassVector> {
    v.expect_kind(DenseKind::Commonality)?;
    let mut values = v.values.clone();
    inverse_superset_sums(&mut values);
    Ok(DenseMassVector {
        frame: v.frame.clone(),
        values,
        kind: DenseKind::Mass,
    })
}

/// Gathers the entries above [`EPS_MASS`] into a sparse bba.
pub fn from_dense(v: &DenseMassVector) -> Result<MassFunction> {
    v.expect_kind(DenseKind::Mass)?;
    if let Some(&mass) = v.values.iter().find(|&&x| x.is_nan() || x < -EPS_MASS) {
        return Err(Error::NegativeMass { mass });
    }
    let entries = v
        .values
        .iter()
        .enumerate()
        .filter(|&(_, &x)| x > EPS_MASS)
        .map(|(i, &x)| (SubsetMask(i as u64), x));
    MassFunction::new(v.frame.clone(), entries)
}

/// Pointwise product of two commonality vectors on the same frame.
pub fn multiply_commonalities(a: &DenseMassVector, b: &DenseMassVector) -> Result<DenseMassVector> {
    a.expect_kind(DenseKind::Commonality)?;
    b.expect_kind(DenseKind::Commonality)?;
    if a.frame != b.frame && *a.frame != *b.frame {
        return Err(Error::FrameMismatch);
    }
    let values = a.values.iter().zip(&b.values).map(|(x, y)| x * y).collect();
    Ok(DenseMassVector {
        frame: a.frame.clone(),
        values,
        kind: DenseKind::Commonality,
    })
}

/// One sweep per bit: every entry without the bit absorbs its partner with it.
fn superset_sums(xs: &mut [f64]) {
    sweep(xs, |lo, hi| *lo += hi);
}

fn inverse_superset_sums(xs: &mut [f64]) {
    sweep(xs, |lo, hi| *lo -= hi);
}

fn sweep(xs: &mut [f64], update: impl Fn(&mut f64, f64)) {
    debug_assert!(xs.len().is_power_of_two());
    let mut half = 1;
    while half < xs.len() {
        for block in xs.chunks_exact_mut(2 * half) {
            let (lo, hi) = block.split_at_mut(half);
            for (l, &h) in lo.iter_mut().zip(hi.iter()) {
                update(l, h);
            }
        }
        half *= 2;
    }
}
