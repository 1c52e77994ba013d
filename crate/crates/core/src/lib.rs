//! Belief functions over finite frames, stored by their focal sets.
//!
//! A basic belief assignment (bba) is kept as a hash table from focal
//! elements (subsets encoded as `u64` bit masks) to masses. On top of that
//! the crate provides:
//!
//! * the bodies of evidence bel, pl, q and betP ([`evidence`]);
//! * the non-normalized conjunctive rule, sparse and through commonalities
//!   ([`combine`], [`dense`]);
//! * focal-set reductions: the least committed isopignistic, mixed linear
//!   reductions keeping betP plus one other body, and k-means clustering of
//!   focal elements ([`reduce`]);
//! * brute-force powerset oracles for all of the above ([`oracle`]).
//!
//! ```
//! use std::sync::Arc;
//! use belief_core::{combine::conjunctive, evidence::pl, Frame, MassFunction};
//!
//! let frame = Arc::new(Frame::new(["a", "b", "c"])?);
//! let a = frame.parse_subset(["a"])?;
//! let ab = frame.parse_subset(["a", "b"])?;
//! let m1 = MassFunction::new(frame.clone(), [(a, 0.6), (frame.full(), 0.4)])?;
//! let m2 = MassFunction::new(frame.clone(), [(ab, 1.0)])?;
//! let m = conjunctive(&m1, &m2)?;
//! assert_eq!(m.len(), 2);
//! assert!((pl(&m, a) - 1.0).abs() < 1e-12);
//! # Ok::<(), belief_core::Error>(())
//! ```

pub mod combine;
pub mod dense;
pub mod error;
pub mod evidence;
pub mod frame;
pub mod io;
pub mod mass;
pub mod oracle;
pub mod random;
pub mod reduce;

pub use error::{Error, Result};
pub use evidence::{BodyKind, PignisticVector};
pub use frame::{Frame, SubsetMask, MAX_FRAME_SIZE};
pub use mass::{MassFunction, EPS_MASS, EPS_SUM};
pub use reduce::ReductionReport;
