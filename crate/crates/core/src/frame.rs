//! Frames of discernment and subsets encoded as bit masks.

use std::collections::HashMap;
use std::fmt;

use crate::error::{Error, Result};

/// Hard cap on the number of frame elements; a subset must fit in a `u64`.
pub const MAX_FRAME_SIZE: usize = 64;

/// An ordered, labeled frame of discernment.
///
/// The position of a label in the frame is its bit index in every
/// [`SubsetMask`] built against the frame.
#[derive(Debug, Clone)]
pub struct Frame {
    labels: Vec<String>,
    index: HashMap<String, usize>,
}

impl Frame {
    pub fn new<I, S>(labels: I) -> Result<Self>
    where
        I: IntoIterator<Item = S>,
        S: Into<String>,
    {
        let labels: Vec<String> = labels.into_iter().map(Into::into).collect();
        if labels.is_empty() {
            return Err(Error::EmptyFrame);
        }
        if labels.len() > MAX_FRAME_SIZE {
            return Err(Error::FrameTooLarge {
                n: labels.len(),
                max: MAX_FRAME_SIZE,
            });
        }
        let mut index = HashMap::with_capacity(labels.len());
        for (i, label) in labels.iter().enumerate() {
            if label.is_empty() {
                return Err(Error::EmptyLabel);
            }
            if index.insert(label.clone(), i).is_some() {
                return Err(Error::DuplicateLabel(label.clone()));
            }
        }
        Ok(Self { labels, index })
    }

    /// Frame `x1, x2, …, xn`.
    pub fn numbered(n: usize) -> Result<Self> {
        Self::new((1..=n).map(|i| format!("x{i}")))
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn index_of(&self, label: &str) -> Option<usize> {
        self.index.get(label).copied()
    }

    /// The whole frame `X`.
    pub fn full(&self) -> SubsetMask {
        SubsetMask::full(self.len())
    }

    pub fn singleton(&self, i: usize) -> SubsetMask {
        debug_assert!(i < self.len());
        SubsetMask::singleton(i)
    }

    /// `X ∖ {x_i}`.
    pub fn coatom(&self, i: usize) -> SubsetMask {
        self.full().without(i)
    }

    pub fn complement(&self, a: SubsetMask) -> SubsetMask {
        SubsetMask(!a.0 & self.full().0)
    }

    pub fn contains_mask(&self, a: SubsetMask) -> bool {
        a.0 & !self.full().0 == 0
    }

    /// Encodes a list of labels. Repeated labels collapse.
    pub fn parse_subset<I, S>(&self, names: I) -> Result<SubsetMask>
    where
        I: IntoIterator<Item = S>,
        S: AsRef<str>,
    {
        let mut mask = SubsetMask::EMPTY;
        for name in names {
            let name = name.as_ref();
            let i = self
                .index_of(name)
                .ok_or_else(|| Error::UnknownLabel(name.to_string()))?;
            mask = mask.with(i);
        }
        Ok(mask)
    }

    /// Labels of `a` in frame order.
    pub fn names_of(&self, a: SubsetMask) -> Vec<&str> {
        a.elements().map(|i| self.label(i)).collect()
    }

    /// `{a,b}` style rendering, `∅` for the empty set.
    pub fn format_subset(&self, a: SubsetMask) -> String {
        if a.is_empty() {
            return "∅".to_string();
        }
        format!("{{{}}}", self.names_of(a).join(","))
    }
}

impl PartialEq for Frame {
    fn eq(&self, other: &Self) -> bool {
        self.labels == other.labels
    }
}

impl Eq for Frame {}

/// A subset of a frame; bit `i` is set iff element `i` belongs to it.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Default)]
pub struct SubsetMask(pub u64);

impl SubsetMask {
    pub const EMPTY: SubsetMask = SubsetMask(0);

    pub fn full(n: usize) -> Self {
        debug_assert!(n <= MAX_FRAME_SIZE);
        if n == MAX_FRAME_SIZE {
            SubsetMask(u64::MAX)
        } else {
            SubsetMask((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> Self {
        SubsetMask(1u64 << i)
    }

    pub fn bits(self) -> u64 {
        self.0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn cardinality(self) -> u32 {
        self.0.count_ones()
    }

    pub fn contains(self, i: usize) -> bool {
        self.0 >> i & 1 == 1
    }

    pub fn with(self, i: usize) -> Self {
        SubsetMask(self.0 | 1u64 << i)
    }

    pub fn without(self, i: usize) -> Self {
        SubsetMask(self.0 & !(1u64 << i))
    }

    pub fn intersection(self, other: Self) -> Self {
        SubsetMask(self.0 & other.0)
    }

    pub fn union(self, other: Self) -> Self {
        SubsetMask(self.0 | other.0)
    }

    pub fn symmetric_difference(self, other: Self) -> Self {
        SubsetMask(self.0 ^ other.0)
    }

    pub fn intersects(self, other: Self) -> bool {
        self.0 & other.0 != 0
    }

    pub fn is_subset_of(self, other: Self) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_superset_of(self, other: Self) -> bool {
        other.is_subset_of(self)
    }

    /// Indices of the elements, ascending.
    pub fn elements(self) -> impl Iterator<Item = usize> {
        let mut rest = self.0;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let i = rest.trailing_zeros() as usize;
                rest &= rest - 1;
                Some(i)
            }
        })
    }
}

impl fmt::Display for SubsetMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:#b}", self.0)
    }
}
