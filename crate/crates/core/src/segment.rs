//! Inclusive index intervals on the time axis.
//!
//! Indices are 1-based and both ends are inclusive, so `[b:e]` has length
//! `e - b + 1`. Conversion to 0-based half-open ranges happens only at the
//! file-format boundary.

use std::fmt;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Segment {
    start: usize,
    end: usize,
}

impl Segment {
    pub fn new(start: usize, end: usize) -> Result<Self> {
        if start == 0 || start > end {
            return Err(Error::InvalidSegment { start, end, n: end });
        }
        Ok(Self { start, end })
    }

    /// Checks `1 <= start <= end <= n` in addition to the basic invariant.
    pub fn within(start: usize, end: usize, n: usize) -> Result<Self> {
        if start == 0 || start > end || end > n {
            return Err(Error::InvalidSegment { start, end, n });
        }
        Ok(Self { start, end })
    }

    /// From a 0-based half-open range `[lo, hi)`.
    pub fn from_half_open(lo: usize, hi: usize) -> Result<Self> {
        if lo >= hi {
            return Err(Error::InvalidSegment {
                start: lo + 1,
                end: hi,
                n: hi,
            });
        }
        Ok(Self {
            start: lo + 1,
            end: hi,
        })
    }

    pub fn to_half_open(self) -> (usize, usize) {
        (self.start - 1, self.end)
    }

    pub(crate) fn new_unchecked(start: usize, end: usize) -> Self {
        debug_assert!(start >= 1 && start <= end);
        Self { start, end }
    }

    pub fn start(self) -> usize {
        self.start
    }

    pub fn end(self) -> usize {
        self.end
    }

    #[allow(clippy::len_without_is_empty)]
    pub fn len(self) -> usize {
        self.end - self.start + 1
    }

    pub fn contains(self, index: usize) -> bool {
        self.start <= index && index <= self.end
    }

    /// `|self ∩ other|`, zero when disjoint.
    pub fn intersection_len(self, other: Segment) -> usize {
        let lo = self.start.max(other.start);
        let hi = self.end.min(other.end);
        if hi >= lo {
            hi - lo + 1
        } else {
            0
        }
    }

    /// `|self ∪ other|` counted as index sets.
    pub fn union_len(self, other: Segment) -> usize {
        self.len() + other.len() - self.intersection_len(other)
    }

    /// True iff `self` is `nu`-coincident to `reference`, i.e. their overlap
    /// exceeds `nu * |reference|`. The relation is not symmetric.
    pub fn is_coincident_to(self, reference: Segment, nu: f64) -> bool {
        self.intersection_len(reference) as f64 > nu * reference.len() as f64
    }

    /// Coincidence in either direction.
    pub fn is_mutually_coincident(self, other: Segment, nu: f64) -> bool {
        self.is_coincident_to(other, nu) || other.is_coincident_to(self, nu)
    }
}

impl fmt::Display for Segment {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.start, self.end)
    }
}

pub fn seg_intersection_len(a: Segment, b: Segment) -> usize {
    a.intersection_len(b)
}

pub fn is_coincident(a: Segment, b: Segment, nu: f64) -> bool {
    a.is_coincident_to(b, nu)
}
