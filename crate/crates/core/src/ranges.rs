//! Canonical sets of inclusive Hilbert-index intervals.

use alloc::vec::Vec;
use core::fmt;

use crate::error::{Error, Result};
use crate::hilbert::HilbertIndex;

/// Inclusive interval `[start, end]` of curve positions.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct HilbertRange {
    pub start: HilbertIndex,
    pub end: HilbertIndex,
}

impl HilbertRange {
    pub fn new(start: HilbertIndex, end: HilbertIndex) -> Result<Self> {
        if start > end {
            return Err(Error::InvertedInterval { start, end });
        }
        Ok(Self { start, end })
    }

    pub const fn single(n: HilbertIndex) -> Self {
        Self { start: n, end: n }
    }

    /// Number of cells covered.
    #[allow(clippy::len_without_is_empty)]
    pub fn len(&self) -> u64 {
        self.end - self.start + 1
    }

    pub fn contains(&self, n: HilbertIndex) -> bool {
        self.start <= n && n <= self.end
    }

    pub fn overlaps(&self, other: &HilbertRange) -> bool {
        self.start <= other.end && self.end >= other.start
    }
}

impl fmt::Display for HilbertRange {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{},{}]", self.start, self.end)
    }
}

/// Sorted, disjoint, maximally merged intervals: `end_i + 1 < start_{i+1}`.
///
/// Every cell set has exactly one canonical `RangeSet`, so equality of range
/// sets is equality of cell sets.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash)]
pub struct RangeSet {
    ranges: Vec<HilbertRange>,
}

impl RangeSet {
    pub const fn new() -> Self {
        Self { ranges: Vec::new() }
    }

    /// Canonicalize arbitrary `(start, end)` pairs: sort, then merge overlapping
    /// and adjacent intervals.
    pub fn normalize<I>(raw: I) -> Result<Self>
    where
        I: IntoIterator<Item = (HilbertIndex, HilbertIndex)>,
    {
        let mut ranges = raw
            .into_iter()
            .map(|(b, e)| HilbertRange::new(b, e))
            .collect::<Result<Vec<_>>>()?;
        ranges.sort_unstable();
        Ok(Self::merge_sorted(ranges))
    }

    fn merge_sorted(sorted: Vec<HilbertRange>) -> Self {
        let mut out: Vec<HilbertRange> = Vec::with_capacity(sorted.len());
        for r in sorted {
            match out.last_mut() {
                Some(last) if r.start <= last.end.saturating_add(1) => {
                    last.end = last.end.max(r.end);
                }
                _ => out.push(r),
            }
        }
        Self { ranges: out }
    }

    /// Accept intervals only if they are already canonical.
    pub fn from_canonical(ranges: Vec<HilbertRange>) -> Result<Self> {
        for r in &ranges {
            if r.start > r.end {
                return Err(Error::InvertedInterval {
                    start: r.start,
                    end: r.end,
                });
            }
        }
        let canonical = ranges.windows(2).all(|w| {
            w[0].end
                .checked_add(1)
                .is_some_and(|next| next < w[1].start)
        });
        if !canonical {
            return Err(Error::InvalidArgument(
                "ranges are not sorted, disjoint and merged",
            ));
        }
        Ok(Self { ranges })
    }

    /// Build from strictly increasing indices.
    pub(crate) fn from_sorted_indices<I: IntoIterator<Item = HilbertIndex>>(indices: I) -> Self {
        let mut out: Vec<HilbertRange> = Vec::new();
        for n in indices {
            match out.last_mut() {
                Some(last) if last.end + 1 == n => last.end = n,
                _ => out.push(HilbertRange::single(n)),
            }
        }
        Self { ranges: out }
    }

    /// Pair sorted range starts with sorted range ends.
    pub(crate) fn from_boundaries(mut starts: Vec<u64>, mut ends: Vec<u64>) -> Self {
        debug_assert_eq!(starts.len(), ends.len());
        starts.sort_unstable();
        ends.sort_unstable();
        let ranges = starts
            .into_iter()
            .zip(ends)
            .map(|(start, end)| HilbertRange { start, end })
            .collect();
        Self { ranges }
    }

    pub fn ranges(&self) -> &[HilbertRange] {
        &self.ranges
    }

    pub fn into_ranges(self) -> Vec<HilbertRange> {
        self.ranges
    }

    /// Number of intervals.
    pub fn len(&self) -> usize {
        self.ranges.len()
    }

    pub fn is_empty(&self) -> bool {
        self.ranges.is_empty()
    }

    /// Number of cells covered.
    pub fn cell_count(&self) -> u64 {
        self.ranges.iter().map(HilbertRange::len).sum()
    }

    pub fn first_index(&self) -> Option<HilbertIndex> {
        self.ranges.first().map(|r| r.start)
    }

    pub fn last_index(&self) -> Option<HilbertIndex> {
        self.ranges.last().map(|r| r.end)
    }

    pub fn contains(&self, n: HilbertIndex) -> bool {
        let i = self.ranges.partition_point(|r| r.end < n);
        self.ranges.get(i).is_some_and(|r| r.start <= n)
    }

    /// True if the two sets share at least one cell.
    pub fn intersects(&self, other: &RangeSet) -> bool {
        let (mut i, mut j) = (0, 0);
        while i < self.ranges.len() && j < other.ranges.len() {
            let (a, b) = (&self.ranges[i], &other.ranges[j]);
            if a.overlaps(b) {
                return true;
            }
            if a.end < b.end {
                i += 1;
            } else {
                j += 1;
            }
        }
        false
    }

    pub fn union(&self, other: &RangeSet) -> RangeSet {
        let mut all: Vec<HilbertRange> = self.ranges.iter().chain(&other.ranges).copied().collect();
        all.sort_unstable();
        Self::merge_sorted(all)
    }

    /// Every covered index, in curve order.
    pub fn indices(&self) -> impl Iterator<Item = HilbertIndex> + '_ {
        self.ranges.iter().flat_map(|r| r.start..=r.end)
    }

    /// Coarsen to at most `max_ranges` intervals by filling the smallest gaps.
    ///
    /// The result always covers the input. Among gaps of equal size the earlier
    /// one is filled first.
    pub fn simplify(&self, max_ranges: usize) -> Result<RangeSet> {
        if max_ranges == 0 {
            return Err(Error::InvalidArgument("max_ranges must be at least 1"));
        }
        if self.ranges.len() <= max_ranges {
            return Ok(self.clone());
        }
        let mut gaps: Vec<(u64, usize)> = self
            .ranges
            .windows(2)
            .enumerate()
            .map(|(i, w)| (w[1].start - w[0].end - 1, i))
            .collect();
        gaps.sort_unstable();
        let mut fill = alloc::vec![false; gaps.len()];
        for &(_, i) in &gaps[..self.ranges.len() - max_ranges] {
            fill[i] = true;
        }
        let mut out: Vec<HilbertRange> = Vec::with_capacity(max_ranges);
        out.push(self.ranges[0]);
        for (i, r) in self.ranges[1..].iter().enumerate() {
            if fill[i] {
                out.last_mut().expect("non-empty").end = r.end;
            } else {
                out.push(*r);
            }
        }
        Ok(Self { ranges: out })
    }
}

impl fmt::Display for RangeSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("[")?;
        for (i, r) in self.ranges.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{r}")?;
        }
        f.write_str("]")
    }
}

impl<'a> IntoIterator for &'a RangeSet {
    type Item = &'a HilbertRange;
    type IntoIter = core::slice::Iter<'a, HilbertRange>;

    fn into_iter(self) -> Self::IntoIter {
        self.ranges.iter()
    }
}

/// Free-function form of [`RangeSet::normalize`].
pub fn normalize_ranges<I>(raw: I) -> Result<RangeSet>
where
    I: IntoIterator<Item = (HilbertIndex, HilbertIndex)>,
{
    RangeSet::normalize(raw)
}

/// Free-function form of [`RangeSet::simplify`].
pub fn simplify_ranges(rs: &RangeSet, max_ranges: usize) -> Result<RangeSet> {
    rs.simplify(max_ranges)
}
