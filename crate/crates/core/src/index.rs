//! Flat sorted range table answering region queries as unions of range scans.
//!
//! Every annotation range becomes one [`IndexEntry`]. Entries are sorted by
//! `(start, end, id)`, and a running maximum of `end` is kept next to them. A
//! query range `[qb, qe]` can only match entries before the first one with
//! `start > qe` (binary search on starts). It also cannot match anything
//! before the first position whose running max end reaches `qb` (binary search
//! on the prefix maxima). Query ranges are swept in order and each entry is
//! examined at most once per query.

use alloc::collections::{BTreeMap, BTreeSet};
use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use crate::annotation::{AnnotationId, AnnotationRecord};
use crate::codec::rect_to_ranges;
use crate::error::{Error, Result};
use crate::geometry::QueryWindow;
use crate::hilbert::{GridGeometry, HilbertIndex};
use crate::ranges::{HilbertRange, RangeSet};

/// One row of the range table.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IndexEntry {
    pub start: HilbertIndex,
    pub end: HilbertIndex,
    pub id: AnnotationId,
}

/// Per-annotation metadata kept alongside the range rows.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct AnnotationMeta {
    pub name: String,
    pub class_label: String,
}

/// Work done by one query.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct ScanStats {
    /// Entries whose end was compared against a query range.
    pub touched: usize,
    /// Binary searches issued.
    pub probes: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct IndexTable {
    geometry: GridGeometry,
    entries: Vec<IndexEntry>,
    max_end: Vec<HilbertIndex>,
    catalog: BTreeMap<AnnotationId, AnnotationMeta>,
}

impl IndexTable {
    pub fn new(geometry: GridGeometry) -> Self {
        Self {
            geometry,
            entries: Vec::new(),
            max_end: Vec::new(),
            catalog: BTreeMap::new(),
        }
    }

    /// One entry per range per record. All records must share `geometry` and
    /// have distinct ids.
    pub fn build(geometry: GridGeometry, records: &[AnnotationRecord]) -> Result<Self> {
        let mut table = Self::new(geometry);
        for rec in records {
            table.admit(rec)?;
        }
        table.entries.sort_unstable();
        table.rebuild_max_end(0);
        Ok(table)
    }

    /// Merge one record into the table, keeping sort order.
    pub fn insert(&mut self, record: &AnnotationRecord) -> Result<()> {
        let before = self.entries.len();
        self.admit(record)?;
        let mut added = self.entries.split_off(before);
        added.sort_unstable();
        let first_pos = added
            .first()
            .map(|e| self.entries.partition_point(|x| x < e))
            .unwrap_or(before);
        let mut merged = Vec::with_capacity(self.entries.len() + added.len());
        let (mut a, mut b) = (
            self.entries.drain(..).peekable(),
            added.into_iter().peekable(),
        );
        loop {
            let take_a = match (a.peek(), b.peek()) {
                (Some(x), Some(y)) => x <= y,
                (Some(_), None) => true,
                (None, Some(_)) => false,
                (None, None) => break,
            };
            let next = if take_a { a.next() } else { b.next() };
            merged.extend(next);
        }
        drop(a);
        self.entries = merged;
        self.rebuild_max_end(first_pos);
        Ok(())
    }

    /// Validate a record and append its rows unsorted.
    fn admit(&mut self, rec: &AnnotationRecord) -> Result<()> {
        if rec.geometry != self.geometry {
            return Err(Error::GeometryMismatch { id: rec.id });
        }
        if self.catalog.contains_key(&rec.id) {
            return Err(Error::DuplicateId(rec.id));
        }
        if let Some(last) = rec.ranges.last_index() {
            self.geometry.check_index(last)?;
        }
        self.catalog.insert(
            rec.id,
            AnnotationMeta {
                name: rec.name.clone(),
                class_label: rec.class_label.clone(),
            },
        );
        self.entries
            .extend(rec.ranges.ranges().iter().map(|r| IndexEntry {
                start: r.start,
                end: r.end,
                id: rec.id,
            }));
        Ok(())
    }

    fn rebuild_max_end(&mut self, from: usize) {
        self.max_end.truncate(from);
        let mut running = from
            .checked_sub(1)
            .and_then(|i| self.max_end.get(i).copied())
            .unwrap_or(0);
        for e in &self.entries[from..] {
            running = running.max(e.end);
            self.max_end.push(running);
        }
    }

    /// Reassemble a table from stored parts, verifying every structural
    /// invariant.
    pub fn from_parts(
        geometry: GridGeometry,
        entries: Vec<IndexEntry>,
        catalog: BTreeMap<AnnotationId, AnnotationMeta>,
    ) -> Result<Self> {
        if let Some(w) = entries.windows(2).find(|w| w[0] >= w[1]) {
            return Err(Error::Integrity(format!(
                "entries out of order at ({}, {}, {})",
                w[1].start, w[1].end, w[1].id
            )));
        }
        for e in &entries {
            if e.start > e.end {
                return Err(Error::Integrity(format!(
                    "inverted entry [{}, {}]",
                    e.start, e.end
                )));
            }
            if e.end >= geometry.cell_count() {
                return Err(Error::Integrity(format!(
                    "entry end {} exceeds grid",
                    e.end
                )));
            }
            if !catalog.contains_key(&e.id) {
                return Err(Error::Integrity(format!(
                    "entry references unknown id {}",
                    e.id
                )));
            }
        }
        let mut table = Self {
            geometry,
            entries,
            max_end: Vec::new(),
            catalog,
        };
        table.rebuild_max_end(0);
        let mut per_id: BTreeMap<AnnotationId, Vec<HilbertRange>> = BTreeMap::new();
        for e in &table.entries {
            per_id.entry(e.id).or_default().push(HilbertRange {
                start: e.start,
                end: e.end,
            });
        }
        for (id, ranges) in per_id {
            RangeSet::from_canonical(ranges).map_err(|_| {
                Error::Integrity(format!("ranges of annotation {id} are not canonical"))
            })?;
        }
        Ok(table)
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geometry
    }

    pub fn entries(&self) -> &[IndexEntry] {
        &self.entries
    }

    pub fn catalog(&self) -> &BTreeMap<AnnotationId, AnnotationMeta> {
        &self.catalog
    }

    /// Number of range rows.
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn annotation_count(&self) -> usize {
        self.catalog.len()
    }

    /// Reconstruct one annotation's range set from its rows.
    pub fn ranges_for(&self, id: AnnotationId) -> Option<RangeSet> {
        self.catalog.get(&id)?;
        let pairs = self
            .entries
            .iter()
            .filter(|e| e.id == id)
            .map(|e| (e.start, e.end));
        RangeSet::normalize(pairs).ok()
    }

    /// Reconstruct a full record.
    pub fn record(&self, id: AnnotationId) -> Option<AnnotationRecord> {
        let meta = self.catalog.get(&id)?;
        Some(AnnotationRecord {
            id,
            name: meta.name.clone(),
            class_label: meta.class_label.clone(),
            ranges: self.ranges_for(id)?,
            geometry: self.geometry,
        })
    }

    /// Ids of annotations sharing at least one cell with `rs`.
    pub fn query_ranges(&self, rs: &RangeSet) -> BTreeSet<AnnotationId> {
        self.query_ranges_instrumented(rs).0
    }

    pub fn query_ranges_instrumented(&self, rs: &RangeSet) -> (BTreeSet<AnnotationId>, ScanStats) {
        let mut ids = BTreeSet::new();
        let mut stats = ScanStats::default();
        // Entries before `scanned` were compared against an earlier, lower query
        // range. A row that failed there ends below this range's start as well.
        let mut scanned = 0usize;
        for q in rs.ranges() {
            let upper = self.entries.partition_point(|e| e.start <= q.end);
            let lower = self.max_end.partition_point(|&m| m < q.start);
            stats.probes += 2;
            let from = lower.max(scanned);
            if from >= upper {
                continue;
            }
            for e in &self.entries[from..upper] {
                stats.touched += 1;
                if e.end >= q.start {
                    ids.insert(e.id);
                }
            }
            scanned = scanned.max(upper);
        }
        (ids, stats)
    }

    /// Ids of annotations intersecting a pixel window.
    pub fn query_window(&self, window: &QueryWindow) -> Result<BTreeSet<AnnotationId>> {
        Ok(self.query_window_instrumented(window)?.0)
    }

    pub fn query_window_instrumented(
        &self,
        window: &QueryWindow,
    ) -> Result<(BTreeSet<AnnotationId>, ScanStats)> {
        let rs = rect_to_ranges(window, &self.geometry)?;
        Ok(self.query_ranges_instrumented(&rs))
    }
}
