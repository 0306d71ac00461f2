use alloc::string::String;

use crate::error::Result;
use crate::hilbert::GridGeometry;
use crate::ranges::RangeSet;

pub type AnnotationId = u64;

/// A named, classed region stored only as its Hilbert ranges.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotationRecord {
    pub id: AnnotationId,
    pub name: String,
    pub class_label: String,
    pub ranges: RangeSet,
    pub geometry: GridGeometry,
}

impl AnnotationRecord {
    /// Checks that every range fits the grid.
    pub fn new(
        id: AnnotationId,
        name: impl Into<String>,
        class_label: impl Into<String>,
        ranges: RangeSet,
        geometry: GridGeometry,
    ) -> Result<Self> {
        if let Some(last) = ranges.last_index() {
            geometry.check_index(last)?;
        }
        Ok(Self {
            id,
            name: name.into(),
            class_label: class_label.into(),
            ranges,
            geometry,
        })
    }
}
