//! Hilbert-curve representation of image regions of interest.
//!
//! Regions on a `2^k x 2^k` cell grid are stored as canonical sets of
//! inclusive Hilbert-index ranges. The crate converts losslessly between
//! polygons, raster masks and range sets, and provides a flat sorted range
//! table that answers 2-D window queries as unions of 1-D range scans.
//!
//! The crate is `no_std` and needs only `alloc`.
//!
//! ```
//! use hilbert_roi_core::{GridGeometry, QueryWindow, rect_to_ranges};
//!
//! let grid = GridGeometry::new(4).unwrap();
//! // an aligned 4x4 square is a single run of 16 curve positions
//! let rs = rect_to_ranges(&QueryWindow::new(4, 8, 7, 11).unwrap(), &grid).unwrap();
//! assert_eq!(rs.len(), 1);
//! assert_eq!(rs.cell_count(), 16);
//! ```
#![no_std]
#![forbid(unsafe_code)]

extern crate alloc;

pub mod annotation;
pub mod codec;
pub mod error;
pub mod geometry;
pub mod hilbert;
pub mod index;
pub mod mask;
pub mod ranges;
pub mod raster;
pub mod trace;

pub use annotation::{AnnotationId, AnnotationRecord};
pub use codec::{cell_rect_to_ranges, mask_to_ranges, ranges_to_mask, rect_to_ranges};
pub use error::{Error, Result};
pub use geometry::{Point, PolygonGeom, QueryWindow};
pub use hilbert::{
    bits_for_dimension, decode, encode, order_for, Cell, GridGeometry, HilbertIndex, MAX_ORDER,
};
pub use index::{AnnotationMeta, IndexEntry, IndexTable, ScanStats};
pub use mask::RasterMask;
pub use ranges::{normalize_ranges, simplify_ranges, HilbertRange, RangeSet};
pub use raster::{
    covers_cell, encode_point, encode_polyline, rasterize_polygon, segment_touches_cell,
};
pub use trace::{components, mask_to_polygons, ranges_to_polygon};
