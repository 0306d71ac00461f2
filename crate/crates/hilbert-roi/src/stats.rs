//! Storage statistics for vertex form versus range form.
//!
//! Byte model: a vertex is two 4-byte integers, a range is two 8-byte
//! indexes. Bit widths follow `ceil(log2(max(width, height)))` per
//! coordinate; a Hilbert index interleaves both, so it needs twice that.

use hilbert_roi_core::{
    bits_for_dimension, mask_to_ranges, rasterize_polygon, GridGeometry, PolygonGeom,
};
use serde::Serialize;

use crate::error::{Error, Result};

pub const BYTES_PER_VERTEX: u64 = 8;
pub const BYTES_PER_RANGE: u64 = 16;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct PolygonStats {
    /// Distinct vertices over all rings (closing repeats not counted).
    pub vertices: u64,
    pub ranges: u64,
    pub cells: u64,
}

pub fn polygon_stats(poly: &PolygonGeom, geom: &GridGeometry) -> Result<PolygonStats> {
    let rs = mask_to_ranges(&rasterize_polygon(poly, geom)?);
    Ok(PolygonStats {
        vertices: poly.vertex_count() as u64,
        ranges: rs.len() as u64,
        cells: rs.cell_count(),
    })
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct CorpusStats {
    pub polygon_count: u64,
    pub total_vertices: u64,
    pub vertices_per_polygon: f64,
    pub total_ranges: u64,
    pub ranges_per_polygon: f64,
    pub total_cells: u64,
    pub stored_bytes_polygon_form: u64,
    pub stored_bytes_range_form: u64,
    pub coordinate_bits: u32,
    pub index_bits: u32,
}

impl CorpusStats {
    /// Stats from published or precomputed totals. `total_cells` is zero when
    /// unknown.
    pub fn from_totals(
        polygon_count: u64,
        total_vertices: u64,
        total_ranges: u64,
        image_width: u32,
        image_height: u32,
    ) -> Result<Self> {
        if polygon_count == 0 {
            return Err(Error::Spec("statistics need at least one polygon".into()));
        }
        let coordinate_bits = bits_for_dimension(u64::from(image_width.max(image_height)))?;
        Ok(Self {
            polygon_count,
            total_vertices,
            vertices_per_polygon: total_vertices as f64 / polygon_count as f64,
            total_ranges,
            ranges_per_polygon: total_ranges as f64 / polygon_count as f64,
            total_cells: 0,
            stored_bytes_polygon_form: total_vertices * BYTES_PER_VERTEX,
            stored_bytes_range_form: total_ranges * BYTES_PER_RANGE,
            coordinate_bits,
            index_bits: 2 * coordinate_bits,
        })
    }

    pub fn from_polygons(per_polygon: &[PolygonStats], geom: &GridGeometry) -> Result<Self> {
        let sum = |f: fn(&PolygonStats) -> u64| per_polygon.iter().map(f).sum::<u64>();
        let mut s = Self::from_totals(
            per_polygon.len() as u64,
            sum(|p| p.vertices),
            sum(|p| p.ranges),
            geom.width(),
            geom.height(),
        )?;
        s.total_cells = sum(|p| p.cells);
        Ok(s)
    }

    pub fn to_table(&self) -> String {
        let rows: [(&str, String); 10] = [
            ("polygons", self.polygon_count.to_string()),
            ("points", self.total_vertices.to_string()),
            (
                "points per polygon",
                format!("{:.1}", self.vertices_per_polygon),
            ),
            ("Hilbert ranges", self.total_ranges.to_string()),
            (
                "ranges per polygon",
                format!("{:.1}", self.ranges_per_polygon),
            ),
            ("covered cells", self.total_cells.to_string()),
            (
                "bytes, polygon form",
                self.stored_bytes_polygon_form.to_string(),
            ),
            (
                "bytes, range form",
                self.stored_bytes_range_form.to_string(),
            ),
            ("bits per coordinate", self.coordinate_bits.to_string()),
            ("bits per Hilbert index", self.index_bits.to_string()),
        ];
        rows.iter()
            .map(|(k, v)| format!("{k:<24}{v:>16}\n"))
            .collect()
    }
}

pub fn compute_stats(corpus: &[PolygonGeom], geom: &GridGeometry) -> Result<CorpusStats> {
    let per = corpus
        .iter()
        .map(|p| polygon_stats(p, geom))
        .collect::<Result<Vec<_>>>()?;
    CorpusStats::from_polygons(&per, geom)
}
