//! Text and bitmap interchange formats.
//!
//! Polygon notations (WKT, GeoJSON, SVG points) parse into a [`RawPolygon`]
//! of floating-point coordinates, which is then quantized to the integer pixel
//! grid. Input is accepted in a few non-standard spellings seen in the wild
//! (single-parenthesis WKT, a capitalised `"Type"` key, typographic quotes).
//! Output is always standard.

pub mod container;
pub mod geojson;
pub mod hjson;
pub mod pbm;
pub mod svg;
pub mod wkt;

use std::fmt;
use std::str::FromStr;

use hilbert_roi_core::{Point, PolygonGeom};

use crate::error::{Error, Result};

pub use container::{read_container, write_container, ContainerHeader};
pub use geojson::{emit_geojson_polygon, parse_geojson_polygon};
pub use hjson::{emit_hilbert_json, emit_record_line, parse_hilbert_json};
pub use pbm::{read_mask_pbm, write_mask_pbm};
pub use svg::{emit_svg, emit_svg_points, parse_svg_points};
pub use wkt::{emit_wkt, parse_wkt};

/// Polygon rings as parsed, before snapping to integer pixels. The first
/// ring is the outer boundary.
#[derive(Clone, Debug, PartialEq)]
pub struct RawPolygon {
    pub rings: Vec<Vec<(f64, f64)>>,
}

impl RawPolygon {
    /// Multiply every coordinate by `scale` and require the result to be a
    /// non-negative integer that fits in `u32`.
    pub fn quantize(&self, scale: f64) -> Result<PolygonGeom> {
        if !(scale.is_finite() && scale > 0.0) {
            return Err(Error::Format(format!("invalid coordinate scale {scale}")));
        }
        let mut rings = self.rings.iter().map(|ring| {
            ring.iter()
                .map(|&(x, y)| Ok(Point::new(snap(x * scale)?, snap(y * scale)?)))
                .collect::<Result<Vec<_>>>()
        });
        let outer = rings
            .next()
            .ok_or_else(|| Error::Schema("polygon has no rings".into()))??;
        let holes = rings.collect::<Result<Vec<_>>>()?;
        Ok(PolygonGeom::new(outer, holes)?)
    }
}

fn snap(v: f64) -> Result<u32> {
    if v.fract() != 0.0 || !v.is_finite() {
        return Err(Error::Format(format!(
            "coordinate {v} is not integral; rescale the input onto the pixel grid"
        )));
    }
    if v < 0.0 || v > f64::from(u32::MAX) {
        return Err(Error::Format(format!(
            "coordinate {v} is outside 0..=u32::MAX"
        )));
    }
    Ok(v as u32)
}

/// Replace typographic double quotes with ASCII ones.
pub(crate) fn straighten_quotes(text: &str) -> std::borrow::Cow<'_, str> {
    if text.contains(['\u{201C}', '\u{201D}']) {
        text.replace(['\u{201C}', '\u{201D}'], "\"").into()
    } else {
        text.into()
    }
}

/// Byte offset of a serde_json error position.
pub(crate) fn json_error_offset(text: &str, err: &serde_json::Error) -> usize {
    let line_start: usize = text
        .split_inclusive('\n')
        .take(err.line().saturating_sub(1))
        .map(str::len)
        .sum();
    line_start + err.column().saturating_sub(1)
}

/// Closed ring (first vertex repeated at the end), as emitted by every writer.
pub(crate) fn closed(ring: &[Point]) -> impl Iterator<Item = &Point> {
    ring.iter().chain(ring.first())
}

/// File formats understood by the CLI.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Format {
    Wkt,
    GeoJson,
    Svg,
    HilbertJson,
    Pbm,
}

impl Format {
    pub fn is_polygon(self) -> bool {
        matches!(self, Format::Wkt | Format::GeoJson | Format::Svg)
    }

    /// Guess from a file extension.
    pub fn from_extension(path: &str) -> Option<Format> {
        let ext = path.rsplit_once('.')?.1.to_ascii_lowercase();
        match ext.as_str() {
            "wkt" => Some(Format::Wkt),
            "geojson" => Some(Format::GeoJson),
            "svg" => Some(Format::Svg),
            "hjson" => Some(Format::HilbertJson),
            "pbm" => Some(Format::Pbm),
            _ => None,
        }
    }

    /// Guess from content.
    pub fn sniff(bytes: &[u8]) -> Option<Format> {
        let text = String::from_utf8_lossy(&bytes[..bytes.len().min(4096)]);
        let t = text.trim_start();
        if t.starts_with("P1") || t.starts_with("P4") {
            return Some(Format::Pbm);
        }
        if t.len() >= 7 && t[..7].eq_ignore_ascii_case("POLYGON") {
            return Some(Format::Wkt);
        }
        if t.starts_with('<') || t.contains("points=") {
            return Some(Format::Svg);
        }
        if t.starts_with('{') {
            return Some(if t.contains("\"Ranges\"") {
                Format::HilbertJson
            } else {
                Format::GeoJson
            });
        }
        None
    }
}

impl FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "wkt" => Ok(Format::Wkt),
            "geojson" | "json" => Ok(Format::GeoJson),
            "svg" => Ok(Format::Svg),
            "hjson" | "hilbert" => Ok(Format::HilbertJson),
            "pbm" => Ok(Format::Pbm),
            other => Err(format!(
                "unknown format `{other}` (expected wkt, geojson, svg, hjson or pbm)"
            )),
        }
    }
}

impl fmt::Display for Format {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Format::Wkt => "wkt",
            Format::GeoJson => "geojson",
            Format::Svg => "svg",
            Format::HilbertJson => "hjson",
            Format::Pbm => "pbm",
        })
    }
}
