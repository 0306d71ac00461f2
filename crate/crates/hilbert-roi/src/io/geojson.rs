//! GeoJSON `Polygon` geometry objects.

use std::fmt::Write as _;

use hilbert_roi_core::PolygonGeom;
use serde_json::Value;

use super::{closed, json_error_offset, straighten_quotes, RawPolygon};
use crate::error::{Error, Result};

/// Look up `key` ignoring ASCII case.
fn get_ci<'a>(obj: &'a serde_json::Map<String, Value>, key: &str) -> Option<&'a Value> {
    obj.get(key).or_else(|| {
        obj.iter()
            .find(|(k, _)| k.eq_ignore_ascii_case(key))
            .map(|(_, v)| v)
    })
}

pub fn parse_geojson_raw(text: &str) -> Result<RawPolygon> {
    let text = straighten_quotes(text);
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse("GeoJSON", json_error_offset(&text, &e), e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("GeoJSON geometry must be an object".into()))?;
    match get_ci(obj, "type").and_then(Value::as_str) {
        Some(t) if t.eq_ignore_ascii_case("Polygon") => {}
        Some(t) => return Err(Error::UnsupportedType(t.to_owned())),
        None => return Err(Error::Schema("missing \"type\"".into())),
    }
    let coords = get_ci(obj, "coordinates")
        .ok_or_else(|| Error::Schema("missing \"coordinates\"".into()))?
        .as_array()
        .ok_or_else(|| Error::Schema("\"coordinates\" must be an array of rings".into()))?;
    if coords.is_empty() {
        return Err(Error::Schema("\"coordinates\" has no rings".into()));
    }
    let rings = coords
        .iter()
        .enumerate()
        .map(|(i, ring)| {
            ring.as_array()
                .ok_or_else(|| Error::Schema(format!("ring {i} is not an array")))?
                .iter()
                .map(|pos| {
                    let xy = pos.as_array().filter(|a| a.len() >= 2).ok_or_else(|| {
                        Error::Schema(format!("ring {i}: position {pos} is not [x, y]"))
                    })?;
                    let num = |v: &Value| {
                        v.as_f64()
                            .ok_or_else(|| Error::Schema(format!("ring {i}: {v} is not a number")))
                    };
                    Ok((num(&xy[0])?, num(&xy[1])?))
                })
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(RawPolygon { rings })
}

/// Unclosed rings are closed implicitly; rings with fewer than three distinct
/// positions are rejected.
pub fn parse_geojson_polygon(text: &str) -> Result<PolygonGeom> {
    parse_geojson_raw(text)?.quantize(1.0)
}

pub fn emit_geojson_polygon(poly: &PolygonGeom) -> String {
    let mut out = String::from("{\"type\":\"Polygon\",\"coordinates\":[");
    for (i, ring) in poly.rings().enumerate() {
        if i > 0 {
            out.push(',');
        }
        out.push('[');
        for (j, p) in closed(ring).enumerate() {
            if j > 0 {
                out.push(',');
            }
            let _ = write!(out, "[{},{}]", p.x, p.y);
        }
        out.push(']');
    }
    out.push_str("]}");
    out
}
