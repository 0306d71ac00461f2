//! Hilbert-polygon JSON: a name, a class label and the region's ranges.
//!
//! ```text
//! {
//!   "name": "Polygon 1",
//!   "type": "Nuclear Material",
//!   "Ranges": [[8,12],[17,18],[23,24],[27,36],[53,53]]
//! }
//! ```
//!
//! The document carries no grid, so parsing takes the [`GridGeometry`] from
//! the caller. An optional integer `"id"` is read when present (default 0).

use std::fmt::Write as _;

use hilbert_roi_core::{AnnotationRecord, GridGeometry, RangeSet};
use serde_json::{Map, Value};

use super::{json_error_offset, straighten_quotes};
use crate::error::{Error, Result};

pub fn parse_hilbert_json(text: &str, geom: &GridGeometry) -> Result<AnnotationRecord> {
    let text = straighten_quotes(text);
    let value: Value = serde_json::from_str(&text)
        .map_err(|e| Error::parse("Hilbert JSON", json_error_offset(&text, &e), e.to_string()))?;
    let obj = value
        .as_object()
        .ok_or_else(|| Error::Schema("Hilbert JSON must be an object".into()))?;
    record_from_object(obj, geom)
}

pub(crate) fn record_from_object(
    obj: &Map<String, Value>,
    geom: &GridGeometry,
) -> Result<AnnotationRecord> {
    let text_field = |key: &str| -> Result<String> {
        match obj.get(key) {
            None | Some(Value::Null) => Ok(String::new()),
            Some(Value::String(s)) => Ok(s.clone()),
            Some(other) => Err(Error::Schema(format!(
                "\"{key}\" must be a string, found {other}"
            ))),
        }
    };
    let id = match obj.get("id") {
        None => 0,
        Some(v) => v.as_u64().ok_or_else(|| {
            Error::Schema(format!("\"id\" must be a non-negative integer, found {v}"))
        })?,
    };
    let ranges = obj
        .get("Ranges")
        .ok_or_else(|| Error::Schema("missing \"Ranges\"".into()))?
        .as_array()
        .ok_or_else(|| Error::Schema("\"Ranges\" must be an array".into()))?;
    let mut pairs = Vec::with_capacity(ranges.len());
    for r in ranges {
        let pair = r
            .as_array()
            .filter(|a| a.len() == 2)
            .ok_or_else(|| Error::Schema(format!("range {r} is not [start, end]")))?;
        let endpoint = |v: &Value| {
            v.as_u64().ok_or_else(|| {
                Error::Schema(format!("range endpoint {v} is not a non-negative integer"))
            })
        };
        let (b, e) = (endpoint(&pair[0])?, endpoint(&pair[1])?);
        if b > e {
            return Err(Error::Schema(format!("inverted range [{b},{e}]")));
        }
        pairs.push((b, e));
    }
    let rs = RangeSet::normalize(pairs)?;
    Ok(AnnotationRecord::new(
        id,
        text_field("name")?,
        text_field("type")?,
        rs,
        *geom,
    )?)
}

fn ranges_json(rs: &RangeSet) -> String {
    let mut out = String::from("[");
    for (i, r) in rs.ranges().iter().enumerate() {
        if i > 0 {
            out.push(',');
        }
        let _ = write!(out, "[{},{}]", r.start, r.end);
    }
    out.push(']');
    out
}

fn json_str(s: &str) -> String {
    Value::String(s.to_owned()).to_string()
}

/// The three-key pretty form shown above, without a trailing newline.
pub fn emit_hilbert_json(rec: &AnnotationRecord) -> String {
    format!(
        "{{\n  \"name\": {},\n  \"type\": {},\n  \"Ranges\": {}\n}}",
        json_str(&rec.name),
        json_str(&rec.class_label),
        ranges_json(&rec.ranges)
    )
}

/// Single-line form with the id, used in bulk containers.
pub fn emit_record_line(rec: &AnnotationRecord) -> String {
    format!(
        "{{\"id\":{},\"name\":{},\"type\":{},\"Ranges\":{}}}",
        rec.id,
        json_str(&rec.name),
        json_str(&rec.class_label),
        ranges_json(&rec.ranges)
    )
}
