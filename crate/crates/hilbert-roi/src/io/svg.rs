//! SVG `<polygon points="...">`.

use std::fmt::Write as _;

use hilbert_roi_core::PolygonGeom;

use super::{closed, straighten_quotes, RawPolygon};
use crate::error::{Error, Result};

const FMT: &str = "SVG";

/// Accepts either a bare points value (`"1,1 1,4 3,5"`) or markup containing
/// a `points="..."` attribute.
pub fn parse_svg_raw(text: &str) -> Result<RawPolygon> {
    let text = straighten_quotes(text);
    let (value, base) = match attribute_value(&text, "points") {
        Some(found) => found,
        None if text.contains('<') => {
            return Err(Error::Format("SVG markup has no points attribute".into()));
        }
        None => (text.as_ref(), 0),
    };
    let mut nums = Vec::new();
    let mut pos = 0;
    for token in value.split(|c: char| c == ',' || c.is_whitespace()) {
        if !token.is_empty() {
            let v = token
                .parse::<f64>()
                .map_err(|_| Error::parse(FMT, base + pos, format!("bad number `{token}`")))?;
            nums.push((v, base + pos));
        }
        pos += token.len() + 1;
    }
    if nums.len() % 2 == 1 {
        let (_, at) = nums[nums.len() - 1];
        return Err(Error::parse(FMT, at, "odd number of coordinates"));
    }
    let ring = nums.chunks_exact(2).map(|c| (c[0].0, c[1].0)).collect();
    Ok(RawPolygon { rings: vec![ring] })
}

fn attribute_value<'a>(text: &'a str, name: &str) -> Option<(&'a str, usize)> {
    let mut from = 0;
    while let Some(i) = text[from..].find(name) {
        let at = from + i;
        let rest = text[at + name.len()..].trim_start();
        if let Some(rest) = rest.strip_prefix('=') {
            let rest = rest.trim_start();
            let quote = rest.chars().next().filter(|c| *c == '"' || *c == '\'')?;
            let body = &rest[1..];
            let end = body.find(quote)?;
            let start = text.len() - body.len();
            return Some((&body[..end], start));
        }
        from = at + name.len();
    }
    None
}

pub fn parse_svg_points(text: &str) -> Result<PolygonGeom> {
    parse_svg_raw(text)?.quantize(1.0)
}

/// Points attribute value for the outer ring, explicitly closed. Fails for
/// polygons with holes, which a single `<polygon>` cannot carry.
pub fn emit_svg_points(poly: &PolygonGeom) -> Result<String> {
    if !poly.holes().is_empty() {
        return Err(Error::Format(
            "an SVG <polygon> cannot represent holes".into(),
        ));
    }
    let mut out = String::new();
    for (i, p) in closed(poly.outer()).enumerate() {
        if i > 0 {
            out.push(' ');
        }
        let _ = write!(out, "{},{}", p.x, p.y);
    }
    Ok(out)
}

pub fn emit_svg(poly: &PolygonGeom) -> Result<String> {
    Ok(format!(
        "<svg xmlns=\"http://www.w3.org/2000/svg\"><polygon points=\"{}\"/></svg>",
        emit_svg_points(poly)?
    ))
}
