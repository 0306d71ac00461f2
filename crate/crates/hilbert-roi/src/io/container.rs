//! Newline-delimited JSON collections of annotation records.
//!
//! The first non-blank line is the grid header
//! `{"order":k,"cell_size":c,"width":w,"height":h}`; every following line is
//! one record in the compact Hilbert JSON form with an `"id"`.

use std::io::{BufRead, Write};

use hilbert_roi_core::{AnnotationRecord, GridGeometry};
use serde::{Deserialize, Serialize};
use serde_json::Value;

use super::hjson::{emit_record_line, record_from_object};
use crate::error::{Error, Result};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContainerHeader {
    pub order: u32,
    pub cell_size: u32,
    pub width: u32,
    pub height: u32,
}

impl ContainerHeader {
    pub fn geometry(&self) -> Result<GridGeometry> {
        Ok(GridGeometry::with_image(
            self.order,
            self.cell_size,
            self.width,
            self.height,
        )?)
    }
}

impl From<&GridGeometry> for ContainerHeader {
    fn from(g: &GridGeometry) -> Self {
        Self {
            order: g.order(),
            cell_size: g.cell_size(),
            width: g.width(),
            height: g.height(),
        }
    }
}

fn at_line(line: usize, e: Error) -> Error {
    match e {
        Error::Schema(m) => Error::Schema(format!("line {line}: {m}")),
        Error::Parse {
            format,
            position,
            message,
        } => Error::Parse {
            format,
            position,
            message: format!("line {line}: {message}"),
        },
        other => other,
    }
}

/// Read a container. Blank lines are skipped.
pub fn read_container<R: BufRead>(reader: R) -> Result<(GridGeometry, Vec<AnnotationRecord>)> {
    let mut geom = None;
    let mut records = Vec::new();
    for (i, line) in reader.lines().enumerate() {
        let line = line?;
        let lineno = i + 1;
        if line.trim().is_empty() {
            continue;
        }
        match geom {
            None => {
                let header: ContainerHeader = serde_json::from_str(&line).map_err(|e| {
                    Error::Schema(format!("line {lineno}: bad container header: {e}"))
                })?;
                geom = Some(header.geometry()?);
            }
            Some(g) => {
                let value: Value = serde_json::from_str(&line).map_err(|e| {
                    Error::parse(
                        "container",
                        e.column().saturating_sub(1),
                        format!("line {lineno}: {e}"),
                    )
                })?;
                let obj = value.as_object().ok_or_else(|| {
                    Error::Schema(format!("line {lineno}: record must be an object"))
                })?;
                if !obj.contains_key("id") {
                    return Err(Error::Schema(format!(
                        "line {lineno}: record has no \"id\""
                    )));
                }
                records.push(record_from_object(obj, &g).map_err(|e| at_line(lineno, e))?);
            }
        }
    }
    let geom = geom.ok_or_else(|| Error::Schema("container has no header line".into()))?;
    Ok((geom, records))
}

/// Write a container. Every record must use `geom`.
pub fn write_container<W: Write>(
    mut out: W,
    geom: &GridGeometry,
    records: &[AnnotationRecord],
) -> Result<()> {
    let header = serde_json::to_string(&ContainerHeader::from(geom)).expect("header serializes");
    writeln!(out, "{header}")?;
    for rec in records {
        if rec.geometry != *geom {
            return Err(hilbert_roi_core::Error::GeometryMismatch { id: rec.id }.into());
        }
        writeln!(out, "{}", emit_record_line(rec))?;
    }
    out.flush()?;
    Ok(())
}
