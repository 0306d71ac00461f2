//! On-disk range table.
//!
//! All integers are little-endian.
//!
//! | bytes | field                                   |
//! |-------|-----------------------------------------|
//! | 8     | magic `HROIIDX\0`                       |
//! | 4     | format version (1)                      |
//! | 16    | order, cell_size, width, height (u32)   |
//! | 8     | entry count n (u64)                     |
//! | 24n   | entries: start, end, id (u64 each)      |
//! | 8     | catalog length m (u64)                  |
//! | m     | catalog JSON `[{"id","name","type"}]`   |
//!
//! Entries are sorted by (start, end, id), so the file can be binary searched
//! in place. Loading re-verifies every table invariant.

use std::collections::BTreeMap;
use std::fs;
use std::path::Path;

use hilbert_roi_core::{AnnotationMeta, GridGeometry, IndexEntry, IndexTable};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub const MAGIC: [u8; 8] = *b"HROIIDX\0";
pub const VERSION: u32 = 1;
const ENTRY_BYTES: usize = 24;

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
struct CatalogRow {
    id: u64,
    name: String,
    #[serde(rename = "type")]
    class_label: String,
}

pub fn to_bytes(table: &IndexTable) -> Vec<u8> {
    let g = table.geometry();
    let catalog: Vec<CatalogRow> = table
        .catalog()
        .iter()
        .map(|(&id, m)| CatalogRow {
            id,
            name: m.name.clone(),
            class_label: m.class_label.clone(),
        })
        .collect();
    let catalog = serde_json::to_vec(&catalog).expect("catalog serializes");
    let mut out = Vec::with_capacity(60 + table.len() * ENTRY_BYTES + catalog.len());
    out.extend_from_slice(&MAGIC);
    out.extend_from_slice(&VERSION.to_le_bytes());
    for v in [g.order(), g.cell_size(), g.width(), g.height()] {
        out.extend_from_slice(&v.to_le_bytes());
    }
    out.extend_from_slice(&(table.len() as u64).to_le_bytes());
    for e in table.entries() {
        out.extend_from_slice(&e.start.to_le_bytes());
        out.extend_from_slice(&e.end.to_le_bytes());
        out.extend_from_slice(&e.id.to_le_bytes());
    }
    out.extend_from_slice(&(catalog.len() as u64).to_le_bytes());
    out.extend_from_slice(&catalog);
    out
}

struct Reader<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Reader<'a> {
    fn take(&mut self, n: usize, what: &str) -> Result<&'a [u8]> {
        let end = self
            .pos
            .checked_add(n)
            .filter(|&e| e <= self.bytes.len())
            .ok_or_else(|| Error::Integrity(format!("truncated file while reading {what}")))?;
        let s = &self.bytes[self.pos..end];
        self.pos = end;
        Ok(s)
    }

    fn u32(&mut self, what: &str) -> Result<u32> {
        Ok(u32::from_le_bytes(self.take(4, what)?.try_into().unwrap()))
    }

    fn u64(&mut self, what: &str) -> Result<u64> {
        Ok(u64::from_le_bytes(self.take(8, what)?.try_into().unwrap()))
    }
}

pub fn from_bytes(bytes: &[u8]) -> Result<IndexTable> {
    let mut r = Reader { bytes, pos: 0 };
    if r.take(8, "magic")? != MAGIC {
        return Err(Error::Integrity("not an index file (bad magic)".into()));
    }
    let version = r.u32("version")?;
    if version != VERSION {
        return Err(Error::Integrity(format!(
            "unsupported index version {version}"
        )));
    }
    let order = r.u32("grid header")?;
    let cell_size = r.u32("grid header")?;
    let width = r.u32("grid header")?;
    let height = r.u32("grid header")?;
    let geom = GridGeometry::with_image(order, cell_size, width, height)
        .map_err(|e| Error::Integrity(format!("bad grid header: {e}")))?;
    let n = r.u64("entry count")?;
    let span = usize::try_from(n)
        .ok()
        .and_then(|n| n.checked_mul(ENTRY_BYTES))
        .ok_or_else(|| Error::Integrity(format!("entry count {n} too large")))?;
    let raw = r.take(span, "entries")?;
    let entries = raw
        .chunks_exact(ENTRY_BYTES)
        .map(|c| IndexEntry {
            start: u64::from_le_bytes(c[0..8].try_into().unwrap()),
            end: u64::from_le_bytes(c[8..16].try_into().unwrap()),
            id: u64::from_le_bytes(c[16..24].try_into().unwrap()),
        })
        .collect();
    let m = r.u64("catalog length")?;
    let m = usize::try_from(m)
        .map_err(|_| Error::Integrity(format!("catalog length {m} too large")))?;
    let rows: Vec<CatalogRow> = serde_json::from_slice(r.take(m, "catalog")?)
        .map_err(|e| Error::Integrity(format!("bad catalog: {e}")))?;
    if r.pos != bytes.len() {
        return Err(Error::Integrity(format!(
            "{} trailing bytes after catalog",
            bytes.len() - r.pos
        )));
    }
    let mut catalog = BTreeMap::new();
    for row in rows {
        let meta = AnnotationMeta {
            name: row.name,
            class_label: row.class_label,
        };
        if catalog.insert(row.id, meta).is_some() {
            return Err(Error::Integrity(format!(
                "catalog lists id {} twice",
                row.id
            )));
        }
    }
    Ok(IndexTable::from_parts(geom, entries, catalog)?)
}

pub fn save(table: &IndexTable, path: &Path) -> Result<()> {
    fs::write(path, to_bytes(table))?;
    Ok(())
}

pub fn load(path: &Path) -> Result<IndexTable> {
    from_bytes(&fs::read(path)?)
}
