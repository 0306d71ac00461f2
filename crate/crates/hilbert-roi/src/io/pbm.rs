//! Netpbm bitmaps (`P1` plain, `P4` raw) holding a whole-grid mask.
//!
//! Pixel (x, y) of the image is cell (x, y); 1 means set. The image must be
//! exactly `side x side` for the target grid.

use hilbert_roi_core::{Cell, GridGeometry, RasterMask};

use crate::error::{Error, Result};

/// Largest order written or read as a bitmap (16384 x 16384, 32 MiB).
pub const MAX_PBM_ORDER: u32 = 14;

struct Header {
    raw: bool,
    width: u64,
    height: u64,
    data_start: usize,
}

fn skip_space_and_comments(bytes: &[u8], mut pos: usize) -> usize {
    loop {
        while pos < bytes.len() && bytes[pos].is_ascii_whitespace() {
            pos += 1;
        }
        if bytes.get(pos) == Some(&b'#') {
            while pos < bytes.len() && bytes[pos] != b'\n' && bytes[pos] != b'\r' {
                pos += 1;
            }
        } else {
            return pos;
        }
    }
}

fn read_uint(bytes: &[u8], pos: usize) -> Result<(u64, usize)> {
    let start = skip_space_and_comments(bytes, pos);
    let mut end = start;
    while end < bytes.len() && bytes[end].is_ascii_digit() {
        end += 1;
    }
    if end == start {
        return Err(Error::parse("PBM", start, "expected a dimension"));
    }
    let v = std::str::from_utf8(&bytes[start..end])
        .ok()
        .and_then(|s| s.parse().ok())
        .ok_or_else(|| Error::parse("PBM", start, "dimension too large"))?;
    Ok((v, end))
}

fn read_header(bytes: &[u8]) -> Result<Header> {
    let raw = match bytes.get(..2) {
        Some(b"P1") => false,
        Some(b"P4") => true,
        _ => return Err(Error::parse("PBM", 0, "expected magic P1 or P4")),
    };
    let (width, pos) = read_uint(bytes, 2)?;
    let (height, pos) = read_uint(bytes, pos)?;
    // exactly one whitespace byte separates the header from raw data
    let data_start = if raw {
        match bytes.get(pos) {
            Some(b) if b.is_ascii_whitespace() => pos + 1,
            _ => return Err(Error::parse("PBM", pos, "expected whitespace after header")),
        }
    } else {
        pos
    };
    Ok(Header {
        raw,
        width,
        height,
        data_start,
    })
}

pub fn read_mask_pbm(bytes: &[u8], geom: &GridGeometry) -> Result<RasterMask> {
    if geom.order() > MAX_PBM_ORDER {
        return Err(Error::Format(format!(
            "order {} is too large for a bitmap (max {MAX_PBM_ORDER})",
            geom.order()
        )));
    }
    let h = read_header(bytes)?;
    let side = u64::from(geom.side());
    if h.width != side || h.height != side {
        return Err(Error::Format(format!(
            "bitmap is {}x{} but the order-{} grid is {side}x{side}",
            h.width,
            h.height,
            geom.order()
        )));
    }
    let side = geom.side();
    let mut mask = RasterMask::full_grid(*geom);
    if h.raw {
        let stride = side.div_ceil(8) as usize;
        let need = stride * side as usize;
        let data = &bytes[h.data_start..];
        if data.len() < need {
            return Err(Error::Format(format!(
                "bitmap data truncated: {} of {need} bytes",
                data.len()
            )));
        }
        for y in 0..side {
            let row = &data[y as usize * stride..][..stride];
            for x in 0..side {
                if row[x as usize / 8] & (0x80 >> (x % 8)) != 0 {
                    mask.set(Cell::new(x, y), true);
                }
            }
        }
    } else {
        let mut pos = h.data_start;
        for y in 0..side {
            for x in 0..side {
                pos = skip_space_and_comments(bytes, pos);
                match bytes.get(pos) {
                    Some(b'1') => mask.set(Cell::new(x, y), true),
                    Some(b'0') => {}
                    Some(_) => return Err(Error::parse("PBM", pos, "expected 0 or 1")),
                    None => return Err(Error::Format("bitmap data truncated".into())),
                }
                pos += 1;
            }
        }
    }
    Ok(mask)
}

/// Binary `P4` encoding of the whole grid.
pub fn write_mask_pbm(mask: &RasterMask) -> Result<Vec<u8>> {
    let geom = mask.geometry();
    if geom.order() > MAX_PBM_ORDER {
        return Err(Error::Format(format!(
            "order {} is too large for a bitmap (max {MAX_PBM_ORDER})",
            geom.order()
        )));
    }
    let side = geom.side();
    let stride = side.div_ceil(8) as usize;
    let mut out = format!("P4\n{side} {side}\n").into_bytes();
    let header = out.len();
    out.resize(header + stride * side as usize, 0);
    for c in mask.iter_set() {
        out[header + c.y as usize * stride + c.x as usize / 8] |= 0x80 >> (c.x % 8);
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn plain_and_raw_agree() {
        let g = GridGeometry::new(2).unwrap();
        let plain = b"P1\n# a comment\n4 4\n1 0 0 0\n0110\n0 0 0 0\n0 0 0 1\n";
        let mask = read_mask_pbm(plain, &g).unwrap();
        assert_eq!(mask.count(), 4);
        assert!(mask.get(Cell::new(1, 1)) && mask.get(Cell::new(3, 3)));
        let raw = write_mask_pbm(&mask).unwrap();
        assert_eq!(raw, b"P4\n4 4\n\x80\x60\x00\x10");
        assert_eq!(read_mask_pbm(&raw, &g).unwrap(), mask);
    }

    #[test]
    fn rejects_mismatch() {
        let g = GridGeometry::new(2).unwrap();
        assert!(matches!(
            read_mask_pbm(b"P1 3 4 0", &g),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_mask_pbm(b"P2 4 4", &g),
            Err(Error::Parse { .. })
        ));
        assert!(matches!(
            read_mask_pbm(b"P4\n4 4\n\x00", &g),
            Err(Error::Format(_))
        ));
        assert!(matches!(
            read_mask_pbm(b"P1 4 4 1 0 2", &g),
            Err(Error::Parse { .. })
        ));
        let big = GridGeometry::new(15).unwrap();
        assert!(write_mask_pbm(&RasterMask::empty(big)).is_err());
    }
}
