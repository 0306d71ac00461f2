//! Pixel-space polygons and query windows.
//!
//! Polygon vertices sit on pixel corners: pixel `(x, y)` is the unit square
//! `[x, x+1] x [y, y+1]`, so a polygon over a `W x H` image has vertices in
//! `[0, W] x [0, H]`.

use alloc::format;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{Cell, GridGeometry};

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Point {
    pub x: u32,
    pub y: u32,
}

impl Point {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }
}

impl From<(u32, u32)> for Point {
    fn from((x, y): (u32, u32)) -> Self {
        Self { x, y }
    }
}

/// A polygon with one outer ring and zero or more holes.
///
/// Rings are stored open: the closing edge from the last vertex back to the
/// first is implicit. An explicitly repeated first vertex is dropped on
/// construction.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PolygonGeom {
    outer: Vec<Point>,
    holes: Vec<Vec<Point>>,
}

impl PolygonGeom {
    pub fn new(outer: Vec<Point>, holes: Vec<Vec<Point>>) -> Result<Self> {
        let outer = normalize_ring(outer, "outer ring")?;
        let holes = holes
            .into_iter()
            .map(|h| normalize_ring(h, "hole"))
            .collect::<Result<Vec<_>>>()?;
        Ok(Self { outer, holes })
    }

    pub fn simple(outer: Vec<Point>) -> Result<Self> {
        Self::new(outer, Vec::new())
    }

    pub fn outer(&self) -> &[Point] {
        &self.outer
    }

    pub fn holes(&self) -> &[Vec<Point>] {
        &self.holes
    }

    /// Outer ring followed by the holes.
    pub fn rings(&self) -> impl Iterator<Item = &[Point]> {
        core::iter::once(self.outer.as_slice()).chain(self.holes.iter().map(Vec::as_slice))
    }

    /// Stored vertices across all rings, without closing duplicates.
    pub fn vertex_count(&self) -> usize {
        self.rings().map(<[Point]>::len).sum()
    }

    /// Every vertex must lie within the grid's pixel extent (inclusive, since
    /// vertices are corners).
    pub fn check_bounds(&self, geom: &GridGeometry) -> Result<()> {
        let extent = geom.pixel_extent();
        for p in self.rings().flatten() {
            if u64::from(p.x) > extent || u64::from(p.y) > extent {
                return Err(Error::PixelOutOfBounds {
                    x: p.x.into(),
                    y: p.y.into(),
                    extent,
                });
            }
        }
        Ok(())
    }

    /// Twice the shoelace area of a ring. Positive for clockwise rings on
    /// screen (y pointing down).
    pub fn ring_area2(ring: &[Point]) -> i128 {
        let n = ring.len();
        (0..n)
            .map(|i| {
                let (a, b) = (ring[i], ring[(i + 1) % n]);
                i128::from(a.x) * i128::from(b.y) - i128::from(b.x) * i128::from(a.y)
            })
            .sum()
    }
}

fn normalize_ring(mut ring: Vec<Point>, what: &str) -> Result<Vec<Point>> {
    if ring.len() > 1 && ring.first() == ring.last() {
        ring.pop();
    }
    let mut distinct = ring.clone();
    distinct.sort_unstable();
    distinct.dedup();
    if distinct.len() < 3 {
        return Err(Error::Geometry(format!(
            "{what} needs at least 3 distinct vertices, got {}",
            distinct.len()
        )));
    }
    Ok(ring)
}

/// Inclusive pixel rectangle `[min_x, max_x] x [min_y, max_y]`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct QueryWindow {
    pub min_x: u32,
    pub min_y: u32,
    pub max_x: u32,
    pub max_y: u32,
}

impl QueryWindow {
    pub fn new(min_x: u32, min_y: u32, max_x: u32, max_y: u32) -> Result<Self> {
        if min_x > max_x || min_y > max_y {
            return Err(Error::InvertedWindow {
                min_x,
                min_y,
                max_x,
                max_y,
            });
        }
        Ok(Self {
            min_x,
            min_y,
            max_x,
            max_y,
        })
    }

    /// Inclusive cell rectangle `(min, max)` touched by the window.
    pub fn cell_bounds(&self, geom: &GridGeometry) -> Result<(Cell, Cell)> {
        if self.min_x > self.max_x || self.min_y > self.max_y {
            return Err(Error::InvertedWindow {
                min_x: self.min_x,
                min_y: self.min_y,
                max_x: self.max_x,
                max_y: self.max_y,
            });
        }
        let lo = geom.pixel_to_cell(self.min_x, self.min_y)?;
        let hi = geom.pixel_to_cell(self.max_x, self.max_y)?;
        Ok((lo, hi))
    }
}
