//! Binary occupancy grids.

use alloc::vec;
use alloc::vec::Vec;

use crate::error::{Error, Result};
use crate::hilbert::{Cell, GridGeometry};

/// Occupancy bits for a rectangular window of cells inside a grid.
///
/// Cells outside the window are unset. A mask may cover the whole grid or
/// only the bounding box of a region; equality compares the set cells, not
/// the window.
#[derive(Clone, Debug)]
pub struct RasterMask {
    geom: GridGeometry,
    origin: Cell,
    width: u32,
    height: u32,
    words_per_row: usize,
    bits: Vec<u64>,
}

impl RasterMask {
    /// All-unset mask spanning the whole grid.
    pub fn full_grid(geom: GridGeometry) -> Self {
        let side = geom.side();
        Self::window_unchecked(geom, Cell::new(0, 0), side, side)
    }

    /// All-unset mask over the `width x height` cells starting at `origin`.
    pub fn window(geom: GridGeometry, origin: Cell, width: u32, height: u32) -> Result<Self> {
        let side = u64::from(geom.side());
        if u64::from(origin.x) + u64::from(width) > side
            || u64::from(origin.y) + u64::from(height) > side
        {
            return Err(Error::CellOutOfBounds {
                x: u64::from(origin.x) + u64::from(width),
                y: u64::from(origin.y) + u64::from(height),
                side,
            });
        }
        Ok(Self::window_unchecked(geom, origin, width, height))
    }

    /// Empty mask with a zero-sized window.
    pub fn empty(geom: GridGeometry) -> Self {
        Self::window_unchecked(geom, Cell::new(0, 0), 0, 0)
    }

    /// Smallest window holding every cell in `cells`, with those cells set.
    pub fn from_cells(geom: GridGeometry, cells: &[Cell]) -> Result<Self> {
        let Some(first) = cells.first() else {
            return Ok(Self::empty(geom));
        };
        let (mut lo, mut hi) = (*first, *first);
        for c in cells {
            geom.check_cell(*c)?;
            lo = Cell::new(lo.x.min(c.x), lo.y.min(c.y));
            hi = Cell::new(hi.x.max(c.x), hi.y.max(c.y));
        }
        let mut mask = Self::window_unchecked(geom, lo, hi.x - lo.x + 1, hi.y - lo.y + 1);
        for c in cells {
            mask.set(*c, true);
        }
        Ok(mask)
    }

    fn window_unchecked(geom: GridGeometry, origin: Cell, width: u32, height: u32) -> Self {
        let words_per_row = (width as usize).div_ceil(64);
        Self {
            geom,
            origin,
            width,
            height,
            words_per_row,
            bits: vec![0; words_per_row * height as usize],
        }
    }

    pub fn geometry(&self) -> &GridGeometry {
        &self.geom
    }

    /// Window as `(origin, width, height)` in cells.
    pub fn bounds(&self) -> (Cell, u32, u32) {
        (self.origin, self.width, self.height)
    }

    pub fn in_window(&self, cell: Cell) -> bool {
        cell.x >= self.origin.x
            && cell.y >= self.origin.y
            && cell.x - self.origin.x < self.width
            && cell.y - self.origin.y < self.height
    }

    #[inline]
    fn slot(&self, cell: Cell) -> (usize, u64) {
        let (lx, ly) = (
            (cell.x - self.origin.x) as usize,
            (cell.y - self.origin.y) as usize,
        );
        (ly * self.words_per_row + lx / 64, 1u64 << (lx % 64))
    }

    /// Occupancy of `cell`. Cells outside the window read as unset.
    #[inline]
    pub fn get(&self, cell: Cell) -> bool {
        if !self.in_window(cell) {
            return false;
        }
        let (word, bit) = self.slot(cell);
        self.bits[word] & bit != 0
    }

    /// # Panics
    ///
    /// Panics if `cell` lies outside the mask's window.
    #[inline]
    pub fn set(&mut self, cell: Cell, on: bool) {
        assert!(self.in_window(cell), "cell {cell:?} outside mask window");
        let (word, bit) = self.slot(cell);
        if on {
            self.bits[word] |= bit;
        } else {
            self.bits[word] &= !bit;
        }
    }

    /// Number of set cells.
    pub fn count(&self) -> u64 {
        self.bits.iter().map(|w| u64::from(w.count_ones())).sum()
    }

    pub fn is_empty(&self) -> bool {
        self.bits.iter().all(|&w| w == 0)
    }

    /// Set cells in row-major order.
    pub fn iter_set(&self) -> impl Iterator<Item = Cell> + '_ {
        let wpr = self.words_per_row.max(1);
        self.bits.iter().enumerate().flat_map(move |(i, &word)| {
            let row = (i / wpr) as u32;
            let base = ((i % wpr) * 64) as u32;
            BitIter(word).map(move |b| Cell::new(self.origin.x + base + b, self.origin.y + row))
        })
    }

    /// A set cell with an unset 4-neighbour, or lying on the grid edge.
    pub fn is_boundary(&self, cell: Cell) -> bool {
        let last = self.geom.side() - 1;
        if cell.x == 0 || cell.y == 0 || cell.x == last || cell.y == last {
            return true;
        }
        !(self.get(Cell::new(cell.x - 1, cell.y))
            && self.get(Cell::new(cell.x + 1, cell.y))
            && self.get(Cell::new(cell.x, cell.y - 1))
            && self.get(Cell::new(cell.x, cell.y + 1)))
    }

    /// Mirror image across the horizontal mid-line of the grid (`y -> side - 1 - y`).
    ///
    /// Useful for data recorded with the y axis pointing up.
    pub fn flipped_vertically(&self) -> Self {
        let last = self.geom.side() - 1;
        let top = if self.height == 0 {
            0
        } else {
            last - (self.origin.y + self.height - 1)
        };
        let mut out = Self::window_unchecked(
            self.geom,
            Cell::new(self.origin.x, top),
            self.width,
            self.height,
        );
        for c in self.iter_set() {
            out.set(Cell::new(c.x, last - c.y), true);
        }
        out
    }
}

impl PartialEq for RasterMask {
    fn eq(&self, other: &Self) -> bool {
        if self.geom != other.geom {
            return false;
        }
        if (self.origin, self.width, self.height) == (other.origin, other.width, other.height) {
            return self.bits == other.bits;
        }
        self.count() == other.count() && self.iter_set().all(|c| other.get(c))
    }
}

impl Eq for RasterMask {}

struct BitIter(u64);

impl Iterator for BitIter {
    type Item = u32;

    #[inline]
    fn next(&mut self) -> Option<u32> {
        if self.0 == 0 {
            return None;
        }
        let b = self.0.trailing_zeros();
        self.0 &= self.0 - 1;
        Some(b)
    }
}
