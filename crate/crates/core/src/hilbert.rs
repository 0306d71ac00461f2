//! Bijective mapping between grid cells and positions along a 2-D Hilbert curve.
//!
//! Orientation is fixed for the whole crate: the curve of order `k` starts at
//! cell `(0, 0)` and ends at `(2^k - 1, 0)`. `x` is the column and `y` the row,
//! with the origin at the top-left corner as in image coordinates. Consecutive
//! indices always map to cells at Manhattan distance 1.

use crate::error::{Error, Result};

/// Largest supported curve order. `2 * 31 = 62` index bits fit a `u64`.
pub const MAX_ORDER: u32 = 31;

/// Position of a cell along the curve, in `[0, 4^order)`.
pub type HilbertIndex = u64;

/// A grid cell: `x` is the column, `y` the row.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct Cell {
    pub x: u32,
    pub y: u32,
}

impl Cell {
    pub const fn new(x: u32, y: u32) -> Self {
        Self { x, y }
    }

    pub fn manhattan(self, other: Cell) -> u64 {
        u64::from(self.x.abs_diff(other.x)) + u64::from(self.y.abs_diff(other.y))
    }
}

/// A `2^order x 2^order` cell grid laid over an image.
///
/// Each cell spans `cell_size x cell_size` pixels. `width` and `height` record
/// the source image size and never exceed the grid's pixel extent.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct GridGeometry {
    order: u32,
    cell_size: u32,
    width: u32,
    height: u32,
}

impl GridGeometry {
    /// Grid of the given order with one pixel per cell, covering the whole grid.
    pub fn new(order: u32) -> Result<Self> {
        check_order(order)?;
        let side = 1u64 << order;
        let extent = u32::try_from(side).unwrap_or(u32::MAX);
        Ok(Self {
            order,
            cell_size: 1,
            width: extent,
            height: extent,
        })
    }

    pub fn with_image(order: u32, cell_size: u32, width: u32, height: u32) -> Result<Self> {
        check_order(order)?;
        if cell_size == 0 {
            return Err(Error::InvalidGrid("cell size must be at least 1"));
        }
        if width == 0 || height == 0 {
            return Err(Error::InvalidGrid(
                "image width and height must be at least 1",
            ));
        }
        let extent = (1u64 << order) * u64::from(cell_size);
        if extent > u64::from(u32::MAX) {
            return Err(Error::InvalidGrid(
                "grid pixel extent exceeds u32 coordinates",
            ));
        }
        if u64::from(width) > extent || u64::from(height) > extent {
            return Err(Error::InvalidGrid(
                "image is larger than the grid's pixel extent",
            ));
        }
        Ok(Self {
            order,
            cell_size,
            width,
            height,
        })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    /// Cells per grid side, `2^order`.
    pub fn side(&self) -> u32 {
        1u32 << self.order
    }

    /// Total cells, `4^order`.
    pub fn cell_count(&self) -> u64 {
        1u64 << (2 * self.order)
    }

    pub fn cell_size(&self) -> u32 {
        self.cell_size
    }

    pub fn width(&self) -> u32 {
        self.width
    }

    pub fn height(&self) -> u32 {
        self.height
    }

    /// Pixel extent of one grid side, `side * cell_size`.
    pub fn pixel_extent(&self) -> u64 {
        u64::from(self.side()) * u64::from(self.cell_size)
    }

    pub fn contains(&self, cell: Cell) -> bool {
        cell.x < self.side() && cell.y < self.side()
    }

    pub fn check_cell(&self, cell: Cell) -> Result<()> {
        if self.contains(cell) {
            Ok(())
        } else {
            Err(Error::CellOutOfBounds {
                x: cell.x.into(),
                y: cell.y.into(),
                side: self.side().into(),
            })
        }
    }

    pub fn check_index(&self, n: HilbertIndex) -> Result<()> {
        if n < self.cell_count() {
            Ok(())
        } else {
            Err(Error::IndexOutOfRange {
                index: n,
                cell_count: self.cell_count(),
            })
        }
    }

    /// Cell containing pixel `(px, py)`.
    pub fn pixel_to_cell(&self, px: u32, py: u32) -> Result<Cell> {
        let extent = self.pixel_extent();
        if u64::from(px) >= extent || u64::from(py) >= extent {
            return Err(Error::PixelOutOfBounds {
                x: px.into(),
                y: py.into(),
                extent,
            });
        }
        Ok(Cell::new(px / self.cell_size, py / self.cell_size))
    }

    /// Curve position of `cell`.
    pub fn encode(&self, cell: Cell) -> Result<HilbertIndex> {
        encode(self, cell)
    }

    /// Cell at curve position `n`.
    pub fn decode(&self, n: HilbertIndex) -> Result<Cell> {
        decode(self, n)
    }
}

fn check_order(order: u32) -> Result<()> {
    if (1..=MAX_ORDER).contains(&order) {
        Ok(())
    } else {
        Err(Error::InvalidOrder(order))
    }
}

/// Curve position of `cell` on the grid.
pub fn encode(geom: &GridGeometry, cell: Cell) -> Result<HilbertIndex> {
    geom.check_cell(cell)?;
    Ok(xy_to_index(geom.order, cell.x, cell.y))
}

/// Cell at curve position `n`.
pub fn decode(geom: &GridGeometry, n: HilbertIndex) -> Result<Cell> {
    geom.check_index(n)?;
    let (x, y) = index_to_xy(geom.order, n);
    Ok(Cell::new(x, y))
}

/// Unchecked encode. Coordinates must be below `2^order`.
#[inline]
pub(crate) fn xy_to_index(order: u32, mut x: u32, mut y: u32) -> u64 {
    let last = ((1u64 << order) - 1) as u32;
    let mut d = 0u64;
    let mut s = 1u32 << (order - 1);
    while s > 0 {
        let rx = u32::from(x & s != 0);
        let ry = u32::from(y & s != 0);
        d += u64::from(s) * u64::from(s) * u64::from((3 * rx) ^ ry);
        if ry == 0 {
            if rx == 1 {
                x = last - x;
                y = last - y;
            }
            core::mem::swap(&mut x, &mut y);
        }
        s >>= 1;
    }
    d
}

/// Unchecked decode. `n` must be below `4^order`.
#[inline]
pub(crate) fn index_to_xy(order: u32, n: u64) -> (u32, u32) {
    let (mut x, mut y) = (0u32, 0u32);
    let mut t = n;
    let mut s = 1u32;
    for _ in 0..order {
        let rx = (1 & (t >> 1)) as u32;
        let ry = (1 & (t ^ u64::from(rx))) as u32;
        if ry == 0 {
            if rx == 1 {
                x = s - 1 - x;
                y = s - 1 - y;
            }
            core::mem::swap(&mut x, &mut y);
        }
        x += s * rx;
        y += s * ry;
        t >>= 2;
        s = s.wrapping_shl(1);
    }
    (x, y)
}

/// `ceil(log2(d))`: bits needed to address `d` distinct positions along one axis.
///
/// A Hilbert index interleaves both axes, so it needs twice this many bits.
pub fn bits_for_dimension(d: u64) -> Result<u32> {
    match d {
        0 => Err(Error::InvalidDimension(0)),
        1 => Ok(0),
        _ => Ok(u64::BITS - (d - 1).leading_zeros()),
    }
}

/// Smallest grid (order >= 1) whose pixel extent covers a `width x height` image.
pub fn order_for(width_px: u32, height_px: u32, cell_size_px: u32) -> Result<GridGeometry> {
    if width_px == 0 || height_px == 0 {
        return Err(Error::InvalidGrid(
            "image width and height must be at least 1",
        ));
    }
    if cell_size_px == 0 {
        return Err(Error::InvalidGrid("cell size must be at least 1"));
    }
    let cells = u64::from(width_px.max(height_px)).div_ceil(u64::from(cell_size_px));
    let order = bits_for_dimension(cells)?.max(1);
    if order > MAX_ORDER {
        return Err(Error::Capacity { required: order });
    }
    GridGeometry::with_image(order, cell_size_px, width_px, height_px)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::vec;

    #[test]
    fn order_one_traversal() {
        let g = GridGeometry::new(1).unwrap();
        let cells: alloc::vec::Vec<_> = (0..4).map(|n| g.decode(n).unwrap()).collect();
        assert_eq!(
            cells,
            vec![
                Cell::new(0, 0),
                Cell::new(0, 1),
                Cell::new(1, 1),
                Cell::new(1, 0)
            ]
        );
        assert_eq!(g.encode(Cell::new(0, 0)).unwrap(), 0);
    }

    #[test]
    fn curve_ends_at_top_right() {
        for k in 1..=MAX_ORDER {
            let g = GridGeometry::new(k).unwrap();
            assert_eq!(
                g.decode(g.cell_count() - 1).unwrap(),
                Cell::new(g.side() - 1, 0)
            );
            assert_eq!(g.decode(0).unwrap(), Cell::new(0, 0));
        }
    }

    #[test]
    fn decode_origin_at_order_two() {
        let g = GridGeometry::new(2).unwrap();
        assert_eq!(g.decode(0).unwrap(), Cell::new(0, 0));
    }

    #[test]
    fn bounds_errors() {
        let g = GridGeometry::new(3).unwrap();
        assert_eq!(
            g.encode(Cell::new(8, 2)),
            Err(Error::CellOutOfBounds {
                x: 8,
                y: 2,
                side: 8
            })
        );
        assert_eq!(
            g.decode(64),
            Err(Error::IndexOutOfRange {
                index: 64,
                cell_count: 64
            })
        );
        assert_eq!(GridGeometry::new(0), Err(Error::InvalidOrder(0)));
        assert_eq!(GridGeometry::new(32), Err(Error::InvalidOrder(32)));
    }

    #[test]
    fn bit_widths() {
        assert_eq!(bits_for_dimension(135_168), Ok(18));
        assert_eq!(bits_for_dimension(105_472), Ok(17));
        assert_eq!(bits_for_dimension(2), Ok(1));
        assert_eq!(bits_for_dimension(1), Ok(0));
        assert_eq!(bits_for_dimension(1 << 20), Ok(20));
        assert_eq!(bits_for_dimension((1 << 20) + 1), Ok(21));
        assert_eq!(bits_for_dimension(0), Err(Error::InvalidDimension(0)));
    }

    #[test]
    fn grid_sizing() {
        assert_eq!(order_for(135_168, 105_472, 1).unwrap().order(), 18);
        assert_eq!(order_for(1, 1, 1).unwrap().order(), 1);
        assert_eq!(order_for(135_168, 105_472, 8).unwrap().order(), 15);
        assert_eq!(order_for(16, 3, 4).unwrap().order(), 2);
        assert_eq!(order_for(17, 3, 4).unwrap().order(), 3);
        assert_eq!(
            order_for(u32::MAX, 1, 1),
            Err(Error::Capacity { required: 32 })
        );
        assert!(order_for(0, 5, 1).is_err());
        assert!(order_for(5, 5, 0).is_err());
    }

    #[test]
    fn image_must_fit_grid() {
        assert!(GridGeometry::with_image(3, 2, 16, 16).is_ok());
        assert!(GridGeometry::with_image(3, 2, 17, 16).is_err());
    }
}
