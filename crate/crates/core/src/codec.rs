//! Conversion between cell regions and canonical range sets.
//!
//! A range starts at `n` iff cell `decode(n)` is in the region and
//! `decode(n - 1)` is not (or `n == 0`); it ends symmetrically. Consecutive
//! curve positions are 4-neighbours, so a cell whose four neighbours all lie
//! in the region can neither start nor end a range. Only boundary cells are
//! inspected, and the sorted starts pair one-to-one with the sorted ends.

use alloc::vec::Vec;

use crate::error::Result;
use crate::geometry::QueryWindow;
use crate::hilbert::{index_to_xy, xy_to_index, Cell, GridGeometry};
use crate::mask::RasterMask;
use crate::ranges::RangeSet;

/// Build a range set from the boundary cells of a region.
///
/// `boundary` must include every region cell that has a 4-neighbour outside
/// the region or lies on the grid edge; duplicates and extra interior cells
/// are harmless.
fn ranges_from_boundary<B, F>(geom: &GridGeometry, boundary: B, contains: F) -> RangeSet
where
    B: IntoIterator<Item = Cell>,
    F: Fn(Cell) -> bool,
{
    let order = geom.order();
    let last = geom.cell_count() - 1;
    let inside = |n: u64| {
        let (x, y) = index_to_xy(order, n);
        contains(Cell::new(x, y))
    };
    let (mut starts, mut ends) = (Vec::new(), Vec::new());
    for cell in boundary {
        let n = xy_to_index(order, cell.x, cell.y);
        if n == 0 || !inside(n - 1) {
            starts.push(n);
        }
        if n == last || !inside(n + 1) {
            ends.push(n);
        }
    }
    starts.sort_unstable();
    starts.dedup();
    ends.sort_unstable();
    ends.dedup();
    RangeSet::from_boundaries(starts, ends)
}

/// Canonical range set of the mask's set cells, inspecting boundary cells only.
pub fn mask_to_ranges(mask: &RasterMask) -> RangeSet {
    ranges_from_boundary(
        mask.geometry(),
        mask.iter_set().filter(|&c| mask.is_boundary(c)),
        |c| mask.get(c),
    )
}

/// Canonical range set of a filled rectangle, visiting only its perimeter cells.
pub fn rect_to_ranges(window: &QueryWindow, geom: &GridGeometry) -> Result<RangeSet> {
    let (lo, hi) = window.cell_bounds(geom)?;
    Ok(cell_rect_to_ranges(lo, hi, geom))
}

/// Same as [`rect_to_ranges`] for an inclusive cell rectangle already known to
/// lie inside the grid.
pub fn cell_rect_to_ranges(lo: Cell, hi: Cell, geom: &GridGeometry) -> RangeSet {
    let contains = |c: Cell| c.x >= lo.x && c.x <= hi.x && c.y >= lo.y && c.y <= hi.y;
    let top = (lo.x..=hi.x).map(move |x| Cell::new(x, lo.y));
    let bottom = (lo.x..=hi.x).map(move |x| Cell::new(x, hi.y));
    let left = (lo.y..=hi.y).map(move |y| Cell::new(lo.x, y));
    let right = (lo.y..=hi.y).map(move |y| Cell::new(hi.x, y));
    ranges_from_boundary(geom, top.chain(bottom).chain(left).chain(right), contains)
}

/// Set exactly the cells named by `rs`, in a mask over their bounding box.
pub fn ranges_to_mask(rs: &RangeSet, geom: &GridGeometry) -> Result<RasterMask> {
    if let Some(last) = rs.last_index() {
        geom.check_index(last)?;
    }
    let order = geom.order();
    let cells: Vec<Cell> = rs
        .indices()
        .map(|n| {
            let (x, y) = index_to_xy(order, n);
            Cell::new(x, y)
        })
        .collect();
    RasterMask::from_cells(*geom, &cells)
}
