//! Polygon, polyline and point rasterization onto the cell grid.
//!
//! Coverage rule for polygons: a cell is set iff its centre lies inside the
//! polygon under the even-odd rule, or some ring edge passes through the
//! cell's open interior. Edges lying exactly on grid lines therefore do not
//! spill into neighbouring cells, and a polygon traced along cell borders
//! rasterizes back to exactly its cells. [`covers_cell`] states the rule for
//! one cell; [`rasterize_polygon`] computes the same set with a scanline fill
//! plus an edge walk.
//!
//! All arithmetic is exact. Coordinates are doubled so that cell centres
//! land on integers, and edge crossings are kept as rationals.

use alloc::vec::Vec;
use core::cmp::Ordering;

use crate::error::{Error, Result};
use crate::geometry::{Point, PolygonGeom};
use crate::hilbert::{xy_to_index, Cell, GridGeometry};
use crate::mask::RasterMask;
use crate::ranges::RangeSet;

/// Exact rational with a positive denominator.
#[derive(Clone, Copy, Debug)]
struct Frac {
    num: i128,
    den: i128,
}

impl Frac {
    fn new(num: i128, den: i128) -> Self {
        debug_assert!(den != 0);
        if den < 0 {
            Self {
                num: -num,
                den: -den,
            }
        } else {
            Self { num, den }
        }
    }

    fn int(v: i64) -> Self {
        Self {
            num: v.into(),
            den: 1,
        }
    }

    fn floor(self) -> i128 {
        self.num.div_euclid(self.den)
    }

    fn ceil(self) -> i128 {
        -((-self.num).div_euclid(self.den))
    }
}

impl PartialEq for Frac {
    fn eq(&self, other: &Self) -> bool {
        self.cmp(other) == Ordering::Equal
    }
}

impl Eq for Frac {}

impl PartialOrd for Frac {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Frac {
    fn cmp(&self, other: &Self) -> Ordering {
        (self.num * other.den).cmp(&(other.num * self.den))
    }
}

type P2 = (i64, i64);

/// Does segment `a`-`b` meet the box `lo`-`hi`? With `open`, only the
/// box's interior counts.
fn segment_meets_box(a: P2, b: P2, lo: P2, hi: P2, open: bool) -> bool {
    let mut lower = (Frac::int(0), false);
    let mut upper = (Frac::int(1), false);
    for (p, q, l, h) in [(a.0, b.0, lo.0, hi.0), (a.1, b.1, lo.1, hi.1)] {
        let d = q - p;
        if d == 0 {
            let inside = if open {
                l < p && p < h
            } else {
                l <= p && p <= h
            };
            if !inside {
                return false;
            }
            continue;
        }
        let t1 = Frac::new((l - p).into(), d.into());
        let t2 = Frac::new((h - p).into(), d.into());
        let (tmin, tmax) = if t1 <= t2 { (t1, t2) } else { (t2, t1) };
        match tmin.cmp(&lower.0) {
            Ordering::Greater => lower = (tmin, open),
            Ordering::Equal => lower.1 |= open,
            Ordering::Less => {}
        }
        match tmax.cmp(&upper.0) {
            Ordering::Less => upper = (tmax, open),
            Ordering::Equal => upper.1 |= open,
            Ordering::Greater => {}
        }
    }
    if lower.1 || upper.1 {
        lower.0 < upper.0
    } else {
        lower.0 <= upper.0
    }
}

/// Doubled-coordinate frame for one grid.
#[derive(Clone, Copy)]
struct Frame {
    c: i64,
    side: i64,
}

impl Frame {
    fn new(geom: &GridGeometry) -> Self {
        Self {
            c: geom.cell_size().into(),
            side: geom.side().into(),
        }
    }

    /// Box corners of a cell.
    fn cell_box(self, i: i64, j: i64) -> (P2, P2) {
        let s = 2 * self.c;
        ((i * s, j * s), ((i + 1) * s, (j + 1) * s))
    }

    fn center(self, i: i64, j: i64) -> P2 {
        (2 * i * self.c + self.c, 2 * j * self.c + self.c)
    }

    /// Cell index containing doubled coordinate `v` (floor), clamped to the grid.
    fn clamp_cell(self, v: i128) -> i64 {
        let i = v.div_euclid(2 * i128::from(self.c));
        i.clamp(0, i128::from(self.side - 1)) as i64
    }
}

fn doubled(p: Point) -> P2 {
    (2 * i64::from(p.x), 2 * i64::from(p.y))
}

fn ring_edges(ring: &[Point]) -> impl Iterator<Item = (P2, P2)> + '_ {
    let n = ring.len();
    (0..n).map(move |i| (doubled(ring[i]), doubled(ring[(i + 1) % n])))
}

fn poly_edges(poly: &PolygonGeom) -> impl Iterator<Item = (P2, P2)> + '_ {
    poly.rings().flat_map(ring_edges)
}

/// x where edge `a`-`b` crosses the horizontal line `y`. The edge must not be
/// horizontal.
fn crossing_x(a: P2, b: P2, y: i64) -> Frac {
    let (dx, dy) = (i128::from(b.0 - a.0), i128::from(b.1 - a.1));
    Frac::new(i128::from(a.0) * dy + i128::from(y - a.1) * dx, dy)
}

fn center_inside(poly: &PolygonGeom, (cx, cy): P2) -> bool {
    let mut inside = false;
    for (a, b) in poly_edges(poly) {
        if (a.1 > cy) != (b.1 > cy) && Frac::int(cx) < crossing_x(a, b, cy) {
            inside = !inside;
        }
    }
    inside
}

/// The coverage predicate for a single cell. Quadratic when applied to every
/// cell; [`rasterize_polygon`] produces the same set faster.
pub fn covers_cell(poly: &PolygonGeom, geom: &GridGeometry, cell: Cell) -> bool {
    let f = Frame::new(geom);
    let (i, j) = (i64::from(cell.x), i64::from(cell.y));
    if center_inside(poly, f.center(i, j)) {
        return true;
    }
    let (lo, hi) = f.cell_box(i, j);
    poly_edges(poly).any(|(a, b)| segment_meets_box(a, b, lo, hi, true))
}

/// Cells covered by `poly`, as a mask over the polygon's bounding box.
pub fn rasterize_polygon(poly: &PolygonGeom, geom: &GridGeometry) -> Result<RasterMask> {
    poly.check_bounds(geom)?;
    let f = Frame::new(geom);
    let c = geom.cell_size();

    let (mut xmin, mut ymin, mut xmax, mut ymax) = (u32::MAX, u32::MAX, 0u32, 0u32);
    for p in poly.rings().flatten() {
        xmin = xmin.min(p.x);
        ymin = ymin.min(p.y);
        xmax = xmax.max(p.x);
        ymax = ymax.max(p.y);
    }
    let last = geom.side() - 1;
    let lo = Cell::new((xmin / c).min(last), (ymin / c).min(last));
    let hi = Cell::new(
        (xmax.saturating_sub(1) / c).clamp(lo.x, last),
        (ymax.saturating_sub(1) / c).clamp(lo.y, last),
    );
    let mut mask = RasterMask::window(*geom, lo, hi.x - lo.x + 1, hi.y - lo.y + 1)?;

    fill_interior(poly, f, lo, hi, &mut mask);
    for (a, b) in poly_edges(poly) {
        walk_edge(a, b, f, true, |cell| {
            if mask.in_window(cell) {
                mask.set(cell, true);
            }
        });
    }
    Ok(mask)
}

/// Even-odd scanline fill over cell centres, rows `lo.y..=hi.y`.
fn fill_interior(poly: &PolygonGeom, f: Frame, lo: Cell, hi: Cell, mask: &mut RasterMask) {
    let c = i128::from(f.c);
    let rows = (hi.y - lo.y + 1) as usize;
    let mut crossings: Vec<Vec<Frac>> = alloc::vec![Vec::new(); rows];
    for (a, b) in poly_edges(poly) {
        if a.1 == b.1 {
            continue;
        }
        let (y0, y1) = (i128::from(a.1.min(b.1)), i128::from(a.1.max(b.1)));
        // rows whose centre 2jc + c lies in [y0, y1)
        let first = Frac::new(y0 - c, 2 * c).ceil().max(lo.y.into());
        let last = (Frac::new(y1 - c, 2 * c).ceil() - 1).min(hi.y.into());
        for j in first..=last {
            let cy = (2 * j * c + c) as i64;
            crossings[(j - i128::from(lo.y)) as usize].push(crossing_x(a, b, cy));
        }
    }
    for (r, xs) in crossings.iter_mut().enumerate() {
        xs.sort_unstable();
        let y = lo.y + r as u32;
        for pair in xs.chunks_exact(2) {
            // centres cx = 2ic + c with pair[0] <= cx < pair[1]
            let from = Frac::new(pair[0].num - c * pair[0].den, 2 * c * pair[0].den).ceil();
            let to = Frac::new(pair[1].num - c * pair[1].den, 2 * c * pair[1].den).ceil() - 1;
            let from = from.max(lo.x.into());
            let to = to.min(hi.x.into());
            for i in from..=to {
                mask.set(Cell::new(i as u32, y), true);
            }
        }
    }
}

/// Visit every cell whose box (open or closed) meets segment `a`-`b`.
/// Cells may be visited more than once.
fn walk_edge(a: P2, b: P2, f: Frame, open: bool, mut visit: impl FnMut(Cell)) {
    let s = 2 * i128::from(f.c);
    let (ymin, ymax) = (a.1.min(b.1), a.1.max(b.1));
    let first_row = f.clamp_cell(i128::from(ymin) - 1);
    let last_row = f.clamp_cell(ymax.into());
    for j in first_row..=last_row {
        let slab_lo = (i128::from(j) * s) as i64;
        let slab_hi = slab_lo + s as i64;
        let ylo = ymin.max(slab_lo);
        let yhi = ymax.min(slab_hi);
        if ylo > yhi {
            continue;
        }
        let (xl, xr) = if a.1 == b.1 {
            (Frac::int(a.0.min(b.0)), Frac::int(a.0.max(b.0)))
        } else {
            let (p, q) = (crossing_x(a, b, ylo), crossing_x(a, b, yhi));
            if p <= q {
                (p, q)
            } else {
                (q, p)
            }
        };
        let first_col = f.clamp_cell(xl.floor() - 1);
        let last_col = f.clamp_cell(xr.ceil());
        for i in first_col..=last_col {
            let (lo, hi) = f.cell_box(i, j);
            if segment_meets_box(a, b, lo, hi, open) {
                visit(Cell::new(i as u32, j as u32));
            }
        }
    }
}

/// Single-cell range set for the cell holding pixel `(x, y)`.
pub fn encode_point(x: u32, y: u32, geom: &GridGeometry) -> Result<RangeSet> {
    let cell = geom.pixel_to_cell(x, y)?;
    let n = geom.encode(cell)?;
    Ok(RangeSet::from_sorted_indices([n]))
}

/// Cells crossed by a polyline through pixel centres (supercover: every cell
/// the segments touch, corners included).
pub fn encode_polyline(points: &[Point], geom: &GridGeometry) -> Result<RangeSet> {
    if points.len() < 2 {
        return Err(Error::InvalidArgument("a polyline needs at least 2 points"));
    }
    if points.windows(2).any(|w| w[0] == w[1]) {
        return Err(Error::InvalidArgument(
            "polyline contains a zero-length segment",
        ));
    }
    for p in points {
        geom.pixel_to_cell(p.x, p.y)?;
    }
    let f = Frame::new(geom);
    let centre = |p: &Point| (2 * i64::from(p.x) + 1, 2 * i64::from(p.y) + 1);
    let mut indices = Vec::new();
    for w in points.windows(2) {
        walk_edge(centre(&w[0]), centre(&w[1]), f, false, |cell| {
            indices.push(xy_to_index(geom.order(), cell.x, cell.y));
        });
    }
    indices.sort_unstable();
    indices.dedup();
    Ok(RangeSet::from_sorted_indices(indices))
}

/// Closed-box supercover predicate for a pixel-centre segment.
pub fn segment_touches_cell(p: Point, q: Point, geom: &GridGeometry, cell: Cell) -> bool {
    let f = Frame::new(geom);
    let (lo, hi) = f.cell_box(cell.x.into(), cell.y.into());
    let centre = |p: Point| (2 * i64::from(p.x) + 1, 2 * i64::from(p.y) + 1);
    segment_meets_box(centre(p), centre(q), lo, hi, false)
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    fn poly(v: &[(u32, u32)]) -> PolygonGeom {
        PolygonGeom::simple(v.iter().copied().map(Point::from).collect()).unwrap()
    }

    #[test]
    fn box_predicate_edges_and_corners() {
        let (lo, hi) = ((0, 0), (2, 2));
        // along the box's left side
        assert!(!segment_meets_box((0, -1), (0, 3), lo, hi, true));
        assert!(segment_meets_box((0, -1), (0, 3), lo, hi, false));
        // through the corner only
        assert!(!segment_meets_box((-1, 5), (5, -1), lo, hi, true));
        assert!(segment_meets_box((-1, 5), (5, -1), lo, hi, false));
        // straight through
        assert!(segment_meets_box((-5, 1), (5, 1), lo, hi, true));
        // stops short
        assert!(!segment_meets_box((-5, 1), (0, 1), lo, hi, true));
        assert!(segment_meets_box((-5, 1), (0, 1), lo, hi, false));
    }

    #[test]
    fn unit_square_is_one_cell() {
        let g = GridGeometry::new(3).unwrap();
        let m = rasterize_polygon(&poly(&[(2, 3), (3, 3), (3, 4), (2, 4)]), &g).unwrap();
        assert_eq!(m.count(), 1);
        assert!(m.get(Cell::new(2, 3)));
    }

    #[test]
    fn pentagon_corner_anchored() {
        let g = GridGeometry::new(3).unwrap();
        let p = poly(&[(1, 1), (1, 4), (3, 5), (5, 3), (4, 1)]);
        let m = rasterize_polygon(&p, &g).unwrap();
        assert_eq!(m.count(), 15);
        for y in 0..8 {
            for x in 0..8 {
                assert_eq!(m.get(Cell::new(x, y)), covers_cell(&p, &g, Cell::new(x, y)));
            }
        }
    }

    #[test]
    fn thin_sliver_is_not_empty() {
        let g = GridGeometry::new(4).unwrap();
        let m = rasterize_polygon(&poly(&[(0, 0), (10, 1), (10, 0)]), &g).unwrap();
        assert!(m.count() >= 10);
    }

    #[test]
    fn hole_clears_cells() {
        let g = GridGeometry::new(3).unwrap();
        let outer = [(0, 0), (6, 0), (6, 6), (0, 6)].map(Point::from).to_vec();
        let hole = [(2, 2), (4, 2), (4, 4), (2, 4)].map(Point::from).to_vec();
        let p = PolygonGeom::new(outer, vec![hole]).unwrap();
        let m = rasterize_polygon(&p, &g).unwrap();
        assert_eq!(m.count(), 36 - 4);
        assert!(!m.get(Cell::new(2, 2)) && !m.get(Cell::new(3, 3)));
    }

    #[test]
    fn cell_size_scales_coverage() {
        let g = GridGeometry::with_image(3, 4, 32, 32).unwrap();
        // pixels [4, 12) x [4, 8): cells 1..=2 in row 1
        let m = rasterize_polygon(&poly(&[(4, 4), (12, 4), (12, 8), (4, 8)]), &g).unwrap();
        assert_eq!(m.count(), 2);
        assert!(m.get(Cell::new(1, 1)) && m.get(Cell::new(2, 1)));
    }

    #[test]
    fn out_of_bounds_vertex() {
        let g = GridGeometry::new(2).unwrap();
        assert!(matches!(
            rasterize_polygon(&poly(&[(0, 0), (5, 0), (0, 3)]), &g),
            Err(Error::PixelOutOfBounds { .. })
        ));
        // vertices on the far edge are fine
        assert!(rasterize_polygon(&poly(&[(0, 0), (4, 0), (4, 4)]), &g).is_ok());
    }

    #[test]
    fn points_and_lines() {
        let g = GridGeometry::new(2).unwrap();
        assert_eq!(encode_point(0, 0, &g).unwrap().to_string(), "[[0,0]]");
        let line = encode_polyline(&[Point::new(0, 0), Point::new(3, 0)], &g).unwrap();
        let expected: Vec<u64> = {
            let mut v: Vec<_> = (0..4).map(|x| g.encode(Cell::new(x, 0)).unwrap()).collect();
            v.sort_unstable();
            v
        };
        assert_eq!(line.indices().collect::<Vec<_>>(), expected);
        assert!(encode_polyline(&[Point::new(1, 1)], &g).is_err());
        assert!(encode_polyline(&[Point::new(1, 1), Point::new(1, 1)], &g).is_err());
        assert!(encode_polyline(&[Point::new(1, 1), Point::new(4, 1)], &g).is_err());
    }
}
