//! Range sets back to polygons by tracing cell-region boundaries.
//!
//! Components are 4-connected. Rings run along cell borders with the region on
//! their right (y down), so outer rings are clockwise on screen and holes
//! counter-clockwise. Where two cells of a component meet only at a corner,
//! the walk turns right and keeps the rings apart.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::codec::ranges_to_mask;
use crate::error::Result;
use crate::geometry::{Point, PolygonGeom};
use crate::hilbert::{Cell, GridGeometry};
use crate::mask::RasterMask;
use crate::ranges::RangeSet;

/// One polygon per 4-connected component, in row-major order of each
/// component's first cell. An empty set yields no polygons.
pub fn ranges_to_polygon(rs: &RangeSet, geom: &GridGeometry) -> Result<Vec<PolygonGeom>> {
    let mask = ranges_to_mask(rs, geom)?;
    mask_to_polygons(&mask)
}

/// Trace every 4-connected component of `mask`.
pub fn mask_to_polygons(mask: &RasterMask) -> Result<Vec<PolygonGeom>> {
    let cs = mask.geometry().cell_size();
    components(mask)
        .iter()
        .map(|cells| component_polygon(cells, cs))
        .collect()
}

/// 4-connected components via flood fill.
pub fn components(mask: &RasterMask) -> Vec<Vec<Cell>> {
    let (origin, w, h) = mask.bounds();
    let idx = |c: Cell| ((c.y - origin.y) as usize) * w as usize + (c.x - origin.x) as usize;
    let mut seen = vec![false; w as usize * h as usize];
    let mut out = Vec::new();
    for start in mask.iter_set() {
        if seen[idx(start)] {
            continue;
        }
        seen[idx(start)] = true;
        let mut comp = Vec::new();
        let mut stack = vec![start];
        while let Some(c) = stack.pop() {
            comp.push(c);
            let mut visit = |n: Cell| {
                if mask.get(n) && !seen[idx(n)] {
                    seen[idx(n)] = true;
                    stack.push(n);
                }
            };
            if c.x > 0 {
                visit(Cell::new(c.x - 1, c.y));
            }
            if c.y > 0 {
                visit(Cell::new(c.x, c.y - 1));
            }
            visit(Cell::new(c.x + 1, c.y));
            visit(Cell::new(c.x, c.y + 1));
        }
        out.push(comp);
    }
    out
}

type Vtx = (u64, u64);

fn component_polygon(cells: &[Cell], cell_size: u32) -> Result<PolygonGeom> {
    let mut members: Vec<Cell> = cells.to_vec();
    members.sort_unstable();
    let has = |x: i64, y: i64| {
        x >= 0
            && y >= 0
            && members
                .binary_search(&Cell::new(x as u32, y as u32))
                .is_ok()
    };

    // directed border edges, region on the right
    let mut out_edges: BTreeMap<Vtx, Vec<Vtx>> = BTreeMap::new();
    let mut add = |a: Vtx, b: Vtx| out_edges.entry(a).or_default().push(b);
    for c in cells {
        let (x, y) = (i64::from(c.x), i64::from(c.y));
        let (ux, uy) = (u64::from(c.x), u64::from(c.y));
        if !has(x, y - 1) {
            add((ux, uy), (ux + 1, uy));
        }
        if !has(x + 1, y) {
            add((ux + 1, uy), (ux + 1, uy + 1));
        }
        if !has(x, y + 1) {
            add((ux + 1, uy + 1), (ux, uy + 1));
        }
        if !has(x - 1, y) {
            add((ux, uy + 1), (ux, uy));
        }
    }

    let mut rings: Vec<Vec<Vtx>> = Vec::new();
    while let Some((&start, _)) = out_edges.iter().find(|(_, v)| !v.is_empty()) {
        let mut ring = vec![start];
        let mut prev = start;
        let mut cur = take_edge(&mut out_edges, start, None);
        while cur != start {
            ring.push(cur);
            let dir = (cur.0 as i64 - prev.0 as i64, cur.1 as i64 - prev.1 as i64);
            let next = take_edge(&mut out_edges, cur, Some(dir));
            prev = cur;
            cur = next;
        }
        rings.push(simplify_ring(ring));
    }

    let scale = u64::from(cell_size);
    let to_points = |ring: &[Vtx]| -> Vec<Point> {
        ring.iter()
            .map(|&(x, y)| Point::new((x * scale) as u32, (y * scale) as u32))
            .collect()
    };
    let mut outer = None;
    let mut holes = Vec::new();
    for ring in &rings {
        let pts = to_points(ring);
        if PolygonGeom::ring_area2(&pts) > 0 && outer.is_none() {
            outer = Some(pts);
        } else {
            holes.push(pts);
        }
    }
    let outer = outer.expect("a non-empty component has a clockwise outer ring");
    PolygonGeom::new(outer, holes)
}

/// Remove and return the edge leaving `at`, preferring a right turn relative
/// to the incoming direction.
fn take_edge(edges: &mut BTreeMap<Vtx, Vec<Vtx>>, at: Vtx, incoming: Option<(i64, i64)>) -> Vtx {
    let list = edges.get_mut(&at).expect("border edges form closed loops");
    let pick = match (incoming, list.len()) {
        (Some((dx, dy)), n) if n > 1 => {
            // right turn on screen (y down) maps (dx, dy) to (-dy, dx)
            let want = (at.0 as i64 - dy, at.1 as i64 + dx);
            list.iter()
                .position(|&(x, y)| (x as i64, y as i64) == want)
                .unwrap_or(0)
        }
        _ => 0,
    };
    list.swap_remove(pick)
}

/// Drop vertices where the ring continues straight on.
fn simplify_ring(ring: Vec<Vtx>) -> Vec<Vtx> {
    let n = ring.len();
    let dir = |a: Vtx, b: Vtx| {
        (
            (b.0 as i64 - a.0 as i64).signum(),
            (b.1 as i64 - a.1 as i64).signum(),
        )
    };
    (0..n)
        .filter(|&i| {
            let (p, c, q) = (ring[(i + n - 1) % n], ring[i], ring[(i + 1) % n]);
            dir(p, c) != dir(c, q)
        })
        .map(|i| ring[i])
        .collect()
}
