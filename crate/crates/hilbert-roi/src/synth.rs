//! Deterministic synthetic nucleus-like outlines.
//!
//! Each blob is star-convex: vertices at increasing angles around a random
//! centre, each at its own random radius, snapped to integer pixels.

use std::f64::consts::TAU;

use hilbert_roi_core::{
    mask_to_ranges, rasterize_polygon, AnnotationRecord, GridGeometry, Point, PolygonGeom,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CorpusSpec {
    pub image_width: u32,
    pub image_height: u32,
    pub polygon_count: usize,
    pub seed: u64,
    /// Inclusive, in pixels.
    pub blob_radius_range: (u32, u32),
    /// Inclusive.
    pub vertex_count_range: (u32, u32),
}

impl CorpusSpec {
    pub fn validate(&self) -> Result<()> {
        let (r0, r1) = self.blob_radius_range;
        let (v0, v1) = self.vertex_count_range;
        if self.polygon_count == 0 {
            return Err(Error::Spec("polygon_count must be at least 1".into()));
        }
        if r0 == 0 || r0 > r1 {
            return Err(Error::Spec(format!("bad radius range {r0}..={r1}")));
        }
        if v0 < 3 || v0 > v1 {
            return Err(Error::Spec(format!(
                "bad vertex count range {v0}..={v1} (min 3)"
            )));
        }
        if u64::from(r1) * 2 > u64::from(self.image_width.min(self.image_height)) {
            return Err(Error::Spec(format!(
                "radius {r1} does not fit a {}x{} image",
                self.image_width, self.image_height
            )));
        }
        Ok(())
    }
}

/// One blob. Retries until the snapped outline still has three vertices
/// in strictly increasing angular order and non-zero area.
fn blob(rng: &mut ChaCha8Rng, spec: &CorpusSpec) -> PolygonGeom {
    let (r0, r1) = spec.blob_radius_range;
    let (v0, v1) = spec.vertex_count_range;
    loop {
        let cx = rng.random_range(r1..=spec.image_width - r1);
        let cy = rng.random_range(r1..=spec.image_height - r1);
        let n = rng.random_range(v0..=v1);
        let phase = rng.random_range(0.0..TAU);
        let mut ring: Vec<Point> = Vec::with_capacity(n as usize);
        let mut last_angle = f64::NEG_INFINITY;
        for i in 0..n {
            let jitter = rng.random_range(-0.35..0.35);
            let theta = phase + (f64::from(i) + jitter) * TAU / f64::from(n);
            let r = f64::from(rng.random_range(r0..=r1));
            let x = (f64::from(cx) + r * theta.cos()).round();
            let y = (f64::from(cy) + r * theta.sin()).round();
            let (dx, dy) = (x - f64::from(cx), y - f64::from(cy));
            if dx == 0.0 && dy == 0.0 {
                continue;
            }
            // unwrap the snapped angle relative to the phase so it stays monotone
            let mut a = dy.atan2(dx);
            while a < phase - 0.5 * TAU / f64::from(n) {
                a += TAU;
            }
            while a >= phase + TAU - 0.5 * TAU / f64::from(n) {
                a -= TAU;
            }
            if a <= last_angle {
                continue;
            }
            last_angle = a;
            ring.push(Point::new(x as u32, y as u32));
        }
        if ring.len() >= 3 && PolygonGeom::ring_area2(&ring) != 0 {
            if let Ok(p) = PolygonGeom::simple(ring) {
                return p;
            }
        }
    }
}

pub fn synth_corpus(spec: &CorpusSpec) -> Result<Vec<PolygonGeom>> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    Ok((0..spec.polygon_count)
        .map(|_| blob(&mut rng, spec))
        .collect())
}

/// Encode polygons as records with ids `0..n`, optionally capping the range
/// count per record.
pub fn encode_corpus(
    polys: &[PolygonGeom],
    geom: &GridGeometry,
    max_ranges: Option<usize>,
) -> Result<Vec<AnnotationRecord>> {
    polys
        .iter()
        .enumerate()
        .map(|(i, p)| {
            let mut rs = mask_to_ranges(&rasterize_polygon(p, geom)?);
            if let Some(m) = max_ranges {
                rs = rs.simplify(m)?;
            }
            Ok(AnnotationRecord::new(
                i as u64,
                format!("nucleus {i}"),
                "Nuclear Material",
                rs,
                *geom,
            )?)
        })
        .collect()
}
