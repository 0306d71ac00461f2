//! Hilbert range queries against a naive per-cell coordinate scan.
//!
//! The naive table mirrors `select id where x BETWEEN .. and y BETWEEN ..`
//! over one row per covered cell. Both methods must return identical id
//! sets for every window before any timing is reported.

use std::collections::BTreeSet;
use std::time::{Duration, Instant};

use hilbert_roi_core::{
    ranges_to_mask, AnnotationId, AnnotationRecord, GridGeometry, IndexTable, QueryWindow,
};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};

/// One `(id, x, y)` row per covered cell.
#[derive(Clone, Debug)]
pub struct NaiveTable {
    geometry: GridGeometry,
    rows: Vec<(AnnotationId, u32, u32)>,
}

impl NaiveTable {
    pub fn build(geometry: GridGeometry, records: &[AnnotationRecord]) -> Result<Self> {
        let mut rows = Vec::new();
        for rec in records {
            let mask = ranges_to_mask(&rec.ranges, &geometry)?;
            rows.extend(mask.iter_set().map(|c| (rec.id, c.x, c.y)));
        }
        Ok(Self { geometry, rows })
    }

    pub fn len(&self) -> usize {
        self.rows.len()
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }

    /// Full scan; an annotation matches iff one of its cells lies in the
    /// window's cell rectangle.
    pub fn query(&self, window: &QueryWindow) -> Result<BTreeSet<AnnotationId>> {
        let (lo, hi) = window.cell_bounds(&self.geometry)?;
        Ok(self
            .rows
            .iter()
            .filter(|&&(_, x, y)| (lo.x..=hi.x).contains(&x) && (lo.y..=hi.y).contains(&y))
            .map(|&(id, _, _)| id)
            .collect())
    }
}

pub fn naive_query(table: &NaiveTable, window: &QueryWindow) -> Result<BTreeSet<AnnotationId>> {
    table.query(window)
}

/// Square-ish windows covering about `fraction` of the image area, placed
/// uniformly inside the image.
pub fn random_windows(
    geom: &GridGeometry,
    count: usize,
    fraction: f64,
    seed: u64,
) -> Result<Vec<QueryWindow>> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::Spec(format!(
            "window fraction {fraction} is not in (0, 1]"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (w, h) = (geom.width(), geom.height());
    let side = fraction.sqrt();
    let ww = ((f64::from(w) * side).round() as u32).clamp(1, w);
    let wh = ((f64::from(h) * side).round() as u32).clamp(1, h);
    (0..count)
        .map(|_| {
            let x = rng.random_range(0..=w - ww);
            let y = rng.random_range(0..=h - wh);
            Ok(QueryWindow::new(x, y, x + ww - 1, y + wh - 1)?)
        })
        .collect()
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct MethodReport {
    pub wall_ns: u128,
    pub mean_ns_per_window: f64,
    /// Rows (naive) or entries (Hilbert) examined over all windows.
    pub touched: u64,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct BenchReport {
    pub annotations: usize,
    pub index_entries: usize,
    pub naive_rows: usize,
    pub windows: usize,
    pub threads: usize,
    pub total_hits: u64,
    pub hilbert: MethodReport,
    pub naive: MethodReport,
}

impl BenchReport {
    pub fn to_table(&self) -> String {
        let mut out = format!(
            "annotations {}  index entries {}  naive rows {}  windows {}  threads {}  hits {}\n",
            self.annotations,
            self.index_entries,
            self.naive_rows,
            self.windows,
            self.threads,
            self.total_hits
        );
        out.push_str(&format!(
            "{:<10}{:>16}{:>18}{:>16}\n",
            "method", "wall ms", "mean us/window", "touched"
        ));
        for (name, m) in [("hilbert", &self.hilbert), ("naive", &self.naive)] {
            out.push_str(&format!(
                "{:<10}{:>16.3}{:>18.3}{:>16}\n",
                name,
                m.wall_ns as f64 / 1e6,
                m.mean_ns_per_window / 1e3,
                m.touched
            ));
        }
        out
    }
}

type Answer = (BTreeSet<AnnotationId>, u64);

fn run_parallel<F>(windows: &[QueryWindow], threads: usize, f: F) -> Result<(Vec<Answer>, Duration)>
where
    F: Fn(&QueryWindow) -> Result<Answer> + Sync,
{
    let chunk = windows.len().div_ceil(threads.max(1)).max(1);
    let start = Instant::now();
    let parts: Vec<Result<Vec<Answer>>> = std::thread::scope(|s| {
        let handles: Vec<_> = windows
            .chunks(chunk)
            .map(|ws| s.spawn(|| ws.iter().map(&f).collect::<Result<Vec<_>>>()))
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("benchmark worker panicked"))
            .collect()
    });
    let elapsed = start.elapsed();
    let mut out = Vec::with_capacity(windows.len());
    for p in parts {
        out.extend(p?);
    }
    Ok((out, elapsed))
}

fn method(answers: &[Answer], wall: Duration) -> MethodReport {
    MethodReport {
        wall_ns: wall.as_nanos(),
        mean_ns_per_window: wall.as_nanos() as f64 / answers.len().max(1) as f64,
        touched: answers.iter().map(|a| a.1).sum(),
    }
}

/// Run every window through both methods. Fails with [`Error::Mismatch`] if
/// any window's id sets differ. Results do not depend on `threads`.
pub fn bench(
    table: &IndexTable,
    naive: &NaiveTable,
    windows: &[QueryWindow],
    threads: usize,
) -> Result<BenchReport> {
    let (fast, fast_wall) = run_parallel(windows, threads, |w| {
        let (ids, stats) = table.query_window_instrumented(w)?;
        Ok((ids, stats.touched as u64))
    })?;
    let (slow, slow_wall) = run_parallel(windows, threads, |w| {
        Ok((naive.query(w)?, naive.len() as u64))
    })?;
    for (i, (a, b)) in fast.iter().zip(&slow).enumerate() {
        if a.0 != b.0 {
            let w = &windows[i];
            return Err(Error::Mismatch(format!(
                "window {i} ({},{},{},{}): hilbert {} ids, naive {} ids",
                w.min_x,
                w.min_y,
                w.max_x,
                w.max_y,
                a.0.len(),
                b.0.len()
            )));
        }
    }
    Ok(BenchReport {
        annotations: table.annotation_count(),
        index_entries: table.len(),
        naive_rows: naive.len(),
        windows: windows.len(),
        threads: threads.max(1),
        total_hits: fast.iter().map(|a| a.0.len() as u64).sum(),
        hilbert: method(&fast, fast_wall),
        naive: method(&slow, slow_wall),
    })
}
