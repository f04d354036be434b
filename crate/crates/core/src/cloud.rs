//! Finite point clouds in `ℂ` and Hausdorff distances between them, using a
//! uniform bucket grid for nearest-neighbour queries.

use std::collections::HashMap;

use num_complex::Complex64;
use rayon::prelude::*;

/// Nearest-neighbour index over a fixed set of points.
pub struct PointIndex<'a> {
    points: &'a [Complex64],
    cell: f64,
    origin: Complex64,
    buckets: HashMap<(i64, i64), Vec<u32>>,
    span: (i64, i64, i64, i64),
}

impl<'a> PointIndex<'a> {
    pub fn new(points: &'a [Complex64]) -> Self {
        assert!(!points.is_empty(), "empty point cloud");
        let (mut lo, mut hi) = (points[0], points[0]);
        for p in points {
            lo = Complex64::new(lo.re.min(p.re), lo.im.min(p.im));
            hi = Complex64::new(hi.re.max(p.re), hi.im.max(p.im));
        }
        let extent = (hi.re - lo.re).max(hi.im - lo.im).max(1e-12);
        let cell = extent / (points.len() as f64).sqrt().max(1.0);
        let mut buckets: HashMap<(i64, i64), Vec<u32>> = HashMap::new();
        let key = |p: Complex64| (((p.re - lo.re) / cell).floor() as i64, ((p.im - lo.im) / cell).floor() as i64);
        let mut span = (i64::MAX, i64::MIN, i64::MAX, i64::MIN);
        for (i, &p) in points.iter().enumerate() {
            let k = key(p);
            span = (span.0.min(k.0), span.1.max(k.0), span.2.min(k.1), span.3.max(k.1));
            buckets.entry(k).or_default().push(i as u32);
        }
        Self { points, cell, origin: lo, buckets, span }
    }

    /// Distance from `q` to the closest indexed point.
    pub fn nearest_distance(&self, q: Complex64) -> f64 {
        let cx = ((q.re - self.origin.re) / self.cell).floor() as i64;
        let cy = ((q.im - self.origin.im) / self.cell).floor() as i64;
        let (x0, x1, y0, y1) = self.span;
        let reach = (cx - x0).abs().max((cx - x1).abs()).max((cy - y0).abs()).max((cy - y1).abs());
        // Rings that contain no cell of the index are skipped outright.
        let start = (x0 - cx).max(cx - x1).max(y0 - cy).max(cy - y1).max(0);
        let mut best = f64::INFINITY;
        let mut r = start;
        while r <= reach {
            if best <= (r - 1).max(0) as f64 * self.cell {
                break;
            }
            let mut visit = |x: i64, y: i64| {
                if let Some(ids) = self.buckets.get(&(x, y)) {
                    for &i in ids {
                        best = best.min((self.points[i as usize] - q).norm());
                    }
                }
            };
            if r == 0 {
                visit(cx, cy);
            } else {
                // Only the part of the ring that meets the occupied span.
                for x in (cx - r).max(x0)..=(cx + r).min(x1) {
                    visit(x, cy - r);
                    visit(x, cy + r);
                }
                for y in (cy - r + 1).max(y0)..=(cy + r - 1).min(y1) {
                    visit(cx - r, y);
                    visit(cx + r, y);
                }
            }
            r += 1;
        }
        best
    }
}

/// `max_{a ∈ A} min_{b ∈ B} |a − b|`.
pub fn directed_hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    if a.is_empty() {
        return 0.0;
    }
    if b.is_empty() {
        return f64::INFINITY;
    }
    let index = PointIndex::new(b);
    a.par_iter().with_min_len(1024).map(|&q| index.nearest_distance(q)).reduce(|| 0.0, f64::max)
}

/// Symmetric Hausdorff distance between two finite clouds.
pub fn hausdorff(a: &[Complex64], b: &[Complex64]) -> f64 {
    directed_hausdorff(a, b).max(directed_hausdorff(b, a))
}
