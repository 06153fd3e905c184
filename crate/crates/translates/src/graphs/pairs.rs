//! Enumeration of point pairs within a Euclidean radius.

use std::collections::HashMap;

use rayon::prelude::*;

use crate::geometry::Vec2;

/// Below this many points a plain double loop is used.
const GRID_THRESHOLD: usize = 2000;

/// Applies `f` to every pair `i < j` with `|p_i − p_j|₂ ≤ radius` and
/// collects the `Some` results, ordered by `(i, j)`.
pub fn scan_close_pairs<T, F>(points: &[Vec2], radius: f64, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize, usize) -> Option<T> + Sync,
{
    let r2 = radius * radius;
    if points.len() <= GRID_THRESHOLD {
        let mut out = Vec::new();
        for i in 0..points.len() {
            for j in i + 1..points.len() {
                if (points[i] - points[j]).len_sq() <= r2 {
                    if let Some(t) = f(i, j) {
                        out.push(t);
                    }
                }
            }
        }
        return out;
    }
    let grid = Grid::new(points, radius);
    points
        .par_iter()
        .enumerate()
        .map(|(i, &p)| {
            let mut js: Vec<usize> = Vec::new();
            grid.for_neighbors(p, |j| {
                if j > i && (points[j] - p).len_sq() <= r2 {
                    js.push(j);
                }
            });
            js.sort_unstable();
            js.into_iter().filter_map(|j| f(i, j)).collect::<Vec<T>>()
        })
        .flatten()
        .collect()
}

/// Every pair `(i, j)`, `i < j`, within Euclidean distance `radius`.
pub fn close_pairs(points: &[Vec2], radius: f64) -> Vec<(usize, usize)> {
    scan_close_pairs(points, radius, |i, j| Some((i, j)))
}

/// Uniform bucket grid with cell side equal to the query radius.
pub struct Grid {
    cell: f64,
    buckets: HashMap<(i64, i64), Vec<usize>>,
}

impl Grid {
    pub fn new(points: &[Vec2], cell: f64) -> Self {
        let cell = if cell > 0.0 { cell } else { 1.0 };
        let mut buckets: HashMap<(i64, i64), Vec<usize>> = HashMap::new();
        for (i, &p) in points.iter().enumerate() {
            buckets.entry(key(p, cell)).or_default().push(i);
        }
        Grid { cell, buckets }
    }

    /// Calls `f` with every stored index in the 3×3 block of cells around `p`.
    pub fn for_neighbors(&self, p: Vec2, mut f: impl FnMut(usize)) {
        let (cx, cy) = key(p, self.cell);
        for dx in -1..=1 {
            for dy in -1..=1 {
                if let Some(b) = self.buckets.get(&(cx + dx, cy + dy)) {
                    for &j in b {
                        f(j);
                    }
                }
            }
        }
    }
}

fn key(p: Vec2, cell: f64) -> (i64, i64) {
    ((p.x / cell).floor() as i64, (p.y / cell).floor() as i64)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::{Rng, SeedableRng};
    use rand_chacha::ChaCha8Rng;

    #[test]
    fn grid_matches_brute_force() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        let pts: Vec<Vec2> = (0..3000)
            .map(|_| Vec2::new(rng.gen_range(-40.0..40.0), rng.gen_range(-40.0..40.0)))
            .collect();
        let fast = close_pairs(&pts, 1.5);
        let mut slow = Vec::new();
        for i in 0..pts.len() {
            for j in i + 1..pts.len() {
                if pts[i].dist(pts[j]) <= 1.5 {
                    slow.push((i, j));
                }
            }
        }
        assert_eq!(fast, slow);
    }
}
