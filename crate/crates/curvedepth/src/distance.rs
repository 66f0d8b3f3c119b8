//! Discrete Frechet distance between polylines.
//!
//! Cells of the vertex distance grid are removed from the largest value down;
//! the distance is the value of the cell whose removal cuts the last monotone
//! path from the first to the last cell. The routine below runs the same
//! process backwards: cells are switched on in ascending order, reachability
//! from the start cell is propagated, and the value at which the end cell is
//! first reached is returned.

use crate::curve::{dist, Curve};
use crate::error::{Error, Result};

/// Euclidean distances between the vertices of two curves.
#[derive(Debug, Clone, PartialEq)]
pub struct DistanceMatrix {
    pub rows: usize,
    pub cols: usize,
    pub data: Vec<f64>,
}

impl DistanceMatrix {
    pub fn between(a: &Curve, b: &Curve) -> Result<DistanceMatrix> {
        if a.dim() != b.dim() {
            return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
        }
        let mut data = Vec::with_capacity(a.n_vertices() * b.n_vertices());
        for u in a.vertices() {
            for v in b.vertices() {
                data.push(dist(u, v));
            }
        }
        Ok(DistanceMatrix { rows: a.n_vertices(), cols: b.n_vertices(), data })
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.cols + j]
    }

    pub fn transpose(&self) -> DistanceMatrix {
        let mut data = Vec::with_capacity(self.data.len());
        for j in 0..self.cols {
            for i in 0..self.rows {
                data.push(self.get(i, j));
            }
        }
        DistanceMatrix { rows: self.cols, cols: self.rows, data }
    }

    /// Bottleneck value of the best monotone path through the grid.
    pub fn bottleneck(&self) -> f64 {
        let (r, c) = (self.rows, self.cols);
        let n = r * c;
        let mut order: Vec<u32> = (0..n as u32).collect();
        order.sort_unstable_by(|&a, &b| self.data[a as usize].total_cmp(&self.data[b as usize]).then(a.cmp(&b)));
        let mut on = vec![false; n];
        let mut reached = vec![false; n];
        let mut stack = Vec::new();
        for &cell in &order {
            let cell = cell as usize;
            on[cell] = true;
            let (i, j) = (cell / c, cell % c);
            let fed = cell == 0
                || (i > 0 && reached[cell - c])
                || (j > 0 && reached[cell - 1])
                || (i > 0 && j > 0 && reached[cell - c - 1]);
            if !fed {
                continue;
            }
            reached[cell] = true;
            stack.push(cell);
            while let Some(s) = stack.pop() {
                let (si, sj) = (s / c, s % c);
                let mut push = |t: usize| {
                    if on[t] && !reached[t] {
                        reached[t] = true;
                        stack.push(t);
                    }
                };
                if si + 1 < r {
                    push(s + c);
                }
                if sj + 1 < c {
                    push(s + 1);
                }
                if si + 1 < r && sj + 1 < c {
                    push(s + c + 1);
                }
            }
            if reached[n - 1] {
                return self.data[cell];
            }
        }
        unreachable!("the full grid always connects its corners")
    }
}

/// Options applied before measuring.
#[derive(Debug, Clone, Copy, PartialEq, Default)]
pub struct DistanceOptions {
    /// Resample both curves to this many vertices, equally spaced in arc length.
    pub resample: Option<usize>,
    /// Take the better of the two traversal directions of the second curve.
    pub orientation_free: bool,
}

impl DistanceOptions {
    pub fn resampled(count: usize) -> DistanceOptions {
        DistanceOptions { resample: Some(count), orientation_free: false }
    }
}

/// Discrete Frechet distance on the vertices as given.
pub fn curve_distance(a: &Curve, b: &Curve) -> Result<f64> {
    Ok(DistanceMatrix::between(a, b)?.bottleneck())
}

pub fn curve_distance_with(a: &Curve, b: &Curve, opts: &DistanceOptions) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let (a, b) = match opts.resample {
        Some(0) => return Err(Error::param("resample count must be positive")),
        Some(k) => (a.resampled(k), b.resampled(k)),
        None => (a.clone(), b.clone()),
    };
    let forward = curve_distance(&a, &b)?;
    if opts.orientation_free {
        Ok(forward.min(curve_distance(&a, &b.reversed())?))
    } else {
        Ok(forward)
    }
}

/// Pairwise distances; the lower triangle mirrors the upper one.
pub fn curve_distance_matrix(curves: &[Curve], opts: &DistanceOptions) -> Result<Vec<Vec<f64>>> {
    let n = curves.len();
    let mut out = vec![vec![0.0; n]; n];
    for i in 0..n {
        for j in i + 1..n {
            let d = curve_distance_with(&curves[i], &curves[j], opts)?;
            out[i][j] = d;
            out[j][i] = d;
        }
    }
    Ok(out)
}
