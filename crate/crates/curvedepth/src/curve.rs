//! Polyline curves.

use crate::error::{Error, Result};

/// An unparameterized curve stored as a polyline in `R^dim`.
///
/// Consecutive duplicate vertices are collapsed on construction. A curve of
/// zero length is *trivial* and behaves as a point mass.
#[derive(Debug, Clone, PartialEq)]
pub struct Curve {
    id: String,
    dim: usize,
    coords: Vec<f64>,
    // cumulative length up to each vertex
    cum: Vec<f64>,
}

const ORTHO_TOL: f64 = 1e-10;

impl Curve {
    /// Builds a curve from a flat coordinate buffer of `dim`-vectors.
    pub fn new(id: impl Into<String>, dim: usize, coords: Vec<f64>) -> Result<Curve> {
        if dim == 0 {
            return Err(Error::data("curve dimension must be at least 1"));
        }
        if coords.is_empty() || coords.len() % dim != 0 {
            return Err(Error::data(format!(
                "curve needs a nonempty multiple of {dim} coordinates, got {}",
                coords.len()
            )));
        }
        if let Some(v) = coords.iter().find(|v| !v.is_finite()) {
            return Err(Error::data(format!("non-finite coordinate {v}")));
        }
        let mut kept: Vec<f64> = Vec::with_capacity(coords.len());
        for v in coords.chunks_exact(dim) {
            let n = kept.len();
            if n >= dim && kept[n - dim..] == *v {
                continue;
            }
            kept.extend_from_slice(v);
        }
        let nv = kept.len() / dim;
        let mut cum = Vec::with_capacity(nv);
        cum.push(0.0);
        for i in 1..nv {
            let a = &kept[(i - 1) * dim..i * dim];
            let b = &kept[i * dim..(i + 1) * dim];
            cum.push(cum[i - 1] + dist(a, b));
        }
        Ok(Curve { id: id.into(), dim, coords: kept, cum })
    }

    pub fn from_points(id: impl Into<String>, points: &[Vec<f64>]) -> Result<Curve> {
        let dim = points.first().map(|p| p.len()).unwrap_or(0);
        let mut coords = Vec::with_capacity(points.len() * dim);
        for p in points {
            if p.len() != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.len() });
            }
            coords.extend_from_slice(p);
        }
        Curve::new(id, dim, coords)
    }

    pub fn id(&self) -> &str {
        &self.id
    }

    pub fn with_id(mut self, id: impl Into<String>) -> Curve {
        self.id = id.into();
        self
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn n_vertices(&self) -> usize {
        self.cum.len()
    }

    pub fn vertex(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn vertices(&self) -> impl DoubleEndedIterator<Item = &[f64]> + ExactSizeIterator + '_ {
        self.coords.chunks_exact(self.dim)
    }

    /// Flat vertex coordinates.
    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    /// Total polyline length.
    pub fn length(&self) -> f64 {
        *self.cum.last().unwrap()
    }

    pub fn is_trivial(&self) -> bool {
        self.length() == 0.0
    }

    /// Point at arc-length fraction `t` (clamped to `[0, 1]`).
    pub fn point_at(&self, t: f64) -> Vec<f64> {
        let mut out = vec![0.0; self.dim];
        self.point_at_into(t, &mut out);
        out
    }

    pub fn point_at_into(&self, t: f64, out: &mut [f64]) {
        let d = self.dim;
        let nv = self.n_vertices();
        if nv == 1 || self.is_trivial() {
            out.copy_from_slice(self.vertex(0));
            return;
        }
        let t = t.clamp(0.0, 1.0);
        if t == 0.0 {
            out.copy_from_slice(self.vertex(0));
            return;
        }
        if t == 1.0 {
            out.copy_from_slice(self.vertex(nv - 1));
            return;
        }
        let s = t * self.length();
        // first vertex strictly beyond s
        let k = self.cum.partition_point(|&c| c <= s).clamp(1, nv - 1);
        let j = k - 1;
        let seg = self.cum[k] - self.cum[j];
        let lam = ((s - self.cum[j]) / seg).clamp(0.0, 1.0);
        let a = &self.coords[j * d..(j + 1) * d];
        let b = &self.coords[k * d..(k + 1) * d];
        // exact for coordinates shared by both ends
        for i in 0..d {
            out[i] = a[i] + lam * (b[i] - a[i]);
        }
    }

    /// Length of the polyline between arc-length fractions `t1 <= t2`.
    pub fn sub_length(&self, t1: f64, t2: f64) -> f64 {
        let (t1, t2) = (t1.clamp(0.0, 1.0), t2.clamp(0.0, 1.0));
        if t2 <= t1 || self.is_trivial() {
            return 0.0;
        }
        let (s1, s2) = (t1 * self.length(), t2 * self.length());
        let p1 = self.point_at(t1);
        let p2 = self.point_at(t2);
        let i1 = self.cum.partition_point(|&c| c <= s1);
        let i2 = self.cum.partition_point(|&c| c < s2);
        if i1 >= i2 {
            return dist(&p1, &p2);
        }
        let mut total = dist(&p1, self.vertex(i1));
        for i in i1..i2 - 1 {
            total += dist(self.vertex(i), self.vertex(i + 1));
        }
        total + dist(self.vertex(i2 - 1), &p2)
    }

    /// Maps every vertex `v` to `scale * rotation * v + translation`.
    ///
    /// `rotation` is a row-major `dim x dim` matrix that must be orthogonal.
    pub fn apply_similarity(&self, scale: f64, rotation: &[f64], translation: &[f64]) -> Result<Curve> {
        let d = self.dim;
        if !(scale > 0.0 && scale.is_finite()) {
            return Err(Error::param(format!("scale must be positive, got {scale}")));
        }
        if rotation.len() != d * d {
            return Err(Error::DimensionMismatch { expected: d * d, found: rotation.len() });
        }
        if translation.len() != d {
            return Err(Error::DimensionMismatch { expected: d, found: translation.len() });
        }
        if !is_orthogonal(rotation, d, ORTHO_TOL) {
            return Err(Error::param("rotation matrix is not orthogonal"));
        }
        let mut coords = Vec::with_capacity(self.coords.len());
        for v in self.vertices() {
            for r in 0..d {
                let row = &rotation[r * d..(r + 1) * d];
                let rv: f64 = row.iter().zip(v).map(|(a, b)| a * b).sum();
                coords.push(scale * rv + translation[r]);
            }
        }
        Curve::new(self.id.clone(), d, coords)
    }

    pub fn translated(&self, shift: &[f64]) -> Result<Curve> {
        if shift.len() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: shift.len() });
        }
        let coords = self
            .coords
            .iter()
            .enumerate()
            .map(|(i, v)| v + shift[i % self.dim])
            .collect();
        Curve::new(self.id.clone(), self.dim, coords)
    }

    /// Same locus traversed backwards.
    pub fn reversed(&self) -> Curve {
        let mut coords = Vec::with_capacity(self.coords.len());
        for v in self.vertices().rev() {
            coords.extend_from_slice(v);
        }
        Curve::new(self.id.clone(), self.dim, coords).expect("reversal keeps a valid curve")
    }

    /// `count` vertices equally spaced in arc length (endpoints included).
    pub fn resampled(&self, count: usize) -> Curve {
        let count = count.max(1);
        let mut coords = vec![0.0; count * self.dim];
        for (k, out) in coords.chunks_exact_mut(self.dim).enumerate() {
            let t = if count == 1 { 0.0 } else { k as f64 / (count - 1) as f64 };
            self.point_at_into(t, out);
        }
        Curve::new(self.id.clone(), self.dim, coords).expect("resampled points are finite")
    }

    /// Mean of the vertices.
    pub fn centroid(&self) -> Vec<f64> {
        let mut c = vec![0.0; self.dim];
        for v in self.vertices() {
            for (a, b) in c.iter_mut().zip(v) {
                *a += b;
            }
        }
        let n = self.n_vertices() as f64;
        c.iter_mut().for_each(|a| *a /= n);
        c
    }

    /// Per-axis (min, max) of the vertices.
    pub fn bounding_box(&self) -> (Vec<f64>, Vec<f64>) {
        let mut lo = vec![f64::INFINITY; self.dim];
        let mut hi = vec![f64::NEG_INFINITY; self.dim];
        for v in self.vertices() {
            for i in 0..self.dim {
                lo[i] = lo[i].min(v[i]);
                hi[i] = hi[i].max(v[i]);
            }
        }
        (lo, hi)
    }

    pub fn bbox_diagonal(&self) -> f64 {
        let (lo, hi) = self.bounding_box();
        dist(&lo, &hi)
    }
}

pub(crate) fn dist(a: &[f64], b: &[f64]) -> f64 {
    let mut s = 0.0;
    for i in 0..a.len() {
        let d = a[i] - b[i];
        s += d * d;
    }
    s.sqrt()
}

/// `R^T R = I` within `tol`, for a row-major `d x d` matrix.
pub fn is_orthogonal(r: &[f64], d: usize, tol: f64) -> bool {
    for i in 0..d {
        for j in 0..d {
            let mut s = 0.0;
            for k in 0..d {
                s += r[k * d + i] * r[k * d + j];
            }
            let target = if i == j { 1.0 } else { 0.0 };
            if (s - target).abs() > tol {
                return false;
            }
        }
    }
    true
}

/// Row-major rotation of the plane by `angle` radians.
pub fn rotation_2d(angle: f64) -> Vec<f64> {
    let (s, c) = angle.sin_cos();
    vec![c, -s, s, c]
}

/// Row-major `Rz(a) * Ry(b) * Rx(c)`.
pub fn rotation_3d(a: f64, b: f64, c: f64) -> Vec<f64> {
    let (sa, ca) = a.sin_cos();
    let (sb, cb) = b.sin_cos();
    let (sc, cc) = c.sin_cos();
    vec![
        ca * cb,
        ca * sb * sc - sa * cc,
        ca * sb * cc + sa * sc,
        sa * cb,
        sa * sb * sc + ca * cc,
        sa * sb * cc - ca * sc,
        -sb,
        cb * sc,
        cb * cc,
    ]
}

pub fn identity(d: usize) -> Vec<f64> {
    let mut m = vec![0.0; d * d];
    for i in 0..d {
        m[i * d + i] = 1.0;
    }
    m
}
