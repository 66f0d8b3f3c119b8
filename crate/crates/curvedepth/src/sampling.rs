//! Draws from arc-length measures and the pooled reference measure.

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::rng::{substream, Role, Stream};
use rand::Rng;

/// Points with the index of the curve each was drawn from.
#[derive(Debug, Clone, PartialEq)]
pub struct PointSample {
    dim: usize,
    coords: Vec<f64>,
    owner: Vec<usize>,
}

impl PointSample {
    pub fn new(dim: usize, coords: Vec<f64>, owner: Vec<usize>) -> Result<PointSample> {
        if dim == 0 || coords.len() != owner.len() * dim {
            return Err(Error::data("point sample coordinates do not match owner count"));
        }
        Ok(PointSample { dim, coords, owner })
    }

    /// All points owned by curve 0.
    pub fn from_coords(dim: usize, coords: Vec<f64>) -> Result<PointSample> {
        if dim == 0 || coords.len() % dim != 0 {
            return Err(Error::data("coordinate count is not a multiple of the dimension"));
        }
        let n = coords.len() / dim;
        PointSample::new(dim, coords, vec![0; n])
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn len(&self) -> usize {
        self.owner.len()
    }

    pub fn is_empty(&self) -> bool {
        self.owner.is_empty()
    }

    pub fn coords(&self) -> &[f64] {
        &self.coords
    }

    pub fn point(&self, i: usize) -> &[f64] {
        &self.coords[i * self.dim..(i + 1) * self.dim]
    }

    pub fn points(&self) -> impl ExactSizeIterator<Item = &[f64]> + '_ {
        self.coords.chunks_exact(self.dim)
    }

    pub fn owners(&self) -> &[usize] {
        &self.owner
    }

    /// Concatenation of several samples (all of one dimension).
    pub fn concat<'a>(parts: impl IntoIterator<Item = &'a PointSample>) -> Result<PointSample> {
        let mut dim = 0;
        let mut coords = Vec::new();
        let mut owner = Vec::new();
        for p in parts {
            if dim == 0 {
                dim = p.dim;
            } else if p.dim != dim {
                return Err(Error::DimensionMismatch { expected: dim, found: p.dim });
            }
            coords.extend_from_slice(&p.coords);
            owner.extend_from_slice(&p.owner);
        }
        if dim == 0 {
            return Err(Error::data("cannot concatenate zero samples"));
        }
        PointSample::new(dim, coords, owner)
    }
}

/// `m` i.i.d. points from the arc-length measure of `curve`.
///
/// A uniform arc-length fraction picks each segment with probability
/// proportional to its length and a uniform point on it.
pub fn sample_on_curve(curve: &Curve, m: usize, rng: &mut Stream) -> PointSample {
    sample_owned(curve, m, 0, rng)
}

pub(crate) fn sample_owned(curve: &Curve, m: usize, owner: usize, rng: &mut Stream) -> PointSample {
    let d = curve.dim();
    let mut coords = vec![0.0; m * d];
    for out in coords.chunks_exact_mut(d) {
        let t: f64 = rng.random();
        curve.point_at_into(t, out);
    }
    PointSample { dim: d, coords, owner: vec![owner; m] }
}

/// Pooled empirical measure of a curve sample: `m` points per curve.
#[derive(Debug, Clone, PartialEq)]
pub struct ReferenceMeasure {
    m: usize,
    n: usize,
    pooled: PointSample,
}

impl ReferenceMeasure {
    pub fn m(&self) -> usize {
        self.m
    }

    /// Number of strata (curves).
    pub fn n_curves(&self) -> usize {
        self.n
    }

    pub fn pooled(&self) -> &PointSample {
        &self.pooled
    }

    pub fn stratum(&self, i: usize) -> PointSample {
        let d = self.pooled.dim;
        let (a, b) = (i * self.m, (i + 1) * self.m);
        PointSample {
            dim: d,
            coords: self.pooled.coords[a * d..b * d].to_vec(),
            owner: self.pooled.owner[a..b].to_vec(),
        }
    }

    /// Pooled measure with stratum `i` removed.
    pub fn without(&self, i: usize) -> PointSample {
        let d = self.pooled.dim;
        let (a, b) = (i * self.m, (i + 1) * self.m);
        let mut coords = self.pooled.coords[..a * d].to_vec();
        coords.extend_from_slice(&self.pooled.coords[b * d..]);
        let mut owner = self.pooled.owner[..a].to_vec();
        owner.extend_from_slice(&self.pooled.owner[b..]);
        PointSample { dim: d, coords, owner }
    }
}

/// Reference measure with stratum `i` drawn from the substream `(seed, i)`.
pub fn build_reference(curves: &[Curve], m: usize, seed: u64) -> Result<ReferenceMeasure> {
    if curves.is_empty() {
        return Err(Error::param("reference sample is empty"));
    }
    if m == 0 {
        return Err(Error::param("m must be positive"));
    }
    let dim = check_dims(curves)?;
    let mut coords = Vec::with_capacity(curves.len() * m * dim);
    let mut owner = Vec::with_capacity(curves.len() * m);
    for (i, c) in curves.iter().enumerate() {
        let mut rng = substream(seed, Role::Reference, &[i as u64]);
        let s = sample_owned(c, m, i, &mut rng);
        coords.extend_from_slice(&s.coords);
        owner.extend_from_slice(&s.owner);
    }
    Ok(ReferenceMeasure { m, n: curves.len(), pooled: PointSample { dim, coords, owner } })
}

pub(crate) fn check_dims(curves: &[Curve]) -> Result<usize> {
    let dim = curves[0].dim();
    for c in curves {
        if c.dim() != dim {
            return Err(Error::DimensionMismatch { expected: dim, found: c.dim() });
        }
    }
    Ok(dim)
}
