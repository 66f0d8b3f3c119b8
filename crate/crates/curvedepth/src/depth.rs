//! Monte Carlo curve depth.

use crate::curve::Curve;
use crate::error::{Error, Result};
use crate::point_depth::{evaluate, DepthConfig, Method};
use crate::rng::{str_key, substream, Role};
use crate::sampling::{build_reference, check_dims, sample_owned, PointSample, ReferenceMeasure};
use rayon::prelude::*;

/// Depth of one curve and the point depths it averages.
#[derive(Debug, Clone, PartialEq)]
pub struct DepthReport {
    pub id: String,
    pub depth: f64,
    /// Query points and their point depths.
    pub point_depths: Vec<(Vec<f64>, f64)>,
    pub m: usize,
    pub delta: f64,
    pub method: Method,
    pub seed: u64,
}

/// Depth of `query` against `sample`, with `m` points per curve.
///
/// The query's own measure and its evaluation points are two independent
/// samples of size `m`; their streams are keyed by the query id, the
/// reference strata by sample position.
pub fn curve_depth(query: &Curve, sample: &[Curve], m: usize, cfg: &DepthConfig, seed: u64) -> Result<DepthReport> {
    if sample.is_empty() {
        return Err(Error::param("sample is empty"));
    }
    if m == 0 {
        return Err(Error::param("m must be positive"));
    }
    let dim = check_dims(sample)?;
    if query.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: query.dim() });
    }
    let reference = build_reference(sample, m, seed)?;
    curve_depth_against(query, &reference, cfg, seed)
}

/// Depth of `query` against a prebuilt reference measure.
pub fn curve_depth_against(query: &Curve, reference: &ReferenceMeasure, cfg: &DepthConfig, seed: u64) -> Result<DepthReport> {
    let q = reference.pooled();
    if query.dim() != q.dim() {
        return Err(Error::DimensionMismatch { expected: q.dim(), found: query.dim() });
    }
    depth_with_points(query, q, reference.m(), cfg, seed)
}

pub(crate) fn query_samples(query: &Curve, m: usize, seed: u64) -> (PointSample, PointSample) {
    let key = str_key(query.id());
    let y = sample_owned(query, m, 0, &mut substream(seed, Role::Y, &[key]));
    let z = sample_owned(query, m, 0, &mut substream(seed, Role::Z, &[key]));
    (y, z)
}

fn depth_with_points(query: &Curve, q: &PointSample, m: usize, cfg: &DepthConfig, seed: u64) -> Result<DepthReport> {
    let (y, z) = query_samples(query, m, seed);
    let depths = point_depths(&y, &z, q, cfg, seed, str_key(query.id()))?;
    let depth = depths.iter().sum::<f64>() / depths.len() as f64;
    Ok(DepthReport {
        id: query.id().to_string(),
        depth,
        point_depths: z.points().map(|p| p.to_vec()).zip(depths).collect(),
        m,
        delta: cfg.delta,
        method: cfg.method,
        seed,
    })
}

/// Point depth of every point of `z` against `(y, q)`.
pub(crate) fn point_depths(y: &PointSample, z: &PointSample, q: &PointSample, cfg: &DepthConfig, seed: u64, key: u64) -> Result<Vec<f64>> {
    let mut dirs = substream(seed, Role::Directions, &[key]);
    match cfg.method {
        // no randomness involved, so the points can be scored in parallel
        Method::Exact => z
            .coords()
            .par_chunks_exact(z.dim())
            .map(|x| evaluate(x, y.coords(), q.coords(), cfg, &mut dirs.clone()))
            .collect(),
        Method::Random(_) => z.points().map(|x| evaluate(x, y.coords(), q.coords(), cfg, &mut dirs)).collect(),
    }
}

/// Depth of every sample curve against the whole sample (itself included).
pub fn depth_all(sample: &[Curve], m: usize, cfg: &DepthConfig, seed: u64) -> Result<Vec<DepthReport>> {
    depth_all_with(sample, m, cfg, seed, false)
}

/// As [`depth_all`]; with `leave_one_out` each curve's own stratum is removed
/// from the reference before scoring it.
pub fn depth_all_with(sample: &[Curve], m: usize, cfg: &DepthConfig, seed: u64, leave_one_out: bool) -> Result<Vec<DepthReport>> {
    if leave_one_out && sample.len() < 2 {
        return Err(Error::param("leave-one-out needs at least two curves"));
    }
    let reference = build_reference(sample, m, seed)?;
    sample
        .iter()
        .enumerate()
        .map(|(i, c)| {
            if leave_one_out {
                depth_with_points(c, &reference.without(i), m, cfg, seed)
            } else {
                depth_with_points(c, reference.pooled(), m, cfg, seed)
            }
        })
        .collect()
}
