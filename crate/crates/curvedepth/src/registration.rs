//! Rigid registration of one curve onto another by pattern search on the
//! curve distance, and selection of a sample's deepest curve.

use crate::curve::{rotation_2d, rotation_3d, Curve};
use crate::depth::{depth_all, DepthReport};
use crate::distance::{curve_distance_with, DistanceOptions};
use crate::error::{Error, Result};
use crate::point_depth::DepthConfig;
use crate::rng::{substream, Role};
use rand::Rng;
use std::f64::consts::PI;

/// `x -> R (x - center) + center + translation`.
#[derive(Debug, Clone, PartialEq)]
pub struct RigidTransform {
    pub dim: usize,
    /// Row-major `dim x dim`.
    pub rotation: Vec<f64>,
    pub translation: Vec<f64>,
    pub center: Vec<f64>,
}

impl RigidTransform {
    pub fn identity(dim: usize) -> RigidTransform {
        RigidTransform {
            dim,
            rotation: crate::curve::identity(dim),
            translation: vec![0.0; dim],
            center: vec![0.0; dim],
        }
    }

    fn rotate(&self, x: &[f64]) -> Vec<f64> {
        let d = self.dim;
        (0..d).map(|r| (0..d).map(|k| self.rotation[r * d + k] * x[k]).sum()).collect()
    }

    /// Written as `R x + (center + translation - R center)` so the identity
    /// maps points onto themselves bit for bit.
    pub fn apply_point(&self, x: &[f64]) -> Vec<f64> {
        let rc = self.rotate(&self.center);
        let rx = self.rotate(x);
        (0..self.dim).map(|r| rx[r] + (self.center[r] + self.translation[r] - rc[r])).collect()
    }

    pub fn apply(&self, c: &Curve) -> Result<Curve> {
        if c.dim() != self.dim {
            return Err(Error::DimensionMismatch { expected: self.dim, found: c.dim() });
        }
        let coords = c.vertices().flat_map(|v| self.apply_point(v)).collect();
        Curve::new(c.id(), c.dim(), coords)
    }

    pub fn determinant(&self) -> f64 {
        let r = &self.rotation;
        match self.dim {
            2 => r[0] * r[3] - r[1] * r[2],
            3 => {
                r[0] * (r[4] * r[8] - r[5] * r[7]) - r[1] * (r[3] * r[8] - r[5] * r[6])
                    + r[2] * (r[3] * r[7] - r[4] * r[6])
            }
            _ => f64::NAN,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RegisterOptions {
    pub restarts: usize,
    pub distance: DistanceOptions,
    /// Initial rotation step in radians.
    pub angle_step: f64,
    /// Initial translation step as a fraction of the bounding-box diagonal.
    pub translation_step: f64,
    pub halvings: usize,
}

impl Default for RegisterOptions {
    fn default() -> Self {
        RegisterOptions {
            restarts: 10,
            distance: DistanceOptions::resampled(100),
            angle_step: 0.5,
            translation_step: 0.25,
            halvings: 8,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Registration {
    pub transform: RigidTransform,
    pub initial_distance: f64,
    pub distance: f64,
}

struct Problem<'a> {
    moving: Curve,
    target: Curve,
    center: Vec<f64>,
    opts: &'a DistanceOptions,
    dim: usize,
    n_angles: usize,
}

impl Problem<'_> {
    fn transform(&self, p: &[f64]) -> RigidTransform {
        let rotation = if self.dim == 2 { rotation_2d(p[0]) } else { rotation_3d(p[0], p[1], p[2]) };
        RigidTransform {
            dim: self.dim,
            rotation,
            translation: p[self.n_angles..].to_vec(),
            center: self.center.clone(),
        }
    }

    fn cost(&self, p: &[f64]) -> f64 {
        let moved = self.transform(p).apply(&self.moving).expect("dimensions checked");
        curve_distance_with(&moved, &self.target, self.opts).expect("dimensions checked")
    }
}

fn pattern_search(pb: &Problem, start: Vec<f64>, steps: &mut [f64], halvings: usize) -> (Vec<f64>, f64) {
    let mut p = start;
    let mut best = pb.cost(&p);
    for _ in 0..=halvings {
        // bounded number of sweeps per step size
        for _ in 0..200 {
            let mut moved = false;
            for i in 0..p.len() {
                for sign in [1.0, -1.0] {
                    let mut trial = p.clone();
                    trial[i] += sign * steps[i];
                    let c = pb.cost(&trial);
                    if c < best {
                        best = c;
                        p = trial;
                        moved = true;
                        break;
                    }
                }
            }
            if !moved || best == 0.0 {
                break;
            }
        }
        if best == 0.0 {
            break;
        }
        steps.iter_mut().for_each(|s| *s *= 0.5);
    }
    (p, best)
}

/// Rigid motion of `moving` minimizing its distance to `target`.
///
/// Rotations pivot on the centroid of `moving`. The first start aligns the
/// centroids without rotating; further starts draw random angles. The result
/// is never worse than leaving `moving` in place.
pub fn register(moving: &Curve, target: &Curve, opts: &RegisterOptions, seed: u64) -> Result<Registration> {
    let dim = moving.dim();
    if target.dim() != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: target.dim() });
    }
    if dim != 2 && dim != 3 {
        return Err(Error::Unsupported(format!("registration needs dimension 2 or 3, got {dim}")));
    }
    let n_angles = if dim == 2 { 1 } else { 3 };
    let pb = Problem {
        moving: moving.clone(),
        target: target.clone(),
        center: moving.centroid(),
        opts: &opts.distance,
        dim,
        n_angles,
    };
    let identity_params = vec![0.0; n_angles + dim];
    let initial = pb.cost(&identity_params);
    let shift: Vec<f64> = target.centroid().iter().zip(&pb.center).map(|(a, b)| a - b).collect();
    let diag = moving.bbox_diagonal().max(target.bbox_diagonal()).max(1e-12);
    let mut best = (identity_params.clone(), initial);
    for r in 0..opts.restarts.max(1) {
        let mut rng = substream(seed, Role::Restart, &[r as u64]);
        let mut start = vec![0.0; n_angles];
        if r > 0 {
            start.iter_mut().for_each(|a| *a = rng.random_range(-PI..PI));
        }
        start.extend_from_slice(&shift);
        let mut steps: Vec<f64> = (0..n_angles + dim)
            .map(|i| if i < n_angles { opts.angle_step } else { opts.translation_step * diag })
            .collect();
        let (p, c) = pattern_search(&pb, start, &mut steps, opts.halvings);
        if c < best.1 {
            best = (p, c);
        }
        if best.1 == 0.0 {
            break;
        }
    }
    Ok(Registration { transform: pb.transform(&best.0), initial_distance: initial, distance: best.1 })
}

/// Index and report of the deepest curve (lowest index among ties).
pub fn deepest(sample: &[Curve], m: usize, cfg: &DepthConfig, seed: u64) -> Result<(usize, DepthReport)> {
    let reports = depth_all(sample, m, cfg, seed)?;
    let mut best = 0;
    for (i, r) in reports.iter().enumerate() {
        if r.depth > reports[best].depth {
            best = i;
        }
    }
    Ok((best, reports[best].clone()))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::curve::is_orthogonal;

    fn wiggle() -> Curve {
        let pts: Vec<f64> = (0..60)
            .flat_map(|k| {
                let t = k as f64 / 59.0 * 3.0;
                [t, (2.0 * t).sin() * 0.5 + 0.1 * t * t]
            })
            .collect();
        Curve::new("w", 2, pts).unwrap()
    }

    #[test]
    fn identity_case() {
        let c = wiggle();
        let r = register(&c, &c, &RegisterOptions::default(), 1).unwrap();
        assert_eq!(r.distance, 0.0);
        assert_eq!(r.initial_distance, 0.0);
    }

    #[test]
    fn recovers_rigid_copy() {
        let target = wiggle();
        let moving = target.apply_similarity(1.0, &rotation_2d(PI / 6.0), &[1.0, 2.0]).unwrap();
        let r = register(&moving, &target, &RegisterOptions::default(), 4).unwrap();
        assert!(r.distance <= 0.02 * target.length(), "{} vs {}", r.distance, target.length());
        assert!(r.distance <= r.initial_distance);
        assert!(is_orthogonal(&r.transform.rotation, 2, 1e-10));
        assert!(r.transform.determinant() > 0.0);
    }

    #[test]
    fn rejects_other_dimensions() {
        let c = Curve::new("c", 1, vec![0.0, 1.0]).unwrap();
        assert!(register(&c, &c, &RegisterOptions::default(), 1).is_err());
    }

    #[test]
    fn space_curves() {
        let pts: Vec<f64> = (0..40)
            .flat_map(|k| {
                let t = k as f64 / 39.0 * 4.0;
                [t.cos(), t.sin(), 0.3 * t]
            })
            .collect();
        let target = Curve::new("h", 3, pts).unwrap();
        let moving = target.apply_similarity(1.0, &rotation_3d(0.3, 0.2, -0.1), &[0.5, -0.5, 0.2]).unwrap();
        let opts = RegisterOptions { restarts: 3, ..RegisterOptions::default() };
        let r = register(&moving, &target, &opts, 2).unwrap();
        assert!(r.distance < 0.5 * r.initial_distance);
        assert!(r.transform.determinant() > 0.0);
    }

    #[test]
    fn deepest_of_one() {
        let c = wiggle();
        let (i, _) = deepest(&[c], 20, &DepthConfig::for_m(20), 1).unwrap();
        assert_eq!(i, 0);
    }
}
