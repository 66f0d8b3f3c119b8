//! Clustering of curves by a mix of relative depth and silhouette width,
//! with random reallocation moves and an annealed acceptance rule.

use crate::curve::Curve;
use crate::depth::{point_depths, query_samples};
use crate::distance::{curve_distance_matrix, DistanceOptions};
use crate::error::{Error, Result};
use crate::point_depth::DepthConfig;
use crate::rng::{str_key, substream, Role, Stream};
use crate::sampling::{build_reference, PointSample};
use rand::seq::SliceRandom;
use rand::Rng;

/// How a worse candidate partition may still be accepted.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Acceptance {
    /// Probability `exp(-|beta| * loss) / 2`, shrinking as `|beta|` doubles.
    Decaying,
    /// Probability `1 - exp(beta * loss) / 2`, as literally published.
    Verbatim,
}

impl Acceptance {
    pub fn probability(self, beta: f64, loss: f64) -> f64 {
        match self {
            Acceptance::Decaying => (-beta.abs() * loss).exp() / 2.0,
            Acceptance::Verbatim => 1.0 - (beta * loss).exp() / 2.0,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Init {
    /// Uniformly random labels, each cluster seeded with one member.
    Random,
    /// Randomized spread-out medoids (chosen with probability proportional to
    /// squared distance), then nearest-medoid labels.
    Medoids,
}

#[derive(Debug, Clone, PartialEq)]
pub struct ClusterOptions {
    pub k: usize,
    /// Weight of relative depth against silhouette width.
    pub lambda: f64,
    /// Curves whose cost is below this are candidates for reallocation.
    pub threshold: f64,
    pub beta0: f64,
    pub max_iter: usize,
    /// Stop after this many consecutive iterations without change.
    pub patience: usize,
    /// Points per curve for the cluster-conditional depths.
    pub m: usize,
    pub acceptance: Acceptance,
    pub init: Init,
    pub distance: DistanceOptions,
}

impl ClusterOptions {
    pub fn new(k: usize) -> ClusterOptions {
        ClusterOptions {
            k,
            lambda: 0.5,
            threshold: 0.0,
            beta0: -1.0,
            max_iter: 100,
            patience: 5,
            m: 50,
            acceptance: Acceptance::Decaying,
            init: Init::Medoids,
            distance: DistanceOptions::resampled(100),
        }
    }
}

/// Cluster labels (0-based) with the per-curve cost terms.
#[derive(Debug, Clone, PartialEq)]
pub struct Partition {
    pub k: usize,
    pub assignment: Vec<usize>,
    pub relative_depth: Vec<f64>,
    pub silhouette: Vec<f64>,
    pub cost: Vec<f64>,
    pub total_cost: f64,
    pub iterations: usize,
    /// Depth of every curve against every cluster.
    pub depth_table: Vec<Vec<f64>>,
}

/// Own-cluster depth minus the smallest depth against another cluster.
pub fn relative_depth(i: usize, assignment: &[usize], depth_table: &[Vec<f64>]) -> f64 {
    let own = assignment[i];
    let row = &depth_table[i];
    let foreign = row
        .iter()
        .enumerate()
        .filter(|&(k, _)| k != own)
        .map(|(_, &d)| d)
        .fold(f64::INFINITY, f64::min);
    if foreign.is_finite() {
        row[own] - foreign
    } else {
        0.0
    }
}

/// Silhouette width of curve `i`; a singleton's own average distance is 0.
pub fn silhouette(i: usize, assignment: &[usize], k: usize, dist: &[Vec<f64>]) -> f64 {
    let own = assignment[i];
    let mut sums = vec![0.0; k];
    let mut counts = vec![0usize; k];
    for (j, &c) in assignment.iter().enumerate() {
        if j != i {
            sums[c] += dist[i][j];
            counts[c] += 1;
        }
    }
    let a = if counts[own] == 0 { 0.0 } else { sums[own] / counts[own] as f64 };
    let b = (0..k)
        .filter(|&c| c != own && counts[c] > 0)
        .map(|c| sums[c] / counts[c] as f64)
        .fold(f64::INFINITY, f64::min);
    if !b.is_finite() {
        return 0.0;
    }
    let scale = a.max(b);
    if scale == 0.0 {
        0.0
    } else {
        (b - a) / scale
    }
}

/// Per-curve samples reused for every cluster-conditional depth.
struct DepthCache {
    queries: Vec<(PointSample, PointSample)>,
    strata: Vec<PointSample>,
    keys: Vec<u64>,
    cfg: DepthConfig,
    seed: u64,
}

impl DepthCache {
    fn new(curves: &[Curve], m: usize, cfg: &DepthConfig, seed: u64) -> Result<DepthCache> {
        let reference = build_reference(curves, m, seed)?;
        Ok(DepthCache {
            queries: curves.iter().map(|c| query_samples(c, m, seed)).collect(),
            strata: (0..curves.len()).map(|i| reference.stratum(i)).collect(),
            keys: curves.iter().map(|c| str_key(c.id())).collect(),
            cfg: *cfg,
            seed,
        })
    }

    /// Depth of every curve against the members of one cluster.
    fn column(&self, members: &[usize]) -> Result<Vec<f64>> {
        let q = PointSample::concat(members.iter().map(|&j| &self.strata[j]))?;
        self.queries
            .iter()
            .zip(&self.keys)
            .map(|((y, z), &key)| {
                let d = point_depths(y, z, &q, &self.cfg, self.seed, key)?;
                Ok(d.iter().sum::<f64>() / d.len() as f64)
            })
            .collect()
    }

    fn table(&self, assignment: &[usize], k: usize, old: Option<(&[usize], &[Vec<f64>])>) -> Result<Vec<Vec<f64>>> {
        let n = assignment.len();
        let mut table = match old {
            Some((_, t)) => t.to_vec(),
            None => vec![vec![0.0; k]; n],
        };
        for c in 0..k {
            let members: Vec<usize> = (0..n).filter(|&i| assignment[i] == c).collect();
            if let Some((prev, _)) = old {
                let same = (0..n).all(|i| (prev[i] == c) == (assignment[i] == c));
                if same {
                    continue;
                }
            }
            let col = self.column(&members)?;
            for i in 0..n {
                table[i][c] = col[i];
            }
        }
        Ok(table)
    }
}

struct Scored {
    assignment: Vec<usize>,
    table: Vec<Vec<f64>>,
    red: Vec<f64>,
    sil: Vec<f64>,
    cost: Vec<f64>,
    total: f64,
}

fn score(assignment: Vec<usize>, table: Vec<Vec<f64>>, k: usize, dist: &[Vec<f64>], lambda: f64) -> Scored {
    let n = assignment.len();
    let red: Vec<f64> = (0..n).map(|i| relative_depth(i, &assignment, &table)).collect();
    let sil: Vec<f64> = (0..n).map(|i| silhouette(i, &assignment, k, dist)).collect();
    let cost: Vec<f64> = (0..n).map(|i| (1.0 - lambda) * sil[i] + lambda * red[i]).collect();
    let total = cost.iter().sum::<f64>() / n as f64;
    Scored { assignment, table, red, sil, cost, total }
}

fn initial_assignment(n: usize, k: usize, init: Init, dist: &[Vec<f64>], rng: &mut Stream) -> Vec<usize> {
    match init {
        Init::Random => {
            let mut order: Vec<usize> = (0..n).collect();
            order.shuffle(rng);
            let mut a = vec![0; n];
            for (pos, &i) in order.iter().enumerate() {
                a[i] = if pos < k { pos } else { rng.random_range(0..k) };
            }
            a
        }
        Init::Medoids => {
            let mut medoids = vec![rng.random_range(0..n)];
            while medoids.len() < k {
                let weights: Vec<f64> = (0..n)
                    .map(|i| {
                        let d = medoids.iter().map(|&c| dist[i][c]).fold(f64::INFINITY, f64::min);
                        if medoids.contains(&i) {
                            0.0
                        } else {
                            d * d
                        }
                    })
                    .collect();
                let total: f64 = weights.iter().sum();
                let next = if total > 0.0 {
                    let mut u = rng.random::<f64>() * total;
                    let mut pick = None;
                    for (i, w) in weights.iter().enumerate() {
                        if *w > 0.0 {
                            pick = Some(i);
                            if u < *w {
                                break;
                            }
                            u -= w;
                        }
                    }
                    pick.unwrap()
                } else {
                    let free: Vec<usize> = (0..n).filter(|i| !medoids.contains(i)).collect();
                    free[rng.random_range(0..free.len())]
                };
                medoids.push(next);
            }
            let mut a: Vec<usize> = (0..n)
                .map(|i| {
                    let mut best = 0;
                    for c in 1..k {
                        if dist[i][medoids[c]] < dist[i][medoids[best]] {
                            best = c;
                        }
                    }
                    best
                })
                .collect();
            for (c, &i) in medoids.iter().enumerate() {
                a[i] = c;
            }
            a
        }
    }
}

/// Clusters `curves` into `opts.k` groups.
pub fn ddclust(curves: &[Curve], opts: &ClusterOptions, cfg: &DepthConfig, seed: u64) -> Result<Partition> {
    let dist = curve_distance_matrix(curves, &opts.distance)?;
    ddclust_with_distances(curves, &dist, opts, cfg, seed)
}

/// As [`ddclust`] with a precomputed curve distance matrix.
pub fn ddclust_with_distances(
    curves: &[Curve],
    dist: &[Vec<f64>],
    opts: &ClusterOptions,
    cfg: &DepthConfig,
    seed: u64,
) -> Result<Partition> {
    let n = curves.len();
    let k = opts.k;
    if k < 2 {
        return Err(Error::param("at least two clusters are needed"));
    }
    if k > n {
        return Err(Error::param(format!("{k} clusters requested for {n} curves")));
    }
    if !(0.0..=1.0).contains(&opts.lambda) {
        return Err(Error::param("lambda must lie in [0, 1]"));
    }
    if opts.threshold > 0.0 {
        return Err(Error::param("threshold must not be positive"));
    }
    if opts.m == 0 {
        return Err(Error::param("m must be positive"));
    }
    if dist.len() != n || dist.iter().any(|r| r.len() != n) {
        return Err(Error::data("distance matrix does not match the curve count"));
    }
    let cache = DepthCache::new(curves, opts.m, cfg, seed)?;
    let mut rng = substream(seed, Role::Cluster, &[]);
    let assignment = initial_assignment(n, k, opts.init, dist, &mut rng);
    let table = cache.table(&assignment, k, None)?;
    let mut state = score(assignment, table, k, dist, opts.lambda);
    let mut beta = opts.beta0;
    let mut idle = 0;
    let mut iterations = 0;
    while idle < opts.patience && iterations < opts.max_iter {
        iterations += 1;
        let mut changed = false;
        let mut pool: Vec<usize> = (0..n).filter(|&i| state.cost[i] < opts.threshold).collect();
        pool.shuffle(&mut rng);
        while !pool.is_empty() {
            let take = pool.len().min(pool.len().div_ceil(4).max(1));
            let moved: Vec<usize> = pool.drain(..take).collect();
            let mut next = state.assignment.clone();
            for &i in &moved {
                let row = &state.table[i];
                let mut best = 0;
                for c in 1..k {
                    if row[c] > row[best] {
                        best = c;
                    }
                }
                next[i] = best;
            }
            if next == state.assignment {
                continue;
            }
            if (0..k).any(|c| !next.contains(&c)) {
                continue;
            }
            let table = cache.table(&next, k, Some((&state.assignment, &state.table)))?;
            let cand = score(next, table, k, dist, opts.lambda);
            let accept = cand.total > state.total || {
                let u: f64 = rng.random();
                u < opts.acceptance.probability(beta, state.total - cand.total)
            };
            if accept {
                state = cand;
                changed = true;
            }
        }
        beta *= 2.0;
        if changed {
            idle = 0;
        } else {
            idle += 1;
        }
    }
    Ok(Partition {
        k,
        assignment: state.assignment,
        relative_depth: state.red,
        silhouette: state.sil,
        cost: state.cost,
        total_cost: state.total,
        iterations,
        depth_table: state.table,
    })
}
