//! Point depth: the infimum over closed halfspaces `H` through `x` of the
//! ratio `Q(H) / mu(H)` between the reference mass and the query-curve mass.
//!
//! Halfspaces whose `mu` mass does not exceed `delta` are skipped unless their
//! reference mass is zero, in which case the depth is 0.

use crate::error::{Error, Result};
use crate::rng::Stream;
use crate::sampling::PointSample;
use rand::Rng;
use rand_distr::StandardNormal;

/// Which halfspaces the infimum runs over.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Method {
    /// All closed halfspaces (dimensions 1 to 3).
    Exact,
    /// `k` random unit directions, each used with both orientations.
    Random(usize),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DepthConfig {
    pub delta: f64,
    pub method: Method,
}

/// `1 / (10 m^alpha)`.
pub fn default_delta(m: usize, alpha: f64) -> f64 {
    1.0 / (10.0 * (m as f64).powf(alpha))
}

pub const DEFAULT_ALPHA: f64 = 0.125;

impl DepthConfig {
    pub fn new(delta: f64, method: Method) -> Result<DepthConfig> {
        if !(delta > 0.0 && delta < 0.5) {
            return Err(Error::param(format!("delta must lie in (0, 1/2), got {delta}")));
        }
        if method == Method::Random(0) {
            return Err(Error::param("random method needs at least one direction"));
        }
        Ok(DepthConfig { delta, method })
    }

    /// Exact method with the default threshold for `m` points per curve.
    pub fn for_m(m: usize) -> DepthConfig {
        DepthConfig { delta: default_delta(m.max(1), DEFAULT_ALPHA), method: Method::Exact }
    }

    pub fn with_alpha(m: usize, alpha: f64, method: Method) -> Result<DepthConfig> {
        if m == 0 {
            return Err(Error::param("m must be positive"));
        }
        DepthConfig::new(default_delta(m, alpha), method)
    }
}

/// Thresholded mass ratio of a halfspace holding `q_in` of `q_total` reference
/// points and `mu_in` of `mu_total` query-curve points.
///
/// `Some(0.0)` for an empty reference side, `None` when the side is not in the
/// admissible family.
#[inline]
pub fn halfspace_ratio(q_in: usize, mu_in: usize, q_total: usize, mu_total: usize, delta: f64) -> Option<f64> {
    if q_in == 0 {
        return Some(0.0);
    }
    let mu_mass = mu_in as f64 / mu_total as f64;
    if mu_mass > delta {
        Some((q_in as f64 / q_total as f64) / mu_mass)
    } else {
        None
    }
}

/// Query-measure and reference counts packed in one word, so that adding
/// counts is one integer addition. Both stay below 2^32.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
struct Counts(u64);

impl std::ops::Add for Counts {
    type Output = Counts;
    fn add(self, o: Counts) -> Counts {
        Counts(self.0 + o.0)
    }
}

impl std::ops::Sub for Counts {
    type Output = Counts;
    fn sub(self, o: Counts) -> Counts {
        Counts(self.0 - o.0)
    }
}

impl std::ops::AddAssign for Counts {
    fn add_assign(&mut self, o: Counts) {
        self.0 += o.0;
    }
}

impl Counts {
    fn new(mu: usize, q: usize) -> Counts {
        Counts((mu as u64) << 32 | q as u64)
    }

    fn of(is_q: bool) -> Counts {
        if is_q {
            Counts(1)
        } else {
            Counts(1 << 32)
        }
    }

    fn mu(self) -> u64 {
        self.0 >> 32
    }

    fn q(self) -> u64 {
        self.0 & 0xffff_ffff
    }
}

/// Running minimum of admissible ratios.
struct Infimum {
    mu_total: usize,
    q_total: usize,
    delta: f64,
    /// Smallest admissible query count.
    min_mu: u64,
    best: f64,
    best_q: u64,
    best_mu: u64,
}

impl Infimum {
    fn new(mu_total: usize, q_total: usize, delta: f64) -> Infimum {
        let min_mu = (0..=mu_total)
            .find(|&k| halfspace_ratio(1, k, 1, mu_total, delta).is_some())
            .map_or(u64::MAX, |k| k as u64);
        Infimum { mu_total, q_total, delta, min_mu, best: f64::INFINITY, best_q: 1, best_mu: 0 }
    }

    /// Returns true once the infimum hits zero.
    #[inline]
    fn offer(&mut self, c: Counts) -> bool {
        if c.q() == 0 {
            self.best = 0.0;
            return true;
        }
        // compare q/mu exactly before paying for the division
        // counts stay below 2^32, so the products fit
        let (q, mu) = (c.q(), c.mu());
        if mu >= self.min_mu && q * self.best_mu <= self.best_q * mu {
            if let Some(r) = halfspace_ratio(q as usize, mu as usize, self.q_total, self.mu_total, self.delta) {
                self.best = self.best.min(r);
                self.best_q = q;
                self.best_mu = mu;
            }
        }
        false
    }
}

struct Group {
    x: f64,
    y: f64,
    c: Counts,
}

/// Exact sign of the turn from `a` to `b` (positive counterclockwise).
#[inline]
pub(crate) fn turn(ax: f64, ay: f64, bx: f64, by: f64) -> f64 {
    // the origin last keeps the differences exact
    let o = robust::Coord { x: 0.0, y: 0.0 };
    robust::orient2d(robust::Coord { x: ax, y: ay }, robust::Coord { x: bx, y: by }, o)
}

/// Cheap increasing function of the angle of `(x, y)` on (-pi, pi].
#[inline]
fn pseudo_angle(x: f64, y: f64) -> f64 {
    let p = y / (x.abs() + y.abs());
    if x >= 0.0 {
        p
    } else if y >= 0.0 {
        2.0 - p
    } else {
        -2.0 - p
    }
}

fn half(x: f64, y: f64) -> u8 {
    if y < 0.0 {
        0
    } else if y > 0.0 || x > 0.0 {
        1
    } else {
        2
    }
}

fn angular_cmp(a: [f64; 2], b: [f64; 2]) -> std::cmp::Ordering {
    half(a[0], a[1]).cmp(&half(b[0], b[1])).then_with(|| {
        let t = turn(a[0], a[1], b[0], b[1]);
        if t > 0.0 {
            std::cmp::Ordering::Less
        } else if t < 0.0 {
            std::cmp::Ordering::Greater
        } else {
            std::cmp::Ordering::Equal
        }
    })
}

/// Keys further apart than this are certainly in angular order.
const KEY_SLACK: f64 = 1e-14;

/// Indices of `dirs` in angular order. A quantised key packed with the index
/// does the bulk of the sorting; runs of keys that agree to within one
/// quantum are then sorted exactly.
fn angular_order(dirs: &[[f64; 2]]) -> Vec<usize> {
    const INDEX_BITS: u32 = 23;
    if dirs.len() >= 1 << INDEX_BITS {
        let mut order: Vec<usize> = (0..dirs.len()).collect();
        order.sort_unstable_by(|&a, &b| angular_cmp(dirs[a], dirs[b]));
        return order;
    }
    // the quantum is far wider than the key error
    let scale = (1u64 << (63 - INDEX_BITS - 2)) as f64;
    let mask = (1u64 << INDEX_BITS) - 1;
    let mut packed: Vec<u64> = dirs
        .iter()
        .enumerate()
        .map(|(i, d)| (((pseudo_angle(d[0], d[1]) + 2.0) * scale) as u64) << INDEX_BITS | i as u64)
        .collect();
    packed.sort_unstable();
    let mut start = 0;
    for i in 1..=packed.len() {
        if i == packed.len() || (packed[i] >> INDEX_BITS) - (packed[i - 1] >> INDEX_BITS) > 1 {
            if i - start > 1 {
                packed[start..i].sort_unstable_by(|&a, &b| angular_cmp(dirs[(a & mask) as usize], dirs[(b & mask) as usize]));
            }
            start = i;
        }
    }
    packed.iter().map(|&w| (w & mask) as usize).collect()
}

/// Minimum over the halfplanes through the origin of the plane holding `pts`.
///
/// `base` points sit at the origin and belong to every halfplane. `above` and
/// `below` are two optional groups (the two rays of a line orthogonal to the
/// plane, in the 3D use); a halfplane whose boundary meets no point may take
/// either group alone or both, a halfplane whose boundary holds points takes
/// both.
///
/// `dirs` lists the query-measure points first: those before `split`
/// belong to it, the rest to the reference.
fn planar_sweep(dirs: &[[f64; 2]], split: usize, base: Counts, above: Counts, below: Counts, inf: &mut Infimum) {
    let extras: &[Counts] = if above == Counts::default() && below == Counts::default() {
        &[Counts(0)]
    } else {
        &[Counts(above.0 + below.0), above, below]
    };
    let both = above + below;
    if dirs.is_empty() {
        for &e in extras {
            if inf.offer(base + e) {
                return;
            }
        }
        return;
    }
    let mut groups: Vec<Group> = Vec::with_capacity(dirs.len());
    let mut last_key = f64::NEG_INFINITY;
    for i in angular_order(dirs) {
        let [x, y] = dirs[i];
        let c = Counts::of(i >= split);
        let key = pseudo_angle(x, y);
        let near = (key - last_key).abs() < KEY_SLACK;
        last_key = key;
        if let Some(g) = groups.last_mut() {
            if near && turn(g.x, g.y, x, y) == 0.0 && g.x * x + g.y * y > 0.0 {
                g.c += c;
                continue;
            }
        }
        groups.push(Group { x, y, c });
    }
    if groups.len() > 1 {
        let (f, l) = (&groups[0], &groups[groups.len() - 1]);
        if turn(f.x, f.y, l.x, l.y) == 0.0 && f.x * l.x + f.y * l.y > 0.0 {
            let last = groups.pop().unwrap();
            groups[0].c += last.c;
        }
    }
    let total = groups.iter().fold(Counts::default(), |a, g| a + g.c);
    let n = groups.len();
    let mut p = 1usize;
    let mut window = Counts::default();
    for k in 0..n {
        if p < k + 1 {
            p = k + 1;
            window = Counts::default();
        }
        let (kx, ky) = (groups[k].x, groups[k].y);
        while p < k + n {
            let g = &groups[if p < n { p } else { p - n }];
            if turn(kx, ky, g.x, g.y) > 0.0 {
                window += g.c;
                p += 1;
            } else {
                break;
            }
        }
        let opp = if p < k + n {
            let g = &groups[if p < n { p } else { p - n }];
            if turn(kx, ky, g.x, g.y) == 0.0 && kx * g.x + ky * g.y < 0.0 {
                g.c
            } else {
                Counts::default()
            }
        } else {
            Counts::default()
        };
        let own = groups[k].c;
        let left = window;
        let right = total - left - own - opp;
        for side in [left, right] {
            if inf.offer(base + side + own + opp + both) {
                return;
            }
            for (r, ray) in [own, opp].into_iter().enumerate() {
                for (j, &e) in extras.iter().enumerate() {
                    // with no opposite group this repeats the closed side
                    if r == 0 && j == 0 && opp == Counts::default() {
                        continue;
                    }
                    if inf.offer(base + side + ray + e) {
                        return;
                    }
                }
            }
        }
        if p > k + 1 {
            window = window - groups[if k + 1 < n { k + 1 } else { 0 }].c;
        }
    }
}

fn check_sizes(mu: usize, q: usize) -> Result<()> {
    if mu.max(q) >= 1 << 32 {
        return Err(Error::param("point samples must hold fewer than 2^32 points"));
    }
    Ok(())
}

fn check_inputs(x: &[f64], mu: &PointSample, q: &PointSample, dim: usize) -> Result<()> {
    if mu.is_empty() || q.is_empty() {
        return Err(Error::param("point samples must be nonempty"));
    }
    check_sizes(mu.len(), q.len())?;
    for found in [x.len(), mu.dim(), q.dim()] {
        if found != dim {
            return Err(Error::DimensionMismatch { expected: dim, found });
        }
    }
    Ok(())
}

/// Exact point depth in the plane.
pub fn point_depth_exact_2d(x: &[f64], mu: &PointSample, q: &PointSample, cfg: &DepthConfig) -> Result<f64> {
    check_inputs(x, mu, q, 2)?;
    Ok(exact_2d(x, mu.coords(), q.coords(), cfg.delta))
}

pub(crate) fn exact_2d(x: &[f64], mu: &[f64], q: &[f64], delta: f64) -> f64 {
    let (nm, nq) = (mu.len() / 2, q.len() / 2);
    let mut inf = Infimum::new(nm, nq, delta);
    let mut base = Counts::default();
    let mut dirs = Vec::with_capacity(nm + nq);
    let mut split = 0;
    for (coords, is_q) in [(mu, false), (q, true)] {
        for p in coords.chunks_exact(2) {
            // adding 0.0 turns -0.0 into +0.0 so the angle keys agree with the predicates
            let dx = (p[0] - x[0]) + 0.0;
            let dy = (p[1] - x[1]) + 0.0;
            if dx == 0.0 && dy == 0.0 {
                base += Counts::of(is_q);
            } else {
                dirs.push([dx, dy]);
            }
        }
        if !is_q {
            split = dirs.len();
        }
    }
    planar_sweep(&dirs, split, base, Counts::default(), Counts::default(), &mut inf);
    inf.best
}

/// Exact point depth in space: for each line through `x` and a data point,
/// the halfspaces whose boundary contains that line or turns slightly off it
/// are enumerated by a planar sweep of the projections.
pub fn point_depth_exact_3d(x: &[f64], mu: &PointSample, q: &PointSample, cfg: &DepthConfig) -> Result<f64> {
    check_inputs(x, mu, q, 3)?;
    Ok(exact_3d(x, mu.coords(), q.coords(), cfg.delta))
}

fn cross3(a: &[f64; 3], b: &[f64; 3]) -> [f64; 3] {
    [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]]
}

fn dot3(a: &[f64; 3], b: &[f64; 3]) -> f64 {
    a[0] * b[0] + a[1] * b[1] + a[2] * b[2]
}

pub(crate) fn exact_3d(x: &[f64], mu: &[f64], q: &[f64], delta: f64) -> f64 {
    let (nm, nq) = (mu.len() / 3, q.len() / 3);
    let mut inf = Infimum::new(nm, nq, delta);
    let mut base = Counts::default();
    let mut rel: Vec<([f64; 3], bool)> = Vec::with_capacity(nm + nq);
    for (coords, is_q) in [(mu, false), (q, true)] {
        for p in coords.chunks_exact(3) {
            let v = [(p[0] - x[0]) + 0.0, (p[1] - x[1]) + 0.0, (p[2] - x[2]) + 0.0];
            if v == [0.0; 3] {
                base += Counts::of(is_q);
            } else {
                rel.push((v, is_q));
            }
        }
    }
    if rel.is_empty() {
        inf.offer(base);
        return inf.best;
    }
    let mut done = vec![false; rel.len()];
    let mut proj = Vec::with_capacity(rel.len());
    for i in 0..rel.len() {
        if done[i] {
            continue;
        }
        done[i] = true;
        let z = rel[i].0;
        // the coordinate axis least aligned with z gives a well-conditioned basis
        let k = (0..3).min_by(|&a, &b| z[a].abs().total_cmp(&z[b].abs())).unwrap();
        let mut e = [0.0; 3];
        e[k] = 1.0;
        let a1 = cross3(&e, &z);
        let a2 = cross3(&z, &a1);
        let mut above = Counts::of(rel[i].1);
        let mut below = Counts::default();
        proj.clear();
        // rel holds the query-measure points first, and so does proj
        let mut split = 0;
        for (j, (v, is_q)) in rel.iter().enumerate() {
            if j == i {
                continue;
            }
            if cross3(&z, v) == [0.0; 3] {
                done[j] = true;
                if dot3(&z, v) > 0.0 {
                    above += Counts::of(*is_q);
                } else {
                    below += Counts::of(*is_q);
                }
                continue;
            }
            let px = dot3(&a1, v) + 0.0;
            let py = dot3(&a2, v) + 0.0;
            if px == 0.0 && py == 0.0 {
                // numerically on the line: lies on every boundary through it
                if dot3(&z, v) > 0.0 {
                    above += Counts::of(*is_q);
                } else {
                    below += Counts::of(*is_q);
                }
            } else {
                proj.push([px, py]);
                if !is_q {
                    split = proj.len();
                }
            }
        }
        planar_sweep(&proj, split, base, above, below, &mut inf);
        if inf.best == 0.0 {
            return 0.0;
        }
    }
    inf.best
}

/// Point depth on the line: the two closed halflines at `x`.
pub fn point_depth_1d(x: f64, mu: &PointSample, q: &PointSample, cfg: &DepthConfig) -> Result<f64> {
    check_inputs(&[x], mu, q, 1)?;
    Ok(exact_1d(x, mu.coords(), q.coords(), cfg.delta))
}

pub(crate) fn exact_1d(x: f64, mu: &[f64], q: &[f64], delta: f64) -> f64 {
    let mut inf = Infimum::new(mu.len(), q.len(), delta);
    let side = |pts: &[f64], right: bool| pts.iter().filter(|&&p| if right { p >= x } else { p <= x }).count();
    for right in [true, false] {
        if inf.offer(Counts::new(side(mu, right), side(q, right))) {
            break;
        }
    }
    inf.best
}

/// Minimum over `k` random directions, each with both orientations.
pub fn point_depth_random(
    x: &[f64],
    mu: &PointSample,
    q: &PointSample,
    k: usize,
    delta: f64,
    rng: &mut Stream,
) -> Result<f64> {
    check_inputs(x, mu, q, x.len())?;
    if k == 0 {
        return Err(Error::param("random method needs at least one direction"));
    }
    Ok(random_dirs(x, mu.coords(), q.coords(), k, delta, rng))
}

pub(crate) fn random_direction(d: usize, rng: &mut Stream) -> Vec<f64> {
    loop {
        let u: Vec<f64> = (0..d).map(|_| rng.sample::<f64, _>(StandardNormal)).collect();
        let norm = u.iter().map(|v| v * v).sum::<f64>().sqrt();
        if norm > 1e-12 {
            return u.into_iter().map(|v| v / norm).collect();
        }
    }
}

pub(crate) fn random_dirs(x: &[f64], mu: &[f64], q: &[f64], k: usize, delta: f64, rng: &mut Stream) -> f64 {
    let d = x.len();
    let mut inf = Infimum::new(mu.len() / d, q.len() / d, delta);
    let xs: Vec<f64> = x.to_vec();
    for _ in 0..k {
        let u = random_direction(d, rng);
        let offset: f64 = u.iter().zip(&xs).map(|(a, b)| a * b).sum();
        let mut pos = Counts::default();
        let mut neg = Counts::default();
        for (coords, is_q) in [(mu, false), (q, true)] {
            for p in coords.chunks_exact(d) {
                let s: f64 = u.iter().zip(p).map(|(a, b)| a * b).sum::<f64>() - offset;
                if s >= 0.0 {
                    pos += Counts::of(is_q);
                }
                if s <= 0.0 {
                    neg += Counts::of(is_q);
                }
            }
        }
        if inf.offer(pos) || inf.offer(neg) {
            break;
        }
    }
    inf.best
}

/// Dispatches on dimension and method.
pub fn point_depth(x: &[f64], mu: &PointSample, q: &PointSample, cfg: &DepthConfig, rng: &mut Stream) -> Result<f64> {
    check_inputs(x, mu, q, x.len())?;
    evaluate(x, mu.coords(), q.coords(), cfg, rng)
}

pub(crate) fn evaluate(x: &[f64], mu: &[f64], q: &[f64], cfg: &DepthConfig, rng: &mut Stream) -> Result<f64> {
    check_sizes(mu.len() / x.len().max(1), q.len() / x.len().max(1))?;
    match (cfg.method, x.len()) {
        (Method::Exact, 1) => Ok(exact_1d(x[0], mu, q, cfg.delta)),
        (Method::Exact, 2) => Ok(exact_2d(x, mu, q, cfg.delta)),
        (Method::Exact, 3) => Ok(exact_3d(x, mu, q, cfg.delta)),
        (Method::Exact, d) => Err(Error::Unsupported(format!(
            "exact point depth is available for dimensions 1 to 3, not {d}; use the random method"
        ))),
        (Method::Random(k), _) => Ok(random_dirs(x, mu, q, k, cfg.delta, rng)),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::{substream, Role};

    fn ps(dim: usize, c: &[f64]) -> PointSample {
        PointSample::from_coords(dim, c.to_vec()).unwrap()
    }

    fn cfg(delta: f64) -> DepthConfig {
        DepthConfig::new(delta, Method::Exact).unwrap()
    }

    #[test]
    fn ratio_conventions() {
        assert_eq!(halfspace_ratio(0, 0, 5, 5, 0.1), Some(0.0));
        assert_eq!(halfspace_ratio(3, 0, 5, 5, 0.1), None);
        assert_eq!(halfspace_ratio(1, 1, 2, 4, 0.3), None);
        assert_eq!(halfspace_ratio(1, 2, 2, 4, 0.3), Some(1.0));
    }

    #[test]
    fn config_validation() {
        assert!(DepthConfig::new(0.5, Method::Exact).is_err());
        assert!(DepthConfig::new(0.0, Method::Exact).is_err());
        assert!(DepthConfig::new(0.1, Method::Random(0)).is_err());
        let c = DepthConfig::for_m(500);
        assert!((c.delta - 1.0 / (10.0 * 500f64.powf(0.125))).abs() < 1e-15);
    }

    #[test]
    fn cross_configuration() {
        let q = ps(2, &[1., 0., -1., 0., 0., 1., 0., -1.]);
        let mu = ps(2, &[0.1, 0., -0.1, 0., 0., 0.1, 0., -0.1]);
        let v = point_depth_exact_2d(&[0.0, 0.0], &mu, &q, &cfg(0.2)).unwrap();
        // the closed halfplane through two opposite points keeps 3 of 4 of each
        // kind; an open-arc side keeps 2 of 4 of each
        assert_eq!(v, 1.0);
    }

    #[test]
    fn outside_hull_is_zero() {
        let q = ps(2, &[0., 0., 1., 0., 0., 1.]);
        let mu = ps(2, &[5., 5.]);
        assert_eq!(point_depth_exact_2d(&[5.0, 5.0], &mu, &q, &cfg(0.1)).unwrap(), 0.0);
        let q3 = ps(3, &[0., 0., 0., 1., 0., 0., 0., 1., 0., 0., 0., 1.]);
        let mu3 = ps(3, &[2., 2., 2.]);
        assert_eq!(point_depth_exact_3d(&[2.0, 2.0, 2.0], &mu3, &q3, &cfg(0.1)).unwrap(), 0.0);
    }

    #[test]
    fn one_dimensional_cases() {
        let q = ps(1, &[-1.0, 1.0, 2.0]);
        let mu = ps(1, &[0.0]);
        let v = point_depth_1d(0.0, &mu, &q, &cfg(0.1)).unwrap();
        assert!((v - 1.0 / 3.0).abs() < 1e-15);
        assert_eq!(point_depth_1d(-5.0, &ps(1, &[-5.0]), &q, &cfg(0.1)).unwrap(), 0.0);
        let sym = ps(1, &[-2.0, -1.0, 1.0, 2.0]);
        let v = point_depth_1d(0.0, &sym, &sym, &cfg(0.1)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn same_points_bounded_by_one() {
        let pts = ps(2, &[0., 0., 1., 0., 0., 1., 1., 1., 0.5, 0.4, 0.2, 0.7]);
        let v = point_depth_exact_2d(&[0.5, 0.4], &pts, &pts, &cfg(0.1)).unwrap();
        assert!(v <= 1.0 && v > 0.0, "{v}");
    }

    #[test]
    fn singleton_at_x() {
        let q = ps(2, &[1.0, 1.0]);
        let v = point_depth_exact_2d(&[1.0, 1.0], &q, &q, &cfg(0.1)).unwrap();
        assert_eq!(v, 1.0);
    }

    #[test]
    fn planar_points_in_space() {
        let q2 = [0.3, 0.1, -0.7, 0.4, 0.2, -0.9, 0.8, 0.6, -0.2, -0.3, 0.5, 0.05];
        let mu2 = [0.1, 0.0, 0.0, 0.2, -0.15, -0.1, 0.05, 0.3];
        let lift = |c: &[f64]| -> Vec<f64> { c.chunks(2).flat_map(|p| [p[0], p[1], 0.0]).collect() };
        let c = cfg(0.1);
        let v2 = point_depth_exact_2d(&[0.0, 0.05], &ps(2, &mu2), &ps(2, &q2), &c).unwrap();
        let v3 = point_depth_exact_3d(&[0.0, 0.05, 0.0], &ps(3, &lift(&mu2)), &ps(3, &lift(&q2)), &c).unwrap();
        assert!((v2 - v3).abs() < 1e-12, "{v2} {v3}");
    }

    #[test]
    fn random_never_below_exact() {
        let mut rng = substream(5, Role::Test, &[]);
        let q: Vec<f64> = (0..60).map(|_| rng.random::<f64>() * 2.0 - 1.0).collect();
        let mu: Vec<f64> = (0..20).map(|_| rng.random::<f64>() * 0.5 - 0.25).collect();
        let (q, mu) = (ps(2, &q), ps(2, &mu));
        let exact = point_depth_exact_2d(&[0.0, 0.0], &mu, &q, &cfg(0.1)).unwrap();
        for k in [10, 100, 1000, 10_000] {
            let mut r = substream(9, Role::Directions, &[]);
            let v = point_depth_random(&[0.0, 0.0], &mu, &q, k, 0.1, &mut r).unwrap();
            assert!(v >= exact, "{v} < {exact}");
            if k == 10_000 {
                assert!(v - exact < 0.05, "{v} vs {exact}");
            }
        }
    }

    #[test]
    fn errors() {
        let q = ps(2, &[0., 0.]);
        let empty = PointSample::from_coords(2, vec![]).unwrap();
        assert!(point_depth_exact_2d(&[0.0, 0.0], &empty, &q, &cfg(0.1)).is_err());
        assert!(point_depth_exact_2d(&[0.0], &q, &q, &cfg(0.1)).is_err());
        let mut rng = substream(1, Role::Test, &[]);
        let q4 = ps(4, &[0., 0., 0., 0.]);
        assert!(point_depth(&[0.0; 4], &q4, &q4, &cfg(0.1), &mut rng).is_err());
        let r = DepthConfig::new(0.1, Method::Random(5)).unwrap();
        assert_eq!(point_depth(&[0.0; 4], &q4, &q4, &r, &mut rng).unwrap(), 1.0);
    }
}
