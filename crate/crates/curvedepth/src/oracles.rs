//! Closed-form reference depths for simple curve laws and brute-force
//! references for the point-depth kernel and the curve distance.

use crate::curve::{dist, Curve};
use crate::error::{Error, Result};
use crate::point_depth::{halfspace_ratio, random_direction};
use crate::rng::{substream, Role};
use std::f64::consts::{FRAC_PI_2, PI};

/// Depth of the `k`-th (1-based) of `n` equal, non-overlapping segments on a line.
pub fn segments_line(k: usize, n: usize) -> f64 {
    assert!(n >= 1 && (1..=n).contains(&k));
    if k == 1 || k == n {
        return 1.0 / n as f64;
    }
    segments_line_t((k - 1) as f64 / (n - 1) as f64, n)
}

/// Interior form of [`segments_line`] at relative rank `t` in (0, 1).
pub fn segments_line_t(t: f64, n: usize) -> f64 {
    let nf = n as f64;
    1.0 / nf - ((nf - 1.0) / nf) * ((1.0 - t) * (1.0 - t).ln() + t * t.ln())
}

/// Point depth at relative position `t` along the `k`-th of `n` segments on a line.
pub fn segments_line_point(k: usize, n: usize, t: f64) -> f64 {
    let nf = n as f64;
    if k == 1 || k == n {
        return 1.0 / nf;
    }
    let tk = (k - 1) as f64 / (n - 1) as f64;
    if t >= tk {
        (t + (nf - 1.0) * tk) / (nf * t)
    } else {
        (1.0 - t + (nf - 1.0) * (1.0 - tk)) / (nf * (1.0 - t))
    }
}

/// Depth of the horizontal unit segment at height `y` among heights uniform on [0, 1].
pub fn parallel_segment(y: f64) -> f64 {
    0.5 - (y - 0.5).abs()
}

/// Mass of `{y : u . y >= c}` under the star law (unit segments from the
/// origin in a uniform direction), for `0 <= c <= 1`.
pub fn star_tail(c: f64) -> f64 {
    if c <= 0.0 {
        return 0.5;
    }
    if c >= 1.0 {
        return 0.0;
    }
    let root = (1.0 - c * c).sqrt();
    (c.acos() - c * ((1.0 + root) / c).ln()) / PI
}

/// Minimizes `f` over `[lo, hi]`: dense scan, then golden-section refinement
/// around the best grid point.
pub fn scan_min(f: impl Fn(f64) -> f64, lo: f64, hi: f64, grid: usize) -> f64 {
    let step = (hi - lo) / grid as f64;
    let mut best = f64::INFINITY;
    let mut arg = lo;
    for i in 0..=grid {
        let a = lo + step * i as f64;
        let v = f(a);
        if v < best {
            best = v;
            arg = a;
        }
    }
    let (mut a, mut b) = ((arg - step).max(lo), (arg + step).min(hi));
    let g = 0.5 * (5f64.sqrt() - 1.0);
    let mut c = b - g * (b - a);
    let mut d = a + g * (b - a);
    let (mut fc, mut fd) = (f(c), f(d));
    for _ in 0..60 {
        if fc < fd {
            b = d;
            d = c;
            fd = fc;
            c = b - g * (b - a);
            fc = f(c);
        } else {
            a = c;
            c = d;
            fc = fd;
            d = a + g * (b - a);
            fd = f(d);
        }
    }
    best.min(fc).min(fd)
}

/// Point depth at distance `t` from the centre along a star segment:
/// the infimum over the two halfplane families tilted by `alpha`.
pub fn star_point(t: f64) -> f64 {
    if t <= 0.0 {
        return 0.5;
    }
    if t >= 1.0 {
        return 0.0;
    }
    // halfplanes away from the centre hold 1 - t of the segment
    let outward = scan_min(|a| star_tail(t * a.sin()) / (1.0 - t), 1e-12, FRAC_PI_2, 2000);
    // halfplanes towards the centre hold t of it
    let inward = scan_min(|a| (1.0 - star_tail(t * a.sin())) / t, 1e-12, FRAC_PI_2, 2000);
    0.5f64.min(outward).min(inward)
}

fn simpson(f: &impl Fn(f64) -> f64, a: f64, b: f64, fa: f64, fm: f64, fb: f64, whole: f64, tol: f64, depth: u32) -> f64 {
    let m = 0.5 * (a + b);
    let (lm, rm) = (0.5 * (a + m), 0.5 * (m + b));
    let (flm, frm) = (f(lm), f(rm));
    let left = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
    let right = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
    if depth == 0 || (left + right - whole).abs() <= 15.0 * tol {
        return left + right + (left + right - whole) / 15.0;
    }
    simpson(f, a, m, fa, flm, fm, left, tol / 2.0, depth - 1) + simpson(f, m, b, fm, frm, fb, right, tol / 2.0, depth - 1)
}

/// Adaptive Simpson quadrature.
pub fn integrate(f: impl Fn(f64) -> f64, a: f64, b: f64, tol: f64) -> f64 {
    let (fa, fb, fm) = (f(a), f(b), f(0.5 * (a + b)));
    let whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
    simpson(&f, a, b, fa, fm, fb, whole, tol, 40)
}

/// Depth of any star segment under the star law.
pub fn star_population() -> f64 {
    integrate(star_point, 0.0, 1.0, 1e-7)
}

/// Depth of the circle of radius `r` around the origin when radii are uniform on (0, 1).
pub fn circle_population(r: f64) -> f64 {
    if r <= 0.0 || r >= 1.0 {
        return 0.0;
    }
    let edge = 1.0 - r.acos() / PI + (r / PI) * ((1.0 + (1.0 - r * r).sqrt()) / r).ln();
    let log_term = |s: f64| {
        let ac = s.acos();
        (ac, ((1.0 + ac.sin()) / s).ln())
    };
    let wide = |a: f64| {
        let s = r * a.sin();
        let (ac, l) = log_term(s);
        (2.0 * PI - 2.0 * ac) / (PI + 2.0 * a) + 2.0 * s / (PI + 2.0 * a) * l
    };
    let narrow = |a: f64| {
        let s = r * a.sin();
        let (ac, l) = log_term(s);
        2.0 * ac / (PI - 2.0 * a) - 2.0 * s / (PI - 2.0 * a) * l
    };
    let lo = 1e-9;
    let hi = FRAC_PI_2 - 1e-9;
    1f64.min(edge).min(scan_min(wide, lo, hi, 10_000)).min(scan_min(narrow, lo, hi, 10_000))
}

/// Depth of the circle of radius `r` against a finite sample of concentric circles.
pub fn circle_sample(r: f64, radii: &[f64]) -> f64 {
    let n = radii.len() as f64;
    if radii.is_empty() || radii.iter().all(|&rad| rad <= r) {
        return 0.0;
    }
    // share of the circle of radius R in {y : u . y >= s}
    let cap = |s: f64, big_r: f64| if big_r > s { (s / big_r).acos() / PI } else { 0.0 };
    let narrow = |a: f64| {
        let s = r * a.sin();
        2.0 * PI / (PI - 2.0 * a) * radii.iter().map(|&rad| cap(s, rad)).sum::<f64>() / n
    };
    let wide = |a: f64| {
        let s = r * a.sin();
        2.0 * PI / (PI + 2.0 * a) * radii.iter().map(|&rad| 1.0 - cap(s, rad)).sum::<f64>() / n
    };
    let lo = 1e-9;
    1f64.min(scan_min(narrow, lo, FRAC_PI_2 - 1e-9, 10_000)).min(scan_min(wide, lo, FRAC_PI_2, 10_000))
}

fn turn(a: [f64; 2], b: [f64; 2]) -> f64 {
    let o = robust::Coord { x: 0.0, y: 0.0 };
    robust::orient2d(robust::Coord { x: a[0], y: a[1] }, robust::Coord { x: b[0], y: b[1] }, o)
}

/// Point depth in the plane by enumerating, for every boundary direction
/// through `x`, the two closed halfplanes and the open ones obtained by
/// turning the boundary slightly either way.
pub fn point_depth_bruteforce_2d(x: &[f64], mu: &[Vec<f64>], q: &[Vec<f64>], delta: f64) -> f64 {
    let rel = |p: &Vec<f64>| [(p[0] - x[0]) + 0.0, (p[1] - x[1]) + 0.0];
    let mu_v: Vec<[f64; 2]> = mu.iter().map(rel).collect();
    let q_v: Vec<[f64; 2]> = q.iter().map(rel).collect();
    let ratio = |test: &dyn Fn([f64; 2]) -> bool| {
        let mi = mu_v.iter().filter(|&&v| test(v)).count();
        let qi = q_v.iter().filter(|&&v| test(v)).count();
        halfspace_ratio(qi, mi, q_v.len(), mu_v.len(), delta)
    };
    let mut best = f64::INFINITY;
    let mut offer = |r: Option<f64>| {
        if let Some(r) = r {
            best = best.min(r);
        }
    };
    let dirs: Vec<[f64; 2]> = mu_v.iter().chain(&q_v).copied().filter(|v| v[0] != 0.0 || v[1] != 0.0).collect();
    if dirs.is_empty() {
        offer(ratio(&|v| v[0] >= 0.0));
        return best;
    }
    for &d in &dirs {
        let origin = |v: [f64; 2]| v[0] == 0.0 && v[1] == 0.0;
        let ray = |v: [f64; 2], sign: f64| !origin(v) && turn(d, v) == 0.0 && sign * (d[0] * v[0] + d[1] * v[1]) > 0.0;
        offer(ratio(&|v| turn(d, v) >= 0.0));
        offer(ratio(&|v| turn(d, v) <= 0.0));
        for side in [1.0, -1.0] {
            for sign in [1.0, -1.0] {
                offer(ratio(&|v| origin(v) || side * turn(d, v) > 0.0 || ray(v, sign)));
            }
        }
    }
    best
}

/// Upper bound on the point depth in space from the planes through `x` and
/// every pair of data points, plus `directions` random normals.
pub fn point_depth_upper_3d(x: &[f64], mu: &[Vec<f64>], q: &[Vec<f64>], delta: f64, directions: usize, seed: u64) -> f64 {
    let rel = |p: &Vec<f64>| [p[0] - x[0], p[1] - x[1], p[2] - x[2]];
    let mu_v: Vec<[f64; 3]> = mu.iter().map(rel).collect();
    let q_v: Vec<[f64; 3]> = q.iter().map(rel).collect();
    let mut best = f64::INFINITY;
    let mut try_normal = |u: [f64; 3]| {
        let dot = |v: &[f64; 3]| u[0] * v[0] + u[1] * v[1] + u[2] * v[2];
        for sign in [1.0, -1.0] {
            let mi = mu_v.iter().filter(|v| sign * dot(v) >= 0.0).count();
            let qi = q_v.iter().filter(|v| sign * dot(v) >= 0.0).count();
            if let Some(r) = halfspace_ratio(qi, mi, q_v.len(), mu_v.len(), delta) {
                best = best.min(r);
            }
        }
    };
    let all: Vec<[f64; 3]> = mu_v.iter().chain(&q_v).copied().collect();
    for i in 0..all.len() {
        for j in i + 1..all.len() {
            let (a, b) = (all[i], all[j]);
            let n = [a[1] * b[2] - a[2] * b[1], a[2] * b[0] - a[0] * b[2], a[0] * b[1] - a[1] * b[0]];
            if n.iter().any(|&c| c != 0.0) {
                try_normal(n);
            }
        }
    }
    let mut rng = substream(seed, Role::Test, &[]);
    for _ in 0..directions {
        let u = random_direction(3, &mut rng);
        try_normal([u[0], u[1], u[2]]);
    }
    best
}

/// Discrete Frechet distance between the vertex sequences by dynamic programming.
pub fn frechet_dp(a: &Curve, b: &Curve) -> Result<f64> {
    if a.dim() != b.dim() {
        return Err(Error::DimensionMismatch { expected: a.dim(), found: b.dim() });
    }
    let (n, m) = (a.n_vertices(), b.n_vertices());
    let mut f = vec![0.0f64; n * m];
    for i in 0..n {
        for j in 0..m {
            let d = dist(a.vertex(i), b.vertex(j));
            let prev = match (i, j) {
                (0, 0) => 0.0,
                (0, _) => f[j - 1],
                (_, 0) => f[(i - 1) * m],
                _ => f[(i - 1) * m + j].min(f[i * m + j - 1]).min(f[(i - 1) * m + j - 1]),
            };
            f[i * m + j] = d.max(prev);
        }
    }
    Ok(f[n * m - 1])
}
