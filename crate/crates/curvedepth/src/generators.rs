//! Seeded simulation schemes.

use crate::curve::{rotation_2d, Curve};
use crate::error::{Error, Result};
use crate::rng::{substream, Role, Stream};
use rand::Rng;
use rand_distr::{Distribution, Normal, StandardNormal};
use std::f64::consts::{PI, TAU};
use std::str::FromStr;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Scheme {
    /// Segments on the real line with random lengths and gaps (1D curves).
    SegmentsLine,
    /// Horizontal unit segments at uniform heights.
    ParallelSegments,
    /// Unit segments from the origin in uniform directions.
    Star,
    /// Circles around the origin with uniform radii.
    Circles,
    /// Graphs of `a1 sin(w x) + a2 cos(w x)` over random subintervals of [0, 2 pi].
    Claeskens,
    /// Noisy unimodal graphs with a stationary Gaussian perturbation.
    Cuevas,
    /// Claeskens-type curves plus two shifted and one reshaped outlier.
    OutlierA,
    /// Cuevas-type curves plus shift, isolated, persistent and negative-peak outliers.
    OutlierB,
    /// Randomly shifted, rotated and trimmed S shapes.
    SLetters,
}

impl Scheme {
    pub const ALL: [Scheme; 9] = [
        Scheme::SegmentsLine,
        Scheme::ParallelSegments,
        Scheme::Star,
        Scheme::Circles,
        Scheme::Claeskens,
        Scheme::Cuevas,
        Scheme::OutlierA,
        Scheme::OutlierB,
        Scheme::SLetters,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Scheme::SegmentsLine => "segments-line",
            Scheme::ParallelSegments => "parallel-segments",
            Scheme::Star => "star",
            Scheme::Circles => "circles",
            Scheme::Claeskens => "claeskens",
            Scheme::Cuevas => "cuevas",
            Scheme::OutlierA => "outlierA",
            Scheme::OutlierB => "outlierB",
            Scheme::SLetters => "s-letters",
        }
    }
}

impl FromStr for Scheme {
    type Err = Error;
    fn from_str(s: &str) -> Result<Scheme> {
        Scheme::ALL
            .into_iter()
            .find(|sc| sc.name().eq_ignore_ascii_case(s))
            .ok_or_else(|| Error::param(format!("unknown scheme {s:?}")))
    }
}

/// Randomization of the S-letter scheme (standard deviations).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SLetterParams {
    pub shift: f64,
    pub angle: f64,
    /// Perturbation of both ends of the parameter range.
    pub trim: f64,
}

impl Default for SLetterParams {
    fn default() -> Self {
        SLetterParams { shift: 0.3, angle: 0.2, trim: 0.3 }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct SchemeSpec {
    pub scheme: Scheme,
    /// Number of curves; for the outlier schemes, the number of regular curves.
    pub n: usize,
    /// Vertices per circle.
    pub circle_vertices: usize,
    /// Grid points per graph-type curve.
    pub grid: usize,
    /// Angular frequency `w` of the Claeskens-type graphs.
    pub frequency: f64,
    pub s_letters: SLetterParams,
}

/// Default angular frequency of the Claeskens-type graphs: one period over [0, 2 pi].
pub const CLAESKENS_FREQUENCY: f64 = 1.0;

impl SchemeSpec {
    pub fn new(scheme: Scheme, n: usize) -> SchemeSpec {
        SchemeSpec {
            scheme,
            n,
            circle_vertices: 256,
            grid: 200,
            frequency: CLAESKENS_FREQUENCY,
            s_letters: SLetterParams::default(),
        }
    }
}

/// Curves of `n` draws from `scheme` with default parameters.
pub fn generate(scheme: Scheme, n: usize, seed: u64) -> Result<Vec<Curve>> {
    generate_spec(&SchemeSpec::new(scheme, n), seed)
}

pub fn generate_spec(spec: &SchemeSpec, seed: u64) -> Result<Vec<Curve>> {
    if spec.n == 0 {
        return Err(Error::param("n must be positive"));
    }
    if !(spec.frequency.is_finite() && spec.frequency > 0.0) {
        return Err(Error::param("frequency must be positive"));
    }
    if spec.circle_vertices < 3 || spec.grid < 2 {
        return Err(Error::param("too few vertices per curve"));
    }
    let mut rng = substream(seed, Role::Generator, &[spec.scheme as u64]);
    let n = spec.n;
    let id = |i: usize| format!("{}-{i}", spec.scheme.name());
    let mut out = Vec::with_capacity(n + 4);
    match spec.scheme {
        Scheme::SegmentsLine => {
            let mut at = 0.0;
            for i in 0..n {
                let len = rng.random_range(0.5..1.5);
                out.push(Curve::new(id(i), 1, vec![at, at + len])?);
                at += len + rng.random_range(0.1..1.0);
            }
        }
        Scheme::ParallelSegments => {
            for i in 0..n {
                out.push(parallel_segment(id(i), rng.random()));
            }
        }
        Scheme::Star => {
            for i in 0..n {
                out.push(star_segment(id(i), rng.random_range(0.0..TAU)));
            }
        }
        Scheme::Circles => {
            for i in 0..n {
                out.push(circle(id(i), rng.random(), spec.circle_vertices));
            }
        }
        Scheme::Claeskens => {
            for i in 0..n {
                out.push(claeskens_draw(id(i), spec.grid, spec.frequency, &mut rng));
            }
        }
        Scheme::Cuevas => {
            for i in 0..n {
                out.push(cuevas_draw(id(i), spec.grid, &mut rng));
            }
        }
        Scheme::OutlierA => {
            for i in 0..n {
                out.push(claeskens_draw(id(i), spec.grid, spec.frequency, &mut rng));
            }
            let (lo, hi) = (PI / 3.0, 5.0 * PI / 3.0);
            out.push(graph("outlier-red", lo, hi, spec.grid, |x| 0.25 + 0.1 * (PI * x).sin()));
            out.push(graph("outlier-green", lo, hi, spec.grid, |x| -0.25 + 0.1 * (PI * x).cos()));
            out.push(graph("outlier-blue", lo, hi, spec.grid, |x| 0.3 * x.sin()));
        }
        Scheme::OutlierB => {
            for i in 0..n {
                out.push(cuevas_draw(id(i), spec.grid, &mut rng));
            }
            let (lo, hi) = (0.05, 0.95);
            let base = |x: f64| cuevas_shape(x, 0.25);
            let bump = |x: f64, at: f64, height: f64| height * (1.0 - ((x - at) / 0.03).abs()).max(0.0);
            let mut noisy = |name: &str, f: &dyn Fn(f64) -> f64| {
                let noise = gaussian_path(spec.grid, (hi - lo) / (spec.grid - 1) as f64, &mut rng);
                let pts = (0..spec.grid)
                    .map(|j| {
                        let x = lo + (hi - lo) * j as f64 / (spec.grid - 1) as f64;
                        vec![x, f(x) + noise[j]]
                    })
                    .collect::<Vec<_>>();
                Curve::from_points(name, &pts)
            };
            out.push(noisy("outlier-shift", &|x| base(x) + 2.0)?);
            out.push(noisy("outlier-isolated", &|x| base(x) + bump(x, 0.7, 8.0))?);
            out.push(noisy("outlier-persistent", &|x| 1.4 * base(x))?);
            out.push(noisy("outlier-negative-peak", &|x| base(x) + bump(x, 0.3, -8.0))?);
        }
        Scheme::SLetters => {
            let p = spec.s_letters;
            for i in 0..n {
                out.push(s_letter_draw(id(i), spec.grid, &p, &mut rng)?);
            }
        }
    }
    Ok(out)
}

pub fn parallel_segment(id: impl Into<String>, y: f64) -> Curve {
    Curve::new(id, 2, vec![0.0, y, 1.0, y]).expect("finite segment")
}

pub fn star_segment(id: impl Into<String>, theta: f64) -> Curve {
    Curve::new(id, 2, vec![0.0, 0.0, theta.cos(), theta.sin()]).expect("finite segment")
}

/// Closed polygon with `vertices` corners on the circle of radius `r`.
pub fn circle(id: impl Into<String>, r: f64, vertices: usize) -> Curve {
    let mut c = Vec::with_capacity(2 * (vertices + 1));
    for j in 0..=vertices {
        let a = TAU * (j % vertices) as f64 / vertices as f64;
        c.push(r * a.cos());
        c.push(r * a.sin());
    }
    Curve::new(id, 2, c).expect("finite circle")
}

fn graph(id: &str, lo: f64, hi: f64, grid: usize, f: impl Fn(f64) -> f64) -> Curve {
    let pts: Vec<Vec<f64>> = (0..grid)
        .map(|j| {
            let x = lo + (hi - lo) * j as f64 / (grid - 1) as f64;
            vec![x, f(x)]
        })
        .collect();
    Curve::from_points(id, &pts).expect("finite graph")
}

fn claeskens_draw(id: String, grid: usize, w: f64, rng: &mut Stream) -> Curve {
    let a1 = rng.random_range(0.0..0.05);
    let a2 = rng.random_range(0.0..0.05);
    let lo = rng.random_range(0.0..TAU / 3.0);
    let hi = rng.random_range(2.0 * TAU / 3.0..TAU);
    graph(&id, lo, hi, grid, |x| a1 * (w * x).sin() + a2 * (w * x).cos())
}

/// Mean curve of the Claeskens scheme at the default frequency, over the mean interval.
pub fn claeskens_mean(grid: usize) -> Curve {
    claeskens_mean_with(grid, CLAESKENS_FREQUENCY)
}

pub fn claeskens_mean_with(grid: usize, w: f64) -> Curve {
    graph("mean", PI / 3.0, 5.0 * PI / 3.0, grid, |x| 0.025 * ((w * x).sin() + (w * x).cos()))
}

fn cuevas_shape(x: f64, w: f64) -> f64 {
    30.0 * (1.0 - x).powf(1.0 + w) * x.powf(1.5 - w)
}

/// Zero-mean stationary Gaussian path with covariance `0.2 exp(-|t| / 0.3)`
/// on a grid of spacing `step`.
pub fn gaussian_path(len: usize, step: f64, rng: &mut Stream) -> Vec<f64> {
    let var: f64 = 0.2;
    let rho = (-step / 0.3).exp();
    let innov = (var * (1.0 - rho * rho)).sqrt();
    let mut out = Vec::with_capacity(len);
    let mut u = var.sqrt() * rng.sample::<f64, _>(StandardNormal);
    for _ in 0..len {
        out.push(u);
        u = rho * u + innov * rng.sample::<f64, _>(StandardNormal);
    }
    out
}

fn cuevas_draw(id: String, grid: usize, rng: &mut Stream) -> Curve {
    let w = rng.random_range(0.0..0.5);
    let lo = rng.random_range(0.0..0.1);
    let hi = rng.random_range(0.9..1.0);
    let noise = gaussian_path(grid, (hi - lo) / (grid - 1) as f64, rng);
    let pts: Vec<Vec<f64>> = (0..grid)
        .map(|j| {
            let x = lo + (hi - lo) * j as f64 / (grid - 1) as f64;
            vec![x, cuevas_shape(x, w) + noise[j]]
        })
        .collect();
    Curve::from_points(id, &pts).expect("finite graph")
}

/// Mean curve of the Cuevas scheme (the shape averaged over its exponent).
pub fn cuevas_mean(grid: usize) -> Curve {
    graph("mean", 0.05, 0.95, grid, |t| {
        15.0 * (1.0 - t) * t * ((1.0 - t).sqrt() - t.sqrt()) / ((1.0 - t).ln() - t.ln())
    })
}

/// Point of the ideal S shape at parameter `t` in `[pi/2, 11 pi/6]`.
pub fn s_letter_point(t: f64) -> [f64; 2] {
    if t < 1.5 * PI {
        [-t.cos(), t.sin() + 1.0]
    } else {
        let u = 3.0 * t - 3.0 * PI;
        [-u.cos(), -(u.sin() + 1.0)]
    }
}

/// The ideal S shape.
pub fn s_letter_ideal(grid: usize) -> Curve {
    s_letter(String::from("ideal"), grid, 0.0, 0.0, 0.0, [0.0, 0.0])
}

fn s_letter(id: String, grid: usize, start: f64, end: f64, angle: f64, shift: [f64; 2]) -> Curve {
    let (t0, t1) = (0.5 * PI + start, 11.0 * PI / 6.0 + end);
    let rot = rotation_2d(angle);
    let pts: Vec<Vec<f64>> = (0..grid)
        .map(|j| {
            let t = t0 + (t1 - t0) * j as f64 / (grid - 1) as f64;
            let p = s_letter_point(t);
            vec![rot[0] * p[0] + rot[1] * p[1] + shift[0], rot[2] * p[0] + rot[3] * p[1] + shift[1]]
        })
        .collect();
    Curve::from_points(id, &pts).expect("finite S")
}

fn s_letter_draw(id: String, grid: usize, p: &SLetterParams, rng: &mut Stream) -> Result<Curve> {
    let normal = |sd: f64| Normal::new(0.0, sd).map_err(|e| Error::param(e.to_string()));
    let (shift, angle, trim) = (normal(p.shift)?, normal(p.angle)?, normal(p.trim)?);
    let span = 4.0 * PI / 3.0;
    // keep at least a quarter of the parameter range
    let start = trim.sample(rng).clamp(-0.5, 0.375 * span);
    let end = trim.sample(rng).clamp(-0.375 * span, 0.5);
    let a = angle.sample(rng);
    let s = [shift.sample(rng), shift.sample(rng)];
    Ok(s_letter(id, grid, start, end, a, s))
}
