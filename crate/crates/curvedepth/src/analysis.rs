//! DD-plots, a linear rule in DD-space, a depth-based rank-sum test and
//! depth-ranked outlier groups.

use crate::curve::Curve;
use crate::depth::{curve_depth_against, point_depths, query_samples, DepthReport};
use crate::error::{Error, Result};
use crate::point_depth::DepthConfig;
use crate::rng::{ids_key, mix, str_key};
use crate::sampling::{build_reference, check_dims, ReferenceMeasure};
use statrs::function::erf::erfc;

#[derive(Debug, Clone, PartialEq)]
pub struct DDPoint {
    pub id: String,
    pub label: u8,
    /// Depth with respect to sample 0.
    pub d0: f64,
    /// Depth with respect to sample 1.
    pub d1: f64,
}

fn sample_reference(sample: &[Curve], m: usize, seed: u64) -> Result<ReferenceMeasure> {
    let key = ids_key(sample.iter().map(|c| c.id()));
    build_reference(sample, m, mix(seed, &[key]))
}

/// Scores every curve of both samples against both samples.
///
/// Each reference is seeded from its own list of ids and each query from its
/// id, so swapping the samples swaps the two coordinates exactly.
pub fn dd_plot(sample0: &[Curve], sample1: &[Curve], m: usize, cfg: &DepthConfig, seed: u64) -> Result<Vec<DDPoint>> {
    if sample0.is_empty() || sample1.is_empty() {
        return Err(Error::param("both samples must be nonempty"));
    }
    if m == 0 {
        return Err(Error::param("m must be positive"));
    }
    let dim = check_dims(sample0)?;
    let other = check_dims(sample1)?;
    if other != dim {
        return Err(Error::DimensionMismatch { expected: dim, found: other });
    }
    let r0 = sample_reference(sample0, m, seed)?;
    let r1 = sample_reference(sample1, m, seed)?;
    let mut out = Vec::with_capacity(sample0.len() + sample1.len());
    for (label, sample) in [(0u8, sample0), (1u8, sample1)] {
        for c in sample {
            let (y, z) = query_samples(c, m, seed);
            let key = str_key(c.id());
            let mean = |q| -> Result<f64> {
                let d = point_depths(&y, &z, q, cfg, seed, key)?;
                Ok(d.iter().sum::<f64>() / d.len() as f64)
            };
            out.push(DDPoint { id: c.id().to_string(), label, d0: mean(r0.pooled())?, d1: mean(r1.pooled())? });
        }
    }
    Ok(out)
}

/// Halfplane rule in DD-space: points with `normal · (d0, d1) > offset`
/// get `above`, the rest the other label.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearRule {
    pub normal: [f64; 2],
    pub offset: f64,
    pub above: u8,
    pub training_errors: usize,
    /// Half the gap between the projections on either side of the cut.
    pub margin: f64,
}

impl LinearRule {
    pub fn classify(&self, d0: f64, d1: f64) -> u8 {
        if self.normal[0] * d0 + self.normal[1] * d1 > self.offset {
            self.above
        } else {
            1 - self.above
        }
    }
}

/// Exhaustive search over cut directions and thresholds; fewest training
/// errors first, then largest margin.
pub fn dd_linear_classifier(points: &[DDPoint]) -> Result<LinearRule> {
    if points.is_empty() {
        return Err(Error::param("no points to classify"));
    }
    if points.iter().any(|p| p.label > 1) {
        return Err(Error::data("labels must be 0 or 1"));
    }
    let n = points.len();
    let ones = points.iter().filter(|p| p.label == 1).count();
    let majority = u8::from(ones * 2 > n);
    let mut best = LinearRule {
        normal: [0.0, 0.0],
        offset: -1.0,
        above: majority,
        training_errors: ones.min(n - ones),
        margin: 0.0,
    };

    let mut angles = vec![0.0, std::f64::consts::FRAC_PI_2];
    for i in 0..n {
        for j in i + 1..n {
            let (dx, dy) = (points[j].d0 - points[i].d0, points[j].d1 - points[i].d1);
            if dx != 0.0 || dy != 0.0 {
                angles.push((dx.atan2(-dy)).rem_euclid(std::f64::consts::PI));
            }
        }
    }
    angles.sort_by(f64::total_cmp);
    angles.dedup();
    let mut all = angles.clone();
    for w in angles.windows(2) {
        all.push(0.5 * (w[0] + w[1]));
    }
    if let (Some(&first), Some(&last)) = (angles.first(), angles.last()) {
        all.push(0.5 * (last + first + std::f64::consts::PI));
    }

    let mut proj: Vec<(f64, u8)> = Vec::with_capacity(n);
    for theta in all {
        let normal = [theta.cos(), theta.sin()];
        proj.clear();
        proj.extend(points.iter().map(|p| (normal[0] * p.d0 + normal[1] * p.d1, p.label)));
        proj.sort_by(|a, b| a.0.total_cmp(&b.0));
        // ones_below counts label-1 points at or below the current cut
        let mut ones_below = 0;
        let mut k = 0;
        while k < n {
            let v = proj[k].0;
            while k < n && proj[k].0 == v {
                ones_below += usize::from(proj[k].1 == 1);
                k += 1;
            }
            if k == n {
                break;
            }
            let below = k;
            let zeros_below = below - ones_below;
            let ones_above = ones - ones_below;
            let zeros_above = (n - below) - ones_above;
            let margin = 0.5 * (proj[k].0 - v);
            let offset = 0.5 * (proj[k].0 + v);
            for (above, errors) in [(1u8, zeros_above + ones_below), (0u8, ones_above + zeros_below)] {
                if errors < best.training_errors || (errors == best.training_errors && margin > best.margin) {
                    best = LinearRule { normal, offset, above, training_errors: errors, margin };
                }
            }
        }
    }
    Ok(best)
}

#[derive(Debug, Clone, PartialEq)]
pub struct WilcoxonResult {
    /// Midrank sum of the first group.
    pub w: f64,
    pub z: f64,
    /// Two-sided normal p-value.
    pub p: f64,
    pub depths0: Vec<f64>,
    pub depths1: Vec<f64>,
}

/// Rank-sum test on depths of two groups with respect to a reference sample.
pub fn wilcoxon_depth_test(
    reference: &[Curve],
    s0: &[Curve],
    s1: &[Curve],
    m: usize,
    cfg: &DepthConfig,
    seed: u64,
) -> Result<WilcoxonResult> {
    if s0.is_empty() || s1.is_empty() {
        return Err(Error::param("both groups must be nonempty"));
    }
    let r = build_reference(reference, m, seed)?;
    let depth = |c: &Curve| curve_depth_against(c, &r, cfg, seed).map(|d| d.depth);
    let depths0 = s0.iter().map(depth).collect::<Result<Vec<_>>>()?;
    let depths1 = s1.iter().map(depth).collect::<Result<Vec<_>>>()?;
    let (w, z, p) = rank_sum(&depths0, &depths1)?;
    Ok(WilcoxonResult { w, z, p, depths0, depths1 })
}

/// Midrank sum of `a` in the pooled sample, its tie-corrected z score and
/// two-sided p-value.
pub fn rank_sum(a: &[f64], b: &[f64]) -> Result<(f64, f64, f64)> {
    if a.is_empty() || b.is_empty() {
        return Err(Error::param("both groups must be nonempty"));
    }
    if a.iter().chain(b).any(|v| v.is_nan()) {
        return Err(Error::Numeric("NaN in rank test input".into()));
    }
    let (n0, n1) = (a.len() as f64, b.len() as f64);
    let total = n0 + n1;
    let mut pooled: Vec<(f64, bool)> = a.iter().map(|&v| (v, true)).chain(b.iter().map(|&v| (v, false))).collect();
    pooled.sort_by(|x, y| x.0.total_cmp(&y.0));
    let mut w = 0.0;
    let mut ties = 0.0;
    let mut i = 0;
    while i < pooled.len() {
        let mut j = i;
        while j < pooled.len() && pooled[j].0 == pooled[i].0 {
            j += 1;
        }
        let rank = (i + j + 1) as f64 / 2.0;
        w += rank * pooled[i..j].iter().filter(|e| e.1).count() as f64;
        let t = (j - i) as f64;
        ties += t * t * t - t;
        i = j;
    }
    let mean = n0 * (total + 1.0) / 2.0;
    let var = if total > 1.0 {
        n0 * n1 / 12.0 * ((total + 1.0) - ties / (total * (total - 1.0)))
    } else {
        0.0
    };
    if var <= 0.0 {
        return Ok((w, 0.0, 1.0));
    }
    let z = (w - mean) / var.sqrt();
    let p = erfc(z.abs() / std::f64::consts::SQRT_2).clamp(0.0, 1.0);
    Ok((w, z, p))
}

#[derive(Debug, Clone, PartialEq)]
pub enum OutlierRule {
    /// Group sizes from the least deep group upward.
    Sizes(Vec<usize>),
    /// Curves with depth below the threshold are outliers; the deepest
    /// remaining curve is its own group.
    Threshold(f64),
}

#[derive(Debug, Clone, PartialEq)]
pub struct OutlierPartition {
    pub sizes: Vec<usize>,
    /// Group of each curve in input order; 0 is the least deep group.
    pub group: Vec<usize>,
    /// Curve indices by ascending depth.
    pub order: Vec<usize>,
}

/// Splits curves into depth-ranked groups.
pub fn outlier_partition(reports: &[DepthReport], rule: &OutlierRule) -> Result<OutlierPartition> {
    let depths: Vec<f64> = reports.iter().map(|r| r.depth).collect();
    partition_depths(&depths, rule)
}

/// As [`outlier_partition`] on a bare depth vector. Ties keep input order.
pub fn partition_depths(depths: &[f64], rule: &OutlierRule) -> Result<OutlierPartition> {
    let n = depths.len();
    if n == 0 {
        return Err(Error::param("no curves to partition"));
    }
    if depths.iter().any(|d| d.is_nan()) {
        return Err(Error::Numeric("NaN depth".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| depths[i].total_cmp(&depths[j]).then(i.cmp(&j)));
    let sizes = match rule {
        OutlierRule::Sizes(s) => {
            if s.is_empty() || s.iter().sum::<usize>() != n {
                return Err(Error::param(format!("group sizes must sum to {n}")));
            }
            s.clone()
        }
        OutlierRule::Threshold(t) => {
            let out = depths.iter().filter(|&&d| d < *t).count();
            let deepest = usize::from(out < n);
            vec![out, 0, n - out - deepest, deepest]
        }
    };
    let mut group = vec![0; n];
    let mut pos = 0;
    for (g, &s) in sizes.iter().enumerate() {
        for &i in &order[pos..pos + s] {
            group[i] = g;
        }
        pos += s;
    }
    Ok(OutlierPartition { sizes, group, order })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn pt(label: u8, d0: f64, d1: f64) -> DDPoint {
        DDPoint { id: String::new(), label, d0, d1 }
    }

    #[test]
    fn separable_cloud() {
        let pts = vec![pt(0, 0.5, 0.1), pt(0, 0.6, 0.05), pt(0, 0.4, 0.2), pt(1, 0.1, 0.5), pt(1, 0.05, 0.4), pt(1, 0.2, 0.6)];
        let r = dd_linear_classifier(&pts).unwrap();
        assert_eq!(r.training_errors, 0);
        for p in &pts {
            assert_eq!(r.classify(p.d0, p.d1), p.label);
        }
        assert!(r.margin > 0.0);
    }

    #[test]
    fn identical_points_give_majority() {
        let pts = vec![pt(1, 0.3, 0.3), pt(1, 0.3, 0.3), pt(0, 0.3, 0.3)];
        let r = dd_linear_classifier(&pts).unwrap();
        assert_eq!(r.training_errors, 1);
        assert_eq!(r.classify(0.3, 0.3), 1);
    }

    #[test]
    fn rank_sum_ties_and_shift() {
        let a = [0.1, 0.2, 0.3];
        let (w, z, p) = rank_sum(&a, &a).unwrap();
        assert_eq!(w, 10.5);
        assert_eq!(z, 0.0);
        assert_eq!(p, 1.0);
        let b: Vec<f64> = (0..20).map(|i| i as f64).collect();
        let c: Vec<f64> = (0..20).map(|i| 100.0 + i as f64).collect();
        let (_, z, p) = rank_sum(&b, &c).unwrap();
        assert!(z < 0.0 && p < 1e-6);
        let (_, z2, p2) = rank_sum(&c, &b).unwrap();
        assert_eq!(z2, -z);
        assert_eq!(p2, p);
    }

    #[test]
    fn partition_modes() {
        let p = partition_depths(&[0.05, 0.2, 0.9], &OutlierRule::Threshold(0.075)).unwrap();
        assert_eq!(p.sizes, vec![1, 0, 1, 1]);
        assert_eq!(p.group, vec![0, 2, 3]);
        let eq = partition_depths(&[0.5; 4], &OutlierRule::Sizes(vec![1, 1, 1, 1])).unwrap();
        assert_eq!(eq.group, vec![0, 1, 2, 3]);
        assert!(partition_depths(&[0.5; 4], &OutlierRule::Sizes(vec![1, 1])).is_err());
    }
}
