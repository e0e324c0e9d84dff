use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::metric::{distance_profile, Cover, MetricSpace};

/// Default tolerance, relative to `L_*`, under which a sampled space is
/// treated as having the approximate midpoint property.
pub const DEFAULT_AMP_RELATIVE_TOL: f64 = 0.25;

/// Worst midpoint defect `max_{x,y} min_z max(d(x,z), d(z,y)) - d(x,y)/2`.
///
/// The space has the approximate midpoint property at tolerance `eps` iff
/// the defect is at most `eps`.
pub fn midpoint_defect(space: &MetricSpace) -> Result<f64> {
    let n = space.len();
    if n < 2 {
        return Err(Error::TooFewPoints { needed: 2, got: n });
    }
    Ok((0..n)
        .into_par_iter()
        .map(|x| {
            let mut worst = 0.0f64;
            for y in x + 1..n {
                let (_, reach) = best_midpoint(space, x, y);
                worst = worst.max(reach - space.dist(x, y) / 2.0);
            }
            worst
        })
        .reduce(|| 0.0, f64::max))
}

/// The `z` minimizing `max(d(x,z), d(z,y))`, smallest index on ties.
fn best_midpoint(space: &MetricSpace, x: usize, y: usize) -> (usize, f64) {
    let (rx, ry) = (space.row(x), space.row(y));
    let mut best = (x, f64::INFINITY);
    for z in 0..space.len() {
        let reach = rx[z].max(ry[z]);
        if reach < best.1 {
            best = (z, reach);
        }
    }
    best
}

/// A chain `x_0 = source, ..., x_{K+1} = target` whose steps are at most
/// `d(source, target) / (K+1) + epsilon`.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct DiscretePath {
    pub points: Vec<usize>,
    pub epsilon: f64,
    pub k: usize,
}

impl DiscretePath {
    pub fn source(&self) -> usize {
        self.points[0]
    }

    pub fn target(&self) -> usize {
        *self.points.last().unwrap()
    }

    /// Largest consecutive step length.
    pub fn max_step(&self, space: &MetricSpace) -> f64 {
        self.points
            .windows(2)
            .map(|w| space.dist(w[0], w[1]))
            .fold(0.0, f64::max)
    }
}

/// Builds an `eps`-approximate `k`-discrete path by repeated greedy
/// bisection to `2^m >= k + 1` segments, then keeps the points at indices
/// `a_i = ceil(i 2^m / (k+1))`, the smallest with `a_i / 2^m >= i / (k+1)`.
/// The depth `m` grows until the subsampled chain meets the step bound.
///
/// Fails with [`Error::NoPathWithinEps`] rather than backtracking when the
/// greedy choices cannot meet the step bound at any explored depth.
pub fn discrete_path(
    space: &MetricSpace,
    source: usize,
    target: usize,
    k: usize,
    eps: f64,
) -> Result<DiscretePath> {
    let n = space.len();
    for &p in &[source, target] {
        if p >= n {
            return Err(Error::IndexMismatch {
                alpha: "path".into(),
                point: p,
                points: n,
            });
        }
    }
    if !(eps >= 0.0) {
        return Err(Error::BadParameter(format!("epsilon must be >= 0, got {eps}")));
    }
    let total = space.dist(source, target);
    let segments_needed = k + 1;
    let bound = total / segments_needed as f64 + eps;
    let slack = 1e-12 * total.max(f64::MIN_POSITIVE);

    let mut chain = vec![source, target];
    while chain.len() - 1 < segments_needed {
        chain = bisect(space, &chain);
    }
    // Deeper bisection shrinks the rounding in the index subsampling; stop
    // once the chain is much finer than the requested step count.
    let max_segments = (MAX_REFINEMENT * segments_needed).max(2);
    let step = loop {
        let segments = chain.len() - 1;
        let points: Vec<usize> = (0..=segments_needed)
            .map(|i| chain[(i * segments).div_ceil(segments_needed)])
            .collect();
        let step = points
            .windows(2)
            .map(|w| space.dist(w[0], w[1]))
            .fold(0.0, f64::max);
        if step <= bound + slack {
            return Ok(DiscretePath {
                points,
                epsilon: eps,
                k,
            });
        }
        if segments >= max_segments {
            break step;
        }
        chain = bisect(space, &chain);
    };
    Err(Error::NoPathWithinEps {
        source_point: source,
        target,
        k,
        eps,
        step,
        bound,
    })
}

/// Upper limit on `2^m / (K+1)` explored by [`discrete_path`].
const MAX_REFINEMENT: usize = 64;

fn bisect(space: &MetricSpace, chain: &[usize]) -> Vec<usize> {
    let mut refined = Vec::with_capacity(2 * chain.len() - 1);
    for w in chain.windows(2) {
        refined.push(w[0]);
        refined.push(best_midpoint(space, w[0], w[1]).0);
    }
    refined.push(*chain.last().unwrap());
    refined
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "SCREAMING-KEBAB-CASE")]
pub enum AmpStatus {
    /// `min(delta_(1) + delta_(2)) >= 2 L_*` exactly.
    Holds,
    /// Short of `2 L_*` by no more than four times the midpoint defect.
    WithinSlack,
    /// Short by more than the discretization slack although the sample
    /// passes the midpoint tolerance.
    Violated,
    /// The midpoint defect exceeds the tolerance, so the inequality is not
    /// expected to hold.
    NotApplicable,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TopTwoReport {
    /// `delta_(1)(x) >= L_*` at every point.
    pub first_dominates: bool,
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub lebesgue: f64,
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub min_top_two_sum: f64,
    pub argmin: usize,
    /// `2 L_* - min(delta_(1) + delta_(2))`, clamped at zero.
    pub shortfall: f64,
    pub midpoint_defect: f64,
    #[serde(serialize_with = "crate::io::ser_ext")]
    pub amp_tolerance: f64,
    pub status: AmpStatus,
}

/// Top-two check with the default tolerance `DEFAULT_AMP_RELATIVE_TOL * L_*`.
pub fn top_two_bound_check(space: &MetricSpace, cover: &Cover) -> Result<TopTwoReport> {
    top_two_bound_check_with_tol(space, cover, None)
}

pub fn top_two_bound_check_with_tol(
    space: &MetricSpace,
    cover: &Cover,
    amp_tol: Option<f64>,
) -> Result<TopTwoReport> {
    let profile = distance_profile(space, cover)?;
    let n = space.len();
    let lebesgue = (0..n)
        .map(|x| profile.lebesgue_at(x))
        .fold(f64::INFINITY, f64::min);
    let first_dominates = (0..n).all(|x| profile.top_two(x).0 .1 >= lebesgue);
    let (argmin, min_top_two_sum) = (0..n)
        .map(|x| {
            let ((_, a), b) = profile.top_two(x);
            (x, a + b.map_or(0.0, |b| b.1))
        })
        .fold((0, f64::INFINITY), |acc, v| if v.1 < acc.1 { v } else { acc });
    let defect = if n >= 2 { midpoint_defect(space)? } else { 0.0 };
    let amp_tolerance = amp_tol.unwrap_or(DEFAULT_AMP_RELATIVE_TOL * lebesgue);
    let shortfall = if lebesgue.is_finite() {
        (2.0 * lebesgue - min_top_two_sum).max(0.0)
    } else {
        0.0
    };
    let status = if shortfall == 0.0 {
        AmpStatus::Holds
    } else if defect > amp_tolerance {
        AmpStatus::NotApplicable
    } else if shortfall <= 4.0 * defect {
        AmpStatus::WithinSlack
    } else {
        AmpStatus::Violated
    };
    Ok(TopTwoReport {
        first_dominates,
        lebesgue,
        min_top_two_sum,
        argmin,
        shortfall,
        midpoint_defect: defect,
        amp_tolerance,
        status,
    })
}
